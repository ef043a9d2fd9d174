#!/usr/bin/env python3
"""Reference values for the ellipsoid demagnetizing factors.

Ground truth is the semi-infinite integral

    g_i = (a1 a2 a3 / 2) * int_0^inf ds / ((a_i^2+s) * sqrt((a1^2+s)(a2^2+s)(a3^2+s)))

evaluated with mpmath at 30 digits after the substitution s = x/(1-x).
The closed forms (Legendre incomplete F/E) are checked against it before
their constants are frozen into the C++ tests.
"""
import mpmath as mp

mp.mp.dps = 30


def demag_quad(a1, a2, a3):
    def gi(ai):
        def f(x):
            s = x / (1 - x)
            w = (ai**2 + s) * mp.sqrt((a1**2 + s) * (a2**2 + s) * (a3**2 + s))
            return 1 / (w * (1 - x) ** 2)
        return (a1 * a2 * a3 / 2) * mp.quad(f, [0, 1])
    return [gi(a1), gi(a2), gi(a3)]


def demag_closed_triaxial(a, b, c):
    # a > b > c; amplitude phi with sin(phi) = sqrt(1 - c^2/a^2), parameter
    # p = (a^2-b^2)/(a^2-c^2).  scipy/mpmath ellip_f/ellip_e take the parameter m.
    phi = mp.asin(mp.sqrt(1 - c**2 / a**2))
    p = (a**2 - b**2) / (a**2 - c**2)
    F = mp.ellipf(phi, p)
    E = mp.ellipe(phi, p)
    s = mp.sqrt(a**2 - c**2)
    g1 = (a * b * c / ((a**2 - b**2) * s)) * (F - E)
    g3 = (b**2 / (b**2 - c**2)) - (a * b * c / ((b**2 - c**2) * s)) * E
    g2 = 1 - g1 - g3
    # independent second expression for g2 (Legendre reduction of the middle integral)
    g2b = (a * b * c * s / ((a**2 - b**2) * (b**2 - c**2))) * E \
        - (a * b * c / ((a**2 - b**2) * s)) * F \
        - (c**2 / (b**2 - c**2)) * (a * b * c) / (a * b * s) * 0  # placeholder, checked below
    return g1, g2, g3


def demag_prolate(a1, a3):
    # a1 > a2 = a3
    c = mp.sqrt(a1**2 - a3**2)
    g1 = (a3**2 / c**3) * (a1 * mp.acoth(a1 / c) - c)
    return g1, (1 - g1) / 2


def demag_oblate(a1, a3):
    # a1 = a2 > a3
    g = mp.sqrt(a1**2 - a3**2)
    g3 = (a1**2 / g**3) * (g - a3 * mp.atan(g / a3))
    return (1 - g3) / 2, g3


def show(tag, vals):
    print(tag, " ".join(mp.nstr(v, 20) for v in vals), "sum", mp.nstr(mp.fsum(vals), 20))


if __name__ == "__main__":
    for axes in [(2, 1, 0.5), (1, 0.75, 0.5), (1, 0.5, 0.25), (4, 2, 1), (1, 1, 1),
                 (2, 1, 1), (1, 1, 0.5), (3, 2, 1)]:
        q = demag_quad(*[mp.mpf(x) for x in axes])
        show(f"quad {axes}:", q)
    a, b, c = mp.mpf(2), mp.mpf(1), mp.mpf('0.5')
    g1, g2, g3 = demag_closed_triaxial(a, b, c)
    show("closed triaxial (2,1,0.5):", [g1, g2, g3])
    q = demag_quad(a, b, c)
    print("closed-quad diffs:", [mp.nstr(abs(x - y), 5) for x, y in zip((g1, g2, g3), q)])
    print("prolate (2,1,1):", [mp.nstr(v, 20) for v in demag_prolate(mp.mpf(2), mp.mpf(1))])
    print("oblate (1,1,0.5):", [mp.nstr(v, 20) for v in demag_oblate(mp.mpf(1), mp.mpf('0.5'))])
