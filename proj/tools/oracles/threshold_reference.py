#!/usr/bin/env python3
"""Frozen scalars for the analytic-threshold tests.

Everything here is computed with mpmath at 30 digits, independently of the
C++ code paths: the incomplete elliptic E by a fixed-grid Simpson rule, the
switching-time integral by direct quadrature, and the stability-matrix
quantities from their definitions (eigen-solve, not the printed radicals).
"""
import mpmath as mp

mp.mp.dps = 30


def simpson_E(x, p, n=1_000_000):
    # independent of mpmath.ellipe on purpose
    h = x / n
    s = mp.mpf(0)
    f = lambda t: mp.sqrt(1 - p * mp.sin(t) ** 2)
    for i in range(0, n + 1):
        w = 1 if i in (0, n) else (4 if i % 2 else 2)
        s += w * f(i * h)
    return s * h / 3


def ucrit_sym(alpha, g1, g2):
    return alpha * (g2 - g1) / (2 * mp.sqrt(1 + alpha**2))


def T_sym(U, alpha, g1, g2):
    uc = ucrit_sym(alpha, g1, g2)
    return mp.pi / (mp.sqrt(1 + alpha**2) * mp.sqrt(U**2 - uc**2))


def T_sym_quad(U, alpha, g1, g2):
    f = lambda th: 1 / (-alpha * (g2 - g1) * mp.sin(th) * mp.cos(th) + U * mp.sqrt(1 + alpha**2))
    return mp.quad(f, [0, mp.pi])


def stability(alpha, g1, g2, g3):
    dm, dp = g2 - g1, g3 - g1
    A = mp.matrix([[-alpha * dm, -dp], [dm, -alpha * dp]])
    tr, det = A[0, 0] + A[1, 1], mp.det(A)
    disc = tr**2 - 4 * det
    AtA = A.T * A
    sv = mp.sqrt(max(mp.eig(AtA)[0], key=lambda z: mp.re(z)).real)
    return A, tr, det, disc, sv


def u_stab(alpha, g1, g2, g3):
    _, tr, det, disc, nA = stability(alpha, g1, g2, g3)
    dp = g3 - g1
    if disc > 0:
        lam = (tr + mp.sqrt(disc)) / 2
        a = lam**2 / (3 * nA * (1 + abs(alpha)))
    else:
        a = tr**2 / (12 * nA * (1 + abs(alpha)))
    x1 = min(mp.mpf(1), mp.sqrt(a / (3 * dp)))
    return a * x1 - dp * x1**3


if __name__ == "__main__":
    p = mp.mpf('0.5')
    print("E(pi/2, 0.5) simpson :", mp.nstr(simpson_E(mp.pi / 2, p, 200_000), 20))
    print("E(pi/2, 0.5) mpmath  :", mp.nstr(mp.ellipe(mp.pi / 2, p), 20))
    print("E(1.0, 0.8) simpson  :", mp.nstr(simpson_E(mp.mpf(1), mp.mpf('0.8'), 200_000), 20))
    print("E(1.0, 0.8) mpmath   :", mp.nstr(mp.ellipe(mp.mpf(1), mp.mpf('0.8')), 20))

    al = mp.mpf('0.6')
    print("ucrit sym (0.1,0.2,0.2):", mp.nstr(ucrit_sym(al, mp.mpf('0.1'), mp.mpf('0.2')), 20))
    print("T(0.2) closed          :", mp.nstr(T_sym(mp.mpf('0.2'), al, mp.mpf('0.1'), mp.mpf('0.2')), 20))
    print("T(0.2) quadrature      :", mp.nstr(T_sym_quad(mp.mpf('0.2'), al, mp.mpf('0.1'), mp.mpf('0.2')), 20))
    print("T sphere U=1           :", mp.nstr(mp.pi / mp.sqrt(1 + al**2), 20))

    for g in [(mp.mpf('0.2'), mp.mpf('0.5'), mp.mpf('1.0')),
              (mp.mpf('0.1'), mp.mpf('0.2'), mp.mpf('0.2'))]:
        A, tr, det, disc, nA = stability(al, *g)
        print(f"gamma {tuple(float(x) for x in g)}: tr {mp.nstr(tr,12)} det {mp.nstr(det,12)} "
              f"disc {mp.nstr(disc,12)} |A|2 {mp.nstr(nA,20)} "
              f"sqrt(1+a^2)*dgp {mp.nstr(mp.sqrt(1+al**2)*(g[2]-g[0]),20)}")
        print("   u_stab:", mp.nstr(u_stab(al, *g), 20))

    # Positive-discriminant branch: strong asymmetry + large alpha.
    al3 = mp.mpf(3)
    g = (mp.mpf(0), mp.mpf('0.1'), mp.mpf('1.0'))
    A, tr, det, disc, nA = stability(al3, *g)
    lam = (tr + mp.sqrt(disc)) / 2
    print(f"alpha=3 gamma {tuple(float(x) for x in g)}: tr {mp.nstr(tr,12)} det {mp.nstr(det,12)} "
          f"disc {mp.nstr(disc,20)} |A|2 {mp.nstr(nA,20)} lam+ {mp.nstr(lam,20)}")
    print("   u_stab (disc>0):", mp.nstr(u_stab(al3, *g), 20))

    # Planar crossing: T_eps = int_0^pi dtheta / f_eps(theta) for the
    # in-plane profile f_eps = k(-alpha sin 2th + sqrt(1+eps+(alpha^2-1)sin^2 2th)),
    # and the analytic supremum of the admissibility integrand
    # k^2 (1+eps+alpha^2 s^2)/(1+alpha^2) attained at s = sin 2th = 1.
    g1, g2 = mp.mpf('0.2'), mp.mpf('0.5')
    k = (g2 - g1) / 2
    for eps in [mp.mpf('0.5'), mp.mpf('0.1'), mp.mpf('0.02')]:
        f = lambda th: k * (-al * mp.sin(2 * th)
                            + mp.sqrt(1 + eps + (al**2 - 1) * mp.sin(2 * th) ** 2))
        T = mp.quad(lambda th: 1 / f(th), [0, mp.pi / 4, mp.pi / 2, 3 * mp.pi / 4, mp.pi])
        supF = k**2 * (1 + eps + al**2) / (1 + al**2)
        bound = k**2 * (1 + eps)
        print(f"eps {float(eps)}: T {mp.nstr(T, 20)}  T*eps {mp.nstr(T*eps, 12)}  "
              f"supF {mp.nstr(supF, 20)}  bound {mp.nstr(bound, 12)}")
