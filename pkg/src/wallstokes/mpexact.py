"""Arbitrary-precision mirror of the planar three-sphere model.

Certifying the asymptotic determinant law requires evaluating a 3 x 3
bracket determinant whose value sits 20+ decades below the bracket
entries; double floats cannot represent that cancellation.  This module
re-implements the planar control fields with mpmath scalars so that
finite-difference brackets (and their determinant) can be computed to
arbitrary precision.  It mirrors `swimmer.three_sphere_fields` exactly
and is pinned against it by a unit test.
"""

import mpmath as mp

_JSIGN = (1, -1, 1)


def _stokeslet(r, mu):
    d = mp.sqrt(r[0] ** 2 + r[1] ** 2 + r[2] ** 2)
    pre = 1 / (8 * mp.pi * mu)
    K = mp.zeros(3)
    for i in range(3):
        for j in range(3):
            K[i, j] = pre * r[i] * r[j] / d**3
        K[i, i] += pre / d
    return K


def _image_sum(rp, y0, mu):
    d = mp.sqrt(rp[0] ** 2 + rp[1] ** 2 + rp[2] ** 2)
    pre8 = 1 / (8 * mp.pi * mu)
    pre4 = 1 / (4 * mp.pi * mu)
    K = mp.zeros(3)
    for i in range(3):
        for j in range(3):
            o = rp[i] * rp[j]
            k1 = -pre8 * o / d**3
            k2 = -3 * pre4 * y0**2 * o / d**5
            t = -3 * o * rp[1] / d**5
            if i == j:
                k1 += -pre8 / d
                k2 += pre4 * y0**2 / d**3
                t += rp[1] / d**3
            if i == 1:
                t -= rp[j] / d**3
            if j == 1:
                t += rp[i] / d**3
            k3 = -pre4 * y0 * t
            K[i, j] = k1 + (k2 + k3) * _JSIGN[j]
    return K


def fields(xi1, xi2, x, y, theta, a, mu=1, wall=True):
    """Planar control fields (F1, F2) as 5-tuples of mpf."""
    xi1, xi2, x, y = mp.mpf(xi1), mp.mpf(xi2), mp.mpf(x), mp.mpf(y)
    theta, a, mu = mp.mpf(theta), mp.mpf(a), mp.mpf(mu)
    ct, st = mp.cos(theta), mp.sin(theta)
    pos = [
        (x - xi1 * ct, y - xi1 * st, mp.mpf(0)),
        (x, y, mp.mpf(0)),
        (x + xi2 * ct, y + xi2 * st, mp.mpf(0)),
    ]
    drag = 6 * mp.pi * mu * a

    A = mp.eye(9)
    for i in range(3):
        for j in range(3):
            blocks = []
            if i != j:
                r = tuple(pos[i][k] - pos[j][k] for k in range(3))
                blocks.append(_stokeslet(r, mu))
            if wall:
                rp = (pos[i][0] - pos[j][0], pos[i][1] + pos[j][1],
                      pos[i][2] - pos[j][2])
                blocks.append(_image_sum(rp, pos[j][1], mu))
            for K in blocks:
                for al in range(3):
                    for be in range(3):
                        A[3 * i + al, 3 * j + be] -= drag * K[al, be]

    S = mp.zeros(6, 9)
    for i in range(3):
        dx = pos[i][0] - x
        dy = pos[i][1] - y
        for al in range(3):
            S[al, 3 * i + al] = 1
        S[3, 3 * i + 2] = dy
        S[4, 3 * i + 2] = -dx
        S[5, 3 * i + 0] = -dy
        S[5, 3 * i + 1] = dx

    T = mp.zeros(9, 3)
    U = mp.zeros(9, 2)
    fac = (-xi1, mp.mpf(0), xi2)
    for i in range(3):
        T[3 * i + 0, 0] = 1
        T[3 * i + 1, 1] = 1
        T[3 * i + 0, 2] = -fac[i] * st
        T[3 * i + 1, 2] = fac[i] * ct
    U[0, 0] = -ct
    U[1, 0] = -st
    U[6, 1] = ct
    U[7, 1] = st

    SA = S * A
    planar = (0, 1, 5)
    SAT = SA * T
    SAU = SA * U
    M = mp.matrix(3)
    B = mp.matrix(3, 2)
    for r in range(3):
        for c in range(3):
            M[r, c] = SAT[planar[r], c]
        for c in range(2):
            B[r, c] = SAU[planar[r], c]
    pdot = mp.lu_solve(M, -B[:, 0])
    qdot = mp.lu_solve(M, -B[:, 1])
    F1 = (mp.mpf(1), mp.mpf(0), pdot[0], pdot[1], pdot[2])
    F2 = (mp.mpf(0), mp.mpf(1), qdot[0], qdot[1], qdot[2])
    return F1, F2


def _field_vec(X, k, a, mu, wall):
    return fields(X[0], X[1], X[2], X[3], X[4], a, mu, wall)[k]


def jacobian(f, X, h):
    """2nd-order central-difference Jacobian; exactness comes from tiny h."""
    n = len(X)
    cols = []
    for k in range(n):
        Xp = list(X)
        Xm = list(X)
        Xp[k] = Xp[k] + h
        Xm[k] = Xm[k] - h
        fp = f(Xp)
        fm = f(Xm)
        cols.append([(fp[i] - fm[i]) / (2 * h) for i in range(n)])
    return cols  # cols[k][i] = dF_i/dX_k


def lie_bracket(f, g, X, h):
    Jg = jacobian(g, X, h)
    Jf = jacobian(f, X, h)
    fX = f(X)
    gX = g(X)
    return [
        sum(Jg[k][i] * fX[k] - Jf[k][i] * gX[k] for k in range(len(X)))
        for i in range(len(X))
    ]


def bracket_triple(xi1, xi2, x, y, theta, a, mu=1, wall=True, rel_step=None):
    """([F1,F2], [F1,[F1,F2]], [F2,[F1,F2]]) at a planar state, high precision.

    `rel_step` is the FD step relative to scale 1 (default 10^(-dps/4)),
    chosen so truncation and roundoff errors are both far below the
    target accuracy at the working precision.
    """
    if rel_step is None:
        rel_step = mp.mpf(10) ** (-(mp.mp.dps // 4))
    h = mp.mpf(rel_step)
    X = [mp.mpf(xi1), mp.mpf(xi2), mp.mpf(x), mp.mpf(y), mp.mpf(theta)]

    def f1(Z):
        return _field_vec(Z, 0, a, mu, wall)

    def f2(Z):
        return _field_vec(Z, 1, a, mu, wall)

    b12 = lie_bracket(f1, f2, X, h)

    def b12f(Z):
        return lie_bracket(f1, f2, Z, h)

    # nested brackets differentiate an already-FD quantity: widen the step
    hh = mp.sqrt(h)
    b112 = lie_bracket(f1, b12f, X, hh)
    b212 = lie_bracket(f2, b12f, X, hh)
    return b12, b112, b212


def bracket_determinant(xi1, xi2, y, theta, a, mu=1):
    """det of the pose components of ([F1,F2], [F1,[F1,F2]], [F2,[F1,F2]])."""
    b12, b112, b212 = bracket_triple(xi1, xi2, 0, y, theta, a, mu)
    M = mp.matrix(3)
    for r, i in enumerate((2, 3, 4)):
        M[r, 0] = b12[i]
        M[r, 1] = b112[i]
        M[r, 2] = b212[i]
    return mp.det(M)
