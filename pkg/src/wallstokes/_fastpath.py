"""Compiled fast path for the planar three-sphere control fields.

This mirrors the reference implementation in `swimmer` exactly (same
kernels, same balance rows, same residual check) with all the small-array
overhead removed.  It is an internal accelerator: `swimmer.
three_sphere_fields` dispatches here when numba is importable and falls
back to the reference path otherwise.  A unit test pins the two paths
together to machine precision.
"""

import numpy as np

try:
    from numba import njit

    AVAILABLE = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _planar_fields_core(xi1, xi2, x, y, theta, a, mu, wall):
    """Returns (F1, F2, max out-of-plane residual, SA scale)."""
    ct = np.cos(theta)
    st = np.sin(theta)
    pos = np.empty((3, 3))
    pos[0, 0] = x - xi1 * ct
    pos[0, 1] = y - xi1 * st
    pos[0, 2] = 0.0
    pos[1, 0] = x
    pos[1, 1] = y
    pos[1, 2] = 0.0
    pos[2, 0] = x + xi2 * ct
    pos[2, 1] = y + xi2 * st
    pos[2, 2] = 0.0

    jsign = np.array([1.0, -1.0, 1.0])
    pre8 = 1.0 / (8.0 * np.pi * mu)
    pre4 = 1.0 / (4.0 * np.pi * mu)
    drag = 6.0 * np.pi * mu * a

    A = np.eye(9)
    for i in range(3):
        for j in range(3):
            K = np.zeros((3, 3))
            if i != j:
                # free-space Stokeslet
                rx = pos[i, 0] - pos[j, 0]
                ry = pos[i, 1] - pos[j, 1]
                rz = pos[i, 2] - pos[j, 2]
                d = np.sqrt(rx * rx + ry * ry + rz * rz)
                d3 = d * d * d
                r = np.array([rx, ry, rz])
                for al in range(3):
                    for be in range(3):
                        K[al, be] = pre8 * (r[al] * r[be] / d3)
                    K[al, al] += pre8 / d
            if wall:
                # image system at the mirror of sphere j
                y0 = pos[j, 1]
                px = pos[i, 0] - pos[j, 0]
                py = pos[i, 1] + pos[j, 1]
                pz = pos[i, 2] - pos[j, 2]
                dp = np.sqrt(px * px + py * py + pz * pz)
                dp3 = dp * dp * dp
                dp5 = dp3 * dp * dp
                rp = np.array([px, py, pz])
                for al in range(3):
                    for be in range(3):
                        o = rp[al] * rp[be]
                        k1 = -pre8 * o / dp3
                        k2 = -3.0 * pre4 * y0 * y0 * o / dp5
                        t = -3.0 * o * py / dp5
                        if al == be:
                            k1 += -pre8 / dp
                            k2 += pre4 * y0 * y0 / dp3
                            t += py / dp3
                        if al == 1:
                            t -= rp[be] / dp3
                        if be == 1:
                            t += rp[al] / dp3
                        k3 = -pre4 * y0 * t
                        K[al, be] += k1 + (k2 + k3) * jsign[be]
            for al in range(3):
                for be in range(3):
                    A[3 * i + al, 3 * j + be] -= drag * K[al, be]

    # balance rows: force x, force y, force z, torque x, torque y, torque z
    S = np.zeros((6, 9))
    for i in range(3):
        dx = pos[i, 0] - x
        dy = pos[i, 1] - y
        dz = pos[i, 2]
        for al in range(3):
            S[al, 3 * i + al] = 1.0
        S[3, 3 * i + 1] = -dz
        S[3, 3 * i + 2] = dy
        S[4, 3 * i + 0] = dz
        S[4, 3 * i + 2] = -dx
        S[5, 3 * i + 0] = -dy
        S[5, 3 * i + 1] = dx

    T = np.zeros((9, 3))
    U = np.zeros((9, 2))
    fac = np.array([-xi1, 0.0, xi2])
    for i in range(3):
        T[3 * i + 0, 0] = 1.0
        T[3 * i + 1, 1] = 1.0
        T[3 * i + 0, 2] = -fac[i] * st
        T[3 * i + 1, 2] = fac[i] * ct
    U[0, 0] = -ct
    U[1, 0] = -st
    U[6, 1] = ct
    U[7, 1] = st

    SA = S @ A
    scale = max(1.0, np.abs(SA).max())
    planar = (0, 1, 5)
    M = np.empty((3, 3))
    B = np.empty((3, 2))
    SAT = SA @ T
    SAU = SA @ U
    for r in range(3):
        for c in range(3):
            M[r, c] = SAT[planar[r], c]
        for c in range(2):
            B[r, c] = SAU[planar[r], c]
    pdot = np.linalg.solve(M, -B)

    resid = 0.0
    for k in range(2):
        u = T @ pdot[:, k] + U[:, k]
        full = SA @ u
        for r in (2, 3, 4):
            resid = max(resid, abs(full[r]))

    F1 = np.array([1.0, 0.0, pdot[0, 0], pdot[1, 0], pdot[2, 0]])
    F2 = np.array([0.0, 1.0, pdot[0, 1], pdot[1, 1], pdot[2, 1]])
    return F1, F2, resid, scale


def planar_fields(state, params, wall):
    """Fast (F1, F2, residual, scale) for a ThreeSphereState."""
    return _planar_fields_core(
        state.xi1, state.xi2, state.x, state.y, state.theta,
        params.a, params.mu, wall,
    )
