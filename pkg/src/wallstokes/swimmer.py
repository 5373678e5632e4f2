"""Sphere-assembly swimmers and their control vector fields.

Two swimmers: three collinear spheres confined to the vertical plane z = 0
(state (xi1, xi2, x, y, theta), tangent dimension 5) and a tetrahedral
four-sphere assembly free in the half space (state (xi1..xi4, c, quat),
tangent dimension 10).

The leading-order hydrodynamics treats every sphere as a point force with
Stokes drag 6 pi mu a, corrected by the pairwise half-space Green tensor
and the self-image of each sphere (grand resistance matrix A).  The
control fields are obtained by imposing zero total force and torque on
the assembly for each unit rate of shape change.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _fastpath, greens

# strict-inequality margin for overlap / clearance guards, relative to a
GUARD_MARGIN = 1e-9

# residual threshold for balance rows that must vanish by symmetry
RESIDUAL_TOL = 1e-10

# canonical tetrahedron arm directions (rows), unit length
TETRA_DIRS = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / np.sqrt(3.0)


class ConfigurationError(ValueError):
    """Geometrically invalid configuration (overlap, wall contact, bad arms)."""


class DegenerateConfigurationError(np.linalg.LinAlgError):
    """The self-propulsion balance system is singular at this configuration."""


@dataclass(frozen=True)
class SwimmerParams:
    """Sphere radius and fluid viscosity."""

    a: float
    mu: float = 1.0

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("sphere radius must be positive")
        if self.mu <= 0:
            raise ValueError("viscosity must be positive")


@dataclass(frozen=True)
class ThreeSphereState:
    """Planar swimmer state: arm lengths, center-sphere position, heading."""

    xi1: float
    xi2: float
    x: float
    y: float
    theta: float

    def as_array(self):
        return np.array([self.xi1, self.xi2, self.x, self.y, self.theta])

    @staticmethod
    def from_array(v):
        return ThreeSphereState(*(float(c) for c in v))


@dataclass(frozen=True)
class FourSphereState:
    """Tetrahedral swimmer state: four arm lengths, center, orientation.

    `quat` is a unit quaternion (w, x, y, z); it is renormalized whenever a
    state is built from raw numbers.
    """

    xi: tuple
    c: tuple
    quat: tuple = (1.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        q = np.array(self.quat, dtype=float)
        n = np.linalg.norm(q)
        if not np.isfinite(n) or n < 1e-12:
            raise ValueError("quaternion must be normalizable")
        object.__setattr__(self, "quat", tuple(q / n))

    def rotation(self):
        return quat_to_matrix(np.array(self.quat))

    def as_array(self):
        return np.concatenate([self.xi, self.c, self.quat])

    @staticmethod
    def from_array(v):
        v = np.asarray(v, dtype=float)
        return FourSphereState(xi=tuple(v[:4]), c=tuple(v[4:7]), quat=tuple(v[7:11]))


def quat_to_matrix(q):
    """Rotation matrix of a unit quaternion (w, x, y, z)."""
    w, x, y, z = q / np.linalg.norm(q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quat_multiply(p, q):
    pw, px, py, pz = p
    qw, qx, qy, qz = q
    return np.array(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ]
    )


def heading(theta):
    """Unit vector along the three-sphere axis."""
    return np.array([np.cos(theta), np.sin(theta), 0.0])


def three_sphere_positions(state):
    """Sphere centers (3, 3): x1 = c - xi1 e_theta, x2 = c, x3 = c + xi2 e_theta."""
    e = heading(state.theta)
    c = np.array([state.x, state.y, 0.0])
    return np.stack([c - state.xi1 * e, c, c + state.xi2 * e])


def four_sphere_positions(state):
    """Sphere centers (4, 3): x_i = c + xi_i R t_i."""
    rot = state.rotation()
    c = np.asarray(state.c)
    arms = np.asarray(state.xi)[:, None] * (TETRA_DIRS @ rot.T)
    return c + arms


def check_three_sphere(state, params):
    """List of admissibility violations (empty list means admissible)."""
    a = params.a
    out = []
    margin = GUARD_MARGIN * a
    if not state.xi1 > 2 * a + margin:
        out.append(f"arm 1 too short: xi1 = {state.xi1} <= 2a = {2 * a}")
    if not state.xi2 > 2 * a + margin:
        out.append(f"arm 2 too short: xi2 = {state.xi2} <= 2a = {2 * a}")
    if not np.isfinite(state.as_array()).all():
        out.append("non-finite state component")
        return out
    for i, pos in enumerate(three_sphere_positions(state)):
        if not pos[greens.WALL_AXIS] > a + margin:
            out.append(f"sphere {i + 1} touches the wall: y = {pos[greens.WALL_AXIS]} <= a")
    return out


def check_four_sphere(state, params):
    a = params.a
    out = []
    margin = GUARD_MARGIN * a
    lower = np.sqrt(1.5) * a
    for i, xi in enumerate(state.xi):
        if not xi > lower + margin:
            out.append(f"arm {i + 1} too short: xi = {xi} <= sqrt(3/2) a = {lower}")
    pos = four_sphere_positions(state)
    for i in range(4):
        if not pos[i, greens.WALL_AXIS] > a + margin:
            out.append(f"sphere {i + 1} touches the wall: y = {pos[i, greens.WALL_AXIS]} <= a")
    for i in range(4):
        for j in range(i + 1, 4):
            d = np.linalg.norm(pos[i] - pos[j])
            if not d > 2 * a + margin:
                out.append(f"spheres {i + 1} and {j + 1} overlap: distance {d} <= 2a")
    return out


def assemble(positions, params, wall=True):
    """Grand resistance matrix A (3N x 3N) for point-force spheres.

    Diagonal blocks Id - 6 pi mu a * self_image(x_i) (wall mode) or Id;
    off-diagonal blocks -6 pi mu a K(x_i, x_j) (wall) or -6 pi mu a
    G(x_i - x_j) (free space).
    """
    pos = np.asarray(positions, dtype=float)
    n = len(pos)
    a, mu = params.a, params.mu

    # all pair separations at once; kernels broadcast over leading axes
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    off = ~np.eye(n, dtype=bool)
    if np.any(dist[off] < 2 * a):
        i, j = np.argwhere(off & (dist < 2 * a))[0]
        raise ConfigurationError(f"spheres {i} and {j} overlap")

    # free-space Stokeslet for i != j (diagonal masked with a dummy
    # separation, then zeroed)
    safe = diff + np.eye(n)[..., None] * np.array([1.0, 0.0, 0.0])
    G = greens.stokeslet(safe, mu)
    G[np.eye(n, dtype=bool)] = 0.0

    K = G
    if wall:
        if np.any(pos[:, greens.WALL_AXIS] <= 0.0):
            raise greens.HalfSpaceDomainError(
                "source point must lie strictly above the wall"
            )
        # image part is regular on the diagonal and equals self_image there
        mirror = pos.copy()
        mirror[:, greens.WALL_AXIS] = -mirror[:, greens.WALL_AXIS]
        rp = pos[:, None, :] - mirror[None, :, :]
        y0 = np.broadcast_to(pos[None, :, greens.WALL_AXIS], (n, n))
        K = K + greens._image_sum(rp, y0, mu)

    drag = 6.0 * np.pi * mu * a
    # scatter the (n, n, 3, 3) block array into the (3n, 3n) matrix
    A = np.eye(3 * n) - drag * K.transpose(0, 2, 1, 3).reshape(3 * n, 3 * n)
    return A


def _cross_matrix(v):
    return np.array(
        [[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]], dtype=float
    )


def balance_matrix(positions, ref):
    """Force/torque balance matrix S (6 x 3N); torques taken about `ref`."""
    pos = np.asarray(positions, dtype=float)
    n = len(pos)
    S = np.zeros((6, 3 * n))
    for i in range(n):
        S[:3, 3 * i : 3 * i + 3] = np.eye(3)
        S[3:, 3 * i : 3 * i + 3] = _cross_matrix(pos[i] - ref)
    return S


@dataclass
class ResistanceAssembly:
    """Resistance matrix plus kinematic Jacobians for one configuration."""

    A: np.ndarray
    S: np.ndarray
    T: np.ndarray
    U: np.ndarray
    positions: np.ndarray = field(default=None)


def three_sphere_assembly(state, params, wall=True):
    """Assemble A, S, T, U for the planar swimmer (torques about the center)."""
    pos = three_sphere_positions(state)
    e = heading(state.theta)
    eperp = np.array([-np.sin(state.theta), np.cos(state.theta), 0.0])
    A = assemble(pos, params, wall=wall)
    S = balance_matrix(pos, np.array([state.x, state.y, 0.0]))
    # sphere velocities: u_i = (xdot, ydot) + thetadot * d(pos_i)/dtheta
    #                        + U . xidot
    T = np.zeros((9, 3))
    U = np.zeros((9, 2))
    for i, fac in enumerate((-state.xi1, 0.0, state.xi2)):
        T[3 * i : 3 * i + 3, 0] = [1.0, 0.0, 0.0]
        T[3 * i : 3 * i + 3, 1] = [0.0, 1.0, 0.0]
        T[3 * i : 3 * i + 3, 2] = fac * eperp
    U[0:3, 0] = -e
    U[6:9, 1] = e
    return ResistanceAssembly(A=A, S=S, T=T, U=U, positions=pos)


# balance rows solved for the planar swimmer: total force x, total force y,
# total torque z; the remaining rows vanish by symmetry and are checked.
_PLANAR_ROWS = (0, 1, 5)
_OUT_OF_PLANE_ROWS = (2, 3, 4)


def three_sphere_fields(state, params, wall=True, rotlet=False, fast=None):
    """Control vector fields F1, F2 at a planar state.

    Each field is the 5-vector (xidot1, xidot2, xdot, ydot, thetadot)
    produced by a unit rate of the corresponding arm, under zero total
    hydrodynamic force and torque.

    `rotlet` adds the higher-order O(a^3) sphere-spin torque to the
    torque balance; it is excluded from the leading-order model.
    `fast` selects the compiled fast path (default: use it if available);
    both paths produce identical results to machine precision.
    """
    bad = check_three_sphere(state, params)
    if bad:
        raise ConfigurationError("; ".join(bad))
    if fast is None:
        fast = _fastpath.AVAILABLE
    if fast and not rotlet and _fastpath.AVAILABLE:
        try:
            F1, F2, resid, scale = _fastpath.planar_fields(state, params, wall)
        except Exception as exc:
            raise DegenerateConfigurationError(
                "singular in-plane balance system"
            ) from exc
        if not (np.isfinite(F1).all() and np.isfinite(F2).all()):
            raise DegenerateConfigurationError("singular in-plane balance system")
        if resid > RESIDUAL_TOL * scale:
            raise DegenerateConfigurationError(
                "out-of-plane balance residual exceeds tolerance"
            )
        return F1, F2
    asm = three_sphere_assembly(state, params, wall=wall)
    SA = asm.S @ asm.A
    M = (SA @ asm.T)[_PLANAR_ROWS, :]
    if rotlet:
        # each sphere spinning at thetadot contributes torque 8 pi mu a^3/3;
        # expressed in units of the Stokes drag 6 pi mu a used in S A u
        M[2, 2] += 3 * (4.0 / 9.0) * params.a**2
    B = (SA @ asm.U)[_PLANAR_ROWS, :]
    try:
        pdot = np.linalg.solve(M, -B)
    except np.linalg.LinAlgError as exc:
        raise DegenerateConfigurationError(
            "singular in-plane balance system"
        ) from exc
    fields = []
    scale = max(1.0, np.abs(SA).max())
    for k in range(2):
        u = asm.T @ pdot[:, k] + asm.U[:, k]
        resid = SA @ u
        if np.max(np.abs(resid[list(_OUT_OF_PLANE_ROWS)])) > RESIDUAL_TOL * scale:
            raise DegenerateConfigurationError(
                "out-of-plane balance residual exceeds tolerance"
            )
        fields.append(np.array([1.0 - k, float(k), *pdot[:, k]]))
    return tuple(fields)


def four_sphere_assembly(state, params, wall=True, ref=None):
    """Assemble A, S, T, U for the tetrahedral swimmer.

    Pose rates are (cdot, omega) with omega the body angular velocity;
    torques are taken about `ref` (defaults to the center c).
    """
    pos = four_sphere_positions(state)
    rot = state.rotation()
    c = np.asarray(state.c)
    if ref is None:
        ref = c
    A = assemble(pos, params, wall=wall)
    S = balance_matrix(pos, ref)
    T = np.zeros((12, 6))
    U = np.zeros((12, 4))
    for i in range(4):
        T[3 * i : 3 * i + 3, :3] = np.eye(3)
        # u_i = cdot + (R omega_body) x (x_i - c)
        T[3 * i : 3 * i + 3, 3:] = -_cross_matrix(pos[i] - c) @ rot
        U[3 * i : 3 * i + 3, i] = rot @ TETRA_DIRS[i]
    return ResistanceAssembly(A=A, S=S, T=T, U=U, positions=pos)


def four_sphere_fields(state, params, wall=True, ref=None):
    """Control vector fields F1..F4 at a tetrahedral state.

    Each field is the 10-vector (xidot(4), cdot(3), omega_body(3)) produced
    by a unit rate of the corresponding arm under zero total force/torque.
    """
    bad = check_four_sphere(state, params)
    if bad:
        raise ConfigurationError("; ".join(bad))
    asm = four_sphere_assembly(state, params, wall=wall, ref=ref)
    SA = asm.S @ asm.A
    M = SA @ asm.T
    B = SA @ asm.U
    try:
        pdot = np.linalg.solve(M, -B)
    except np.linalg.LinAlgError as exc:
        raise DegenerateConfigurationError("singular balance system") from exc
    fields = []
    for k in range(4):
        shape = np.zeros(4)
        shape[k] = 1.0
        fields.append(np.concatenate([shape, pdot[:, k]]))
    return tuple(fields)
