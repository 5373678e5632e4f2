"""Fundamental solutions of the Stokes equations in the half space y > 0.

The wall is the plane y = 0 and the fluid fills y > 0; the wall-normal
direction is component index 1 throughout.  The half-space Green tensor is
the free-space Stokeslet plus three image singularities (mirror Stokeslet,
potential doublet, Stokeslet doublet) placed at the point mirrored through
the wall, so that the velocity of a point force vanishes identically on
the wall plane.

All kernels broadcast over leading axes: points may be arrays of shape
(..., 3) and the returned tensors have shape (..., 3, 3).
"""

import numpy as np

# wall-normal component of (x, y, z)
WALL_AXIS = 1

# evaluation closer than this to a singular point is an error, not a big number
SINGULARITY_RADIUS = 1e-12

_ID3 = np.eye(3)
# sign (1 - 2*delta_{j,wall}) applied to the force index of the image doublets
_JSIGN = np.array([1.0, -1.0, 1.0])


class SingularityError(ValueError):
    """Kernel evaluated at (or numerically on top of) its singular point."""


class HalfSpaceDomainError(ValueError):
    """A source point lies on or below the wall plane y = 0."""


def stokeslet(r, mu=1.0):
    """Free-space Stokeslet G(r) = (1/8 pi mu) (Id/|r| + r x r / |r|^3).

    Parameters
    ----------
    r : array_like, shape (..., 3)
        Separation vector(s), must be nonzero.
    mu : float
        Dynamic viscosity.

    Returns
    -------
    ndarray, shape (..., 3, 3)
    """
    r = np.asarray(r, dtype=float)
    d = np.linalg.norm(r, axis=-1)
    if np.any(d < SINGULARITY_RADIUS):
        raise SingularityError("stokeslet evaluated at zero separation")
    d = d[..., None, None]
    outer = r[..., :, None] * r[..., None, :]
    return (_ID3 / d + outer / d**3) / (8.0 * np.pi * mu)


def _image_sum(rp, y0, mu):
    """Sum of the three image kernels for separation rp = r - r0_mirror.

    y0 is the source height above the wall; rp must be nonzero.
    """
    rp = np.asarray(rp, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    d = np.linalg.norm(rp, axis=-1)
    if np.any(d < SINGULARITY_RADIUS):
        raise SingularityError("image kernel evaluated at zero separation")
    d = d[..., None, None]
    outer = rp[..., :, None] * rp[..., None, :]
    pref = 1.0 / (4.0 * np.pi * mu)
    y0_ = y0[..., None, None]

    # mirror Stokeslet
    k1 = -(_ID3 / d + outer / d**3) / (8.0 * np.pi * mu)

    # potential doublet, with strength sign flipped for wall-normal forces
    doublet = _ID3 / d**3 - 3.0 * outer / d**5
    k2 = pref * y0_**2 * doublet * _JSIGN

    # Stokeslet doublet:
    # t_ij = rp_y d_ij/|rp|^3 - rp_j d_{i,y}/|rp|^3
    #        + rp_i d_{j,y}/|rp|^3 - 3 rp_i rp_j rp_y/|rp|^5
    rpy = rp[..., WALL_AXIS][..., None, None]
    t = rpy * _ID3 / d**3
    t = t - rp[..., None, :] / d**3 * _ID3[:, WALL_AXIS][:, None]
    t = t + rp[..., :, None] / d**3 * _ID3[WALL_AXIS, :][None, :]
    t = t - 3.0 * outer * rpy / d**5
    k3 = -pref * y0_ * t * _JSIGN
    return k1 + k2 + k3


def _check_source(r0):
    r0 = np.asarray(r0, dtype=float)
    if np.any(r0[..., WALL_AXIS] <= 0.0):
        raise HalfSpaceDomainError("source point must lie strictly above the wall")
    return r0


def blake_tensor(r, r0, mu=1.0):
    """Half-space Green tensor K(r, r0) for a point force at r0, wall at y = 0.

    K = G(r - r0) + images evaluated at r' = r - r0_mirror where
    r0_mirror = (x0, -y0, z0).  K . f is the fluid velocity at r; it
    vanishes for r on the wall plane.

    Parameters
    ----------
    r : array_like, shape (..., 3)
        Evaluation point(s); y >= 0 and distinct from r0.
    r0 : array_like, shape (..., 3)
        Source point(s); y > 0.
    mu : float
        Dynamic viscosity.
    """
    r = np.asarray(r, dtype=float)
    r0 = _check_source(r0)
    mirror = r0.copy()
    mirror[..., WALL_AXIS] = -mirror[..., WALL_AXIS]
    return stokeslet(r - r0, mu) + _image_sum(r - mirror, r0[..., WALL_AXIS], mu)


def self_image(r0, mu=1.0):
    """Image part of the Green tensor evaluated back at the source point.

    This is K1 + K2 + K3 at r = r0 (separation from the mirror point is
    (0, 2 y0, 0)), which is finite and gives the leading wall correction
    to a single sphere's drag.
    """
    r0 = _check_source(r0)
    y0 = r0[..., WALL_AXIS]
    rp = np.zeros(np.shape(r0))
    rp[..., WALL_AXIS] = 2.0 * y0
    return _image_sum(rp, y0, mu)


def point_force_velocity(sources, point, mu=1.0):
    """Velocity at `point` induced by point forces in the half space.

    Parameters
    ----------
    sources : sequence of (position, force) pairs
        Positions must lie strictly above the wall.
    point : array_like, shape (3,)
        Evaluation point, on or above the wall, distinct from all sources.

    Returns
    -------
    ndarray, shape (3,)
    """
    point = np.asarray(point, dtype=float)
    u = np.zeros(3)
    for pos, f in sources:
        u = u + blake_tensor(point, pos, mu) @ np.asarray(f, dtype=float)
    return u
