"""Closed-form asymptotic expansions of the planar swimmer's control fields.

These are direct transcriptions of the small-radius / large-height
expansions: field components to order a/y^4, the first and second Lie
brackets to the same order, and the leading coefficients of the
controllability determinant.  One canonical code path per coefficient
function; numeric cross-checks against the resistance-matrix fields are
the defense against transcription slips.

Every function accepts floats or mpmath numbers, so the determinant law
(whose leading term scales like 1/y^9) can be checked in extended
precision.
"""

import math
from dataclasses import dataclass

try:
    import mpmath as _mp
except ImportError:  # pragma: no cover
    _mp = None


def _cos(x):
    if _mp is not None and isinstance(x, _mp.mpf):
        return _mp.cos(x)
    return math.cos(x)


def _sin(x):
    if _mp is not None and isinstance(x, _mp.mpf):
        return _mp.sin(x)
    return math.sin(x)


# -- coefficient functions of the field expansion ---------------------------

def k3_1(x1, x2, theta):
    num = x2**2 * x1**2 - x2**3 * x1 - x2**4 + 2 * x1**3 * x2 + 2 * x1**4
    den = (x2**2 + x1 * x2 + x1**2) * x1 * x2 * (x1 + x2)
    return num / den


def k3_2(x1, x2, theta):
    c2 = _cos(theta) ** 2
    c4 = c2 * c2
    return (-210 * x1**2 * c2 + 12 * c4 * x1**2 + 184 * x1**2 + 24 * c2 * x1 * x2
            - 32 * x1 * x2 - 6 * c4 * x1 * x2 - 92 * x2**2 + 105 * x2**2 * c2
            - 6 * c4 * x2**2)


def k3_3(x1, x2, theta):
    c2 = _cos(theta) ** 2
    c4 = c2 * c2
    num = (12 * c4 * x2**5 + 24 * x1**5 * c4 - 168 * x2**5 * c2 - 336 * x1**5 * c2
           + 112 * x2**5 + 72 * x1 * x2**4 - 176 * x1**2 * x2**3 - 136 * x1**3 * x2**2
           + 224 * x1**5 - 156 * x1**3 * x2**2 * c2 - 24 * x1**2 * x2**3 * c2
           - 240 * x1**4 * x2 * c2 + 48 * x1**4 * x2 - 156 * x1 * x2**4 * c2
           - 24 * c4 * x1**2 * x2**3 + 9 * c4 * x1 * x2**4 - 21 * x1**3 * c4 * x2**2)
    return num / (x2**2 + x1 * x2 + x1**2)


def k4_1(x1, x2, theta):
    return k3_1(x1, x2, theta)


def k4_2(x1, x2, theta):
    c2 = _cos(theta) ** 2
    return 6 * c2 * x1 + 3 * c2 * x2 - 4 * x1 - 2 * x2


def k4_3(x1, x2, theta):
    c2 = _cos(theta) ** 2
    c4 = c2 * c2
    return (-132 * x1**2 * c2 + 6 * c4 * x1**2 + 56 * x1**2 + 12 * c2 * x1 * x2
            - 16 * x1 * x2 - 3 * c4 * x1 * x2 - 28 * x2**2 + 66 * x2**2 * c2
            - 3 * c4 * x2**2)


def k4_4(x1, x2, theta):
    c2 = _cos(theta) ** 2
    c4 = c2 * c2
    c6 = c4 * c2
    num = (-210 * c4 * x2**5 - 420 * x1**5 * c4 + 232 * x2**5 * c2
           + 24 * c6 * x1**5 - 64 * x2**5 + 12 * c6 * x2**5 - 96 * x1 * x2**4
           - 64 * x1**2 * x2**3 - 128 * x1**5 + 104 * x1**3 * x2**2 * c2
           - 56 * x1**2 * x2**3 * c2 - 96 * x1**4 * x2 + 216 * x1 * x2**4 * c2
           - 66 * c4 * x1**2 * x2**3 - 318 * x1**4 * c4 * x2 - 240 * x1**3 * c4 * x2**2
           - 24 * c6 * x1**2 * x2**3 - 21 * c6 * x1**3 * x2**2 + 464 * x1**5 * c2
           - 128 * x1**3 * x2**2 + 264 * x1**4 * x2 * c2 - 204 * c4 * x1 * x2**4
           + 9 * c6 * x1 * x2**4)
    return num / (512 * (x2**2 + x1 * x2 + x1**2))


def k5_1(x1, x2, theta):
    c2 = _cos(theta) ** 2
    return -8 * x1 - 4 * x2 + 2 * c2 * x1 + c2 * x2


def k5_2(x1, x2, theta):
    c2 = _cos(theta) ** 2
    c4 = c2 * c2
    num = (20 * c2 * x2**4 - 40 * c2 * x1**4 - 4 * c4 * x2**4 + 8 * x1**4 * c4
           - 40 * x2**3 * x1 - 8 * x2**2 * x1**2 + 32 * x1**3 * x2 - 16 * x2**4
           + 32 * x2**3 * c2 * x1 - 7 * c4 * x2**3 * x1 + c4 * x1**2 * x2**2
           - 40 * c2 * x1**3 * x2 + 8 * x1**3 * c4 * x2 + 32 * x1**4
           - 8 * x2**2 * x1**2 * c2)
    return num / (x2**2 + x1 * x2 + x1**2)


@dataclass
class SeriesFieldSample:
    """Truncated field values plus the orders retained.

    `values` is the 5-component tangent vector; the shape components are
    exact, the pose components carry O(a^2) and O(a/y^5) remainders.
    """

    values: tuple
    a_orders: tuple = (0, 1)
    y_orders: tuple = (0, 2, 3, 4)


def _field1_components(x1, x2, y, theta, a):
    c = _cos(theta)
    s = _sin(theta)
    f3 = (c / 3 + a / 6 * c * k3_1(x1, x2, theta)
          + 3 * a / (16 * y**2) * s * c * (x2 + 2 * x1)
          + a / (384 * y**3) * c * k3_2(x1, x2, theta)
          + a / (512 * y**4) * s * c * k3_3(x1, x2, theta))
    f4 = (s / 3 + a / 6 * s * k4_1(x1, x2, theta)
          - 3 * a / (32 * y**2) * k4_2(x1, x2, theta)
          + a / (192 * y**3) * s * k4_3(x1, x2, theta)
          - a / y**4 * k4_4(x1, x2, theta))
    f5 = (3 * a / (64 * y**3) * s * c * k5_1(x1, x2, theta)
          - 9 * a / (512 * y**4) * c * k5_2(x1, x2, theta))
    return (1.0, 0.0, f3, f4, f5)


def _field2_components(x1, x2, y, theta, a):
    c = _cos(theta)
    s = _sin(theta)
    f3 = (-c / 3 - a / 6 * c * k3_1(x2, x1, -theta)
          + 3 * a / (16 * y**2) * s * c * (2 * x2 + x1)
          - a / (384 * y**3) * c * k3_2(x2, x1, -theta)
          + a / (512 * y**4) * s * c * k3_3(x2, x1, -theta))
    f4 = (-s / 3 - a / 6 * s * k4_1(x2, x1, -theta)
          - 3 * a / (32 * y**2) * k4_2(x2, x1, theta)
          - a / (192 * y**3) * s * k4_3(x2, x1, -theta)
          - a / y**4 * k4_4(x2, x1, -theta))
    f5 = (3 * a / (64 * y**3) * s * c * k5_1(x2, x1, -theta)
          + 9 * a / (512 * y**4) * c * k5_2(x2, x1, -theta))
    return (0.0, 1.0, f3, f4, f5)


def series_fields(xi1, xi2, y, theta, a):
    """Truncated control fields (F1, F2) at (xi1, xi2, y, theta).

    Both arms positive, y > 0.  Shape components are exactly (1, 0) and
    (0, 1); pose components include the wall corrections through 1/y^4.
    """
    if not (xi1 > 0 and xi2 > 0 and y > 0):
        raise ValueError("series valid for xi1, xi2, y > 0")
    return (SeriesFieldSample(values=_field1_components(xi1, xi2, y, theta, a)),
            SeriesFieldSample(values=_field2_components(xi1, xi2, y, theta, a)))


# -- Lie brackets -----------------------------------------------------------

def _wall_factor(theta):
    c2 = _cos(theta) ** 2
    return c2 * c2 - 4 * c2 + 8


def _l3(x1, x2, theta):
    sig = x2**2 + x1 * x2 + x1**2
    return x2**3 * _wall_factor(theta) * (2 * x1**2 - x1 * x2 - x2**2) / sig**2


def _l4(x1, x2, theta):
    sig = x2**2 + x1 * x2 + x1**2
    return x2**3 * _wall_factor(theta) * (2 * x1 + x2) / sig**2


@dataclass
class SeriesBracketSample:
    """Pose components (3, 4, 5) of the three bracket fields.

    Components 1 and 2 of every bracket vanish identically because the
    shape components of the fields are constant.  Signs follow the
    convention [F, G] = (F . grad) G - (G . grad) F.
    """

    b12: tuple
    b112: tuple
    b212: tuple


def series_brackets(xi1, xi2, y, theta, a):
    """Truncated brackets [F1,F2], [F1,[F1,F2]], [F2,[F1,F2]]."""
    if not (xi1 > 0 and xi2 > 0 and y > 0):
        raise ValueError("series valid for xi1, xi2, y > 0")
    x1, x2 = xi1, xi2
    c = _cos(theta)
    s = _sin(theta)
    sig = x2**2 + x1 * x2 + x1**2
    quart = (x1**4 + 2 * x1**3 * x2 + x2**2 * x1**2 + 2 * x2**3 * x1 + x2**4)
    w = _wall_factor(theta)

    b12_3 = (a / 3 * c * quart / ((x1 + x2) ** 2 * x2**2 * x1**2)
             + 27 * a / (512 * y**4) * c * s * x1 * x2 * w * (x1**2 - x2**2) / sig)
    b12_4 = (a / 3 * s * quart / ((x1 + x2) ** 2 * x2**2 * x1**2)
             - 27 * a / (512 * y**4) * c * c * x1 * x2 * w * (x1**2 - x2**2) / sig)
    b12_5 = -81 * a / (512 * y**4) * c * x1 * x2 * (x1 + x2) * w / sig

    q112 = x2 * (3 * x1**2 + 3 * x1 * x2 + x2**2) / (x1**3 * (x1 + x2) ** 3)
    b112_3 = (-2 * a / 3 * c * q112
              + 27 * a / (512 * y**4) * c * s * _l3(x1, x2, theta))
    b112_4 = (-2 * a / 3 * s * q112
              - 27 * a / (512 * y**4) * c * c * _l3(x1, x2, theta))
    b112_5 = -81 * a / (512 * y**4) * c * _l4(x1, x2, theta)

    q212 = x1 * (x1**2 + 3 * x1 * x2 + 3 * x2**2) / (x2**3 * (x1 + x2) ** 3)
    b212_3 = (-2 * a / 3 * c * q212
              - 27 * a / (512 * y**4) * c * s * _l3(x2, x1, -theta))
    b212_4 = (-2 * a / 3 * s * q212
              + 27 * a / (512 * y**4) * c * c * _l3(x2, x1, -theta))
    b212_5 = -81 * a / (512 * y**4) * c * _l4(x2, x1, -theta)

    return SeriesBracketSample(
        b12=(0.0, 0.0, b12_3, b12_4, b12_5),
        b112=(0.0, 0.0, b112_3, b112_4, b112_5),
        b212=(0.0, 0.0, b212_3, b212_4, b212_5),
    )


# -- determinant law --------------------------------------------------------

def det_rational_factor(xi1, xi2):
    """Arm-length factor of the generic determinant coefficient."""
    x1, x2 = xi1, xi2
    num = (6 * x1**6 + 27 * x1**5 * x2 + 50 * x1**4 * x2**2 + 55 * x1**3 * x2**3
           + 50 * x1**2 * x2**4 + 27 * x1 * x2**5 + 6 * x2**6)
    return num / ((x1 + x2) * (x2**2 + x1 * x2 + x1**2) * x1 * x2)


def det_trig_factor(theta):
    """Angle factor 64 - 64 c^2 + 32 c^4 - 8 c^6 + c^8 (always >= 25)."""
    c2 = _cos(theta) ** 2
    return 64 - 64 * c2 + 32 * c2**2 - 8 * c2**3 + c2**4


def det_R(xi1, xi2, theta):
    """Strictly positive factor R of the generic determinant coefficient."""
    return det_rational_factor(xi1, xi2) * det_trig_factor(theta)


def equal_arm_coefficient(xi, theta, a):
    """Leading 1/y^10 determinant coefficient at equal arms.

    Sign convention: the determinant of ([F1,F2], [F1,[F1,F2]],
    [F2,[F1,F2]]) pose columns with the bracket orientation
    [F,G] = (F.grad)G - (G.grad)F used throughout this package.  This
    coefficient is exact: a high-precision oracle of the full model
    converges to it at rate 1/y.
    """
    c2 = _cos(theta) ** 2
    s2 = _sin(theta) ** 2
    return (945.0 / 524288.0) * a**3 * s2 * c2 * xi * (c2 * c2 + 8 - 4 * c2) ** 2


def det_Rprime(xi1, xi2):
    """Positive factor R' of the theta = 0 subdeterminant coefficient."""
    x1, x2 = xi1, xi2
    num = (2 * x1**5 + 11 * x1**4 * x2 + 16 * x1**3 * x2**2 + 19 * x1**2 * x2**3
           + 12 * x1 * x2**4 + 3 * x2**5)
    return num / ((x1 + x2) ** 2 * x1**2 * (x2**2 + x1**2 + x1 * x2) ** 2)


def theta0_subdet_coefficient(xi1, xi2, a):
    """Leading 1/y^4 coefficient of the (3,5)-rows subdeterminant at theta = 0.

    Delta = det [[ [F1,F2]_3, [F1,[F1,F2]]_3 ], [ [F1,F2]_5,
    [F1,[F1,F2]]_5 ]].  The closed form follows from the truncated
    bracket expansions and is strictly negative for all positive arms,
    so the rank is at least 4 everywhere on the theta = 0 slice.
    """
    return -135.0 / 512.0 * a**2 * xi2 * det_Rprime(xi1, xi2)


@dataclass
class DeterminantExpansion:
    """Leading term of the controllability determinant in powers of 1/y."""

    leading: float
    order: int
    subdet_leading: float = None
    subdet_order: int = None


def series_determinant(xi1, xi2, y, theta, a, equal_arm_tol=0.0):
    """Leading coefficient and 1/y order of the bracket determinant.

    Generic arms: coefficient 81 a^3 (xi2 - xi1) sin t cos^2 t R / 131072
    at order y^-9.  Equal arms (within `equal_arm_tol`): the y^-10
    coefficient.  The theta = 0 subdeterminant coefficient (order y^-4) is
    reported alongside, since the main coefficient vanishes there.

    The order, the vanishing factors (xi1 - xi2, sin t cos^2 t) and the
    sign of the generic coefficient are certified against a
    high-precision oracle of the full model; its magnitude is the
    closed-form estimate of the truncation and is accurate only to a
    state-dependent O(1) factor.  The equal-arm and theta = 0
    coefficients are exact.
    """
    if not (xi1 > 0 and xi2 > 0 and y > 0):
        raise ValueError("series valid for xi1, xi2, y > 0")
    sub = theta0_subdet_coefficient(xi1, xi2, a)
    if abs(xi1 - xi2) <= equal_arm_tol:
        return DeterminantExpansion(
            leading=equal_arm_coefficient(0.5 * (xi1 + xi2), theta, a),
            order=10, subdet_leading=sub, subdet_order=4)
    c = _cos(theta)
    s = _sin(theta)
    lead = 81.0 * a**3 * (xi2 - xi1) * s * c * c * det_R(xi1, xi2, theta) / 131072.0
    return DeterminantExpansion(leading=lead, order=9,
                                subdet_leading=sub, subdet_order=4)
