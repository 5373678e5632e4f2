"""Finite-difference Lie brackets and numerical Lie-algebra rank tests.

Vector fields are plain callables mapping an n-dimensional state vector to
an n-dimensional tangent vector.  Brackets use 4th-order central
differences with per-coordinate steps; iterated brackets nest the same
scheme with a larger step.  The rank of the span of all bracket words up
to a given depth certifies (pointwise) the dimension of the reachable
set's tangent space.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import swimmer

# default relative/absolute FD step for first-order brackets
DEFAULT_STEP = 1e-4
# nested (second-order) brackets use a larger step to tame noise
NESTED_STEP = 1e-3
# singular values below tol * sigma_max do not count toward the rank
DEFAULT_TOL = 1e-6
DEFAULT_DEPTH = 3

# 4th-order central difference stencil
_STENCIL_OFFSETS = (-2.0, -1.0, 1.0, 2.0)
_STENCIL_WEIGHTS = (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0)


class StepTooLargeError(ValueError):
    """An FD stencil point left the field's admissible domain."""


def _steps(X, step):
    X = np.asarray(X, dtype=float)
    return np.maximum(step, step * np.abs(X))


def jacobian(F, X, step=DEFAULT_STEP):
    """Jacobian dF/dX by 4th-order central differences, per-coordinate step."""
    X = np.asarray(X, dtype=float)
    h = _steps(X, step)
    cols = []
    for k in range(len(X)):
        acc = None
        for off, wgt in zip(_STENCIL_OFFSETS, _STENCIL_WEIGHTS):
            Xk = X.copy()
            Xk[k] += off * h[k]
            try:
                val = np.asarray(F(Xk), dtype=float)
            except Exception as exc:
                raise StepTooLargeError(
                    f"field evaluation failed at FD stencil point (coordinate {k})"
                ) from exc
            acc = wgt * val if acc is None else acc + wgt * val
        cols.append(acc / h[k])
    return np.stack(cols, axis=-1)


def lie_bracket(F, G, X, step=DEFAULT_STEP):
    """[F, G](X) = (F . grad) G - (G . grad) F via finite differences."""
    X = np.asarray(X, dtype=float)
    return jacobian(G, X, step) @ F(X) - jacobian(F, X, step) @ G(X)


def _word_label(word):
    if isinstance(word, int):
        return f"F{word + 1}"
    return f"[{_word_label(word[0])},{_word_label(word[1])}]"


def bracket_words(n_fields, depth):
    """Bracket words up to `depth` as nested index tuples.

    Depth 1 yields the fields themselves; depth d adds [F_i, w] for every
    depth-(d-1) word w, skipping [F_i, F_j] with j <= i (antisymmetry).
    """
    words = [[i for i in range(n_fields)]]
    for _ in range(depth - 1):
        prev = words[-1]
        nxt = []
        for i in range(n_fields):
            for w in prev:
                if isinstance(w, int) and w <= i:
                    continue
                nxt.append((i, w))
        words.append(nxt)
    return [w for level in words for w in level]


def evaluate_word(fields, word, X, step=DEFAULT_STEP, nested_step=NESTED_STEP):
    """Evaluate one bracket word at X.

    Inner (first-order) brackets use `step`; every additional nesting level
    uses `nested_step`.
    """
    if isinstance(word, int):
        return np.asarray(fields[word](X), dtype=float)

    def as_field(w):
        if isinstance(w, int):
            return fields[w], 1
        f_inner, d_inner = as_field(w[1])
        i = w[0]
        h = step if d_inner == 1 else nested_step

        def f(Y, _fi=fields[i], _g=f_inner, _h=h):
            return lie_bracket(_fi, _g, Y, step=_h)

        return f, d_inner + 1

    f, depth = as_field(word)
    # the outermost bracket was already folded into f; just evaluate
    return f(np.asarray(X, dtype=float))


@dataclass
class RankReport:
    """Numerical rank certificate at one state."""

    dimension: int
    singular_values: np.ndarray
    depth: int
    words: list
    tol: float

    @property
    def sigma_min_ratio(self):
        s = self.singular_values
        return float(s[-1] / s[0]) if s[0] > 0 else 0.0


def lie_algebra_rank(fields, X, depth=DEFAULT_DEPTH, tol=DEFAULT_TOL,
                     step=DEFAULT_STEP, nested_step=NESTED_STEP,
                     coordinate_scales=None):
    """Numerical dimension of the Lie algebra spanned at X.

    Collects all bracket words up to `depth`, rescales rows by the
    per-coordinate characteristic magnitudes and every column to unit
    norm (bracket magnitudes span many orders; without normalization the
    slow directions would be lost), then counts singular values above
    tol * sigma_max.
    """
    X = np.asarray(X, dtype=float)
    n = len(X)
    words = bracket_words(len(fields), depth)
    cols = []
    for w in words:
        cols.append(evaluate_word(fields, w, X, step=step, nested_step=nested_step))
    M = np.stack(cols, axis=-1)
    if coordinate_scales is not None:
        M = M / np.asarray(coordinate_scales, dtype=float)[:, None]
    norms = np.linalg.norm(M, axis=0)
    norms[norms == 0] = 1.0
    M = M / norms
    s = np.linalg.svd(M, compute_uv=False)
    dim = int(np.sum(s > tol * s[0]))
    return RankReport(dimension=dim, singular_values=s, depth=depth,
                      words=[_word_label(w) for w in words], tol=tol)


def three_sphere_field_pair(params, wall=True):
    """The two planar control fields as cached callables on 5-vectors."""

    @lru_cache(maxsize=4096)
    def _both(key):
        st = swimmer.ThreeSphereState.from_array(np.array(key))
        return swimmer.three_sphere_fields(st, params, wall=wall)

    def f1(X):
        return _both(tuple(np.asarray(X, dtype=float)))[0]

    def f2(X):
        return _both(tuple(np.asarray(X, dtype=float)))[1]

    return f1, f2


def four_sphere_field_tuple(params, wall=True):
    """The four tetrahedral control fields as cached callables on 10-vectors."""

    @lru_cache(maxsize=4096)
    def _all(key):
        st = _state_from_chart(np.array(key))
        return swimmer.four_sphere_fields(st, params, wall=wall)

    def _state_from_chart(v):
        # chart: (xi1..4, c, rotation-vector increment on the base frame)
        xi = v[:4]
        c = v[4:7]
        w = v[7:10]
        angle = np.linalg.norm(w)
        if angle < 1e-300:
            q = np.array([1.0, 0.0, 0.0, 0.0])
        else:
            axis = w / angle
            q = np.concatenate([[np.cos(angle / 2)], np.sin(angle / 2) * axis])
        return swimmer.FourSphereState(xi=tuple(xi), c=tuple(c), quat=tuple(q))

    def make(k):
        def f(X):
            return _all(tuple(np.asarray(X, dtype=float)))[k]

        return f

    return tuple(make(k) for k in range(4))


def four_sphere_chart_point(state):
    """Chart coordinates (xi, c, rotation vector) of a four-sphere state."""
    q = np.array(state.quat)
    w, v = q[0], q[1:]
    nv = np.linalg.norm(v)
    if nv < 1e-15:
        rotvec = np.zeros(3)
    else:
        rotvec = 2.0 * np.arctan2(nv, w) * v / nv
    return np.concatenate([state.xi, state.c, rotvec])


def rank_map(xi1_axis, xi2_axis, y_axis, theta_axis, params, depth=DEFAULT_DEPTH,
             tol=DEFAULT_TOL, wall=True, threads=None):
    """Lie-algebra dimension of the planar swimmer over a state grid.

    Returns a list of dicts (one per grid point, lexicographic in grid
    indices) with keys xi1, xi2, y, theta, dim, sigma_min_ratio.
    Inadmissible points get dim = -1.
    """
    from concurrent.futures import ThreadPoolExecutor

    points = [
        (x1, x2, yv, th)
        for x1 in xi1_axis
        for x2 in xi2_axis
        for yv in y_axis
        for th in theta_axis
    ]

    def one(pt):
        x1, x2, yv, th = pt
        st = swimmer.ThreeSphereState(x1, x2, 0.0, yv, th)
        if swimmer.check_three_sphere(st, params):
            return dict(xi1=x1, xi2=x2, y=yv, theta=th, dim=-1, sigma_min_ratio=0.0)
        f1, f2 = three_sphere_field_pair(params, wall=wall)
        try:
            rep = lie_algebra_rank([f1, f2], st.as_array(), depth=depth, tol=tol)
        except (swimmer.ConfigurationError, StepTooLargeError):
            return dict(xi1=x1, xi2=x2, y=yv, theta=th, dim=-1, sigma_min_ratio=0.0)
        return dict(xi1=x1, xi2=x2, y=yv, theta=th, dim=rep.dimension,
                    sigma_min_ratio=rep.sigma_min_ratio)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, points))
    return [one(pt) for pt in points]
