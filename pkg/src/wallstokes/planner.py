"""Local motion planning for the planar three-sphere swimmer.

The plan is parametrized by five numbers: a direct shape displacement
(2 dof) and signed enclosed areas of three loop primitives — a square
loop in the two shape coordinates and two composed (second-order) loops.
Loop holonomy is quadratic in the loop side and linear in the signed
enclosed area, so the response map is approximately linear in the plan
parameters; a damped-least-squares shooting iteration against full
forward simulation removes the remaining model error.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import liealg, sim, swimmer

# loop sides are capped at this fraction of the smaller arm so that the
# quadratic holonomy model stays accurate and the loop stays admissible
LOOP_CAP_FRACTION = 0.2
# shape excursion of the composed-loop conjugating legs
COMPOSED_DELTA_FRACTION = 0.1
# pose error beyond this norm is split into straight-line waypoints
DEFAULT_TRUST_RADIUS = 2e-2
DEFAULT_BUDGET = 50
DEFAULT_TOL = 1e-4
# fixed RK4 resolution used for all planner forward simulations
PLAN_STEPS_PER_LEG = 32
# plan areas may spread over at most this many repeated loops
MAX_LOOPS = 64


class PlannerError(RuntimeError):
    """Planning failed before any shooting iteration ran."""


class NotLocallyControllableError(PlannerError):
    """The start state fails the full-rank test.

    The swimmer loses two controllable directions on the vertical family
    theta = +-pi/2 (and wherever the bracket determinant vanishes), so no
    local plan into those directions exists.
    """

    def __init__(self, state, report):
        self.state = state
        self.report = report
        super().__init__(
            "start state is not locally controllable: Lie algebra rank "
            f"{report.dimension} < 5 at (xi1={state.xi1:.6g}, xi2={state.xi2:.6g}, "
            f"y={state.y:.6g}, theta={state.theta:.6g}); the vertical "
            "configurations theta = +-pi/2 are degenerate"
        )


def _segment(shape_from, shape_to, t0=0.0, duration=1.0):
    return sim.Stroke(times=np.array([t0, t0 + duration]),
                      shapes=np.array([shape_from, shape_to]))


def bracket_loop(state, pair, amplitude):
    """Closed square loop of side |amplitude| in shape coordinates `pair`.

    Positive amplitude traverses +e_i, +e_j, -e_i, -e_j (positive
    orientation in the (i, j) plane); negative amplitude reverses the
    orientation.  Net shape change is exactly zero; net pose change is
    amplitude**2 times the pose part of the bracket of the two fields,
    to leading order.
    """
    i, j = pair
    shape0 = np.array([state.xi1, state.xi2], dtype=float)
    eps = abs(float(amplitude))
    if eps == 0.0:
        return _segment(shape0, shape0)
    ei = np.zeros(2)
    ej = np.zeros(2)
    ei[i] = eps
    ej[j] = eps
    if amplitude > 0:
        corners = [shape0, shape0 + ei, shape0 + ei + ej, shape0 + ej, shape0]
    else:
        corners = [shape0, shape0 + ej, shape0 + ei + ej, shape0 + ei, shape0]
    return sim.Stroke(times=np.arange(5, dtype=float), shapes=np.array(corners))


@dataclass
class Plan:
    """A compiled local plan: primitives, parameters, and its audit trail."""

    primitives: list
    parameters: np.ndarray
    stroke: sim.Stroke | None
    predicted_final: np.ndarray
    achieved_error: float
    iterations: int
    converged: bool
    error_history: list = field(default_factory=list)

    def to_json(self, path=None):
        doc = {
            "primitives": self.primitives,
            "parameters": [float(v) for v in self.parameters],
            "predicted_final": [float(v) for v in self.predicted_final],
            "achieved_error": float(self.achieved_error),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "error_history": [float(v) for v in self.error_history],
        }
        if self.stroke is not None:
            doc["knot_times"] = [float(t) for t in self.stroke.times]
            doc["knot_shapes"] = [[float(v) for v in row]
                                  for row in self.stroke.shapes]
        text = json.dumps(doc, indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w", newline="\n") as fh:
                fh.write(text + "\n")
        return text


def _loop_from_area(shape, area, area_cap):
    """Square loops at `shape` with total signed enclosed area `area`.

    The area is split over ceil(|area| / area_cap) consecutive loops so
    that no single loop exceeds the side cap; the pose response stays
    linear in `area` over the whole range.
    """
    st = swimmer.ThreeSphereState(shape[0], shape[1], 0.0, 1.0, 0.0)
    n = max(1, int(math.ceil(abs(area) / area_cap)))
    side = math.sqrt(abs(area) / n)
    one = bracket_loop(st, (0, 1), math.copysign(side, area))
    stroke = one
    for _ in range(n - 1):
        stroke = stroke.then(one)
    return stroke


def _compile(state0, p, delta, area_cap):
    """Build the full stroke for parameters p = (dxi1, dxi2, s12, s112, s212).

    Primitive order: direct shape move, square loop, composed loop along
    shape coordinate 1, composed loop along shape coordinate 2.  All
    loops close, so the final shape is the start shape plus the direct
    move exactly.
    """
    shape0 = np.array([state0.xi1, state0.xi2], dtype=float)
    shape1 = shape0 + p[:2]
    stroke = _segment(shape0, shape1)
    primitives = [{"type": "shape_move", "delta": [float(p[0]), float(p[1])]}]

    if p[2] != 0.0:
        stroke = stroke.then(_loop_from_area(shape1, p[2], area_cap))
        primitives.append({"type": "square_loop", "area": float(p[2])})

    for k, s in ((0, p[3]), (1, p[4])):
        if s == 0.0:
            continue
        ek = np.zeros(2)
        ek[k] = delta
        stroke = stroke.then(_segment(shape1, shape1 + ek))
        stroke = stroke.then(_loop_from_area(shape1 + ek, s, area_cap))
        stroke = stroke.then(_segment(shape1 + ek, shape1))
        stroke = stroke.then(_loop_from_area(shape1, -s, area_cap))
        primitives.append({"type": "composed_loop", "axis": k,
                           "delta": float(delta), "area": float(s)})
    return stroke, primitives


def _forward(state0, p, delta, params, wall, area_cap):
    stroke, prims = _compile(state0, p, delta, area_cap)
    nlegs = len(stroke.times) - 1
    dt = stroke.duration / (PLAN_STEPS_PER_LEG * nlegs)
    traj = sim.integrate(state0, stroke, params, dt=dt, wall=wall)
    return traj.states[-1], stroke, prims


def _residual(final, target_arr):
    r = final - target_arr
    r[4] = sim.wrap_angle(r[4])
    return r


def _probe_jacobian(state0, base_p, base_final, delta, params, wall, area_cap,
                    scales):
    """One-sided FD response of the final state to each plan parameter."""
    J = np.zeros((5, 5))
    for k in range(5):
        pk = base_p.copy()
        pk[k] += scales[k]
        fk, _, _ = _forward(state0, pk, delta, params, wall, area_cap)
        col = fk - base_final
        col[4] = sim.wrap_angle(col[4])
        J[:, k] = col / scales[k]
    return J


def _plan_leg(state0, target_arr, budget, tol, params, wall, area_cap, delta):
    p = np.zeros(5)
    final, stroke, prims = _forward(state0, p, delta, params, wall, area_cap)
    r = _residual(final, target_arr)
    err = float(np.linalg.norm(r))
    history = [err]
    if err <= tol:
        return Plan(primitives=prims, parameters=p, stroke=stroke,
                    predicted_final=final, achieved_error=err,
                    iterations=0, converged=True, error_history=history)

    scales = np.array([1e-3, 1e-3, 0.2 * area_cap, 0.2 * area_cap,
                       0.2 * area_cap])
    J = _probe_jacobian(state0, p, final, delta, params, wall, area_cap,
                        scales)
    lam = 1e-2 * np.linalg.norm(J)
    it = 0
    while it < budget and err > tol:
        it += 1
        A = J.T @ J + lam ** 2 * np.eye(5)
        dp = np.linalg.solve(A, -J.T @ r)
        p_try = p + dp
        bound = MAX_LOOPS * area_cap
        p_try[2:] = np.clip(p_try[2:], -bound, bound)
        f_try, s_try, pr_try = _forward(state0, p_try, delta, params, wall,
                                        area_cap)
        r_try = _residual(f_try, target_arr)
        e_try = float(np.linalg.norm(r_try))
        if e_try < err:
            p, final, stroke, prims = p_try, f_try, s_try, pr_try
            r, err = r_try, e_try
            lam /= 10.0
            history.append(err)
        else:
            lam *= 10.0
            if lam > 1e8 * (np.linalg.norm(J) + 1.0):
                # stalled: refresh the linearization around the current point
                J = _probe_jacobian(state0, p, final, delta, params, wall,
                                    area_cap, scales)
                lam = 1e-2 * np.linalg.norm(J)
    return Plan(primitives=prims, parameters=p, stroke=stroke,
                predicted_final=final, achieved_error=err, iterations=it,
                converged=err <= tol, error_history=history)


def plan_local(state0, target, budget=DEFAULT_BUDGET, tol=DEFAULT_TOL,
               params=None, wall=True, trust_radius=DEFAULT_TRUST_RADIUS,
               rank_depth=liealg.DEFAULT_DEPTH):
    """Steer the three-sphere swimmer from state0 to a nearby target.

    Both states are ThreeSphereState.  Raises
    NotLocallyControllableError when the start state fails the rank test.
    Targets beyond `trust_radius` pose error are approached through
    straight-line waypoints, each leg planned locally; the returned Plan
    concatenates all legs.
    """
    if params is None:
        raise ValueError("params is required")
    bad = swimmer.check_three_sphere(state0, params)
    if bad:
        raise PlannerError("start state inadmissible: " + "; ".join(bad))
    bad = swimmer.check_three_sphere(target, params)
    if bad:
        raise PlannerError("target state inadmissible: " + "; ".join(bad))

    f1, f2 = liealg.three_sphere_field_pair(params, wall=wall)
    report = liealg.lie_algebra_rank([f1, f2], state0.as_array(),
                                     depth=rank_depth)
    if report.dimension < 5:
        raise NotLocallyControllableError(state0, report)

    x0 = state0.as_array()
    xt = target.as_array()
    if np.allclose(x0, xt):
        return Plan(primitives=[], parameters=np.zeros(5), stroke=None,
                    predicted_final=x0.copy(), achieved_error=0.0,
                    iterations=0, converged=True, error_history=[0.0])

    arms = min(state0.xi1, state0.xi2, target.xi1, target.xi2)
    side_cap = LOOP_CAP_FRACTION * arms
    area_cap = side_cap ** 2
    delta = COMPOSED_DELTA_FRACTION * arms

    dpose = xt[2:] - x0[2:]
    dpose[2] = sim.wrap_angle(dpose[2])
    nlegs = max(1, int(math.ceil(np.linalg.norm(dpose) / trust_radius)))

    current = x0.copy()
    legs = []
    stroke = None
    total_it = 0
    history = []
    for leg in range(1, nlegs + 1):
        frac = leg / nlegs
        waypoint = x0 + frac * (xt - x0)
        # plan each leg from the actually reached state, not the ideal line
        st_leg = swimmer.ThreeSphereState.from_array(current)
        plan = _plan_leg(st_leg, waypoint, budget, tol, params, wall,
                         area_cap, delta)
        legs.extend(plan.primitives)
        history.extend(plan.error_history)
        total_it += plan.iterations
        current = plan.predicted_final
        if plan.stroke is not None:
            stroke = plan.stroke if stroke is None else stroke.then(plan.stroke)

    r = _residual(current.copy(), xt)
    err = float(np.linalg.norm(r))
    return Plan(primitives=legs, parameters=np.zeros(5), stroke=stroke,
                predicted_final=current, achieved_error=err,
                iterations=total_it, converged=err <= tol,
                error_history=history)
