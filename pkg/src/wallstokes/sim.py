"""Stroke integration for the driftless control system.

A stroke prescribes the shape path xi(t); the pose follows the control
fields.  Integration is classical fixed-step RK4 for reproducibility.
Shape components are assigned from the stroke analytically at every
stage (never integrated), so shape drift is impossible; only the pose is
integrated.
"""

from dataclasses import dataclass, field

import numpy as np

from . import swimmer

DEFAULT_STEPS = 4096


class AdmissibilityError(RuntimeError):
    """Trajectory left the admissible set mid-stroke."""


@dataclass(frozen=True)
class Stroke:
    """Piecewise-linear shape path given by knot times and shape values."""

    times: np.ndarray
    shapes: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        s = np.atleast_2d(np.asarray(self.shapes, dtype=float))
        if len(t) != len(s):
            raise ValueError("times and shapes must have equal length")
        if len(t) < 2 or np.any(np.diff(t) <= 0):
            raise ValueError("knot times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "shapes", s)

    @property
    def duration(self):
        return float(self.times[-1] - self.times[0])

    def shape(self, t):
        """Shape vector at time t (clamped to the stroke's time span)."""
        t = np.clip(t, self.times[0], self.times[-1])
        return np.array(
            [np.interp(t, self.times, self.shapes[:, k])
             for k in range(self.shapes.shape[1])]
        )

    def rate(self, t):
        """Shape rate at time t (piecewise constant, right-continuous)."""
        idx = np.searchsorted(self.times, t, side="right") - 1
        idx = int(np.clip(idx, 0, len(self.times) - 2))
        dt = self.times[idx + 1] - self.times[idx]
        return (self.shapes[idx + 1] - self.shapes[idx]) / dt

    def reversed(self):
        """The same shape path traversed backwards over the same duration."""
        t0, t1 = self.times[0], self.times[-1]
        return Stroke(times=t0 + (t1 - self.times[::-1]), shapes=self.shapes[::-1])

    def then(self, other):
        """Concatenate another stroke (shifted to start when this one ends)."""
        if not np.allclose(self.shapes[-1], other.shapes[0]):
            raise ValueError("strokes do not join continuously")
        shift = self.times[-1] - other.times[0]
        return Stroke(
            times=np.concatenate([self.times, other.times[1:] + shift]),
            shapes=np.concatenate([self.shapes, other.shapes[1:]]),
        )


def reciprocal_stroke(stroke):
    """Go out along the stroke and retrace it backwards (scallop test)."""
    return stroke.then(stroke.reversed())


@dataclass
class Trajectory:
    """Time samples and full states along an integrated stroke."""

    times: np.ndarray
    states: np.ndarray
    kind: str
    steps: int = 0
    max_residual: float = 0.0

    def final_state(self):
        return self.states[-1]


def validate_state(state, params):
    """Admissibility violations of a swimmer state (empty list if ok)."""
    if isinstance(state, swimmer.ThreeSphereState):
        return swimmer.check_three_sphere(state, params)
    if isinstance(state, swimmer.FourSphereState):
        return swimmer.check_four_sphere(state, params)
    raise TypeError(f"unknown state type {type(state)!r}")


def _three_sphere_pose_rate(shape, pose, rate, params, wall):
    st = swimmer.ThreeSphereState(shape[0], shape[1], pose[0], pose[1], pose[2])
    bad = swimmer.check_three_sphere(st, params)
    if bad:
        raise AdmissibilityError("; ".join(bad))
    F1, F2 = swimmer.three_sphere_fields(st, params, wall=wall)
    return (F1 * rate[0] + F2 * rate[1])[2:]


def _four_sphere_pose_rate(shape, pose, rate, params, wall):
    # pose = (c, quat); fields give (cdot, omega_body)
    st = swimmer.FourSphereState(xi=tuple(shape), c=tuple(pose[:3]),
                                 quat=tuple(pose[3:7]))
    bad = swimmer.check_four_sphere(st, params)
    if bad:
        raise AdmissibilityError("; ".join(bad))
    fields = swimmer.four_sphere_fields(st, params, wall=wall)
    v = sum(f * r for f, r in zip(fields, rate))
    cdot, omega = v[4:7], v[7:10]
    q = np.asarray(st.quat)
    qdot = 0.5 * swimmer.quat_multiply(q, np.concatenate([[0.0], omega]))
    return np.concatenate([cdot, qdot])


def integrate(state0, stroke, params, dt=None, wall=True):
    """Integrate the driftless system along a stroke with fixed-step RK4.

    `dt` defaults to duration / 4096 and is rounded so that an integer
    number of steps covers the stroke exactly.  theta (three-sphere) is
    kept unwrapped during integration.
    """
    bad = validate_state(state0, params)
    if bad:
        raise AdmissibilityError("; ".join(bad))
    T = stroke.duration
    if dt is None:
        dt = T / DEFAULT_STEPS
    if dt <= 0:
        raise ValueError("dt must be positive")
    nsteps = max(1, int(round(T / dt)))
    h = T / nsteps
    t0 = float(stroke.times[0])

    if isinstance(state0, swimmer.ThreeSphereState):
        kind = "three_sphere"
        pose = np.array([state0.x, state0.y, state0.theta])
        pose_rate = _three_sphere_pose_rate
        def pack(t, pose):
            return np.concatenate([stroke.shape(t), pose])
    else:
        kind = "four_sphere"
        pose = np.concatenate([state0.c, state0.quat])
        pose_rate = _four_sphere_pose_rate
        def pack(t, pose):
            q = pose[3:7] / np.linalg.norm(pose[3:7])
            return np.concatenate([stroke.shape(t), pose[:3], q])

    times = np.empty(nsteps + 1)
    states = np.empty((nsteps + 1, len(pack(t0, pose))))
    times[0] = t0
    states[0] = pack(t0, pose)

    for n in range(nsteps):
        t = t0 + n * h
        k1 = pose_rate(stroke.shape(t), pose, stroke.rate(t + 1e-9 * h), params, wall)
        k2 = pose_rate(stroke.shape(t + h / 2), pose + h / 2 * k1,
                       stroke.rate(t + h / 2), params, wall)
        k3 = pose_rate(stroke.shape(t + h / 2), pose + h / 2 * k2,
                       stroke.rate(t + h / 2), params, wall)
        k4 = pose_rate(stroke.shape(t + h), pose + h * k3,
                       stroke.rate(t + h - 1e-9 * h), params, wall)
        pose = pose + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if kind == "four_sphere":
            pose[3:7] /= np.linalg.norm(pose[3:7])
        times[n + 1] = t0 + (n + 1) * h
        states[n + 1] = pack(times[n + 1], pose)

    return Trajectory(times=times, states=states, kind=kind, steps=nsteps)


def wrap_angle(theta):
    """Wrap an angle to (-pi, pi]."""
    w = (-theta + np.pi) % (2.0 * np.pi)
    return np.pi - w


def net_displacement(traj):
    """Final pose minus initial pose (theta wrapped to (-pi, pi])."""
    if len(traj.times) == 0:
        raise ValueError("empty trajectory")
    delta = traj.states[-1] - traj.states[0]
    if traj.kind == "three_sphere":
        d = delta[2:5]
        d[2] = wrap_angle(d[2])
        return d
    return delta[4:]


def export_csv(traj, path):
    """Trajectory CSV with 17-significant-digit columns."""
    if traj.kind == "three_sphere":
        header = "t,xi1,xi2,x,y,theta"
    else:
        header = "t,xi1,xi2,xi3,xi4,cx,cy,cz,qw,qx,qy,qz"
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for t, row in zip(traj.times, traj.states):
            cols = [f"{v:.17g}" for v in (t, *row)]
            fh.write(",".join(cols) + "\n")
