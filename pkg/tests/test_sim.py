"""Stroke representation and RK4 integration tests."""

import numpy as np
import pytest

from wallstokes import sim, swimmer
from wallstokes.swimmer import FourSphereState, SwimmerParams, ThreeSphereState


P = SwimmerParams(a=0.02)


def square_stroke(shape0, eps):
    s = np.asarray(shape0, dtype=float)
    corners = [s, s + [eps, 0], s + [eps, eps], s + [0, eps], s]
    return sim.Stroke(times=np.arange(5, dtype=float), shapes=np.array(corners))


def test_stroke_interpolation():
    st = sim.Stroke(times=np.array([0.0, 1.0, 3.0]),
                    shapes=np.array([[1.0, 2.0], [2.0, 2.0], [2.0, 4.0]]))
    assert st.duration == 3.0
    assert np.allclose(st.shape(0.5), [1.5, 2.0])
    assert np.allclose(st.shape(2.0), [2.0, 3.0])
    assert np.allclose(st.rate(0.5), [1.0, 0.0])
    assert np.allclose(st.rate(2.0), [0.0, 1.0])


def test_stroke_reversed_and_concat():
    st = sim.Stroke(times=np.array([0.0, 2.0]), shapes=np.array([[1.0, 1.0],
                                                                 [1.5, 1.0]]))
    rev = st.reversed()
    assert np.allclose(rev.shape(0.0), [1.5, 1.0])
    assert np.allclose(rev.shape(2.0), [1.0, 1.0])
    both = st.then(rev)
    assert both.duration == 4.0
    assert np.allclose(both.shape(4.0), [1.0, 1.0])
    with pytest.raises(ValueError):
        st.then(st)  # endpoints do not join


def test_stroke_validation():
    with pytest.raises(ValueError):
        sim.Stroke(times=np.array([0.0, 0.0]), shapes=np.zeros((2, 2)))
    with pytest.raises(ValueError):
        sim.Stroke(times=np.array([0.0, 1.0]), shapes=np.zeros((3, 2)))


def test_integrate_tracks_shape_exactly():
    st0 = ThreeSphereState(1.0, 1.4, 0.0, 4.0, 0.3)
    stroke = square_stroke([1.0, 1.4], 0.2)
    traj = sim.integrate(st0, stroke, P, dt=stroke.duration / 256)
    # shape knots are hit exactly (shape is assigned, not integrated)
    assert np.allclose(traj.states[-1][:2], [1.0, 1.4], atol=1e-14)
    assert traj.states.shape[1] == 5
    assert np.all(np.isfinite(traj.states))


def test_rk4_convergence():
    """Pose error decreases ~16x per halving of dt."""
    st0 = ThreeSphereState(1.0, 1.4, 0.0, 2.5, 0.4)
    stroke = sim.Stroke(times=np.array([0.0, 1.0]),
                        shapes=np.array([[1.0, 1.4], [1.3, 1.1]]))
    finals = []
    for n in (8, 16, 32, 256):
        traj = sim.integrate(st0, stroke, P, dt=stroke.duration / n)
        finals.append(traj.states[-1])
    e1 = np.linalg.norm(finals[0] - finals[3])
    e2 = np.linalg.norm(finals[1] - finals[3])
    e3 = np.linalg.norm(finals[2] - finals[3])
    assert e1 / e2 > 8.0
    assert e2 / e3 > 8.0


def test_scallop_theorem():
    st0 = ThreeSphereState(1.0, 1.4, 0.0, 4.0, 0.5)
    out = sim.Stroke(times=np.array([0.0, 1.0, 2.0]),
                     shapes=np.array([[1.0, 1.4], [1.25, 1.1], [1.4, 1.5]]))
    stroke = sim.reciprocal_stroke(out)
    traj = sim.integrate(st0, stroke, P, dt=stroke.duration / 10000)
    assert np.linalg.norm(sim.net_displacement(traj)) <= 1e-8


def test_square_loop_moves_pose():
    """A non-reciprocal loop produces nonzero net pose displacement."""
    st0 = ThreeSphereState(1.0, 1.4, 0.0, 4.0, 0.5)
    traj = sim.integrate(st0, square_stroke([1.0, 1.4], 0.1), P, dt=1e-2)
    delta = sim.net_displacement(traj)
    assert np.linalg.norm(delta) > 1e-6


def test_four_sphere_integration():
    st0 = FourSphereState(xi=(1.0, 1.1, 0.9, 1.2), c=(0.0, 6.0, 0.0),
                          quat=(1.0, 0.0, 0.0, 0.0))
    stroke = sim.Stroke(times=np.array([0.0, 1.0]),
                        shapes=np.array([[1.0, 1.1, 0.9, 1.2],
                                         [1.1, 1.0, 1.0, 1.1]]))
    traj = sim.integrate(st0, stroke, P, dt=1.0 / 64)
    final = traj.states[-1]
    assert final.shape == (11,)
    # quaternion stays normalized
    assert np.isclose(np.linalg.norm(final[7:]), 1.0, atol=1e-12)
    assert np.allclose(final[:4], [1.1, 1.0, 1.0, 1.1], atol=1e-14)


def test_wrap_angle():
    assert sim.wrap_angle(np.pi) == pytest.approx(np.pi)
    assert sim.wrap_angle(-np.pi) == pytest.approx(np.pi)
    assert sim.wrap_angle(3 * np.pi + 0.1) == pytest.approx(np.pi + 0.1 - 2 * np.pi)
    assert sim.wrap_angle(0.3) == pytest.approx(0.3)


def test_inadmissible_states_rejected():
    bad = ThreeSphereState(1.0, 1.4, 0.0, 0.5, np.pi / 2 - 0.1)
    stroke = sim.Stroke(times=np.array([0.0, 1.0]),
                        shapes=np.array([[1.0, 1.4], [1.1, 1.4]]))
    with pytest.raises((sim.AdmissibilityError, swimmer.ConfigurationError)):
        sim.integrate(bad, stroke, P)


def test_export_csv_deterministic(tmp_path):
    st0 = ThreeSphereState(1.0, 1.4, 0.0, 4.0, 0.5)
    stroke = square_stroke([1.0, 1.4], 0.1)
    traj = sim.integrate(st0, stroke, P, dt=0.125)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    sim.export_csv(traj, p1)
    sim.export_csv(traj, p2)
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()
    text = b1.decode()
    assert text.splitlines()[0] == "t,xi1,xi2,x,y,theta"
    assert "\r" not in text
    # values round-trip exactly at 17 significant digits
    row = np.array([float(v) for v in text.splitlines()[-1].split(",")])
    assert np.array_equal(row[1:], traj.states[-1])
