"""Truncated-expansion tests: internal symmetry, agreement with the
numeric model, and bracket/determinant structure."""

import numpy as np
import pytest

from wallstokes import liealg, series, swimmer


def test_series_shape_components_exact():
    s1, s2 = series.series_fields(1.0, 1.4, 5.0, 0.3, 1e-3)
    assert s1.values[:2] == (1.0, 0.0)
    assert s2.values[:2] == (0.0, 1.0)


def test_series_mirror_conjugation():
    """F2(x1, x2, t) equals the slot-swapped sign-flipped F1(x2, x1, -t)."""
    rng = np.random.default_rng(11)
    for _ in range(20):
        x1 = rng.uniform(0.5, 2.0)
        x2 = rng.uniform(0.5, 2.0)
        yv = rng.uniform(2.0, 20.0)
        t = rng.uniform(-1.4, 1.4)
        a = 1e-3
        _, f2 = series.series_fields(x1, x2, yv, t, a)
        g1, _ = series.series_fields(x2, x1, yv, -t, a)
        mirrored = (g1.values[1], g1.values[0], -g1.values[2], g1.values[3],
                    -g1.values[4])
        assert np.allclose(f2.values, mirrored, rtol=0, atol=1e-15)


def test_series_matches_numeric_fields():
    a = 1e-3
    params = swimmer.SwimmerParams(a=a)
    st = swimmer.ThreeSphereState(1.0, 1.4, 0.0, 20.0, 0.5)
    F1, F2 = swimmer.three_sphere_fields(st, params)
    s1, s2 = series.series_fields(st.xi1, st.xi2, st.y, st.theta, a)
    # remainder is O(a^2) + O(a / y^5)
    budget = 5 * a**2 + 5 * a / st.y**5
    assert np.max(np.abs(np.array(F1) - s1.values)) < budget
    assert np.max(np.abs(np.array(F2) - s2.values)) < budget


def test_series_brackets_match_fd_brackets():
    """Truncated bracket formulas equal FD brackets of the truncated fields."""
    # small a so that the quadratic remainder sits below the wall terms
    a = 1e-6

    def make(k):
        def f(X):
            pair = series.series_fields(X[0], X[1], X[3], X[4], a)
            return np.array(pair[k].values)

        return f

    f1, f2 = make(0), make(1)

    def residuals(x1, x2, yv, t):
        X = np.array([x1, x2, 0.0, yv, t])
        sb = series.series_brackets(x1, x2, yv, t, a)
        d12 = liealg.lie_bracket(f1, f2, X) - np.array(sb.b12)
        d112 = liealg.evaluate_word([f1, f2], (0, (0, 1)), X) - np.array(sb.b112)
        d212 = liealg.evaluate_word([f1, f2], (1, (0, 1)), X) - np.array(sb.b212)
        return np.array([np.max(np.abs(d)) for d in (d12, d112, d212)])

    for (x1, x2, t) in [(1.0, 1.4, 0.5), (0.8, 1.7, -0.9), (1.3, 1.3, 1.1)]:
        r6 = residuals(x1, x2, 6.0, t)
        r12 = residuals(x1, x2, 12.0, t)
        wall = a / 6.0**4
        # formulas match up to the next-order (1/y^5) truncation remainder
        assert np.all(r6 < wall)
        # the first-bracket remainder decays faster than every kept term
        # (the nested brackets sit at the FD noise floor at larger y)
        assert r6[0] / max(r12[0], 1e-18) > 20.0


def test_bracket_shape_components_vanish():
    sb = series.series_brackets(1.1, 1.4, 5.0, 0.7, 1e-3)
    for b in (sb.b12, sb.b112, sb.b212):
        assert b[0] == 0.0 and b[1] == 0.0


def test_bracket_mirror_conjugation():
    """Slot swap + mirror maps [F1,[F1,F2]] to -[F2,[F1,F2]] components."""
    x1, x2, yv, t, a = 0.9, 1.6, 7.0, 0.8, 1e-3
    sb = series.series_brackets(x1, x2, yv, t, a)
    sm = series.series_brackets(x2, x1, yv, -t, a)
    # [F1,F2] is odd under the conjugation; pose signs (-, +, -)
    assert np.isclose(sb.b12[2], sm.b12[2])
    assert np.isclose(sb.b12[3], -sm.b12[3])
    assert np.isclose(sb.b12[4], sm.b12[4])
    # nested brackets swap roles
    assert np.isclose(sb.b112[2], sm.b212[2])
    assert np.isclose(sb.b112[3], -sm.b212[3])
    assert np.isclose(sb.b112[4], sm.b212[4])


def test_determinant_structure():
    a = 1e-2
    # vanishing factors: equal arms, theta = 0, theta = pi/2
    d = series.series_determinant(1.2, 1.2, 10.0, 0.5, a, equal_arm_tol=1e-12)
    assert d.order == 10
    gen = series.series_determinant(1.0, 1.4, 10.0, 0.5, a)
    assert gen.order == 9 and gen.leading != 0.0
    assert series.series_determinant(1.0, 1.4, 10.0, 0.0, a).leading == 0.0
    z = series.series_determinant(1.0, 1.4, 10.0, np.pi / 2, a)
    assert abs(z.leading) < 1e-18
    # sign flips with theta and with the arm order
    assert np.sign(gen.leading) == -np.sign(
        series.series_determinant(1.0, 1.4, 10.0, -0.5, a).leading)
    assert np.sign(gen.leading) == -np.sign(
        series.series_determinant(1.4, 1.0, 10.0, 0.5, a).leading)


def test_equal_arm_coefficient_positive():
    for xi in (0.8, 1.2, 2.0):
        for t in (0.3, 0.7, 1.2):
            assert series.equal_arm_coefficient(xi, t, 1e-2) > 0


def test_theta0_subdet_strictly_negative():
    rng = np.random.default_rng(2)
    for _ in range(50):
        x1 = rng.uniform(0.2, 3.0)
        x2 = rng.uniform(0.2, 3.0)
        assert series.theta0_subdet_coefficient(x1, x2, 1e-2) < 0


def test_invalid_domain():
    with pytest.raises(ValueError):
        series.series_fields(-1.0, 1.0, 5.0, 0.0, 1e-3)
    with pytest.raises(ValueError):
        series.series_brackets(1.0, 1.0, -5.0, 0.0, 1e-3)
