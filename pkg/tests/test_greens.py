"""Green tensor unit tests: no-slip wall, symmetry, limits, guards."""

import numpy as np
import pytest

from wallstokes import greens


RNG = np.random.default_rng(42)


def test_stokeslet_structure():
    r = np.array([1.0, 2.0, -0.5])
    K = greens.stokeslet(r, mu=1.0)
    d = np.linalg.norm(r)
    expect = (np.eye(3) / d + np.outer(r, r) / d**3) / (8 * np.pi)
    assert np.allclose(K, expect, rtol=0, atol=1e-15)
    # symmetric and even in r
    assert np.allclose(K, K.T)
    assert np.allclose(greens.stokeslet(-r), K)


def test_stokeslet_scaling():
    r = np.array([0.3, 1.1, 0.7])
    assert np.allclose(greens.stokeslet(2 * r), greens.stokeslet(r) / 2)
    assert np.allclose(greens.stokeslet(r, mu=3.0), greens.stokeslet(r) / 3)


def test_blake_reduces_to_stokeslet_near_source():
    """Far from the wall the image correction is O(1/y): dominant part is free."""
    r0 = np.array([0.0, 500.0, 0.0])
    r = r0 + np.array([0.4, 0.3, -0.2])
    K = greens.blake_tensor(r, r0)
    G = greens.stokeslet(r - r0)
    assert np.max(np.abs(K - G)) < 2e-3 * np.max(np.abs(G))


def test_no_slip_on_wall():
    """Velocity vanishes identically on the wall plane."""
    worst = 0.0
    for _ in range(100):
        pos = np.array([RNG.uniform(-3, 3), RNG.uniform(0.2, 5.0),
                        RNG.uniform(-3, 3)])
        f = RNG.standard_normal(3)
        scale = np.linalg.norm(f) / (8 * np.pi)
        for _ in range(5):
            wp = np.array([RNG.uniform(-10, 10), 0.0, RNG.uniform(-10, 10)])
            u = greens.point_force_velocity([(pos, f)], wp)
            worst = max(worst, np.linalg.norm(u) / scale)
    assert worst < 1e-12


def test_image_decay_near_wall_source():
    """A source close to the wall is screened: far-field decays faster than 1/d."""
    pos = np.array([0.0, 0.1, 0.0])
    f = np.array([1.0, 0.0, 0.0])
    u1 = greens.point_force_velocity([(pos, f)], np.array([10.0, 0.1, 0.0]))
    u2 = greens.point_force_velocity([(pos, f)], np.array([20.0, 0.1, 0.0]))
    # free-space would give ratio 2; screened flow decays at least like 1/d^2
    assert np.linalg.norm(u1) / np.linalg.norm(u2) > 3.5


def test_self_image_drag_factors():
    """Single-sphere wall drag corrections: 1 + 9a/16y and 1 + 9a/8y."""
    for ratio in (0.01, 0.02, 0.05):
        a, y = ratio, 1.0
        M = np.eye(3) - 6 * np.pi * a * greens.self_image(np.array([0.0, y, 0.0]))
        assert abs(M[0, 0] - (1 + 9 * ratio / 16)) <= 2 * ratio**2
        assert abs(M[2, 2] - (1 + 9 * ratio / 16)) <= 2 * ratio**2
        assert abs(M[1, 1] - (1 + 9 * ratio / 8)) <= 2 * ratio**2


def test_singularity_guards():
    with pytest.raises(greens.SingularityError):
        greens.stokeslet(np.zeros(3))
    with pytest.raises(greens.HalfSpaceDomainError):
        greens.blake_tensor(np.array([0.0, 1.0, 0.0]), np.array([0.0, -1.0, 0.0]))


def test_reciprocity():
    """Lorentz reciprocity: K(r, r0) = K(r0, r)^T."""
    for _ in range(10):
        r0 = np.array([RNG.uniform(-2, 2), RNG.uniform(0.3, 4), RNG.uniform(-2, 2)])
        r = np.array([RNG.uniform(-2, 2), RNG.uniform(0.3, 4), RNG.uniform(-2, 2)])
        K = greens.blake_tensor(r, r0)
        Kt = greens.blake_tensor(r0, r)
        assert np.allclose(K, Kt.T, rtol=1e-12, atol=1e-14)
