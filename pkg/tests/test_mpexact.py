"""The arbitrary-precision mirror must agree with the float reference."""

import mpmath as mp
import numpy as np

from wallstokes import mpexact, swimmer


def test_fields_pinned_to_reference():
    params = swimmer.SwimmerParams(a=0.01)
    for (x1, x2, yv, t) in [(1.0, 1.4, 4.0, 0.5), (0.8, 1.7, 9.0, -0.9),
                            (1.3, 1.3, 2.5, 1.2)]:
        st = swimmer.ThreeSphereState(x1, x2, 0.0, yv, t)
        F1, F2 = swimmer.three_sphere_fields(st, params)
        with mp.workdps(30):
            G1, G2 = mpexact.fields(x1, x2, 0.0, yv, t, 0.01)
        assert np.max(np.abs(F1 - np.array([float(v) for v in G1]))) < 1e-12
        assert np.max(np.abs(F2 - np.array([float(v) for v in G2]))) < 1e-12


def test_fields_pinned_free_space():
    params = swimmer.SwimmerParams(a=0.01)
    st = swimmer.ThreeSphereState(1.1, 0.9, 0.0, 5.0, 0.3)
    F1, _ = swimmer.three_sphere_fields(st, params, wall=False)
    with mp.workdps(30):
        G1, _ = mpexact.fields(1.1, 0.9, 0.0, 5.0, 0.3, 0.01, wall=False)
    assert np.max(np.abs(F1 - np.array([float(v) for v in G1]))) < 1e-12


def test_bracket_triple_matches_fd_reference():
    from wallstokes import liealg

    params = swimmer.SwimmerParams(a=0.01)
    f1, f2 = liealg.three_sphere_field_pair(params)
    X = np.array([1.0, 1.4, 0.0, 4.0, 0.5])
    ref = liealg.lie_bracket(f1, f2, X)
    with mp.workdps(30):
        b12, _, _ = mpexact.bracket_triple(1.0, 1.4, 0.0, 4.0, 0.5, 0.01)
    got = np.array([float(v) for v in b12])
    assert np.max(np.abs(ref - got)) < 1e-6
