"""Strokes, the scallop theorem, and square-loop holonomy.

A reciprocal (retraced) stroke produces zero net motion at zero
Reynolds number; a closed non-reciprocal loop in shape space produces a
net pose displacement proportional to the enclosed area times the Lie
bracket of the control fields.  This demo integrates both and checks
the holonomy law against a finite-difference bracket.

Run:  python demos/04_strokes_and_holonomy.py
"""

import numpy as np

from wallstokes import liealg, planner, sim, swimmer


def main():
    params = swimmer.SwimmerParams(a=0.05)
    st0 = swimmer.ThreeSphereState(1.0, 1.4, 0.0, 2.5, 0.4)

    print("Scallop theorem: retrace a stroke backwards -> no net motion")
    out = sim.Stroke(times=np.array([0.0, 1.0, 2.0]),
                     shapes=np.array([[1.0, 1.4], [1.25, 1.1], [1.4, 1.5]]))
    stroke = sim.reciprocal_stroke(out)
    traj = sim.integrate(st0, stroke, params, dt=stroke.duration / 10000)
    print(f"  net displacement: {np.linalg.norm(sim.net_displacement(traj)):.3e}\n")

    print("Square-loop holonomy: net pose change / eps^2 -> bracket")
    f1, f2 = liealg.three_sphere_field_pair(params)
    bracket = liealg.lie_bracket(f1, f2, st0.as_array())[2:]
    print(f"  bracket pose components: {bracket}")
    for eps in (0.2, 0.1, 0.05, 0.025):
        loop = planner.bracket_loop(st0, (0, 1), eps)
        tr = sim.integrate(st0, loop, params, dt=loop.duration / 2048)
        hol = sim.net_displacement(tr) / eps**2
        err = np.linalg.norm(hol - bracket)
        print(f"  eps = {eps:5.3f}: holonomy/eps^2 = {hol},  |error| = {err:.2e}")

    print("\nThe error shrinks linearly with eps: the loop realizes the")
    print("bracket direction to leading order, which is how the planner")
    print("synthesizes motion along otherwise unreachable directions.")


if __name__ == "__main__":
    main()
