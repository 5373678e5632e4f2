"""Point forces above a no-slip wall.

Walks through the image-system Green tensor: the velocity field of a
point force in the half space, the exact no-slip condition on the wall,
and the classical single-sphere drag corrections it implies.

Run:  python demos/01_wall_images.py
"""

import numpy as np

from wallstokes import greens


def main():
    rng = np.random.default_rng(0)

    print("A point force at height y above a rigid wall drives a Stokes")
    print("flow that must vanish identically on the wall plane.\n")

    pos = np.array([0.0, 1.5, 0.0])
    force = np.array([1.0, 0.5, -0.3])

    print(f"source at {pos}, force {force}")
    for label, point in [
        ("near the source ", pos + [0.5, 0.3, 0.0]),
        ("above the source", pos + [0.0, 3.0, 0.0]),
        ("on the wall     ", np.array([2.0, 0.0, 1.0])),
    ]:
        u = greens.point_force_velocity([(pos, force)], point)
        print(f"  velocity {label} {point}: |u| = {np.linalg.norm(u):.3e}")

    print("\nRandom wall points (should all be ~machine zero):")
    worst = 0.0
    for _ in range(1000):
        wp = np.array([rng.uniform(-5, 5), 0.0, rng.uniform(-5, 5)])
        u = greens.point_force_velocity([(pos, force)], wp)
        worst = max(worst, np.linalg.norm(u))
    print(f"  max |u| over 1000 wall points: {worst:.3e}")

    print("\nSingle-sphere drag correction from the self-image")
    print("(classical results: 1 + 9a/16y parallel, 1 + 9a/8y perpendicular):")
    a = 0.05
    for y in (1.0, 2.0, 5.0):
        M = np.eye(3) - 6 * np.pi * a * greens.self_image(np.array([0.0, y, 0.0]))
        print(f"  y = {y}: parallel {M[0, 0]:.6f} (expect {1 + 9 * a / (16 * y):.6f}),"
              f" perpendicular {M[1, 1]:.6f} (expect {1 + 9 * a / (8 * y):.6f})")


if __name__ == "__main__":
    main()
