"""The geometry behind the verdicts: the control-deficit set.

After losing actuators C of B_bar = [B C], the usable control authority is
the Minkowski difference Z = BU (-) (-CW): what remains of the controlled
input set after reserving enough authority to cancel any uncontrolled
input. This demo builds Z for a small system where the exact set is easy to
see, and shows the inner/outer sandwich used on the 9-dimensional jet.
"""

import numpy as np

import resilience_kit as rk
from resilience_kit import zonotope as zn


def main():
    # Controlled inputs span the box [-1,1]^2; the lost actuator pushes
    # along (0.5, 0.25). The deficit set must shrink accordingly.
    A = np.zeros((2, 2))
    B_bar = np.array([[1.0, 0.0, 0.5],
                      [0.0, 1.0, 0.25]])
    sysm = rk.LinearSystem(A=A, B_bar=B_bar,
                           actuator_labels=["ux", "uy", "lost"],
                           state_labels=["x", "y"])
    zset = rk.compute_z_set(rk.split_system(sysm, [2]))

    print("Inner zonotope of Z (one generator per column):")
    print(np.round(zset.inner.generators, 4))
    print(f"affine dimension: {zset.affine_dim}, exact: {zset.exact}")

    print("\nSupport in a few directions (inner vs. full box BU):")
    BU = zn.Zonotope(np.zeros(2), B_bar[:, :2])
    for d in (np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 1.0])):
        print(f"  d = {d}:  Z = {zn.support(zset.inner, d):.4f}   "
              f"BU = {zn.support(BU, d):.4f}")

    if zset.outer is not None:
        V = zn.hpolytope_vertices(zset.outer)
        print("\nVertices of the exact (outer) difference:")
        print(np.round(V, 4))
        print("Every inner sample satisfies the outer halfspaces:")
        rng = np.random.default_rng(0)
        alphas = rng.uniform(-1, 1, (500, zset.inner.num_generators))
        pts = alphas @ zset.inner.generators.T
        slack = zset.outer.offsets - pts @ zset.outer.normals.T
        print(f"  min halfspace slack over 500 samples: {slack.min():.4f} (>= 0)")

    # The jet: the deficit set lives in 9 dimensions, so only the inner
    # zonotope is available; the verdict machinery works from it directly.
    jet = rk.load_scenario("admire")
    zj = rk.compute_z_set(jet.default_splits["right_outboard_elevon"])
    print(f"\nJet after losing the right outboard elevon: dim Z = {zj.affine_dim} "
          f"of n = 9, {zj.inner.num_generators} generators, "
          f"outer form available: {zj.outer is not None}")
    p_dir = np.zeros(9)
    p_dir[3] = 1.0
    print(f"residual roll-rate authority: +-{zn.support(zj.inner, p_dir):.3f} rad/s^2 "
          "(per unit time)")


if __name__ == "__main__":
    main()
