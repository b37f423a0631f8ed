"""Rate region polygons and the iid convergence of divergence rates.

First prints the one-shot inner-bound polygon next to the single-user
reference region, with and without the epsilon penalty terms. Then
normalizes the order-zero and order-infinity divergences over growing
blocklengths of a doubly symmetric binary source: the first rate heads
toward the mutual information, the second toward the correlation
measure of the pair.
"""

import numpy as np

from martonlab import (
    JointPmf,
    iid_convergence_curve,
    marton_region,
    region_contains,
    verdu_region,
)


def main():
    i0b, i0c, i_inf = 30.0, 28.0, 2.0
    m = marton_region(i0b, i0c, i_inf, eps_tilde=1 / 16, eps0=0.01)
    v = verdu_region(i0b, i0c, i_inf, eps0=0.01, eps_infty=0.25, gamma=0.05)
    print("inner bound vertices:", m.vertices)
    print("reference region vertices:", v.vertices)

    m0 = marton_region(i0b, i0c, i_inf, eps_tilde=1 / 16, eps0=0.01, penalties=False)
    v0 = verdu_region(i0b, i0c, i_inf, eps0=0.01, eps_infty=0.25, gamma=0.05,
                      penalties=False)
    print("penalty-free containment (inner contains reference):",
          region_contains(m0, v0))

    base = JointPmf(("0", "1"), ("0", "1"), np.array([[0.45, 0.05], [0.05, 0.45]]))
    curve = iid_convergence_curve(base, base, 0.05, (1, 2, 4, 8, 16, 32, 64, 128))
    print(f"\ntargets: i0 rate -> {curve.target_i0:.4f}, "
          f"i_infty rate -> {curve.target_i_infty:.4f}")
    print(f"{'n':>4} {'i0 rate':>9} {'i_infty rate':>13}")
    for p in curve.points:
        print(f"{p.n:>4} {p.i0_rate:>9.5f} {p.i_infty_rate:>13.5f}")


if __name__ == "__main__":
    main()
