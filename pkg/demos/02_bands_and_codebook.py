"""Band exponent selection and rejection-sampled codebook statistics.

Given target message rates and the three divergence values, the band
selector picks the smallest feasible (r1, r2). The codebook it implies
keeps a cell with probability min(1, ratio / 2^i_infty); over many
cells the empirical keep rate has to land in the band
[(1 - eps_infty) 2^-i_infty, 2^-i_infty].
"""

import numpy as np

from martonlab import (
    InputDesign,
    JointPmf,
    RateParams,
    classical_i_infty,
    generate_codebook,
    mix64,
    select_band_exponents,
)


def main():
    joint = JointPmf(("0", "1"), ("0", "1"), np.array([[0.45, 0.05], [0.05, 0.45]]))
    design = InputDesign(joint, {(u, v): u + v for u in "01" for v in "01"})

    eps_tilde, eps_infty = 1 / 16, 0.25
    i_inf = classical_i_infty(joint, eps_infty).value
    i0b = i0c = 30.0  # pretend budgets from a long block
    r1, r2 = select_band_exponents(2, 2, i0b, i0c, i_inf, eps_tilde)
    print(f"i_infty = {i_inf:.4f}, band exponents r1={r1}, r2={r2} "
          f"(sum must hit ceil(i_infty + 3 log2(1/eps_tilde)))")

    params = RateParams(R1=2, R2=2, r1=r1, r2=r2, eps_tilde=eps_tilde, eps0=0.01,
                        eps_infty=eps_infty, i0b=i0b, i0c=i0c, i_infty=i_inf)
    params.validate()

    q = 2.0 ** -i_inf
    keep = []
    for b in range(32):
        cb = generate_codebook(design, params, seed=mix64(2024, b))
        ind = np.stack([cb.indicator(k, 0, min(64, params.n_cols))
                        for k in range(min(64, params.n_rows))])
        keep.append(ind.mean())
    mean = float(np.mean(keep))
    sem = float(np.std(keep, ddof=1)) / np.sqrt(len(keep))
    print(f"cells sampled: {32 * 64 * 64}, keep rate {mean:.4f} (+/- {sem:.4f})")
    print(f"admissible band for the true mean: [{(1 - eps_infty) * q:.4f}, {q:.4f}]")


if __name__ == "__main__":
    main()
