"""Classical broadcast run with every feasibility constraint honored.

Two binary symmetric branches at flip probability 0.01, independent
uniform inputs, blocklength 56. With eps_tilde = eps0 = 0.01 the
budgets admit one message bit per receiver; the run then checks each
error event against its closed-form bound. A few hundred trials keep
this quick; the acceptance suite runs the same setup at 2000.
"""

from martonlab import (
    ClassicalBroadcastChannel,
    InputDesign,
    JointPmf,
    RateParams,
    achieved_divergences,
    run_experiment,
    select_band_exponents,
)

import numpy as np


def bsc_pair(p, q):
    xs = ("00", "01", "10", "11")
    probs = np.zeros((4, 2, 2))
    for i, x in enumerate(xs):
        for y in (0, 1):
            for z in (0, 1):
                probs[i, y, z] = ((1 - p) if y == int(x[0]) else p) * (
                    (1 - q) if z == int(x[1]) else q)
    return ClassicalBroadcastChannel(xs, ("0", "1"), ("0", "1"), probs)


def main():
    channel = bsc_pair(0.01, 0.01)
    joint = JointPmf(("0", "1"), ("0", "1"), np.full((2, 2), 0.25))
    design = InputDesign(joint, {(u, v): u + v for u in "01" for v in "01"})

    n, eps_tilde, eps0 = 56, 0.01, 0.01
    i0b, i0c, i_inf = achieved_divergences(channel, design, eps0, 0.25, n=n)
    print(f"blocklength {n}: i0b={i0b:.3f} i0c={i0c:.3f} i_infty={i_inf:.3f}")

    r1, r2 = select_band_exponents(1, 1, i0b, i0c, i_inf, eps_tilde)
    params = RateParams(R1=1, R2=1, r1=r1, r2=r2, eps_tilde=eps_tilde, eps0=eps0,
                        eps_infty=0.25, i0b=i0b, i0c=i0c, i_infty=i_inf)
    params.validate()
    print(f"bands ({r1}, {r2}), all feasibility constraints pass")

    report = run_experiment(channel, design, params, trials=300, seed=11, n=n)
    print(f"\n{'event':<14} {'rate':>8} {'bound':>8}")
    for ev in report.events:
        bound = "-" if ev.bound is None else f"{ev.bound:.4f}"
        print(f"{ev.name:<14} {ev.rate:>8.4f} {bound:>8}")
    print(f"\nany bound violated: {report.any_violation}")
    print(f"wall clock: {report.wall_clock_s:.1f}s")


if __name__ == "__main__":
    main()
