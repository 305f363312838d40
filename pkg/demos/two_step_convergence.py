"""Does estimating the phase first really cost nothing asymptotically?

Runs the two-step strategy (spend a vanishing fraction of the copies on a
phase pre-estimate, then measure as if the phase were known) over a grid of
sample sizes and watches n * weighted MSE approach the known-phase optimum.
Also prints the gamma diagnostic, the inflation factor implied by the
empirical phase error, which must drift down to 1.

Run:  python3 demos/two_step_convergence.py      (about half a minute)
"""

import numpy as np

from qest import SimConfig, ThetaParams, WeightSpec, nagaoka_bound, run

t = ThetaParams(0.6, 0.0, 0.3)
w = WeightSpec.identity(2)
target = nagaoka_bound(t, np.eye(2))

print(f"known-phase optimum: n * MSE = {target}\n")
print(f"{'n':>8} {'n*MSE':>9} {'stderr':>8} {'gamma':>8}")
for n in (10**3, 10**4, 10**5):
    cfg = SimConfig(
        t, w, "two-step", n=n, trials=1000, seed=11,
        phase_fraction_exponent=2.0 / 3.0,
    )
    res = run(cfg)
    print(f"{n:8d} {res.n_times_weighted_mse:9.3f} {res.stderr:8.3f} "
          f"{res.diagnostics['gamma']:8.4f}")

print()
print("Nothing here was told the true phase: each trial spends n^(2/3)")
print("copies estimating it, aims the optimal measurement at the estimate,")
print("and still converges to the known-phase limit. The phase is a free")
print("lunch asymptotically, though visibly not at n = 1000.")
