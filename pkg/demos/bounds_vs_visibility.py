"""How the precision bounds behave as the interference visibility changes.

Sweeps theta1 at theta2 = 0 and prints the known-phase and unknown-phase
bound families side by side.  Two things to look for in the output: the
cost of not knowing the phase (the k=3 columns sit strictly above the k=2
ones) and the way every bound blows up as theta1 -> 0, where the phase
becomes unidentifiable.

Run:  python3 demos/bounds_vs_visibility.py
"""

import numpy as np

from qest import ThetaParams, WeightSpec, bound_report

w2 = WeightSpec.identity(2)
w3 = WeightSpec.block(np.eye(2), 1.0)

print(f"{'theta1':>8} {'sld(2)':>10} {'nagaoka':>10} {'sld(3)':>10} "
      f"{'holevo(3)':>10} {'hgm(3)':>10}")
for t1 in np.linspace(0.05, 0.95, 19):
    t = ThetaParams(t1, 0.0, 0.0)
    known = bound_report(t, 2, w2)
    unknown = bound_report(t, 3, w3)
    print(f"{t1:8.2f} {known.sld_cr:10.4f} {known.nagaoka_hgm:10.4f} "
          f"{unknown.sld_cr:10.4f} {unknown.holevo:10.4f} "
          f"{unknown.nagaoka_hgm:10.4f}")

print()
print("The k=3 separable bound (hgm) exceeds the k=3 collective bound")
print("(holevo), which exceeds the k=3 SLD bound; all three diverge like")
print("1/theta1^2 at small visibility because the phase is then invisible.")
