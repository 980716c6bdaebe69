"""Mixture families: power means, the min/max limits, and normalizer bounds.

The power mean sweeps continuously from min through geometric to max as its
exponent runs over the real line, and the mixture normalizer Z is always
pinned inside [1 - TV, 1 + TV].
"""

import numpy as np

from geojsd import (
    DiscreteDensity,
    MeanSpec,
    js,
    js_m,
    js_m_extended,
    jeffreys,
    m_mixture,
    power_limit_check,
    total_variation,
)

print("power mean P_gamma(1, 4) as gamma sweeps:")
gammas = [-100.0, -2.0, -1.0, 0.0, 1.0, 2.0, 100.0]
for gamma, value in zip(gammas, power_limit_check(gammas, 1.0, 4.0)):
    print(f"  gamma = {gamma:8.1f}  ->  {value:.6f}")
print("  (min = 1, geometric = 2, arithmetic = 2.5, max = 4)")
print()

rng = np.random.default_rng(7)
w1, w2 = rng.uniform(0.05, 1.0, 12), rng.uniform(0.05, 1.0, 12)
p1 = DiscreteDensity.probability(w1 / w1.sum())
p2 = DiscreteDensity.probability(w2 / w2.sum())
tv = total_variation(p1, p2)
print(f"random 12-atom pair with TV = {tv:.6f}")
print(f"admissible Z band: [{1 - tv:.6f}, {1 + tv:.6f}]")
print()

means = [
    MeanSpec.minimum(),
    MeanSpec.power(-2.0),
    MeanSpec.power(-0.5),
    MeanSpec.geometric(),
    MeanSpec.power(0.5),
    MeanSpec.arithmetic(),
    MeanSpec.power(2.0),
    MeanSpec.maximum(),
]
print(f"{'mean':>12}  {'Z':>9}  {'JS_M':>9}  {'JS_M+':>9}  {'gap':>10}")
base_js = js(p1, p2)
for mean in means:
    _, z = m_mixture(p1, p2, mean)
    value = js_m(p1, p2, mean)
    extended = js_m_extended(p1, p2, mean)
    print(f"{mean.label:>12}  {z:9.6f}  {value:9.6f}  {extended:9.6f}  "
          f"{extended - value:10.3e}")
print()
print(f"plain JSD = {base_js:.6f}: every JS_M above dominates it")
print(f"Z grows monotonically with the mean (min -> max), and")
print(f"Z_min = 1 - TV = {1 - tv:.6f}, Z_max = 1 + TV = {1 + tv:.6f} exactly")
print()
print("extremal-mean bounds:")
print(f"  JS+_max = {js_m_extended(p1, p2, MeanSpec.maximum()):.6f} "
      f"<= TV = {tv:.6f}")
print(f"  JS+_min = {js_m_extended(p1, p2, MeanSpec.minimum()):.6f} "
      f">= J/4 - TV = {jeffreys(p1, p2) / 4 - tv:.6f}")
