"""Square roots that fail to be metrics.

sqrt(JSD) is a genuine metric, but replacing the arithmetic mixture with the
geometric one destroys the triangle inequality: a triple of two-atom
densities exhibits strictly positive defects for the geometric JSD, its
extended variant, and the KL between arithmetic and geometric mixtures.
Distances below use the summed (two-term, unnormalized by 1/2)
symmetrization in nats for the two geometric JSD variants.
"""

import math

import numpy as np

from geojsd import (
    DiscreteDensity,
    MeanSpec,
    js,
    js_m,
    js_m_extended,
    kl_between_mixtures,
)

p1 = DiscreteDensity.probability([0.55, 0.45])
p2 = DiscreteDensity.probability([0.002, 0.998])
p3 = DiscreteDensity.probability([0.045, 0.955])
geometric = MeanSpec.geometric()
arithmetic = MeanSpec.arithmetic()


def triangle_report(name, distance):
    d12 = distance(p1, p2)
    d13 = distance(p1, p3)
    d32 = distance(p3, p2)
    defect = d12 - (d13 + d32)
    verdict = "VIOLATED" if defect > 0 else "holds"
    print(f"{name}:")
    print(f"  d(p1,p2) = {d12:.7f}")
    print(f"  d(p1,p3) = {d13:.7f}")
    print(f"  d(p3,p2) = {d32:.7f}")
    print(f"  d(p1,p2) - d(p1,p3) - d(p3,p2) = {defect:+.7f}  -> {verdict}")
    print()


print("triple: p1 = (0.55, 0.45), p2 = (0.002, 0.998), p3 = (0.045, 0.955)")
print()
triangle_report("sqrt of plain JSD",
                lambda a, b: math.sqrt(js(a, b)))
triangle_report("sqrt of summed geometric JSD",
                lambda a, b: math.sqrt(2.0 * js_m(a, b, geometric)))
triangle_report("sqrt of summed extended geometric JSD",
                lambda a, b: math.sqrt(2.0 * js_m_extended(a, b, geometric)))
triangle_report("sqrt of KL(A-mixture, G-mixture)",
                lambda a, b: math.sqrt(kl_between_mixtures(a, b, arithmetic,
                                                           geometric)))

# and sqrt(JSD) really is a metric: no violations over random triples
rng = np.random.default_rng(0)
worst = -np.inf
for _ in range(2000):
    w = rng.uniform(0.01, 1.0, (3, 6))
    a, b, c = (DiscreteDensity.probability(row / row.sum()) for row in w)
    defect = math.sqrt(js(a, b)) - math.sqrt(js(a, c)) - math.sqrt(js(c, b))
    worst = max(worst, defect)
print(f"sqrt(JSD) worst triangle defect over 2000 random triples: "
      f"{worst:+.3e} (never positive)")
