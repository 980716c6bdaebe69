"""Tour of the exact divergences between finite-support densities.

Everything on a small two-atom pair so every number is easy to check by
hand; all values in nats unless stated otherwise.
"""

import numpy as np

from geojsd import (
    BITS,
    DiscreteDensity,
    MeanSpec,
    bhattacharyya,
    bhattacharyya_coefficient,
    chernoff,
    jeffreys,
    js,
    js_m,
    js_m_extended,
    kl,
    kl_between_mixtures,
    m_mixture,
    taneja_t,
    total_variation,
)

p = DiscreteDensity.probability([0.5, 0.5])
q = DiscreteDensity.probability([0.25, 0.75])

print("two densities:", p.weights, q.weights)
print()
print(f"KL(p, q)            = {kl(p, q):.7f}")
print(f"KL(q, p)            = {kl(q, p):.7f}   (asymmetric)")
print(f"Jeffreys            = {jeffreys(p, q):.7f}   (the sum of both)")
print(f"JSD                 = {js(p, q):.7f}")
print(f"JSD in bits         = {js(p, q, BITS):.7f}")
print(f"total variation     = {total_variation(p, q):.7f}")
print()

# The geometric mixture sqrt(p*q) does not integrate to one; its mass is
# the Bhattacharyya coefficient, and -log of it the Bhattacharyya distance.
geometric = MeanSpec.geometric()
mixture, z = m_mixture(p, q, geometric)
print(f"geometric mixture   = {np.round(mixture.weights, 7)} with Z = {z:.7f}")
print(f"BC coefficient      = {bhattacharyya_coefficient(p, q):.7f}")
print(f"Bhattacharyya       = {bhattacharyya(p, q):.7f}")
print()

# Swapping the arithmetic mixture for the geometric one gives the geometric
# JSD; skipping the normalization gives the extended variant.  The two
# differ exactly by Z - log Z - 1.
js_g = js_m(p, q, geometric)
js_g_plus = js_m_extended(p, q, geometric)
print(f"geometric JSD       = {js_g:.7f}")
print(f"extended geom. JSD  = {js_g_plus:.7f}")
print(f"gap                 = {js_g_plus - js_g:.7e}")
print(f"Z - log Z - 1       = {z - np.log(z) - 1.0:.7e}")
print()
print(f"identity J/4 - B    = {jeffreys(p, q) / 4 - bhattacharyya(p, q):.7f}")
print(f"identity J/4 + BC-1 = "
      f"{jeffreys(p, q) / 4 + bhattacharyya_coefficient(p, q) - 1.0:.7f}")
print()

# Chernoff information: the best skew exponent for the Bhattacharyya
# distance; at the optimum both reverse KL terms agree.
value, alpha_star = chernoff(p, q)
best_mix, _ = m_mixture(p, q, MeanSpec.geometric(alpha_star))
print(f"Chernoff information = {value:.7f} at alpha* = {alpha_star:.7f}")
print(f"equalizer check      : KL(m*, p) = {kl(best_mix, p):.9f}, "
      f"KL(m*, q) = {kl(best_mix, q):.9f}")
print()

print(f"Taneja T             = {taneja_t(p, q):.7f}")
print(f"KL(A-mix, G-mix)     = {kl_between_mixtures(p, q, MeanSpec.arithmetic(), geometric):.7e}")
