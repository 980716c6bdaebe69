"""Closed-form divergences between Gaussians, checked against quadrature.

The ordinary JSD between Gaussians has no closed form (the mixture entropy
does not), but the geometric JSD does: geometric mixtures of Gaussians stay
Gaussian, with harmonic-barycenter covariance.
"""

import math

import numpy as np

from geojsd import (
    GaussianParams,
    bhattacharyya_gaussian,
    cumulant,
    geometric_mixture_params,
    gjsd_extended_gaussian,
    gjsd_gaussian,
    jeffreys_gaussian,
    kl_gaussian,
    to_natural,
    tv_gaussian_1d,
)
from geojsd.verification import gaussian_quadrature_oracles

g1 = GaussianParams.univariate(0.0, 1.0)
g2 = GaussianParams.univariate(1.0, 2.0)
print("N(0, 1) vs N(1, 2):")
oracle = gaussian_quadrature_oracles(0.0, 1.0, 1.0, math.sqrt(2.0))
rows = [
    ("KL", kl_gaussian(g1, g2), oracle["kl"]),
    ("Jeffreys", jeffreys_gaussian(g1, g2), oracle["jeffreys"]),
    ("Bhattacharyya", bhattacharyya_gaussian(g1, g2), oracle["bhattacharyya"]),
    ("geometric JSD", gjsd_gaussian(g1, g2), oracle["gjsd"]),
    ("extended G-JSD", gjsd_extended_gaussian(g1, g2), oracle["gjsd_extended"]),
    ("total variation", tv_gaussian_1d(0.0, 1.0, 1.0, math.sqrt(2.0)),
     oracle["tv"]),
]
print(f"{'divergence':>16}  {'closed form':>12}  {'quadrature':>12}  {'diff':>9}")
for name, closed, quad in rows:
    print(f"{name:>16}  {closed:12.8f}  {quad:12.8f}  {abs(closed - quad):9.2e}")
print()

# The normalized geometric mixture of two Gaussians is the Gaussian with
# harmonic-barycenter covariance.
mix = geometric_mixture_params(g1, g2, alpha=0.5)
print(f"geometric mixture of the pair: mu = {mix.mu[0]:.6f}, "
      f"sigma^2 = {mix.sigma[0, 0]:.6f}")
print()

# Natural parameters and the cumulant, the engine behind the closed forms.
n = to_natural(GaussianParams.univariate(2.0, 4.0))
print(f"N(2, 4) natural parameters: theta_v = {n.theta_v[0]:.4f}, "
      f"theta_M = {n.theta_m[0, 0]:.4f}")
print(f"cumulant F(theta) = {cumulant(n):.7f}")
print()

# A trivariate pair: the identity route (J/4 - B) agrees with the
# KL-to-mixture route to machine precision.
rng = np.random.default_rng(3)
a1, a2 = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
h1 = GaussianParams(rng.normal(size=3), a1 @ a1.T + np.eye(3))
h2 = GaussianParams(rng.normal(size=3), a2 @ a2.T + np.eye(3))
via_kl = gjsd_gaussian(h1, h2)
via_identity = 0.25 * jeffreys_gaussian(h1, h2) - bhattacharyya_gaussian(h1, h2)
print("trivariate pair, geometric JSD:")
print(f"  KL-to-mixture route   = {via_kl:.12f}")
print(f"  J/4 - B identity route = {via_identity:.12f}")
print(f"  difference            = {abs(via_kl - via_identity):.2e}")
