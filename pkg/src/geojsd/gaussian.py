"""Closed-form divergences between multivariate Gaussians.

KL, Jeffreys, skew Bhattacharyya, geometric JSD (normalized and extended),
the parameters of normalized geometric mixtures, and the erf-based
univariate total variation.  The ordinary Jensen-Shannon divergence between
Gaussians has no closed form (the entropy of a two-component mixture does
not); geometric mixtures of Gaussians stay Gaussian, which is exactly why
the geometric JSD admits the formulas below.  For arithmetic mixtures use
the Monte Carlo estimators in :mod:`geojsd.estimate`.

All matrix work goes through Cholesky factorizations: the
positive-definiteness check, log-determinants and linear solves share them,
and no explicit inverse is formed except where the result itself is a
matrix (the harmonic barycenter).

Conventions: natural parameters are ``theta_v = Sigma^-1 mu`` and
``theta_M = Sigma^-1 / 2`` (the positive-definite sign choice, fixed by
requiring that the cumulant reproduce the quadrature-validated KL through
the Bregman route); divergences are reported in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.special import erf

from . import expfam
from .errors import DegenerateQuadratic, InvalidAlpha, NotPositiveDefinite

__all__ = [
    "GaussianParams",
    "GaussianNatural",
    "to_natural",
    "from_natural",
    "natural_flat",
    "cumulant",
    "cumulant_ordinary",
    "kl_gaussian",
    "jeffreys_gaussian",
    "bhattacharyya_gaussian",
    "bhattacharyya_coefficient_gaussian",
    "geometric_mixture_params",
    "gjsd_gaussian",
    "gjsd_extended_gaussian",
    "tv_gaussian_1d",
]

_SYMMETRY_TOL = 1e-12
# below this relative spread the TV crossover quadratic is numerically
# singular and the equal-variance branch applies
_EQUAL_SIGMA_TOL = 1e-12


def _validated_spd(name: str, mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NotPositiveDefinite(f"{name} must be a square matrix")
    scale = max(1.0, float(np.abs(mat).max()))
    if float(np.abs(mat - mat.T).max()) > _SYMMETRY_TOL * scale:
        raise NotPositiveDefinite(f"{name} is not symmetric")
    return 0.5 * (mat + mat.T)


def _chol_lower(name: str, mat: np.ndarray) -> np.ndarray:
    try:
        return cholesky(mat, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"{name} is not positive-definite") from exc


def _logdet(chol_lower: np.ndarray) -> float:
    return 2.0 * float(np.log(np.diag(chol_lower)).sum())


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """Moment parameters (mu, Sigma) of a d-variate Gaussian."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self) -> None:
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        sigma = _validated_spd("sigma", self.sigma)
        if mu.ndim != 1 or sigma.shape != (mu.size, mu.size):
            raise NotPositiveDefinite("mu and sigma dimensions do not match")
        _chol_lower("sigma", sigma)
        mu = mu.copy()
        mu.setflags(write=False)
        sigma = sigma.copy()
        sigma.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self) -> int:
        return int(self.mu.size)

    @classmethod
    def standard(cls, d: int) -> "GaussianParams":
        return cls(np.zeros(d), np.eye(d))

    @classmethod
    def univariate(cls, mean: float, variance: float) -> "GaussianParams":
        return cls(np.array([mean]), np.array([[variance]]))


@dataclass(frozen=True, eq=False)
class GaussianNatural:
    """Natural parameters (theta_v, theta_M) with theta_M = Sigma^-1 / 2."""

    theta_v: np.ndarray
    theta_m: np.ndarray

    def __post_init__(self) -> None:
        theta_v = np.atleast_1d(np.asarray(self.theta_v, dtype=float))
        theta_m = _validated_spd("theta_M", self.theta_m)
        if theta_m.shape != (theta_v.size, theta_v.size):
            raise NotPositiveDefinite("theta_v and theta_M dimensions do not match")
        _chol_lower("theta_M", theta_m)
        theta_v = theta_v.copy()
        theta_v.setflags(write=False)
        theta_m = theta_m.copy()
        theta_m.setflags(write=False)
        object.__setattr__(self, "theta_v", theta_v)
        object.__setattr__(self, "theta_m", theta_m)

    @property
    def dim(self) -> int:
        return int(self.theta_v.size)


def to_natural(g: GaussianParams) -> GaussianNatural:
    """(mu, Sigma) -> (Sigma^-1 mu, Sigma^-1 / 2)."""
    chol = _chol_lower("sigma", g.sigma)
    theta_v = cho_solve((chol, True), g.mu)
    precision = cho_solve((chol, True), np.eye(g.dim))
    return GaussianNatural(theta_v, 0.25 * (precision + precision.T))


def from_natural(n: GaussianNatural) -> GaussianParams:
    """(theta_v, theta_M) -> (theta_M^-1 theta_v / 2, theta_M^-1 / 2)."""
    chol = _chol_lower("theta_M", n.theta_m)
    sigma = 0.5 * cho_solve((chol, True), np.eye(n.dim))
    mu = 0.5 * cho_solve((chol, True), n.theta_v)
    return GaussianParams(mu, 0.5 * (sigma + sigma.T))


def natural_flat(g: GaussianParams) -> np.ndarray:
    """Flat natural parameter in the packing of :func:`expfam.gaussian_family`."""
    n = to_natural(g)
    return expfam.pack_gaussian_theta(n.theta_v, n.theta_m)


def cumulant(n: GaussianNatural) -> float:
    """Cumulant F(theta) = (d log pi - log|theta_M| + theta_v' theta_M^-1 theta_v / 2) / 2."""
    chol = _chol_lower("theta_M", n.theta_m)
    half = solve_triangular(chol, n.theta_v, lower=True)
    quad = float(half @ half)
    return 0.5 * (n.dim * math.log(math.pi) - _logdet(chol) + 0.5 * quad)


def cumulant_ordinary(g: GaussianParams) -> float:
    """Cumulant in moment parameters: (mu' Sigma^-1 mu + log|Sigma| + d log 2pi) / 2."""
    chol = _chol_lower("sigma", g.sigma)
    half = solve_triangular(chol, g.mu, lower=True)
    quad = float(half @ half)
    return 0.5 * (quad + _logdet(chol) + g.dim * math.log(2.0 * math.pi))


# ---------------------------------------------------------------------------
# Divergences
# ---------------------------------------------------------------------------

def kl_gaussian(g1: GaussianParams, g2: GaussianParams) -> float:
    """KL(N1, N2) = (tr(S2^-1 S1) + (m2-m1)' S2^-1 (m2-m1) - d + log|S2|/|S1|) / 2."""
    _check_same_dim(g1, g2)
    chol1 = _chol_lower("sigma1", g1.sigma)
    chol2 = _chol_lower("sigma2", g2.sigma)
    trace = float(np.trace(cho_solve((chol2, True), g1.sigma)))
    half = solve_triangular(chol2, g2.mu - g1.mu, lower=True)
    quad = float(half @ half)
    return 0.5 * (trace + quad - g1.dim + _logdet(chol2) - _logdet(chol1))


def jeffreys_gaussian(g1: GaussianParams, g2: GaussianParams) -> float:
    """Jeffreys divergence in closed form.

    ``(tr(S1 S2^-1 + S2 S1^-1) + (m1-m2)'(S1^-1 + S2^-1)(m1-m2) - 2d) / 2``,
    identical to ``kl_gaussian(g1, g2) + kl_gaussian(g2, g1)``.
    """
    _check_same_dim(g1, g2)
    chol1 = _chol_lower("sigma1", g1.sigma)
    chol2 = _chol_lower("sigma2", g2.sigma)
    trace = float(np.trace(cho_solve((chol2, True), g1.sigma))
                  + np.trace(cho_solve((chol1, True), g2.sigma)))
    diff = g1.mu - g2.mu
    half1 = solve_triangular(chol1, diff, lower=True)
    half2 = solve_triangular(chol2, diff, lower=True)
    quad = float(half1 @ half1 + half2 @ half2)
    return 0.5 * (trace + quad - 2.0 * g1.dim)


def geometric_mixture_params(g1: GaussianParams, g2: GaussianParams,
                             alpha: float = 0.5) -> GaussianParams:
    """Parameters of the normalized geometric mixture p1^alpha p2^(1-alpha) / Z.

    Sigma_alpha is the matrix harmonic barycenter
    ``(alpha S1^-1 + (1-alpha) S2^-1)^-1`` and
    ``mu_alpha = Sigma_alpha (alpha S1^-1 m1 + (1-alpha) S2^-1 m2)``.
    """
    _check_alpha(alpha)
    _check_same_dim(g1, g2)
    chol1 = _chol_lower("sigma1", g1.sigma)
    chol2 = _chol_lower("sigma2", g2.sigma)
    eye = np.eye(g1.dim)
    prec = (alpha * cho_solve((chol1, True), eye)
            + (1.0 - alpha) * cho_solve((chol2, True), eye))
    prec = 0.5 * (prec + prec.T)
    eta = (alpha * cho_solve((chol1, True), g1.mu)
           + (1.0 - alpha) * cho_solve((chol2, True), g2.mu))
    chol_p = _chol_lower("harmonic barycenter precision", prec)
    sigma_alpha = cho_solve((chol_p, True), eye)
    mu_alpha = cho_solve((chol_p, True), eta)
    return GaussianParams(mu_alpha, 0.5 * (sigma_alpha + sigma_alpha.T))


def bhattacharyya_gaussian(g1: GaussianParams, g2: GaussianParams,
                           alpha: float = 0.5) -> float:
    """Skew Bhattacharyya distance B_alpha between Gaussians, in closed form.

    ``(a m1'S1^-1 m1 + (1-a) m2'S2^-1 m2 - m_a'S_a^-1 m_a
    + log(|S1|^a |S2|^(1-a) / |S_a|)) / 2`` with the harmonic barycenter
    ``S_a``; equal to the skew Jensen divergence of the cumulant on natural
    parameters.
    """
    _check_alpha(alpha)
    _check_same_dim(g1, g2)
    chol1 = _chol_lower("sigma1", g1.sigma)
    chol2 = _chol_lower("sigma2", g2.sigma)
    eye = np.eye(g1.dim)
    prec = (alpha * cho_solve((chol1, True), eye)
            + (1.0 - alpha) * cho_solve((chol2, True), eye))
    prec = 0.5 * (prec + prec.T)
    eta = (alpha * cho_solve((chol1, True), g1.mu)
           + (1.0 - alpha) * cho_solve((chol2, True), g2.mu))
    chol_p = _chol_lower("harmonic barycenter precision", prec)
    mu_alpha = cho_solve((chol_p, True), eta)

    half1 = solve_triangular(chol1, g1.mu, lower=True)
    half2 = solve_triangular(chol2, g2.mu, lower=True)
    quad = (alpha * float(half1 @ half1)
            + (1.0 - alpha) * float(half2 @ half2)
            - float(mu_alpha @ eta))
    # log|S_a| = -log|prec|
    logdets = (alpha * _logdet(chol1) + (1.0 - alpha) * _logdet(chol2)
               + _logdet(chol_p))
    return 0.5 * (quad + logdets)


def bhattacharyya_coefficient_gaussian(g1: GaussianParams, g2: GaussianParams,
                                       alpha: float = 0.5) -> float:
    """Skew Bhattacharyya coefficient exp(-B_alpha), the geometric-mixture mass."""
    return math.exp(-bhattacharyya_gaussian(g1, g2, alpha))


def gjsd_gaussian(g1: GaussianParams, g2: GaussianParams,
                  alpha: float = 0.5, beta: float = 0.5) -> float:
    """Skew geometric JSD between Gaussians (normalized mixture).

    ``beta KL(N1, N_alpha) + (1-beta) KL(N2, N_alpha)`` with ``N_alpha`` the
    normalized geometric mixture; for alpha = beta = 1/2 it equals
    ``jeffreys/4 - bhattacharyya``.
    """
    _check_alpha(beta)
    mix = geometric_mixture_params(g1, g2, alpha)
    return beta * kl_gaussian(g1, mix) + (1.0 - beta) * kl_gaussian(g2, mix)


def gjsd_extended_gaussian(g1: GaussianParams, g2: GaussianParams) -> float:
    """Extended geometric JSD: jeffreys/4 + exp(-bhattacharyya) - 1 (nats).

    Exceeds :func:`gjsd_gaussian` by the gap ``Z - log Z - 1`` with
    ``Z = exp(-B)``.
    """
    quarter_j = 0.25 * jeffreys_gaussian(g1, g2)
    return quarter_j + math.exp(-bhattacharyya_gaussian(g1, g2)) - 1.0


# ---------------------------------------------------------------------------
# Univariate total variation
# ---------------------------------------------------------------------------

def _normal_cdf(x: float, mu: float, sigma: float) -> float:
    return 0.5 * (1.0 + erf((x - mu) / (sigma * math.sqrt(2.0))))


def tv_gaussian_1d(m1: float, s1: float, m2: float, s2: float) -> float:
    """Total variation between N(m1, s1^2) and N(m2, s2^2), via erf.

    Equal variances: the densities cross once at ``x* = (m1 + m2)/2`` and
    ``TV = |Phi(x*; m2, s) - Phi(x*; m1, s)|`` (no extra 1/2 factor: the two
    half-line contributions of ``|p1 - p2|/2`` are equal).  Unequal
    variances: the crossovers are the roots of
    ``a x^2 + b x + c = 0`` with ``a = 1/s1^2 - 1/s2^2``,
    ``b = 2 (m2/s2^2 - m1/s1^2)``, ``c = m1^2/s1^2 - m2^2/s2^2
    - 2 log(s2/s1)`` (coefficients re-derived from p1(x) = p2(x)), combined
    through CDF differences at the two roots.
    """
    if s1 <= 0.0 or s2 <= 0.0:
        raise NotPositiveDefinite("standard deviations must be positive")
    if abs(s1 - s2) <= _EQUAL_SIGMA_TOL * max(s1, s2):
        if m1 == m2:
            return 0.0
        sigma = 0.5 * (s1 + s2)
        x_star = 0.5 * (m1 + m2)  # = (m1^2 - m2^2) / (2 (m1 - m2))
        value = abs(_normal_cdf(x_star, m2, sigma) - _normal_cdf(x_star, m1, sigma))
        return min(max(value, 0.0), 1.0)

    a = 1.0 / s1 ** 2 - 1.0 / s2 ** 2
    b = 2.0 * (m2 / s2 ** 2 - m1 / s1 ** 2)
    c = m1 ** 2 / s1 ** 2 - m2 ** 2 / s2 ** 2 - 2.0 * math.log(s2 / s1)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise DegenerateQuadratic(
            "crossover quadratic has no real roots; variances too close"
        )
    root = math.sqrt(disc)
    x_lo = (-b - root) / (2.0 * a)
    x_hi = (-b + root) / (2.0 * a)
    x_lo, x_hi = min(x_lo, x_hi), max(x_lo, x_hi)

    def cdf_gap(x: float) -> float:
        return _normal_cdf(x, m1, s1) - _normal_cdf(x, m2, s2)

    gap_lo, gap_hi = cdf_gap(x_lo), cdf_gap(x_hi)
    value = 0.5 * (abs(gap_lo) + abs(gap_hi - gap_lo) + abs(gap_hi))
    return min(max(value, 0.0), 1.0)


def _check_same_dim(g1: GaussianParams, g2: GaussianParams) -> None:
    if g1.dim != g2.dim:
        raise NotPositiveDefinite(
            f"dimension mismatch: {g1.dim} vs {g2.dim}"
        )


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise InvalidAlpha(f"skew weight must lie in (0, 1), got {alpha}")
