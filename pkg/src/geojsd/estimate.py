"""Stochastic estimation for divergences without closed forms.

Importance-sampling estimators for mixture normalizers and extended-KL
terms, and the projective gamma-divergence with exact, closed-form,
quadrature, and Monte Carlo integration routes.

Determinism contract: estimates depend only on ``(samples, seed,
chunk_size)``.  Each fixed-size chunk draws from its own counter-seeded
generator (``seed xor chunk_index``) and partial sums are merged in chunk
order, so serial and thread-parallel runs produce bit-identical results.

Everything runs in log space: mixture means of density values are taken via
:func:`geojsd.means.log_evaluate` and the gamma-divergence moment integrals
``I_gamma`` via log-sum-exp, so widely separated densities do not underflow.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad as _quad
from scipy.special import logsumexp

from . import means
from .discrete import DiscreteDensity
from .errors import DivergentIntegral, DomainViolation, ProposalSupportViolation
from .expfam import ExpFamilyDensity
from .gaussian import GaussianParams
from .means import MeanSpec

__all__ = [
    "Proposal",
    "EstimatorConfig",
    "SampledDensity",
    "gaussian_sampled",
    "categorical_sampled",
    "arithmetic_mixture_proposal",
    "estimate_z",
    "estimate_kl_extended",
    "estimate_js_m_extended",
    "gamma_divergence",
    "js_m_gamma",
]

_MASK64 = (1 << 64) - 1


class Proposal(Enum):
    """Which density supplies the importance-sampling draws."""

    FIRST_ARGUMENT = "first"
    SECOND_ARGUMENT = "second"
    CUSTOM = "custom"


@dataclass(frozen=True)
class EstimatorConfig:
    samples: int
    seed: int = 0
    chunk_size: int = 1 << 16
    proposal: Proposal = Proposal.FIRST_ARGUMENT

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if not (0 <= self.seed <= _MASK64):
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True, eq=False)
class SampledDensity:
    """A density known through its log-density, optionally with a sampler.

    ``log_density(x)`` must be finite on the sampler's support and may be
    unnormalized *except* when the density serves as an importance-sampling
    proposal, where the exact (normalized) log-density is required.
    ``sampler(rng, n)`` draws n points.
    """

    log_density: Callable[[np.ndarray], np.ndarray]
    sampler: Callable[[np.random.Generator, int], np.ndarray] | None = None


def gaussian_sampled(g: GaussianParams) -> SampledDensity:
    """A multivariate Gaussian as a samplable density (1-D draws stay flat)."""
    mu = g.mu
    d = g.dim
    chol = np.linalg.cholesky(g.sigma)  # PD validated at construction
    log_norm = -0.5 * d * math.log(2.0 * math.pi) - float(np.log(np.diag(chol)).sum())

    if d == 1:
        sd = float(chol[0, 0])
        m0 = float(mu[0])

        def log_density(x: np.ndarray) -> np.ndarray:
            z = (np.asarray(x, dtype=float) - m0) / sd
            return log_norm - 0.5 * z * z

        def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
            return m0 + sd * rng.standard_normal(n)

        return SampledDensity(log_density, sampler)

    def log_density(x: np.ndarray) -> np.ndarray:
        diff = np.atleast_2d(np.asarray(x, dtype=float)) - mu
        z = np.linalg.solve(chol, diff.T).T
        return log_norm - 0.5 * (z * z).sum(axis=1)

    def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.standard_normal((n, d)) @ chol.T + mu

    return SampledDensity(log_density, sampler)


def categorical_sampled(p: DiscreteDensity) -> SampledDensity:
    """A finite density as a samplable categorical over its support indices."""
    w = p.weights / p.total_mass
    with np.errstate(divide="ignore"):
        log_w = np.log(w)

    def log_density(x: np.ndarray) -> np.ndarray:
        return log_w[np.asarray(x, dtype=int)]

    def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.choice(w.size, size=n, p=w)

    return SampledDensity(log_density, sampler)


def arithmetic_mixture_proposal(d1: SampledDensity, d2: SampledDensity) -> SampledDensity:
    """The balanced two-component mixture (d1 + d2)/2 as a proposal.

    Its log-density is computed through the same expression as the balanced
    arithmetic mean of the component densities, so a Z estimator matched to
    this proposal has exactly zero variance.
    """
    if d1.sampler is None or d2.sampler is None:
        raise ValueError("both components must be samplable")
    balanced = MeanSpec.arithmetic()

    def log_density(x: np.ndarray) -> np.ndarray:
        return np.asarray(means.log_evaluate(balanced, d1.log_density(x),
                                             d2.log_density(x)))

    def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
        pick_first = rng.random(n) < 0.5
        x1 = d1.sampler(rng, n)
        x2 = d2.sampler(rng, n)
        if x1.ndim > 1:
            pick_first = pick_first[:, None]
        return np.where(pick_first, x1, x2)

    return SampledDensity(log_density, sampler)


# ---------------------------------------------------------------------------
# Chunked deterministic driver
# ---------------------------------------------------------------------------

def _child_seed(seed: int, salt: int) -> int:
    """Derive an independent 64-bit stream seed (splitmix64 step)."""
    z = (seed + salt * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _chunks(cfg: EstimatorConfig) -> list[tuple[int, int]]:
    out = []
    done = 0
    k = 0
    while done < cfg.samples:
        n = min(cfg.chunk_size, cfg.samples - done)
        out.append((k, n))
        done += n
        k += 1
    return out


def _map_chunks(cfg: EstimatorConfig, fn: Callable[[int, int], tuple],
                workers: int) -> list[tuple]:
    plan = _chunks(cfg)
    if workers <= 1 or len(plan) == 1:
        return [fn(k, n) for k, n in plan]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda kn: fn(*kn), plan))


def _mean_and_stderr(partials: Sequence[tuple[float, float]],
                     samples: int) -> tuple[float, float]:
    total = 0.0
    total_sq = 0.0
    for part_sum, part_sq in partials:
        total += part_sum
        total_sq += part_sq
    mean = total / samples
    if samples == 1 or not math.isfinite(total_sq):
        return mean, math.inf if not math.isfinite(total_sq) else 0.0
    var = max(total_sq - total * total / samples, 0.0) / (samples - 1)
    return mean, math.sqrt(var / samples)


def _resolve_proposal(cfg: EstimatorConfig, p1: SampledDensity,
                      p2: SampledDensity,
                      proposal: SampledDensity | None) -> SampledDensity:
    if proposal is not None:
        chosen = proposal
    elif cfg.proposal is Proposal.FIRST_ARGUMENT:
        chosen = p1
    elif cfg.proposal is Proposal.SECOND_ARGUMENT:
        chosen = p2
    else:
        raise ValueError("custom proposal requested but none supplied")
    if chosen.sampler is None:
        raise ValueError("proposal density has no sampler")
    return chosen


# ---------------------------------------------------------------------------
# Monte Carlo estimators
# ---------------------------------------------------------------------------

def estimate_z(p1: SampledDensity, p2: SampledDensity, m: MeanSpec,
               cfg: EstimatorConfig, proposal: SampledDensity | None = None,
               workers: int = 1) -> tuple[float, float]:
    """Importance-sampling estimate of the mixture normalizer Z_M.

    ``Z_M = integral of M_alpha(p1(x), p2(x))``, estimated as the average of
    ``M(p1(x_i), p2(x_i)) / r(x_i)`` over draws from the proposal r.
    Unbiased; returns ``(estimate, std_error)``.
    """
    r = _resolve_proposal(cfg, p1, p2, proposal)

    def one_chunk(k: int, n: int) -> tuple[float, float]:
        rng = np.random.default_rng(cfg.seed ^ k)
        x = r.sampler(rng, n)
        log_mix = np.asarray(means.log_evaluate(m, p1.log_density(x),
                                                p2.log_density(x)))
        log_r = np.asarray(r.log_density(x), dtype=float)
        bad = np.isneginf(log_r) & (log_mix > -np.inf)
        if np.any(bad):
            raise ProposalSupportViolation(
                "proposal has zero density where the mixture is positive"
            )
        with np.errstate(invalid="ignore"):
            g = np.exp(log_mix - log_r)
        g = np.where(np.isneginf(log_mix), 0.0, g)
        return float(g.sum()), float((g * g).sum())

    return _mean_and_stderr(_map_chunks(cfg, one_chunk, workers), cfg.samples)


def estimate_kl_extended(p1: SampledDensity, p2: SampledDensity, m: MeanSpec,
                         cfg: EstimatorConfig,
                         proposal: SampledDensity | None = None,
                         workers: int = 1) -> tuple[float, float]:
    """Monte Carlo estimate of the extended KL to the unnormalized M-mixture.

    Estimates ``KL+(p1, M~) = integral of p1 log(p1/M~) + M~ - p1`` with
    ``M~(x) = M_alpha(p1(x), p2(x))``.  With the default proposal r = p1
    the per-sample term is ``log(p1/M~) + M~/p1 - 1``.  The estimand is
    nonnegative but finite-sample estimates may dip below zero; they are
    reported as-is (clamping would bias the estimator).
    """
    r = _resolve_proposal(cfg, p1, p2, proposal)
    self_proposal = r is p1

    def one_chunk(k: int, n: int) -> tuple[float, float]:
        rng = np.random.default_rng(cfg.seed ^ k)
        x = r.sampler(rng, n)
        l1 = np.asarray(p1.log_density(x), dtype=float)
        log_mix = np.asarray(means.log_evaluate(m, l1, p2.log_density(x)))
        if self_proposal:
            g = (l1 - log_mix) + np.exp(log_mix - l1) - 1.0
        else:
            log_r = np.asarray(r.log_density(x), dtype=float)
            bad = np.isneginf(log_r) & ((l1 > -np.inf) | (log_mix > -np.inf))
            if np.any(bad):
                raise ProposalSupportViolation(
                    "proposal has zero density on the integrand's support"
                )
            weight = np.exp(l1 - log_r)
            g = weight * (l1 - log_mix) + np.exp(log_mix - log_r) - weight
        return float(g.sum()), float((g * g).sum())

    return _mean_and_stderr(_map_chunks(cfg, one_chunk, workers), cfg.samples)


def estimate_js_m_extended(p1: SampledDensity, p2: SampledDensity, m: MeanSpec,
                           cfg: EstimatorConfig,
                           workers: int = 1) -> tuple[float, float]:
    """Monte Carlo estimate of the extended M-JSD.

    Averages the two extended-KL estimates, each with its own argument as
    the proposal (independent streams derived from the seed); standard
    errors combine in quadrature.
    """
    if p1.sampler is None or p2.sampler is None:
        raise ValueError("both densities must be samplable")
    cfg1 = replace(cfg, proposal=Proposal.FIRST_ARGUMENT)
    cfg2 = replace(cfg, proposal=Proposal.FIRST_ARGUMENT,
                   seed=_child_seed(cfg.seed, 1))
    first, se1 = estimate_kl_extended(p1, p2, m, cfg1, workers=workers)
    second, se2 = estimate_kl_extended(p2, p1, m.swapped(), cfg2, workers=workers)
    return 0.5 * (first + second), 0.5 * math.hypot(se1, se2)


# ---------------------------------------------------------------------------
# Gamma divergences
# ---------------------------------------------------------------------------

def _combine_gamma(log_i11: float, log_i12: float, log_i22: float,
                   gamma: float) -> float:
    return (log_i11 / (gamma * (1.0 + gamma)) - log_i12 / gamma
            + log_i22 / (1.0 + gamma))


def _log_i_discrete(w1: np.ndarray, w2: np.ndarray, gamma: float) -> float:
    pos = w1 > 0.0
    with np.errstate(divide="ignore"):
        terms = np.log(w1[pos]) + gamma * np.where(w2[pos] > 0.0,
                                                   np.log(w2[pos]), -np.inf)
    if not np.any(np.isfinite(terms)):
        return -math.inf
    return float(logsumexp(terms))


def _same_family(a, b) -> bool:
    return a is b or (a.name != "" and a.name == b.name and a.dim == b.dim)


def _log_i_expfam(e1: ExpFamilyDensity, e2: ExpFamilyDensity,
                  gamma: float) -> float:
    fam = e1.family
    if not _same_family(fam, e2.family):
        raise ValueError("closed-form route needs densities of one family")
    t1 = np.asarray(e1.theta, dtype=float)
    t2 = np.asarray(e2.theta, dtype=float)
    mixed = t1 + gamma * t2
    if not fam.domain_check(mixed):
        raise DivergentIntegral(
            "theta1 + gamma*theta2 left the natural parameter space"
        )
    try:
        f_mixed = fam.cumulant(mixed)
        f1 = fam.cumulant(t1)
        f2 = fam.cumulant(t2)
    except DomainViolation as exc:
        raise DivergentIntegral(str(exc)) from exc
    return (f_mixed - f1 - gamma * f2
            + e1.log_scale + gamma * e2.log_scale)


def _log_i_quadrature(ld1: Callable, ld2: Callable, gamma: float,
                      support: tuple[float, float]) -> float:
    lo, hi = support

    def log_integrand(x: float) -> float:
        return float(ld1(np.asarray(x, dtype=float))
                     + gamma * ld2(np.asarray(x, dtype=float)))

    grid = np.linspace(lo, hi, 2049)
    values = np.array([log_integrand(x) for x in grid])
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return -math.inf
    shift = float(finite.max())

    def integrand(x: float) -> float:
        v = log_integrand(x) - shift
        return math.exp(v) if v > -745.0 else 0.0

    value, _ = _quad(integrand, lo, hi, limit=300)
    if value <= 0.0:
        return -math.inf
    return shift + math.log(value)


def _log_i_mc_triplet(q1: SampledDensity, q2: SampledDensity, gamma: float,
                      proposal: SampledDensity, cfg: EstimatorConfig,
                      workers: int) -> tuple[float, float, float]:
    if proposal.sampler is None:
        raise ValueError("Monte Carlo route needs a samplable proposal")

    def one_chunk(k: int, n: int) -> tuple[float, float, float]:
        rng = np.random.default_rng(cfg.seed ^ k)
        x = proposal.sampler(rng, n)
        l1 = np.asarray(q1.log_density(x), dtype=float)
        l2 = np.asarray(q2.log_density(x), dtype=float)
        lr = np.asarray(proposal.log_density(x), dtype=float)
        return (float(logsumexp((1.0 + gamma) * l1 - lr)),
                float(logsumexp(l1 + gamma * l2 - lr)),
                float(logsumexp((1.0 + gamma) * l2 - lr)))

    partials = _map_chunks(cfg, one_chunk, workers)
    log_s = math.log(cfg.samples)
    lses = [np.logaddexp.reduce([p[i] for p in partials]) for i in range(3)]
    return tuple(float(v) - log_s for v in lses)  # type: ignore[return-value]


def gamma_divergence(q1, q2, gamma: float, integrator: str = "auto", *,
                     cfg: EstimatorConfig | None = None,
                     proposal: SampledDensity | None = None,
                     support: tuple[float, float] | None = None,
                     workers: int = 1) -> float:
    """Projective gamma-divergence between positive densities.

    ``D_gamma(q1, q2) = log I(q1,q1)/(g(1+g)) - log I(q1,q2)/g
    + log I(q2,q2)/(1+g)`` with moment integrals
    ``I(f, h) = integral of f * h**gamma``.  Invariant under independent
    positive rescaling of either argument, and converging to ``KL(p1, p2)``
    as gamma -> 0 for normalized inputs.

    Routes (``integrator="auto"`` picks by input type):

    * ``"exact"``: two :class:`DiscreteDensity` inputs, exact sums.
    * ``"closed_form"``: two :class:`ExpFamilyDensity` of one family, using
      ``log I = F(t1 + g*t2) - F(t1) - g*F(t2)`` (plus scale terms).
    * ``"quadrature"``: two 1-D :class:`SampledDensity`, log-shifted
      adaptive quadrature over ``support``.
    * ``"monte_carlo"``: :class:`SampledDensity` inputs with a samplable
      ``proposal`` and an :class:`EstimatorConfig`.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if integrator == "auto":
        if isinstance(q1, DiscreteDensity):
            integrator = "exact"
        elif isinstance(q1, ExpFamilyDensity):
            integrator = "closed_form"
        else:
            integrator = "monte_carlo" if cfg is not None else "quadrature"

    if integrator == "exact":
        w1, w2 = q1.weights, q2.weights
        log_i11 = _log_i_discrete(w1, w1, gamma)
        log_i12 = _log_i_discrete(w1, w2, gamma)
        log_i22 = _log_i_discrete(w2, w2, gamma)
    elif integrator == "closed_form":
        log_i11 = _log_i_expfam(q1, q1, gamma)
        log_i12 = _log_i_expfam(q1, q2, gamma)
        log_i22 = _log_i_expfam(q2, q2, gamma)
    elif integrator == "quadrature":
        if support is None:
            raise ValueError("quadrature route requires an integration support")
        log_i11 = _log_i_quadrature(q1.log_density, q1.log_density, gamma, support)
        log_i12 = _log_i_quadrature(q1.log_density, q2.log_density, gamma, support)
        log_i22 = _log_i_quadrature(q2.log_density, q2.log_density, gamma, support)
    elif integrator == "monte_carlo":
        if cfg is None:
            raise ValueError("Monte Carlo route requires an EstimatorConfig")
        r = _resolve_proposal(cfg, q1, q2, proposal)
        log_i11, log_i12, log_i22 = _log_i_mc_triplet(q1, q2, gamma, r, cfg,
                                                      workers)
    else:
        raise ValueError(f"unknown integrator {integrator!r}")

    if log_i12 == -math.inf:
        return math.inf
    return _combine_gamma(log_i11, log_i12, log_i22, gamma)


def js_m_gamma(p1, p2, m: MeanSpec, gamma: float, integrator: str = "auto", *,
               cfg: EstimatorConfig | None = None,
               proposal: SampledDensity | None = None,
               support: tuple[float, float] | None = None,
               workers: int = 1) -> float:
    """Projective M-JSD: gamma-divergences to the *unnormalized* M-mixture.

    ``(D_gamma(p1, M~) + D_gamma(p2, M~)) / 2``; projectivity makes the
    mixture normalizer irrelevant, and for small gamma this approximates the
    normalized M-JSD to O(gamma).

    Input types follow :func:`gamma_divergence`; exponential-family inputs
    support geometric means only (the geometric mixture stays in-family).
    """
    if isinstance(p1, DiscreteDensity):
        mixed = np.asarray(means.evaluate(m, p1.weights, p2.weights), dtype=float)
        mix = DiscreteDensity(mixed, normalized=False)
        return 0.5 * (gamma_divergence(p1, mix, gamma, "exact")
                      + gamma_divergence(p2, mix, gamma, "exact"))

    if isinstance(p1, ExpFamilyDensity):
        if not means.is_geometric(m):
            raise ValueError(
                "closed-form projective M-JSD needs a geometric mean; "
                "use sampled densities for other mixtures"
            )
        t1 = np.asarray(p1.theta, dtype=float)
        t2 = np.asarray(p2.theta, dtype=float)
        # the geometric mixture is in-family; its scale drops by projectivity
        mix = ExpFamilyDensity(p1.family, m.alpha * t1 + (1.0 - m.alpha) * t2)
        return 0.5 * (gamma_divergence(p1, mix, gamma, "closed_form")
                      + gamma_divergence(p2, mix, gamma, "closed_form"))

    def mix_log_density(x: np.ndarray) -> np.ndarray:
        return np.asarray(means.log_evaluate(m, p1.log_density(x),
                                             p2.log_density(x)))

    mix = SampledDensity(mix_log_density)
    kwargs = dict(cfg=cfg, support=support, workers=workers)
    first = gamma_divergence(p1, mix, gamma, integrator,
                             proposal=proposal or p1, **kwargs)
    second = gamma_divergence(p2, mix, gamma, integrator,
                              proposal=proposal or p2, **kwargs)
    return 0.5 * (first + second)
