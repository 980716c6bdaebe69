"""Exact divergences between finite-support densities.

Every divergence here is an explicit finite sum, so values are exact up to
floating-point rounding.  The summation conventions are the standard
measure-theoretic ones: ``0*log(0) = 0`` and ``0*log(0/0) = 0``, while a
genuine support violation (``p1 > 0`` where ``p2 = 0`` inside a KL-type sum)
yields ``+inf`` as an in-band IEEE value rather than an exception.

Divergences:

* :func:`kl`, :func:`kl_extended` -- Kullback-Leibler and its extension to
  unnormalized positive vectors, ``sum(q1*log(q1/q2) + q2 - q1)``.
* :func:`js`, :func:`js_m`, :func:`js_m_extended` -- the Jensen-Shannon
  divergence and its generalizations built from normalized or unnormalized
  M-mixtures (see :mod:`geojsd.means`).
* :func:`jeffreys`, :func:`bhattacharyya`, :func:`chernoff`,
  :func:`total_variation`, :func:`taneja_t`, :func:`kl_between_mixtures`.
* :func:`f_divergence` -- generic ``sum(p1 * f(p2/p1))`` for a convex
  generator, with the registry in :data:`F_GENERATORS`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import kl_div as _pointwise_extended_kl
from scipy.special import logsumexp, rel_entr

from . import means
from .errors import (
    DisjointSupport,
    InvalidAlpha,
    InvalidDensity,
    NoConvergence,
)
from .logbase import NATS, LogBase
from .means import MeanKind, MeanSpec

__all__ = [
    "DiscreteDensity",
    "FGenerator",
    "F_KL",
    "F_JS",
    "F_EXTENDED_GJS",
    "F_JEFFREYS",
    "F_TANEJA",
    "F_BHATTACHARYYA_COEFF",
    "F_GENERATORS",
    "kl",
    "kl_extended",
    "m_mixture",
    "js",
    "js_m",
    "js_m_extended",
    "jeffreys",
    "bhattacharyya",
    "bhattacharyya_coefficient",
    "chernoff",
    "total_variation",
    "f_divergence",
    "kl_between_mixtures",
    "taneja_t",
    "coarse_grain",
    "shannon_entropy",
    "cross_entropy",
]

_NORMALIZATION_TOL = 1e-12   # accepted as exactly normalized
_RENORMALIZE_TOL = 1e-9      # silently rescaled, with the flag set


@dataclass(frozen=True, eq=False)
class DiscreteDensity:
    """A finite-support nonnegative weight vector.

    ``normalized=True`` asserts unit mass: vectors within 1e-12 of mass one
    pass as-is, vectors within 1e-9 are rescaled and flagged through
    ``renormalized`` (hand-written inputs rarely sum exactly to one), and
    anything farther off is rejected.
    """

    weights: np.ndarray
    normalized: bool = False
    renormalized: bool = False

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InvalidDensity("weights must be a nonempty 1-D vector")
        if np.any(w < 0.0) or not np.all(np.isfinite(w)):
            raise InvalidDensity("weights must be finite and nonnegative")
        if not np.any(w > 0.0):
            raise InvalidDensity("at least one weight must be positive")
        renormalized = False
        if self.normalized:
            gap = abs(float(w.sum()) - 1.0)
            if gap > _RENORMALIZE_TOL:
                raise InvalidDensity(
                    f"normalized density has mass off by {gap:.3e} (> 1e-9)"
                )
            if gap > _NORMALIZATION_TOL:
                w = w / w.sum()
                renormalized = True
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "renormalized", renormalized)

    @classmethod
    def probability(cls, weights) -> "DiscreteDensity":
        """A normalized density (unit total mass)."""
        return cls(np.asarray(weights, dtype=float), normalized=True)

    @classmethod
    def positive(cls, weights) -> "DiscreteDensity":
        """An unnormalized positive density."""
        return cls(np.asarray(weights, dtype=float), normalized=False)

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())


def _aligned(p1: DiscreteDensity, p2: DiscreteDensity,
             require_normalized: bool = False) -> tuple[np.ndarray, np.ndarray]:
    if p1.size != p2.size:
        raise InvalidDensity(
            f"support sizes differ: {p1.size} vs {p2.size}"
        )
    if require_normalized and not (p1.normalized and p2.normalized):
        raise InvalidDensity("this divergence requires normalized densities")
    return p1.weights, p2.weights


def _check_beta(beta: float) -> None:
    if not (0.0 < beta < 1.0):
        raise InvalidAlpha(f"beta must lie in (0, 1), got {beta}")


# ---------------------------------------------------------------------------
# Kullback-Leibler family
# ---------------------------------------------------------------------------

def kl(p1: DiscreteDensity, p2: DiscreteDensity, base: LogBase = NATS) -> float:
    """Kullback-Leibler divergence sum(p1 * log(p1/p2)).

    Returns ``+inf`` when p1 puts mass where p2 has none.
    """
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    return float(rel_entr(w1, w2).sum()) / base.ln


def kl_extended(q1: DiscreteDensity, q2: DiscreteDensity,
                base: LogBase = NATS) -> float:
    """Extended KL for positive vectors: sum(q1*log(q1/q2) + q2 - q1).

    Nonnegative for arbitrary positive inputs, zero iff they coincide, and
    equal to :func:`kl` when both are normalized.  Only the logarithmic part
    rescales under a base change; the linear mass terms do not.
    """
    w1, w2 = _aligned(q1, q2)
    if base is NATS:
        return float(_pointwise_extended_kl(w1, w2).sum())
    log_part = float(rel_entr(w1, w2).sum())
    return log_part / base.ln + float((w2 - w1).sum())


def jeffreys(p1: DiscreteDensity, p2: DiscreteDensity,
             base: LogBase = NATS) -> float:
    """Jeffreys divergence KL(p1, p2) + KL(p2, p1) = sum((p1-p2)*log(p1/p2))."""
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    return float(rel_entr(w1, w2).sum() + rel_entr(w2, w1).sum()) / base.ln


# ---------------------------------------------------------------------------
# Mixtures
# ---------------------------------------------------------------------------

def m_mixture(p1: DiscreteDensity, p2: DiscreteDensity, m: MeanSpec,
              normalize: bool = True) -> tuple[DiscreteDensity, float]:
    """Pointwise M-mixture of two densities and its normalizer Z.

    Returns ``(mixture, Z)`` with ``Z = sum_i M_alpha(p1[i], p2[i])``.  For
    normalized inputs Z always lies in ``[1 - TV, 1 + TV] <= 2``.  Raises
    :class:`DisjointSupport` when Z = 0.
    """
    w1, w2 = _aligned(p1, p2)
    mixed = np.asarray(means.evaluate(m, w1, w2), dtype=float)
    z = float(mixed.sum())
    if z <= 0.0:
        raise DisjointSupport("mixture normalizer is zero: disjoint supports")
    if normalize:
        return DiscreteDensity(mixed / z, normalized=True), z
    return DiscreteDensity(mixed, normalized=False), z


def js(p1: DiscreteDensity, p2: DiscreteDensity, base: LogBase = NATS) -> float:
    """Jensen-Shannon divergence with the arithmetic mixture.

    Always finite (bounded by log 2), symmetric, zero iff the densities agree.
    """
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    mid = 0.5 * (w1 + w2)
    return 0.5 * float(rel_entr(w1, mid).sum() + rel_entr(w2, mid).sum()) / base.ln


def js_m(p1: DiscreteDensity, p2: DiscreteDensity, m: MeanSpec,
         beta: float = 0.5, base: LogBase = NATS) -> float:
    """M-mixture Jensen-Shannon divergence (normalized mixture).

    ``beta*KL(p1, mix) + (1-beta)*KL(p2, mix)`` with ``mix`` the normalized
    M-mixture.  Reduces to :func:`js` for the balanced arithmetic mean, and
    dominates it for any mean at alpha = beta = 1/2.  May return ``+inf``
    when the mixture vanishes inside a support (min mean).
    """
    _check_beta(beta)
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    mixture, _ = m_mixture(p1, p2, m, normalize=True)
    mw = mixture.weights
    return (beta * float(rel_entr(w1, mw).sum())
            + (1.0 - beta) * float(rel_entr(w2, mw).sum())) / base.ln


def js_m_extended(q1: DiscreteDensity, q2: DiscreteDensity, m: MeanSpec,
                  beta: float = 0.5, base: LogBase = NATS) -> float:
    """Extended M-JSD: extended KL against the *unnormalized* M-mixture.

    For normalized inputs it exceeds :func:`js_m` by the gap
    ``Z - log(Z) - 1`` (in nats), where Z is the mixture normalizer.
    """
    _check_beta(beta)
    mixture, _ = m_mixture(q1, q2, m, normalize=False)
    return (beta * kl_extended(q1, mixture, base)
            + (1.0 - beta) * kl_extended(q2, mixture, base))


# ---------------------------------------------------------------------------
# Bhattacharyya / Chernoff / total variation
# ---------------------------------------------------------------------------

def bhattacharyya_coefficient(p1: DiscreteDensity, p2: DiscreteDensity,
                              alpha: float = 0.5) -> float:
    """Skew Bhattacharyya coefficient sum(p1**alpha * p2**(1-alpha)) in (0, 1]."""
    if not (0.0 < alpha < 1.0):
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha}")
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    both = (w1 > 0.0) & (w2 > 0.0)
    if not np.any(both):
        return 0.0
    a, b = w1[both], w2[both]
    return float(np.exp(alpha * np.log(a) + (1.0 - alpha) * np.log(b)).sum())


def bhattacharyya(p1: DiscreteDensity, p2: DiscreteDensity, alpha: float = 0.5,
                  base: LogBase = NATS) -> float:
    """Skew Bhattacharyya distance B_alpha = -log sum(p1**alpha * p2**(1-alpha)).

    ``+inf`` on disjoint supports.  B_{1/2} is the Bhattacharyya distance;
    B_alpha equals the alpha-skewed geometric JS-symmetrization of the
    *reverse* KL.
    """
    coeff = bhattacharyya_coefficient(p1, p2, alpha)
    if coeff == 0.0:
        return math.inf
    return -math.log(coeff) / base.ln


def chernoff(p1: DiscreteDensity, p2: DiscreteDensity, tol: float = 1e-12,
             base: LogBase = NATS, max_iter: int = 200) -> tuple[float, float]:
    """Chernoff information: max over alpha of B_alpha, with its maximizer.

    B_alpha is strictly concave with a unique interior maximizer whenever
    the densities differ, so a golden-section search over
    ``[1e-9, 1 - 1e-9]`` suffices; ``tol`` bounds the final bracketing
    interval.  At the returned ``alpha*`` the two reverse-KL terms to the
    skew geometric mixture are equal within curvature times ``tol`` (the
    equalizer property), so the default keeps the gap under 1e-8 even for
    sharply curved pairs.

    Returns ``(value, alpha_star)``.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    if np.array_equal(w1, w2):
        return 0.0, 0.5
    both = (w1 > 0.0) & (w2 > 0.0)
    if not np.any(both):
        raise DisjointSupport("Chernoff information diverges on disjoint supports")
    la = np.log(w1[both])
    lb = np.log(w2[both])

    def b_alpha(alpha: float) -> float:
        return -float(logsumexp(alpha * la + (1.0 - alpha) * lb))

    def equalizer(alpha: float) -> float:
        # d(B_alpha)/d(alpha) = E_mix[log(p2/p1)] = KL(mix, p1) - KL(mix, p2)
        log_mix = alpha * la + (1.0 - alpha) * lb
        weights = np.exp(log_mix - log_mix.max())
        return float((weights * (lb - la)).sum() / weights.sum())

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 1e-9, 1.0 - 1e-9
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = b_alpha(x1), b_alpha(x2)
    for _ in range(max_iter):
        if hi - lo < max(tol, 1e-7):
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = b_alpha(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = b_alpha(x1)
    else:
        raise NoConvergence(
            f"golden-section search did not reach tol={tol} in {max_iter} iterations"
        )
    # Value-only search cannot place the maximizer better than sqrt(eps):
    # B is flat there to rounding.  The equalizer gap B'(alpha) still has an
    # O(1) slope, so bisecting its sign pins alpha* to full precision.
    lo = max(1e-9, lo - 1e-7)
    hi = min(1.0 - 1e-9, hi + 1e-7)
    if equalizer(lo) > 0.0 > equalizer(hi):
        for _ in range(100):
            if hi - lo < tol:
                break
            mid = 0.5 * (lo + hi)
            if equalizer(mid) > 0.0:
                lo = mid
            else:
                hi = mid
    alpha_star = 0.5 * (lo + hi)
    return b_alpha(alpha_star) / base.ln, alpha_star


def total_variation(p1: DiscreteDensity, p2: DiscreteDensity) -> float:
    """Total variation distance 0.5 * sum(|p1 - p2|), in [0, 1]."""
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    return 0.5 * float(np.abs(w1 - w2).sum())


# ---------------------------------------------------------------------------
# f-divergences
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FGenerator:
    """Generator of a separable divergence sum(p1 * f(p2/p1)).

    ``f(u, ln_base)`` evaluates the generator with logarithms rescaled to
    the requested base (algebraic terms are base-free); ``at_zero`` and
    ``slope_at_inf`` supply the limit conventions ``f(0+)`` and
    ``lim f(u)/u`` used on one-sided zeros.  Divergence generators satisfy
    f(1) = 0; ``similarity=True`` marks concave f-coefficients (f(1) = 1)
    such as the Bhattacharyya coefficient.
    """

    name: str
    f: Callable[[np.ndarray, float], np.ndarray]
    at_zero: Callable[[float], float]
    slope_at_inf: Callable[[float], float]
    similarity: bool = False

    @classmethod
    def custom(cls, f: Callable[[np.ndarray], np.ndarray],
               at_zero: float | None = None,
               slope_at_inf: float | None = None,
               name: str = "custom") -> "FGenerator":
        """Wrap a plain convex generator f(u) with f(1) = 0.

        Unstated limits are probed numerically at u = 1e-300 and u = 1e300.
        The generator is taken as written; no base rescaling is applied.
        """
        f0 = float(f(np.asarray(1e-300))) if at_zero is None else at_zero
        s_inf = (float(f(np.asarray(1e300)) / 1e300)
                 if slope_at_inf is None else slope_at_inf)
        return cls(name, lambda u, ln_b: f(u), lambda ln_b: f0, lambda ln_b: s_inf)


def _f_kl(u: np.ndarray, ln_b: float) -> np.ndarray:
    return -np.log(u) / ln_b


def _f_js(u: np.ndarray, ln_b: float) -> np.ndarray:
    return 0.5 * (u * np.log(u) - (1.0 + u) * np.log(0.5 * (1.0 + u))) / ln_b


def _f_extended_gjs(u: np.ndarray, ln_b: float) -> np.ndarray:
    return 0.25 * (u - 1.0) * np.log(u) / ln_b + np.sqrt(u) - 1.0


def _f_jeffreys(u: np.ndarray, ln_b: float) -> np.ndarray:
    return (u - 1.0) * np.log(u) / ln_b


def _f_taneja(u: np.ndarray, ln_b: float) -> np.ndarray:
    return 0.5 * (1.0 + u) * np.log(0.5 * (1.0 + u) / np.sqrt(u)) / ln_b


def _f_bc(u: np.ndarray, ln_b: float) -> np.ndarray:
    return np.sqrt(u)


F_KL = FGenerator("kl", _f_kl, lambda ln_b: math.inf, lambda ln_b: 0.0)
F_JS = FGenerator("js", _f_js,
                  lambda ln_b: 0.5 * math.log(2.0) / ln_b,
                  lambda ln_b: 0.5 * math.log(2.0) / ln_b)
F_EXTENDED_GJS = FGenerator("extended_gjs", _f_extended_gjs,
                            lambda ln_b: math.inf, lambda ln_b: math.inf)
F_JEFFREYS = FGenerator("jeffreys", _f_jeffreys,
                        lambda ln_b: math.inf, lambda ln_b: math.inf)
F_TANEJA = FGenerator("taneja", _f_taneja,
                      lambda ln_b: math.inf, lambda ln_b: math.inf)
F_BHATTACHARYYA_COEFF = FGenerator("bhattacharyya_coeff", _f_bc,
                                   lambda ln_b: 0.0, lambda ln_b: 0.0,
                                   similarity=True)

F_GENERATORS: dict[str, FGenerator] = {
    g.name: g for g in (F_KL, F_JS, F_EXTENDED_GJS, F_JEFFREYS, F_TANEJA,
                        F_BHATTACHARYYA_COEFF)
}


def f_divergence(p1: DiscreteDensity, p2: DiscreteDensity, f: FGenerator,
                 base: LogBase = NATS) -> float:
    """Separable divergence sum(p1 * f(p2/p1)) with limit conventions.

    One-sided zeros contribute ``p1 * f(0+)`` and ``p2 * lim f(u)/u``
    respectively; shared zeros contribute nothing.
    """
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    ln_b = base.ln
    both = (w1 > 0.0) & (w2 > 0.0)
    total = float((w1[both] * f.f(w2[both] / w1[both], ln_b)).sum())
    mass_u0 = float(w1[(w1 > 0.0) & (w2 == 0.0)].sum())
    if mass_u0 > 0.0:
        total += mass_u0 * f.at_zero(ln_b)
    mass_uinf = float(w2[(w1 == 0.0) & (w2 > 0.0)].sum())
    if mass_uinf > 0.0:
        total += mass_uinf * f.slope_at_inf(ln_b)
    return total


# ---------------------------------------------------------------------------
# Mixture-vs-mixture divergences
# ---------------------------------------------------------------------------

def kl_between_mixtures(p1: DiscreteDensity, p2: DiscreteDensity,
                        m1: MeanSpec, m2: MeanSpec,
                        base: LogBase = NATS) -> float:
    """KL between two normalized symmetric mixtures of the same pair.

    Symmetric in (p1, p2) because both means must be balanced (alpha = 1/2);
    with m1 arithmetic and m2 geometric this is the Taneja T-divergence
    shifted by ``log Z_G``.
    """
    if m1.alpha != 0.5 or m2.alpha != 0.5:
        raise InvalidAlpha("mixture-vs-mixture KL requires balanced means")
    mix1, _ = m_mixture(p1, p2, m1, normalize=True)
    mix2, _ = m_mixture(p1, p2, m2, normalize=True)
    return kl(mix1, mix2, base)


def taneja_t(p1: DiscreteDensity, p2: DiscreteDensity,
             base: LogBase = NATS) -> float:
    """Taneja T-divergence sum(((p1+p2)/2) * log((p1+p2)/(2*sqrt(p1*p2)))).

    ``+inf`` on one-sided zeros (the geometric mean vanishes under positive
    arithmetic mass there).
    """
    w1, w2 = _aligned(p1, p2, require_normalized=True)
    avg = 0.5 * (w1 + w2)
    geo = np.sqrt(w1 * w2)
    return float(rel_entr(avg, geo).sum()) / base.ln


# ---------------------------------------------------------------------------
# Entropies and coarse-graining
# ---------------------------------------------------------------------------

def shannon_entropy(p: DiscreteDensity, base: LogBase = NATS) -> float:
    """Shannon entropy -sum(p * log(p))."""
    w = p.weights
    pos = w[w > 0.0]
    return -float((pos * np.log(pos)).sum()) / base.ln


def cross_entropy(p1: DiscreteDensity, p2: DiscreteDensity,
                  base: LogBase = NATS) -> float:
    """Cross-entropy -sum(p1 * log(p2)); ``+inf`` if p2 vanishes under p1."""
    w1, w2 = _aligned(p1, p2)
    pos = w1 > 0.0
    if np.any(w2[pos] == 0.0):
        return math.inf
    return -float((w1[pos] * np.log(w2[pos])).sum()) / base.ln


def coarse_grain(p: DiscreteDensity, binmap) -> DiscreteDensity:
    """Merge support atoms: weights are summed per bin of ``binmap``.

    ``binmap`` maps each support index to a coarser bin index and must be a
    surjection onto ``0..max(binmap)``.  Normalization is preserved.
    """
    bins = np.asarray(binmap, dtype=int)
    if bins.shape != (p.size,):
        raise ValueError("binmap must assign a bin to every support index")
    if bins.min() < 0:
        raise ValueError("bin indices must be nonnegative")
    n_bins = int(bins.max()) + 1
    if np.unique(bins).size != n_bins:
        raise ValueError("binmap must be a surjection onto 0..max(binmap)")
    merged = np.bincount(bins, weights=p.weights, minlength=n_bins)
    return DiscreteDensity(merged, normalized=p.normalized)
