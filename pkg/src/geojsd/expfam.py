"""Exponential-family machinery: cumulants, Bregman and Jensen divergences.

A family is described by its cumulant function F over a flattened natural
parameter vector.  For densities p_theta = exp(<theta, t(x)> - F(theta))
of a common family, the classical dictionary applies:

* ``KL(p_t1, p_t2) = bregman(F, t2, t1)`` (note the argument swap),
* the skew Bhattacharyya distance equals the skew Jensen divergence
  ``J_{F,alpha}``,
* the geometric JS divergence is a quarter symmetrized Bregman divergence
  minus a Jensen gap, and its extended variant adds ``exp(-J_F) - 1``.

Built-in families: the d-variate Gaussian (natural parameter packed as the
mean part followed by the row-major upper triangle of the matrix part, with
``theta_M = Sigma^{-1}/2``) and the categorical family (for cross-checks
against :mod:`geojsd.discrete`).  Families whose cumulant has no tractable
form (polynomial exponential families) carry ``cumulant=None`` and must be
handled through the estimators in :mod:`geojsd.estimate`.

A fact worth knowing but not constructed here: the geometric mixtures of a
*fixed* pair of densities form a one-parameter exponential family in the
skew weight, with cumulant ``-B_alpha``; the KL from an endpoint density to
a point of that arc is still not a Bregman divergence of it, because the
endpoints do not belong to the arc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from .errors import DomainViolation
from .logbase import NATS, LogBase

__all__ = [
    "ExpFamily",
    "ExpFamilyDensity",
    "skew_jensen",
    "bregman",
    "gjsd_ef",
    "gjsd_extended_ef",
    "dual_gjsd_ef",
    "gaussian_family",
    "categorical_family",
    "categorical_theta",
    "pack_gaussian_theta",
    "unpack_gaussian_theta",
]


@dataclass(frozen=True, eq=False)
class ExpFamily:
    """An exponential family through its cumulant over flat natural parameters.

    ``cumulant`` and ``cumulant_gradient`` may be ``None`` for families whose
    log-normalizer is intractable; the closed-form operations below then
    refuse to run and the Monte Carlo / gamma-divergence estimators apply.
    """

    dim: int
    cumulant: Callable[[np.ndarray], float] | None
    cumulant_gradient: Callable[[np.ndarray], np.ndarray] | None
    domain_check: Callable[[np.ndarray], bool]
    name: str = ""


@dataclass(frozen=True, eq=False)
class ExpFamilyDensity:
    """A (possibly rescaled) family density: log q(x) = log p_theta(x) + log_scale."""

    family: ExpFamily
    theta: np.ndarray
    log_scale: float = 0.0


def _as_theta(fam: ExpFamily, theta) -> np.ndarray:
    t = np.asarray(theta, dtype=float).reshape(-1)
    if t.size != fam.dim:
        raise DomainViolation(
            f"natural parameter has size {t.size}, family expects {fam.dim}"
        )
    if not fam.domain_check(t):
        raise DomainViolation("natural parameter outside the family domain")
    return t


def _cumulant_at(fam: ExpFamily, theta: np.ndarray, what: str) -> float:
    if fam.cumulant is None:
        raise ValueError(
            f"{what} needs a closed-form cumulant; family {fam.name!r} has none "
            "(use the Monte Carlo / gamma-divergence estimators instead)"
        )
    return float(fam.cumulant(theta))


def skew_jensen(fam: ExpFamily, theta1, theta2, alpha: float = 0.5) -> float:
    """Skew Jensen divergence J_{F,alpha} = aF(t1) + (1-a)F(t2) - F(at1+(1-a)t2).

    Nonnegative by convexity of F, zero iff the parameters coincide; equals
    the skew Bhattacharyya distance B_alpha between the family densities.
    """
    t1 = _as_theta(fam, theta1)
    t2 = _as_theta(fam, theta2)
    mix = alpha * t1 + (1.0 - alpha) * t2
    if not fam.domain_check(mix):
        raise DomainViolation("interpolated parameter left the family domain")
    return (alpha * _cumulant_at(fam, t1, "skew_jensen")
            + (1.0 - alpha) * _cumulant_at(fam, t2, "skew_jensen")
            - _cumulant_at(fam, mix, "skew_jensen"))


def bregman(fam: ExpFamily, theta1, theta2) -> float:
    """Bregman divergence B_F(t1, t2) = F(t1) - F(t2) - <grad F(t2), t1 - t2>.

    Equals ``KL(p_t2, p_t1)`` for densities of the family.
    """
    t1 = _as_theta(fam, theta1)
    t2 = _as_theta(fam, theta2)
    if fam.cumulant_gradient is None:
        raise ValueError(
            f"bregman needs a cumulant gradient; family {fam.name!r} has none"
        )
    grad2 = np.asarray(fam.cumulant_gradient(t2), dtype=float)
    return (_cumulant_at(fam, t1, "bregman") - _cumulant_at(fam, t2, "bregman")
            - float(grad2 @ (t1 - t2)))


def _quarter_symmetrized_bregman(fam: ExpFamily, t1: np.ndarray,
                                 t2: np.ndarray) -> float:
    grad1 = np.asarray(fam.cumulant_gradient(t1), dtype=float)
    grad2 = np.asarray(fam.cumulant_gradient(t2), dtype=float)
    return 0.25 * float((t2 - t1) @ (grad2 - grad1))


def gjsd_ef(fam: ExpFamily, theta1, theta2, base: LogBase = NATS) -> float:
    """Geometric JSD between two family densities, in closed form.

    ``(1/4)<t2-t1, grad F(t2)-grad F(t1)> - J_{F,1/2}(t1, t2)``: a quarter of
    the Jeffreys divergence (a symmetrized Bregman divergence) minus the
    Bhattacharyya distance.
    """
    t1 = _as_theta(fam, theta1)
    t2 = _as_theta(fam, theta2)
    if fam.cumulant_gradient is None:
        raise ValueError(f"gjsd_ef needs a cumulant gradient; {fam.name!r} has none")
    quarter_j = _quarter_symmetrized_bregman(fam, t1, t2)
    return (quarter_j - skew_jensen(fam, t1, t2, 0.5)) / base.ln


def gjsd_extended_ef(fam: ExpFamily, theta1, theta2) -> float:
    """Extended geometric JSD in closed form (nats).

    ``(1/4)<t2-t1, grad F(t2)-grad F(t1)> + exp(-J_F) - 1``; exceeds
    :func:`gjsd_ef` by the gap ``Z - log Z - 1`` with ``Z = exp(-J_F)``.
    """
    t1 = _as_theta(fam, theta1)
    t2 = _as_theta(fam, theta2)
    if fam.cumulant_gradient is None:
        raise ValueError(
            f"gjsd_extended_ef needs a cumulant gradient; {fam.name!r} has none"
        )
    quarter_j = _quarter_symmetrized_bregman(fam, t1, t2)
    return quarter_j + math.exp(-skew_jensen(fam, t1, t2, 0.5)) - 1.0


def dual_gjsd_ef(fam: ExpFamily, theta1, theta2, alpha: float = 0.5) -> float:
    """Left-sided (reverse-KL) skew geometric JSD; equals J_{F,alpha} = B_alpha."""
    return skew_jensen(fam, theta1, theta2, alpha)


# ---------------------------------------------------------------------------
# Gaussian family
# ---------------------------------------------------------------------------

def _tri_indices(d: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(d)


def pack_gaussian_theta(theta_v: np.ndarray, theta_m: np.ndarray) -> np.ndarray:
    """Flatten (theta_v, theta_M) into the family's parameter vector.

    The matrix part is stored as its row-major upper triangle; only the
    symmetric part of ``theta_m`` is read.
    """
    theta_v = np.asarray(theta_v, dtype=float).reshape(-1)
    theta_m = np.asarray(theta_m, dtype=float)
    d = theta_v.size
    rows, cols = _tri_indices(d)
    sym = 0.5 * (theta_m + theta_m.T)
    return np.concatenate([theta_v, sym[rows, cols]])


def unpack_gaussian_theta(theta: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`pack_gaussian_theta`."""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    theta_v = theta[:d]
    rows, cols = _tri_indices(d)
    mat = np.zeros((d, d))
    mat[rows, cols] = theta[d:]
    mat[cols, rows] = theta[d:]
    return theta_v, mat


def _gaussian_flat_dim(d: int) -> int:
    return d + d * (d + 1) // 2


def gaussian_family(d: int) -> ExpFamily:
    """The d-variate Gaussian family with theta = (Sigma^-1 mu, Sigma^-1 / 2).

    Cumulant: ``F(theta) = (d log pi - log|theta_M| + theta_v' theta_M^-1
    theta_v / 2) / 2``, matching the moment form
    ``(mu' Sigma^-1 mu + log|Sigma| + d log 2pi) / 2``.  The gradient packs
    the mean parameters (mu, -(Sigma + mu mu')), with off-diagonal entries
    doubled so that flat dot products reproduce the matrix inner product on
    the upper-triangle packing.
    """

    def _chol(theta_m: np.ndarray) -> np.ndarray | None:
        try:
            return np.linalg.cholesky(theta_m)
        except np.linalg.LinAlgError:
            return None

    def domain_check(theta: np.ndarray) -> bool:
        if not np.all(np.isfinite(theta)):
            return False
        _, theta_m = unpack_gaussian_theta(theta, d)
        return _chol(theta_m) is not None

    def cumulant(theta: np.ndarray) -> float:
        theta_v, theta_m = unpack_gaussian_theta(theta, d)
        chol = _chol(theta_m)
        if chol is None:
            raise DomainViolation("theta_M is not positive-definite")
        logdet = 2.0 * float(np.log(np.diag(chol)).sum())
        half_solve = np.linalg.solve(chol, theta_v)
        quad = float(half_solve @ half_solve)  # theta_v' theta_M^-1 theta_v
        return 0.5 * (d * math.log(math.pi) - logdet + 0.5 * quad)

    def cumulant_gradient(theta: np.ndarray) -> np.ndarray:
        theta_v, theta_m = unpack_gaussian_theta(theta, d)
        chol = _chol(theta_m)
        if chol is None:
            raise DomainViolation("theta_M is not positive-definite")
        # mu = theta_M^-1 theta_v / 2, Sigma = theta_M^-1 / 2
        mu = 0.5 * np.linalg.solve(theta_m, theta_v)
        sigma = 0.5 * np.linalg.solve(theta_m, np.eye(d))
        grad_m = -(sigma + np.outer(mu, mu))
        rows, cols = _tri_indices(d)
        packed_m = grad_m[rows, cols] * np.where(rows == cols, 1.0, 2.0)
        return np.concatenate([mu, packed_m])

    return ExpFamily(
        dim=_gaussian_flat_dim(d),
        cumulant=cumulant,
        cumulant_gradient=cumulant_gradient,
        domain_check=domain_check,
        name=f"gaussian_{d}d",
    )


# ---------------------------------------------------------------------------
# Categorical family
# ---------------------------------------------------------------------------

def categorical_family(k: int) -> ExpFamily:
    """Categorical distributions on k atoms, theta_i = log(p_i / p_k)."""
    if k < 2:
        raise ValueError("categorical family needs at least two atoms")

    def cumulant(theta: np.ndarray) -> float:
        return float(logsumexp(np.concatenate([theta, [0.0]])))

    def cumulant_gradient(theta: np.ndarray) -> np.ndarray:
        full = np.concatenate([theta, [0.0]])
        probs = np.exp(full - logsumexp(full))
        return probs[:-1]

    return ExpFamily(
        dim=k - 1,
        cumulant=cumulant,
        cumulant_gradient=cumulant_gradient,
        domain_check=lambda t: bool(np.all(np.isfinite(t))),
        name=f"categorical_{k}",
    )


def categorical_theta(weights) -> np.ndarray:
    """Natural parameter of a strictly positive normalized weight vector."""
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0.0):
        raise DomainViolation(
            "categorical embedding requires strictly positive weights"
        )
    return np.log(w[:-1] / w[-1])
