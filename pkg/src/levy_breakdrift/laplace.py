"""Laplace-transform identities for randomly broken drifts.

With T exponential(rate lambda) and V a positive random horizon extension,
the transform of the overall supremum factors through the per-segment
Laplace exponents phi_i(gamma) = ln E exp(-gamma (X(1) - c_i)):

    E exp(-gamma sup_{t<T+V}(X(t) - c(t)))
      = E exp(-gamma sup_{t<T}(X - c1 t))
        + gamma lambda / (phi1(gamma) - lambda)
          * [ (1 - L(gamma)) / gamma  -  (1 - L(ibar)) / ibar ],

where ibar = inverse of phi1 at lambda and L(x) is the transform of the
post-break supremum over V.  The identity requires gamma > ibar; the factor
phi1(gamma) - lambda vanishes exactly where the bracket does, and a short
linear interpolation across that removable point keeps evaluation stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from .errors import DomainError, UnsupportedRegimeError
from .models import LevyModel

__all__ = [
    "InfiniteV", "ExponentialV", "CustomV", "RandomHorizonSpec",
    "LaplaceQuery",
    "laplace_sup_exp_T", "laplace_sup_broken",
    "brownian_laplace_inf", "brownian_laplace_exp_exp",
]

_SING_WINDOW = 1e-8


@dataclass(frozen=True)
class InfiniteV:
    """V = infinity: the post-break segment never ends."""


@dataclass(frozen=True)
class ExponentialV:
    """V exponentially distributed with mean 1/theta."""

    theta: float

    def __post_init__(self):
        if not self.theta > 0.0:
            raise DomainError("theta must be strictly positive")


@dataclass(frozen=True)
class CustomV:
    """User-supplied transform x -> E exp(-x sup_{t<V}(X - c2 t)).

    Must map 0 to 1 and be nonincreasing (spot-checked at call time).
    """

    transform: Callable[[float], float]


RandomHorizonSpec = Union[InfiniteV, ExponentialV, CustomV]


@dataclass(frozen=True)
class LaplaceQuery:
    """Parameters of a randomly-broken-drift transform evaluation."""

    model: LevyModel
    c1: float
    c2: float
    lam: float
    gamma: float

    def __post_init__(self):
        if self.model.spectral_sign not in ("positive", "both"):
            raise DomainError("the transform identities require a spectrally "
                              "positive process")
        if not self.lam > 0.0:
            raise DomainError("lambda must be strictly positive")
        ibar = self.model.laplace_exponent_inverse(self.c1, self.lam)
        if not self.gamma > ibar:
            raise DomainError(
                f"gamma must exceed the inverse exponent {ibar:.6g} at lambda")


def laplace_sup_exp_T(model: LevyModel, c: float, gamma: float, lam: float) -> float:
    """E exp(-gamma sup_{t<T}(X - c t)) with T ~ exponential(rate lam)."""
    if model.spectral_sign not in ("positive", "both"):
        raise DomainError("requires a spectrally positive process")
    if gamma < 0.0:
        raise DomainError("gamma must be nonnegative")
    if not lam > 0.0:
        raise DomainError("lambda must be strictly positive")
    if gamma == 0.0:
        return 1.0
    ibar = model.laplace_exponent_inverse(c, lam)
    phi_g = model.laplace_exponent(c, gamma)
    if abs(phi_g - lam) < _SING_WINDOW * lam:
        # removable point phi(gamma) = lam: limit lam / (ibar * phi'(ibar))
        h = 1e-6 * max(1.0, ibar)
        dphi = (model.laplace_exponent(c, ibar + h)
                - model.laplace_exponent(c, max(ibar - h, 0.0))) / (2.0 * h)
        return lam / (ibar * dphi)
    return lam / (lam - phi_g) * (1.0 - gamma / ibar)


def _post_break_transform(model: LevyModel, c2: float, v: RandomHorizonSpec):
    """L(x) = E exp(-x sup over the V window of (X - c2 t))."""
    if isinstance(v, InfiniteV):
        rate = model.compensated_drift(c2)
        if not rate > 0.0:
            raise UnsupportedRegimeError(
                "infinite V requires a strictly positive net drift c2 - E X(1)")

        def L(x: float) -> float:
            if x == 0.0:
                return 1.0
            return x * rate / model.laplace_exponent(c2, x)

        return L
    if isinstance(v, ExponentialV):
        theta = v.theta
        return lambda x: laplace_sup_exp_T(model, c2, x, theta)
    if isinstance(v, CustomV):
        t = v.transform
        if abs(t(0.0) - 1.0) > 1e-9:
            raise DomainError("custom transform must map 0 to 1")
        if t(0.5) < t(1.0) - 1e-12:
            raise DomainError("custom transform must be nonincreasing")
        return t
    raise DomainError(f"unknown horizon spec {v!r}")


def _broken_at(query: LaplaceQuery, L, gamma: float, ibar: float) -> float:
    model, c1, lam = query.model, query.c1, query.lam
    first = laplace_sup_exp_T(model, c1, gamma, lam)
    phi_g = model.laplace_exponent(c1, gamma)
    bracket = (1.0 - L(gamma)) / gamma - (1.0 - L(ibar)) / ibar
    return first + gamma * lam / (phi_g - lam) * bracket


def laplace_sup_broken(query: LaplaceQuery, v: RandomHorizonSpec) -> float:
    """E exp(-gamma sup_{t<T+V}(X - c(t))) with exponential T and horizon V."""
    model, c1 = query.model, query.c1
    L = _post_break_transform(model, query.c2, v)
    ibar = model.laplace_exponent_inverse(c1, query.lam)
    gamma = query.gamma
    phi_g = model.laplace_exponent(c1, gamma)
    if abs(phi_g - query.lam) > _SING_WINDOW * query.lam:
        return _broken_at(query, L, gamma, ibar)
    # interpolate linearly across the removable singularity at phi1 = lambda
    h = 1e-5 * max(1.0, ibar)
    lo, hi = gamma - h, gamma + h
    vlo = _broken_at(query, L, lo, ibar)
    vhi = _broken_at(query, L, hi, ibar)
    w = (gamma - lo) / (hi - lo)
    return (1.0 - w) * vlo + w * vhi


def brownian_laplace_inf(c1: float, c2: float, lam: float, gamma: float) -> float:
    """Closed form of the infinite-V transform for standard Brownian motion."""
    if not c2 > 0.0:
        raise DomainError("infinite V requires c2 > 0")
    if not lam > 0.0:
        raise DomainError("lambda must be strictly positive")
    R = math.sqrt(c1 * c1 + 2.0 * lam)
    if not gamma > R - c1:
        raise DomainError(f"gamma must exceed {R - c1:.6g}")
    phi1 = 0.5 * gamma * gamma + c1 * gamma
    phi2 = 0.5 * gamma * gamma + c2 * gamma
    phi2_at_ibar = c1 * c1 + lam + (c2 - c1) * R - c1 * c2
    num = gamma * lam * c2 * (phi2 - phi2_at_ibar)
    den = (phi1 - lam) * phi2 * phi2_at_ibar
    if abs(phi1 - lam) < _SING_WINDOW * lam:
        h = 1e-5 * max(1.0, gamma)
        return 0.5 * (brownian_laplace_inf(c1, c2, lam, gamma - h)
                      + brownian_laplace_inf(c1, c2, lam, gamma + h))
    return num / den


def brownian_laplace_exp_exp(c1: float, c2: float, lam: float, theta: float,
                             gamma: float) -> float:
    """Closed form of the exponential-V transform for standard Brownian motion."""
    if not (lam > 0.0 and theta > 0.0):
        raise DomainError("lambda and theta must be strictly positive")
    R1 = math.sqrt(c1 * c1 + 2.0 * lam)
    if not gamma > R1 - c1:
        raise DomainError(f"gamma must exceed {R1 - c1:.6g}")
    ibar1 = R1 - c1
    ibar2 = math.sqrt(c2 * c2 + 2.0 * theta) - c2
    phi1 = 0.5 * gamma * gamma + c1 * gamma
    phi2 = 0.5 * gamma * gamma + c2 * gamma
    phi2_at_ibar1 = c1 * c1 + lam + (c2 - c1) * R1 - c1 * c2
    if abs(phi1 - lam) < _SING_WINDOW * lam or abs(theta - phi2) < _SING_WINDOW * theta:
        h = 1e-5 * max(1.0, gamma)
        return 0.5 * (brownian_laplace_exp_exp(c1, c2, lam, theta, gamma - h)
                      + brownian_laplace_exp_exp(c1, c2, lam, theta, gamma + h))
    term1 = (ibar2 - ibar1) / (theta - phi2_at_ibar1)
    term2 = ibar1 * (ibar2 - gamma) / (gamma * (theta - phi2))
    return gamma * lam * theta * (term1 - term2) / (ibar1 * ibar2 * (phi1 - lam))
