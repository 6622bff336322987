"""Closed-form and semi-closed-form specializations for Brownian motion and
the stable family, kept as independent transcriptions so the generic
quadrature kernels have something exact to be checked against.

``brownian_identity_check`` evaluates both sides of the two integral
identities that tie the double-integral correction term to normal-cdf
values; they double as the house stress test for the quadrature engine
(joint endpoint singularity in s, exponential-vs-Gaussian tail in z).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

from .errors import DomainError
from .models import AlphaStable, BrownianMotion
from .quadrature import DEFAULT_CONFIG, QuadConfig, from_scalar, integrate, integrate_semi_infinite
from .supdist import sup_linear_sp  # noqa: F401  (re-exported convenience in tests)

__all__ = [
    "brownian_A",
    "brownian_sup_broken_inf",
    "brownian_sup_broken_finite",
    "brownian_identity_check",
    "stable_A",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def brownian_A(c: float, T: float, u: float) -> float:
    """P(sup_{t<T}(W(t) - c t) > u) for standard Brownian motion."""
    if not (T > 0.0 and u > 0.0):
        raise DomainError("T and u must be strictly positive")
    rt = math.sqrt(T)
    return float(ndtr(-u / rt - c * rt) + math.exp(-2.0 * u * c) * ndtr(-u / rt + c * rt))


def brownian_sup_broken_inf(c1: float, c2: float, T: float, u: float) -> float:
    """Infinite-horizon exceedance probability under the broken drift.

    Four-term normal-cdf formula; the two sign regimes of the derivation
    (2 c2 - c1 >= 0 versus c1 - 2 c2 > 0) collapse to the same display, so a
    single expression covers both (verified against quadrature over both
    regimes in the tests).  c2 = 0 gives certain exceedance.
    """
    if not (T > 0.0 and u > 0.0):
        raise DomainError("T and u must be strictly positive")
    if c1 < 0.0 or c2 < 0.0:
        raise DomainError("drift slopes must be nonnegative")
    if c2 == 0.0:
        return 1.0
    rt = math.sqrt(T)
    a = u / rt
    t1 = ndtr(-a - c1 * rt)
    t2 = math.exp(-2.0 * c1 * u) * ndtr(-a + c1 * rt)
    t3 = math.exp(-2.0 * c2 * (u + c1 * T - c2 * T)) * ndtr(a + (c1 - 2.0 * c2) * rt)
    t4 = math.exp(2.0 * (c2 - c1) * u + 2.0 * c2 * c2 * T - 2.0 * c1 * c2 * T) \
        * ndtr(-a + (c1 - 2.0 * c2) * rt)
    return float(min(max(t1 + t2 + t3 - t4, 0.0), 1.0))


def _s_inner_integral(T: float, z: float, u: float, cfg: QuadConfig) -> float:
    """int_0^T s^(-1/2) (T-s)^(-3/2) exp(-z^2/(2(T-s)) - u^2/(2s)) ds."""

    def f(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(under="ignore"):
            return (T - s) ** -1.5 * s ** -0.5 * np.exp(
                -z * z / (2.0 * (T - s)) - u * u / (2.0 * s))

    return integrate(f, 0.0, T, cfg).value


def brownian_sup_broken_finite(c1: float, c2: float, T: float, S: float, u: float,
                               cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Finite-horizon broken-drift exceedance probability (0 < T < S)."""
    if not (T > 0.0 and u > 0.0):
        raise DomainError("T and u must be strictly positive")
    if not S > T:
        raise DomainError("horizon S must exceed the break time T")
    inner_cfg = QuadConfig(abs_tol=cfg.abs_tol * 1e-2, rel_tol=cfg.rel_tol,
                           max_subdivisions=cfg.max_subdivisions)
    window = S - T
    top = u + c1 * T

    t1 = brownian_A(c1, T, u)

    def g2(z):
        z = np.asarray(z, dtype=float)
        amounts = np.array([brownian_A(c2, window, zz) if zz > 0 else 1.0 for zz in z.ravel()])
        with np.errstate(under="ignore"):
            gauss = np.exp(-(top - z.ravel()) ** 2 / (2.0 * T))
        return (amounts * gauss).reshape(z.shape) / _SQRT_2PI / math.sqrt(T)

    z_hi2 = top + math.sqrt(2.0 * T * math.log(1.0 / cfg.tail_cutoff_mass)) + 1.0
    t2 = integrate(g2, 0.0, z_hi2, cfg).value

    def g3(z: float) -> float:
        return z * math.exp(c1 * z) * brownian_A(c2, window, z) * _s_inner_integral(T, z, u, inner_cfg)

    def tail3(b: float) -> float:
        # inner(z) <= 2 sqrt(2 pi) Phi(-z / sqrt(T)) sup_s s^(-1/2) e^(-u^2/(2s)) / z
        slope = b / T - c1
        if slope <= 0.0:
            return math.inf
        with np.errstate(over="ignore"):
            return (2.0 * _SQRT_2PI * math.exp(-0.5) / u
                    * math.exp(c1 * b - b * b / (2.0 * T)) / slope)

    span = max(4.0 * (c1 * T + math.sqrt(T)), top, 4.0)
    t3 = integrate_semi_infinite(from_scalar(g3), 0.0, cfg, tail_bound=tail3,
                                 initial_span=span).value
    t3 *= math.exp(-u * c1 - c1 * c1 * T / 2.0) / (2.0 * math.pi)
    return float(min(max(t1 + t2 - t3, 0.0), 1.0))


def brownian_identity_check(c: float, T: float, u: float, variant: str,
                            cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Evaluate both sides of the double-integral / normal-cdf identity.

    variant ``minus``:
        exp(-c u - c^2 T/2)/(2 pi) * int_0^inf z e^(-c z) inner(z) dz
        against Phi(-u T^(-1/2) - c sqrt(T));
    variant ``plus``: same with the opposite exponential tilts against
        Phi(-u T^(-1/2) + c sqrt(T)).
    """
    if variant not in ("minus", "plus"):
        raise DomainError(f"variant must be 'minus' or 'plus', got {variant!r}")
    if c < 0.0 or not (T > 0.0 and u > 0.0):
        raise DomainError("need c >= 0, T > 0, u > 0")
    sign = -1.0 if variant == "minus" else 1.0
    inner_cfg = QuadConfig(abs_tol=cfg.abs_tol * 1e-2, rel_tol=cfg.rel_tol,
                           max_subdivisions=cfg.max_subdivisions)

    def g(z: float) -> float:
        return z * math.exp(sign * c * z) * _s_inner_integral(T, z, u, inner_cfg)

    def tail(b: float) -> float:
        slope = b / T - max(sign * c, 0.0)
        if slope <= 0.0:
            return math.inf
        return (2.0 * _SQRT_2PI * math.exp(-0.5) / u
                * math.exp(sign * c * b - b * b / (2.0 * T)) / slope)

    span = max(4.0 * (c * T + math.sqrt(T)), 4.0)
    outer = integrate_semi_infinite(from_scalar(g), 0.0, cfg, tail_bound=tail,
                                    initial_span=span).value
    lhs = math.exp(sign * c * u - c * c * T / 2.0) / (2.0 * math.pi) * outer
    rhs = float(ndtr(-u / math.sqrt(T) + sign * c * math.sqrt(T)))
    return lhs, rhs


def stable_A(model: AlphaStable, c: float, T: float, u: float,
             cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Exceedance probability for the stable family under a linear drift.

    Independent transcription of the tail-plus-correction expression (finite
    window) and of c * int_0^inf f(u + c s, s) ds (T = inf, requires c > 0);
    cross-validates the generic kernels in :mod:`levy_breakdrift.supdist`.
    """
    if not isinstance(model, AlphaStable):
        raise DomainError("stable_A is specific to the stable family")
    if not u > 0.0:
        raise DomainError("level u must be strictly positive")
    alpha = model.alpha

    if math.isinf(T):
        if not c > 0.0:
            raise DomainError("infinite window requires c > 0")

        def f_inf(s):
            s = np.asarray(s, dtype=float)
            sc = s ** (1.0 / alpha)
            return model.density_std((u + c * s) / sc) / sc

        # the s^(-alpha) far tail folds into a y^(alpha-2) endpoint factor
        b0 = max(20.0, 10.0 * (1.0 + u) / c)
        head = integrate(f_inf, 0.0, b0, cfg).value
        tail = integrate(lambda y: f_inf(1.0 / y) / (y * y), 0.0, 1.0 / b0,
                         QuadConfig(abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol,
                                    max_subdivisions=cfg.max_subdivisions,
                                    singularity_exponent_hint=alpha - 2.0)).value
        return float(min(max(c * (head + tail), 0.0), 1.0))

    if not T > 0.0:
        raise DomainError("window T must be strictly positive")
    term1 = model.survival(u + c * T, T)

    def weight(h):
        # h = T - s; the negative-part factor behaves like h^(1/alpha - 1)
        h = np.asarray(h, dtype=float)
        flat = h.ravel()
        neg = np.array([model.neg_part_mean(c, hh) for hh in flat])
        s = T - flat
        sc = s ** (1.0 / alpha)
        dens = model.density_std((u + c * s) / sc) / sc
        return (neg / flat * dens).reshape(h.shape)

    res = integrate(weight, 0.0, T,
                    QuadConfig(abs_tol=max(cfg.abs_tol, 1e-7), rel_tol=max(cfg.rel_tol, 1e-7),
                               max_subdivisions=cfg.max_subdivisions,
                               singularity_exponent_hint=1.0 / alpha - 1.0))
    return float(min(max(term1 + res.value, 0.0), 1.0))
