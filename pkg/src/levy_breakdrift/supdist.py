"""Supremum distributions for linear and broken drifts.

Core identities, all expressed through one-dimensional densities:

* spectrally positive, linear drift, finite horizon:
    P(sup_{t<T}(X(t) - c t) > u)
      = P(X(T) - c T > u)
        + int_0^T  E(X(T-s) - c (T-s))^- / (T-s) * f(u + c s, s) ds

* spectrally negative, linear drift (ballot/first-passage form):
    P(sup_{t<T}(Y(t) - c t) > u) = u * int_0^T p(u + c s, s) / s ds

* broken drift (slope c1 until T, then c2), horizon S in (T, inf]:
    P = A + B, where A is the linear-drift probability up to T and B
    integrates the tail of the post-break supremum against the joint law of
    (pre-break sup <= u, gap below u at T), i.e.
    B = int_0^inf Q(z) * q(u - z) dz with Q the post-break exceedance
    probability and q the joint sup-and-endpoint density.

Joint density values that quadrature noise drives slightly negative are
clamped to zero and the clamped mass is accumulated into the error estimate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, UnsupportedRegimeError
from .models import AlphaStable, BrokenDrift, BrownianMotion, GammaProcess, LevyModel
from .quadrature import DEFAULT_CONFIG, QuadConfig, QuadResult, from_scalar, integrate, integrate_semi_infinite

__all__ = [
    "Horizon", "SupResult",
    "sup_linear_sp", "sup_linear_sn",
    "joint_sup_density_sp", "joint_sup_density_sn",
    "sup_linear_sp_inf",
    "sup_broken_sp", "sup_broken_sn",
]


@dataclass(frozen=True)
class Horizon:
    """Finite horizon S > 0 or infinite (S = None)."""

    S: float | None

    def __post_init__(self):
        if self.S is not None and not self.S > 0.0:
            raise DomainError("finite horizon must be strictly positive")

    @classmethod
    def finite(cls, S: float) -> "Horizon":
        return cls(S=float(S))

    @classmethod
    def infinite(cls) -> "Horizon":
        return cls(S=None)

    @property
    def is_infinite(self) -> bool:
        return self.S is None


@dataclass(frozen=True)
class SupResult:
    """Broken-drift exceedance probability with its A + B decomposition."""

    probability: float
    A_term: float
    B_term: float
    err_est: float


def _require_sign(model: LevyModel, allowed: tuple[str, ...], op: str) -> None:
    if model.spectral_sign not in allowed:
        raise DomainError(
            f"{op} requires spectral sign in {allowed}, "
            f"got {model.spectral_sign!r} ({model.label})")


def _require_level_time(u: float, T: float) -> tuple[float, float]:
    u, T = float(u), float(T)
    if not u > 0.0:
        raise DomainError("level u must be strictly positive")
    if not T > 0.0:
        raise DomainError("time horizon must be strictly positive")
    return u, T


def _a_hint(model: LevyModel) -> float | None:
    # E(X(h) - c h)^- / h  ~  h^(-1/2) (Brownian), h^(1/alpha - 1) (stable),
    # bounded (gamma): the exponent feeds the endpoint substitution.
    if isinstance(model, BrownianMotion):
        return -0.5
    if isinstance(model, AlphaStable):
        return 1.0 / model.alpha - 1.0
    return None


def _density_at_times(model: LevyModel, x: np.ndarray, t: np.ndarray) -> np.ndarray:
    """f(x_i, t_i) with per-element times, vectorized per family."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if isinstance(model, BrownianMotion):
        rt = np.sqrt(t)
        return np.exp(-0.5 * (x / rt) ** 2) / (rt * math.sqrt(2.0 * math.pi))
    if isinstance(model, GammaProcess):
        d = model.delta
        out = np.zeros_like(x)
        pos = x > 0.0
        if pos.any():
            with np.errstate(under="ignore"):
                out[pos] = np.exp(t[pos] * math.log(d) + (t[pos] - 1.0) * np.log(x[pos])
                                  - d * x[pos] - gammaln(t[pos]))
        return out
    assert isinstance(model, AlphaStable)
    sc = t ** (1.0 / model.alpha)
    return model.density_std(x / sc) / sc


def sup_linear_sp(model: LevyModel, c: float, u: float, T: float,
                  cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """P(sup_{t<T}(X(t) - c t) > u) for spectrally positive X."""
    _require_sign(model, ("positive", "both"), "sup_linear_sp")
    u, T = _require_level_time(u, T)
    c = float(c)
    tail = model.survival(u + c * T, T)

    if isinstance(model, AlphaStable):
        neg_part_vec = _stable_neg_part_table(model, c, T, cfg)
    else:
        neg_part_vec = lambda h: np.array([model.neg_part_mean(c, hh) for hh in h])

    def integrand(h):
        h = np.asarray(h, dtype=float)
        flat = h.ravel()
        w = neg_part_vec(flat) / flat
        dens = _density_at_times(model, u + c * (T - flat), T - flat)
        return (w * dens).reshape(h.shape)

    res = integrate(integrand, 0.0, T, replace(cfg, singularity_exponent_hint=_a_hint(model)))
    return float(min(max(tail + res.value, 0.0), 1.0))


def _stable_neg_part_table(model: AlphaStable, c: float, T: float, cfg: QuadConfig):
    """Vectorized E(Z(h) - c h)^- over h in (0, T] for the stable family.

    Self-similarity gives E(Z(h) - c h)^- = h^(1/a) * m1(c * h^((a-1)/a))
    with m1(k) = E(Z(1) - k)^-, a smooth function of k; a Chebyshev
    interpolant on the needed k-range replaces one quadrature per node.
    """
    a = model.alpha
    p = (a - 1.0) / a
    k_max = max(c * T ** p, 1e-9)
    m_cfg = replace(cfg, singularity_exponent_hint=None)

    def m1(k):
        f = lambda x: (k - x) * model.density_std(x)
        return integrate(f, model.XI_LEFT, k, m_cfg).value

    if c == 0.0:
        m0 = m1(0.0)
        return lambda h: m0 * h ** (1.0 / a)

    cheb = np.polynomial.chebyshev.Chebyshev.interpolate(
        lambda karr: np.array([m1(float(k)) for k in np.atleast_1d(karr)]),
        deg=24, domain=[0.0, k_max])

    def table(h):
        h = np.asarray(h, dtype=float)
        return h ** (1.0 / a) * cheb(c * h ** p)

    return table


def sup_linear_sn(model: LevyModel, c: float, u: float, T: float,
                  cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """P(sup_{t<T}(Y(t) - c t) > u) for spectrally negative Y."""
    _require_sign(model, ("negative", "both"), "sup_linear_sn")
    u, T = _require_level_time(u, T)
    c = float(c)

    def integrand(s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        dens = _density_at_times(model, u + c * flat, flat)
        return (dens / flat).reshape(s.shape)

    res = integrate(integrand, 0.0, T, replace(cfg, singularity_exponent_hint=None))
    return float(min(max(u * res.value, 0.0), 1.0))


# ---------------------------------------------------------------------------
# Joint sup-and-endpoint densities.  zeta = u - z >= 0 is the gap below the
# level at the endpoint; the correction integral is
#   J(zeta) = int_0^T f(u + c s, s) * f(c (T-s) - zeta, T-s) / (T-s) ds
# and the joint density is f(z + c T, T) - zeta * J(zeta).
# ---------------------------------------------------------------------------

def _passage_weight_integral_sp(model: LevyModel, c: float, u: float, T: float,
                                zeta: float, cfg: QuadConfig) -> QuadResult:
    if zeta == 0.0:
        return QuadResult(0.0, 0.0)
    if isinstance(model, GammaProcess):
        return _gamma_passage_weight(model, c, u, T, zeta, cfg)

    s_hi = T
    if isinstance(model, AlphaStable):
        # clip where the second density argument is far in the left tail
        # (value below ~1e-30); keeps the oscillatory panel count bounded.
        sc_cut = -model.XI_LEFT_ZERO + 4.0
        f = lambda t: zeta - c * t - sc_cut * t ** (1.0 / model.alpha)
        if f(T) > 0.0:
            return QuadResult(0.0, 0.0)
        lo, hi = 0.0, T
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if f(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        s_hi = T - lo if lo > 0.0 else T

    def integrand(s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        vals = (_density_at_times(model, u + c * flat, flat)
                * _density_at_times(model, c * (T - flat) - zeta, T - flat)
                / (T - flat))
        return vals.reshape(s.shape)

    return integrate(integrand, 0.0, s_hi, cfg)


def _gamma_passage_weight(model: GammaProcess, c: float, u: float, T: float,
                          zeta: float, cfg: QuadConfig) -> QuadResult:
    """J(zeta) for the gamma family.

    In the x = c (T - s) - zeta parametrization the integrand carries an
    x^(beta - 1) endpoint factor with beta = zeta / c, which approaches an
    x^(-1) blow-up as zeta -> 0.  The left half is handled by the power
    substitution x = x_sp * v^(1/beta) assembled in log space (so v^(1/beta)
    may underflow harmlessly); the right half is a plain adaptive pass.
    """
    if c <= 0.0 or zeta >= c * T:
        return QuadResult(0.0, 0.0)
    d = model.delta
    beta = zeta / c
    x_hi = c * T - zeta

    def g_plain(x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        t2 = (flat + zeta) / c
        first = _density_at_times(model, u + c * T - zeta - flat, T - t2)
        with np.errstate(under="ignore"):
            second = np.exp(t2 * math.log(d) + (t2 - 1.0) * np.log(flat)
                            - d * flat - gammaln(t2))
        return (first * second / (flat + zeta)).reshape(x.shape)

    if beta >= 1.0:
        return integrate(g_plain, 0.0, x_hi, cfg)

    x_sp = 0.5 * x_hi
    right = integrate(g_plain, x_sp, x_hi, cfg)

    log_x_sp = math.log(x_sp)

    def g_sub(v):
        v = np.asarray(v, dtype=float)
        flat = v.ravel()
        with np.errstate(under="ignore"):
            x = np.exp(log_x_sp + np.log(flat) / beta)
        t2 = beta + x / c
        first = _density_at_times(model, u + c * T - zeta - x, T - t2)
        log_jac = (t2 * math.log(d) + (t2 - 1.0) * log_x_sp - d * x - gammaln(t2)
                   + (x / (c * beta)) * np.log(flat) + math.log(x_sp / beta))
        return (first * np.exp(log_jac) / (x + zeta)).reshape(v.shape)

    left = integrate(g_sub, 0.0, 1.0, cfg)
    return QuadResult(left.value + right.value, left.err_est + right.err_est)


def _joint_sp_raw(model: LevyModel, c: float, u: float, T: float, z: float,
                  cfg: QuadConfig) -> QuadResult:
    zeta = u - z
    point = model.density(z + c * T, T)
    if zeta == 0.0:
        return QuadResult(float(point), 0.0)
    res = _passage_weight_integral_sp(model, c, u, T, zeta, cfg)
    return QuadResult(float(point) - zeta * res.value, zeta * res.err_est)


def _joint_sn_raw(model: LevyModel, c: float, u: float, T: float, z: float,
                  cfg: QuadConfig) -> QuadResult:
    zeta = u - z

    def integrand(s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        vals = (_density_at_times(model, u + c * (T - flat), T - flat)
                * _density_at_times(model, c * flat - zeta, flat)
                / (T - flat))
        return vals.reshape(s.shape)

    point = model.density(z + c * T, T)
    res = integrate(integrand, 0.0, T, cfg)
    return QuadResult(float(point) - u * res.value, u * res.err_est)


def _clamped(raw: QuadResult, what: str, warn: bool) -> float:
    if raw.value >= 0.0:
        return raw.value
    if warn and raw.value < -(10.0 * raw.err_est + 1e-12):
        warnings.warn(f"{what} clamped from {raw.value:.3e} to 0; "
                      f"err_est {raw.err_est:.3e}", stacklevel=3)
    return 0.0


def joint_sup_density_sp(model: LevyModel, c: float, u: float, T: float, z: float,
                         cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Density in z of (sup_{t<T}(X - c t) <= u, X(T) - c T in dz), z <= u."""
    _require_sign(model, ("positive", "both"), "joint_sup_density_sp")
    u, T = _require_level_time(u, T)
    if z > u:
        raise DomainError("endpoint value z must not exceed the level u")
    return _clamped(_joint_sp_raw(model, float(c), u, T, float(z), cfg),
                    "joint sup density", warn=True)


def joint_sup_density_sn(model: LevyModel, c: float, u: float, T: float, z: float,
                         cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Spectrally negative counterpart of :func:`joint_sup_density_sp`."""
    _require_sign(model, ("negative", "both"), "joint_sup_density_sn")
    u, T = _require_level_time(u, T)
    if z > u:
        raise DomainError("endpoint value z must not exceed the level u")
    return _clamped(_joint_sn_raw(model, float(c), u, T, float(z), cfg),
                    "joint sup density", warn=True)


# ---------------------------------------------------------------------------
# Infinite-horizon linear drift.
# ---------------------------------------------------------------------------

def sup_linear_sp_inf(model: LevyModel, c: float, u: float,
                      cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """P(sup_{t<inf}(X(t) - c t) > u); requires a strictly negative net drift."""
    _require_sign(model, ("positive", "both"), "sup_linear_sp_inf")
    u = float(u)
    c = float(c)
    if not u > 0.0:
        raise DomainError("level u must be strictly positive")
    if not c > 0.0:
        raise DomainError("infinite horizon requires c > 0")

    if isinstance(model, BrownianMotion):
        return math.exp(-2.0 * c * u)

    if isinstance(model, GammaProcess):
        d = model.delta
        if not c * d > 1.0:
            raise UnsupportedRegimeError(
                f"gamma infinite horizon requires c * delta > 1, got {c * d}")
        rho = c * d - 1.0 - math.log(c * d)

        def integrand(s):
            s = np.asarray(s, dtype=float)
            return np.exp(s * math.log(d) + (s - 1.0) * np.log(u + c * s)
                          - d * c * s - gammaln(s))

        def tail(b):
            return float(integrand(np.array([b]))[0]) * 2.0 / rho

        res = integrate_semi_infinite(integrand, 0.0, cfg, tail_bound=tail,
                                      initial_span=max(20.0, 8.0 / rho))
        val = (c * d - 1.0) / d * math.exp(-d * u) * res.value
        return float(min(max(val, 0.0), 1.0))

    # stable: c * int_0^inf f(u + c s, s) ds.  The integrand decays like
    # s^(-alpha), far too slowly to truncate; mapping the tail through
    # s = 1/y turns it into a y^(alpha-2) endpoint singularity that the
    # power substitution integrates exactly.
    assert isinstance(model, AlphaStable)

    def integrand(s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        return _density_at_times(model, u + c * flat, flat).reshape(s.shape)

    b0 = max(20.0, 10.0 * (1.0 + u) / c)
    head = integrate(integrand, 0.0, b0, cfg)

    def tail_integrand(y):
        y = np.asarray(y, dtype=float)
        return integrand(1.0 / y) / (y * y)

    tail = integrate(tail_integrand, 0.0, 1.0 / b0,
                     replace(cfg, singularity_exponent_hint=model.alpha - 2.0))
    return float(min(max(c * (head.value + tail.value), 0.0), 1.0))


# ---------------------------------------------------------------------------
# Broken drift.
# ---------------------------------------------------------------------------

def _post_break_tail_sp(model: LevyModel, c2: float, horizon: Horizon, T: float,
                        cfg: QuadConfig):
    """Q(z) = P(sup over the post-break window of (X - c2 t) > z)."""
    if horizon.is_infinite:
        if c2 == 0.0:
            return lambda z: 1.0
        return lambda z: sup_linear_sp_inf(model, c2, z, cfg)
    window = horizon.S - T
    return lambda z: sup_linear_sp(model, c2, z, window, cfg)


def _post_break_tail_sn(model: LevyModel, c2: float, horizon: Horizon, T: float,
                        cfg: QuadConfig):
    if horizon.is_infinite:
        if c2 == 0.0:
            return lambda z: 1.0
        if isinstance(model, BrownianMotion):
            return lambda z: math.exp(-2.0 * c2 * z)
        raise DomainError("infinite-horizon spectrally negative tail is only "
                          "available for Brownian motion")
    window = horizon.S - T
    return lambda z: sup_linear_sn(model, c2, z, window, cfg)


def _z_upper_cut(model: LevyModel, drift: BrokenDrift, u: float, horizon: Horizon,
                 cut: float) -> float:
    """Truncation point for the B integral over z.

    The joint-density factor always decays (gamma support ends, stable and
    Gaussian left tails fall super-exponentially); the post-break tail's own
    decay (Brownian exp(-2 c2 z), gamma Lundberg rate) can only tighten it.
    """
    top = u + drift.c1 * drift.T
    if isinstance(model, GammaProcess):
        z_density = top
    elif isinstance(model, AlphaStable):
        z_density = top - model.XI_LEFT_ZERO * drift.T ** (1.0 / model.alpha)
    else:
        z_density = top + math.sqrt(2.0 * drift.T * math.log(1.0 / cut)) + 1.0
    candidates = [z_density]
    if horizon.is_infinite and drift.c2 > 0.0:
        if isinstance(model, BrownianMotion):
            candidates.append(math.log(1.0 / cut) / (2.0 * drift.c2))
        elif isinstance(model, GammaProcess) and drift.c2 * model.delta > 1.0:
            candidates.append(math.log(1.0 / cut) / model.lundberg_rate(drift.c2))
    return max(min(candidates), 1e-6)


def _sup_broken(model: LevyModel, drift: BrokenDrift, u: float, horizon: Horizon,
                cfg: QuadConfig, *, negative_side: bool) -> SupResult:
    u = float(u)
    if not u > 0.0:
        raise DomainError("level u must be strictly positive")
    if not horizon.is_infinite and not horizon.S > drift.T:
        raise DomainError("finite horizon S must exceed the break time T")

    c1, c2, T = drift.c1, drift.c2, drift.T
    if negative_side:
        A = sup_linear_sn(model, c1, u, T, cfg)
        tail_fn = _post_break_tail_sn(model, c2, horizon, T, cfg)
        joint_raw = _joint_sn_raw
    else:
        A = sup_linear_sp(model, c1, u, T, cfg)
        tail_fn = _post_break_tail_sp(model, c2, horizon, T, cfg)
        joint_raw = _joint_sp_raw

    z_hi = _z_upper_cut(model, drift, u, horizon, cfg.tail_cutoff_mass)
    inner_cfg = replace(cfg,
                        abs_tol=max(cfg.abs_tol / (8.0 * max(1.0, z_hi)), 1e-13),
                        singularity_exponent_hint=None)
    clamp_mass = [0.0]
    inner_err = [0.0]

    def b_integrand(z: float) -> float:
        q = tail_fn(z)
        joint = joint_raw(model, c1, u, T, u - z, inner_cfg)
        inner_err[0] = max(inner_err[0], joint.err_est)
        val = joint.value
        if val < 0.0:
            clamp_mass[0] += -val * q
            val = 0.0
        return q * val

    outer_cfg = replace(cfg, abs_tol=0.5 * cfg.abs_tol, singularity_exponent_hint=None)
    res = integrate(from_scalar(b_integrand), 0.0, z_hi, outer_cfg)
    B = res.value
    err = res.err_est + inner_err[0] * z_hi + clamp_mass[0] + cfg.tail_cutoff_mass
    prob = min(max(A + B, 0.0), 1.0)
    return SupResult(probability=prob, A_term=A, B_term=B, err_est=err)


def sup_broken_sp(model: LevyModel, drift: BrokenDrift, u: float, horizon: Horizon,
                  cfg: QuadConfig = DEFAULT_CONFIG) -> SupResult:
    """P(sup_{t<S}(X(t) - c(t)) > u) for spectrally positive X, broken drift."""
    _require_sign(model, ("positive", "both"), "sup_broken_sp")
    if horizon.is_infinite and isinstance(model, GammaProcess) and drift.c2 > 0.0:
        if not drift.c2 * model.delta > 1.0:
            raise UnsupportedRegimeError(
                "gamma infinite horizon requires c2 * delta > 1")
    return _sup_broken(model, drift, u, horizon, cfg, negative_side=False)


def sup_broken_sn(model: LevyModel, drift: BrokenDrift, u: float, horizon: Horizon,
                  cfg: QuadConfig = DEFAULT_CONFIG) -> SupResult:
    """P(sup_{t<S}(Y(t) - c(t)) > u) for spectrally negative Y, broken drift."""
    _require_sign(model, ("negative", "both"), "sup_broken_sn")
    return _sup_broken(model, drift, u, horizon, cfg, negative_side=True)
