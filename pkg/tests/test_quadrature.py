import numpy as np
import pytest
from scipy.stats import norm

from levy_breakdrift.errors import QuadratureError, TailTruncationError
from levy_breakdrift.quadrature import (
    QuadConfig,
    from_scalar,
    integrate,
    integrate_nested,
    integrate_semi_infinite,
)

CFG = QuadConfig()


def test_rule_constants_are_consistent():
    # The embedded Kronrod/Gauss tables must integrate polynomials exactly.
    for k in range(0, 12, 2):
        res = integrate(lambda x: x ** k, -1.0, 1.0, CFG)
        assert res.value == pytest.approx(2.0 / (k + 1), abs=1e-13)
    res = integrate(lambda x: x ** 7, -1.0, 1.0, CFG)
    assert res.value == pytest.approx(0.0, abs=1e-14)


def test_polynomial():
    res = integrate(lambda x: x, 0.0, 1.0, CFG)
    assert res.value == pytest.approx(0.5, abs=1e-12)
    assert res.err_est < 1e-10


def test_endpoint_singularity_sqrt():
    # Contract: |value - true| <= max(abs_tol, rel_tol * |value|); pick
    # tolerances so the guaranteed bound is 1e-8 for a value of 2.
    res = integrate(lambda x: x ** -0.5, 0.0, 1.0, QuadConfig(abs_tol=1e-8, rel_tol=5e-9))
    assert res.value == pytest.approx(2.0, abs=1e-8)


def test_endpoint_singularity_with_hint_is_cheap_and_exact():
    cfg = QuadConfig(singularity_exponent_hint=-0.5)
    res = integrate(lambda x: x ** -0.5, 0.0, 1.0, cfg)
    assert res.value == pytest.approx(2.0, abs=1e-12)


def test_gaussian_damped_inner_integrand():
    # Inner kernel of the drift-break identity integrals at (T, z, u) = (1, 1, 1);
    # expected value frozen from an independent high-subdivision oracle
    # (scipy.quad at 1e-14, confirmed by mpmath to 17 digits).
    T, z, u = 1.0, 1.0, 1.0

    def f(s):
        return (T - s) ** -1.5 * s ** -0.5 * np.exp(-z * z / (2 * (T - s)) - u * u / (2 * s))

    res = integrate(f, 0.0, T, CFG)
    assert res.value == pytest.approx(0.33923524751608825, abs=1e-10)


def test_semi_infinite_exponential():
    res = integrate_semi_infinite(lambda x: np.exp(-x), 0.0, CFG,
                                  tail_bound=lambda b: np.exp(-b))
    assert res.value == pytest.approx(1.0, abs=1e-8)


def test_semi_infinite_gaussian_moment():
    res = integrate_semi_infinite(lambda x: x * np.exp(-x * x / 2), 0.0, CFG,
                                  tail_bound=lambda b: np.exp(-b * b / 2) * (1 + b))
    assert res.value == pytest.approx(1.0, abs=1e-8)


def test_semi_infinite_identity_integral():
    # int_0^inf z e^{-cz} (inner integral) dz at (c, T, u) = (1, 1, 1) equals
    # 2*pi*exp(c*u + c^2 T/2) * Phi(-u/sqrt(T) - c sqrt(T)).
    c, T, u = 1.0, 1.0, 1.0

    def inner(z):
        def f(s):
            return (T - s) ** -1.5 * s ** -0.5 * np.exp(-z * z / (2 * (T - s)) - u * u / (2 * s))
        return integrate(f, 0.0, T, QuadConfig(abs_tol=1e-11, rel_tol=1e-11)).value

    def outer(z):
        return z * np.exp(-c * z) * inner(z)

    def tail(b):
        # inner(z) <= 2 sqrt(2 pi) Phi(-z/sqrt(T)) * sup_s s^{-1/2} e^{-u^2/(2s)} / z
        return 10.0 * np.exp(-c * b - b * b / (2 * T))

    res = integrate_semi_infinite(from_scalar(outer), 0.0, QuadConfig(abs_tol=1e-9, rel_tol=1e-9),
                                  tail_bound=tail)
    expected = 2 * np.pi * np.exp(c * u + c * c * T / 2) * norm.cdf(-u / np.sqrt(T) - c * np.sqrt(T))
    assert res.value == pytest.approx(expected, abs=2e-7)


def test_nested_trivial():
    res = integrate_nested(lambda z, v: v, lambda z, s: 1.0 + 0.0 * s,
                           (0.0, 1.0), (0.0, 1.0), CFG)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_nested_separable():
    res = integrate_nested(lambda z, v: z * v, lambda z, s: s,
                           (0.0, 1.0), (0.0, 1.0), CFG)
    assert res.value == pytest.approx(0.25, abs=1e-9)


def test_nested_identity_double_integral():
    # Double integral from the drift-break decomposition at
    # (c1, c2, T, u) = (1, 0.5, 1, 1), where c1 - 2*c2 = 0:
    # int_0^inf z * inner(z) dz = 2*pi*Phi(-1); frozen from a dense-grid oracle.
    T, u = 1.0, 1.0

    def inner(z, s):
        return (T - s) ** -1.5 * s ** -0.5 * np.exp(-z * z / (2 * (T - s)) - u * u / (2 * s))

    res = integrate_nested(lambda z, v: z * v, inner, (0.0, 30.0), (0.0, T),
                           QuadConfig(abs_tol=1e-9, rel_tol=1e-9))
    assert res.value == pytest.approx(0.9968603604089774, abs=1e-7)


def test_linearity_on_random_functions():
    rng = np.random.default_rng(5)
    for _ in range(5):
        a1, b1 = rng.normal(), rng.normal()
        w = rng.uniform(0.5, 2.0, size=3)
        f = lambda x: np.sin(w[0] * x) + w[1]
        g = lambda x: np.exp(-w[2] * x * x)
        lhs = integrate(lambda x: a1 * f(x) + b1 * g(x), 0.0, 2.0, CFG).value
        rhs = a1 * integrate(f, 0.0, 2.0, CFG).value + b1 * integrate(g, 0.0, 2.0, CFG).value
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_refinement_monotonicity():
    funcs = [lambda x: np.sin(10 * x), lambda x: x ** -0.3, lambda x: np.exp(-1.0 / np.maximum(x, 1e-300))]
    for f in funcs:
        loose = integrate(f, 0.0, 1.0, QuadConfig(abs_tol=1e-5, rel_tol=1e-5))
        tight = integrate(f, 0.0, 1.0, QuadConfig(abs_tol=1e-10, rel_tol=1e-10))
        assert tight.err_est <= loose.err_est + 1e-15


def test_open_rule_never_touches_endpoints():
    seen = []

    def f(x):
        seen.append(np.asarray(x).ravel())
        return np.sqrt(x)

    integrate(f, 0.0, 1.0, CFG)
    allx = np.concatenate(seen)
    assert np.all(allx > 0.0)
    assert np.all(allx < 1.0)


def test_budget_exhaustion_carries_partial_value():
    cfg = QuadConfig(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=12)
    with pytest.raises(QuadratureError) as exc_info:
        integrate(lambda x: x ** -0.9, 0.0, 1.0, cfg)
    err = exc_info.value
    assert err.value is not None and err.err_est is not None
    assert err.value == pytest.approx(10.0, rel=0.5)


def test_tail_bound_never_falling_raises():
    with pytest.raises(TailTruncationError):
        integrate_semi_infinite(lambda x: 1.0 / (1.0 + x), 0.0, CFG,
                                tail_bound=lambda b: 1.0)


def test_invalid_configs_rejected():
    with pytest.raises(ValueError):
        QuadConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadConfig(max_subdivisions=5)
    with pytest.raises(ValueError):
        QuadConfig(singularity_exponent_hint=-1.5)
    with pytest.raises(ValueError):
        integrate(lambda x: x, 1.0, 0.0)
