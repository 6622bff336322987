"""Hot numeric kernels: oscillatory stable-density integrals and Monte Carlo
path scans.

Each kernel has a numba ``@njit`` loop implementation (``*_nb``) and a
vectorized pure-numpy twin (``*_np``).  The public unsuffixed names bind to
one of the two at import time based on ``LEVY_BREAKDRIFT_NO_NUMBA``; both
twins stay importable for equivalence tests and benchmarks.

The cosine/sine kernels integrate

    I_cos(xi)            = int_0^inf exp(-w^a) cos(w*xi - tau*w^a) dw
    I_sin(xi_lo, xi_hi)  = int_0^inf exp(-w^a) [sin(w*xi_hi - tau*w^a)
                                               - sin(w*xi_lo - tau*w^a)] / w dw

with tau = tan(pi*a/2), using fixed-order Gauss-Legendre panels sized so the
phase advances at most ~1.2 rad per panel.  The exp(-w^a) factor makes
truncation trivial; panel summation is ascending and deterministic.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import NUMBA_ENABLED, njit

# 10-point Gauss-Legendre rule on (-1, 1); interior nodes only.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)

_TRUNC_LOG = 41.5          # exp(-W^alpha) ~ 1e-18 at the truncation point
_PHASE_PER_PANEL = 1.2
_MAX_PANELS = 4_000_000


def _panel_count(xi_abs: float, alpha: float, tau_abs: float, W: float) -> int:
    dmax = xi_abs + alpha * tau_abs * W ** (alpha - 1.0)
    n = int(W * dmax / _PHASE_PER_PANEL) + 1
    if n < 16:
        n = 16
    if n > _MAX_PANELS:
        n = _MAX_PANELS
    return n


@njit(cache=True)
def _gl_cos_cell_nb(a, b, x, alpha, tau, glx, glw):  # pragma: no cover - jit
    half = 0.5 * (b - a)
    part = 0.0
    for q in range(glx.shape[0]):
        w = a + half * (1.0 + glx[q])
        wa = w ** alpha
        part += glw[q] * math.exp(-wa) * math.cos(w * x - tau * wa)
    return half * part


@njit(cache=True)
def _stable_cos_batch_nb(xi, alpha, tau, W, glx, glw):  # pragma: no cover - jit
    out = np.empty(xi.shape[0])
    for i in range(xi.shape[0]):
        x = xi[i]
        dmax = abs(x) + alpha * abs(tau) * W ** (alpha - 1.0)
        n = int(W * dmax / 1.2) + 1
        if n < 16:
            n = 16
        if n > 4_000_000:
            n = 4_000_000
        h = W / n
        # w^alpha has unbounded curvature at 0: grade the first panel
        # geometrically so the fixed-order rule stays at full accuracy.
        acc = _gl_cos_cell_nb(0.0, h * 2.0 ** -14, x, alpha, tau, glx, glw)
        for g in range(14, 0, -1):
            acc += _gl_cos_cell_nb(h * 2.0 ** -g, h * 2.0 ** -(g - 1), x, alpha, tau, glx, glw)
        for p in range(1, n):
            acc += _gl_cos_cell_nb(p * h, (p + 1) * h, x, alpha, tau, glx, glw)
        out[i] = acc
    return out


def _cell_edges(n: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Uniform panel edges with the first panel geometrically graded."""
    graded = h * 2.0 ** -np.arange(14, -1, -1.0)
    lo = np.concatenate([[0.0], graded[:-1], h * np.arange(1, n)])
    hi = np.concatenate([graded, h * np.arange(2, n + 1)])
    return lo, hi


def _stable_cos_batch_np(xi, alpha, tau, W, glx, glw):
    out = np.empty(xi.shape[0])
    for i, x in enumerate(xi):
        n = _panel_count(abs(x), alpha, abs(tau), W)
        lo, hi = _cell_edges(n, W / n)
        half = 0.5 * (hi - lo)
        w = lo[:, None] + half[:, None] * (1.0 + glx)[None, :]
        wa = w ** alpha
        vals = np.exp(-wa) * np.cos(w * x - tau * wa)
        out[i] = float((half * (vals @ glw)).sum())
    return out


@njit(cache=True)
def _gl_sin_cell_nb(a, b, lo, hi, alpha, tau, glx, glw):  # pragma: no cover - jit
    half = 0.5 * (b - a)
    part = 0.0
    for q in range(glx.shape[0]):
        w = a + half * (1.0 + glx[q])
        wa = w ** alpha
        ph = tau * wa
        part += glw[q] * math.exp(-wa) * (math.sin(w * hi - ph) - math.sin(w * lo - ph)) / w
    return half * part


@njit(cache=True)
def _stable_sin_batch_nb(xi_lo, xi_hi, alpha, tau, W, glx, glw):  # pragma: no cover - jit
    out = np.empty(xi_lo.shape[0])
    for i in range(xi_lo.shape[0]):
        lo = xi_lo[i]
        hi = xi_hi[i]
        m = abs(lo)
        if abs(hi) > m:
            m = abs(hi)
        dmax = m + alpha * abs(tau) * W ** (alpha - 1.0)
        n = int(W * dmax / 1.2) + 1
        if n < 16:
            n = 16
        if n > 4_000_000:
            n = 4_000_000
        h = W / n
        acc = _gl_sin_cell_nb(0.0, h * 2.0 ** -14, lo, hi, alpha, tau, glx, glw)
        for g in range(14, 0, -1):
            acc += _gl_sin_cell_nb(h * 2.0 ** -g, h * 2.0 ** -(g - 1), lo, hi, alpha, tau, glx, glw)
        for p in range(1, n):
            acc += _gl_sin_cell_nb(p * h, (p + 1) * h, lo, hi, alpha, tau, glx, glw)
        out[i] = acc
    return out


def _stable_sin_batch_np(xi_lo, xi_hi, alpha, tau, W, glx, glw):
    out = np.empty(xi_lo.shape[0])
    for i in range(xi_lo.shape[0]):
        lo, hi = xi_lo[i], xi_hi[i]
        n = _panel_count(max(abs(lo), abs(hi)), alpha, abs(tau), W)
        clo, chi = _cell_edges(n, W / n)
        half = 0.5 * (chi - clo)
        w = clo[:, None] + half[:, None] * (1.0 + glx)[None, :]
        wa = w ** alpha
        ph = tau * wa
        vals = np.exp(-wa) * (np.sin(w * hi - ph) - np.sin(w * lo - ph)) / w
        out[i] = float((half * (vals @ glw)).sum())
    return out


@njit(cache=True)
def _cms_transform_nb(u1, u2, alpha):  # pragma: no cover - jit
    tpa = math.tan(math.pi * alpha / 2.0)
    B = math.atan(tpa) / alpha
    S = (1.0 + tpa * tpa) ** (1.0 / (2.0 * alpha))
    e1 = 1.0 / alpha
    e2 = (1.0 - alpha) / alpha
    out = np.empty(u1.shape[0])
    for i in range(u1.shape[0]):
        v = math.pi * (u1[i] - 0.5)
        w = -math.log1p(-u2[i])
        if w < 1e-300:
            out[i] = 0.0
            continue
        avb = alpha * (v + B)
        out[i] = (S * math.sin(avb) / math.cos(v) ** e1
                  * (math.cos(v - avb) / w) ** e2)
    return out


def _cms_transform_np(u1, u2, alpha):
    tpa = np.tan(np.pi * alpha / 2.0)
    B = np.arctan(tpa) / alpha
    S = (1.0 + tpa * tpa) ** (1.0 / (2.0 * alpha))
    v = np.pi * (u1 - 0.5)
    w = np.maximum(-np.log1p(-u2), 1e-300)
    avb = alpha * (v + B)
    return (S * np.sin(avb) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - avb) / w) ** ((1.0 - alpha) / alpha))


# ---------------------------------------------------------------------------
# Path scans.  `inc` has shape (n_paths, n_steps); node arrays have length
# n_steps + 1 and refer to the grid times including t=0.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _bm_crossed_nb(inc, unif, barrier, dts):  # pragma: no cover - jit
    n, m = inc.shape
    out = np.zeros(n, dtype=np.uint8)
    for k in range(n):
        x = 0.0
        for j in range(m):
            x1 = x + inc[k, j]
            d0 = barrier[j] - x
            d1 = barrier[j + 1] - x1
            if d0 <= 0.0 or d1 <= 0.0:
                out[k] = 1
                break
            if unif[k, j] < math.exp(-2.0 * d0 * d1 / dts[j]):
                out[k] = 1
                break
            x = x1
    return out


def _bm_crossed_np(inc, unif, barrier, dts):
    x = np.cumsum(inc, axis=1)
    x = np.concatenate([np.zeros((inc.shape[0], 1)), x], axis=1)
    d0 = barrier[None, :-1] - x[:, :-1]
    d1 = barrier[None, 1:] - x[:, 1:]
    above = (d0 <= 0.0) | (d1 <= 0.0)
    p = np.exp(-2.0 * np.maximum(d0, 0.0) * np.maximum(d1, 0.0) / dts[None, :])
    crossed = above | (unif < p)
    return crossed.any(axis=1).astype(np.uint8)


@njit(cache=True)
def _bm_sup_ragged_nb(inc, unif, n_steps, c1, c2, t_break, dt):  # pragma: no cover - jit
    n = inc.shape[0]
    out = np.zeros(n)
    for k in range(n):
        m = n_steps[k]
        tb = t_break[k]
        x = 0.0
        best = 0.0
        t0 = 0.0
        y0 = 0.0
        for j in range(m):
            t1 = t0 + dt
            x += inc[k, j]
            drift = c1 * min(t1, tb) + c2 * max(0.0, t1 - tb)
            y1 = x - drift
            d = y1 - y0
            lam = math.log(unif[k, j])
            peak = 0.5 * (y0 + y1 + math.sqrt(d * d - 2.0 * dt * lam))
            if peak > best:
                best = peak
            t0 = t1
            y0 = y1
        out[k] = best
    return out


def _bm_sup_ragged_np(inc, unif, n_steps, c1, c2, t_break, dt):
    n, m_max = inc.shape
    t = dt * np.arange(1, m_max + 1)
    drift = c1 * np.minimum(t[None, :], t_break[:, None]) \
        + c2 * np.maximum(0.0, t[None, :] - t_break[:, None])
    y = np.cumsum(inc, axis=1) - drift
    y_full = np.concatenate([np.zeros((n, 1)), y], axis=1)
    d = np.diff(y_full, axis=1)
    peak = 0.5 * (y_full[:, :-1] + y_full[:, 1:]
                  + np.sqrt(d * d - 2.0 * dt * np.log(unif)))
    live = np.arange(m_max)[None, :] < n_steps[:, None]
    peak = np.where(live, peak, -np.inf)
    return np.maximum(peak.max(axis=1), 0.0)


@njit(cache=True)
def _bm_two_lines_nb(inc, unif, line1, line2, dts):  # pragma: no cover - jit
    n, m = inc.shape
    f1 = np.zeros(n, dtype=np.uint8)
    f2 = np.zeros(n, dtype=np.uint8)
    fsim = np.zeros(n, dtype=np.uint8)
    for k in range(n):
        x = 0.0
        for j in range(m):
            x1 = x + inc[k, j]
            a0 = line1[j] - x
            a1 = line1[j + 1] - x1
            b0 = line2[j] - x
            b1 = line2[j + 1] - x1
            if a0 <= 0.0 or a1 <= 0.0:
                p1 = 1.0
            else:
                p1 = math.exp(-2.0 * a0 * a1 / dts[j])
            if b0 <= 0.0 or b1 <= 0.0:
                p2 = 1.0
            else:
                p2 = math.exp(-2.0 * b0 * b1 / dts[j])
            u = unif[k, j]
            c1 = u < p1
            c2 = u < p2
            if c1:
                f1[k] = 1
            if c2:
                f2[k] = 1
            if c1 and c2:
                fsim[k] = 1
            if f1[k] and f2[k] and fsim[k]:
                break
            x = x1
    return f1, f2, fsim


def _bm_two_lines_np(inc, unif, line1, line2, dts):
    x = np.cumsum(inc, axis=1)
    x = np.concatenate([np.zeros((inc.shape[0], 1)), x], axis=1)

    def step_prob(line):
        d0 = line[None, :-1] - x[:, :-1]
        d1 = line[None, 1:] - x[:, 1:]
        p = np.exp(-2.0 * np.maximum(d0, 0.0) * np.maximum(d1, 0.0) / dts[None, :])
        return np.where((d0 <= 0.0) | (d1 <= 0.0), 1.0, p)

    p1 = step_prob(line1)
    p2 = step_prob(line2)
    c1 = unif < p1
    c2 = unif < p2
    return (c1.any(axis=1).astype(np.uint8),
            c2.any(axis=1).astype(np.uint8),
            (c1 & c2).any(axis=1).astype(np.uint8))


@njit(cache=True)
def _endpoint_crossed_nb(inc, barrier):  # pragma: no cover - jit
    n, m = inc.shape
    out = np.zeros(n, dtype=np.uint8)
    for k in range(n):
        x = 0.0
        for j in range(m):
            x += inc[k, j]
            if x > barrier[j + 1]:
                out[k] = 1
                break
    return out


def _endpoint_crossed_np(inc, barrier):
    x = np.cumsum(inc, axis=1)
    return (x > barrier[None, 1:]).any(axis=1).astype(np.uint8)


@njit(cache=True)
def _endpoint_sup_ragged_nb(inc, n_steps, c1, c2, t_break, dt):  # pragma: no cover - jit
    n = inc.shape[0]
    out = np.zeros(n)
    for k in range(n):
        m = n_steps[k]
        tb = t_break[k]
        x = 0.0
        best = 0.0
        for j in range(m):
            t1 = (j + 1) * dt
            x += inc[k, j]
            drift = c1 * min(t1, tb) + c2 * max(0.0, t1 - tb)
            y = x - drift
            if y > best:
                best = y
        out[k] = best
    return out


def _endpoint_sup_ragged_np(inc, n_steps, c1, c2, t_break, dt):
    n, m_max = inc.shape
    t = dt * np.arange(1, m_max + 1)
    drift = c1 * np.minimum(t[None, :], t_break[:, None]) \
        + c2 * np.maximum(0.0, t[None, :] - t_break[:, None])
    y = np.cumsum(inc, axis=1) - drift
    live = np.arange(m_max)[None, :] < n_steps[:, None]
    y = np.where(live, y, -np.inf)
    return np.maximum(y.max(axis=1), 0.0)


@njit(cache=True)
def _endpoint_two_lines_nb(inc, line1, line2):  # pragma: no cover - jit
    n, m = inc.shape
    f1 = np.zeros(n, dtype=np.uint8)
    f2 = np.zeros(n, dtype=np.uint8)
    fsim = np.zeros(n, dtype=np.uint8)
    for k in range(n):
        x = 0.0
        for j in range(m):
            x += inc[k, j]
            c1 = x > line1[j + 1]
            c2 = x > line2[j + 1]
            if c1:
                f1[k] = 1
            if c2:
                f2[k] = 1
            if c1 and c2:
                fsim[k] = 1
            if f1[k] and f2[k] and fsim[k]:
                break
    return f1, f2, fsim


def _endpoint_two_lines_np(inc, line1, line2):
    x = np.cumsum(inc, axis=1)
    c1 = x > line1[None, 1:]
    c2 = x > line2[None, 1:]
    return (c1.any(axis=1).astype(np.uint8),
            c2.any(axis=1).astype(np.uint8),
            (c1 & c2).any(axis=1).astype(np.uint8))


if NUMBA_ENABLED:
    stable_cos_batch_raw = _stable_cos_batch_nb
    stable_sin_batch_raw = _stable_sin_batch_nb
    cms_transform = _cms_transform_nb
    bm_crossed = _bm_crossed_nb
    bm_sup_ragged = _bm_sup_ragged_nb
    bm_two_lines = _bm_two_lines_nb
    endpoint_crossed = _endpoint_crossed_nb
    endpoint_sup_ragged = _endpoint_sup_ragged_nb
    endpoint_two_lines = _endpoint_two_lines_nb
else:
    stable_cos_batch_raw = _stable_cos_batch_np
    stable_sin_batch_raw = _stable_sin_batch_np
    cms_transform = _cms_transform_np
    bm_crossed = _bm_crossed_np
    bm_sup_ragged = _bm_sup_ragged_np
    bm_two_lines = _bm_two_lines_np
    endpoint_crossed = _endpoint_crossed_np
    endpoint_sup_ragged = _endpoint_sup_ragged_np
    endpoint_two_lines = _endpoint_two_lines_np


def stable_cos_batch(xi: np.ndarray, alpha: float) -> np.ndarray:
    """I_cos over a batch of standardized arguments."""
    tau = math.tan(math.pi * alpha / 2.0)
    W = _TRUNC_LOG ** (1.0 / alpha)
    return stable_cos_batch_raw(np.ascontiguousarray(xi, dtype=np.float64),
                                alpha, tau, W, _GL_X, _GL_W)


def stable_sin_batch(xi_lo: np.ndarray, xi_hi: np.ndarray, alpha: float) -> np.ndarray:
    """I_sin over batches of standardized interval endpoints."""
    tau = math.tan(math.pi * alpha / 2.0)
    W = _TRUNC_LOG ** (1.0 / alpha)
    return stable_sin_batch_raw(np.ascontiguousarray(xi_lo, dtype=np.float64),
                                np.ascontiguousarray(xi_hi, dtype=np.float64),
                                alpha, tau, W, _GL_X, _GL_W)
