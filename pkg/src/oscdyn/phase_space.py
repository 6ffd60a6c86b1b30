"""Husimi functions, reduced density matrices and populations of the pair.

Both baths are taken at the same occupation ``nbar``.  Phase-space points may
be scalars or broadcastable numpy arrays; grids are always chosen by the
caller.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.special import eval_genlaguerre, gammaln, logsumexp

from .core import DampingEnvelope, SystemParams, _check_time, envelope_eval
from .pair import drive_response, drive_response_series, mode_coefficients
from .quadrature import QuadratureConfig

ArrayLike = Union[complex, np.ndarray]

# denominators below this are replaced by their analytic limits
DEGENERATE = 1e-12
TRUNCATION_TOL = 1e-8


@dataclass(frozen=True)
class PhasePoint:
    alpha1: ArrayLike
    alpha2: ArrayLike


@dataclass(frozen=True)
class CoherentInit:
    alpha0: complex = 0j
    beta0: complex = 0j


@dataclass
class DensityMatrix:
    """Density matrix in the number basis |0>, ..., |dim-1>."""

    entries: np.ndarray
    warning: Optional[str] = None

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def tail_mass(self) -> float:
        return float(1.0 - np.trace(self.entries).real)

    def populations(self) -> np.ndarray:
        return np.diag(self.entries).real.copy()

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


@dataclass(frozen=True)
class NumberQContext:
    e_t: float
    w_t: ArrayLike
    sigma_t: float
    f1: complex
    f2: complex
    mu1: complex
    mu2: complex


# ---------------------------------------------------------------------------
# Laguerre polynomials
# ---------------------------------------------------------------------------

def laguerre(n: int, x):
    """L_n(x) by the three-term recurrence (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), 1.0 - x
    if n == 0:
        return prev if prev.ndim else float(prev)
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def scaled_laguerre(n: int, x, s):
    """s^n L_n(-x/s) for x, s >= 0, including the s -> 0 limit x^n / n!.

    Uses the recurrence (k+1) S_{k+1} = ((2k+1) s + x) S_k - k s^2 S_{k-1},
    which has no division by s and only non-negative terms in its closed sum.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    prev = np.ones(np.broadcast(x, s).shape)
    cur = s + x
    if n == 0:
        return prev if prev.ndim else float(prev)
    for k in range(1, n):
        prev, cur = cur, (((2 * k + 1) * s + x) * cur - k * s * s * prev) / (k + 1)
    return cur if np.ndim(cur) else float(cur)


def _log_pow(base, exponent):
    """exponent * log(base) with 0**0 = 1 (log 0) and 0**k = 0 (-inf)."""
    base = np.asarray(base, dtype=float)
    exponent = np.asarray(exponent, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = exponent * np.log(base)
    return np.where(exponent == 0, 0.0, out)


# ---------------------------------------------------------------------------
# coherent initial states
# ---------------------------------------------------------------------------

def _weights(params, env, t, cfg):
    c = mode_coefficients(params, env, t)
    d = drive_response(params, env, t, cfg)
    return c.p, c.u, d.f1, d.f2


def maxima_trajectory(params: SystemParams, env: DampingEnvelope, init: CoherentInit, t: float,
                      cfg: QuadratureConfig = QuadratureConfig()):
    """Centres (nu1, nu2) of the two-oscillator Husimi distribution."""
    mu1, mu2, f1, f2 = _weights(params, env, t, cfg)
    nu1 = f1 + mu1 * init.alpha0 + mu2 * init.beta0
    nu2 = f2 + mu2 * init.alpha0 + mu1 * init.beta0
    return complex(nu1), complex(nu2)


def maxima_trajectory_series(params: SystemParams, env: DampingEnvelope, init: CoherentInit, times,
                             cfg: QuadratureConfig = QuadratureConfig()):
    """Arrays (nu1, nu2) on a sorted time grid."""
    times = np.asarray(times, dtype=float)
    f1, f2 = drive_response_series(params, env, times, cfg)
    cg, _ = env.cos_sin(times)
    phase = np.exp(-1j * params.omega0 * times) * cg
    mu1 = phase * np.cos(params.k * times)
    mu2 = -1j * phase * np.sin(params.k * times)
    return f1 + mu1 * init.alpha0 + mu2 * init.beta0, f2 + mu2 * init.alpha0 + mu1 * init.beta0


def husimi_coherent(params: SystemParams, env: DampingEnvelope, init: CoherentInit, nbar: float,
                    t: float, point: PhasePoint, cfg: QuadratureConfig = QuadratureConfig()):
    nu1, nu2 = maxima_trajectory(params, env, init, t, cfg)
    sigma = 1.0 + nbar * envelope_eval(env, t)[1] ** 2
    d2 = np.abs(nu1 - np.asarray(point.alpha1)) ** 2 + np.abs(nu2 - np.asarray(point.alpha2)) ** 2
    return np.exp(-d2 / sigma) / (np.pi ** 2 * sigma ** 2)


def husimi_coherent_single(params: SystemParams, env: DampingEnvelope, init: CoherentInit, nbar: float,
                           t: float, alpha, oscillator: int, cfg: QuadratureConfig = QuadratureConfig()):
    """Husimi function of oscillator 1 or 2 alone (the joint one is their product)."""
    nu = maxima_trajectory(params, env, init, t, cfg)[oscillator - 1]
    sigma = 1.0 + nbar * envelope_eval(env, t)[1] ** 2
    return np.exp(-np.abs(nu - np.asarray(alpha)) ** 2 / sigma) / (np.pi * sigma)


def reduced_density_matrix(r_t: complex, sigma_t: float, dim: int) -> DensityMatrix:
    """Number-basis matrix of the displaced thermal state with Husimi width sigma_t.

    rho_mn = e^{-|r|^2/s} sqrt(n!/m!) conj(r)^{n-m} / s^{n+1}
             * sum_k C(m,k) (s-1)^{m-k} (|r|^2/s)^k / (n-m+k)!     (m <= n, s = sigma_t)

    Evaluated in log space so dimensions of a few hundred are representable.
    """
    if sigma_t < 1.0 - 1e-15:
        raise ValueError("sigma_t must be >= 1")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    s = max(sigma_t - 1.0, 0.0)
    if s < DEGENERATE:
        s = 0.0
    sigma = 1.0 + s
    r = complex(r_t)
    x = abs(r) ** 2 / sigma

    idx = np.arange(dim)
    m = idx[:, None, None]
    n = idx[None, :, None]
    k = idx[None, None, :]
    valid = (k <= m) & (m <= n)
    mm, nn, kk = np.broadcast_arrays(m, n, k)
    kk_safe = np.where(valid, kk, 0)
    terms = (gammaln(mm + 1) - gammaln(kk_safe + 1) - gammaln(np.maximum(mm - kk_safe, 0) + 1)
             + _log_pow(s, np.where(valid, mm - kk_safe, 0))
             + _log_pow(x, kk_safe)
             - gammaln(np.maximum(nn - mm + kk_safe, 0) + 1))
    terms = np.where(valid, terms, -np.inf)
    with np.errstate(divide="ignore"):
        logsum = logsumexp(terms, axis=2)
    m2, n2 = idx[:, None], idx[None, :]
    upper = m2 <= n2
    diff = np.where(upper, n2 - m2, 0)
    logmag = (-abs(r) ** 2 / sigma + 0.5 * (gammaln(n2 + 1) - gammaln(m2 + 1))
              + _log_pow(abs(r), diff) - (n2 + 1) * np.log(sigma) + logsum)
    mag = np.where(upper, np.exp(logmag), 0.0)
    rho = mag * np.exp(-1j * np.angle(r) * diff)
    rho = np.triu(rho) + np.triu(rho, 1).conj().T
    out = DensityMatrix(rho)
    if out.tail_mass > TRUNCATION_TOL:
        out.warning = f"dimension {dim} misses probability mass {out.tail_mass:.3e}"
    return out


def populations(r_t: complex, nbar: float, env: DampingEnvelope, t: float, n: int) -> float:
    """P_n of the displaced thermal state: diagonal of ``reduced_density_matrix``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    sin_g = envelope_eval(env, t)[1]
    thermal = nbar * sin_g * sin_g
    if thermal < DEGENERATE:
        thermal = 0.0
    sigma = 1.0 + thermal
    x = abs(r_t) ** 2 / sigma
    return float(np.exp(-x) / sigma * scaled_laguerre(n, x / sigma, thermal / sigma))


# ---------------------------------------------------------------------------
# number-state initial condition |N>_1 <N| x |0>_2 <0|
# ---------------------------------------------------------------------------

def number_q_context(params: SystemParams, env: DampingEnvelope, nbar: float, t: float,
                     point: Optional[PhasePoint] = None,
                     cfg: QuadratureConfig = QuadratureConfig()) -> NumberQContext:
    mu1, mu2, f1, f2 = _weights(params, env, t, cfg)
    cos_g, sin_g = envelope_eval(env, t)
    sigma = 1.0 + nbar * sin_g ** 2
    e_t = max(1.0 - cos_g ** 2 / sigma, 0.0)
    w = 0j
    if point is not None:
        w = ((np.asarray(point.alpha1) - f1) * np.conj(mu1) + (np.asarray(point.alpha2) - f2) * np.conj(mu2)) / sigma
    return NumberQContext(e_t, w, sigma, f1, f2, mu1, mu2)


def husimi_number(params: SystemParams, env: DampingEnvelope, N: int, nbar: float, t: float,
                  point: PhasePoint, cfg: QuadratureConfig = QuadratureConfig()):
    if N < 0:
        raise ValueError("N must be non-negative")
    ctx = number_q_context(params, env, nbar, t, point, cfg)
    d2 = np.abs(ctx.f1 - np.asarray(point.alpha1)) ** 2 + np.abs(ctx.f2 - np.asarray(point.alpha2)) ** 2
    e_t = 0.0 if ctx.e_t < DEGENERATE else ctx.e_t
    gauss = np.exp(-d2 / ctx.sigma_t) / (np.pi ** 2 * ctx.sigma_t ** 2)
    return gauss * scaled_laguerre(N, np.abs(ctx.w_t) ** 2, e_t)


def husimi_number_generating(params: SystemParams, env: DampingEnvelope, nbar: float, t: float,
                             point: PhasePoint, y: float, cfg: QuadratureConfig = QuadratureConfig()):
    """sum_N y^N Q_N for |y| < 1."""
    ctx = number_q_context(params, env, nbar, t, point, cfg)
    d2 = np.abs(ctx.f1 - np.asarray(point.alpha1)) ** 2 + np.abs(ctx.f2 - np.asarray(point.alpha2)) ** 2
    denom = 1.0 - y * ctx.e_t
    return (np.exp(-d2 / ctx.sigma_t + y * np.abs(ctx.w_t) ** 2 / denom)
            / (np.pi ** 2 * ctx.sigma_t ** 2 * denom))


def reduced_generating_function(params: SystemParams, env: DampingEnvelope, nbar: float, t: float,
                                alpha2, y: float, cfg: QuadratureConfig = QuadratureConfig()):
    """sum_N y^N Q_N^red(alpha2) in closed form.

    With X = |alpha2 - f2|^2 and A(y) = sigma - y (e sigma + |mu1|^2):
        (1 / (pi A)) exp(-X / sigma + |mu2|^2 X y / (sigma A))
    """
    ctx = number_q_context(params, env, nbar, t, None, cfg)
    sigma = ctx.sigma_t
    X = np.abs(np.asarray(alpha2) - ctx.f2) ** 2
    A = sigma - y * (ctx.e_t * sigma + abs(ctx.mu1) ** 2)
    return np.exp(-X / sigma + abs(ctx.mu2) ** 2 * X * y / (sigma * A)) / (np.pi * A)


def husimi_number_reduced(params: SystemParams, env: DampingEnvelope, N: int, nbar: float, t: float,
                          alpha2, cfg: QuadratureConfig = QuadratureConfig()):
    """Husimi function of oscillator 2 for the initial state |N>|0>.

    The y^N coefficient of the generating function is a Laguerre polynomial:
        Q_N^red = e^{-X/sigma} / (pi sigma) * a^N L_N(-|mu2|^2 X / (sigma a)) / sigma^N,
    with a = e sigma + |mu1|^2.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    ctx = number_q_context(params, env, nbar, t, None, cfg)
    sigma = ctx.sigma_t
    X = np.abs(np.asarray(alpha2) - ctx.f2) ** 2
    a = (ctx.e_t * sigma + abs(ctx.mu1) ** 2) / sigma
    a = 0.0 if a < DEGENERATE else a
    return np.exp(-X / sigma) / (np.pi * sigma) * scaled_laguerre(N, abs(ctx.mu2) ** 2 * X / sigma ** 2, a)


def _displacement_matrix(beta: complex, rows: int, cols: int) -> np.ndarray:
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    x = abs(beta) ** 2
    lo, hi = np.minimum(m, n), np.maximum(m, n)
    lag = eval_genlaguerre(lo, hi - lo, x)
    mag = np.exp(0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - 0.5 * x) * lag
    power = np.where(m >= n, beta ** (m - n + 0j), (-np.conj(beta)) ** (n - m + 0j))
    return mag * power


def number_state_reduced_density_matrix(params: SystemParams, env: DampingEnvelope, N: int, nbar: float,
                                        t: float, dim: int, cfg: QuadratureConfig = QuadratureConfig(),
                                        pad: int = 60) -> DensityMatrix:
    """Oscillator-2 density matrix for the initial state |N>|0>.

    The state is the displacement by f2 of a phase-invariant state whose
    populations follow from the Taylor coefficients of the reduced Husimi
    function around its centre.
    """
    if N < 0 or dim < 1:
        raise ValueError("N must be >= 0 and dim >= 1")
    _check_time(t)
    ctx = number_q_context(params, env, nbar, t, None, cfg)
    sigma = ctx.sigma_t
    s = (ctx.e_t * sigma + abs(ctx.mu1) ** 2) / sigma
    c = abs(ctx.mu2) ** 2 / sigma ** 2
    q = 1.0 - 1.0 / sigma
    if q < DEGENERATE:
        q = 0.0
    work = dim + pad
    n = np.arange(work)[:, None]
    k = np.arange(N + 1)[None, :]
    ok = k <= n
    kk = np.where(ok, k, 0)
    logt = (gammaln(N + 1) - gammaln(kk + 1) - gammaln(N - kk + 1)
            + _log_pow(c, kk) + _log_pow(s, N - kk) - gammaln(kk + 1)
            + _log_pow(q, np.where(ok, n - kk, 0)) - gammaln(np.where(ok, n - kk, 0) + 1)
            + gammaln(n + 1) - np.log(sigma))
    logt = np.where(ok, logt, -np.inf)
    with np.errstate(divide="ignore"):
        p = np.exp(logsumexp(logt, axis=1))
    D = _displacement_matrix(ctx.f2, dim, work)
    rho = (D * p[None, :]) @ D.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    out = DensityMatrix(rho)
    if out.tail_mass > TRUNCATION_TOL:
        out.warning = f"dimension {dim} misses probability mass {out.tail_mass:.3e}"
    return out
