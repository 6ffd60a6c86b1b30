"""Uniform chain of n driven oscillators, each with its own bath.

The nearest-neighbour coupling matrix is tridiagonal Toeplitz, so its
spectrum and orthogonal eigenbasis are known in closed form; no eigensolver
is used here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DampingEnvelope, SystemParams, _check_time
from .quadrature import QuadratureConfig, cumulative_integral, oscillatory_integral


@dataclass(frozen=True)
class ChainSpectrum:
    n: int
    lambdas: np.ndarray
    T: np.ndarray


@dataclass(frozen=True)
class ChainEvolution:
    """a(t) = u_tilde a(0) + v_tilde b(0) + zeta_tilde."""

    u_tilde: np.ndarray
    v_tilde: np.ndarray
    zeta_tilde: np.ndarray


def coupling_matrix(n: int, omega0: float, k0: float) -> np.ndarray:
    M = np.diag(np.full(n, float(omega0)))
    idx = np.arange(n - 1)
    M[idx, idx + 1] = M[idx + 1, idx] = k0
    return M


def chain_spectrum(n: int, omega0: float, k0: float) -> ChainSpectrum:
    if n < 1:
        raise ValueError("n must be >= 1")
    if k0 < 0:
        raise ValueError("k0 must be non-negative")
    j = np.arange(1, n + 1)
    lambdas = omega0 + 2.0 * k0 * np.cos(j * np.pi / (n + 1))
    T = np.sqrt(2.0 / (n + 1)) * np.sin(np.outer(j, j) * np.pi / (n + 1))
    return ChainSpectrum(n, lambdas, T)


def _spectrum(params: SystemParams) -> ChainSpectrum:
    return chain_spectrum(params.chain_size, params.omega0, params.k)


def _mode_drive(params, env, t, cfg, spec):
    """Per-normal-mode integrals  -i int e^{-i lam_k (t-t')} e^{-i wL t'} f(t') cos[G(t)-G(t')] dt'."""
    if params.drive.is_zero or t == 0:
        return np.zeros(spec.n, dtype=complex)
    wmax = params.frequency_bound(env) + 2.0 * params.k
    cg, sg = env.cos_sin(t)
    out = np.empty(spec.n, dtype=complex)
    for i, lam in enumerate(spec.lambdas):
        # factor e^{-i lam t} out of the integral; keep the slow e^{i (lam - wL) t'} inside
        def integrand(tp, lam=lam):
            cp, sp = env.cos_sin(tp)
            return np.exp(1j * (lam - params.omegaL) * tp) * params.drive(tp) * (cg * cp + sg * sp)
        out[i] = -1j * np.exp(-1j * lam * t) * oscillatory_integral(integrand, 0.0, t, cfg, wmax)
    return out


def chain_mode_evolution(params: SystemParams, env: DampingEnvelope, t: float,
                         cfg: QuadratureConfig = QuadratureConfig()) -> ChainEvolution:
    _check_time(t)
    spec = _spectrum(params)
    G = float(env.angle(t))
    phase = np.exp(-1j * spec.lambdas * t)
    u = phase * np.cos(G)            # (e^{-i eta+} + e^{-i eta-}) / 2
    v = -1j * phase * np.sin(G)      # (e^{-i eta+} - e^{-i eta-}) / 2
    T = spec.T
    zeta = T[:, 0] * _mode_drive(params, env, t, cfg, spec)
    return ChainEvolution(T @ np.diag(u) @ T.T, T @ np.diag(v) @ T.T, T @ zeta)


def chain_amplitudes(params: SystemParams, env: DampingEnvelope, t: float,
                     cfg: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """Drive-induced amplitudes psi_i(t) = <a_i(t)> for a chain started in vacuum.

    psi_i = -i e^{-i w0 t} int f(t') e^{i Delta t'} cos[G(t)-G(t')] phi_i(t-t') dt',
    phi_i(tau) = sum_k exp(-2 i k0 tau cos(k pi/(n+1))) T_ik T_k1.
    """
    _check_time(t)
    spec = _spectrum(params)
    n = spec.n
    if params.drive.is_zero or t == 0:
        return np.zeros(n, dtype=complex)
    weights = spec.T * spec.T[:, 0][None, :]          # T_ik T_k1
    shifts = 2.0 * params.k * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))
    delta = params.detuning
    wmax = abs(delta) + 2.0 * params.k + env.rate_bound
    cg, sg = env.cos_sin(t)
    out = np.empty(n, dtype=complex)
    for i in range(n):
        def integrand(tp, i=i):
            cp, sp = env.cos_sin(tp)
            phi = (weights[i][None, :] * np.exp(-1j * np.multiply.outer(t - tp, shifts))).sum(axis=-1)
            return params.drive(tp) * np.exp(1j * delta * tp) * (cg * cp + sg * sp) * phi
        out[i] = oscillatory_integral(integrand, 0.0, t, cfg, wmax)
    return -1j * np.exp(-1j * params.omega0 * t) * out


def chain_excitations(params: SystemParams, env: DampingEnvelope, t: float,
                      cfg: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """<a_i^dag a_i>(t) for system and baths initially in vacuum."""
    return np.abs(chain_amplitudes(params, env, t, cfg)) ** 2


def chain_amplitudes_series(params: SystemParams, env: DampingEnvelope, times,
                            cfg: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """psi_i on a sorted time grid, shape (len(times), n).

    phi_i(t - t') factorises per normal mode, so each mode needs two cumulative
    integrals (cos G' and sin G' weights) over the grid intervals.
    """
    times = np.asarray(times, dtype=float)
    _check_time(times)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted")
    spec = _spectrum(params)
    n = spec.n
    if params.drive.is_zero or times.size == 0:
        return np.zeros((times.size, n), dtype=complex)
    grid = times if times[0] == 0 else np.concatenate([[0.0], times])
    weights = spec.T * spec.T[:, 0][None, :]
    shifts = 2.0 * params.k * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))
    delta = params.detuning
    wmax = abs(delta) + 2.0 * params.k + env.rate_bound
    cg, sg = env.cos_sin(times)
    psi = np.zeros((times.size, n), dtype=complex)
    for k in range(n):
        if not np.any(weights[:, k]):
            continue
        parts = []
        for g in (0, 1):
            def integrand(tp, g=g, k=k):
                return params.drive(tp) * np.exp(1j * (delta + shifts[k]) * tp) * env.cos_sin(tp)[g]
            J = cumulative_integral(integrand, grid, cfg, wmax)
            parts.append(J if grid is times else J[1:])
        mode = np.exp(-1j * shifts[k] * times) * (cg * parts[0] + sg * parts[1])
        psi += mode[:, None] * weights[None, :, k]
    return -1j * np.exp(-1j * params.omega0 * times)[:, None] * psi


def chain_excitations_series(params: SystemParams, env: DampingEnvelope, times,
                             cfg: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """<a_i^dag a_i> on a time grid, shape (len(times), n)."""
    return np.abs(chain_amplitudes_series(params, env, times, cfg)) ** 2


def scaled_excitations(excitations, k0: float, F: float):
    """Dimensionless k0^2 <a^dag a> / F^2 used for plotting."""
    return np.asarray(excitations) * k0 ** 2 / F ** 2
