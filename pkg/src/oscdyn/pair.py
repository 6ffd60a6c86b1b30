"""Closed-form dynamics of two coupled, driven oscillators with one bath each."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DampingEnvelope, SystemParams, _check_time, envelope_eval
from .quadrature import QuadratureConfig, cumulative_integral, oscillatory_integral


@dataclass(frozen=True)
class ModeCoefficients:
    """Weights of a1(0), a2(0), b(0), c(0) in a1(t) (mirror-symmetric for a2)."""

    p: complex
    u: complex
    q: complex
    h: complex

    def norm(self) -> float:
        return abs(self.p) ** 2 + abs(self.u) ** 2 + abs(self.q) ** 2 + abs(self.h) ** 2


@dataclass(frozen=True)
class DriveResponse:
    f1: complex
    f2: complex


@dataclass(frozen=True)
class PairEnergies:
    """Mean excitation numbers <a_i^dag a_i> (energies in units of hbar*omega0)."""

    e1: float
    e2: float


def mode_coefficients(params: SystemParams, env: DampingEnvelope, t: float) -> ModeCoefficients:
    cg, sg = envelope_eval(env, t)
    phase = np.exp(-1j * params.omega0 * t)
    ck, sk = np.cos(params.k * t), np.sin(params.k * t)
    return ModeCoefficients(
        p=complex(phase * cg * ck),
        u=complex(-1j * phase * cg * sk),
        q=complex(-1j * phase * sg * ck),
        h=complex(-phase * sg * sk),
    )


def drive_response(params: SystemParams, env: DampingEnvelope, t: float,
                   cfg: QuadratureConfig = QuadratureConfig()) -> DriveResponse:
    """Coherent displacements (f1, f2) at a single time by direct quadrature."""
    _check_time(t)
    if params.drive.is_zero or t == 0:
        return DriveResponse(0j, 0j)
    delta, k = params.detuning, params.k
    wmax = params.frequency_bound(env)
    cg_t, sg_t = env.cos_sin(t)

    def common(tp):
        cp, sp = env.cos_sin(tp)
        return np.exp(1j * delta * tp) * (cg_t * cp + sg_t * sp) * params.drive(tp)

    i1 = oscillatory_integral(lambda tp: common(tp) * np.cos(k * (t - tp)), 0.0, t, cfg, wmax)
    i2 = oscillatory_integral(lambda tp: common(tp) * np.sin(k * (t - tp)), 0.0, t, cfg, wmax)
    phase = np.exp(-1j * params.omega0 * t)
    return DriveResponse(complex(-1j * phase * i1), complex(-phase * i2))


def drive_response_series(params: SystemParams, env: DampingEnvelope, times,
                          cfg: QuadratureConfig = QuadratureConfig()):
    """(f1, f2) on a sorted time grid starting at 0.

    Both kernels separate into products of functions of t and t', so four
    cumulative integrals over consecutive grid intervals give the whole series.
    """
    times = np.asarray(times, dtype=float)
    _check_time(times)
    if times.size == 0:
        return np.zeros(0, complex), np.zeros(0, complex)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted")
    if params.drive.is_zero:
        return np.zeros(times.size, complex), np.zeros(times.size, complex)
    delta, k = params.detuning, params.k
    wmax = params.frequency_bound(env)
    grid = times if times[0] == 0 else np.concatenate([[0.0], times])

    def piece(kfun, gindex):
        def integrand(tp):
            cs = env.cos_sin(tp)
            return np.exp(1j * delta * tp) * params.drive(tp) * kfun(k * tp) * cs[gindex]
        return cumulative_integral(integrand, grid, cfg, wmax)

    I_cc, I_cs = piece(np.cos, 0), piece(np.cos, 1)
    I_sc, I_ss = piece(np.sin, 0), piece(np.sin, 1)
    if grid is not times:
        I_cc, I_cs, I_sc, I_ss = I_cc[1:], I_cs[1:], I_sc[1:], I_ss[1:]
    cg, sg = env.cos_sin(times)
    ck, sk = np.cos(k * times), np.sin(k * times)
    Ic = cg * I_cc + sg * I_cs      # int e^{i delta t'} f cos(kt') cos[G - G'] dt'
    Is = cg * I_sc + sg * I_ss      # same with sin(kt')
    phase = np.exp(-1j * params.omega0 * times)
    f1 = -1j * phase * (ck * Ic + sk * Is)
    f2 = -phase * (sk * Ic - ck * Is)
    return f1, f2


def _energies_from(params, cg, sg, kt, n1, n2, f1, f2):
    c2, s2 = cg * cg, sg * sg
    ck2, sk2 = np.cos(kt) ** 2, np.sin(kt) ** 2
    e1 = c2 * ck2 * n1 + c2 * sk2 * n2 + s2 * ck2 * params.nbar_b + s2 * sk2 * params.nbar_c + np.abs(f1) ** 2
    e2 = c2 * ck2 * n2 + c2 * sk2 * n1 + s2 * ck2 * params.nbar_c + s2 * sk2 * params.nbar_b + np.abs(f2) ** 2
    return e1, e2


def pair_energies(params: SystemParams, env: DampingEnvelope, init_n1: float, init_n2: float, t: float,
                  cfg: QuadratureConfig = QuadratureConfig()) -> PairEnergies:
    if init_n1 < 0 or init_n2 < 0:
        raise ValueError("initial occupations must be non-negative")
    cg, sg = envelope_eval(env, t)
    d = drive_response(params, env, t, cfg)
    e1, e2 = _energies_from(params, cg, sg, params.k * t, init_n1, init_n2, d.f1, d.f2)
    return PairEnergies(float(e1), float(e2))


def pair_energies_series(params: SystemParams, env: DampingEnvelope, init_n1: float, init_n2: float,
                         times, cfg: QuadratureConfig = QuadratureConfig()):
    """Arrays (e1, e2) on a sorted time grid."""
    if init_n1 < 0 or init_n2 < 0:
        raise ValueError("initial occupations must be non-negative")
    times = np.asarray(times, dtype=float)
    f1, f2 = drive_response_series(params, env, times, cfg)
    cg, sg = env.cos_sin(times)
    return _energies_from(params, cg, sg, params.k * times, init_n1, init_n2, f1, f2)
