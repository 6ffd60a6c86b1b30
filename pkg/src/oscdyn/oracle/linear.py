"""Brute-force integration of the linear Heisenberg equations of all modes.

Mode order: system oscillators a_1..a_n followed by bath oscillators b_1..b_n.
The uniform part omega0 * (total number) is removed exactly by working in a
frame rotating at omega0; what remains is integrated with classical RK4.
For the Markovian envelope the clock is t = s^2 (see ``_clock``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..chain import coupling_matrix
from ..core import DampingEnvelope, Markovian, SystemParams, _check_time


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class StepConfig:
    steps_per_period: int = 2000
    max_step: Optional[float] = None

    def step(self, omega: float) -> float:
        h = 2.0 * math.pi / (max(omega, 1e-3) * max(self.steps_per_period, 50))
        if self.max_step is not None:
            h = min(h, self.max_step)
        return h


@dataclass(frozen=True)
class ModeODEState:
    """a(t) = coeff_matrix @ a(0) + displacement, over all 2n modes."""

    t: float
    coeff_matrix: np.ndarray
    displacement: np.ndarray


def mode_matrix(params: SystemParams, g: float) -> np.ndarray:
    """Single-particle Hamiltonian of the 2n modes for coupling g."""
    n = params.chain_size
    M = coupling_matrix(n, params.omega0, params.k)
    eye = np.eye(n)
    return np.block([[M, g * eye], [g * eye, M]])


def rotating_frequency(params: SystemParams, env: DampingEnvelope) -> float:
    return 2.0 * params.k + env.rate_bound + abs(params.detuning)


def _clock(env):
    """Integration variable s with t = phi(s); returns phi, phi', g(phi(s)) phi'(s), phi^{-1}.

    The Markovian rate diverges like t^{-1/2} at t = 0.  With t = s^2 the
    product g dt/ds is smooth and even in s, so RK4 keeps its full order.
    """
    if isinstance(env, Markovian) and env.gamma > 0:
        gam = env.gamma

        def g_dt(s):
            if s == 0.0:
                return math.sqrt(gam)
            return gam * s * math.exp(-0.5 * gam * s * s) / math.sqrt(-math.expm1(-gam * s * s))

        return (lambda s: s * s), (lambda s: 2.0 * s), g_dt, math.sqrt
    if isinstance(env, Markovian):
        return (lambda s: s), (lambda s: 1.0), (lambda s: 0.0), (lambda t: t)
    return (lambda s: s), (lambda s: 1.0), (lambda s: float(env.rate(s))), (lambda t: t)


def linear_mode_trajectory(params: SystemParams, env: DampingEnvelope, times: Sequence[float],
                           step_cfg: StepConfig = StepConfig()) -> list:
    """Integrate once from t = 0 through a sorted list of output times."""
    times = np.asarray(times, dtype=float)
    _check_time(times)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted")
    n2 = 2 * params.chain_size
    K0 = mode_matrix(params, 0.0) - params.omega0 * np.eye(n2)
    X = mode_matrix(params, 1.0) - mode_matrix(params, 0.0)
    delta = params.detuning
    e0 = np.zeros(n2)
    e0[0] = 1.0
    h_max = step_cfg.step(rotating_frequency(params, env))
    phi, dphi, g_dt, inverse = _clock(env)

    def rhs(Y, s):
        t, dt = phi(s), dphi(s)
        dY = -1j * ((dt * K0 + g_dt(s) * X) @ Y)
        dY[:, -1] += -1j * dt * float(params.drive(t)) * np.exp(1j * delta * t) * e0
        return dY

    Y = np.zeros((n2, n2 + 1), dtype=complex)
    Y[:, :n2] = np.eye(n2)
    t = 0.0
    states = []
    for target in times:
        s_a, s_b = inverse(t), inverse(float(target))
        span = s_b - s_a
        # dt/ds is largest at the end of the interval
        nsteps = int(math.ceil(span * dphi(s_b) / h_max - 1e-12)) if span > 0 else 0
        for j in range(nsteps):
            h = span / nsteps
            s0 = s_a + j * h
            k1 = rhs(Y, s0)
            k2 = rhs(Y + 0.5 * h * k1, s0 + 0.5 * h)
            k3 = rhs(Y + 0.5 * h * k2, s0 + 0.5 * h)
            k4 = rhs(Y + h * k3, s0 + h)
            Y = Y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = float(target)
        U = Y[:, :n2]
        drift = np.max(np.abs(U.conj().T @ U - np.eye(n2)))
        if drift > 1e-6:
            raise IntegrationError(f"unitarity drift {drift:.2e} at t = {t}")
        phase = np.exp(-1j * params.omega0 * t)
        states.append(ModeODEState(t, phase * U, phase * Y[:, -1]))
    return states


def linear_mode_oracle(params: SystemParams, env: DampingEnvelope, t: float,
                       step_cfg: StepConfig = StepConfig()) -> ModeODEState:
    return linear_mode_trajectory(params, env, [t], step_cfg)[0]


def occupations(state: ModeODEState, initial: Sequence[float]) -> np.ndarray:
    """<a_i^dag a_i>(t) for uncorrelated, phase-invariant initial states of the modes."""
    U = state.coeff_matrix
    return (np.abs(U) ** 2) @ np.asarray(initial, dtype=float) + np.abs(state.displacement) ** 2
