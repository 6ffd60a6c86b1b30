"""Physical parameters, drive and damping envelopes shared by every module.

Units: hbar = k_B = 1.  All frequencies are angular frequencies, occupations
are dimensionless and energies are reported as mean excitation numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def _check_time(t) -> None:
    if np.any(np.asarray(t) < 0):
        raise DomainError(f"time must be non-negative, got {t!r}")


# ---------------------------------------------------------------------------
# drive
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DriveSpec:
    """Real drive amplitude f(t).  ``constant`` is used when ``profile`` is None."""

    constant: float = 0.0
    profile: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.profile is None:
            return np.full(t.shape, float(self.constant))
        return np.asarray(self.profile(t), dtype=float)

    @property
    def is_zero(self) -> bool:
        return self.profile is None and self.constant == 0.0


@dataclass(frozen=True)
class SystemParams:
    omega0: float
    k: float = 0.0
    omegaL: float = 0.0
    drive: DriveSpec = field(default_factory=DriveSpec)
    nbar_b: float = 0.0
    nbar_c: float = 0.0
    chain_size: int = 2

    def __post_init__(self):
        if not self.omega0 > 0:
            raise DomainError("omega0 must be positive")
        if self.k < 0:
            raise DomainError("coupling k must be non-negative")
        if self.nbar_b < 0 or self.nbar_c < 0:
            raise DomainError("bath occupations must be non-negative")
        if int(self.chain_size) != self.chain_size or self.chain_size < 1:
            raise DomainError("chain_size must be a positive integer")

    @property
    def detuning(self) -> float:
        return self.omega0 - self.omegaL

    def frequency_bound(self, env: "DampingEnvelope") -> float:
        """Largest angular frequency that can appear in a drive integrand."""
        return abs(self.omega0) + abs(self.omegaL) + abs(self.k) + env.rate_bound

    def replace(self, **changes) -> "SystemParams":
        from dataclasses import replace

        return replace(self, **changes)


def bose_einstein(omega: float, temperature: float) -> float:
    """Thermal occupation 1/(exp(omega/T) - 1); zero at T = 0."""
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    if temperature == 0:
        return 0.0
    return 1.0 / math.expm1(omega / temperature)


# ---------------------------------------------------------------------------
# damping envelopes
# ---------------------------------------------------------------------------

class DampingEnvelope:
    """The pair (cos G(t), sin G(t)) with G the integrated system-bath coupling."""

    rate_bound: float = 0.0

    def cos_sin(self, t):
        raise NotImplementedError

    def rate(self, t):
        """Instantaneous coupling g(t)."""
        raise NotImplementedError

    def angle(self, t):
        c, s = self.cos_sin(t)
        return np.arctan2(s, c)

    def cos_difference(self, t, tp):
        """cos[G(t) - G(t')] via the product expansion."""
        c, s = self.cos_sin(t)
        cp, sp = self.cos_sin(tp)
        return c * cp + s * sp


@dataclass(frozen=True)
class ConstantG(DampingEnvelope):
    """Constant coupling g0, so G(t) = g0 t.  ``ConstantG(0.0)`` means no damping."""

    g0: float = 0.0

    @property
    def rate_bound(self) -> float:
        return abs(self.g0)

    def cos_sin(self, t):
        x = self.g0 * np.asarray(t, dtype=float)
        return np.cos(x), np.sin(x)

    def angle(self, t):
        return self.g0 * np.asarray(t, dtype=float)

    def rate(self, t):
        return np.full(np.shape(t), float(self.g0))


@dataclass(frozen=True)
class Markovian(DampingEnvelope):
    """cos G(t) = exp(-gamma t / 2) with the non-negative branch of sin G."""

    gamma: float = 0.0

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError("gamma must be non-negative")

    @property
    def rate_bound(self) -> float:
        return self.gamma

    def cos_sin(self, t):
        t = np.asarray(t, dtype=float)
        c = np.exp(-0.5 * self.gamma * t)
        s = np.sqrt(-np.expm1(-self.gamma * t))
        return c, s

    def angle(self, t):
        c, s = self.cos_sin(t)
        return np.arctan2(s, c)

    def rate(self, t):
        # dG/dt = (gamma/2) e^{-gamma t/2} / sqrt(1 - e^{-gamma t}); singular at t = 0
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return 0.5 * self.gamma * np.exp(-0.5 * self.gamma * t) / np.sqrt(-np.expm1(-self.gamma * t))


class ExplicitSchedule(DampingEnvelope):
    """User-supplied coupling schedule g(t).

    If ``antiderivative`` is omitted, G(t) is tabulated on a uniform grid by
    8-point Gauss-Legendre panels and interpolated with cubic Hermite splines
    whose slopes are the exact g values.
    """

    def __init__(self, rate: Callable, antiderivative: Optional[Callable] = None,
                 rate_bound: float = 0.0, table_step: float = 1e-3):
        self._rate = rate
        self._antiderivative = antiderivative
        self.rate_bound = float(rate_bound)
        self._h = float(table_step)
        self._spline = None
        self._extent = 0.0

    def rate(self, t):
        return np.asarray(self._rate(np.asarray(t, dtype=float)), dtype=float)

    def _table(self, tmax: float):
        if self._spline is None or tmax > self._extent:
            extent = max(1.0, 2.0 * tmax, 2.0 * self._extent)
            nodes = np.arange(0.0, extent + self._h, self._h)
            x, w = np.polynomial.legendre.leggauss(8)
            left, right = nodes[:-1], nodes[1:]
            mid, half = 0.5 * (left + right), 0.5 * (right - left)
            pts = mid[:, None] + half[:, None] * x[None, :]
            pieces = (self.rate(pts) * w[None, :]).sum(axis=1) * half
            G = np.concatenate([[0.0], np.cumsum(pieces)])
            self._spline = CubicHermiteSpline(nodes, G, self.rate(nodes))
            self._extent = nodes[-1]
        return self._spline

    def angle(self, t):
        t = np.asarray(t, dtype=float)
        if self._antiderivative is not None:
            return np.asarray(self._antiderivative(t), dtype=float) - float(self._antiderivative(0.0))
        return self._table(float(np.max(t, initial=0.0)))(t)

    def cos_sin(self, t):
        G = self.angle(t)
        return np.cos(G), np.sin(G)


NO_DAMPING = ConstantG(0.0)


def envelope_eval(env: DampingEnvelope, t) -> tuple:
    """Return (cos G(t), sin G(t)); scalar in, scalar out."""
    _check_time(t)
    c, s = env.cos_sin(t)
    if np.ndim(t) == 0:
        return float(c), float(s)
    return c, s


def effective_occupation(nbar: float, env: DampingEnvelope, t) -> float:
    """Husimi width sigma_t = 1 + nbar sin^2 G(t)."""
    if nbar < 0:
        raise DomainError("nbar must be non-negative")
    _, s = envelope_eval(env, t)
    return 1.0 + nbar * s * s
