"""Exact propagation of pure states in a truncated Fock space.

Modes follow the same order as the linear oracle (system, then baths).  The
Hamiltonian is built from sparse truncated ladder operators in a frame
rotating at omega0 and stepped with the fourth-order Magnus expansion (two
Gauss points plus one commutator), each step applied with
``scipy.sparse.linalg.expm_multiply``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

from ..chain import coupling_matrix
from ..core import DampingEnvelope, Markovian, SystemParams, _check_time
from ..phase_space import DensityMatrix
from .linear import IntegrationError, StepConfig, rotating_frequency

MAX_DIMENSION = 10 ** 6


class FockDimensionError(ValueError):
    pass


@dataclass
class FockState:
    mode_dims: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        self.mode_dims = tuple(int(d) for d in self.mode_dims)
        if int(np.prod(self.mode_dims)) != self.amplitudes.size:
            raise ValueError("amplitude vector does not match mode dimensions")

    @classmethod
    def basis(cls, mode_dims: Sequence[int], occupations: Sequence[int]) -> "FockState":
        kets = []
        for d, n in zip(mode_dims, occupations):
            if not 0 <= n < d:
                raise ValueError(f"occupation {n} outside truncation {d}")
            v = np.zeros(d, dtype=complex)
            v[n] = 1.0
            kets.append(v)
        return cls.product(kets)

    @classmethod
    def product(cls, kets: Iterable[np.ndarray]) -> "FockState":
        kets = [np.asarray(k, dtype=complex) for k in kets]
        return cls(tuple(k.size for k in kets), reduce(np.kron, kets))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.mode_dims)


def _ladder(dims, j):
    ops = [sp.identity(d, format="csr", dtype=complex) for d in dims]
    ops[j] = sp.diags(np.sqrt(np.arange(1, dims[j])), 1, format="csr", dtype=complex)
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), ops)


def _hamiltonian_parts(params: SystemParams, dims):
    n = params.chain_size
    if len(dims) != 2 * n:
        raise ValueError(f"expected {2 * n} mode dimensions, got {len(dims)}")
    a = [_ladder(dims, j) for j in range(2 * n)]
    M = coupling_matrix(n, params.omega0, params.k) - params.omega0 * np.eye(n)
    dim = int(np.prod(dims))
    H_static = sp.csr_matrix((dim, dim), dtype=complex)
    for off in (0, n):
        for i in range(n):
            for j in range(n):
                if M[i, j] != 0:
                    H_static = H_static + M[i, j] * (a[off + i].getH() @ a[off + j])
    H_bath = sp.csr_matrix((dim, dim), dtype=complex)
    for i in range(n):
        H_bath = H_bath + a[i].getH() @ a[n + i] + a[n + i].getH() @ a[i]
    return H_static, H_bath, a[0], a


def _total_number(dims):
    grids = np.meshgrid(*[np.arange(d) for d in dims], indexing="ij")
    return sum(grids).ravel()


def fock_evolve(params: SystemParams, env: DampingEnvelope, init: FockState, t: float,
                step_cfg: StepConfig = StepConfig(steps_per_period=200)) -> FockState:
    _check_time(t)
    if isinstance(env, Markovian):
        raise ValueError("the Fock oracle needs an explicit coupling schedule g(t)")
    dims = init.mode_dims
    if int(np.prod(dims)) > MAX_DIMENSION:
        raise FockDimensionError(f"total dimension {int(np.prod(dims))} exceeds {MAX_DIMENSION}")
    H_static, H_bath, A1, _ = _hamiltonian_parts(params, dims)
    A1d = A1.getH().tocsr()
    delta = params.detuning

    def H(s):
        out = H_static + float(env.rate(s)) * H_bath
        f = float(params.drive(s))
        if f != 0.0:
            out = out + f * (np.exp(1j * delta * s) * A1d + np.exp(-1j * delta * s) * A1)
        return out

    psi = init.amplitudes.astype(complex)
    norm0 = np.linalg.norm(psi)
    if t > 0:
        h_max = step_cfg.step(rotating_frequency(params, env))
        nsteps = max(1, int(math.ceil(t / h_max - 1e-12)))
        h = t / nsteps
        c1, c2 = 0.5 - math.sqrt(3) / 6, 0.5 + math.sqrt(3) / 6
        for j in range(nsteps):
            t0 = j * h
            H1, H2 = H(t0 + c1 * h), H(t0 + c2 * h)
            omega = (-0.5j * h) * (H1 + H2) - (math.sqrt(3) / 12 * h * h) * (H2 @ H1 - H1 @ H2)
            psi = expm_multiply(omega, psi)
        drift = abs(np.linalg.norm(psi) - norm0)
        if drift > 1e-8:
            raise IntegrationError(f"norm drift {drift:.2e}")
    psi = psi * np.exp(-1j * params.omega0 * t * _total_number(dims))
    return FockState(dims, psi)


def partial_trace(state: FockState, keep: Iterable[int]) -> DensityMatrix:
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one mode")
    nmodes = len(state.mode_dims)
    if keep[0] < 0 or keep[-1] >= nmodes:
        raise ValueError("mode index out of range")
    rest = [j for j in range(nmodes) if j not in keep]
    psi = np.transpose(state.tensor(), keep + rest)
    dk = int(np.prod([state.mode_dims[j] for j in keep]))
    psi = psi.reshape(dk, -1)
    return DensityMatrix(psi @ psi.conj().T)


def coherent_vector(alpha, dim: int) -> np.ndarray:
    """<n|alpha> for n < dim; broadcasts over ``alpha`` (last axis is n)."""
    alpha = np.asarray(alpha, dtype=complex)
    n = np.arange(dim)
    with np.errstate(divide="ignore", invalid="ignore"):
        logmag = n * np.log(np.abs(alpha)[..., None]) - 0.5 * gammaln(n + 1) - 0.5 * np.abs(alpha)[..., None] ** 2
    logmag = np.where(n == 0, -0.5 * np.abs(alpha)[..., None] ** 2, logmag)
    return np.exp(logmag) * np.exp(1j * n * np.angle(alpha)[..., None])


def husimi_from_state(rho: DensityMatrix, alpha):
    """(1/pi) <alpha|rho|alpha>, vectorised over ``alpha``."""
    c = coherent_vector(alpha, rho.dim)
    val = np.einsum("...m,mn,...n->...", c.conj(), rho.entries, c)
    return val.real / np.pi


def truncation_tail(state: FockState) -> np.ndarray:
    """Probability of the top Fock level of each mode (a proxy for truncation error)."""
    p = np.abs(state.tensor()) ** 2
    out = []
    for j, d in enumerate(state.mode_dims):
        axes = tuple(i for i in range(p.ndim) if i != j)
        out.append(float(p.sum(axis=axes)[d - 1]))
    return np.array(out)
