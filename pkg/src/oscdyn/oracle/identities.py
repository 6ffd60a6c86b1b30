"""Operator and integral identities used by the closed forms, as checkable functions."""
from __future__ import annotations

import numpy as np
from scipy.integrate import dblquad
from scipy.linalg import expm

# pass thresholds for the checks below
REORDERING_TOL = 1e-8        # truncated matrices, |x|, |y| <= 1
LAGUERRE_TOL = 1e-10         # n <= 8
GAUSSIAN_TOL = 1e-8          # closed form vs 2-D quadrature, Re z > 0
DISPLACEMENT_TOL = 1e-10


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def displacement(alpha: complex, dim: int) -> np.ndarray:
    a = annihilation(dim)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def reordering_residual(x: complex, y: complex, dim: int = 60, block: int = 10) -> float:
    """max |e^{xa} e^{ya^dag} - e^{ya^dag} e^{xa} e^{xy}| on the low-lying block."""
    a = annihilation(dim)
    ad = a.conj().T
    lhs = expm(x * a) @ expm(y * ad)
    rhs = expm(y * ad) @ expm(x * a) * np.exp(x * y)
    return float(np.max(np.abs(lhs - rhs)[:block, :block]))


def normal_ordered_diagonal(n: int, x: complex, y: complex) -> complex:
    """<n| e^{x a^dag} e^{y a} |n> computed with matrices (exact for dim > n)."""
    dim = n + 2
    a = annihilation(dim)
    return complex((expm(x * a.conj().T) @ expm(y * a))[n, n])


def displacement_conjugation_residual(alpha: complex, dim: int = 60, block: int = 10) -> float:
    """max |D a D^dag - (a - alpha)| on the low-lying block."""
    a = annihilation(dim)
    D = displacement(alpha, dim)
    lhs = D @ a @ D.conj().T
    return float(np.max(np.abs(lhs - (a - alpha * np.eye(dim)))[:block, :block]))


def gaussian_integral_closed(z: complex, b: complex) -> complex:
    """int d^2 xi exp(-z |xi|^2 + conj(b) xi + b conj(xi)) = (pi / z) exp(|b|^2 / z), Re z > 0."""
    if z.real <= 0:
        raise ValueError("Re z must be positive")
    return np.pi / z * np.exp(abs(b) ** 2 / z)


def gaussian_integral_numeric(z: complex, b: complex, tol: float = 1e-11) -> complex:
    if z.real <= 0:
        raise ValueError("Re z must be positive")
    centre = b / z.real
    half = abs(centre) + np.sqrt(40.0 / z.real)

    def f(yv, xv):
        xi = xv + 1j * yv
        return np.exp(-z * abs(xi) ** 2 + np.conj(b) * xi + b * np.conj(xi))

    lo_x, hi_x = -half, half
    re = dblquad(lambda yv, xv: f(yv, xv).real, lo_x, hi_x, -half, half, epsabs=tol, epsrel=tol)[0]
    im = dblquad(lambda yv, xv: f(yv, xv).imag, lo_x, hi_x, -half, half, epsabs=tol, epsrel=tol)[0]
    return re + 1j * im
