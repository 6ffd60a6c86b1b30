"""Test-only numerical references that never call the closed forms they check."""
import numpy as np
from scipy.integrate import dblquad
from scipy.special import gammaln


def contour_coefficients(F, dim, radii=(0.5, 1, 2, 3, 4, 6, 8, 10, 12, 14), samples=512):
    """Taylor coefficients c[m, n] of an entire F(x, y) for m, n < dim.

    Cauchy integrals on the torus |x| = |y| = R are evaluated by a 2-D FFT
    (the trapezoidal rule, spectrally accurate for analytic integrands).  For
    each coefficient the radius with the smallest round-off estimate
    eps * max|F| / R^{m+n} is kept.
    """
    theta = 2 * np.pi * np.arange(samples) / samples
    m = np.arange(dim)
    best = np.zeros((dim, dim), dtype=complex)
    best_err = np.full((dim, dim), np.inf)
    for R in radii:
        z = R * np.exp(1j * theta)
        vals = F(z[:, None], z[None, :])
        c = np.fft.fft2(vals)[:dim, :dim] / samples ** 2
        scale = np.log(R) * (m[:, None] + m[None, :])
        coeff = c * np.exp(-scale)
        err = np.finfo(float).eps * np.max(np.abs(vals)) * np.exp(-scale)
        take = err < best_err
        best[take], best_err[take] = coeff[take], err[take]
    return best, best_err


def density_from_husimi(Q_xy, dim, **kw):
    """rho_mn from Q(alpha) via pi Q e^{|alpha|^2} = sum rho_mn conj(alpha)^m alpha^n / sqrt(m! n!).

    ``Q_xy(x, y)`` is Q continued analytically with x = conj(alpha), y = alpha.
    """
    c, err = contour_coefficients(lambda x, y: np.pi * Q_xy(x, y) * np.exp(x * y), dim, **kw)
    m = np.arange(dim)
    norm = np.exp(0.5 * (gammaln(m + 1)[:, None] + gammaln(m + 1)[None, :]))
    return c * norm, err * norm


def marginalize(f, center: complex, width: float, half=12.0, nodes=160):
    """int d^2 z f(z) over a square of half-side ``half * width`` around ``center``.

    Tensor Gauss-Legendre rule; ``f`` must accept complex arrays.
    """
    L = half * width
    x, w = np.polynomial.legendre.leggauss(nodes)
    z = center + L * (x[:, None] + 1j * x[None, :])
    return float(L * L * (w @ np.asarray(f(z), dtype=float) @ w))


def marginalize_adaptive(f, center: complex, width: float, half=12.0, tol=1e-13):
    """Same integral with scipy's adaptive dblquad (slow, used as a cross-check)."""
    L = half * width
    return dblquad(lambda yv, xv: float(f(complex(center.real + xv, center.imag + yv))),
                   -L, L, -L, L, epsabs=tol, epsrel=tol)[0]


def disk_rule(R: float, n_r: int = 64, n_theta: int = 96):
    """Nodes and weights on the disk |z| <= R: Gauss-Legendre in r, trapezoid in angle."""
    x, w = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * R * (x + 1)
    wr = 0.5 * R * w * r
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    wt = (wr[:, None] * np.full(n_theta, 2 * np.pi / n_theta)[None, :]).ravel()
    return z, wt


def integrate_4d(Q, R1: float, R2: float, chunk: int = 512, **kw):
    """int Q(alpha1, alpha2) over |alpha1| <= R1, |alpha2| <= R2 with a product disk rule."""
    z1, w1 = disk_rule(R1, **kw)
    z2, w2 = disk_rule(R2, **kw)
    total = 0.0
    for s in range(0, z1.size, chunk):
        block = Q(z1[s:s + chunk, None], z2[None, :])
        total += float(w1[s:s + chunk] @ (block @ w2))
    return total
