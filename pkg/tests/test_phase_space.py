import math

import numpy as np
import pytest
import sympy as sp
from scipy.special import eval_laguerre

from oscdyn.core import ConstantG, DriveSpec, Markovian, SystemParams
from oscdyn.oracle import coherent_vector
from oscdyn.pair import drive_response
from oscdyn.phase_space import (CoherentInit, PhasePoint, husimi_coherent, husimi_coherent_single, husimi_number,
                                husimi_number_generating, husimi_number_reduced, laguerre, maxima_trajectory,
                                number_q_context, number_state_reduced_density_matrix, populations,
                                reduced_density_matrix, reduced_generating_function, scaled_laguerre)
from reference import density_from_husimi, disk_rule, integrate_4d, marginalize, marginalize_adaptive

GENERIC = SystemParams(omega0=2.0, k=1.0, omegaL=1.5, drive=DriveSpec(0.6), nbar_b=0.5, nbar_c=0.5)
ENV = ConstantG(0.3)


def free(F=0.0):
    return SystemParams(omega0=2.0, k=1.0, omegaL=2.0, drive=DriveSpec(F))


# -- special functions -------------------------------------------------------

def test_laguerre_examples():
    assert laguerre(0, 3.7) == 1.0
    assert laguerre(1, 0.4) == pytest.approx(0.6)
    assert laguerre(2, 2.0) == pytest.approx(-1.0)


@pytest.mark.parametrize("n", [0, 1, 5, 17, 40])
def test_laguerre_matches_scipy(n):
    x = np.linspace(-3, 30, 50)
    assert np.allclose(laguerre(n, x), eval_laguerre(n, x), rtol=1e-10, atol=1e-10)


def test_scaled_laguerre_limit():
    # s^n L_n(-x/s) -> x^n / n! as s -> 0
    for n in range(6):
        assert scaled_laguerre(n, 1.7, 0.0) == pytest.approx(1.7 ** n / math.factorial(n), rel=1e-14)
        assert scaled_laguerre(n, 1.7, 1e-9) == pytest.approx(1.7 ** n / math.factorial(n), rel=1e-7)
        assert scaled_laguerre(n, 0.0, 0.4) == pytest.approx(0.4 ** n, rel=1e-14)


# -- coherent initial states -------------------------------------------------

def test_maxima_at_zero():
    init = CoherentInit(0.3 + 0.1j, -0.7j)
    assert maxima_trajectory(GENERIC, ENV, init, 0.0) == (init.alpha0, init.beta0)


def test_maxima_excitation_swap():
    init = CoherentInit(0.9 - 0.2j, 0.0)
    for t in (0.4, 1.3, 5.0):
        _, nu2 = maxima_trajectory(free(), ConstantG(0.0), init, t)
        assert abs(nu2 - (-1j * np.exp(-2j * t) * np.sin(t) * init.alpha0)) < 1e-15


def test_maxima_open_spiral():
    p = SystemParams(omega0=2.0, k=1.0, omegaL=1.0, drive=DriveSpec(0.4))
    _, nu2 = maxima_trajectory(p, ConstantG(0.0), CoherentInit(0, 0), 300.0)
    assert abs(nu2) / (0.4 * 300 / 2) == pytest.approx(1, abs=1e-2)


def test_coherent_peak_value():
    init = CoherentInit(0.5, 0.2j)
    nu1, nu2 = maxima_trajectory(GENERIC, ENV, init, 1.1)
    assert husimi_coherent(GENERIC, ENV, init, 0.0, 1.1, PhasePoint(nu1, nu2)) == pytest.approx(1 / np.pi ** 2)


def test_coherent_at_zero_time():
    init = CoherentInit(0.5 - 0.5j, 0.2j)
    a1, a2 = 0.1 + 0.3j, -0.4
    q = husimi_coherent(GENERIC, ENV, init, 2.0, 0.0, PhasePoint(a1, a2))
    assert q == pytest.approx(np.exp(-abs(init.alpha0 - a1) ** 2 - abs(init.beta0 - a2) ** 2) / np.pi ** 2)


def test_coherent_separability_and_positivity():
    init = CoherentInit(0.8 - 0.3j, 0.5j)
    rng = np.random.default_rng(5)
    a1 = rng.normal(size=50) + 1j * rng.normal(size=50)
    a2 = rng.normal(size=50) + 1j * rng.normal(size=50)
    joint = husimi_coherent(GENERIC, ENV, init, 0.5, 2.0, PhasePoint(a1, a2))
    prod = (husimi_coherent_single(GENERIC, ENV, init, 0.5, 2.0, a1, 1)
            * husimi_coherent_single(GENERIC, ENV, init, 0.5, 2.0, a2, 2))
    assert np.max(np.abs(joint - prod)) <= 1e-12
    assert np.all(joint > 0)


def test_coherent_normalization():
    init = CoherentInit(0.8 - 0.3j, 0.5j)
    nu1, nu2 = maxima_trajectory(GENERIC, ENV, init, 2.0)
    total = integrate_4d(lambda a1, a2: husimi_coherent(GENERIC, ENV, init, 0.5, 2.0, PhasePoint(a1, a2)),
                         6 + abs(nu1), 6 + abs(nu2))
    assert total == pytest.approx(1, abs=1e-6)


# -- density matrix and populations ------------------------------------------

def test_zero_temperature_is_pure_coherent():
    r = 0.6 - 0.9j
    rho = reduced_density_matrix(r, 1.0, 30)
    v = coherent_vector(r, 30)
    assert np.max(np.abs(rho.entries - np.outer(v, v.conj()))) < 1e-14
    assert rho.purity() == pytest.approx(1, abs=1e-12)


def test_thermal_diagonal():
    s = 1.8
    rho = reduced_density_matrix(0.0, s, 40)
    n = np.arange(40)
    assert np.max(np.abs(rho.entries - np.diag((s - 1) ** n / s ** (n + 1)))) < 1e-15


def test_generic_matches_contour_oracle():
    r, s = 0.7 + 0.3j, 1.4
    ref, err = density_from_husimi(lambda x, y: np.exp(-(y - r) * (x - np.conj(r)) / s) / (np.pi * s), 25)
    assert err.max() < 1e-10
    assert np.max(np.abs(reduced_density_matrix(r, s, 25).entries - ref)) <= 1e-6


def test_density_matrix_invariants():
    rho = reduced_density_matrix(1.1 - 0.4j, 2.3, 60)
    m = rho.entries
    assert np.max(np.abs(m - m.conj().T)) <= 1e-12
    assert np.trace(m).real == pytest.approx(1, abs=1e-8)
    assert np.min(np.linalg.eigvalsh(m)) >= -1e-10
    assert rho.warning is None


def test_large_dimension_representable():
    rho = reduced_density_matrix(3.0 + 2.0j, 3.0, 200)
    assert np.all(np.isfinite(rho.entries))
    assert np.trace(rho.entries).real == pytest.approx(1, abs=1e-8)


def test_truncation_warning():
    rho = reduced_density_matrix(3.0, 2.0, 5)
    assert rho.warning is not None and rho.tail_mass > 1e-8


def test_populations_on_diagonal():
    env = Markovian(0.5)
    nbar, t, r = 1.3, 2.0, 0.9 + 0.2j
    sigma = 1 + nbar * env.cos_sin(t)[1] ** 2
    rho = reduced_density_matrix(r, sigma, 40)
    P = np.array([populations(r, nbar, env, t, n) for n in range(40)])
    assert np.max(np.abs(np.diag(rho.entries).real - P)) <= 1e-12
    assert P.sum() == pytest.approx(1, abs=1e-10)


def test_populations_limits():
    env = ConstantG(0.4)
    t = 2.0
    s = 0.8 * np.sin(0.8) ** 2
    for n in range(6):
        assert populations(0.0, 0.8, env, t, n) == pytest.approx(s ** n / (1 + s) ** (n + 1), rel=1e-13)
        assert populations(1.2, 0.0, env, t, n) == pytest.approx(
            1.44 ** n * np.exp(-1.44) / math.factorial(n), rel=1e-13)


# -- number initial states ---------------------------------------------------

def test_number_zero_is_vacuum_coherent():
    pt = PhasePoint(0.3 - 0.2j, 1.1j)
    assert husimi_number(GENERIC, ENV, 0, 0.5, 1.7, pt) == pytest.approx(
        husimi_coherent(GENERIC, ENV, CoherentInit(0, 0), 0.5, 1.7, pt), rel=1e-13)


def test_number_one_zero_temperature_formula():
    p = free()
    rng = np.random.default_rng(2)
    for t in (0.0, 0.7, np.pi / 2):
        a1, a2 = rng.normal() + 1j * rng.normal(), rng.normal() + 1j * rng.normal()
        q = husimi_number(p, ConstantG(0.0), 1, 0.0, t, PhasePoint(a1, a2))
        # one quantum in the mode cos(kt) a1^dag - i sin(kt) a2^dag (checked against the Fock oracle)
        amp = a1 * np.cos(t) + 1j * a2 * np.sin(t)
        assert q == pytest.approx(np.exp(-abs(a1) ** 2 - abs(a2) ** 2) * abs(amp) ** 2 / np.pi ** 2, rel=1e-12)


def test_generating_function_sums_number_husimis():
    pt = PhasePoint(0.4 + 0.1j, -0.3 + 0.8j)
    y = 0.35
    series = sum(y ** N * husimi_number(GENERIC, ENV, N, 0.5, 1.6, pt) for N in range(60))
    assert husimi_number_generating(GENERIC, ENV, 0.5, 1.6, pt, y) == pytest.approx(series, rel=1e-12)


@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_number_normalization(N):
    d = drive_response(GENERIC, ENV, 2.0)
    total = integrate_4d(lambda a1, a2: husimi_number(GENERIC, ENV, N, 0.5, 2.0, PhasePoint(a1, a2)),
                         6 + abs(d.f1), 6 + abs(d.f2))
    assert total == pytest.approx(1, abs=1e-6)


def test_number_long_time_limit():
    p = SystemParams(omega0=2.0, k=1.0, omegaL=1.7, drive=DriveSpec(0.5), nbar_b=0.7, nbar_c=0.7)
    env = Markovian(1.0)
    t = 20 * np.log(10)            # e^{-gamma t} = 1e-20
    d = drive_response(p, env, t)
    s = 1.7
    rng = np.random.default_rng(4)
    for _ in range(10):
        a1 = d.f1 + rng.normal() + 1j * rng.normal()
        a2 = d.f2 + rng.normal() + 1j * rng.normal()
        q = husimi_number(p, env, 2, 0.7, t, PhasePoint(a1, a2))
        limit = np.exp(-(abs(a1 - d.f1) ** 2 + abs(a2 - d.f2) ** 2) / s) / (np.pi * s) ** 2
        assert abs(q - limit) <= 1e-6


# -- reduced number-state Husimi ---------------------------------------------

def test_reduced_n1_zero_temperature_example():
    p = free()
    for t in (0.0, 0.6, np.pi / 2):
        a2 = np.array([0.0, 0.5 + 0.5j, -1.2j])
        q = husimi_number_reduced(p, ConstantG(0.0), 1, 0.0, t, a2)
        x = np.abs(a2) ** 2
        assert np.allclose(q, np.exp(-x) * (x * np.sin(t) ** 2 + np.cos(t) ** 2) / np.pi, atol=1e-15)


def test_reduced_n0():
    ctx = number_q_context(GENERIC, ENV, 0.5, 1.3)
    a2 = 0.2 - 0.9j
    q = husimi_number_reduced(GENERIC, ENV, 0, 0.5, 1.3, a2)
    s = ctx.sigma_t
    assert q == pytest.approx(np.exp(-abs(a2 - ctx.f2) ** 2 / s) / (np.pi * s), rel=1e-14)


def _alpha1_peak(ctx, alpha2, y):
    """Centre and width of the alpha1 Gaussian inside the generating function."""
    s = ctx.sigma_t
    c = y / (1 - y * ctx.e_t)
    a = (1 - c * abs(ctx.mu1) ** 2 / s) / s
    b = (alpha2 - ctx.f2) * np.conj(ctx.mu2)
    return ctx.f1 + c * ctx.mu1 * b / (s * s * a), 1 / np.sqrt(a)


def test_reduced_n2_matches_marginalization():
    t, nbar, a2 = 1.9, 0.5, 0.4 - 0.7j
    ctx = number_q_context(GENERIC, ENV, nbar, t)
    centre, width = _alpha1_peak(ctx, a2, 0.0)
    num = marginalize(lambda a1: husimi_number(GENERIC, ENV, 2, nbar, t, PhasePoint(a1, a2)), centre, 2 * width)
    assert husimi_number_reduced(GENERIC, ENV, 2, nbar, t, a2) == pytest.approx(num, abs=1e-6)


@pytest.mark.parametrize("y", [-0.5, 0.3, 0.8])
def test_reduced_generating_function_matches_marginalization(y):
    t, nbar, a2 = 2.4, 0.5, -0.6 + 0.3j
    ctx = number_q_context(GENERIC, ENV, nbar, t)
    centre, width = _alpha1_peak(ctx, a2, y)
    num = marginalize(lambda a1: husimi_number_generating(GENERIC, ENV, nbar, t, PhasePoint(a1, a2), y),
                      centre, width)
    assert reduced_generating_function(GENERIC, ENV, nbar, t, a2, y) == pytest.approx(num, abs=1e-8)


def test_marginalization_rules_agree():
    t, nbar, a2, y = 2.4, 0.5, -0.6 + 0.3j, 0.5
    ctx = number_q_context(GENERIC, ENV, nbar, t)
    centre, width = _alpha1_peak(ctx, a2, y)
    f = lambda a1: husimi_number_generating(GENERIC, ENV, nbar, t, PhasePoint(a1, a2), y)
    assert marginalize(f, centre, width) == pytest.approx(marginalize_adaptive(f, centre, width, tol=1e-11), abs=1e-9)


def _symbolic_generating():
    y, s, e, m1, m2, X = sp.symbols("y sigma e m1 m2 X", positive=True)
    A = s - y * (e * s + m1)
    Qy = sp.exp(-X / s + m2 * X * y / (s * A)) / (sp.pi * A)
    return Qy, (y, s, e, m1, m2, X)


def test_reduced_symbolic_coefficients_up_to_eight():
    Qy, (y, s, e, m1, m2, X) = _symbolic_generating()
    ctx = number_q_context(GENERIC, ENV, 0.5, 2.2)
    a2 = 0.9 + 0.4j
    vals = {s: ctx.sigma_t, e: ctx.e_t, m1: abs(ctx.mu1) ** 2, m2: abs(ctx.mu2) ** 2, X: abs(a2 - ctx.f2) ** 2}
    deriv = Qy
    for N in range(9):
        coeff = float((deriv.subs(y, 0) / sp.factorial(N)).subs(vals))
        assert husimi_number_reduced(GENERIC, ENV, N, 0.5, 2.2, a2) == pytest.approx(coeff, rel=1e-12)
        deriv = sp.diff(deriv, y)


def test_reduced_n1_symbolic_form():
    Qy, (y, s, e, m1, m2, X) = _symbolic_generating()
    first = sp.diff(Qy, y).subs(y, 0)
    expected = sp.exp(-X / s) / sp.pi * (m2 * X / s ** 3 + (e * s + m1) / s ** 2)
    assert sp.simplify(first - expected) == 0


def test_reduced_normalization():
    ctx = number_q_context(GENERIC, ENV, 0.5, 1.4)
    z, w = disk_rule(8 + abs(ctx.f2), n_r=80, n_theta=128)
    for N in range(4):
        assert float(w @ husimi_number_reduced(GENERIC, ENV, N, 0.5, 1.4, z)) == pytest.approx(1, abs=1e-9)


def test_number_state_density_matrix_populations():
    rho = number_state_reduced_density_matrix(GENERIC, ENV, 2, 0.5, 1.8, 40)
    m = rho.entries
    assert np.trace(m).real == pytest.approx(1, abs=1e-10)
    assert np.min(np.linalg.eigvalsh(m)) >= -1e-12
    # its Husimi function is the reduced number-state Husimi function
    alpha = np.array([0.3, -0.8 + 0.2j, 1.1j])
    v = coherent_vector(alpha, 40)
    q = np.einsum("am,mn,an->a", v.conj(), m, v).real / np.pi
    assert np.allclose(q, husimi_number_reduced(GENERIC, ENV, 2, 0.5, 1.8, alpha), atol=1e-12)


def test_number_state_density_matrix_vacuum_limit():
    p = SystemParams(omega0=2.0, k=1.0, omegaL=1.5, drive=DriveSpec(0.6))
    t = 1.3
    rho = number_state_reduced_density_matrix(p, ConstantG(0.0), 0, 0.0, t, 30)
    v = coherent_vector(drive_response(p, ConstantG(0.0), t).f2, 30)
    assert np.max(np.abs(rho.entries - np.outer(v, v.conj()))) < 1e-13
