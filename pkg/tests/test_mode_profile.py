import math

import numpy as np
import pytest

from conftest import random_params
from rtstab import FluidParams
from rtstab.dispersion import cutoff_wavenumber, growth_rate
from rtstab.errors import DegenerateInput, SingularSystem
from rtstab.mode_profile import (ModeProfile, dispersion_from_profile, forcing, kinematic_matrix,
                                 pressure_split, residual_check, solve_mode,
                                 transmission_determinant, transmission_system)

CASES = [(10.0, 1.0), (0.3, 0.5), (1e3, 1.0), (0.01, 3.0), (1e-3, 5.0), (2 + 3j, 0.7),
         (-0.05 + 0.2j, 1.0), (100.0, 0.01)]


def test_zero_amplitude_gives_zero_profile(unit):
    prof = solve_mode(0.5, 1.0, 0.0, unit)
    v, w, pi = prof.evaluate(np.linspace(-3, 3, 11))
    assert not np.any(v) and not np.any(w) and not np.any(pi)
    assert residual_check(prof, unit) == 0.0


def test_linearity(unit):
    a = solve_mode(0.7, 0.9, 1.0, unit)
    b = solve_mode(0.7, 0.9, 2.0, unit)
    y = np.linspace(-2, 2, 9)
    for fa, fb in zip(a.evaluate(y), b.evaluate(y)):
        assert np.allclose(fb, 2 * fa, rtol=1e-13, atol=0)


@pytest.mark.parametrize("lam, tau", CASES)
def test_residual_small(unit, lam, tau):
    assert residual_check(solve_mode(lam, tau, 1.0, unit), unit) <= 1e-8


def test_residual_random_params():
    rng = np.random.default_rng(3)
    for _ in range(10):
        p = random_params(rng, unstable=bool(rng.integers(2)))
        tau = 10 ** rng.uniform(-1, 1)
        lam = 10 ** rng.uniform(-2, 2)
        assert residual_check(solve_mode(lam, tau, 1.0, p), p) <= 1e-8


def test_perturbed_coefficient_detected(unit):
    prof = solve_mode(10.0, 1.0, 1.0, unit)
    for slot in ("coeffs_lower", "coeffs_upper", "pressure_coeffs"):
        c = getattr(prof, slot).copy()
        c[0] *= 1 + 1e-3
        bad = ModeProfile(**{**prof.__dict__, slot: c})
        assert residual_check(bad, unit) >= 1e-5


def test_decay_and_incompressibility(unit):
    prof = solve_mode(0.4, 0.8, 1.0, unit)
    assert prof.q1.real > 0 and prof.q2.real > 0
    y = np.concatenate([-np.linspace(0.5, 5, 20), np.linspace(0.5, 5, 20)])
    h = 1e-4
    v, w, _ = prof.evaluate(y)
    dw = (prof.evaluate(y + h)[1] - prof.evaluate(y - h)[1]) / (2 * h)
    dw2 = (prof.evaluate(y + h / 2)[1] - prof.evaluate(y - h / 2)[1]) / h
    dw = (4 * dw2 - dw) / 3
    assert np.max(np.abs(1j * 0.8 * v + dw)) <= 1e-10 * np.max(np.abs(w))
    far = prof.evaluate(np.array([-60.0, 60.0]))
    assert np.all(np.abs(far[1]) < 1e-15)


def test_normal_stress_balance(unit):
    tau = 0.6
    prof = solve_mode(1.3, tau, 0.7, unit)
    lo, up = prof.traces()
    lhs = -2 * (unit.mu2 * up["dw"] - unit.mu1 * lo["dw"]) + (up["pi"] - lo["pi"])
    rhs = forcing(tau, unit) * 0.7
    assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), 1.0)


def test_system_rows_labelled(unit):
    s = transmission_system(0.5, 1.0, 1.0, unit)
    assert s.matrix.shape == (6, 6) and len(s.labels) == 6


def test_input_guards(unit):
    with pytest.raises(DegenerateInput):
        solve_mode(0.5, 0.0, 1.0, unit)
    with pytest.raises(DegenerateInput):
        solve_mode(0.0, 1.0, 1.0, unit)
    with pytest.raises(DegenerateInput):
        solve_mode(-5.0, 1.0, 1.0, unit)
    with pytest.raises(SingularSystem):
        solve_mode(1e-14, 1.0, 1.0, unit)


def test_determinant_real_for_real_lambda(unit):
    for lam in (0.01, 0.3, 2.0, 40.0):
        d = transmission_determinant(lam, 0.9, unit)
        assert abs(d.imag) <= 1e-13 * max(abs(d), 1e-300)
    assert kinematic_matrix(0.3, 0.9, unit).shape == (7, 7)


def test_determinant_and_symbol_roots_agree(unit):
    assert dispersion_from_profile(0.5, unit) == pytest.approx(growth_rate(0.5, unit), rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_determinant_random(seed):
    rng = np.random.default_rng(100 + seed)
    p = random_params(rng)
    tau = rng.uniform(0.05, 0.95) * cutoff_wavenumber(p)
    assert dispersion_from_profile(tau, p) == pytest.approx(growth_rate(tau, p), rel=1e-8)


def test_determinant_root_near_cutoff(unit):
    ts = cutoff_wavenumber(unit)
    roots = [dispersion_from_profile((1 - d) * ts, unit) for d in (1e-2, 1e-3, 1e-4)]
    assert roots[0] > roots[1] > roots[2] > 0
    assert roots[2] < 1e-4


def test_determinant_no_sign_change_when_stable():
    p = FluidParams(3, 1, 1, 1, 1, 1)
    lams = np.geomspace(1e-3, 10, 200)
    d = np.array([transmission_determinant(l, 0.8, p).real for l in lams])
    assert np.all(d > 0) or np.all(d < 0)


def test_pressure_split_examples(unit):
    rs = unit.rho_sum
    assert pressure_split(0.0, 1.0, 1.0, 1.0, unit) == pytest.approx(math.exp(-1) / rs, rel=1e-15)
    up = pressure_split(0.0, 1.0, 1.0, 0.0, unit)
    lo = pressure_split(0.0, 1.0, 1.0, -0.0, unit)
    assert unit.rho2 * up - unit.rho1 * lo == pytest.approx(1.0, rel=1e-15)
    far = pressure_split(0.0, 1.0, 2.0, np.array([10.0, 20.0]), unit)
    assert abs(far[1] / far[0]) == pytest.approx(math.exp(-20.0), rel=1e-12)
    with pytest.raises(DegenerateInput):
        pressure_split(0.0, 1.0, 0.0, 1.0, unit)


def test_pressure_split_riesz_part(unit):
    # grad pi1 = R f: tau-component of the gradient equals tau^2 f_v / tau^2 for f normal to xi
    tau, kappa = 0.8, 0.6
    f = np.array([1.0, 0.0])
    pi1 = pressure_split(f, 0.0, tau, 0.0, unit, kappa=kappa)
    grad = np.array([1j * tau, 1j * kappa]) * pi1
    k = np.array([tau, kappa])
    proj = k * (k @ f) / (k @ k)
    assert np.allclose(grad, proj, rtol=1e-14)


def test_profile_csv(tmp_path, unit):
    prof = solve_mode(0.5, 1.0, 1.0, unit)
    out = tmp_path / "p.csv"
    prof.write_csv(out, np.linspace(-1, 1, 5))
    lines = out.read_text().splitlines()
    assert lines[0] == "y,v_re,v_im,w_re,w_im,pi_re,pi_im" and len(lines) == 6
