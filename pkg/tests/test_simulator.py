import math

import numpy as np
import pytest

from rtstab import FluidParams
from rtstab.dispersion import cutoff_wavenumber, growth_rate, max_growth
from rtstab.errors import OverflowGuard
from rtstab.grid import GridField, GridSpec
from rtstab.simulator import (CLAMPED, RIGHTMOST, UNSTABLE, SimulationRun, blowup_time,
                              build_growth_table, diagnostics, dominant_rate, evolve, gain_peak,
                              pure_mode, white_noise)

P = FluidParams(1, 3, 1, 1, 1, 1)
G = max_growth(P)


@pytest.fixture(scope="module")
def table1d():
    spec = GridSpec(128, 2 * math.pi * 8 / G.tau_max, 1)
    return build_growth_table(P, spec)


@pytest.fixture(scope="module")
def table2d():
    spec = GridSpec(32, 2 * math.pi * 4 / G.tau_max, 2)
    return build_growth_table(P, spec)


def _rel(a, b):
    return np.abs(a - b).max() / max(np.abs(b).max(), 1e-300)


def test_table_signs_and_provenance(table1d):
    ts = cutoff_wavenumber(P)
    k, r = table1d.wavenumbers, table1d.rates.real
    band = (k > 0) & (k < ts)
    assert np.all(r[band] > 0) and np.all(r[~band] <= 0)
    assert r[0] == 0 and table1d.provenance[0] == CLAMPED
    assert all(table1d.provenance[i] == UNSTABLE for i in np.nonzero(band)[0])
    assert set(table1d.provenance) <= {UNSTABLE, RIGHTMOST, CLAMPED}
    assert r[band][0] < r[band].max() and r[band][-1] < r[band].max()


def test_table_deterministic(table1d):
    again = build_growth_table(P, table1d.spec)
    assert np.array_equal(again.rates, table1d.rates) and again.provenance == table1d.provenance


def test_table_stable_config_nonpositive():
    q = FluidParams(3, 1, 1, 1, 1, 1)
    tab = build_growth_table(q, GridSpec(32, 40.0, 1))
    assert np.all(tab.rates.real <= 0)


def test_dominant_rate_cases():
    ts = cutoff_wavenumber(P)
    assert dominant_rate(0.0, P) == (0j, CLAMPED)
    assert dominant_rate(ts, P) == (0j, RIGHTMOST)
    lam, tag = dominant_rate(0.3, P)
    assert tag == UNSTABLE and lam == growth_rate(0.3, P)
    # low viscosity: oscillatory roots lie left of the strip, so the rate is clamped
    q = FluidParams(1, 3, 0.01, 0.01, 1, 1)
    lam, tag = dominant_rate(5.0, q)
    assert tag == CLAMPED and lam.real == pytest.approx(0.9 * q.branch_point(5.0))


def test_t_zero_bitwise(table1d):
    f0 = white_noise(table1d.spec, 1)
    run = SimulationRun(f0, P, table1d)
    out = evolve(run, 0.0)
    assert np.array_equal(out.values, f0.values) and out.values is not f0.values


def test_single_mode_exponential(table1d):
    spec = table1d.spec
    m = 8  # tau_max sits on lattice index 8
    run = SimulationRun(pure_mode(spec, [m]), P, table1d)
    a0 = np.abs(run.field0.spectrum[m])
    a1 = np.abs(evolve(run, 1.0).spectrum[m])
    assert a1 / a0 == pytest.approx(math.exp(G.lambda_inf), rel=1e-12)
    d = diagnostics(run, 2 / G.lambda_inf)
    assert d["efolds"] == pytest.approx(2.0, abs=1e-10)
    assert d["peak_wavenumber"] == pytest.approx(G.tau_max, rel=1e-12)


def test_linearity_and_semigroup(table1d):
    run = SimulationRun(white_noise(table1d.spec, 2), P, table1d)
    scaled = SimulationRun(run.field0.scaled(-3.5), P, table1d)
    assert _rel(evolve(scaled, 7.0).values, -3.5 * evolve(run, 7.0).values) <= 1e-12
    mid = evolve(run, 3.0)
    chained = evolve(SimulationRun(GridField(mid.spec, mid.values), P, table1d), 4.0)
    assert _rel(chained.values, evolve(run, 7.0).values) <= 1e-12


def test_mean_conserved(table1d):
    spec = table1d.spec
    f0 = GridField(spec, white_noise(spec, 3).values + 0.25)
    run = SimulationRun(f0, P, table1d)
    c0 = f0.spectrum.flat[0]
    for t in (1.0, 10.0, 30.0):
        assert evolve(run, t).spectrum.flat[0] == pytest.approx(c0, rel=1e-12)


def test_isotropy(table2d):
    spec = table2d.spec
    f0 = white_noise(spec, 4)
    n = spec.n
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    rot = lambda v: v[j, (-i) % n]
    a = evolve(SimulationRun(GridField(spec, rot(f0.values)), P, table2d), 5.0).values
    b = rot(evolve(SimulationRun(f0, P, table2d), 5.0).values)
    assert _rel(a, b) <= 1e-12


def test_white_noise_peak(table1d, table2d):
    for tab in (table1d, table2d):
        run = SimulationRun(white_noise(tab.spec, 5), P, tab)
        t = 10 / G.lambda_inf
        assert abs(gain_peak(run, t) - G.tau_max) <= tab.spec.dxi
        assert abs(diagnostics(run, t)["peak_wavenumber"] - G.tau_max) <= tab.spec.dxi


def test_zero_field_diagnostics(table1d):
    run = SimulationRun(GridField(table1d.spec, np.zeros(128)), P, table1d)
    d = diagnostics(run, 3.0)
    assert d["peak_wavenumber"] == d["l2_amplitude"] == d["max_height"] == d["efolds"] == 0


def test_stable_l2_nonincreasing():
    q = FluidParams(3, 1, 1, 1, 1, 1)
    tab = build_growth_table(q, GridSpec(64, 50.0, 1))
    run = SimulationRun(white_noise(tab.spec, 6), q, tab)
    norms = [diagnostics(run, t)["l2_amplitude"] for t in (0, 0.5, 1, 2, 5, 10)]
    assert all(b <= a * (1 + 1e-14) for a, b in zip(norms, norms[1:]))


def test_overflow_guard(table1d):
    run = SimulationRun(pure_mode(table1d.spec, [8]), P, table1d)
    tb = blowup_time(run)
    assert math.isfinite(tb)
    evolve(run, 0.99 * tb)
    with pytest.raises(OverflowGuard) as exc:
        evolve(run, 2 * tb)
    assert exc.value.blowup_time == pytest.approx(tb)


def test_grid_mismatch_rejected(table1d):
    with pytest.raises(ValueError):
        SimulationRun(white_noise(GridSpec(64, 1.0), 0), P, table1d)
