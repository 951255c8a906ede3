"""Linearized interface evolution by dominant dispersion roots.

Each Fourier mode of the height is multiplied by e^{Re(lambda_dom(|xi|)) t}.
This keeps only the leading exponential of the linearized dynamics (the
velocity field's memory is ignored), so it is faithful for growth rates and
spectral selection, not for transients.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dispersion, zeros
from .errors import OverflowGuard
from .grid import GridField, GridSpec
from .params import FluidParams

AMPLITUDE_LIMIT = 1e300
UNSTABLE = "unstable-root"
RIGHTMOST = "rightmost-root"
CLAMPED = "clamped"


@dataclass
class GrowthTable:
    """Dominant rate per distinct lattice |k|^2 of one grid."""
    spec: GridSpec
    norm2: np.ndarray          # distinct integer |k|^2, ascending
    wavenumbers: np.ndarray
    rates: np.ndarray          # complex; the real part drives amplitudes
    provenance: list

    def rate_field(self):
        """Real rate on every grid point (FFT ordering)."""
        idx = np.searchsorted(self.norm2, self.spec.lattice_norm2())
        return self.rates.real[idx]

    def counts(self):
        out = {UNSTABLE: 0, RIGHTMOST: 0, CLAMPED: 0}
        for tag in self.provenance:
            out[tag] += 1
        return out

    def peak(self):
        """Wavenumber of the largest real rate."""
        i = int(np.argmax(self.rates.real))
        return float(self.wavenumbers[i]), float(self.rates.real[i])

    def rows(self):
        return zip(self.wavenumbers.tolist(), self.rates.real.tolist(),
                   self.rates.imag.tolist(), self.provenance)


def dominant_rate(tau, p: FluidParams):
    """(rate, provenance) for one wavenumber."""
    if tau == 0.0:
        return 0.0 + 0.0j, CLAMPED
    tau_star = dispersion.cutoff_wavenumber(p) if p.is_heavy_on_top() else 0.0
    if tau < tau_star:
        return complex(dispersion.growth_rate(tau, p)), UNSTABLE
    if tau == tau_star:
        # s(0, tau*) = 0 exactly: the neutral mode
        return 0.0 + 0.0j, RIGHTMOST
    root = zeros.rightmost_root(tau, p)
    if root is not None:
        return complex(root), RIGHTMOST
    return complex(zeros.KAPPA * p.branch_point(tau)), CLAMPED


def _rate_job(args):
    return dominant_rate(*args)


def build_growth_table(p: FluidParams, spec: GridSpec, workers=1) -> GrowthTable:
    """Rates for every distinct |xi| of the grid.

    On (0, tau*) the real growth rate; elsewhere the rightmost zero in the
    analyticity strip, or -0.9 min_j(mu_j |xi|^2 / rho_j) when the strip holds
    none.  The zero mode has rate 0.
    """
    norm2 = np.unique(spec.lattice_norm2())
    taus = spec.dxi * np.sqrt(norm2.astype(float))
    jobs = [(float(t), p) for t in taus]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_rate_job, jobs, chunksize=16))
    else:
        results = [_rate_job(j) for j in jobs]
    rates = np.array([r for r, _ in results], dtype=complex)
    return GrowthTable(spec, norm2, taus, rates, [tag for _, tag in results])


@dataclass
class SimulationRun:
    field0: GridField
    params: FluidParams
    table: GrowthTable
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)

    def __post_init__(self):
        if self.table.spec != self.field0.spec:
            raise ValueError("growth table was built on a different grid")


def blowup_time(run: SimulationRun) -> float:
    """First time a modal amplitude reaches AMPLITUDE_LIMIT (inf if never)."""
    amp = np.abs(run.field0.spectrum)
    rate = run.table.rate_field()
    grow = (rate > 0) & (amp > 0)
    if not grow.any():
        return math.inf
    return float(np.min((math.log(AMPLITUDE_LIMIT) - np.log(amp[grow])) / rate[grow]))


def evolve(run: SimulationRun, t) -> GridField:
    """h(t) = F^{-1}[ e^{Re lambda_dom(|xi|) t} h_hat(0) ]."""
    t = float(t)
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0.0:
        return GridField(run.field0.spec, run.field0.values.copy(), dict(run.field0.meta))
    tb = blowup_time(run)
    if t >= tb:
        raise OverflowGuard(f"modal amplitude exceeds {AMPLITUDE_LIMIT:g} at t={tb:.6g}",
                            blowup_time=tb)
    gain = np.exp(run.table.rate_field() * t)
    meta = dict(run.field0.meta)
    meta["t"] = t
    return GridField.from_spectrum(run.field0.spec, gain * run.field0.spectrum, meta)


def run_schedule(run: SimulationRun, times):
    """Evolve to each time; stores and returns the snapshots."""
    run.times = [float(t) for t in times]
    run.snapshots = [evolve(run, t) for t in run.times]
    return run.snapshots


def radial_bins(spec: GridSpec):
    """Bin index round(|k|) of every grid point, in lattice units."""
    return np.rint(np.sqrt(spec.lattice_norm2().astype(float))).astype(np.int64)


def _binned_mean(values, bins):
    total = np.bincount(bins.ravel(), weights=values.ravel())
    count = np.bincount(bins.ravel())
    out = np.zeros(total.shape)
    np.divide(total, count, out=out, where=count > 0)
    return out


def diagnostics(run: SimulationRun, t) -> dict:
    """Peak wavenumber of the bin-averaged |h_hat(t)| (zero mode excluded),
    L2 norm, max |h| and e-folds of the peak bin since t = 0."""
    h = evolve(run, t)
    spec = h.spec
    bins = radial_bins(spec)
    amp_t = _binned_mean(np.abs(h.spectrum), bins)
    amp_0 = _binned_mean(np.abs(run.field0.spectrum), bins)
    amp_t[0] = 0.0
    if not np.any(amp_t > 0):
        return {"t": float(t), "peak_wavenumber": 0.0, "l2_amplitude": 0.0,
                "max_height": 0.0, "efolds": 0.0}
    k = int(np.argmax(amp_t))
    return {
        "t": float(t),
        "peak_wavenumber": float(k * spec.dxi),
        "l2_amplitude": h.norm(2),
        "max_height": float(np.abs(h.values).max()),
        "efolds": float(math.log(amp_t[k] / amp_0[k])),
    }


def gain_peak(run: SimulationRun, t) -> float:
    """Wavenumber bin where the mean gain |h_hat(t)| / |h_hat(0)| peaks."""
    h = evolve(run, t)
    a0 = np.abs(run.field0.spectrum)
    live = a0 > 0
    ratio = np.zeros(a0.shape)
    ratio[live] = np.abs(h.spectrum)[live] / a0[live]
    bins = radial_bins(h.spec)
    mean = _binned_mean(ratio, np.where(live, bins, 0))
    mean[0] = 0.0
    return float(int(np.argmax(mean)) * h.spec.dxi)


def pure_mode(spec: GridSpec, index, amplitude=1.0) -> GridField:
    """Real cosine mode with integer lattice wavevector ``index``."""
    index = np.atleast_1d(index)
    x = spec.coords()
    phase = sum(spec.dxi * k * xx for k, xx in zip(index, x))
    return GridField(spec, amplitude * np.cos(phase) + 0j, {"initial": "pure-mode",
                                                           "index": index.tolist()})


def white_noise(spec: GridSpec, seed, amplitude=1e-6) -> GridField:
    """Real Gaussian noise with zero mean."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(spec.shape)
    v -= v.mean()
    return GridField(spec, amplitude * v + 0j, {"initial": "white-noise", "seed": int(seed)})
