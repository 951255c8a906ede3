"""Approximate eigenfunctions for a dispersion zero (lambda0, |xi0|).

h_eps(x) = e^{i xi0 . x} chi(eps x), where chi has a smooth bump as Fourier
transform (support in the unit ball, chi(0) = 1).  Applying the symbol
multiplier s(lambda0, |xi|) to h_eps leaves a residual g_eps whose norm
relative to h_eps is O(eps) when s(lambda0, |xi0|) = 0, and tends to
|s(lambda0, |xi0|)| otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import dispersion, symbol
from .errors import BoxTooSmall, EpsilonTooLarge, GridTooCoarse, ZeroFrequencyTouched
from .grid import GridField, GridSpec
from .params import FluidParams

MIN_BINS = 8
MIN_BOX = 20.0


def bump(r):
    """exp(-1 / (1 - r^2)) for |r| < 1, zero elsewhere."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = np.abs(r) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


def _bump1(r):
    return math.exp(-1.0 / (1.0 - r * r)) if abs(r) < 1.0 else 0.0


def _bump_integral(dim):
    """Integral of the bump over the unit ball in R^dim."""
    if dim == 1:
        return 2.0 * quad(_bump1, 0.0, 1.0, epsabs=0, epsrel=1e-13)[0]
    return 2.0 * math.pi * quad(lambda r: r * _bump1(r), 0.0, 1.0, epsabs=0, epsrel=1e-13)[0]


@dataclass(frozen=True)
class WindowFunction:
    epsilon: float
    grid: GridField
    fourier_support_radius: float


def build_window(epsilon, spec: GridSpec) -> WindowFunction:
    """chi_eps on the grid, built from its Fourier transform and normalized to chi_eps(0) = 1."""
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if spec.length < MIN_BOX / epsilon:
        raise BoxTooSmall(f"box length {spec.length} < {MIN_BOX}/epsilon = {MIN_BOX / epsilon}")
    if epsilon / spec.dxi < MIN_BINS:
        raise GridTooCoarse(f"only {epsilon / spec.dxi:.2f} wavenumber bins inside radius epsilon")
    if epsilon >= 0.5 * spec.n * spec.dxi:
        raise GridTooCoarse("window support exceeds the Nyquist wavenumber")

    r = spec.wavenumbers() / epsilon
    d = spec.dim
    spectrum = (2.0 * math.pi) ** d / _bump_integral(d) * bump(r) / epsilon**d
    field = GridField.from_spectrum(spec, spectrum)
    c0 = field.values.flat[0].real
    field = GridField.from_spectrum(spec, spectrum / c0, {"epsilon": epsilon})
    return WindowFunction(float(epsilon), field, float(epsilon))


def lattice_index(xi0, spec: GridSpec):
    """Integer lattice index of xi0; ValueError if xi0 is not a lattice vector."""
    xi0 = np.atleast_1d(np.asarray(xi0, dtype=float))
    if xi0.size != spec.dim:
        raise ValueError(f"xi0 has {xi0.size} components, grid is {spec.dim}-D")
    m = xi0 / spec.dxi
    mi = np.round(m)
    if np.any(np.abs(m - mi) > 1e-9 * np.maximum(1.0, np.abs(m))):
        raise ValueError(f"xi0={xi0.tolist()} is not on the wavenumber lattice (spacing {spec.dxi})")
    return mi.astype(np.int64)


def build_heps(xi0, epsilon, window: WindowFunction) -> GridField:
    """Modulated window h_eps = e^{i xi0.x} chi_eps(x)."""
    spec = window.grid.spec
    xi0 = np.atleast_1d(np.asarray(xi0, dtype=float))
    lattice_index(xi0, spec)
    if not math.isclose(epsilon, window.epsilon, rel_tol=1e-12):
        raise ValueError("epsilon does not match the window")
    carrier = float(np.linalg.norm(xi0))
    if epsilon > 0.5 * carrier:
        raise EpsilonTooLarge(f"epsilon={epsilon} > |xi0|/2 = {0.5 * carrier}")
    if np.any(np.abs(xi0) + epsilon >= 0.5 * spec.n * spec.dxi):
        raise GridTooCoarse("grid does not resolve the ball B(xi0, epsilon)")
    x = spec.coords()
    phase = np.exp(1j * sum(k * xx for k, xx in zip(xi0, x)))
    meta = {"xi0": xi0.tolist(), "epsilon": float(epsilon), "carrier": carrier}
    return GridField(spec, phase * window.grid.values, meta)


def apply_symbol_multiplier(field: GridField, lambda0, p: FluidParams, multiplier=None) -> GridField:
    """F^{-1}[ s(lambda0, |xi|) F[field] ].

    ``multiplier(abs_xi)`` replaces the symbol when given (used for checks).
    """
    mask = field.support()
    absxi = field.spec.wavenumbers()
    carrier = field.meta.get("carrier")
    if carrier is None:
        carrier = float(absxi.flat[np.argmax(np.abs(field.spectrum))])
    if mask.any() and absxi[mask].min() < 0.25 * carrier:
        raise ZeroFrequencyTouched(
            f"spectral support reaches |xi|={absxi[mask].min():.3g} < |xi0|/4")
    if multiplier is None:
        m = symbol.symbol_s(float(lambda0), absxi, p)
    else:
        m = multiplier(absxi)
    return GridField.from_spectrum(field.spec, m * field.spectrum, dict(field.meta))


def witness_grid(xi0_norm, eps_min, dim=1, n=None, eps_max=None) -> GridSpec:
    """Grid with xi0 = (|xi0|, 0) on the lattice that resolves every eps >= eps_min."""
    eps_max = eps_max if eps_max is not None else 0.5 * xi0_norm
    m = math.ceil(max(MIN_BINS * xi0_norm / eps_min,
                      MIN_BOX * xi0_norm / (2.0 * math.pi * eps_min)))
    length = 2.0 * math.pi * m / xi0_norm
    need = 2 * math.ceil(m * (1.0 + eps_max / xi0_norm)) + 2
    if n is None:
        n = 1 << max(need - 1, 1).bit_length()
    elif n < need:
        raise GridTooCoarse(f"n={n} points per axis cannot resolve |xi0|+eps (need >= {need})")
    return GridSpec(int(n), length, dim)


def carrier_vector(xi0_norm, dim):
    return [xi0_norm] + [0.0] * (dim - 1)


def witness_residual(xi0, epsilon, p: FluidParams, norm_p=2.0, lambda0=None, spec=None) -> float:
    """||g_eps||_p / ||h_eps||_p on the grid.

    lambda0 defaults to growth_rate(|xi0|), i.e. a true dispersion zero.
    At the peak wavenumber tau_max the zero of s(lambda0, .) is double and
    the ratio falls like eps^2 instead of eps.
    """
    xi0 = np.atleast_1d(np.asarray(xi0, dtype=float))
    carrier = float(np.linalg.norm(xi0))
    if lambda0 is None:
        lambda0 = dispersion.growth_rate(carrier, p)
    if spec is None:
        spec = witness_grid(carrier, epsilon, dim=xi0.size)
    window = build_window(epsilon, spec)
    h = build_heps(xi0, epsilon, window)
    g = apply_symbol_multiplier(h, lambda0, p)
    return g.norm(norm_p) / h.norm(norm_p)


def witness_scan(xi0_norm, eps_fracs, p: FluidParams, dim=1, n=None, norm_p=2.0, lambda0=None):
    """Residual ratios over eps = frac * |xi0| on one shared grid.

    Returns (rows, slope) where rows are (eps, ratio) and slope is the
    least-squares log-log slope of ratio against eps.
    """
    eps = [f * xi0_norm for f in eps_fracs]
    spec = witness_grid(xi0_norm, min(eps), dim=dim, n=n, eps_max=max(eps))
    xi0 = carrier_vector(xi0_norm, dim)
    rows = [(e, witness_residual(xi0, e, p, norm_p, lambda0, spec)) for e in eps]
    e, r = np.log([x[0] for x in rows]), np.log([x[1] for x in rows])
    slope = float(np.polyfit(e, r, 1)[0])
    return rows, slope


def scaled_norms(xi0_norm, eps_values, norm_p=2.0, dim=1, n=None):
    """eps^{d/p} ||h_eps||_p for each eps (constant when h_eps is a true dilation)."""
    spec = witness_grid(xi0_norm, min(eps_values), dim=dim, n=n, eps_max=max(eps_values))
    xi0 = carrier_vector(xi0_norm, dim)
    out = []
    for e in eps_values:
        h = build_heps(xi0, e, build_window(e, spec))
        power = 0.0 if np.isinf(norm_p) else dim / norm_p
        out.append(e**power * h.norm(norm_p))
    return np.array(out)
