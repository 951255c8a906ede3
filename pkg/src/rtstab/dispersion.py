"""Real growth-rate branch lambda(tau) on the unstable band (0, tau*).

With zeta = lambda / tau^2 the dispersion relation s = 0 becomes
Phi(zeta) = -psi(tau), where Phi(zeta) = zeta / k(zeta) is increasing on
[0, inf).  Roots are found on that monotone scalar equation, never by
Newton on s itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import symbol
from .errors import NoConvergence, OutOfBand, StableConfiguration
from .params import FluidParams

MAX_ITER = 200
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def cutoff_wavenumber(p: FluidParams) -> float:
    """tau* = sqrt(g [[rho]] / sigma); wavenumbers above it are stabilized."""
    if not p.is_heavy_on_top():
        raise StableConfiguration("rho2 <= rho1: no unstable band")
    return math.sqrt(p.gamma_a * (p.rho2 - p.rho1) / p.sigma)


def asymptotic_constants(p: FluidParams):
    """Constants of lambda ~ c_small sqrt(tau) (tau -> 0) and lambda ~ c_star (tau* - tau)."""
    if not p.is_heavy_on_top():
        raise StableConfiguration("rho2 <= rho1: no unstable band")
    c_small = math.sqrt(p.jump() * p.gamma_a / p.rho_sum)
    c_star = p.sigma / p.mu_sum
    return c_small, c_star


def _phi_real(zeta, p):
    """Phi and dPhi/dzeta for real zeta >= 0, in plain float arithmetic."""
    w1 = math.sqrt(p.rho1 * zeta + p.mu1)
    w2 = math.sqrt(p.rho2 * zeta + p.mu2)
    e1 = math.sqrt(p.mu1) * w1 + p.mu2
    e2 = math.sqrt(p.mu2) * w2 + p.mu1
    s = e1 + e2
    h = e1 * e2 / s
    de1 = math.sqrt(p.mu1) * p.rho1 / (2.0 * w1)
    de2 = math.sqrt(p.mu2) * p.rho2 / (2.0 * w2)
    dh = (de1 * e2 * e2 + de2 * e1 * e1) / (s * s)
    c = 4.0 / p.rho_sum
    return zeta * zeta + c * zeta * h, 2.0 * zeta + c * (h + zeta * dh)


def _solve_zeta(target, p, tol):
    """Unique zeta > 0 with Phi(zeta) = target > 0."""
    # Phi >= max(zeta^2, zeta/k(0)), so the root sits below both inverses.
    hi = min(math.sqrt(target), target * symbol.k_zero(p))
    f_hi = _phi_real(hi, p)[0] - target
    it = 0
    while f_hi < 0:
        hi *= 2.0
        f_hi = _phi_real(hi, p)[0] - target
        it += 1
    lo = hi
    f_lo = f_hi
    while f_lo >= 0 and lo > 0:
        lo *= 0.5
        f_lo = _phi_real(lo, p)[0] - target
        it += 1
        if lo < 1e-300:
            lo, f_lo = 0.0, -target
    if f_lo == 0.0:
        return lo

    x = 0.5 * (lo + hi)
    while it < MAX_ITER:
        it += 1
        f, df = _phi_real(x, p)
        f -= target
        if abs(f) <= tol * target:
            # one polishing step, kept only if it helps
            if df > 0:
                y = x - f / df
                if lo < y < hi:
                    g = _phi_real(y, p)[0] - target
                    if abs(g) < abs(f):
                        return y
            return x
        if f < 0:
            lo = x
        else:
            hi = x
        step = x - f / df if df > 0 else None
        if step is not None and lo < step < hi:
            x = step
        else:
            x = 0.5 * (lo + hi)
        if hi - lo <= 4 * np.finfo(float).eps * hi:
            return x
    raise NoConvergence(f"growth-rate iteration did not converge within {MAX_ITER} steps")


def growth_rate(tau, p: FluidParams, tol=1e-12) -> float:
    """The positive real zero lambda(tau) of s(., tau) for 0 < tau < tau*."""
    tau_star = cutoff_wavenumber(p)
    tau = float(tau)
    if not 0.0 < tau < tau_star:
        raise OutOfBand(f"tau={tau!r} outside the unstable band (0, {tau_star!r})")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    target = -symbol.psi(tau, p)
    zeta = _solve_zeta(target, p, tol)
    return tau * tau * zeta


def band_grid(tau_star, n):
    """n interior points of (0, tau*), clustered toward both edges."""
    i = np.arange(n)
    return 0.5 * tau_star * (1.0 - np.cos(np.pi * (i + 0.5) / n))


def scaled_residual(lam, tau, p):
    """|s(lambda, tau)| / (tau^2 |psi(tau)| k(0))."""
    s = symbol.symbol_s(lam, tau, p)
    return abs(s) / (tau * tau * abs(symbol.psi(tau, p)) * symbol.k_zero(p))


@dataclass
class DispersionCurve:
    taus: np.ndarray
    lambdas: np.ndarray
    residuals: np.ndarray
    tau_star: float
    params: FluidParams
    tol: float = field(default=1e-12)

    def rows(self):
        return zip(self.taus.tolist(), self.lambdas.tolist(), self.residuals.tolist())


def dispersion_curve(p: FluidParams, n_points=256, tol=1e-12) -> DispersionCurve:
    """Sample lambda(tau) on a band-edge clustered grid.

    ``residuals`` holds |s(lambda, tau)| normalized by tau^2 |psi| k(0), the
    natural size of s near the root, so it is comparable to ``tol``.
    """
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    tau_star = cutoff_wavenumber(p)
    taus = band_grid(tau_star, n_points)
    lams = np.array([growth_rate(t, p, tol) for t in taus])
    res = np.array([scaled_residual(l, t, p) for l, t in zip(lams, taus)])
    return DispersionCurve(taus, lams, res, tau_star, p, tol)


@dataclass(frozen=True)
class GrowthSummary:
    tau_max: float
    lambda_inf: float
    bracket_width: float

    def to_dict(self):
        return {"tau_max": self.tau_max, "lambda_inf": self.lambda_inf,
                "bracket_width": self.bracket_width}


def max_growth(p: FluidParams, tol=1e-10, n_coarse=256) -> GrowthSummary:
    """Maximal growth rate lambda_inf and its wavenumber."""
    tau_star = cutoff_wavenumber(p)
    taus = band_grid(tau_star, n_coarse)
    lams = np.array([growth_rate(t, p) for t in taus])
    i = int(np.argmax(lams))
    a = taus[i - 1] if i > 0 else 0.5 * taus[0]
    b = taus[i + 1] if i < n_coarse - 1 else 0.5 * (taus[-1] + tau_star)

    f = lambda t: growth_rate(t, p)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(MAX_ITER):
        if b - a <= tol * tau_star:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    else:
        raise NoConvergence("golden-section search did not reach the requested width")
    tau_max, lam_max = (c, fc) if fc > fd else (d, fd)
    if lams[i] > lam_max:
        tau_max, lam_max = float(taus[i]), float(lams[i])
    return GrowthSummary(float(tau_max), float(lam_max), float(b - a))
