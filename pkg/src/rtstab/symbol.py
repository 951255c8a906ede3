"""Boundary symbol s(lambda, tau) of the linearized two-phase problem.

    s(lambda, tau) = lambda + (sigma tau^2 - [[rho]] g) / D(lambda, tau)
    D = (rho1 + rho2) lambda / tau + 4 eta1 eta2 / (eta1 + eta2)
    omega_j = sqrt(rho_j lambda + mu_j tau^2)
    eta1 = sqrt(mu1) omega1 + mu2 tau,   eta2 = sqrt(mu2) omega2 + mu1 tau

All square roots take the principal branch with the cut on the negative real
axis and Im >= 0 on the cut itself.  Evaluation order is fixed
(omega -> eta -> D -> s) so repeated evaluations are bit-identical.

Functions accept scalars or numpy arrays; scalar in, Python scalar out.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DivisionBreakdown
from .params import FluidParams

TINY = 1e-300


def _out(x, scalar):
    if scalar:
        return complex(x) if np.iscomplexobj(x) else float(x)
    return x


def sqrt_principal(z):
    """Principal square root: Re r >= 0, and Im r >= 0 when Re r == 0."""
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    # -0.0 imaginary parts would otherwise land on the lower lip of the cut
    z = np.where(z.imag == 0.0, z.real + 0j, z)
    return _out(np.sqrt(z), scalar)


def omega(j, lam, tau, p: FluidParams):
    rho, mu = _phase(j, p)
    scalar = np.ndim(lam) == 0 and np.ndim(tau) == 0
    lam = np.asarray(lam, dtype=complex)
    tau = np.asarray(tau, dtype=float)
    return _out(sqrt_principal(rho * lam + mu * tau * tau), scalar)


def eta(j, lam, tau, p: FluidParams):
    """eta1 = sqrt(mu1) omega1 + mu2 tau; eta2 = sqrt(mu2) omega2 + mu1 tau."""
    scalar = np.ndim(lam) == 0 and np.ndim(tau) == 0
    tau_a = np.asarray(tau, dtype=float)
    w = np.asarray(omega(j, lam, tau, p))
    if j == 1:
        out = np.sqrt(p.mu1) * w + p.mu2 * tau_a
    else:
        out = np.sqrt(p.mu2) * w + p.mu1 * tau_a
    return _out(out, scalar)


def _phase(j, p):
    if j == 1:
        return p.rho1, p.mu1
    if j == 2:
        return p.rho2, p.mu2
    raise ValueError(f"phase index must be 1 or 2, got {j!r}")


@dataclass(frozen=True)
class SymbolEval:
    lam: complex
    tau: float
    value: complex
    omega1: complex
    omega2: complex
    eta1: complex
    eta2: complex


def _parts(lam, tau, p):
    o1 = sqrt_principal(p.rho1 * lam + p.mu1 * tau * tau)
    o2 = sqrt_principal(p.rho2 * lam + p.mu2 * tau * tau)
    e1 = np.sqrt(p.mu1) * o1 + p.mu2 * tau
    e2 = np.sqrt(p.mu2) * o2 + p.mu1 * tau
    return o1, o2, e1, e2


def _denominator(lam, tau, e1, e2, p):
    return p.rho_sum * lam / tau + 4.0 * e1 * e2 / (e1 + e2)


def symbol_s(lam, tau, p: FluidParams):
    """Evaluate s(lambda, tau).  At tau = 0 the continuity limit s = lambda is used."""
    scalar = np.ndim(lam) == 0 and np.ndim(tau) == 0
    lam, tau = np.broadcast_arrays(np.asarray(lam, dtype=complex),
                                   np.asarray(tau, dtype=float))
    if np.any(tau < 0):
        raise DegenerateInput("tau must be >= 0")
    at_zero = tau == 0.0
    if np.any(at_zero & (lam == 0)):
        raise DegenerateInput("s is undefined at (lambda, tau) = (0, 0)")

    out = np.array(lam, dtype=complex, copy=True)
    pos = ~at_zero
    if np.any(pos):
        lp, tp = lam[pos], tau[pos]
        _, _, e1, e2 = _parts(lp, tp, p)
        den = _denominator(lp, tp, e1, e2, p)
        if np.any(np.abs(den) < TINY):
            raise DivisionBreakdown("symbol denominator vanished (evaluation at a pole)")
        out[pos] = lp + (p.sigma * tp * tp - p.jump() * p.gamma_a) / den
    return _out(out, scalar)


def evaluate_symbol(lam, tau, p: FluidParams) -> SymbolEval:
    """Scalar evaluation that also returns the intermediates."""
    lam = complex(lam)
    tau = float(tau)
    if tau <= 0:
        value = symbol_s(lam, tau, p)
        o1, o2, e1, e2 = _parts(lam, tau, p)
    else:
        o1, o2, e1, e2 = _parts(lam, tau, p)
        den = _denominator(lam, tau, e1, e2, p)
        if abs(den) < TINY:
            raise DivisionBreakdown("symbol denominator vanished (evaluation at a pole)")
        value = lam + (p.sigma * tau * tau - p.jump() * p.gamma_a) / den
    return SymbolEval(lam, tau, complex(value), complex(o1), complex(o2),
                      complex(e1), complex(e2))


def cleared_symbol(lam, tau, p: FluidParams):
    """s(lambda, tau) * D(lambda, tau): same zeros as s but free of poles.

    Used for zero counting, where the argument principle would otherwise
    count poles of s (zeros of D) with negative multiplicity.
    """
    scalar = np.ndim(lam) == 0 and np.ndim(tau) == 0
    lam = np.asarray(lam, dtype=complex)
    tau = np.asarray(tau, dtype=float)
    _, _, e1, e2 = _parts(lam, tau, p)
    den = _denominator(lam, tau, e1, e2, p)
    return _out(lam * den + (p.sigma * tau * tau - p.jump() * p.gamma_a), scalar)


def psi(tau, p: FluidParams):
    """psi(tau) = sigma/((rho1+rho2) tau) - [[rho]] g/((rho1+rho2) tau^3)."""
    scalar = np.ndim(tau) == 0
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise DegenerateInput("psi needs tau > 0")
    out = p.sigma / (p.rho_sum * tau) - p.jump() * p.gamma_a / (p.rho_sum * tau**3)
    return _out(out, scalar)


def inverse_k(zeta, p: FluidParams):
    """1/k(zeta) = zeta + 4/(rho1+rho2) * eta1 eta2 / (eta1 + eta2), tau scaled out."""
    scalar = np.ndim(zeta) == 0
    zeta = np.asarray(zeta, dtype=complex)
    o1 = sqrt_principal(p.rho1 * zeta + p.mu1)
    o2 = sqrt_principal(p.rho2 * zeta + p.mu2)
    e1 = np.sqrt(p.mu1) * o1 + p.mu2
    e2 = np.sqrt(p.mu2) * o2 + p.mu1
    return _out(zeta + 4.0 / p.rho_sum * e1 * e2 / (e1 + e2), scalar)


def k_of_zeta(zeta, p: FluidParams):
    scalar = np.ndim(zeta) == 0
    inv = np.asarray(inverse_k(zeta, p))
    if np.any(np.abs(inv) < TINY):
        raise DivisionBreakdown("1/k(zeta) underflowed")
    out = 1.0 / inv
    if scalar and np.isreal(zeta) and np.real(zeta) >= 0:
        return float(out.real)
    return _out(out, scalar)


def k_zero(p: FluidParams) -> float:
    """Closed form k(0) = (rho1 + rho2) / (2 (mu1 + mu2))."""
    return p.rho_sum / (2.0 * p.mu_sum)


def phi(zeta, p: FluidParams):
    """Phi(zeta) = zeta / k(zeta); real, nonnegative and increasing on [0, inf)."""
    scalar = np.ndim(zeta) == 0
    z = np.asarray(zeta, dtype=complex)
    out = z * np.asarray(inverse_k(z, p))
    if scalar and np.isreal(zeta) and np.real(zeta) >= 0:
        return float(out.real)
    return _out(out, scalar)
