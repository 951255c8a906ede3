"""Single Fourier-mode solve of the two-phase Stokes transmission problem.

For a mode e^{i tau x} the unknown profiles (v, w, pi)(y) solve, in each phase,

    rho lam v - mu (v'' - tau^2 v) + i tau pi = 0
    rho lam w - mu (w'' - tau^2 w) + pi'      = 0
    i tau v + w' = 0

with [[v]] = [[w]] = 0, -[[mu (v' + i tau w)]] = 0 and
-2 [[mu w']] + [[pi]] = (-sigma tau^2 + [[rho]] g) h at y = 0.  Phase 1 is
y < 0, phase 2 is y > 0, [[f]] = f(0+) - f(0-).

Decaying solutions, with q_j = omega_j / sqrt(mu_j) = sqrt(tau^2 + rho_j lam / mu_j):

    y < 0:  w = A1 e^{tau y} + B1 e^{q1 y},   pi = P1 e^{tau y},   rho1 lam A1 + tau P1 = 0
    y > 0:  w = A2 e^{-tau y} + B2 e^{-q2 y}, pi = P2 e^{-tau y},  rho2 lam A2 - tau P2 = 0

and v = i w' / tau.  Unknown order everywhere: (A1, B1, A2, B2, P1, P2).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import dispersion
from .errors import DegenerateInput, NoConvergence, OutOfBand, SingularSystem
from .params import FluidParams
from .symbol import sqrt_principal

COND_LIMIT = 1e12

ROW_LABELS = (
    "[[w]] = 0",
    "[[v]] = 0 (times i tau)",
    "tangential stress jump (divided by i, times tau)",
    "normal stress jump",
    "phase-1 pressure/velocity closure",
    "phase-2 pressure/velocity closure",
)


@dataclass(frozen=True)
class TransmissionSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    labels: tuple = ROW_LABELS


def decay_rates(lam, tau, p: FluidParams):
    q1 = sqrt_principal(tau * tau + p.rho1 * lam / p.mu1)
    q2 = sqrt_principal(tau * tau + p.rho2 * lam / p.mu2)
    return complex(q1), complex(q2)


def _rows(lam, tau, p, q1, q2):
    t2 = tau * tau
    m1, m2 = p.mu1, p.mu2
    # rows written so every entry is real for real lam > 0
    return np.array([
        [-1, -1, 1, 1, 0, 0],
        [tau, q1, tau, q2, 0, 0],
        [-2 * m1 * t2, -m1 * (q1 * q1 + t2), 2 * m2 * t2, m2 * (q2 * q2 + t2), 0, 0],
        [2 * m1 * tau, 2 * m1 * q1, 2 * m2 * tau, 2 * m2 * q2, -1, 1],
        [p.rho1 * lam, 0, 0, 0, tau, 0],
        [0, 0, p.rho2 * lam, 0, 0, -tau],
    ], dtype=complex)


def forcing(tau, p: FluidParams):
    """Normal-stress datum per unit height: -sigma tau^2 + [[rho]] g."""
    return -p.sigma * tau * tau + p.jump() * p.gamma_a


def transmission_system(lam, tau, h_amp, p: FluidParams) -> TransmissionSystem:
    lam = complex(lam)
    q1, q2 = decay_rates(lam, tau, p)
    rhs = np.zeros(6, dtype=complex)
    rhs[3] = forcing(tau, p) * h_amp
    return TransmissionSystem(_rows(lam, tau, p, q1, q2), rhs)


def _check_inputs(lam, tau, p):
    if tau <= 0:
        raise DegenerateInput("mode solve needs tau > 0")
    if lam == 0:
        raise DegenerateInput("lambda = 0 gives the confluent basis q_j = tau (not supported)")
    q1, q2 = decay_rates(lam, tau, p)
    if q1.real <= 0 or q2.real <= 0:
        raise DegenerateInput(f"lambda={lam} puts a radicand on the branch cut")
    return q1, q2


def _equilibrated_cond(m):
    r = m / np.abs(m).max(axis=1, keepdims=True)
    c = r / np.abs(r).max(axis=0, keepdims=True)
    return np.linalg.cond(c)


@dataclass(frozen=True)
class ModeProfile:
    tau: float
    lam: complex
    coeffs_lower: np.ndarray  # (A1, B1)
    coeffs_upper: np.ndarray  # (A2, B2)
    pressure_coeffs: np.ndarray  # (P1, P2)
    h_amp: complex
    q1: complex
    q2: complex

    def evaluate(self, y):
        """(v, w, pi) at the points y (y < 0 phase 1, y > 0 phase 2)."""
        y = np.asarray(y, dtype=float)
        t = self.tau
        a1, b1 = self.coeffs_lower
        a2, b2 = self.coeffs_upper
        p1, p2 = self.pressure_coeffs
        low = y < 0
        yl = np.where(low, y, 0.0)
        yu = np.where(low, 0.0, y)
        el, ql = np.exp(t * yl), np.exp(self.q1 * yl)
        eu, qu = np.exp(-t * yu), np.exp(-self.q2 * yu)
        w = np.where(low, a1 * el + b1 * ql, a2 * eu + b2 * qu)
        v = np.where(low, 1j * (a1 * el + self.q1 / t * b1 * ql),
                     -1j * (a2 * eu + self.q2 / t * b2 * qu))
        pi = np.where(low, p1 * el, p2 * eu)
        return v, w, pi

    def magnitudes(self, y):
        """Moduli at which v, w, pi and their y-derivatives are assembled.

        Sums of |coefficient| * |exponential| per term; near confluence
        (q_j close to tau) the two amplitudes nearly cancel and these exceed
        the field itself by the cancellation factor.
        """
        y = np.asarray(y, dtype=float)
        t = self.tau
        low = y < 0
        a1, b1 = np.abs(self.coeffs_lower)
        a2, b2 = np.abs(self.coeffs_upper)
        p1, p2 = np.abs(self.pressure_coeffs)
        yl = np.where(low, y, 0.0)
        yu = np.where(low, 0.0, y)
        el, ql = np.exp(t * yl), np.abs(np.exp(self.q1 * yl))
        eu, qu = np.exp(-t * yu), np.abs(np.exp(-self.q2 * yu))
        a, b = np.where(low, a1, a2), np.where(low, b1, b2)
        e, qe = np.where(low, el, eu), np.where(low, ql, qu)
        q = np.where(low, abs(self.q1), abs(self.q2))
        pe = np.where(low, p1 * el, p2 * eu)
        out = {}
        for k in range(4):
            # k-th derivative of w; v carries one extra factor q/tau
            out[f"w{k}"] = a * t**k * e + b * q**k * qe
            out[f"v{k}"] = a * t**k * e + b * q ** (k + 1) / t * qe
        out["pi0"] = pe
        out["pi1"] = t * pe
        return out

    def traces(self):
        """One-sided values and y-derivatives at the interface, as dicts per phase."""
        t = self.tau
        a1, b1 = self.coeffs_lower
        a2, b2 = self.coeffs_upper
        p1, p2 = self.pressure_coeffs
        q1, q2 = self.q1, self.q2
        lower = {"v": 1j * (a1 + q1 / t * b1), "w": a1 + b1, "pi": p1,
                 "dv": 1j * (t * a1 + q1 * q1 / t * b1), "dw": t * a1 + q1 * b1}
        upper = {"v": -1j * (a2 + q2 / t * b2), "w": a2 + b2, "pi": p2,
                 "dv": 1j * (t * a2 + q2 * q2 / t * b2), "dw": -t * a2 - q2 * b2}
        return lower, upper

    def write_csv(self, path, y):
        v, w, pi = self.evaluate(y)
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["y", "v_re", "v_im", "w_re", "w_im", "pi_re", "pi_im"])
            for row in zip(np.asarray(y, float), v, w, pi):
                yy, a, b, c = row
                out.writerow([f"{x:.17g}" for x in (yy, a.real, a.imag, b.real, b.imag,
                                                     c.real, c.imag)])


def solve_mode(lam, tau, h_amp, p: FluidParams) -> ModeProfile:
    """Decaying mode solution driven by an interface height amplitude h_amp."""
    lam = complex(lam)
    tau = float(tau)
    q1, q2 = _check_inputs(lam, tau, p)
    system = transmission_system(lam, tau, h_amp, p)
    cond = _equilibrated_cond(system.matrix)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystem(f"transmission matrix condition number {cond:.3e}")
    x = np.linalg.solve(system.matrix, system.rhs)
    return ModeProfile(tau, lam, x[0:2], x[2:4], x[4:6], complex(h_amp), q1, q2)


def _richardson(rule, h0, levels=4, order=2):
    """Richardson tableau for a difference rule with an even error expansion."""
    table = [rule(h0 / 2**k) for k in range(levels)]
    for m in range(1, levels):
        fac = 2.0 ** (order * m)
        table = [(fac * table[k + 1] - table[k]) / (fac - 1.0) for k in range(len(table) - 1)]
    return table[0]


def residual_check(profile: ModeProfile, p: FluidParams, n_samples=20) -> float:
    """Largest relative residual of the mode equations and interface conditions.

    Derivatives come from Richardson-extrapolated central differences of
    ``profile.evaluate``, so this check does not reuse the exponential ansatz.
    Each residual is divided by the larger of the sum of its term moduli and
    the moduli at which those terms are assembled (see ModeProfile.magnitudes).
    """
    t = profile.tau
    lam = profile.lam
    scale = max(t, abs(profile.q1), abs(profile.q2))
    h0 = 0.1 / scale
    span = np.linspace(0.1, 3.0, n_samples) / t + h0
    worst = 0.0

    def field(y, k):
        return profile.evaluate(y)[k]

    for sign, rho, mu in ((-1.0, p.rho1, p.mu1), (1.0, p.rho2, p.mu2)):
        y = sign * span
        v, w, pi = profile.evaluate(y)
        d2 = lambda k: _richardson(
            lambda h: (field(y + h, k) - 2 * field(y, k) + field(y - h, k)) / (h * h), h0)
        d1 = lambda k: _richardson(
            lambda h: (field(y + h, k) - field(y - h, k)) / (2 * h), h0)
        vpp, wpp, wp, pip = d2(0), d2(1), d1(1), d1(2)
        mag = profile.magnitudes(y)
        eqs = (
            ((rho * lam * v, -mu * (vpp - t * t * v), 1j * t * pi),
             abs(rho * lam) * mag["v0"] + mu * (mag["v2"] + t * t * mag["v0"]) + t * mag["pi0"]),
            ((rho * lam * w, -mu * (wpp - t * t * w), pip),
             abs(rho * lam) * mag["w0"] + mu * (mag["w2"] + t * t * mag["w0"]) + mag["pi1"]),
            ((1j * t * v, wp), t * mag["v0"] + mag["w1"]),
        )
        for terms, size in eqs:
            worst = max(worst, _relative(terms, size))

    lower, upper = profile.traces()
    ml = profile.magnitudes(np.array([-np.finfo(float).tiny]))
    mu_ = profile.magnitudes(np.array([0.0]))
    g = forcing(t, p) * profile.h_amp
    jumps = (
        ((upper["v"], -lower["v"]), mu_["v0"] + ml["v0"]),
        ((upper["w"], -lower["w"]), mu_["w0"] + ml["w0"]),
        ((-p.mu2 * (upper["dv"] + 1j * t * upper["w"]), p.mu1 * (lower["dv"] + 1j * t * lower["w"])),
         p.mu2 * (mu_["v1"] + t * mu_["w0"]) + p.mu1 * (ml["v1"] + t * ml["w0"])),
        ((-2 * p.mu2 * upper["dw"], 2 * p.mu1 * lower["dw"], upper["pi"], -lower["pi"], -g),
         2 * p.mu2 * mu_["w1"] + 2 * p.mu1 * ml["w1"] + mu_["pi0"] + ml["pi0"]),
    )
    for terms, size in jumps:
        worst = max(worst, _relative(terms, size))
    return float(worst)


def _relative(terms, floor=0.0):
    """|sum of terms| / max(sum of |terms|, floor), pointwise maximum."""
    terms = [np.asarray(x) for x in terms]
    total = np.abs(sum(terms))
    size = np.maximum(sum(np.abs(x) for x in terms), floor)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(size > 0, total / np.where(size > 0, size, 1.0), 0.0)
    return float(np.max(r))


def kinematic_matrix(lam, tau, p: FluidParams):
    """7x7 homogeneous system: transmission rows plus lam h = w(0), unknowns (..., h)."""
    lam = complex(lam)
    q1, q2 = decay_rates(lam, tau, p)
    m = np.zeros((7, 7), dtype=complex)
    m[:6, :6] = _rows(lam, tau, p, q1, q2)
    m[3, 6] = -forcing(tau, p)
    m[6, 0] = -1.0
    m[6, 1] = -1.0
    m[6, 6] = lam
    return m


def transmission_determinant(lam, tau, p: FluidParams):
    """Determinant of the 7x7 kinematic system; real for real lam > 0."""
    return complex(np.linalg.det(kinematic_matrix(lam, tau, p)))


def dispersion_from_profile(tau, p: FluidParams, tol=1e-15) -> float:
    """Real growth rate from the vanishing of the 7x7 determinant.

    The bracket is +-50% around the symbol-based growth rate; the root itself
    comes only from the determinant.
    """
    tau_star = dispersion.cutoff_wavenumber(p)
    if not 0.0 < tau < tau_star:
        raise OutOfBand(f"tau={tau!r} outside the unstable band (0, {tau_star!r})")
    guess = dispersion.growth_rate(tau, p)
    a, b = 0.5 * guess, 1.5 * guess
    f = lambda lam: transmission_determinant(lam, tau, p).real
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if np.sign(fa) == np.sign(fb):
        raise NoConvergence("determinant has no sign change in the bracket")
    return float(brentq(f, a, b, xtol=tol * guess, rtol=4 * np.finfo(float).eps, maxiter=200))


def pressure_split(f_hat, g0_hat, tau, y, p: FluidParams, kappa=0.0):
    """Density-scaled pressure pi/rho of the transmission problem for one mode.

    ``f_hat`` is the (tangential, normal) amplitude of a forcing plane wave
    f = f_hat e^{i (tau x + kappa y)}; a scalar is taken as the tangential
    component.  The result is pi1 + pi2 with

        pi1 = -i (tau f_v + kappa f_w) / (tau^2 + kappa^2) e^{i kappa y}   (grad pi1 = R f)
        pi2 = sign(y) e^{-tau |y|} g0 / (rho1 + rho2)                       (Poisson semigroup)

    so that [[rho pi2]] = g0 and [[d pi2 / dy]] = 0 across y = 0.
    """
    if tau <= 0:
        raise DegenerateInput("pressure split needs tau > 0")
    f = np.atleast_1d(np.asarray(f_hat, dtype=complex))
    f_v = f[0]
    f_w = f[1] if f.size > 1 else 0.0
    y = np.asarray(y, dtype=float)
    k2 = tau * tau + kappa * kappa
    pi1 = -1j * (tau * f_v + kappa * f_w) / k2 * np.exp(1j * kappa * y)
    side = np.where(np.signbit(y), -1.0, 1.0)
    pi2 = side * np.exp(-tau * np.abs(y)) * complex(g0_hat) / p.rho_sum
    out = pi1 + pi2
    return complex(out) if out.ndim == 0 else out
