"""Zero counting for s(., tau) in rectangles of the complex lambda-plane.

The count is the winding number of the cleared symbol s*D around the
rectangle, obtained by accumulating unwrapped phase increments along an
adaptively refined boundary polygon.  No derivatives of s are taken.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dispersion, symbol
from .errors import ContourTooCoarse, DegenerateInput, ZeroOnBoundary
from .params import FluidParams

KAPPA = 0.9
MAX_PHASE_STEP = math.pi / 8
MAX_POINTS = 1 << 17
BOUNDARY_TOL = 1e-10
# off-centre split fractions, so subdivision lines avoid the symmetry axis Im = 0
SPLITS = (0.5 + 0.0137, 0.5 - 0.0291, 0.5 + 0.0419, 0.5 - 0.0533)


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise DegenerateInput(f"empty rectangle {self}")

    @property
    def width(self):
        return self.re_max - self.re_min

    @property
    def height(self):
        return self.im_max - self.im_min

    @property
    def center(self):
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def diameter(self):
        return math.hypot(self.width, self.height)

    def contains(self, z):
        return self.re_min <= z.real <= self.re_max and self.im_min <= z.imag <= self.im_max

    def corners(self):
        return (complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max))

    def split_re(self, frac):
        x = self.re_min + frac * self.width
        return (Rectangle(self.re_min, x, self.im_min, self.im_max),
                Rectangle(x, self.re_max, self.im_min, self.im_max))

    def split_im(self, frac):
        y = self.im_min + frac * self.height
        return (Rectangle(self.re_min, self.re_max, self.im_min, y),
                Rectangle(self.re_min, self.re_max, y, self.im_max))

    def quadrants(self, frac):
        left, right = self.split_re(frac)
        return left.split_im(frac) + right.split_im(frac)

    def to_dict(self):
        return {"re_min": self.re_min, "re_max": self.re_max,
                "im_min": self.im_min, "im_max": self.im_max}


@dataclass(frozen=True)
class ZeroCount:
    region: Rectangle
    count: int
    winding_residual: float
    min_modulus: float  # relative to the cancelling term magnitudes

    def to_dict(self):
        return {"region": self.region.to_dict(), "count": self.count,
                "winding_residual": self.winding_residual,
                "min_modulus": self.min_modulus}


def rate_scale(tau, p: FluidParams) -> float:
    """Upper size estimate for zeros of s(., tau).

    Inertial balance gives |lambda|^2 ~ |N| tau / (rho1+rho2), viscous balance
    |lambda| ~ |N| / (2 (mu1+mu2) tau), with N = sigma tau^2 - [[rho]] g.  On
    the unstable band the real root is bounded by the smaller of the two.
    """
    n = abs(p.sigma * tau * tau - p.jump() * p.gamma_a)
    inertial = math.sqrt(n * tau / p.rho_sum)
    viscous = n / (2.0 * p.mu_sum * tau)
    out = inertial + viscous
    if out == 0.0:
        # tau == tau*: fall back to the capillary-viscous rate
        out = p.sigma * tau / p.mu_sum
    return out


def default_region(tau, p: FluidParams, height_factor=5.0) -> Rectangle:
    """[delta0, 10 S] x [-h S, h S] with S = lambda_inf on unstable configurations."""
    s = rate_scale(tau, p)
    if p.is_heavy_on_top():
        s = max(s, dispersion.max_growth(p, tol=1e-6).lambda_inf)
    return Rectangle(1e-8 * s, 10.0 * s, -height_factor * s, height_factor * s)


def _boundary(rect, n):
    """Closed polygon (last point == first) with n points per edge."""
    t = np.linspace(0.0, 1.0, n, endpoint=False)
    c = rect.corners()
    edges = [c[k] + t * (c[(k + 1) % 4] - c[k]) for k in range(4)]
    pts = np.concatenate(edges)
    return np.append(pts, pts[0])


def winding(func, rect, n0=32):
    """Winding number of func around rect by adaptive phase accumulation.

    ``func`` returns (values, reference magnitudes); the reference is the size
    of the terms that cancel at a zero, used for the on-boundary test.

    A boundary segment is split until the principal-value phase increment
    across it is below MAX_PHASE_STEP; the result is then re-checked on a
    uniformly doubled polygon.  Returns (winding, residual, min relative
    modulus on the boundary).
    """
    z = _boundary(rect, n0)
    f, ref = func(z)
    _check_boundary(f, ref, rect)
    while True:
        dphi = np.angle(f[1:] / f[:-1])
        bad = np.abs(dphi) > MAX_PHASE_STEP
        if not bad.any():
            break
        if z.size + bad.sum() > MAX_POINTS:
            raise ContourTooCoarse(f"phase tracking needs more than {MAX_POINTS} points on {rect}")
        mid = 0.5 * (z[:-1][bad] + z[1:][bad])
        fm, rm = func(mid)
        _check_boundary(fm, rm, rect)
        idx = np.nonzero(bad)[0] + 1
        z = np.insert(z, idx, mid)
        f = np.insert(f, idx, fm)
        ref = np.insert(ref, idx, rm)

    w = np.sum(np.angle(f[1:] / f[:-1])) / (2.0 * math.pi)

    # independent check on the uniformly refined polygon
    mid = 0.5 * (z[:-1] + z[1:])
    fm, rm = func(mid)
    _check_boundary(fm, rm, rect)
    ff = np.empty(2 * f.size - 1, dtype=complex)
    ff[0::2] = f
    ff[1::2] = fm
    w2 = np.sum(np.angle(ff[1:] / ff[:-1])) / (2.0 * math.pi)
    residual = max(abs(w - round(w)), abs(w2 - w))
    if round(w) != round(w2) or residual >= 0.1:
        raise ContourTooCoarse(f"winding number unstable under refinement ({w} vs {w2})")
    rel = min(float(np.min(np.abs(f) / ref)), float(np.min(np.abs(fm) / rm)))
    return w, residual, rel


def _check_boundary(f, ref, rect):
    if np.any(np.abs(f) < BOUNDARY_TOL * ref):
        raise ZeroOnBoundary(f"symbol (nearly) vanishes on the boundary of {rect}")


def _cleared(tau, p):
    """s*D together with |lambda D| + |N|, the magnitudes that cancel at a zero."""
    n = p.sigma * tau * tau - p.jump() * p.gamma_a

    def func(z):
        f = np.asarray(symbol.cleared_symbol(z, tau, p), dtype=complex)
        ref = np.abs(f - n) + abs(n)
        return f, np.maximum(ref, 1e-300)

    return func


def _analytic_floor(tau, p):
    return KAPPA * p.branch_point(tau)


def count_zeros_rhp(tau, p: FluidParams, region: Rectangle | None = None) -> ZeroCount:
    """Number of zeros of s(., tau) inside ``region`` (argument principle)."""
    tau = float(tau)
    if tau <= 0:
        raise DegenerateInput("zero counting needs tau > 0")
    if region is None:
        region = default_region(tau, p)
    if region.re_min <= _analytic_floor(tau, p):
        raise DegenerateInput(
            f"region reaches Re(lambda)={region.re_min} beyond the analyticity strip "
            f"(> {_analytic_floor(tau, p)})")
    w, residual, mn = winding(_cleared(tau, p), region)
    return ZeroCount(region, int(round(w)), float(residual), mn)


def _count(func, rect):
    return int(round(winding(func, rect)[0]))


def _split_counted(func, rect, how):
    """Split rect (by 're', 'im' or 'quad') at an off-centre line that avoids zeros."""
    last = None
    for frac in SPLITS:
        pieces = {"re": rect.split_re, "im": rect.split_im, "quad": rect.quadrants}[how](frac)
        try:
            return [(r, _count(func, r)) for r in pieces]
        except ZeroOnBoundary as exc:
            last = exc
    raise last


def locate_zeros(tau, p: FluidParams, region: Rectangle, size):
    """Quadrant subdivision of region down to boxes of diameter <= size.

    Returns a list of (box, count) for the boxes that contain zeros.
    """
    func = _cleared(tau, p)
    total = count_zeros_rhp(tau, p, region).count
    todo = [(region, total)]
    found = []
    while todo:
        rect, n = todo.pop()
        if n == 0:
            continue
        if rect.diameter <= size:
            found.append((rect, n))
            continue
        children = _split_counted(func, rect, "quad")
        if sum(c for _, c in children) != n:
            raise ContourTooCoarse(f"subdivision of {rect} lost zeros")
        todo.extend(children)
    return found


def _polish(func, z0, rect, tol):
    """Secant refinement of a simple zero isolated in rect; None on failure."""
    scale = max(rect.diameter, 1e-300)
    z1 = z0 + 1e-3 * scale
    f0, f1 = func(z0), func(z1)
    for _ in range(60):
        if f1 == f0:
            break
        z2 = z1 - f1 * (z1 - z0) / (f1 - f0)
        z0, f0 = z1, f1
        z1, f1 = z2, func(z2)
        if abs(z1 - z0) <= tol * max(abs(z1), scale):
            break
    grown = Rectangle(rect.re_min - rect.width, rect.re_max + rect.width,
                      rect.im_min - rect.height, rect.im_max + rect.height)
    if grown.contains(z1) and np.isfinite(z1):
        return complex(z1)
    return None


def rightmost_root(tau, p: FluidParams, floor=None, bound=None, tol=1e-13):
    """Zero of s(., tau) with the largest real part in the analyticity strip.

    The strip is {floor <= Re lambda <= bound, |Im lambda| <= bound}.  The
    default floor is 0.9 times the branch point -min_j(mu_j tau^2 / rho_j).
    Returns None when the strip holds no zero.  Between conjugate zeros the
    one with Im >= 0 is returned.
    """
    tau = float(tau)
    if tau <= 0:
        raise DegenerateInput("rightmost_root needs tau > 0")
    limit = _analytic_floor(tau, p)
    if floor is None:
        floor = limit
    elif floor < limit:
        raise DegenerateInput(f"floor {floor} leaves the analyticity strip (>= {limit})")
    if bound is None:
        bound = 10.0 * rate_scale(tau, p)
    func = _cleared(tau, p)
    f = lambda z: symbol.cleared_symbol(z, tau, p)

    rect = Rectangle(floor, bound, -bound, bound)
    n = _count(func, rect)
    if n == 0:
        return None

    scale = max(bound, abs(floor))
    coarse = 1e-3 * scale
    # narrow the real-part range, always keeping the rightmost zero
    while rect.width > coarse:
        left, right = _split_counted(func, rect, "re")
        rect, n = right if right[1] > 0 else left
    # isolate one zero in the imaginary direction, preferring Im >= 0
    while n > 1 or rect.height > coarse:
        low, high = _split_counted(func, rect, "im")
        if high[1] > 0:
            rect, n = high
        else:
            rect, n = low
        if rect.height < tol * scale:
            break

    root = _polish(f, rect.center, rect, tol) if n == 1 else None
    if root is not None and abs(f(root)) <= 1e-9 * max(abs(f(rect.center)), 1e-300):
        return root
    # polishing failed: bisect the isolating box down to tolerance
    while rect.diameter > tol * scale:
        pieces = _split_counted(func, rect, "quad")
        rect, n = max((pc for pc in pieces if pc[1] > 0), key=lambda pc: pc[0].re_max)
    return rect.center
