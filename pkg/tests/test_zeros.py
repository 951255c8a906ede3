import math

import numpy as np
import pytest

from conftest import random_params
from rtstab import FluidParams
from rtstab.dispersion import cutoff_wavenumber, growth_rate
from rtstab.errors import DegenerateInput, ZeroOnBoundary
from rtstab.symbol import symbol_s
from rtstab.zeros import (Rectangle, count_zeros_rhp, default_region, locate_zeros,
                          rightmost_root, winding)


def test_rectangle_geometry():
    r = Rectangle(0.0, 2.0, -1.0, 1.0)
    assert r.width == 2 and r.height == 2 and r.center == 1 + 0j
    assert r.contains(1.5 + 0.5j) and not r.contains(3 + 0j)
    a, b = r.split_re(0.25)
    assert a.re_max == b.re_min == 0.5
    assert len(r.quadrants(0.5)) == 4
    with pytest.raises(DegenerateInput):
        Rectangle(1.0, 1.0, 0.0, 1.0)


@pytest.mark.parametrize("roots", [[0.3 + 0.1j], [0.2, -0.4j, 0.1 + 0.3j], []])
def test_winding_polynomial(roots):
    rect = Rectangle(-1.01, 1.03, -0.97, 1.02)
    func = lambda z: (np.prod([z - r for r in roots], axis=0) * np.ones_like(z), np.ones(z.shape))
    w, res, _ = winding(func, rect)
    assert round(w) == len(roots) and res < 0.1


def test_count_unit_band(unit):
    for tau in (0.05, 0.46, 1.2, 1.41):
        zc = count_zeros_rhp(tau, unit)
        assert zc.count == 1 and zc.winding_residual < 0.1


@pytest.mark.parametrize("tau", [math.sqrt(2.0) * 1.001, 2.0, 10.0])
def test_count_above_cutoff(unit, tau):
    assert count_zeros_rhp(tau, unit).count == 0


@pytest.mark.parametrize("p", [FluidParams(3, 1, 1, 1, 1, 1), FluidParams(2, 2, 0.1, 5, 1, 1),
                               FluidParams(3, 1, 0.01, 0.02, 1, 1)])
def test_count_stable(p):
    for tau in (0.01, 0.1, 1.0, 10.0):
        assert count_zeros_rhp(tau, p).count == 0


def test_count_stable_under_height_doubling(unit):
    base = default_region(0.7, unit)
    tall = Rectangle(base.re_min, base.re_max, 2 * base.im_min, 2 * base.im_max)
    assert count_zeros_rhp(0.7, unit, base).count == count_zeros_rhp(0.7, unit, tall).count == 1


def test_locate_matches_growth_rate(unit):
    tau = 0.8
    boxes = locate_zeros(tau, unit, default_region(tau, unit), 1e-7)
    assert len(boxes) == 1
    box, n = boxes[0]
    assert n == 1
    assert abs(box.center - growth_rate(tau, unit)) <= 1e-6


def test_zero_on_boundary(unit):
    lam = growth_rate(0.5, unit)
    with pytest.raises(ZeroOnBoundary):
        count_zeros_rhp(0.5, unit, Rectangle(lam, lam + 1, -1, 1))


def test_region_beyond_strip(unit):
    with pytest.raises(DegenerateInput):
        count_zeros_rhp(1.0, unit, Rectangle(-10.0, 1.0, -1.0, 1.0))


@pytest.mark.parametrize("seed", range(4))
def test_rightmost_matches_growth_rate(seed):
    p = random_params(np.random.default_rng(seed))
    tau = 0.3 * cutoff_wavenumber(p)
    root = rightmost_root(tau, p)
    lam = growth_rate(tau, p)
    assert abs(root.real - lam) <= 1e-8 * lam
    assert abs(root.imag) <= 1e-9 * abs(root.real)


def test_rightmost_above_cutoff(unit):
    root = rightmost_root(1.01 * math.sqrt(2.0), unit)
    assert root is None or root.real < 0


def test_rightmost_conjugate_pair():
    # above the cutoff, moderate viscosity: an oscillatory decaying pair
    p = FluidParams(1, 1.5, 0.2, 0.3, 1, 1)
    root = rightmost_root(2.0, p)
    assert root.real < 0 and root.imag > 0
    assert abs(symbol_s(root, 2.0, p)) <= 1e-12 * max(abs(root), 1.0)
    assert abs(symbol_s(root.conjugate(), 2.0, p)) <= 1e-12 * max(abs(root), 1.0)


def test_rightmost_floor_validation(unit):
    with pytest.raises(DegenerateInput):
        rightmost_root(1.0, unit, floor=-100.0)
