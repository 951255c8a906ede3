"""Rayleigh-Taylor dispersion toolkit for two viscous fluids separated by an interface."""

__version__ = "0.1.0"

from .params import FluidParams
from .symbol import evaluate_symbol, k_of_zeta, k_zero, phi, psi, sqrt_principal, symbol_s
from .dispersion import (
    asymptotic_constants,
    cutoff_wavenumber,
    dispersion_curve,
    growth_rate,
    max_growth,
)
from .zeros import Rectangle, count_zeros_rhp, locate_zeros, rightmost_root
from .mode_profile import dispersion_from_profile, pressure_split, residual_check, solve_mode
from .grid import GridField, GridSpec
from .witness import apply_symbol_multiplier, build_heps, build_window, witness_residual
from .simulator import SimulationRun, build_growth_table, diagnostics, evolve

__all__ = [
    "FluidParams", "evaluate_symbol", "k_of_zeta", "k_zero", "phi", "psi", "sqrt_principal",
    "symbol_s", "asymptotic_constants", "cutoff_wavenumber", "dispersion_curve",
    "growth_rate", "max_growth", "Rectangle", "count_zeros_rhp", "locate_zeros",
    "rightmost_root", "dispersion_from_profile", "pressure_split", "residual_check",
    "solve_mode", "GridField", "GridSpec", "apply_symbol_multiplier", "build_heps",
    "build_window", "witness_residual", "SimulationRun", "build_growth_table",
    "diagnostics", "evolve",
]
