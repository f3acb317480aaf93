"""Exact pair correlations, additive energy and continued fractions for (a_n alpha) mod 1."""

from ._metricpc import (
    BudgetError,
    ConfigError,
    Error,
    PrecisionError,
    additive_energy,
    cf_expand,
    cli,
    fourier_C,
    frac_mul,
    mj,
    moduli,
    pair_correlation,
    sample_alpha,
    sequence,
    summarize,
)

__all__ = [
    "BudgetError",
    "ConfigError",
    "Error",
    "PrecisionError",
    "additive_energy",
    "cf_expand",
    "cli",
    "fourier_C",
    "frac_mul",
    "mj",
    "moduli",
    "pair_correlation",
    "sample_alpha",
    "sequence",
    "summarize",
]
