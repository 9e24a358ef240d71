"""Polynomial realizations of the example algebras, used as an independent oracle."""

from blockforge.realizations.check import cross_check, realized_bracket
from blockforge.realizations.poly import FracLaurentPoly, Ring, RingViolation, poly_mul, poly_partial
from blockforge.realizations.spec import (
    RealizationSpec,
    SpecError,
    load_spec,
    shipped_spec,
    shipped_spec_names,
)

__all__ = [
    "FracLaurentPoly",
    "RealizationSpec",
    "Ring",
    "RingViolation",
    "SpecError",
    "cross_check",
    "load_spec",
    "poly_mul",
    "poly_partial",
    "realized_bracket",
    "shipped_spec",
    "shipped_spec_names",
]
