"""Exact structure-constant engine for Block-type Lie algebras and superalgebras."""

ENGINE_VERSION = "0.1.0"

from blockforge.config import AlgebraClass, AlgebraConfig, Flag, load_config, validate_config
from blockforge.algebra import BasisKey, Element, SuperElement, Window
from blockforge.brackets import BracketKernel

__all__ = [
    "ENGINE_VERSION",
    "AlgebraClass",
    "AlgebraConfig",
    "Flag",
    "load_config",
    "validate_config",
    "BasisKey",
    "Element",
    "SuperElement",
    "Window",
    "BracketKernel",
]
