"""Brackets written as compositions of products and derivations.

This is the second evaluation path: it shares only ``multiply`` and
``derivation`` with the engine and is used to cross-check the expanded
structure constants.
"""

from __future__ import annotations

from fractions import Fraction

from blockforge.algebra import Element, SuperElement, derivation, multiply, shift_alpha
from blockforge.config import AlgebraClass, AlgebraConfig


def _d(cfg, p, u):
    return derivation(cfg, p, u)


def poisson(cfg: AlgebraConfig, u: Element, v: Element, p: int = 1, q: int = 2) -> Element:
    """d_p(u) d_q(v) - d_p(v) d_q(u)."""
    return multiply(_d(cfg, p, u), _d(cfg, q, v)) - multiply(_d(cfg, p, v), _d(cfg, q, u))


def witt(cfg: AlgebraConfig, u: Element, v: Element, p: int = 1) -> Element:
    """u d_p(v) - d_p(u) v."""
    return multiply(u, _d(cfg, p, v)) - multiply(_d(cfg, p, u), v)


def block0(cfg: AlgebraConfig, u: Element, v: Element) -> Element:
    # phi(alpha) phi_1(beta) - phi(beta) phi_1(alpha) + phi(alpha - beta)
    return poisson(cfg, u, v, 1, 2) + multiply(_d(cfg, 1, u), v) - multiply(u, _d(cfg, 1, v))


def class1(cfg: AlgebraConfig, u: Element, v: Element) -> Element:
    return poisson(cfg, u, v) + witt(cfg, u, v)


def class2(cfg: AlgebraConfig, u: Element, v: Element) -> Element:
    a0 = cfg.alpha0
    A3, A4 = cfg.phi_at(3, a0), cfg.phi_at(4, a0)
    return (
        shift_alpha(poisson(cfg, u, v, 1, 2), a0)
        + poisson(cfg, u, v, 3, 4)
        + witt(cfg, u, v, 4).scale(A3)
        - witt(cfg, u, v, 3).scale(A4)
    )


def class3_even_even(cfg: AlgebraConfig, u: Element, v: Element) -> Element:
    return poisson(cfg, u, v) + witt(cfg, u, v).scale(cfg.epsilon)


def class3_odd_odd(cfg: AlgebraConfig, u: Element, v: Element) -> Element:
    return shift_alpha(multiply(u, v), cfg.alpha0)


def class3_even_odd(cfg: AlgebraConfig, u: Element, v: Element) -> Element:
    """Operator reading of the even-odd bracket that matches its expansion.

    (d1u d2v - d1v d2u) + eps (u d1v - d1u v / 2)
      + (phi2(a0) d1u v + phi1(a0) (eps u v - d2u v)) / 2
    """
    eps = cfg.epsilon
    a0 = cfg.alpha0
    half = Fraction(1, 2)
    uv = multiply(u, v)
    d1u_v = multiply(_d(cfg, 1, u), v)
    d2u_v = multiply(_d(cfg, 2, u), v)
    return (
        poisson(cfg, u, v)
        + (multiply(u, _d(cfg, 1, v)) - d1u_v.scale(half)).scale(eps)
        + d1u_v.scale(cfg.phi_at(2, a0) * half)
        + (uv.scale(eps) - d2u_v).scale(cfg.phi_at(1, a0) * half)
    )


def superbracket(cfg: AlgebraConfig, U: SuperElement, V: SuperElement) -> SuperElement:
    even = class3_even_even(cfg, U.even, V.even) + class3_odd_odd(cfg, U.odd, V.odd)
    odd = class3_even_odd(cfg, U.even, V.odd) - class3_even_odd(cfg, V.even, U.odd)
    return SuperElement(even, odd)


def bracket(cfg: AlgebraConfig, u, v):
    if cfg.cls is AlgebraClass.BLOCK0:
        return block0(cfg, u, v)
    if cfg.cls is AlgebraClass.CLASS_I:
        return class1(cfg, u, v)
    if cfg.cls is AlgebraClass.CLASS_II:
        return class2(cfg, u, v)
    return superbracket(cfg, u, v)
