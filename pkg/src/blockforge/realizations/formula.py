"""Tiny arithmetic-expression evaluator for bracket formulas and parameters.

Expressions use Python syntax restricted to numbers, names, + - * / and **.
In bracket formulas ``f`` and ``g`` are the arguments, ``f_t1`` is the
partial derivative of ``f`` along ``t1``, and variable names stand for the
ring generators. Parameters (``m``, ``n``, ...) evaluate to rationals.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Callable

from blockforge.realizations.poly import FracLaurentPoly, Ring, poly_partial


class FormulaError(ValueError):
    pass


_PARTIAL = re.compile(r"^([fg])_([A-Za-z]\w*)$")


def _eval(node, lookup: Callable[[str], object]):
    if isinstance(node, ast.Expression):
        return _eval(node.body, lookup)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        return lookup(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, lookup)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _eval(node.left, lookup), _eval(node.right, lookup)
        op = node.op
        if isinstance(op, ast.Add):
            return a + b
        if isinstance(op, ast.Sub):
            return a - b
        if isinstance(op, ast.Mult):
            return a * b
        if isinstance(op, ast.Div):
            if isinstance(b, FracLaurentPoly):
                raise FormulaError("division by a polynomial")
            return a / b
        if isinstance(op, ast.Pow):
            if isinstance(b, FracLaurentPoly):
                raise FormulaError("exponent must be a number")
            return a**b
    raise FormulaError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse(text: str) -> ast.Expression:
    try:
        return ast.parse(text, mode="eval")
    except SyntaxError as e:
        raise FormulaError(f"cannot parse {text!r}: {e.msg}") from None


def eval_number(text, params: dict) -> Fraction:
    """Rational value of a parameter expression such as ``"1/m"`` or ``"m*n"``."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)

    def lookup(name):
        if name in params:
            return Fraction(params[name])
        raise FormulaError(f"unknown parameter {name!r}")

    v = _eval(parse(str(text)), lookup)
    if isinstance(v, FracLaurentPoly):
        raise FormulaError("expected a number")
    return Fraction(v)


def eval_poly(text: str, ring: Ring, params: dict, f: FracLaurentPoly, g: FracLaurentPoly) -> FracLaurentPoly:
    """Evaluate a bracket formula on the arguments f and g."""
    cache: dict = {}

    def lookup(name):
        if name in cache:
            return cache[name]
        if name == "f":
            v = f
        elif name == "g":
            v = g
        elif _PARTIAL.match(name):
            arg, var = _PARTIAL.match(name).groups()
            v = poly_partial(f if arg == "f" else g, var)
        elif name in ring.names:
            v = FracLaurentPoly.var(ring, name)
        elif name in params:
            v = Fraction(params[name])
        else:
            raise FormulaError(f"unknown name {name!r}")
        cache[name] = v
        return v

    v = _eval(parse(text), lookup)
    if not isinstance(v, FracLaurentPoly):
        v = FracLaurentPoly.const(ring, v)
    return v
