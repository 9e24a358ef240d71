"""Laurent polynomials with exponents in (1/m)Z and per-variable restrictions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class RingViolation(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    """Variable names, common exponent denominator and allowed exponents.

    Variables listed in ``nat`` take exponents in N only; variables in
    ``integral`` take integer exponents (any sign). Every other variable may
    carry exponents in (1/m)Z.
    """

    names: tuple[str, ...]
    denom: int = 1
    nat: frozenset = frozenset()
    integral: frozenset = frozenset()

    def __post_init__(self):
        if self.denom < 1:
            raise ValueError("denominator must be >= 1")

    @property
    def k(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def check_exponent(self, e: tuple[int, ...]):
        m = self.denom
        for q, x in enumerate(e):
            name = self.names[q]
            if name in self.nat and x < 0:
                raise RingViolation(f"negative power of {name}")
            if (name in self.nat or name in self.integral) and x % m:
                raise RingViolation(f"fractional power of {name}")


class FracLaurentPoly:
    """Finite map exponent-numerators -> nonzero rational coefficient.

    An exponent tuple ``e`` stands for prod t_q^(e_q / denom).
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict | None = None, check: bool = True):
        self.ring = ring
        t = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                e = tuple(e)
                if len(e) != ring.k:
                    raise ValueError("exponent length does not match the ring")
                if check:
                    ring.check_exponent(e)
                t[e] = t.get(e, 0) + c
        self.terms = {e: c for e, c in t.items() if c}

    # construction
    @classmethod
    def const(cls, ring: Ring, c) -> "FracLaurentPoly":
        return cls(ring, {(0,) * ring.k: c})

    @classmethod
    def var(cls, ring: Ring, name: str, power=1) -> "FracLaurentPoly":
        e = [0] * ring.k
        p = Fraction(power) * ring.denom
        if p.denominator != 1:
            raise RingViolation(f"power {power} of {name} is not in (1/{ring.denom})Z")
        e[ring.index(name)] = int(p)
        return cls(ring, {tuple(e): 1})

    @classmethod
    def monomial(cls, ring: Ring, exps, c=1) -> "FracLaurentPoly":
        """``exps`` are true exponents (rationals), one per variable."""
        e = []
        for x in exps:
            v = Fraction(x) * ring.denom
            if v.denominator != 1:
                raise RingViolation(f"exponent {x} is not in (1/{ring.denom})Z")
            e.append(int(v))
        return cls(ring, {tuple(e): c})

    # protocol
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FracLaurentPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        return sorted(self.terms.items())

    def exponents(self, e) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.ring.denom) for x in e)

    def _same(self, other):
        if not isinstance(other, FracLaurentPoly):
            other = FracLaurentPoly.const(self.ring, other)
        if other.ring.k != self.ring.k or other.ring.denom != self.ring.denom:
            raise ValueError("polynomials live in different rings")
        return other

    def __add__(self, other):
        other = self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return FracLaurentPoly(self.ring, out, check=False)

    __radd__ = __add__

    def __neg__(self):
        return FracLaurentPoly(self.ring, {e: -c for e, c in self.terms.items()}, check=False)

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if isinstance(other, FracLaurentPoly):
            return poly_mul(self, other)
        c = Fraction(other)
        return FracLaurentPoly(self.ring, {e: c * v for e, v in self.terms.items()}, check=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FracLaurentPoly):
            raise TypeError("division by a polynomial is not supported")
        return self * (1 / Fraction(other))

    def __pow__(self, n):
        n = Fraction(n)
        if n.denominator == 1 and n >= 0:
            out = FracLaurentPoly.const(self.ring, 1)
            for _ in range(int(n)):
                out = out * self
            return out
        # negative or fractional powers: unit monomials only
        if len(self.terms) != 1 or next(iter(self.terms.values())) != 1:
            raise ValueError("negative or fractional powers need a unit monomial")
        (e,) = self.terms
        v = [x * n for x in e]
        if any(x.denominator != 1 for x in v):
            raise RingViolation(f"power {n} leaves (1/{self.ring.denom})Z")
        return FracLaurentPoly(self.ring, {tuple(int(x) for x in v): 1})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                f"{n}^{Fraction(x, self.ring.denom)}" for n, x in zip(self.ring.names, e) if x
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def to_json(self) -> list:
        out = []
        for e, c in self.items():
            out.append(
                {
                    "exp": {n: _fs(Fraction(x, self.ring.denom)) for n, x in zip(self.ring.names, e) if x},
                    "coeff": _fs(c),
                }
            )
        return out


def _fs(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def poly_mul(f: FracLaurentPoly, g: FracLaurentPoly) -> FracLaurentPoly:
    g = f._same(g)
    out: dict = {}
    for ea, ca in f.terms.items():
        for eb, cb in g.terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    for e in out:
        f.ring.check_exponent(e)
    return FracLaurentPoly(f.ring, out, check=False)


def poly_partial(f: FracLaurentPoly, name: str) -> FracLaurentPoly:
    q = f.ring.index(name)
    m = f.ring.denom
    out: dict = {}
    for e, c in f.terms.items():
        if not e[q]:
            continue
        e2 = list(e)
        e2[q] -= m
        e2 = tuple(e2)
        f.ring.check_exponent(e2)
        out[e2] = out.get(e2, 0) + c * Fraction(e[q], m)
    return FracLaurentPoly(f.ring, out, check=False)


def euler(f: FracLaurentPoly, name: str) -> FracLaurentPoly:
    """t * d/dt along ``name``; multiplies each term by its exponent."""
    q = f.ring.index(name)
    m = f.ring.denom
    return FracLaurentPoly(
        f.ring, {e: c * Fraction(e[q], m) for e, c in f.terms.items() if e[q]}, check=False
    )
