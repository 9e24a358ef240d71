"""Sparse exact elements of A_n: product, derivations, grading and windows."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple

from blockforge.config import AlgebraConfig, ConfigError, parse_rational


class BasisKey(NamedTuple):
    alpha: tuple[int, ...]
    idx: tuple[int, ...]

    def __repr__(self):
        return f"x^({list(self.alpha)},{list(self.idx)})"


def make_key(cfg: AlgebraConfig, alpha, idx=None) -> BasisKey:
    """Validated key; raises ValueError if idx is out of the profile."""
    alpha = tuple(int(a) for a in alpha)
    idx = tuple(int(i) for i in idx) if idx is not None else (0,) * cfg.n
    if len(alpha) != cfg.rank or len(idx) != cfg.n:
        raise ValueError(f"key shape mismatch: {alpha}, {idx}")
    for p, i in enumerate(idx, 1):
        if i < 0 or (i and not cfg.full(p)):
            raise ValueError(f"index {idx} not allowed by profile")
    return BasisKey(alpha, idx)


def _coeff(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Element:
    """Finite rational combination of basis keys; treated as immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[BasisKey, object] | None = None):
        t = {}
        if terms:
            for k, c in terms.items():
                c = _coeff(c)
                if c:
                    t[k] = c
        self.terms: dict[BasisKey, Fraction] = t
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Element":
        # terms already canonical (no zeros)
        e = cls.__new__(cls)
        e.terms = terms
        e._hash = None
        return e

    @classmethod
    def basis(cls, key: BasisKey, c=1) -> "Element":
        return cls({key: c})

    @classmethod
    def one(cls, cfg: AlgebraConfig) -> "Element":
        return cls({BasisKey((0,) * cfg.rank, (0,) * cfg.n): 1})

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[BasisKey, Fraction]]:
        return iter(self.items())

    def items(self) -> list[tuple[BasisKey, Fraction]]:
        return sorted(self.terms.items())

    def keys(self) -> list[BasisKey]:
        return sorted(self.terms)

    def coeff(self, key: BasisKey) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Element._raw(out)

    def __neg__(self) -> "Element":
        return Element._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        c = _coeff(c)
        if not c:
            return Element()
        return Element._raw({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{k!r}" for k, c in self.items())

    def to_json(self) -> list[dict]:
        return [
            {"alpha": list(k.alpha), "idx": list(k.idx), "coeff": _fstr(c)} for k, c in self.items()
        ]

    @classmethod
    def from_json(cls, data, cfg: AlgebraConfig | None = None) -> "Element":
        if not isinstance(data, list):
            raise ConfigError("element must be a JSON array of terms")
        acc = Element()
        for i, term in enumerate(data):
            try:
                alpha, idx, c = term["alpha"], term["idx"], term["coeff"]
            except (KeyError, TypeError):
                raise ConfigError(f"term {i}: needs alpha, idx, coeff") from None
            coeff = parse_rational(c, f"term {i} coeff")
            if cfg is not None:
                try:
                    key = make_key(cfg, alpha, idx)
                except ValueError as e:
                    raise ConfigError(f"term {i}: {e}") from None
            else:
                key = BasisKey(tuple(alpha), tuple(idx))
            acc = acc + Element({key: coeff})
        return acc


def _fstr(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class SuperElement(NamedTuple):
    even: Element
    odd: Element

    @classmethod
    def zero(cls) -> "SuperElement":
        return cls(Element(), Element())

    @classmethod
    def of_even(cls, u: Element) -> "SuperElement":
        return cls(u, Element())

    @classmethod
    def of_odd(cls, u: Element) -> "SuperElement":
        return cls(Element(), u)

    def __bool__(self):
        return bool(self.even) or bool(self.odd)

    def __add__(self, other):
        return SuperElement(self.even + other.even, self.odd + other.odd)

    def __neg__(self):
        return SuperElement(-self.even, -self.odd)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SuperElement(self.even.scale(c), self.odd.scale(c))

    @property
    def parity(self) -> int | None:
        """0 or 1 for homogeneous nonzero elements, None otherwise."""
        if self.even and not self.odd:
            return 0
        if self.odd and not self.even:
            return 1
        return None

    def to_json(self) -> dict:
        return {"even": self.even.to_json(), "odd": self.odd.to_json()}

    @classmethod
    def from_json(cls, data, cfg=None) -> "SuperElement":
        if not isinstance(data, dict):
            raise ConfigError("super element must be an object with 'even'/'odd'")
        return cls(Element.from_json(data.get("even", []), cfg), Element.from_json(data.get("odd", []), cfg))


# ------------------------------------------------------------------ operations


def key_add(a: BasisKey, b: BasisKey) -> BasisKey:
    return BasisKey(
        tuple(x + y for x, y in zip(a.alpha, b.alpha)), tuple(x + y for x, y in zip(a.idx, b.idx))
    )


def multiply(u: Element, v: Element) -> Element:
    out: dict[BasisKey, Fraction] = {}
    for ka, ca in u.terms.items():
        for kb, cb in v.terms.items():
            k = key_add(ka, kb)
            c = out.get(k, 0) + ca * cb
            if c:
                out[k] = c
            else:
                out.pop(k, None)
    return Element._raw(out)


def shift_alpha(u: Element, delta: tuple[int, ...]) -> Element:
    """Multiply by x^(delta, 0)."""
    return Element._raw(
        {BasisKey(tuple(a + d for a, d in zip(k.alpha, delta)), k.idx): c for k, c in u.terms.items()}
    )


def lower(idx: tuple[int, ...], *ps: int) -> tuple[int, ...] | None:
    """idx - 1_[p] - ...; None if some entry turns negative."""
    out = list(idx)
    for p in ps:
        out[p - 1] -= 1
        if out[p - 1] < 0:
            return None
    return tuple(out)


def derivation(cfg: AlgebraConfig, p: int, u: Element) -> Element:
    if not 1 <= p <= cfg.n:
        raise ValueError(f"derivation index {p} out of range")
    out: dict[BasisKey, Fraction] = {}
    for k, c in u.terms.items():
        lam = cfg.phi_at(p, k.alpha)
        if lam:
            out[k] = out.get(k, 0) + lam * c
        i = k.idx[p - 1]
        if i:
            k2 = BasisKey(k.alpha, lower(k.idx, p))
            out[k2] = out.get(k2, 0) + i * c
    return Element(out)


def eigendecompose_phi1(cfg: AlgebraConfig, u: Element) -> dict[Fraction, Element]:
    parts: dict[Fraction, dict] = {}
    for k, c in u.terms.items():
        parts.setdefault(cfg.phi_at(1, k.alpha), {})[k] = c
    return {lam: Element._raw(parts[lam]) for lam in sorted(parts)}


class NonCentralQuotient(ValueError):
    pass


def quotient_project(u: Element, quotient_keys: Iterable[BasisKey], kernel=None) -> Element:
    """Delete quotient-key coordinates.

    When ``kernel`` is given every key must pass its cached centrality check.
    """
    qk = set(quotient_keys)
    if kernel is not None:
        for k in qk:
            if not kernel.is_central_key(k):
                raise NonCentralQuotient(f"{k!r} is not central for this bracket")
    if not qk & u.terms.keys():
        return u
    return Element._raw({k: c for k, c in u.terms.items() if k not in qk})


@dataclass(frozen=True)
class SupportDiagnostics:
    max_i2: int
    max_total_degree: int
    distinct_alpha_at_top: int


def support_diagnostics(u: Element) -> SupportDiagnostics:
    if not u:
        return SupportDiagnostics(0, 0, 0)
    max_i2 = max((k.idx[1] if len(k.idx) > 1 else 0) for k in u.terms)
    top = max(sum(k.idx) for k in u.terms)
    alphas = {k.alpha for k in u.terms if sum(k.idx) == top}
    return SupportDiagnostics(max_i2, top, len(alphas))


# --------------------------------------------------------------------- windows


@dataclass(frozen=True)
class Window:
    """Box |alpha_k| <= A on the lattice and |idx| <= K on the multi-index."""

    A: int
    K: int = 0

    def __post_init__(self):
        if self.A < 0 or self.K < 0:
            raise ValueError("window bounds must be non-negative")

    def grow(self, margin: int) -> "Window":
        return Window(self.A + margin, self.K)

    def contains(self, key: BasisKey) -> bool:
        return all(abs(a) <= self.A for a in key.alpha) and sum(key.idx) <= self.K

    def alphas(self, rank: int) -> list[tuple[int, ...]]:
        return list(itertools.product(range(-self.A, self.A + 1), repeat=rank))

    def indices(self, cfg: AlgebraConfig) -> list[tuple[int, ...]]:
        ranges = [range(self.K + 1) if cfg.full(p) else range(1) for p in range(1, cfg.n + 1)]
        return [i for i in itertools.product(*ranges) if sum(i) <= self.K]

    def keys(self, cfg: AlgebraConfig) -> list[BasisKey]:
        idxs = self.indices(cfg)
        return [BasisKey(a, i) for a in self.alphas(cfg.rank) for i in idxs]

    def to_json(self) -> dict:
        return {"A": self.A, "K": self.K}
