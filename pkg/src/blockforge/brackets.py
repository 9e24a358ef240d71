"""Bracket families evaluated from expanded structure constants."""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from blockforge.algebra import BasisKey, Element, SuperElement, Window, lower
from blockforge.config import AlgebraClass, AlgebraConfig, find_special_element
from blockforge.linalg import Underdetermined

HALF = Fraction(1, 2)

# primed indices and signs used when pairing the Class II homomorphisms
PRIME = {1: 2, 2: 1, 3: 4, 4: 3}
SIGN = {1: 1, 2: -1, 3: 1, 4: -1}

EVEN, ODD = 0, 1


def _acc(out: dict, alpha, idx, c):
    if not c or idx is None:
        return
    k = BasisKey(alpha, idx)
    v = out.get(k, 0) + c
    if v:
        out[k] = v
    else:
        out.pop(k, None)


def _add(x, y):
    return tuple(map(operator.add, x, y))


def _solve(cfg, constraints):
    try:
        return find_special_element(cfg, constraints)
    except Underdetermined:
        return None


class BracketKernel:
    """Bracket evaluator for one configuration.

    Key-pair structure constants are cached; everything else is pure.
    """

    def __init__(self, cfg: AlgebraConfig):
        cfg.check_structure()
        self.cfg = cfg
        self._phi_cache: dict[tuple, tuple] = {}
        self._cache: dict[tuple, dict] = {}
        self._central: dict[tuple, bool] = {}
        self.a0 = cfg.alpha0
        self.A0 = self.phi(cfg.alpha0) if cfg.alpha0 is not None else None
        self.special = self._specials()

    # ---------------------------------------------------------- special elements

    def _specials(self) -> dict[str, tuple | None]:
        cfg = self.cfg
        sp: dict[str, tuple | None] = {}
        if cfg.cls in (AlgebraClass.CLASS_I, AlgebraClass.CLASS_III):
            sp["sigma1"] = _solve(cfg, [(1, 0), (2, 1)])
            sp["sigma2"] = _solve(cfg, [(1, 0), (2, 2)])
        if cfg.cls is AlgebraClass.CLASS_II:
            A = self.A0
            sp["sigma"] = _solve(cfg, [(1, 0), (2, 0), (3, -A[2]), (4, -A[3])])
            sp["rho"] = _solve(cfg, [(1, A[0]), (2, A[1]), (3, -2 * A[2]), (4, -2 * A[3])])
        if cfg.cls is AlgebraClass.CLASS_III:
            A = self.A0
            sp["kappa"] = _solve(cfg, [(1, -A[0] / 2), (2, (3 - A[1]) / 2)])
        if cfg.cls is AlgebraClass.BLOCK0:
            sp["center"] = _solve(cfg, [(1, 0), (2, -1)])
        self._verify_specials(sp)
        return sp

    def _verify_specials(self, sp):
        A = self.A0
        want = {
            "sigma1": lambda f: f[0] == 0 and f[1] == 1,
            "sigma2": lambda f: f[0] == 0 and f[1] == 2,
            "sigma": lambda f: f[0] == f[1] == 0 and f[2] == -A[2] and f[3] == -A[3],
            "rho": lambda f: (f[0], f[1], f[2], f[3]) == (A[0], A[1], -2 * A[2], -2 * A[3]),
            "kappa": lambda f: f[0] == -A[0] / 2 and f[1] == (3 - A[1]) / 2,
            "center": lambda f: f[0] == 0 and f[1] == -1,
        }
        for name, alpha in sp.items():
            if alpha is not None and not want[name](self.phi(alpha)):
                raise AssertionError(f"special element {name}={alpha} fails its constraints")

    def special_key(self, name: str) -> BasisKey | None:
        a = self.special.get(name)
        return None if a is None else BasisKey(a, (0,) * self.cfg.n)

    def quotient_keys(self) -> list[BasisKey]:
        """Central keys divided out (even part for the super class)."""
        cfg = self.cfg
        if cfg.cls is AlgebraClass.CLASS_I:
            k = self.special_key("sigma1")
        elif cfg.cls is AlgebraClass.CLASS_II:
            k = self.special_key("sigma")
        elif cfg.cls is AlgebraClass.CLASS_III:
            k = self.special_key("sigma1") if cfg.epsilon == 1 else self.one_key
        else:
            k = None
        return [k] if k is not None else []

    @property
    def one_key(self) -> BasisKey:
        return BasisKey((0,) * self.cfg.rank, (0,) * self.cfg.n)

    @property
    def is_super(self) -> bool:
        return self.cfg.cls is AlgebraClass.CLASS_III

    def phi(self, alpha) -> tuple[Fraction, ...]:
        v = self._phi_cache.get(alpha)
        if v is None:
            # plain ints are much faster than Fractions in the hot path
            v = tuple(int(x) if x.denominator == 1 else x for x in self.cfg.phis(alpha))
            self._phi_cache[alpha] = v
        return v

    # ------------------------------------------------------------ key brackets

    def key_bracket(self, a: BasisKey, b: BasisKey, kind: str = "") -> dict:
        """Structure constants of [a, b] as {key: coeff}.

        ``kind`` selects the super component: "00", "11" or "01".
        """
        ck = (kind, a, b)
        hit = self._cache.get(ck)
        if hit is None:
            hit = self._compute(a, b, kind)
            if len(self._cache) > 400_000:
                self._cache.clear()
            self._cache[ck] = hit
        return hit

    def _compute(self, a: BasisKey, b: BasisKey, kind: str) -> dict:
        cls = self.cfg.cls
        if cls is AlgebraClass.BLOCK0:
            return self._block0(a, b)
        if cls is AlgebraClass.CLASS_I:
            return self._poisson(a, b, 1)
        if cls is AlgebraClass.CLASS_II:
            return self._class2(a, b)
        if kind == "00":
            return self._poisson(a, b, self.cfg.epsilon)
        if kind == "11":
            return {BasisKey(_add(_add(a.alpha, b.alpha), self.a0), _add(a.idx, b.idx)): Fraction(1)}
        if kind == "01":
            return self._even_odd(a, b)
        raise ValueError(f"super bracket needs a component kind, got {kind!r}")

    def _block0(self, a, b):
        if any(a.idx) or any(b.idx):
            raise ValueError("block0 bracket has no multi-index support")
        f, g = self.phi(a.alpha), self.phi(b.alpha)
        c = f[0] * g[1] - g[0] * f[1] + f[0] - g[0]
        out = {}
        _acc(out, _add(a.alpha, b.alpha), a.idx, c)
        return out

    def _poisson(self, a, b, eps):
        # d1 u d2 v - d1 v d2 u + eps (u d1 v - d1 u v), expanded
        f, g = self.phi(a.alpha), self.phi(b.alpha)
        i, j = a.idx, b.idx
        s, ij = _add(a.alpha, b.alpha), _add(i, j)
        out = {}
        _acc(out, s, ij, f[0] * g[1] - g[0] * f[1] + eps * (g[0] - f[0]))
        _acc(out, s, lower(ij, 2), j[1] * f[0] - i[1] * g[0])
        _acc(out, s, lower(ij, 1, 2), i[0] * j[1] - i[1] * j[0])
        _acc(out, s, lower(ij, 1), i[0] * g[1] - j[0] * f[1] + eps * (j[0] - i[0]))
        return out

    def _class2(self, a, b):
        f, g = self.phi(a.alpha), self.phi(b.alpha)
        A = self.A0
        i, j = a.idx, b.idx
        s, ij = _add(a.alpha, b.alpha), _add(i, j)
        t = _add(s, self.a0)
        out = {}
        if not any(ij):
            # no multi-index: two terms only
            _acc(out, t, ij, f[0] * g[1] - g[0] * f[1])
            _acc(out, s, ij, (f[2] + A[2]) * (g[3] + A[3]) - (g[2] + A[2]) * (f[3] + A[3]))
            return out
        _acc(out, t, ij, f[0] * g[1] - g[0] * f[1])
        _acc(out, t, lower(ij, 1), i[0] * g[1] - j[0] * f[1])
        _acc(out, t, lower(ij, 2), j[1] * f[0] - i[1] * g[0])
        _acc(out, t, lower(ij, 1, 2), i[0] * j[1] - i[1] * j[0])
        F3, F4 = f[2] + A[2], f[3] + A[3]
        G3, G4 = g[2] + A[2], g[3] + A[3]
        _acc(out, s, ij, F3 * G4 - G3 * F4)
        _acc(out, s, lower(ij, 3), i[2] * G4 - j[2] * F4)
        _acc(out, s, lower(ij, 3, 4), i[2] * j[3] - i[3] * j[2])
        _acc(out, s, lower(ij, 4), j[3] * F3 - i[3] * G3)
        return out

    def _even_odd(self, a, b):
        f, g = self.phi(a.alpha), self.phi(b.alpha)
        A, eps = self.A0, self.cfg.epsilon
        i, j = a.idx, b.idx
        s, ij = _add(a.alpha, b.alpha), _add(i, j)
        out = {}
        c0 = (
            f[0] * g[1]
            - g[0] * f[1]
            + eps * g[0]
            + eps * (A[0] - f[0]) * HALF
            + (A[1] * f[0] - A[0] * f[1]) * HALF
        )
        _acc(out, s, ij, c0)
        _acc(out, s, lower(ij, 1), i[0] * g[1] - j[0] * f[1] + eps * (j[0] - i[0] * HALF) + i[0] * A[1] * HALF)
        _acc(out, s, lower(ij, 1, 2), i[0] * j[1] - i[1] * j[0])
        _acc(out, s, lower(ij, 2), j[1] * f[0] - i[1] * g[0] - i[1] * A[0] * HALF)
        return out

    # -------------------------------------------------------- element brackets

    def _bilinear(self, u: Element, v: Element, kind: str = "", sign: int = 1) -> dict:
        out: dict[BasisKey, Fraction] = {}
        for ka, ca in u.terms.items():
            for kb, cb in v.terms.items():
                c = ca * cb * sign
                for k, s in self.key_bracket(ka, kb, kind).items():
                    nv = out.get(k, 0) + c * s
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out

    def bracket(self, u, v):
        """[u, v]; dispatches to the super bracket for Class III."""
        if self.is_super:
            return self.superbracket(u, v)
        return Element._raw(self._bilinear(u, v))

    def superbracket(self, U: SuperElement, V: SuperElement) -> SuperElement:
        if not self.is_super:
            raise TypeError("superbracket needs a Class III configuration")
        even = self._bilinear(U.even, V.even, "00")
        for k, c in self._bilinear(U.odd, V.odd, "11").items():
            nv = even.get(k, 0) + c
            if nv:
                even[k] = nv
            else:
                even.pop(k, None)
        odd = self._bilinear(U.even, V.odd, "01")
        # [v_1, u_0] = -[u_0, v_1]
        for k, c in self._bilinear(V.even, U.odd, "01", -1).items():
            nv = odd.get(k, 0) + c
            if nv:
                odd[k] = nv
            else:
                odd.pop(k, None)
        return SuperElement(Element._raw(even), Element._raw(odd))

    # ---------------------------------------------------------------- centrality

    def is_central_key(self, key: BasisKey, parity: int = EVEN, radius: int = 2, degree: int = 2) -> bool:
        """Cached check that [key, g] = 0 for all keys g of a small test window."""
        ck = (key, parity, radius, degree)
        if ck in self._central:
            return self._central[ck]
        win = Window(radius + max((abs(a) for a in key.alpha), default=0), degree)
        u = Element.basis(key)
        ok = True
        for g in win.keys(self.cfg):
            e = Element.basis(g)
            if self.is_super:
                U = SuperElement.of_even(u) if parity == EVEN else SuperElement.of_odd(u)
                ok = not self.superbracket(U, SuperElement.of_even(e)) and not self.superbracket(
                    U, SuperElement.of_odd(e)
                )
            else:
                ok = not self.bracket(u, e)
            if not ok:
                break
        self._central[ck] = ok
        return ok

    # ------------------------------------------------------------------ adjoint

    def adjoint(self, u, window: Window) -> "AdjointMatrix":
        """Matrix of ad_u on window columns, truncated to the window."""
        cols = window_columns(self, window)
        entries, leaks = {}, []
        for col in cols:
            img = self.bracket(u, column_element(self, col))
            full = column_terms(self, img)
            kept = {c: v for c, v in full.items() if window.contains(c[1] if self.is_super else c)}
            if len(kept) != len(full):
                leaks.append(col)
            if kept:
                entries[col] = kept
        return AdjointMatrix(cols, entries, leaks)


@dataclass
class AdjointMatrix:
    columns: list
    entries: dict  # column -> {row column: coeff}
    out_of_window: list = field(default_factory=list)

    def entry(self, row, col) -> Fraction:
        return self.entries.get(col, {}).get(row, Fraction(0))

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for col, c in vec.items():
            for r, v in self.entries.get(col, {}).items():
                nv = out.get(r, 0) + c * v
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out


# Columns are BasisKeys for Lie algebras and (parity, BasisKey) for the super class.


def window_columns(kernel: BracketKernel, window: Window) -> list:
    keys = window.keys(kernel.cfg)
    if kernel.is_super:
        return [(p, k) for p in (EVEN, ODD) for k in keys]
    return keys


def column_element(kernel: BracketKernel, col):
    if kernel.is_super:
        p, k = col
        e = Element.basis(k)
        return SuperElement.of_even(e) if p == EVEN else SuperElement.of_odd(e)
    return Element.basis(col)


def column_terms(kernel: BracketKernel, x) -> dict:
    """Flatten an element into {column: coeff}."""
    if kernel.is_super:
        out = {(EVEN, k): c for k, c in x.even.terms.items()}
        out.update({(ODD, k): c for k, c in x.odd.terms.items()})
        return out
    return dict(x.terms)


def element_from_terms(kernel: BracketKernel, terms: dict):
    if kernel.is_super:
        ev = {k: c for (p, k), c in terms.items() if p == EVEN}
        od = {k: c for (p, k), c in terms.items() if p == ODD}
        return SuperElement(Element(ev), Element(od))
    return Element(terms)


def column_key(kernel: BracketKernel, col) -> BasisKey:
    return col[1] if kernel.is_super else col


def graded_sign(p: int | None, q: int | None) -> int:
    return -1 if (p == 1 and q == 1) else 1


def iter_pairs(items: Iterable):
    items = list(items)
    for x in range(len(items)):
        for y in range(x, len(items)):
            yield items[x], items[y]


def column_bracket(kernel: BracketKernel, a, b) -> dict:
    """[a, b] for two columns, returned as {column: coeff}."""
    if not kernel.is_super:
        return kernel.key_bracket(a, b)
    (p, ka), (q, kb) = a, b
    if p == EVEN and q == EVEN:
        return {(EVEN, k): v for k, v in kernel.key_bracket(ka, kb, "00").items()}
    if p == ODD and q == ODD:
        return {(EVEN, k): v for k, v in kernel.key_bracket(ka, kb, "11").items()}
    if p == EVEN:
        return {(ODD, k): v for k, v in kernel.key_bracket(ka, kb, "01").items()}
    return {(ODD, k): -v for k, v in kernel.key_bracket(kb, ka, "01").items()}
