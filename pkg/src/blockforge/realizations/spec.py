"""Realization specs: a config, an exponent map into a polynomial ring and the
printed bracket formulas of the corresponding example algebra."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from blockforge.algebra import BasisKey, Element, derivation
from blockforge.brackets import EVEN, ODD
from blockforge.config import AlgebraClass, AlgebraConfig, ConfigError, config_from_dict, loads_json
from blockforge.linalg import rref
from blockforge.realizations.formula import FormulaError, eval_number
from blockforge.realizations.poly import FracLaurentPoly, Ring, euler, poly_partial

REGISTRY_DIR = Path(__file__).resolve().parent.parent / "data" / "realizations"
KINDS = ("00", "11", "01")


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    parity: int
    exp: tuple[int, ...]  # numerators over the ring denominator


@dataclass
class RealizationSpec:
    id: str
    params: dict
    config: AlgebraConfig
    ring: Ring
    gamma_basis: list  # r exponent-numerator vectors
    idx_vars: list  # per homomorphism p: variable index or None
    derivations: list  # per p: (euler {q: a}, partial {q: b})
    bracket: dict  # kind -> formula text ("" kind for plain Lie algebras)
    quotient: list[Monomial]
    excluded: list[Monomial]
    window: dict = field(default_factory=lambda: {"A": 2, "K": 2})
    note: str = ""
    source: dict = field(default_factory=dict)

    @property
    def is_super(self) -> bool:
        return self.config.cls is AlgebraClass.CLASS_III

    # ------------------------------------------------------------ exponent map

    def exponent(self, key: BasisKey) -> tuple[int, ...]:
        e = [0] * self.ring.k
        for a, col in zip(key.alpha, self.gamma_basis):
            for q, x in enumerate(col):
                e[q] += a * x
        for p, i in enumerate(key.idx):
            if i:
                q = self.idx_vars[p]
                if q is None:
                    raise SpecError(f"index direction {p + 1} has no variable")
                e[q] += i * self.ring.denom
        return tuple(e)

    def image(self, key: BasisKey, c=1) -> FracLaurentPoly:
        return FracLaurentPoly(self.ring, {self.exponent(key): c})

    def preimage(self, exp: tuple[int, ...]) -> BasisKey | None:
        """Key with E(key) = exp, or None when exp is not in the image."""
        m = self.ring.denom
        e = list(exp)
        idx = []
        for p, q in enumerate(self.idx_vars):
            if q is None:
                idx.append(0)
                continue
            if e[q] < 0 or e[q] % m:
                return None
            idx.append(e[q] // m)
            e[q] = 0
        r = len(self.gamma_basis)
        if r == 0:
            return BasisKey((), tuple(idx)) if not any(e) else None
        # solve sum_j a_j col_j = e over Q, then demand integrality
        rows = [[self.gamma_basis[j][q] for j in range(r)] + [e[q]] for q in range(self.ring.k)]
        red, piv = rref(rows)
        if r in piv:
            return None
        a = [Fraction(0)] * r
        for row, pc in zip(red, piv):
            a[pc] = row[r]
        if any(x.denominator != 1 for x in a):
            return None
        alpha = tuple(int(x) for x in a)
        key = BasisKey(alpha, tuple(idx))
        return key if self.exponent(key) == tuple(exp) else None

    def realized_derivation(self, p: int, f: FracLaurentPoly) -> FracLaurentPoly:
        eu, pa = self.derivations[p - 1]
        out = FracLaurentPoly(self.ring)
        for q, a in eu.items():
            out = out + euler(f, self.ring.names[q]) * a
        for q, b in pa.items():
            out = out + poly_partial(f, self.ring.names[q]) * b
        return out

    def element_image(self, u: Element) -> FracLaurentPoly:
        out = {}
        for k, c in u.terms.items():
            e = self.exponent(k)
            out[e] = out.get(e, 0) + c
        return FracLaurentPoly(self.ring, out, check=False)

    def derivation_mismatches(self, keys) -> list:
        bad = []
        for k in keys:
            for p in range(1, self.config.n + 1):
                lhs = self.element_image(derivation(self.config, p, Element.basis(k)))
                rhs = self.realized_derivation(p, self.image(k))
                if lhs != rhs:
                    bad.append((k, p))
        return bad

    def quotient_columns(self) -> list:
        out = []
        for mono in self.quotient:
            k = self.preimage(mono.exp)
            if k is None:
                raise SpecError(f"{self.id}: quotient monomial is not in the ring image")
            out.append((mono.parity, k) if self.is_super else k)
        return out

    def excluded_columns(self) -> list:
        out = []
        for mono in self.excluded:
            k = self.preimage(mono.exp)
            if k is not None:
                out.append((mono.parity, k) if self.is_super else k)
        return out


# ------------------------------------------------------------------- loading


def _exp_vector(d: dict, ring: Ring, params: dict, where: str) -> tuple[int, ...]:
    if not isinstance(d, dict):
        raise SpecError(f"{where}: exponent must be an object var -> value")
    e = [0] * ring.k
    for name, val in d.items():
        try:
            q = ring.index(name)
        except KeyError as exc:
            raise SpecError(f"{where}: {exc}") from None
        v = eval_number(val, params) * ring.denom
        if v.denominator != 1:
            raise SpecError(f"{where}: exponent of {name} not in (1/{ring.denom})Z")
        e[q] = int(v)
    return tuple(e)


def _resolve_config(raw: dict, params: dict) -> dict:
    d = dict(raw)
    d["phi"] = [[str(eval_number(x, params)) for x in row] for row in raw["phi"]]
    if raw.get("alpha0") is not None:
        a0 = []
        for x in raw["alpha0"]:
            v = eval_number(x, params)
            if v.denominator != 1:
                raise SpecError("alpha0 must evaluate to integers")
            a0.append(int(v))
        d["alpha0"] = a0
    return d


def spec_from_dict(d: dict, overrides: dict | None = None) -> RealizationSpec:
    try:
        sid = d["id"]
        params = {k: Fraction(v) for k, v in (d.get("params") or {}).items()}
        params.update({k: Fraction(v) for k, v in (overrides or {}).items()})
        rd = d["ring"]
        denom = eval_number(rd.get("denom", 1), params)
        if denom.denominator != 1 or denom < 1:
            raise SpecError("ring denominator must be a positive integer")
        ring = Ring(
            tuple(rd["vars"]),
            int(denom),
            frozenset(rd.get("nat", ())),
            frozenset(rd.get("integral", ())),
        )
        cfg = config_from_dict(_resolve_config(d["config"], params))
        gamma = [_exp_vector(c, ring, params, f"{sid}.gamma_basis[{j}]") for j, c in enumerate(d["gamma_basis"])]
        if len(gamma) != cfg.rank:
            raise SpecError(f"{sid}: gamma_basis needs {cfg.rank} entries")
        idx_vars = [None if v is None else ring.index(v) for v in d["idx_vars"]]
        if len(idx_vars) != cfg.n:
            raise SpecError(f"{sid}: idx_vars needs {cfg.n} entries")
        ders = []
        for p, entry in enumerate(d["derivations"], 1):
            eu = {ring.index(k): eval_number(v, params) for k, v in entry.get("euler", {}).items()}
            pa = {ring.index(k): eval_number(v, params) for k, v in entry.get("partial", {}).items()}
            ders.append((eu, pa))
        if len(ders) != cfg.n:
            raise SpecError(f"{sid}: derivations needs {cfg.n} entries")
        br = d["bracket"]
        bracket = {"": br} if isinstance(br, str) else dict(br)
        if cfg.cls is AlgebraClass.CLASS_III:
            if sorted(bracket) != sorted(KINDS):
                raise SpecError(f"{sid}: super bracket needs formulas for {KINDS}")
        elif list(bracket) != [""]:
            raise SpecError(f"{sid}: a Lie algebra spec takes a single formula")
        quot = [
            Monomial(int(q.get("parity", 0)), _exp_vector(q["exp"], ring, params, f"{sid}.quotient"))
            for q in d.get("quotient", [])
        ]
        excl = [
            Monomial(int(q.get("parity", 0)), _exp_vector(q["exp"], ring, params, f"{sid}.excluded"))
            for q in d.get("excluded", [])
        ]
    except (KeyError, TypeError) as e:
        raise SpecError(f"malformed realization spec: missing or bad field {e}") from None
    except (ConfigError, FormulaError) as e:
        raise SpecError(f"{d.get('id', '?')}: {e}") from None
    return RealizationSpec(
        id=sid,
        params={k: str(v) for k, v in sorted(params.items())},
        config=cfg,
        ring=ring,
        gamma_basis=gamma,
        idx_vars=idx_vars,
        derivations=ders,
        bracket=bracket,
        quotient=quot,
        excluded=excl,
        window=dict(d.get("window", {"A": 2, "K": 2})),
        note=d.get("note", ""),
        source=d,
    )


def load_spec(path, overrides: dict | None = None) -> RealizationSpec:
    return spec_from_dict(loads_json(Path(path).read_text()), overrides)


def shipped_spec_names() -> list[str]:
    return sorted(p.stem for p in REGISTRY_DIR.glob("*.json"))


def shipped_spec(name: str, overrides: dict | None = None) -> RealizationSpec:
    return load_spec(REGISTRY_DIR / f"{name}.json", overrides)


def dump_spec(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True)
