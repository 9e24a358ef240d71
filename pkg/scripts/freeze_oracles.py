"""Compute reference brackets with sympy and freeze them for the test suite.

The values are produced without touching the blockforge engine: each basis
vector x^(alpha, i) is the monomial s^alpha t^i in sympy, the derivations are
the differential operators sum_k phi_pk s_k d/ds_k + d/dt_p, and the brackets
are the operator formulas applied literally. The classical family uses its
structure constants directly.

    python3 scripts/freeze_oracles.py            # writes tests/data/frozen_oracles.json
    python3 scripts/freeze_oracles.py --check    # exits 1 if the file is stale
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

import sympy as sp

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "src" / "blockforge" / "data" / "configs"
OUT = ROOT / "tests" / "data" / "frozen_oracles.json"


class Model:
    def __init__(self, cfg: dict):
        self.cfg = cfg
        self.r = cfg["rank"]
        self.n = len(cfg["profile"])
        self.phi = [[sp.Rational(x) for x in row] for row in cfg["phi"]]
        self.full = [f == "full" for f in cfg["profile"]]
        self.s = sp.symbols(f"s1:{self.r + 1}") if self.r else ()
        self.t = sp.symbols(f"t1:{self.n + 1}")
        self.a0 = cfg.get("alpha0")
        self.eps = cfg.get("epsilon")

    def mono(self, alpha, idx):
        m = sp.Integer(1)
        for s, a in zip(self.s, alpha):
            m *= s**a
        for t, i in zip(self.t, idx):
            m *= t**i
        return m

    def elem(self, terms):
        return sp.Add(*[sp.Rational(c) * self.mono(a, i) for a, i, c in terms])

    def d(self, p, u):
        out = sum((self.phi[p - 1][k] * self.s[k] * sp.diff(u, self.s[k]) for k in range(self.r)), sp.Integer(0))
        if self.full[p - 1]:
            out += sp.diff(u, self.t[p - 1])
        return out

    def x0(self):
        return self.mono(self.a0, [0] * self.n)

    def poisson(self, u, v, p=1, q=2):
        return self.d(p, u) * self.d(q, v) - self.d(p, v) * self.d(q, u)

    def witt(self, u, v, p):
        return u * self.d(p, v) - self.d(p, u) * v

    def lie(self, u, v):
        c = self.cfg["class"]
        if c == "class1":
            return self.poisson(u, v) + self.witt(u, v, 1)
        if c == "class2":
            A3 = sum(x * y for x, y in zip(self.phi[2], self.a0))
            A4 = sum(x * y for x, y in zip(self.phi[3], self.a0))
            return (
                self.x0() * self.poisson(u, v, 1, 2)
                + self.poisson(u, v, 3, 4)
                + A3 * self.witt(u, v, 4)
                - A4 * self.witt(u, v, 3)
            )
        raise ValueError(c)

    def even_odd(self, u, v):
        A1 = sum(x * y for x, y in zip(self.phi[0], self.a0))
        A2 = sum(x * y for x, y in zip(self.phi[1], self.a0))
        e = self.eps
        half = sp.Rational(1, 2)
        return (
            self.poisson(u, v)
            + e * (u * self.d(1, v) - half * self.d(1, u) * v)
            + half * (A2 * self.d(1, u) * v + A1 * (e * u * v - self.d(2, u) * v))
        )

    def superbracket(self, pu, u, pv, v):
        if pu == 0 and pv == 0:
            return 0, self.poisson(u, v) + self.eps * self.witt(u, v, 1)
        if pu == 1 and pv == 1:
            return 0, self.x0() * u * v
        if pu == 0:
            return 1, self.even_odd(u, v)
        return 1, -self.even_odd(v, u)

    def block0(self, terms_u, terms_v):
        def ph(row, a):
            return sum(x * y for x, y in zip(self.phi[row], a))

        out = sp.Integer(0)
        for a, _, cu in terms_u:
            for b, _, cv in terms_v:
                diff = [x - y for x, y in zip(a, b)]
                c = ph(0, a) * ph(1, b) - ph(0, b) * ph(1, a) + ph(0, diff)
                out += sp.Rational(cu) * sp.Rational(cv) * c * self.mono([x + y for x, y in zip(a, b)], [0] * self.n)
        return out

    def terms(self, expr):
        expr = sp.expand(expr)
        out = []
        for term in sp.Add.make_args(expr):
            if term == 0:
                continue
            coeff, rest = term.as_coeff_Mul()
            pw = rest.as_powers_dict()
            alpha = [int(pw.get(s, 0)) for s in self.s]
            idx = [int(pw.get(t, 0)) for t in self.t]
            extra = set(pw) - set(self.s) - set(self.t) - {sp.Integer(1)}
            if extra:
                raise ValueError(f"unexpected factor {extra}")
            out.append({"alpha": alpha, "idx": idx, "coeff": str(sp.Rational(coeff))})
        return sorted(out, key=lambda d: (d["alpha"], d["idx"]))


def _json_terms(terms):
    return [{"alpha": list(a), "idx": list(i), "coeff": str(c)} for a, i, c in terms]


def random_terms(rng, model, A, K, size):
    out = []
    for _ in range(size):
        alpha = [rng.randint(-A, A) for _ in range(model.r)]
        idx = [0] * model.n
        for _ in range(rng.randint(0, K)):
            ps = [p for p in range(model.n) if model.full[p]]
            if ps:
                idx[rng.choice(ps)] += 1
        out.append((alpha, idx, rng.choice(["1", "-1", "2", "-1/2", "3"])))
    return out


def case(model, name, u, v, pu=None, pv=None, note=""):
    if model.cfg["class"] == "block0":
        val, par = model.block0(u, v), None
    elif model.cfg["class"] == "class3":
        par, val = model.superbracket(pu, model.elem(u), pv, model.elem(v))
    else:
        val, par = model.lie(model.elem(u), model.elem(v)), None
    d = {"name": name, "u": _json_terms(u), "v": _json_terms(v), "expected": model.terms(val)}
    if par is not None:
        d.update(pu=pu, pv=pv, parity=par)
    if note:
        d["note"] = note
    return d


def inline(cfg: dict) -> dict:
    return {k: v for k, v in cfg.items() if k != "name"}


def build() -> dict:
    doc = {"generator": "scripts/freeze_oracles.py", "golden": [], "random": []}
    g = doc["golden"]

    c1 = {"class": "class1", "rank": 2, "phi": [["1", "0"], ["0", "1"]], "profile": ["full", "full"]}
    m = Model(c1)
    g.append(dict(config=c1, **case(m, "class1_unit_action", [([0, 0], [0, 0], "1")], [([2, 3], [1, 1], "1")])))
    g.append(dict(config=c1, **case(m, "class1_sigma1_pair", [([0, -1], [0, 0], "1")], [([0, 1], [1, 0], "1")])))
    g.append(
        dict(
            config=c1,
            derivation={"p": 1, "u": _json_terms([([2, 3], [1, 1], "1")]),
                        "expected": m.terms(m.d(1, m.mono([2, 3], [1, 1])))},
            name="class1_derivation",
        )
    )

    c2 = {"class": "class2", "rank": 4,
          "phi": [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
          "profile": ["zero", "zero", "zero", "zero"], "alpha0": [1, 1, 1, 1]}
    m = Model(c2)
    g.append(dict(config=c2, **case(m, "class2_opposite_pair", [([0, 0, 1, 0], [0] * 4, "1")], [([0, 0, -1, 0], [0] * 4, "1")])))

    c3 = {"class": "class3", "rank": 2, "phi": [["1", "0"], ["0", "1"]], "profile": ["full", "full"],
          "alpha0": [2, 1], "epsilon": 1}
    m = Model(c3)
    g.append(dict(config=c3, **case(m, "class3_unit_on_odd", [([0, 0], [0, 0], "1")], [([3, -1], [2, 1], "1")], 0, 1)))
    g.append(dict(config=c3, **case(m, "class3_odd_odd", [([1, 0], [1, 0], "1")], [([0, 2], [0, 1], "1")], 1, 1)))
    g.append(dict(config=c3, **case(m, "class3_sigma1_on_odd", [([0, 1], [0, 0], "1")],
                                     [([2, -1], [1, 2], "1"), ([-1, 1], [0, 1], "-1/2")], 0, 1)))

    b0 = {"class": "block0", "rank": 2, "phi": [["1", "0"], ["0", "1"]], "profile": ["zero", "zero"]}
    m = Model(b0)
    g.append(dict(config=b0, **case(m, "block0_basis_pair", [([1, 0], [0, 0], "1")], [([0, 1], [0, 0], "1")])))

    rng = random.Random(20240601)
    for path in sorted(CONFIGS.glob("*.json")):
        cfg = json.loads(path.read_text())
        m = Model(cfg)
        A, K = (1, 1) if cfg["rank"] >= 4 else (2, 2)
        for j in range(8):
            u = random_terms(rng, m, A, K, rng.randint(1, 2))
            v = random_terms(rng, m, A, K, rng.randint(1, 2))
            pu = pv = None
            if cfg["class"] == "class3":
                pu, pv = j % 2, (j // 2) % 2
            doc["random"].append(dict(config_name=path.stem, **case(m, f"{path.stem}_{j}", u, v, pu, pv)))
    return doc


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args(argv)
    text = json.dumps(build(), indent=1, sort_keys=True) + "\n"
    if args.check:
        ok = OUT.exists() and OUT.read_text() == text
        print("up to date" if ok else "stale")
        return 0 if ok else 1
    OUT.write_text(text)
    print(f"wrote {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
