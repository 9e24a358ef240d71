"""Centers, derived spans, the odd generated part and decomposition checks on windows."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from blockforge.algebra import BasisKey, Window, lower
from blockforge.brackets import (
    EVEN,
    ODD,
    BracketKernel,
    column_element,
    column_key,
    column_terms,
    window_columns,
)
from blockforge.config import AlgebraClass
from blockforge.linalg import SubspaceBasis


def margin(kernel: BracketKernel) -> int:
    a0 = kernel.cfg.alpha0
    return (max((abs(x) for x in a0), default=0) if a0 else 0) + 1


def column_order(col):
    """Deterministic column order: parity first (super case), then key."""
    if isinstance(col, BasisKey):
        return (0, col)
    return (col[0], col[1])


def _gen_order(kernel: BracketKernel, cols):
    def norm(col):
        k = column_key(kernel, col)
        return (sum(abs(a) for a in k.alpha) + sum(k.idx), column_order(col))

    return sorted(cols, key=norm)


# --------------------------------------------------------------------- center


@dataclass
class CenterResult:
    basis: SubspaceBasis
    window: Window
    predicted: list
    predicted_in_window: list
    matches: bool
    note: str = ""

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "dimension": self.basis.rank,
            "pivots": [_col_json(p) for p in self.basis.pivots()],
            "predicted": [_col_json(p) for p in self.predicted],
            "predicted_in_window": [_col_json(p) for p in self.predicted_in_window],
            "matches": self.matches,
            "note": self.note,
        }


def _col_json(col):
    if isinstance(col, BasisKey):
        return {"alpha": list(col.alpha), "idx": list(col.idx)}
    p, k = col
    return {"parity": p, "alpha": list(k.alpha), "idx": list(k.idx)}


def predicted_center(kernel: BracketKernel) -> list:
    cfg = kernel.cfg
    if cfg.cls is AlgebraClass.CLASS_I:
        k = kernel.special_key("sigma1")
    elif cfg.cls is AlgebraClass.CLASS_II:
        k = kernel.special_key("sigma")
    elif cfg.cls is AlgebraClass.CLASS_III:
        k = kernel.one_key if cfg.epsilon == 0 else kernel.special_key("sigma1")
        return [] if k is None else [(EVEN, k)]
    else:
        k = kernel.special_key("center")
    return [] if k is None else [k]


def central_elements(kernel: BracketKernel, window: Window, gen_margin: int | None = None) -> CenterResult:
    """Elements supported on the window that commute with every margin-window key.

    Brackets are evaluated exactly (no truncation), so this is the exact
    window-supported part of the centralizer of the generators.
    """
    m = margin(kernel) if gen_margin is None else gen_margin
    cols = window_columns(kernel, window)
    gens = _gen_order(kernel, window_columns(kernel, window.grow(m)))
    # null-space basis kept as sparse combinations of window columns
    basis = [{c: Fraction(1)} for c in cols]
    for g in gens:
        if not basis:
            break
        ge = column_element(kernel, g)
        piv: dict = {}
        keep = []
        for combo in basis:
            img: dict = {}
            for c, coef in combo.items():
                for k, v in column_terms(kernel, kernel.bracket(column_element(kernel, c), ge)).items():
                    nv = img.get(k, 0) + coef * v
                    if nv:
                        img[k] = nv
                    else:
                        img.pop(k, None)
            combo = dict(combo)
            while img:
                lead = min(img, key=column_order)
                if lead not in piv:
                    piv[lead] = (img, combo)
                    break
                pimg, pcombo = piv[lead]
                f = img[lead] / pimg[lead]
                img = _axpy(img, pimg, -f)
                combo = _axpy(combo, pcombo, -f)
            else:
                keep.append(combo)
        basis = keep
    sb = SubspaceBasis(order=column_order)
    for v in basis:
        sb.add(v)
    pred = predicted_center(kernel)
    inside = [c for c in pred if window.contains(column_key(kernel, c))]
    expect = SubspaceBasis(order=column_order)
    for c in inside:
        expect.add({c: 1})
    matches = expect.canonical() == sb.canonical()
    note = ""
    if len(inside) < len(pred):
        note = "predicted central element lies outside the window"
    elif not pred:
        note = "no central element predicted"
    return CenterResult(sb, window, pred, inside, matches, note)


def _axpy(x: dict, y: dict, a) -> dict:
    out = dict(x)
    for k, v in y.items():
        nv = out.get(k, 0) + a * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


# ---------------------------------------------------------- spans of brackets


def _candidate_outputs(kernel: BracketKernel, s, I, kind: str) -> list:
    """Columns a bracket of keys with alpha-sum s and index-sum I may hit."""
    cfg = kernel.cfg
    cls = cfg.cls
    out = []

    def subsets(ps):
        for r in range(len(ps) + 1):
            yield from itertools.combinations(ps, r)

    def add(alpha, ps, parity=None):
        idx = lower(I, *ps)
        if idx is None:
            return
        k = BasisKey(tuple(alpha), idx)
        out.append(k if parity is None else (parity, k))

    shifted = tuple(x + y for x, y in zip(s, cfg.alpha0)) if cfg.alpha0 is not None else None
    if cls is AlgebraClass.BLOCK0:
        add(s, ())
    elif cls is AlgebraClass.CLASS_I:
        for ps in subsets((1, 2)):
            add(s, ps)
    elif cls is AlgebraClass.CLASS_II:
        for ps in subsets((1, 2)):
            add(shifted, ps)
        for ps in subsets((3, 4)):
            add(s, ps)
    elif kind == "00":
        for ps in subsets((1, 2)):
            add(s, ps, EVEN)
    elif kind == "11":
        add(shifted, (), EVEN)
    else:
        for ps in subsets((1, 2)):
            add(s, ps, ODD)
    return list(dict.fromkeys(out))


def _index_splits(cfg, I, K):
    ranges = [range(x + 1) for x in I]
    for i in itertools.product(*ranges):
        j = tuple(x - y for x, y in zip(I, i))
        if sum(i) <= K and sum(j) <= K:
            yield i, j


def _alpha_splits(s, R):
    """Splits s = a + b with a, b in the box of radius R.

    Every structure constant is a polynomial of degree <= 2 in each coordinate
    of a (s fixed), so its values on a 3 x ... x 3 grid span the same space as
    its values at all a. When the box allows such a grid, only the grid is
    scanned.
    """
    ranges = [range(max(-R, x - R), min(R, x + R) + 1) for x in s]
    if all(len(r) >= 3 for r in ranges):
        ranges = [range(r[len(r) // 2] - 1, r[len(r) // 2] + 2) for r in ranges]
    for a in itertools.product(*ranges):
        yield a, tuple(x - y for x, y in zip(s, a))


def bracket_span(kernel: BracketKernel, gen: Window, kind: str = "") -> SubspaceBasis:
    """Span of [g, h] over generator keys g, h of ``gen`` (grouped by degree).

    ``kind`` selects the super component ("00", "11", "01"); Lie classes use "".
    Pairs are grouped by (alpha-sum, index-sum); within a group scanning stops
    once the group's vectors span every candidate output column.
    """
    cfg = kernel.cfg
    R, K = gen.A, gen.K
    idx_sums = set()
    for i in gen.indices(cfg):
        for j in gen.indices(cfg):
            idx_sums.add(tuple(x + y for x, y in zip(i, j)))
    shift = cfg.alpha0 if cfg.cls is AlgebraClass.CLASS_II or kind == "11" else None
    span = SubspaceBasis(order=column_order)
    sums = itertools.product(range(-2 * R, 2 * R + 1), repeat=cfg.rank)
    for s in sums:
        near = all(abs(x) <= R for x in s)
        if shift is not None:
            near = near or all(abs(x + d) <= R for x, d in zip(s, shift))
        if not near:
            continue
        for I in sorted(idx_sums):
            cap = len(_candidate_outputs(kernel, s, I, kind))
            local = SubspaceBasis(order=column_order)
            for i, j in _index_splits(cfg, I, K):
                if local.rank == cap:
                    break
                for a, b in _alpha_splits(s, R):
                    vec = _key_bracket_cols(kernel, BasisKey(a, i), BasisKey(b, j), kind)
                    if vec and local.add(vec) and local.rank == cap:
                        break
            for _, row in local.matrix():
                span.add(row)
    return span


def _key_bracket_cols(kernel, a, b, kind):
    terms = kernel.key_bracket(a, b, kind)
    if kind in ("00", "11"):
        return {(EVEN, k): v for k, v in terms.items()}
    if kind == "01":
        return {(ODD, k): v for k, v in terms.items()}
    return terms


# ------------------------------------------------------------ derived algebra


@dataclass
class SpanResult:
    basis: SubspaceBasis  # span intersected with the window
    window: Window
    missing: list  # window columns whose unit vector is not in the span
    vanishing: list  # window columns where every span vector has zero coordinate
    predicted_missing: list = field(default_factory=list)
    matches: bool | None = None

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "dimension": self.basis.rank,
            "missing": [_col_json(c) for c in self.missing],
            "vanishing": [_col_json(c) for c in self.vanishing],
            "predicted_missing": [_col_json(c) for c in self.predicted_missing],
            "matches": self.matches,
        }


def _restrict(kernel, full: SubspaceBasis, window: Window, parity=None):
    def inside(col):
        if parity is not None and col[0] != parity:
            return False
        return window.contains(column_key(kernel, col))

    basis = full.restrict(inside)
    cols = [c for c in window_columns(kernel, window) if parity is None or c[0] == parity]
    missing = [c for c in cols if not basis.contains({c: 1})]
    vanishing = [c for c in cols if basis.coordinate_vanishes(c)]
    return basis, missing, vanishing


def predicted_derived_missing(kernel: BracketKernel, window: Window) -> list | None:
    """Window keys expected outside [A, A]; None when no claim applies."""
    cfg = kernel.cfg
    if not cfg.all_zero:
        return None
    if cfg.cls is AlgebraClass.CLASS_I:
        k = kernel.special_key("sigma2")
    elif cfg.cls is AlgebraClass.CLASS_II:
        k = kernel.special_key("rho")
    else:
        return None
    return [k] if k is not None and window.contains(k) else []


def derived_subalgebra(kernel: BracketKernel, window: Window, gen_margin: int | None = None) -> SpanResult:
    if kernel.is_super:
        raise NotImplementedError("use odd_generated_part for the super class")
    m = margin(kernel) if gen_margin is None else gen_margin
    full = bracket_span(kernel, window.grow(m))
    basis, missing, vanishing = _restrict(kernel, full, window)
    pred = predicted_derived_missing(kernel, window)
    matches = None
    if pred is not None:
        matches = sorted(missing) == sorted(pred) and all(p in vanishing for p in pred)
    return SpanResult(basis, window, missing, vanishing, pred or [], matches)


# ---------------------------------------------------------------- odd part


def predicted_odd_missing(kernel: BracketKernel, window: Window) -> list:
    """Odd window keys outside [A_0, A_1] per the closed forms."""
    cfg = kernel.cfg
    if not cfg.all_zero:
        return []
    A = kernel.A0
    keys = [k for k in window.keys(cfg)]
    if cfg.epsilon == 0:
        out = [k for k in keys if all(2 * a == -b for a, b in zip(k.alpha, cfg.alpha0))]
    elif A[0] == 0:
        out = [
            k
            for k in keys
            if kernel.phi(k.alpha)[0] == 0 and 2 * kernel.phi(k.alpha)[1] == 3 - A[1]
        ]
    else:
        kap = kernel.special_key("kappa")
        out = [kap] if kap is not None and window.contains(kap) else []
    return [(ODD, k) for k in out]


@dataclass
class OddPartResult(SpanResult):
    codimension: int = 0

    def to_json(self) -> dict:
        d = super().to_json()
        d["codimension"] = self.codimension
        return d


def odd_generated_part(kernel: BracketKernel, window: Window, gen_margin: int | None = None) -> OddPartResult:
    if not kernel.is_super:
        raise TypeError("odd part is defined for the super class only")
    m = margin(kernel) if gen_margin is None else gen_margin
    full = bracket_span(kernel, window.grow(m), "01")
    basis, missing, vanishing = _restrict(kernel, full, window, parity=ODD)
    pred = predicted_odd_missing(kernel, window)
    matches = sorted(missing) == sorted(pred)
    return OddPartResult(basis, window, missing, vanishing, pred, matches, codimension=len(missing))


# --------------------------------------------------------------- decompositions


@dataclass
class Claim:
    claim: str
    status: str  # PASS, FAIL, NOT_APPLICABLE, OUT_OF_WINDOW
    detail: str = ""
    keys: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"claim": self.claim, "status": self.status, "detail": self.detail, "keys": self.keys}


def decomposition_check(kernel: BracketKernel, window: Window) -> list[Claim]:
    cfg = kernel.cfg
    claims = []
    if cfg.cls is AlgebraClass.CLASS_III:
        odd = odd_generated_part(kernel, window)
        total = len(window.keys(cfg))
        st = "PASS" if odd.matches and odd.codimension <= 1 else "FAIL"
        claims.append(
            Claim(
                "odd_part_codimension",
                st,
                f"rank {odd.basis.rank} of {total} odd keys, codimension {odd.codimension}",
                [_col_json(c) for c in odd.missing],
            )
        )
        return claims
    if cfg.cls not in (AlgebraClass.CLASS_I, AlgebraClass.CLASS_II):
        return [Claim("decomposition", "NOT_APPLICABLE", "no decomposition claim for this class")]
    name = "sigma2" if cfg.cls is AlgebraClass.CLASS_I else "rho"
    centre = "sigma1" if cfg.cls is AlgebraClass.CLASS_I else "sigma"
    special = kernel.special_key(name)
    if not cfg.all_zero or special is None:
        why = "multi-index profile is not all zero" if not cfg.all_zero else f"{name} does not exist"
        return [Claim("decomposition", "NOT_APPLICABLE", why)]
    if not window.contains(special):
        return [Claim("decomposition", "OUT_OF_WINDOW", f"{name} lies outside the window")]
    der = derived_subalgebra(kernel, window)
    cols = window_columns(kernel, window)
    # derived span plus the special line fills the window, and the sum is direct
    total = SubspaceBasis(order=column_order)
    for _, row in der.basis.matrix():
        total.add(row)
    grew = total.add({special: 1})
    full = total.rank == len(cols)
    direct = grew and der.basis.rank + 1 == total.rank
    claims.append(
        Claim(
            "derived_plus_special_line",
            "PASS" if full and direct else "FAIL",
            f"rank {der.basis.rank} + 1 vs {len(cols)} window keys",
            [_col_json(c) for c in der.missing],
        )
    )
    ck = kernel.special_key(centre)
    if ck is not None and window.contains(ck):
        hit = der.basis.contains({ck: 1})
        claims.append(
            Claim(
                "center_in_derived",
                "PASS" if hit else "FAIL",
                f"x^{centre} lies in the derived span",
                [_col_json(ck)],
            )
        )
    return claims


# ---------------------------------------------------------------- identities


def jacobi_suite(kernel: BracketKernel, window: Window, triples: int, seed: int) -> dict:
    """(Super-)Jacobi and antisymmetry on random elements supported in ``window``.

    Super triples are homogeneous with random parities. The first failure is
    reported with its arguments.
    """
    from blockforge.sampling import RNG_ALGORITHM, make_rng, random_element, random_super

    cfg = kernel.cfg
    rng = make_rng(seed)
    fails = 0
    first = None
    for _ in range(triples):
        if kernel.is_super:
            u, v, w = (random_super(rng, cfg, window) for _ in range(3))
            pu, pv, pw = u.parity, v.parity, w.parity
            br = kernel.superbracket
            jac = (
                br(br(u, v), w).scale((-1) ** (pu * pw))
                + br(br(v, w), u).scale((-1) ** (pv * pu))
                + br(br(w, u), v).scale((-1) ** (pw * pv))
            )
            anti = br(u, v) + br(v, u).scale((-1) ** (pu * pv))
        else:
            u, v, w = (random_element(rng, cfg, window) for _ in range(3))
            br = kernel.bracket
            jac = br(br(u, v), w) + br(br(v, w), u) + br(br(w, u), v)
            anti = br(u, v) + br(v, u)
        if jac or anti:
            fails += 1
            if first is None:
                first = {
                    "u": u.to_json(),
                    "v": v.to_json(),
                    "w": w.to_json(),
                    "jacobi": jac.to_json(),
                    "antisymmetry": anti.to_json(),
                }
    return {
        "window": window.to_json(),
        "triples": triples,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "failures": fails,
        "first_failure": first,
        "status": "PASS" if fails == 0 else "FAIL",
    }
