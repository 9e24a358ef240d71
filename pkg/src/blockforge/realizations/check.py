"""Literal evaluation of example brackets and the engine cross-check."""

from __future__ import annotations

from blockforge.algebra import Window
from blockforge.brackets import EVEN, ODD, BracketKernel, column_bracket, column_key, window_columns
from blockforge.realizations.formula import eval_poly
from blockforge.realizations.poly import FracLaurentPoly
from blockforge.realizations.spec import RealizationSpec, SpecError
from blockforge.sampling import RNG_ALGORITHM, make_rng


def _drop(spec: RealizationSpec, poly: FracLaurentPoly, parity: int) -> FracLaurentPoly:
    kill = {m.exp for m in spec.quotient if m.parity == parity}
    if not kill & poly.terms.keys():
        return poly
    return FracLaurentPoly(spec.ring, {e: c for e, c in poly.terms.items() if e not in kill}, check=False)


def realized_bracket(spec: RealizationSpec, f: FracLaurentPoly, g: FracLaurentPoly, pf: int = 0, pg: int = 0):
    """Printed formula applied to f, g, then quotient projection.

    For super specs ``pf``/``pg`` are the parities and the result is a pair
    (polynomial, parity); otherwise just the polynomial.
    """
    p = spec.params
    if not spec.is_super:
        return _drop(spec, eval_poly(spec.bracket[""], spec.ring, p, f, g), EVEN)
    if pf == EVEN and pg == EVEN:
        return _drop(spec, eval_poly(spec.bracket["00"], spec.ring, p, f, g), EVEN), EVEN
    if pf == ODD and pg == ODD:
        return _drop(spec, eval_poly(spec.bracket["11"], spec.ring, p, f, g), EVEN), EVEN
    if pf == EVEN:
        return _drop(spec, eval_poly(spec.bracket["01"], spec.ring, p, f, g), ODD), ODD
    return _drop(spec, -eval_poly(spec.bracket["01"], spec.ring, p, g, f), ODD), ODD


def _engine_image(spec, kernel, a, b, drop):
    out: dict = {}
    for col, c in column_bracket(kernel, a, b).items():
        if col in drop:
            continue
        e = spec.exponent(column_key(kernel, col))
        out[e] = out.get(e, 0) + c
    par = None
    if spec.is_super:
        par = EVEN if a[0] == b[0] else ODD
    return FracLaurentPoly(spec.ring, out, check=False), par


def _diff(x: FracLaurentPoly, y: FracLaurentPoly) -> list:
    keys = sorted(set(x.terms) | set(y.terms))
    out = []
    for e in keys:
        cx, cy = x.terms.get(e, 0), y.terms.get(e, 0)
        if cx != cy:
            out.append({"exp": [str(v) for v in x.exponents(e)], "engine": str(cx), "realized": str(cy)})
    return out


def _fmt_col(kernel, col):
    k = column_key(kernel, col)
    d = {"alpha": list(k.alpha), "idx": list(k.idx)}
    if kernel.is_super:
        d["parity"] = col[0]
    return d


def sample_columns(spec: RealizationSpec, kernel: BracketKernel, window: Window) -> list:
    skip = set(spec.quotient_columns()) | set(spec.excluded_columns())
    return [c for c in window_columns(kernel, window) if c not in skip]


def cross_check(spec: RealizationSpec, window: Window | None = None, trials: int = 200, seed: int = 0) -> dict:
    """Engine bracket pushed through E against the literal example bracket."""
    if window is None:
        window = Window(int(spec.window["A"]), int(spec.window["K"]))
    kernel = BracketKernel(spec.config)
    cols = sample_columns(spec, kernel, window)
    images = {}
    for c in window_columns(kernel, window):
        e = (c[0], spec.exponent(c[1])) if kernel.is_super else spec.exponent(c)
        if e in images:
            raise SpecError(f"{spec.id}: exponent map is not injective on the window")
        images[e] = c
    drop = set(spec.quotient_columns())
    excluded = {m.exp for m in spec.excluded}
    rng = make_rng(seed)
    mismatches = 0
    first = None
    ring_errors = 0
    for _ in range(trials):
        a, b = rng.choice(cols), rng.choice(cols)
        eng, par = _engine_image(spec, kernel, a, b, drop)
        if kernel.is_super:
            real, rpar = realized_bracket(spec, spec.image(a[1]), spec.image(b[1]), a[0], b[0])
            ok = real == eng and (not real or rpar == par)
        else:
            real = realized_bracket(spec, spec.image(a), spec.image(b))
            ok = real == eng
        for e in real.terms:
            if e in excluded or spec.preimage(e) is None:
                ring_errors += 1
                ok = False
        if not ok:
            mismatches += 1
            if first is None:
                first = {"u": _fmt_col(kernel, a), "v": _fmt_col(kernel, b), "diff": _diff(eng, real)}
    return {
        "spec": spec.id,
        "params": spec.params,
        "config_hash": spec.config.digest(),
        "window": window.to_json(),
        "trials": trials,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "mismatches": mismatches,
        "ring_errors": ring_errors,
        "first_mismatch": first,
        "ok": mismatches == 0,
    }
