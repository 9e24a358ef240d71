"""Window-truncated ideal closures and simplicity probes."""

from __future__ import annotations

import heapq
import itertools
import operator
from dataclasses import dataclass, field
from fractions import Fraction

from blockforge.algebra import Window
from blockforge.brackets import (
    EVEN,
    ODD,
    BracketKernel,
    column_bracket,
    column_key,
    window_columns,
)
from blockforge.config import AlgebraClass
from blockforge.linalg import SubspaceBasis
from blockforge.sampling import RNG_ALGORITHM, make_rng, random_seed_from_pool
from blockforge.structure import _col_json, column_order, margin, predicted_odd_missing


class EmptySeed(ValueError):
    pass


def quotient_columns(kernel: BracketKernel) -> list:
    keys = kernel.quotient_keys()
    return [(EVEN, k) for k in keys] if kernel.is_super else list(keys)


def excluded_columns(kernel: BracketKernel, window: Window) -> list:
    """Columns outside the subalgebra the simplicity claim is about."""
    cfg = kernel.cfg
    if kernel.is_super:
        return predicted_odd_missing(kernel, window)
    if cfg.all_zero:
        name = {AlgebraClass.CLASS_I: "sigma2", AlgebraClass.CLASS_II: "rho"}.get(cfg.cls)
        k = kernel.special_key(name) if name else None
        if k is not None and window.contains(k):
            return [k]
    return []


@dataclass
class ClosureState:
    window: Window
    margin_window: Window
    current: SubspaceBasis
    sweeps: int = 0
    rank_history: list = field(default_factory=list)
    leaked_brackets: int = 0
    dropped_terms: int = 0
    saturated: bool = False
    dropped: frozenset = frozenset()  # quotient columns projected away

    def covered(self, kernel: BracketKernel, cols) -> list:
        return [c for c in cols if self.current.contains({c: 1})]

    def leakage(self) -> dict:
        return {"leaked_brackets": self.leaked_brackets, "dropped_terms": self.dropped_terms}


def _num(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def _bracket_vec(kernel, g, vec: dict) -> dict:
    out: dict = {}
    for c, coef in vec.items():
        for k, v in column_bracket(kernel, g, c).items():
            nv = out.get(k, 0) + coef * v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def output_shifts(kernel: BracketKernel) -> list:
    """Offsets d such that [x^a, x^b] is supported on alpha = a + b + d."""
    zero = (0,) * kernel.cfg.rank
    if kernel.cfg.alpha0 is None:
        return [zero]
    return [zero, tuple(kernel.cfg.alpha0)]


def ideal_closure(
    kernel: BracketKernel,
    seed: dict,
    window: Window,
    *,
    quotient: bool = True,
    generators: list | None = None,
    gen_margin: int | None = None,
    truncate: bool = False,
    expect: list | None = None,
    directed: bool = True,
) -> ClosureState:
    """Closure of ``seed`` inside the window under bracketing with generators.

    ``seed`` maps columns (keys, or (parity, key) for the super class) to
    coefficients. Generators default to every margin-window key of the
    subalgebra under study. A bracket whose result leaves the window is
    logged and discarded, so every vector found is a true member of the ideal
    generated by the seed. With ``truncate=True`` the out-of-window terms are
    dropped instead and the rest is kept; that can only grow the result.

    Once the span equals the coordinate subspace on ``expect`` (default: all
    admissible window columns) the remaining columns are tested directly:
    only generator/column pairs that can land on them are bracketed.
    ``directed=False`` disables the directed pass (same result, slower).
    """
    m = margin(kernel) if gen_margin is None else gen_margin
    mw = window.grow(m)
    drop = set(quotient_columns(kernel)) if quotient else set()
    seed = {c: _num(v) for c, v in seed.items() if v and c not in drop}
    if not seed:
        raise EmptySeed("seed is zero after quotient projection")
    if not all(window.contains(column_key(kernel, c)) for c in seed):
        raise ValueError("seed must be supported in the window")
    excluded = set(excluded_columns(kernel, mw)) if kernel.is_super else set()
    default_gens = generators is None
    if default_gens:
        generators = [c for c in window_columns(kernel, mw) if c not in excluded]
    cols = window_columns(kernel, window)
    inside = set(cols)
    if expect is None:
        expect = [c for c in cols if c not in drop and c not in excluded]
    expect_set = set(expect)
    rest = [c for c in cols if c not in drop and c not in expect_set]

    state = ClosureState(window, mw, SubspaceBasis(order=column_order), dropped=frozenset(drop))

    def image(g, vec):
        img = _bracket_vec(kernel, g, vec)
        kept = {}
        lost = 0
        for c, v in img.items():
            if c in inside:
                if c not in drop:
                    kept[c] = v
            else:
                lost += 1
        if lost:
            state.dropped_terms += lost
            state.leaked_brackets += 1
            if not truncate:
                return None
        return kept

    # Generators are released in stages of growing |alpha|. Within a radius,
    # generators that keep every possible output alpha inside the window
    # (so the bracket cannot leak) come first. The closure under the full set
    # is only computed when earlier stages do not saturate. Each work item
    # remembers the last stage it was bracketed with.
    gen_by_alpha: dict = {}
    for g in generators:
        gen_by_alpha.setdefault(column_key(kernel, g).alpha, []).append(g)
    radii = sorted({max(map(abs, ga), default=0) for ga in gen_by_alpha})
    rindex = {ga: radii.index(max(map(abs, ga), default=0)) for ga in gen_by_alpha}
    n_stages = 2 * len(radii)
    cur = 0
    shifts = output_shifts(kernel)
    A = window.A
    rank_r = kernel.cfg.rank

    M = mw.A
    cache = kernel.__dict__.setdefault("_closure_candidates", {}) if default_gens else {}

    def staged(alphas):
        """Sorted (stage, alpha) pairs of generator alphas that can land inside."""
        ck = (A, M, alphas)
        hit = cache.get(ck)
        if hit is not None:
            return hit
        outs = {tuple(map(operator.add, a0, d)) for a0 in alphas for d in shifts}
        # usable alphas form a union of boxes, one per output offset; the
        # leak-free ones are their intersection
        def box(lo, hi):
            return itertools.product(*(range(max(-M, lo[k]), min(M, hi[k]) + 1) for k in range(rank_r)))

        usable = set()
        for o in outs:
            usable.update(box([-A - x for x in o], [A - x for x in o]))
        lo_b = [max(-A - o[k] for o in outs) for k in range(rank_r)]
        hi_b = [min(A - o[k] for o in outs) for k in range(rank_r)]
        strict = set(box(lo_b, hi_b))
        picked = [
            (2 * rindex[ga] + (0 if ga in strict else 1), ga) for ga in usable if ga in gen_by_alpha
        ]
        picked.sort()
        if len(alphas) <= 4:
            if len(cache) > 200_000:
                cache.clear()
            cache[ck] = picked
        return picked

    def candidates(vec, lo, hi):
        """Generators with lo < stage <= hi, in stage order."""
        alphas = frozenset(column_key(kernel, c).alpha for c in vec)
        return [g for st, ga in staged(alphas) if lo < st <= hi for g in gen_by_alpha[ga]]

    # Work list ordered by support size: pure keys found in the span are
    # queued as soon as they appear, since they are cheap and rarely leak.
    heap: list = []
    done: list = []
    tick = itertools.count()
    queued: set = set()

    def push(vec, depth, seen=-1):
        heapq.heappush(heap, (len(vec), next(tick), depth, seen, vec))

    def push_pure():
        for p, row in state.current.rows.items():
            if len(row) == 1 and p not in queued:
                queued.add(p)
                push({p: 1}, None)

    def saturate(depth) -> bool:
        """True once the span is the coordinate subspace on expect and
        nothing escapes to the other columns."""
        if state.current.rank != len(expect) or not all(state.current.contains({c: 1}) for c in expect):
            return False
        extra = _escapes(kernel, state, generators, expect, rest, image)
        for e in extra:
            push(e, depth + 1)
        return not extra

    def aim(depth):
        """Aim brackets of pure keys at every column not yet covered.

        Only adds genuine members, so the fixpoint is unchanged; for simple
        algebras it fills the window with far fewer brackets than the sweep.
        """
        units = sorted(queued, key=column_order)[:64]
        rows = state.current.rows
        for t in expect:
            if t in rows and len(rows[t]) == 1:
                continue
            ta = column_key(kernel, t).alpha
            for c, d in itertools.product(units, shifts):
                ga = tuple(x - y - z for x, y, z in zip(ta, column_key(kernel, c).alpha, d))
                hit = False
                for g in gen_by_alpha.get(ga, ()):
                    kept = image(g, {c: 1})
                    if kept and t in kept and state.current.add(kept):
                        push(kept, depth + 1)
                        hit = True
                        break
                if hit:
                    break

    state.current.add(seed)
    push(seed, 0)
    push_pure()
    state.rank_history.append(state.current.rank)
    depth_seen = 0
    aimed = 0  # pure keys known at the last directed pass
    while not state.saturated:
        if directed and queued and len(queued) >= 2 * aimed:
            aimed = max(len(queued), 1)
            aim(depth_seen)
            push_pure()
            state.rank_history.append(state.current.rank)
            if saturate(depth_seen):
                state.saturated = True
                break
        if not heap:
            if cur + 1 >= n_stages:
                break
            cur += 1
            for item in done:
                heapq.heappush(heap, item)
            done = []
            continue
        item = heapq.heappop(heap)
        _, _, depth, seen, vec = item
        depth = depth_seen if depth is None else depth
        grew = False
        for g in candidates(vec, seen, cur):
            kept = image(g, vec)
            if kept and state.current.add(kept):
                grew = True
                push(kept, depth + 1)
                if saturate(depth):
                    state.saturated = True
                    break
        done.append(item[:3] + (cur,) + item[4:])
        if grew:
            depth_seen = max(depth_seen, depth + 1)
            state.rank_history.append(state.current.rank)
            push_pure()
    state.sweeps = depth_seen
    return state


def _escapes(kernel, state, generators, expect, rest, image) -> list:
    """Brackets of generators with ``expect`` columns that reach ``rest``.

    Any such image is added to the state and returned.
    """
    if not rest:
        return []
    by_alpha: dict = {}
    for g in generators:
        by_alpha.setdefault(column_key(kernel, g).alpha, []).append(g)
    shifts = output_shifts(kernel)
    found = []
    for s in rest:
        sa = column_key(kernel, s).alpha
        for c in expect:
            ca = column_key(kernel, c).alpha
            for d in shifts:
                ga = tuple(x - y - z for x, y, z in zip(sa, ca, d))
                for g in by_alpha.get(ga, ()):
                    kept = image(g, {c: 1})
                    if kept and s in kept and state.current.add(kept):
                        found.append(kept)
    return found


# ------------------------------------------------------------------- probes


def target_columns(kernel: BracketKernel, window: Window, quotient: bool = True) -> list:
    skip = set(excluded_columns(kernel, window))
    if quotient:
        skip |= set(quotient_columns(kernel))
    return [c for c in window_columns(kernel, window) if c not in skip]


def targeted_seeds(kernel: BracketKernel, pool: list) -> list[tuple[str, dict]]:
    """Seeds shaped like the ones the proofs start from."""
    out = []
    by_len = sorted(pool, key=lambda c: (sum(abs(a) for a in column_key(kernel, c).alpha), column_order(c)))
    if by_len:
        out.append(("basis_key", {by_len[0]: 1}))
    lam = {}
    for c in by_len:
        lam.setdefault(kernel.phi(column_key(kernel, c).alpha)[0], c)
        if len(lam) >= 3:
            break
    if len(lam) >= 2:
        out.append(("eigencomponent_mixture", {c: i + 1 for i, c in enumerate(lam.values())}))
    return out


def _probe_one(kernel, seed, window, quotient, targets, special) -> dict:
    st = ideal_closure(kernel, seed, window, quotient=quotient, expect=targets)
    cov = st.covered(kernel, targets)
    rec = {
        "seed": [dict(_col_json(c), coeff=_fs(v)) for c, v in sorted(seed.items(), key=lambda kv: column_order(kv[0]))],
        "rank": st.current.rank,
        "covered": len(cov),
        "targets": len(targets),
        "full": len(cov) == len(targets),
        "sweeps": st.sweeps,
        "saturated": st.saturated,
        **st.leakage(),
    }
    if special:
        rec["gained_special"] = [
            _col_json(c) for c in special if not st.current.coordinate_vanishes(c)
        ]
    return rec


def _fs(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def simplicity_probe(kernel: BracketKernel, window: Window, trials: int, seed: int, targeted: bool = True) -> dict:
    """Random and targeted closures; reports coverage of the window.

    For all-zero profiles where sigma_2 (Class I) or rho (Class II) exists the
    probe runs in derived mode: seeds avoid the exceptional key, closures are
    unquotiented, and the report records whether that coordinate is ever hit.
    """
    rng = make_rng(seed)
    special = excluded_columns(kernel, window) if not kernel.is_super else []
    derived_mode = bool(special)
    quotient = not derived_mode
    targets = target_columns(kernel, window, quotient)
    pool = list(targets)
    records = []
    for _ in range(trials):
        s = random_seed_from_pool(rng, pool)
        records.append(_probe_one(kernel, s, window, quotient, targets, special))
    tgt = []
    if targeted:
        for name, s in targeted_seeds(kernel, pool):
            r = _probe_one(kernel, s, window, quotient, targets, special)
            r["kind"] = name
            tgt.append(r)
    full = sum(r["full"] for r in records)
    return {
        "mode": "derived" if derived_mode else "quotient",
        "window": window.to_json(),
        "margin": margin(kernel),
        "rng": RNG_ALGORITHM,
        "trials": trials,
        "full_coverage": full,
        "fraction": (full / trials) if trials else None,
        "special_gained": any(r.get("gained_special") for r in records + tgt),
        "seeds": records,
        "targeted": tgt,
        "verdict": "window-closure",
    }


# ------------------------------------------------------- ad_1 eigencomponents


def ad_one_eigenvalue(kernel: BracketKernel, col) -> Fraction:
    """Diagonal coefficient of ad_1 at ``col`` (its generalized eigenvalue)."""
    one = (EVEN, kernel.one_key) if kernel.is_super else kernel.one_key
    return Fraction(column_bracket(kernel, one, col).get(col, 0))


def eigencomponents(kernel: BracketKernel, vec: dict) -> dict:
    parts: dict = {}
    for c, v in vec.items():
        parts.setdefault(ad_one_eigenvalue(kernel, c), {})[c] = v
    return {lam: parts[lam] for lam in sorted(parts)}


class NotAMember(ValueError):
    pass


def eigencomponent_membership(kernel: BracketKernel, state: ClosureState, vec: dict) -> dict:
    """Membership of every ad_1 eigencomponent of ``vec`` in the closure.

    Returns {"stable": bool | None, "components": {lambda: bool}}; stable is
    None (indeterminate) when ad_1 pushes a row out of the window.

    Components are taken with respect to the diagonal part of ad_1; its
    off-diagonal part only lowers multi-indices, so these are the
    generalized eigenspaces.
    """
    if not state.current.contains(vec):
        raise NotAMember("vector is not in the closure")
    one = (EVEN, kernel.one_key) if kernel.is_super else kernel.one_key
    win = state.window
    stable = True
    leaks = []
    for p, row in state.current.matrix():
        img = {c: v for c, v in _bracket_vec(kernel, one, row).items() if c not in state.dropped}
        if any(not win.contains(column_key(kernel, c)) for c in img):
            leaks.append(p)
            continue
        if not state.current.contains(img):
            stable = False
            break
    if leaks:
        return {"stable": None, "components": {}, "leaks": len(leaks)}
    comps = eigencomponents(kernel, vec)
    res = {lam: state.current.contains(part) for lam, part in comps.items()} if stable else {}
    return {"stable": stable, "components": res}
