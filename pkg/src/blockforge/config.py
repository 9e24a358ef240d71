"""Algebra configurations, JSON parsing and hypothesis checks."""

from __future__ import annotations

import enum
import hashlib
import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from blockforge.linalg import Underdetermined, integer_multiple, nullspace, rank, solve_unique

DEFAULT_SEARCH_RADIUS = 5


class AlgebraClass(str, enum.Enum):
    BLOCK0 = "block0"
    CLASS_I = "class1"
    CLASS_II = "class2"
    CLASS_III = "class3"


class Flag(str, enum.Enum):
    FULL = "full"
    ZERO = "zero"


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNDECIDED = "UNDECIDED"


class ConfigError(ValueError):
    """Malformed configuration (parse or dimension error)."""


N_HOMS = {
    AlgebraClass.BLOCK0: 2,
    AlgebraClass.CLASS_I: 2,
    AlgebraClass.CLASS_II: 4,
    AlgebraClass.CLASS_III: 2,
}


@dataclass(frozen=True)
class AlgebraConfig:
    cls: AlgebraClass
    rank: int
    phi: tuple[tuple[Fraction, ...], ...]
    profile: tuple[Flag, ...]
    alpha0: tuple[int, ...] | None = None
    epsilon: int | None = None
    # user-supplied witnesses, keyed by check name, e.g. "kernel_escape"
    witnesses: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...] = ()
    # allow phi_2 == 0 with J_2 = {0} in Class I (rank-one Witt type)
    witt: bool = False
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.phi)

    def phi_at(self, p: int, alpha: Sequence[int]) -> Fraction:
        """phi_p(alpha) with p counted from 1."""
        return sum((c * a for c, a in zip(self.phi[p - 1], alpha)), Fraction(0))

    def phis(self, alpha: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(self.phi_at(p, alpha) for p in range(1, self.n + 1))

    def full(self, p: int) -> bool:
        return self.profile[p - 1] is Flag.FULL

    @property
    def all_zero(self) -> bool:
        return all(f is Flag.ZERO for f in self.profile)

    def witness(self, name: str):
        for k, v in self.witnesses:
            if k == name:
                return v
        return None

    def check_structure(self):
        want = N_HOMS[self.cls]
        if len(self.phi) != want:
            raise ConfigError(f"{self.cls.value} needs {want} homomorphisms, got {len(self.phi)}")
        if len(self.profile) != want:
            raise ConfigError(f"profile has {len(self.profile)} flags, expected {want}")
        if self.rank < 0:
            raise ConfigError("rank must be >= 0")
        for p, row in enumerate(self.phi, 1):
            if len(row) != self.rank:
                raise ConfigError(f"phi_{p} has length {len(row)}, rank is {self.rank}")
        if self.cls in (AlgebraClass.CLASS_II, AlgebraClass.CLASS_III):
            if self.alpha0 is None or len(self.alpha0) != self.rank:
                raise ConfigError("alpha0 missing or of wrong length")
        if self.cls is AlgebraClass.CLASS_III and self.epsilon not in (0, 1):
            raise ConfigError("epsilon must be 0 or 1")
        if self.cls is AlgebraClass.BLOCK0 and not self.all_zero:
            raise ConfigError("block0 carries no multi-indices; profile must be all zero")
        for name, vecs in self.witnesses:
            for v in vecs:
                if v is not None and len(v) != self.rank:
                    raise ConfigError(f"witness {name} has wrong length")

    def to_json(self) -> dict:
        out = {
            "class": self.cls.value,
            "rank": self.rank,
            "phi": [[_frac_str(x) for x in row] for row in self.phi],
            "profile": [f.value for f in self.profile],
        }
        if self.alpha0 is not None:
            out["alpha0"] = list(self.alpha0)
        if self.epsilon is not None:
            out["epsilon"] = self.epsilon
        if self.witnesses:
            out["witnesses"] = {
                k: [None if v is None else list(v) for v in vs] for k, vs in self.witnesses
            }
        if self.witt:
            out["witt"] = True
        if self.name:
            out["name"] = self.name
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_RAT = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(tok, where: str = "") -> Fraction:
    if isinstance(tok, bool):
        raise ConfigError(f"{where}: boolean is not a rational")
    if isinstance(tok, int):
        return Fraction(tok)
    if isinstance(tok, str) and _RAT.match(tok.strip()):
        val = Fraction(tok.strip())
        return val
    raise ConfigError(f"{where}: expected exact rational 'p/q', got {tok!r}")


def _int_vec(v, where: str) -> tuple[int, ...]:
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise ConfigError(f"{where}: expected list of integers, got {v!r}")
    return tuple(v)


def _reject_float(s: str):
    raise ConfigError(f"floating-point literal {s!r} not allowed")


def loads_json(text: str):
    """json.loads that refuses float literals."""
    try:
        return json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as e:
        raise ConfigError(f"line {e.lineno} column {e.colno}: {e.msg}") from e


def config_from_dict(d: dict) -> AlgebraConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    try:
        cls = AlgebraClass(d["class"])
    except KeyError:
        raise ConfigError("missing field 'class'") from None
    except ValueError:
        raise ConfigError(f"unknown class {d['class']!r}") from None
    if "rank" not in d or isinstance(d["rank"], bool) or not isinstance(d["rank"], int):
        raise ConfigError("field 'rank' must be an integer")
    phi_raw = d.get("phi")
    if not isinstance(phi_raw, list) or not all(isinstance(r, list) for r in phi_raw):
        raise ConfigError("field 'phi' must be an array of arrays")
    phi = tuple(
        tuple(parse_rational(x, f"phi[{p}][{j}]") for j, x in enumerate(row))
        for p, row in enumerate(phi_raw)
    )
    prof_raw = d.get("profile")
    if not isinstance(prof_raw, list):
        raise ConfigError("field 'profile' must be an array")
    try:
        profile = tuple(Flag(x) for x in prof_raw)
    except ValueError:
        raise ConfigError(f"profile entries must be 'full' or 'zero': {prof_raw!r}") from None
    alpha0 = _int_vec(d["alpha0"], "alpha0") if d.get("alpha0") is not None else None
    eps = d.get("epsilon")
    if eps is not None and (isinstance(eps, bool) or not isinstance(eps, int)):
        raise ConfigError("epsilon must be 0 or 1")
    wit = []
    for k, vs in sorted((d.get("witnesses") or {}).items()):
        wit.append((k, tuple(None if v is None else _int_vec(v, f"witnesses.{k}") for v in vs)))
    cfg = AlgebraConfig(
        cls=cls,
        rank=d["rank"],
        phi=phi,
        profile=profile,
        alpha0=alpha0,
        epsilon=eps,
        witnesses=tuple(wit),
        witt=bool(d.get("witt", False)),
        name=str(d.get("name", "")),
    )
    cfg.check_structure()
    return cfg


def load_config(path) -> AlgebraConfig:
    return config_from_dict(loads_json(Path(path).read_text()))


def shipped_config_path(name: str) -> Path:
    return Path(__file__).parent / "data" / "configs" / f"{name}.json"


def shipped_config(name: str) -> AlgebraConfig:
    return load_config(shipped_config_path(name))


def shipped_config_names() -> list[str]:
    return sorted(p.stem for p in (Path(__file__).parent / "data" / "configs").glob("*.json"))


# ---------------------------------------------------------------- validation


@dataclass
class Check:
    name: str
    status: Status
    detail: str = ""
    witness: list | None = None
    enforced: bool = True

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status.value, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        if not self.enforced:
            out["enforced"] = False
        return out


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status is Status.PASS for c in self.checks if c.enforced)

    @property
    def undecided(self) -> bool:
        enforced = [c for c in self.checks if c.enforced]
        return not any(c.status is Status.FAIL for c in enforced) and any(
            c.status is Status.UNDECIDED for c in enforced
        )

    def exit_code(self) -> int:
        if self.ok:
            return 0
        return 2 if self.undecided else 1

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


def box(rank_: int, radius: int):
    """Integer vectors with all |coordinates| <= radius, ordered by max norm then lexicographic."""
    pts = list(itertools.product(range(-radius, radius + 1), repeat=rank_))
    pts.sort(key=lambda v: (max((abs(x) for x in v), default=0), sum(abs(x) for x in v), v))
    return pts


def _search(cfg: AlgebraConfig, pred, radius: int):
    for v in box(cfg.rank, radius):
        if pred(v):
            return v
    return None


def _kernel_lattice_vectors(cfg: AlgebraConfig, ps: Sequence[int]) -> list[list[int]]:
    """Integer vectors spanning the rational kernel of the rows ps."""
    rows = [cfg.phi[p - 1] for p in ps]
    return [integer_multiple(v) for v in nullspace(rows, cfg.rank)]


def validate_config(cfg: AlgebraConfig, radius: int = DEFAULT_SEARCH_RADIUS) -> ValidationReport:
    cfg.check_structure()
    rep = ValidationReport()
    n = cfg.n

    # every homomorphism is nonzero, with the declared relaxations
    for p in range(1, n + 1):
        relaxed = (cfg.cls is AlgebraClass.CLASS_III and cfg.epsilon == 1 and p != 1) or (
            cfg.cls is AlgebraClass.CLASS_I and cfg.witt and p == 2
        )
        if cfg.cls is AlgebraClass.BLOCK0 or cfg.full(p) or relaxed:
            continue
        nz = any(cfg.phi[p - 1])
        rep.checks.append(
            Check(
                f"phi_nonzero[{p}]",
                Status.PASS if nz else Status.FAIL,
                "phi_p is not identically zero" if nz else f"phi_{p} == 0 while J_{p} = {{0}}",
            )
        )

    # joint kernel is trivial, i.e. the n x r matrix has rank r
    rk = rank(cfg.phi) if cfg.rank else 0
    ok = rk == cfg.rank
    ker = None if ok else _kernel_lattice_vectors(cfg, range(1, n + 1))[0]
    rep.checks.append(
        Check(
            "joint_kernel_trivial",
            Status.PASS if ok else Status.FAIL,
            f"rank {rk} of {cfg.rank}",
            witness=None if ok else ker,
        )
    )
    if not ok:
        return rep

    if cfg.cls is AlgebraClass.BLOCK0:
        rep.checks.append(_block_condition(cfg, radius))
    elif cfg.cls is AlgebraClass.CLASS_II:
        rep.checks.extend(_class2_checks(cfg, radius))
    elif cfg.cls is AlgebraClass.CLASS_III and cfg.epsilon == 0:
        rep.checks.extend(_class3_checks(cfg))
    return rep


def _block_condition(cfg: AlgebraConfig, radius: int) -> Check:
    # phi_1(alpha) != 2 on ker phi; reported only
    try:
        sol = find_special_element(cfg, [(1, 0), (2, 2)])
        st = Status.FAIL if sol is not None else Status.PASS
        return Check("block_condition", st, "unique-solution test", list(sol) if sol else None, enforced=False)
    except Underdetermined:
        hit = _search(cfg, lambda v: cfg.phi_at(1, v) == 0 and cfg.phi_at(2, v) == 2, radius)
        st = Status.FAIL if hit is not None else Status.UNDECIDED
        return Check("block_condition", st, f"box radius {radius}", list(hit) if hit else None, enforced=False)


def _check_vector(cfg, name, pred, user, radius, fallback=None) -> Check:
    if user is not None:
        if pred(user):
            return Check(name, Status.PASS, "supplied witness verified", list(user))
        return Check(name, Status.FAIL, "supplied witness does not satisfy the condition", list(user))
    hit = _search(cfg, pred, radius)
    if hit is not None:
        return Check(name, Status.PASS, f"box search radius {radius}", list(hit))
    if fallback is not None:
        return fallback()
    return Check(name, Status.UNDECIDED, f"no witness in box of radius {radius}")


def _class2_checks(cfg: AlgebraConfig, radius: int) -> list[Check]:
    out = []
    a0 = cfg.alpha0
    esc = cfg.witness("kernel_escape") or [None] * 4
    img = cfg.witness("alpha0_image") or [None] * 4
    for p in range(1, 5):
        others = [q for q in range(1, 5) if q != p]

        def pred(v, p=p, others=others):
            return any(v) and all(cfg.phi_at(q, v) == 0 for q in others) and cfg.phi_at(p, v) != 0

        def exact(p=p, others=others):
            # integer points are dense in the rational kernel, so a basis decides it
            for v in _kernel_lattice_vectors(cfg, others):
                if cfg.phi_at(p, v) != 0:
                    return Check(f"kernel_escape[{p}]", Status.PASS, "kernel lattice vector", v)
            return Check(f"kernel_escape[{p}]", Status.FAIL, "phi_p vanishes on the joint kernel of the others")

        out.append(_check_vector(cfg, f"kernel_escape[{p}]", pred, esc[p - 1], radius, exact))

    phi12 = any(cfg.phi_at(p, a0) for p in (1, 2))
    phi34 = any(cfg.phi_at(p, a0) for p in (3, 4))
    out.append(
        Check(
            "alpha0_generic",
            Status.PASS if phi12 and phi34 else Status.FAIL,
            "alpha0 outside ker phi1 & ker phi2 and ker phi3 & ker phi4",
            list(a0),
        )
    )
    for p in range(1, 5):
        kill = (3, 4) if p <= 2 else (1, 2)

        def pred(v, p=p, kill=kill):
            return all(cfg.phi_at(q, v) == 0 for q in kill) and cfg.phi_at(p, v) == cfg.phi_at(p, a0)

        out.append(_check_vector(cfg, f"alpha0_image[{p}]", pred, img[p - 1], radius))
    return out


def _class3_checks(cfg: AlgebraConfig) -> list[Check]:
    out = [
        Check(
            "alpha0_nonzero",
            Status.PASS if any(cfg.alpha0) else Status.FAIL,
            "epsilon = 0 requires alpha0 != 0",
        )
    ]
    for p, q in ((1, 2), (2, 1)):
        name = f"kernel_not_contained[{p}]"
        if not any(cfg.phi[q - 1]):
            out.append(Check(name, Status.PASS, f"phi_{q} == 0, condition vacuous"))
            continue
        hit = next((v for v in _kernel_lattice_vectors(cfg, [p]) if cfg.phi_at(q, v) != 0), None)
        if hit is None:
            out.append(Check(name, Status.FAIL, f"ker phi_{p} inside ker phi_{q}"))
        else:
            out.append(Check(name, Status.PASS, "kernel lattice vector", hit))
    return out


def find_special_element(cfg: AlgebraConfig, constraints) -> tuple[int, ...] | None:
    """Integer alpha with phi_p(alpha) = target for each (p, target), or None.

    Raises Underdetermined if the rational system has more than one solution.
    """
    for p, _ in constraints:
        if not 1 <= p <= cfg.n:
            raise ValueError(f"homomorphism index {p} out of range")
    if cfg.rank == 0:
        ok = all(Fraction(t) == 0 for _, t in constraints)
        return () if ok else None
    rows = [cfg.phi[p - 1] for p, _ in constraints]
    rhs = [Fraction(t) for _, t in constraints]
    sol = solve_unique(rows, rhs)
    if sol is None or any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)
