"""Command-line front end: blockforge validate | bracket | probe | realize-check | report."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from blockforge import ENGINE_VERSION
from blockforge.algebra import Element, SuperElement, Window
from blockforge.brackets import BracketKernel
from blockforge.config import (
    AlgebraClass,
    ConfigError,
    load_config,
    loads_json,
    shipped_config_names,
    shipped_config_path,
    validate_config,
)
from blockforge.sampling import RNG_ALGORITHM

SECTIONS = ("jacobi", "centers", "derived", "closure")
EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED = 0, 1, 2


class CliError(Exception):
    pass


def threads() -> int:
    """Parallelism cap from BLOCKFORGE_THREADS (default 1)."""
    raw = os.environ.get("BLOCKFORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise CliError(f"BLOCKFORGE_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise CliError(f"BLOCKFORGE_THREADS must be a positive integer, got {raw!r}")
    return n


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def manifest(command: str, **fields) -> dict:
    m = {"command": command, "engine_version": ENGINE_VERSION}
    m.update(fields)
    return m


def emit(doc: dict, out: str | None) -> None:
    """Print the report; with ``out`` also write it once.

    An existing file is never rewritten: identical content is accepted as a
    reproduction, different content is an error.
    """
    text = dumps(doc)
    if out:
        p = Path(out)
        if p.exists():
            if p.read_text() != text:
                raise CliError(f"{out} exists with different content; reports are not overwritten")
        else:
            p.write_text(text)
    sys.stdout.write(text)


def _load_cfg(path: str):
    """Config from a file, or a shipped config by name."""
    if not Path(path).exists() and path in shipped_config_names():
        path = str(shipped_config_path(path))
    try:
        return load_config(path)
    except OSError as e:
        raise CliError(f"{path}: {e.strerror}") from None
    except ConfigError as e:
        raise CliError(f"{path}: {e}") from None


# -------------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    cfg = _load_cfg(args.config)
    rep = validate_config(cfg, radius=args.radius)
    doc = {
        "manifest": manifest("validate", config=args.config, config_hash=cfg.digest(), output=args.out),
        "checks": rep.to_json(),
        "exit_code": rep.exit_code(),
    }
    emit(doc, args.out)
    return rep.exit_code()


def _read_element(path: str, cfg):
    try:
        data = loads_json(Path(path).read_text())
    except OSError as e:
        raise CliError(f"{path}: {e.strerror}") from None
    except ConfigError as e:
        raise CliError(f"{path}: {e}") from None
    is_super = cfg.cls is AlgebraClass.CLASS_III
    if is_super != isinstance(data, dict):
        want = "an object with 'even'/'odd'" if is_super else "a list of terms"
        raise CliError(f"{path}: element for a {cfg.cls.value} config must be {want}")
    try:
        return SuperElement.from_json(data, cfg) if is_super else Element.from_json(data, cfg)
    except ConfigError as e:
        raise CliError(f"{path}: {e}") from None


def cmd_bracket(args) -> int:
    cfg = _load_cfg(args.config)
    u = _read_element(args.u, cfg)
    v = _read_element(args.v, cfg)
    kernel = BracketKernel(cfg)
    res = kernel.superbracket(u, v) if kernel.is_super else kernel.bracket(u, v)
    doc = {
        "manifest": manifest(
            "bracket", config=args.config, config_hash=cfg.digest(), u=args.u, v=args.v, output=args.out
        ),
        "result": res.to_json(),
    }
    emit(doc, args.out)
    return EXIT_OK


def _section_centers(kernel, window) -> dict:
    from blockforge.structure import central_elements

    res = central_elements(kernel, window)
    d = res.to_json()
    if len(res.predicted_in_window) < len(res.predicted):
        d["status"] = "OUT_OF_WINDOW" if res.basis.rank == 0 or res.matches else "FAIL"
    else:
        d["status"] = "PASS" if res.matches else "FAIL"
    return d


def _section_derived(kernel, window) -> dict:
    from blockforge.structure import decomposition_check

    claims = [c.to_json() for c in decomposition_check(kernel, window)]
    sts = {c["status"] for c in claims}
    if "FAIL" in sts:
        st = "FAIL"
    elif "PASS" in sts:
        st = "PASS"
    else:
        st = sorted(sts)[0]
    return {"window": window.to_json(), "claims": claims, "status": st}


def _section_closure(kernel, window, trials, seed) -> dict:
    from blockforge.ideals import simplicity_probe

    if trials == 0:
        return {"status": "SKIPPED", "detail": "no trials requested"}
    rep = simplicity_probe(kernel, window, trials, seed)
    # no simplicity statement is made for the classical family here
    claim = "none" if kernel.cfg.cls is AlgebraClass.BLOCK0 else rep["mode"]
    rep["claim"] = claim
    every = rep["seeds"] + rep["targeted"]
    ok = all(r["full"] for r in every) and not rep["special_gained"]
    if claim == "none":
        rep["status"] = "NO_CLAIM"
    else:
        rep["status"] = "PASS" if ok else "FAIL"
    return rep


def cmd_probe(args) -> int:
    from blockforge.structure import jacobi_suite

    cfg = _load_cfg(args.config)
    sections = args.sections.split(",") if args.sections else list(SECTIONS)
    bad = [s for s in sections if s not in SECTIONS]
    if bad:
        raise CliError(f"unknown section(s) {bad}; choose from {list(SECTIONS)}")
    sections = [s for s in SECTIONS if s in sections]
    threads()
    window = Window(args.window[0], args.window[1])
    val = validate_config(cfg)
    doc = {
        "manifest": manifest(
            "probe",
            config=args.config,
            config_hash=cfg.digest(),
            window=window.to_json(),
            trials=args.trials,
            seed=args.seed,
            triples=args.triples,
            sections=sections,
            rng=RNG_ALGORITHM,
            output=args.out,
        ),
        "validation": {"checks": val.to_json(), "exit_code": val.exit_code()},
        "sections": {},
    }
    if val.exit_code() == EXIT_FAIL:
        for s in sections:
            doc["sections"][s] = {"status": "NOT_APPLICABLE", "detail": "config failed validation"}
        emit(doc, args.out)
        return EXIT_FAIL
    kernel = BracketKernel(cfg)
    for s in sections:
        if s == "jacobi":
            doc["sections"][s] = jacobi_suite(kernel, window, args.triples, args.seed)
        elif s == "centers":
            doc["sections"][s] = _section_centers(kernel, window)
        elif s == "derived":
            doc["sections"][s] = _section_derived(kernel, window)
        else:
            doc["sections"][s] = _section_closure(kernel, window, args.trials, args.seed)
    failed = any(d.get("status") == "FAIL" for d in doc["sections"].values())
    code = EXIT_FAIL if failed else val.exit_code()
    doc["exit_code"] = code
    emit(doc, args.out)
    return code


def _parse_params(items) -> dict:
    out = {}
    for it in items or ():
        name, sep, val = it.partition("=")
        if not sep or not name:
            raise CliError(f"--param expects NAME=VALUE, got {it!r}")
        out[name] = val
    return out


def cmd_realize_check(args) -> int:
    from blockforge.realizations import SpecError, cross_check, load_spec, shipped_spec, shipped_spec_names

    params = _parse_params(args.param)
    threads()
    try:
        if Path(args.spec).suffix == ".json" or os.sep in args.spec:
            spec = load_spec(args.spec, params)
        elif args.spec in shipped_spec_names():
            spec = shipped_spec(args.spec, params)
        else:
            raise CliError(f"unknown spec {args.spec!r}; shipped: {', '.join(shipped_spec_names())}")
    except OSError as e:
        raise CliError(f"{args.spec}: {e.strerror}") from None
    except (SpecError, ValueError) as e:
        if isinstance(e, CliError):
            raise
        raise CliError(f"{args.spec}: {e}") from None
    val = validate_config(spec.config)
    window = Window(*args.window) if args.window else None
    doc = {
        "manifest": manifest(
            "realize-check",
            spec=args.spec,
            params=spec.params,
            config_hash=spec.config.digest(),
            window=(window or Window(int(spec.window["A"]), int(spec.window["K"]))).to_json(),
            trials=args.trials,
            seed=args.seed,
            rng=RNG_ALGORITHM,
            output=args.out,
        ),
        "validation": {"checks": val.to_json(), "exit_code": val.exit_code()},
    }
    if val.exit_code() == EXIT_FAIL:
        doc["status"] = "NOT_APPLICABLE"
        emit(doc, args.out)
        return EXIT_FAIL
    try:
        rep = cross_check(spec, window, args.trials, args.seed)
    except SpecError as e:
        raise CliError(str(e)) from None
    doc["cross_check"] = rep
    doc["status"] = "PASS" if rep["ok"] else "FAIL"
    emit(doc, args.out)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_report(args) -> int:
    docs = []
    for f in args.merge:
        try:
            docs.append(loads_json(Path(f).read_text()))
        except OSError as e:
            raise CliError(f"{f}: {e.strerror}") from None
        except ConfigError as e:
            raise CliError(f"{f}: {e}") from None
    codes = [d.get("exit_code", EXIT_OK) if isinstance(d, dict) else EXIT_OK for d in docs]
    statuses = [d.get("status") for d in docs if isinstance(d, dict)]
    if EXIT_FAIL in codes or "FAIL" in statuses:
        code = EXIT_FAIL
    elif EXIT_UNDECIDED in codes:
        code = EXIT_UNDECIDED
    else:
        code = EXIT_OK
    doc = {
        "manifest": manifest("report", inputs=list(args.merge), output=args.out),
        "reports": docs,
        "exit_code": code,
    }
    emit(doc, args.out)
    return code


# ---------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blockforge", description=__doc__)
    ap.add_argument("--version", action="version", version=f"blockforge {ENGINE_VERSION}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the hypotheses on a config")
    p.add_argument("config")
    p.add_argument("--radius", type=int, default=5, help="half-width of the witness box search")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bracket", help="bracket two element files")
    p.add_argument("config")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("probe", help="Jacobi, centers, derived span and closure probes")
    p.add_argument("config")
    p.add_argument("--window", type=int, nargs=2, metavar=("A", "K"), required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--triples", type=int, default=200, help="random triples for the Jacobi section")
    p.add_argument("--sections", help=f"comma-separated subset of {','.join(SECTIONS)}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("realize-check", help="cross-check a polynomial realization")
    p.add_argument("spec", help="shipped spec name or path to a spec JSON file")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=int, nargs=2, metavar=("A", "K"))
    p.add_argument("--param", action="append", metavar="NAME=VALUE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_realize_check)

    p = sub.add_parser("report", help="merge JSON reports")
    p.add_argument("--merge", nargs="+", required=True, metavar="FILE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("trials", "triples"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"blockforge: error: --{name} must be >= 0", file=sys.stderr)
            return EXIT_FAIL
    if getattr(args, "window", None) and min(args.window) < 0:
        print("blockforge: error: window bounds must be >= 0", file=sys.stderr)
        return EXIT_FAIL
    try:
        return args.func(args)
    except CliError as e:
        print(f"blockforge: error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
