"""Command line interface.

Exit codes: 0 success (Exists / irreducible point), 1 NotExists,
2 Unknown, 3 usage, I/O or parse error, 4 construction failed,
5 relations hold but the point is reducible, 6 a relation fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .freealg import Presentation
from .groebner import Budget
from .parser import ParseError, parse_point, parse_presentation
from .pipeline import (ConstructionBudgetExceeded, ConstructionFailed, Status, construct, decide,
                       load_point, verify)
from .polyring import parse_field

EXIT_EXISTS, EXIT_NOT_EXISTS, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3
EXIT_CONSTRUCTION_FAILED, EXIT_REDUCIBLE, EXIT_RELATION_FAILS = 4, 5, 6

_STATUS_CODE = {Status.EXISTS: EXIT_EXISTS, Status.NOT_EXISTS: EXIT_NOT_EXISTS,
                Status.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str
    point: str | None = None
    strategy: str = "trace"
    field: str | None = None
    budget_spairs: int | None = None
    budget_seconds: float | None = None
    seed: int = 0
    json: bool = False
    verbose: int = 0
    output: str | None = None
    witnesses: tuple = ()
    max_candidates: int | None = None
    workers: int = 1

    def __post_init__(self):
        if self.budget_spairs is not None and self.budget_spairs <= 0:
            raise UsageError("--budget-spairs must be positive")
        if self.budget_seconds is not None and self.budget_seconds <= 0:
            raise UsageError("--budget-seconds must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise UsageError("--workers must be positive")

    def budget(self) -> Budget:
        """Per-run S-pair limit and a deadline for the whole command."""
        return Budget(max_spairs=self.budget_spairs, seconds=self.budget_seconds)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="irrep", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, point=False):
        p.add_argument("input", help="presentation file")
        if point:
            p.add_argument("point", help="point file")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--field", help="override the field, e.g. QQ or GF(32003)")
        p.add_argument("-v", "--verbose", action="count", default=0)

    def solving(p):
        p.add_argument("--strategy", choices=("trace", "det", "commutator"), default="trace")
        p.add_argument("--budget-spairs", type=int, help="S-pair limit per Groebner run")
        p.add_argument("--budget-seconds", type=float, help="wall-clock limit for the decision")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-candidates", type=int, help="stop after this many tests")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("decide", help="decide whether an irreducible representation exists")
    common(p)
    solving(p)
    p = sub.add_parser("construct", help="decide, then construct a representation")
    common(p)
    solving(p)
    p.add_argument("-o", "--output", help="write the point file here")
    p = sub.add_parser("verify", help="check a point file against a presentation")
    common(p, point=True)
    p.add_argument("--witness", action="append", default=[],
                   help="descriptor to evaluate, e.g. 'tr[X * s2(Y,Z)]' (repeatable)")
    p = sub.add_parser("print", help="re-emit the presentation in canonical form")
    common(p)
    return ap


def _config(ns) -> RunConfig:
    return RunConfig(
        command=ns.command, input=ns.input, point=getattr(ns, "point", None),
        strategy=getattr(ns, "strategy", "trace"), field=ns.field,
        budget_spairs=getattr(ns, "budget_spairs", None),
        budget_seconds=getattr(ns, "budget_seconds", None), seed=getattr(ns, "seed", 0),
        json=ns.json, verbose=ns.verbose, output=getattr(ns, "output", None),
        witnesses=tuple(getattr(ns, "witness", ())),
        max_candidates=getattr(ns, "max_candidates", None), workers=getattr(ns, "workers", 1))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_presentation(cfg: RunConfig) -> Presentation:
    pres = parse_presentation(_read(cfg.input))
    if cfg.field:
        try:
            pres = pres.with_field(parse_field(cfg.field))
        except ZeroDivisionError as e:
            raise UsageError(f"relations are not defined over {cfg.field}: {e}") from None
    return pres


# --------------------------------------------------------------------------
# commands


def cmd_decide(cfg: RunConfig) -> tuple[int, dict]:
    pres = load_presentation(cfg)
    rep = decide(pres, cfg.strategy, cfg.budget(), seed=cfg.seed,
                 max_candidates=cfg.max_candidates, workers=cfg.workers)
    return _STATUS_CODE[rep.status], {"decision": rep.as_dict()}


def cmd_construct(cfg: RunConfig) -> tuple[int, dict]:
    pres = load_presentation(cfg)
    rep = decide(pres, cfg.strategy, cfg.budget(), seed=cfg.seed,
                 max_candidates=cfg.max_candidates, workers=cfg.workers)
    out: dict = {"decision": rep.as_dict()}
    if rep.status is not Status.EXISTS:
        return _STATUS_CODE[rep.status], out
    try:
        pt = construct(pres, report=rep, budget=cfg.budget(), seed=cfg.seed)
    except ConstructionFailed as e:
        out["construction_error"] = str(e)
        return EXIT_CONSTRUCTION_FAILED, out
    except ConstructionBudgetExceeded as e:
        out["construction_error"] = f"budget exhausted: {e}"
        return EXIT_UNKNOWN, out
    out["point"] = pt.as_dict()
    out["point_file"] = pt.to_text()
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(pt.to_text())
    return EXIT_EXISTS, out


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    pres = load_presentation(cfg)
    try:
        spec = parse_point(_read(cfg.point), pres.field if cfg.field else None)
        if cfg.field:
            spec.field = pres.field
        pt = load_point(spec, pres)
    except (ParseError, OSError) as e:
        raise UsageError(f"{cfg.point}: {e}") from None
    try:
        rep = verify(pres, pt, cfg.witnesses)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if not rep.relations_hold:
        code = EXIT_RELATION_FAILS
    elif not rep.irreducible:
        code = EXIT_REDUCIBLE
    else:
        code = EXIT_EXISTS
    return code, {"verification": rep.as_dict()}


def cmd_print(cfg: RunConfig) -> tuple[int, dict]:
    pres = load_presentation(cfg)
    return 0, {"presentation": pres.to_text()}


COMMANDS = {"decide": cmd_decide, "construct": cmd_construct, "verify": cmd_verify,
            "print": cmd_print}


# --------------------------------------------------------------------------
# output


def _human(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_human(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                sub = _human(item, indent + 2)
                sub[0] = pad + "  - " + sub[0].lstrip()
                lines.extend(sub)
        elif isinstance(v, str) and "\n" in v:
            lines.append(f"{pad}{k}: |")
            lines.extend(pad + "  " + ln for ln in v.rstrip("\n").split("\n"))
        else:
            lines.append(f"{pad}{k}: {v}")
    return lines


def _trim(payload: dict, verbose: int) -> dict:
    """Human output drops per-candidate records unless ``-v`` is given."""
    if verbose or "decision" not in payload:
        return payload
    out = dict(payload)
    dec = dict(out["decision"])
    dec["candidates"] = f"{len(dec['candidates'])} tested (use -v to list)"
    out["decision"] = dec
    return out


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    payload: dict
    try:
        cfg = _config(ns)
        code, payload = COMMANDS[cfg.command](cfg)
    except (ParseError, UsageError, OSError, ValueError) as e:
        msg = str(e) if isinstance(e, UsageError) else f"{ns.input}: {e}"
        code, payload = EXIT_USAGE, {"error": msg}
    report = {"command": ns.command, "exit_code": code, **payload}
    if ns.json:
        print(json.dumps(report, indent=2, sort_keys=False))
    elif ns.command == "print" and code == 0:
        sys.stdout.write(payload["presentation"])
    else:
        print("\n".join(_human(_trim(report, ns.verbose))))
    if code == EXIT_USAGE:
        print(payload.get("error", "error"), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
