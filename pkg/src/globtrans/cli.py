"""The ``gt`` command."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from .engine import batch_step, iterate, run_online
from .matching import find_monos, is_isomorphic
from .presheaf import Presheaf, StructureError, validate_presheaf
from .rules import InvalidRuleSystem, RuleSystem, check_incremental, validate_rule_system
from .serialize import (FormatError, components_to_json, load_presheaf, load_rule_system,
                        presheaf_to_json, write_json)

OK, IO_ERROR, NOT_INCREMENTAL, INVALID, MISMATCH = 0, 1, 2, 3, 4


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _load_rules(path: str) -> RuleSystem:
    try:
        return load_rule_system(path)
    except (OSError, FormatError) as exc:
        raise _Exit(IO_ERROR, f"cannot read {path}: {exc}") from exc
    except (StructureError, InvalidRuleSystem) as exc:
        raise _Exit(INVALID, f"{path}: {exc}") from exc


def _load_input(path: str, rs: RuleSystem) -> Presheaf:
    try:
        p = load_presheaf(path, rs.base)
    except (OSError, FormatError) as exc:
        raise _Exit(IO_ERROR, f"cannot read {path}: {exc}") from exc
    except StructureError as exc:
        raise _Exit(INVALID, f"{path}: {exc}") from exc
    v = validate_presheaf(rs.base, p)
    if v is not None:
        raise _Exit(INVALID, f"{path}: {v}")
    return p


def _require_valid(rs: RuleSystem) -> RuleSystem:
    report = validate_rule_system(rs)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if not report.ok:
        raise _Exit(INVALID, "\n".join(f"error: {e}" for e in report.errors))
    return rs.closed()


def _require_incremental(rs: RuleSystem) -> None:
    cex = check_incremental(rs)
    if cex is not None:
        raise _Exit(NOT_INCREMENTAL, f"not incremental: {cex}")


def _write(path: str, p: Presheaf) -> None:
    try:
        write_json(path, presheaf_to_json(p))
    except OSError as exc:
        raise _Exit(IO_ERROR, f"cannot write {path}: {exc}") from exc


def _counts(p: Presheaf) -> str:
    return " ".join(f"{o}={p.count(o)}" for o in p.base.objects)


def cmd_check(args) -> int:
    rs = _require_valid(_load_rules(args.rules))
    cex = check_incremental(rs)
    if cex is not None:
        print("not incremental")
        print(f"rule: {cex.rule}")
        print(f"cospan: {cex.sub_rule1} --{cex.inclusion1}--> {cex.rule} "
              f"<--{cex.inclusion2}-- {cex.sub_rule2}")
        print(f"object: {cex.obj}")
        print(f"elements: {cex.element1} {cex.element2}")
        return NOT_INCREMENTAL
    print("incremental")
    return OK


def cmd_run(args) -> int:
    if args.steps < 0:
        raise _Exit(IO_ERROR, "--steps must be non-negative")
    rs = _load_rules(args.rules)
    p = _load_input(args.input, rs)
    rs = _require_valid(rs)
    if not args.unchecked:
        _require_incremental(rs)
    _write(args.output, iterate(rs, p, args.steps))
    return OK


def cmd_oracle(args) -> int:
    rs = _load_rules(args.rules)
    p = _load_input(args.input, rs)
    rs = _require_valid(rs)
    _write(args.output, batch_step(rs, p).apex)
    return OK


def cmd_compare(args) -> int:
    rs = _load_rules(args.rules)
    p = _load_input(args.input, rs)
    rs = _require_valid(rs)
    if not args.unchecked:
        _require_incremental(rs)
    run = run_online(rs, p)
    batch = batch_step(rs, p).apex
    print(f"online: {_counts(run.result)}")
    print(f"batch: {_counts(batch)}")
    if run.non_mono_pushouts:
        print(f"non-mono gluing steps: {' '.join(map(str, run.non_mono_pushouts))}")
    if is_isomorphic(run.result, batch) is None:
        print("mismatch")
        return MISMATCH
    print("isomorphic")
    return OK


def cmd_match(args) -> int:
    rs = _load_rules(args.rules)
    pattern = _load_input(args.pattern, rs)
    target = _load_input(args.target, rs)
    monos = find_monos(pattern, target)
    print(len(monos))
    for f in monos:
        print(json.dumps(components_to_json(f), sort_keys=True, ensure_ascii=False))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gt", description="Global transformations of presheaves.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log engine progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a rule system and decide incrementality")
    p.add_argument("--rules", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("run", help="apply the online step repeatedly")
    p.add_argument("--rules", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--unchecked", action="store_true", help="skip the incrementality check")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="apply one batch (colimit) step")
    p.add_argument("--rules", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="check that online and batch steps agree")
    p.add_argument("--rules", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--unchecked", action="store_true", help="skip the incrementality check")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("match", help="list monomorphisms from a pattern into a target")
    p.add_argument("--pattern", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--rules", required=True, help="rule system supplying the base category")
    p.set_defaults(func=cmd_match)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return IO_ERROR if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except _Exit as exc:
        if str(exc):
            print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
