"""Command-line driver.

Exit codes: 0 success, 1 a witness was found, 2 the rule is invalid,
3 a file could not be parsed, 4 the conversion is inexpressible,
5 the exhaustive budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import audit
from .coalition import CoalitionRule
from .domain import ExtElem, Profile
from .fileio import ParseError, dump_rule, load_profile, load_rule, parse_profile
from .median import MedianRule
from .transform import CONVERSION_SAMPLES, InexpressibleConversion, convert_rule

EXIT_OK, EXIT_WITNESS, EXIT_INVALID, EXIT_PARSE, EXIT_INEXPRESSIBLE, EXIT_BUDGET = range(6)
AUDIT_SAMPLES = 10_000


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _load_valid(path: str):
    try:
        rule = load_rule(path)
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from None
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc.strerror}") from None
    rep = rule.validate()
    if not rep.ok:
        lines = [f"{v.code}: {v.message}" for v in rep.violations]
        raise _Exit(EXIT_INVALID, f"{path}: invalid rule\n" + "\n".join(lines))
    return rule


def _budget(args, samples_default: int) -> audit.AuditBudget:
    return audit.AuditBudget(
        max_exhaustive=args.max_exhaustive,
        samples=args.samples if args.samples is not None else samples_default,
        seed=args.seed,
        max_coalition=getattr(args, "max_coalition", 4),
        jobs=args.jobs,
    )


def cmd_validate(args) -> int:
    try:
        rule = load_rule(args.rule)
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{args.rule}: {exc}") from None
    rep = rule.validate()
    if args.json:
        _emit(rep.as_dict())
    else:
        failed = set(rep.codes)
        for code in rep.checked:
            print(f"{code:16s} {'FAIL' if code in failed else 'ok'}")
        for v in rep.violations:
            print(f"violation {v.code}: {v.message}")
        for w in rep.warnings:
            print(f"warning {w.code}: {w.message}")
        if rep.anonymity_failures:
            print("not type-anonymous: " + ", ".join(rep.anonymity_failures))
        print("valid" if rep.ok else "invalid")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_eval(args) -> int:
    rule = _load_valid(args.rule)
    try:
        profile = load_profile(args.profile, rule.space, rule.partition)
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{args.profile}: {exc}") from None
    label = rule.space.label
    out = rule.evaluate(profile)
    print(label(ExtElem.single(out)))
    if args.trace:
        step = rule.first_step(profile.peaks)
        line = f"step1={label(step)}"
        if step.is_pair:
            if isinstance(rule, MedianRule):
                ca, cd = rule.second_step_counts(profile, step)
            else:
                sup = rule.left_supporters(profile, step)
                ca = sum(1 for i in sup if i < rule.partition.a)
                cd = len(sup) - ca
            line += f" counts=({ca},{cd})"
        print(line)
    return EXIT_OK


def cmd_convert(args) -> int:
    rule = _load_valid(args.rule)
    try:
        out, report = convert_rule(rule, args.to, _budget(args, CONVERSION_SAMPLES))
    except InexpressibleConversion as exc:
        raise _Exit(EXIT_INEXPRESSIBLE, f"cannot convert to {args.to}: {exc}") from None
    text = dump_rule(out)
    record = report.as_dict(rule.space)
    if args.out:
        Path(args.out).write_text(text)
        _emit(record)
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return EXIT_OK if report.equal else EXIT_WITNESS


def cmd_audit(args) -> int:
    rule = _load_valid(args.rule)
    budget = _budget(args, AUDIT_SAMPLES)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = set(checks) - {"sp", "gsp", "anon"}
    if unknown:
        raise _Exit(EXIT_PARSE, f"unknown check(s): {', '.join(sorted(unknown))}")
    profiles = None
    if args.profile:
        try:
            profiles = [load_profile(p, rule.space, rule.partition) for p in args.profile]
        except ParseError as exc:
            raise _Exit(EXIT_PARSE, str(exc)) from None
    code = EXIT_OK
    for check in checks:
        try:
            if check == "sp":
                res = audit.find_manipulation(rule, budget)
            elif check == "gsp":
                res = audit.find_group_manipulation(rule, budget)
            else:
                res = audit.check_type_anonymity(rule, budget, side=args.anon_side, profiles=profiles)
        except audit.BudgetExceeded as exc:
            _emit({"check": check, "status": "budget-exceeded", "message": str(exc)})
            code = max(code, EXIT_BUDGET)
            continue
        record = {
            "check": check,
            "status": res.status,
            "profiles_examined": res.examined,
            "exhaustive": res.exhaustive,
            "witness": None if res.witness is None else res.witness.as_dict(rule.space),
        }
        if res.notes:
            record["notes"] = res.notes
        if args.timing:
            record["elapsed"] = round(res.elapsed, 6)
        _emit(record)
        sys.stdout.flush()
        if res.witness is not None and code == EXIT_OK:
            code = EXIT_WITNESS
    return code


def cmd_table(args) -> int:
    rule = _load_valid(args.rule)
    try:
        table = audit.tabulate(rule, _budget(args, AUDIT_SAMPLES))
    except audit.BudgetExceeded as exc:
        raise _Exit(EXIT_BUDGET, str(exc)) from None
    labels = [rule.space.label(ExtElem.single(i)) for i in range(rule.space.m)]
    a = rule.partition.a
    lines = []
    for flat in audit.iter_profiles(rule.space, rule.partition):
        f = flat.flat
        lines.append(f"{','.join(labels[x] for x in f[:a])}\t{','.join(labels[x] for x in f[a:])}\t{labels[table[f]]}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spdrules", description="Strategy-proof location rules for mixed single-peaked and single-dipped societies.")
    sub = parser.add_subparsers(dest="command", required=True)

    def budget_flags(p):
        p.add_argument("--max-exhaustive", type=int, default=10**6, help="largest profile count enumerated exhaustively")
        p.add_argument("--samples", type=int, default=None, help="profiles sampled beyond the exhaustive budget")
        p.add_argument("--seed", type=int, default=0, help="64-bit seed for sampling")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for tabulation")

    p = sub.add_parser("validate", help="check a rule file against the characterization")
    p.add_argument("rule")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate a rule at a profile")
    p.add_argument("rule")
    p.add_argument("profile")
    p.add_argument("--trace", action="store_true", help="also print the first-step element and the support counts")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("convert", help="convert between median and coalition representations")
    p.add_argument("rule")
    p.add_argument("--to", required=True, choices=["median", "coalition"])
    p.add_argument("--out", help="write the converted rule here (default: standard output)")
    budget_flags(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("audit", help="search for manipulations and anonymity violations")
    p.add_argument("rule")
    p.add_argument("--checks", default="sp,gsp,anon", help="comma-separated subset of sp,gsp,anon")
    p.add_argument("--max-coalition", type=int, default=4, help="largest coalition size tried by gsp")
    p.add_argument("--anon-side", choices=["both", "A", "D"], default="both", help="which agent type to permute")
    p.add_argument("--profile", action="append", help="restrict the anonymity check to this profile file (repeatable)")
    p.add_argument("--timing", action="store_true", help="add elapsed seconds to each record")
    budget_flags(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("table", help="print the outcome at every profile")
    p.add_argument("rule")
    budget_flags(p)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if str(exc):
            sys.stderr.write(str(exc) + "\n")
        return exc.code
    except ValueError as exc:
        # Bad budget values and similar argument problems.
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
