"""Command-line front end: inspect twist tables, apply mapping classes, verify relations, count orbits.

Exit status: 0 on success, 1 when a verification suite reports a failing
check, 2 on usage errors (bad flags, parse errors, malformed group files,
budget overruns).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .action import Mode, catalog, generator_automorphism, mcg_word_automorphism
from .orbits import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    GroupFormatError,
    Policy,
    enumerate_orbits,
    evaluate,
    load_group,
    vector_from_names,
)
from .parsing import format_pi1_word, parse_mcg_word, parse_pi1_word
from .surface import Signature, UnsupportedModeError, alphabet
from .verify import Report, full_suite, genus0_suite, pairwise_suite, relator_suite
from .words import word

BUDGET_ENV_VAR = "MCGACTION_BUDGET"


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcgaction",
        description="Mapping class group actions on surface fundamental groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--g", type=int, required=True, help="genus")
        p.add_argument("--n", type=int, required=True, help="number of marked points")
        p.add_argument(
            "--mode", choices=[m.value for m in Mode], default=Mode.FULL.value,
            help="pure or full mapping class group (default: full)",
        )
        p.add_argument(
            "--format", choices=["text", "machine"], default="text",
            help="output format (machine = JSON)",
        )

    p_inspect = sub.add_parser("inspect", help="print the generator atlas (twist image tables)")
    add_common(p_inspect)

    p_apply = sub.add_parser("apply", help="apply a mapping-class word to a loop or a vector")
    add_common(p_apply)
    p_apply.add_argument("--word", required=True, help="mapping-class word, e.g. 'tb ta1^-1'")
    p_apply.add_argument(
        "--target", required=True,
        help="fundamental-group word, or comma-separated element names with --group",
    )
    p_apply.add_argument("--group", help="group JSON file: act on a generating vector instead")

    p_verify = sub.add_parser("verify", help="run relation-certification suites")
    add_common(p_verify)
    p_verify.add_argument(
        "--suite", choices=["all", "genus0", "pairwise", "relator"], default="all"
    )
    p_verify.add_argument("--workers", type=int, default=1, help="parallel check execution")

    p_orbits = sub.add_parser("orbits", help="enumerate generating-vector orbits")
    add_common(p_orbits)
    p_orbits.add_argument("--group", required=True, help="group JSON file")
    p_orbits.add_argument(
        "--nontrivial-c", action="store_true", help="require nontrivial branch entries"
    )
    p_orbits.add_argument(
        "--surjective", action="store_true", help="require entries to generate the group"
    )
    p_orbits.add_argument(
        "--budget", type=int, default=None,
        help=f"raw vector budget (default {DEFAULT_BUDGET}, or ${BUDGET_ENV_VAR})",
    )
    p_orbits.add_argument("--workers", type=int, default=1, help="parallel frontier expansion")
    return parser


def _emit(payload: dict, text: str, fmt: str) -> None:
    if fmt == "machine":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cmd_inspect(args: argparse.Namespace) -> int:
    sig = Signature(args.g, args.n)
    mode = Mode(args.mode)
    entries = []
    lines = [f"generator atlas at {sig} ({mode.value} mapping class group)"]
    for gen in catalog(sig, mode):
        phi = generator_automorphism(gen, sig)
        moved = {str(s): format_pi1_word(phi.images[s]) for s in phi.moved_symbols()}
        entries.append({"generator": str(gen), "images": moved})
        lines.append(f"  {gen}:")
        if not moved:
            lines.append("    acts trivially on every generator")
        for symbol, image in moved.items():
            lines.append(f"    {symbol} -> {image}")
        lines.append("    (all other generators fixed)")
    payload = {
        "schema": "mcgaction/atlas/1",
        "signature": {"g": sig.g, "n": sig.n},
        "mode": mode.value,
        "generators": entries,
    }
    _emit(payload, "\n".join(lines), args.format)
    return 0


def _cmd_apply(args: argparse.Namespace) -> int:
    sig = Signature(args.g, args.n)
    mode = Mode(args.mode)
    mcg_word = parse_mcg_word(args.word, sig, mode)
    if args.group:
        group = load_group(args.group)
        names = [name.strip() for name in args.target.split(",")]
        vector = vector_from_names(sig, group, names)
        phi = mcg_word_automorphism(mcg_word, sig)
        result = {
            str(symbol): group.elements[evaluate(phi.images[symbol], vector, group)]
            for symbol in alphabet(sig)
        }
        text = "  ".join(f"{symbol}: {value}" for symbol, value in result.items())
        payload = {
            "schema": "mcgaction/apply-vector/1",
            "signature": {"g": sig.g, "n": sig.n},
            "word": str(mcg_word),
            "group": group.name,
            "result": result,
        }
        _emit(payload, text, args.format)
        return 0
    target = parse_pi1_word(args.target, sig)
    phi = mcg_word_automorphism(mcg_word, sig)
    image = phi(target)
    payload = {
        "schema": "mcgaction/apply-word/1",
        "signature": {"g": sig.g, "n": sig.n},
        "word": str(mcg_word),
        "target": format_pi1_word(target),
        "image": format_pi1_word(image),
    }
    _emit(payload, format_pi1_word(image), args.format)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    sig = Signature(args.g, args.n)
    mode = Mode(args.mode)
    if args.suite == "genus0":
        report: Report = genus0_suite(sig.n, workers=args.workers) if sig.g == 0 else _genus0_error()
    elif args.suite == "pairwise":
        report = pairwise_suite(sig, workers=args.workers)
    elif args.suite == "relator":
        report = relator_suite(sig, mode, workers=args.workers)
    else:
        report = full_suite(sig, mode, workers=args.workers)
    _emit(report.to_json_dict(), report.to_text(), args.format)
    return 0 if report.passed else 1


def _genus0_error() -> Report:
    raise ValueError("--suite genus0 requires --g 0")


def _cmd_orbits(args: argparse.Namespace) -> int:
    sig = Signature(args.g, args.n)
    mode = Mode(args.mode)
    group = load_group(args.group)
    policy = Policy(nontrivial_c=args.nontrivial_c, generating=args.surjective)
    budget = args.budget if args.budget is not None else _default_budget()
    report = enumerate_orbits(sig, group, policy, mode, budget=budget, workers=args.workers)
    _emit(report.to_json_dict(), report.to_text(group), args.format)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "inspect": _cmd_inspect,
        "apply": _cmd_apply,
        "verify": _cmd_verify,
        "orbits": _cmd_orbits,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, UnsupportedModeError, GroupFormatError, BudgetExceededError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
