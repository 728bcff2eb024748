"""Command-line surface: JSON on stdout, diagnostics on stderr.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 infeasible
request.  All output is deterministic, ordered, and free of locale or
color dependence so it can be golden-file tested.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from . import bt1, build, curves, eo, words
from .ffmat import PrimeField

ATLAS_G_CAP = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit(2); we map usage to 1
        raise UsageError(message)


def _add_jobs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker threads; affects wall-clock only, never output order")


def build_parser() -> _Parser:
    parser = _Parser(prog="ssrank", description=__doc__)
    top = parser.add_subparsers(dest="group", required=True)

    eo_cmd = top.add_parser("eo", help="Ekedahl-Oort type catalogue")
    eo_sub = eo_cmd.add_subparsers(dest="cmd", required=True)
    eo_list = eo_sub.add_parser("list", help="enumerate all 2^g types with invariants")
    eo_list.add_argument("--g", type=int, required=True)
    eo_list.add_argument("--filter", default=None, metavar="f=..,a=..,s=..")
    eo_list.add_argument("--format", choices=("json", "csv"), default="json")
    _add_jobs(eo_list)
    eo_module = eo_sub.add_parser("module", help="canonical module of one type")
    eo_module.add_argument("--nu", required=True, metavar="a,b,c")
    eo_module.add_argument("--p", type=int, default=2)

    mod_cmd = top.add_parser("module", help="operate on a serialized module")
    mod_sub = mod_cmd.add_subparsers(dest="cmd", required=True)
    for name, help_text in (("invariants", "p-rank, a-number, unpolarized rank"),
                            ("decompose", "cyclic-word census and census invariants"),
                            ("check", "validate the BT1 axioms and any attached form"),
                            ("polarize", "attach a compatible nondegenerate form")):
        sub = mod_sub.add_parser(name, help=help_text)
        sub.add_argument("--in", dest="path", required=True, metavar="FILE.json")

    build_cmd = top.add_parser("build", help="construct modules")
    build_sub = build_cmd.add_subparsers(dest="cmd", required=True)
    b_word = build_sub.add_parser("word", help="module of a cyclic word")
    b_word.add_argument("--w", required=True, metavar="FVV...")
    b_word.add_argument("--p", type=int, default=2)
    b_jrs = build_sub.add_parser("jrs", help="module on x with F^r x = -V^s x")
    b_jrs.add_argument("--r", type=int, required=True)
    b_jrs.add_argument("--s", type=int, required=True)
    b_jrs.add_argument("--p", type=int, default=2)
    b_profile = build_sub.add_parser("profile", help="realize a feasible (g,f,a,s)")
    for flag in ("--g", "--f", "--a", "--s"):
        b_profile.add_argument(flag, type=int, required=True)
    b_profile.add_argument("--p", type=int, default=2)
    b_ss = build_sub.add_parser("ss", help="supersingular profile with given rank s")
    b_ss.add_argument("--g", type=int, required=True)
    b_ss.add_argument("--s", type=int, required=True)
    b_ss.add_argument("--p", type=int, default=2)

    curve_cmd = top.add_parser("curve", help="curve applications")
    curve_sub = curve_cmd.add_subparsers(dest="cmd", required=True)
    c_hyp = curve_sub.add_parser("hyp2", help="hyperelliptic curve in characteristic 2")
    c_hyp.add_argument("--poles", required=True, metavar="3,9")
    c_hyp.add_argument("--oracle", action="store_true",
                       help="also assemble the module and cross-check s")
    c_herm = curve_sub.add_parser("hermitian", help="Hermitian curve invariants")
    c_herm.add_argument("--p", type=int, required=True)
    c_herm.add_argument("--n", type=int, required=True)

    table_cmd = top.add_parser("table", help="tabulations")
    table_sub = table_cmd.add_subparsers(dest="cmd", required=True)
    t_feas = table_sub.add_parser("feasibility", help="feasibility of (f,a,s) at fixed g")
    t_feas.add_argument("--g", type=int, required=True)

    atlas_cmd = top.add_parser("atlas", help="write the EO atlas CSV")
    atlas_cmd.add_argument("--g-max", type=int, required=True)
    atlas_cmd.add_argument("--out", required=True, metavar="PATH")
    _add_jobs(atlas_cmd)

    return parser


def _parse_filter(text: str | None) -> dict[str, int]:
    if not text:
        return {}
    out: dict[str, int] = {}
    for piece in text.split(","):
        if "=" not in piece:
            raise UsageError(f"bad filter clause {piece!r}; expected key=value")
        key, _, value = piece.partition("=")
        key = key.strip()
        if key not in ("f", "a", "s"):
            raise UsageError(f"unknown filter key {key!r}; allowed: f, a, s")
        try:
            out[key] = int(value)
        except ValueError:
            raise UsageError(f"filter value for {key!r} must be an integer") from None
    return out


def _type_row(t: eo.EOType) -> dict:
    census = words.census_of_type(t)
    return {
        "g": t.g,
        "nu": list(t.nu),
        "f": t.p_rank(),
        "a": t.a_number(),
        "s": census.multiplicity(words.CyclicWord("FV")),
        "words": census.as_dict(),
    }


def _rows_for_g(g: int, jobs: int) -> list[dict]:
    types = list(eo.enumerate_types(g))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_type_row, types))
    return [_type_row(t) for t in types]


def _csv_line(row: dict) -> str:
    nu = ";".join(str(v) for v in row["nu"])
    word_list = []
    for letters in sorted(row["words"], key=lambda w: (len(w), w)):
        word_list.extend([letters] * row["words"][letters])
    return f"{row['g']},{nu},{row['f']},{row['a']},{row['s']},{';'.join(word_list)}"


def emit_atlas(g_max: int, path: str, jobs: int = 1) -> None:
    """Write the atlas CSV: columns g, nu, f, a, s, words; g ascending, nu lex."""
    if g_max > ATLAS_G_CAP:
        raise ValueError(f"g_max is capped at {ATLAS_G_CAP}")
    if g_max < 1:
        raise ValueError("g_max must be at least 1")
    lines = []
    for g in range(1, g_max + 1):
        lines.extend(_csv_line(row) for row in _rows_for_g(g, jobs))
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def _print(text: str) -> None:
    sys.stdout.write(text + "\n")


def _emit_report(obj) -> None:
    _print(json.dumps(obj, indent=2, sort_keys=False))


def _read_module(path: str) -> bt1.DieudonneModule:
    with open(path, "r", encoding="utf-8") as handle:
        return bt1.from_json(handle.read())


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(piece) for piece in text.split(",") if piece != ""]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of integers") from None


def _run_eo(args: argparse.Namespace) -> int:
    if args.cmd == "list":
        if args.g < 0:
            raise ValueError("g must be nonnegative")
        rows = _rows_for_g(args.g, args.jobs)
        wanted = _parse_filter(args.filter)
        rows = [r for r in rows if all(r[k] == v for k, v in wanted.items())]
        if args.format == "csv":
            for row in rows:
                _print(_csv_line(row))
        else:
            _emit_report(rows)
        return 0
    if args.cmd == "module":
        t = eo.EOType.of(_parse_int_list(args.nu, "--nu"))
        module = eo.canonical_module(t, PrimeField(args.p))
        _print(bt1.to_json(module))
        return 0
    raise UsageError("unknown eo subcommand")


def _run_module(args: argparse.Namespace) -> int:
    module = _read_module(args.path)
    if args.cmd == "check":
        violations = bt1.validate_bt1(module)
        _emit_report({"valid": not violations, "violations": violations})
        return 0 if not violations else 2
    if args.cmd == "invariants":
        bundle = bt1.invariants(module)
        _emit_report({"p": module.field.p, "dim": module.dim, "g": bundle.g,
                      "f": bundle.f, "a": bundle.a, "u": bundle.u})
        return 0
    if args.cmd == "decompose":
        census = words.decompose(module)
        bundle = words.census_invariants(census)
        _emit_report({"census": census.as_dict(),
                      "g": bundle.g, "f": bundle.f, "a": bundle.a, "s": bundle.s})
        return 0
    if args.cmd == "polarize":
        gram = bt1.find_polarization(module)
        if gram is None:
            raise bt1.PolarizationSearchError("no compatible nondegenerate form exists")
        _print(bt1.to_json(module.with_form(gram)))
        return 0
    raise UsageError("unknown module subcommand")


def _run_build(args: argparse.Namespace) -> int:
    field = PrimeField(args.p)
    if args.cmd == "word":
        module = words.word_module(words.CyclicWord.of(args.w), field)
    elif args.cmd == "jrs":
        module = build.j_rs(args.r, args.s, field)
    elif args.cmd == "profile":
        module = build.realize(build.ProfileQuery(g=args.g, f=args.f, a=args.a, s=args.s), field)
    elif args.cmd == "ss":
        module = build.supersingular_profile(args.g, args.s, field)
    else:
        raise UsageError("unknown build subcommand")
    _print(bt1.to_json(module))
    return 0


def _run_curve(args: argparse.Namespace) -> int:
    if args.cmd == "hyp2":
        divisor = curves.PoleDivisor.of(_parse_int_list(args.poles, "--poles"))
        report = curves.hyp2_analyze(divisor)
        payload = report.as_dict()
        if args.oracle:
            oracle_module = curves.hyp2_module_oracle(divisor)
            census = words.decompose(oracle_module)
            payload["oracle_s"] = census.multiplicity(words.CyclicWord("FV"))
            payload["oracle_census"] = census.as_dict()
            if payload["oracle_s"] != report.s:
                raise RuntimeError("oracle disagrees with the closed form")
        _emit_report(payload)
        return 0
    if args.cmd == "hermitian":
        _emit_report(curves.hermitian_analyze(args.p, args.n).as_dict())
        return 0
    raise UsageError("unknown curve subcommand")


def _run_table(args: argparse.Namespace) -> int:
    if args.cmd == "feasibility":
        g = args.g
        if g < 0:
            raise ValueError("g must be nonnegative")
        rows = []
        for f in range(g + 1):
            for a in range(g - f + 1):
                for s in range(a + 1):
                    rows.append({"f": f, "a": a, "s": s,
                                 "feasible": build.feasible(build.ProfileQuery(g, f, a, s))})
        _emit_report({"g": g, "rows": rows})
        return 0
    raise UsageError("unknown table subcommand")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.group == "eo":
            return _run_eo(args)
        if args.group == "module":
            return _run_module(args)
        if args.group == "build":
            return _run_build(args)
        if args.group == "curve":
            return _run_curve(args)
        if args.group == "table":
            return _run_table(args)
        if args.group == "atlas":
            emit_atlas(args.g_max, args.out, args.jobs)
            return 0
        raise UsageError("unknown command group")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except build.InfeasibleProfileError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except (ValueError, bt1.PolarizationSearchError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
