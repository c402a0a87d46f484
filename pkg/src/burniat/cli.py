"""Command line front end.

Exit codes: 0 success, 1 domain error (bad divisor, unsatisfiable
request), 2 usage error, 3 internal inconsistency (a structural
invariant or an embedded table failed to reproduce).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import acceptance
from . import cohomology as coh
from . import effectivity as eff
from . import picard as pic
from . import ulrich
from .cohomology import BranchStep, h_all
from .picard import (
    DivisorClass,
    InternalInconsistencyError,
    MembershipError,
    NumClass,
    ParseError,
    Torsion,
    bits_to_str,
    canonical_class,
    format_divisor,
    from_generators,
    parse_divisor,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def describe_step(step: BranchStep) -> str:
    tag, info = step.tag, step.info
    if tag == "trim":
        return f"trim {info[0]} ({info[1]})"
    if tag == "nef-reduce":
        return f"peel {info[0]} (h0 += 1, normalizer {info[1]})"
    if tag in ("base-case", "ample-boundary"):
        family, ell, tau, sym = info
        return f"{tag} {family} l={ell} tau={tau} via {sym}"
    if tag == "kv-vanishing":
        return f"vanishing: h0 = chi = {info[0]}"
    return tag


def divisor_report(text: str, want_trace: bool) -> dict:
    divisor = parse_divisor(text)
    witness = eff.is_effective(divisor)
    result = h_all(divisor)
    reduced = eff.reduce_divisor(divisor)
    report = {
        "input": text,
        "coords": {
            "d": divisor.d,
            "slots": [[divisor.degs[k], bits_to_str(divisor.tors[k])] for k in range(6)],
        },
        "num_class": list(divisor.num_class()),
        "chi": divisor.chi(),
        "h": [result.h0, result.h1, result.h2],
        "effective": witness is not None,
        "witness": dict(sorted(witness.combo.items())) if witness else None,
        "trace": [
            {"tag": s.tag, "info": [str(x) for x in s.info]} for s in result.trace
        ],
        "nef": divisor.is_nef(),
        "ample": divisor.is_ample(),
        "reduced": format_divisor(reduced.divisor) if reduced.divisor else None,
        "trim_steps": [list(s) for s in reduced.steps],
    }
    if not want_trace:
        report["trace"] = report["trace"][: len(report["trace"])]  # keep order stable
    return report


def _print_human(command: str, report: dict, want_trace: bool) -> None:
    coords = report["coords"]
    slots = "  ".join(f"{deg}:{bits}" for deg, bits in coords["slots"])
    d, a, b, c = report["num_class"]
    print(f"divisor  [{coords['d']}; {slots}]")
    print(f"num      [{d};{a},{b},{c}]   ell {(d + a + b + c) // 3}   chi {report['chi']}"
          f"   nef {report['nef']}   ample {report['ample']}")
    if command in ("h", "show"):
        h0, h1, h2 = report["h"]
        print(f"h        ({h0}, {h1}, {h2})")
    if command in ("effective", "show"):
        if report["witness"] is not None:
            print(f"effective: yes   witness {pic.format_combo(report['witness'])}")
        else:
            print("effective: no")
    if command in ("reduce", "show"):
        if report["reduced"] is not None:
            print(f"reduced  {report['reduced']}   ({len(report['trim_steps'])} trims)")
        else:
            print("reduced  none (degree went negative: not effective)")
        if command == "reduce":
            for label, reason in report["trim_steps"]:
                print(f"  trim {label} ({reason})")
    if want_trace:
        for entry in report["trace"]:
            info = tuple(entry["info"])
            print("  " + describe_step(BranchStep(entry["tag"], info)))


def _run_divisor_command(args) -> int:
    want_trace = args.trace
    if args.batch:
        with open(args.batch, "r", encoding="utf-8") as handle:
            lines = [line.strip() for line in handle if line.strip()]
        workers = int(os.environ.get("BURNIAT_THREADS", "0")) or min(8, os.cpu_count() or 1)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for report in pool.map(lambda t: divisor_report(t, want_trace), lines):
                print(json.dumps(report))
        return EXIT_OK
    report = divisor_report(args.divisor, want_trace)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_human(args.command, report, want_trace)
    return EXIT_OK


def _run_enumber(args) -> int:
    nc = NumClass(args.d, args.a, args.b, args.c)
    if not nc.is_integral():
        print(f"{nc} is not realised: d+a+b+c is not divisible by 3", file=sys.stderr)
        return EXIT_DOMAIN
    brute = eff.e_number(nc)
    positive = eff.e_positive(nc)
    full = eff.e_full(nc)
    if args.json:
        print(json.dumps({"num_class": list(nc), "e_number": brute,
                          "e_positive": positive, "e_full": full}))
    else:
        print(f"e({nc}) = {brute}   (criterion: >=1 {positive}, =64 {full})")
    if (brute >= 1) != positive or (brute == 64) != full:
        print("brute force disagrees with the closed-form criterion", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _table_generators() -> int:
    bad = 0
    print("row    d   " + "   ".join(f"{s:<5}" for s in pic.SLOT_LABELS))
    for label in list(pic.LABELS) + ["K"]:
        row = canonical_class() if label == "K" else pic.generator(label)
        rebuilt = pic.from_truncated(row.d, *[(row.degs[k], row.tors[k]) for k in range(3)])
        cells = "   ".join(
            f"{row.degs[k]:>2} {bits_to_str(row.tors[k])}" for k in range(6)
        )
        marker = "" if rebuilt == row else "   <- DERIVATION MISMATCH"
        if rebuilt != row:
            bad += 1
        print(f"{label:<5} {row.d:>2}   {cells}{marker}")
    for sym in pic.SYMMETRIES:
        for label in pic.LABELS:
            if pic.apply_symmetry(sym, pic.generator(label)) != pic.generator(sym.on_label(label)):
                print(f"symmetry {sym} breaks row {label}")
                bad += 1
    return EXIT_INTERNAL if bad else EXIT_OK


def _table_flexible() -> int:
    bad = 0
    flexible = []
    for tau in pic.ALL_TORSIONS:
        h0 = h_all(canonical_class() + tau.to_divisor()).h0
        want = coh.h0_canonical_twist(tau)
        if h0 != want:
            print(f"h0(K+{tau}) = {h0}, table says {want}")
            bad += 1
        if h0 == 2:
            flexible.append(tau)
    print("flexible torsions (h0(K+tau) = 2):", ", ".join(str(t) for t in flexible))
    for text, combo in acceptance.KTWIST_DECOMPOSITIONS:
        tau = Torsion.from_string(text)
        if from_generators(combo) != canonical_class() + tau.to_divisor():
            print(f"decomposition for {text} fails")
            bad += 1
    if len(flexible) != 3:
        bad += 1
    return EXIT_INTERNAL if bad else EXIT_OK


def _table_reduced621() -> int:
    bad = 0
    base = from_generators(acceptance.TABLE_621_BASE)
    print("tau           member                          h0")
    for text, combo, want in acceptance.TABLE_621_ROWS:
        divisor = base + Torsion.from_string(text).to_divisor()
        ok_identity = from_generators(combo) == divisor
        h0 = h_all(divisor).h0
        marker = "" if ok_identity and h0 == want else "   <- MISMATCH"
        if marker:
            bad += 1
        print(f"{text:<12}  {pic.format_combo(combo):<30}  {h0}{marker}")
    return EXIT_INTERNAL if bad else EXIT_OK


def _run_table(args) -> int:
    return {
        "generators": _table_generators,
        "flexible-torsions": _table_flexible,
        "reduced-621": _table_reduced621,
    }[args.name]()


def _run_ulrich_search(args) -> int:
    polarization = parse_divisor(args.polarization)
    report = ulrich.ulrich_line_search(polarization, args.d_lo, args.d_hi)
    payload = {
        "polarization": format_divisor(polarization),
        "window": [report.d_lo, report.d_hi],
        "classes_scanned": report.classes_scanned,
        "divisors_scanned": report.divisors_scanned,
        "hits": [format_divisor(h) for h in report.hits],
        "elapsed_seconds": round(report.elapsed, 3),
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"polarization {payload['polarization']}   window {report.d_lo}..{report.d_hi}")
        print(f"scanned {report.classes_scanned} classes / {report.divisors_scanned} divisors"
              f" in {report.elapsed:.1f}s")
        print(f"hits: {payload['hits'] or 'none'}")
    return EXIT_OK


def _run_verify_rank2(args) -> int:
    d1 = parse_divisor(args.divisor) if args.divisor else None
    report = ulrich.verify_rank2(d1)
    if args.json:
        print(json.dumps({
            "d1": format_divisor(report.d1),
            "d2": format_divisor(report.d2),
            "checks": [{"name": c.name, "expected": str(c.expected),
                        "actual": str(c.actual), "passed": c.passed}
                       for c in report.checks],
            "passed": report.passed,
        }, indent=2))
    else:
        print(f"D1 = {format_divisor(report.d1)}")
        print(f"D2 = 4K - D1 = {format_divisor(report.d2)}")
        for check in report.checks:
            status = "ok" if check.passed else f"FAIL (expected {check.expected}, got {check.actual})"
            print(f"  {check.name}: {status}")
    return EXIT_OK if report.passed else EXIT_DOMAIN


def _run_selftest(args) -> int:
    numbers = None
    if args.criteria:
        numbers = sorted({int(x) for x in args.criteria.split(",")})
        unknown = [n for n in numbers if n not in acceptance.CRITERIA]
        if unknown:
            print(f"unknown criteria: {unknown}", file=sys.stderr)
            return EXIT_USAGE
    results = acceptance.run(numbers)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INTERNAL


def _run_bench(args) -> int:
    degrees = tuple(int(x) for x in args.degrees.split(","))
    rows = acceptance.complexity_probe(degrees)
    for d, steps, seconds, h0 in rows:
        print(f"d = {d:>7}: {steps} branch steps, h0 = {h0}, {seconds:.3f}s")
    ratios = [steps / d for d, steps, _, _ in rows]
    print(f"steps/d spread: {max(ratios) / min(ratios):.2f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burniat",
        description="Exact divisor arithmetic and cohomology on the primary "
                    "Burniat surface with K^2 = 6.",
    )
    parser.add_argument("--json", action="store_true", help="emit one JSON object")
    parser.add_argument("--trace", action="store_true",
                        help="include the branch trace of the cohomology run")
    parser.add_argument("--batch", metavar="FILE",
                        help="read one divisor expression per line; write JSON lines")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, blurb in (
        ("show", "coordinates, numerical class, chi, h, effectiveness"),
        ("h", "cohomology dimensions h0, h1, h2"),
        ("effective", "decide effectiveness and print a witness"),
        ("reduce", "trim to the reduced form"),
    ):
        cmd = sub.add_parser(name, help=blurb)
        cmd.add_argument("divisor", nargs="?", default="K",
                         help="divisor expression, e.g. 'A0 + 2*B3 - C1' or "
                              "'[7; 1:10, 2:01, 2:11]'")
        cmd.set_defaults(handler=_run_divisor_command)

    cmd = sub.add_parser("enumber", help="count effective twists of [d;a,b,c]")
    for field in ("d", "a", "b", "c"):
        cmd.add_argument(field, type=int)
    cmd.set_defaults(handler=_run_enumber)

    cmd = sub.add_parser("table", help="regenerate an embedded table and diff it")
    cmd.add_argument("name", choices=["generators", "flexible-torsions", "reduced-621"])
    cmd.set_defaults(handler=_run_table)

    cmd = sub.add_parser("ulrich-search", help="search for Ulrich line bundle pairs")
    cmd.add_argument("--polarization", default="3*K")
    cmd.add_argument("--d-lo", type=int, default=None)
    cmd.add_argument("--d-hi", type=int, default=None)
    cmd.set_defaults(handler=_run_ulrich_search)

    cmd = sub.add_parser("verify-rank2", help="check the rank-2 construction data")
    cmd.add_argument("divisor", nargs="?", default=None,
                     help="alternative first divisor (default: the built-in one)")
    cmd.set_defaults(handler=_run_verify_rank2)

    cmd = sub.add_parser("selftest", help="run the acceptance criteria")
    cmd.add_argument("--criteria", help="comma separated subset, e.g. 1,2,3")
    cmd.set_defaults(handler=_run_selftest)

    cmd = sub.add_parser("bench", help="measure step counts on a linear chain")
    cmd.add_argument("--degrees", default="996,9996,99996")
    cmd.set_defaults(handler=_run_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, MembershipError, coh.InvalidTauError,
            coh.BudgetExceededError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InternalInconsistencyError, coh.ClassificationGapError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
