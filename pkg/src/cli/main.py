from typing import Any, Dict, List, Optional, Tuple
import argparse
import asyncio
import csv
import json
import logging
import os
import sys
import time

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from core import analysis
from core.closed_forms import applicable_formulas, stem_closed_forms, table_row
from core.command_processor import USAGE_ERRORS, Check, CommandProcessor, RunReport
from core.errors import GroupEngineError, InvalidParameters, TupleCapExceeded
from core.families import admissible_families, stem_group
from core.genfun import (
    GENERATING_FUNCTIONS,
    alpha_coefficient,
    alpha_series,
    beta_coefficient,
    b_of_t_with_work,
    beta_series,
)
from core.group_spec import resolve_group
from core.group_table import certify
from core.isoclinism import are_isoclinic, verify_witness
from core.oracle import alpha_brute, beta_brute

logger = logging.getLogger(__name__)

CONFIG_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config")
TABLE_PRIMES = (2, 3, 5)
BENCH_STRATEGIES = ("eq1", "eq4", "brute_alpha", "brute_beta")
CSV_COLUMNS = ("strategy", "group", "order", "n", "count", "nanos", "work")
ROW_IDENTITIES = (("Phi3", "Phi4"), ("Phi7", "Phi8"))


def genfun_report(params: Dict[str, Any]) -> Dict[str, Any]:
    g = resolve_group(params["group"])
    which = ["A", "B"] if params["which"] == "both" else [params["which"]]
    series = {"A": alpha_series, "B": beta_series}
    results: Dict[str, Any] = {"group": g.label, "order": g.order}
    checks: List[Check] = []
    for name in which:
        f = GENERATING_FUNCTIONS[name](g)
        entry: Dict[str, Any] = {"function": f.to_dict(), "display": f.render()}
        shown = f
        if params["normalized"]:
            shown = f.normalize(g.order)
            entry["normalized"] = {"function": shown.to_dict(), "display": shown.render()}
        if params["partial_fractions"]:
            pf = shown.partial_fractions()
            entry["partial_fractions"] = {**pf.to_dict(), "display": pf.render()}
            checks.append(Check(f"{name} partial fractions recombine", pf.recombine() == shown))
        if params["coefficients"] is not None:
            if params["coefficients"] < 1:
                raise InvalidParameters("coefficients must be at least 1")
            entry["coefficients"] = series[name](g, params["coefficients"] - 1)
        results[name] = entry

    if params["closed_form"]:
        forms = applicable_formulas(g)
        results["closed_forms"] = [str(cf.formula) for cf in forms]
        for cf in forms:
            for name, value in (("A", cf.A), ("B", cf.B)):
                computed = GENERATING_FUNCTIONS[name](g)
                checks.append(Check(f"{cf.formula} {name}", value == computed, value.render(), computed.render()))
    return {"results": results, "checks": checks}


def verify_table_cell(cell: Tuple[str, int]) -> Dict[str, Any]:
    """Stem group of one (family, p) against its table row and its closed forms"""
    family, p = cell
    g = stem_group(family, p)
    a = GENERATING_FUNCTIONS["A"](g).normalize(g.order)
    b = GENERATING_FUNCTIONS["B"](g).normalize(g.order)
    expected_a, expected_b = table_row(family, p)
    row = {
        "family": family,
        "p": p,
        "order": g.order,
        "A": a.render(),
        "B": b.render(),
        "checks": [
            Check(f"{family} p={p} A", a == expected_a, expected_a.render(), a.render()),
            Check(f"{family} p={p} B", b == expected_b, expected_b.render(), b.render()),
        ],
        "functions": (a, b),
    }
    closed = stem_closed_forms(family, p)
    if closed is not None:
        formula, ca, cb = closed
        row["closed_form"] = str(formula)
        row["checks"].append(
            Check(f"{family} p={p} {formula.name}", ca.normalize(g.order) == a and cb.normalize(g.order) == b)
        )
    return row


def equiv_report(params: Dict[str, Any]) -> Dict[str, Any]:
    g = resolve_group(params["group1"])
    h = resolve_group(params["group2"])
    mode = params["mode"]
    results: Dict[str, Any] = {"groups": [g.label, h.label], "mode": mode}
    checks: List[Check] = []
    if mode in ("A", "B"):
        fg, fh = GENERATING_FUNCTIONS[mode](g), GENERATING_FUNCTIONS[mode](h)
        results["equivalent"] = fg == fh
        results["functions"] = [fg.render(), fh.render()]
        if mode == "A":
            same_classes = analysis.conjugacy_data(g).class_equation == analysis.conjugacy_data(h).class_equation
            checks.append(
                Check("A-equivalence matches class equation equality", results["equivalent"] == same_classes)
            )
    else:
        witness = are_isoclinic(g, h)
        results["equivalent"] = witness is not None
        if witness is not None:
            results["witness"] = witness.to_dict()
            checks.append(Check("witness diagram commutes", verify_witness(g, h, witness)))
    return {"results": results, "checks": checks}


def oracle_report(params: Dict[str, Any]) -> Dict[str, Any]:
    g = resolve_group(params["group"])
    rows = []
    checks: List[Check] = []
    for n in range(params["n_max"] + 1):
        for mode, brute, exact in (("alpha", alpha_brute, alpha_coefficient), ("beta", beta_brute, beta_coefficient)):
            expected = exact(g, n)
            try:
                counted = brute(g, n)
            except TupleCapExceeded as exc:
                checks.append(Check(f"{mode}_{n}", True, expected, None, str(exc), skipped=True))
                continue
            rows.append({"mode": mode, "n": n, "brute": counted.count, "genfun": expected, "work": counted.work})
            checks.append(Check(f"{mode}_{n}", counted.count == expected, expected, counted.count))
    return {"results": {"group": g.label, "order": g.order, "rows": rows}, "checks": checks}


def _timed(compute) -> Tuple[Any, int]:
    start = time.perf_counter_ns()
    value = compute()
    return value, time.perf_counter_ns() - start


def _histogram_sum(arg: str, n: int) -> Tuple[int, int]:
    g = resolve_group(arg).uncached()
    data = analysis.conjugacy_data(g)
    return alpha_coefficient(g, n), data.table_lookups + len(data.z_histogram)


def _centralizer_recursion(arg: str, n: int) -> Tuple[int, int]:
    g = resolve_group(arg).uncached()
    b, work = b_of_t_with_work(g)
    return b.integer_coefficients(n)[n], work


def _brute(oracle, arg: str, n: int) -> Tuple[int, int]:
    counted = oracle(resolve_group(arg).uncached(), n)
    return counted.count, counted.work


def bench_cell(cell: Tuple[str, int]) -> List[Dict[str, Any]]:
    """One row per strategy for a (group, n) cell.

    Each strategy builds its own uncached table inside the timed region. Work
    is table entries read for eq1 and eq4, tuples plus edges for brute force.
    """
    arg, n = cell
    g = resolve_group(arg)
    runs = {
        "eq1": lambda: _histogram_sum(arg, n),
        "eq4": lambda: _centralizer_recursion(arg, n),
        "brute_alpha": lambda: _brute(alpha_brute, arg, n),
        "brute_beta": lambda: _brute(beta_brute, arg, n),
    }
    rows = []
    for strategy in BENCH_STRATEGIES:
        try:
            (count, work), nanos = _timed(runs[strategy])
        except TupleCapExceeded:
            continue
        rows.append(
            {"strategy": strategy, "group": g.label, "order": g.order, "n": n, "count": count, "nanos": nanos, "work": work}
        )
    return rows


def bench_checks(rows: List[Dict[str, Any]]) -> List[Check]:
    checks = []
    by_cell: Dict[Tuple[str, int], Dict[str, Dict]] = {}
    for row in rows:
        by_cell.setdefault((row["group"], row["n"]), {})[row["strategy"]] = row
    for (group, n), cell in sorted(by_cell.items()):
        for exact, brute in (("eq1", "brute_alpha"), ("eq4", "brute_beta")):
            if exact in cell and brute in cell:
                checks.append(
                    Check(f"{group} n={n} {exact} = {brute}", cell[exact]["count"] == cell[brute]["count"],
                          cell[brute]["count"], cell[exact]["count"])
                )
    return checks


def write_csv(path: str, rows: List[Dict[str, Any]]):
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def certify_report(params: Dict[str, Any]) -> Dict[str, Any]:
    g = resolve_group(params["group"])
    report = certify(g)
    checks = [Check(c.name, c.passed, detail=c.detail, skipped=c.skipped, actual=c.witness) for c in report.checks]
    return {"results": {"certificate": report.to_dict(), "summary": analysis.summarize(g)}, "checks": checks}


async def initialize_processor(settings_file: Optional[str] = None) -> CommandProcessor:
    processor = CommandProcessor(
        os.path.join(CONFIG_DIR, "commands.json"),
        settings_file or os.path.join(CONFIG_DIR, "settings.yaml"),
    )

    async def verify_table(params: Dict[str, Any]) -> Dict[str, Any]:
        primes = params["primes"]
        rejected = [p for p in primes if p not in TABLE_PRIMES]
        if rejected:
            raise InvalidParameters(f"table verification supports p in {TABLE_PRIMES}, got {rejected}")
        cells = [(family, p) for p in primes for family in admissible_families(p)]
        outcomes = await processor.run_cells(verify_table_cell, cells)

        rows, checks = [], []
        computed: Dict[Tuple[str, int], Any] = {}
        for (family, p), outcome in zip(cells, outcomes):
            if isinstance(outcome, Exception):
                if not isinstance(outcome, GroupEngineError):
                    raise outcome
                rows.append({"family": family, "p": p, "error": str(outcome)})
                checks.append(Check(f"{family} p={p}", False, detail=f"{type(outcome).__name__}: {outcome}"))
                continue
            computed[(family, p)] = outcome.pop("functions")
            checks.extend(outcome.pop("checks"))
            rows.append(outcome)
        for p in primes:
            for first, second in ROW_IDENTITIES:
                if (first, p) in computed and (second, p) in computed:
                    checks.append(Check(f"{first} and {second} rows agree at p={p}", computed[(first, p)] == computed[(second, p)]))
        return {"results": {"rows": rows}, "checks": checks}

    async def bench(params: Dict[str, Any]) -> Dict[str, Any]:
        cells = [(group, n) for group in params["groups"] for n in range(1, params["n_max"] + 1)]
        outcomes = await processor.run_cells(bench_cell, cells)
        rows, checks = [], []
        for cell, outcome in zip(cells, outcomes):
            if isinstance(outcome, Exception):
                if not isinstance(outcome, GroupEngineError):
                    raise outcome
                checks.append(Check(f"{cell[0]} n={cell[1]}", False, detail=str(outcome)))
                continue
            rows.extend(outcome)
        checks.extend(bench_checks(rows))
        if params["csv"]:
            write_csv(params["csv"], rows)
        stable = [{k: v for k, v in row.items() if k != "nanos"} for row in rows]
        return {
            "results": {"rows": stable},
            "checks": checks,
            "timing": {"nanos": [[row["strategy"], row["group"], row["n"], row["nanos"]] for row in rows]},
        }

    processor.register_command("genfun", genfun_report)
    processor.register_command("verify_table", verify_table)
    processor.register_command("equiv", equiv_report)
    processor.register_command("oracle", oracle_report)
    processor.register_command("bench", bench)
    processor.register_command("certify", certify_report)

    return processor


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conjgf", description="Orbit-counting generating functions of finite groups")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--timing", action="store_true", help="include timing in the output")
    parser.add_argument("--log-level", default=None, help="overrides the configured log level")
    parser.add_argument("--settings", default=None, help="settings YAML")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genfun", help="A and B generating functions of a group")
    p.add_argument("group", help="group-spec file or shorthand such as Phi5:p=3")
    p.add_argument("--which", choices=["A", "B", "both"], default="both")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--partial-fractions", action="store_true")
    p.add_argument("--coefficients", type=int, default=None, metavar="N")
    p.add_argument("--closed-form", action="store_true", help="compare with every applicable closed form")

    p = sub.add_parser("verify-table", help="check the normalized invariants of every family")
    p.add_argument("--primes", type=int, nargs="+", default=None)

    p = sub.add_parser("equiv", help="A-, B-equivalence or isoclinism of two groups")
    p.add_argument("group1")
    p.add_argument("group2")
    p.add_argument("--mode", choices=["A", "B", "isoclinic"], default="A")

    p = sub.add_parser("oracle", help="brute-force orbit counts against the generating functions")
    p.add_argument("group")
    p.add_argument("--n-max", type=int, default=None)

    p = sub.add_parser("bench", help="time the counting strategies")
    p.add_argument("--groups", nargs="+", default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--csv", default=None, help="write the benchmark rows as CSV")

    p = sub.add_parser("certify", help="group axiom certificate")
    p.add_argument("group")
    return parser


def command_params(args: argparse.Namespace) -> Tuple[str, Dict[str, Any]]:
    if args.command == "genfun":
        return "genfun", {
            "group": args.group,
            "which": args.which,
            "normalized": args.normalized,
            "partial_fractions": args.partial_fractions,
            "coefficients": args.coefficients,
            "closed_form": args.closed_form,
        }
    if args.command == "verify-table":
        return "verify_table", {"primes": args.primes}
    if args.command == "equiv":
        return "equiv", {"group1": args.group1, "group2": args.group2, "mode": args.mode}
    if args.command == "oracle":
        return "oracle", {"group": args.group, "n_max": args.n_max}
    if args.command == "bench":
        return "bench", {"groups": args.groups, "n_max": args.n_max, "csv": args.csv}
    return "certify", {"group": args.group}


def exit_status(report: RunReport) -> int:
    if report.passed:
        return 0
    if report.status == "error" and report.error_type in USAGE_ERRORS:
        return 2
    return 1


async def run(argv: Optional[List[str]] = None) -> Tuple[RunReport, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    processor = await initialize_processor(args.settings)
    logging.getLogger().setLevel(args.log_level or processor.settings.log_level)
    name, params = command_params(args)
    report = await processor.execute_command(name, params)
    return report, args


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        report, args = asyncio.run(run(argv))
    except GroupEngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report.to_dict(include_timing=args.timing), indent=2))
    else:
        print(report.render_text())
        if args.timing:
            print(f"\n{report.timing['seconds']:.3f}s")
    return exit_status(report)


if __name__ == "__main__":
    sys.exit(main())
