"""Command-line surface tying ingestion, rules, evaluation, and reports together.

Exit codes: 0 success, 1 validation or data failure, 2 usage error.
All outputs are deterministic functions of the inputs; diagnostics and
summaries go to stderr so stdout stays machine-readable.
"""

import argparse
import csv
import io
import os
import sys
from collections import Counter

from .dataset import load_dataset
from .errors import DatasetValidationError, InquestError, StoreError
from .evaluate import evaluate_run
from .prioritize import apply_rules
from .report import REPORT_FORMATS, build_report, render_report
from .rules import generate_rules, load_catalog, load_rules_document, save_rules
from .sourcemetrics import (
    CYCLOMATIC_AGGREGATES,
    extract_tree,
    load_mapping_csv,
    write_product_csv,
)
from .store import CONTEXT_FILE, ExperienceBase

STORE_ENV_VAR = "INQUEST_STORE"


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inquest",
        description=(
            "Derive unit-selection rules from inspection and product metrics, "
            "prioritize defect-prone code units for testing, and evaluate the "
            "rules retrospectively against test results."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a dataset directory and summarize it")
    p.add_argument("dataset", help="dataset directory")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract-metrics", help="measure source files into a product CSV")
    p.add_argument("src_dir", help="directory of source files")
    p.add_argument("--out", required=True, help="output product-metrics CSV")
    p.add_argument("--mapping", help="CSV (file_path,unit_id) overriding stem mapping")
    p.add_argument(
        "--aggregate",
        choices=CYCLOMATIC_AGGREGATES,
        default="max",
        help="per-unit complexity aggregation (default max)",
    )
    p.add_argument("--jobs", type=int, default=1, help="parallel extraction workers")
    p.set_defaults(func=cmd_extract_metrics)

    p = sub.add_parser("generate-rules", help="expand an assumption catalog into rules")
    p.add_argument("--catalog", required=True, help="catalog JSON file")
    p.add_argument("--out", required=True, help="output rules JSON file")
    p.set_defaults(func=cmd_generate_rules)

    p = sub.add_parser("prioritize", help="apply rules to one run, printing selections")
    p.add_argument("--dataset", required=True, help="dataset directory")
    p.add_argument("--rules", required=True, help="rules JSON file")
    p.add_argument("--run", required=True, help="run id, e.g. run_1")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="parallel rule application")
    p.set_defaults(func=cmd_prioritize)

    p = sub.add_parser("evaluate", help="evaluate rules against test outcomes")
    p.add_argument("--dataset", required=True, help="dataset directory")
    p.add_argument("--rules", required=True, help="rules JSON file")
    p.add_argument("--run", help="evaluate one run only (default: all runs)")
    p.add_argument(
        "--store",
        default=os.environ.get(STORE_ENV_VAR),
        help=f"record results into this store (default ${STORE_ENV_VAR})",
    )
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="parallel rule evaluation")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("trend", help="per-rule category signatures across runs")
    p.add_argument(
        "--store",
        default=os.environ.get(STORE_ENV_VAR),
        help=f"store directory (default ${STORE_ENV_VAR})",
    )
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("report", help="render the full evaluation report")
    p.add_argument(
        "--store",
        default=os.environ.get(STORE_ENV_VAR),
        help=f"store directory (default ${STORE_ENV_VAR})",
    )
    p.add_argument("--format", choices=REPORT_FORMATS, default="markdown")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DatasetValidationError as exc:
        print("dataset validation failed:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  {violation}", file=sys.stderr)
        return 1
    except InquestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_store(args) -> str:
    if not args.store:
        raise _UsageError(f"--store is required (or set {STORE_ENV_VAR})")
    return args.store


def _open_existing_store(path) -> ExperienceBase:
    if not (os.path.isdir(path) and os.path.isfile(os.path.join(path, CONTEXT_FILE))):
        raise StoreError(f"no store at {path}")
    return ExperienceBase.open_or_init(path)


def cmd_ingest(args) -> int:
    ds = load_dataset(args.dataset)
    print(f"context {ds.context_name}: {len(ds.runs)} runs, {len(ds.units)} units")
    for run in ds.runs:
        inspected = sum(r.defects_total for r in run.inspection_records)
        if run.has_all_test_records():
            tested = sum(r.test_defects for r in run.test_records)
            tail = f"{tested} test defects"
        else:
            tail = "tests pending"
        print(
            f"{run.run_id}: {len(run.unit_ids)} units, "
            f"{inspected} inspection defects, {tail}"
        )
    return 0


def cmd_extract_metrics(args) -> int:
    mapping = load_mapping_csv(args.mapping) if args.mapping else None
    pairs = extract_tree(args.src_dir, mapping=mapping, jobs=args.jobs)
    write_product_csv(pairs, args.out, aggregate=args.aggregate)
    print(f"{len(pairs)} units -> {args.out}")
    return 0


def cmd_generate_rules(args) -> int:
    catalog = load_catalog(args.catalog)
    rules = generate_rules(catalog)
    save_rules(rules, args.out, assumptions=[e.assumption for e in catalog.entries])
    print(f"{len(rules)} rules")
    return 0


def cmd_prioritize(args) -> int:
    ds = load_dataset(args.dataset)
    run = ds.run(args.run)
    if run is None:
        raise InquestError(f"dataset has no run {args.run!r}")
    rules = load_rules_document(args.rules)[0]
    selections = apply_rules(rules, run, jobs=args.jobs)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["rule_id", "run_id", "rank", "unit_id", "metric_value"])
    for selection in selections:
        values = dict(selection.ranking_basis or ())
        for rank, unit_id in enumerate(selection.selected, start=1):
            value = repr(values[unit_id]) if unit_id in values else ""
            w.writerow([selection.rule_id, selection.run_id, rank, unit_id, value])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_evaluate(args) -> int:
    ds = load_dataset(args.dataset)
    rules, assumptions = load_rules_document(args.rules)
    if args.run:
        run = ds.run(args.run)
        if run is None:
            raise InquestError(f"dataset has no run {args.run!r}")
        runs = [run]
    else:
        runs = list(ds.runs)

    results_by_run = [(run, evaluate_run(rules, run, jobs=args.jobs)) for run in runs]

    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(
        ["rule_id", "run_id", "category", "effective", "effectiveness", "effort_fraction"]
    )
    for run, results in results_by_run:
        for e in results:
            w.writerow(
                [
                    e.rule_id,
                    e.run_id,
                    e.category,
                    str(e.effective).lower(),
                    f"{e.effectiveness:.6f}",
                    f"{e.effort_fraction:.6f}",
                ]
            )
    _emit(buf.getvalue(), args.out)

    for run, results in results_by_run:
        tally = Counter(e.category for e in results)
        print(
            f"{run.run_id}: "
            + " ".join(f"{c}={tally.get(c, 0)}" for c in "ABCD")
            + f" of {len(results)}",
            file=sys.stderr,
        )

    if args.store:
        eb = ExperienceBase.open_or_init(args.store, context_name=ds.context_name)
        eb.register(assumptions, rules)
        for run, results in results_by_run:
            eb.record_run_evaluations(run.run_id, results)
        print(f"recorded {len(results_by_run)} runs into {args.store}", file=sys.stderr)
    return 0


def cmd_trend(args) -> int:
    eb = _open_existing_store(_require_store(args))
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["rule_id", "signature", "classification"])
    for t in eb.trend_results():
        w.writerow([t.rule_id, t.signature, t.classification])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_report(args) -> int:
    eb = _open_existing_store(_require_store(args))
    _emit(render_report(build_report(eb), args.format), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
