"""Deterministic report rendering over an experience base.

A report bundles four views: per-run category counts, trend box counts,
effectiveness curves of top-N rules, and the rules that were effective in
every recorded run. Rendering carries no timestamps and no environment
details, so the same store always renders to the same bytes.
"""

import csv
import io
from collections import defaultdict
from dataclasses import dataclass

from .evaluate import CATEGORIES, TREND_CLASSES
from .rules import TopN

REPORT_FORMATS = ("markdown", "csv")


@dataclass(frozen=True)
class RunCategoryCounts:
    run_id: str
    a: int
    b: int
    c: int
    d: int
    degenerate: int

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class CurvePoint:
    assumption_id: str
    run_id: str
    n: int
    effectiveness: float


@dataclass(frozen=True)
class BestRule:
    rule_id: str
    signature: str
    description: str


@dataclass(frozen=True)
class ReportBundle:
    context_name: str
    run_ids: tuple
    category_counts: tuple  # RunCategoryCounts per run
    trend_counts: tuple  # (classification, count) pairs, fixed order
    curve_points: tuple  # CurvePoint rows
    best_rules: tuple  # BestRule rows
    evaluated_rule_count: int


def build_report(eb) -> ReportBundle:
    log = eb.evaluations()
    run_ids = eb.run_ids()

    by_run = defaultdict(list)
    for e in log:
        by_run[e.run_id].append(e)
    category_counts = []
    for run_id in run_ids:
        tally = {c: 0 for c in CATEGORIES}
        degenerate = 0
        for e in by_run[run_id]:
            tally[e.category] += 1
            if e.degenerate:
                degenerate += 1
        category_counts.append(
            RunCategoryCounts(
                run_id=run_id,
                a=tally["A"],
                b=tally["B"],
                c=tally["C"],
                d=tally["D"],
                degenerate=degenerate,
            )
        )

    trends = eb.trend_results()
    boxes = {c: 0 for c in TREND_CLASSES}
    for t in trends:
        boxes[t.classification] += 1
    trend_counts = tuple((c, boxes[c]) for c in TREND_CLASSES)

    run_rank = {rid: i for i, rid in enumerate(run_ids)}
    curve_points = sorted(
        (
            CurvePoint(
                assumption_id=eb.rules[e.rule_id].assumption_id,
                run_id=e.run_id,
                n=eb.rules[e.rule_id].form.n,
                effectiveness=e.effectiveness,
            )
            for e in log
            if isinstance(eb.rules[e.rule_id].form, TopN)
        ),
        key=lambda p: (p.assumption_id, run_rank[p.run_id], p.n),
    )

    best = sorted(
        (
            BestRule(
                rule_id=t.rule_id,
                signature=t.signature,
                description=eb.rules[t.rule_id].describe(),
            )
            for t in trends
            if t.classification == "acceptable"
        ),
        key=lambda b: (b.signature, b.rule_id),
    )

    return ReportBundle(
        context_name=eb.context_name,
        run_ids=tuple(run_ids),
        category_counts=tuple(category_counts),
        trend_counts=trend_counts,
        curve_points=tuple(curve_points),
        best_rules=tuple(best),
        evaluated_rule_count=len({e.rule_id for e in log}),
    )


def render_report(bundle: ReportBundle, fmt: str) -> str:
    if fmt == "markdown":
        return render_markdown(bundle)
    if fmt == "csv":
        return render_csv(bundle)
    raise ValueError(f"format must be one of {REPORT_FORMATS}, got {fmt!r}")


def render_markdown(bundle: ReportBundle) -> str:
    lines = [
        f"# Evaluation report: {bundle.context_name}",
        "",
        f"Rules evaluated: {bundle.evaluated_rule_count}. "
        f"Runs recorded: {len(bundle.run_ids)}.",
        "",
        "## Category counts per run",
        "",
    ]
    if bundle.category_counts:
        lines.append("| run | A | B | C | D | total | degenerate |")
        lines.append("| --- | ---: | ---: | ---: | ---: | ---: | ---: |")
        for rc in bundle.category_counts:
            lines.append(
                f"| {rc.run_id} | {rc.a} | {rc.b} | {rc.c} | {rc.d} "
                f"| {rc.total} | {rc.degenerate} |"
            )
    else:
        lines.append("No evaluations recorded.")
    lines += ["", "## Trend boxes", ""]
    lines.append("| classification | rules |")
    lines.append("| --- | ---: |")
    for name, count in bundle.trend_counts:
        lines.append(f"| {name} | {count} |")
    lines += ["", "## Effectiveness curves (top-N rules)", ""]
    if bundle.curve_points:
        lines.append("| assumption | run | n | effectiveness |")
        lines.append("| --- | --- | ---: | ---: |")
        for p in bundle.curve_points:
            lines.append(
                f"| {p.assumption_id} | {p.run_id} | {p.n} | {p.effectiveness:.4f} |"
            )
    else:
        lines.append("No top-N rules evaluated.")
    lines += ["", "## Rules effective in every run", ""]
    if bundle.best_rules:
        lines.append("| rule | signature | rule content |")
        lines.append("| --- | --- | --- |")
        for b in bundle.best_rules:
            lines.append(f"| {b.rule_id} | {b.signature} | {b.description} |")
    else:
        lines.append("None.")
    return "\n".join(lines) + "\n"


def render_csv(bundle: ReportBundle) -> str:
    out = io.StringIO()

    def section(title, header, rows):
        out.write(f"[{title}]\r\n")
        w = csv.writer(out)
        w.writerow(header)
        w.writerows(rows)
        out.write("\r\n")

    section(
        "overview",
        ["context_name", "evaluated_rules", "runs_recorded"],
        [[bundle.context_name, bundle.evaluated_rule_count, len(bundle.run_ids)]],
    )
    section(
        "category_counts",
        ["run_id", "A", "B", "C", "D", "total", "degenerate"],
        [
            [rc.run_id, rc.a, rc.b, rc.c, rc.d, rc.total, rc.degenerate]
            for rc in bundle.category_counts
        ],
    )
    section(
        "trend_boxes",
        ["classification", "rules"],
        [[name, count] for name, count in bundle.trend_counts],
    )
    section(
        "effectiveness_curves",
        ["assumption_id", "run_id", "n", "effectiveness"],
        [
            [p.assumption_id, p.run_id, p.n, f"{p.effectiveness:.4f}"]
            for p in bundle.curve_points
        ],
    )
    section(
        "best_rules",
        ["rule_id", "signature", "description"],
        [[b.rule_id, b.signature, b.description] for b in bundle.best_rules],
    )
    return out.getvalue()
