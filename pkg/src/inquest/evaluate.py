"""Retrospective evaluation of selections against test-defect ground truth.

A run's defect-prone set D is the set of units where testing found at
least one defect. A selection S falls into exactly one quality category:

    A   S = D           exactly the defect-prone units
    B   S is a proper superset of D
    C   some of D captured, some missed
    D   none of D captured (D nonempty)

A and B are the effective categories. When D is empty the run carries no
signal; the result is flagged degenerate (A for empty S, B otherwise) and
excluded from significance updates.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import EvaluationError
from .prioritize import Selection, apply_rule
from .rules import Assumption, TopN, ValidityEntry, make_rule

CATEGORIES = ("A", "B", "C", "D")
TREND_CLASSES = ("acceptable", "potential", "non_acceptable")
VALIDITY_MODES = ("existential", "majority")


@dataclass(frozen=True)
class EvaluationResult:
    """Quality verdict for one rule on one run."""

    rule_id: str
    run_id: str
    run_order: int
    category: str
    effective: bool
    effectiveness: float
    effort_fraction: float
    selected_count: int
    defect_prone_count: int
    degenerate: bool = False

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"category must be one of {CATEGORIES}, got {self.category!r}")


@dataclass(frozen=True)
class TrendResult:
    """A rule's category sequence across runs plus its overall box."""

    rule_id: str
    per_run_categories: tuple
    classification: str

    @property
    def signature(self) -> str:
        return "".join(self.per_run_categories)


def categorize(selected, defect_prone) -> str:
    """Quality category of a selected set against the defect-prone set."""
    s = frozenset(selected)
    d = frozenset(defect_prone)
    if not d:
        return "A" if not s else "B"
    if s == d:
        return "A"
    if s > d:
        return "B"
    if s & d:
        return "C"
    return "D"


def _test_counts(run) -> dict:
    counts = {}
    for unit_id in run.sorted_unit_ids:
        rec = run.test_for(unit_id)
        if rec is None:
            raise EvaluationError(f"run {run.run_id}: unit {unit_id} has no test record")
        counts[unit_id] = rec.test_defects
    return counts


def defect_prone_set(run) -> frozenset:
    """Units where testing found at least one defect."""
    return frozenset(u for u, n in _test_counts(run).items() if n > 0)


def total_test_defects(run) -> int:
    return sum(_test_counts(run).values())


def effectiveness(selected, run) -> float:
    """Fraction of the run's test defects residing in the selected units.

    A run with zero test defects has nothing to find; the fraction is
    defined as 1.0 (callers see the degenerate flag on full results).
    """
    counts = _test_counts(run)
    total = sum(counts.values())
    if total == 0:
        return 1.0
    return sum(counts[u] for u in frozenset(selected)) / total


def evaluate_selection(selection: Selection, run) -> EvaluationResult:
    counts = _test_counts(run)
    total = sum(counts.values())
    d = frozenset(u for u, n in counts.items() if n > 0)
    s = selection.selected_set
    category = categorize(s, d)
    return EvaluationResult(
        rule_id=selection.rule_id,
        run_id=run.run_id,
        run_order=run.order_index,
        category=category,
        effective=category in ("A", "B"),
        effectiveness=1.0 if total == 0 else sum(counts[u] for u in s) / total,
        effort_fraction=len(s) / len(run.unit_ids) if run.unit_ids else 0.0,
        selected_count=len(s),
        defect_prone_count=len(d),
        degenerate=not d,
    )


def evaluate_rule(rule, run) -> EvaluationResult:
    return evaluate_selection(apply_rule(rule, run), run)


def evaluate_run(rules, run, jobs: int | None = None) -> list:
    """Evaluate many rules on one run; output order follows input order."""
    rules = list(rules)
    if jobs is None or jobs <= 1 or len(rules) <= 1:
        return [evaluate_rule(r, run) for r in rules]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda r: evaluate_rule(r, run), rules))


def effectiveness_curve(selector, direction, ns, run) -> list:
    """(n, effectiveness) of top-n selections, for every n in ns.

    One ranking is computed and the curve reads its prefixes, so the
    output is non-decreasing in n and consistent with apply_rule.
    """
    ns = sorted(set(ns))
    if not ns:
        raise ValueError("ns must be a nonempty collection of integers >= 1")
    counts = _test_counts(run)
    total = sum(counts.values())
    probe = make_rule("curve", TopN(selector, direction, max(ns)))
    ranking = apply_rule(probe, run).ranking_basis
    points = []
    for n in ns:
        captured = sum(counts[u] for u, _ in ranking[: min(n, len(ranking))])
        points.append((n, 1.0 if total == 0 else captured / total))
    return points


def trend_classify(rule_id: str, evaluations) -> TrendResult:
    """Classify a rule's track record across runs.

    acceptable = effective in every run; non_acceptable = in none;
    potential = the rest. Input order does not matter; runs are ordered
    by their run order internally.
    """
    evals = sorted(evaluations, key=lambda e: (e.run_order, e.run_id))
    if not evals:
        raise EvaluationError(f"rule {rule_id}: no evaluations to classify")
    for e in evals:
        if e.rule_id != rule_id:
            raise EvaluationError(
                f"rule {rule_id}: evaluation for foreign rule {e.rule_id} in input"
            )
    flags = [e.effective for e in evals]
    if all(flags):
        classification = "acceptable"
    elif not any(flags):
        classification = "non_acceptable"
    else:
        classification = "potential"
    return TrendResult(
        rule_id=rule_id,
        per_run_categories=tuple(e.category for e in evals),
        classification=classification,
    )


def update_significance(
    assumption: Assumption, run_id: str, evaluations, mode: str = "existential"
) -> Assumption:
    """Record one run's verdict on an assumption.

    ``evaluations`` are the run's results for rules derived from this
    assumption. The assumption is valid in the run when at least one rule
    was effective (mode "existential") or when a strict majority was
    (mode "majority"); degenerate results are never counted. A valid run
    raises the significance level by one; an invalid run leaves it
    unchanged; the history records the run either way.
    """
    if mode not in VALIDITY_MODES:
        raise ValueError(f"mode must be one of {VALIDITY_MODES}, got {mode!r}")
    if any(e.run_id == run_id for e in assumption.history):
        raise EvaluationError(
            f"assumption {assumption.id}: run {run_id} already recorded"
        )
    considered = [e for e in evaluations if not e.degenerate]
    effective_count = sum(1 for e in considered if e.effective)
    if mode == "existential":
        valid = effective_count >= 1
    else:
        valid = effective_count * 2 > len(considered)
    return Assumption(
        id=assumption.id,
        description=assumption.description,
        template=assumption.template,
        history=assumption.history + (ValidityEntry(run_id=run_id, valid=valid),),
    )


def evaluation_to_dict(e: EvaluationResult) -> dict:
    return {
        "rule_id": e.rule_id,
        "run_id": e.run_id,
        "run_order": e.run_order,
        "category": e.category,
        "effective": e.effective,
        "effectiveness": e.effectiveness,
        "effort_fraction": e.effort_fraction,
        "selected_count": e.selected_count,
        "defect_prone_count": e.defect_prone_count,
        "degenerate": e.degenerate,
    }


def evaluation_from_dict(d: dict) -> EvaluationResult:
    return EvaluationResult(
        rule_id=d["rule_id"],
        run_id=d["run_id"],
        run_order=d["run_order"],
        category=d["category"],
        effective=d["effective"],
        effectiveness=d["effectiveness"],
        effort_fraction=d["effort_fraction"],
        selected_count=d["selected_count"],
        defect_prone_count=d["defect_prone_count"],
        degenerate=d.get("degenerate", False),
    )
