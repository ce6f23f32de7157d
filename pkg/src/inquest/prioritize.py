"""Applying selection rules to runs: selected unit sets and rankings.

Everything here is a pure function of immutable inputs, so batch
application parallelizes freely; ``apply_rules`` keeps its output in rule
order regardless of the worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import MetricError, RuleApplicationError
from .metrics import evaluate_over_run
from .rules import Conjunctive, SelectionRule, TopN, resolve_threshold, satisfies


@dataclass(frozen=True)
class Selection:
    """Units picked by one rule on one run.

    ``selected`` order is the ranking order for top-N rules and ascending
    unit id for conjunctive rules. ``ranking_basis`` carries the full
    (unit_id, metric value) ranking for top-N rules, None otherwise.
    """

    rule_id: str
    run_id: str
    selected: tuple
    ranking_basis: tuple | None = None

    @property
    def selected_set(self) -> frozenset:
        return frozenset(self.selected)


def apply_rule(rule: SelectionRule, run) -> Selection:
    if isinstance(rule.form, Conjunctive):
        return _apply_conjunctive(rule, run)
    return _apply_top_n(rule, run)


def _metric_values(rule, selector, run) -> dict:
    try:
        return evaluate_over_run(selector, run)
    except MetricError as exc:
        raise RuleApplicationError(
            f"rule {rule.id}: selector {selector.key}: {exc}"
        ) from exc


def _apply_conjunctive(rule: SelectionRule, run) -> Selection:
    surviving = set(run.unit_ids)
    for criterion in rule.form.criteria:
        values = _metric_values(rule, criterion.selector, run)
        threshold = resolve_threshold(criterion, run)
        surviving &= {
            u for u, v in values.items() if satisfies(criterion.direction, v, threshold)
        }
    return Selection(rule_id=rule.id, run_id=run.run_id, selected=tuple(sorted(surviving)))


def _apply_top_n(rule: SelectionRule, run) -> Selection:
    form = rule.form
    values = _metric_values(rule, form.selector, run)
    if form.direction == "large":
        ranking = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    else:
        ranking = sorted(values.items(), key=lambda kv: (kv[1], kv[0]))
    count = min(form.n, len(ranking))
    return Selection(
        rule_id=rule.id,
        run_id=run.run_id,
        selected=tuple(u for u, _ in ranking[:count]),
        ranking_basis=tuple(ranking),
    )


def apply_rules(rules, run, jobs: int | None = None) -> list:
    """Apply many rules to one run; output order follows input order."""
    rules = list(rules)
    if jobs is None or jobs <= 1 or len(rules) <= 1:
        return [apply_rule(r, run) for r in rules]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda r: apply_rule(r, run), rules))


def combine_union(a: Selection, b: Selection) -> Selection:
    """Units selected by either rule, ordered by unit id."""
    if a.run_id != b.run_id:
        raise RuleApplicationError(
            f"cannot combine selections from different runs ({a.run_id} vs {b.run_id})"
        )
    combined_id = "union(" + ",".join(sorted((a.rule_id, b.rule_id))) + ")"
    return Selection(
        rule_id=combined_id,
        run_id=a.run_id,
        selected=tuple(sorted(set(a.selected) | set(b.selected))),
    )
