"""Assumptions, selection rules, and systematic rule generation.

An assumption is a hypothesized link between metrics and test
defect-proneness ("units with many review defects hold more test
defects"). A selection rule makes one assumption operational: either a
conjunction of threshold criteria over concrete metrics, or a top-N cut
of a metric ranking.

Catalogs describe assumption templates as JSON; ``generate_rules``
expands them into the full deduplicated cross product. Rule ids are
derived from content (hash of the canonical form) so the same rule keeps
its identity across catalogs, stores, and machines.
"""

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CatalogError, RuleApplicationError
from .metrics import (
    InspectionSelector,
    MetricSelector,
    ProductSelector,
    evaluate_over_run,
    selector_from_key,
)

DIRECTIONS = ("large", "small")
# high/low are the conventional words for complexity; same semantics.
_DIRECTION_ALIASES = {"high": "large", "low": "small"}

THRESHOLD_KINDS = ("explicit", "mean", "median", "quantile")


def normalize_direction(direction: str) -> str:
    direction = _DIRECTION_ALIASES.get(direction, direction)
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be large/small (or high/low), got {direction!r}")
    return direction


@dataclass(frozen=True)
class ThresholdSpec:
    """How a criterion's cut value is obtained for a given run."""

    kind: str
    value: float | None = None

    def __post_init__(self):
        if self.kind not in THRESHOLD_KINDS:
            raise ValueError(f"threshold kind must be one of {THRESHOLD_KINDS}, got {self.kind!r}")
        if self.kind in ("mean", "median"):
            if self.value is not None:
                raise ValueError(f"threshold {self.kind} takes no value")
        elif self.value is None:
            raise ValueError(f"threshold {self.kind} needs a value")
        elif self.kind == "quantile" and not (0.0 < self.value < 1.0):
            raise ValueError(f"quantile must lie in (0, 1), got {self.value!r}")
        elif self.kind == "explicit" and (not math.isfinite(self.value) or self.value < 0):
            raise ValueError(f"explicit threshold must be finite and >= 0, got {self.value!r}")

    @property
    def key(self) -> str:
        if self.value is None:
            return self.kind
        return f"{self.kind}:{self.value!r}"


MEAN = ThresholdSpec("mean")
MEDIAN = ThresholdSpec("median")


@dataclass(frozen=True)
class ThresholdCriterion:
    """selector `direction` threshold: large means value > cut, small means <=."""

    selector: MetricSelector
    direction: str
    threshold: ThresholdSpec = MEAN

    def __post_init__(self):
        object.__setattr__(self, "direction", normalize_direction(self.direction))

    def describe(self) -> str:
        return f"{self.direction} {self.selector.describe()}"


@dataclass(frozen=True)
class Conjunctive:
    """All criteria must hold for a unit to be selected."""

    criteria: tuple

    def __post_init__(self):
        if not self.criteria:
            raise ValueError("conjunctive rule needs at least one criterion")


@dataclass(frozen=True)
class TopN:
    """The n highest-ranked units by one metric (lowest for small)."""

    selector: MetricSelector
    direction: str
    n: int

    def __post_init__(self):
        object.__setattr__(self, "direction", normalize_direction(self.direction))
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")


RuleForm = Conjunctive | TopN


def canonical_form(assumption_id: str, form: RuleForm) -> str:
    """Stable text rendering of a rule's content; the basis of its id."""
    if isinstance(form, Conjunctive):
        crits = ";".join(
            f"{c.selector.key}|{c.direction}|{c.threshold.key}" for c in form.criteria
        )
        return f"conjunctive|{assumption_id}|{crits}"
    return f"top_n|{assumption_id}|{form.selector.key}|{form.direction}|{form.n}"


@dataclass(frozen=True)
class SelectionRule:
    id: str
    assumption_id: str
    form: RuleForm

    @property
    def canonical(self) -> str:
        return canonical_form(self.assumption_id, self.form)

    def describe(self) -> str:
        if isinstance(self.form, Conjunctive):
            return " and ".join(c.describe() for c in self.form.criteria)
        f = self.form
        order = "highest" if f.direction == "large" else "lowest"
        return f"top {f.n} by {f.selector.describe()} ({order} first)"


def make_rule(assumption_id: str, form: RuleForm) -> SelectionRule:
    digest = hashlib.sha256(canonical_form(assumption_id, form).encode("utf-8")).hexdigest()
    return SelectionRule(id=f"r{digest[:12]}", assumption_id=assumption_id, form=form)


@dataclass(frozen=True)
class ValidityEntry:
    """One run's verdict on an assumption."""

    run_id: str
    valid: bool


@dataclass(frozen=True)
class Assumption:
    """An explicit hypothesis plus its accumulated track record.

    ``template`` is the canonical JSON of the generation template the
    assumption ranges over; ``history`` holds one entry per evaluated run,
    in run order.
    """

    id: str
    description: str = ""
    template: str = ""
    history: tuple = ()

    @property
    def significance_level(self) -> int:
        return sum(1 for e in self.history if e.valid)


# ---------------------------------------------------------------------------
# Catalogs


@dataclass(frozen=True)
class CatalogEntry:
    assumption: Assumption
    forms: tuple


@dataclass(frozen=True)
class Catalog:
    name: str
    entries: tuple


def load_catalog(path) -> Catalog:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from None
    return catalog_from_dict(data)


def catalog_from_dict(data: dict) -> Catalog:
    if not isinstance(data, dict):
        raise CatalogError("catalog must be a JSON object")
    name = data.get("name", "")
    raw_entries = data.get("assumptions")
    if not raw_entries:
        raise CatalogError("catalog has no assumptions")
    default_spec = _parse_threshold(data.get("default_threshold"), MEAN)

    entries = []
    seen = set()
    for raw in raw_entries:
        aid = raw.get("id", "")
        if not aid:
            raise CatalogError("assumption without id")
        if aid in seen:
            raise CatalogError(f"duplicate assumption id {aid!r}")
        seen.add(aid)
        template = raw.get("template")
        if not isinstance(template, dict):
            raise CatalogError(f"assumption {aid}: missing template")
        try:
            forms = _expand_template(template, default_spec)
        except (ValueError, KeyError, TypeError) as exc:
            raise CatalogError(f"assumption {aid}: {exc}") from None
        assumption = Assumption(
            id=aid,
            description=raw.get("description", ""),
            template=json.dumps(template, sort_keys=True),
        )
        entries.append(CatalogEntry(assumption=assumption, forms=tuple(forms)))
    return Catalog(name=name, entries=tuple(entries))


def _expand_template(template: dict, default_spec: ThresholdSpec) -> list:
    kind = template.get("form")
    if kind == "conjunctive":
        specs = template.get("criteria")
        if not specs:
            raise ValueError("conjunctive template needs a nonempty criteria list")
        positions = [_expand_criterion_spec(cs, default_spec) for cs in specs]
        return [Conjunctive(tuple(combo)) for combo in itertools.product(*positions)]
    if kind == "top_n":
        selectors = _expand_selector_spec(template.get("selector", {}))
        directions = [normalize_direction(d) for d in template.get("directions", [])]
        ns = template.get("ns")
        if not directions:
            raise ValueError("top_n template needs directions")
        if not ns:
            raise ValueError("top_n template needs a nonempty ns list")
        return [TopN(sel, d, n) for sel in selectors for d in directions for n in ns]
    raise ValueError(f"unknown template form {kind!r}")


def _expand_criterion_spec(cs: dict, default_spec: ThresholdSpec) -> list:
    selectors = _expand_selector_spec(cs)
    directions = [normalize_direction(d) for d in cs.get("directions", [])]
    if not directions:
        raise ValueError("criterion spec needs directions")
    spec = _parse_threshold(cs.get("threshold"), default_spec)
    return [ThresholdCriterion(sel, d, spec) for sel in selectors for d in directions]


def _expand_selector_spec(cs: dict) -> list:
    family = cs.get("family")
    if family == "inspection":
        return [
            InspectionSelector(m, s, c, sc)
            for m in cs.get("measures", ["content"])
            for s in cs.get("severity_filters", ["all"])
            for c in cs.get("comment_handling", ["exclude"])
            for sc in cs.get("scaling", ["raw"])
        ]
    if family == "product":
        names = cs.get("names")
        if not names:
            raise ValueError("product selector spec needs names")
        return [ProductSelector(n) for n in names]
    raise ValueError(f"selector family must be inspection or product, got {family!r}")


def _parse_threshold(raw, default: ThresholdSpec) -> ThresholdSpec:
    if raw is None:
        return default
    if isinstance(raw, str):
        return ThresholdSpec(raw)
    if isinstance(raw, dict):
        return ThresholdSpec(raw.get("kind", ""), raw.get("value"))
    raise ValueError(f"unrecognized threshold spec {raw!r}")


# ---------------------------------------------------------------------------
# Generation and threshold resolution


def generate_rules(catalog: Catalog) -> list:
    """Expand a catalog into its full rule set.

    Deterministic: output is sorted by (assumption id, canonical form) and
    deduplicated on canonical form, so value-equal duplicates collapse.
    """
    if not catalog.entries:
        raise CatalogError("catalog has no assumptions")
    seen = set()
    for entry in catalog.entries:
        if entry.assumption.id in seen:
            raise CatalogError(f"duplicate assumption id {entry.assumption.id!r}")
        seen.add(entry.assumption.id)

    by_canonical = {}
    for entry in catalog.entries:
        for form in entry.forms:
            rule = make_rule(entry.assumption.id, form)
            by_canonical.setdefault(rule.canonical, rule)
    return sorted(by_canonical.values(), key=lambda r: (r.assumption_id, r.canonical))


def resolve_threshold(criterion: ThresholdCriterion, run) -> float:
    """Concrete cut value of a criterion for one run.

    mean and median are taken over the run's units; quantiles use linear
    interpolation between order statistics; explicit specs are returned
    as-is without touching the run.
    """
    spec = criterion.threshold
    if spec.kind == "explicit":
        return float(spec.value)
    values = list(evaluate_over_run(criterion.selector, run).values())
    if not values:
        raise RuleApplicationError(f"run {run.run_id} has no units to take a threshold over")
    if spec.kind == "mean":
        return float(np.mean(values))
    if spec.kind == "median":
        return float(np.median(values))
    return float(np.quantile(values, spec.value))


def satisfies(direction: str, value: float, threshold: float) -> bool:
    """large strictly exceeds the cut; small is everything else (<=)."""
    if direction == "large":
        return value > threshold
    return value <= threshold


# ---------------------------------------------------------------------------
# Serialization


def threshold_to_dict(spec: ThresholdSpec) -> dict:
    d = {"kind": spec.kind}
    if spec.value is not None:
        d["value"] = spec.value
    return d


def rule_to_dict(rule: SelectionRule) -> dict:
    if isinstance(rule.form, Conjunctive):
        return {
            "id": rule.id,
            "assumption_id": rule.assumption_id,
            "form": "conjunctive",
            "criteria": [
                {
                    "selector": c.selector.key,
                    "direction": c.direction,
                    "threshold": threshold_to_dict(c.threshold),
                }
                for c in rule.form.criteria
            ],
        }
    return {
        "id": rule.id,
        "assumption_id": rule.assumption_id,
        "form": "top_n",
        "selector": rule.form.selector.key,
        "direction": rule.form.direction,
        "n": rule.form.n,
    }


def rule_from_dict(d: dict) -> SelectionRule:
    kind = d.get("form")
    if kind == "conjunctive":
        criteria = tuple(
            ThresholdCriterion(
                selector=selector_from_key(c["selector"]),
                direction=c["direction"],
                threshold=_parse_threshold(c.get("threshold"), MEAN),
            )
            for c in d["criteria"]
        )
        form = Conjunctive(criteria)
    elif kind == "top_n":
        form = TopN(selector_from_key(d["selector"]), d["direction"], d["n"])
    else:
        raise ValueError(f"unknown rule form {kind!r}")
    rule = make_rule(d["assumption_id"], form)
    stored = d.get("id")
    if stored is not None and stored != rule.id:
        raise ValueError(
            f"rule id {stored!r} does not match its content-derived id {rule.id!r}"
        )
    return rule


def save_rules(rules, path, assumptions=None) -> None:
    """Write a rule set (and, optionally, the assumptions it came from)."""
    doc = {"rules": [rule_to_dict(r) for r in rules]}
    if assumptions is not None:
        doc["assumptions"] = [
            assumption_to_dict(a) for a in sorted(assumptions, key=lambda a: a.id)
        ]
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_rules_document(path):
    """(rules, assumptions) from a rules file.

    Files written without assumptions get bare assumption identities
    synthesized from the rule's assumption ids.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"cannot read rules file {path}: {exc}") from None
    try:
        rules = [rule_from_dict(d) for d in data.get("rules", [])]
        assumptions = [assumption_from_dict(d) for d in data.get("assumptions", [])]
    except (ValueError, KeyError, TypeError) as exc:
        raise CatalogError(f"malformed rules file {path}: {exc}") from None
    known = {a.id for a in assumptions}
    for rule in rules:
        if rule.assumption_id not in known:
            known.add(rule.assumption_id)
            assumptions.append(Assumption(id=rule.assumption_id))
    return rules, sorted(assumptions, key=lambda a: a.id)


def load_rules(path) -> list:
    rules, _ = load_rules_document(path)
    return rules


def assumption_to_dict(a: Assumption) -> dict:
    return {"id": a.id, "description": a.description, "template": a.template}


def assumption_from_dict(d: dict) -> Assumption:
    return Assumption(
        id=d["id"], description=d.get("description", ""), template=d.get("template", "")
    )
