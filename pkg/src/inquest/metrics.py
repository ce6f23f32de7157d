"""Metric selectors: how one number is read off one unit within one run.

Two selector families exist. Inspection selectors derive values from review
results (severity-filtered defect counts, optional comments, optional
scaling by the inspected fraction). Product selectors return a stored
static metric. Every selector has a canonical colon-separated key used
for serialization and for rule identity.
"""

from dataclasses import dataclass

from .errors import MissingMetricError, UndefinedMetricError

MEASURES = ("content", "density")
SEVERITY_FILTERS = ("all", "high", "medium", "low")
COMMENT_HANDLING = ("exclude", "include")
SCALING = ("raw", "scaled")

PRODUCT_METRICS = (
    "class_length",
    "mean_method_length",
    "cyclomatic",
    "statement_loc",
    "waste_per_line",
)
_PRODUCT_FIELDS = {
    "class_length": "class_length_loc",
    "mean_method_length": "mean_method_length",
    "cyclomatic": "cyclomatic",
    "statement_loc": "statement_loc",
    "waste_per_line": "waste_per_line",
}
_PRODUCT_LABELS = {
    "class_length": "class length",
    "mean_method_length": "mean method length",
    "cyclomatic": "cyclomatic complexity",
    "statement_loc": "statement count",
    "waste_per_line": "waste per line",
}


def _check(field: str, value: str, allowed) -> None:
    if value not in allowed:
        raise ValueError(f"{field} must be one of {allowed}, got {value!r}")


@dataclass(frozen=True)
class InspectionSelector:
    """A review-derived metric.

    content = defects passing ``severity_filter``, plus comments when
    ``comment_handling`` is ``include``. ``scaled`` divides content by the
    unit's coverage_rate, estimating the count under full inspection.
    density = content / class_length_loc (scaling, if any, happens first).
    """

    measure: str
    severity_filter: str = "all"
    comment_handling: str = "exclude"
    scaling: str = "raw"

    def __post_init__(self):
        _check("measure", self.measure, MEASURES)
        _check("severity_filter", self.severity_filter, SEVERITY_FILTERS)
        _check("comment_handling", self.comment_handling, COMMENT_HANDLING)
        _check("scaling", self.scaling, SCALING)

    @property
    def key(self) -> str:
        return (
            f"inspection:{self.measure}:{self.severity_filter}"
            f":{self.comment_handling}:{self.scaling}"
        )

    def describe(self) -> str:
        noun = "defect content" if self.measure == "content" else "defect density"
        sev = (
            "all severities"
            if self.severity_filter == "all"
            else f"{self.severity_filter} severity"
        )
        qualifiers = [sev]
        if self.comment_handling == "include":
            qualifiers.append("comments included")
        if self.scaling == "scaled":
            qualifiers.append("coverage scaled")
        return f"{noun} ({', '.join(qualifiers)})"


@dataclass(frozen=True)
class ProductSelector:
    """A stored static product metric, returned as-is."""

    name: str

    def __post_init__(self):
        _check("name", self.name, PRODUCT_METRICS)

    @property
    def key(self) -> str:
        return f"product:{self.name}"

    def describe(self) -> str:
        return _PRODUCT_LABELS[self.name]


MetricSelector = InspectionSelector | ProductSelector


def selector_from_key(key: str) -> MetricSelector:
    """Inverse of ``.key``. Raises ValueError on malformed keys."""
    parts = key.split(":")
    if parts[0] == "inspection" and len(parts) == 5:
        return InspectionSelector(parts[1], parts[2], parts[3], parts[4])
    if parts[0] == "product" and len(parts) == 2:
        return ProductSelector(parts[1])
    raise ValueError(f"unrecognized selector key {key!r}")


def evaluate_metric(selector: MetricSelector, unit_id: str, run) -> float:
    """Value of ``selector`` for one unit in one run.

    Raises MissingMetricError when a needed record or optional field is
    absent, UndefinedMetricError when density has a zero-length denominator.
    """
    if isinstance(selector, InspectionSelector):
        return _evaluate_inspection(selector, unit_id, run)
    if isinstance(selector, ProductSelector):
        return _evaluate_product(selector, unit_id, run)
    raise TypeError(f"not a metric selector: {selector!r}")


def evaluate_over_run(selector: MetricSelector, run) -> dict:
    """Metric value for every unit in the run, keyed by unit id."""
    return {u: evaluate_metric(selector, u, run) for u in run.sorted_unit_ids}


def _evaluate_inspection(sel: InspectionSelector, unit_id: str, run) -> float:
    rec = run.inspection_for(unit_id)
    if rec is None:
        raise MissingMetricError(
            f"unit {unit_id}, run {run.run_id}: no inspection record"
        )
    if sel.severity_filter == "all":
        content = rec.defects_total
    else:
        content = getattr(rec, f"defects_{sel.severity_filter}")
    if sel.comment_handling == "include":
        content += rec.comments
    value = float(content)
    if sel.scaling == "scaled":
        if rec.coverage_rate <= 0:
            raise UndefinedMetricError(
                f"unit {unit_id}, run {run.run_id}: coverage_rate is not positive"
            )
        value /= rec.coverage_rate
    if sel.measure == "content":
        return value
    prod = run.product_for(unit_id)
    if prod is None:
        raise MissingMetricError(
            f"unit {unit_id}, run {run.run_id}: no product record "
            "(class_length_loc needed for density)"
        )
    if prod.class_length_loc == 0:
        raise UndefinedMetricError(
            f"unit {unit_id}, run {run.run_id}: density undefined for "
            "class_length_loc = 0"
        )
    return value / prod.class_length_loc


def _evaluate_product(sel: ProductSelector, unit_id: str, run) -> float:
    prod = run.product_for(unit_id)
    if prod is None:
        raise MissingMetricError(
            f"unit {unit_id}, run {run.run_id}: no product record"
        )
    value = getattr(prod, _PRODUCT_FIELDS[sel.name])
    if value is None:
        raise MissingMetricError(
            f"unit {unit_id}, run {run.run_id}: product metric {sel.name} absent"
        )
    return float(value)
