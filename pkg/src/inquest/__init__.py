"""Inspection-driven prioritization of defect-prone code units for testing.

The workflow: load a dataset of QA runs (inspection results, product
metrics, test outcomes per code unit), expand an assumption catalog into
selection rules, apply the rules to pick units worth focused testing, then
evaluate retrospectively how well each rule predicted where test defects
actually were. Track records accumulate in a persistent experience base.
"""

from .bundled import (
    casestudy1_dataset,
    casestudy2_catalog,
    fixture_path,
    snippets_dir,
    synthetic12_dataset,
    table1_catalog,
)
from .dataset import (
    CodeUnit,
    Dataset,
    InspectionRecord,
    ProductMetricsRecord,
    QARun,
    TestRecord,
    Violation,
    load_dataset,
    save_dataset,
    validate_dataset,
)
from .errors import (
    CatalogError,
    DatasetValidationError,
    EvaluationError,
    ExtractionError,
    IngestionError,
    InquestError,
    MetricError,
    MissingMetricError,
    RuleApplicationError,
    StoreCorruptError,
    StoreError,
    UndefinedMetricError,
)
from .evaluate import (
    EvaluationResult,
    TrendResult,
    categorize,
    defect_prone_set,
    effectiveness,
    effectiveness_curve,
    evaluate_rule,
    evaluate_run,
    evaluate_selection,
    total_test_defects,
    trend_classify,
    update_significance,
)
from .metrics import (
    InspectionSelector,
    MetricSelector,
    ProductSelector,
    evaluate_metric,
    evaluate_over_run,
    selector_from_key,
)
from .prioritize import Selection, apply_rule, apply_rules, combine_union
from .report import ReportBundle, build_report, render_csv, render_markdown, render_report
from .rules import (
    MEAN,
    MEDIAN,
    Assumption,
    Catalog,
    CatalogEntry,
    Conjunctive,
    SelectionRule,
    ThresholdCriterion,
    ThresholdSpec,
    TopN,
    ValidityEntry,
    canonical_form,
    catalog_from_dict,
    generate_rules,
    load_catalog,
    load_rules,
    load_rules_document,
    make_rule,
    normalize_direction,
    resolve_threshold,
    rule_from_dict,
    rule_to_dict,
    satisfies,
    save_rules,
)
from .sourcemetrics import (
    MethodMetrics,
    SourceUnitMetrics,
    count_loc,
    extract_file,
    extract_source,
    extract_tree,
    tokenize,
    write_product_csv,
)
from .store import ExperienceBase

__version__ = "0.1.0"

__all__ = [
    "MEAN",
    "MEDIAN",
    "Assumption",
    "Catalog",
    "CatalogEntry",
    "CatalogError",
    "CodeUnit",
    "Conjunctive",
    "Dataset",
    "DatasetValidationError",
    "EvaluationError",
    "EvaluationResult",
    "ExperienceBase",
    "ExtractionError",
    "IngestionError",
    "InquestError",
    "InspectionRecord",
    "InspectionSelector",
    "MethodMetrics",
    "MetricError",
    "MetricSelector",
    "MissingMetricError",
    "ProductMetricsRecord",
    "ProductSelector",
    "QARun",
    "ReportBundle",
    "RuleApplicationError",
    "Selection",
    "SelectionRule",
    "SourceUnitMetrics",
    "StoreCorruptError",
    "StoreError",
    "TestRecord",
    "ThresholdCriterion",
    "ThresholdSpec",
    "TopN",
    "TrendResult",
    "UndefinedMetricError",
    "ValidityEntry",
    "Violation",
    "apply_rule",
    "apply_rules",
    "build_report",
    "canonical_form",
    "casestudy1_dataset",
    "casestudy2_catalog",
    "catalog_from_dict",
    "categorize",
    "combine_union",
    "count_loc",
    "defect_prone_set",
    "effectiveness",
    "effectiveness_curve",
    "evaluate_metric",
    "evaluate_over_run",
    "evaluate_rule",
    "evaluate_run",
    "evaluate_selection",
    "extract_file",
    "extract_source",
    "extract_tree",
    "fixture_path",
    "generate_rules",
    "load_catalog",
    "load_dataset",
    "load_rules",
    "load_rules_document",
    "make_rule",
    "normalize_direction",
    "render_csv",
    "render_markdown",
    "render_report",
    "resolve_threshold",
    "rule_from_dict",
    "rule_to_dict",
    "satisfies",
    "save_dataset",
    "save_rules",
    "selector_from_key",
    "snippets_dir",
    "synthetic12_dataset",
    "table1_catalog",
    "tokenize",
    "total_test_defects",
    "trend_classify",
    "update_significance",
    "validate_dataset",
    "write_product_csv",
]
