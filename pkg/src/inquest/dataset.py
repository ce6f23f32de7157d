"""Domain types for measured code units and quality-assurance runs.

A dataset is a sequence of QA runs. Each run names a set of code units and
carries, per unit, an inspection record (review defects by severity, review
comments, inspected fraction), a product-metrics record (size, method length,
complexity, optional extras), and, once testing happened, a test record.

Datasets are immutable after loading; record collections are stored as
tuples so that duplicate records remain representable and reportable by
``validate_dataset`` instead of being silently collapsed.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DatasetValidationError, IngestionError

UNIT_KINDS = ("class", "module")

META_FILE = "dataset.meta"
INSPECTION_COLUMNS = (
    "unit_id",
    "kind",
    "defects_high",
    "defects_medium",
    "defects_low",
    "comments",
    "coverage_rate",
)
PRODUCT_COLUMNS = (
    "unit_id",
    "class_length_loc",
    "mean_method_length",
    "cyclomatic",
    "statement_loc",
    "waste_per_line",
)
TEST_COLUMNS = ("unit_id", "test_defects")


@dataclass(frozen=True)
class CodeUnit:
    """One prioritizable unit: a code class or a module."""

    id: str
    name: str
    kind: str


@dataclass(frozen=True)
class InspectionRecord:
    """Review outcome for one unit in one run.

    ``coverage_rate`` is the inspected fraction of the unit, in (0, 1];
    a partially inspected unit can have its defect counts scaled up by
    the metrics engine.
    """

    unit_id: str
    run_id: str
    defects_high: int
    defects_medium: int
    defects_low: int
    comments: int
    coverage_rate: float

    @property
    def defects_total(self) -> int:
        return self.defects_high + self.defects_medium + self.defects_low


@dataclass(frozen=True)
class ProductMetricsRecord:
    """Static product metrics for one unit in one run.

    ``statement_loc`` and ``waste_per_line`` are optional context metrics;
    ``None`` means the context did not measure them.
    """

    unit_id: str
    run_id: str
    class_length_loc: int
    mean_method_length: float
    cyclomatic: float
    statement_loc: int | None = None
    waste_per_line: float | None = None


@dataclass(frozen=True)
class TestRecord:
    """Defects found while testing one unit in one run."""

    unit_id: str
    run_id: str
    test_defects: int


@dataclass(frozen=True)
class QARun:
    """One inspection-then-test cycle over a set of units."""

    run_id: str
    order_index: int
    unit_ids: frozenset
    inspection_records: tuple = ()
    product_records: tuple = ()
    test_records: tuple = ()

    def __post_init__(self):
        # First occurrence wins; duplicates are surfaced by validate_dataset.
        object.__setattr__(self, "_insp", _first_by_unit(self.inspection_records))
        object.__setattr__(self, "_prod", _first_by_unit(self.product_records))
        object.__setattr__(self, "_test", _first_by_unit(self.test_records))

    @property
    def sorted_unit_ids(self) -> list:
        return sorted(self.unit_ids)

    def inspection_for(self, unit_id: str) -> InspectionRecord | None:
        return self._insp.get(unit_id)

    def product_for(self, unit_id: str) -> ProductMetricsRecord | None:
        return self._prod.get(unit_id)

    def test_for(self, unit_id: str) -> TestRecord | None:
        return self._test.get(unit_id)

    def has_all_test_records(self) -> bool:
        return all(u in self._test for u in self.unit_ids)


@dataclass(frozen=True)
class Dataset:
    """An ordered sequence of QA runs plus the unit catalog they reference."""

    context_name: str
    runs: tuple = ()
    units: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "_unit_map", {u.id: u for u in self.units})
        object.__setattr__(self, "_run_map", {r.run_id: r for r in self.runs})

    def unit(self, unit_id: str) -> CodeUnit | None:
        return self._unit_map.get(unit_id)

    def run(self, run_id: str) -> QARun | None:
        return self._run_map.get(run_id)


@dataclass(frozen=True)
class Violation:
    """One broken invariant, located as precisely as the data allows."""

    run_id: str | None
    unit_id: str | None
    rule: str

    def __str__(self):
        where = []
        if self.run_id is not None:
            where.append(f"run {self.run_id}")
        if self.unit_id is not None:
            where.append(f"unit {self.unit_id}")
        prefix = ", ".join(where)
        return f"{prefix}: {self.rule}" if prefix else self.rule


def _first_by_unit(records):
    out = {}
    for r in records:
        out.setdefault(r.unit_id, r)
    return out


# ---------------------------------------------------------------------------
# Validation


def validate_dataset(dataset: Dataset) -> list:
    """Check every invariant and return all violations (empty list = valid).

    Pure and order-independent: permuting record collections yields the
    same (sorted) report.
    """
    v = []

    if not dataset.runs:
        v.append(Violation(None, None, "no runs"))

    seen_unit_ids = set()
    for unit in dataset.units:
        if not unit.id:
            v.append(Violation(None, unit.id, "unit id must be nonempty"))
        elif unit.id in seen_unit_ids:
            v.append(Violation(None, unit.id, "duplicate unit id in catalog"))
        seen_unit_ids.add(unit.id)
        if unit.kind not in UNIT_KINDS:
            v.append(Violation(None, unit.id, f"unit kind must be one of {UNIT_KINDS}"))

    catalog_ids = {u.id for u in dataset.units}
    seen_runs = set()
    prev_order = None
    for run in dataset.runs:
        if run.run_id in seen_runs:
            v.append(Violation(run.run_id, None, "duplicate run id"))
        seen_runs.add(run.run_id)
        if run.order_index < 0:
            v.append(Violation(run.run_id, None, "order_index must be >= 0"))
        if prev_order is not None and run.order_index <= prev_order:
            v.append(Violation(run.run_id, None, "order_index must be strictly increasing"))
        prev_order = run.order_index

        if not run.unit_ids:
            v.append(Violation(run.run_id, None, "run has no units"))

        for unit_id in run.sorted_unit_ids:
            if unit_id not in catalog_ids:
                v.append(Violation(run.run_id, unit_id, "unit not in catalog"))
            if run.inspection_for(unit_id) is None:
                v.append(Violation(run.run_id, unit_id, "missing inspection record"))
            if run.product_for(unit_id) is None:
                v.append(Violation(run.run_id, unit_id, "missing product record"))

        _check_records(v, run, run.inspection_records, "inspection", _check_inspection)
        _check_records(v, run, run.product_records, "product", _check_product)
        _check_records(v, run, run.test_records, "test", _check_test)

    v.sort(key=lambda x: (x.run_id or "", x.unit_id or "", x.rule))
    return v


def _check_records(v, run, records, label, check_one):
    seen = set()
    for rec in records:
        if rec.unit_id in seen:
            v.append(
                Violation(run.run_id, rec.unit_id, f"duplicate {label} record for (unit, run)")
            )
        seen.add(rec.unit_id)
        if rec.run_id != run.run_id:
            v.append(
                Violation(run.run_id, rec.unit_id, f"{label} record carries foreign run id {rec.run_id}")
            )
        if rec.unit_id not in run.unit_ids:
            v.append(
                Violation(run.run_id, rec.unit_id, f"{label} record for unit outside the run")
            )
        check_one(v, run.run_id, rec)


def _check_inspection(v, run_id, rec: InspectionRecord):
    for name in ("defects_high", "defects_medium", "defects_low", "comments"):
        value = getattr(rec, name)
        if not isinstance(value, int) or value < 0:
            v.append(Violation(run_id, rec.unit_id, f"{name} must be a nonnegative integer"))
    if not (0.0 < rec.coverage_rate <= 1.0):
        v.append(Violation(run_id, rec.unit_id, "coverage_rate must be in (0, 1]"))


def _check_product(v, run_id, rec: ProductMetricsRecord):
    if not isinstance(rec.class_length_loc, int) or rec.class_length_loc < 0:
        v.append(Violation(run_id, rec.unit_id, "class_length_loc must be a nonnegative integer"))
    if rec.mean_method_length < 0:
        v.append(Violation(run_id, rec.unit_id, "mean_method_length must be >= 0"))
    if rec.cyclomatic < 1:
        v.append(Violation(run_id, rec.unit_id, "cyclomatic must be >= 1"))
    if rec.statement_loc is not None and (
        not isinstance(rec.statement_loc, int) or rec.statement_loc < 0
    ):
        v.append(Violation(run_id, rec.unit_id, "statement_loc must be a nonnegative integer"))
    if rec.waste_per_line is not None and rec.waste_per_line < 0:
        v.append(Violation(run_id, rec.unit_id, "waste_per_line must be >= 0"))


def _check_test(v, run_id, rec: TestRecord):
    if not isinstance(rec.test_defects, int) or rec.test_defects < 0:
        v.append(Violation(run_id, rec.unit_id, "test_defects must be a nonnegative integer"))


# ---------------------------------------------------------------------------
# Ingestion


def load_dataset(path) -> Dataset:
    """Load a dataset directory; raise unless it validates cleanly.

    Layout: ``dataset.meta`` plus ``run_<order>.inspection.csv``,
    ``run_<order>.product.csv`` and (optionally) ``run_<order>.test.csv``
    per run. UTF-8, mandatory header row, ``.`` decimal separator.
    """
    root = Path(path)
    if not root.is_dir():
        raise IngestionError(f"not a dataset directory: {root}")

    meta = root / META_FILE
    if not meta.is_file():
        raise IngestionError(f"missing file: {meta}")
    context_name = _read_meta(meta)

    orders = sorted(
        int(p.name[len("run_") : -len(".inspection.csv")])
        for p in root.glob("run_*.inspection.csv")
        if p.name[len("run_") : -len(".inspection.csv")].isdigit()
    )

    runs = []
    units = {}
    for order in orders:
        run_id = f"run_{order}"
        insp_rows = _read_csv(root / f"{run_id}.inspection.csv", INSPECTION_COLUMNS)
        prod_path = root / f"{run_id}.product.csv"
        if not prod_path.is_file():
            raise IngestionError(f"missing file: {prod_path}")
        prod_rows = _read_csv(prod_path, PRODUCT_COLUMNS)
        test_path = root / f"{run_id}.test.csv"
        test_rows = _read_csv(test_path, TEST_COLUMNS) if test_path.is_file() else []

        inspection = []
        for where, row in insp_rows:
            inspection.append(
                InspectionRecord(
                    unit_id=row["unit_id"],
                    run_id=run_id,
                    defects_high=_parse_int(where, "defects_high", row),
                    defects_medium=_parse_int(where, "defects_medium", row),
                    defects_low=_parse_int(where, "defects_low", row),
                    comments=_parse_int(where, "comments", row),
                    coverage_rate=_parse_float(where, "coverage_rate", row),
                )
            )
            kind = row["kind"]
            unit_id = row["unit_id"]
            if unit_id not in units:
                units[unit_id] = CodeUnit(id=unit_id, name=unit_id, kind=kind)
            elif units[unit_id].kind != kind:
                raise IngestionError(
                    f"{where}: unit {unit_id} re-declared with kind {kind!r} "
                    f"(was {units[unit_id].kind!r})"
                )

        product = [
            ProductMetricsRecord(
                unit_id=row["unit_id"],
                run_id=run_id,
                class_length_loc=_parse_int(where, "class_length_loc", row),
                mean_method_length=_parse_float(where, "mean_method_length", row),
                cyclomatic=_parse_float(where, "cyclomatic", row),
                statement_loc=_parse_int(where, "statement_loc", row, optional=True),
                waste_per_line=_parse_float(where, "waste_per_line", row, optional=True),
            )
            for where, row in prod_rows
        ]
        tests = [
            TestRecord(
                unit_id=row["unit_id"],
                run_id=run_id,
                test_defects=_parse_int(where, "test_defects", row),
            )
            for where, row in test_rows
        ]

        unit_ids = frozenset(
            [r.unit_id for r in inspection]
            + [r.unit_id for r in product]
            + [r.unit_id for r in tests]
        )
        runs.append(
            QARun(
                run_id=run_id,
                order_index=order,
                unit_ids=unit_ids,
                inspection_records=tuple(inspection),
                product_records=tuple(product),
                test_records=tuple(tests),
            )
        )

    dataset = Dataset(
        context_name=context_name,
        runs=tuple(runs),
        units=tuple(sorted(units.values(), key=lambda u: u.id)),
    )
    violations = validate_dataset(dataset)
    if violations:
        raise DatasetValidationError(violations)
    return dataset


def save_dataset(dataset: Dataset, path) -> None:
    """Write the canonical on-disk form (rows sorted by unit id)."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    (root / META_FILE).write_text(f"context_name={dataset.context_name}\n", encoding="utf-8")

    for run in dataset.runs:
        stem = f"run_{run.order_index}"
        with open(root / f"{stem}.inspection.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(INSPECTION_COLUMNS)
            for unit_id in run.sorted_unit_ids:
                rec = run.inspection_for(unit_id)
                if rec is None:
                    continue
                kind = dataset.unit(unit_id).kind if dataset.unit(unit_id) else ""
                w.writerow(
                    [
                        rec.unit_id,
                        kind,
                        rec.defects_high,
                        rec.defects_medium,
                        rec.defects_low,
                        rec.comments,
                        repr(rec.coverage_rate),
                    ]
                )
        with open(root / f"{stem}.product.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(PRODUCT_COLUMNS)
            for unit_id in run.sorted_unit_ids:
                rec = run.product_for(unit_id)
                if rec is None:
                    continue
                w.writerow(
                    [
                        rec.unit_id,
                        rec.class_length_loc,
                        repr(rec.mean_method_length),
                        repr(rec.cyclomatic),
                        "" if rec.statement_loc is None else rec.statement_loc,
                        "" if rec.waste_per_line is None else repr(rec.waste_per_line),
                    ]
                )
        if run.test_records:
            with open(root / f"{stem}.test.csv", "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(TEST_COLUMNS)
                for unit_id in run.sorted_unit_ids:
                    rec = run.test_for(unit_id)
                    if rec is not None:
                        w.writerow([rec.unit_id, rec.test_defects])


def _read_meta(path: Path) -> str:
    context_name = None
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise IngestionError(f"{path} line {lineno}: expected key=value")
        key, value = line.split("=", 1)
        if key.strip() == "context_name":
            context_name = value.strip()
    if not context_name:
        raise IngestionError(f"{path}: missing context_name")
    return context_name


def _read_csv(path: Path, columns) -> list:
    if not path.is_file():
        raise IngestionError(f"missing file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestionError(f"{path}: empty file, header row is mandatory") from None
        if tuple(header) != tuple(columns):
            raise IngestionError(f"{path}: header {header!r} != expected {list(columns)!r}")
        rows = []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(columns):
                raise IngestionError(f"{path} row {rownum}: expected {len(columns)} cells, got {len(row)}")
            rows.append((f"{path.name} row {rownum}", dict(zip(columns, row))))
    return rows


def _parse_int(where, column, row, optional=False):
    cell = row[column].strip()
    if cell == "":
        if optional:
            return None
        raise IngestionError(f"{where} column {column}: empty cell")
    try:
        return int(cell)
    except ValueError:
        raise IngestionError(f"{where} column {column}: invalid integer {cell!r}") from None


def _parse_float(where, column, row, optional=False):
    cell = row[column].strip()
    if cell == "":
        if optional:
            return None
        raise IngestionError(f"{where} column {column}: empty cell")
    try:
        return float(cell)
    except ValueError:
        raise IngestionError(f"{where} column {column}: invalid number {cell!r}") from None
