"""Builders shared by the test modules."""

from inquest import InspectionRecord, ProductMetricsRecord, QARun, TestRecord


def make_run(rows: dict, run_id: str = "run_1", order: int = 1) -> QARun:
    """Build a QARun from unit_id -> field dict.

    Recognized keys (all optional): h, m, l, comments, coverage, loc, mml,
    cyclo, stmt, waste, test. Omitting "test" leaves the unit untested.
    """
    inspection, product, tests = [], [], []
    for unit_id, r in rows.items():
        inspection.append(
            InspectionRecord(
                unit_id=unit_id,
                run_id=run_id,
                defects_high=r.get("h", 0),
                defects_medium=r.get("m", 0),
                defects_low=r.get("l", 0),
                comments=r.get("comments", 0),
                coverage_rate=r.get("coverage", 1.0),
            )
        )
        product.append(
            ProductMetricsRecord(
                unit_id=unit_id,
                run_id=run_id,
                class_length_loc=r.get("loc", 100),
                mean_method_length=r.get("mml", 10.0),
                cyclomatic=r.get("cyclo", 2.0),
                statement_loc=r.get("stmt"),
                waste_per_line=r.get("waste"),
            )
        )
        if "test" in r:
            tests.append(TestRecord(unit_id=unit_id, run_id=run_id, test_defects=r["test"]))
    return QARun(
        run_id=run_id,
        order_index=order,
        unit_ids=frozenset(rows),
        inspection_records=tuple(inspection),
        product_records=tuple(product),
        test_records=tuple(tests),
    )
