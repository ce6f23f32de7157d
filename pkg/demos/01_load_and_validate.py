"""Loading a QA dataset from CSV files and validating its shape.

A dataset directory holds one meta file plus three CSVs per run
(inspection results, product metrics, test outcomes). The loader
cross-checks everything before handing back objects.
"""

import inquest as iq

ds = iq.load_dataset(iq.casestudy1_dataset())

print(f"context: {ds.context_name}")
print(f"runs: {[r.run_id for r in ds.runs]}")
print(f"units: {[u.id for u in ds.units]}")
print()

# each run bundles three record families keyed by unit
run = ds.run("run_1")
for unit_id in run.sorted_unit_ids:
    insp = run.inspection_for(unit_id)
    prod = run.product_for(unit_id)
    test = run.test_for(unit_id)
    print(
        f"{unit_id}: {insp.defects_total} inspection defects "
        f"(h={insp.defects_high} m={insp.defects_medium} l={insp.defects_low}), "
        f"{prod.class_length_loc} loc, {test.test_defects} test defects"
    )

# validate_dataset returns a list of violations instead of raising,
# so a caller can show all problems at once
print()
print("validating a run with a broken record on purpose:")
bad_record = iq.InspectionRecord(
    unit_id="X",
    run_id="run_9",
    defects_high=-1,  # negative counts are impossible
    defects_medium=0,
    defects_low=0,
    comments=0,
    coverage_rate=2.0,  # rates live in (0, 1]
)
bad_run = iq.QARun(
    run_id="run_9",
    order_index=1,
    unit_ids=frozenset({"X"}),
    inspection_records=(bad_record,),
)
broken = iq.Dataset(
    context_name="demo",
    runs=(bad_run,),
    units=(iq.CodeUnit(id="X", name="X", kind="class"),),
)
for violation in iq.validate_dataset(broken):
    print(f"  {violation}")
