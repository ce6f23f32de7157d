"""The whole loop: register rules, record runs, accumulate, report.

The experience base is a plain-file store. Registration and recording
are atomic; significance histories are always re-derived from the
append-only evaluation log, so reopening a store can never disagree
with what was recorded.
"""

import tempfile
from pathlib import Path

import inquest as iq

ds = iq.load_dataset(iq.casestudy1_dataset())
catalog = iq.load_catalog(iq.table1_catalog())
rules = iq.generate_rules(catalog)

with tempfile.TemporaryDirectory() as tmp:
    store_dir = Path(tmp) / "store"
    eb = iq.ExperienceBase.open_or_init(store_dir, context_name=ds.context_name)
    eb.register([e.assumption for e in catalog.entries], rules)
    print(f"store at {store_dir.name}: {len(eb.rules)} rules registered")

    for run in ds.runs:
        results = iq.evaluate_run(rules, run, jobs=4)
        eb.record_run_evaluations(run.run_id, results)
        effective = sum(1 for r in results if r.effective)
        print(f"{run.run_id}: {effective}/{len(results)} rules effective")

    # significance now reflects both runs
    strong = [a for a in eb.assumptions.values() if a.significance_level == 2]
    print(f"\nassumptions valid in both runs: {len(strong)}")
    for a in sorted(strong, key=lambda a: a.id)[:5]:
        print(f"  {a.id}")

    # reopening rebuilds the same derived state from the files
    again = iq.ExperienceBase.open_or_init(store_dir)
    print(f"\nreload matches: {again.assumptions == eb.assumptions}")

    # reports carry no timestamps, so the same store gives the same bytes
    report = iq.render_report(iq.build_report(eb), "markdown")
    report_again = iq.render_report(iq.build_report(again), "markdown")
    print(f"report stable across reloads: {report == report_again}")
    print()
    print(report)
