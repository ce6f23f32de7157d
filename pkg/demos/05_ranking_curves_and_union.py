"""How much testing effort buys how much defect coverage.

Top-N rules trade effort (units tested) against effectiveness (share of
test defects captured). The curve over N makes the trade-off visible,
and a union of two rankings can beat either one alone.
"""

import inquest as iq

ds = iq.load_dataset(iq.fixture_path("synthetic12"))
run = ds.runs[0]
total = iq.total_test_defects(run)
print(f"{len(run.unit_ids)} modules, {total} test defects total")

reviews = iq.InspectionSelector("content", "all", "include", "raw")
statements = iq.ProductSelector("statement_loc")

print("\ncut  review-ranked  statement-ranked")
curve_r = iq.effectiveness_curve(reviews, "large", range(1, 13), run)
curve_s = iq.effectiveness_curve(statements, "large", range(1, 13), run)
for (n, er), (_, es) in zip(curve_r, curve_s):
    bar = "#" * round(er * 30)
    print(f"{n:3}  {er:13.2%}  {es:16.2%}  {bar}")

# three modules of twelve already hold half the defects here
top3_r = iq.apply_rule(iq.make_rule("by_reviews", iq.TopN(reviews, "large", 3)), run)
top3_s = iq.apply_rule(iq.make_rule("by_statements", iq.TopN(statements, "large", 3)), run)
print(f"\ntop 3 by review findings:   {list(top3_r.selected)}")
print(f"top 3 by statement count:   {list(top3_s.selected)}")

union = iq.combine_union(top3_r, top3_s)
print(f"union ({len(union.selected)} modules): {list(union.selected)}")
print(
    f"union effectiveness {iq.effectiveness(union.selected_set, run):.2%} at "
    f"effort {len(union.selected)}/{len(run.unit_ids)}"
)
for sel in (top3_r, top3_s):
    print(
        f"  {sel.rule_id} alone: {iq.effectiveness(sel.selected_set, run):.2%} "
        f"at effort 3/{len(run.unit_ids)}"
    )
