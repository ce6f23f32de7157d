"""Scoring selections against test outcomes after the fact.

Once a run's test results exist, every selection falls into one of four
categories: A hit exactly the defect-prone units, B covered them with
extras, C missed some, D missed all. A and B count as effective. Across
runs the category sequence becomes a trend.
"""

import inquest as iq

ds = iq.load_dataset(iq.casestudy1_dataset())
content = iq.InspectionSelector("content", "all")

rule_large = iq.make_rule(
    "inspection.large", iq.Conjunctive((iq.ThresholdCriterion(content, "large"),))
)
rule_combined = iq.make_rule(
    "inspection_method_length.large_small",
    iq.Conjunctive(
        (
            iq.ThresholdCriterion(content, "large"),
            iq.ThresholdCriterion(iq.ProductSelector("mean_method_length"), "small"),
        )
    ),
)

for run in ds.runs:
    prone = iq.defect_prone_set(run)
    print(f"{run.run_id}: defect-prone units {sorted(prone)}")
    for rule in (rule_large, rule_combined):
        result = iq.evaluate_rule(rule, run)
        selected = iq.apply_rule(rule, run).selected
        print(
            f"  {rule.describe()}\n"
            f"    selected {list(selected)} -> category {result.category}, "
            f"effectiveness {result.effectiveness:.2f}, "
            f"effort {result.effort_fraction:.2f}"
        )

# two-run trend per rule
print()
for rule in (rule_large, rule_combined):
    evals = [iq.evaluate_rule(rule, run) for run in ds.runs]
    trend = iq.trend_classify(rule.id, evals)
    print(f"{rule.describe()}: signature {trend.signature} -> {trend.classification}")

# significance tracks how often an assumption held, run by run
assumption = iq.Assumption(id="inspection.large", description="review-heavy units fail in test")
for run in ds.runs:
    evals = [iq.evaluate_rule(rule_large, run)]
    assumption = iq.update_significance(assumption, run.run_id, evals)
    print(
        f"after {run.run_id}: significance {assumption.significance_level} "
        f"({'valid' if assumption.history[-1].valid else 'not valid'} this run)"
    )
