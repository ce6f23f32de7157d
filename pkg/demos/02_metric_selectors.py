"""Reading metric values off a run, and where threshold cuts land."""

import inquest as iq

ds = iq.load_dataset(iq.casestudy1_dataset())
run = ds.run("run_1")

# an inspection selector names a derived review metric
content = iq.InspectionSelector("content", "all")
high_only = iq.InspectionSelector("content", "high")
density = iq.InspectionSelector("density", "all")

print("unit  content  high  density")
for unit_id in run.sorted_unit_ids:
    print(
        f"{unit_id:4}  {iq.evaluate_metric(content, unit_id, run):7.1f}"
        f"  {iq.evaluate_metric(high_only, unit_id, run):4.1f}"
        f"  {iq.evaluate_metric(density, unit_id, run):.4f}"
    )

# product selectors return stored static metrics as-is
length = iq.ProductSelector("class_length")
print()
print("class lengths:", iq.evaluate_over_run(length, run))

# selectors serialize to colon keys and come back as equal objects
key = density.key
print()
print(f"selector key {key!r} round-trips: {iq.selector_from_key(key) == density}")

# threshold specs resolve against one run's value distribution;
# large means strictly above the cut, small is everything else
criterion = iq.ThresholdCriterion(content, "large")
cut = iq.resolve_threshold(criterion, run)
print()
print(f"mean cut over content: {cut}")
for unit_id, value in iq.evaluate_over_run(content, run).items():
    side = "large" if iq.satisfies("large", value, cut) else "small"
    print(f"  {unit_id}: {value:.0f} -> {side}")

for spec in (iq.MEDIAN, iq.ThresholdSpec("quantile", 0.75), iq.ThresholdSpec("explicit", 20.0)):
    alt = iq.ThresholdCriterion(content, "large", spec)
    print(f"{spec.key} cut: {iq.resolve_threshold(alt, run)}")
