"""Rule model: thresholds, canonical identity, catalog expansion."""

import hashlib
from collections import Counter

import pytest

import inquest as iq
from support import make_run

CONTENT_ALL = iq.InspectionSelector("content", "all")


def crit(direction="large", threshold=iq.MEAN, selector=CONTENT_ALL):
    return iq.ThresholdCriterion(selector, direction, threshold)


class TestDirections:
    def test_aliases_normalize(self):
        assert iq.normalize_direction("high") == "large"
        assert iq.normalize_direction("low") == "small"
        assert iq.normalize_direction("large") == "large"

    def test_unknown_rejected(self):
        with pytest.raises(ValueError, match="direction"):
            iq.normalize_direction("big")

    def test_criterion_and_top_n_normalize_on_build(self):
        assert crit("high").direction == "large"
        assert iq.TopN(CONTENT_ALL, "low", 3).direction == "small"


class TestThresholdSpec:
    def test_mean_median_take_no_value(self):
        with pytest.raises(ValueError, match="no value"):
            iq.ThresholdSpec("mean", 3.0)

    def test_quantile_needs_open_interval(self):
        iq.ThresholdSpec("quantile", 0.5)
        for bad in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(ValueError, match="quantile"):
                iq.ThresholdSpec("quantile", bad)

    def test_explicit_must_be_finite_nonnegative(self):
        iq.ThresholdSpec("explicit", 0.0)
        for bad in (-1.0, float("inf"), float("nan")):
            with pytest.raises(ValueError, match="explicit"):
                iq.ThresholdSpec("explicit", bad)

    def test_value_required_when_parametric(self):
        with pytest.raises(ValueError, match="needs a value"):
            iq.ThresholdSpec("quantile")

    def test_keys(self):
        assert iq.MEAN.key == "mean"
        assert iq.ThresholdSpec("quantile", 0.9).key == "quantile:0.9"
        assert iq.ThresholdSpec("explicit", 5.0).key == "explicit:5.0"


class TestResolveThreshold:
    def test_mean_on_fixture_run(self, casestudy1):
        # content(all) over run_1 is 26, 6, 27, 8.
        run = casestudy1.run("run_1")
        assert iq.resolve_threshold(crit(), run) == 16.75

    def test_median_even_count(self):
        run = make_run({"a": {"h": 3}, "b": {"h": 14}, "c": {"h": 8}, "d": {"h": 7}})
        value = iq.resolve_threshold(crit(threshold=iq.MEDIAN), run)
        assert value == 7.5

    def test_quantile_linear_interpolation(self):
        run = make_run({u: {"h": v} for u, v in zip("abcd", (1, 2, 3, 4))})
        spec = iq.ThresholdSpec("quantile", 0.25)
        assert iq.resolve_threshold(crit(threshold=spec), run) == 1.75

    def test_explicit_never_reads_the_run(self):
        spec = iq.ThresholdSpec("explicit", 9.5)
        # run=None would blow up on any metric evaluation
        assert iq.resolve_threshold(crit(threshold=spec), None) == 9.5

    def test_empty_run_rejected(self):
        empty = iq.QARun(run_id="run_1", order_index=1, unit_ids=frozenset())
        with pytest.raises(iq.RuleApplicationError, match="no units"):
            iq.resolve_threshold(crit(), empty)


class TestSatisfies:
    def test_boundary_belongs_to_small(self):
        assert not iq.satisfies("large", 5.0, 5.0)
        assert iq.satisfies("small", 5.0, 5.0)

    def test_directions_partition_every_value(self):
        grid = [-3.0, 0.0, 0.5, 1.0, 2.5, 100.0]
        for value in grid:
            for threshold in grid:
                large = iq.satisfies("large", value, threshold)
                small = iq.satisfies("small", value, threshold)
                assert large != small


class TestCanonicalIdentity:
    def test_conjunctive_canonical_text(self):
        rule = iq.make_rule("A1", iq.Conjunctive((crit(),)))
        assert rule.canonical == (
            "conjunctive|A1|inspection:content:all:exclude:raw|large|mean"
        )

    def test_top_n_canonical_text(self):
        form = iq.TopN(iq.InspectionSelector("content", "all", "include"), "large", 3)
        rule = iq.make_rule("A01", form)
        assert rule.canonical == (
            "top_n|A01|inspection:content:all:include:raw|large|3"
        )

    def test_id_is_truncated_content_hash(self):
        rule = iq.make_rule("A1", iq.Conjunctive((crit(),)))
        digest = hashlib.sha256(rule.canonical.encode()).hexdigest()
        assert rule.id == "r" + digest[:12]

    def test_same_content_same_id(self):
        a = iq.make_rule("A1", iq.Conjunctive((crit(),)))
        b = iq.make_rule("A1", iq.Conjunctive((crit(),)))
        assert a.id == b.id

    def test_assumption_changes_id(self):
        a = iq.make_rule("A1", iq.Conjunctive((crit(),)))
        b = iq.make_rule("A2", iq.Conjunctive((crit(),)))
        assert a.id != b.id

    def test_criterion_order_matters(self):
        c1 = crit()
        c2 = crit(selector=iq.ProductSelector("class_length"), direction="small")
        a = iq.make_rule("A1", iq.Conjunctive((c1, c2)))
        b = iq.make_rule("A1", iq.Conjunctive((c2, c1)))
        assert a.id != b.id

    def test_describe_mentions_every_criterion(self):
        rule = iq.make_rule(
            "A1",
            iq.Conjunctive(
                (crit(), crit("small", selector=iq.ProductSelector("cyclomatic")))
            ),
        )
        text = rule.describe()
        assert "defect content" in text and "cyclomatic" in text and " and " in text
        top = iq.make_rule("A2", iq.TopN(CONTENT_ALL, "large", 5))
        assert "top 5" in top.describe()


class TestSerialization:
    def test_conjunctive_round_trip(self):
        spec = iq.ThresholdSpec("quantile", 0.75)
        rule = iq.make_rule("A9", iq.Conjunctive((crit(threshold=spec),)))
        assert iq.rule_from_dict(iq.rule_to_dict(rule)) == rule

    def test_top_n_round_trip(self):
        rule = iq.make_rule("A01", iq.TopN(iq.ProductSelector("waste_per_line"), "small", 8))
        assert iq.rule_from_dict(iq.rule_to_dict(rule)) == rule

    def test_tampered_id_rejected(self):
        d = iq.rule_to_dict(iq.make_rule("A1", iq.TopN(CONTENT_ALL, "large", 3)))
        d["id"] = "r000000000000"
        with pytest.raises(ValueError, match="does not match"):
            iq.rule_from_dict(d)

    def test_unknown_form_rejected(self):
        with pytest.raises(ValueError, match="form"):
            iq.rule_from_dict({"form": "disjunctive", "assumption_id": "A1"})

    def test_file_round_trip_with_assumptions(self, tmp_path, casestudy2_catalog_obj):
        rules = iq.generate_rules(casestudy2_catalog_obj)
        assumptions = [e.assumption for e in casestudy2_catalog_obj.entries]
        path = tmp_path / "rules.json"
        iq.save_rules(rules, path, assumptions=assumptions)
        loaded_rules, loaded_assumptions = iq.load_rules_document(path)
        assert loaded_rules == rules
        assert [a.id for a in loaded_assumptions] == [a.id for a in assumptions]
        assert all(a.template for a in loaded_assumptions)

    def test_bare_file_synthesizes_assumption_identities(self, tmp_path):
        rules = [iq.make_rule("Z2", iq.TopN(CONTENT_ALL, "large", 3)),
                 iq.make_rule("Z1", iq.TopN(CONTENT_ALL, "large", 5))]
        path = tmp_path / "rules.json"
        iq.save_rules(rules, path)
        loaded_rules, assumptions = iq.load_rules_document(path)
        assert loaded_rules == rules
        assert [a.id for a in assumptions] == ["Z1", "Z2"]

    def test_unreadable_file_raises_catalog_error(self, tmp_path):
        path = tmp_path / "rules.json"
        path.write_text("{not json")
        with pytest.raises(iq.CatalogError, match="cannot read"):
            iq.load_rules(path)


EXPECTED_TABLE1_COUNTS = {
    "inspection.large": 8,
    "inspection.small": 8,
    "class_length.large": 1,
    "class_length.small": 1,
    "method_length.large": 1,
    "method_length.small": 1,
    "complexity.high": 1,
    "complexity.low": 1,
    "inspection_class_length.large_large": 8,
    "inspection_class_length.large_small": 8,
    "inspection_class_length.small_large": 8,
    "inspection_class_length.small_small": 8,
    "inspection_method_length.large_large": 8,
    "inspection_method_length.large_small": 8,
    "inspection_method_length.small_large": 8,
    "inspection_method_length.small_small": 8,
    "inspection_complexity.large_high": 8,
    "inspection_complexity.large_low": 8,
    "inspection_complexity.small_high": 8,
    "inspection_complexity.small_low": 8,
}


class TestBundledCatalogs:
    def test_threshold_catalog_expands_to_118(self, table1_rules):
        assert len(table1_rules) == 118
        assert Counter(r.assumption_id for r in table1_rules) == EXPECTED_TABLE1_COUNTS

    def test_ranking_catalog_expands_to_40(self, casestudy2_rules):
        assert len(casestudy2_rules) == 40
        counts = Counter(r.assumption_id for r in casestudy2_rules)
        assert counts == {f"A{i:02d}": 4 for i in range(1, 11)}
        assert all(isinstance(r.form, iq.TopN) for r in casestudy2_rules)
        assert sorted({r.form.n for r in casestudy2_rules}) == [3, 5, 8, 10]

    def test_ids_are_injective(self, table1_rules, casestudy2_rules):
        ids = [r.id for r in table1_rules] + [r.id for r in casestudy2_rules]
        assert len(ids) == len(set(ids))

    def test_generation_is_deterministic(self, table1_catalog_obj, table1_rules):
        again = iq.generate_rules(iq.load_catalog(iq.table1_catalog()))
        assert again == table1_rules
        keys = [(r.assumption_id, r.canonical) for r in table1_rules]
        assert keys == sorted(keys)

    def test_catalog_carries_descriptions(self, table1_catalog_obj):
        for entry in table1_catalog_obj.entries:
            assert entry.assumption.description
            assert entry.assumption.template


class TestTemplateExpansion:
    def test_selector_spec_defaults(self):
        catalog = iq.catalog_from_dict(
            {
                "assumptions": [
                    {
                        "id": "A1",
                        "template": {
                            "form": "conjunctive",
                            "criteria": [{"family": "inspection", "directions": ["large"]}],
                        },
                    }
                ]
            }
        )
        forms = catalog.entries[0].forms
        assert len(forms) == 1
        criterion = forms[0].criteria[0]
        assert criterion.selector == CONTENT_ALL
        assert criterion.threshold == iq.MEAN

    def test_catalog_default_threshold_applies(self):
        catalog = iq.catalog_from_dict(
            {
                "default_threshold": "median",
                "assumptions": [
                    {
                        "id": "A1",
                        "template": {
                            "form": "conjunctive",
                            "criteria": [{"family": "inspection", "directions": ["large"]}],
                        },
                    }
                ],
            }
        )
        assert catalog.entries[0].forms[0].criteria[0].threshold == iq.MEDIAN

    def test_cross_product_size(self):
        catalog = iq.catalog_from_dict(
            {
                "assumptions": [
                    {
                        "id": "A1",
                        "template": {
                            "form": "conjunctive",
                            "criteria": [
                                {
                                    "family": "inspection",
                                    "measures": ["content", "density"],
                                    "severity_filters": ["all", "high"],
                                    "directions": ["large"],
                                },
                                {
                                    "family": "product",
                                    "names": ["class_length", "cyclomatic"],
                                    "directions": ["large", "small"],
                                },
                            ],
                        },
                    }
                ]
            }
        )
        # 2*2 inspection variants times 2*2 product criteria
        assert len(catalog.entries[0].forms) == 16

    def test_duplicate_forms_collapse_in_generation(self):
        catalog = iq.catalog_from_dict(
            {
                "assumptions": [
                    {
                        "id": "A1",
                        "template": {
                            "form": "top_n",
                            "selector": {"family": "inspection"},
                            "directions": ["large"],
                            "ns": [3, 3, 5],
                        },
                    }
                ]
            }
        )
        rules = iq.generate_rules(catalog)
        assert [r.form.n for r in rules] == [3, 5]

    @pytest.mark.parametrize(
        "template, message",
        [
            ({"form": "ring"}, "unknown template form"),
            ({"form": "conjunctive", "criteria": []}, "nonempty criteria"),
            (
                {"form": "conjunctive", "criteria": [{"family": "inspection"}]},
                "directions",
            ),
            (
                {"form": "conjunctive", "criteria": [{"family": "product", "directions": ["large"]}]},
                "names",
            ),
            (
                {"form": "top_n", "selector": {"family": "inspection"}, "directions": ["large"]},
                "ns",
            ),
            (
                {"form": "top_n", "selector": {"family": "inspection"}, "ns": [3]},
                "directions",
            ),
        ],
    )
    def test_malformed_templates_rejected(self, template, message):
        data = {"assumptions": [{"id": "A1", "template": template}]}
        with pytest.raises(iq.CatalogError, match=message):
            iq.catalog_from_dict(data)

    def test_duplicate_assumption_ids_rejected(self):
        entry = {
            "id": "A1",
            "template": {
                "form": "top_n",
                "selector": {"family": "inspection"},
                "directions": ["large"],
                "ns": [3],
            },
        }
        with pytest.raises(iq.CatalogError, match="duplicate"):
            iq.catalog_from_dict({"assumptions": [entry, dict(entry)]})

    def test_empty_catalog_rejected(self):
        with pytest.raises(iq.CatalogError, match="no assumptions"):
            iq.catalog_from_dict({"assumptions": []})

    def test_assumption_without_template_rejected(self):
        with pytest.raises(iq.CatalogError, match="template"):
            iq.catalog_from_dict({"assumptions": [{"id": "A1"}]})


class TestAssumptionTrackRecord:
    def test_significance_counts_valid_entries(self):
        a = iq.Assumption(
            id="A1",
            history=(
                iq.ValidityEntry("run_1", True),
                iq.ValidityEntry("run_2", False),
                iq.ValidityEntry("run_3", True),
            ),
        )
        assert a.significance_level == 2

    def test_fresh_assumption_has_no_significance(self):
        assert iq.Assumption(id="A1").significance_level == 0
