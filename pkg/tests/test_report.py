"""Report assembly and the two render formats."""

import pytest

import inquest as iq

CONTENT_ALL = iq.InspectionSelector("content", "all")
LARGE_CONTENT = iq.make_rule(
    "inspection.large",
    iq.Conjunctive((iq.ThresholdCriterion(CONTENT_ALL, "large"),)),
)
SMALL_CONTENT = iq.make_rule(
    "inspection.small",
    iq.Conjunctive((iq.ThresholdCriterion(CONTENT_ALL, "small"),)),
)
TOP3 = iq.make_rule("A01", iq.TopN(CONTENT_ALL, "large", 3))
TOP5 = iq.make_rule("A01", iq.TopN(CONTENT_ALL, "large", 5))


@pytest.fixture()
def populated(tmp_path, casestudy1):
    eb = iq.ExperienceBase.open_or_init(tmp_path / "store", context_name="proj")
    eb.register(
        [
            iq.Assumption(id="inspection.large"),
            iq.Assumption(id="inspection.small"),
            iq.Assumption(id="A01"),
        ],
        [LARGE_CONTENT, SMALL_CONTENT, TOP3, TOP5],
    )
    rules = [LARGE_CONTENT, SMALL_CONTENT, TOP3, TOP5]
    for run in casestudy1.runs:
        eb.record_run_evaluations(run.run_id, iq.evaluate_run(rules, run))
    return eb


class TestBundle:
    def test_category_counts(self, populated):
        bundle = iq.build_report(populated)
        assert bundle.context_name == "proj"
        assert bundle.run_ids == ("run_1", "run_2")
        assert bundle.evaluated_rule_count == 4
        run_1 = bundle.category_counts[0]
        # run_1: large=A, small=D, top3=B, top5=B (all four units)
        assert (run_1.a, run_1.b, run_1.c, run_1.d) == (1, 2, 0, 1)
        assert run_1.total == 4
        assert run_1.degenerate == 0

    def test_trend_boxes_in_fixed_order(self, populated):
        bundle = iq.build_report(populated)
        names = [name for name, _ in bundle.trend_counts]
        assert names == ["acceptable", "potential", "non_acceptable"]
        assert sum(count for _, count in bundle.trend_counts) == 4

    def test_curve_points_only_from_top_n_rules(self, populated):
        bundle = iq.build_report(populated)
        assert {p.assumption_id for p in bundle.curve_points} == {"A01"}
        assert [(p.run_id, p.n) for p in bundle.curve_points] == [
            ("run_1", 3),
            ("run_1", 5),
            ("run_2", 3),
            ("run_2", 5),
        ]

    def test_best_rules_are_the_always_effective_ones(self, populated):
        bundle = iq.build_report(populated)
        ids = {b.rule_id for b in bundle.best_rules}
        assert LARGE_CONTENT.id in ids
        assert SMALL_CONTENT.id not in ids
        for b in bundle.best_rules:
            assert len(b.signature) == 2
            assert b.description

    def test_empty_store_renders(self, tmp_path):
        eb = iq.ExperienceBase.open_or_init(tmp_path / "store", context_name="empty")
        bundle = iq.build_report(eb)
        assert bundle.run_ids == ()
        assert "No evaluations recorded." in iq.render_markdown(bundle)
        assert "None." in iq.render_markdown(bundle)
        assert "[overview]" in iq.render_csv(bundle)


class TestRendering:
    def test_markdown_sections(self, populated):
        text = iq.render_markdown(iq.build_report(populated))
        assert text.startswith("# Evaluation report: proj\n")
        assert "Rules evaluated: 4. Runs recorded: 2." in text
        assert "## Category counts per run" in text
        assert "| run_1 | 1 | 2 | 0 | 1 | 4 | 0 |" in text
        assert "## Trend boxes" in text
        assert "## Effectiveness curves (top-N rules)" in text
        assert "## Rules effective in every run" in text

    def test_markdown_effectiveness_formatting(self, populated):
        text = iq.render_markdown(iq.build_report(populated))
        # run_1 top-3 captures all 7 defects; appears with four decimals
        assert "| A01 | run_1 | 3 | 1.0000 |" in text

    def test_csv_sections_and_rows(self, populated):
        text = iq.render_csv(iq.build_report(populated))
        for section in (
            "[overview]",
            "[category_counts]",
            "[trend_boxes]",
            "[effectiveness_curves]",
            "[best_rules]",
        ):
            assert section in text
        assert "proj,4,2" in text
        assert "run_1,1,2,0,1,4,0" in text

    def test_rendering_is_deterministic(self, populated):
        bundle = iq.build_report(populated)
        assert iq.render_markdown(bundle) == iq.render_markdown(bundle)
        assert iq.render_csv(bundle) == iq.render_csv(bundle)
        assert "\t" not in iq.render_markdown(bundle)

    def test_render_report_dispatch(self, populated):
        bundle = iq.build_report(populated)
        assert iq.render_report(bundle, "markdown") == iq.render_markdown(bundle)
        assert iq.render_report(bundle, "csv") == iq.render_csv(bundle)
        with pytest.raises(ValueError, match="format"):
            iq.render_report(bundle, "html")
