import json

import numpy as np
import pytest

from qudisc import UsageError, ValidationError
from qudisc.campaign import (
    CSV_COLUMNS,
    CampaignConfig,
    CampaignReport,
    config_from_obj,
    emit_report,
    render_csv,
    render_report,
    report_from_obj,
    report_to_obj,
    run_campaign,
    run_instance,
    summarize,
)


def small_config(**overrides):
    base = dict(instances=25, dim=2, t_range=(1, 4), seed=7, protocol_source="random")
    base.update(overrides)
    return CampaignConfig(**base)


def commuting_diagonal_pair(rng, dim):
    phases = rng.uniform(0, 2 * np.pi, size=dim)
    return np.eye(dim, dtype=complex), np.diag(np.exp(1j * phases))


class TestRunCampaign:
    def test_random_campaign_has_no_violations(self):
        report = run_campaign(small_config())
        s = report.summary
        assert s.violation_count == 0
        assert s.violations_bounded == s.violations_onesided == 0
        assert s.violations_lemma2 == s.violations_d0 == 0
        assert s.min_theorem1_slack >= -1e-6
        assert s.min_theorem1_slack_onesided >= -1e-6
        assert s.min_lemma2_slack >= -1e-9
        assert s.max_d0 <= 1e-12

    def test_summary_mins_match_records(self):
        report = run_campaign(small_config())
        s = report.summary
        assert s.min_theorem1_slack == min(r.theorem1_slack for r in report.records)
        assert s.min_theorem1_slack_onesided == min(
            r.theorem1_slack_onesided for r in report.records
        )
        assert s.min_lemma2_slack == min(
            r.lemma2_min_slack for r in report.records if r.lemma2_min_slack is not None
        )
        assert s.instances == len(report.records) == 25

    def test_instances_are_order_independent(self):
        cfg = small_config(instances=6)
        report = run_campaign(cfg)
        solo, _ = run_instance(cfg, 4)
        assert solo == report.records[4]

    def test_parallel_source_matches_prediction_on_commuting_pairs(self):
        cfg = small_config(instances=100, protocol_source="parallel", t_range=(1, 5))
        report = run_campaign(cfg, pair_factory=commuting_diagonal_pair)
        assert report.summary.violation_count == 0
        for r in report.records:
            predicted = abs(np.cos(r.queries * r.theta / 2.0))
            assert abs(r.overlap - predicted) <= 1e-8

    def test_zero_query_instance(self):
        report = run_campaign(small_config(instances=1, t_range=(0, 0)))
        r = report.records[0]
        assert r.helstrom_error == pytest.approx(0.5, abs=1e-12)
        assert r.theorem1_slack == pytest.approx(0.0, abs=1e-12)
        assert r.lemma2_min_slack is None
        assert r.inconclusive == 1.0
        assert report.summary.min_lemma2_slack is None

    def test_optimized_source_smoke(self):
        report = run_campaign(small_config(instances=2, t_range=(1, 2),
                                           protocol_source="optimized"))
        assert report.summary.violation_count == 0


class TestConfigValidation:
    def test_bad_instances(self):
        with pytest.raises(ValidationError):
            small_config(instances=0).validate()

    def test_bad_t_range(self):
        with pytest.raises(ValidationError):
            small_config(t_range=(3, 1)).validate()

    def test_bad_source(self):
        with pytest.raises(ValidationError):
            small_config(protocol_source="psychic").validate()

    def test_parallel_needs_a_query(self):
        with pytest.raises(ValidationError):
            small_config(protocol_source="parallel", t_range=(0, 2)).validate()

    def test_parallel_respects_cap(self):
        with pytest.raises(ValidationError):
            small_config(protocol_source="parallel", t_range=(1, 13)).validate()

    def test_config_from_obj(self):
        cfg = config_from_obj(
            {"instances": 3, "dim": 2, "t_range": [1, 2], "seed": 5}
        )
        assert cfg.protocol_source == "random"
        with pytest.raises(ValidationError):
            config_from_obj({"instances": 3})
        with pytest.raises(ValidationError):
            config_from_obj([1, 2, 3])


class TestReportFormats:
    def test_csv_is_deterministic(self):
        cfg = small_config(instances=10)
        a = render_csv(run_campaign(cfg))
        b = render_csv(run_campaign(cfg))
        assert a == b

    def test_csv_shape(self):
        cfg = small_config(instances=3)
        text = render_csv(run_campaign(cfg))
        lines = text.strip().split("\n")
        assert len(lines) == 4
        assert lines[0] == ",".join(CSV_COLUMNS)

    def test_empty_report_is_header_only(self):
        report = CampaignReport(config=small_config(), records=[],
                                summary=summarize([], None, 0.0))
        text = render_csv(report)
        assert text == ",".join(CSV_COLUMNS) + "\n"

    def test_csv_round_trips_fields(self):
        report = run_campaign(small_config(instances=5))
        lines = render_csv(report).strip().split("\n")
        header = lines[0].split(",")
        for line, record in zip(lines[1:], report.records):
            row = dict(zip(header, line.split(",")))
            assert int(row["index"]) == record.index
            assert int(row["T"]) == record.queries
            assert int(row["bound_t"]) == record.bound_t
            assert float(row["theta"]) == record.theta
            assert float(row["overlap"]) == record.overlap
            assert float(row["helstrom_error"]) == record.helstrom_error
            assert float(row["inconclusive"]) == record.inconclusive
            assert float(row["bound_raw"]) == record.bound_raw
            assert float(row["lemma2_min_slack"]) == record.lemma2_min_slack
            assert float(row["theorem1_slack"]) == record.theorem1_slack
            assert float(row["theorem1_slack_onesided"]) == record.theorem1_slack_onesided

    def test_zero_query_csv_cell_is_empty(self):
        report = run_campaign(small_config(instances=1, t_range=(0, 0)))
        line = render_csv(report).strip().split("\n")[1]
        row = dict(zip(CSV_COLUMNS, line.split(",")))
        assert row["lemma2_min_slack"] == ""

    def test_json_round_trip_is_structural_identity(self):
        report = run_campaign(small_config(instances=5))
        text = render_report(report, "json")
        parsed = report_from_obj(json.loads(text))
        assert parsed == report

    def test_report_obj_layout(self):
        report = run_campaign(small_config(instances=2))
        obj = report_to_obj(report)
        assert set(obj) == {"config", "records", "summary"}
        assert len(obj["records"]) == 2

    def test_unknown_format_is_a_usage_error(self):
        report = run_campaign(small_config(instances=1))
        with pytest.raises(UsageError):
            render_report(report, "xml")

    def test_emit_to_unwritable_path_raises_oserror(self, tmp_path):
        report = run_campaign(small_config(instances=1))
        with pytest.raises(OSError):
            emit_report(report, "csv", str(tmp_path / "missing" / "out.csv"))

    def test_emit_writes_file(self, tmp_path):
        report = run_campaign(small_config(instances=2))
        path = tmp_path / "out.csv"
        emit_report(report, "csv", str(path))
        assert path.read_text() == render_csv(report)
