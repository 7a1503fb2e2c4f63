"""Tests for report assembly, surveys and rendering."""

import json

import pytest

from api.controllers import analysis_controller
from api.schemas.report import AnalysisOptions, AnalysisReport, DiagramRequest, SurveyReport
from shared.core.errors import CapacityError, ParseError, PreconditionError

QUICK = AnalysisOptions(levels=4, mod_max=8, prefix_length=16, coding_length=64)


@pytest.fixture(scope="module")
def report_012() -> AnalysisReport:
    return analysis_controller.analyze(3, "(012)", QUICK)


@pytest.fixture(scope="module")
def survey_3() -> SurveyReport:
    return analysis_controller.survey(3, AnalysisOptions(mod_max=6))


class TestAnalyze:
    """Test the full report."""

    def test_sections(self, report_012):
        assert report_012.input.perm == "(012)"
        assert report_012.input.n_exp == 2
        assert report_012.renormalization.stationary
        assert report_012.renormalization.periodic_region == "empty"
        assert report_012.renormalization.lebesgue_ergodic
        assert report_012.telescoped.B == [[1, 1, 2], [1, 1, 2], [2, 2, 0]]
        assert report_012.spectrum.full.char_poly == [1, -2, -8, 0]
        assert report_012.spectrum.full.radius_exact == "4"
        assert report_012.measure_count == 1
        assert report_012.fixed_point_prefix == "0221001100110221"
        assert report_012.coding_check

    def test_heights(self, report_012):
        assert [h.h for h in report_012.heights] == [[1, 1, 1], [4, 4, 4], [16, 16, 16], [64, 64, 64]]

    def test_dyadic_scan_passes(self, report_012):
        scan = report_012.dyadic_scans[0]
        assert scan.alphabet == "minimal"
        assert scan.summary == "all-tested-pass"
        assert scan.failed_m is None
        assert len(scan.verdicts) == 8

    def test_diagram_sections(self, report_012):
        diagram = report_012.diagram
        assert diagram.depth == 3
        assert not diagram.restricted
        assert [level.incoming_edges for level in diagram.levels] == [3, 12, 12]
        assert diagram.path_counts == {"0": 16, "1": 16, "2": 16}
        assert diagram.total_paths == 48
        assert report_012.aperiodic_diagram.restricted
        assert report_012.aperiodic_diagram.path_counts == diagram.path_counts

    def test_depth_changes_report(self, report_012):
        shallow = analysis_controller.analyze(3, "(012)", QUICK.model_copy(update={"depth": 2}))
        assert shallow.diagram.depth == 2
        assert shallow.diagram.path_counts == {"0": 4, "1": 4, "2": 4}
        assert analysis_controller.to_json(shallow) != analysis_controller.to_json(report_012)
        assert "Diagram depth 2" in analysis_controller.render_text(shallow)

    def test_aperiodic_diagram_drops_periodic_vertices(self):
        report = analysis_controller.analyze(7, "(0654321)", QUICK)
        assert report.aperiodic_diagram.levels[0].vertices == [0, 1, 3, 4, 6]
        kept = sum(len(level.vertices) for level in report.aperiodic_diagram.levels)
        assert kept < sum(len(level.vertices) for level in report.diagram.levels)
        assert report.aperiodic_diagram.total_paths <= report.diagram.total_paths

    def test_no_timings_by_default(self, report_012):
        assert report_012.timings is None
        assert "timings" not in analysis_controller.to_json(report_012)

    def test_timings_on_request(self):
        options = QUICK.model_copy(update={"include_timings": True})
        report = analysis_controller.analyze(3, "(012)", options)
        assert set(report.timings) == {"renormalization", "substitutions", "spectrum", "eigenvalues", "diagram", "coding_check"}

    def test_degenerate_odometer(self):
        report = analysis_controller.analyze(1, "(0)", QUICK)
        assert report.input.degenerate
        assert report.input.perm == "(0)"
        assert report.telescoped.B == [[2]]
        assert report.dyadic_scans[0].summary == "all-tested-pass"

    def test_power_of_two_flagged(self):
        report = analysis_controller.analyze(2, "(01)", QUICK)
        assert report.input.power_of_two
        assert not report.input.degenerate

    def test_two_symbol_cycle_fails_dyadic(self):
        report = analysis_controller.analyze(5, "(02431)", QUICK)
        assert report.dyadic_scans[0].summary == "fails-at-m"
        assert report.dyadic_scans[0].failed_m == 1
        assert report.measure_count == 2

    def test_bad_permutation(self):
        with pytest.raises(ParseError):
            analysis_controller.analyze(3, "(0x2)", QUICK)

    def test_q_must_be_positive(self):
        with pytest.raises(PreconditionError):
            analysis_controller.analyze(0, "(0)", QUICK)


class TestDeterminism:
    """Test byte-identical JSON across runs."""

    @pytest.mark.parametrize("q,perm", [(3, "(012)"), (5, "(02413)"), (7, "(0654321)")])
    def test_json_is_byte_identical(self, q, perm):
        first = analysis_controller.to_json(analysis_controller.analyze(q, perm, QUICK))
        second = analysis_controller.to_json(analysis_controller.analyze(q, perm, QUICK))
        assert first == second

    def test_json_validates_back(self, report_012):
        text = analysis_controller.to_json(report_012)
        assert AnalysisReport.model_validate_json(text) == report_012
        assert json.loads(text)["schema_version"] == report_012.schema_version


class TestSurvey:
    """Test surveys over every permutation."""

    def test_every_permutation_once(self, survey_3):
        assert len(survey_3.rows) == 6
        assert [row.images for row in survey_3.rows] == sorted(row.images for row in survey_3.rows)

    def test_rows_agree_with_analyze(self, survey_3):
        row = next(row for row in survey_3.rows if row.images == [1, 2, 0])
        assert row.perm == "(012)"
        assert row.periodic_region == "empty"
        assert row.lebesgue_ergodic
        assert row.measure_count == 1
        assert row.dyadic == "all-tested-pass"
        assert (row.preperiod_k0, row.period_p0) == (0, 1)

    def test_csv(self, survey_3):
        lines = analysis_controller.survey_csv(survey_3).splitlines()
        assert lines[0] == "perm,images,periodic_region,lebesgue_ergodic,measure_count,dyadic,failed_m,k0,p0"
        assert len(lines) == 7
        assert "(012),120,empty,true,1,all-tested-pass,,0,1" in lines

    def test_text(self, survey_3):
        text = analysis_controller.survey_text(survey_3)
        assert text.startswith("Survey q=3")
        assert len(text.splitlines()) == 7

    def test_seed_reaches_every_row(self, monkeypatch):
        from api.services import eigenvalue_service

        seen = []
        original = eigenvalue_service.dyadic_scan

        def recording_scan(seq, max_m=None, alphabet="minimal", seed=None, letters=None):
            seen.append(seed)
            return original(seq, max_m, alphabet, seed, letters)

        monkeypatch.setattr(eigenvalue_service, "dyadic_scan", recording_scan)
        report = analysis_controller.survey(3, AnalysisOptions(mod_max=2, seed="telescoped"))
        assert report.seed == "telescoped"
        assert seen == ["telescoped"] * 6
        assert "telescoped seed" in analysis_controller.survey_text(report)

    def test_power_of_two_flagged(self):
        report = analysis_controller.survey(2, AnalysisOptions(mod_max=4))
        assert report.power_of_two
        assert len(report.rows) == 2

    def test_q_too_large(self):
        with pytest.raises(PreconditionError):
            analysis_controller.survey(8)


class TestRendering:
    """Test text rendering and diagram export."""

    def test_text_report(self, report_012):
        text = analysis_controller.render_text(report_012)
        assert text.startswith("Rotated odometer q=3 pi=(012) N=2 (geq)")
        assert "    0 -> 0221" in text
        assert "Characteristic polynomial: x^3 - 2x^2 - 8x" in text
        assert "Coding check: ok" in text

    def test_spectrum_text(self, report_012):
        text = analysis_controller.render_spectrum_text(report_012)
        assert text.startswith("Telescoped B:")
        assert "Measures: 1" in text

    def test_export_dot(self):
        response = analysis_controller.export_dot(DiagramRequest(q=3, perm="(012)", depth=2))
        assert response.vertices == 7
        assert response.edges == 15
        assert response.dot.startswith("digraph bratteli {")

    def test_capacity(self, monkeypatch):
        from shared.core.config import SETTINGS

        monkeypatch.setattr(SETTINGS, "MAX_CELLS", 10)
        with pytest.raises(CapacityError):
            analysis_controller.analyze(3, "(012)", QUICK)


class TestSmallReports:
    """Test the orbit, substitution and surface reports."""

    def test_orbit_report(self):
        report = analysis_controller.orbit_report(3, "(012)", "0", 4)
        assert report.itinerary == "0221"
        assert report.letters == [0, 2, 2, 1]
        assert report.fractions[:2] == ["0", "5/6"]
        assert json.loads(analysis_controller.to_json(report))["schema_version"] == report.schema_version

    def test_substitution_report(self):
        report = analysis_controller.substitution_report(3, "(012)")
        assert (report.preperiod_k0, report.period_p0) == (0, 1)
        assert len(report.levels) == 1
        assert report.levels[0].chi == ["0221", "0221", "0011"]
        assert report.levels[0].matrix == [[1, 1, 2], [1, 1, 2], [2, 2, 0]]

    def test_substitution_report_unrolls_period(self):
        report = analysis_controller.substitution_report(3, "(012)", levels=3)
        assert [level.level for level in report.levels] == [1, 2, 3]
        assert report.levels[2].chi == report.levels[0].chi

    def test_substitution_report_needs_a_level(self):
        with pytest.raises(PreconditionError):
            analysis_controller.substitution_report(3, "(012)", levels=0)

    def test_surface_report_with_census(self):
        report = analysis_controller.surface_report(5, "(0)(1)(23)(4)", 5)
        assert report.vertical_permutation == "(0)(12)(3)(4)"
        assert report.census.wild_singularities == 1
        assert [cone.multiplicity for cone in report.census.cone_angle_singularities] == [3, 1]

    def test_surface_report_without_census(self):
        report = analysis_controller.surface_report(5, "(01234)", 7)
        assert report.census is None
        data = json.loads(analysis_controller.to_json(report))
        assert "census" not in data
        assert data["schema_version"] == report.schema_version
