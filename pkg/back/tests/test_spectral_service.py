"""Unit tests for Frobenius forms, Perron data, measures and entropy bounds."""

import math

import pytest

from api.services.spectral_service import (
    char_poly_value,
    entropy_bound,
    frobenius_form,
    lebesgue_ergodic,
    measure_report,
    perron_data,
    power_iteration,
    spectral_summary,
)
from api.services.substitution_service import minimal_alphabet, telescope
from shared.core.errors import PreconditionError
from shared.models.matrix import IntegerMatrix

ERGODIC = {
    "q3_012": True,
    "q3_021": True,
    "q5_01234": True,
    "q5_02431": True,
    "q5_02413": False,
    "q7_0654321": False,
}


class TestFrobeniusForm:
    """Test the block triangular relabeling."""

    def test_sinks_first(self):
        form = frobenius_form(IntegerMatrix.from_rows([[1, 1], [0, 2]]))
        assert form.order == (1, 0)
        assert form.block_view.rows() == [[2, 0], [1, 1]]

    def test_zero_matrix_keeps_singletons(self):
        form = frobenius_form(IntegerMatrix.zeros(3))
        assert form.blocks == ((0,), (1,), (2,))

    def test_zero_singletons_with_equal_rows_merge(self):
        form = frobenius_form(IntegerMatrix.from_rows([[0, 0, 1], [0, 0, 1], [0, 0, 1]]))
        assert form.blocks == ((2,), (0, 1))

    def test_cyclic_odometer_blocks(self, renormalized):
        B = telescope(renormalized("q5_01234")).B
        assert B.rows() == [
            [1, 0, 0, 1, 0],
            [1, 0, 0, 1, 0],
            [1, 0, 0, 1, 0],
            [1, 0, 0, 1, 0],
            [4, 8, 8, 4, 8],
        ]
        form = frobenius_form(B)
        assert form.blocks == ((0, 3), (1, 2), (4,))
        assert form.order == (0, 3, 1, 2, 4)
        assert form.block_of(2) == 1
        assert form.block_positions(0) == (0, 1)

    def test_block_view_is_lower_triangular(self, renormalized, worked_name):
        form = frobenius_form(telescope(renormalized(worked_name)).B)
        view = form.block_view
        for index in range(len(form.blocks)):
            later = [p for j in range(index + 1, len(form.blocks)) for p in form.block_positions(j)]
            for row in form.block_positions(index):
                assert all(view[row, column] == 0 for column in later)


class TestPerronData:
    """Test exact characteristic polynomials and spectral radii."""

    @pytest.mark.parametrize("name,coefficients", [
        ("q3_012", (1, -2, -8, 0)),
        ("q3_021", (1, -2, -8, 0)),
        ("q5_02431", (1, -10, 8, 58, 47, 8)),
        ("q7_0516234", (1, -2, -6, 0, 0, 0, 0, 0)),
        ("q7_0361425", (1, -2, -6, 0, 0, 0, 0, 0)),
    ])
    def test_char_poly(self, renormalized, name, coefficients):
        assert perron_data(renormalized(name).matrix(1)).char_poly == coefficients

    def test_exact_integer_radius(self, renormalized):
        data = perron_data(renormalized("q3_012").matrix(1))
        assert data.radius_exact == "4"
        assert data.spectral_radius == 4.0
        assert data.minimal_polynomial == "x - 4"

    def test_cyclic_odometer_radius(self, renormalized):
        data = perron_data(telescope(renormalized("q5_01234")).B)
        assert abs(data.spectral_radius - 8) < 1e-8

    def test_quadratic_radius_on_minimal_alphabet(self, renormalized):
        seq = renormalized("q5_02431")
        B = telescope(seq).B
        data = perron_data(B.restrict(minimal_alphabet(seq)))
        assert abs(data.spectral_radius - (2 + math.sqrt(5))) < 1e-6
        assert "sqrt(5)" in data.radius_exact

    @pytest.mark.parametrize("name", ["q7_0516234", "q7_0361425"])
    def test_minimal_radius_q7(self, renormalized, name):
        summary = spectral_summary(renormalized(name))
        assert abs(summary.minimal.spectral_radius - (1 + math.sqrt(7))) < 1e-6

    def test_radius_is_root(self, renormalized, worked_name):
        data = perron_data(telescope(renormalized(worked_name)).B)
        scale = max(1.0, data.spectral_radius) ** len(data.char_poly)
        assert abs(char_poly_value(data.char_poly, data.spectral_radius)) <= 1e-8 * scale
        assert data.char_poly_residual <= 1e-9

    def test_power_iteration_agrees(self, renormalized, worked_name):
        B = telescope(renormalized(worked_name)).B
        data = perron_data(B)
        estimate, residual = power_iteration(B)
        assert abs(estimate - data.spectral_radius) < 1e-6 * max(1.0, data.spectral_radius)
        assert residual < 1e-8
        assert data.error_bound < 1e-6 * max(1.0, data.spectral_radius)


class TestMeasures:
    """Test candidate ergodic measures."""

    def test_two_measures_for_cyclic_odometer(self, renormalized):
        report = measure_report(renormalized("q5_01234"))
        assert report.count == 2
        low, high = report.measures
        assert low.value_exact == "2"
        assert high.value_exact == "8"
        assert low.left_eigenvector == pytest.approx((1, 0, 0, 1, 0), abs=1e-8)
        assert low.block_view_eigenvector == pytest.approx((1, 1, 0, 0, 0), abs=1e-8)
        assert high.left_eigenvector == pytest.approx((1, 1, 1, 1, 1), abs=1e-8)
        assert low.support == (0, 3)

    def test_primitive_matrix_has_one_measure(self, renormalized):
        report = measure_report(renormalized("q3_012"))
        assert report.count == 1
        assert report.measures[0].left_eigenvector == pytest.approx((1, 1, 1), abs=1e-8)

    @pytest.mark.parametrize("name", ["q7_0516234", "q7_0361425"])
    def test_one_measure_q7(self, renormalized, name):
        assert measure_report(renormalized(name)).count == 1

    def test_two_symbol_cycle_has_two_measures(self, renormalized):
        report = measure_report(renormalized("q5_02431"))
        assert report.count == 2
        assert all(candidate.nonnegative for candidate in report.measures)

    def test_count_bounded_by_q(self, renormalized, worked_name):
        seq = renormalized(worked_name)
        report = measure_report(seq)
        assert report.count <= seq.q
        for candidate in report.measures:
            assert candidate.residual < 1e-6 * candidate.value
            assert min(candidate.left_eigenvector) >= 0

    def test_shared_eigenvalue_rejected(self, renormalized):
        B = IntegerMatrix.from_rows([[2, 0], [1, 2]])
        report = measure_report(renormalized("q3_012"), matrix=B)
        assert report.count == 1
        assert [candidate.reason for candidate in report.rejected] == ["eigenvalue shared with a lower block"]

    def test_radius_one_rejected(self, renormalized):
        B = IntegerMatrix.from_rows([[1, 0], [1, 3]])
        report = measure_report(renormalized("q3_012"), matrix=B)
        assert report.count == 1
        assert report.rejected[0].reason == "spectral radius <= 1"


class TestErgodicity:
    """Test the Lebesgue ergodicity verdict."""

    @pytest.mark.parametrize("name", sorted(ERGODIC))
    def test_verdicts(self, renormalized, name):
        assert lebesgue_ergodic(renormalized(name)) is ERGODIC[name]

    def test_primitive_flag(self, renormalized):
        assert spectral_summary(renormalized("q3_012")).primitive
        assert not spectral_summary(renormalized("q5_01234")).primitive


class TestEntropyBound:
    """Test the entropy bound sequence."""

    @pytest.mark.parametrize("q", [3, 5, 7])
    def test_strictly_decreasing(self, q):
        values = [term.value for term in entropy_bound(q, 8)]
        assert all(a > b for a, b in zip(values[1:], values[2:]))

    @pytest.mark.parametrize("q,k", [(3, 6), (5, 5), (7, 5)])
    def test_drops_below_threshold(self, q, k):
        terms = entropy_bound(q, k)
        assert terms[-1].value < 1e-3
        assert terms[-2].value >= 1e-3

    def test_terms(self):
        first = entropy_bound(5, 1)[0]
        assert first.m_k == 35
        assert first.scale == pytest.approx(1 / 8)
        assert first.value == pytest.approx(math.log(35) / 8)

    def test_k_must_be_positive(self):
        with pytest.raises(PreconditionError):
            entropy_bound(3, 0)
