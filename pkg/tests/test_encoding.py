"""Phase histograms, level tables, and their serialization."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from phaseamp import (
    InvalidParameterError,
    InvalidSizeError,
    ObjectiveKind,
    PhaseHistogram,
    ResourceLimitError,
    SCHEMA_VERSION,
    TwoPeakModel,
    UnsupportedSizeError,
    build_class_table,
    build_histogram,
    histogram_from_phases,
    make_grid,
    make_line,
    objective_value,
    parse_graph_spec,
    phase_of,
    shift_phases,
    two_peak_histogram,
    uniform_histogram,
)

from .oracles import ref_level_counts, ref_tail_mass


class TestPhaseOf:
    def test_grid_positions(self):
        g = make_line(4)
        assert phase_of(g, ObjectiveKind.MAXCUT, 0b0101) == pytest.approx(math.pi)
        assert phase_of(g, ObjectiveKind.MAXCUT, 0b0001) == pytest.approx(math.pi / 3)
        assert phase_of(g, ObjectiveKind.MAXCUT, 0) == 0.0


class TestBuildHistogram:
    @pytest.mark.parametrize("kind", ["maxcut", "covered-edges"])
    @pytest.mark.parametrize("spec", ["line:6", "grid:2x3", "starring:5"])
    @pytest.mark.parametrize("include_zero", [False, True])
    def test_counts_match_reference(self, kind, spec, include_zero):
        g = parse_graph_spec(spec)
        h = build_histogram(g, ObjectiveKind.parse(kind), include_zero=include_zero)
        ref = ref_level_counts(kind, g.n_vertices, g.edges, include_zero)
        assert h.n_levels == g.edge_count + 1
        for k in range(g.edge_count + 1):
            assert int(h.counts[k]) == ref.get(k, 0)

    def test_levels_on_grid(self):
        g = make_grid(3, 3)
        h = build_histogram(g, ObjectiveKind.MAXCUT)
        assert h.denominator == 12
        assert h.numerators == tuple(range(13))
        assert np.allclose(h.thetas, np.arange(13) * math.pi / 12)

    def test_support_excludes_all_zeros_by_default(self):
        g = make_grid(3, 3)
        assert build_histogram(g, ObjectiveKind.MAXCUT).support == 2**9 - 1
        assert (
            build_histogram(g, ObjectiveKind.MAXCUT, include_zero=True).support == 2**9
        )

    def test_grid44_top_level(self, grid44_histogram):
        assert grid44_histogram.support == 2**16 - 1
        assert int(grid44_histogram.counts[24]) == 2
        assert int(grid44_histogram.counts[23]) == 0

    def test_enumeration_limit(self):
        g = make_line(29)
        with pytest.raises(ResourceLimitError):
            build_histogram(g, ObjectiveKind.MAXCUT)

    def test_weights_sum_to_one(self, benchmark_histograms):
        for h in benchmark_histograms.values():
            assert math.fsum(h.weights().tolist()) == pytest.approx(1.0, abs=1e-15)


class TestHistogramValidation:
    def test_rejects_unsorted_thetas(self):
        with pytest.raises(InvalidParameterError):
            PhaseHistogram(np.array([1.0, 0.5]), np.array([1, 1]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(InvalidParameterError):
            PhaseHistogram(np.array([0.5, 1.0]), np.array([1]))

    def test_rejects_negative_counts(self):
        with pytest.raises(InvalidParameterError):
            PhaseHistogram(np.array([0.5]), np.array([-1]))

    def test_rejects_empty_support(self):
        with pytest.raises(InvalidParameterError):
            PhaseHistogram(np.array([0.5, 1.0]), np.array([0, 0]))

    def test_rejects_nan_theta(self):
        with pytest.raises(InvalidParameterError):
            PhaseHistogram(np.array([math.nan]), np.array([1]))

    def test_numerators_need_denominator(self):
        with pytest.raises(InvalidParameterError):
            PhaseHistogram(np.array([0.5]), np.array([1]), numerators=(1,))

    def test_arrays_are_frozen(self):
        h = uniform_histogram(4)
        with pytest.raises(ValueError):
            h.thetas[0] = 0.1
        with pytest.raises(ValueError):
            h.counts[0] = 7


class TestMasses:
    def test_tail_mass_boundaries(self, grid44_histogram):
        h = grid44_histogram
        assert h.tail_mass(0.0) == 1.0
        assert h.tail_mass(math.pi) == pytest.approx(2 / (2**16 - 1))
        # A level exactly at the threshold is included.
        expected = ref_tail_mass(h.thetas, h.counts, math.pi / 2)
        assert h.tail_mass(math.pi / 2) == pytest.approx(expected, abs=1e-15)

    def test_band_mass_matches_direct_count(self, benchmark_histograms):
        for h in benchmark_histograms.values():
            for hw in (0.2, 0.7, 1.2):
                inside = sum(
                    int(c)
                    for t, c in zip(h.thetas, h.counts)
                    if abs(t - math.pi / 2) <= hw + 1e-12
                )
                assert h.band_mass(hw) == pytest.approx(inside / h.support, abs=1e-15)

    def test_band_mass_rejects_negative_width(self, grid44_histogram):
        with pytest.raises(InvalidParameterError):
            grid44_histogram.band_mass(-0.1)


class TestSerialization:
    def test_json_dict_shape(self, grid44_histogram):
        doc = grid44_histogram.to_json_dict()
        assert doc["schema"] == SCHEMA_VERSION
        assert doc["denominator"] == 24
        assert doc["support"] == 2**16 - 1
        assert doc["includes_zero"] is False
        assert len(doc["levels"]) == 25
        assert doc["levels"][24] == {
            "k": 24,
            "theta": pytest.approx(math.pi),
            "count": 2,
        }
        json.dumps(doc)  # must be serializable as-is

    def test_json_null_labels_off_grid(self):
        h = histogram_from_phases([0.3, 0.3, 1.1])
        doc = h.to_json_dict()
        assert doc["denominator"] is None
        assert [lv["k"] for lv in doc["levels"]] == [None, None]

    def test_csv_layout(self):
        h = uniform_histogram(2)
        lines = h.to_csv().splitlines()
        assert lines[0] == "theta,count"
        assert len(lines) == 3
        theta, count = lines[1].split(",")
        assert float(theta) == pytest.approx(math.pi / 2)
        assert count == "1"


class TestUniformHistogram:
    def test_levels_and_counts(self):
        h = uniform_histogram(100)
        assert h.n_levels == 100
        assert h.support == 100
        assert h.numerators == tuple(range(1, 101))
        assert h.denominator == 100
        assert h.thetas[-1] == pytest.approx(math.pi)
        assert h.thetas[0] == pytest.approx(math.pi / 100)
        assert np.all(h.counts == 1)

    def test_rejects_empty(self):
        with pytest.raises(InvalidSizeError):
            uniform_histogram(0)


class TestTwoPeakHistogram:
    def test_split_follows_shares(self):
        model = TwoPeakModel.from_gains(0.125, 0.125, 2)
        h = two_peak_histogram(model, 8)
        assert h.n_levels == 2
        assert h.counts.tolist() == [7, 1]
        assert h.thetas[0] == pytest.approx(math.acos(1 - 0.125))
        assert h.thetas[1] == pytest.approx(math.pi)

    def test_rejects_unpopulated_peak(self):
        model = TwoPeakModel.from_gains(0.125, 0.125, 2)
        with pytest.raises(InvalidSizeError):
            two_peak_histogram(model, 3)


class TestShiftPhases:
    def test_zero_shift_is_identity(self, grid44_histogram):
        assert shift_phases(grid44_histogram, 0.0) is grid44_histogram

    def test_shift_moves_levels_and_drops_labels(self, grid44_histogram):
        shifted = shift_phases(grid44_histogram, 0.25)
        assert np.allclose(shifted.thetas, grid44_histogram.thetas + 0.25)
        assert shifted.denominator is None
        assert shifted.numerators is None
        assert np.array_equal(shifted.counts, grid44_histogram.counts)

    def test_shift_may_leave_zero_pi(self, grid44_histogram):
        shifted = shift_phases(grid44_histogram, 0.5)
        assert float(shifted.thetas[-1]) > math.pi

    def test_rejects_nonfinite(self, grid44_histogram):
        with pytest.raises(InvalidParameterError):
            shift_phases(grid44_histogram, math.inf)


class TestHistogramFromPhases:
    def test_groups_duplicates(self):
        h = histogram_from_phases([1.1, 0.3, 0.3, 1.1, 2.0])
        assert h.thetas.tolist() == [0.3, 1.1, 2.0]
        assert h.counts.tolist() == [2, 2, 1]

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            histogram_from_phases([0.5, 3.5])
        with pytest.raises(InvalidParameterError):
            histogram_from_phases([-0.2])

    def test_rejects_empty(self):
        with pytest.raises(InvalidParameterError):
            histogram_from_phases([])


class TestClassTable:
    def test_consistent_with_histogram(self):
        g = parse_graph_spec("grid:3x3")
        h = build_histogram(g, ObjectiveKind.MAXCUT)
        table = build_class_table(g, ObjectiveKind.MAXCUT)
        assert table.n_levels == h.n_levels
        assert np.array_equal(table.class_sizes(), h.counts)

    def test_class_of_matches_objective(self):
        g = parse_graph_spec("starring:8")
        table = build_class_table(g, ObjectiveKind.MAXCUT)
        rng = np.random.default_rng(7)
        for x in rng.integers(1, 1 << 8, size=1000):
            assert table.class_of(int(x)) == objective_value(
                g, ObjectiveKind.MAXCUT, int(x)
            )

    def test_members_partition_the_support(self):
        g = make_line(6)
        table = build_class_table(g, ObjectiveKind.MAXCUT)
        seen = sorted(
            int(x) for level in range(table.n_levels) for x in table.members(level)
        )
        assert seen == list(range(1, 1 << 6))

    def test_members_score_their_level(self):
        g = make_line(6)
        table = build_class_table(g, ObjectiveKind.MAXCUT)
        for level in range(table.n_levels):
            for x in table.members(level):
                assert objective_value(g, ObjectiveKind.MAXCUT, int(x)) == level

    def test_all_zeros_outside_support(self):
        table = build_class_table(make_line(5), ObjectiveKind.MAXCUT)
        with pytest.raises(InvalidParameterError):
            table.class_of(0)

    def test_include_zero_restores_it(self):
        table = build_class_table(
            make_line(5), ObjectiveKind.MAXCUT, include_zero=True
        )
        assert table.class_of(0) == 0

    def test_size_cap(self):
        with pytest.raises(UnsupportedSizeError):
            build_class_table(make_line(21), ObjectiveKind.MAXCUT)

    def test_level_out_of_range(self):
        table = build_class_table(make_line(5), ObjectiveKind.MAXCUT)
        with pytest.raises(InvalidParameterError):
            table.members(table.n_levels)
