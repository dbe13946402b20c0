import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraglead.analysis import (
    CSV_HEADER,
    ResultRow,
    ResultTable,
    TrendFit,
    emit_csv,
    emit_plot,
    fit_trend,
    log_transform,
    make_row,
    read_csv,
    threshold_length,
)
from fraglead.errors import (
    DegenerateAbscissa,
    InsufficientPoints,
    NoPlottablePoints,
    NonDecreasingTrend,
)

from fixtures import (
    MIDAZOLAM_FIT,
    MIDAZOLAM_TABLE,
    NELARABINE_FIT,
    NELARABINE_TABLE,
)


def recorded_table(rows):
    """Build a ResultTable carrying the recorded log column verbatim."""
    return ResultTable(tuple(
        ResultRow(r.search_fragment, r.symbols, r.adopted_size, r.printed_log)
        for r in rows
    ))


def nelarabine_result_table():
    return log_transform(
        (r.search_fragment, r.symbols, r.adopted_size) for r in NELARABINE_TABLE
    )


class TestLogTransform:
    @pytest.mark.parametrize(
        "size,expected",
        [(38_500_000, 7.59), (7, 0.85), (1, 0.0)],
    )
    def test_rounded_log(self, size, expected):
        table = log_transform([("f", 2, size)])
        assert round(table.rows[0].log_size, 2) == expected

    def test_full_precision_is_stored(self):
        table = log_transform([("f", 2, 772_000)])
        assert table.rows[0].log_size == pytest.approx(math.log10(772_000), abs=1e-12)

    def test_zero_size_leaves_log_absent(self):
        table = log_transform([("f", 2, 0)])
        assert table.rows[0].size == 0
        assert table.rows[0].log_size is None


class TestFitTrend:
    def test_two_point_exact_line(self):
        table = ResultTable((
            ResultRow("a", 2, 10_000, 4.0),
            ResultRow("b", 4, 100, 2.0),
        ))
        fit = fit_trend(table)
        assert fit.slope == pytest.approx(-1.0)
        assert fit.intercept == pytest.approx(6.0)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.points_used == 2
        assert fit.excluded_zero_rows == 0

    def test_nelarabine_recorded_logs(self):
        fit = fit_trend(recorded_table(NELARABINE_TABLE))
        assert fit.slope == pytest.approx(NELARABINE_FIT["slope"], abs=1e-4)
        assert fit.intercept == pytest.approx(NELARABINE_FIT["intercept"], abs=1e-4)
        assert fit.points_used == 9

    def test_midazolam_recorded_logs(self):
        fit = fit_trend(recorded_table(MIDAZOLAM_TABLE))
        assert fit.slope == pytest.approx(MIDAZOLAM_FIT["slope"], abs=1e-4)
        assert fit.intercept == pytest.approx(MIDAZOLAM_FIT["intercept"], abs=1e-4)

    def test_matches_polyfit_oracle(self):
        table = recorded_table(NELARABINE_TABLE)
        xs = [row.symbols for row in table.rows]
        ys = [row.log_size for row in table.rows]
        slope, intercept = np.polyfit(xs, ys, 1)
        fit = fit_trend(table)
        assert fit.slope == pytest.approx(slope, abs=1e-12)
        assert fit.intercept == pytest.approx(intercept, abs=1e-12)

    def test_zero_rows_are_excluded_and_counted(self):
        table = ResultTable((
            ResultRow("a", 2, 100, 2.0),
            ResultRow("b", 4, 0, None),
            ResultRow("c", 6, 10, 1.0),
        ))
        fit = fit_trend(table)
        assert fit.points_used == 2
        assert fit.excluded_zero_rows == 1
        assert fit.points_used + fit.excluded_zero_rows == len(table.rows)

    def test_insufficient_points(self):
        table = ResultTable((ResultRow("a", 2, 100, 2.0),))
        with pytest.raises(InsufficientPoints):
            fit_trend(table)

    def test_degenerate_abscissa(self):
        table = ResultTable((
            ResultRow("a", 4, 100, 2.0),
            ResultRow("b", 4, 10, 1.0),
        ))
        with pytest.raises(DegenerateAbscissa):
            fit_trend(table)

    @given(
        st.lists(
            st.tuples(
                st.integers(min_value=1, max_value=50),
                st.floats(min_value=-10, max_value=10,
                          allow_nan=False, allow_infinity=False),
            ),
            min_size=3,
            max_size=20,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_residual_orthogonality(self, points):
        xs = [x for x, _ in points]
        if len(set(xs)) < 2:
            return
        table = ResultTable(tuple(
            ResultRow(f"f{i}", x, None, y) for i, (x, y) in enumerate(points)
        ))
        fit = fit_trend(table)
        residuals = [y - fit.predict(x) for x, y in points]
        scale = max(1.0, max(abs(y) for _, y in points)) * len(points)
        assert abs(sum(residuals)) <= 1e-9 * scale * max(xs)
        assert abs(sum(x * r for x, r in zip(xs, residuals))) <= 1e-9 * scale * max(xs) ** 2


class TestThresholdLength:
    def test_recorded_fits_reach_manageable_at_16(self):
        for rows in (NELARABINE_TABLE, MIDAZOLAM_TABLE):
            fit = fit_trend(recorded_table(rows))
            assert threshold_length(fit, 1000) == 16

    def test_exact_arithmetic(self):
        fit = TrendFit(-1.0, 6.0, 1.0, 2, 0)
        assert threshold_length(fit, 1000) == 3

    def test_already_manageable_clamps_to_one(self):
        fit = TrendFit(-0.5, 1.0, 1.0, 3, 0)
        assert threshold_length(fit, 1000) == 1

    def test_non_decreasing_trend(self):
        fit = TrendFit(0.1, 2.0, 0.5, 5, 0)
        with pytest.raises(NonDecreasingTrend):
            threshold_length(fit, 1000)

    @given(st.integers(min_value=1, max_value=10**9), st.integers(min_value=1, max_value=10**9))
    @settings(max_examples=200)
    def test_monotonic_in_manageable(self, a, b):
        fit = TrendFit(-0.359, 8.43, 0.6, 9, 0)
        low, high = min(a, b), max(a, b)
        assert threshold_length(fit, high) <= threshold_length(fit, low)


class TestEmitCsv:
    def test_structure(self):
        table = nelarabine_result_table()
        fit = fit_trend(table)
        text = emit_csv(table, fit)
        lines = text.splitlines()
        data_lines = [l for l in lines if not l.startswith("#")]
        comment_lines = [l for l in lines if l.startswith("#")]
        assert len(data_lines) == 10  # header + 9 rows
        assert len(comment_lines) == 2
        assert data_lines[0] == ",".join(CSV_HEADER)
        assert text.endswith("\n")
        assert "\r" not in text

    def test_empty_table(self):
        assert emit_csv(ResultTable(())) == ",".join(CSV_HEADER) + "\n"

    def test_comma_in_fragment_is_quoted(self):
        table = ResultTable((make_row("a,b", 3, 5),))
        text = emit_csv(table)
        assert '"a,b"' in text

    def test_zero_size_has_empty_log_cell(self):
        table = ResultTable((make_row("zz", 2, 0),))
        assert "zz,2,0,\n" in emit_csv(table)

    def test_failed_row_is_commented(self):
        table = ResultTable((make_row("zz", 2, None, error="NetworkError: nope"),))
        text = emit_csv(table)
        assert "zz,2,,\n" in text
        assert "# error at 2 symbols: NetworkError: nope" in text

    def test_round_trip_through_read_csv(self):
        table = nelarabine_result_table()
        parsed = read_csv(emit_csv(table, fit_trend(table)))
        assert [(r.fragment, r.symbols, r.size) for r in parsed.rows] == [
            (r.fragment, r.symbols, r.size) for r in table.rows
        ]

    def test_read_csv_rejects_foreign_header(self):
        with pytest.raises(ValueError):
            read_csv("alpha,beta\n1,2\n")


class TestEmitPlot:
    def test_svg_is_well_formed_xml(self):
        table = nelarabine_result_table()
        svg = emit_plot(table, fit_trend(table))
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")

    def test_nine_points_and_one_fit_line(self):
        table = nelarabine_result_table()
        svg = emit_plot(table, fit_trend(table))
        assert svg.count('class="pt"') == 9
        assert svg.count('class="fit"') == 1

    def test_axis_labels_present(self):
        table = nelarabine_result_table()
        svg = emit_plot(table, fit_trend(table))
        assert "# symbols" in svg
        assert "log(result set size)" in svg

    def test_single_point_gets_notice_instead_of_line(self):
        table = ResultTable((make_row("NC", 2, 100),))
        svg = emit_plot(table, None)
        assert svg.count('class="pt"') == 1
        assert svg.count('class="fit"') == 0
        assert 'class="notice"' in svg
        ET.fromstring(svg)

    def test_no_plottable_points(self):
        table = ResultTable((make_row("NC", 2, 0),))
        with pytest.raises(NoPlottablePoints):
            emit_plot(table, None)

    def test_zero_rows_are_skipped_not_plotted(self):
        table = ResultTable((make_row("NC", 2, 100), make_row("CN", 4, 0),
                             make_row("OC", 6, 10)))
        svg = emit_plot(table, fit_trend(table))
        assert svg.count('class="pt"') == 2

    def test_configurable_size(self):
        table = nelarabine_result_table()
        svg = emit_plot(table, fit_trend(table), width=800, height=500)
        assert 'width="800"' in svg
        assert 'height="500"' in svg
