import pytest
from hypothesis import given
from hypothesis import strategies as st

from forecast_eval.exceptions import EmptySubsampleError
from forecast_eval.timeseries import (
    ErrorPanel,
    ForecastPanel,
    QuarterlyPeriod,
    RealizationSeries,
    build_error_panel,
    quarter_range,
    split_subsamples,
)

Q = QuarterlyPeriod
periods = st.builds(Q, st.integers(1900, 2100), st.integers(1, 4))
shifts = st.integers(-400, 400)


class TestQuarterlyPeriod:
    def test_parse_and_str(self):
        assert Q.parse("2014Q1") == Q(2014, 1)
        assert Q.parse("2014.Q3") == Q(2014, 3)
        assert str(Q(2023, 4)) == "2023Q4"

    @pytest.mark.parametrize("bad", ["2014Q5", "2014Q0", "14Q1", "2014-1", ""])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            Q.parse(bad)

    def test_quarter_range_checked(self):
        with pytest.raises(ValueError):
            Q(2020, 5)

    def test_arithmetic(self):
        assert Q(2022, 3) + 1 == Q(2022, 4)
        assert Q(2022, 4) + 1 == Q(2023, 1)
        assert Q(2023, 1) - 4 == Q(2022, 1)
        assert Q(2023, 4) - Q(2014, 1) == 39

    @given(periods, shifts)
    def test_add_then_subtract_is_identity(self, p, h):
        assert (p + h) - h == p

    @given(periods, shifts, shifts)
    def test_group_action(self, p, a, b):
        assert (p + a) + b == p + (a + b)

    @given(periods, periods)
    def test_order_matches_lexicographic(self, p, q):
        assert (p < q) == ((p.year, p.quarter) < (q.year, q.quarter))


class TestRealizationSeries:
    def test_contiguous_indexing(self):
        s = RealizationSeries(Q(2014, 1), (1.9, 1.7, 1.5))
        assert len(s) == 3
        assert s.end == Q(2014, 3)
        assert s[Q(2014, 2)] == 1.7
        assert s.get(Q(2015, 1)) is None

    def test_window(self):
        s = RealizationSeries(Q(2014, 1), (1, 2, 3, 4))
        assert s.window(Q(2014, 4), 2) == (3.0, 4.0)
        assert s.window(Q(2014, 1), 2) is None

    def test_from_mapping_rejects_gap(self):
        with pytest.raises(ValueError, match="non-contiguous"):
            RealizationSeries.from_mapping({Q(2014, 1): 1.0, Q(2014, 3): 2.0})

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            RealizationSeries(Q(2014, 1), ())


class TestForecastPanel:
    def test_negative_horizon_rejected(self):
        with pytest.raises(ValueError):
            ForecastPanel("x", {(Q(2020, 1), -1): 1.0})

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            ForecastPanel.from_records("x", [(Q(2020, 1), 1, 1.0), (Q(2020, 1), 1, 2.0)])

    def test_immutable(self):
        p = ForecastPanel("x", {(Q(2020, 1), 0): 1.0})
        with pytest.raises(TypeError):
            p.entries[(Q(2020, 1), 1)] = 2.0


class TestBuildErrorPanel:
    def test_boe_2022q4_one_quarter_ahead(self):
        real = RealizationSeries(Q(2022, 4), (10.76,))
        panel = ForecastPanel("BoE", {(Q(2022, 3), 1): 13.1})
        err = build_error_panel(panel, real)
        assert err.entries[(Q(2022, 4), 1)] == pytest.approx(-2.34, abs=1e-12)
        assert err.entries[(Q(2022, 4), 1)] == 10.76 - 13.1

    def test_perfect_forecast(self):
        real = RealizationSeries(Q(2020, 1), (2.5,))
        err = build_error_panel(ForecastPanel("x", {(Q(2020, 1), 0): 2.5}), real)
        assert err.entries[(Q(2020, 1), 0)] == 0.0

    def test_no_overlap(self):
        real = RealizationSeries(Q(2020, 1), (2.5, 2.0))
        err = build_error_panel(ForecastPanel("x", {(Q(2030, 1), 1): 2.5}), real)
        assert len(err) == 0

    @given(st.lists(st.floats(-50, 50), min_size=1, max_size=30), st.data())
    def test_round_trip_reproduces_realizations(self, values, data):
        real = RealizationSeries(Q(2000, 1), tuple(values))
        entries = {}
        for k in range(len(values)):
            h = data.draw(st.integers(0, 4))
            entries[(Q(2000, 1) + k - h, h)] = data.draw(st.floats(-50, 50))
        panel = ForecastPanel("x", entries)
        err = build_error_panel(panel, real)
        assert len(err) == len(values)
        for (origin, h), f in panel.entries.items():
            e = err.entries[(origin + h, h)]
            assert f + e == pytest.approx(real[origin + h], rel=0, abs=1e-12)


def _panel(first, n, horizons=(0, 1)):
    return ErrorPanel("x", {(first + k, h): float(k) for k in range(n) for h in horizons})


class TestSplitSubsamples:
    def test_forty_quarter_split_is_20_20(self):
        panel = _panel(Q(2014, 1), 40, horizons=(1, 4, 8, 12))
        a, b = split_subsamples(panel, Q(2018, 4))
        for h in (1, 4, 8, 12):
            assert a.count(h) == 20
            assert b.count(h) == 20

    def test_synthetic_eight_quarters(self):
        a, b = split_subsamples(_panel(Q(2020, 1), 8), Q(2020, 4))
        assert a.count(0) == 4 and b.count(0) == 4

    def test_cut_at_last_target_errors(self):
        with pytest.raises(EmptySubsampleError, match="empty sub-sample"):
            split_subsamples(_panel(Q(2020, 1), 8), Q(2021, 4))

    def test_cut_before_span_errors(self):
        with pytest.raises(EmptySubsampleError):
            split_subsamples(_panel(Q(2020, 1), 8), Q(2019, 4))

    @given(st.integers(2, 30), st.data())
    def test_partition(self, n, data):
        panel = _panel(Q(2000, 1), n, horizons=(0, 2, 5))
        cut = Q(2000, 1) + data.draw(st.integers(0, n - 2))
        a, b = split_subsamples(panel, cut)
        assert set(a.entries).isdisjoint(b.entries)
        assert {**a.entries, **b.entries} == dict(panel.entries)
        for h in (0, 2, 5):
            assert a.count(h) + b.count(h) == panel.count(h)


def test_quarter_range_inclusive():
    r = quarter_range(Q(2014, 1), Q(2023, 4))
    assert len(r) == 40 and r[0] == Q(2014, 1) and r[-1] == Q(2023, 4)
