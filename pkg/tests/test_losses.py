import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forecast_eval.exceptions import DegenerateSampleError, InsufficientObservationsError, LossOverflowError
from forecast_eval.losses import DEFAULT_LOSSES, LossSpec, loss, loss_series, summarize

import oracles

QUAD = LossSpec("quadratic")
ABS = LossSpec("absolute")
LINEX_P = LossSpec("linex", 0.5)
LINEX_N = LossSpec("linex", -0.5)

errors = st.floats(-100, 100, allow_nan=False)
# e**2 underflows to 0 below ~1e-162; keep clear of that range
representable = st.one_of(st.just(0.0), errors.filter(lambda e: abs(e) > 1e-100))
alphas = st.floats(-3, 3).filter(lambda a: abs(a) > 1e-3)


class TestLossSpec:
    @pytest.mark.parametrize(
        "text, spec",
        [("quadratic", QUAD), ("Absolute", ABS), ("linex(0.5)", LINEX_P), ("linex(-0.5)", LINEX_N)],
    )
    def test_parse(self, text, spec):
        assert LossSpec.parse(text) == spec
        assert LossSpec.parse(spec.label) == spec

    def test_linex_needs_alpha(self):
        with pytest.raises(ValueError):
            LossSpec("linex", 0.0)

    def test_alpha_ignored_for_symmetric(self):
        assert LossSpec("quadratic", 3.0) == QUAD

    def test_unknown(self):
        with pytest.raises(ValueError):
            LossSpec.parse("huber")


class TestLoss:
    def test_linex_zero(self):
        assert loss(LINEX_P, 0.0) == 0.0

    def test_linex_values(self):
        expected = math.exp(0.5) - 1.5  # 0.148721...
        assert loss(LINEX_P, 1.0) == pytest.approx(expected, rel=1e-14)
        assert loss(LINEX_N, -1.0) == pytest.approx(0.1487212707, abs=1e-10)

    def test_quadratic_boe_error(self):
        assert loss(QUAD, -2.34) == pytest.approx(5.4756, rel=1e-14)

    def test_overflow(self):
        with pytest.raises(LossOverflowError, match="loss overflow"):
            loss(LINEX_P, 1500.0)
        assert math.isfinite(loss(LINEX_P, 1400.0))

    def test_small_arguments_accurate(self):
        for x in (1e-3, -1e-3, 5e-3, 1e-8):
            assert loss(LossSpec("linex", 1.0), x) == pytest.approx(
                float(sum(x**k / math.factorial(k) for k in range(2, 12))), rel=1e-13
            )

    @given(representable)
    def test_nonnegative_zero_iff_zero(self, e):
        for spec in DEFAULT_LOSSES + (LossSpec("linex", 2.0),):
            v = loss(spec, e)
            assert v >= 0
            assert (v == 0) == (e == 0)

    @given(alphas, st.floats(-50, 50))
    def test_linex_reflection(self, a, e):
        assert loss(LossSpec("linex", a), e) == loss(LossSpec("linex", -a), -e)

    @given(errors)
    def test_symmetric_losses_even(self, e):
        assert loss(QUAD, e) == loss(QUAD, -e)
        assert loss(ABS, e) == loss(ABS, -e)

    def test_linex_asymmetry_direction(self):
        # alpha > 0 penalizes positive errors (under-prediction) more
        assert loss(LINEX_P, 1.0) > loss(LINEX_P, -1.0)
        assert loss(LINEX_N, -1.0) > loss(LINEX_N, 1.0)

    def test_series_matches_scalar(self):
        es = [-2.0, 0.0, 0.3, 4.0]
        for spec in DEFAULT_LOSSES:
            assert loss_series(spec, es).tolist() == [loss(spec, e) for e in es]


class TestSummarize:
    def test_alternating(self):
        e = [1, -1, 1, -1, 1, -1]
        s = summarize(e)
        ref = oracles.summary_spreadsheet(e)
        assert s.mean == 0 and s.mae == 1
        assert s.std == pytest.approx(math.sqrt(6 / 5), rel=1e-14)
        assert s.ac1 == pytest.approx(-5 / 6, rel=1e-14)
        for k, v in ref.items():
            assert getattr(s, k) == pytest.approx(v, abs=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_spreadsheet_oracle(self, seed):
        import numpy as np

        e = np.random.default_rng(seed).standard_t(4, size=17 + seed).tolist()
        s = summarize(e).as_dict()
        for k, v in oracles.summary_spreadsheet(e).items():
            assert s[k] == pytest.approx(v, rel=1e-12, abs=1e-14), k

    def test_constant_sample_is_degenerate(self):
        with pytest.raises(DegenerateSampleError, match="degenerate sample") as ei:
            summarize([0.7] * 8)
        p = ei.value.partial
        assert p["mean"] == p["median"] == 0.7
        assert p["mae"] == 0.7
        with pytest.raises(DegenerateSampleError):
            summarize([0.0] * 8)

    def test_too_few(self):
        with pytest.raises(InsufficientObservationsError):
            summarize([1.0, 2.0, 3.0, 4.0])

    @given(st.lists(st.floats(-20, 20), min_size=5, max_size=40).filter(lambda v: max(v) - min(v) > 1e-3))
    def test_invariants(self, e):
        s = summarize(e)
        assert s.mae >= abs(s.mean) - 1e-12
        assert s.mdae >= 0 and s.std >= 0
        assert s.min <= s.median <= s.max
        assert -1 - 1e-12 <= s.ac1 <= 1 + 1e-12
        assert -1 - 1e-12 <= s.ac4 <= 1 + 1e-12

    @given(st.lists(st.floats(-20, 20), min_size=5, max_size=40).filter(lambda v: max(v) - min(v) > 1e-3))
    def test_sign_flip(self, e):
        s = summarize(e)
        f = summarize([-x for x in e])
        assert f.mean == -s.mean and f.median == -s.median
        assert f.skew == pytest.approx(-s.skew, abs=1e-12)
        assert f.max == -s.min and f.min == -s.max
        assert (f.mae, f.mdae) == (s.mae, s.mdae)
        assert f.std == pytest.approx(s.std, rel=1e-14)
        assert f.ac1 == pytest.approx(s.ac1, abs=1e-12)
        assert f.ac4 == pytest.approx(s.ac4, abs=1e-12)
