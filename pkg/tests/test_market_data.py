import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paretofolio import market_data as md
from paretofolio.errors import (
    EmptyFrame,
    KTooLarge,
    MalformedRow,
    TooFewRows,
    ZeroMarketVariance,
)


def _dates(n, start=dt.date(2021, 1, 1)):
    return tuple(start + dt.timedelta(days=i) for i in range(n))


def _write(tmp_path, text, name="prices.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadPrices:
    def test_direct_parse(self, tmp_path):
        path = _write(
            tmp_path,
            "date,AAA,BBB\n2021-01-01,10,20\n2021-01-02,11,21\n2021-01-03,12,22\n",
        )
        frame = md.load_prices(path)
        assert frame.prices.shape == (3, 2)
        assert frame.tickers == ("AAA", "BBB")
        assert frame.dates[0] == dt.date(2021, 1, 1)

    def test_duplicate_date_rejected_unless_dedup(self, tmp_path):
        path = _write(tmp_path, "date,AAA\n2021-01-01,10\n2021-01-01,11\n")
        with pytest.raises(MalformedRow) as exc:
            md.load_prices(path)
        assert exc.value.line == 3
        frame = md.load_prices(path, dedup=True)
        assert frame.n_dates == 1
        assert frame.prices[0, 0] == 10.0

    def test_non_numeric_cell_cites_line(self, tmp_path):
        path = _write(tmp_path, "date,AAA\n2021-01-01,10\n2021-01-02,oops\n")
        with pytest.raises(MalformedRow) as exc:
            md.load_prices(path)
        assert exc.value.line == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            md.load_prices(tmp_path / "nope.csv")

    def test_empty_file(self, tmp_path):
        path = _write(tmp_path, "date,AAA\n")
        with pytest.raises(EmptyFrame):
            md.load_prices(path)

    def test_rows_sorted_by_date(self, tmp_path):
        path = _write(tmp_path, "date,AAA\n2021-01-02,11\n2021-01-01,10\n")
        frame = md.load_prices(path)
        assert frame.prices[:, 0].tolist() == [10.0, 11.0]


class TestClean:
    def test_null_cell_drops_row(self):
        prices = np.full((6, 2), 10.0)
        prices[4, 1] = np.nan
        frame = md.PriceFrame(_dates(6), ("A", "B"), prices)
        out = md.clean(frame)
        assert out.n_dates == 5
        assert _dates(6)[4] not in out.dates

    def test_duplicate_dates_keep_first(self):
        dates = (_dates(1)[0], _dates(1)[0], _dates(3)[2])
        prices = np.array([[1.0], [2.0], [3.0]])
        out = md.clean(md.PriceFrame(dates, ("A",), prices))
        assert out.n_dates == 2
        assert out.prices[0, 0] == 1.0

    def test_idempotent_on_clean_frame(self):
        frame = md.PriceFrame(_dates(4), ("A", "B"), np.full((4, 2), 5.0))
        once = md.clean(frame)
        twice = md.clean(once)
        assert once.dates == twice.dates
        np.testing.assert_array_equal(once.prices, twice.prices)

    def test_sparse_ticker_dropped_before_rows(self):
        prices = np.full((10, 2), 10.0)
        prices[:6, 1] = np.nan  # 60% missing in ticker B
        out = md.clean(md.PriceFrame(_dates(10), ("A", "B"), prices))
        assert out.tickers == ("A",)
        assert out.n_dates == 10

    def test_everything_removed(self):
        prices = np.full((3, 1), np.nan)
        with pytest.raises(EmptyFrame):
            md.clean(md.PriceFrame(_dates(3), ("A",), prices))

    @given(
        st.lists(
            st.lists(
                st.one_of(st.floats(1.0, 100.0), st.just(float("nan"))),
                min_size=2,
                max_size=2,
            ),
            min_size=2,
            max_size=12,
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_clean_idempotence_property(self, rows):
        frame = md.PriceFrame(_dates(len(rows)), ("A", "B"), np.array(rows))
        try:
            once = md.clean(frame)
        except EmptyFrame:
            return
        twice = md.clean(once)
        assert once.dates == twice.dates and once.tickers == twice.tickers
        np.testing.assert_array_equal(once.prices, twice.prices)


class TestSimpleReturns:
    def test_single_step(self):
        frame = md.PriceFrame(_dates(2), ("A",), np.array([[100.0], [110.0]]))
        out = md.simple_returns(frame)
        np.testing.assert_allclose(out.returns, [[0.10]])

    def test_constant_prices(self):
        frame = md.PriceFrame(_dates(3), ("A",), np.full((3, 1), 50.0))
        np.testing.assert_array_equal(md.simple_returns(frame).returns, np.zeros((2, 1)))

    def test_hand_arithmetic(self):
        frame = md.PriceFrame(_dates(3), ("A",), np.array([[100.0], [110.0], [99.0]]))
        np.testing.assert_allclose(md.simple_returns(frame).returns[:, 0], [0.10, -0.10])

    def test_too_few_rows(self):
        frame = md.PriceFrame(_dates(1), ("A",), np.array([[100.0]]))
        with pytest.raises(TooFewRows):
            md.simple_returns(frame)


class TestCapm:
    def test_market_beta_one(self):
        rm = np.array([0.01, -0.02, 0.03, 0.005])
        frame = md.ReturnsFrame(_dates(4), ("M",), rm[:, None])
        out = md.capm_expected_returns(frame, rm, rf=0.0)
        np.testing.assert_allclose(out, [rm.mean()], atol=1e-15)

    def test_uncorrelated_asset_gets_rf(self):
        rm = np.array([0.01, -0.01, 0.01, -0.01])
        asset = np.array([0.02, 0.02, -0.02, -0.02])  # orthogonal to rm
        frame = md.ReturnsFrame(_dates(4), ("A",), asset[:, None])
        out = md.capm_expected_returns(frame, rm, rf=0.003)
        np.testing.assert_allclose(out, [0.003], atol=1e-15)

    def test_matches_covariance_oracle(self):
        rng = np.random.Generator(np.random.PCG64(3))
        rm = rng.normal(0.001, 0.01, 4)
        assets = rng.normal(0.0, 0.02, (4, 2))
        frame = md.ReturnsFrame(_dates(4), ("A", "B"), assets)
        rf = 0.0005
        out = md.capm_expected_returns(frame, rm, rf)
        for i in range(2):
            beta = np.cov(assets[:, i], rm, ddof=1)[0, 1] / np.var(rm, ddof=1)
            np.testing.assert_allclose(out[i], rf + beta * (rm.mean() - rf), atol=1e-14)

    def test_zero_market_variance(self):
        frame = md.ReturnsFrame(_dates(3), ("A",), np.zeros((3, 1)))
        with pytest.raises(ZeroMarketVariance):
            md.capm_expected_returns(frame, np.zeros(3), rf=0.0)


class TestLedoitWolf:
    def _sample(self, n=10, p=3, seed=5):
        rng = np.random.Generator(np.random.PCG64(seed))
        return rng.normal(0.0, 0.02, (n, p))

    def test_alpha_zero_is_sample_covariance(self):
        x = self._sample()
        sigma, alpha = md.ledoit_wolf_covariance(x, alpha_override=0.0)
        xc = x - x.mean(axis=0)
        np.testing.assert_allclose(sigma, xc.T @ xc / x.shape[0], atol=1e-12)
        assert alpha == 0.0

    def test_alpha_one_is_target(self):
        x = self._sample()
        sigma, alpha = md.ledoit_wolf_covariance(x, alpha_override=1.0)
        xc = x - x.mean(axis=0)
        s = xc.T @ xc / x.shape[0]
        np.testing.assert_allclose(sigma, np.trace(s) / 3 * np.eye(3), atol=1e-12)
        assert alpha == 1.0

    def test_matches_reference_intensity_formula(self):
        # independent oracle: sklearn's implementation of the same estimator
        from sklearn.covariance import ledoit_wolf as sk_lw

        x = self._sample()
        sigma, alpha = md.ledoit_wolf_covariance(x)
        sk_sigma, sk_alpha = sk_lw(x)
        assert abs(alpha - sk_alpha) < 1e-10
        np.testing.assert_allclose(sigma, sk_sigma, atol=1e-10)

    def test_output_psd(self):
        x = self._sample(n=6, p=8, seed=11)  # p > n, sample cov singular
        sigma, alpha = md.ledoit_wolf_covariance(x)
        assert 0.0 <= alpha <= 1.0
        assert np.linalg.eigvalsh(sigma).min() >= -1e-10


class TestForecastNoise:
    def _frame(self, shape=(100, 100), seed=0):
        rng = np.random.Generator(np.random.PCG64(seed))
        n, p = shape
        return md.ReturnsFrame(
            _dates(n), tuple(f"T{i}" for i in range(p)), rng.normal(0, 0.01, shape)
        )

    def test_zero_std_is_identity(self):
        frame = self._frame((5, 3))
        out = md.add_forecast_noise(frame, md.NoiseSpec(std_dev=0.0, seed=1))
        np.testing.assert_array_equal(out.returns, frame.returns)

    def test_same_seed_bit_identical(self):
        frame = self._frame((5, 3))
        spec = md.NoiseSpec(seed=42)
        a = md.add_forecast_noise(frame, spec)
        b = md.add_forecast_noise(frame, spec)
        np.testing.assert_array_equal(a.returns, b.returns)

    def test_sample_moments(self):
        frame = self._frame((100, 100))
        out = md.add_forecast_noise(frame, md.NoiseSpec(mean=0.0, std_dev=0.1, seed=42))
        eps = out.returns - frame.returns
        assert abs(eps.mean()) < 3 * 0.1 / 100
        assert abs(eps.std() - 0.1) < 0.05 * 0.1


class TestSelectTopK:
    def test_descending_order(self):
        out = md.select_top_k(np.array([0.1, 0.3, 0.2]), ["A", "B", "C"], 2)
        assert out == ["B", "C"]

    def test_k_equals_universe(self):
        out = md.select_top_k(np.array([0.1, 0.3]), ["A", "B"], 2)
        assert out == ["B", "A"]

    def test_tie_breaks_lexicographic(self):
        out = md.select_top_k(np.array([0.2, 0.2]), ["ZZZ", "AAA"], 1)
        assert out == ["AAA"]

    def test_k_too_large(self):
        with pytest.raises(KTooLarge):
            md.select_top_k(np.array([0.1]), ["A"], 2)
