import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from eigendetect.covariance import EigenSpectrum
from eigendetect.detectors import (DETECTORS, detect, detect_aic_wk, detect_mdl_modified,
                                   detect_mdl_wk, detect_new, detect_new_wideband, noise_var_mle,
                                   t_statistic)
from eigendetect.errors import DomainError


def spec(values, m, beta=2):
    return EigenSpectrum(values, m=m, beta=beta)


class TestNoiseVar:
    def test_values(self):
        assert noise_var_mle(spec([3, 1, 1, 1], 8), 1) == 1.0
        assert noise_var_mle(spec([3, 1, 1, 1], 8), 0) == 1.5

    def test_zero_tail(self):
        with pytest.raises(DomainError, match='degenerate noise estimate'):
            noise_var_mle(spec([4, 2, 0, 0], 2), 2)

    def test_range(self):
        with pytest.raises(ValueError):
            noise_var_mle(spec([3, 1], 8), 2)


class TestTStatistic:
    def test_constructed_zero(self):
        assert t_statistic(spec([2, 0], 2), 0) == 0.0

    def test_hand_values(self):
        s = spec([3, 1, 1, 1], 8)
        assert t_statistic(s, 0) == pytest.approx(-2 / 3, rel=1e-14)
        assert t_statistic(s, 1) == pytest.approx(-2.0, rel=1e-14)

    def test_zero_tail_is_infinite(self):
        assert t_statistic(spec([2, 0, 0], 3), 1) == math.inf

    def test_equal_tail_square(self):
        # n = m, tail of equal values gives ratio 1: t = (1 - 2) n - (2/beta - 1)
        for beta in (1, 2, 4):
            s = spec([9, 5, 1, 1, 1, 1], 6, beta)
            assert t_statistic(s, 2) == pytest.approx(-6 - (2 / beta - 1), rel=1e-14)


class TestDetectNew:
    def test_enumeration(self):
        r = detect_new(spec([3, 1, 1, 1], 8))
        assert r.k_hat == 0 and r.method == 'new'
        assert [k for k, _ in r.scores] == [0, 1, 2, 3]
        np.testing.assert_allclose([s for _, s in r.scores], [8 / 9 + 2, 12, 14, 16], rtol=1e-14)

    def test_zero_tail_infinite(self):
        r = detect_new(spec([2, 0], 2))
        assert r.scores == ((0, 2.0), (1, math.inf))
        assert r.k_hat == 0

    def test_golden_fixture(self, fixtures_dir):
        d = json.loads((fixtures_dir / 'spectrum_n64_m256_seed11.json').read_text())
        r = detect_new(spec(d['values'], d['m'], d['beta']))
        ref = oracles.new_scores(d['values'], d['n'], d['m'], d['beta'])
        assert r.k_hat == oracles.argmin_smallest(ref) == 2
        np.testing.assert_allclose([s for _, s in r.scores], ref, rtol=1e-10)

    def test_fixture_regenerates(self, fixtures_dir):
        from eigendetect.covariance import PopulationModel, sample_snapshots, scm_eigenvalues
        d = json.loads((fixtures_dir / 'spectrum_n64_m256_seed11.json').read_text())
        s = scm_eigenvalues(sample_snapshots(PopulationModel((10, 3), 1, 64), 256, seed=11))
        np.testing.assert_allclose(s.values, d['values'], rtol=1e-12)

    def test_small_dims(self):
        with pytest.raises(ValueError):
            detect_new(spec([1], 5))
        with pytest.raises(ValueError):
            detect_new(spec([1, 0], 1))

    def test_all_infinite(self):
        with pytest.raises(DomainError, match='unusable spectrum'):
            detect_new(spec([0, 0, 0], 3))

    def test_to_dict(self):
        d = detect_new(spec([2, 0], 2)).to_dict()
        assert d == {'method': 'new', 'k_hat': 0,
                     'scores': [{'k': 0, 'score': 2.0}, {'k': 1, 'score': None}]}


class TestWideband:
    def test_single_bin_reduction(self):
        s = spec([5, 2, 1.1, 0.9, 0.8], 20)
        a, b = detect_new(s), detect_new_wideband([s])
        assert a.k_hat == b.k_hat and a.scores == b.scores
        assert b.method == 'new_wideband'

    def test_two_identical_bins(self):
        s = spec([5, 2, 1.1, 0.9, 0.8], 20)
        single = detect_new(s)
        double = detect_new_wideband([s, s])
        for (k, s1), (_, s2) in zip(single.scores, double.scores):
            data = s1 - 2 * (k + 1)
            assert s2 == pytest.approx(2 * data + 4 * (k + 1), rel=1e-13)
        assert double.k_hat == single.k_hat
        ref = oracles.wideband_scores([s.values.tolist()] * 2, 5, 20, 2)
        assert double.k_hat == oracles.argmin_smallest(ref)

    def test_noise_bins_fixture(self, fixtures_dir):
        d = json.loads((fixtures_dir / 'wideband_noise_n16_m64_seed5.json').read_text())
        r = detect_new_wideband([spec(b, d['m'], d['beta']) for b in d['bins']])
        ref = oracles.wideband_scores(d['bins'], d['n'], d['m'], d['beta'])
        assert r.k_hat == oracles.argmin_smallest(ref) == 0
        np.testing.assert_allclose([s for _, s in r.scores], ref, rtol=1e-10)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            detect_new_wideband([spec([2, 1, 1], 8), spec([2, 1, 1], 9)])
        with pytest.raises(ValueError):
            detect_new_wideband([spec([2, 1, 1], 8), spec([2, 1, 1], 8, beta=1)])
        with pytest.raises(ValueError):
            detect_new_wideband([])


class TestWaxKailath:
    def test_aic_equal_spectrum(self):
        r = detect_aic_wk(spec([1, 1, 1, 1], 100))
        assert r.k_hat == 0
        assert [s for _, s in r.scores] == [2 * k * (8 - k) for k in range(4)]

    def test_aic_hand(self):
        r = detect_aic_wk(spec([4, 1], 8))
        assert r.score_of(0) == pytest.approx(32 * math.log(1.25), rel=1e-14)
        assert r.score_of(0) == pytest.approx(7.1406, abs=1e-4)
        assert r.score_of(1) == 6.0
        assert r.k_hat == 1

    def test_aic_requires_m_gt_n(self):
        with pytest.raises(ValueError, match='m>n'):
            detect_aic_wk(spec([3, 2, 1, 0], 3))
        with pytest.raises(ValueError, match='m>n'):
            detect_mdl_wk(spec([3, 2, 1, 0.5], 4))

    def test_mdl_equal_spectrum(self):
        assert detect_mdl_wk(spec([1, 1, 1, 1], 100)).k_hat == 0

    def test_mdl_hand(self):
        r = detect_mdl_wk(spec([4, 1], 8))
        assert r.score_of(0) == pytest.approx(3.5703, abs=1e-4)
        assert r.score_of(1) == pytest.approx(1.5 * math.log(8), rel=1e-14)
        assert r.k_hat == 1

    def test_mdl_weak(self):
        r = detect_mdl_wk(spec([1.1, 1.0], 8))
        assert r.score_of(0) == pytest.approx(16 * math.log(1.05 / math.sqrt(1.1)), rel=1e-12)
        assert r.score_of(0) == pytest.approx(0.0182, abs=1e-4)
        assert r.score_of(1) == pytest.approx(3.119, abs=1e-3)
        assert r.k_hat == 0

    def test_modified_matches_original_when_m_gt_n(self):
        s = spec([7, 3, 1.2, 1, 0.9], 50)
        assert detect_mdl_modified(s).scores == detect_mdl_wk(s).scores
        assert detect_mdl_modified(s).k_hat == detect_mdl_wk(s).k_hat

    @pytest.mark.parametrize('values, m', [([2, 1, 0, 0], 2), ([2, 1, 0.5, 0], 3)])
    def test_modified_degenerate(self, values, m):
        with pytest.raises(DomainError):
            detect_mdl_modified(spec(values, m))

    def test_zero_eigenvalue_makes_every_k_infeasible(self):
        with pytest.raises(DomainError):
            detect_aic_wk(spec([3, 1, 0], 10))
        with pytest.raises(DomainError):
            detect_mdl_wk(spec([3, 0, 0], 10))


def test_detect_dispatch():
    s = spec([3, 1, 1, 1], 8)
    assert detect(s, 'new') == detect_new(s)
    with pytest.raises(ValueError):
        detect(s, 'bogus')


def test_monotone_penalty_equal_tails():
    # equal-eigenvalue tails make the WK data terms zero
    s = spec([1.0] * 6, 60)
    n, m = 6, 60
    aic = detect_aic_wk(s)
    mdl = detect_mdl_wk(s)
    for k in range(n - 1):
        assert aic.score_of(k + 1) - aic.score_of(k) == pytest.approx(2 * (2 * n - 2 * k - 1))
        assert mdl.score_of(k + 1) - mdl.score_of(k) == pytest.approx(
            0.5 * (2 * n - 2 * k - 1) * math.log(m))
    # for the new estimator the data term is zero when t_k = 0 at every k
    r = detect_new(spec([2, 0], 2))
    assert r.score_of(0) == 2.0


def test_ties_go_to_smaller_k():
    from eigendetect.detectors import _result
    assert _result([(0, 1.0), (1, 1.0), (2, 0.5), (3, 0.5)], 'new').k_hat == 2
    assert _result([(0, math.inf), (1, 3.0), (2, 3.0)], 'new').k_hat == 1
    # symmetric spectrum fixture: identical bins tie at every k in both
    s = spec([4, 1, 1, 1], 40)
    assert detect_new_wideband([s, s]).k_hat == detect_new(s).k_hat


spectra = st.integers(2, 10).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0.05, 50), min_size=n, max_size=n),
    st.integers(n + 1, 4 * n + 8),
    st.sampled_from([1, 2, 4]),
))


@given(spectra, st.sampled_from([1e-3, 1.0, 1e3]))
def test_scale_invariance(case, alpha):
    values, m, beta = case
    s = spec(values, m, beta)
    scaled = s.scaled(alpha)
    for name, fn in DETECTORS.items():
        assert fn(scaled).k_hat == fn(s).k_hat, name
    np.testing.assert_allclose([v for _, v in detect_new(scaled).scores],
                               [v for _, v in detect_new(s).scores], rtol=1e-9)
