import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import ftcore, noise
from artifact.errors import InvalidArgument

mpmath.mp.dps = 50


def oracle_logical(eta, thr, k):
    return float(mpmath.mpf(thr) * (mpmath.mpf(eta) / thr) ** (2**k))


@given(
    eta=st.floats(1e-9, 9.9e-5),
    thr=st.sampled_from([1e-4, 1e-3, 1e-2]),
    k=st.integers(0, 6),
)
def test_logical_error_matches_high_precision(eta, thr, k):
    got = ftcore.logical_error(eta, thr, k)
    want = oracle_logical(eta, thr, k)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("k", range(6))
def test_threshold_is_fixed_point(k):
    assert ftcore.logical_error(1e-4, 1e-4, k) == pytest.approx(1e-4, rel=1e-14)


def test_deep_level_underflows_cleanly():
    assert ftcore.logical_error(1e-6, 1e-4, 60) == 0.0
    assert ftcore.logical_error(1e-3, 1e-4, 60) == math.inf


@pytest.mark.parametrize("k", [-1, 1.5, 65])
def test_bad_levels_rejected(k):
    with pytest.raises(InvalidArgument):
        ftcore.logical_error(1e-6, 1e-4, k)


def test_algorithm_failure_clamps():
    assert ftcore.algorithm_failure(10, 0.05) == pytest.approx(0.5)
    assert ftcore.algorithm_failure(100, 0.05) == 1.0
    assert ftcore.algorithm_failure(0, 0.5) == 0.0


def test_constant_schedule_below_threshold_prefers_deepest_level():
    res = ftcore.kmax_scan(noise.ConstantSchedule(1e-6), ftcore.ThresholdModel(1e-4, 5))
    assert res.k_max == 5


def test_scan_tie_goes_to_lowest_level():
    # At threshold every level gives the same error.
    res = ftcore.kmax_scan(noise.ConstantSchedule(1e-4), ftcore.ThresholdModel(1e-4, 4))
    assert res.k_max == 0


def brute_kmax(eta0, thr, D, beta, kmax=30):
    vals = []
    for k in range(kmax + 1):
        eta = mpmath.mpf(eta0) * mpmath.mpf(D) ** (beta * k)
        p = 1 if eta >= 1 else min(1, thr * (eta / thr) ** (2**k))
        vals.append(p)
    best = min(vals)
    return min(k for k, v in enumerate(vals) if v <= best * (1 + mpmath.mpf(10) ** -12))


@given(log_eta0=st.floats(-14, -5), beta=st.floats(0.2, 1.5))
def test_powerlaw_closed_form_matches_bruteforce(log_eta0, beta):
    eta0 = 10**log_eta0
    got = ftcore.kmax_powerlaw(eta0, 1e-4, 291, beta, k_range_max=30).k_max
    assert got == brute_kmax(eta0, 1e-4, 291, beta)


@given(log_eta0=st.floats(-14, -5), beta=st.floats(0.2, 1.5))
def test_useful_bound_separates_levels(log_eta0, beta):
    eta0 = 10**log_eta0
    bound = ftcore.concat_useful_bound(1e-4, 291, beta)
    if abs(eta0 / bound - 1) < 1e-9:
        return
    k = ftcore.kmax_powerlaw(eta0, 1e-4, 291, beta).k_max
    assert (k >= 1) == (eta0 < bound)


def test_stationary_point_sits_below_k_tilde():
    eta0, D, beta = 1e-10, 291, 1.0
    kt = ftcore.k_tilde(eta0, 1e-4, D, beta)
    ks = ftcore.k_stationary(eta0, 1e-4, D, beta)
    # d/dk of 2^k (L + k c) vanishes at -L/c - 1/ln 2, while k_tilde = -L/c - 1.
    assert ks < kt
    assert ks == pytest.approx(kt + 1 - 1 / math.log(2), rel=1e-12)


def test_useful_bound_value():
    assert ftcore.concat_useful_bound(1e-4, 291, 1.0) == pytest.approx(1e-4 / 291**2)


def test_nonmonotone_fixture_local_minimum():
    res = ftcore.kmax_scan(noise.appendix_fixture(), ftcore.ThresholdModel(1e-4, 8))
    assert res.k_max == 0
    assert res.local_minimum_from(1) == 3
    assert 3 in res.local_minima
