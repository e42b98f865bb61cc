import math
import random

import pytest
from hypothesis import given, strategies as st

from pavcal import (
    Label,
    LlrCalibration,
    llr_calibrate,
    logit,
    pav_posteriors,
    posterior_from_llr,
    sigmoid,
    weights_from_prior,
)

T = Label.TARGET
N = Label.NONTARGET

PRIORS = (-5.0, -2.0, -0.5, 0.0, 0.5, 2.0, 5.0)


def test_logit_known_values():
    assert logit(0.5) == 0.0
    assert logit(0.75) == pytest.approx(math.log(3), abs=1e-15)
    assert logit(0.0) == -math.inf
    assert logit(1.0) == math.inf
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(ValueError):
            logit(bad)


def test_sigmoid_known_values():
    assert sigmoid(0.0) == 0.5
    assert sigmoid(math.log(3)) == pytest.approx(0.75, abs=1e-15)
    assert sigmoid(-math.inf) == 0.0
    assert sigmoid(math.inf) == 1.0
    assert sigmoid(-800.0) == 0.0  # no overflow on extreme finite inputs
    assert sigmoid(800.0) == 1.0


@given(p=st.floats(1e-9, 1.0 - 1e-9))
def test_sigmoid_inverts_logit(p):
    assert sigmoid(logit(p)) == pytest.approx(p, abs=1e-12)


def test_weights_from_prior_balanced_case():
    w = weights_from_prior(0.0, 10, 10)
    assert (w.v1, w.v2) == (0.05, 0.05)


@pytest.mark.parametrize("pi", PRIORS)
def test_priors_share_out_unit_total_weight(pi):
    w = weights_from_prior(pi, 7, 13)
    assert 7 * w.v1 + 13 * w.v2 == pytest.approx(1.0, abs=1e-12)
    assert logit(7 * w.v1) == pytest.approx(pi, abs=1e-9)


def test_weights_from_prior_rejects_bad_input():
    with pytest.raises(ValueError):
        weights_from_prior(math.inf, 10, 10)
    with pytest.raises(ValueError):
        weights_from_prior(math.nan, 10, 10)
    with pytest.raises(ValueError):
        weights_from_prior(0.0, 0, 10)


def test_llr_calibrate_frozen_examples():
    # Perfectly separated pair: infinite evidence both ways.
    assert llr_calibrate([N, T]).w == (-math.inf, math.inf)
    # Fully pooled pair at the empirical prior: zero evidence.
    assert llr_calibrate([T, N]).w == (0.0, 0.0)
    # One pooled block of 1/3 plus a pure target block.
    cal = llr_calibrate([T, N, N, T])
    assert cal.w[:3] == pytest.approx([-math.log(2)] * 3, abs=1e-12)
    assert cal.w[3] == math.inf
    assert cal.prior_logodds == 0.0


def test_llr_calibrate_needs_both_classes():
    with pytest.raises(ValueError):
        llr_calibrate([T, T, T])
    with pytest.raises(ValueError):
        llr_calibrate([N])


def test_posterior_from_llr():
    assert posterior_from_llr(math.log(3), -math.log(3)) == pytest.approx(0.5, abs=1e-15)
    assert posterior_from_llr(-math.inf, 2.0) == 0.0
    assert posterior_from_llr(math.inf, -2.0) == 1.0


@given(labels=st.lists(st.sampled_from([T, N]), min_size=2, max_size=60))
def test_round_trip_back_to_posteriors(labels):
    if not (any(l is T for l in labels) and any(l is N for l in labels)):
        labels = labels + [T, N]
    cal = llr_calibrate(labels)
    p = pav_posteriors(labels, (1.0, 1.0))
    for w, want in zip(cal.w, p):
        assert posterior_from_llr(w, cal.prior_logodds) == pytest.approx(want, abs=1e-12)


@given(labels=st.lists(st.sampled_from([T, N]), min_size=2, max_size=60))
def test_llrs_are_nondecreasing(labels):
    if not (any(l is T for l in labels) and any(l is N for l in labels)):
        labels = labels + [T, N]
    w = llr_calibrate(labels).w
    assert all(a <= b for a, b in zip(w, w[1:]))


def test_calibration_type_rejects_non_monotone_values():
    with pytest.raises(ValueError):
        LlrCalibration(w=(0.5, 0.0), prior_logodds=0.0, t1=1, t2=1)
    with pytest.raises(ValueError):
        LlrCalibration(w=(0.0, math.nan), prior_logodds=0.0, t1=1, t2=1)
    with pytest.raises(ValueError):
        LlrCalibration(w=(0.0,), prior_logodds=0.0, t1=0, t2=1)


def test_prior_independence_over_reweighted_fits():
    # Shifting the prior reweights every trial, but logit(fit) - prior
    # lands on the same LLR values regardless, including the infinities.
    rng = random.Random(42)
    for _ in range(20):
        labels = [T if rng.random() < 0.4 else N for _ in range(40)]
        if not (any(l is T for l in labels) and any(l is N for l in labels)):
            continue
        t1 = sum(1 for l in labels if l is T)
        ref = llr_calibrate(labels).w
        for pi in PRIORS:
            p = pav_posteriors(labels, weights_from_prior(pi, t1, len(labels) - t1))
            for pt, want in zip(p, ref):
                got = logit(pt) - pi
                if math.isinf(want):
                    assert got == want
                else:
                    assert got == pytest.approx(want, abs=1e-9)
