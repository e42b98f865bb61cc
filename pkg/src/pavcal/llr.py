"""Log-likelihood-ratio calibration on top of the monotone fit.

The monotone fit returns posterior probabilities, which bake in the class
proportions of the training set.  Subtracting the prior log-odds in logit
space leaves a log-likelihood ratio, and that quantity does not depend on
which prior was used for the fit: reweighting trials by any prior shifts
every fitted value by exactly that prior's log-odds.  llr_calibrate
therefore fits with unit weights and removes the empirical log-odds
logit(t1 / (t1 + t2)).

Both infinities are legitimate outputs here: a trial pooled only with
non-targets genuinely carries -inf evidence under the monotone model.
Clamping, if a consumer needs it, is the consumer's decision (the command
line offers --clamp-llr).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .pav import pav_posteriors
from .types import Label, WeightPair


def logit(p: float) -> float:
    """log(p / (1-p)); -inf at p=0, +inf at p=1; rejects p outside [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    if p == 0.0:
        return -math.inf
    if p == 1.0:
        return math.inf
    return math.log(p / (1.0 - p))


def sigmoid(w: float) -> float:
    """Inverse of logit, numerically stable for large |w|; maps +-inf to 1/0."""
    if w >= 0.0:
        return 1.0 / (1.0 + math.exp(-w))
    e = math.exp(w)
    return e / (1.0 + e)


def weights_from_prior(prior_logodds: float, t1: int, t2: int) -> WeightPair:
    """Per-trial weights that make a fit behave as if the prior were pi.

    Targets get sigmoid(pi)/t1 each and non-targets (1-sigmoid(pi))/t2,
    so each class's total weight matches the prior probability it should
    carry.  The prior must be finite and both counts at least 1.
    """
    if not math.isfinite(prior_logodds):
        raise ValueError(f"prior log-odds must be finite, got {prior_logodds!r}")
    if t1 < 1 or t2 < 1:
        raise ValueError(f"both class counts must be >= 1, got t1={t1}, t2={t2}")
    pi = sigmoid(prior_logodds)
    return WeightPair(pi / t1, (1.0 - pi) / t2)


@dataclass(frozen=True, slots=True)
class LlrCalibration:
    """Fitted per-trial log-likelihood ratios, in score order.

    prior_logodds records the empirical log-odds that was subtracted, so
    sigmoid(w[t] + prior_logodds) recovers the unit-weight posterior fit.
    """

    w: tuple[float, ...]
    prior_logodds: float
    t1: int
    t2: int

    def __post_init__(self) -> None:
        if self.t1 < 1 or self.t2 < 1:
            raise ValueError("calibration needs at least one trial of each class")
        prev = -math.inf
        for x in self.w:
            if math.isnan(x) or x < prev:
                raise ValueError("llr values must be nondecreasing")
            prev = x


def llr_calibrate(labels: Sequence[Label]) -> LlrCalibration:
    """Prior-independent monotone LLR assignment for a label sequence.

    Requires at least one trial of each class.  Values may include -inf
    and +inf at the ends of the sequence.
    """
    t1 = sum(1 for lab in labels if lab is Label.TARGET)
    t2 = len(labels) - t1
    if t1 < 1 or t2 < 1:
        raise ValueError(
            f"llr calibration needs both classes (got {t1} targets, {t2} non-targets)"
        )
    offset = logit(t1 / (t1 + t2))
    p = pav_posteriors(labels, WeightPair(1.0, 1.0))
    w = tuple(logit(pt) - offset for pt in p)
    return LlrCalibration(w=w, prior_logodds=offset, t1=t1, t2=t2)


def posterior_from_llr(w: float, prior_logodds: float) -> float:
    """Posterior target probability from an LLR and a prior log-odds."""
    return sigmoid(w + prior_logodds)


__all__ = [
    "logit",
    "sigmoid",
    "weights_from_prior",
    "LlrCalibration",
    "llr_calibrate",
    "posterior_from_llr",
]
