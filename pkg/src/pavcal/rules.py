"""Binary proper scoring rules generated by a threshold-weight density.

Every rule in this family is described by a nonnegative weight density
rho(eta) over decision thresholds eta in (0, 1) that integrates to 1.
Reporting probability q for a trial costs

    target:      integral over [q, 1] of rho(eta) / eta        d eta
    non-target:  integral over [0, q] of rho(eta) / (1 - eta)  d eta

Both costs are nonnegative and may be +inf at the extreme probabilities
(q = 0 for targets, q = 1 for non-targets); +inf is an ordinary value
here, not an error.  The rules are proper: the expected cost under a true
target probability r is minimized at q = r.

Provided members:

  Logarithmic   rho = 1            costs (-ln q, -ln(1 - q))
  Brier         rho = 6 eta(1-eta) costs (3(1-q)^2, 3q^2)
  CostAt(t)     rho = delta at t   a single hard decision cost
  DiracMixture  finite mix of CostAt spikes
  CustomDensity any user density, costs by adaptive quadrature

Point masses sitting exactly at q belong to the non-target integral (its
range [0, q] is closed at q, the target range (q, 1] is open at q), so a
CostAt rule charges the non-target side at q == t and not the target side.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy import integrate

from .types import Label, WeightPair, as_weights

_INF = math.inf

# Quadrature knobs for CustomDensity: absolute tolerance of each cost
# integral, and the margin by which a singular endpoint is excluded.
_QUAD_ABS_TOL = 1e-10
_ENDPOINT_MARGIN = 1e-12
_NORMALIZATION_TOL = 1e-6


def _check_q(q: float) -> float:
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"probability {q!r} outside [0, 1]")
    return q


class ScoringRule:
    """Base class; subclasses implement the two one-sided costs."""

    def cost(self, label: Label, q: float) -> float:
        """Cost of reporting probability q for a trial with this label."""
        _check_q(q)
        if label is Label.TARGET:
            return self._target_cost(q)
        if label is Label.NONTARGET:
            return self._nontarget_cost(q)
        raise TypeError(f"label must be a Label, got {label!r}")

    def _target_cost(self, q: float) -> float:
        raise NotImplementedError

    def _nontarget_cost(self, q: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True, slots=True)
class Logarithmic(ScoringRule):
    """rho = 1: cost is the negative log of the probability given to the truth."""

    def _target_cost(self, q: float) -> float:
        return _INF if q == 0.0 else -math.log(q)

    def _nontarget_cost(self, q: float) -> float:
        return _INF if q == 1.0 else -math.log(1.0 - q)

    def __str__(self) -> str:
        return "log"


@dataclass(frozen=True, slots=True)
class Brier(ScoringRule):
    """rho = 6 eta(1-eta): the squared-error rule, scaled so rho integrates to 1."""

    def _target_cost(self, q: float) -> float:
        d = 1.0 - q
        return 3.0 * d * d

    def _nontarget_cost(self, q: float) -> float:
        return 3.0 * q * q

    def __str__(self) -> str:
        return "brier"


@dataclass(frozen=True, slots=True)
class CostAt(ScoringRule):
    """All threshold weight at one point t in (0, 1): a hard decision at t.

    Reporting q below t costs 1/t per target; reporting q at or above t
    costs 1/(1-t) per non-target.  One side is always zero.
    """

    threshold: float

    def __post_init__(self) -> None:
        t = self.threshold
        if not (isinstance(t, (int, float)) and 0.0 < t < 1.0):
            raise ValueError(f"threshold must lie strictly inside (0, 1), got {t!r}")

    def _target_cost(self, q: float) -> float:
        return 1.0 / self.threshold if q < self.threshold else 0.0

    def _nontarget_cost(self, q: float) -> float:
        return 1.0 / (1.0 - self.threshold) if q >= self.threshold else 0.0

    def __str__(self) -> str:
        return f"cost@{self.threshold!r}"


@dataclass(frozen=True, slots=True)
class DiracMixture(ScoringRule):
    """Convex combination of CostAt spikes.

    components is a sequence of (alpha, threshold) pairs; the alphas must
    be positive and sum to 1 (within 1e-12).  The cost is exactly the
    alpha-weighted sum of the component CostAt costs, summed left to
    right.
    """

    components: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        comps = tuple((float(a), float(t)) for a, t in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("mixture needs at least one component")
        total = 0.0
        for a, t in comps:
            if not (math.isfinite(a) and a > 0.0):
                raise ValueError(f"mixture weight must be positive, got {a!r}")
            if not 0.0 < t < 1.0:
                raise ValueError(f"threshold must lie strictly inside (0, 1), got {t!r}")
            total += a
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"mixture weights sum to {total!r}, expected 1")

    def _target_cost(self, q: float) -> float:
        s = 0.0
        for a, t in self.components:
            if q < t:
                s += a * (1.0 / t)
        return s

    def _nontarget_cost(self, q: float) -> float:
        s = 0.0
        for a, t in self.components:
            if q >= t:
                s += a * (1.0 / (1.0 - t))
        return s

    def __str__(self) -> str:
        inner = ",".join(f"{a!r}@{t!r}" for a, t in self.components)
        return f"mix({inner})"


class CustomDensity(ScoringRule):
    """Rule defined by an arbitrary density, costs computed by quadrature.

    The caller must declare whether the two cost integrands stay
    integrable at their singular ends, since that cannot be decided
    numerically: integrable_at_zero says integral of rho(eta)/eta
    converges at eta -> 0, integrable_at_one the same for rho/(1-eta) at
    eta -> 1.  A cost whose declared end diverges is reported as +inf.

    The density itself is validated lazily on first use: it must be
    nonnegative on a sampled grid and integrate to 1 within 1e-6.
    Quadrature targets 1e-10 absolute error and keeps a 1e-12 margin from
    a singular endpoint; failure to converge raises ValueError.
    """

    def __init__(
        self,
        density: Callable[[float], float],
        integrable_at_zero: bool,
        integrable_at_one: bool,
    ) -> None:
        self.density = density
        self.integrable_at_zero = bool(integrable_at_zero)
        self.integrable_at_one = bool(integrable_at_one)
        self._validated = False

    def _ensure_valid(self) -> None:
        if self._validated:
            return
        rho = self.density
        for k in range(101):
            eta = k / 100
            if rho(eta) < 0.0:
                raise ValueError(f"density is negative at eta={eta}")
        total = self._quad(rho, 0.0, 1.0)
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise ValueError(f"density integrates to {total!r}, expected 1 within 1e-6")
        self._validated = True

    @staticmethod
    def _quad(f: Callable[[float], float], lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        val, err = integrate.quad(f, lo, hi, epsabs=_QUAD_ABS_TOL, epsrel=_QUAD_ABS_TOL, limit=200)
        if not math.isfinite(val) or err > 1e-6:
            raise ValueError("cost quadrature did not converge")
        return val if val > 0.0 else 0.0

    def _target_cost(self, q: float) -> float:
        self._ensure_valid()
        if q == 0.0 and not self.integrable_at_zero:
            return _INF
        rho = self.density
        return self._quad(lambda e: rho(e) / e, max(q, _ENDPOINT_MARGIN), 1.0)

    def _nontarget_cost(self, q: float) -> float:
        self._ensure_valid()
        if q == 1.0 and not self.integrable_at_one:
            return _INF
        rho = self.density
        return self._quad(lambda e: rho(e) / (1.0 - e), 0.0, min(q, 1.0 - _ENDPOINT_MARGIN))

    def __str__(self) -> str:
        return "custom"


def rule_cost(rule: ScoringRule, label: Label, q: float) -> float:
    """Cost of reporting probability q for a trial with the given label."""
    return rule.cost(label, q)


def expected_cost(rule: ScoringRule, r: float, q: float) -> float:
    """Expected cost of reporting q when the true target probability is r.

    Uses the convention 0 * inf = 0, so a class with zero probability
    contributes nothing even where its cost is infinite.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"probability {r!r} outside [0, 1]")
    if r == 0.0:
        return rule.cost(Label.NONTARGET, q)
    if r == 1.0:
        return rule.cost(Label.TARGET, q)
    return r * rule.cost(Label.TARGET, q) + (1.0 - r) * rule.cost(Label.NONTARGET, q)


def objective(
    rule: ScoringRule,
    labels: Sequence[Label],
    weights: WeightPair | tuple[float, float],
    p: Sequence[float],
) -> float:
    """Weighted total cost of value assignment p for the labeled trials.

    Saturates at +inf as soon as any term is infinite.  Does not require
    p to be monotone; callers score arbitrary candidate assignments.
    """
    if len(labels) != len(p):
        raise ValueError(f"got {len(labels)} labels but {len(p)} values")
    w = as_weights(weights)
    total = 0.0
    for lab, pt in zip(labels, p):
        c = rule.cost(lab, pt)
        if c == _INF:
            return _INF
        total += (w.v1 if lab is Label.TARGET else w.v2) * c
    return total


_COST_RE = re.compile(r"^cost@(?P<t>[^@,()]+)$")
_MIX_RE = re.compile(r"^mix\((?P<body>.*)\)$")


def parse_rule(text: str) -> ScoringRule:
    """Parse a rule name as used on the command line.

    Grammar: 'log' | 'brier' | 'cost@T' | 'mix(A@T,A@T,...)' where T is a
    threshold in (0, 1) and A a positive mixture weight.
    """
    spec = text.strip()
    if spec == "log":
        return Logarithmic()
    if spec == "brier":
        return Brier()
    m = _COST_RE.match(spec)
    if m:
        try:
            t = float(m.group("t"))
        except ValueError:
            raise ValueError(f"bad threshold in rule {text!r}")
        return CostAt(t)
    m = _MIX_RE.match(spec)
    if m:
        comps = []
        for part in m.group("body").split(","):
            part = part.strip()
            try:
                alpha_text, t_text = part.split("@")
                comps.append((float(alpha_text), float(t_text)))
            except ValueError:
                raise ValueError(f"bad mixture component {part!r} in rule {text!r}")
        try:
            return DiracMixture(tuple(comps))
        except ValueError as exc:
            raise ValueError(f"bad rule {text!r}: {exc}")
    raise ValueError(
        f"unknown rule {text!r}; expected log, brier, cost@T, or mix(A@T,...)"
    )


__all__ = [
    "ScoringRule",
    "Logarithmic",
    "Brier",
    "CostAt",
    "DiracMixture",
    "CustomDensity",
    "rule_cost",
    "expected_cost",
    "objective",
    "parse_rule",
]
