"""Directed confidence sets over a partitioned two-endpoint parameter space.

The parameter plane (theta_1, theta_2) is partitioned into quadrants and, in
the efficacy quadrant, into cones around the diagonal. A Phase 2 readout
eliminates quadrants it can rule out at joint level alpha (transition
decision), then compares the two endpoints directionally to pick a Phase 3
primary endpoint or a combined average endpoint (designation decision).

All estimates are sign-canonicalized so that positive means benefit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import BracketError, DomainError, NotApplicable
from .numerics import bvn_cdf, solve_root, std_normal_cdf, std_normal_quantile

__all__ = [
    "EndpointEstimate",
    "PartitionConfig",
    "IntervalKind",
    "DirectedInterval",
    "Quadrant",
    "TransitionDecision",
    "Outcome",
    "DesignationDecision",
    "allowance_d",
    "directed_diff_interval",
    "joint_critical_bound",
    "transition_decision",
    "designate_endpoint",
    "combined_lower_bound",
]


@dataclass(frozen=True)
class EndpointEstimate:
    """A point estimate of efficacy with its standard error.

    ``sigma`` may be zero only for degenerate known-exactly estimates used by
    the averaging arithmetic; every inferential operation requires it > 0.
    """

    theta_hat: float
    sigma: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta_hat):
            raise DomainError(f"theta_hat must be finite, got {self.theta_hat!r}")
        if not math.isfinite(self.sigma) or self.sigma < 0:
            raise DomainError(f"sigma must be finite and >= 0, got {self.sigma!r}")


def _require_positive_sigma(e: EndpointEstimate, name: str) -> None:
    if e.sigma <= 0:
        raise DomainError(f"{name}.sigma must be > 0 for this analysis")


@dataclass(frozen=True)
class PartitionConfig:
    """Joint level, meaningful-difference threshold, and endpoint correlation.

    ``c_md`` is the clinically meaningful difference between the two endpoint
    efficacies; it has no default because it is a clinical judgement, not a
    statistical one.
    """

    alpha: float
    c_md: float
    rho: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 0.5):
            raise DomainError(f"alpha must be in (0, 0.5), got {self.alpha!r}")
        if not math.isfinite(self.c_md) or self.c_md < 0:
            raise DomainError(f"c_md must be finite and >= 0, got {self.c_md!r}")
        if not (-1.0 <= self.rho <= 1.0):
            raise DomainError(f"rho must be in [-1, 1], got {self.rho!r}")


class IntervalKind(str, Enum):
    LowerBounded = "LowerBounded"
    WholeLine = "WholeLine"


@dataclass(frozen=True)
class DirectedInterval:
    """One-directional confidence statement for a signed efficacy difference.

    ``lower`` carries the observed direction's sign: for a positive estimate
    the claim is theta >= lower, for a negative estimate it is theta <= lower
    (the same magnitude reflected across zero). WholeLine means the estimate
    was too close to zero to support any directional claim.
    """

    kind: IntervalKind
    lower: float | None = None

    def __post_init__(self) -> None:
        if self.kind is IntervalKind.LowerBounded:
            if self.lower is None or not math.isfinite(self.lower):
                raise DomainError("LowerBounded interval needs a finite lower value")
        elif self.lower is not None:
            raise DomainError("WholeLine interval carries no bound")

    @classmethod
    def whole_line(cls) -> "DirectedInterval":
        return cls(kind=IntervalKind.WholeLine)

    @classmethod
    def lower_bounded(cls, lower: float) -> "DirectedInterval":
        return cls(kind=IntervalKind.LowerBounded, lower=lower)

    @property
    def is_whole_line(self) -> bool:
        return self.kind is IntervalKind.WholeLine


class Quadrant(str, Enum):
    NegNeg = "NegNeg"
    PosNeg = "PosNeg"
    NegPos = "NegPos"


@dataclass(frozen=True)
class TransitionDecision:
    eliminated_quadrants: frozenset[Quadrant]
    transition: bool
    per_endpoint_lower: tuple[float, float]

    def __post_init__(self) -> None:
        expected = Quadrant.NegNeg in self.eliminated_quadrants and (
            Quadrant.PosNeg in self.eliminated_quadrants
            or Quadrant.NegPos in self.eliminated_quadrants
        )
        if self.transition != expected:
            raise DomainError("transition flag inconsistent with eliminated quadrants")


class Outcome(str, Enum):
    Primary1 = "Primary1"
    Primary2 = "Primary2"
    Combine = "Combine"
    Inconclusive = "Inconclusive"


@dataclass(frozen=True)
class DesignationDecision:
    outcome: Outcome
    diff_interval: DirectedInterval
    avg_lower: float | None = None

    def __post_init__(self) -> None:
        if self.outcome is Outcome.Combine:
            if self.avg_lower is None or not math.isfinite(self.avg_lower):
                raise DomainError("Combine outcome needs a finite avg_lower")
        elif self.avg_lower is not None:
            raise DomainError(f"avg_lower only accompanies Combine, not {self.outcome}")


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 0.5):
        raise DomainError(f"alpha must be in (0, 0.5), got {alpha!r}")


def allowance_d(theta_hat_abs: float, sigma: float, alpha: float) -> float:
    """Width subtracted from |theta_hat| to get the directed lower bound.

    Solves Phi(d/sigma) - Phi((-sigma*z_{1-a/2} - (theta_hat_abs - d))/sigma)
    = 1 - alpha on the bracket [sigma*z_{1-alpha}, sigma*z_{1-alpha/2}]. The
    allowance shrinks from the two-sided to the one-sided width as the
    estimate moves away from zero.
    """
    _check_alpha(alpha)
    if not math.isfinite(sigma) or sigma <= 0:
        raise DomainError(f"sigma must be > 0, got {sigma!r}")
    if not math.isfinite(theta_hat_abs) or theta_hat_abs < 0:
        raise DomainError(f"theta_hat_abs must be finite and >= 0, got {theta_hat_abs!r}")

    two_sided = sigma * std_normal_quantile(1.0 - alpha / 2.0)
    one_sided = sigma * std_normal_quantile(1.0 - alpha)
    if theta_hat_abs < two_sided:
        raise NotApplicable(
            "estimate within the two-sided width of zero; no directional claim is possible"
        )
    if theta_hat_abs <= two_sided * (1.0 + 1e-12):
        # At the boundary the equation has a double root exactly at the
        # two-sided width; return it rather than asking the solver to find a
        # tangency.
        return two_sided

    def gap(d: float) -> float:
        upper = std_normal_cdf(d / sigma)
        lower = std_normal_cdf((-two_sided - (theta_hat_abs - d)) / sigma)
        return upper - lower - (1.0 - alpha)

    try:
        d = solve_root(gap, one_sided * (1.0 - 1e-6), two_sided * (1.0 + 1e-6), 1e-10)
    except BracketError:
        if theta_hat_abs - two_sided <= 1e-9 * sigma:
            return two_sided
        raise
    return min(max(d, one_sided), two_sided)


def directed_diff_interval(diff: EndpointEstimate, alpha: float) -> DirectedInterval:
    """Directional confidence set for a signed difference estimate."""
    _check_alpha(alpha)
    if diff.sigma == 0.0:
        # Degenerate exact estimate: the directional claim is the value itself.
        if diff.theta_hat == 0.0:
            return DirectedInterval.whole_line()
        return DirectedInterval.lower_bounded(diff.theta_hat)
    two_sided = diff.sigma * std_normal_quantile(1.0 - alpha / 2.0)
    magnitude = abs(diff.theta_hat)
    if magnitude <= two_sided:
        return DirectedInterval.whole_line()
    d = allowance_d(magnitude, diff.sigma, alpha)
    return DirectedInterval.lower_bounded(math.copysign(magnitude - d, diff.theta_hat))


def joint_critical_bound(rho: float, alpha: float) -> float:
    """Critical z-value for the joint max test of two correlated endpoints.

    Solves 1 - bvn_cdf(b, b, rho) = alpha. Decreases from Phi^{-1}(sqrt(1-a))
    at independence to the one-sided z at perfect correlation.
    """
    _check_alpha(alpha)
    if not math.isfinite(rho):
        raise DomainError(f"rho must be finite, got {rho!r}")
    if rho < 0.0:
        raise DomainError("negatively correlated endpoint pairs are not supported")
    if rho > 1.0:
        raise DomainError(f"rho must be in [0, 1], got {rho!r}")
    one_sided = std_normal_quantile(1.0 - alpha)
    independent = std_normal_quantile(math.sqrt(1.0 - alpha))
    if rho == 1.0:
        return one_sided
    if rho == 0.0:
        return independent

    def excess(b: float) -> float:
        return (1.0 - bvn_cdf(b, b, rho)) - alpha

    return solve_root(excess, one_sided - 1e-6, independent + 1e-6, 1e-8)


def transition_decision(
    e1: EndpointEstimate, e2: EndpointEstimate, cfg: PartitionConfig
) -> TransitionDecision:
    """Quadrant-elimination readout deciding whether Phase 3 is supportable.

    The both-null quadrant needs the multiplicity-adjusted joint bound; each
    single-null quadrant is a one-dimensional test at the unadjusted one-sided
    level.
    """
    _require_positive_sigma(e1, "e1")
    _require_positive_sigma(e2, "e2")
    z1 = e1.theta_hat / e1.sigma
    z2 = e2.theta_hat / e2.sigma
    bound = joint_critical_bound(cfg.rho, cfg.alpha)
    one_sided = std_normal_quantile(1.0 - cfg.alpha)

    eliminated = set()
    if max(z1, z2) > bound:
        eliminated.add(Quadrant.NegNeg)
    if z2 > one_sided:
        eliminated.add(Quadrant.PosNeg)
    if z1 > one_sided:
        eliminated.add(Quadrant.NegPos)

    transition = Quadrant.NegNeg in eliminated and (
        Quadrant.PosNeg in eliminated or Quadrant.NegPos in eliminated
    )
    return TransitionDecision(
        eliminated_quadrants=frozenset(eliminated),
        transition=transition,
        per_endpoint_lower=(e1.theta_hat - bound * e1.sigma, e2.theta_hat - bound * e2.sigma),
    )


def combined_lower_bound(
    e1: EndpointEstimate, e2: EndpointEstimate, rho: float, alpha: float
) -> float:
    """One-sided lower confidence bound for the average of the two efficacies."""
    _check_alpha(alpha)
    if not (-1.0 <= rho <= 1.0):
        raise DomainError(f"rho must be in [-1, 1], got {rho!r}")
    theta_avg = (e1.theta_hat + e2.theta_hat) / 2.0
    sigma_avg = (
        math.sqrt(e1.sigma**2 + e2.sigma**2 + 2.0 * rho * e1.sigma * e2.sigma) / 2.0
    )
    return theta_avg - std_normal_quantile(1.0 - alpha) * sigma_avg


def designate_endpoint(
    e1: EndpointEstimate, e2: EndpointEstimate, cfg: PartitionConfig
) -> DesignationDecision:
    """Choose the Phase 3 primary endpoint once both endpoints show efficacy.

    Requires the transition gate with both single-null quadrants eliminated;
    otherwise Inconclusive. Within the efficacy quadrant, a directed interval
    on the endpoint difference decides between the single-endpoint cones and
    the combined (average endpoint) band. Ties break toward Combine.
    """
    _require_positive_sigma(e1, "e1")
    _require_positive_sigma(e2, "e2")
    diff_sigma = math.sqrt(
        max(e1.sigma**2 + e2.sigma**2 - 2.0 * cfg.rho * e1.sigma * e2.sigma, 0.0)
    )
    diff = EndpointEstimate(theta_hat=e2.theta_hat - e1.theta_hat, sigma=diff_sigma)
    interval = directed_diff_interval(diff, cfg.alpha)

    gate = transition_decision(e1, e2, cfg)
    both_positive = {Quadrant.PosNeg, Quadrant.NegPos} <= gate.eliminated_quadrants
    if not (gate.transition and both_positive):
        return DesignationDecision(outcome=Outcome.Inconclusive, diff_interval=interval)

    if not interval.is_whole_line:
        assert interval.lower is not None
        if diff.theta_hat > 0 and interval.lower > cfg.c_md:
            return DesignationDecision(outcome=Outcome.Primary2, diff_interval=interval)
        if diff.theta_hat < 0 and -interval.lower > cfg.c_md:
            return DesignationDecision(outcome=Outcome.Primary1, diff_interval=interval)

    avg_lower = combined_lower_bound(e1, e2, cfg.rho, cfg.alpha)
    return DesignationDecision(
        outcome=Outcome.Combine, diff_interval=interval, avg_lower=avg_lower
    )
