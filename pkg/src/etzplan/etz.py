"""ETZ variance decomposition.

Published longitudinal trials report three variances: at baseline, at the
milestone visit, and of the change score. Under a shared-intercept model with
independent measurement error this triple identifies three latent components:
a random intercept Z common to both visits, an i.i.d. per-visit measurement
error E, and a random trajectory displacement Traj at the milestone. This
module recovers those components and provides the conversion helpers that
turn published arm-level summaries into the inputs the decomposition needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DecompositionError, DomainError

__all__ = [
    "VarianceTriple",
    "EtzComponents",
    "ArmSummary",
    "Direction",
    "StudySummary",
    "decompose_etz",
    "compose_variances",
    "variances_from_r_matrix",
    "change_variance_from_se",
    "pooled_change_sd",
]


def _require_finite_nonneg(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class VarianceTriple:
    """The three variances a publication reports, in outcome units squared."""

    var_baseline: float
    var_milestone: float
    var_change: float

    def __post_init__(self) -> None:
        for name in ("var_baseline", "var_milestone", "var_change"):
            object.__setattr__(self, name, _require_finite_nonneg(getattr(self, name), name))


@dataclass(frozen=True)
class EtzComponents:
    """Latent variance components: intercept Z, error E (per visit), trajectory."""

    var_z: float
    var_e: float
    var_traj: float

    def __post_init__(self) -> None:
        for name in ("var_z", "var_e", "var_traj"):
            object.__setattr__(self, name, _require_finite_nonneg(getattr(self, name), name))


@dataclass(frozen=True)
class ArmSummary:
    """Published per-arm summary statistics for one treatment arm.

    ``n_change`` may be omitted; consumers then use the rounded average of the
    baseline and milestone sample sizes, which is how change-score analyses
    are typically footnoted.
    """

    n_baseline: int
    mean_baseline: float
    sd_baseline: float
    n_milestone: int
    mean_milestone: float
    sd_milestone: float
    lsmean_change: float
    se_change: float
    n_change: int | None = None

    def __post_init__(self) -> None:
        for name in ("n_baseline", "n_milestone"):
            count = getattr(self, name)
            if not isinstance(count, int) or count < 2:
                raise DomainError(f"{name} must be an integer >= 2, got {count!r}")
        if self.n_change is not None and (not isinstance(self.n_change, int) or self.n_change < 2):
            raise DomainError(f"n_change must be an integer >= 2, got {self.n_change!r}")
        for name in ("sd_baseline", "sd_milestone", "se_change"):
            _require_finite_nonneg(getattr(self, name), name)
        for name in ("mean_baseline", "mean_milestone", "lsmean_change"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite, got {getattr(self, name)!r}")

    @property
    def resolved_n_change(self) -> int:
        if self.n_change is not None:
            return self.n_change
        return round((self.n_baseline + self.n_milestone) / 2)


class Direction(str, Enum):
    """Whether larger outcome values indicate benefit."""

    HigherIsBetter = "HigherIsBetter"
    LowerIsBetter = "LowerIsBetter"


@dataclass(frozen=True)
class StudySummary:
    """A two-arm study as published: arm summaries plus the visit schedule."""

    outcome_name: str
    direction: Direction
    rx: ArmSummary
    control: ArmSummary
    milestone_week: float
    visit_weeks: tuple[float, ...]
    published_change_variance: float | None = field(default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "direction", Direction(self.direction))
        weeks = tuple(float(w) for w in self.visit_weeks)
        object.__setattr__(self, "visit_weeks", weeks)
        if len(weeks) < 2:
            raise DomainError("visit_weeks needs at least a baseline and one follow-up")
        if weeks[0] != 0.0:
            raise DomainError(f"visit_weeks must start at 0, got {weeks[0]!r}")
        if any(b <= a for a, b in zip(weeks, weeks[1:])):
            raise DomainError(f"visit_weeks must be strictly increasing, got {weeks!r}")
        milestone = float(self.milestone_week)
        object.__setattr__(self, "milestone_week", milestone)
        if milestone < 0:
            raise DomainError(f"milestone_week must be >= 0, got {milestone!r}")
        if milestone != weeks[-1]:
            raise DomainError(
                f"milestone_week must equal the last visit week {weeks[-1]!r}, got {milestone!r}"
            )
        if self.published_change_variance is not None:
            _require_finite_nonneg(self.published_change_variance, "published_change_variance")


def decompose_etz(v: VarianceTriple) -> EtzComponents:
    """Recover (Var(Z), Var(E), Var(Traj)) from the published variance triple.

    Raises :class:`DecompositionError` naming the first component that comes
    out negative; that signals inconsistent inputs or a violated independence
    assumption between intercept and trajectory, and is never clamped away.
    """
    # Negatives within a few ulps of the input scale are cancellation noise
    # from the subtractions, not model violations; anything larger raises.
    noise = 1e-12 * (v.var_baseline + v.var_milestone + v.var_change)

    def checked(name: str, value: float) -> float:
        if value < -noise:
            raise DecompositionError(name, value)
        return max(value, 0.0)

    var_z = checked("var_z", (v.var_baseline + v.var_milestone - v.var_change) / 2.0)
    var_e = checked("var_e", v.var_baseline - var_z)
    var_traj = checked("var_traj", v.var_change - 2.0 * var_e)
    return EtzComponents(var_z=var_z, var_e=var_e, var_traj=var_traj)


def compose_variances(c: EtzComponents) -> VarianceTriple:
    """Forward map: latent components back to the published variance triple."""
    return VarianceTriple(
        var_baseline=c.var_z + c.var_e,
        var_milestone=c.var_z + c.var_traj + c.var_e,
        var_change=c.var_traj + 2.0 * c.var_e,
    )


def variances_from_r_matrix(r11: float, rmm: float, r1m: float) -> VarianceTriple:
    """Build the variance triple from mixed-model R-matrix entries.

    ``r11`` and ``rmm`` are the marginal variances at baseline and milestone,
    ``r1m`` their covariance; Var(change) follows as r11 + rmm - 2*r1m.
    """
    r11 = _require_finite_nonneg(r11, "r11")
    rmm = _require_finite_nonneg(rmm, "rmm")
    r1m = float(r1m)
    if not math.isfinite(r1m):
        raise DomainError(f"r1m must be finite, got {r1m!r}")
    bound = math.sqrt(r11 * rmm)
    if abs(r1m) > bound * (1.0 + 1e-12) + 1e-300:
        raise DomainError(
            f"|r1m| = {abs(r1m):.6g} exceeds the Cauchy-Schwarz bound sqrt(r11*rmm) = {bound:.6g}"
        )
    return VarianceTriple(
        var_baseline=r11,
        var_milestone=rmm,
        var_change=r11 + rmm - 2.0 * r1m,
    )


def change_variance_from_se(rx: ArmSummary, control: ArmSummary) -> float:
    """Pooled change-score variance reconstructed from published standard errors.

    Each arm's variance is se_change**2 * n_change; arms are pooled with
    (n - 1) weights. Use this when a publication reports the change score only
    as an LS-mean with standard error.
    """
    variances = []
    counts = []
    for name, arm in (("rx", rx), ("control", control)):
        if arm.se_change <= 0:
            raise DomainError(f"{name}.se_change must be > 0 to reconstruct a variance")
        n = arm.resolved_n_change
        if n < 2:
            raise DomainError(f"{name} change-score sample size must be >= 2, got {n!r}")
        variances.append(arm.se_change**2 * n)
        counts.append(n)
    n_rx, n_c = counts
    return ((n_rx - 1) * variances[0] + (n_c - 1) * variances[1]) / (n_rx + n_c - 2)


def pooled_change_sd(c: EtzComponents) -> float:
    """SD of the change score implied by the components: sqrt(var_traj + 2*var_e)."""
    return math.sqrt(c.var_traj + 2.0 * c.var_e)
