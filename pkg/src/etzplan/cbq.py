"""Confidently Bounded Quantile decision pipeline.

A Phase 2 readout is discounted twice before it may justify a confirmatory
study: once for the chance the Phase 2 efficacy estimate was optimistic
(Confident Efficacy, a one-sided t lower limit), and once for the chance the
confirmatory study underperforms conditional on that efficacy (the CBQ, a
normal lower quantile of the predicted Phase 3 estimate). The product of the
two retained confidences is the planned probability that both studies read
out in the efficacious direction. A positive CBQ recommends transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InfeasiblePlan
from .etz import Direction, EtzComponents, StudySummary, pooled_change_sd
from .numerics import RngStream, std_normal_quantile, student_t_quantile

__all__ = [
    "DiscountPlan",
    "ConfidentEfficacy",
    "Phase3Design",
    "DecisionReport",
    "complete_discount_plan",
    "confident_efficacy",
    "cbq_closed_form",
    "cbq_monte_carlo",
    "min_n_for_positive_cbq",
    "classical_sample_size",
    "transition_assessment",
]

_MC_CHUNK = 1 << 16
_MC_TAG = 0x63627164  # stream label for the predictive draws ("cbqd")


def _check_discount(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 <= value < 0.5):
        raise DomainError(f"{name} must be in [0, 0.5), got {value!r}")
    return value


@dataclass(frozen=True)
class DiscountPlan:
    """Success confidence gamma split into the two stage discounts.

    The retained confidences are d_phase2 + 50% for the feeder study and
    d_phase3 + 50% for the confirmatory study given the feeder; their product
    is gamma.
    """

    gamma: float
    d_phase2: float
    d_phase3: float

    def __post_init__(self) -> None:
        if not (0.0 < self.gamma < 1.0):
            raise DomainError(f"gamma must be in (0, 1), got {self.gamma!r}")
        _check_discount(self.d_phase2, "d_phase2")
        _check_discount(self.d_phase3, "d_phase3")
        product = (self.d_phase2 + 0.5) * (self.d_phase3 + 0.5)
        if abs(product - self.gamma) > 1e-9:
            raise DomainError(
                f"discounts are inconsistent: (d_phase2+0.5)*(d_phase3+0.5) = {product!r} "
                f"but gamma = {self.gamma!r}"
            )


@dataclass(frozen=True)
class ConfidentEfficacy:
    """One-sided lower confidence limit on the feeder study's efficacy."""

    value: float
    level: float
    df: int
    se_pooled: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise DomainError(f"value must be finite, got {self.value!r}")
        if not (0.5 <= self.level < 1.0):
            raise DomainError(f"level must be in [0.5, 1), got {self.level!r}")
        if not isinstance(self.df, int) or self.df < 1:
            raise DomainError(f"df must be a positive integer, got {self.df!r}")
        if not math.isfinite(self.se_pooled) or self.se_pooled <= 0:
            raise DomainError(f"se_pooled must be > 0, got {self.se_pooled!r}")


@dataclass(frozen=True)
class Phase3Design:
    """Confirmatory study layout: per-arm sizes and the change-score SD.

    ``sigma_pooled`` is normally ``pooled_change_sd`` of the decomposed
    components; zero is tolerated only for degenerate what-ifs.
    """

    n_rx: int
    n_c: int
    sigma_pooled: float
    seed: int
    reps: int = 10000

    def __post_init__(self) -> None:
        for name in ("n_rx", "n_c"):
            count = getattr(self, name)
            if not isinstance(count, int) or count < 2:
                raise DomainError(f"{name} must be an integer >= 2, got {count!r}")
        if not math.isfinite(self.sigma_pooled) or self.sigma_pooled < 0:
            raise DomainError(f"sigma_pooled must be >= 0, got {self.sigma_pooled!r}")
        if not isinstance(self.reps, int) or self.reps < 1000:
            raise DomainError(f"reps must be an integer >= 1000, got {self.reps!r}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class DecisionReport:
    """Full audit trail of one transition assessment."""

    confident_efficacy: ConfidentEfficacy
    cbq: float
    cbq_monte_carlo: float
    transition_recommended: bool
    plan: DiscountPlan
    design: Phase3Design
    quantile_histogram: tuple[tuple[float, int], ...] = field(repr=False)

    def __post_init__(self) -> None:
        if self.transition_recommended != (self.cbq > 0):
            raise DomainError("transition_recommended must equal (cbq > 0)")


def complete_discount_plan(
    gamma: float,
    d_phase2: float | None = None,
    d_phase3: float | None = None,
) -> DiscountPlan:
    """Solve (d_phase2+0.5)(d_phase3+0.5) = gamma for the unknown discount."""
    if not (0.0 < gamma < 1.0):
        raise DomainError(f"gamma must be in (0, 1), got {gamma!r}")
    if (d_phase2 is None) == (d_phase3 is None):
        raise DomainError("provide exactly one of d_phase2 or d_phase3")
    known = d_phase2 if d_phase2 is not None else d_phase3
    known = _check_discount(known, "known discount")
    unknown = gamma / (known + 0.5) - 0.5
    if not (0.0 <= unknown < 0.5):
        raise InfeasiblePlan(
            f"gamma = {gamma!r} with a discount of {known!r} needs a partner discount of "
            f"{unknown:.6g}, outside [0, 0.5)"
        )
    if d_phase2 is not None:
        return DiscountPlan(gamma=gamma, d_phase2=known, d_phase3=unknown)
    return DiscountPlan(gamma=gamma, d_phase2=unknown, d_phase3=known)


def confident_efficacy(
    theta_bar: float,
    se_rx: float,
    se_c: float,
    n_rx: int,
    n_c: int,
    d_phase2: float,
    direction: Direction = Direction.HigherIsBetter,
) -> ConfidentEfficacy:
    """Lower (d_phase2+50%)-confidence limit on the feeder efficacy.

    ``se_pooled`` is the standard error of the between-arm difference,
    sqrt(se_rx^2 + se_c^2); the t reference uses the change-analysis sample
    sizes. LowerIsBetter outcomes enter with the efficacy sign flipped so the
    limit always reads "benefit at least this large".
    """
    _check_discount(d_phase2, "d_phase2")
    if not math.isfinite(theta_bar):
        raise DomainError(f"theta_bar must be finite, got {theta_bar!r}")
    for name, se in (("se_rx", se_rx), ("se_c", se_c)):
        if not math.isfinite(se) or se <= 0:
            raise DomainError(f"{name} must be > 0, got {se!r}")
    for name, count in (("n_rx", n_rx), ("n_c", n_c)):
        if not isinstance(count, int) or count < 2:
            raise DomainError(f"{name} must be an integer >= 2, got {count!r}")
    if Direction(direction) is Direction.LowerIsBetter:
        theta_bar = -theta_bar
    level = d_phase2 + 0.5
    df = n_rx + n_c - 2
    se_pooled = math.sqrt(se_rx**2 + se_c**2)
    value = theta_bar - student_t_quantile(level, df) * se_pooled
    return ConfidentEfficacy(value=value, level=level, df=df, se_pooled=se_pooled)


def _phase3_scale(design: Phase3Design) -> float:
    return design.sigma_pooled * math.sqrt(1.0 / design.n_rx + 1.0 / design.n_c)


def cbq_closed_form(L: ConfidentEfficacy, design: Phase3Design, d_phase3: float) -> float:
    """Lower (d_phase3+50%)-quantile of the predicted confirmatory estimate."""
    _check_discount(d_phase3, "d_phase3")
    return L.value - std_normal_quantile(d_phase3 + 0.5) * _phase3_scale(design)


def _mc_draws(L: ConfidentEfficacy, design: Phase3Design) -> np.ndarray:
    """Predictive draws in fixed chunks keyed by chunk index.

    Chunking makes the draw multiset independent of how a worker pool splits
    the work: chunk i always comes from the stream derived with (tag, i).
    """
    scale = _phase3_scale(design)
    base = RngStream(design.seed, 0)
    parts = []
    produced = 0
    index = 0
    while produced < design.reps:
        size = min(_MC_CHUNK, design.reps - produced)
        z = base.derive(_MC_TAG, index).normals(size)
        parts.append(L.value + scale * z)
        produced += size
        index += 1
    return np.concatenate(parts)


def cbq_monte_carlo(
    L: ConfidentEfficacy, design: Phase3Design, d_phase3: float
) -> tuple[float, tuple[tuple[float, int], ...]]:
    """Monte-Carlo CBQ: nearest-rank lower quantile of predictive draws.

    Returns the quantile and a 50-bin histogram of the draws as
    (bin center, count) pairs for display.
    """
    _check_discount(d_phase3, "d_phase3")
    draws = np.sort(_mc_draws(L, design))
    q = 0.5 - d_phase3
    rank = max(1, math.ceil(q * design.reps))
    cbq = float(draws[rank - 1])
    counts, edges = np.histogram(draws, bins=50)
    centers = (edges[:-1] + edges[1:]) / 2.0
    histogram = tuple((float(c), int(n)) for c, n in zip(centers, counts))
    return cbq, histogram


def min_n_for_positive_cbq(
    L: ConfidentEfficacy,
    sigma_pooled: float,
    d_phase3: float,
    allocation_ratio: float = 1.0,
) -> int:
    """Smallest per-arm n making the closed-form CBQ positive.

    Solves the analytic crossing n = (z*sigma/L)^2 (1 + 1/ratio), then walks
    the integer neighborhood so the returned n is the true smallest with
    cbq > 0 under n_rx = n, n_c = round(ratio * n). Never below 2 per arm.
    """
    _check_discount(d_phase3, "d_phase3")
    if not math.isfinite(sigma_pooled) or sigma_pooled < 0:
        raise DomainError(f"sigma_pooled must be >= 0, got {sigma_pooled!r}")
    if not math.isfinite(allocation_ratio) or allocation_ratio <= 0:
        raise DomainError(f"allocation_ratio must be > 0, got {allocation_ratio!r}")
    if L.value <= 0:
        raise InfeasiblePlan(
            "Confident Efficacy is not positive; no sample size can make the CBQ positive"
        )

    z = std_normal_quantile(d_phase3 + 0.5)

    def cbq_at(n: int) -> float:
        n_c = round(allocation_ratio * n)
        if n_c < 2:
            return -math.inf
        return L.value - z * sigma_pooled * math.sqrt(1.0 / n + 1.0 / n_c)

    if z == 0.0 or sigma_pooled == 0.0:
        return 2

    estimate = (z * sigma_pooled / L.value) ** 2 * (1.0 + 1.0 / allocation_ratio)
    n = max(2, math.ceil(estimate))
    while cbq_at(n) <= 0:
        n += 1
    while n > 2 and cbq_at(n - 1) > 0:
        n -= 1
    return n


def classical_sample_size(alpha: float, beta: float, sigma: float, delta: float) -> int:
    """Conventional two-sided per-arm size: 2 (z_{1-a/2} + z_{1-b})^2 (sigma/delta)^2.

    This is the only place an upper-tail convention appears; both z terms are
    written as lower quantiles of the complementary levels.
    """
    for name, p in (("alpha", alpha), ("beta", beta)):
        if not (0.0 < p < 1.0):
            raise DomainError(f"{name} must be in (0, 1), got {p!r}")
    if not math.isfinite(sigma) or sigma <= 0:
        raise DomainError(f"sigma must be > 0, got {sigma!r}")
    if not math.isfinite(delta) or delta == 0:
        raise DomainError(f"delta must be nonzero, got {delta!r}")
    z_alpha = std_normal_quantile(1.0 - alpha / 2.0)
    z_beta = std_normal_quantile(1.0 - beta)
    return math.ceil(2.0 * (z_alpha + z_beta) ** 2 * (sigma / delta) ** 2)


def transition_assessment(
    study: StudySummary,
    etz: EtzComponents,
    plan: DiscountPlan,
    design: Phase3Design,
) -> DecisionReport:
    """End-to-end assessment: feeder summary to transition recommendation.

    The design's sigma_pooled must match the change-score SD implied by the
    decomposed components; the efficacy estimate is the between-arm contrast
    of the published change scores, sign-canonicalized by outcome direction.
    """
    implied = pooled_change_sd(etz)
    if not math.isclose(design.sigma_pooled, implied, rel_tol=1e-6, abs_tol=1e-12):
        raise DomainError(
            f"design.sigma_pooled = {design.sigma_pooled!r} does not match the value "
            f"{implied!r} implied by the variance components"
        )
    theta_bar = study.rx.lsmean_change - study.control.lsmean_change
    L = confident_efficacy(
        theta_bar=theta_bar,
        se_rx=study.rx.se_change,
        se_c=study.control.se_change,
        n_rx=study.rx.resolved_n_change,
        n_c=study.control.resolved_n_change,
        d_phase2=plan.d_phase2,
        direction=study.direction,
    )
    closed = cbq_closed_form(L, design, plan.d_phase3)
    mc, histogram = cbq_monte_carlo(L, design, plan.d_phase3)
    return DecisionReport(
        confident_efficacy=L,
        cbq=closed,
        cbq_monte_carlo=mc,
        transition_recommended=closed > 0,
        plan=plan,
        design=design,
        quantile_histogram=histogram,
    )
