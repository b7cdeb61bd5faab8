"""Shared fixtures: the published Alzheimer's study used across the suite."""

import pytest

from etzplan.etz import ArmSummary, Direction, EtzComponents, StudySummary, VarianceTriple


@pytest.fixture()
def expedition3_study() -> StudySummary:
    """ADCS-iADL arm summaries as published (mean +/- SD, LS-mean +/- SE)."""
    return StudySummary(
        outcome_name="ADCS-iADL",
        direction=Direction.HigherIsBetter,
        rx=ArmSummary(
            n_baseline=1053,
            mean_baseline=45.60,
            sd_baseline=7.93,
            n_milestone=908,
            mean_milestone=39.83,
            sd_milestone=11.41,
            lsmean_change=-6.17,
            se_change=0.32,
            n_change=981,
        ),
        control=ArmSummary(
            n_baseline=1063,
            mean_baseline=45.37,
            sd_baseline=8.14,
            n_milestone=896,
            mean_milestone=39.01,
            sd_milestone=11.86,
            lsmean_change=-7.17,
            se_change=0.32,
            n_change=980,
        ),
        milestone_week=80,
        visit_weeks=(0, 12, 28, 40, 52, 64, 80),
        published_change_variance=92.365,
    )


@pytest.fixture()
def iadl_triple() -> VarianceTriple:
    """Published baseline/milestone/change variances for ADCS-iADL."""
    return VarianceTriple(var_baseline=64.580, var_milestone=135.389, var_change=92.365)


@pytest.fixture()
def iadl_etz() -> EtzComponents:
    """Published decomposed components for ADCS-iADL."""
    return EtzComponents(var_z=53.802, var_e=10.778, var_traj=70.809)
