"""Shared EXPEDITION3-shaped document builders for endpoint and CLI tests."""

from __future__ import annotations

import math

WORKED_PLAN = {"gamma": 0.76, "d_phase2": 0.45, "d_phase3": 0.30}


def study_tree() -> dict:
    return {
        "schema_version": 1,
        "outcome_name": "ADCS-iADL",
        "direction": "HigherIsBetter",
        "visit_weeks": [0, 12, 28, 40, 52, 64, 80],
        "milestone_week": 80,
        "arms": {
            "rx": {
                "n_baseline": 1053,
                "mean_baseline": 45.60,
                "sd_baseline": 7.93,
                "n_milestone": 908,
                "mean_milestone": 39.83,
                "sd_milestone": 11.41,
                "n_change": 981,
                "lsmean_change": -6.17,
                "se_change": 0.32,
            },
            "control": {
                "n_baseline": 1063,
                "mean_baseline": 45.37,
                "sd_baseline": 8.14,
                "n_milestone": 896,
                "mean_milestone": 39.01,
                "sd_milestone": 11.86,
                "n_change": 980,
                "lsmean_change": -7.17,
                "se_change": 0.32,
            },
        },
        "published_change_variance": 92.365,
    }


def scenario_tree(scenario_id: str, created_at: str = "2026-01-05T12:00:00+00:00") -> dict:
    return {
        "schema_version": 1,
        "id": scenario_id,
        "created_at": created_at,
        "study": study_tree(),
        "plan": dict(WORKED_PLAN),
        "design": {
            "n_rx": 1000,
            "n_c": 1000,
            "sigma_pooled": math.sqrt(92.365),
            "seed": 20260105,
            "reps": 10000,
        },
        "notes": "worked example",
    }
