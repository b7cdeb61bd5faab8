"""Parsing, validation, and persistence of study summaries and scenarios.

Documents are UTF-8 JSON key-value trees with a fixed, versioned field set.
Parse failures always carry the offending field path (arm fields appear as
"rx.se_change" style paths). Scenarios persist in a single-directory file
store, one JSON document per scenario, written atomically via rename under a
single-writer discipline.
"""

from __future__ import annotations

import json
import math
import os
import threading
import warnings
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .cbq import DiscountPlan, Phase3Design
from .errors import Conflict, DomainError, NotFound, ParseError
from .etz import (
    ArmSummary,
    Direction,
    EtzComponents,
    StudySummary,
    VarianceTriple,
    change_variance_from_se,
)

__all__ = [
    "SCHEMA_VERSION",
    "ScenarioRecord",
    "ScenarioStore",
    "parse_scenario_record",
    "parse_study_summary",
    "serialize_scenario_record",
    "serialize_study_summary",
    "study_to_variance_triple",
]

SCHEMA_VERSION = 1

_ARM_REQUIRED = (
    "n_baseline",
    "mean_baseline",
    "sd_baseline",
    "n_milestone",
    "mean_milestone",
    "sd_milestone",
    "lsmean_change",
    "se_change",
)
_ARM_OPTIONAL = ("n_change",)


def _require(tree: dict, key: str, path: str) -> object:
    if not isinstance(tree, dict):
        raise ParseError(path.rsplit(".", 1)[0] if "." in path else path, "expected an object")
    if key not in tree:
        raise ParseError(path, "missing field")
    return tree[key]


def _as_int(value: object, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(path, f"expected an integer, got {value!r}")
    return value


def _as_number(value: object, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ParseError(path, f"expected a finite number, got {value!r}")
    return float(value)


def _as_text(value: object, path: str) -> str:
    if not isinstance(value, str):
        raise ParseError(path, f"expected text, got {value!r}")
    return value


def _reject_unknown(tree: dict, allowed: tuple[str, ...], prefix: str) -> None:
    for key in tree:
        if key not in allowed:
            raise ParseError(f"{prefix}{key}", "unknown field")


def _parse_arm(tree: object, arm: str) -> ArmSummary:
    if not isinstance(tree, dict):
        raise ParseError(arm, "expected an object")
    _reject_unknown(tree, _ARM_REQUIRED + _ARM_OPTIONAL, f"{arm}.")
    values: dict[str, object] = {}
    for key in _ARM_REQUIRED:
        raw = _require(tree, key, f"{arm}.{key}")
        if key.startswith("n_"):
            values[key] = _as_int(raw, f"{arm}.{key}")
        else:
            values[key] = _as_number(raw, f"{arm}.{key}")
    if "n_change" in tree:
        values["n_change"] = _as_int(tree["n_change"], f"{arm}.n_change")
    try:
        return ArmSummary(**values)  # type: ignore[arg-type]
    except DomainError as exc:
        raise ParseError(arm, str(exc)) from exc


def parse_study_summary(document: str) -> StudySummary:
    """Parse and validate a study-summary JSON document."""
    try:
        tree = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"document is not well-formed JSON: {exc}") from exc
    return study_summary_from_tree(tree)


def study_summary_from_tree(tree: object) -> StudySummary:
    """Validate an already-decoded study-summary tree."""
    if not isinstance(tree, dict):
        raise ParseError("", "expected a top-level object")
    allowed = (
        "schema_version",
        "outcome_name",
        "direction",
        "visit_weeks",
        "milestone_week",
        "arms",
        "published_change_variance",
    )
    _reject_unknown(tree, allowed, "")
    version = _as_int(_require(tree, "schema_version", "schema_version"), "schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError("schema_version", f"unsupported version {version!r}")

    outcome_name = _as_text(_require(tree, "outcome_name", "outcome_name"), "outcome_name")
    raw_direction = _as_text(_require(tree, "direction", "direction"), "direction")
    try:
        direction = Direction(raw_direction)
    except ValueError as exc:
        raise ParseError("direction", f"unknown direction {raw_direction!r}") from exc

    raw_weeks = _require(tree, "visit_weeks", "visit_weeks")
    if not isinstance(raw_weeks, list) or not raw_weeks:
        raise ParseError("visit_weeks", "expected a non-empty array")
    weeks = tuple(_as_number(w, "visit_weeks") for w in raw_weeks)
    milestone = _as_number(_require(tree, "milestone_week", "milestone_week"), "milestone_week")

    arms = _require(tree, "arms", "arms")
    if not isinstance(arms, dict):
        raise ParseError("arms", "expected an object")
    _reject_unknown(arms, ("rx", "control"), "")
    rx = _parse_arm(_require(arms, "rx", "rx"), "rx")
    control = _parse_arm(_require(arms, "control", "control"), "control")

    published = None
    if "published_change_variance" in tree:
        published = _as_number(
            tree["published_change_variance"], "published_change_variance"
        )

    try:
        return StudySummary(
            outcome_name=outcome_name,
            direction=direction,
            rx=rx,
            control=control,
            milestone_week=milestone,
            visit_weeks=weeks,
            published_change_variance=published,
        )
    except DomainError as exc:
        # Cross-field schedule invariants all hinge on the milestone/schedule
        # pair; attribute them there.
        path = "milestone_week" if "milestone" in str(exc) else "visit_weeks"
        raise ParseError(path, str(exc)) from exc


def _arm_to_tree(arm: ArmSummary) -> dict:
    tree: dict[str, object] = {key: getattr(arm, key) for key in _ARM_REQUIRED}
    if arm.n_change is not None:
        tree["n_change"] = arm.n_change
    return tree


def study_summary_to_tree(s: StudySummary) -> dict:
    tree: dict[str, object] = {
        "schema_version": SCHEMA_VERSION,
        "outcome_name": s.outcome_name,
        "direction": s.direction.value,
        "visit_weeks": list(s.visit_weeks),
        "milestone_week": s.milestone_week,
        "arms": {"rx": _arm_to_tree(s.rx), "control": _arm_to_tree(s.control)},
    }
    if s.published_change_variance is not None:
        tree["published_change_variance"] = s.published_change_variance
    return tree


def serialize_study_summary(s: StudySummary) -> str:
    return json.dumps(study_summary_to_tree(s), indent=2) + "\n"


def study_to_variance_triple(s: StudySummary, prefer_published: bool = True) -> VarianceTriple:
    """Convert published arm summaries to the baseline/milestone/change triple.

    Baseline and milestone variances pool the squared SDs across arms with
    (n - 1) weights. The change variance uses the published value when the
    document carries one (and ``prefer_published``); otherwise it is
    reconstructed from the standard errors. When both are available and
    disagree materially the mismatch is worth surfacing, since it usually
    means the publication's change analysis was model-based.
    """

    def pooled(v_rx: float, n_rx: int, v_c: float, n_c: int) -> float:
        return ((n_rx - 1) * v_rx + (n_c - 1) * v_c) / (n_rx + n_c - 2)

    var_baseline = pooled(
        s.rx.sd_baseline**2, s.rx.n_baseline, s.control.sd_baseline**2, s.control.n_baseline
    )
    var_milestone = pooled(
        s.rx.sd_milestone**2,
        s.rx.n_milestone,
        s.control.sd_milestone**2,
        s.control.n_milestone,
    )

    derived = None
    if s.rx.se_change > 0 and s.control.se_change > 0:
        derived = change_variance_from_se(s.rx, s.control)
    published = s.published_change_variance

    if published is not None and derived is not None:
        gap = abs(derived - published) / max(published, 1e-300)
        if gap > 0.05:
            warnings.warn(
                f"SE-derived change variance {derived:.4g} differs from the published "
                f"value {published:.4g} by {100 * gap:.1f}%",
                UserWarning,
                stacklevel=2,
            )

    if prefer_published and published is not None:
        var_change = published
    elif derived is not None:
        var_change = derived
    else:
        raise DomainError(
            "no change variance available: document has neither usable standard errors "
            "nor a published value"
        )
    return VarianceTriple(
        var_baseline=var_baseline, var_milestone=var_milestone, var_change=var_change
    )


@dataclass(frozen=True)
class ScenarioRecord:
    """A named what-if: study plus plan and design, with an audit timestamp."""

    id: str
    created_at: datetime
    study: StudySummary
    plan: DiscountPlan
    design: Phase3Design
    notes: str
    etz_override: EtzComponents | None = None

    def __post_init__(self) -> None:
        if not self.id or not all(c.isalnum() or c in "._-" for c in self.id):
            raise DomainError(
                f"scenario id must be non-empty and use only letters, digits, '.', '_', '-': "
                f"{self.id!r}"
            )
        if not isinstance(self.created_at, datetime):
            raise DomainError("created_at must be a datetime")


def _record_to_tree(record: ScenarioRecord) -> dict:
    tree: dict[str, object] = {
        "schema_version": SCHEMA_VERSION,
        "id": record.id,
        "created_at": record.created_at.isoformat(),
        "study": study_summary_to_tree(record.study),
        "plan": {
            "gamma": record.plan.gamma,
            "d_phase2": record.plan.d_phase2,
            "d_phase3": record.plan.d_phase3,
        },
        "design": {
            "n_rx": record.design.n_rx,
            "n_c": record.design.n_c,
            "sigma_pooled": record.design.sigma_pooled,
            "seed": record.design.seed,
            "reps": record.design.reps,
        },
        "notes": record.notes,
    }
    if record.etz_override is not None:
        tree["etz_override"] = {
            "var_z": record.etz_override.var_z,
            "var_e": record.etz_override.var_e,
            "var_traj": record.etz_override.var_traj,
        }
    return tree


def _record_from_tree(tree: object) -> ScenarioRecord:
    if not isinstance(tree, dict):
        raise ParseError("", "expected a top-level object")
    allowed = (
        "schema_version",
        "id",
        "created_at",
        "study",
        "plan",
        "design",
        "notes",
        "etz_override",
    )
    _reject_unknown(tree, allowed, "")
    version = _as_int(_require(tree, "schema_version", "schema_version"), "schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError("schema_version", f"unsupported version {version!r}")
    record_id = _as_text(_require(tree, "id", "id"), "id")
    raw_created = _as_text(_require(tree, "created_at", "created_at"), "created_at")
    try:
        created_at = datetime.fromisoformat(raw_created)
    except ValueError as exc:
        raise ParseError("created_at", f"not an ISO-8601 timestamp: {raw_created!r}") from exc

    try:
        study = study_summary_from_tree(_require(tree, "study", "study"))
    except ParseError as exc:
        raise ParseError(
            f"study.{exc.field_path}" if exc.field_path else "study", exc.reason
        ) from exc

    plan_tree = _require(tree, "plan", "plan")
    if not isinstance(plan_tree, dict):
        raise ParseError("plan", "expected an object")
    _reject_unknown(plan_tree, ("gamma", "d_phase2", "d_phase3"), "plan.")
    try:
        plan = DiscountPlan(
            gamma=_as_number(_require(plan_tree, "gamma", "plan.gamma"), "plan.gamma"),
            d_phase2=_as_number(
                _require(plan_tree, "d_phase2", "plan.d_phase2"), "plan.d_phase2"
            ),
            d_phase3=_as_number(
                _require(plan_tree, "d_phase3", "plan.d_phase3"), "plan.d_phase3"
            ),
        )
    except DomainError as exc:
        raise ParseError("plan", str(exc)) from exc

    design_tree = _require(tree, "design", "design")
    if not isinstance(design_tree, dict):
        raise ParseError("design", "expected an object")
    _reject_unknown(design_tree, ("n_rx", "n_c", "sigma_pooled", "seed", "reps"), "design.")
    try:
        design = Phase3Design(
            n_rx=_as_int(_require(design_tree, "n_rx", "design.n_rx"), "design.n_rx"),
            n_c=_as_int(_require(design_tree, "n_c", "design.n_c"), "design.n_c"),
            sigma_pooled=_as_number(
                _require(design_tree, "sigma_pooled", "design.sigma_pooled"),
                "design.sigma_pooled",
            ),
            seed=_as_int(_require(design_tree, "seed", "design.seed"), "design.seed"),
            reps=_as_int(design_tree.get("reps", 10000), "design.reps"),
        )
    except DomainError as exc:
        raise ParseError("design", str(exc)) from exc

    notes = _as_text(_require(tree, "notes", "notes"), "notes")

    etz_override = None
    if "etz_override" in tree:
        override_tree = tree["etz_override"]
        if not isinstance(override_tree, dict):
            raise ParseError("etz_override", "expected an object")
        _reject_unknown(override_tree, ("var_z", "var_e", "var_traj"), "etz_override.")
        try:
            etz_override = EtzComponents(
                var_z=_as_number(
                    _require(override_tree, "var_z", "etz_override.var_z"),
                    "etz_override.var_z",
                ),
                var_e=_as_number(
                    _require(override_tree, "var_e", "etz_override.var_e"),
                    "etz_override.var_e",
                ),
                var_traj=_as_number(
                    _require(override_tree, "var_traj", "etz_override.var_traj"),
                    "etz_override.var_traj",
                ),
            )
        except DomainError as exc:
            raise ParseError("etz_override", str(exc)) from exc

    try:
        return ScenarioRecord(
            id=record_id,
            created_at=created_at,
            study=study,
            plan=plan,
            design=design,
            notes=notes,
            etz_override=etz_override,
        )
    except DomainError as exc:
        raise ParseError("id", str(exc)) from exc


def parse_scenario_record(document: str) -> ScenarioRecord:
    """Parse and validate a scenario JSON document."""
    try:
        tree = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"document is not well-formed JSON: {exc}") from exc
    return _record_from_tree(tree)


def serialize_scenario_record(record: ScenarioRecord) -> str:
    return json.dumps(_record_to_tree(record), indent=2) + "\n"


class ScenarioStore:
    """Single-directory scenario store with atomic write-rename persistence."""

    def __init__(self, directory: str | Path):
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()

    def _path(self, scenario_id: str) -> Path:
        return self._dir / f"{scenario_id}.json"

    def save_scenario(self, record: ScenarioRecord) -> None:
        with self._write_lock:
            target = self._path(record.id)
            if target.exists():
                raise Conflict(f"scenario {record.id!r} already exists")
            payload = json.dumps(_record_to_tree(record), indent=2) + "\n"
            scratch = target.with_suffix(".json.tmp")
            scratch.write_text(payload, encoding="utf-8")
            os.replace(scratch, target)

    def load_scenario(self, scenario_id: str) -> ScenarioRecord:
        target = self._path(scenario_id)
        if not target.exists():
            raise NotFound(f"scenario {scenario_id!r} does not exist")
        try:
            tree = json.loads(target.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError("", f"stored scenario {scenario_id!r} is corrupted: {exc}") from exc
        record = _record_from_tree(tree)
        if record.id != scenario_id:
            raise ParseError("id", f"stored id {record.id!r} does not match {scenario_id!r}")
        return record

    def replace_scenario(self, record: ScenarioRecord) -> bool:
        """Upsert; returns True when a scenario was overwritten."""
        with self._write_lock:
            target = self._path(record.id)
            existed = target.exists()
            payload = json.dumps(_record_to_tree(record), indent=2) + "\n"
            scratch = target.with_suffix(".json.tmp")
            scratch.write_text(payload, encoding="utf-8")
            os.replace(scratch, target)
            return existed

    def list_scenarios(self) -> list[str]:
        records = [
            self.load_scenario(path.stem) for path in sorted(self._dir.glob("*.json"))
        ]
        records.sort(key=lambda r: (r.created_at, r.id))
        return [r.id for r in records]
