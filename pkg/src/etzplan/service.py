"""Stateless HTTP facade over the decision engine.

Every computation endpoint is a pure function of its request body (all
randomness is seed-parameterized), so repeated identical requests produce
byte-identical responses. The only state is the scenario store directory.

Configuration comes from the environment:

- ``ETZPLAN_SCENARIO_DIR``: scenario store directory (default ``scenarios``)
- ``ETZPLAN_PORT`` / ``ETZPLAN_HOST``: listen address for ``python3 -m
  etzplan.service`` (defaults 8000 / 127.0.0.1)
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from starlette.exceptions import HTTPException as StarletteHTTPException

from .cbq import (
    DecisionReport,
    DiscountPlan,
    Phase3Design,
    complete_discount_plan,
    transition_assessment,
)
from .confset import (
    DesignationDecision,
    EndpointEstimate,
    PartitionConfig,
    Quadrant,
    TransitionDecision,
    designate_endpoint,
    transition_decision,
)
from .errors import EtzError, ParseError, TooLarge
from .etz import (
    EtzComponents,
    StudySummary,
    VarianceTriple,
    decompose_etz,
    pooled_change_sd,
)
from .ingest import (
    ScenarioRecord,
    ScenarioStore,
    _as_int,
    _as_number,
    _record_from_tree,
    _record_to_tree,
    _reject_unknown,
    _require,
    study_summary_from_tree,
    study_to_variance_triple,
)
from .simprofile import (
    FixedEffects,
    SimConfig,
    profile_table,
    replicability_metrics,
    simulate_study,
    study_fixed_effects,
)

__all__ = ["create_app", "main", "MAX_SIM_DRAWS"]

MAX_SIM_DRAWS = 10_000_000

_STATUS_BY_CODE = {
    "ParseError": 400,
    "DomainError": 400,
    "DecompositionError": 400,
    "Infeasible": 400,
    "NotFound": 404,
    "Conflict": 409,
    "TooLarge": 413,
    "Internal": 500,
}

_QUADRANT_ORDER = (Quadrant.NegNeg, Quadrant.PosNeg, Quadrant.NegPos)


def _json_response(payload: object, status_code: int = 200) -> Response:
    body = json.dumps(payload, allow_nan=False)
    return Response(content=body, status_code=status_code, media_type="application/json")


def _error_payload(code: str, message: str, field_path: str | None = None) -> dict:
    payload: dict[str, object] = {"code": code, "message": message}
    if field_path:
        payload["field_path"] = field_path
    return payload


async def _body_tree(request: Request) -> dict:
    raw = await request.body()
    try:
        tree = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"request body is not well-formed JSON: {exc}") from exc
    if not isinstance(tree, dict):
        raise ParseError("", "request body must be a JSON object")
    return tree


def _parse_endpoint_estimate(tree: object, path: str) -> EndpointEstimate:
    if not isinstance(tree, dict):
        raise ParseError(path, "expected an object")
    _reject_unknown(tree, ("theta_hat", "sigma"), f"{path}.")
    return EndpointEstimate(
        theta_hat=_as_number(_require(tree, "theta_hat", f"{path}.theta_hat"), f"{path}.theta_hat"),
        sigma=_as_number(_require(tree, "sigma", f"{path}.sigma"), f"{path}.sigma"),
    )


def _parse_partition_config(tree: object) -> PartitionConfig:
    if not isinstance(tree, dict):
        raise ParseError("config", "expected an object")
    _reject_unknown(tree, ("alpha", "c_md", "rho"), "config.")
    return PartitionConfig(
        alpha=_as_number(_require(tree, "alpha", "config.alpha"), "config.alpha"),
        c_md=_as_number(_require(tree, "c_md", "config.c_md"), "config.c_md"),
        rho=_as_number(tree.get("rho", 0.0), "config.rho"),
    )


def _parse_estimate_pair_body(tree: dict) -> tuple[EndpointEstimate, EndpointEstimate, PartitionConfig]:
    _reject_unknown(tree, ("e1", "e2", "config"), "")
    e1 = _parse_endpoint_estimate(_require(tree, "e1", "e1"), "e1")
    e2 = _parse_endpoint_estimate(_require(tree, "e2", "e2"), "e2")
    cfg = _parse_partition_config(_require(tree, "config", "config"))
    return e1, e2, cfg


def _parse_fixed_effects(tree: object) -> FixedEffects:
    if not isinstance(tree, dict):
        raise ParseError("fx", "expected an object")
    allowed = ("alpha_common", "beta_rx", "beta_c", "alpha_rx_display", "alpha_c_display")
    _reject_unknown(tree, allowed, "fx.")
    kwargs: dict[str, float] = {}
    for key in ("alpha_common", "beta_rx", "beta_c"):
        kwargs[key] = _as_number(_require(tree, key, f"fx.{key}"), f"fx.{key}")
    for key in ("alpha_rx_display", "alpha_c_display"):
        if tree.get(key) is not None:
            kwargs[key] = _as_number(tree[key], f"fx.{key}")
    return FixedEffects(**kwargs)


def _parse_study_field(tree: object) -> StudySummary:
    """Parse a nested study document, re-rooting error paths at ``study.``."""
    try:
        return study_summary_from_tree(tree)
    except ParseError as exc:
        raise ParseError(
            f"study.{exc.field_path}" if exc.field_path else "study", exc.reason
        ) from exc


def _parse_sim_fx(tree: dict) -> FixedEffects:
    """Fixed effects for a simulation body: explicit ``fx`` or derived from a
    ``study`` document server-side (clients never compute the weighted
    intercept or the per-arm slopes)."""
    has_fx = tree.get("fx") is not None
    has_study = tree.get("study") is not None
    if has_fx == has_study:
        raise ParseError("fx", "provide exactly one of fx or study")
    if has_fx:
        return _parse_fixed_effects(tree["fx"])
    return study_fixed_effects(_parse_study_field(tree["study"]))


def _parse_etz_components(tree: object, path: str) -> EtzComponents:
    if not isinstance(tree, dict):
        raise ParseError(path, "expected an object")
    _reject_unknown(tree, ("var_z", "var_e", "var_traj"), f"{path}.")
    return EtzComponents(
        var_z=_as_number(_require(tree, "var_z", f"{path}.var_z"), f"{path}.var_z"),
        var_e=_as_number(_require(tree, "var_e", f"{path}.var_e"), f"{path}.var_e"),
        var_traj=_as_number(_require(tree, "var_traj", f"{path}.var_traj"), f"{path}.var_traj"),
    )


def _parse_sim_config(tree: object) -> SimConfig:
    if not isinstance(tree, dict):
        raise ParseError("config", "expected an object")
    allowed = ("visit_weeks", "n_rx", "n_c", "etz", "seed", "n_reps")
    _reject_unknown(tree, allowed, "config.")
    raw_weeks = _require(tree, "visit_weeks", "config.visit_weeks")
    if not isinstance(raw_weeks, list) or not raw_weeks:
        raise ParseError("config.visit_weeks", "expected a non-empty array")
    weeks = tuple(_as_number(w, "config.visit_weeks") for w in raw_weeks)
    return SimConfig(
        visit_weeks=weeks,
        n_rx=_as_int(_require(tree, "n_rx", "config.n_rx"), "config.n_rx"),
        n_c=_as_int(_require(tree, "n_c", "config.n_c"), "config.n_c"),
        etz=_parse_etz_components(_require(tree, "etz", "config.etz"), "config.etz"),
        seed=_as_int(_require(tree, "seed", "config.seed"), "config.seed"),
        n_reps=_as_int(tree.get("n_reps", 1), "config.n_reps"),
    )


def _parse_assess_design(tree: object, etz: EtzComponents) -> Phase3Design:
    """Parse a future-study design, deriving sigma_pooled from the components
    when the client leaves it out (so clients never do the square-root)."""
    if not isinstance(tree, dict):
        raise ParseError("design", "expected an object")
    _reject_unknown(tree, ("n_rx", "n_c", "sigma_pooled", "seed", "reps"), "design.")
    raw_sigma = tree.get("sigma_pooled")
    if raw_sigma is None:
        sigma_pooled = pooled_change_sd(etz)
    else:
        sigma_pooled = _as_number(raw_sigma, "design.sigma_pooled")
    return Phase3Design(
        n_rx=_as_int(_require(tree, "n_rx", "design.n_rx"), "design.n_rx"),
        n_c=_as_int(_require(tree, "n_c", "design.n_c"), "design.n_c"),
        sigma_pooled=sigma_pooled,
        seed=_as_int(_require(tree, "seed", "design.seed"), "design.seed"),
        reps=_as_int(tree.get("reps", 10000), "design.reps"),
    )


def _parse_discount_plan(tree: object) -> DiscountPlan:
    """Parse a discount plan, completing the third value from any two (so
    clients driving gamma/d_phase2 sliders never do the discount algebra)."""
    if not isinstance(tree, dict):
        raise ParseError("plan", "expected an object")
    _reject_unknown(tree, ("gamma", "d_phase2", "d_phase3"), "plan.")
    values = {
        key: _as_number(tree[key], f"plan.{key}")
        for key in ("gamma", "d_phase2", "d_phase3")
        if tree.get(key) is not None
    }
    if len(values) == 3:
        return DiscountPlan(**values)
    if len(values) != 2:
        raise ParseError("plan", "provide at least two of gamma, d_phase2, d_phase3")
    if "gamma" in values:
        return complete_discount_plan(**values)
    gamma = (values["d_phase2"] + 0.5) * (values["d_phase3"] + 0.5)
    return DiscountPlan(gamma=gamma, **values)


def _resolve_assessment_inputs(
    tree: dict, store: ScenarioStore
) -> tuple[StudySummary, EtzComponents, DiscountPlan, Phase3Design]:
    if "scenario_id" in tree:
        _reject_unknown(tree, ("scenario_id",), "")
        scenario_id = tree["scenario_id"]
        if not isinstance(scenario_id, str):
            raise ParseError("scenario_id", "expected text")
        record = store.load_scenario(scenario_id)
        study, plan, design = record.study, record.plan, record.design
        etz = record.etz_override
        if etz is None:
            etz = decompose_etz(study_to_variance_triple(study))
        return study, etz, plan, design

    allowed = ("study", "plan", "design", "etz_override", "id", "created_at", "notes")
    _reject_unknown(tree, allowed, "")
    study = _parse_study_field(_require(tree, "study", "study"))
    if tree.get("etz_override") is not None:
        etz = _parse_etz_components(tree["etz_override"], "etz_override")
    else:
        etz = decompose_etz(study_to_variance_triple(study))
    plan = _parse_discount_plan(_require(tree, "plan", "plan"))
    design = _parse_assess_design(_require(tree, "design", "design"), etz)
    return study, etz, plan, design


def _decision_report_payload(report: DecisionReport) -> dict:
    return {
        "confident_efficacy": {
            "value": report.confident_efficacy.value,
            "level": report.confident_efficacy.level,
            "df": report.confident_efficacy.df,
            "se_pooled": report.confident_efficacy.se_pooled,
        },
        "cbq": report.cbq,
        "cbq_monte_carlo": report.cbq_monte_carlo,
        "transition_recommended": report.transition_recommended,
        "plan": {
            "gamma": report.plan.gamma,
            "d_phase2": report.plan.d_phase2,
            "d_phase3": report.plan.d_phase3,
        },
        "design": {
            "n_rx": report.design.n_rx,
            "n_c": report.design.n_c,
            "sigma_pooled": report.design.sigma_pooled,
            "seed": report.design.seed,
            "reps": report.design.reps,
        },
        "quantile_histogram": [[center, count] for center, count in report.quantile_histogram],
    }


def _transition_payload(decision: TransitionDecision) -> dict:
    return {
        "eliminated_quadrants": [
            q.value for q in _QUADRANT_ORDER if q in decision.eliminated_quadrants
        ],
        "transition": decision.transition,
        "per_endpoint_lower": list(decision.per_endpoint_lower),
    }


def _designation_payload(decision: DesignationDecision) -> dict:
    interval: dict[str, object] = {"kind": decision.diff_interval.kind.value}
    if decision.diff_interval.lower is not None:
        interval["lower"] = decision.diff_interval.lower
    payload: dict[str, object] = {"outcome": decision.outcome.value, "diff_interval": interval}
    if decision.avg_lower is not None:
        payload["avg_lower"] = decision.avg_lower
    return payload


def _check_sim_budget(n_reps: int, patients: int) -> None:
    if n_reps * patients > MAX_SIM_DRAWS:
        raise TooLarge(
            f"simulation of {n_reps} reps x {patients} patients exceeds the "
            f"{MAX_SIM_DRAWS} draw budget; lower reps or sample sizes"
        )


def create_app(store_dir: str | Path | None = None) -> FastAPI:
    """Build the API app; ``store_dir`` overrides ETZPLAN_SCENARIO_DIR."""
    if store_dir is None:
        store_dir = os.environ.get("ETZPLAN_SCENARIO_DIR", "scenarios")
    store = ScenarioStore(store_dir)

    app = FastAPI(title="etzplan", docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(EtzError)
    async def _handle_etz_error(request: Request, exc: EtzError) -> Response:
        status = _STATUS_BY_CODE.get(exc.code, 500)
        field_path = getattr(exc, "field_path", None)
        return _json_response(_error_payload(exc.code, str(exc), field_path), status)

    @app.exception_handler(StarletteHTTPException)
    async def _handle_http_error(request: Request, exc: StarletteHTTPException) -> Response:
        code = "NotFound" if exc.status_code == 404 else (
            "Internal" if exc.status_code >= 500 else "DomainError"
        )
        return _json_response(_error_payload(code, str(exc.detail)), exc.status_code)

    @app.exception_handler(Exception)
    async def _handle_unexpected(request: Request, exc: Exception) -> Response:
        return _json_response(
            _error_payload("Internal", f"unexpected failure: {exc}"), 500
        )

    @app.get("/v1/health")
    async def health() -> Response:
        return _json_response({"status": "ok"})

    @app.post("/v1/etz/decompose")
    async def etz_decompose(request: Request) -> Response:
        tree = await _body_tree(request)
        if tree.get("study") is not None:
            _reject_unknown(tree, ("study",), "")
            triple = study_to_variance_triple(_parse_study_field(tree["study"]))
        else:
            _reject_unknown(tree, ("var_baseline", "var_milestone", "var_change"), "")
            triple = VarianceTriple(
                var_baseline=_as_number(
                    _require(tree, "var_baseline", "var_baseline"), "var_baseline"
                ),
                var_milestone=_as_number(
                    _require(tree, "var_milestone", "var_milestone"), "var_milestone"
                ),
                var_change=_as_number(
                    _require(tree, "var_change", "var_change"), "var_change"
                ),
            )
        c = decompose_etz(triple)
        payload: dict[str, object] = {
            "var_z": c.var_z,
            "var_e": c.var_e,
            "var_traj": c.var_traj,
            "sd_z": math.sqrt(c.var_z),
            "sd_e": math.sqrt(c.var_e),
            "sd_traj": math.sqrt(c.var_traj),
        }
        if tree.get("study") is not None:
            payload["triple"] = {
                "var_baseline": triple.var_baseline,
                "var_milestone": triple.var_milestone,
                "var_change": triple.var_change,
            }
        return _json_response(payload)

    @app.post("/v1/confset/transition")
    async def confset_transition(request: Request) -> Response:
        e1, e2, cfg = _parse_estimate_pair_body(await _body_tree(request))
        return _json_response(_transition_payload(transition_decision(e1, e2, cfg)))

    @app.post("/v1/confset/designate")
    async def confset_designate(request: Request) -> Response:
        e1, e2, cfg = _parse_estimate_pair_body(await _body_tree(request))
        return _json_response(_designation_payload(designate_endpoint(e1, e2, cfg)))

    @app.post("/v1/cbq/assess")
    async def cbq_assess(request: Request) -> Response:
        tree = await _body_tree(request)
        study, etz, plan, design = _resolve_assessment_inputs(tree, store)
        if design.reps > MAX_SIM_DRAWS:
            raise TooLarge(
                f"{design.reps} quantile draws exceed the {MAX_SIM_DRAWS} draw budget"
            )
        report = transition_assessment(study, etz, plan, design)
        return _json_response(_decision_report_payload(report))

    @app.post("/v1/sim/profiles")
    async def sim_profiles(request: Request) -> Response:
        tree = await _body_tree(request)
        _reject_unknown(tree, ("fx", "study", "config", "rep_index"), "")
        fx = _parse_sim_fx(tree)
        cfg = _parse_sim_config(_require(tree, "config", "config"))
        rep_index = _as_int(_require(tree, "rep_index", "rep_index"), "rep_index")
        _check_sim_budget(1, cfg.n_rx + cfg.n_c)
        rows = profile_table(simulate_study(fx, cfg, rep_index))
        return _json_response(
            {
                "rep_index": rep_index,
                "rows": [
                    {
                        "week": row.week,
                        "arm": row.arm,
                        "n": row.n,
                        "mean_y": row.mean_y,
                        "mean_change": row.mean_change,
                    }
                    for row in rows
                ],
            }
        )

    @app.post("/v1/sim/replicability")
    async def sim_replicability(request: Request) -> Response:
        tree = await _body_tree(request)
        _reject_unknown(tree, ("fx", "study", "config"), "")
        fx = _parse_sim_fx(tree)
        cfg = _parse_sim_config(_require(tree, "config", "config"))
        _check_sim_budget(cfg.n_reps, cfg.n_rx + cfg.n_c)
        metrics = replicability_metrics(fx, cfg)
        return _json_response(
            {
                "mean_separation": metrics.mean_separation,
                "sd_separation": metrics.sd_separation,
                "frac_positive": metrics.frac_positive,
                "separations": list(metrics.separations),
            }
        )

    @app.get("/v1/scenarios")
    async def list_scenarios() -> Response:
        records = [store.load_scenario(sid) for sid in store.list_scenarios()]
        return _json_response({"scenarios": [_record_to_tree(r) for r in records]})

    @app.get("/v1/scenarios/{scenario_id}")
    async def get_scenario(scenario_id: str) -> Response:
        return _json_response(_record_to_tree(store.load_scenario(scenario_id)))

    @app.put("/v1/scenarios/{scenario_id}")
    async def put_scenario(scenario_id: str, request: Request) -> Response:
        tree = await _body_tree(request)
        record = _record_from_tree(tree)
        if record.id != scenario_id:
            raise ParseError(
                "id", f"body id {record.id!r} does not match path id {scenario_id!r}"
            )
        store.save_scenario(record)
        return _json_response(_record_to_tree(record), status_code=201)

    return app


def main() -> None:
    import uvicorn

    uvicorn.run(
        create_app(),
        host=os.environ.get("ETZPLAN_HOST", "127.0.0.1"),
        port=int(os.environ.get("ETZPLAN_PORT", "8000")),
        log_level="info",
    )


if __name__ == "__main__":
    main()
