/**
 * Panels: pure functions from the last completed response (plus the request
 * context that produced it) to HTML strings. No fetching, no globals, no
 * client-side statistics; every displayed number is a response field
 * stamped verbatim by stat().
 */

import { histogramSvg, profilesSvg, quadrantSvg } from "./charts.js";
import { errorBox, esc, stat, statRow, truncateDecimals, type FieldError } from "./render.js";
import type {
  DecisionReportTree,
  DecomposeResponse,
  DesignationResponse,
  EstimatePairRequest,
  ProfilesResponse,
  ScenarioListResponse,
  ScenarioRecordTree,
  TransitionResponse,
} from "./types.js";

/** Variance-component readout for the current study document. */
export function renderEtzReadout(
  response: DecomposeResponse | null,
  error: FieldError | null = null,
): string {
  if (error) {
    return `<section class="panel etz">${errorBox(error)}</section>`;
  }
  if (!response) {
    return `<section class="panel etz"><p class="pending">awaiting decomposition</p></section>`;
  }
  let html =
    statRow("Var(Z)", "var_z", response.var_z) +
    statRow("Var(E)", "var_e", response.var_e) +
    statRow("Var(Traj)", "var_traj", response.var_traj) +
    statRow("SD(Z)", "sd_z", response.sd_z) +
    statRow("SD(E)", "sd_e", response.sd_e) +
    statRow("SD(Traj)", "sd_traj", response.sd_traj);
  if (response.triple) {
    html +=
      statRow("Var(baseline)", "triple.var_baseline", response.triple.var_baseline) +
      statRow("Var(milestone)", "triple.var_milestone", response.triple.var_milestone) +
      statRow("Var(change)", "triple.var_change", response.triple.var_change);
  }
  return `<section class="panel etz">${html}</section>`;
}

export function renderTransitionPanel(
  report: DecisionReportTree | null,
  error: FieldError | null = null,
): string {
  if (error) {
    return `<section class="panel transition">${errorBox(error)}</section>`;
  }
  if (!report) {
    return `<section class="panel transition"><p class="pending">awaiting assessment</p></section>`;
  }
  const verdict = report.transition_recommended ? "recommended" : "not recommended";
  const badgeClass = report.transition_recommended ? "badge ok" : "badge bad";
  const headline = truncateDecimals(String(report.cbq), 2);
  return (
    `<section class="panel transition">` +
    `<div class="${badgeClass}" data-field="cbq" data-value="${esc(String(report.cbq))}">` +
    `CBQ ${esc(headline)} (${verdict})</div>` +
    statRow("confident efficacy", "confident_efficacy.value", report.confident_efficacy.value) +
    statRow("confidence level", "confident_efficacy.level", report.confident_efficacy.level) +
    statRow("degrees of freedom", "confident_efficacy.df", report.confident_efficacy.df) +
    statRow("pooled SE", "confident_efficacy.se_pooled", report.confident_efficacy.se_pooled) +
    statRow("CBQ (closed form)", "cbq", report.cbq) +
    statRow("CBQ (monte carlo)", "cbq_monte_carlo", report.cbq_monte_carlo) +
    statRow("transition recommended", "transition_recommended", report.transition_recommended) +
    statRow("gamma", "plan.gamma", report.plan.gamma) +
    statRow("phase-2 discount", "plan.d_phase2", report.plan.d_phase2) +
    statRow("phase-3 discount", "plan.d_phase3", report.plan.d_phase3) +
    statRow("phase-3 n (rx)", "design.n_rx", report.design.n_rx) +
    statRow("phase-3 n (control)", "design.n_c", report.design.n_c) +
    statRow("pooled change SD", "design.sigma_pooled", report.design.sigma_pooled) +
    statRow("seed", "design.seed", report.design.seed) +
    statRow("quantile draws", "design.reps", report.design.reps) +
    histogramSvg(report.quantile_histogram, report.cbq) +
    `</section>`
  );
}

/** One replication column: plot plus the verbatim per-visit table. */
export function renderProfileColumn(
  response: ProfilesResponse,
  error: FieldError | null = null,
): string {
  if (error) {
    return `<figure class="rep">${errorBox(error)}</figure>`;
  }
  const header =
    `<tr><th>week</th><th>arm</th><th>n</th><th>mean</th><th>mean change</th></tr>`;
  const cells = response.rows
    .map(
      (row, i) =>
        `<tr>` +
        `<td>${stat(`rows.${i}.week`, row.week)}</td>` +
        `<td>${stat(`rows.${i}.arm`, row.arm)}</td>` +
        `<td>${stat(`rows.${i}.n`, row.n)}</td>` +
        `<td>${stat(`rows.${i}.mean_y`, row.mean_y)}</td>` +
        `<td>${stat(`rows.${i}.mean_change`, row.mean_change)}</td>` +
        `</tr>`,
    )
    .join("");
  return (
    `<figure class="rep">` +
    `<figcaption>replication ${stat("rep_index", response.rep_index)}</figcaption>` +
    profilesSvg(response.rows) +
    `<table class="profile-table">${header}${cells}</table>` +
    `</figure>`
  );
}

/** Side-by-side replication columns (the new-seed control appends one). */
export function renderProfilePanel(
  responses: ProfilesResponse[],
  error: FieldError | null = null,
): string {
  if (error) {
    return `<section class="panel profiles">${errorBox(error)}</section>`;
  }
  const columns = responses.map((r) => renderProfileColumn(r)).join("");
  return `<section class="panel profiles">${columns || `<p class="pending">awaiting simulation</p>`}</section>`;
}

/**
 * Designation panel. Transition and designation answers arrive from two
 * endpoints; each section renders only from its own response so either can
 * be shown alone. The quadrant plot draws the REQUEST's estimates and band;
 * the verdicts under it are response fields.
 */
export function renderDesignationPanel(
  request: EstimatePairRequest,
  transition: TransitionResponse | null,
  designation: DesignationResponse | null,
  error: FieldError | null = null,
): string {
  if (error) {
    return `<section class="panel designation">${errorBox(error)}</section>`;
  }
  const plot = quadrantSvg(request.e1, request.e2, request.config.c_md);

  let transitionHtml = "";
  if (transition) {
    const quadrants = transition.eliminated_quadrants
      .map((q, i) => `<li>${stat(`eliminated_quadrants.${i}`, q)}</li>`)
      .join("");
    transitionHtml =
      `<div class="transition-call">` +
      statRow("transition", "transition", transition.transition) +
      statRow("per-endpoint lower bounds", "per_endpoint_lower", transition.per_endpoint_lower) +
      `<ul class="eliminated">${quadrants}</ul>` +
      `</div>`;
  }

  let designationHtml = "";
  if (designation) {
    designationHtml =
      `<div class="designation-call">` +
      statRow("designation", "outcome", designation.outcome) +
      statRow("difference interval", "diff_interval.kind", designation.diff_interval.kind) +
      (designation.diff_interval.lower !== undefined
        ? statRow("difference lower bound", "diff_interval.lower", designation.diff_interval.lower)
        : "") +
      (designation.avg_lower !== undefined
        ? statRow("combined lower bound", "avg_lower", designation.avg_lower)
        : "") +
      `</div>`;
  }

  return `<section class="panel designation">${plot}${transitionHtml}${designationHtml}</section>`;
}

/** Form field showing one scenario value, verbatim, editable. */
function field(label: string, path: string, value: unknown): string {
  const verbatim = esc(String(value));
  return (
    `<label class="field">${esc(label)}` +
    `<input data-field="${esc(path)}" data-value="${verbatim}" value="${verbatim}">` +
    `</label>`
  );
}

function armFields(arm: "rx" | "control", tree: ScenarioRecordTree): string {
  const a = tree.study.arms[arm];
  const base = `study.arms.${arm}`;
  let html =
    field(`${arm} n baseline`, `${base}.n_baseline`, a.n_baseline) +
    field(`${arm} mean baseline`, `${base}.mean_baseline`, a.mean_baseline) +
    field(`${arm} sd baseline`, `${base}.sd_baseline`, a.sd_baseline) +
    field(`${arm} n milestone`, `${base}.n_milestone`, a.n_milestone) +
    field(`${arm} mean milestone`, `${base}.mean_milestone`, a.mean_milestone) +
    field(`${arm} sd milestone`, `${base}.sd_milestone`, a.sd_milestone) +
    field(`${arm} lsmean change`, `${base}.lsmean_change`, a.lsmean_change) +
    field(`${arm} se change`, `${base}.se_change`, a.se_change);
  if (a.n_change !== undefined) {
    html += field(`${arm} n change`, `${base}.n_change`, a.n_change);
  }
  return html;
}

/**
 * Scenario editor: the stored record's fields verbatim, with any service
 * error shown inline at the offending field path.
 */
export function renderScenarioEditor(
  record: ScenarioRecordTree | null,
  error: FieldError | null = null,
): string {
  const banner = error ? errorBox(error) : "";
  if (!record) {
    return `<section class="panel editor">${banner || `<p class="pending">no scenario loaded</p>`}</section>`;
  }
  let html =
    field("id", "id", record.id) +
    field("created at", "created_at", record.created_at) +
    field("notes", "notes", record.notes) +
    field("outcome", "study.outcome_name", record.study.outcome_name) +
    field("direction", "study.direction", record.study.direction) +
    field("milestone week", "study.milestone_week", record.study.milestone_week) +
    field("visit weeks", "study.visit_weeks", record.study.visit_weeks) +
    armFields("rx", record) +
    armFields("control", record);
  if (record.study.published_change_variance !== undefined) {
    html += field(
      "published change variance",
      "study.published_change_variance",
      record.study.published_change_variance,
    );
  }
  html +=
    field("gamma", "plan.gamma", record.plan.gamma) +
    field("d phase2", "plan.d_phase2", record.plan.d_phase2) +
    field("d phase3", "plan.d_phase3", record.plan.d_phase3) +
    field("design n rx", "design.n_rx", record.design.n_rx) +
    field("design n control", "design.n_c", record.design.n_c) +
    field("design sigma pooled", "design.sigma_pooled", record.design.sigma_pooled) +
    field("design seed", "design.seed", record.design.seed) +
    field("design reps", "design.reps", record.design.reps);
  return `<section class="panel editor">${banner}<form class="scenario-form">${html}</form></section>`;
}

/** Saved-scenario listing from GET /v1/scenarios. */
export function renderScenarioList(
  listing: ScenarioListResponse,
  error: FieldError | null = null,
): string {
  if (error) {
    return `<nav class="scenario-list">${errorBox(error)}</nav>`;
  }
  const items = listing.scenarios
    .map(
      (record, i) =>
        `<li>${stat(`scenarios.${i}.id`, record.id)} ` +
        `${stat(`scenarios.${i}.created_at`, record.created_at)}</li>`,
    )
    .join("");
  return `<nav class="scenario-list"><ul>${items}</ul></nav>`;
}
