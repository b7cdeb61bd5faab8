/**
 * Request builders: view state in, wire bodies out.
 *
 * The only arithmetic here is encoding slider positions into the units the
 * API takes (SD sliders squared into variance fields). Every statistic the
 * UI displays comes back out of a response; the replay contract test is
 * what enforces that.
 */

import type { ScenarioViewState } from "./state.js";
import type {
  AssessInlineRequest,
  EstimatePairRequest,
  EtzComponentsTree,
  ProfilesRequest,
  StudyTree,
} from "./types.js";

export function etzFromSliders(state: ScenarioViewState): EtzComponentsTree {
  const { sd_z, sd_e, sd_traj } = state.sliders;
  return { var_z: sd_z * sd_z, var_e: sd_e * sd_e, var_traj: sd_traj * sd_traj };
}

/**
 * Inline assessment body. The plan carries only the gamma and d2 sliders
 * (the service completes d3) and the design omits sigma_pooled (the service
 * derives it from the components in play).
 */
export function buildAssessRequest(
  study: StudyTree,
  state: ScenarioViewState,
  etzOverride: EtzComponentsTree | null = null,
): AssessInlineRequest {
  const body: AssessInlineRequest = {
    study,
    plan: { gamma: state.sliders.gamma, d_phase2: state.sliders.d2 },
    design: {
      n_rx: state.sliders.n3_rx,
      n_c: state.sliders.n3_c,
      seed: state.sliders.seed,
      reps: state.sliders.reps,
    },
  };
  if (etzOverride !== null) {
    body.etz_override = etzOverride;
  }
  return body;
}

/**
 * One replication of profile tables. The fixed effects stay server-derived
 * from the study document; the variance components are either the service's
 * own decomposition (echoed verbatim) or the slider override.
 */
export function buildProfilesRequest(
  study: StudyTree,
  etz: EtzComponentsTree,
  seed: number,
  repIndex: number,
): ProfilesRequest {
  return {
    study,
    config: {
      visit_weeks: study.visit_weeks,
      n_rx: study.arms.rx.n_baseline,
      n_c: study.arms.control.n_baseline,
      etz,
      seed,
    },
    rep_index: repIndex,
  };
}

export function buildEstimatePairRequest(
  e1: { theta_hat: number; sigma: number },
  e2: { theta_hat: number; sigma: number },
  config: { alpha: number; c_md: number; rho: number },
): EstimatePairRequest {
  return { e1, e2, config };
}
