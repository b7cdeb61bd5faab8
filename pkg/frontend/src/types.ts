/**
 * Wire types for the /v1 decision-service API.
 *
 * These mirror the JSON bodies exactly; the UI never computes statistics
 * from them, it only displays fields and echoes them into later requests.
 */

export interface EtzComponentsTree {
  var_z: number;
  var_e: number;
  var_traj: number;
}

export interface VarianceTripleTree {
  var_baseline: number;
  var_milestone: number;
  var_change: number;
}

export interface DecomposeResponse extends EtzComponentsTree {
  sd_z: number;
  sd_e: number;
  sd_traj: number;
  /** present when the request supplied a study document instead of a triple */
  triple?: VarianceTripleTree;
}

export interface ArmTree {
  n_baseline: number;
  mean_baseline: number;
  sd_baseline: number;
  n_milestone: number;
  mean_milestone: number;
  sd_milestone: number;
  lsmean_change: number;
  se_change: number;
  n_change?: number;
}

export interface StudyTree {
  schema_version: number;
  outcome_name: string;
  direction: string;
  milestone_week: number;
  visit_weeks: number[];
  arms: { rx: ArmTree; control: ArmTree };
  published_change_variance?: number;
}

export interface PlanTree {
  gamma?: number;
  d_phase2?: number;
  d_phase3?: number;
}

export interface DesignTree {
  n_rx: number;
  n_c: number;
  sigma_pooled?: number;
  seed: number;
  reps?: number;
}

export interface AssessInlineRequest {
  study: StudyTree;
  plan: PlanTree;
  design: DesignTree;
  etz_override?: EtzComponentsTree;
}

export interface AssessStoredRequest {
  scenario_id: string;
}

export type AssessRequest = AssessInlineRequest | AssessStoredRequest;

export interface DecisionReportTree {
  confident_efficacy: {
    value: number;
    level: number;
    df: number;
    se_pooled: number;
  };
  cbq: number;
  cbq_monte_carlo: number;
  transition_recommended: boolean;
  plan: { gamma: number; d_phase2: number; d_phase3: number };
  design: {
    n_rx: number;
    n_c: number;
    sigma_pooled: number;
    seed: number;
    reps: number;
  };
  quantile_histogram: Array<[number, number]>;
}

export interface EndpointEstimateTree {
  theta_hat: number;
  sigma: number;
}

export interface PartitionConfigTree {
  alpha: number;
  c_md: number;
  rho: number;
}

export interface EstimatePairRequest {
  e1: EndpointEstimateTree;
  e2: EndpointEstimateTree;
  config: PartitionConfigTree;
}

export interface TransitionResponse {
  eliminated_quadrants: string[];
  transition: boolean;
  per_endpoint_lower: number[];
}

export interface DesignationResponse {
  outcome: string;
  diff_interval: { kind: string; lower?: number };
  avg_lower?: number;
}

export interface FixedEffectsTree {
  alpha_common: number;
  beta_rx: number;
  beta_c: number;
  alpha_rx_display?: number;
  alpha_c_display?: number;
}

export interface SimConfigTree {
  visit_weeks: number[];
  n_rx: number;
  n_c: number;
  etz: EtzComponentsTree;
  seed: number;
  n_reps?: number;
}

export interface ProfilesRequest {
  fx?: FixedEffectsTree;
  study?: StudyTree;
  config: SimConfigTree;
  rep_index: number;
}

export interface ProfileRowTree {
  week: number;
  arm: string;
  n: number;
  mean_y: number;
  mean_change: number;
}

export interface ProfilesResponse {
  rep_index: number;
  rows: ProfileRowTree[];
}

export interface ReplicabilityRequest {
  fx?: FixedEffectsTree;
  study?: StudyTree;
  config: SimConfigTree;
}

export interface ReplicabilityResponse {
  mean_separation: number;
  sd_separation: number;
  frac_positive: number;
  separations: number[];
}

export interface ScenarioRecordTree {
  schema_version: number;
  id: string;
  created_at: string;
  study: StudyTree;
  plan: { gamma: number; d_phase2: number; d_phase3: number };
  design: DesignTree;
  notes: string;
  etz_override?: EtzComponentsTree;
}

export interface ScenarioListResponse {
  scenarios: ScenarioRecordTree[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field_path?: string;
}
