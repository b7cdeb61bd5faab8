/**
 * Demo scenario shipped with the cockpit: the published two-arm study the
 * engine's worked numbers come from, plus default inputs for the
 * designation panel. All values are published summary statistics typed in
 * as data; nothing here is computed.
 */

import type { EndpointEstimateTree, PartitionConfigTree, ScenarioRecordTree, StudyTree } from "./types.js";

export function demoStudy(): StudyTree {
  return {
    schema_version: 1,
    outcome_name: "ADCS-iADL",
    direction: "HigherIsBetter",
    milestone_week: 80,
    visit_weeks: [0, 12, 28, 40, 52, 64, 80],
    arms: {
      rx: {
        n_baseline: 1053,
        mean_baseline: 45.6,
        sd_baseline: 7.93,
        n_milestone: 908,
        mean_milestone: 39.83,
        sd_milestone: 11.41,
        lsmean_change: -6.17,
        se_change: 0.32,
        n_change: 981,
      },
      control: {
        n_baseline: 1063,
        mean_baseline: 45.37,
        sd_baseline: 8.14,
        n_milestone: 896,
        mean_milestone: 39.01,
        sd_milestone: 11.86,
        lsmean_change: -7.17,
        se_change: 0.32,
        n_change: 980,
      },
    },
    published_change_variance: 92.365,
  };
}

export function demoScenarioRecord(id: string): ScenarioRecordTree {
  return {
    schema_version: 1,
    id,
    created_at: "2026-01-05T12:00:00+00:00",
    study: demoStudy(),
    plan: { gamma: 0.76, d_phase2: 0.45, d_phase3: 0.3 },
    design: { n_rx: 1000, n_c: 1000, sigma_pooled: 9.610671152421096, seed: 20260105, reps: 10000 },
    notes: "published two-arm feeder study",
  };
}

export const DEMO_ESTIMATES: { e1: EndpointEstimateTree; e2: EndpointEstimateTree } = {
  e1: { theta_hat: 0.8, sigma: 0.477 },
  e2: { theta_hat: 1.0, sigma: 0.4235 },
};

export const DEMO_PARTITION: PartitionConfigTree = { alpha: 0.05, c_md: 0.5, rho: 0 };
