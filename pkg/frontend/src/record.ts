/**
 * Regenerate tests/fixtures/replay_log.json: spawn a service, issue every
 * request the cockpit makes (built by the same builders the app uses), and
 * record the exact response bytes. The contract test replays this log
 * against a fresh service and asserts both response stability and verbatim
 * display of every field.
 *
 * Run with: npm run record
 */

import { writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { DEMO_ESTIMATES, DEMO_PARTITION, demoScenarioRecord, demoStudy } from "./demo.js";
import { buildAssessRequest, buildEstimatePairRequest, buildProfilesRequest } from "./requests.js";
import { startService } from "./service_process.js";
import { initialViewState, setSlider } from "./state.js";
import type { DecomposeResponse, StudyTree } from "./types.js";

export interface ReplayEntry {
  name: string;
  panel: string;
  method: string;
  path: string;
  request: unknown;
  status: number;
  response_text: string;
}

async function issue(
  baseUrl: string,
  method: string,
  path: string,
  request: unknown,
): Promise<{ status: number; text: string }> {
  const init: RequestInit = { method };
  if (request !== null) {
    init.headers = { "content-type": "application/json" };
    init.body = JSON.stringify(request);
  }
  const res = await fetch(baseUrl + path, init);
  return { status: res.status, text: await res.text() };
}

export async function recordLog(baseUrl: string): Promise<ReplayEntry[]> {
  const entries: ReplayEntry[] = [];
  const study: StudyTree = demoStudy();
  const record = demoScenarioRecord("demo-expedition3");

  const add = async (name: string, panel: string, method: string, path: string, request: unknown) => {
    const { status, text } = await issue(baseUrl, method, path, request);
    entries.push({ name, panel, method, path, request, status, response_text: text });
    return text;
  };

  await add("editor-save", "editor", "PUT", `/v1/scenarios/${record.id}`, record);
  await add("editor-load", "editor", "GET", `/v1/scenarios/${record.id}`, null);
  await add("editor-list", "editor-list", "GET", "/v1/scenarios", null);

  const decomposeText = await add("etz-readout", "etz", "POST", "/v1/etz/decompose", { study });
  const decomposed = JSON.parse(decomposeText) as DecomposeResponse;
  const serverEtz = {
    var_z: decomposed.var_z,
    var_e: decomposed.var_e,
    var_traj: decomposed.var_traj,
  };

  const defaults = initialViewState();
  await add(
    "transition-assess-n1000",
    "transition",
    "POST",
    "/v1/cbq/assess",
    buildAssessRequest(study, defaults),
  );

  const larger = initialViewState();
  setSlider(larger, "n3_rx", 3000);
  setSlider(larger, "n3_c", 3000);
  await add(
    "transition-assess-n3000",
    "transition",
    "POST",
    "/v1/cbq/assess",
    buildAssessRequest(study, larger),
  );

  await add(
    "profiles-rep0",
    "profiles",
    "POST",
    "/v1/sim/profiles",
    buildProfilesRequest(study, serverEtz, defaults.sliders.seed, 0),
  );
  await add(
    "profiles-rep1",
    "profiles",
    "POST",
    "/v1/sim/profiles",
    buildProfilesRequest(study, serverEtz, defaults.sliders.seed, 1),
  );
  await add(
    "profiles-zero-sd",
    "profiles",
    "POST",
    "/v1/sim/profiles",
    buildProfilesRequest(study, { var_z: 0, var_e: 0, var_traj: 0 }, defaults.sliders.seed, 0),
  );

  const pair = buildEstimatePairRequest(DEMO_ESTIMATES.e1, DEMO_ESTIMATES.e2, DEMO_PARTITION);
  await add("designation-transition", "designation-transition", "POST", "/v1/confset/transition", pair);
  await add("designation-designate", "designation-designate", "POST", "/v1/confset/designate", pair);

  const broken = demoStudy();
  delete (broken.arms.rx as { se_change?: number }).se_change;
  await add(
    "transition-assess-error",
    "transition-error",
    "POST",
    "/v1/cbq/assess",
    buildAssessRequest(broken, initialViewState()),
  );

  return entries;
}

async function main(): Promise<void> {
  const service = await startService(8792);
  try {
    const entries = await recordLog(service.baseUrl);
    const here = dirname(fileURLToPath(import.meta.url));
    const out = join(here, "..", "tests", "fixtures", "replay_log.json");
    writeFileSync(out, `${JSON.stringify({ entries }, null, 2)}\n`);
    console.log(`recorded ${entries.length} entries to ${out}`);
  } finally {
    await service.stop();
  }
}

if (process.argv[1] && import.meta.url === `file://${process.argv[1]}`) {
  void main();
}
