/**
 * Browser entry point: wires sliders, schedulers, and panels together.
 * All rendering goes through the pure panel functions; this file only
 * moves strings into the DOM and user events into state.
 */

import { ApiClient } from "./api.js";
import { DEMO_ESTIMATES, DEMO_PARTITION, demoScenarioRecord, demoStudy } from "./demo.js";
import {
  renderDesignationPanel,
  renderEtzReadout,
  renderProfilePanel,
  renderScenarioEditor,
  renderScenarioList,
  renderTransitionPanel,
} from "./panels.js";
import { buildAssessRequest, buildEstimatePairRequest, buildProfilesRequest, etzFromSliders } from "./requests.js";
import { PanelScheduler, SLIDER_RANGES, initialViewState, setSlider, type ScenarioViewState } from "./state.js";
import type { ApiErrorBody, EtzComponentsTree, ProfilesResponse } from "./types.js";

function sliderMarkup(name: string, value: number): string {
  const r = SLIDER_RANGES[name];
  return (
    `<label class="slider">${name}` +
    `<input type="range" name="${name}" min="${r.min}" max="${r.max}" step="${r.step}" value="${value}">` +
    `<output>${value}</output></label>`
  );
}

export function installApp(root: HTMLElement, api: ApiClient): void {
  const state: ScenarioViewState = initialViewState();
  const study = demoStudy();
  let profileResponses: ProfilesResponse[] = [];
  let serverEtz: EtzComponentsTree | null = null;
  let sdMoved = false;
  let nextRep = 0;

  const names = Object.keys(state.sliders) as Array<keyof ScenarioViewState["sliders"]>;
  root.innerHTML =
    `<div class="controls">${names.map((n) => sliderMarkup(n, state.sliders[n])).join("")}` +
    `<button id="new-seed">new replication</button></div>` +
    `<div id="etz"></div><div id="transition"></div><div id="profiles"></div>` +
    `<div id="designation"></div><div id="editor"></div><div id="scenarios"></div>`;

  const panel = (id: string) => root.querySelector<HTMLElement>(`#${id}`)!;

  const asError = (err: unknown): ApiErrorBody =>
    typeof err === "object" && err !== null && "code" in err
      ? (err as ApiErrorBody)
      : { code: "Internal", message: String(err) };

  const assessScheduler = new PanelScheduler(
    async () => {
      const override = sdMoved ? etzFromSliders(state) : null;
      const result = await api.assess(buildAssessRequest(study, state, override));
      if (!result.ok) throw result.error;
      return result.value;
    },
    (report) => {
      state.lastReport = report;
      panel("transition").innerHTML = renderTransitionPanel(report);
    },
    undefined,
    undefined,
    (err) => {
      panel("transition").innerHTML = renderTransitionPanel(null, asError(err));
    },
  );

  const profileScheduler = new PanelScheduler(
    async () => {
      const etz = sdMoved || serverEtz === null ? etzFromSliders(state) : serverEtz;
      const result = await api.profiles(
        buildProfilesRequest(study, etz, state.sliders.seed, nextRep),
      );
      if (!result.ok) throw result.error;
      return result.value;
    },
    (response) => {
      profileResponses = [...profileResponses.slice(-3), response];
      state.lastProfiles = profileResponses;
      panel("profiles").innerHTML = renderProfilePanel(profileResponses);
    },
    undefined,
    undefined,
    (err) => {
      panel("profiles").innerHTML = renderProfilePanel([], asError(err));
    },
  );

  const designationScheduler = new PanelScheduler(
    async () => {
      const body = buildEstimatePairRequest(DEMO_ESTIMATES.e1, DEMO_ESTIMATES.e2, DEMO_PARTITION);
      const [transition, designation] = [await api.transition(body), await api.designate(body)];
      if (!transition.ok) throw transition.error;
      if (!designation.ok) throw designation.error;
      return { body, transition: transition.value, designation: designation.value };
    },
    ({ body, transition, designation }) => {
      panel("designation").innerHTML =
        renderDesignationPanel(body, transition, null) +
        renderDesignationPanel(body, null, designation);
    },
    undefined,
    undefined,
    (err) => {
      const body = buildEstimatePairRequest(DEMO_ESTIMATES.e1, DEMO_ESTIMATES.e2, DEMO_PARTITION);
      panel("designation").innerHTML = renderDesignationPanel(body, null, null, asError(err));
    },
  );

  root.querySelectorAll<HTMLInputElement>(".slider input").forEach((input) => {
    input.addEventListener("input", () => {
      const name = input.name as keyof ScenarioViewState["sliders"];
      setSlider(state, name, Number(input.value));
      if (name.startsWith("sd_")) {
        sdMoved = true;
      }
      (input.nextElementSibling as HTMLOutputElement).value = String(state.sliders[name]);
      assessScheduler.request();
      profileScheduler.request();
    });
  });

  root.querySelector<HTMLButtonElement>("#new-seed")!.addEventListener("click", () => {
    nextRep += 1;
    profileScheduler.fire();
  });

  void (async () => {
    const record = demoScenarioRecord("demo");
    const put = await api.putScenario(record.id, record);
    if (!put.ok && put.error.code !== "Conflict") {
      panel("editor").innerHTML = renderScenarioEditor(null, put.error);
    } else {
      const got = await api.getScenario(record.id);
      panel("editor").innerHTML = got.ok
        ? renderScenarioEditor(got.value)
        : renderScenarioEditor(null, got.error);
    }
    const listing = await api.listScenarios();
    panel("scenarios").innerHTML = listing.ok
      ? renderScenarioList(listing.value)
      : renderScenarioList({ scenarios: [] }, listing.error);

    const decomposed = await api.decompose({ study });
    if (decomposed.ok) {
      serverEtz = {
        var_z: decomposed.value.var_z,
        var_e: decomposed.value.var_e,
        var_traj: decomposed.value.var_traj,
      };
      panel("etz").innerHTML = renderEtzReadout(decomposed.value);
    } else {
      panel("etz").innerHTML = renderEtzReadout(null, decomposed.error);
    }
    assessScheduler.fire();
    profileScheduler.fire();
    designationScheduler.fire();
  })();
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    const base = new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";
    installApp(root, new ApiClient(base));
  }
}
