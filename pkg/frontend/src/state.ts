/**
 * View state and request scheduling.
 *
 * Slider values are clamped into validated ranges before any request is
 * built, so the service never sees an out-of-range what-if input. Each
 * panel owns one PanelScheduler: slider changes are debounced (250 ms), at
 * most one request is in flight per panel, and responses are applied in
 * issue order (a stale response never overwrites a newer one).
 */

import type { DecisionReportTree, ProfilesResponse } from "./types.js";

export const DEBOUNCE_MS = 250;

export interface SliderRange {
  min: number;
  max: number;
  step: number;
}

/** Validated ranges for every what-if control. */
export const SLIDER_RANGES: Record<string, SliderRange> = {
  sd_e: { min: 0, max: 20, step: 0.1 },
  sd_traj: { min: 0, max: 20, step: 0.1 },
  sd_z: { min: 0, max: 20, step: 0.1 },
  n3_rx: { min: 2, max: 20000, step: 1 },
  n3_c: { min: 2, max: 20000, step: 1 },
  gamma: { min: 0.26, max: 0.99, step: 0.01 },
  d2: { min: 0, max: 0.49, step: 0.01 },
  seed: { min: 0, max: 2 ** 32 - 1, step: 1 },
  reps: { min: 100, max: 1000000, step: 100 },
};

export interface ScenarioViewState {
  scenarioId: string | null;
  sliders: {
    sd_e: number;
    sd_traj: number;
    sd_z: number;
    n3_rx: number;
    n3_c: number;
    gamma: number;
    d2: number;
    seed: number;
    reps: number;
  };
  /** true once any slider moved away from the loaded scenario's values */
  dirty: boolean;
  lastReport: DecisionReportTree | null;
  lastProfiles: ProfilesResponse[];
}

export function initialViewState(): ScenarioViewState {
  return {
    scenarioId: null,
    sliders: {
      sd_e: 3.3,
      sd_traj: 8.4,
      sd_z: 7.3,
      n3_rx: 1000,
      n3_c: 1000,
      gamma: 0.76,
      d2: 0.45,
      seed: 20260105,
      reps: 10000,
    },
    dirty: false,
    lastReport: null,
    lastProfiles: [],
  };
}

export function clampToRange(name: string, value: number): number {
  const range = SLIDER_RANGES[name];
  if (!range) {
    throw new Error(`unknown slider: ${name}`);
  }
  if (!Number.isFinite(value)) {
    return range.min;
  }
  return Math.min(range.max, Math.max(range.min, value));
}

export function setSlider(
  state: ScenarioViewState,
  name: keyof ScenarioViewState["sliders"],
  value: number,
): void {
  const clamped = clampToRange(name, value);
  if (state.sliders[name] !== clamped) {
    state.sliders[name] = clamped;
    state.dirty = true;
  }
}

export interface TimerDriver {
  set(fn: () => void, ms: number): unknown;
  clear(handle: unknown): void;
}

const realTimers: TimerDriver = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

/**
 * Debounced single-flight request runner for one panel.
 *
 * `request()` arms (or re-arms) the debounce timer; when it fires, the
 * issue function is called with a fresh sequence number. If a request is
 * already in flight the new one is queued and fired after the current one
 * settles, so at most one request is outstanding. Responses carry their
 * sequence number and are dropped unless newer than the last applied one.
 */
export class PanelScheduler<T> {
  private seq = 0;
  private appliedSeq = 0;
  private timerHandle: unknown = null;
  private inflight = false;
  private queued = false;

  constructor(
    private readonly issue: () => Promise<T>,
    private readonly apply: (value: T) => void,
    private readonly debounceMs: number = DEBOUNCE_MS,
    private readonly timers: TimerDriver = realTimers,
    private readonly onError: (err: unknown) => void = () => undefined,
  ) {}

  /** Call on every input change; coalesces bursts into one request. */
  request(): void {
    if (this.timerHandle !== null) {
      this.timers.clear(this.timerHandle);
    }
    this.timerHandle = this.timers.set(() => {
      this.timerHandle = null;
      this.fire();
    }, this.debounceMs);
  }

  /** Issue immediately, skipping the debounce (used for initial loads). */
  fire(): void {
    if (this.inflight) {
      this.queued = true;
      return;
    }
    void this.launch();
  }

  get inFlight(): boolean {
    return this.inflight;
  }

  private async launch(): Promise<void> {
    this.inflight = true;
    const seq = ++this.seq;
    try {
      const value = await this.issue();
      if (seq > this.appliedSeq) {
        this.appliedSeq = seq;
        this.apply(value);
      }
    } catch (err) {
      this.onError(err);
    } finally {
      this.inflight = false;
      if (this.queued) {
        this.queued = false;
        this.fire();
      }
    }
  }
}
