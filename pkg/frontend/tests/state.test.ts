/**
 * View-state and scheduler behavior: slider clamping, the 250 ms debounce
 * coalescing bursts into one request, single-flight queueing, in-order
 * response application, and error delivery. Timers are driven manually and
 * the issue function is a controllable fake, so no service is involved.
 */

import { describe, expect, it } from "vitest";

import {
  clampToRange,
  DEBOUNCE_MS,
  initialViewState,
  PanelScheduler,
  setSlider,
  SLIDER_RANGES,
  type TimerDriver,
} from "../src/state.js";

/** Manual timer driver: timers fire only when advance() reaches them. */
class FakeTimers implements TimerDriver {
  private now = 0;
  private nextHandle = 1;
  private pending = new Map<number, { at: number; fn: () => void }>();

  set(fn: () => void, ms: number): unknown {
    const handle = this.nextHandle++;
    this.pending.set(handle, { at: this.now + ms, fn });
    return handle;
  }

  clear(handle: unknown): void {
    this.pending.delete(handle as number);
  }

  advance(ms: number): void {
    this.now += ms;
    const due = [...this.pending.entries()]
      .filter(([, t]) => t.at <= this.now)
      .sort((a, b) => a[1].at - b[1].at);
    for (const [handle, timer] of due) {
      this.pending.delete(handle);
      timer.fn();
    }
  }

  get pendingCount(): number {
    return this.pending.size;
  }
}

/** Controllable async issue function: each call returns a deferred promise. */
function deferredIssuer<T>() {
  const calls: Array<{ resolve: (value: T) => void; reject: (err: unknown) => void }> = [];
  const issue = () =>
    new Promise<T>((resolve, reject) => {
      calls.push({ resolve, reject });
    });
  return { issue, calls };
}

async function settle(): Promise<void> {
  await Promise.resolve();
  await Promise.resolve();
  await Promise.resolve();
}

describe("slider validation", () => {
  it("clamps values into the declared ranges", () => {
    expect(clampToRange("sd_e", -5)).toBe(0);
    expect(clampToRange("sd_e", 3.3)).toBe(3.3);
    expect(clampToRange("sd_e", 99)).toBe(20);
    expect(clampToRange("n3_rx", 0)).toBe(2);
    expect(clampToRange("gamma", 1.5)).toBe(0.99);
  });

  it("maps non-finite input to the range minimum", () => {
    expect(clampToRange("reps", Number.NaN)).toBe(SLIDER_RANGES.reps.min);
    expect(clampToRange("sd_z", Number.POSITIVE_INFINITY)).toBe(SLIDER_RANGES.sd_z.min);
  });

  it("rejects unknown slider names", () => {
    expect(() => clampToRange("volume", 11)).toThrow(/unknown slider/);
  });

  it("setSlider clamps, records the move, and leaves equal values clean", () => {
    const state = initialViewState();
    expect(state.dirty).toBe(false);

    setSlider(state, "sd_e", state.sliders.sd_e);
    expect(state.dirty).toBe(false);

    setSlider(state, "n3_rx", 3000);
    expect(state.sliders.n3_rx).toBe(3000);
    expect(state.dirty).toBe(true);

    setSlider(state, "n3_c", 10 ** 9);
    expect(state.sliders.n3_c).toBe(SLIDER_RANGES.n3_c.max);
  });
});

describe("PanelScheduler", () => {
  it("coalesces a burst of changes into one request after the debounce", async () => {
    const timers = new FakeTimers();
    const { issue, calls } = deferredIssuer<number>();
    const applied: number[] = [];
    const scheduler = new PanelScheduler(issue, (v) => applied.push(v), DEBOUNCE_MS, timers);

    scheduler.request();
    scheduler.request();
    scheduler.request();
    expect(calls).toHaveLength(0);

    timers.advance(DEBOUNCE_MS);
    expect(calls).toHaveLength(1);

    calls[0].resolve(42);
    await settle();
    expect(applied).toEqual([42]);
    expect(timers.pendingCount).toBe(0);
  });

  it("re-arms the timer on each change, firing only after quiet time", () => {
    const timers = new FakeTimers();
    const { issue, calls } = deferredIssuer<number>();
    const scheduler = new PanelScheduler(issue, () => undefined, DEBOUNCE_MS, timers);

    scheduler.request();
    timers.advance(DEBOUNCE_MS - 1);
    expect(calls).toHaveLength(0);

    scheduler.request();
    timers.advance(DEBOUNCE_MS - 1);
    expect(calls).toHaveLength(0);

    timers.advance(1);
    expect(calls).toHaveLength(1);
  });

  it("keeps at most one request in flight and queues the follow-up", async () => {
    const timers = new FakeTimers();
    const { issue, calls } = deferredIssuer<string>();
    const applied: string[] = [];
    const scheduler = new PanelScheduler(issue, (v) => applied.push(v), DEBOUNCE_MS, timers);

    scheduler.request();
    timers.advance(DEBOUNCE_MS);
    expect(calls).toHaveLength(1);
    expect(scheduler.inFlight).toBe(true);

    scheduler.request();
    timers.advance(DEBOUNCE_MS);
    expect(calls).toHaveLength(1);

    calls[0].resolve("first");
    await settle();
    expect(calls).toHaveLength(2);

    calls[1].resolve("second");
    await settle();
    expect(applied).toEqual(["first", "second"]);
    expect(scheduler.inFlight).toBe(false);
  });

  it("applies responses in issue order", async () => {
    const timers = new FakeTimers();
    const { issue, calls } = deferredIssuer<string>();
    const applied: string[] = [];
    const scheduler = new PanelScheduler(issue, (v) => applied.push(v), DEBOUNCE_MS, timers);

    scheduler.fire();
    calls[0].resolve("a");
    await settle();

    scheduler.fire();
    calls[1].resolve("b");
    await settle();

    expect(applied).toEqual(["a", "b"]);
  });

  it("routes failures to onError without applying, then recovers", async () => {
    const timers = new FakeTimers();
    const { issue, calls } = deferredIssuer<string>();
    const applied: string[] = [];
    const errors: unknown[] = [];
    const scheduler = new PanelScheduler(
      issue,
      (v) => applied.push(v),
      DEBOUNCE_MS,
      timers,
      (err) => errors.push(err),
    );

    scheduler.fire();
    calls[0].reject(new Error("boom"));
    await settle();
    expect(applied).toEqual([]);
    expect(errors).toHaveLength(1);
    expect(scheduler.inFlight).toBe(false);

    scheduler.fire();
    calls[1].resolve("ok");
    await settle();
    expect(applied).toEqual(["ok"]);
  });

  it("fires queued work even when the in-flight request fails", async () => {
    const timers = new FakeTimers();
    const { issue, calls } = deferredIssuer<string>();
    const applied: string[] = [];
    const errors: unknown[] = [];
    const scheduler = new PanelScheduler(
      issue,
      (v) => applied.push(v),
      DEBOUNCE_MS,
      timers,
      (err) => errors.push(err),
    );

    scheduler.fire();
    scheduler.fire();
    calls[0].reject(new Error("boom"));
    await settle();

    expect(errors).toHaveLength(1);
    expect(calls).toHaveLength(2);
    calls[1].resolve("after");
    await settle();
    expect(applied).toEqual(["after"]);
  });
});
