/**
 * Chart builders: geometry is free, but every number drawn must ride along
 * verbatim in data-value attributes, and identical inputs must produce
 * identical markup (pixel-identical plots for the same seed).
 */

import { describe, expect, it } from "vitest";

import { histogramSvg, profilesSvg, quadrantSvg } from "../src/charts.js";
import type { ProfileRowTree } from "../src/types.js";
import { extractStats, resolvePath } from "./dom.js";

function fakeBins(count: number): Array<[number, number]> {
  return Array.from({ length: count }, (_, i) => [-0.5 + i * 0.02, (i * 37) % 101]);
}

describe("histogramSvg", () => {
  it("draws one bar per bin carrying its [center, count] pair verbatim", () => {
    const bins = fakeBins(50);
    const svg = histogramSvg(bins, -0.106);
    expect(svg.match(/class="bar"/g)).toHaveLength(50);

    const report = { quantile_histogram: bins, cbq: -0.106 };
    const stats = extractStats(svg);
    expect(stats).toHaveLength(51);
    for (const { field, value } of stats) {
      expect(value).toBe(String(resolvePath(report, field)));
    }
  });

  it("marks the headline quantile and the zero reference", () => {
    const svg = histogramSvg(fakeBins(10), -0.25);
    expect(svg).toContain(`class="zero"`);
    expect(svg).toContain(`class="marker"`);
    expect(svg).toContain(`data-field="cbq" data-value="-0.25"`);

    const unmarked = histogramSvg(fakeBins(10), null);
    expect(unmarked).not.toContain(`class="marker"`);
  });

  it("is deterministic and tolerates empty input", () => {
    const bins = fakeBins(50);
    expect(histogramSvg(bins, -0.1)).toBe(histogramSvg(bins, -0.1));
    expect(histogramSvg([], null)).toContain("<svg");
  });
});

const ROWS: ProfileRowTree[] = [
  { week: 0, arm: "rx", n: 10, mean_y: 45.6, mean_change: 0 },
  { week: 40, arm: "rx", n: 9, mean_y: 42.5, mean_change: -3.1 },
  { week: 80, arm: "rx", n: 9, mean_y: 39.4, mean_change: -6.2 },
  { week: 0, arm: "control", n: 11, mean_y: 45.4, mean_change: 0 },
  { week: 40, arm: "control", n: 10, mean_y: 41.8, mean_change: -3.6 },
  { week: 80, arm: "control", n: 10, mean_y: 38.2, mean_change: -7.2 },
];

describe("profilesSvg", () => {
  it("draws one polyline per arm with one point per visit", () => {
    const svg = profilesSvg(ROWS);
    const rx = /<polyline class="arm-rx"[^>]*points="([^"]*)"/.exec(svg);
    const control = /<polyline class="arm-control"[^>]*points="([^"]*)"/.exec(svg);
    expect(rx).not.toBeNull();
    expect(control).not.toBeNull();
    expect(rx![1].split(" ")).toHaveLength(3);
    expect(control![1].split(" ")).toHaveLength(3);
    expect(svg).toContain("stroke-dasharray");
  });

  it("is pixel-identical for identical rows", () => {
    expect(profilesSvg(ROWS)).toBe(profilesSvg([...ROWS]));
    expect(profilesSvg([])).toContain("<svg");
  });
});

describe("quadrantSvg", () => {
  it("draws axes, the equal-efficacy diagonal, the band, and the estimate", () => {
    const svg = quadrantSvg({ theta_hat: 0.8, sigma: 0.477 }, { theta_hat: 1.0, sigma: 0.4235 }, 0.5);
    expect(svg.match(/class="axis"/g)).toHaveLength(2);
    expect(svg.match(/class="diagonal"/g)).toHaveLength(1);
    expect(svg.match(/class="band"/g)).toHaveLength(2);
    expect(svg.match(/class="estimate"/g)).toHaveLength(1);
  });
});
