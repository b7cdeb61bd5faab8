/**
 * Hand-rolled SVG chart builders: pure functions from response data to SVG
 * markup strings. Geometry (scales, pixel positions) is rendering; the
 * numbers drawn are always response fields carried verbatim in data-value
 * attributes on the marks.
 */

import { esc } from "./render.js";
import type { EndpointEstimateTree, ProfileRowTree } from "./types.js";

const FONT = `font-family="sans-serif" font-size="10"`;

function scale(domainLo: number, domainHi: number, rangeLo: number, rangeHi: number) {
  const span = domainHi - domainLo;
  return (x: number) =>
    span === 0 ? (rangeLo + rangeHi) / 2 : rangeLo + ((x - domainLo) / span) * (rangeHi - rangeLo);
}

/**
 * 50-bin predictive histogram with a marker line at the headline quantile
 * and a reference line at zero. `bins` is the response's [center, count]
 * pairs; each bar carries its pair verbatim.
 */
export function histogramSvg(
  bins: Array<[number, number]>,
  marker: number | null,
  width = 520,
  height = 180,
): string {
  if (bins.length === 0) {
    return `<svg class="histogram" width="${width}" height="${height}"></svg>`;
  }
  const pad = 12;
  const centers = bins.map(([c]) => c);
  const counts = bins.map(([, n]) => n);
  const step = bins.length > 1 ? centers[1] - centers[0] : 1;
  const lo = Math.min(centers[0] - step / 2, marker ?? Infinity, 0);
  const hi = Math.max(centers[bins.length - 1] + step / 2, marker ?? -Infinity, 0);
  const sx = scale(lo, hi, pad, width - pad);
  const sy = scale(0, Math.max(...counts, 1), height - pad, pad);
  const barWidth = Math.max(1, sx(centers[0] + step) - sx(centers[0]) - 1);

  const bars = bins
    .map(([center, count], i) => {
      const x = sx(center - step / 2);
      const y = sy(count);
      const h = sy(0) - y;
      return (
        `<rect class="bar" x="${x.toFixed(2)}" y="${y.toFixed(2)}" ` +
        `width="${barWidth.toFixed(2)}" height="${h.toFixed(2)}" ` +
        `data-field="quantile_histogram.${i}" data-value="${esc(String([center, count]))}"/>`
      );
    })
    .join("");

  const zeroX = sx(0);
  const zeroLine = `<line class="zero" x1="${zeroX.toFixed(2)}" y1="${pad}" x2="${zeroX.toFixed(2)}" y2="${height - pad}"/>`;
  const markerLine =
    marker === null
      ? ""
      : `<line class="marker" x1="${sx(marker).toFixed(2)}" y1="${pad}" x2="${sx(marker).toFixed(2)}" y2="${height - pad}" data-field="cbq" data-value="${esc(String(marker))}"/>`;

  return (
    `<svg class="histogram" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" ${FONT}>` +
    `${bars}${zeroLine}${markerLine}</svg>`
  );
}

/**
 * Longitudinal mean profiles for one replication: one polyline per arm
 * (treatment solid, control dashed) over the visit weeks.
 */
export function profilesSvg(rows: ProfileRowTree[], width = 520, height = 220): string {
  if (rows.length === 0) {
    return `<svg class="profiles" width="${width}" height="${height}"></svg>`;
  }
  const pad = 18;
  const weeks = rows.map((r) => r.week);
  const means = rows.map((r) => r.mean_y);
  const sx = scale(Math.min(...weeks), Math.max(...weeks), pad, width - pad);
  const lo = Math.min(...means);
  const hi = Math.max(...means);
  const slack = (hi - lo || 1) * 0.08;
  const sy = scale(lo - slack, hi + slack, height - pad, pad);

  const lines = ["rx", "control"]
    .map((arm) => {
      const pts = rows
        .filter((r) => r.arm === arm)
        .map((r) => `${sx(r.week).toFixed(2)},${sy(r.mean_y).toFixed(2)}`)
        .join(" ");
      const dash = arm === "control" ? ` stroke-dasharray="5,3"` : "";
      return `<polyline class="arm-${arm}" fill="none" points="${pts}"${dash} data-arm="${arm}"/>`;
    })
    .join("");

  return (
    `<svg class="profiles" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" ${FONT}>` +
    `${lines}</svg>`
  );
}

/**
 * Designation geometry: the estimate pair plotted against the axes, the
 * equal-efficacy diagonal, and the meaningful-difference band around it.
 * Band offsets come from the request's c_md; the point is the request's
 * estimates. Verdict text lives in the panel, not here.
 */
export function quadrantSvg(
  e1: EndpointEstimateTree,
  e2: EndpointEstimateTree,
  cMd: number,
  size = 260,
): string {
  const pad = 14;
  const m = Math.max(Math.abs(e1.theta_hat), Math.abs(e2.theta_hat), cMd, 1) * 1.4;
  const sx = scale(-m, m, pad, size - pad);
  const sy = scale(-m, m, size - pad, pad);
  const seg = (x1: number, y1: number, x2: number, y2: number, cls: string) =>
    `<line class="${cls}" x1="${sx(x1).toFixed(2)}" y1="${sy(y1).toFixed(2)}" x2="${sx(x2).toFixed(2)}" y2="${sy(y2).toFixed(2)}"/>`;

  return (
    `<svg class="quadrants" width="${size}" height="${size}" viewBox="0 0 ${size} ${size}" ${FONT}>` +
    seg(-m, 0, m, 0, "axis") +
    seg(0, -m, 0, m, "axis") +
    seg(-m, -m, m, m, "diagonal") +
    seg(-m, -m + cMd, m - cMd, m, "band") +
    seg(-m + cMd, -m, m, m - cMd, "band") +
    `<circle class="estimate" cx="${sx(e1.theta_hat).toFixed(2)}" cy="${sy(e2.theta_hat).toFixed(2)}" r="4"/>` +
    `</svg>`
  );
}
