// SVG builders for the three panels. Each returns a complete <svg>
// string from raw service numbers, so the renderers are plain functions
// that tests can inspect without a browser.

import type { TrajectoryPoint } from "./model.js";

const WIDTH = 440;
const HEIGHT = 280;
const MARGIN = { left: 42, right: 14, top: 16, bottom: 32 };

const plotWidth = WIDTH - MARGIN.left - MARGIN.right;
const plotHeight = HEIGHT - MARGIN.top - MARGIN.bottom;

function xScale(domainMax: number): (value: number) => number {
  return (value) => MARGIN.left + (value / domainMax) * plotWidth;
}

function yScale(domainMax: number): (value: number) => number {
  return (value) => MARGIN.top + plotHeight - (value / domainMax) * plotHeight;
}

function coord(value: number): string {
  return value.toFixed(2);
}

function svgOpen(label: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
    `role="img" aria-label="${label}">`
  );
}

// The trial lattice: enrolled on x, responders on y, the horizontal
// success boundary at height s, the diagonal futility boundary where
// non-responders reach t, and the recorded path. A what-if outcome is
// drawn as a dashed ghost segment.
export function latticeChart(
  points: TrajectoryPoint[],
  s: number,
  t: number,
  ghost: TrajectoryPoint | null = null,
): string {
  const maxEnrolled = s + t - 1;
  const x = xScale(maxEnrolled);
  const y = yScale(s);
  const parts: string[] = [svgOpen(`trial path over ${maxEnrolled} possible draws`)];

  parts.push(
    `<line class="axis" x1="${coord(x(0))}" y1="${coord(y(0))}" ` +
      `x2="${coord(x(maxEnrolled))}" y2="${coord(y(0))}"/>`,
    `<line class="axis" x1="${coord(x(0))}" y1="${coord(y(0))}" ` +
      `x2="${coord(x(0))}" y2="${coord(y(s))}"/>`,
  );

  parts.push(
    `<line class="boundary success-boundary" x1="${coord(x(s))}" y1="${coord(y(s))}" ` +
      `x2="${coord(x(maxEnrolled))}" y2="${coord(y(s))}"/>`,
  );
  parts.push(
    `<line class="boundary futility-boundary" x1="${coord(x(t))}" y1="${coord(y(0))}" ` +
      `x2="${coord(x(maxEnrolled))}" y2="${coord(y(s - 1))}"/>`,
  );

  const path = points
    .map((point) => `${coord(x(point.enrolled))},${coord(y(point.responders))}`)
    .join(" ");
  parts.push(`<polyline class="path" fill="none" points="${path}"/>`);

  const last = points[points.length - 1];
  if (last !== undefined) {
    parts.push(
      `<circle class="head" cx="${coord(x(last.enrolled))}" ` +
        `cy="${coord(y(last.responders))}" r="4"/>`,
    );
    if (ghost !== null) {
      parts.push(
        `<line class="ghost" stroke-dasharray="4 3" ` +
          `x1="${coord(x(last.enrolled))}" y1="${coord(y(last.responders))}" ` +
          `x2="${coord(x(ghost.enrolled))}" y2="${coord(y(ghost.responders))}"/>`,
        `<circle class="ghost" cx="${coord(x(ghost.enrolled))}" ` +
          `cy="${coord(y(ghost.responders))}" r="4"/>`,
      );
    }
  }

  parts.push(
    `<text class="label" x="${coord(x(maxEnrolled / 2))}" y="${HEIGHT - 6}">enrolled</text>`,
    `<text class="label vertical" x="12" y="${coord(y(s / 2))}">responders</text>`,
    "</svg>",
  );
  return parts.join("");
}

// Remaining-enrollment bars from (k, probability) pairs, heights scaled
// to the largest mass.
export function barChart(rows: [number, number][]): string {
  const parts: string[] = [svgOpen("remaining enrollment distribution")];
  if (rows.length === 0) {
    return parts.join("") + "</svg>";
  }
  const maxMass = Math.max(...rows.map(([, mass]) => mass));
  const slot = plotWidth / rows.length;
  const barWidth = Math.min(34, slot * 0.8);
  rows.forEach(([k, mass], index) => {
    const height = maxMass > 0 ? (mass / maxMass) * plotHeight : 0;
    const left = MARGIN.left + index * slot + (slot - barWidth) / 2;
    const top = MARGIN.top + plotHeight - height;
    parts.push(
      `<rect class="bar" data-k="${k}" data-mass="${mass}" x="${coord(left)}" ` +
        `y="${coord(top)}" width="${coord(barWidth)}" height="${coord(height)}"/>`,
      `<text class="tick" x="${coord(left + barWidth / 2)}" y="${HEIGHT - 10}">${k}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}

// Posterior density polyline from the service's (p, density) grid.
export function densityChart(pairs: [number, number][]): string {
  const parts: string[] = [svgOpen("posterior density of the response probability")];
  if (pairs.length === 0) {
    return parts.join("") + "</svg>";
  }
  const maxDensity = Math.max(...pairs.map(([, value]) => value));
  const x = xScale(1);
  const y = yScale(maxDensity > 0 ? maxDensity : 1);
  const line = pairs
    .map(([p, value]) => `${coord(x(p))},${coord(y(value))}`)
    .join(" ");
  parts.push(
    `<line class="axis" x1="${coord(x(0))}" y1="${coord(y(0))}" ` +
      `x2="${coord(x(1))}" y2="${coord(y(0))}"/>`,
    `<polyline class="density" fill="none" points="${line}"/>`,
    `<text class="label" x="${coord(x(0.5))}" y="${HEIGHT - 6}">response probability</text>`,
    "</svg>",
  );
  return parts.join("");
}
