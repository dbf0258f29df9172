// View-model helpers. Every value shown on screen is either a service
// number passed through a display transform (rounding, labels) or a pure
// rearrangement of service payloads; nothing here computes probabilities.

import type { InterimReport, PosteriorComponent, TrialState } from "./api.js";

export interface TrajectoryPoint {
  enrolled: number;
  responders: number;
}

// The cumulative lattice path: one point per enrolled patient, starting
// at the origin before any outcome is recorded.
export function trajectory(outcomes: number[]): TrajectoryPoint[] {
  const points: TrajectoryPoint[] = [{ enrolled: 0, responders: 0 }];
  let responders = 0;
  for (let i = 0; i < outcomes.length; i++) {
    responders += outcomes[i] === 1 ? 1 : 0;
    points.push({ enrolled: i + 1, responders });
  }
  return points;
}

export function onSuccessBoundary(point: TrajectoryPoint, s: number): boolean {
  return point.responders >= s;
}

export function onFutilityBoundary(point: TrajectoryPoint, t: number): boolean {
  return point.enrolled - point.responders >= t;
}

// A rendered path must stop the moment it first touches a boundary:
// every interior point stays strictly inside, and at most the final
// point may sit on a boundary.
export function trajectoryIsValid(points: TrajectoryPoint[], s: number, t: number): boolean {
  for (let i = 0; i < points.length - 1; i++) {
    const point = points[i]!;
    if (onSuccessBoundary(point, s) || onFutilityBoundary(point, t)) return false;
  }
  return true;
}

export function formatProbability(value: number): string {
  return value.toFixed(4);
}

// "Beta(7.5, 8.5)" from a wire component; JS number printing keeps halves
// and integers short, which is exactly the label we want.
export function betaLabel(component: Pick<PosteriorComponent, "alpha" | "beta">): string {
  return `Beta(${component.alpha}, ${component.beta})`;
}

export function headline(report: InterimReport): string {
  const value = report.predicted_success_probability;
  if (value === null) return "predicted success probability unavailable";
  return `Predicted probability of success ${formatProbability(value)}`;
}

export function banner(report: InterimReport): string | null {
  if (report.status === "Ongoing") return null;
  const verdict =
    report.status === "StoppedSuccess"
      ? `Stopped on the success boundary at enrollment ${report.enrolled}`
      : `Stopped for futility at enrollment ${report.enrolled}`;
  const components = report.posterior?.components;
  if (components && components.length === 1) {
    return `${verdict}; posterior ${betaLabel(components[0]!)}`;
  }
  return verdict;
}

export function posteriorSummary(report: InterimReport): string | null {
  const components = report.posterior?.components;
  if (!components || components.length === 0) return null;
  return components
    .map((component) =>
      component.weight === 1
        ? betaLabel(component)
        : `${betaLabel(component)} (weight ${formatProbability(component.weight)})`,
    )
    .join(" + ");
}

// The server embeds both hypothetical next states in every ongoing
// report, so a what-if costs no extra request and no client-side math.
export function previewFor(report: InterimReport, response: boolean): InterimReport | null {
  if (report.preview === null) return null;
  return response ? report.preview.response : report.preview.nonresponse;
}

export function previewPoint(trial: TrialState, response: boolean): TrajectoryPoint {
  const report = trial.report;
  return {
    enrolled: report.enrolled + 1,
    responders: report.s_obs + (response ? 1 : 0),
  };
}

export function canRecord(trial: TrialState | null, pending: boolean): boolean {
  return trial !== null && !pending && trial.report.status === "Ongoing";
}

export function canUndo(trial: TrialState | null, pending: boolean): boolean {
  return trial !== null && !pending && trial.outcomes.length > 0;
}
