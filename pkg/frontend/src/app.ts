// Page wiring. All state lives in one place; every mutation round-trips
// through the service and re-renders from the authoritative reply.

import {
  createTrial,
  getPosterior,
  getTrial,
  recordOutcome,
  ServiceFailure,
  undoOutcome,
} from "./api.js";
import type { CreateTrialBody, PosteriorPayload, TrialState } from "./api.js";
import { barChart, densityChart, latticeChart } from "./charts.js";
import {
  banner,
  canRecord,
  canUndo,
  headline,
  posteriorSummary,
  previewFor,
  previewPoint,
  trajectory,
} from "./model.js";

type WhatIf = "response" | "nonresponse" | null;

interface AppState {
  trial: TrialState | null;
  posterior: PosteriorPayload | null;
  whatIf: WhatIf;
  pending: boolean;
  notice: string | null;
}

const state: AppState = {
  trial: null,
  posterior: null,
  whatIf: null,
  pending: false,
  notice: null,
};

const base = "";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing element #${id}`);
  return found as T;
}

function setNotice(text: string | null): void {
  state.notice = text;
}

async function refreshPosterior(): Promise<void> {
  if (state.trial === null || state.trial.prior === null) {
    state.posterior = null;
    return;
  }
  try {
    state.posterior = await getPosterior(base, state.trial.id);
  } catch (failure) {
    state.posterior = null;
    if (failure instanceof ServiceFailure && failure.status !== 409) {
      setNotice(failure.message);
    }
  }
}

async function mutate(action: () => Promise<TrialState>): Promise<void> {
  if (state.pending) return;
  state.pending = true;
  setNotice(null);
  render();
  try {
    state.trial = await action();
    state.whatIf = null;
    await refreshPosterior();
  } catch (failure) {
    if (failure instanceof ServiceFailure) {
      setNotice(
        failure.status === 0
          ? `${failure.message} (your entries are safe; try again)`
          : failure.message,
      );
    } else {
      throw failure;
    }
  } finally {
    state.pending = false;
    render();
  }
}

function onCreate(event: Event): void {
  event.preventDefault();
  const s = Number(element<HTMLInputElement>("design-s").value);
  const t = Number(element<HTMLInputElement>("design-t").value);
  const useFixed = element<HTMLInputElement>("model-fixed").checked;
  const body: CreateTrialBody = { s, t };
  if (useFixed) {
    body.p = Number(element<HTMLInputElement>("fixed-p").value);
  } else {
    body.prior = {
      alpha: Number(element<HTMLInputElement>("prior-alpha").value),
      beta: Number(element<HTMLInputElement>("prior-beta").value),
    };
  }
  void mutate(() => createTrial(base, body));
}

function render(): void {
  const trial = state.trial;
  element("notice").textContent = state.notice ?? "";

  const recordButtons = [
    element<HTMLButtonElement>("record-response"),
    element<HTMLButtonElement>("record-nonresponse"),
    element<HTMLButtonElement>("whatif-response"),
    element<HTMLButtonElement>("whatif-nonresponse"),
  ];
  for (const button of recordButtons) button.disabled = !canRecord(trial, state.pending);
  element<HTMLButtonElement>("undo").disabled = !canUndo(trial, state.pending);

  if (trial === null) {
    element("session").hidden = true;
    return;
  }
  element("session").hidden = false;

  const report = state.whatIf === null ? trial.report : null;
  const shown = report ?? previewFor(trial.report, state.whatIf === "response")!;
  const ghostLabel = state.whatIf === null ? "" : `what-if: ${state.whatIf}`;

  element("banner").textContent = banner(shown) ?? "";
  element("banner").className = `banner ${shown.status}`;
  element("headline").textContent = headline(shown);
  element("counts").textContent =
    `${shown.s_obs} responders, ${shown.t_obs} non-responders, ` +
    `${shown.enrolled} enrolled (design s=${trial.s}, t=${trial.t})`;
  element("whatif-label").textContent = ghostLabel;

  const ghost =
    state.whatIf === null ? null : previewPoint(trial, state.whatIf === "response");
  element("lattice").innerHTML = latticeChart(
    trajectory(trial.outcomes),
    trial.s,
    trial.t,
    ghost,
  );
  element("remaining").innerHTML = barChart(shown.remaining_pmf ?? []);

  const posteriorText = posteriorSummary(shown);
  element("posterior-label").textContent = posteriorText ?? "";
  element("posterior").innerHTML = densityChart(state.posterior?.density ?? []);
  element("posterior-panel").hidden = trial.prior === null;
}

function bind(): void {
  element<HTMLFormElement>("create-form").addEventListener("submit", onCreate);
  element("record-response").addEventListener("click", () => {
    if (state.trial) void mutate(() => recordOutcome(base, state.trial!.id, true));
  });
  element("record-nonresponse").addEventListener("click", () => {
    if (state.trial) void mutate(() => recordOutcome(base, state.trial!.id, false));
  });
  element("undo").addEventListener("click", () => {
    if (state.trial) void mutate(() => undoOutcome(base, state.trial!.id));
  });
  element("whatif-response").addEventListener("click", () => {
    state.whatIf = state.whatIf === "response" ? null : "response";
    render();
  });
  element("whatif-nonresponse").addEventListener("click", () => {
    state.whatIf = state.whatIf === "nonresponse" ? null : "nonresponse";
    render();
  });
  element("reload").addEventListener("click", () => {
    if (state.trial) void mutate(() => getTrial(base, state.trial!.id));
  });
  element<HTMLInputElement>("model-fixed").addEventListener("change", syncModelInputs);
  element<HTMLInputElement>("model-prior").addEventListener("change", syncModelInputs);
  syncModelInputs();
}

function syncModelInputs(): void {
  const fixed = element<HTMLInputElement>("model-fixed").checked;
  element<HTMLInputElement>("fixed-p").disabled = !fixed;
  element<HTMLInputElement>("prior-alpha").disabled = fixed;
  element<HTMLInputElement>("prior-beta").disabled = fixed;
}

bind();
render();
