// Typed client for the trial service. One function per endpoint, all
// numbers passed through untouched.

export interface WirePrior {
  alpha: number;
  beta: number;
}

export interface PosteriorComponent {
  endpoint: string | null;
  weight: number;
  alpha: number;
  beta: number;
}

export type TrialStatus = "Ongoing" | "StoppedSuccess" | "StoppedFutility";

export interface InterimReport {
  s_obs: number;
  t_obs: number;
  enrolled: number;
  status: TrialStatus;
  p: number | null;
  remaining_support: [number, number] | null;
  remaining_pmf: [number, number][] | null;
  posterior: { components: PosteriorComponent[] } | null;
  predicted_success_probability: number | null;
  preview: { response: InterimReport; nonresponse: InterimReport } | null;
}

export interface TrialState {
  id: string;
  created_at: number;
  s: number;
  t: number;
  p: number | null;
  prior: WirePrior | null;
  outcomes: number[];
  report: InterimReport;
}

export interface PosteriorPayload {
  components: PosteriorComponent[];
  density: [number, number][];
}

export interface TableLookup {
  columns: string[];
  meta: Record<string, string>;
  rows: number[][];
}

export interface CreateTrialBody {
  s: number;
  t: number;
  p?: number;
  prior?: WirePrior;
}

export class ServiceFailure extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ServiceFailure";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (cause) {
    throw new ServiceFailure(0, "unreachable", `service unreachable: ${String(cause)}`);
  }
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const code = body?.code ?? "error";
    const message = body?.message ?? `${response.status} ${response.statusText}`;
    throw new ServiceFailure(response.status, code, message);
  }
  return body as T;
}

function jsonPost(payload?: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: payload === undefined ? undefined : JSON.stringify(payload),
  };
}

export function createTrial(base: string, body: CreateTrialBody): Promise<TrialState> {
  return request(`${base}/api/trials`, jsonPost(body));
}

export function getTrial(base: string, id: string): Promise<TrialState> {
  return request(`${base}/api/trials/${id}`);
}

export function recordOutcome(
  base: string,
  id: string,
  response: boolean,
): Promise<TrialState> {
  return request(`${base}/api/trials/${id}/outcomes`, jsonPost({ response }));
}

export function undoOutcome(base: string, id: string): Promise<TrialState> {
  return request(`${base}/api/trials/${id}/undo`, jsonPost());
}

export function getPosterior(base: string, id: string): Promise<PosteriorPayload> {
  return request(`${base}/api/trials/${id}/posterior`);
}

export function getPmf(base: string, p: number, s: number, t: number): Promise<TableLookup> {
  return request(`${base}/api/snb/pmf?p=${p}&s=${s}&t=${t}`);
}

export function getMoments(
  base: string,
  s: number,
  t: number,
  grid: string,
): Promise<TableLookup> {
  return request(`${base}/api/snb/moments?s=${s}&t=${t}&grid=${encodeURIComponent(grid)}`);
}
