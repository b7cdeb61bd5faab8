/**
 * Thin fetch client for the /v1 decision-service API.
 *
 * Every call returns the parsed body plus the raw response text; callers
 * that need byte-level comparisons (the replay contract test) use the raw
 * text, panels use the parsed value.
 */

import type {
  ApiErrorBody,
  AssessRequest,
  DecisionReportTree,
  DecomposeResponse,
  DesignationResponse,
  EstimatePairRequest,
  ProfilesRequest,
  ProfilesResponse,
  ReplicabilityRequest,
  ReplicabilityResponse,
  ScenarioListResponse,
  ScenarioRecordTree,
  StudyTree,
  TransitionResponse,
  VarianceTripleTree,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export type ApiResult<T> =
  | { ok: true; status: number; value: T; raw: string }
  | { ok: false; status: number; error: ApiErrorBody; raw: string };

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async send<T>(method: string, path: string, body?: unknown): Promise<ApiResult<T>> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(this.baseUrl + path, init);
    const raw = await res.text();
    const parsed = JSON.parse(raw);
    if (!res.ok) {
      return { ok: false, status: res.status, error: parsed as ApiErrorBody, raw };
    }
    return { ok: true, status: res.status, value: parsed as T, raw };
  }

  health(): Promise<ApiResult<{ status: string }>> {
    return this.send("GET", "/v1/health");
  }

  decompose(
    body: VarianceTripleTree | { study: StudyTree },
  ): Promise<ApiResult<DecomposeResponse>> {
    return this.send("POST", "/v1/etz/decompose", body);
  }

  transition(body: EstimatePairRequest): Promise<ApiResult<TransitionResponse>> {
    return this.send("POST", "/v1/confset/transition", body);
  }

  designate(body: EstimatePairRequest): Promise<ApiResult<DesignationResponse>> {
    return this.send("POST", "/v1/confset/designate", body);
  }

  assess(body: AssessRequest): Promise<ApiResult<DecisionReportTree>> {
    return this.send("POST", "/v1/cbq/assess", body);
  }

  profiles(body: ProfilesRequest): Promise<ApiResult<ProfilesResponse>> {
    return this.send("POST", "/v1/sim/profiles", body);
  }

  replicability(body: ReplicabilityRequest): Promise<ApiResult<ReplicabilityResponse>> {
    return this.send("POST", "/v1/sim/replicability", body);
  }

  putScenario(id: string, record: ScenarioRecordTree): Promise<ApiResult<ScenarioRecordTree>> {
    return this.send("PUT", `/v1/scenarios/${encodeURIComponent(id)}`, record);
  }

  getScenario(id: string): Promise<ApiResult<ScenarioRecordTree>> {
    return this.send("GET", `/v1/scenarios/${encodeURIComponent(id)}`);
  }

  listScenarios(): Promise<ApiResult<ScenarioListResponse>> {
    return this.send("GET", "/v1/scenarios");
  }
}
