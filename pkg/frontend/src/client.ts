/**
 * Thin typed wrapper over the /v1 annotation HTTP API. All correction
 * logic (validation, normalization, preview) lives server-side; this
 * client only moves JSON.
 */

import { Operation, serializeOperations } from "./operations.js";

export interface ApiError {
  code: string;
  message: string;
  field_path: string;
}

export interface TaskView {
  id: string;
  sentence: string;
  error_flag: number;
  error_type: string[];
  assigned: string[];
  status: "open" | "conflicting" | "resolved";
  submissions: Record<string, Operation[]>;
  resolution: Operation[] | null;
}

export interface PreviewResult {
  operations: Operation[];
  preview: string[];
}

export interface SubmissionResult extends PreviewResult {
  warnings: string[];
  status: string;
}

export interface DiffResult {
  task: string;
  agreement: boolean;
  realized: Record<string, string[]>;
  pairwise: {
    annotators: [string, string];
    agree: boolean;
    only_first: string[];
    only_second: string[];
  }[];
}

export class ServiceError extends Error {
  constructor(public readonly detail: ApiError, public readonly status: number) {
    super(`${detail.code}: ${detail.message}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class WorkbenchClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ServiceError(body as ApiError, response.status);
    }
    return body as T;
  }

  nextTask(annotator: string): Promise<TaskView> {
    return this.request(`/v1/tasks/next?annotator=${encodeURIComponent(annotator)}`);
  }

  getTask(id: string): Promise<TaskView> {
    return this.request(`/v1/tasks/${encodeURIComponent(id)}`);
  }

  /** Stateless server-side validation + normalization + preview. */
  preview(src: string, ops: Operation[]): Promise<PreviewResult> {
    const query = `src=${encodeURIComponent(src)}&ops=${encodeURIComponent(
      serializeOperations(ops),
    )}`;
    return this.request(`/v1/preview?${query}`);
  }

  submit(taskId: string, annotator: string, ops: Operation[]): Promise<SubmissionResult> {
    return this.request(`/v1/tasks/${encodeURIComponent(taskId)}/submissions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: `{"annotator":${JSON.stringify(annotator)},"operations":${serializeOperations(ops)}}`,
    });
  }

  diff(taskId: string): Promise<DiffResult> {
    return this.request(`/v1/tasks/${encodeURIComponent(taskId)}/diff`);
  }

  resolve(taskId: string, expert: string, ops: Operation[]): Promise<TaskView> {
    return this.request(`/v1/tasks/${encodeURIComponent(taskId)}/resolution`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: `{"expert":${JSON.stringify(expert)},"operations":${serializeOperations(ops)}}`,
    });
  }

  exportCorpus(includeOpen = false): Promise<Record<string, unknown>> {
    return this.request(`/v1/export?include_open=${includeOpen}`);
  }
}
