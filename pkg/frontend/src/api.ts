/** Typed client for the evaluation service HTTP API. */

export interface TaskView {
  done: false;
  task_id: string;
  doc_id: string;
  text: string;
  titles: [string, string];
  progress: { done: number; total: number };
}

export interface SessionDone {
  done: true;
}

export type NextTask = TaskView | SessionDone;

export interface StudyDoc {
  id: string;
  source: string;
  published_at?: string;
  title: string;
  text: string;
  generated_title: string;
}

export interface StudyConfig {
  allowed_sources?: string[] | null;
  one_doc_per_source?: boolean;
  batch_size?: number;
  seed?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Network failure (as opposed to an error response from the service). */
export class UnreachableError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${cause}`);
    this.name = "UnreachableError";
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new UnreachableError(err);
    }
    if (!resp.ok) {
      let code = "unknown";
      let message = resp.statusText;
      try {
        const body = await resp.json();
        if (body && body.error) {
          code = body.error.code ?? code;
          message = body.error.message ?? message;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, code, message);
    }
    return resp;
  }

  private async postJson(path: string, payload: unknown): Promise<any> {
    const resp = await this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return resp.json();
  }

  async health(): Promise<boolean> {
    const resp = await this.request("/health");
    const body = await resp.json();
    return body.status === "ok";
  }

  async instructions(): Promise<string> {
    const resp = await this.request("/instructions");
    return resp.text();
  }

  async createStudy(docs: StudyDoc[], config: StudyConfig = {}): Promise<string> {
    const body = await this.postJson("/studies", { docs, config });
    return body.study_id;
  }

  async createSession(
    studyId: string,
    evaluatorId: string,
  ): Promise<{ sessionId: string; taskCount: number }> {
    const body = await this.postJson(
      `/studies/${encodeURIComponent(studyId)}/sessions`,
      { evaluator_id: evaluatorId },
    );
    return { sessionId: body.session_id, taskCount: body.task_count };
  }

  async nextTask(sessionId: string): Promise<NextTask> {
    const resp = await this.request(
      `/sessions/${encodeURIComponent(sessionId)}/next`,
    );
    return resp.json();
  }

  async submitScores(
    sessionId: string,
    taskId: string,
    scores: [number, number],
  ): Promise<void> {
    await this.postJson(
      `/sessions/${encodeURIComponent(sessionId)}/tasks/${encodeURIComponent(taskId)}/scores`,
      { scores },
    );
  }
}
