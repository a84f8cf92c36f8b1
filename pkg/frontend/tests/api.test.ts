import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, UnreachableError } from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function stubFetch(responder: (url: string) => Response) {
  const calls: Call[] = [];
  const impl = async (input: any, init?: RequestInit) => {
    calls.push({ url: String(input), init });
    return responder(String(input));
  };
  return { calls, impl: impl as typeof fetch };
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("request shapes", () => {
  it("creates sessions with the evaluator id in the body", async () => {
    const { calls, impl } = stubFetch(() =>
      jsonResponse({ session_id: "s1", task_count: 7 }),
    );
    const client = new ApiClient("http://svc", impl);
    const out = await client.createSession("study-1", "ev-9");
    expect(out).toEqual({ sessionId: "s1", taskCount: 7 });
    expect(calls[0].url).toBe("http://svc/studies/study-1/sessions");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ evaluator_id: "ev-9" });
  });

  it("submits both scores to the task endpoint", async () => {
    const { calls, impl } = stubFetch(() => jsonResponse({ ok: true }));
    const client = new ApiClient("http://svc", impl);
    await client.submitScores("s1", "t3", [4, 0]);
    expect(calls[0].url).toBe("http://svc/sessions/s1/tasks/t3/scores");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ scores: [4, 0] });
  });

  it("escapes ids in paths", async () => {
    const { calls, impl } = stubFetch(() => jsonResponse({ done: true }));
    await new ApiClient("http://svc", impl).nextTask("a/b");
    expect(calls[0].url).toBe("http://svc/sessions/a%2Fb/next");
  });

  it("parses task views verbatim", async () => {
    const view = {
      done: false,
      task_id: "t1",
      doc_id: "d1",
      text: "body",
      titles: ["one", "two"],
      progress: { done: 2, total: 10 },
    };
    const { impl } = stubFetch(() => jsonResponse(view));
    const task = await new ApiClient("http://svc", impl).nextTask("s1");
    expect(task).toEqual(view);
  });
});

describe("error mapping", () => {
  it("surfaces service error codes", async () => {
    const { impl } = stubFetch(() =>
      jsonResponse(
        { error: { code: "already_scored", message: "conflicting scores" } },
        409,
      ),
    );
    const client = new ApiClient("http://svc", impl);
    const err = await client.submitScores("s", "t", [1, 1]).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe("already_scored");
  });

  it("keeps the status text for non-JSON error bodies", async () => {
    const { impl } = stubFetch(
      () => new Response("boom", { status: 500, statusText: "Internal Server Error" }),
    );
    const err = await new ApiClient("http://svc", impl).nextTask("s").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("unknown");
  });

  it("wraps network failures as UnreachableError", async () => {
    const impl = (async () => {
      throw new TypeError("fetch failed");
    }) as typeof fetch;
    const err = await new ApiClient("http://svc", impl).health().catch((e) => e);
    expect(err).toBeInstanceOf(UnreachableError);
  });
});
