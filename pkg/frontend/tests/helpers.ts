import { ApiClient } from "../src/api.js";
import { KeyValueStore } from "../src/flow.js";

export class MemoryStore implements KeyValueStore {
  private readonly map = new Map<string, string>();

  getItem(key: string): string | null {
    return this.map.has(key) ? this.map.get(key)! : null;
  }

  setItem(key: string, value: string): void {
    this.map.set(key, value);
  }

  removeItem(key: string): void {
    this.map.delete(key);
  }
}

export interface FakeTask {
  task_id: string;
  doc_id: string;
  text: string;
  titles: [string, string];
}

/** In-memory stand-in for the service: serves tasks in order, accepts one
 * score pair per task. Mirrors only the endpoints the flow uses. */
export class FakeApi {
  submitted: Array<{ taskId: string; scores: [number, number] }> = [];
  failNextSubmit: Error | null = null;
  private cursor = 0;

  constructor(private readonly tasks: FakeTask[]) {}

  async createSession(_studyId: string, _evaluatorId: string) {
    return { sessionId: "s-fake", taskCount: this.tasks.length };
  }

  async nextTask(_sessionId: string) {
    if (this.cursor >= this.tasks.length) {
      return { done: true as const };
    }
    const task = this.tasks[this.cursor];
    return {
      done: false as const,
      ...task,
      progress: { done: this.cursor, total: this.tasks.length },
    };
  }

  async submitScores(_sessionId: string, taskId: string, scores: [number, number]) {
    if (this.failNextSubmit !== null) {
      const err = this.failNextSubmit;
      this.failNextSubmit = null;
      throw err;
    }
    this.submitted.push({ taskId, scores });
    this.cursor += 1;
  }

  asClient(): ApiClient {
    return this as unknown as ApiClient;
  }
}
