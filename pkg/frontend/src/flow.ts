/** Session state machine, kept free of DOM concerns so it can be tested
 * headlessly. The service is the source of truth; this tracks only the
 * in-flight task and pending score selections. */

import {
  ApiClient,
  NextTask,
  TaskView,
  UnreachableError,
} from "./api.js";

export const SCORE_LABELS = ["Very Bad", "Bad", "OK", "Good", "Very Good"];

export interface Selection {
  a: number | null;
  b: number | null;
}

export function emptySelection(): Selection {
  return { a: null, b: null };
}

export function canSubmit(sel: Selection): boolean {
  return sel.a !== null && sel.b !== null;
}

/** Map a keypress to a score action. Keys 1-5 score the focused title;
 * Tab switches focus; Enter submits when both titles are scored. */
export function keyAction(
  key: string,
  focused: "a" | "b",
): { kind: "score"; title: "a" | "b"; value: number }
  | { kind: "focus"; title: "a" | "b" }
  | { kind: "submit" }
  | null {
  if (key >= "1" && key <= "5") {
    return { kind: "score", title: focused, value: Number(key) - 1 };
  }
  if (key === "Tab") {
    return { kind: "focus", title: focused === "a" ? "b" : "a" };
  }
  if (key === "Enter") {
    return { kind: "submit" };
  }
  return null;
}

/** Minimal storage interface; localStorage in the browser, a Map in tests. */
export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

const SESSION_KEY = "titlesmith.session_id";

export type FlowState =
  | { phase: "idle" }
  | { phase: "loading" }
  | { phase: "task"; task: TaskView; selection: Selection }
  | { phase: "done"; scored: number }
  | { phase: "error"; message: string; retryable: boolean };

export class SessionFlow {
  state: FlowState = { phase: "idle" };
  /** Set when a submit fails transiently; the task and selections remain. */
  lastError: { message: string; retryable: boolean } | null = null;
  private sessionId: string | null = null;
  private scoredThisSitting = 0;
  onChange: (state: FlowState) => void = () => {};

  constructor(
    private readonly api: ApiClient,
    private readonly storage: KeyValueStore,
  ) {}

  private setState(state: FlowState) {
    this.state = state;
    this.lastError = null;
    this.onChange(state);
  }

  /** Resume a stored session if one exists; returns false otherwise. */
  async resume(): Promise<boolean> {
    const stored = this.storage.getItem(SESSION_KEY);
    if (stored === null) {
      return false;
    }
    this.sessionId = stored;
    await this.advance();
    return true;
  }

  async start(studyId: string, evaluatorId: string): Promise<void> {
    this.setState({ phase: "loading" });
    const { sessionId } = await this.api.createSession(studyId, evaluatorId);
    this.sessionId = sessionId;
    this.storage.setItem(SESSION_KEY, sessionId);
    await this.advance();
  }

  private async advance(): Promise<void> {
    if (this.sessionId === null) {
      throw new Error("no active session");
    }
    this.setState({ phase: "loading" });
    let next: NextTask;
    try {
      next = await this.api.nextTask(this.sessionId);
    } catch (err) {
      this.fail(err);
      return;
    }
    if (next.done) {
      this.storage.removeItem(SESSION_KEY);
      this.setState({ phase: "done", scored: this.scoredThisSitting });
      return;
    }
    this.setState({ phase: "task", task: next, selection: emptySelection() });
  }

  selectScore(title: "a" | "b", value: number): void {
    if (this.state.phase !== "task") {
      return;
    }
    if (value < 0 || value > 4) {
      throw new Error(`score out of range: ${value}`);
    }
    const selection = { ...this.state.selection, [title]: value };
    this.setState({ ...this.state, selection });
  }

  async submit(): Promise<void> {
    if (this.state.phase !== "task" || !canSubmit(this.state.selection)) {
      return;
    }
    const { task, selection } = this.state;
    try {
      await this.api.submitScores(this.sessionId!, task.task_id, [
        selection.a!,
        selection.b!,
      ]);
    } catch (err) {
      // Selections survive so a retry does not lose the evaluator's work.
      this.fail(err, { keepTask: true });
      return;
    }
    this.scoredThisSitting += 1;
    await this.advance();
  }

  /** Re-fetch the current task after a transient failure. */
  async retry(): Promise<void> {
    if (this.state.phase === "error" && this.sessionId !== null) {
      await this.advance();
    }
  }

  private fail(err: unknown, opts: { keepTask?: boolean } = {}): void {
    const retryable = err instanceof UnreachableError;
    const message = err instanceof Error ? err.message : String(err);
    if (opts.keepTask && this.state.phase === "task") {
      // Keep showing the task; the UI surfaces the error alongside it.
      this.lastError = { message, retryable };
      this.onChange(this.state);
      return;
    }
    this.setState({ phase: "error", message, retryable });
  }
}
