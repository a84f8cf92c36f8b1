/** DOM wiring for the evaluator interface. All decision logic lives in
 * flow.ts; this file only renders state and forwards events. */

import { ApiClient } from "./api.js";
import {
  FlowState,
  SCORE_LABELS,
  SessionFlow,
  canSubmit,
  keyAction,
} from "./flow.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function serviceUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("service") ?? "http://localhost:8400";
}

class App {
  private readonly root: HTMLElement;
  private readonly flow: SessionFlow;
  private focused: "a" | "b" = "a";

  constructor(root: HTMLElement) {
    this.root = root;
    const api = new ApiClient(serviceUrl());
    this.flow = new SessionFlow(api, window.localStorage);
    this.flow.onChange = (state) => this.render(state);
    document.addEventListener("keydown", (ev) => this.onKey(ev));
  }

  async boot(): Promise<void> {
    const resumed = await this.flow.resume();
    if (!resumed) {
      this.renderJoinForm();
    }
  }

  private onKey(ev: KeyboardEvent): void {
    if (this.flow.state.phase !== "task") return;
    if (ev.target instanceof HTMLInputElement) return;
    const action = keyAction(ev.key, this.focused);
    if (action === null) return;
    ev.preventDefault();
    if (action.kind === "score") {
      this.flow.selectScore(action.title, action.value);
    } else if (action.kind === "focus") {
      this.focused = action.title;
      this.render(this.flow.state);
    } else {
      void this.flow.submit();
    }
  }

  private renderJoinForm(): void {
    this.root.replaceChildren();
    const form = el("form", "join");
    const studyInput = el("input") as HTMLInputElement;
    studyInput.placeholder = "study id";
    const evalInput = el("input") as HTMLInputElement;
    evalInput.placeholder = "your evaluator id";
    const button = el("button", "", "Start session");
    form.append(studyInput, evalInput, button);
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      if (studyInput.value && evalInput.value) {
        void this.flow.start(studyInput.value.trim(), evalInput.value.trim());
      }
    });
    this.root.append(el("h1", "", "Headline evaluation"), form);
  }

  private render(state: FlowState): void {
    switch (state.phase) {
      case "idle":
        this.renderJoinForm();
        return;
      case "loading":
        this.root.replaceChildren(el("p", "status", "Loading..."));
        return;
      case "task":
        this.renderTask(state);
        return;
      case "done":
        this.root.replaceChildren(
          el("h1", "", "Session complete"),
          el("p", "status", `You scored ${state.scored} tasks this sitting. Thank you!`),
        );
        return;
      case "error": {
        const retry = el("button", "", "Retry");
        retry.addEventListener("click", () => void this.flow.retry());
        this.root.replaceChildren(
          el("p", "error", state.message),
          ...(state.retryable ? [retry] : []),
        );
        return;
      }
    }
  }

  private renderTask(state: Extract<FlowState, { phase: "task" }>): void {
    const { task, selection } = state;
    this.root.replaceChildren();

    const header = el("header");
    const progress = el(
      "span",
      "progress",
      `Task ${task.progress.done + 1} of ${task.progress.total}`,
    );
    const instructions = el("a", "instructions", "Instructions");
    instructions.setAttribute("href", `${serviceUrl()}/instructions`);
    instructions.setAttribute("target", "_blank");
    header.append(progress, instructions);

    const article = el("article", "body-text", task.text);

    const titles = el("section", "titles");
    (["a", "b"] as const).forEach((slot, i) => {
      const card = el("div", "title-card" + (this.focused === slot ? " focused" : ""));
      card.append(el("h2", "", task.titles[i]));
      const scale = el("div", "scale");
      SCORE_LABELS.forEach((label, value) => {
        const btn = el("button", selection[slot] === value ? "selected" : "");
        btn.textContent = `${value + 1} ${label}`;
        btn.addEventListener("click", () => {
          this.focused = slot;
          this.flow.selectScore(slot, value);
        });
        scale.append(btn);
      });
      card.append(scale);
      card.addEventListener("click", () => {
        if (this.focused !== slot) {
          this.focused = slot;
          this.render(this.flow.state);
        }
      });
      titles.append(card);
    });

    const submit = el("button", "submit", "Submit both scores");
    submit.disabled = !canSubmit(selection);
    submit.addEventListener("click", () => void this.flow.submit());

    this.root.append(header, article, titles, submit);
    if (this.flow.lastError !== null) {
      this.root.append(el("p", "error", this.flow.lastError.message));
    }
  }
}

const rootEl = document.getElementById("app");
if (rootEl !== null) {
  void new App(rootEl).boot();
}
