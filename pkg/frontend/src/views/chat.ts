/** Turn stream plus the learner's reply box and task editor. */

import type { Pending, TranscriptTurn } from "../api";

const SEVERITY_PATTERN = /^\[(negligible|small|major|fatal)\]/;

export interface ChatViewOptions {
  onReply: (content: string) => Promise<void>;
  onSubmitTask: (content: string) => Promise<void>;
}

export class ChatView {
  readonly root: HTMLElement;
  private stream: HTMLElement;
  private replyBox: HTMLTextAreaElement;
  private replyButton: HTMLButtonElement;
  private editor: HTMLTextAreaElement;
  private editorButton: HTMLButtonElement;
  private editorPane: HTMLElement;
  private statusLine: HTMLElement;

  constructor(private readonly options: ChatViewOptions) {
    this.root = document.createElement("section");
    this.root.id = "chat";
    this.root.className = "panel";

    this.stream = document.createElement("ol");
    this.stream.id = "turns";

    this.statusLine = document.createElement("p");
    this.statusLine.id = "chat-status";

    this.replyBox = document.createElement("textarea");
    this.replyBox.id = "reply";
    this.replyBox.placeholder = "Your answer...";
    this.replyButton = document.createElement("button");
    this.replyButton.id = "send-reply";
    this.replyButton.textContent = "Send answer";
    this.replyButton.addEventListener("click", () => void this.sendReply());
    const replyPane = document.createElement("div");
    replyPane.className = "reply-pane";
    replyPane.append(this.replyBox, this.replyButton);

    this.editor = document.createElement("textarea");
    this.editor.id = "task-editor";
    this.editor.rows = 8;
    this.editorButton = document.createElement("button");
    this.editorButton.id = "submit-task";
    this.editorButton.textContent = "Submit task";
    this.editorButton.addEventListener("click", () => void this.submitTask());
    this.editorPane = document.createElement("div");
    this.editorPane.id = "task-pane";
    this.editorPane.className = "task-pane hidden";
    const editorLabel = document.createElement("h3");
    editorLabel.textContent = "Practice task";
    this.editorPane.append(editorLabel, this.editor, this.editorButton);

    this.root.append(this.stream, this.statusLine, replyPane, this.editorPane);
    this.setPending({ kind: "working" });
  }

  appendTurns(turns: TranscriptTurn[]): void {
    for (const turn of turns) {
      if (this.stream.querySelector(`li.turn[data-index="${turn.index}"]`)) {
        continue; // already rendered (stream/response race)
      }
      const item = document.createElement("li");
      item.className = `turn role-${turn.role} kind-${turn.kind}`;
      item.dataset.index = String(turn.index);
      const severity = turn.kind === "feedback" ? SEVERITY_PATTERN.exec(turn.content) : null;
      if (severity) {
        item.classList.add(`severity-${severity[1]}`);
      }
      const who = document.createElement("span");
      who.className = "who";
      who.textContent = `${turn.role} · ${turn.kind.replace(/_/g, " ")}`;
      const body = document.createElement("p");
      body.textContent = turn.content;
      item.append(who, body);
      if (turn.scores) {
        const scores = document.createElement("small");
        scores.className = "scores";
        scores.textContent = Object.entries(turn.scores)
          .map(([name, value]) => `${name}: ${value.toFixed(2)}`)
          .join("  ");
        item.append(scores);
      }
      // keep DOM order == transcript index order even when events race replies
      const nextSibling = [...this.stream.querySelectorAll<HTMLElement>("li.turn")].find(
        (el) => Number(el.dataset.index) > turn.index,
      );
      this.stream.insertBefore(item, nextSibling ?? null);
    }
  }

  renderedIndices(): number[] {
    return [...this.stream.querySelectorAll<HTMLElement>("li.turn")].map((el) => Number(el.dataset.index));
  }

  setPending(pending: Pending, taskPrompt?: string): void {
    const awaitingReply = pending.kind === "question" || pending.kind === "dialogue";
    this.replyBox.disabled = !awaitingReply;
    this.replyButton.disabled = !awaitingReply;
    const awaitingTask = pending.kind === "task";
    this.editorPane.classList.toggle("hidden", !awaitingTask);
    this.editorButton.disabled = !awaitingTask;
    if (awaitingTask && taskPrompt !== undefined) {
      this.editor.value = taskPrompt.startsWith("#") ? taskPrompt : `# ${taskPrompt}\n`;
    }
    const labels: Record<string, string> = {
      question: "The tutor is waiting for your answer.",
      dialogue: "The tutor is waiting for your answer.",
      task: "Submit your solution to the practice task.",
      working: "The tutor is working...",
      done: "Session complete.",
      failed: `Session failed: ${pending.message ?? ""}`,
      suspended: "Session suspended; send a message to resume.",
    };
    this.statusLine.textContent = labels[pending.kind] ?? pending.kind;
    this.statusLine.dataset.pending = pending.kind;
  }

  private async sendReply(): Promise<void> {
    const content = this.replyBox.value.trim();
    if (!content) return;
    this.replyBox.value = "";
    await this.options.onReply(content);
  }

  private async submitTask(): Promise<void> {
    const content = this.editor.value.trim();
    if (!content) return;
    await this.options.onSubmitTask(content);
  }
}
