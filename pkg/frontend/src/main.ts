/** Console bootstrap: setup screen, then the live session screen. */

import { ApiClient, type Pending, type TranscriptTurn } from "./api";
import { SessionState } from "./state";
import { EventStream, type SseEvent } from "./sse";
import { ChatView } from "./views/chat";
import { ProgressView } from "./views/progress";
import { SetupView, type SetupSubmission } from "./views/setup";

export class ConsoleApp {
  readonly state = new SessionState();
  private chat: ChatView | null = null;
  private progress: ProgressView | null = null;
  private stream: EventStream | null = null;
  private showTrace = false;

  constructor(
    private readonly mount: HTMLElement,
    private readonly api: ApiClient = new ApiClient(),
    private readonly useLiveStream: boolean = true,
  ) {}

  start(): void {
    const setup = new SetupView({ onSubmit: (submission) => this.createSession(submission) });
    this.mount.replaceChildren(setup.root);
  }

  async createSession(submission: SetupSubmission): Promise<void> {
    const created = await this.api.createSession(submission.goal, submission.config, submission.materials);
    this.state.sessionId = created.session_id;
    this.state.goal = created.goal;
    this.showTrace = submission.showTrace;

    this.chat = new ChatView({
      onReply: (content) => this.reply(content),
      onSubmitTask: (content) => this.submitTask(content),
    });
    this.progress = new ProgressView(this.showTrace);
    const layout = document.createElement("main");
    layout.id = "session";
    const heading = document.createElement("h2");
    heading.id = "session-goal";
    heading.textContent = `Learning: ${created.goal}`;
    layout.append(heading, this.chat.root, this.progress.root);
    this.mount.replaceChildren(layout);

    this.applyReply(created.turns, created.pending);
    await this.refreshPanels();
    if (this.useLiveStream) {
      this.stream = new EventStream({
        urlFor: (lastId) => this.api.eventsUrl(this.state.sessionId, lastId, true),
        onEvent: (event) => this.onStreamEvent(event),
      });
      this.stream.start();
    }
  }

  private onStreamEvent(event: SseEvent): void {
    if (event.event !== "turn") return;
    const fresh = this.state.ingest([event.data as TranscriptTurn]);
    this.chat?.appendTurns(fresh);
  }

  private applyReply(turns: TranscriptTurn[], pending: Pending): void {
    const fresh = this.state.ingest(turns);
    this.chat?.appendTurns(fresh);
    this.state.pending = pending;
    this.chat?.setPending(pending, pending.kind === "task" ? this.state.latestTask()?.content : undefined);
  }

  private async reply(content: string): Promise<void> {
    const response = await this.api.sendMessage(this.state.sessionId, content);
    this.applyReply(response.turns, response.pending);
    await this.refreshPanels();
  }

  private async submitTask(content: string): Promise<void> {
    const pending = this.state.pending;
    if (pending.kind !== "task" || !pending.task_id) return;
    const response = await this.api.submitTask(this.state.sessionId, pending.task_id, content);
    this.applyReply(response.turns, response.pending);
    await this.refreshPanels();
  }

  async refreshPanels(): Promise<void> {
    if (!this.progress) return;
    const snapshot = await this.api.state(this.state.sessionId);
    this.progress.renderState(snapshot);
    if (this.showTrace) {
      const trace = await this.api.trace(this.state.sessionId);
      this.progress.renderTrace(trace.nodes);
    }
  }

  stop(): void {
    this.stream?.stop();
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new ConsoleApp(document.getElementById("app")!);
  app.start();
}
