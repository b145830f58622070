/**
 * Fetch-stream SSE client with replay-on-reconnect.
 *
 * The server tags every event with a monotone id; after a disconnect the
 * stream resumes from the last id seen, so no turn is lost or duplicated.
 */

export interface SseEvent {
  id: number;
  event: string;
  data: unknown;
}

export function parseSseFrames(buffer: string): { events: SseEvent[]; rest: string } {
  const frames = buffer.split(/\r?\n\r?\n/);
  const rest = frames.pop() ?? "";
  const events: SseEvent[] = [];
  for (const frame of frames) {
    let id = -1;
    let event = "message";
    const dataLines: string[] = [];
    for (const line of frame.split(/\r?\n/)) {
      if (line.startsWith("id:")) {
        id = Number(line.slice(3).trim());
      } else if (line.startsWith("event:")) {
        event = line.slice(6).trim();
      } else if (line.startsWith("data:")) {
        dataLines.push(line.slice(5).trim());
      }
    }
    if (dataLines.length === 0) continue;
    let data: unknown = dataLines.join("\n");
    try {
      data = JSON.parse(dataLines.join("\n"));
    } catch {
      // leave as text
    }
    events.push({ id, event, data });
  }
  return { events, rest };
}

export interface EventStreamOptions {
  urlFor: (lastId: number) => string;
  onEvent: (event: SseEvent) => void;
  onStatusChange?: (connected: boolean) => void;
  reconnectDelayMs?: number;
}

export class EventStream {
  private lastId = -1;
  private stopped = false;
  private controller: AbortController | null = null;

  constructor(private readonly options: EventStreamOptions) {}

  start(): void {
    this.stopped = false;
    void this.loop();
  }

  stop(): void {
    this.stopped = true;
    this.controller?.abort();
  }

  get lastEventId(): number {
    return this.lastId;
  }

  private async loop(): Promise<void> {
    const delay = this.options.reconnectDelayMs ?? 500;
    while (!this.stopped) {
      try {
        await this.consumeOnce();
      } catch {
        // fall through to reconnect
      }
      this.options.onStatusChange?.(false);
      if (this.stopped) return;
      await new Promise((resolve) => setTimeout(resolve, delay));
    }
  }

  private async consumeOnce(): Promise<void> {
    this.controller = new AbortController();
    const response = await fetch(this.options.urlFor(this.lastId), {
      signal: this.controller.signal,
      headers: { Accept: "text/event-stream" },
    });
    if (!response.ok || !response.body) {
      throw new Error(`stream unavailable: ${response.status}`);
    }
    this.options.onStatusChange?.(true);
    const reader = response.body.getReader();
    const decoder = new TextDecoder("utf-8");
    let buffer = "";
    while (!this.stopped) {
      const { value, done } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      const { events, rest } = parseSseFrames(buffer);
      buffer = rest;
      for (const event of events) {
        if (event.id > this.lastId) {
          this.lastId = event.id;
        }
        this.options.onEvent(event);
      }
    }
  }
}
