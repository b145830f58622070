/**
 * Typed client for the tutoring session API.
 *
 * Every endpoint the console touches is declared in API_ROUTES; the contract
 * test checks this catalog against the service's documented surface, so new
 * fetches must be added here, not inlined in views.
 */

export const API_ROUTES = {
  health: () => "/healthz",
  createSession: () => "/sessions",
  session: (id: string) => `/sessions/${id}`,
  messages: (id: string) => `/sessions/${id}/messages`,
  submission: (id: string, taskId: string) => `/sessions/${id}/tasks/${taskId}/submission`,
  state: (id: string) => `/sessions/${id}/state`,
  plan: (id: string) => `/sessions/${id}/plan`,
  trace: (id: string) => `/sessions/${id}/trace`,
  events: (id: string) => `/sessions/${id}/events`,
} as const;

export interface TranscriptTurn {
  index: number;
  role: "tutor" | "learner" | "system";
  kind:
    | "assessment_question"
    | "learner_answer"
    | "lesson"
    | "practice_task"
    | "task_submission"
    | "feedback"
    | "reflection";
  content: string;
  module: string;
  timestamp: number;
  scores?: Record<string, number>;
  target?: string;
}

export interface Pending {
  kind: "question" | "dialogue" | "task" | "working" | "done" | "failed" | "suspended";
  prompt?: string;
  task_id?: string;
  task_kind?: string;
  message?: string;
}

export interface SessionReply {
  turns: TranscriptTurn[];
  pending: Pending;
  done?: boolean;
}

export interface SessionCreated extends SessionReply {
  session_id: string;
  goal: string;
}

export interface SessionSummary {
  session_id: string;
  goal: string;
  status: string;
  turn_index: number;
  turns_limit: number;
  done: boolean;
  pending: Pending;
}

export interface VertexState {
  id: string;
  level: string;
  proficiency: number;
}

export interface StateSnapshot {
  session_id: string;
  goal: string;
  turn_index: number;
  turns_limit: number;
  done: boolean;
  model: {
    vertices: VertexState[];
    edges: [string, string][];
    current_level: string;
    overall: number;
    advancement_threshold: number;
  };
  descriptions: Record<string, string>;
}

export interface PlanView {
  goal: string;
  levels: Record<string, string[]>;
  materials: { source: string; summary: string }[];
}

export interface TraceNode {
  id: string;
  parent: string | null;
  action: string;
  U: number;
  N: number;
  terminal: boolean;
  reflection: string | null;
}

export interface SessionConfigInput {
  turns: number;
  question_type: string;
  teaching_style: string;
  question_frequency: string;
  interaction_mode: string;
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    const body = await response.json();
    return new ApiError(String(body.code ?? "error"), String(body.message ?? response.statusText), response.status);
  } catch {
    return new ApiError("error", response.statusText, response.status);
  }
}

export class ApiClient {
  constructor(public readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request(API_ROUTES.health());
  }

  createSession(goal: string, config: SessionConfigInput, materials: File[] = []): Promise<SessionCreated> {
    if (materials.length > 0) {
      const form = new FormData();
      form.set("goal", goal);
      form.set("config", JSON.stringify(config));
      for (const file of materials) {
        form.append("materials", file, file.name);
      }
      return this.request(API_ROUTES.createSession(), { method: "POST", body: form });
    }
    return this.request(API_ROUTES.createSession(), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ goal, config }),
    });
  }

  sendMessage(sessionId: string, content: string): Promise<SessionReply> {
    return this.request(API_ROUTES.messages(sessionId), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ content }),
    });
  }

  submitTask(sessionId: string, taskId: string, content: string): Promise<SessionReply> {
    return this.request(API_ROUTES.submission(sessionId, taskId), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ content }),
    });
  }

  summary(sessionId: string): Promise<SessionSummary> {
    return this.request(API_ROUTES.session(sessionId));
  }

  state(sessionId: string): Promise<StateSnapshot> {
    return this.request(API_ROUTES.state(sessionId));
  }

  plan(sessionId: string): Promise<PlanView> {
    return this.request(API_ROUTES.plan(sessionId));
  }

  trace(sessionId: string): Promise<{ nodes: TraceNode[] }> {
    return this.request(API_ROUTES.trace(sessionId));
  }

  eventsUrl(sessionId: string, lastId: number, follow: boolean): string {
    return `${this.baseUrl}${API_ROUTES.events(sessionId)}?last_id=${lastId}&follow=${follow}`;
  }
}
