/**
 * Console-side session state: an index-ordered, de-duplicated turn list plus
 * the current await point. Replayed events after a reconnect fold in without
 * reordering or duplicating anything.
 */

import type { Pending, TranscriptTurn } from "./api";

export class SessionState {
  sessionId = "";
  goal = "";
  pending: Pending = { kind: "working" };
  private byIndex = new Map<number, TranscriptTurn>();

  get turns(): TranscriptTurn[] {
    return [...this.byIndex.values()].sort((a, b) => a.index - b.index);
  }

  ingest(turns: TranscriptTurn[]): TranscriptTurn[] {
    const fresh: TranscriptTurn[] = [];
    for (const turn of turns) {
      if (!this.byIndex.has(turn.index)) {
        this.byIndex.set(turn.index, turn);
        fresh.push(turn);
      }
    }
    return fresh.sort((a, b) => a.index - b.index);
  }

  latestTask(): TranscriptTurn | undefined {
    return [...this.byIndex.values()]
      .filter((t) => t.kind === "practice_task")
      .sort((a, b) => b.index - a.index)[0];
  }
}

export const QUESTION_TYPES = ["general", "math_algorithm", "code_implementation"] as const;
export const TEACHING_STYLES = ["simple", "detailed"] as const;
export const QUESTION_FREQUENCIES = ["low", "high"] as const;
export const INTERACTION_MODES = ["active", "passive", "mixed"] as const;

export interface SetupForm {
  goal: string;
  turns: number;
  question_type: string;
  teaching_style: string;
  question_frequency: string;
  interaction_mode: string;
}

export const SETUP_DEFAULTS: SetupForm = {
  goal: "",
  turns: 10,
  question_type: "general",
  teaching_style: "detailed",
  question_frequency: "high",
  interaction_mode: "passive",
};

/** Client-side mirror of the session config invariants. */
export function validateSetup(form: SetupForm): string[] {
  const problems: string[] = [];
  if (!form.goal.trim()) {
    problems.push("a learning goal is required");
  }
  if (!Number.isInteger(form.turns) || form.turns < 1) {
    problems.push("turns must be an integer of at least 1");
  }
  if (!QUESTION_TYPES.includes(form.question_type as (typeof QUESTION_TYPES)[number])) {
    problems.push(`unknown question type: ${form.question_type}`);
  }
  if (!TEACHING_STYLES.includes(form.teaching_style as (typeof TEACHING_STYLES)[number])) {
    problems.push(`unknown teaching style: ${form.teaching_style}`);
  }
  if (!QUESTION_FREQUENCIES.includes(form.question_frequency as (typeof QUESTION_FREQUENCIES)[number])) {
    problems.push(`unknown question frequency: ${form.question_frequency}`);
  }
  if (!INTERACTION_MODES.includes(form.interaction_mode as (typeof INTERACTION_MODES)[number])) {
    problems.push(`unknown interaction mode: ${form.interaction_mode}`);
  }
  return problems;
}

export const LEVELS = ["memory", "comprehension", "application", "analysis", "evaluation", "creation"] as const;
