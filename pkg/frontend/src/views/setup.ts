/** Session setup form: profile fields, trace toggle, material upload. */

import type { SessionConfigInput } from "../api";
import {
  INTERACTION_MODES,
  QUESTION_FREQUENCIES,
  QUESTION_TYPES,
  SETUP_DEFAULTS,
  TEACHING_STYLES,
  type SetupForm,
  validateSetup,
} from "../state";

export interface SetupSubmission {
  goal: string;
  config: SessionConfigInput;
  showTrace: boolean;
  materials: File[];
}

export interface SetupViewOptions {
  onSubmit: (submission: SetupSubmission) => Promise<void>;
}

function selectField(id: string, label: string, values: readonly string[], selected: string): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "field";
  wrap.textContent = label;
  const select = document.createElement("select");
  select.id = id;
  for (const value of values) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value;
    option.selected = value === selected;
    select.append(option);
  }
  wrap.append(select);
  return wrap;
}

export class SetupView {
  readonly root: HTMLElement;

  constructor(private readonly options: SetupViewOptions) {
    this.root = document.createElement("form");
    this.root.id = "setup";
    this.root.className = "setup panel";
    this.render();
  }

  private render(): void {
    const heading = document.createElement("h2");
    heading.textContent = "Start a session";

    const goal = document.createElement("label");
    goal.className = "field";
    goal.textContent = "Learning goal";
    const goalInput = document.createElement("input");
    goalInput.id = "goal";
    goalInput.placeholder = "e.g. KNN algorithm";
    goal.append(goalInput);

    const turns = document.createElement("label");
    turns.className = "field";
    turns.textContent = "Turns";
    const turnsInput = document.createElement("input");
    turnsInput.id = "turns";
    turnsInput.type = "number";
    turnsInput.value = String(SETUP_DEFAULTS.turns);
    turns.append(turnsInput);

    const trace = document.createElement("label");
    trace.className = "field checkbox";
    const traceInput = document.createElement("input");
    traceInput.id = "show-trace";
    traceInput.type = "checkbox";
    trace.append(traceInput, document.createTextNode("Show strategy search trace"));

    const materials = document.createElement("label");
    materials.className = "field";
    materials.textContent = "Study materials (optional)";
    const materialsInput = document.createElement("input");
    materialsInput.id = "materials";
    materialsInput.type = "file";
    materialsInput.multiple = true;
    materials.append(materialsInput);

    const errors = document.createElement("ul");
    errors.id = "setup-errors";
    errors.className = "errors";

    const submit = document.createElement("button");
    submit.id = "start";
    submit.type = "submit";
    submit.textContent = "Start session";

    this.root.append(
      heading,
      goal,
      turns,
      selectField("question-type", "Question type", QUESTION_TYPES, SETUP_DEFAULTS.question_type),
      selectField("teaching-style", "Teaching style", TEACHING_STYLES, SETUP_DEFAULTS.teaching_style),
      selectField(
        "question-frequency",
        "Question frequency",
        QUESTION_FREQUENCIES,
        SETUP_DEFAULTS.question_frequency,
      ),
      selectField("interaction-mode", "Interaction mode", INTERACTION_MODES, SETUP_DEFAULTS.interaction_mode),
      trace,
      materials,
      errors,
      submit,
    );

    this.root.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
  }

  collect(): SetupForm {
    const value = (id: string) => (this.root.querySelector(`#${id}`) as HTMLInputElement | HTMLSelectElement).value;
    return {
      goal: value("goal"),
      turns: Number(value("turns")),
      question_type: value("question-type"),
      teaching_style: value("teaching-style"),
      question_frequency: value("question-frequency"),
      interaction_mode: value("interaction-mode"),
    };
  }

  showErrors(problems: string[]): void {
    const list = this.root.querySelector("#setup-errors") as HTMLUListElement;
    list.replaceChildren(
      ...problems.map((problem) => {
        const item = document.createElement("li");
        item.textContent = problem;
        return item;
      }),
    );
  }

  private async submit(): Promise<void> {
    const form = this.collect();
    const problems = validateSetup(form);
    this.showErrors(problems);
    if (problems.length > 0) {
      return; // invalid: no request leaves the client
    }
    const traceToggle = this.root.querySelector("#show-trace") as HTMLInputElement;
    const filesInput = this.root.querySelector("#materials") as HTMLInputElement;
    const materials = filesInput.files ? [...filesInput.files] : [];
    try {
      await this.options.onSubmit({
        goal: form.goal.trim(),
        config: {
          turns: form.turns,
          question_type: form.question_type,
          teaching_style: form.teaching_style,
          question_frequency: form.question_frequency,
          interaction_mode: form.interaction_mode,
        },
        showTrace: traceToggle.checked,
        materials,
      });
    } catch (error) {
      const message =
        error instanceof Error && "code" in error
          ? `${(error as { code: string }).code}: ${error.message}`
          : String(error);
      this.showErrors([message]);
    }
  }
}
