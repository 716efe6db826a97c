// The three-dimension annotation form. Submit stays disabled until every
// dimension has a value; number/letter shortcuts select labels without the
// mouse and Enter submits.

import {
  ADDRESSEE_CHOICES,
  ALIGNMENT_CHOICES,
  OBJECTIVE_CHOICES,
  type LabelChoice,
} from "./labels.js";
import type { Addressee, Alignment, Objective } from "./types.js";

export interface FormValue {
  addressee: Addressee;
  alignment: Alignment;
  objective: Objective;
  note: string | null;
}

export class AnnotationForm {
  readonly element: HTMLFormElement;
  onSubmit: (value: FormValue) => void = () => {};

  private addressee: Addressee | null = null;
  private alignment: Alignment | null = null;
  private objective: Objective | null = null;
  private readonly noteInput: HTMLTextAreaElement;
  private readonly submitButton: HTMLButtonElement;
  private readonly errorBox: HTMLElement;

  constructor() {
    this.element = document.createElement("form");
    this.element.className = "annotation-form";
    this.element.append(
      this.fieldset("Destinataire", "addressee", ADDRESSEE_CHOICES),
      this.fieldset("Alignement", "alignment", ALIGNMENT_CHOICES),
      this.fieldset("Objectif", "objective", OBJECTIVE_CHOICES),
    );

    const noteLabel = document.createElement("label");
    noteLabel.className = "note-field";
    noteLabel.textContent = "Note (facultative)";
    this.noteInput = document.createElement("textarea");
    this.noteInput.name = "note";
    this.noteInput.rows = 2;
    noteLabel.append(this.noteInput);

    this.errorBox = document.createElement("p");
    this.errorBox.className = "form-error";
    this.errorBox.hidden = true;

    this.submitButton = document.createElement("button");
    this.submitButton.type = "submit";
    this.submitButton.textContent = "Enregistrer et passer au suivant";
    this.submitButton.disabled = true;

    this.element.append(noteLabel, this.errorBox, this.submitButton);
    this.element.addEventListener("submit", (event) => {
      event.preventDefault();
      this.submit();
    });
  }

  private fieldset(
    title: string,
    dimension: "addressee" | "alignment" | "objective",
    choices: LabelChoice<string>[],
  ): HTMLFieldSetElement {
    const fieldset = document.createElement("fieldset");
    fieldset.dataset.dimension = dimension;
    const legend = document.createElement("legend");
    legend.textContent = title;
    fieldset.append(legend);
    for (const choice of choices) {
      const label = document.createElement("label");
      label.className = "choice";
      const input = document.createElement("input");
      input.type = "radio";
      input.name = dimension;
      input.value = choice.value;
      input.addEventListener("change", () => {
        this.setValue(dimension, choice.value);
      });
      const hint = document.createElement("kbd");
      hint.textContent = choice.key;
      label.append(input, document.createTextNode(` ${choice.label} `), hint);
      fieldset.append(label);
    }
    return fieldset;
  }

  setValue(dimension: "addressee" | "alignment" | "objective", value: string): void {
    if (dimension === "addressee") {
      this.addressee = value as Addressee;
    } else if (dimension === "alignment") {
      this.alignment = value as Alignment;
    } else {
      this.objective = value as Objective;
    }
    const input = this.element.querySelector<HTMLInputElement>(
      `input[name="${dimension}"][value="${value}"]`,
    );
    if (input) {
      input.checked = true;
    }
    this.refresh();
  }

  /** Route a keystroke to its label; returns true when it selected one. */
  handleKey(key: string): boolean {
    if (key === "Enter") {
      if (this.isComplete()) {
        this.submit();
        return true;
      }
      return false;
    }
    const lower = key.toLowerCase();
    for (const [dimension, choices] of [
      ["addressee", ADDRESSEE_CHOICES],
      ["alignment", ALIGNMENT_CHOICES],
      ["objective", OBJECTIVE_CHOICES],
    ] as const) {
      const hit = choices.find((c) => c.key === lower);
      if (hit) {
        this.setValue(dimension, hit.value);
        return true;
      }
    }
    return false;
  }

  isComplete(): boolean {
    return this.addressee !== null && this.alignment !== null && this.objective !== null;
  }

  get submitDisabled(): boolean {
    return this.submitButton.disabled;
  }

  value(): FormValue | null {
    if (!this.addressee || !this.alignment || !this.objective) {
      return null;
    }
    const note = this.noteInput.value.trim();
    return {
      addressee: this.addressee,
      alignment: this.alignment,
      objective: this.objective,
      note: note ? note : null,
    };
  }

  private submit(): void {
    const value = this.value();
    if (value) {
      this.onSubmit(value);
    }
  }

  private refresh(): void {
    this.submitButton.disabled = !this.isComplete();
  }

  setBusy(busy: boolean): void {
    this.submitButton.disabled = busy || !this.isComplete();
    this.element
      .querySelectorAll<HTMLInputElement>("input[type=radio]")
      .forEach((input) => {
        input.disabled = busy;
      });
  }

  showError(message: string): void {
    this.errorBox.hidden = false;
    this.errorBox.textContent = message;
  }

  clearError(): void {
    this.errorBox.hidden = true;
    this.errorBox.textContent = "";
  }

  reset(): void {
    this.addressee = null;
    this.alignment = null;
    this.objective = null;
    this.noteInput.value = "";
    this.element
      .querySelectorAll<HTMLInputElement>("input[type=radio]")
      .forEach((input) => {
        input.checked = false;
      });
    this.clearError();
    this.refresh();
  }
}
