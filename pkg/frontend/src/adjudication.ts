// Adjudication view: annotators' labels side by side per dimension,
// disagreements highlighted, with an entry row saving the reference label
// under the reserved annotator id.

import type { ApiClient } from "./api.js";
import { CHOICES_BY_DIMENSION } from "./labels.js";
import {
  ADJUDICATOR_ID,
  DIMENSIONS,
  type Addressee,
  type Alignment,
  type AnnotationRecord,
  type Dimension,
  type Objective,
} from "./types.js";

export interface Comparison {
  threadId: string;
  annotators: string[]; // without the adjudicator
  byAnnotator: Map<string, AnnotationRecord>;
  adjudicated: AnnotationRecord | null;
}

export function buildComparison(
  threadId: string,
  annotations: AnnotationRecord[],
): Comparison {
  const relevant = annotations.filter((a) => a.thread_id === threadId);
  const byAnnotator = new Map<string, AnnotationRecord>();
  let adjudicated: AnnotationRecord | null = null;
  for (const annotation of relevant) {
    if (annotation.annotator_id === ADJUDICATOR_ID) {
      adjudicated = annotation;
    } else {
      byAnnotator.set(annotation.annotator_id, annotation);
    }
  }
  return {
    threadId,
    annotators: [...byAnnotator.keys()].sort(),
    byAnnotator,
    adjudicated,
  };
}

export function disagreeingDimensions(comparison: Comparison): Dimension[] {
  return DIMENSIONS.filter((dimension) => {
    const values = new Set(
      comparison.annotators.map(
        (name) => comparison.byAnnotator.get(name)![dimension],
      ),
    );
    return values.size > 1;
  });
}

export class AdjudicationView {
  readonly element: HTMLElement;
  private comparison: Comparison | null = null;
  private readonly selects = new Map<Dimension, HTMLSelectElement>();

  constructor(
    private readonly client: ApiClient,
    private readonly sample: string,
    private readonly threadId: string,
  ) {
    this.element = document.createElement("section");
    this.element.className = "adjudication";
  }

  async load(): Promise<void> {
    const annotations = await this.client.listAnnotations({ sample: this.sample });
    this.comparison = buildComparison(this.threadId, annotations);
    this.render();
  }

  private render(): void {
    const comparison = this.comparison;
    this.element.replaceChildren();
    if (!comparison) {
      return;
    }
    const heading = document.createElement("h2");
    heading.textContent = `Adjudication — ${comparison.threadId}`;
    this.element.append(heading);

    if (comparison.annotators.length < 2) {
      const notice = document.createElement("p");
      notice.className = "adjudication-disabled";
      notice.textContent =
        "Adjudication indisponible : il faut au moins deux annotations sur ce fil.";
      this.element.append(notice);
      return;
    }

    const disagreements = new Set(disagreeingDimensions(comparison));
    const table = document.createElement("table");
    table.className = "comparison";
    const head = document.createElement("tr");
    head.append(document.createElement("th"));
    for (const name of comparison.annotators) {
      const th = document.createElement("th");
      th.textContent = name;
      head.append(th);
    }
    table.append(head);

    for (const dimension of DIMENSIONS) {
      const row = document.createElement("tr");
      row.dataset.dimension = dimension;
      if (disagreements.has(dimension)) {
        row.classList.add("disagreement");
      }
      const th = document.createElement("th");
      th.textContent = dimension;
      row.append(th);
      for (const name of comparison.annotators) {
        const td = document.createElement("td");
        td.textContent = comparison.byAnnotator.get(name)![dimension];
        row.append(td);
      }
      table.append(row);
    }
    this.element.append(table);

    const form = document.createElement("form");
    form.className = "adjudicated-entry";
    const legend = document.createElement("p");
    legend.textContent = comparison.adjudicated
      ? "Label adjugé enregistré ; le sauvegarder à nouveau le remplace."
      : "Label adjugé :";
    form.append(legend);
    for (const dimension of DIMENSIONS) {
      const select = document.createElement("select");
      select.name = dimension;
      for (const choice of CHOICES_BY_DIMENSION[dimension]) {
        const option = document.createElement("option");
        option.value = choice.value;
        option.textContent = choice.label;
        select.append(option);
      }
      const preset =
        comparison.adjudicated?.[dimension] ??
        this.majorityValue(comparison, dimension);
      if (preset) {
        select.value = preset;
      }
      this.selects.set(dimension, select);
      const label = document.createElement("label");
      label.textContent = `${dimension} `;
      label.append(select);
      form.append(label);
    }
    const save = document.createElement("button");
    save.type = "submit";
    save.textContent = "Enregistrer l'adjudication";
    form.append(save);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.save();
    });
    this.element.append(form);
  }

  private majorityValue(comparison: Comparison, dimension: Dimension): string | null {
    const counts = new Map<string, number>();
    for (const name of comparison.annotators) {
      const value = comparison.byAnnotator.get(name)![dimension];
      counts.set(value, (counts.get(value) ?? 0) + 1);
    }
    let best: string | null = null;
    let bestCount = 0;
    for (const [value, count] of counts) {
      if (count > bestCount) {
        best = value;
        bestCount = count;
      }
    }
    return bestCount * 2 > comparison.annotators.length ? best : null;
  }

  async save(): Promise<void> {
    await this.client.postAnnotation({
      thread_id: this.threadId,
      annotator_id: ADJUDICATOR_ID,
      addressee: this.selects.get("addressee")!.value as Addressee,
      alignment: this.selects.get("alignment")!.value as Alignment,
      objective: this.selects.get("objective")!.value as Objective,
    });
    await this.load();
  }
}
