// Display names and keyboard shortcuts for the three label dimensions.

import {
  ADDRESSEE_VALUES,
  ALIGNMENT_VALUES,
  OBJECTIVE_VALUES,
  type Addressee,
  type Alignment,
  type Dimension,
  type Objective,
} from "./types.js";

export interface LabelChoice<T extends string> {
  value: T;
  label: string;
  key: string; // keyboard shortcut
}

export const ADDRESSEE_CHOICES: LabelChoice<Addressee>[] = [
  { value: "general", label: "Générale (toute la discussion)", key: "g" },
  { value: "targeted", label: "Ciblée (un message précis)", key: "t" },
];

export const ALIGNMENT_CHOICES: LabelChoice<Alignment>[] = [
  { value: "harmony", label: "Harmonie", key: "h" },
  { value: "side_with_A", label: "Prise de parti pour A", key: "a" },
  { value: "side_with_B", label: "Prise de parti pour B", key: "b" },
  { value: "opposition", label: "Opposition", key: "o" },
  { value: "neutrality", label: "Neutralité", key: "n" },
];

export const OBJECTIVE_CHOICES: LabelChoice<Objective>[] = [
  { value: "vote", label: "Vote", key: "1" },
  { value: "activity_report", label: "Rapport d'activité", key: "2" },
  { value: "complement", label: "Complément", key: "3" },
  { value: "support", label: "Appui", key: "4" },
  { value: "support_and_complement", label: "Appui et complément", key: "5" },
  { value: "opposition", label: "Opposition", key: "6" },
  { value: "question", label: "Question", key: "7" },
  { value: "answer", label: "Réponse", key: "8" },
  { value: "pacification", label: "Pacification", key: "9" },
  { value: "opening", label: "Ouverture", key: "0" },
];

export const CHOICES_BY_DIMENSION: Record<Dimension, LabelChoice<string>[]> = {
  addressee: ADDRESSEE_CHOICES,
  alignment: ALIGNMENT_CHOICES,
  objective: OBJECTIVE_CHOICES,
};

const VALID: Record<Dimension, readonly string[]> = {
  addressee: ADDRESSEE_VALUES,
  alignment: ALIGNMENT_VALUES,
  objective: OBJECTIVE_VALUES,
};

export function isValidLabel(dimension: Dimension, value: string): boolean {
  return VALID[dimension].includes(value);
}
