// Wire types mirroring the annotation service's JSON bodies.

export type AuthorKind = "registered" | "anonymous_ip" | "unsigned";

export interface MessageView {
  rank: number;
  letter: string;
  author_id: string | null;
  author_kind: AuthorKind;
  timestamp: string | null;
  indent_depth: number;
  text: string;
  word_count: number;
  is_c_first: boolean;
}

export interface ParticipantView {
  letter: string;
  author_id: string;
  arrival_rank: number;
}

export interface ThreadView {
  thread_id: string;
  title: string;
  source_page: string;
  schema: string;
  c_first_rank: number | null;
  participants: ParticipantView[];
  messages: MessageView[];
}

export type SampleRule = "sample1" | "sample2";

export interface Sample {
  name: string;
  rule: SampleRule;
  seed: number;
  size: number;
  thread_ids: string[];
}

export interface Progress {
  sample: string;
  annotator: string;
  total: number;
  done: number;
  remaining_ids: string[];
}

export const ADDRESSEE_VALUES = ["general", "targeted"] as const;
export type Addressee = (typeof ADDRESSEE_VALUES)[number];

export const ALIGNMENT_VALUES = [
  "harmony",
  "side_with_A",
  "side_with_B",
  "opposition",
  "neutrality",
] as const;
export type Alignment = (typeof ALIGNMENT_VALUES)[number];

export const OBJECTIVE_VALUES = [
  "vote",
  "activity_report",
  "complement",
  "support",
  "support_and_complement",
  "opposition",
  "question",
  "answer",
  "pacification",
  "opening",
] as const;
export type Objective = (typeof OBJECTIVE_VALUES)[number];

export interface AnnotationBody {
  thread_id: string;
  annotator_id: string;
  addressee: Addressee;
  alignment: Alignment;
  objective: Objective;
  note?: string | null;
}

export interface AnnotationRecord extends AnnotationBody {
  created_at: string;
  note: string | null;
}

export interface PostAnnotationResponse {
  annotation: AnnotationRecord;
  warnings: string[];
}

export interface AlignmentReport {
  n: number;
  proportions: Record<string, number>;
  prise_de_parti: number;
  side_with_b_share: number | null;
}

export interface ObjectiveReport {
  n: number;
  proportions: Record<string, number>;
}

export interface TargetedReport {
  sample: string;
  targeted_rate: number;
}

export const ADJUDICATOR_ID = "adjudicated";

export const DIMENSIONS = ["addressee", "alignment", "objective"] as const;
export type Dimension = (typeof DIMENSIONS)[number];
