// In-memory stand-in for the annotation service, faithful to its routes,
// status codes and label resolution rules, so UI flows can be tested
// end to end without a Python process.

import {
  ADDRESSEE_VALUES,
  ADJUDICATOR_ID,
  ALIGNMENT_VALUES,
  OBJECTIVE_VALUES,
  type AnnotationBody,
  type AnnotationRecord,
  type MessageView,
  type Sample,
  type ThreadView,
} from "../src/types.js";

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export function makeThread(id: string, schema: string, title = "Sujet"): ThreadView {
  const firstSeen = new Map<string, number>();
  const messages: MessageView[] = [];
  const cIndex = schema.indexOf("C");
  for (let i = 0; i < schema.length; i++) {
    const letter = schema[i]!;
    if (!firstSeen.has(letter)) {
      firstSeen.set(letter, i + 1);
    }
    messages.push({
      rank: i + 1,
      letter,
      author_id: `user_${letter}`,
      author_kind: "registered",
      timestamp: `2020-01-01T${String(10 + i).padStart(2, "0")}:00:00+01:00`,
      indent_depth: Math.min(i, 4),
      text: `Message ${i + 1} du fil ${id}, écrit par ${letter}.`,
      word_count: 8,
      is_c_first: i === cIndex,
    });
  }
  return {
    thread_id: id,
    title,
    source_page: `Discussion:${title}`,
    schema,
    c_first_rank: cIndex >= 0 ? cIndex + 1 : null,
    participants: [...firstSeen.entries()].map(([letter, rank]) => ({
      letter,
      author_id: `user_${letter}`,
      arrival_rank: rank,
    })),
    messages,
  };
}

const VALID: Record<string, readonly string[]> = {
  addressee: ADDRESSEE_VALUES,
  alignment: ALIGNMENT_VALUES,
  objective: OBJECTIVE_VALUES,
};

export class FakeBackend {
  readonly samples = new Map<string, Sample>();
  readonly threads = new Map<string, ThreadView>();
  readonly annotations = new Map<string, AnnotationRecord>();
  /** when set, the next POST fails with this status, then the flag clears */
  failNextPost: number | null = null;
  /** when true, every request fails as if the network were down */
  offline = false;

  addSample(sample: Sample, schemas: Record<string, string> = {}): void {
    this.samples.set(sample.name, sample);
    for (const tid of sample.thread_ids) {
      if (!this.threads.has(tid)) {
        this.threads.set(tid, makeThread(tid, schemas[tid] ?? "ABAC"));
      }
    }
  }

  readonly fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    if (this.offline) {
      throw new TypeError("NetworkError: connection refused");
    }
    const url = new URL(input, "http://fake.test");
    const path = decodeURIComponent(url.pathname);
    const method = (init?.method ?? "GET").toUpperCase();

    if (method === "GET" && path === "/api/samples") {
      return json({ samples: [...this.samples.values()] });
    }
    const progressMatch = path.match(/^\/api\/samples\/([^/]+)\/progress$/);
    if (method === "GET" && progressMatch) {
      const sample = this.samples.get(progressMatch[1]!);
      if (!sample) return json({ detail: "unknown sample" }, 404);
      const annotator = url.searchParams.get("annotator") ?? "";
      const done = sample.thread_ids.filter((tid) =>
        this.annotations.has(`${tid}|${annotator}`),
      );
      return json({
        sample: sample.name,
        annotator,
        total: sample.thread_ids.length,
        done: done.length,
        remaining_ids: sample.thread_ids.filter(
          (tid) => !this.annotations.has(`${tid}|${annotator}`),
        ),
      });
    }
    const sampleMatch = path.match(/^\/api\/samples\/([^/]+)$/);
    if (method === "GET" && sampleMatch) {
      const sample = this.samples.get(sampleMatch[1]!);
      return sample ? json(sample) : json({ detail: "unknown sample" }, 404);
    }
    const threadMatch = path.match(/^\/api\/threads\/(.+)$/);
    if (method === "GET" && threadMatch) {
      const thread = this.threads.get(threadMatch[1]!);
      return thread ? json(thread) : json({ detail: "unknown thread" }, 404);
    }
    if (method === "POST" && path === "/api/annotations") {
      if (this.failNextPost !== null) {
        const status = this.failNextPost;
        this.failNextPost = null;
        return json({ detail: "injected failure" }, status);
      }
      const body = JSON.parse(String(init?.body)) as AnnotationBody;
      for (const dimension of ["addressee", "alignment", "objective"] as const) {
        if (!VALID[dimension]!.includes(body[dimension])) {
          return json(
            { detail: [{ loc: ["body", dimension], msg: "invalid enum value" }] },
            422,
          );
        }
      }
      const inSample = [...this.samples.values()].some((s) =>
        s.thread_ids.includes(body.thread_id),
      );
      if (!inSample) {
        return json({ detail: "thread not in any sample" }, 404);
      }
      const record: AnnotationRecord = {
        ...body,
        note: body.note ?? null,
        created_at: "2024-05-01T09:00:00+00:00",
      };
      this.annotations.set(`${body.thread_id}|${body.annotator_id}`, record);
      return json({ annotation: record, warnings: [] });
    }
    if (method === "GET" && path === "/api/annotations") {
      let records = [...this.annotations.values()];
      const sampleName = url.searchParams.get("sample");
      if (sampleName) {
        const sample = this.samples.get(sampleName);
        if (!sample) return json({ detail: "unknown sample" }, 404);
        records = records.filter((a) => sample.thread_ids.includes(a.thread_id));
      }
      const annotator = url.searchParams.get("annotator");
      if (annotator) {
        records = records.filter((a) => a.annotator_id === annotator);
      }
      return json({ annotations: records });
    }
    if (method === "GET" && path === "/api/reports/alignment") {
      const sample = this.samples.get(url.searchParams.get("sample") ?? "");
      if (!sample) return json({ detail: "unknown sample" }, 404);
      const labels = this.resolveLabels(sample, "alignment");
      if (labels.length === 0) return json({ detail: "no usable annotations" }, 400);
      const proportions: Record<string, number> = {};
      for (const value of ALIGNMENT_VALUES) proportions[value] = 0;
      for (const value of labels) proportions[value]! += 1 / labels.length;
      const sides = labels.filter(
        (v) => v === "side_with_A" || v === "side_with_B",
      );
      return json({
        n: labels.length,
        proportions,
        prise_de_parti: proportions["side_with_A"]! + proportions["side_with_B"]!,
        side_with_b_share: sides.length
          ? sides.filter((v) => v === "side_with_B").length / sides.length
          : null,
      });
    }
    return json({ detail: `no route for ${method} ${path}` }, 404);
  };

  /** same resolution precedence as the service: adjudicated, then majority */
  private resolveLabels(sample: Sample, dimension: "alignment"): string[] {
    const labels: string[] = [];
    for (const tid of sample.thread_ids) {
      const here = [...this.annotations.values()].filter((a) => a.thread_id === tid);
      if (here.length === 0) continue;
      const adjudicated = here.find((a) => a.annotator_id === ADJUDICATOR_ID);
      if (adjudicated) {
        labels.push(adjudicated[dimension]);
        continue;
      }
      const counts = new Map<string, number>();
      for (const a of here) {
        counts.set(a[dimension], (counts.get(a[dimension]) ?? 0) + 1);
      }
      const [best, bestCount] = [...counts.entries()].sort((x, y) => y[1] - x[1])[0]!;
      if (bestCount * 2 > here.length) {
        labels.push(best);
      }
    }
    return labels;
  }
}

export function sampleOf(name: string, ids: string[], rule: "sample1" | "sample2" = "sample1"): Sample {
  return { name, rule, seed: 7, size: ids.length, thread_ids: ids };
}
