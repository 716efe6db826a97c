// Annotation queue: the sample's threads this annotator has not labelled
// yet, in sample order. Order and content come from the service's progress
// endpoint, so a reload always reflects committed state.

import type { ApiClient } from "./api.js";

export interface Queue {
  sample: string;
  annotator: string;
  total: number;
  done: number;
  remaining: string[];
}

export async function loadQueue(
  client: ApiClient,
  sample: string,
  annotator: string,
): Promise<Queue> {
  const progress = await client.getProgress(sample, annotator);
  return {
    sample: progress.sample,
    annotator: progress.annotator,
    total: progress.total,
    done: progress.done,
    remaining: [...progress.remaining_ids],
  };
}

export function isComplete(queue: Queue): boolean {
  return queue.remaining.length === 0;
}
