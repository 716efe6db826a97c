// Annotation session: walks one annotator through one sample's queue.
// Submissions post to the service before the queue advances; a rejected
// post rolls the view back with the error inline, and committed work
// survives reloads because the queue is always rebuilt from the service.

import { ApiClient, ApiError } from "./api.js";
import { AnnotationForm, type FormValue } from "./form.js";
import { isComplete, loadQueue, type Queue } from "./queue.js";
import { renderThread } from "./threadView.js";

export class AnnotatorSession {
  readonly element: HTMLElement;
  private queue: Queue | null = null;
  private readonly form: AnnotationForm;
  private readonly threadPane: HTMLElement;
  private readonly statusBar: HTMLElement;
  private readonly banner: HTMLElement;

  constructor(
    private readonly client: ApiClient,
    private readonly sample: string,
    private readonly annotator: string,
  ) {
    this.element = document.createElement("div");
    this.element.className = "annotator-session";
    this.statusBar = document.createElement("p");
    this.statusBar.className = "status-bar";
    this.banner = document.createElement("div");
    this.banner.className = "retry-banner";
    this.banner.hidden = true;
    this.threadPane = document.createElement("div");
    this.threadPane.className = "thread-pane";
    this.form = new AnnotationForm();
    this.form.onSubmit = (value) => void this.submit(value);
    this.element.append(this.banner, this.statusBar, this.threadPane, this.form.element);
    this.element.addEventListener("keydown", (event) => {
      const target = event.target as HTMLElement | null;
      if (target && target.tagName === "TEXTAREA") {
        return;
      }
      if (this.form.handleKey(event.key)) {
        event.preventDefault();
      }
    });
  }

  get currentThreadId(): string | null {
    return this.queue && this.queue.remaining.length > 0
      ? (this.queue.remaining[0] ?? null)
      : null;
  }

  async start(): Promise<void> {
    try {
      this.queue = await loadQueue(this.client, this.sample, this.annotator);
      this.banner.hidden = true;
      this.banner.textContent = "";
    } catch (error) {
      this.showRetryBanner(error);
      return;
    }
    await this.showCurrent();
  }

  private showRetryBanner(error: unknown): void {
    this.banner.hidden = false;
    this.banner.textContent = "Service injoignable, rien n'a été perdu. ";
    const retry = document.createElement("button");
    retry.type = "button";
    retry.textContent = "Réessayer";
    retry.addEventListener("click", () => void this.start());
    this.banner.append(retry);
    if (error instanceof ApiError) {
      this.banner.append(` (${error.status})`);
    }
  }

  private async showCurrent(): Promise<void> {
    const queue = this.queue;
    if (!queue) {
      return;
    }
    this.statusBar.textContent =
      `${this.annotator} — échantillon ${this.sample} : ` +
      `${queue.done}/${queue.total} annotés, ${queue.remaining.length} restants`;
    this.threadPane.replaceChildren();
    if (isComplete(queue)) {
      const done = document.createElement("p");
      done.className = "completion-notice";
      done.textContent = "File terminée : tous les fils de l'échantillon sont annotés.";
      this.threadPane.append(done);
      this.form.element.hidden = true;
      return;
    }
    this.form.element.hidden = false;
    const threadId = queue.remaining[0]!;
    try {
      const view = await this.client.getThread(threadId);
      this.threadPane.append(renderThread(view));
    } catch (error) {
      this.showRetryBanner(error);
    }
  }

  private async submit(value: FormValue): Promise<void> {
    const queue = this.queue;
    const threadId = this.currentThreadId;
    if (!queue || !threadId) {
      return;
    }
    this.form.clearError();
    this.form.setBusy(true);
    try {
      await this.client.postAnnotation({
        thread_id: threadId,
        annotator_id: this.annotator,
        ...value,
      });
    } catch (error) {
      // rollback: stay on this thread, surface the rejection inline
      this.form.setBusy(false);
      const detail =
        error instanceof ApiError ? JSON.stringify(error.detail) : String(error);
      this.form.showError(`Enregistrement refusé : ${detail}`);
      return;
    }
    queue.remaining.shift();
    queue.done += 1;
    this.form.setBusy(false);
    this.form.reset();
    await this.showCurrent();
  }
}
