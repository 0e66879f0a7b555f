/** DOM shell: renders tasks, drives selection state, submits judgments.
 *
 * Every state change re-renders from this.view, so showing an error banner
 * never loses the annotator's selections. Network failures produce a retry
 * banner; service rejections are shown inline; a 409 (slot already filled
 * by a concurrent tab) silently refreshes to the next open task.
 */

import { ApiError, ServiceClient } from "./api.js";
import { RatingView, TaskView, type Rng } from "./state.js";
import type { Task } from "./types.js";

const STORAGE_KEY = "clarte.annotator";

export function ensureAnnotatorId(
  storage: Pick<Storage, "getItem" | "setItem">,
  rng: Rng,
  explicit?: string,
): string {
  if (explicit) {
    storage.setItem(STORAGE_KEY, explicit);
    return explicit;
  }
  const existing = storage.getItem(STORAGE_KEY);
  if (existing) {
    return existing;
  }
  const generated =
    "anno-" +
    Math.floor(rng() * 36 ** 8)
      .toString(36)
      .padStart(8, "0");
  storage.setItem(STORAGE_KEY, generated);
  return generated;
}

export interface AppOptions {
  root: HTMLElement;
  client: ServiceClient;
  campaignId: string;
  storage: Pick<Storage, "getItem" | "setItem">;
  rng?: Rng;
  /** Overrides the stored annotator id (used by tests and kiosk setups). */
  annotatorId?: string;
}

export class AnnotationApp {
  readonly annotatorId: string;
  /** Resolves when the most recent user-triggered operation has settled. */
  settled: Promise<void> = Promise.resolve();

  private readonly root: HTMLElement;
  private readonly client: ServiceClient;
  private readonly campaignId: string;
  private readonly rng: Rng;
  private view: TaskView | RatingView | null = null;
  private done = false;
  private doneSummary = "";
  private submitting = false;
  private inlineMessage = "";
  private bannerMessage = "";
  private bannerRetry: (() => Promise<void>) | null = null;

  constructor(options: AppOptions) {
    this.root = options.root;
    this.client = options.client;
    this.campaignId = options.campaignId;
    this.rng = options.rng ?? Math.random;
    this.annotatorId = ensureAnnotatorId(
      options.storage,
      this.rng,
      options.annotatorId,
    );
  }

  async start(): Promise<void> {
    await this.loadNext();
  }

  private clearMessages(): void {
    this.inlineMessage = "";
    this.bannerMessage = "";
    this.bannerRetry = null;
  }

  private async loadNext(): Promise<void> {
    try {
      const next = await this.client.nextTask(this.campaignId, this.annotatorId);
      this.clearMessages();
      if (next.done || next.task === null) {
        this.view = null;
        this.done = true;
        await this.summarizeProgress();
      } else {
        this.view = this.buildView(next.task);
      }
    } catch (error) {
      this.showFailure(error, () => this.loadNext());
    }
    this.render();
  }

  private buildView(task: Task): TaskView | RatingView {
    if (task.kind === "bws") {
      return new TaskView(task, this.rng);
    }
    return new RatingView(task);
  }

  private async summarizeProgress(): Promise<void> {
    try {
      const progress = await this.client.progress(this.campaignId);
      this.doneSummary = `${progress.accepted} réponses sur ${progress.total_slots} recueillies.`;
    } catch {
      this.doneSummary = ""; // the completion screen works without counts
    }
  }

  private async submit(): Promise<void> {
    const view = this.view;
    if (view === null || this.submitting) {
      return;
    }
    if (view instanceof TaskView && !view.canSubmit()) {
      return;
    }
    this.submitting = true;
    this.render();
    try {
      await this.client.submitResponse(
        this.campaignId,
        view.toSubmission(this.annotatorId),
      );
      this.submitting = false;
      await this.loadNext();
      return;
    } catch (error) {
      this.submitting = false;
      if (error instanceof ApiError && error.status === 409) {
        await this.loadNext(); // slot taken elsewhere: move on
        return;
      }
      if (error instanceof ApiError) {
        this.inlineMessage = error.message;
      } else {
        this.showFailure(error, () => this.submit());
      }
    }
    this.render();
  }

  private showFailure(error: unknown, retry: () => Promise<void>): void {
    this.bannerMessage =
      error instanceof ApiError
        ? error.message
        : "Service injoignable. Vos choix sont conservés.";
    this.bannerRetry = retry;
  }

  // -- rendering ------------------------------------------------------------

  private render(): void {
    this.root.textContent = "";
    this.root.classList.add("clarte-app");

    const who = document.createElement("p");
    who.className = "who";
    who.textContent = `Annotateur ${this.annotatorId}`;
    this.root.appendChild(who);

    if (this.bannerMessage) {
      this.root.appendChild(this.renderBanner());
    }
    if (this.done) {
      this.root.appendChild(this.renderDone());
      return;
    }
    if (this.view instanceof TaskView) {
      this.root.appendChild(this.renderBws(this.view));
    } else if (this.view instanceof RatingView) {
      this.root.appendChild(this.renderRating(this.view));
    } else {
      const loading = document.createElement("p");
      loading.className = "loading";
      loading.textContent = "Chargement…";
      this.root.appendChild(loading);
    }
  }

  private renderBanner(): HTMLElement {
    const banner = document.createElement("div");
    banner.className = "banner";
    const message = document.createElement("span");
    message.textContent = this.bannerMessage;
    banner.appendChild(message);
    if (this.bannerRetry) {
      const retry = document.createElement("button");
      retry.className = "retry";
      retry.textContent = "Réessayer";
      const handler = this.bannerRetry;
      retry.addEventListener("click", () => {
        this.settled = handler();
      });
      banner.appendChild(retry);
    }
    return banner;
  }

  private renderDone(): HTMLElement {
    const section = document.createElement("section");
    section.className = "done";
    const heading = document.createElement("h2");
    heading.textContent = "Terminé, merci !";
    section.appendChild(heading);
    if (this.doneSummary) {
      const summary = document.createElement("p");
      summary.textContent = this.doneSummary;
      section.appendChild(summary);
    }
    return section;
  }

  private renderBws(view: TaskView): HTMLElement {
    const section = document.createElement("section");
    section.className = "task task-bws";

    const prompt = document.createElement("p");
    prompt.className = "prompt";
    prompt.textContent =
      "Choisissez le texte le plus clair (meilleur) et le moins clair (pire).";
    section.appendChild(prompt);

    const row = document.createElement("div");
    row.className = "panels";
    const { best, worst } = view.selection();
    for (const panel of view.panels) {
      const article = document.createElement("article");
      article.className = "panel";
      article.dataset.textId = panel.id;
      if (panel.id === best) {
        article.classList.add("selected-best");
      }
      if (panel.id === worst) {
        article.classList.add("selected-worst");
      }

      const body = document.createElement("p");
      body.className = "body";
      body.textContent = panel.body;
      article.appendChild(body);

      article.appendChild(
        this.roleButton(view, panel.id, "best", "Meilleur"),
      );
      article.appendChild(this.roleButton(view, panel.id, "worst", "Pire"));
      row.appendChild(article);
    }
    section.appendChild(row);

    if (this.inlineMessage) {
      const inline = document.createElement("p");
      inline.className = "inline-error";
      inline.textContent = this.inlineMessage;
      section.appendChild(inline);
    }

    section.appendChild(this.submitButton(view.canSubmit()));
    return section;
  }

  private roleButton(
    view: TaskView,
    textId: string,
    role: "best" | "worst",
    label: string,
  ): HTMLButtonElement {
    const button = document.createElement("button");
    button.dataset.role = role;
    button.textContent = label;
    button.addEventListener("click", () => {
      if (role === "best") {
        view.chooseBest(textId);
      } else {
        view.chooseWorst(textId);
      }
      this.render();
    });
    return button;
  }

  private renderRating(view: RatingView): HTMLElement {
    const section = document.createElement("section");
    section.className = "task task-rating";

    const body = document.createElement("p");
    body.className = "body";
    body.textContent = view.panel.body;
    section.appendChild(body);

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "100";
    slider.step = "1";
    slider.className = "rating";
    slider.value = String(view.rating());
    slider.addEventListener("input", () => {
      view.setRating(Number(slider.value));
      output.value = String(view.rating());
    });
    section.appendChild(slider);

    const output = document.createElement("output");
    output.className = "rating-value";
    output.value = String(view.rating());
    section.appendChild(output);

    if (this.inlineMessage) {
      const inline = document.createElement("p");
      inline.className = "inline-error";
      inline.textContent = this.inlineMessage;
      section.appendChild(inline);
    }

    section.appendChild(this.submitButton(true));
    return section;
  }

  private submitButton(enabled: boolean): HTMLButtonElement {
    const button = document.createElement("button");
    button.className = "submit";
    button.textContent = "Envoyer";
    button.disabled = !enabled || this.submitting;
    button.addEventListener("click", () => {
      this.settled = this.submit();
    });
    return button;
  }
}
