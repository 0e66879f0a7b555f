/** Pure selection state for one annotation task.
 *
 * The best/worst choices are mutually exclusive per panel: picking one role
 * on a panel releases the other role if it held the same panel. A submission
 * with best = worst is therefore unrepresentable, and toSubmission refuses
 * to build a request until both roles are set.
 */

import type {
  BwsSubmission,
  BwsTask,
  RatingSubmission,
  RatingTask,
  TextPanel,
} from "./types.js";

export type Rng = () => number;

/** Fisher-Yates shuffle into a fresh array; rng yields values in [0, 1). */
export function shuffle<T>(items: readonly T[], rng: Rng): T[] {
  const out = items.slice();
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rng() * (i + 1));
    const swap = out[i]!;
    out[i] = out[j]!;
    out[j] = swap;
  }
  return out;
}

export class TaskView {
  readonly taskId: string;
  readonly tupleId: string;
  /** Panels in display order, reshuffled for every render of a task. */
  readonly panels: readonly TextPanel[];
  private best: string | null = null;
  private worst: string | null = null;

  constructor(task: BwsTask, rng: Rng) {
    this.taskId = task.task_id;
    this.tupleId = task.tuple_id;
    this.panels = shuffle(task.texts, rng);
  }

  private requireMember(textId: string): void {
    if (!this.panels.some((panel) => panel.id === textId)) {
      throw new Error(`unknown text ${textId}`);
    }
  }

  chooseBest(textId: string): void {
    this.requireMember(textId);
    if (this.worst === textId) {
      this.worst = null;
    }
    this.best = textId;
  }

  chooseWorst(textId: string): void {
    this.requireMember(textId);
    if (this.best === textId) {
      this.best = null;
    }
    this.worst = textId;
  }

  selection(): { best: string | null; worst: string | null } {
    return { best: this.best, worst: this.worst };
  }

  canSubmit(): boolean {
    return this.best !== null && this.worst !== null && this.best !== this.worst;
  }

  panelOrder(): string[] {
    return this.panels.map((panel) => panel.id);
  }

  toSubmission(annotatorId: string): BwsSubmission {
    if (this.best === null || this.worst === null || this.best === this.worst) {
      throw new Error("select one best and one different worst text first");
    }
    return {
      tuple_id: this.tupleId,
      annotator_id: annotatorId,
      best: this.best,
      worst: this.worst,
      panel_order: this.panelOrder(),
    };
  }
}

export class RatingView {
  readonly taskId: string;
  readonly textId: string;
  readonly panel: TextPanel;
  private value = 50;

  constructor(task: RatingTask) {
    this.taskId = task.task_id;
    this.textId = task.text_id;
    this.panel = task.text;
  }

  rating(): number {
    return this.value;
  }

  setRating(value: number): void {
    if (!Number.isFinite(value)) {
      throw new Error("rating must be a number");
    }
    this.value = Math.min(100, Math.max(0, value));
  }

  toSubmission(raterId: string): RatingSubmission {
    return { text_id: this.textId, rater_id: raterId, rating: this.value };
  }
}
