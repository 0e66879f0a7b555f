/** Payload shapes of the annotation service HTTP API. */

export interface TextPanel {
  id: string;
  body: string;
}

export interface BwsTask {
  task_id: string;
  kind: "bws";
  tuple_id: string;
  texts: TextPanel[];
}

export interface RatingTask {
  task_id: string;
  kind: "rating";
  text_id: string;
  text: TextPanel;
}

export type Task = BwsTask | RatingTask;

export interface NextTaskResponse {
  done: boolean;
  task: Task | null;
}

export interface Progress {
  campaign_id: string;
  kind: string;
  total_slots: number;
  accepted: number;
  open: number;
  tasks_complete: number;
  tasks_total: number;
}

export interface BwsSubmission {
  tuple_id: string;
  annotator_id: string;
  best: string;
  worst: string;
  /** Display order of the panels at submission time, for auditability. */
  panel_order: string[];
}

export interface RatingSubmission {
  text_id: string;
  rater_id: string;
  rating: number;
}

export type Submission = BwsSubmission | RatingSubmission;
