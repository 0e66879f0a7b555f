import { describe, expect, it } from "vitest";

import { ApiError, ServiceClient, type FetchLike } from "../src/api.js";
import { bwsMock, ratingMock } from "./mockService.js";

describe("ServiceClient", () => {
  it("pulls the next task and keeps serving the held lease", async () => {
    const mock = bwsMock();
    const client = new ServiceClient("", mock.fetch);
    const first = await client.nextTask(mock.campaignId, "a0");
    expect(first.done).toBe(false);
    expect(first.task?.kind).toBe("bws");
    const again = await client.nextTask(mock.campaignId, "a0");
    expect(again.task?.task_id).toBe(first.task?.task_id);
  });

  it("turns service rejections into ApiError with the server message", async () => {
    const mock = bwsMock();
    const client = new ServiceClient("", mock.fetch);
    await expect(client.nextTask("c0000000000000000", "a0")).rejects.toThrow(
      ApiError,
    );
    const failure = await client
      .nextTask(mock.campaignId, "")
      .then(() => null)
      .catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).status).toBe(400);
    expect((failure as ApiError).message).toMatch(/annotator id required/);
  });

  it("lets the server reject best = worst even if a client bypasses the UI", async () => {
    const mock = bwsMock();
    const client = new ServiceClient("", mock.fetch);
    const next = await client.nextTask(mock.campaignId, "a0");
    if (next.task === null || next.task.kind !== "bws") {
      throw new Error("expected a bws task");
    }
    const member = next.task.texts[0]!.id;
    const failure = await client
      .submitResponse(mock.campaignId, {
        tuple_id: next.task.tuple_id,
        annotator_id: "a0",
        best: member,
        worst: member,
        panel_order: next.task.texts.map((t) => t.id),
      })
      .then(() => null)
      .catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).status).toBe(400);
    expect((failure as ApiError).message).toMatch(/best and worst must differ/);
    expect(mock.acceptedCount()).toBe(0);
  });

  it("validates rating bounds on the server side", async () => {
    const mock = ratingMock();
    const client = new ServiceClient("", mock.fetch);
    const failure = await client
      .submitResponse(mock.campaignId, {
        text_id: "r1",
        rater_id: "r0",
        rating: 140,
      })
      .then(() => null)
      .catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).message).toBe("rating must be in [0, 100]");
  });

  it("propagates transport failures unchanged", async () => {
    const mock = bwsMock();
    const client = new ServiceClient("", mock.fetch);
    mock.failNext(1);
    const failure = await client
      .nextTask(mock.campaignId, "a0")
      .then(() => null)
      .catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(TypeError);
    expect(failure).not.toBeInstanceOf(ApiError);
  });

  it("falls back to a generic message on non-JSON error bodies", async () => {
    const broken: FetchLike = async () =>
      new Response("boom", { status: 500 });
    const client = new ServiceClient("", broken);
    const failure = await client
      .progress("cfeedfacefeedface")
      .then(() => null)
      .catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).message).toBe(
      "request failed with status 500",
    );
  });

  it("posts submissions as JSON and returns the acceptance body", async () => {
    const mock = bwsMock();
    const client = new ServiceClient("", mock.fetch);
    const next = await client.nextTask(mock.campaignId, "a0");
    if (next.task === null || next.task.kind !== "bws") {
      throw new Error("expected a bws task");
    }
    const ids = next.task.texts.map((t) => t.id);
    const ack = await client.submitResponse(mock.campaignId, {
      tuple_id: next.task.tuple_id,
      annotator_id: "a0",
      best: ids[0]!,
      worst: ids[1]!,
      panel_order: ids,
    });
    expect(ack.ok).toBe(true);
    expect(mock.acceptedCount()).toBe(1);
    const exported = await client.exportResponses(mock.campaignId);
    expect(exported.endsWith("\n")).toBe(true);
    const record = JSON.parse(exported.trim()) as Record<string, unknown>;
    expect(Object.keys(record)).toEqual([
      "annotator_id",
      "best",
      "timestamp",
      "tuple_id",
      "worst",
    ]);
  });
});
