import { describe, expect, it } from "vitest";

import { subscribeEvents, type EventSourceLike } from "../src/events.js";
import type { Snapshot } from "../src/types.js";
import { makeSnapshot } from "./helpers.js";

class FakeEventSource implements EventSourceLike {
  closed = false;
  private listeners: ((ev: { data: string }) => void)[] = [];

  constructor(readonly url: string) {}

  addEventListener(_type: "message", listener: (ev: { data: string }) => void): void {
    this.listeners.push(listener);
  }

  close(): void {
    this.closed = true;
  }

  push(doc: unknown): void {
    const data = typeof doc === "string" ? doc : JSON.stringify(doc);
    for (const listener of this.listeners) listener({ data });
  }
}

function subscribed() {
  let source!: FakeEventSource;
  const seen: Snapshot[] = [];
  const unsubscribe = subscribeEvents(
    "/api/sessions/s1/events",
    (snap) => seen.push(snap),
    (url) => {
      source = new FakeEventSource(url);
      return source;
    },
  );
  return { source, seen, unsubscribe };
}

describe("subscribeEvents", () => {
  it("delivers snapshots in order", () => {
    const { source, seen } = subscribed();
    source.push(makeSnapshot({ seq: 1, mood: "sad" }));
    source.push(makeSnapshot({ seq: 2, mood: "happy" }));
    expect(seen.map((s) => s.mood)).toEqual(["sad", "happy"]);
  });

  it("drops duplicate and stale sequence numbers", () => {
    const { source, seen } = subscribed();
    source.push(makeSnapshot({ seq: 3 }));
    source.push(makeSnapshot({ seq: 3 }));
    source.push(makeSnapshot({ seq: 2 }));
    source.push(makeSnapshot({ seq: 4 }));
    expect(seen.map((s) => s.seq)).toEqual([3, 4]);
  });

  it("ignores malformed frames", () => {
    const { source, seen } = subscribed();
    source.push("{not json");
    source.push(makeSnapshot({ seq: 1 }));
    expect(seen.length).toBe(1);
  });

  it("unsubscribe closes the source", () => {
    const { source, unsubscribe } = subscribed();
    unsubscribe();
    expect(source.closed).toBe(true);
  });

  it("hands the snapshot over synchronously on arrival", () => {
    const { source, seen } = subscribed();
    const before = performance.now();
    source.push(makeSnapshot({ seq: 1, mood: "angry" }));
    const elapsedMs = performance.now() - before;
    expect(seen.length).toBe(1);
    expect(elapsedMs).toBeLessThan(500);
  });
});
