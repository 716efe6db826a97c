import { describe, expect, it } from "vitest";

import { renderThread } from "../src/threadView.js";
import { makeThread } from "./fakeBackend.js";

describe("thread rendering", () => {
  it("shows one card per message with its letter", () => {
    const element = renderThread(makeThread("t", "ABAC"));
    const cards = element.querySelectorAll(".message-card");
    expect(cards.length).toBe(4);
    const letters = [...element.querySelectorAll(".letter")].map((e) => e.textContent);
    expect(letters).toEqual(["A", "B", "A", "C"]);
  });

  it("marks the third participant's first message", () => {
    const element = renderThread(makeThread("t", "ABACBC"));
    const highlighted = element.querySelectorAll(".message-card.c-first");
    expect(highlighted.length).toBe(1);
    expect(highlighted[0]!.getAttribute("data-rank")).toBe("4");
  });

  it("collapses the prelude of a late arrival, keeping C visible", () => {
    const element = renderThread(makeThread("t", "ABABABABABC")); // C at rank 11
    const hidden = element.querySelector<HTMLElement>(".collapsed-prelude");
    expect(hidden).not.toBeNull();
    expect(hidden!.hidden).toBe(true);
    expect(hidden!.querySelectorAll(".message-card").length).toBe(8);
    const visible = element.querySelectorAll(".messages > .message-card");
    expect(visible.length).toBe(3); // two context messages plus C
    expect(element.querySelector(".messages > .message-card.c-first")).not.toBeNull();
  });

  it("toggle reveals and hides the prelude", () => {
    const element = renderThread(makeThread("t", "ABABABABABC"));
    const toggle = element.querySelector<HTMLButtonElement>(".prelude-toggle")!;
    const hidden = element.querySelector<HTMLElement>(".collapsed-prelude")!;
    toggle.click();
    expect(hidden.hidden).toBe(false);
    toggle.click();
    expect(hidden.hidden).toBe(true);
  });

  it("short threads are not collapsed", () => {
    const element = renderThread(makeThread("t", "ABC"));
    expect(element.querySelector(".collapsed-prelude")).toBeNull();
  });

  it("unsigned authors get a placeholder label", () => {
    const view = makeThread("t", "AB");
    view.messages[1] = { ...view.messages[1]!, author_id: null, author_kind: "unsigned" };
    const element = renderThread(view);
    const authors = [...element.querySelectorAll(".author")].map((e) => e.textContent);
    expect(authors[1]).toBe("(non signé)");
  });
});
