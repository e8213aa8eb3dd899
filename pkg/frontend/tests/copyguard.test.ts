import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { installCopyGuard } from "../src/copyguard.js";

describe("copy guard", () => {
  let uninstall: () => void;
  let notify: ReturnType<typeof vi.fn>;

  beforeEach(() => {
    document.body.innerHTML = `
      <div class="editor"><div class="cell" contenteditable="true">my own draft text</div></div>
      <div class="results-panel" data-no-copy="true">
        <div class="sentence">retrieved corpus sentence</div>
      </div>
      <div class="notes">
        <blockquote data-no-copy="true">snapshot of corpus text</blockquote>
        <textarea class="note-input">my own note</textarea>
      </div>
    `;
    notify = vi.fn();
    uninstall = installCopyGuard(document, notify);
  });

  afterEach(() => {
    uninstall();
    document.getSelection()?.removeAllRanges();
  });

  function copyEventOn(el: Element): Event {
    const event = new Event("copy", { bubbles: true, cancelable: true });
    el.dispatchEvent(event);
    return event;
  }

  it("blocks copy inside the results panel and notifies", () => {
    const event = copyEventOn(document.querySelector(".results-panel .sentence")!);
    expect(event.defaultPrevented).toBe(true);
    expect(notify).toHaveBeenCalled();
  });

  it("blocks copy of bookmark snapshots", () => {
    const event = copyEventOn(document.querySelector("blockquote")!);
    expect(event.defaultPrevented).toBe(true);
  });

  it("allows copy inside editor cells", () => {
    const event = copyEventOn(document.querySelector(".editor .cell")!);
    expect(event.defaultPrevented).toBe(false);
  });

  it("allows copy of user-authored notes", () => {
    const event = copyEventOn(document.querySelector(".note-input")!);
    expect(event.defaultPrevented).toBe(false);
  });

  it("blocks cut events in guarded panes too", () => {
    const event = new Event("cut", { bubbles: true, cancelable: true });
    document.querySelector(".results-panel .sentence")!.dispatchEvent(event);
    expect(event.defaultPrevented).toBe(true);
  });

  it("uses the selection anchor when one exists", () => {
    const sentence = document.querySelector(".results-panel .sentence")!;
    const range = document.createRange();
    range.selectNodeContents(sentence);
    const selection = document.getSelection()!;
    selection.removeAllRanges();
    selection.addRange(range);
    // event fired from body, but the selection sits in guarded content
    const event = new Event("copy", { bubbles: true, cancelable: true });
    document.body.dispatchEvent(event);
    expect(event.defaultPrevented).toBe(true);
  });

  it("stops guarding after teardown", () => {
    uninstall();
    const event = copyEventOn(document.querySelector(".results-panel .sentence")!);
    expect(event.defaultPrevented).toBe(false);
    uninstall = installCopyGuard(document, notify); // restore for afterEach
  });
});
