import { beforeEach, describe, expect, it, vi } from "vitest";

import type { ApiClient } from "../src/api.js";
import { ResultsPanel } from "../src/results.js";
import type { RetrieveResponse, SentenceRef } from "../src/types.js";
import { PALETTE } from "../src/palette.js";

function sent(id: string, text: string): SentenceRef {
  return { sentence_id: id, text, doc_id: "d", section_path: ["S"] };
}

function makeResponse(): RetrieveResponse {
  return {
    rows: [
      { match: sent("a", "alpha system"), next: sent("an", "alpha next"),
        display: sent("a", "alpha system"), distance: 0.1 },
      { match: sent("b", "beta system"), next: null,
        display: sent("b", "beta system"), distance: 0.2 },
      { match: sent("c", "gamma words"), next: sent("cn", "gamma next"),
        display: sent("c", "gamma words"), distance: 0.3 },
    ],
    annotations: {
      match: [
        { sentence_id: "a", spans: [{ start: 6, end: 12, kind: "color", color_index: 0 }] },
        { sentence_id: "b", spans: [{ start: 5, end: 11, kind: "color", color_index: 0 }] },
        { sentence_id: "c", spans: [] },
      ],
      next: [
        { sentence_id: "an", spans: [] },
        { sentence_id: "cn", spans: [] },
      ],
    },
    result_token: "tok-1",
  };
}

function greyAnnotations() {
  return {
    match: [
      { sentence_id: "a", spans: [] },
      { sentence_id: "b", spans: [{ start: 5, end: 11, kind: "grey" as const }] },
      { sentence_id: "c", spans: [] },
    ],
    next: [
      { sentence_id: "an", spans: [] },
      { sentence_id: "cn", spans: [] },
    ],
  };
}

describe("ResultsPanel", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = "<div id='r'></div>";
    root = document.getElementById("r")!;
  });

  it("renders both columns with annotation spans from the payload", () => {
    const panel = new ResultsPanel(root, {} as ApiClient);
    panel.showResult(makeResponse(), "color");
    const rows = root.querySelectorAll(".result-row");
    expect(rows).toHaveLength(3);
    const colored = root.querySelectorAll(".hl-color");
    expect(colored).toHaveLength(2);
    expect((colored[0] as HTMLElement).textContent).toBe("system");
    expect((colored[0] as HTMLElement).style.color).toBeTruthy();
    expect((colored[0] as HTMLElement).dataset.colorIndex).toBe("0");
    expect(root.querySelector(".next-missing")).not.toBeNull();
    expect(root.getAttribute("data-no-copy")).toBe("true");
    expect(PALETTE).toHaveLength(20);
  });

  it("mode toggle swaps annotations without a new retrieval", async () => {
    const annotations = vi.fn(async () =>
      ({ annotations: greyAnnotations(), result_token: "tok-1" }));
    const retrieve = vi.fn();
    const api = { annotations, retrieve } as unknown as ApiClient;
    const panel = new ResultsPanel(root, api);
    panel.showResult(makeResponse(), "color");

    await panel.toggleMode("grey");
    expect(annotations).toHaveBeenCalledWith("tok-1", "grey");
    expect(retrieve).not.toHaveBeenCalled();
    // same rows, new spans
    expect(root.querySelectorAll(".result-row")).toHaveLength(3);
    expect(root.querySelectorAll(".hl-color")).toHaveLength(0);
    expect(root.querySelectorAll(".hl-grey")).toHaveLength(1);
  });

  it("toggling to the current mode is a no-op", async () => {
    const annotations = vi.fn();
    const api = { annotations } as unknown as ApiClient;
    const panel = new ResultsPanel(root, api);
    panel.showResult(makeResponse(), "color");
    await panel.toggleMode("color");
    expect(annotations).not.toHaveBeenCalled();
  });

  it("rerank rerenders rows in exactly the server's order", async () => {
    const base = makeResponse();
    const reranked: RetrieveResponse = {
      rows: [base.rows[2], base.rows[0], base.rows[1]],
      annotations: base.annotations,
      result_token: "tok-2",
    };
    const rerank = vi.fn(async () => reranked);
    const api = { rerank } as unknown as ApiClient;
    const panel = new ResultsPanel(root, api);
    panel.showResult(base, "color");

    const btn = root.querySelectorAll<HTMLButtonElement>(".rerank-btn")[2];
    btn.click();
    await new Promise((r) => setTimeout(r, 0));

    expect(rerank).toHaveBeenCalledWith("tok-1", 2, "color");
    const ids = [...root.querySelectorAll<HTMLElement>(".match-cell")]
      .map((el) => el.dataset.sentenceId);
    expect(ids).toEqual(["c", "a", "b"]);
    expect(panel.resultToken).toBe("tok-2");
  });

  it("bookmark button reports the displayed sentence id", () => {
    const onBookmark = vi.fn();
    const panel = new ResultsPanel(root, {} as ApiClient, { onBookmark });
    panel.showResult(makeResponse(), "color");
    root.querySelectorAll<HTMLButtonElement>(".bookmark-btn")[1].click();
    expect(onBookmark).toHaveBeenCalledWith("b");
  });

  it("hover callbacks fire per sentence cell", () => {
    const onHover = vi.fn();
    const panel = new ResultsPanel(root, {} as ApiClient, { onHover });
    panel.showResult(makeResponse(), "color");
    const cell = root.querySelector<HTMLElement>(".match-cell")!;
    cell.dispatchEvent(new Event("mouseenter"));
    expect(onHover).toHaveBeenCalledWith("a", cell);
  });
});
