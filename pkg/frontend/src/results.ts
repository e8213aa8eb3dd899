import type { ApiClient } from "./api.js";
import { renderAnnotated, spanIndex } from "./annotate.js";
import type { RenderMode, RetrieveResponse, SentenceRef } from "./types.js";

export interface ResultsCallbacks {
  onBookmark?: (sentenceId: string) => void;
  onHover?: (sentenceId: string, anchor: HTMLElement) => void;
  onHoverEnd?: () => void;
  onError?: (message: string) => void;
}

/**
 * The two-column retrieval panel ("what others wrote" / "what they wrote
 * next"). Mode toggles re-request annotations for the cached result token
 * (no new search); re-ranking asks the server and re-renders rows in the
 * order the response dictates.
 */
export class ResultsPanel {
  readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly callbacks: ResultsCallbacks;
  private current: RetrieveResponse | null = null;
  private mode: RenderMode = "color";

  constructor(root: HTMLElement, api: ApiClient, callbacks: ResultsCallbacks = {}) {
    this.root = root;
    this.api = api;
    this.callbacks = callbacks;
    this.root.classList.add("results-panel");
    // retrieved corpus text must not be copyable into the draft
    this.root.setAttribute("data-no-copy", "true");
  }

  get currentMode(): RenderMode {
    return this.mode;
  }

  get resultToken(): string | null {
    return this.current?.result_token ?? null;
  }

  showResult(resp: RetrieveResponse, mode: RenderMode): void {
    this.current = resp;
    this.mode = mode;
    this.render();
  }

  async toggleMode(mode: RenderMode): Promise<void> {
    if (!this.current) return;
    if (mode === this.mode) return;
    try {
      const { annotations } = await this.api.annotations(this.current.result_token, mode);
      this.current = { ...this.current, annotations };
      this.mode = mode;
      this.render();
    } catch (err) {
      this.callbacks.onError?.(String((err as Error).message ?? err));
    }
  }

  async rerank(rowIndex: number): Promise<void> {
    if (!this.current) return;
    try {
      const resp = await this.api.rerank(this.current.result_token, rowIndex, this.mode);
      this.showResult(resp, this.mode);
    } catch (err) {
      this.callbacks.onError?.(String((err as Error).message ?? err));
    }
  }

  private sentenceCell(sent: SentenceRef, spans: ReturnType<typeof spanIndex>,
                       cls: string): HTMLElement {
    const el = document.createElement("div");
    el.className = cls;
    el.dataset.sentenceId = sent.sentence_id;
    el.appendChild(renderAnnotated(sent.text, spans.get(sent.sentence_id) ?? []));
    el.addEventListener("mouseenter", () =>
      this.callbacks.onHover?.(sent.sentence_id, el));
    el.addEventListener("mouseleave", () => this.callbacks.onHoverEnd?.());
    return el;
  }

  private render(): void {
    this.root.textContent = "";
    if (!this.current) return;
    const matchSpans = spanIndex(this.current.annotations.match);
    const nextSpans = spanIndex(this.current.annotations.next);

    const header = document.createElement("div");
    header.className = "results-header";
    const left = document.createElement("div");
    left.textContent = "What others wrote";
    const right = document.createElement("div");
    right.textContent = "What they wrote next";
    header.append(left, right);
    this.root.appendChild(header);

    this.current.rows.forEach((row, i) => {
      const rowEl = document.createElement("div");
      rowEl.className = "result-row";
      rowEl.dataset.rowIndex = String(i);

      const controls = document.createElement("div");
      controls.className = "row-controls";
      const bookmarkBtn = document.createElement("button");
      bookmarkBtn.className = "bookmark-btn";
      bookmarkBtn.title = "Bookmark this sentence";
      bookmarkBtn.textContent = "♡"; // heart outline
      bookmarkBtn.addEventListener("click", () =>
        this.callbacks.onBookmark?.(row.display.sentence_id));
      const rerankBtn = document.createElement("button");
      rerankBtn.className = "rerank-btn";
      rerankBtn.title = "Move to top and sort the rest by similarity to it";
      rerankBtn.textContent = "⤒"; // up arrow to bar
      rerankBtn.addEventListener("click", () => void this.rerank(i));
      controls.append(bookmarkBtn, rerankBtn);

      const matchCell = this.sentenceCell(row.display, matchSpans, "sentence match-cell");
      const nextCell = row.next
        ? this.sentenceCell(row.next, nextSpans, "sentence next-cell")
        : emptyNextCell();

      rowEl.append(controls, matchCell, nextCell);
      this.root.appendChild(rowEl);
    });
  }
}

function emptyNextCell(): HTMLElement {
  const el = document.createElement("div");
  el.className = "sentence next-cell next-missing";
  el.textContent = "(section ends)";
  return el;
}
