// Block editor: one cell per line-like block, markdown-style `#` prefixes
// turn a cell into a section title (number of #'s = level). Retrieval is
// triggered with TAB; consecutive empty paragraph cells after a non-empty
// one encode the retrieval offset.

export type CellKind = "section_title" | "paragraph";

export interface EditorCell {
  kind: CellKind;
  level: number; // 0 for paragraphs
  text: string;  // display text, `#` markers stripped for titles
  raw: string;   // what the user typed
}

export interface CursorQuery {
  section_title: string;
  paragraph_text: string;
  offset: number;
}

export class EditorContextError extends Error {}

const HEADING = /^(#{1,4})\s+(\S.*)$/;

export function classifyCell(raw: string): EditorCell {
  const m = HEADING.exec(raw.trim());
  if (m) {
    return { kind: "section_title", level: m[1].length, text: m[2].trim(), raw };
  }
  return { kind: "paragraph", level: 0, text: raw.trim(), raw };
}

/**
 * Build the retrieval query for the cell at `index`:
 * - the title of the nearest section-title cell above it,
 * - the nearest non-empty paragraph's text,
 * - offset = how many contiguous empty paragraph cells sit between that
 *   paragraph and the cursor (0 when the focused cell itself has text).
 */
export function cursorContext(cells: EditorCell[], index: number): CursorQuery {
  const cell = cells[index];
  if (!cell) {
    throw new EditorContextError("cursor is not in a cell");
  }
  if (cell.kind === "section_title") {
    throw new EditorContextError("place the cursor in a paragraph cell to retrieve");
  }
  let sectionTitle: string | null = null;
  for (let i = index; i >= 0; i--) {
    if (cells[i].kind === "section_title") {
      sectionTitle = cells[i].text;
      break;
    }
  }
  if (sectionTitle === null) {
    throw new EditorContextError("add a section title above this paragraph first");
  }
  if (cell.text !== "") {
    return { section_title: sectionTitle, paragraph_text: cell.text, offset: 0 };
  }
  // walk back over the empty run to the nearest non-empty paragraph
  let j = index - 1;
  while (j >= 0 && cells[j].kind === "paragraph" && cells[j].text === "") {
    j--;
  }
  if (j < 0 || cells[j].kind !== "paragraph") {
    throw new EditorContextError("write a paragraph before retrieving with an offset");
  }
  return { section_title: sectionTitle, paragraph_text: cells[j].text, offset: index - j };
}

const STORAGE_KEY = "corpusdesk-draft-v1";

export interface EditorOptions {
  onQuery?: (query: CursorQuery) => void;
  onError?: (message: string) => void;
  storage?: Pick<Storage, "getItem" | "setItem"> | null;
}

/** Contenteditable cell list bound to a root element. */
export class Editor {
  readonly root: HTMLElement;
  private rawCells: string[];
  private readonly opts: EditorOptions;

  constructor(root: HTMLElement, opts: EditorOptions = {}) {
    this.root = root;
    this.opts = opts;
    this.rawCells = this.restore() ?? ["# Introduction", ""];
    this.root.classList.add("editor");
    this.render();
  }

  cells(): EditorCell[] {
    return this.rawCells.map(classifyCell);
  }

  setCells(raw: string[]): void {
    this.rawCells = raw.length ? [...raw] : [""];
    this.render();
    this.persist();
  }

  queryAt(index: number): CursorQuery {
    return cursorContext(this.cells(), index);
  }

  private restore(): string[] | null {
    const storage = this.opts.storage === undefined ? safeLocalStorage() : this.opts.storage;
    if (!storage) return null;
    try {
      const raw = storage.getItem(STORAGE_KEY);
      if (!raw) return null;
      const parsed = JSON.parse(raw);
      return Array.isArray(parsed) ? parsed.map(String) : null;
    } catch {
      return null;
    }
  }

  private persist(): void {
    const storage = this.opts.storage === undefined ? safeLocalStorage() : this.opts.storage;
    try {
      storage?.setItem(STORAGE_KEY, JSON.stringify(this.rawCells));
    } catch {
      // storage may be unavailable (private mode); drafts just stop persisting
    }
  }

  private render(): void {
    this.root.textContent = "";
    this.rawCells.forEach((raw, i) => {
      const cell = classifyCell(raw);
      const div = document.createElement("div");
      div.className = cell.kind === "section_title"
        ? `cell title-cell level-${cell.level}`
        : "cell paragraph-cell";
      div.contentEditable = "true";
      div.dataset.index = String(i);
      div.textContent = raw;
      div.addEventListener("keydown", (e) => this.onKeydown(e as KeyboardEvent, i));
      div.addEventListener("input", () => this.onInput(div, i));
      this.root.appendChild(div);
    });
  }

  private onInput(div: HTMLElement, index: number): void {
    this.rawCells[index] = div.textContent ?? "";
    const cell = classifyCell(this.rawCells[index]);
    div.className = cell.kind === "section_title"
      ? `cell title-cell level-${cell.level}`
      : "cell paragraph-cell";
    this.persist();
  }

  private onKeydown(e: KeyboardEvent, index: number): void {
    if (e.key === "Tab") {
      e.preventDefault();
      try {
        this.opts.onQuery?.(this.queryAt(index));
      } catch (err) {
        if (err instanceof EditorContextError) {
          this.opts.onError?.(err.message);
        } else {
          throw err;
        }
      }
      return;
    }
    if (e.key === "Enter") {
      e.preventDefault();
      this.rawCells.splice(index + 1, 0, "");
      this.render();
      this.persist();
      this.focusCell(index + 1);
      return;
    }
    if (e.key === "Backspace" && this.rawCells[index] === "" && this.rawCells.length > 1) {
      e.preventDefault();
      this.rawCells.splice(index, 1);
      this.render();
      this.persist();
      this.focusCell(Math.max(0, index - 1));
    }
  }

  focusCell(index: number): void {
    const el = this.root.querySelector<HTMLElement>(`[data-index="${index}"]`);
    el?.focus();
  }
}

function safeLocalStorage(): Storage | null {
  try {
    return typeof localStorage === "undefined" ? null : localStorage;
  } catch {
    return null;
  }
}
