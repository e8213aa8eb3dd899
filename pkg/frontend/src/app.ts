import { ApiClient } from "./api.js";
import { installCopyGuard } from "./copyguard.js";
import { Editor } from "./editor.js";
import { NotesPanel } from "./notes.js";
import { ResultsPanel } from "./results.js";
import { Sidebar } from "./sidebar.js";
import { Tooltip } from "./tooltip.js";
import type { RenderMode } from "./types.js";

export interface App {
  editor: Editor;
  results: ResultsPanel;
  sidebar: Sidebar;
  notes: NotesPanel;
  setMode: (mode: RenderMode) => Promise<void>;
  notice: (message: string) => void;
  teardown: () => void;
}

const MODES: RenderMode[] = ["color", "grey", "plain"];

export function createApp(root: HTMLElement, api: ApiClient,
                          storage?: Pick<Storage, "getItem" | "setItem"> | null): App {
  root.classList.add("app");
  root.innerHTML = `
    <aside class="pane pane-sidebar"></aside>
    <main class="pane pane-editor">
      <div class="editor-host"></div>
      <div class="hint">TAB retrieves examples for the focused paragraph;
        empty cells after a paragraph peek further ahead.</div>
    </main>
    <section class="pane pane-results">
      <div class="mode-toggle"></div>
      <div class="results-host"></div>
    </section>
    <aside class="pane pane-notes"></aside>
    <div class="notice-bar" hidden></div>
  `;

  const noticeBar = root.querySelector<HTMLElement>(".notice-bar")!;
  let noticeTimer: ReturnType<typeof setTimeout> | undefined;
  const notice = (message: string) => {
    noticeBar.textContent = message;
    noticeBar.hidden = false;
    if (noticeTimer) clearTimeout(noticeTimer);
    noticeTimer = setTimeout(() => {
      noticeBar.hidden = true;
    }, 4000);
  };

  const tooltip = new Tooltip(root.ownerDocument);
  const notes = new NotesPanel(root.querySelector<HTMLElement>(".pane-notes")!, api, notice);
  const results = new ResultsPanel(
    root.querySelector<HTMLElement>(".results-host")!, api, {
      onError: notice,
      onBookmark: async (sentenceId) => {
        try {
          await api.addBookmark(sentenceId);
          notice("Bookmarked.");
          await notes.refresh();
        } catch (err) {
          notice(String((err as Error).message ?? err));
        }
      },
      onHover: async (sentenceId, anchor) => {
        try {
          tooltip.show(await api.sentenceContext(sentenceId), anchor);
        } catch {
          tooltip.hide();
        }
      },
      onHoverEnd: () => tooltip.hide(),
    });

  const sidebar = new Sidebar(root.querySelector<HTMLElement>(".pane-sidebar")!);
  const editor = new Editor(root.querySelector<HTMLElement>(".editor-host")!, {
    storage,
    onError: notice,
    onQuery: async (query) => {
      try {
        const resp = await api.retrieve({ ...query, mode: results.currentMode });
        results.showResult(resp, results.currentMode);
      } catch (err) {
        notice(String((err as Error).message ?? err));
      }
    },
  });

  // mode buttons swap annotations on the cached result; no new search
  const toggle = root.querySelector<HTMLElement>(".mode-toggle")!;
  const buttons = new Map<RenderMode, HTMLButtonElement>();
  const setMode = async (mode: RenderMode) => {
    await results.toggleMode(mode);
    for (const [m, btn] of buttons) {
      btn.classList.toggle("active", m === results.currentMode);
    }
  };
  for (const mode of MODES) {
    const btn = document.createElement("button");
    btn.textContent = mode;
    btn.className = `mode-btn mode-${mode}`;
    btn.classList.toggle("active", mode === results.currentMode);
    btn.addEventListener("click", () => void setMode(mode));
    buttons.set(mode, btn);
    toggle.appendChild(btn);
  }

  const removeGuard = installCopyGuard(root.ownerDocument, notice);

  void api.pdc().then((pdc) => sidebar.show(pdc)).catch(() =>
    notice("Could not load the section-title distribution."));
  void notes.refresh();

  return {
    editor, results, sidebar, notes, setMode, notice,
    teardown: removeGuard,
  };
}
