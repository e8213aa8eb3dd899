import type { ApiClient } from "./api.js";
import type { BookmarkPayload } from "./types.js";

// Bookmarks + user notes panel. Snapshot text is corpus material and stays
// under the copy guard; the note textarea is the user's own writing and is
// deliberately copyable.

export class NotesPanel {
  readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly onError?: (message: string) => void;

  constructor(root: HTMLElement, api: ApiClient, onError?: (message: string) => void) {
    this.root = root;
    this.api = api;
    this.onError = onError;
    this.root.classList.add("notes-panel");
  }

  async refresh(): Promise<void> {
    try {
      const { bookmarks } = await this.api.listBookmarks();
      this.render(bookmarks);
    } catch (err) {
      this.onError?.(String((err as Error).message ?? err));
    }
  }

  private render(bookmarks: BookmarkPayload[]): void {
    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = "User notes";
    this.root.appendChild(heading);

    const exportLink = document.createElement("a");
    exportLink.className = "export-link";
    exportLink.href = this.api.exportUrl();
    exportLink.textContent = "Export as CSV";
    exportLink.download = "bookmarks.csv";
    this.root.appendChild(exportLink);

    for (const bm of bookmarks) {
      const card = document.createElement("div");
      card.className = "bookmark-card";
      card.dataset.bookmarkId = bm.bookmark_id;

      const snapshot = document.createElement("blockquote");
      snapshot.className = "bookmark-snapshot";
      snapshot.setAttribute("data-no-copy", "true");
      snapshot.textContent = bm.snapshot.sentence_text;
      card.appendChild(snapshot);

      const source = document.createElement("div");
      source.className = "bookmark-source";
      source.textContent =
        `${bm.snapshot.paper_title} — ${bm.snapshot.section_path.join(" > ")}`;
      card.appendChild(source);

      const note = document.createElement("textarea");
      note.className = "note-input";
      note.placeholder = "Why does this example work (or not)?";
      note.value = bm.note?.text ?? "";
      card.appendChild(note);

      const save = document.createElement("button");
      save.className = "note-save";
      save.textContent = "Save note";
      save.addEventListener("click", async () => {
        try {
          await this.api.putNote(bm.bookmark_id, note.value);
        } catch (err) {
          this.onError?.(String((err as Error).message ?? err));
        }
      });
      card.appendChild(save);

      const remove = document.createElement("button");
      remove.className = "bookmark-remove";
      remove.textContent = "Remove";
      remove.addEventListener("click", async () => {
        try {
          await this.api.removeBookmark(bm.bookmark_id);
          await this.refresh();
        } catch (err) {
          this.onError?.(String((err as Error).message ?? err));
        }
      });
      card.appendChild(remove);

      this.root.appendChild(card);
    }
  }
}
