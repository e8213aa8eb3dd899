import type { SentenceContext } from "./types.js";

// Hover card with the retrieved sentence's provenance: linked paper title,
// hierarchical section path, and the sentences immediately before/after.

export class Tooltip {
  readonly el: HTMLElement;

  constructor(doc: Document = document) {
    this.el = doc.createElement("div");
    this.el.className = "tooltip";
    this.el.hidden = true;
    // tooltip shows corpus text; same copy restrictions as the result panel
    this.el.setAttribute("data-no-copy", "true");
    doc.body.appendChild(this.el);
  }

  show(ctx: SentenceContext, anchor: HTMLElement): void {
    this.el.textContent = "";

    const title = document.createElement("div");
    title.className = "tooltip-title";
    if (ctx.paper_url) {
      const link = document.createElement("a");
      link.href = ctx.paper_url;
      link.target = "_blank";
      link.rel = "noopener";
      link.textContent = ctx.paper_title;
      title.appendChild(link);
    } else {
      title.textContent = ctx.paper_title;
    }
    this.el.appendChild(title);

    const path = document.createElement("div");
    path.className = "tooltip-path";
    path.textContent = ctx.section_path.join(" > ");
    this.el.appendChild(path);

    if (ctx.prev_text) {
      const prev = document.createElement("div");
      prev.className = "tooltip-neighbor";
      prev.textContent = `↑ ${ctx.prev_text}`;
      this.el.appendChild(prev);
    }
    if (ctx.next_text) {
      const next = document.createElement("div");
      next.className = "tooltip-neighbor";
      next.textContent = `↓ ${ctx.next_text}`;
      this.el.appendChild(next);
    }
    if (ctx.citations.length) {
      const list = document.createElement("ul");
      list.className = "tooltip-citations";
      for (const c of ctx.citations) {
        const item = document.createElement("li");
        item.textContent = c.authors || c.cited_title
          ? `${c.marker} ${c.authors}: ${c.cited_title}`
          : c.marker;
        list.appendChild(item);
      }
      this.el.appendChild(list);
    }

    const rect = anchor.getBoundingClientRect();
    this.el.style.left = `${rect.left + window.scrollX}px`;
    this.el.style.top = `${rect.bottom + window.scrollY + 4}px`;
    this.el.hidden = false;
  }

  hide(): void {
    this.el.hidden = true;
  }
}
