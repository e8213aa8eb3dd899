import { colorFor } from "./palette.js";
import type { AnnotationEntry, Span } from "./types.js";

// Turns server-sent spans into styled DOM. Offsets count Unicode code
// points, so slicing goes through a code-point array rather than UTF-16
// indices.

export function renderAnnotated(text: string, spans: Span[]): DocumentFragment {
  const frag = document.createDocumentFragment();
  const chars = Array.from(text);
  const ordered = [...spans].sort((a, b) => a.start - b.start);
  let pos = 0;
  for (const span of ordered) {
    if (span.start < pos) continue; // server spans never overlap within a mode
    if (span.start > pos) {
      frag.appendChild(document.createTextNode(chars.slice(pos, span.start).join("")));
    }
    const el = document.createElement("span");
    el.textContent = chars.slice(span.start, span.end).join("");
    if (span.kind === "color" && span.color_index !== undefined) {
      el.className = "hl-color";
      el.style.color = colorFor(span.color_index);
      el.dataset.colorIndex = String(span.color_index);
    } else {
      el.className = "hl-grey";
    }
    frag.appendChild(el);
    pos = span.end;
  }
  if (pos < chars.length) {
    frag.appendChild(document.createTextNode(chars.slice(pos).join("")));
  }
  return frag;
}

export function spanIndex(entries: AnnotationEntry[]): Map<string, Span[]> {
  const map = new Map<string, Span[]>();
  for (const entry of entries) {
    map.set(entry.sentence_id, entry.spans);
  }
  return map;
}
