// Copy events originating inside any [data-no-copy] container (result
// panel, tooltips, bookmark snapshots) are cancelled with a notice, so
// retrieved corpus text cannot be pasted into the draft. The editor cells
// and the user's own notes stay copyable.

function elementOf(node: Node | null): Element | null {
  if (!node) return null;
  return node.nodeType === Node.ELEMENT_NODE ? (node as Element) : node.parentElement;
}

function insideNoCopy(node: Node | null): boolean {
  const el = elementOf(node);
  return el ? el.closest("[data-no-copy]") !== null : false;
}

export function copyBlocked(doc: Document, event: Event): boolean {
  const selection = doc.getSelection?.();
  if (selection && selection.anchorNode && insideNoCopy(selection.anchorNode)) {
    return true;
  }
  return insideNoCopy(event.target as Node | null);
}

export function installCopyGuard(
  doc: Document,
  notify?: (message: string) => void,
): () => void {
  const handler = (event: Event) => {
    if (copyBlocked(doc, event)) {
      event.preventDefault();
      notify?.("Copying retrieved sentences is disabled; bookmark or take a note instead.");
    }
  };
  doc.addEventListener("copy", handler);
  doc.addEventListener("cut", handler);
  return () => {
    doc.removeEventListener("copy", handler);
    doc.removeEventListener("cut", handler);
  };
}
