import type { PdcResponse } from "./types.js";

// "Section titles from other papers": the ordered cluster distribution.
// Underlined words in a cluster name occur in every member title; greyed
// words in an expanded member already appeared higher in the cluster. All
// of that arrives precomputed from the server.

const TOKEN = /[^\W_]+/gu;

function renderTitleTokens(title: string, decorate: (token: string, tokenIdx: number) => HTMLElement | Text): DocumentFragment {
  const frag = document.createDocumentFragment();
  let last = 0;
  let tokenIdx = 0;
  for (const m of title.matchAll(TOKEN)) {
    const start = m.index ?? 0;
    if (start > last) {
      frag.appendChild(document.createTextNode(title.slice(last, start)));
    }
    frag.appendChild(decorate(m[0], tokenIdx));
    tokenIdx += 1;
    last = start + m[0].length;
  }
  if (last < title.length) {
    frag.appendChild(document.createTextNode(title.slice(last)));
  }
  return frag;
}

export class Sidebar {
  readonly root: HTMLElement;

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("sidebar");
  }

  show(pdc: PdcResponse): void {
    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = "Section titles from other papers";
    this.root.appendChild(heading);

    const maxCount = Math.max(1, ...pdc.clusters.map((c) => c.count));
    for (const cluster of pdc.clusters) {
      const box = document.createElement("div");
      box.className = "cluster";

      const header = document.createElement("button");
      header.className = "cluster-header";
      header.type = "button";

      const bar = document.createElement("span");
      bar.className = "count-bar";
      bar.style.width = `${(100 * cluster.count) / maxCount}%`;

      const name = document.createElement("span");
      name.className = "cluster-name";
      const underline = new Set(cluster.underline_tokens);
      name.appendChild(renderTitleTokens(cluster.name, (token) => {
        if (underline.has(token.toLowerCase())) {
          const u = document.createElement("u");
          u.textContent = token;
          return u;
        }
        return document.createTextNode(token);
      }));

      const count = document.createElement("span");
      count.className = "cluster-count";
      count.textContent = String(cluster.count);

      header.append(bar, name, count);
      box.appendChild(header);

      const memberList = document.createElement("div");
      memberList.className = "cluster-members";
      memberList.hidden = true;
      for (const member of cluster.members) {
        const row = document.createElement("div");
        row.className = "cluster-member";
        const greyed = new Set(member.grey_token_indices);
        row.appendChild(renderTitleTokens(member.title, (token, tokenIdx) => {
          const span = document.createElement("span");
          span.textContent = token;
          if (greyed.has(tokenIdx)) {
            span.className = "hl-grey";
          }
          return span;
        }));
        memberList.appendChild(row);
      }
      box.appendChild(memberList);

      header.addEventListener("click", () => {
        memberList.hidden = !memberList.hidden;
      });

      this.root.appendChild(box);
    }
  }
}
