import type {
  Annotations,
  BookmarkPayload,
  NotePayload,
  PdcResponse,
  RenderMode,
  RetrieveRequest,
  RetrieveResponse,
  SentenceContext,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the engine's HTTP API. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    // bind so a bare window.fetch keeps its receiver
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      let code = "internal";
      let message = `HTTP ${resp.status}`;
      try {
        const payload = await resp.json();
        code = payload.code ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(resp.status, code, message);
    }
    if (resp.status === 204) {
      return undefined as T;
    }
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  pdc(): Promise<PdcResponse> {
    return this.request("GET", "/pdc");
  }

  retrieve(req: RetrieveRequest): Promise<RetrieveResponse> {
    return this.request("POST", "/retrieve", req);
  }

  /** Re-rank a cached result around a row; the server recomputes annotations. */
  rerank(resultToken: string, anchorRow: number, mode?: RenderMode): Promise<RetrieveResponse> {
    return this.request("POST", "/retrieve/rerank", {
      result_token: resultToken,
      anchor_row: anchorRow,
      ...(mode ? { mode } : {}),
    });
  }

  /** Fetch annotations for another rendering mode without re-running search. */
  annotations(resultToken: string, mode: RenderMode): Promise<{ annotations: Annotations; result_token: string }> {
    return this.request("POST", "/retrieve/annotations", {
      result_token: resultToken,
      mode,
    });
  }

  sentenceContext(sentenceId: string): Promise<SentenceContext> {
    // sentence ids contain '#', which would otherwise become a fragment
    return this.request("GET", `/sentence/${encodeURIComponent(sentenceId)}/context`);
  }

  addBookmark(sentenceId: string): Promise<BookmarkPayload> {
    return this.request("POST", "/bookmarks", { sentence_id: sentenceId });
  }

  removeBookmark(bookmarkId: string): Promise<void> {
    return this.request("DELETE", `/bookmarks/${encodeURIComponent(bookmarkId)}`);
  }

  putNote(bookmarkId: string, text: string): Promise<NotePayload> {
    return this.request("PUT", `/bookmarks/${encodeURIComponent(bookmarkId)}/note`, { text });
  }

  listBookmarks(): Promise<{ bookmarks: BookmarkPayload[] }> {
    return this.request("GET", "/bookmarks");
  }

  exportUrl(): string {
    return this.base + "/export/bookmarks.csv";
  }
}
