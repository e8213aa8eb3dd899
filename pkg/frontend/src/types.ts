// Payload shapes of the engine's HTTP API. The UI renders these verbatim;
// it never recomputes annotations or rankings client-side.

export type RenderMode = "color" | "grey" | "plain";

export interface SentenceRef {
  sentence_id: string;
  text: string;
  doc_id: string;
  section_path: string[];
}

export interface RetrievedRowPayload {
  match: SentenceRef;
  next: SentenceRef | null;
  display: SentenceRef;
  distance: number;
}

export interface Span {
  start: number;
  end: number;
  kind: "color" | "grey";
  color_index?: number;
}

export interface AnnotationEntry {
  sentence_id: string;
  spans: Span[];
}

export interface Annotations {
  match: AnnotationEntry[];
  next: AnnotationEntry[];
}

export interface RetrieveResponse {
  rows: RetrievedRowPayload[];
  annotations: Annotations;
  result_token: string;
}

export interface PdcMember {
  title: string;
  doc_id: string;
  grey_token_indices: number[];
}

export interface PdcCluster {
  name: string;
  count: number;
  underline_tokens: string[];
  members: PdcMember[];
}

export interface PdcResponse {
  clusters: PdcCluster[];
  total_titles: number;
}

export interface CitationInfo {
  marker: string;
  authors: string;
  cited_title: string;
}

export interface SentenceContext {
  paper_title: string;
  paper_url: string | null;
  section_path: string[];
  prev_text: string | null;
  next_text: string | null;
  citations: CitationInfo[];
}

export interface NotePayload {
  note_id: string | null;
  text: string;
  updated_at: string | null;
}

export interface BookmarkPayload {
  bookmark_id: string;
  sentence_id: string;
  created_at: string;
  snapshot: {
    sentence_text: string;
    paper_title: string;
    paper_url: string;
    section_path: string[];
  };
  note: NotePayload | null;
}

export interface RetrieveRequest {
  section_title: string;
  paragraph_text: string;
  offset: number;
  mode: RenderMode;
}
