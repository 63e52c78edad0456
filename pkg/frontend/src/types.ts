/** Shapes mirroring the gateway JSON exactly; no client-side derivation. */

export interface SessionInfo {
  token: string;
  user_id: string;
  roles: [string, string][];
  expires_at: string;
}

export interface Journal {
  journal_id: string;
  title: string;
  translated_title?: string;
  founder?: string;
  publisher?: string;
  aliases?: string[];
  isi_indexed?: boolean;
  moving_wall_years?: number;
}

export interface ImpactFactor {
  journal_id: string;
  year: number;
  horizon: number;
  mode: string;
  citations: number;
  citable_items: number;
  defined: boolean;
  value: string | null;
  rounded: string | null;
}

export interface ReportRow {
  journal_id: string;
  journal: string;
  integral_citations: string;
  integral_if: string;
  restricted_citations: string;
  restricted_if: string;
  error: string | null;
}

export interface ComparisonReport {
  year: number;
  horizon: number;
  rows: ReportRow[];
}

export interface TransitionEdge {
  from: string;
  to: string;
  roles: string[];
}

export interface TransitionTable {
  stages: string[];
  terminal: string[];
  edges: TransitionEdge[];
}

export interface DocumentRef {
  role: string;
  content_hash: string;
  filename: string;
  uploaded_by: string;
  timestamp: string;
}

export interface Manuscript {
  manuscript_id: string;
  journal_id: string;
  title: string;
  abstract?: string;
  keywords?: string[];
  authors: string[];
  submitted_by: string;
  files: DocumentRef[];
  current_stage: string;
  created_at: string;
}

export interface FlowRecord {
  record_id: string;
  manuscript_id: string;
  from_stage: string;
  to_stage: string;
  actor_user: string;
  actor_role: string;
  timestamp: string;
  note: string;
  documents: DocumentRef[];
}

export interface Assignment {
  manuscript_id: string;
  referee: string;
  assigned_by: string;
  status: string;
  label_index: number;
  recommendation?: string;
  created_at: string;
}

export interface FlowView {
  manuscript: Manuscript;
  viewer_role: string;
  records: FlowRecord[];
  assignments?: Assignment[];
}

export interface InboxRow {
  assignment: Assignment;
  manuscript: Manuscript | null;
}

export interface FilePayload {
  filename: string;
  data: string; // base64
}

export interface SubmissionPayload {
  journal_id: string;
  title: string;
  abstract: string;
  keywords: string[];
  authors: string[];
  translated_title?: string;
  source_latex: FilePayload;
  source_pdf: FilePayload;
}
