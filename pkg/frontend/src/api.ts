/** Typed client for the gateway API with bearer-token session handling. */

import type {
  Assignment,
  ComparisonReport,
  FlowRecord,
  FlowView,
  ImpactFactor,
  InboxRow,
  Journal,
  Manuscript,
  SessionInfo,
  SubmissionPayload,
  TransitionTable,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  token: string | null = null;
  userId: string | null = null;
  roles: [string, string][] = [];

  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    rawBody?: string,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    let payload: string | undefined;
    if (rawBody !== undefined) {
      headers['Content-Type'] = 'text/plain';
      payload = rawBody;
    } else if (body !== undefined) {
      headers['Content-Type'] = 'application/json';
      payload = JSON.stringify(body);
    }
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers,
      body: payload,
    });
    if (!response.ok) {
      let code = 'http_error';
      let message = `HTTP ${response.status}`;
      try {
        const data = (await response.json()) as { error?: { code?: string; message?: string } };
        if (data.error) {
          code = data.error.code ?? code;
          message = data.error.message ?? message;
        }
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  get loggedIn(): boolean {
    return this.token !== null;
  }

  hasRole(journalId: string, ...roles: string[]): boolean {
    return this.roles.some(([j, r]) => j === journalId && roles.includes(r));
  }

  async login(userId: string, password: string): Promise<SessionInfo> {
    const session = await this.request<SessionInfo>('POST', '/auth/login', {
      user_id: userId,
      password,
    });
    this.token = session.token;
    this.userId = session.user_id;
    this.roles = session.roles;
    return session;
  }

  async logout(): Promise<void> {
    try {
      await this.request('POST', '/auth/logout', {});
    } finally {
      this.token = null;
      this.userId = null;
      this.roles = [];
    }
  }

  journals(): Promise<{ items: Journal[] }> {
    return this.request('GET', '/journals?limit=200');
  }

  journal(journalId: string): Promise<Journal> {
    return this.request('GET', `/journals/${encodeURIComponent(journalId)}`);
  }

  impactFactor(
    journalId: string,
    year: number,
    horizon: number,
    mode: string,
  ): Promise<ImpactFactor> {
    const q = `year=${year}&horizon=${horizon}&mode=${mode}`;
    return this.request('GET', `/journals/${encodeURIComponent(journalId)}/impact-factor?${q}`);
  }

  report(
    journalId: string,
    year: number,
    horizon: number,
    peers: string[] = [],
  ): Promise<ComparisonReport> {
    const q = `year=${year}&horizon=${horizon}&peers=${encodeURIComponent(peers.join(','))}`;
    return this.request('GET', `/journals/${encodeURIComponent(journalId)}/report?${q}`);
  }

  transitions(): Promise<TransitionTable> {
    return this.request('GET', '/editorial/transitions');
  }

  boardManuscripts(journalId: string): Promise<{ manuscripts: Manuscript[] }> {
    return this.request('GET', `/journals/${encodeURIComponent(journalId)}/manuscripts`);
  }

  forthcoming(journalId: string): Promise<{ manuscripts: Manuscript[] }> {
    return this.request('GET', `/journals/${encodeURIComponent(journalId)}/forthcoming`);
  }

  submitManuscript(payload: SubmissionPayload): Promise<{ manuscript_id: string; current_stage: string }> {
    return this.request('POST', '/manuscripts', payload);
  }

  transition(
    manuscriptId: string,
    toStage: string,
    note = '',
  ): Promise<FlowRecord> {
    return this.request('POST', `/manuscripts/${encodeURIComponent(manuscriptId)}/transitions`, {
      to_stage: toStage,
      note,
    });
  }

  assignReferee(manuscriptId: string, referee: string): Promise<Assignment> {
    return this.request('POST', `/manuscripts/${encodeURIComponent(manuscriptId)}/referees`, {
      referee,
    });
  }

  respondToAssignment(manuscriptId: string, accept: boolean): Promise<Assignment> {
    return this.request(
      'POST',
      `/manuscripts/${encodeURIComponent(manuscriptId)}/referee-response`,
      { accept },
    );
  }

  submitReview(
    manuscriptId: string,
    recommendation: string,
    filename: string,
    dataBase64: string,
  ): Promise<Assignment> {
    return this.request('POST', `/manuscripts/${encodeURIComponent(manuscriptId)}/reviews`, {
      recommendation,
      filename,
      data: dataBase64,
    });
  }

  assigned(): Promise<{ assignments: InboxRow[] }> {
    return this.request('GET', '/manuscripts/assigned');
  }

  flow(manuscriptId: string): Promise<FlowView> {
    return this.request('GET', `/manuscripts/${encodeURIComponent(manuscriptId)}/flow`);
  }

  documentUrl(manuscriptId: string, contentHash: string): string {
    return `${this.baseUrl}/api/v1/manuscripts/${encodeURIComponent(manuscriptId)}/documents/${contentHash}`;
  }
}
