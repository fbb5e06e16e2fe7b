// Types mirroring the session service JSON, plus a thin fetch transport.
// The UI renders only data served by the backend and never computes
// legality locally; every rule question goes through these calls.

export interface RunEntry {
  label: string; // "T" | "B"
  move: string;
  step: number;
}

export interface MoleculeView {
  id: string;
  metatype: string;
  gender: string;
  row: number | null;
  leaf: string;
  inner: string | null;
  letter: string;
  constant: number | null;
  time: number | null;
  state: "VIRGIN" | "DEVIRGINIZED" | "MATCHED";
}

export interface LegalMove {
  kind: "choice" | "replicate";
  template: string;
  slot: string | null;
}

export interface ConjunctState {
  i: number;
  nodes: string[];
  leaves: Record<string, unknown>;
}

export interface Snapshot {
  id: string;
  status: string;
  formula: string | null;
  form: { kind: string; s: number; W: string; rows: Record<string, string>[] };
  phase: string;
  delta: number | null;
  run: RunEntry[];
  permission_count: number;
  steps: number;
  state: { consequent: unknown; conjuncts: ConjunctState[]; used_constants: number[] };
  molecules: MoleculeView[];
  legal_moves: LegalMove[];
  chains: { supermolecules: unknown[]; master_chain?: string[] | null };
  verdict?: string | null;
  interpretation?: InterpretationView | null;
}

export interface InterpretationView {
  default: boolean;
  exceptions: { letter: string; constant: number }[];
}

export interface FinishResponse {
  verdict: string;
  interpretation: InterpretationView;
  record: unknown;
  snapshot: Snapshot;
}

export interface MoveResponse {
  applied: string;
  engine_moves: RunEntry[];
  snapshot: Snapshot;
}

export interface CreateResponse {
  id: string;
  engine_moves: RunEntry[];
  snapshot: Snapshot;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

// Transport interface so the play loop is testable against fixtures.
export interface Transport {
  createSession(body: {
    formula?: string;
    kind?: string;
    form?: unknown;
  }): Promise<CreateResponse>;
  snapshot(id: string): Promise<Snapshot>;
  move(id: string, move: string): Promise<MoveResponse>;
  pass(id: string): Promise<{ engine_moves: RunEntry[]; snapshot: Snapshot }>;
  finish(id: string): Promise<FinishResponse>;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await resp.json().catch(() => null);
  if (!resp.ok) {
    throw new ApiError(resp.status, body?.detail ?? body);
  }
  return body as T;
}

export class HttpTransport implements Transport {
  constructor(private base: string = "") {}

  createSession(body: { formula?: string; kind?: string; form?: unknown }) {
    return request<CreateResponse>(`${this.base}/sessions`, {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  snapshot(id: string) {
    return request<Snapshot>(`${this.base}/sessions/${id}`);
  }

  move(id: string, move: string) {
    return request<MoveResponse>(`${this.base}/sessions/${id}/move`, {
      method: "POST",
      body: JSON.stringify({ move }),
    });
  }

  pass(id: string) {
    return request<{ engine_moves: RunEntry[]; snapshot: Snapshot }>(
      `${this.base}/sessions/${id}/pass`,
      { method: "POST" },
    );
  }

  finish(id: string) {
    return request<FinishResponse>(`${this.base}/sessions/${id}/finish`, {
      method: "POST",
    });
  }
}
