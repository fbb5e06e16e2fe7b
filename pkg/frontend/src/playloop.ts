// Session controller: a small state machine over the service transport.
// The user enters a formula; if it is provable the engine has a winning
// strategy and there is nothing to demonstrate, otherwise a session opens
// and each turn shows the engine's new moves and offers the legal top
// moves (or passing, or finishing to reveal the verdict).

import { ApiError, type Snapshot, type Transport } from "./api.js";

export type LoopPhase =
  | "idle"
  | "provable"
  | "awaiting-move"
  | "finished"
  | "error";

export interface LoopState {
  phase: LoopPhase;
  sessionId: string | null;
  snapshot: Snapshot | null;
  message: string;
}

export class PlayLoop {
  state: LoopState = { phase: "idle", sessionId: null, snapshot: null, message: "" };

  constructor(private transport: Transport) {}

  private setSnapshot(snapshot: Snapshot): void {
    this.state.snapshot = snapshot;
    this.state.phase = snapshot.status === "FINISHED" ? "finished" : "awaiting-move";
  }

  async start(body: { formula?: string; kind?: string; form?: unknown }): Promise<LoopState> {
    try {
      const created = await this.transport.createSession(body);
      this.state.sessionId = created.id;
      this.setSnapshot(created.snapshot);
      this.state.message = `engine opened with ${created.engine_moves.length} move(s)`;
    } catch (err) {
      if (err instanceof ApiError && err.status === 400) {
        this.state = {
          phase: "provable",
          sessionId: null,
          snapshot: null,
          message: "the formula is provable: the engine holds a winning strategy",
        };
      } else {
        this.state = {
          phase: "error",
          sessionId: null,
          snapshot: null,
          message: String(err),
        };
      }
    }
    return this.state;
  }

  async refresh(): Promise<LoopState> {
    if (this.state.sessionId) {
      this.setSnapshot(await this.transport.snapshot(this.state.sessionId));
    }
    return this.state;
  }

  async move(moveText: string): Promise<LoopState> {
    if (!this.state.sessionId) {
      return this.state;
    }
    try {
      const resp = await this.transport.move(this.state.sessionId, moveText);
      this.setSnapshot(resp.snapshot);
      this.state.message = `played ${moveText}; engine answered with ${resp.engine_moves.length} move(s)`;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.state.message = `illegal move: ${err.message}`;
      } else if (err instanceof ApiError && err.status === 410) {
        this.state.message = "the session is already finished";
        await this.refresh();
      } else {
        this.state.message = String(err);
      }
    }
    return this.state;
  }

  async pass(): Promise<LoopState> {
    if (!this.state.sessionId) {
      return this.state;
    }
    const resp = await this.transport.pass(this.state.sessionId);
    this.setSnapshot(resp.snapshot);
    this.state.message = "passed; the engine ran another pass";
    return this.state;
  }

  async finish(): Promise<LoopState> {
    if (!this.state.sessionId) {
      return this.state;
    }
    const resp = await this.transport.finish(this.state.sessionId);
    this.setSnapshot(resp.snapshot);
    this.state.message =
      resp.verdict === "B"
        ? "out of moves: the engine wins and the shown contents are falsified"
        : "the play ends top-won";
    return this.state;
  }
}
