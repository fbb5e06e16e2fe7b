"""JSON-over-HTTP session service for live play against the engine.

The service is a transport over the same session machinery the
scheduler drives: the engine runs to its next permission grant, then
exactly one optional human (top) move is accepted.  A session driven by
a scripted client therefore reproduces the scheduler's records byte for
byte.
"""

from __future__ import annotations

import itertools
import threading
from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from counterplay.calculus import int_prove, int_proof_to_json
from counterplay.formula import ImpKind, IntSequent, ParseError, parse_int
from counterplay.gamecore import (
    Verdict,
    collect_supermolecules,
    enumerate_top_moves,
    eval_state,
    find_master_chain,
)
from counterplay.gamecore.moves import MoveError
from counterplay.gamecore.state import IllegalMove
from counterplay.interp import build_dagger
from counterplay.kripke import countermodel_from_trace
from counterplay.machines import PlaySession, Valuation
from counterplay.transform import GameForm, game_form_of


class ProveBody(BaseModel):
    formula: str
    kind: str = "bimp"


class SessionBody(BaseModel):
    formula: Optional[str] = None
    kind: str = "bimp"
    form: Optional[dict] = None
    budget: int = 10000


class MoveBody(BaseModel):
    move: str


class _Session:
    def __init__(self, sid: str, form: GameForm, budget: int, formula: str | None) -> None:
        self.id = sid
        self.formula = formula
        self.budget = budget
        self.play = PlaySession(form)
        self.lock = threading.Lock()
        self.status = "ENGINE_TURN"
        self.verdict: Verdict | None = None
        self.interpretation: dict | None = None

    def engine_to_permission(self) -> list[dict[str, Any]]:
        before = len(self.play.run)
        self.play.engine_pass()
        self.play.grant_permission()
        self.status = "AWAITING_HUMAN"
        return [
            {"label": l, "move": m, "step": s} for (l, m, s) in self.play.run[before:]
        ]

    def molecules(self) -> list[dict[str, Any]]:
        from counterplay.gamecore import gender_of, matchingly_devirginized

        out = []
        state = self.play.state
        for mol in state.molecules():
            cell = state.cell(mol)
            status = "VIRGIN"
            if cell is not None:
                status = (
                    "MATCHED" if matchingly_devirginized(state, mol) else "DEVIRGINIZED"
                )
            out.append(
                {
                    "id": mol.label(),
                    "metatype": mol.mt.value,
                    "gender": gender_of(mol.mt),
                    "row": mol.j or None,
                    "leaf": mol.w or "e",
                    "inner": (mol.u or "e") if mol.mt.value == "P" else None,
                    "letter": state.letter_of(mol),
                    "constant": cell.const if cell else None,
                    "time": cell.time if cell else None,
                    "state": status,
                }
            )
        return out

    def snapshot(self) -> dict[str, Any]:
        p = self.play
        sms = collect_supermolecules(p.state, p.delta)
        chains: dict[str, Any] = {
            "supermolecules": [
                {
                    "molecule": sm.molecule.label(),
                    "letter": sm.letter,
                    "constant": sm.const,
                    "time": sm.time,
                    "old_generation": sm.old_generation,
                }
                for sm in sms
            ]
        }
        if p.delta is not None:
            chain = find_master_chain(p.state, p.delta)
            chains["master_chain"] = [m.label() for m in chain] if chain else None
        body: dict[str, Any] = {
            "id": self.id,
            "status": self.status,
            "formula": self.formula,
            "form": p.form.to_json(),
            "phase": p.phase,
            "delta": p.delta,
            "run": [{"label": l, "move": m, "step": s} for (l, m, s) in p.run],
            "permission_count": len(p.permission_steps),
            "steps": p.step_counter,
            "state": p.state.to_json(),
            "molecules": self.molecules(),
            "legal_moves": enumerate_top_moves(p.state) if self.status == "AWAITING_HUMAN" else [],
            "chains": chains,
        }
        if self.status == "FINISHED":
            body["verdict"] = self.verdict.value if self.verdict else None
            body["interpretation"] = self.interpretation
            body["record"] = self.play.record(True, False, Valuation()).to_json()
        return body


def create_app(ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="counterplay", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    sessions: dict[str, _Session] = {}
    counter = itertools.count(1)

    def get_session(sid: str) -> _Session:
        if sid not in sessions:
            raise HTTPException(status_code=404, detail="unknown session")
        return sessions[sid]

    @app.post("/prove")
    def prove(body: ProveBody):
        kind = ImpKind.BIMP if body.kind == "bimp" else ImpKind.PIMP
        try:
            f = parse_int(body.formula, kind)
        except ParseError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if isinstance(f, IntSequent):
            raise HTTPException(status_code=422, detail="expected a formula")
        outcome = int_prove(f)
        if outcome.is_proved:
            return {"provable": True, "proof": int_proof_to_json(outcome.proved)}
        model = countermodel_from_trace(outcome.refuted)
        return {"provable": False, "countermodel": model.to_json()}

    @app.post("/sessions")
    def create_session(body: SessionBody):
        kind = ImpKind.BIMP if body.kind == "bimp" else ImpKind.PIMP
        formula_text = None
        if body.form is not None:
            form = GameForm.from_json(body.form)
        elif body.formula is not None:
            try:
                f = parse_int(body.formula, kind)
            except ParseError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            if isinstance(f, IntSequent):
                raise HTTPException(status_code=422, detail="expected a formula")
            outcome = int_prove(f)
            if outcome.is_proved:
                raise HTTPException(
                    status_code=400,
                    detail={
                        "provable": True,
                        "proof": int_proof_to_json(outcome.proved),
                        "note": "provable formulas carry a winning strategy; nothing to demonstrate",
                    },
                )
            form = game_form_of(f)
            formula_text = body.formula
        else:
            raise HTTPException(status_code=422, detail="provide a formula or a form")
        sid = f"s{next(counter)}"
        session = _Session(sid, form, body.budget, formula_text)
        sessions[sid] = session
        with session.lock:
            moves = session.engine_to_permission()
        return {"id": sid, "engine_moves": moves, "snapshot": session.snapshot()}

    @app.get("/sessions/{sid}")
    def get_snapshot(sid: str):
        session = get_session(sid)
        with session.lock:
            return session.snapshot()

    @app.post("/sessions/{sid}/move")
    def post_move(sid: str, body: MoveBody):
        session = get_session(sid)
        with session.lock:
            if session.status == "FINISHED":
                raise HTTPException(status_code=410, detail="session is finished")
            try:
                session.play.emit_adversary(body.move)
            except (IllegalMove, MoveError) as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            engine_moves = session.engine_to_permission()
            return {"applied": body.move, "engine_moves": engine_moves, "snapshot": session.snapshot()}

    @app.post("/sessions/{sid}/pass")
    def post_pass(sid: str):
        """Decline to move for one permission; the engine runs another pass."""
        session = get_session(sid)
        with session.lock:
            if session.status == "FINISHED":
                raise HTTPException(status_code=410, detail="session is finished")
            engine_moves = session.engine_to_permission()
            return {"engine_moves": engine_moves, "snapshot": session.snapshot()}

    @app.post("/sessions/{sid}/finish")
    def post_finish(sid: str):
        session = get_session(sid)
        with session.lock:
            if session.status == "FINISHED":
                raise HTTPException(status_code=410, detail="session is finished")
            while True:
                emitted, _ = session.play.engine_pass()
                session.play.grant_permission()
                if emitted == 0:
                    break
            rec = session.play.record(True, False, Valuation())
            dagger = build_dagger(rec, session.play.state)
            verdict = eval_state(session.play.state, dagger.truth)
            session.status = "FINISHED"
            session.verdict = verdict
            session.interpretation = dagger.to_json()
            return {
                "verdict": verdict.value,
                "interpretation": dagger.to_json(),
                "record": rec.to_json(),
                "snapshot": session.snapshot(),
            }

    @app.get("/sessions/{sid}/record")
    def get_record(sid: str):
        session = get_session(sid)
        with session.lock:
            quiescent = session.status == "FINISHED"
            return session.play.record(quiescent, False, Valuation()).to_json()

    return app


app = create_app()
