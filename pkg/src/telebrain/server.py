"""HTTP and WebSocket surface: join menu, blob fetch, live sessions.

One coroutine reads each socket; every mutation goes through the runtime,
which is lock-protected, so handlers stay straightforward. Errors go back as
typed error frames and never close the connection, except sequence
regressions and malformed floods, which are protocol violations.
"""

from __future__ import annotations

import logging
import uuid
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, Response

from . import wire
from .domain import FORMAT_VERSION, Capability
from .errors import NotFoundError, ProtocolError, TelebrainError
from .store import ContentStore
from .venue import Performance, VenueRuntime

log = logging.getLogger(__name__)

MALFORMED_FLOOD_LIMIT = 8


class Connection:
    def __init__(self, ws: WebSocket, conn_id: str):
        self.ws = ws
        self.conn_id = conn_id
        self.out_seq = wire.SeqSource()
        self.in_seq = wire.SeqTracker()
        self.performance: Optional[str] = None
        self.nickname: Optional[str] = None
        self.malformed = 0

    async def send(self, mtype: str, payload: dict) -> None:
        msg = wire.WireMessage(mtype, self.out_seq.next(), payload)
        await self.ws.send_text(wire.serialize(msg))

    async def send_error(self, exc: TelebrainError) -> None:
        await self.send("error", wire.error_message(exc, 1).payload)


def create_app(store: ContentStore, runtime: VenueRuntime) -> FastAPI:
    app = FastAPI(title="telebrain", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.runtime = runtime
    connections: dict[str, Connection] = {}

    @app.get("/performances")
    def performances() -> dict:
        return {"format-version": FORMAT_VERSION, "performances": runtime.live_performances()}

    @app.get("/blob/{blob_id}")
    def blob(blob_id: str):
        try:
            b = store.get_blob(blob_id)
        except NotFoundError as e:
            return JSONResponse({"code": e.code, "message": str(e)}, status_code=404)
        return Response(content=b.data, media_type=b.mime)

    async def broadcast_roster(perf: Performance) -> None:
        snap = perf.roster_snapshot()
        for c in list(connections.values()):
            if c.performance == perf.name:
                await c.send("roster_update", {"roster": snap})

    async def broadcast_activity(perf: Performance, entry) -> None:
        """Global-log holders see everything; performer-log holders see their own."""
        payload = {"entry": entry.to_dict(), "display": perf.display_line(entry)}
        for c in list(connections.values()):
            if c.performance != perf.name:
                continue
            p = perf.roster.get(c.conn_id)
            if p is None:
                continue
            caps = perf.capabilities_of(p)
            if Capability.GLOBAL_ACTIVITY_LOG in caps or (
                Capability.PERFORMER_ACTIVITY_LOG in caps and p.nickname in entry.participants
            ):
                await c.send("activity_update", payload)

    async def deliver(perf: Performance, envelope) -> None:
        for delivery in envelope.deliveries:
            c = connections.get(delivery.connection_id)
            if c is None:
                continue
            await c.send("cue", wire.cue_payload(envelope, delivery, store))

    async def handle_join(conn: Connection, payload: dict) -> None:
        if conn.performance is not None:
            raise ProtocolError("already joined", code="already-joined")
        name = payload["performance"]
        nickname = payload.get("nickname", "")
        role = payload.get("role", "")
        if "venue" in payload:
            perf = runtime.start_performance(
                payload["venue"], name, nickname, role, conn.conn_id,
                passcode=payload.get("passcode"), local_ip=payload.get("local-ip"))
        else:
            perf = runtime.join(name, nickname, role, conn.conn_id,
                                passcode=payload.get("passcode"),
                                local_ip=payload.get("local-ip"))
        conn.performance = perf.name
        conn.nickname = nickname
        p = perf.performer(conn.conn_id)
        await conn.send("join_ack", {
            "performance": perf.name,
            "nickname": nickname,
            "role": role,
            "capabilities": wire.capability_map(perf.capabilities_of(p)),
            "roster": perf.roster_snapshot(),
            "delay-budget": perf.delay_budget_ms,
            "seed": perf.seed,
        })
        t1 = runtime.clock.now_ms()
        await conn.send("clock_pong", {"t0": payload.get("t0", 0), "t1": t1,
                                       "t2": runtime.clock.now_ms()})
        await broadcast_roster(perf)

    async def handle_send(conn: Connection, payload: dict) -> None:
        perf = runtime.get(conn.performance)
        designation = wire.designation_from_payload(payload.get("designation", {}))
        if "tts-text" in payload:
            envelope, entry = perf.dispatch_live_tts(
                conn.conn_id, designation, payload["tts-text"],
                language=payload.get("language", "en-US"))
        elif "text" in payload:
            envelope, entry = perf.dispatch_live_text(conn.conn_id, designation, payload["text"])
        else:
            envelope, entry = perf.dispatch(conn.conn_id, designation, payload.get("content"))
        await deliver(perf, envelope)
        await broadcast_activity(perf, entry)

    async def handle_frame(conn: Connection, msg: wire.WireMessage) -> None:
        if msg.type == "join":
            await handle_join(conn, msg.payload)
        elif msg.type == "clock_ping":
            t1 = runtime.clock.now_ms()
            await conn.send("clock_pong", {"t0": msg.payload.get("t0", 0), "t1": t1,
                                           "t2": runtime.clock.now_ms()})
        elif msg.type == "leave":
            if conn.performance is not None:
                perf_name, conn.performance = conn.performance, None
                destroyed = runtime.leave(perf_name, conn.conn_id)
                if not destroyed:
                    await broadcast_roster(runtime.get(perf_name))
        elif msg.type == "send_request":
            if conn.performance is None:
                raise ProtocolError("join first", code="not-joined")
            await handle_send(conn, msg.payload)
        elif msg.type == "cue_ack":
            if msg.payload.get("late"):
                log.info("late cue ack from %s: %s", conn.nickname, msg.payload.get("cue-id"))
        elif msg.type == "functionality_change":
            perf = runtime.get(conn.performance)
            if "role" in msg.payload:
                perf.change_role(conn.conn_id, msg.payload["role"])
            if "flags" in msg.payload:
                flags = frozenset(Capability(f) for f in msg.payload["flags"])
                perf.change_functionality(conn.conn_id, flags)
            await broadcast_roster(perf)
        elif msg.type == "test_toggle":
            perf = runtime.get(conn.performance)
            perf.set_test_mode(conn.conn_id, bool(msg.payload.get("on")))
            await broadcast_roster(perf)
        elif msg.type == "error":
            log.warning("client error frame from %s: %s", conn.nickname, msg.payload)
        else:
            # server-bound direction never carries these tags
            raise ProtocolError(f"unexpected {msg.type} from client", code="unexpected-type")

    async def cleanup(conn: Connection) -> None:
        if conn.performance is None:
            return
        perf_name, conn.performance = conn.performance, None
        try:
            destroyed = runtime.leave(perf_name, conn.conn_id)
            if not destroyed:
                await broadcast_roster(runtime.get(perf_name))
        except TelebrainError:
            pass

    @app.websocket("/perform")
    async def perform(ws: WebSocket) -> None:
        await ws.accept()
        conn = Connection(ws, uuid.uuid4().hex)
        connections[conn.conn_id] = conn
        try:
            while True:
                frame = await ws.receive_text()
                try:
                    msg = wire.deserialize(frame)
                except ProtocolError as e:
                    conn.malformed += 1
                    await conn.send_error(e)
                    if conn.malformed >= MALFORMED_FLOOD_LIMIT:
                        await ws.close(code=1008)
                        break
                    continue
                try:
                    gap = conn.in_seq.observe(msg.seq)
                    if gap is not None:
                        await conn.send("error", {
                            "code": "seq-gap",
                            "message": f"expected seq {gap.expected}, got {gap.got}",
                        })
                except ProtocolError as e:
                    await conn.send_error(e)
                    await ws.close(code=1008)
                    break
                try:
                    await handle_frame(conn, msg)
                except TelebrainError as e:
                    await conn.send_error(e)
        except WebSocketDisconnect:
            pass
        finally:
            connections.pop(conn.conn_id, None)
            await cleanup(conn)

    return app
