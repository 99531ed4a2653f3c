"""Operator command line: serve, import content, apply venues, simulate.

stdout carries exactly one JSON document per successful run; every failure
path writes exactly one single-line JSON error object to stderr and exits
nonzero. That split keeps the commands scriptable.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import perpl, report, wire
from .domain import ContentKind, object_from_dict
from .errors import RejectedError, TelebrainError
from .store import ContentStore
from .venue import VenueRuntime

_ID_NAMESPACE = uuid.uuid5(uuid.NAMESPACE_URL, "telebrain")


@dataclass(frozen=True)
class ServerConfig:
    http_port: int = 8000
    osc_listen_port: int = 57121
    osc_send_port: int = 57120
    delay_budget_ms: int = 200
    data_dir: str = "telebrain-data"
    timezone: str = "UTC"
    rng_seed: Optional[int] = None

    def __post_init__(self):
        for label, port in (("http-port", self.http_port),
                            ("osc.listen_port", self.osc_listen_port),
                            ("osc.default_send_port", self.osc_send_port)):
            if not 1 <= port <= 65535:
                raise RejectedError(f"{label} must be in [1, 65535]", code="config")
        if self.delay_budget_ms <= 0:
            raise RejectedError("delay-budget-ms must be > 0", code="config")

    @classmethod
    def load(cls, path: Optional[str]) -> "ServerConfig":
        doc = {}
        if path:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        osc = doc.get("osc", {})
        data_dir = os.environ.get("TELEBRAIN_DATA_DIR") or doc.get("data-dir", cls.data_dir)
        return cls(
            http_port=doc.get("http-port", cls.http_port),
            osc_listen_port=osc.get("listen_port", cls.osc_listen_port),
            osc_send_port=osc.get("default_send_port", cls.osc_send_port),
            delay_budget_ms=doc.get("delay-budget-ms", cls.delay_budget_ms),
            data_dir=data_dir,
            timezone=doc.get("timezone", cls.timezone),
            rng_seed=doc.get("rng-seed"),
        )


class _Parser(argparse.ArgumentParser):
    """argparse that fails like the rest of the CLI: one JSON line on stderr."""

    def error(self, message: str):
        _print_error("usage", message)
        raise SystemExit(2)


def _print_error(code: str, message: str, details=None) -> None:
    doc = {"code": code, "message": message}
    if details is not None:
        doc["details"] = details
    print(json.dumps(doc, separators=(",", ":")), file=sys.stderr)


def _emit(data: dict) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _store_for(args) -> ContentStore:
    data_dir = args.data_dir or os.environ.get("TELEBRAIN_DATA_DIR") or "telebrain-data"
    return ContentStore(data_dir)


def _guess_mime(path: Path) -> str:
    ext = path.suffix.lower()
    return {
        ".wav": "audio/wav",
        ".pcm": "audio/pcm",
        ".raw": "audio/pcm",
        ".png": "image/png",
        ".jpg": "image/jpeg",
        ".jpeg": "image/jpeg",
    }.get(ext, "application/octet-stream")


# -- subcommands ----------------------------------------------------------


def cmd_serve(args) -> dict:
    import uvicorn

    from .server import create_app

    config = ServerConfig.load(args.config)
    store = ContentStore(config.data_dir)
    runtime = VenueRuntime(store, delay_budget_ms=config.delay_budget_ms,
                           seed=config.rng_seed, tz=config.timezone)
    app = create_app(store, runtime)
    uvicorn.run(app, host=args.host, port=config.http_port, log_level="info")
    return {"status": "stopped"}


def cmd_import_audio(args) -> dict:
    store = _store_for(args)
    if args.url:
        obj = store.save_web_audio(args.url, name=args.name, copyrighted=args.copyrighted)
    else:
        path = Path(args.file)
        obj = store.save_upload(path.read_bytes(), _guess_mime(path),
                                ContentKind.AUDIO_UPLOAD, args.name or path.stem)
    return obj.to_dict()


def cmd_import_image(args) -> dict:
    store = _store_for(args)
    if args.url:
        obj = store.save_web_image(args.url, name=args.name)
    else:
        path = Path(args.file)
        obj = store.save_upload(path.read_bytes(), _guess_mime(path),
                                ContentKind.IMAGE_UPLOAD, args.name or path.stem)
    return obj.to_dict()


def cmd_import_tts(args) -> dict:
    store = _store_for(args)
    obj = store.save_tts(args.text, args.language, name=args.name)
    return obj.to_dict()


def cmd_venue_apply(args) -> dict:
    """Upsert the documents of a declarative file; same schema as the store.

    Documents without an id get one derived from (type, name), so applying
    the same file again hits the same objects and changes nothing.
    """
    store = _store_for(args)
    doc = json.loads(Path(args.file).read_text(encoding="utf-8"))
    objects = doc.get("objects", [])
    applied = []
    for entry in objects:
        if not entry.get("id"):
            key = f"{entry.get('type')}:{entry.get('name', '')}"
            entry = dict(entry, id=uuid.uuid5(_ID_NAMESPACE, key).hex)
        obj = store.save(object_from_dict(entry))
        applied.append({"id": obj.id, "type": entry.get("type"), "name": entry.get("name", "")})
    return {"applied": applied, "count": len(applied)}


def cmd_simulate_bubble_sort(args) -> dict:
    rng = random.Random(args.seed)
    initial = list(range(1, args.n + 1))
    rng.shuffle(initial)
    if args.policy == "obedient":
        policy = perpl.ObedientSwapPolicy()
    else:
        policy = perpl.WillfulSwapPolicy(args.p, seed=args.seed + 1)
    trace = perpl.performatize_bubble_sort(initial, policy, max_iterations=args.max_iterations)
    out = {
        "initial": list(trace.initial),
        "final": list(trace.final),
        "iterations": len(trace.iterations),
        "verdict": trace.verdict,
        "policy": args.policy,
        "seed": args.seed,
    }
    if args.trace:
        Path(args.trace).write_text(trace.to_jsonl(), encoding="utf-8")
        out["trace"] = args.trace
    return out


def cmd_protocol_golden(args) -> dict:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus = wire.golden_corpus()
    for mtype, msg in corpus.items():
        (out_dir / f"{mtype}.json").write_text(wire.serialize(msg), encoding="utf-8")
    return {"out": str(out_dir), "count": len(corpus)}


def cmd_report(args) -> dict:
    return report.report(args.trace, args.out_dir)


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="telebrain", description="Telematic performance platform")
    parser.add_argument("--data-dir", default=None,
                        help="store location (default: $TELEBRAIN_DATA_DIR or ./telebrain-data)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP/WebSocket server")
    p.add_argument("--config", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    imp = sub.add_parser("import", help="ingest content into the store")
    imp_sub = imp.add_subparsers(dest="what", required=True)

    p = imp_sub.add_parser("audio")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--url")
    src.add_argument("--file")
    p.add_argument("--name", default=None)
    p.add_argument("--copyrighted", action="store_true",
                   help="assert the material is copyrighted (it will be refused)")
    p.set_defaults(func=cmd_import_audio)

    p = imp_sub.add_parser("image")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--url")
    src.add_argument("--file")
    p.add_argument("--name", default=None)
    p.set_defaults(func=cmd_import_image)

    p = imp_sub.add_parser("tts")
    p.add_argument("--text", required=True)
    p.add_argument("--language", default="en-US")
    p.add_argument("--name", default=None)
    p.set_defaults(func=cmd_import_tts)

    ven = sub.add_parser("venue", help="manage venue definitions")
    ven_sub = ven.add_subparsers(dest="what", required=True)
    p = ven_sub.add_parser("apply", help="upsert objects from a declarative file")
    p.add_argument("file")
    p.set_defaults(func=cmd_venue_apply)

    sim = sub.add_parser("simulate", help="run virtual-performer simulations")
    sim_sub = sim.add_subparsers(dest="what", required=True)
    p = sim_sub.add_parser("bubble-sort")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--policy", choices=["obedient", "willful"], default="obedient")
    p.add_argument("--p", type=float, default=0.3, help="defiance probability (willful)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--trace", default=None, help="write a JSON-lines trace here")
    p.set_defaults(func=cmd_simulate_bubble_sort)

    proto = sub.add_parser("protocol", help="wire-protocol fixtures")
    proto_sub = proto.add_subparsers(dest="what", required=True)
    p = proto_sub.add_parser("golden", help="regenerate the golden frame corpus")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_protocol_golden)

    p = sub.add_parser("report", help="render figures and CSV from a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = args.func(args)
    except TelebrainError as e:
        _print_error(e.code, str(e), e.details)
        return 1
    except FileNotFoundError as e:
        _print_error("not-found", str(e))
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as e:
        _print_error("invalid-input", str(e))
        return 1
    _emit(data)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
