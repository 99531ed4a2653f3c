"""Persistent store for domain objects and media blobs.

Layout on disk is deliberately inspectable: one canonical JSON document per
object under ``objects/<id>.json`` and content-addressed media under
``blobs/<blob-id>`` (with a small ``.json`` sidecar for mime and origin).
Identical bytes share one blob file, but saved objects are never deduplicated:
saving the same URL twice yields two distinct content objects.

All mutations funnel through one lock (single writer); reads are snapshots of
immutable values and need no coordination.
"""

from __future__ import annotations

import hashlib
import json
import threading
import urllib.request
import uuid
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Optional

from . import audio as audio_pipeline
from . import tts as tts_mod
from .domain import (
    AUDIO_KINDS,
    IMAGE_KINDS,
    AlgorithmKind,
    AlgorithmObject,
    Collection,
    CollectionKind,
    ContentKind,
    ContentObject,
    DomainObject,
    FractionalAssignment,
    InterfaceObject,
    LockRecord,
    MultiRoleAssignment,
    TelepromptSpec,
    Venue,
    object_from_dict,
    validate,
)
from .errors import LockedError, NotFoundError, ReferentialError, RejectedError

Fetcher = Callable[[str], tuple[bytes, str]]

_AUDIO_MIMES = {"audio/wav", "audio/x-wav", "audio/wave", "audio/vnd.wave"}
_RAW_PCM_MIMES = {"audio/pcm", "audio/l16"}


def urllib_fetcher(url: str) -> tuple[bytes, str]:
    """Default fetcher; tests inject a stub instead of hitting the network."""
    with urllib.request.urlopen(url, timeout=15) as resp:
        mime = resp.headers.get_content_type()
        return resp.read(), mime


@dataclass(frozen=True)
class MediaBlob:
    blob_id: str
    data: bytes
    mime: str
    origin: dict

    def __post_init__(self):
        if not self.data:
            raise RejectedError("blob bytes non-empty")
        if self.origin.get("origin") == "tts" and len(self.origin.get("text", "")) > tts_mod.MAX_TTS_CHARS:
            raise RejectedError("tts origin text exceeds 100 characters")


class ContentStore:
    """Document + blob store with referential integrity and lock guards."""

    def __init__(
        self,
        data_dir: Path | str,
        fetcher: Fetcher = urllib_fetcher,
        tts_adapter: Optional[tts_mod.TtsAdapter] = None,
    ):
        self.data_dir = Path(data_dir)
        self.objects_dir = self.data_dir / "objects"
        self.blobs_dir = self.data_dir / "blobs"
        self.objects_dir.mkdir(parents=True, exist_ok=True)
        self.blobs_dir.mkdir(parents=True, exist_ok=True)
        self.fetcher = fetcher
        self.tts_adapter = tts_adapter or tts_mod.ToneStubAdapter()
        self._lock = threading.RLock()
        self._objects: dict[str, DomainObject] = {}
        self._load()

    # -- plumbing ---------------------------------------------------------

    def _load(self) -> None:
        for path in sorted(self.objects_dir.glob("*.json")):
            with path.open(encoding="utf-8") as f:
                doc = json.load(f)
            obj = object_from_dict(doc)
            self._objects[obj.id] = obj

    @staticmethod
    def new_id() -> str:
        return uuid.uuid4().hex

    def _write_object(self, obj: DomainObject) -> None:
        doc = obj.to_dict()
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
        (self.objects_dir / f"{obj.id}.json").write_text(text, encoding="utf-8")
        self._objects[obj.id] = obj

    def put_blob(self, data: bytes, mime: str, origin: dict) -> str:
        blob = MediaBlob(blob_id=hashlib.sha256(data).hexdigest(), data=data, mime=mime, origin=origin)
        path = self.blobs_dir / blob.blob_id
        if not path.exists():
            path.write_bytes(blob.data)
        meta = {"mime": blob.mime, "origin": blob.origin}
        (self.blobs_dir / f"{blob.blob_id}.json").write_text(
            json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
        return blob.blob_id

    def get_blob(self, blob_id: str) -> MediaBlob:
        path = self.blobs_dir / blob_id
        if not path.exists():
            raise NotFoundError(f"no blob {blob_id}")
        meta_path = self.blobs_dir / f"{blob_id}.json"
        meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
        return MediaBlob(
            blob_id=blob_id,
            data=path.read_bytes(),
            mime=meta.get("mime", "application/octet-stream"),
            origin=meta.get("origin", {}),
        )

    # -- generic CRUD -----------------------------------------------------

    def get(self, object_id: str) -> DomainObject:
        try:
            return self._objects[object_id]
        except KeyError:
            raise NotFoundError(f"no object {object_id}") from None

    def exists(self, object_id: str) -> bool:
        return object_id in self._objects

    def save(self, obj: DomainObject) -> DomainObject:
        """Validate, check references, and persist; upserts by id.

        Collections with renderable kinds (sentence, layer) are rendered here,
        so the stored blob is always a snapshot of the members as they were at
        save time.
        """
        with self._lock:
            if not obj.id:
                obj = replace(obj, id=self.new_id())
            existing = self._objects.get(obj.id)
            if existing is not None and getattr(existing, "lock", None) is not None:
                raise LockedError(f"object {obj.id} is locked")
            violations = validate(obj)
            if violations:
                raise RejectedError("; ".join(violations), code="invalid", details=violations)
            self._check_references(obj)
            if isinstance(obj, Collection):
                obj = self._render_collection(obj)
            self._write_object(obj)
            return obj

    def delete(self, object_id: str) -> None:
        with self._lock:
            obj = self.get(object_id)
            if getattr(obj, "lock", None) is not None:
                raise LockedError(f"object {object_id} is locked")
            referrers = self._referencing_ids(object_id)
            if referrers:
                raise ReferentialError(
                    f"object {object_id} is referenced by {sorted(referrers)}",
                    details=sorted(referrers),
                )
            del self._objects[object_id]
            (self.objects_dir / f"{object_id}.json").unlink(missing_ok=True)

    def list_ids(
        self, kind: Optional[ContentKind] = None, folder: Optional[str] = None
    ) -> list[str]:
        ids: Iterable[str] = sorted(self._objects)
        if folder is not None:
            fold = self.get(folder)
            if not isinstance(fold, Collection) or fold.kind is not CollectionKind.FOLDER:
                raise RejectedError(f"{folder} is not a folder")
            members = set(fold.members)
            ids = [i for i in ids if i in members]
        if kind is not None:
            ids = [
                i
                for i in ids
                if isinstance(self._objects[i], ContentObject) and self._objects[i].kind is kind
            ]
        return list(ids)

    def objects_of_type(self, cls) -> list[DomainObject]:
        return [o for _, o in sorted(self._objects.items()) if isinstance(o, cls)]

    # -- lock / unlock ----------------------------------------------------

    def lock(self, object_id: str, passcode: str) -> LockRecord:
        with self._lock:
            obj = self.get(object_id)
            if getattr(obj, "lock", None) is not None:
                raise RejectedError(f"object {object_id} is already locked", code="already-locked")
            record = LockRecord.create(passcode)
            self._write_object(replace(obj, lock=record))
            return record

    def unlock(self, object_id: str, passcode: str) -> None:
        with self._lock:
            obj = self.get(object_id)
            record = getattr(obj, "lock", None)
            if record is None:
                raise RejectedError(f"object {object_id} is not locked", code="not-locked")
            if not record.matches(passcode):
                raise RejectedError("wrong passcode", code="passcode")
            self._write_object(replace(obj, lock=None))

    # -- ingestion --------------------------------------------------------

    def save_web_audio(
        self, url: str, name: Optional[str] = None, copyrighted: bool = False
    ) -> ContentObject:
        """Make a local copy of an online audio file and persist it.

        The copy is a snapshot: later changes at the URL do not propagate.
        """
        if copyrighted:
            raise RejectedError("copyrighted material is not allowed", code="copyright")
        data, mime = self.fetcher(url)
        if mime not in _AUDIO_MIMES and not mime.startswith("audio/"):
            raise RejectedError(f"URL yields {mime}, not audio", code="non-audio-media")
        pcm = self._decode_audio(data, mime)
        return self._save_audio_object(
            pcm, ContentKind.AUDIO_WEB, name or url.rsplit("/", 1)[-1], {"origin": "web-copy", "url": url}
        )

    def save_web_image(self, url: str, name: Optional[str] = None) -> ContentObject:
        path = url.split("?", 1)[0]
        if not path.lower().endswith((".jpg", ".png")):
            raise RejectedError(
                "image URL must link directly to a .jpg or .png file, not a page "
                "containing it",
                code="bad-image-url",
            )
        data, mime = self.fetcher(url)
        blob_id = self.put_blob(data, mime, {"origin": "web-copy", "url": url})
        obj = ContentObject(
            id=self.new_id(),
            kind=ContentKind.IMAGE_WEB,
            name=name or path.rsplit("/", 1)[-1],
            media=blob_id,
        )
        with self._lock:
            self._write_object(obj)
        return obj

    def save_tts(self, text: str, language: str, name: Optional[str] = None) -> ContentObject:
        pcm = tts_mod.render_tts(text, language, self.tts_adapter)
        return self._save_audio_object(
            pcm,
            ContentKind.AUDIO_TTS,
            name or text,
            {"origin": "tts", "language": language, "text": text},
        )

    def save_upload(self, data: bytes, mime: str, kind: ContentKind, name: str) -> ContentObject:
        if kind in AUDIO_KINDS:
            pcm = self._decode_audio(data, mime)
            return self._save_audio_object(pcm, kind, name, {"origin": "upload"})
        if kind in IMAGE_KINDS:
            blob_id = self.put_blob(data, mime, {"origin": "upload"})
            obj = ContentObject(id=self.new_id(), kind=kind, name=name, media=blob_id)
            with self._lock:
                self._write_object(obj)
            return obj
        raise RejectedError(f"cannot upload content of kind {kind.value}")

    def save_teleprompt(self, name: str, spec: TelepromptSpec) -> ContentObject:
        obj = ContentObject(id=self.new_id(), kind=ContentKind.TELEPROMPT, name=name, media=spec)
        return self.save(obj)

    def _decode_audio(self, data: bytes, mime: str) -> bytes:
        if mime in _RAW_PCM_MIMES:
            pcm = data
            if not pcm or len(pcm) % audio_pipeline.SAMPLE_WIDTH:
                raise RejectedError("raw PCM must be non-empty 16-bit samples")
        else:
            pcm = audio_pipeline.decode_wav(data)
        return audio_pipeline.pad_to_whole_ms(pcm)

    def _save_audio_object(
        self, pcm: bytes, kind: ContentKind, name: str, origin: dict
    ) -> ContentObject:
        dur = audio_pipeline.duration_ms(pcm)
        if dur <= 0:
            raise RejectedError("audio duration > 0 required")
        blob_id = self.put_blob(audio_pipeline.encode_wav(pcm), "audio/wav", origin)
        obj = ContentObject(id=self.new_id(), kind=kind, name=name, media=blob_id, duration_ms=dur)
        with self._lock:
            self._write_object(obj)
        return obj

    # -- audio access -----------------------------------------------------

    def get_pcm(self, object_id: str) -> bytes:
        """Internal-format PCM for an audio object or a rendered collection."""
        obj = self.get(object_id)
        if isinstance(obj, ContentObject) and obj.kind in AUDIO_KINDS:
            return audio_pipeline.decode_wav(self.get_blob(obj.media).data)
        if isinstance(obj, Collection) and obj.rendered_media:
            return audio_pipeline.decode_wav(self.get_blob(obj.rendered_media).data)
        raise RejectedError(f"object {object_id} has no audio")

    def audio_duration_ms(self, object_id: str) -> int:
        obj = self.get(object_id)
        if isinstance(obj, ContentObject) and obj.duration_ms is not None:
            return obj.duration_ms
        if isinstance(obj, Collection) and obj.rendered_duration_ms is not None:
            return obj.rendered_duration_ms
        raise RejectedError(f"object {object_id} has no measured duration")

    # -- collections ------------------------------------------------------

    def _render_collection(self, coll: Collection) -> Collection:
        if coll.kind is CollectionKind.AUDIO_SENTENCE:
            members = [(mid, self.get_pcm(mid)) for mid in coll.members]
            render = audio_pipeline.concatenate_sentence(members)
            blob_id = self.put_blob(
                audio_pipeline.encode_wav(render.pcm), "audio/wav", {"origin": "rendered", "kind": "sentence"}
            )
            return replace(
                coll,
                offsets_ms=render.offsets_ms,
                rendered_media=blob_id,
                rendered_duration_ms=render.total_duration_ms,
            )
        if coll.kind is CollectionKind.AUDIO_LAYER:
            entries = [(self.get_pcm(e.audio_id), e.start_ms, e.volume) for e in coll.members]
            pcm = audio_pipeline.mix_layers(entries)
            blob_id = self.put_blob(
                audio_pipeline.encode_wav(pcm), "audio/wav", {"origin": "rendered", "kind": "layer"}
            )
            return replace(coll, rendered_media=blob_id, rendered_duration_ms=audio_pipeline.duration_ms(pcm))
        return coll

    # -- referential integrity -------------------------------------------

    def _require(self, ref: str, context: str, missing: list[str]) -> None:
        if not self.exists(ref):
            missing.append(f"{context}: missing reference {ref}")

    def _check_references(self, obj: DomainObject) -> None:
        missing: list[str] = []
        if isinstance(obj, Collection):
            self._check_collection_refs(obj, missing)
        elif isinstance(obj, MultiRoleAssignment):
            self._check_multirole_refs(obj, missing)
        elif isinstance(obj, FractionalAssignment):
            for cid in obj.fractions:
                self._require(cid, "fraction", missing)
        elif isinstance(obj, InterfaceObject):
            for el in obj.elements:
                self._require(el.bound_target, "interface element", missing)
        elif isinstance(obj, AlgorithmObject):
            self._check_algorithm_refs(obj, missing)
        if missing:
            raise ReferentialError("; ".join(missing), details=missing)

    def _check_collection_refs(self, coll: Collection, missing: list[str]) -> None:
        for mid in coll.member_ids():
            self._require(mid, f"{coll.kind.value} member", missing)
        if missing:
            return
        members = [self._objects[m] for m in coll.member_ids()]
        if coll.kind is CollectionKind.AUDIO_IMAGE_PAIR:
            audio_n = sum(1 for m in members if isinstance(m, ContentObject) and m.is_audio())
            image_n = sum(1 for m in members if isinstance(m, ContentObject) and m.is_image())
            if (audio_n, image_n) != (1, 1):
                missing.append("pair: exactly one audio and one image member")
        elif coll.kind in (CollectionKind.AUDIO_SENTENCE, CollectionKind.AUDIO_LAYER):
            for m in members:
                if not self._is_audio_like(m):
                    missing.append(f"{coll.kind.value}: member {m.id} is not audio")
        elif coll.kind is CollectionKind.IMAGE_PHRASE:
            for m in members:
                if not (isinstance(m, ContentObject) and m.is_image()):
                    missing.append(f"phrase: member {m.id} is not an image")

    @staticmethod
    def _is_audio_like(obj: DomainObject) -> bool:
        if isinstance(obj, ContentObject):
            return obj.kind in AUDIO_KINDS
        # rendered sentences and layers behave as audio objects
        return isinstance(obj, Collection) and obj.rendered_media is not None

    def _check_multirole_refs(self, mra: MultiRoleAssignment, missing: list[str]) -> None:
        venue = self._objects.get(mra.venue_id)
        if not isinstance(venue, Venue):
            missing.append(f"multi-role assignment: missing venue {mra.venue_id}")
            return
        from .venue import receivable_parts  # local import avoids a cycle

        for role_name, cid in mra.bindings:
            role = venue.role_named(role_name)
            if role is None:
                missing.append(f"multi-role assignment: venue has no role {role_name!r}")
                continue
            self._require(cid, f"binding for {role_name}", missing)
            if self.exists(cid) and not receivable_parts(role.capabilities, self.get(cid), self.get):
                missing.append(
                    f"multi-role assignment: role {role_name!r} cannot receive {cid}"
                )

    def _check_algorithm_refs(self, alg: AlgorithmObject, missing: list[str]) -> None:
        if alg.kind is AlgorithmKind.OSC_BINDING and alg.bound_target:
            self._require(alg.bound_target, "osc binding", missing)
        for t in alg.timed_steps:
            self._require(t.trigger_id, "timed organization trigger", missing)
            self._require(t.step.content_id, "timed organization step", missing)
            trig = self._objects.get(t.trigger_id)
            if isinstance(trig, AlgorithmObject) and trig.kind not in (
                AlgorithmKind.TIMER,
                AlgorithmKind.METRONOME,
            ):
                missing.append(f"timed organization: {t.trigger_id} is not a timer or metronome")
        for s in alg.steps:
            self._require(s.content_id, "distribution step", missing)

    def _referencing_ids(self, object_id: str) -> set[str]:
        refs: set[str] = set()
        for oid, obj in self._objects.items():
            if oid == object_id:
                continue
            if isinstance(obj, Collection) and object_id in obj.member_ids():
                refs.add(oid)
            elif isinstance(obj, MultiRoleAssignment) and (
                obj.venue_id == object_id or object_id in dict(obj.bindings).values()
            ):
                refs.add(oid)
            elif isinstance(obj, FractionalAssignment) and object_id in obj.fractions:
                refs.add(oid)
            elif isinstance(obj, InterfaceObject) and any(
                el.bound_target == object_id for el in obj.elements
            ):
                refs.add(oid)
            elif isinstance(obj, AlgorithmObject):
                if obj.bound_target == object_id:
                    refs.add(oid)
                elif any(
                    t.trigger_id == object_id or t.step.content_id == object_id
                    for t in obj.timed_steps
                ):
                    refs.add(oid)
                elif any(s.content_id == object_id for s in obj.steps):
                    refs.add(oid)
        return refs
