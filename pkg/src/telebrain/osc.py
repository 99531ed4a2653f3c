"""Bit-exact OSC 1.0 codec plus inbound/outbound bindings.

The codec covers the four standard argument types (int32, float32, string,
blob) with the mandatory 4-byte alignment throughout. No bundles and no
address wildcards: scheduling belongs to the timing module and the bindings
in use are all literal addresses.

Outbound messages go over UDP straight to a performer's local IP, bypassing
the remote server entirely; that is the whole point of registering local IPs
at join time.
"""

from __future__ import annotations

import logging
import socket
import struct
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .errors import RejectedError, TelebrainError

log = logging.getLogger(__name__)

DEFAULT_LISTEN_PORT = 57121
DEFAULT_SEND_PORT = 57120

OscArg = Union[int, float, str, bytes]


@dataclass(frozen=True)
class OscMessage:
    address: str
    args: tuple[OscArg, ...] = ()


class OscDecodeError(TelebrainError):
    code = "osc-decode"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def _pad4(data: bytes) -> bytes:
    return data + b"\x00" * (-len(data) % 4)


def _encode_string(s: str) -> bytes:
    # OSC strings are NUL-terminated, then padded to a 4-byte boundary
    return _pad4(s.encode("utf-8") + b"\x00")


def encode(msg: OscMessage) -> bytes:
    """Encode to the OSC 1.0 byte layout; every section is 4-byte aligned."""
    if not msg.address.startswith("/"):
        raise RejectedError(f"address must start with '/': {msg.address!r}")
    tags = ","
    payload = b""
    for arg in msg.args:
        if isinstance(arg, bool):
            raise RejectedError("bool is not an OSC 1.0 argument type")
        if isinstance(arg, int):
            tags += "i"
            payload += struct.pack(">i", arg)
        elif isinstance(arg, float):
            tags += "f"
            payload += struct.pack(">f", arg)
        elif isinstance(arg, str):
            tags += "s"
            payload += _encode_string(arg)
        elif isinstance(arg, bytes):
            tags += "b"
            payload += struct.pack(">i", len(arg)) + _pad4(arg)
        else:
            raise RejectedError(f"unsupported OSC argument type: {type(arg).__name__}")
    return _encode_string(msg.address) + _encode_string(tags) + payload


def _decode_string(data: bytes, offset: int) -> tuple[str, int]:
    end = data.find(b"\x00", offset)
    if end < 0:
        raise OscDecodeError("unterminated string", offset)
    s = data[offset:end].decode("utf-8")
    next_off = end + 1
    next_off += -((next_off - offset)) % 4
    if next_off > len(data):
        raise OscDecodeError("string padding runs past buffer", end)
    return s, next_off


def decode(data: bytes) -> OscMessage:
    """Decode one OSC 1.0 message; malformed input reports the failing offset."""
    if len(data) % 4:
        raise OscDecodeError("packet length not a multiple of 4", len(data))
    address, off = _decode_string(data, 0)
    if not address.startswith("/"):
        raise OscDecodeError("address does not start with '/'", 0)
    tags, tag_off = _decode_string(data, off)
    if not tags.startswith(","):
        raise OscDecodeError("type tag string does not start with ','", off)
    args: list[OscArg] = []
    off = tag_off
    for tag in tags[1:]:
        if tag == "i":
            if off + 4 > len(data):
                raise OscDecodeError("truncated int32", off)
            args.append(struct.unpack_from(">i", data, off)[0])
            off += 4
        elif tag == "f":
            if off + 4 > len(data):
                raise OscDecodeError("truncated float32", off)
            args.append(struct.unpack_from(">f", data, off)[0])
            off += 4
        elif tag == "s":
            s, off = _decode_string(data, off)
            args.append(s)
        elif tag == "b":
            if off + 4 > len(data):
                raise OscDecodeError("truncated blob size", off)
            size = struct.unpack_from(">i", data, off)[0]
            if size < 0:
                raise OscDecodeError("negative blob size", off)
            off += 4
            if off + size > len(data):
                raise OscDecodeError("truncated blob", off)
            args.append(data[off : off + size])
            off += size + (-size % 4)
        else:
            raise OscDecodeError(f"unsupported type tag {tag!r}", tag_off)
    return OscMessage(address=address, args=tuple(args))


@dataclass
class OscRouter:
    """Literal-address dispatch table for inbound messages.

    Multiple bindings on one address all fire, in registration order.
    Unmatched addresses are logged and dropped; external gear sending stray
    traffic must not disturb a performance.
    """

    _bindings: dict[str, list[Callable[[OscMessage], None]]] = field(default_factory=dict)

    def bind(self, address: str, action: Callable[[OscMessage], None]) -> None:
        if not address.startswith("/"):
            raise RejectedError(f"address must start with '/': {address!r}")
        self._bindings.setdefault(address, []).append(action)

    def dispatch(self, msg: OscMessage) -> int:
        """Run every binding for the message's address; returns how many fired."""
        actions = self._bindings.get(msg.address)
        if not actions:
            log.info("unbound OSC address dropped: %s", msg.address)
            return 0
        for action in list(actions):
            action(msg)
        return len(actions)


def send_datagram(msg: OscMessage, host: str, port: int = DEFAULT_SEND_PORT) -> int:
    """Fire-and-forget a message at an endpoint; returns bytes sent."""
    data = encode(msg)
    with socket.socket(socket.AF_INET, socket.SOCK_DGRAM) as sock:
        return sock.sendto(data, (host, port))


def send_to_performer(msg: OscMessage, local_ip: Optional[str], port: int = DEFAULT_SEND_PORT) -> int:
    if not local_ip:
        raise RejectedError("performer has no local IP registered", code="no-local-ip")
    return send_datagram(msg, local_ip, port)


class OscListener:
    """Background UDP listener feeding decoded messages to a router.

    One thread owns the socket; decoded messages are handed to the router
    synchronously on that thread, so bindings should be quick hand-offs.
    """

    def __init__(self, router: OscRouter, host: str = "127.0.0.1", port: int = DEFAULT_LISTEN_PORT):
        self.router = router
        self.host = host
        self.port = port
        self._sock: Optional[socket.socket] = None
        self._thread: Optional[threading.Thread] = None
        self._running = False

    def start(self) -> int:
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._sock.bind((self.host, self.port))
        self._sock.settimeout(0.2)
        self.port = self._sock.getsockname()[1]
        self._running = True
        self._thread = threading.Thread(target=self._loop, name="osc-listener", daemon=True)
        self._thread.start()
        return self.port

    def _loop(self) -> None:
        assert self._sock is not None
        while self._running:
            try:
                data, _addr = self._sock.recvfrom(65536)
            except socket.timeout:
                continue
            except OSError:
                break
            try:
                msg = decode(data)
            except OscDecodeError as exc:
                log.warning("dropping malformed OSC packet: %s", exc)
                continue
            self.router.dispatch(msg)

    def stop(self) -> None:
        self._running = False
        if self._thread:
            self._thread.join(timeout=1.0)
        if self._sock:
            self._sock.close()
            self._sock = None
