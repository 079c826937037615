"""Binary frames, roster snapshots and the transport abstraction.

Every message is one length-prefixed frame: a 4-byte big-endian length, a
1-byte message type and the body. Peers exchange exactly one request frame
and one response frame per interaction, so the transport behind a Channel can
be an in-process callable or a short-lived TCP connection.
"""

from __future__ import annotations

import socket
import socketserver
import threading
from typing import Callable, Optional, Tuple

from .errors import MalformedEncoding, MalformedReport, TransportError
from .pairing import G1Point
from .scheme import Ring, RingSignature, decode_ring, decode_signature, encode_ring, encode_signature
from .suite import PairingSuite

MSG_REGISTER_ID = 0x01
MSG_PARTIAL_KEY = 0x02
MSG_PUBLIC_KEY = 0x03
MSG_ROSTER_PUSH = 0x04
MSG_UPLOAD = 0x05
MSG_DECISION = 0x06
MSG_ROSTER_REQ = 0x07
MSG_ROSTER_DATA = 0x08

MAX_FRAME_BYTES = 16 * 1024 * 1024

FrameHandler = Callable[[bytes], bytes]


def pack_frame(msg_type: int, body: bytes) -> bytes:
    payload = bytes([msg_type]) + body
    if len(payload) > MAX_FRAME_BYTES:
        raise MalformedReport("frame exceeds the size limit")
    return len(payload).to_bytes(4, "big") + payload


def parse_frame(frame: bytes) -> Tuple[int, bytes]:
    if len(frame) < 5:
        raise MalformedEncoding("frame too short")
    length = int.from_bytes(frame[:4], "big")
    if length != len(frame) - 4 or length > MAX_FRAME_BYTES:
        raise MalformedEncoding("frame length prefix mismatch")
    return frame[4], frame[5:]


# ----------------------------------------------------------------- bodies


def encode_identity_body(identity: bytes) -> bytes:
    if len(identity) > 0xFFFF:
        raise MalformedEncoding("identity longer than 65535 bytes")
    return len(identity).to_bytes(2, "big") + identity


def decode_identity_body(body: bytes) -> bytes:
    if len(body) < 2:
        raise MalformedEncoding("truncated identity body")
    id_len = int.from_bytes(body[:2], "big")
    if len(body) != 2 + id_len:
        raise MalformedEncoding("identity body length mismatch")
    return body[2:]


def encode_public_key_body(suite: PairingSuite, identity: bytes, public_key: G1Point) -> bytes:
    return encode_identity_body(identity) + suite.encode_g1(public_key)


def decode_public_key_body(suite: PairingSuite, body: bytes) -> Tuple[bytes, G1Point]:
    point_size = suite.profile.g1_bytes
    if len(body) < 2 + point_size:
        raise MalformedEncoding("truncated public key body")
    identity = decode_identity_body(body[:-point_size])
    return identity, suite.decode_g1(body[-point_size:])


def encode_roster_push_body(suite: PairingSuite, version: int, identity: bytes,
                            index: G1Point) -> bytes:
    return version.to_bytes(8, "big") + encode_identity_body(identity) + suite.encode_g1(index)


def decode_roster_push_body(suite: PairingSuite, body: bytes) -> Tuple[int, bytes, G1Point]:
    point_size = suite.profile.g1_bytes
    if len(body) < 8 + 2 + point_size:
        raise MalformedEncoding("truncated roster push body")
    version = int.from_bytes(body[:8], "big")
    identity = decode_identity_body(body[8:-point_size])
    return version, identity, suite.decode_g1(body[-point_size:])


def encode_decision_body(accepted: bool, reason: str = "") -> bytes:
    blob = reason.encode("utf-8")
    return bytes([1 if accepted else 0]) + len(blob).to_bytes(2, "big") + blob


def decode_decision_body(body: bytes) -> Tuple[bool, str]:
    if len(body) < 3:
        raise MalformedEncoding("truncated decision body")
    reason_len = int.from_bytes(body[1:3], "big")
    if len(body) != 3 + reason_len:
        raise MalformedEncoding("decision body length mismatch")
    return body[0] == 1, body[3:].decode("utf-8", errors="replace")


def encode_report_body(suite: PairingSuite, ring: Ring, data: bytes,
                       signature: RingSignature) -> bytes:
    ring_blob = encode_ring(suite, ring)
    return (len(ring_blob).to_bytes(4, "big") + ring_blob
            + len(data).to_bytes(8, "big") + data
            + encode_signature(suite, signature))


def decode_report_body(suite: PairingSuite, body: bytes) -> Tuple[Ring, bytes, RingSignature]:
    try:
        if len(body) < 4:
            raise MalformedEncoding("truncated report")
        ring_len = int.from_bytes(body[:4], "big")
        offset = 4 + ring_len
        if len(body) < offset + 8:
            raise MalformedEncoding("truncated report")
        ring = decode_ring(suite, body[4:offset])
        data_len = int.from_bytes(body[offset:offset + 8], "big")
        offset += 8
        if len(body) < offset + data_len:
            raise MalformedEncoding("truncated report")
        data = body[offset:offset + data_len]
        signature = decode_signature(suite, body[offset + data_len:])
    except MalformedEncoding as exc:
        raise MalformedReport(str(exc)) from exc
    return ring, data, signature


# -------------------------------------------------------- roster snapshot


def encode_roster_snapshot(suite: PairingSuite, version: int,
                           entries: list[Tuple[bytes, G1Point]]) -> bytes:
    parts = [version.to_bytes(8, "big"), len(entries).to_bytes(4, "big")]
    for identity, index in entries:
        parts.append(encode_identity_body(identity))
        parts.append(suite.encode_g1(index))
    return b"".join(parts)


def decode_roster_snapshot(suite: PairingSuite, raw: bytes) -> Tuple[int, list[Tuple[bytes, G1Point]]]:
    if len(raw) < 12:
        raise MalformedEncoding("truncated roster snapshot")
    version = int.from_bytes(raw[:8], "big")
    count = int.from_bytes(raw[8:12], "big")
    offset = 12
    point_size = suite.profile.g1_bytes
    entries = []
    for _ in range(count):
        if len(raw) < offset + 2:
            raise MalformedEncoding("truncated roster entry")
        id_len = int.from_bytes(raw[offset:offset + 2], "big")
        offset += 2
        if len(raw) < offset + id_len + point_size:
            raise MalformedEncoding("truncated roster entry")
        identity = raw[offset:offset + id_len]
        offset += id_len
        index = suite.decode_g1(raw[offset:offset + point_size])
        offset += point_size
        entries.append((identity, index))
    if offset != len(raw):
        raise MalformedEncoding("trailing bytes after roster entries")
    return version, entries


# -------------------------------------------------------------- channels


class LocalChannel:
    """In-process transport: requests go straight to a handler callable."""

    def __init__(self, handler: FrameHandler):
        self._handler = handler

    def request(self, frame: bytes) -> bytes:
        return self._handler(frame)


class TcpChannel:
    """One connection per request against a host:port endpoint."""

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self.host = host
        self.port = port
        self.timeout = timeout

    def request(self, frame: bytes) -> bytes:
        try:
            with socket.create_connection((self.host, self.port), timeout=self.timeout) as conn:
                conn.sendall(frame)
                header = _read_exact(conn, 4)
                length = int.from_bytes(header, "big")
                if length > MAX_FRAME_BYTES:
                    raise TransportError("response frame exceeds the size limit")
                return header + _read_exact(conn, length)
        except OSError as exc:
            raise TransportError(f"request to {self.host}:{self.port} failed: {exc}") from exc


def _read_exact(conn: socket.socket, count: int) -> bytes:
    chunks = []
    remaining = count
    while remaining:
        chunk = conn.recv(remaining)
        if not chunk:
            raise TransportError("peer closed the connection mid-frame")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


class _FrameRequestHandler(socketserver.BaseRequestHandler):
    def handle(self):
        try:
            header = _read_exact(self.request, 4)
            length = int.from_bytes(header, "big")
            if length > MAX_FRAME_BYTES:
                return
            frame = header + _read_exact(self.request, length)
        except TransportError:
            return
        response = self.server.frame_handler(frame)  # type: ignore[attr-defined]
        self.request.sendall(response)


class FrameServer(socketserver.ThreadingTCPServer):
    """Threaded one-frame-per-connection server around a handler callable."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, handler: FrameHandler, host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), _FrameRequestHandler)
        self.frame_handler = handler

    @property
    def endpoint(self) -> Tuple[str, int]:
        return self.server_address[0], self.server_address[1]

    def serve_in_background(self) -> threading.Thread:
        thread = threading.Thread(target=self.serve_forever, daemon=True)
        thread.start()
        return thread


def parse_endpoint(spec: str) -> Tuple[str, int]:
    host, sep, port = spec.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"endpoint must look like host:port, got {spec!r}")
    return host or "127.0.0.1", int(port)
