"""Frame stream serialization, parsing, and live broadcast.

Wire format: newline-delimited JSON. Line one is a header object, every
later line is one visual frame. Numbers are rounded to six fractional
digits so emission is byte-deterministic for identical inputs.

The live path speaks WebSocket (RFC 6455 server side, text frames only)
because the reference display client is a browser. Each socket message
carries exactly one stream line. Playback holds until the first client
connects; later clients join at the live frame rather than restarting.
"""

from __future__ import annotations

import base64
import hashlib
import json
import socket
import struct
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .errors import (
    MalformedStream,
    OutOfRange,
    PortInUse,
    SchemaMismatch,
    SinkWriteFailure,
)
from .mapping import (
    BackgroundKind,
    BackgroundVisualParams,
    VisualFrame,
    VocalVisualParams,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class StreamHeader:
    fps: float
    duration_s: float
    track_id: str
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise SchemaMismatch(
                f"schema_version {self.schema_version}, this writer speaks {SCHEMA_VERSION}"
            )
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        if self.duration_s < 0:
            raise ValueError("duration_s must be non-negative")
        if not self.track_id:
            raise ValueError("track_id must be non-empty")


def _round6(x: float) -> float:
    return round(float(x), 6)


def header_line(header: StreamHeader) -> str:
    return json.dumps(
        {
            "schema_version": header.schema_version,
            "fps": _round6(header.fps),
            "duration_s": _round6(header.duration_s),
            "track_id": header.track_id,
        },
        separators=(",", ":"),
    )


def frame_line(frame: VisualFrame) -> str:
    return json.dumps(
        {
            "t": _round6(frame.t),
            "object": {
                "dispersion": _round6(frame.object.dispersion),
                "metalness": _round6(frame.object.metalness),
                "hue_deg": _round6(frame.object.hue_deg),
            },
            "background": {
                "kind": frame.background.kind.value,
                "surface_roughness": _round6(frame.background.surface_roughness),
                "hue_deg": _round6(frame.background.hue_deg),
                "value": _round6(frame.background.value),
                "saturation": _round6(frame.background.saturation),
            },
        },
        separators=(",", ":"),
    )


def stream_lines(frames: Sequence[VisualFrame], header: StreamHeader) -> list[str]:
    last_t = -1.0
    for frame in frames:
        if frame.t <= last_t:
            raise ValueError("frame timestamps must be strictly increasing")
        last_t = frame.t
    return [header_line(header)] + [frame_line(f) for f in frames]


def emit_frames(frames: Sequence[VisualFrame], header: StreamHeader, sink: IO[str]) -> None:
    """Write the stream to a text sink; one line per record."""
    try:
        for line in stream_lines(frames, header):
            sink.write(line + "\n")
    except OSError as exc:
        raise SinkWriteFailure(f"sink rejected write: {exc}") from exc


def emit_to_path(frames: Sequence[VisualFrame], header: StreamHeader, path: str | Path) -> None:
    try:
        handle = open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise SinkWriteFailure(f"cannot open {path}: {exc}") from exc
    with handle:
        emit_frames(frames, header, handle)


_HEADER_KEYS = {"schema_version", "fps", "duration_s", "track_id"}
_FRAME_KEYS = {"t", "object", "background"}
_OBJECT_KEYS = {"dispersion", "metalness", "hue_deg"}
_BACKGROUND_KEYS = {"kind", "surface_roughness", "hue_deg", "value", "saturation"}
_KIND_VALUES = {k.value: k for k in BackgroundKind}


def _parse_json_line(line: str, lineno: int) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedStream(f"line {lineno}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedStream(f"line {lineno}: expected a JSON object")
    return obj


def parse_header_line(line: str, lineno: int = 1) -> StreamHeader:
    obj = _parse_json_line(line, lineno)
    if set(obj) != _HEADER_KEYS:
        raise MalformedStream(
            f"line {lineno}: header keys {sorted(obj)}, expected {sorted(_HEADER_KEYS)}"
        )
    if obj["schema_version"] != SCHEMA_VERSION:
        raise SchemaMismatch(
            f"line {lineno}: schema_version {obj['schema_version']}, "
            f"this reader speaks {SCHEMA_VERSION}"
        )
    try:
        return StreamHeader(
            fps=float(obj["fps"]),
            duration_s=float(obj["duration_s"]),
            track_id=str(obj["track_id"]),
            schema_version=int(obj["schema_version"]),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedStream(f"line {lineno}: bad header field: {exc}") from exc


def parse_frame_line(line: str, lineno: int) -> VisualFrame:
    obj = _parse_json_line(line, lineno)
    if set(obj) != _FRAME_KEYS:
        raise MalformedStream(
            f"line {lineno}: frame keys {sorted(obj)}, expected {sorted(_FRAME_KEYS)}"
        )
    body = obj["object"]
    back = obj["background"]
    if not isinstance(body, dict) or set(body) != _OBJECT_KEYS:
        raise MalformedStream(f"line {lineno}: object keys must be {sorted(_OBJECT_KEYS)}")
    if not isinstance(back, dict) or set(back) != _BACKGROUND_KEYS:
        raise MalformedStream(f"line {lineno}: background keys must be {sorted(_BACKGROUND_KEYS)}")
    kind = _KIND_VALUES.get(back["kind"])
    if kind is None:
        raise MalformedStream(f"line {lineno}: unknown background kind {back['kind']!r}")
    try:
        return VisualFrame(
            t=float(obj["t"]),
            object=VocalVisualParams(
                dispersion=float(body["dispersion"]),
                metalness=float(body["metalness"]),
                hue_deg=float(body["hue_deg"]),
            ),
            background=BackgroundVisualParams(
                kind=kind,
                surface_roughness=float(back["surface_roughness"]),
                hue_deg=float(back["hue_deg"]),
                value=float(back["value"]),
                saturation=float(back["saturation"]),
            ),
        )
    except (TypeError, ValueError, OutOfRange) as exc:
        raise MalformedStream(f"line {lineno}: {exc}") from exc


def parse_stream(text: str | Iterable[str]) -> tuple[StreamHeader, list[VisualFrame]]:
    """Parse a full stream; raises MalformedStream naming the first bad line."""
    lines = text.splitlines() if isinstance(text, str) else [l.rstrip("\n") for l in text]
    lines = [l for l in lines if l.strip()]
    if not lines:
        raise MalformedStream("stream is empty")
    header = parse_header_line(lines[0], 1)
    frames: list[VisualFrame] = []
    last_t = -1.0
    for i, line in enumerate(lines[1:], start=2):
        frame = parse_frame_line(line, i)
        if frame.t <= last_t:
            raise MalformedStream(f"line {i}: t={frame.t} does not increase past {last_t}")
        last_t = frame.t
        frames.append(frame)
    return header, frames


def parse_stream_path(path: str | Path) -> tuple[StreamHeader, list[VisualFrame]]:
    return parse_stream(Path(path).read_text(encoding="utf-8"))


# --- live serving ---------------------------------------------------------

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


def _accept_key(client_key: str) -> str:
    digest = hashlib.sha1((client_key + _WS_GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


def _text_ws_frame(payload: bytes) -> bytes:
    n = len(payload)
    if n < 126:
        head = struct.pack("!BB", 0x81, n)
    elif n < 1 << 16:
        head = struct.pack("!BBH", 0x81, 126, n)
    else:
        head = struct.pack("!BBQ", 0x81, 127, n)
    return head + payload


_CLOSE_FRAME = struct.pack("!BB", 0x88, 0)
_PONG_PREFIX = 0x8A


class FrameServer:
    """Broadcasts a frame stream to WebSocket subscribers in real time.

    The playback clock starts when the first subscriber arrives. Every
    subscriber first receives the header line; one joining mid-playback
    also receives the most recent frame so it can draw immediately, then
    follows the live feed.
    """

    def __init__(
        self,
        frames: Sequence[VisualFrame],
        header: StreamHeader,
        port: int = 0,
        host: str = "127.0.0.1",
    ) -> None:
        self._header_msg = header_line(header).encode("utf-8")
        self._frame_msgs = [frame_line(f).encode("utf-8") for f in frames]
        self._fps = header.fps
        self._lock = threading.Lock()
        self._clients: list[socket.socket] = []
        self._live_index = -1
        self._started = False
        self._stopping = False
        self._playback_begun = threading.Event()
        self.playback_done = threading.Event()
        try:
            self._sock = socket.create_server((host, port))
        except OSError as exc:
            raise PortInUse(f"cannot bind {host}:{port}: {exc}") from exc
        self.host, self.port = self._sock.getsockname()[:2]

    def start(self) -> "FrameServer":
        if self._started:
            return self
        self._started = True
        threading.Thread(target=self._accept_loop, daemon=True).start()
        return self

    def _accept_loop(self) -> None:
        while not self._stopping:
            try:
                conn, _addr = self._sock.accept()
            except OSError:
                return
            threading.Thread(target=self._serve_client, args=(conn,), daemon=True).start()

    def _handshake(self, conn: socket.socket) -> bool:
        conn.settimeout(5.0)
        request = b""
        while b"\r\n\r\n" not in request:
            chunk = conn.recv(4096)
            if not chunk:
                return False
            request += chunk
            if len(request) > 65536:
                return False
        key = None
        for raw in request.split(b"\r\n"):
            if b":" in raw:
                name, _, value = raw.partition(b":")
                if name.strip().lower() == b"sec-websocket-key":
                    key = value.strip().decode("ascii")
        if key is None:
            conn.sendall(b"HTTP/1.1 400 Bad Request\r\n\r\n")
            return False
        response = (
            "HTTP/1.1 101 Switching Protocols\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Accept: {_accept_key(key)}\r\n"
            "\r\n"
        )
        conn.sendall(response.encode("ascii"))
        return True

    def _serve_client(self, conn: socket.socket) -> None:
        try:
            if not self._handshake(conn):
                conn.close()
                return
            conn.settimeout(None)
            with self._lock:
                conn.sendall(_text_ws_frame(self._header_msg))
                if 0 <= self._live_index < len(self._frame_msgs):
                    conn.sendall(_text_ws_frame(self._frame_msgs[self._live_index]))
                self._clients.append(conn)
                first = not self._playback_begun.is_set()
                if first:
                    self._playback_begun.set()
            if first:
                threading.Thread(target=self._playback_loop, daemon=True).start()
        except OSError:
            conn.close()
            return
        self._drain_client(conn)

    def _drain_client(self, conn: socket.socket) -> None:
        # consume control frames so the socket buffer never backs up
        try:
            while True:
                head = conn.recv(2)
                if len(head) < 2:
                    break
                opcode = head[0] & 0x0F
                length = head[1] & 0x7F
                masked = bool(head[1] & 0x80)
                if length == 126:
                    length = struct.unpack("!H", conn.recv(2))[0]
                elif length == 127:
                    length = struct.unpack("!Q", conn.recv(8))[0]
                mask = conn.recv(4) if masked else b""
                payload = b""
                while len(payload) < length:
                    chunk = conn.recv(length - len(payload))
                    if not chunk:
                        break
                    payload += chunk
                if masked and payload:
                    payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
                if opcode == 0x8:  # close
                    break
                if opcode == 0x9:  # ping -> pong
                    conn.sendall(struct.pack("!BB", _PONG_PREFIX, len(payload)) + payload)
        except OSError:
            pass
        self._drop_client(conn)

    def _drop_client(self, conn: socket.socket) -> None:
        with self._lock:
            if conn in self._clients:
                self._clients.remove(conn)
        try:
            conn.close()
        except OSError:
            pass

    def _broadcast(self, message: bytes) -> None:
        with self._lock:
            stale = []
            for conn in self._clients:
                try:
                    conn.sendall(_text_ws_frame(message))
                except OSError:
                    stale.append(conn)
            for conn in stale:
                self._clients.remove(conn)

    def _playback_loop(self) -> None:
        t0 = time.monotonic()
        for k, message in enumerate(self._frame_msgs):
            if self._stopping:
                return
            delay = t0 + k / self._fps - time.monotonic()
            if delay > 0:
                time.sleep(delay)
            with self._lock:
                self._live_index = k
            self._broadcast(message)
        with self._lock:
            for conn in self._clients:
                try:
                    conn.sendall(_CLOSE_FRAME)
                except OSError:
                    pass
        self.playback_done.set()

    def stop(self) -> None:
        self._stopping = True
        try:
            self._sock.close()
        except OSError:
            pass
        with self._lock:
            clients = list(self._clients)
            self._clients.clear()
        for conn in clients:
            try:
                conn.close()
            except OSError:
                pass


def serve_stream(
    frames: Sequence[VisualFrame],
    header: StreamHeader,
    port: int = 0,
    host: str = "127.0.0.1",
) -> FrameServer:
    """Bind and start a FrameServer; returns it with .host and .port set."""
    return FrameServer(frames, header, port=port, host=host).start()
