"""Shared fixtures: synthetic stems, a full survey fixture, and a raw-socket
WebSocket client used to exercise the frame server without browser code."""

from __future__ import annotations

import base64
import os
import socket
import struct

import pytest

from tailors.mapping import (
    BackgroundKind,
    BackgroundVisualParams,
    VisualFrame,
    VocalVisualParams,
)
from tailors.stats.survey import load_survey_csv
from tailors.synth import write_demo_stems, write_demo_survey


def make_visual_frame(
    t: float,
    dispersion: float = 0.3,
    metalness: float = 0.6,
    kind: BackgroundKind = BackgroundKind.WATER,
    value: float = 0.7,
) -> VisualFrame:
    return VisualFrame(
        t=t,
        object=VocalVisualParams(dispersion=dispersion, metalness=metalness, hue_deg=120.0),
        background=BackgroundVisualParams(
            kind=kind,
            surface_roughness=0.2,
            hue_deg=200.0,
            value=value,
            saturation=0.4,
        ),
    )


class WSClient:
    """Minimal RFC 6455 client: handshake, unmasked-read, masked-write."""

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self.sock = socket.create_connection((host, port), timeout=timeout)
        self.buf = b""
        key = base64.b64encode(os.urandom(16)).decode()
        request = (
            f"GET / HTTP/1.1\r\nHost: {host}:{port}\r\nUpgrade: websocket\r\n"
            f"Connection: Upgrade\r\nSec-WebSocket-Key: {key}\r\n"
            "Sec-WebSocket-Version: 13\r\n\r\n"
        )
        self.sock.sendall(request.encode())
        response = b""
        while b"\r\n\r\n" not in response:
            chunk = self.sock.recv(4096)
            if not chunk:
                raise ConnectionError("closed during handshake")
            response += chunk
        head, _, rest = response.partition(b"\r\n\r\n")
        status = head.split(b"\r\n")[0]
        if b"101" not in status:
            raise ConnectionError(f"handshake rejected: {status!r}")
        self.buf = rest  # frames may arrive coalesced with the 101 response

    def _read_exact(self, n: int) -> bytes:
        while len(self.buf) < n:
            chunk = self.sock.recv(4096)
            if not chunk:
                raise ConnectionError("closed")
            self.buf += chunk
        out, self.buf = self.buf[:n], self.buf[n:]
        return out

    def recv_raw(self) -> tuple[int | None, bytes]:
        """Next frame as (opcode, payload); (None, b\"\") after a close frame."""
        head = self._read_exact(2)
        opcode = head[0] & 0x0F
        length = head[1] & 0x7F
        if length == 126:
            length = struct.unpack("!H", self._read_exact(2))[0]
        elif length == 127:
            length = struct.unpack("!Q", self._read_exact(8))[0]
        payload = self._read_exact(length) if length else b""
        if opcode == 0x8:
            return None, b""
        return opcode, payload

    def recv_message(self) -> str | None:
        """Next text message, or None on a close frame. Skips pongs."""
        while True:
            opcode, payload = self.recv_raw()
            if opcode is None:
                return None
            if opcode == 0x1:
                return payload.decode("utf-8")

    def recv_all(self) -> list[str]:
        messages = []
        while True:
            message = self.recv_message()
            if message is None:
                return messages
            messages.append(message)

    def send_ping(self, payload: bytes = b"hi") -> None:
        mask = os.urandom(4)
        masked = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
        self.sock.sendall(struct.pack("!BB", 0x89, 0x80 | len(payload)) + mask + masked)

    def close(self) -> None:
        try:
            self.sock.close()
        except OSError:
            pass


@pytest.fixture(scope="session")
def stems_dir(tmp_path_factory) -> "Path":
    directory = tmp_path_factory.mktemp("stems")
    write_demo_stems(directory, track_id="demo", duration_s=30.0, seed=7)
    return directory


@pytest.fixture(scope="session")
def short_stems_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("short_stems")
    write_demo_stems(directory, track_id="short", duration_s=3.0, seed=5)
    return directory


@pytest.fixture(scope="session")
def survey_csv_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("survey") / "survey.csv"
    write_demo_survey(path)
    return path


@pytest.fixture(scope="session")
def survey_records(survey_csv_path):
    return load_survey_csv(survey_csv_path)


@pytest.fixture(scope="session")
def report_bundle(survey_records):
    from tailors.stats.reports import build_reports

    return build_reports(survey_records)
