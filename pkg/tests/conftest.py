"""Shared fixtures: a controllable fake synthesis service and a WAV reader."""

from __future__ import annotations

import json
import threading
import time
import wave as wave_module
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest


def read_wav(path):
    """Independent reader (stdlib wave): returns (sample_rate, float samples)."""
    with wave_module.open(str(path), "rb") as wf:
        assert wf.getnchannels() == 1
        assert wf.getsampwidth() == 2
        rate = wf.getframerate()
        raw = wf.readframes(wf.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").astype(float) / 32767.0
    return rate, samples


class FakeSynthService:
    """HTTP stand-in for the voice service; behavior is scriptable per test.

    ``responses`` maps a path to a list of (status, body) pairs consumed in
    order; the last entry repeats.  Bodies may be dicts (JSON) or raw bytes.
    ``delays`` maps a path to seconds to sleep before answering.
    """

    def __init__(self):
        self.responses: dict[str, list] = {}
        self.delays: dict[str, float] = {}
        self.requests: list[tuple[str, dict | None]] = []
        self._counts: dict[str, int] = {}

        service = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _serve(self, path, payload):
                service.requests.append((path, payload))
                if path in service.delays:
                    time.sleep(service.delays[path])
                plan = service.responses.get(path)
                if plan is None:
                    self.send_error(404)
                    return
                i = service._counts.get(path, 0)
                service._counts[path] = i + 1
                status, body = plan[min(i, len(plan) - 1)]
                data = body if isinstance(body, bytes) else json.dumps(body).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                raw = self.rfile.read(length)
                try:
                    payload = json.loads(raw) if raw else None
                except ValueError:
                    payload = None
                self._serve(self.path, payload)

            def do_GET(self):
                self._serve(self.path, None)

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def url(self) -> str:
        host, port = self.server.server_address
        return f"http://{host}:{port}"

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def synth_service():
    service = FakeSynthService()
    yield service
    service.close()


def mel_payload(rows: int, dim: int, fill=None) -> dict:
    """JSON body for /synthesize carrying a rows x dim matrix."""
    if fill is None:
        data = [((i * dim + j) % 7) * 0.1 for i in range(rows) for j in range(dim)]
    else:
        data = [fill] * (rows * dim)
    return {"rows": rows, "dim": dim, "data": data}
