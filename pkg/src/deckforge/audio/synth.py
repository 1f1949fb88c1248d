"""Client for the external voice-synthesis service, plus an offline stub.

The service owns the voice embedding and mel generation; this side only
holds an opaque voice handle and turns returned mel matrices into audio
via the local vocoder.  The stub synthesizer maps text deterministically
to a mel matrix so the whole pipeline runs with no network at all.

Wire format (JSON over HTTP):
  POST /embed      {"audio_b64": ...}            -> {"voice_id": ...}
  POST /synthesize {"text": ..., "voice_id": ...} -> {"rows", "dim", "data"}
  GET  /voices                                    -> {"voices": [...]}
"""

from __future__ import annotations

import base64
import time
from dataclasses import dataclass

import numpy as np
import requests

from ..errors import (
    EmptyTextError,
    HttpStatusError,
    MalformedResponseError,
    NonFiniteValueError,
    ServiceUnreachableError,
    SynthesisTimeoutError,
)
from .dsp import DspConfig, MelSpectrogram

FRAMES_PER_CHAR = 5
_STUB_ENVELOPE = (0.6, 0.9, 1.0, 0.9, 0.6)


@dataclass(frozen=True)
class VoiceProfile:
    """Opaque handle to a server-side voice embedding."""

    voice_id: str
    display_name: str = ""


def stub_synthesize(text: str, cfg: DspConfig) -> MelSpectrogram:
    """Deterministic offline synthesizer.

    Each character becomes five frames of a Gaussian bump centered at mel
    bin ``ord(char) % n_mels``.  Same text + config -> identical matrix.
    """
    frames = np.zeros((FRAMES_PER_CHAR * len(text), cfg.n_mels))
    bins = np.arange(cfg.n_mels)
    for i, ch in enumerate(text):
        center = ord(ch) % cfg.n_mels
        bump = np.exp(-0.5 * ((bins - center) / 2.0) ** 2)
        for j, amp in enumerate(_STUB_ENVELOPE):
            frames[i * FRAMES_PER_CHAR + j] = amp * bump
    return MelSpectrogram(data=frames)


class SynthesisClient:
    """Thin JSON client with bounded retries and exponential backoff."""

    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        retries: int = 2,
        backoff: float = 0.5,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.session = session or requests.Session()

    def _request(self, method: str, path: str, payload: dict | None = None) -> dict:
        url = self.endpoint + path
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                response = self.session.request(
                    method, url, json=payload, timeout=self.timeout
                )
            except requests.Timeout as exc:
                last_error = SynthesisTimeoutError(f"{url}: timed out after {self.timeout}s")
                last_error.__cause__ = exc
                continue
            except requests.ConnectionError as exc:
                last_error = ServiceUnreachableError(f"{url}: connection failed")
                last_error.__cause__ = exc
                continue
            if response.status_code >= 500:  # server hiccup: retry
                last_error = HttpStatusError(response.status_code, f"{url}: server error")
                continue
            if response.status_code >= 400:
                raise HttpStatusError(response.status_code, f"{url}: request rejected")
            try:
                body = response.json()
            except ValueError:
                raise MalformedResponseError(f"{url}: response body is not JSON") from None
            if not isinstance(body, dict):
                raise MalformedResponseError(f"{url}: expected a JSON object")
            return body
        raise last_error

    def enroll(self, reference_audio: bytes, display_name: str = "") -> VoiceProfile:
        """Register reference audio with the service; returns the voice handle."""
        body = self._request(
            "POST",
            "/embed",
            {"audio_b64": base64.b64encode(reference_audio).decode("ascii")},
        )
        voice_id = body.get("voice_id")
        if not isinstance(voice_id, str) or not voice_id:
            raise MalformedResponseError("/embed response missing 'voice_id'")
        return VoiceProfile(voice_id=voice_id, display_name=display_name)

    def synthesize(self, text: str, voice: VoiceProfile) -> MelSpectrogram:
        """Request a mel spectrogram for ``text`` in the enrolled voice."""
        if not text.strip():
            raise EmptyTextError("cannot synthesize empty text")
        body = self._request(
            "POST", "/synthesize", {"text": text, "voice_id": voice.voice_id}
        )
        try:
            rows, dim = int(body["rows"]), int(body["dim"])
            data = body["data"]
        except (KeyError, TypeError, ValueError):
            raise MalformedResponseError(
                "/synthesize response missing rows/dim/data"
            ) from None
        if not isinstance(data, list) or len(data) != rows * dim:
            raise MalformedResponseError(
                f"/synthesize data length {len(data) if isinstance(data, list) else '?'}"
                f" does not match {rows}x{dim}"
            )
        try:
            matrix = np.asarray(data, dtype=float).reshape(rows, dim)
        except (TypeError, ValueError):
            raise MalformedResponseError("/synthesize data is not numeric") from None
        if not np.isfinite(matrix).all():
            raise NonFiniteValueError("/synthesize returned NaN or infinity")
        return MelSpectrogram(data=np.maximum(matrix, 0.0))

    def voices(self) -> list[VoiceProfile]:
        body = self._request("GET", "/voices")
        entries = body.get("voices")
        if not isinstance(entries, list):
            raise MalformedResponseError("/voices response missing 'voices' list")
        profiles = []
        for entry in entries:
            if not isinstance(entry, dict) or not entry.get("voice_id"):
                raise MalformedResponseError("/voices entry missing 'voice_id'")
            profiles.append(
                VoiceProfile(
                    voice_id=entry["voice_id"],
                    display_name=entry.get("display_name", ""),
                )
            )
        return profiles
