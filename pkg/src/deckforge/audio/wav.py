"""RIFF/WAVE output: PCM, 16-bit signed little-endian, mono.

Samples are scaled by 32767 and clamped, so +/-1.0 maps to +/-32767 and
the emitted bytes are bit-exact for a given waveform.
"""

from __future__ import annotations

import struct

import numpy as np

from .dsp import Waveform

_PCM_SCALE = 32767


def pcm16_bytes(samples: np.ndarray) -> bytes:
    scaled = np.round(np.asarray(samples, dtype=float) * _PCM_SCALE)
    clipped = np.clip(scaled, -_PCM_SCALE, _PCM_SCALE).astype("<i2")
    return clipped.tobytes()


def wav_bytes(wave: Waveform) -> bytes:
    data = pcm16_bytes(wave.samples)
    byte_rate = wave.sample_rate * 2  # mono, 2 bytes per sample
    header = b"RIFF"
    header += struct.pack("<I", 36 + len(data))
    header += b"WAVE"
    header += b"fmt "
    header += struct.pack("<IHHIIHH", 16, 1, 1, wave.sample_rate, byte_rate, 2, 16)
    header += b"data"
    header += struct.pack("<I", len(data))
    return header + data


def write_wav(wave: Waveform, path) -> None:
    """Write the waveform; propagates OSError on unwritable paths."""
    with open(path, "wb") as fh:
        fh.write(wav_bytes(wave))
