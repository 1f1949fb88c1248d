"""Waveform <-> spectrogram machinery and the Griffin-Lim vocoder.

STFT uses centered frames with reflect padding and a periodic Hann window;
inversion is overlap-add normalized by the accumulated squared window, so
a round trip reproduces the signal to float precision for the default
hop = n_fft/4 configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    BadRangeError,
    DimensionMismatchError,
    NegativeMagnitudeError,
    SignalTooShortError,
)


@dataclass
class DspConfig:
    sample_rate: int = 16000
    n_fft: int = 1024
    hop: int = 256
    n_mels: int = 80
    fmin: float = 0.0
    fmax: float | None = None  # defaults to sample_rate / 2

    def __post_init__(self):
        if self.n_fft < 2 or self.n_fft & (self.n_fft - 1):
            raise ValueError("n_fft must be a power of two")
        if not 0 < self.hop <= self.n_fft:
            raise ValueError("hop must be in (0, n_fft]")
        if self.n_mels < 2:
            raise ValueError("n_mels must be >= 2")
        if self.fmax is None:
            self.fmax = self.sample_rate / 2

    @property
    def bins(self) -> int:
        return self.n_fft // 2 + 1


@dataclass
class Waveform:
    samples: np.ndarray
    sample_rate: int = 16000


@dataclass
class Spectrogram:
    """Complex frames x (n_fft/2 + 1) matrix plus the analysis geometry."""

    data: np.ndarray
    n_fft: int
    hop: int
    n_samples: int | None = None  # original length, when known

    @property
    def frames(self) -> int:
        return self.data.shape[0]


@dataclass
class MelSpectrogram:
    """Non-negative frames x n_mels magnitude matrix."""

    data: np.ndarray

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def n_mels(self) -> int:
        return self.data.shape[1]


def hann_window(n: int) -> np.ndarray:
    """Periodic Hann window of length n."""
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def stft(wave: Waveform, cfg: DspConfig) -> Spectrogram:
    """Forward transform with centered frames and reflect padding."""
    x = np.asarray(wave.samples, dtype=float)
    if x.size < cfg.n_fft:
        raise SignalTooShortError(f"signal length {x.size} < n_fft {cfg.n_fft}")
    pad = cfg.n_fft // 2
    padded = np.pad(x, pad, mode="reflect")
    windows = np.lib.stride_tricks.sliding_window_view(padded, cfg.n_fft)
    frames = windows[:: cfg.hop]
    spectra = np.fft.rfft(frames * hann_window(cfg.n_fft), axis=1)
    return Spectrogram(data=spectra, n_fft=cfg.n_fft, hop=cfg.hop, n_samples=x.size)


def istft(spec: Spectrogram, cfg: DspConfig | None = None) -> Waveform:
    """Overlap-add inversion with squared-window normalization.

    Output length is the spectrogram's recorded ``n_samples`` when present,
    otherwise the natural (frames - 1) * hop.
    """
    n_fft, hop = spec.n_fft, spec.hop
    out = _overlap_add(spec.data, n_fft, hop, hann_window(n_fft))
    pad = n_fft // 2
    length = spec.n_samples if spec.n_samples is not None else (spec.frames - 1) * hop
    result = out[pad : pad + length]
    if result.size < length:
        result = np.pad(result, (0, length - result.size))
    rate = cfg.sample_rate if cfg is not None else 16000
    return Waveform(samples=result, sample_rate=rate)


def hz_to_mel(f) -> np.ndarray | float:
    """HTK mel scale: m = 2595 * log10(1 + f / 700)."""
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=float) / 700.0)


def mel_to_hz(m) -> np.ndarray | float:
    return 700.0 * (10.0 ** (np.asarray(m, dtype=float) / 2595.0) - 1.0)


def mel_filterbank(
    n_mels: int,
    n_fft: int,
    sample_rate: int,
    fmin: float = 0.0,
    fmax: float | None = None,
) -> np.ndarray:
    """Triangular filters, equally spaced on the HTK mel scale.

    Returns an (n_mels, n_fft/2 + 1) non-negative matrix; triangles are
    evaluated at the exact FFT bin frequencies.
    """
    if fmax is None:
        fmax = sample_rate / 2
    if fmin >= fmax:
        raise BadRangeError(f"fmin {fmin} must be below fmax {fmax}")
    mel_points = np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2)
    hz_points = mel_to_hz(mel_points)
    bin_freqs = np.arange(n_fft // 2 + 1) * sample_rate / n_fft

    fb = np.zeros((n_mels, n_fft // 2 + 1))
    for m in range(n_mels):
        left, center, right = hz_points[m], hz_points[m + 1], hz_points[m + 2]
        rising = (bin_freqs - left) / max(center - left, 1e-12)
        falling = (right - bin_freqs) / max(right - center, 1e-12)
        fb[m] = np.maximum(0.0, np.minimum(rising, falling))
    return fb


def mel_project(spec: Spectrogram | np.ndarray, fb: np.ndarray) -> MelSpectrogram:
    """Project linear magnitudes (or a complex spectrogram) onto the mel
    filters: |S| @ fb^t."""
    data = spec.data if isinstance(spec, Spectrogram) else np.asarray(spec)
    if fb.shape[1] != data.shape[1]:
        raise DimensionMismatchError(
            f"filterbank has {fb.shape[1]} bins, spectrogram {data.shape[1]}"
        )
    return MelSpectrogram(data=np.abs(data) @ fb.T)


def mel_invert(mel: MelSpectrogram | np.ndarray, fb: np.ndarray) -> np.ndarray:
    """Approximate linear magnitudes from mel magnitudes.

    Normalized transpose projection: each mel band is divided by its
    filter's total weight (triangle area) before projecting back through
    the filterbank, clipped at zero.  Cheap but lossy; adequate for
    vocoding, and re-projecting the result stays within a few percent of
    the original mel for smooth inputs.
    """
    data = mel.data if isinstance(mel, MelSpectrogram) else np.asarray(mel, float)
    if data.shape[1] != fb.shape[0]:
        raise DimensionMismatchError(
            f"mel has {data.shape[1]} bands, filterbank {fb.shape[0]}"
        )
    areas = fb.sum(axis=1)
    scale = np.where(areas > 0, areas, 1.0)
    return np.maximum(0.0, (data / scale) @ fb)


@dataclass
class GriffinLimResult:
    waveform: Waveform
    convergence: float
    # spectral convergence after each iteration
    history: list[float] = field(default_factory=list)


def spectral_convergence(estimate: np.ndarray, target: np.ndarray) -> float:
    denom = np.linalg.norm(target)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(estimate - target) / denom)


def _analyze_frames(x: np.ndarray, n_fft: int, hop: int, window: np.ndarray) -> np.ndarray:
    """Windowed rfft of every hop-spaced frame of an (unpadded) signal."""
    frames = np.lib.stride_tricks.sliding_window_view(x, n_fft)[::hop]
    return np.fft.rfft(frames * window, axis=1)


def _overlap_add(spectra: np.ndarray, n_fft: int, hop: int, window: np.ndarray) -> np.ndarray:
    """Least-squares synthesis over the full frame support (no trimming)."""
    n_frames = spectra.shape[0]
    frames = np.fft.irfft(spectra, n=n_fft, axis=1) * window
    total = (n_frames - 1) * hop + n_fft
    out = np.zeros(total)
    wsum = np.zeros(total)
    if n_fft % hop == 0:
        ratio = n_fft // hop
        out_grid = out.reshape(-1, hop)
        wsum_grid = wsum.reshape(-1, hop)
        chunks = frames.reshape(n_frames, ratio, hop)
        w2 = (window**2).reshape(ratio, hop)
        for r in range(ratio):
            out_grid[r : r + n_frames] += chunks[:, r, :]
            wsum_grid[r : r + n_frames] += w2[r]
    else:
        idx = (np.arange(n_frames) * hop)[:, None] + np.arange(n_fft)[None, :]
        np.add.at(out, idx, frames)
        np.add.at(wsum, idx, np.broadcast_to(window**2, frames.shape))
    nonzero = wsum > 1e-11
    out[nonzero] /= wsum[nonzero]
    return out


def griffin_lim(
    magnitude: np.ndarray,
    cfg: DspConfig,
    iters: int = 60,
    seed: int = 42,
) -> GriffinLimResult:
    """Phase reconstruction from a linear magnitude spectrogram.

    Starts from seeded random phase and alternates synthesis/analysis over
    the magnitude's own frame grid (the exact projection pair, so the
    reported spectral convergence ||  |F(w)| - M ||_F / || M ||_F never
    increases across iterations).  The returned waveform is the center of
    the frame support, matching the istft output length for this geometry.
    """
    mag = np.asarray(magnitude, dtype=float)
    if (mag < 0).any():
        raise NegativeMagnitudeError("magnitude spectrogram has negative entries")
    n_frames = mag.shape[0]
    length = max(0, (n_frames - 1) * cfg.hop)

    if np.linalg.norm(mag) == 0.0:
        silent = Waveform(samples=np.zeros(length), sample_rate=cfg.sample_rate)
        return GriffinLimResult(waveform=silent, convergence=0.0, history=[0.0])

    window = hann_window(cfg.n_fft)
    rng = np.random.default_rng(seed)
    phase = rng.uniform(-np.pi, np.pi, size=mag.shape)
    x = _overlap_add(mag * np.exp(1j * phase), cfg.n_fft, cfg.hop, window)

    history: list[float] = []
    for _ in range(iters):
        analyzed = _analyze_frames(x, cfg.n_fft, cfg.hop, window)
        measured = np.abs(analyzed)
        history.append(spectral_convergence(measured, mag))
        # unit-modulus phase via division (cheaper than angle + exp)
        unit = analyzed / np.where(measured > 0.0, measured, 1.0)
        unit[measured == 0.0] = 1.0
        x = _overlap_add(mag * unit, cfg.n_fft, cfg.hop, window)
    final = spectral_convergence(
        np.abs(_analyze_frames(x, cfg.n_fft, cfg.hop, window)), mag
    )
    history.append(final)
    pad = cfg.n_fft // 2
    wave = Waveform(samples=x[pad : pad + length], sample_rate=cfg.sample_rate)
    return GriffinLimResult(waveform=wave, convergence=final, history=history)


def limit_peak(wave: Waveform) -> Waveform:
    """Scale down (never up) so every sample fits in [-1, 1]."""
    peak = float(np.max(np.abs(wave.samples))) if wave.samples.size else 0.0
    if peak > 1.0:
        return Waveform(samples=wave.samples / peak, sample_rate=wave.sample_rate)
    return wave


def mel_to_waveform(
    mel: MelSpectrogram,
    cfg: DspConfig,
    iters: int = 60,
    seed: int = 42,
) -> Waveform:
    """Full vocoder chain: mel -> linear magnitude -> Griffin-Lim -> limiter."""
    fb = mel_filterbank(cfg.n_mels, cfg.n_fft, cfg.sample_rate, cfg.fmin, cfg.fmax)
    magnitude = mel_invert(mel, fb)
    result = griffin_lim(magnitude, cfg, iters=iters, seed=seed)
    return limit_peak(result.waveform)
