"""Narration audio: local DSP vocoder, WAV output and the synthesis client."""

from .dsp import (
    DspConfig,
    GriffinLimResult,
    MelSpectrogram,
    Spectrogram,
    Waveform,
    griffin_lim,
    hann_window,
    hz_to_mel,
    istft,
    limit_peak,
    mel_filterbank,
    mel_invert,
    mel_project,
    mel_to_hz,
    mel_to_waveform,
    spectral_convergence,
    stft,
)
from .synth import FRAMES_PER_CHAR, SynthesisClient, VoiceProfile, stub_synthesize
from .wav import pcm16_bytes, wav_bytes, write_wav

__all__ = [
    "DspConfig",
    "GriffinLimResult",
    "MelSpectrogram",
    "Spectrogram",
    "Waveform",
    "griffin_lim",
    "hann_window",
    "hz_to_mel",
    "istft",
    "limit_peak",
    "mel_filterbank",
    "mel_invert",
    "mel_project",
    "mel_to_hz",
    "mel_to_waveform",
    "spectral_convergence",
    "stft",
    "FRAMES_PER_CHAR",
    "SynthesisClient",
    "VoiceProfile",
    "stub_synthesize",
    "pcm16_bytes",
    "wav_bytes",
    "write_wav",
]
