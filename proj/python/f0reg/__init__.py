# Copyright 2026  The f0reg Authors
# Licensed under the Apache License, Version 2.0.
"""F0 tracking by waveform-to-sinusoid regression."""

from ._core import (
    SAMPLE_RATE,
    ConfigError,
    DomainError,
    Error,
    Model,
    acf_track,
    decode_frame,
    expanded_count,
    generate_noise,
    load_audio,
    mix_at_snr,
    save_audio,
    score,
    synth_utterance,
    yin_track,
)

__all__ = [
    "SAMPLE_RATE",
    "ConfigError",
    "DomainError",
    "Error",
    "Model",
    "acf_track",
    "decode_frame",
    "expanded_count",
    "generate_noise",
    "load_audio",
    "mix_at_snr",
    "save_audio",
    "score",
    "synth_utterance",
    "yin_track",
]
