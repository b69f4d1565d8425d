"""Tunable constants, grouped so tuning never touches logic."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class TouchConfig:
    contact_enter_mm: float = 2.0  # contact when height <= this ...
    contact_exit_mm: float = 4.0  # ... until height exceeds this (hysteresis)
    debounce_frames: int = 2  # consecutive low frames before contact_start
    min_confidence: float = 0.3  # frames below this are dropped and counted
    tap_max_ms: float = 250.0
    tap_max_move_cells: int = 1
    double_tap_gap_ms: float = 400.0  # end of first tap to start of second
    sigma_pins: float = 1.0  # Gaussian width of target inference
    candidate_radius_pins: float = 3.0
    selection_ttl_ms: float = 30_000.0


@dataclass(frozen=True)
class ButtonConfig:
    quick_max_ms: float = 200.0  # strictly less than
    hold_ms: float = 500.0  # fires once while still held
    combo_window_ms: float = 100.0  # two downs within this form a combo


@dataclass(frozen=True)
class OutputConfig:
    speech_ms_per_char: float = 50.0
    speech_min_ms: float = 300.0
    highlight_style: str = "pulse"  # static | pulse
    pulse_rate_hz: float = 2.0
    pulse_duty: float = 0.5
    highlight_persist_ms: float = 5_000.0


@dataclass(frozen=True)
class AgentConfig:
    deictic_threshold: float = 0.40
    max_answer_words: int = 40
    port_timeout_s: float = 10.0


@dataclass(frozen=True)
class SessionConfig:
    touch: TouchConfig = field(default_factory=TouchConfig)
    buttons: ButtonConfig = field(default_factory=ButtonConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)


def catalogue_root(flag_value: str | None = None) -> Path:
    """Catalogue directory from the CLI flag, else FEELGRID_CATALOGUE, else
    ./charts."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get("FEELGRID_CATALOGUE")
    if env:
        return Path(env)
    return Path("charts")


def model_port_url() -> str | None:
    return os.environ.get("FEELGRID_MODEL_URL") or None
