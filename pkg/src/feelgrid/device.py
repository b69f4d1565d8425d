"""Bit-faithful simulated pin display.

State is exactly the cumulative application of the write log. Pulse
commands schedule pin toggles on a virtual timeline (50% duty) instead of
mutating base state, so tests can count toggles deterministically. The
latency model defaults to serial transmission time at 115,200 baud, about
27 ms for a full frame.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .frame import FRAME_BYTES, bit_index
from .protocol import (
    BRAILLE_LINE,
    CLEAR,
    FULL_FRAME,
    PARTIAL,
    PULSE,
    Packet,
    encode,
    parse_partial_payload,
    parse_pulse_payload,
    transmit_ms,
)


@dataclass(frozen=True)
class ToggleEvent:
    t: float  # ms in the device timeline
    cell: tuple[int, int]
    raised: bool


@dataclass
class SimulatedDevice:
    pins: bytearray = field(default_factory=lambda: bytearray(FRAME_BYTES))
    braille: list[int] = field(default_factory=lambda: [0] * 20)
    write_log: list[tuple[float, Packet]] = field(default_factory=list)
    timeline: list[ToggleEvent] = field(default_factory=list)
    latency_ms: float | None = None  # None = serial transmission time

    def pin(self, col: int, row: int) -> bool:
        i = bit_index(col, row)
        return bool(self.pins[i // 8] & (0x80 >> (i % 8)))

    def _set_pin(self, col: int, row: int, raised: bool) -> None:
        i = bit_index(col, row)
        if raised:
            self.pins[i // 8] |= 0x80 >> (i % 8)
        else:
            self.pins[i // 8] &= ~(0x80 >> (i % 8)) & 0xFF

    def packet_latency(self, packet: Packet) -> float:
        if self.latency_ms is not None:
            return self.latency_ms
        return transmit_ms(encode(packet))

    def apply(self, packet: Packet, t: float = 0.0) -> float:
        """Apply one packet at submission time ``t``; returns the time the
        write lands after the latency model."""
        applied_at = t + self.packet_latency(packet)
        if packet.command == FULL_FRAME:
            self.pins = bytearray(packet.payload)
        elif packet.command == CLEAR:
            self.pins = bytearray(FRAME_BYTES)
        elif packet.command == BRAILLE_LINE:
            self.braille = list(packet.payload)
        elif packet.command == PARTIAL:
            for col, row, length, bits in parse_partial_payload(packet.payload):
                for k, bit in enumerate(bits):
                    self._set_pin(col + k, row, bit)
        elif packet.command == PULSE:
            cells, rate_hz, duty, duration_ms = parse_pulse_payload(packet.payload)
            period = 1000.0 / rate_hz
            up_span = period * duty
            offset = 0.0
            while offset < duration_ms:
                for cell in cells:
                    self.timeline.append(ToggleEvent(t=applied_at + offset, cell=cell, raised=True))
                down_at = offset + up_span
                if down_at < duration_ms:
                    for cell in cells:
                        self.timeline.append(
                            ToggleEvent(t=applied_at + down_at, cell=cell, raised=False)
                        )
                offset += period
        self.write_log.append((t, packet))
        return applied_at

    def state_digest(self) -> str:
        h = hashlib.sha256()
        h.update(bytes(self.pins))
        h.update(bytes(self.braille))
        return h.hexdigest()

    def snapshot(self) -> dict:
        return {
            "pins": bytes(self.pins),
            "braille": list(self.braille),
            "writes": len(self.write_log),
        }
