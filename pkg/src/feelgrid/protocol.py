"""Binary packet protocol for the pin display.

Layout (bit-exact description in docs/protocol.md):

    0xAA | command | length (2 bytes, big-endian) | payload | checksum

The checksum is the XOR of every byte from the command through the last
payload byte. FULL_FRAME payloads are exactly 300 bytes: 60x40 pins packed
row-major, MSB first, bit index = row*60 + col. The decoder resynchronizes
on the next 0xAA after corruption; a checksum mismatch discards the packet
and is reported, never silently applied.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ChecksumMismatchError, FramingError, OversizeFrameError
from .frame import FRAME_BYTES

HEADER = 0xAA

FULL_FRAME = 0x01
PARTIAL = 0x02
BRAILLE_LINE = 0x03
CLEAR = 0x04
PULSE = 0x05

COMMANDS = (FULL_FRAME, PARTIAL, BRAILLE_LINE, CLEAR, PULSE)

BRAILLE_CELLS = 20
MAX_PAYLOAD = 0xFFFF

BAUD = 115_200
BITS_PER_BYTE = 10  # 8-N-1 framing: start + 8 data + stop


@dataclass(frozen=True)
class Packet:
    command: int
    payload: bytes

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise FramingError(f"unknown command 0x{self.command:02X}")
        if len(self.payload) > MAX_PAYLOAD:
            raise OversizeFrameError(f"payload of {len(self.payload)} bytes exceeds {MAX_PAYLOAD}")
        if self.command == FULL_FRAME and len(self.payload) != FRAME_BYTES:
            raise OversizeFrameError(
                f"FULL_FRAME payload must be {FRAME_BYTES} bytes, got {len(self.payload)}"
            )
        if self.command == BRAILLE_LINE and len(self.payload) != BRAILLE_CELLS:
            raise OversizeFrameError(
                f"BRAILLE_LINE payload must be {BRAILLE_CELLS} bytes, got {len(self.payload)}"
            )


def checksum(command: int, payload: bytes) -> int:
    length = len(payload)
    value = command ^ ((length >> 8) & 0xFF) ^ (length & 0xFF)
    for b in payload:
        value ^= b
    return value


def encode(packet: Packet) -> bytes:
    length = len(packet.payload)
    return bytes(
        [HEADER, packet.command, (length >> 8) & 0xFF, length & 0xFF]
        + list(packet.payload)
        + [checksum(packet.command, packet.payload)]
    )


def transmit_ms(encoded: bytes, baud: int = BAUD) -> float:
    """Serial transmission time of one encoded packet at the device rate."""
    return len(encoded) * BITS_PER_BYTE * 1000.0 / baud


# --- payload builders -------------------------------------------------------


def full_frame_packet(pins: bytes) -> Packet:
    return Packet(command=FULL_FRAME, payload=bytes(pins))


def braille_line_packet(cells) -> Packet:
    padded = list(cells)[:BRAILLE_CELLS]
    padded += [0] * (BRAILLE_CELLS - len(padded))
    if any(not 0 <= c <= 0x3F for c in padded):
        raise OversizeFrameError("braille cells must fit 6 dots (0..63)")
    return Packet(command=BRAILLE_LINE, payload=bytes(padded))


def clear_packet() -> Packet:
    return Packet(command=CLEAR, payload=b"")


def partial_packet(runs: list[tuple[int, int, int, list[bool]]]) -> Packet:
    """Runs of horizontally adjacent pins: (col, row, length, bits).

    Each run encodes as col, row, length, then ceil(length/8) bytes of pin
    bits, MSB first.
    """
    payload = bytearray()
    for col, row, length, bits in runs:
        if not (0 <= col < 60 and 0 <= row < 40 and 1 <= length <= 60 - col):
            raise OversizeFrameError(f"bad run ({col},{row},{length})")
        if len(bits) != length:
            raise OversizeFrameError("run bit count must equal run length")
        payload += bytes([col, row, length])
        packed = bytearray((length + 7) // 8)
        for i, bit in enumerate(bits):
            if bit:
                packed[i // 8] |= 0x80 >> (i % 8)
        payload += packed
    return Packet(command=PARTIAL, payload=bytes(payload))


def pulse_packet(
    cells: list[tuple[int, int]], rate_hz: float, duty: float, duration_ms: int
) -> Packet:
    """Pulse command: cell count, cells, rate in centi-hertz, duty percent,
    duration in milliseconds (both multi-byte fields big-endian)."""
    if not 0.5 <= rate_hz <= 4.0:
        raise OversizeFrameError(f"pulse rate {rate_hz} outside 0.5..4 Hz")
    if not cells:
        raise OversizeFrameError("pulse needs at least one cell")
    payload = bytearray()
    payload += len(cells).to_bytes(2, "big")
    for col, row in cells:
        if not (0 <= col < 60 and 0 <= row < 40):
            raise OversizeFrameError(f"pulse cell ({col},{row}) out of range")
        payload += bytes([col, row])
    payload += int(round(rate_hz * 100)).to_bytes(2, "big")
    payload += bytes([int(round(duty * 100))])
    payload += int(duration_ms).to_bytes(2, "big")
    return Packet(command=PULSE, payload=bytes(payload))


def parse_partial_payload(payload: bytes) -> list[tuple[int, int, int, list[bool]]]:
    runs = []
    i = 0
    while i < len(payload):
        if i + 3 > len(payload):
            raise FramingError("truncated partial run header")
        col, row, length = payload[i], payload[i + 1], payload[i + 2]
        i += 3
        nbytes = (length + 7) // 8
        if i + nbytes > len(payload):
            raise FramingError("truncated partial run bits")
        bits = []
        for j in range(length):
            byte = payload[i + j // 8]
            bits.append(bool(byte & (0x80 >> (j % 8))))
        i += nbytes
        runs.append((col, row, length, bits))
    return runs


def parse_pulse_payload(payload: bytes) -> tuple[list[tuple[int, int]], float, float, int]:
    if len(payload) < 2:
        raise FramingError("truncated pulse payload")
    count = int.from_bytes(payload[0:2], "big")
    need = 2 + count * 2 + 2 + 1 + 2
    if len(payload) != need:
        raise FramingError(f"pulse payload is {len(payload)} bytes, expected {need}")
    cells = []
    for i in range(count):
        cells.append((payload[2 + 2 * i], payload[3 + 2 * i]))
    off = 2 + count * 2
    rate_hz = int.from_bytes(payload[off : off + 2], "big") / 100.0
    duty = payload[off + 2] / 100.0
    duration_ms = int.from_bytes(payload[off + 3 : off + 5], "big")
    return cells, rate_hz, duty, duration_ms


# --- decoding ----------------------------------------------------------------


@dataclass(frozen=True)
class DecodeResult:
    packets: tuple[Packet, ...]
    errors: tuple[str, ...]  # checksum/framing reports, in stream order
    skipped: int  # bytes scanned past while resynchronizing
    remainder: bytes  # unconsumed tail (possible packet prefix)


def decode(stream: bytes, finalize: bool = True) -> DecodeResult:
    """Scan a byte stream for packets, resynchronizing on 0xAA.

    With ``finalize`` a trailing incomplete packet is a framing error; for
    live streams pass finalize=False and feed the remainder back in with
    the next read.
    """
    packets: list[Packet] = []
    errors: list[str] = []
    skipped = 0
    i = 0
    n = len(stream)
    while i < n:
        if stream[i] != HEADER:
            skipped += 1
            i += 1
            continue
        if i + 4 > n:
            break  # possible packet prefix
        command = stream[i + 1]
        length = (stream[i + 2] << 8) | stream[i + 3]
        end = i + 4 + length + 1
        if end > n:
            if finalize:
                errors.append(f"truncated packet at offset {i}")
                skipped += 1
                i += 1
                continue
            break
        payload = stream[i + 4 : i + 4 + length]
        stored = stream[end - 1]
        if checksum(command, payload) != stored:
            errors.append(
                f"checksum mismatch at offset {i}: computed "
                f"0x{checksum(command, payload):02X}, stored 0x{stored:02X}"
            )
            skipped += 1
            i += 1  # resync after the bad header
            continue
        try:
            packets.append(Packet(command=command, payload=payload))
        except (FramingError, OversizeFrameError) as exc:
            errors.append(f"bad packet at offset {i}: {exc}")
            skipped += 1
            i += 1
            continue
        i = end
    remainder = stream[i:] if not finalize else b""
    if finalize and i < n:
        errors.append(f"{n - i} unconsumed trailing bytes")
    return DecodeResult(
        packets=tuple(packets), errors=tuple(errors), skipped=skipped, remainder=remainder
    )


def decode_one(stream: bytes) -> Packet:
    """Decode exactly one clean packet; anything else raises."""
    result = decode(stream, finalize=True)
    if result.errors:
        message = result.errors[0]
        if "checksum" in message:
            raise ChecksumMismatchError(message)
        raise FramingError(message)
    if len(result.packets) != 1 or result.skipped:
        raise FramingError(
            f"expected one clean packet, got {len(result.packets)} with {result.skipped} skipped bytes"
        )
    return result.packets[0]
