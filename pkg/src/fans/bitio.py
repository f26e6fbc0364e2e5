"""Bit-level plumbing: LIFO bit stack, byte packing and minimal varints.

The coders renormalize by pushing low bits of the state and read them back in
reverse order, so the natural container is a stack. Packing is LSB-first: bit
i of the push order lands in byte i // 8 at bit position i % 8. Padding bits
in the last byte are always zero and are checked on the way back in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadPadding, EmptyStackError, OverlongVarint, TruncatedError

# EXPANDED_BITS[s][v] is the low s bits of v as 0/1 bytes, LSB first. The
# coders emit renormalization bits in batches through these tables instead of
# one append per bit.
EXPANDED_BITS = [
    [bytes((v >> i) & 1 for i in range(s)) for v in range(256)] for s in range(9)
]


class BitStack:
    """A LIFO sequence of bits backed by a bytearray of 0/1 values."""

    __slots__ = ("_bits",)

    def __init__(self, bits=None):
        if bits is None:
            self._bits = bytearray()
        elif isinstance(bits, BitStack):
            self._bits = bytearray(bits._bits)
        elif isinstance(bits, (bytes, bytearray)):
            buf = bytearray(bits)
            if buf.translate(None, b"\x00\x01"):
                raise ValueError("bit values must be 0 or 1")
            self._bits = buf
        else:
            self._bits = bytearray()
            for b in bits:
                self.push(b)

    def push(self, bit: int) -> None:
        if bit != 0 and bit != 1:
            raise ValueError("bit values must be 0 or 1")
        self._bits.append(bit)

    def pop(self) -> int:
        if not self._bits:
            raise EmptyStackError("pop from empty bit stack")
        return self._bits.pop()

    def copy(self) -> "BitStack":
        return BitStack(self)

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self):
        return iter(self._bits)

    def __eq__(self, other) -> bool:
        if isinstance(other, BitStack):
            return self._bits == other._bits
        return NotImplemented

    def __repr__(self) -> str:
        shown = "".join(str(b) for b in self._bits[:64])
        if len(self._bits) > 64:
            shown += "..."
        return f"BitStack({shown!r} len={len(self._bits)})"


@dataclass(frozen=True)
class ByteImage:
    """Packed bits plus their exact bit count."""

    data: bytes
    bit_length: int

    def __post_init__(self):
        if self.bit_length < 0:
            raise ValueError("bit_length must be non-negative")
        if len(self.data) != (self.bit_length + 7) // 8:
            raise ValueError("data length does not match bit_length")


def pack(stack: BitStack) -> ByteImage:
    """Pack a bit stack into bytes, LSB-first, zero-padding the final byte."""
    bits = bytes(stack._bits)
    if not bits:
        return ByteImage(b"", 0)
    arr = np.frombuffer(bits, dtype=np.uint8)
    packed = np.packbits(arr, bitorder="little")
    return ByteImage(packed.tobytes(), len(bits))


def unpack(image: ByteImage) -> BitStack:
    """Reverse pack(); rejects nonzero padding bits."""
    if image.bit_length == 0:
        if image.data:
            raise BadPadding("zero-bit image with data bytes")
        return BitStack()
    arr = np.frombuffer(image.data, dtype=np.uint8)
    bits = np.unpackbits(arr, bitorder="little")
    if bits[image.bit_length :].any():
        raise BadPadding("nonzero padding bits in final byte")
    return BitStack(bits[: image.bit_length].tobytes())


# Varints are unsigned LEB128, minimal form only: 7 value bits per byte,
# continuation in the high bit, and the final byte may be zero only when it
# is the whole encoding.

_VARINT_MAX_BYTES = 10  # enough for any 64-bit value


def write_varint(value: int) -> bytes:
    if value < 0:
        raise ValueError("varints are unsigned")
    out = bytearray()
    while True:
        group = value & 0x7F
        value >>= 7
        if value:
            out.append(group | 0x80)
        else:
            out.append(group)
            return bytes(out)


def read_varint(data, pos: int = 0) -> tuple[int, int]:
    """Read one varint from data[pos:]; returns (value, bytes consumed)."""
    value = 0
    shift = 0
    consumed = 0
    while True:
        if pos + consumed >= len(data):
            raise TruncatedError("varint runs past end of input")
        if consumed >= _VARINT_MAX_BYTES:
            raise OverlongVarint("varint longer than 10 bytes")
        byte = data[pos + consumed]
        value |= (byte & 0x7F) << shift
        consumed += 1
        if not byte & 0x80:
            if byte == 0 and consumed > 1:
                raise OverlongVarint("varint has redundant trailing zero group")
            return value, consumed
        shift += 7
