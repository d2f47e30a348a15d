"""Unsigned LEB128 integers, used for counts and lengths inside sections."""

from __future__ import annotations

from ..errors import CodecError


def encode_uvarint(value: int) -> bytes:
    if value < 0:
        raise ValueError("uvarint must be non-negative")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_uvarint(data, pos: int = 0) -> tuple[int, int]:
    """Return ``(value, next position)``."""
    value = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise CodecError("truncated varint")
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7
        if shift > 63:
            raise CodecError("varint too long")


class ByteReader:
    """Sequential reader over a byte payload."""

    def __init__(self, data, pos: int = 0):
        self.data = data
        self.pos = pos

    def uvarint(self) -> int:
        value, self.pos = decode_uvarint(self.data, self.pos)
        return value

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise CodecError("truncated payload")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return bytes(chunk)

    def rest(self) -> bytes:
        chunk = self.data[self.pos:]
        self.pos = len(self.data)
        return bytes(chunk)

    def sized(self) -> bytes:
        """A block prefixed by its uvarint length."""
        return self.take(self.uvarint())

    @property
    def exhausted(self) -> bool:
        return self.pos >= len(self.data)


def sized(block: bytes) -> bytes:
    return encode_uvarint(len(block)) + block
