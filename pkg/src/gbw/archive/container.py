"""The ``.gbw`` container.

Layout::

    "GBW1"  u8 version  u8 method  u8 scheme  u8 dac_width  u8 flags
    section*            (u8 id, u64 length, payload), ids strictly increasing
    u32 CRC-32 of everything before it

All fixed-width integers are little-endian.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

from ..errors import CorruptArchiveError

MAGIC = b"GBW1"
VERSION = 1

METHODS = {"wh": 0, "tre": 1, "2lcab": 2, "s2lcab": 3}
METHOD_NAMES = {v: k for k, v in METHODS.items()}
SCHEME_CODES = {"1to1-mono": 0, "1to1-nonmono": 1, "1ton-simple": 2, "1ton-complex": 3, None: 0xFF}
SCHEME_NAMES = {v: k for k, v in SCHEME_CODES.items()}

SIGMA_L = 1
SIGMA_R = 2
SIGMA_B = 3  # the tau_B table for TRE
STREAM_B = 4
STREAM_P = 5
STREAM_O = 6
STREAM_Q = 7
CODE_TABLES = 8
SECTION_IDS = (SIGMA_L, SIGMA_R, SIGMA_B, STREAM_B, STREAM_P, STREAM_O, STREAM_Q, CODE_TABLES)

FLAG_Q = 1
FLAG_PRUNED = 2

_HEAD = struct.Struct("<4sBBBBB")
_SECTION = struct.Struct("<BQ")
_CRC = struct.Struct("<I")


@dataclass
class Archive:
    method: str
    scheme: str | None = None
    dac_width: int = 4
    flags: int = 0
    sections: dict[int, bytes] = field(default_factory=dict)

    def to_bytes(self) -> bytes:
        parts = [_HEAD.pack(MAGIC, VERSION, METHODS[self.method], SCHEME_CODES[self.scheme],
                            self.dac_width, self.flags)]
        for sid in sorted(self.sections):
            if sid not in SECTION_IDS:
                raise ValueError(f"unknown section id {sid}")
            payload = self.sections[sid]
            parts.append(_SECTION.pack(sid, len(payload)))
            parts.append(payload)
        body = b"".join(parts)
        return body + _CRC.pack(zlib.crc32(body))

    def __len__(self):
        return len(self.to_bytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> "Archive":
        data = bytes(data)
        if len(data) < _HEAD.size + _CRC.size:
            raise CorruptArchiveError("archive truncated")
        magic, version, method, scheme, width, flags = _HEAD.unpack_from(data)
        if magic != MAGIC:
            raise CorruptArchiveError("not a gbw archive (bad magic)")
        if version != VERSION:
            raise CorruptArchiveError(f"unsupported archive version {version}")
        (crc,) = _CRC.unpack_from(data, len(data) - _CRC.size)
        if zlib.crc32(data[:-_CRC.size]) != crc:
            raise CorruptArchiveError("checksum mismatch (archive truncated or damaged)")
        if method not in METHOD_NAMES or scheme not in SCHEME_NAMES:
            raise CorruptArchiveError("unknown method or scheme tag")
        sections = {}
        pos = _HEAD.size
        end = len(data) - _CRC.size
        last = 0
        while pos < end:
            if pos + _SECTION.size > end:
                raise CorruptArchiveError("truncated section header")
            sid, length = _SECTION.unpack_from(data, pos)
            pos += _SECTION.size
            if sid not in SECTION_IDS:
                raise CorruptArchiveError(f"unknown section id {sid}")
            if sid <= last:
                raise CorruptArchiveError("sections out of order")
            if pos + length > end:
                raise CorruptArchiveError(f"section {sid} overruns the archive")
            sections[sid] = data[pos:pos + length]
            pos += length
            last = sid
        return cls(METHOD_NAMES[method], SCHEME_NAMES[scheme], width, flags, sections)

    def section(self, sid: int) -> bytes:
        try:
            return self.sections[sid]
        except KeyError:
            raise CorruptArchiveError(f"missing section {sid}") from None

    def section_sizes(self) -> dict[int, int]:
        """Bytes taken by each section including its 9-byte header."""
        return {sid: _SECTION.size + len(p) for sid, p in sorted(self.sections.items())}

    @property
    def overhead(self) -> int:
        return _HEAD.size + _CRC.size
