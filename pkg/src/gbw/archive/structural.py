"""Shift positions and offset values of a biword stream."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..biwords import Biword
from ..errors import CorruptArchiveError


@dataclass(frozen=True)
class StructuralStreams:
    p_deltas: tuple[int, ...]
    o_values: tuple[int, ...]


def encode_structural(corpus: Sequence[Biword]) -> StructuralStreams:
    """``p_deltas`` gives the 1-based index of the first biword with a
    shift, then the distance from each such biword to the previous one;
    ``o_values`` concatenates their offset arrays."""
    deltas = []
    values = []
    prev = 0
    for k, b in enumerate(corpus, 1):
        if any(b.offsets):
            deltas.append(k - prev)
            values.extend(b.offsets)
            prev = k
    return StructuralStreams(tuple(deltas), tuple(values))


def decode_structural(streams: StructuralStreams, shapes: Sequence[int]) -> list[tuple[int, ...]]:
    """Offset arrays for biwords with ``shapes[k]`` right words each."""
    out = [(0,) * s for s in shapes]
    k = 0
    pos = 0
    values = streams.o_values
    for d in streams.p_deltas:
        k += d
        if d <= 0 or k > len(shapes):
            raise CorruptArchiveError("shift position outside the biword stream")
        s = shapes[k - 1]
        if pos + s > len(values):
            raise CorruptArchiveError("offset stream shorter than the shift biwords need")
        omega = tuple(values[pos:pos + s])
        if not any(omega):
            raise CorruptArchiveError("shift biword with all-zero offsets")
        out[k - 1] = omega
        pos += s
    if pos != len(values):
        raise CorruptArchiveError("offset stream longer than the shift biwords need")
    return out
