"""Order-3 byte PPM (escape method D, no exclusion) over a range coder.

Blob layout: one byte holding the model order, one byte naming the escape
method (``b"D"``), the payload length as a uvarint, then the range-coded
body.  Within a context holding ``d`` distinct symbols with total count
``T`` a symbol seen ``c`` times is coded with frequency ``2c - 1`` and the
escape with frequency ``d``, out of ``2T``.  A context that has never seen
a symbol is skipped silently, and order -1 is uniform over 256 bytes.

The range coder keeps a 32-bit range and a 33-bit low with a one-byte
cache for carry propagation, the construction used by LZMA.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ..errors import CodecError
from .varint import decode_uvarint, encode_uvarint

ORDER = 3
METHOD = b"D"

_TOP = 1 << 24
_MASK32 = 0xFFFFFFFF
# totals stay below 2**16 so range // total keeps 8 bits of precision
_HALVE_AT = 32000

_BASE1 = 1
# order-2 and order-3 contexts get ids from a hash table on first use, so
# the model is sized by the input rather than by the 2**16 order-2 space
_BASE2 = _BASE1 + 256


@njit(cache=True)
def _new_model(n):
    n_ctx = _BASE2 + 2 * n + 2
    head = np.full(n_ctx, -1, np.int32)
    tail = np.full(n_ctx, -1, np.int32)
    total = np.zeros(n_ctx, np.int32)
    distinct = np.zeros(n_ctx, np.int32)
    n_nodes = 4 * n + 4
    sym = np.zeros(n_nodes, np.int32)
    cnt = np.zeros(n_nodes, np.int32)
    nxt = np.full(n_nodes, -1, np.int32)
    cap = 16
    while cap < 4 * n + 4:
        cap *= 2
    keys = np.full(cap, -1, np.int64)
    ids = np.zeros(cap, np.int32)
    state = np.zeros(2, np.int64)  # next free node, next free hashed id
    state[1] = _BASE2
    return head, tail, total, distinct, sym, cnt, nxt, keys, ids, state


@njit(cache=True)
def _hashed_id(key, keys, ids, state):
    cap = keys.shape[0]
    h = (key * 0x9E3779B1) & (cap - 1)
    while True:
        k = keys[h]
        if k == key:
            return ids[h]
        if k == -1:
            keys[h] = key
            ids[h] = state[1]
            state[1] += 1
            return ids[h]
        h = (h + 1) & (cap - 1)


@njit(cache=True)
def _contexts(hist, pos, keys, ids, state, out):
    # out[k] = context id for order k, -1 when there is not enough history
    out[0] = 0
    out[1] = -1
    out[2] = -1
    out[3] = -1
    if pos >= 1:
        out[1] = _BASE1 + hist[pos - 1]
    if pos >= 2:
        # the top byte keeps order-2 keys apart from order-3 ones
        key = 1 << 24 | hist[pos - 2] << 8 | hist[pos - 1]
        out[2] = _hashed_id(np.int64(key), keys, ids, state)
    if pos >= 3:
        key = hist[pos - 3] << 16 | hist[pos - 2] << 8 | hist[pos - 1]
        out[3] = _hashed_id(np.int64(key), keys, ids, state)


@njit(cache=True)
def _update(ctx, s, head, tail, total, distinct, sym, cnt, nxt, state):
    node = head[ctx]
    while node != -1:
        if sym[node] == s:
            cnt[node] += 1
            break
        node = nxt[node]
    if node == -1:
        node = state[0]
        state[0] += 1
        sym[node] = s
        cnt[node] = 1
        if tail[ctx] == -1:
            head[ctx] = node
        else:
            nxt[tail[ctx]] = node
        tail[ctx] = node
        distinct[ctx] += 1
    total[ctx] += 1
    if total[ctx] > _HALVE_AT:
        t = 0
        node = head[ctx]
        while node != -1:
            cnt[node] = (cnt[node] + 1) // 2
            t += cnt[node]
            node = nxt[node]
        total[ctx] = t


@njit(cache=True)
def _emit(out, n_out, b):
    if n_out[0] >= out.shape[0]:
        bigger = np.zeros(out.shape[0] * 2, np.uint8)
        bigger[: out.shape[0]] = out
        out = bigger
    out[n_out[0]] = b
    n_out[0] += 1
    return out


@njit(cache=True)
def _shift_low(rc, out, n_out):
    # rc = [low, range, cache, cache_size]
    low = rc[0]
    if low < 0xFF000000 or low >= (1 << 32):
        carry = low >> 32
        temp = rc[2]
        while True:
            out = _emit(out, n_out, np.uint8((temp + carry) & 0xFF))
            temp = 0xFF
            rc[3] -= 1
            if rc[3] == 0:
                break
        rc[2] = (low >> 24) & 0xFF
    rc[3] += 1
    rc[0] = (low & 0x00FFFFFF) << 8
    return out


@njit(cache=True)
def _encode(rc, start, size, tot, out, n_out):
    r = rc[1] // tot
    rc[0] += start * r
    rc[1] = size * r
    while rc[1] < _TOP:
        rc[1] = (rc[1] << 8) & _MASK32
        out = _shift_low(rc, out, n_out)
    return out


@njit(cache=True)
def _ppm_encode(data):
    n = data.shape[0]
    head, tail, total, distinct, sym, cnt, nxt, keys, ids, state = _new_model(n)
    hist = data.astype(np.int64)
    out = np.zeros(n + 64, np.uint8)
    n_out = np.zeros(1, np.int64)
    rc = np.zeros(4, np.int64)
    rc[1] = _MASK32
    rc[3] = 1
    ctxs = np.zeros(4, np.int64)
    for pos in range(n):
        s = hist[pos]
        _contexts(hist, pos, keys, ids, state, ctxs)
        coded = False
        for k in range(3, -1, -1):
            ctx = ctxs[k]
            if ctx < 0 or total[ctx] == 0:
                continue
            tot = 2 * total[ctx]
            cum = 0
            node = head[ctx]
            while node != -1:
                if sym[node] == s:
                    break
                cum += 2 * cnt[node] - 1
                node = nxt[node]
            if node != -1:
                out = _encode(rc, cum, 2 * cnt[node] - 1, tot, out, n_out)
                coded = True
                break
            out = _encode(rc, tot - distinct[ctx], distinct[ctx], tot, out, n_out)
        if not coded:
            out = _encode(rc, s, 1, 256, out, n_out)
        for k in range(4):
            if ctxs[k] >= 0:
                _update(ctxs[k], s, head, tail, total, distinct, sym, cnt, nxt, state)
    for _ in range(5):
        out = _shift_low(rc, out, n_out)
    return out[: n_out[0]]


@njit(cache=True)
def _next_byte(data, pos):
    # pos[0] = read position, pos[1] = bytes requested past the end
    if pos[0] < data.shape[0]:
        b = data[pos[0]]
        pos[0] += 1
        return np.int64(b)
    pos[1] += 1
    return np.int64(0)


@njit(cache=True)
def _ppm_decode(data, n):
    head, tail, total, distinct, sym, cnt, nxt, keys, ids, state = _new_model(n)
    hist = np.zeros(n, np.int64)
    pos = np.zeros(2, np.int64)
    code = np.int64(0)
    rng = np.int64(_MASK32)
    for _ in range(5):
        code = ((code << 8) | _next_byte(data, pos)) & _MASK32
    ctxs = np.zeros(4, np.int64)
    for i in range(n):
        _contexts(hist, i, keys, ids, state, ctxs)
        s = -1
        for k in range(3, -1, -1):
            ctx = ctxs[k]
            if ctx < 0 or total[ctx] == 0:
                continue
            tot = 2 * total[ctx]
            r = rng // tot
            v = code // r
            if v >= tot:
                return hist, False
            cum = 0
            node = head[ctx]
            while node != -1:
                f = 2 * cnt[node] - 1
                if v < cum + f:
                    break
                cum += f
                node = nxt[node]
            if node != -1:
                s = sym[node]
                code -= cum * r
                rng = (2 * cnt[node] - 1) * r
            else:
                code -= (tot - distinct[ctx]) * r
                rng = distinct[ctx] * r
            while rng < _TOP:
                code = ((code << 8) | _next_byte(data, pos)) & _MASK32
                rng = (rng << 8) & _MASK32
            if s >= 0:
                break
        if s < 0:
            r = rng // 256
            v = code // r
            if v >= 256:
                return hist, False
            s = v
            code -= v * r
            rng = r
            while rng < _TOP:
                code = ((code << 8) | _next_byte(data, pos)) & _MASK32
                rng = (rng << 8) & _MASK32
        hist[i] = s
        for k in range(4):
            if ctxs[k] >= 0:
                _update(ctxs[k], s, head, tail, total, distinct, sym, cnt, nxt, state)
    return hist, pos[1] == 0


def ppm_compress(payload: bytes) -> bytes:
    data = np.frombuffer(bytes(payload), dtype=np.uint8)
    head = bytes([ORDER]) + METHOD + encode_uvarint(len(data))
    if len(data) == 0:
        return head
    return head + _ppm_encode(data).tobytes()


def ppm_decompress(blob: bytes, pos: int = 0) -> bytes:
    """Inverse of :func:`ppm_compress`; ``blob[pos:]`` must be exactly one blob."""
    blob = bytes(blob)
    if len(blob) < pos + 3:
        raise CodecError("truncated PPM header")
    if blob[pos] != ORDER or blob[pos + 1:pos + 2] != METHOD:
        raise CodecError(f"unsupported PPM parameters {blob[pos:pos + 2]!r}")
    n, body = decode_uvarint(blob, pos + 2)
    if n == 0:
        if body != len(blob):
            raise CodecError("trailing bytes after empty PPM blob")
        return b""
    data = np.frombuffer(blob, dtype=np.uint8)[body:]
    if len(data) < 5:
        raise CodecError("truncated PPM body")
    out, ok = _ppm_decode(data, n)
    if not ok:
        raise CodecError("corrupt or truncated PPM body")
    return out.astype(np.uint8).tobytes()
