"""Greedy LZ77 coder with a fixed, fully specified token format.

Container layout::

    header   4 bytes, big-endian uint32: length of the original data
    body     MSB-first bit stream of tokens, zero-padded to a byte boundary

Tokens::

    0 bbbbbbbb                      literal byte (9 bits)
    1 ooooooooooooooo llllllll      match: offset-1 (15 bits), length-3 (8 bits)

Parsing is greedy. At position ``i`` (when at least 3 bytes remain) the
3-byte hash ``((b0 << 10) ^ (b1 << 5) ^ b2) & 0x7FFF`` selects a chain of
earlier positions, newest first. At most ``MAX_CHAIN`` candidates within
the 32 KiB window are examined; the longest common prefix wins, ties go to
the nearest candidate, and the scan stops early at ``MAX_MATCH``. Matches
may overlap the current position. A match of 3 or more bytes is emitted,
otherwise a literal, and every consumed position is inserted in its chain.
"""
from __future__ import annotations

import numpy as np
from numba import njit

HEADER_SIZE = 4
WINDOW = 1 << 15
MIN_MATCH = 3
MAX_MATCH = MIN_MATCH + 255
MAX_CHAIN = 4096
HASH_BITS = 15


@njit(cache=True, nogil=True)
def _hash3(data, i):
    return ((np.int64(data[i]) << 10) ^ (np.int64(data[i + 1]) << 5) ^ np.int64(data[i + 2])) & ((1 << 15) - 1)


@njit(cache=True, nogil=True)
def _encode(data):
    n = data.shape[0]
    head = np.full(1 << 15, -1, dtype=np.int64)
    prev = np.full(max(n, 1), -1, dtype=np.int64)
    # worst case: every byte a 9-bit literal
    out = np.zeros(HEADER_SIZE + (9 * n + 7) // 8 + 1, dtype=np.uint8)
    out[0] = (n >> 24) & 0xFF
    out[1] = (n >> 16) & 0xFF
    out[2] = (n >> 8) & 0xFF
    out[3] = n & 0xFF
    bitpos = HEADER_SIZE * 8

    i = 0
    while i < n:
        best_len = 0
        best_off = 0
        if i + MIN_MATCH <= n:
            limit = min(MAX_MATCH, n - i)
            cand = head[_hash3(data, i)]
            steps = 0
            while cand >= 0 and i - cand <= WINDOW and steps < MAX_CHAIN:
                k = 0
                while k < limit and data[cand + k] == data[i + k]:
                    k += 1
                if k > best_len:
                    best_len = k
                    best_off = i - cand
                    if k == limit:
                        break
                cand = prev[cand]
                steps += 1
        if best_len >= MIN_MATCH:
            value = (1 << 23) | ((best_off - 1) << 8) | (best_len - MIN_MATCH)
            nbits = 24
            consumed = best_len
        else:
            value = np.int64(data[i])
            nbits = 9
            consumed = 1
        for b in range(nbits - 1, -1, -1):
            if (value >> b) & 1:
                out[bitpos >> 3] |= np.uint8(0x80 >> (bitpos & 7))
            bitpos += 1
        for j in range(i, i + consumed):
            if j + MIN_MATCH <= n:
                h = _hash3(data, j)
                prev[j] = head[h]
                head[h] = j
        i += consumed
    return out[: (bitpos + 7) >> 3]


@njit(cache=True, nogil=True)
def _decode(payload):
    n = (np.int64(payload[0]) << 24) | (np.int64(payload[1]) << 16) | (np.int64(payload[2]) << 8) | np.int64(payload[3])
    out = np.zeros(n, dtype=np.uint8)
    total_bits = payload.shape[0] * 8
    bitpos = HEADER_SIZE * 8
    o = 0
    while o < n:
        if bitpos + 9 > total_bits:
            return out[:o], False
        flag = (payload[bitpos >> 3] >> (7 - (bitpos & 7))) & 1
        bitpos += 1
        width = 23 if flag else 8
        if bitpos + width > total_bits:
            return out[:o], False
        value = 0
        for _ in range(width):
            value = (value << 1) | ((payload[bitpos >> 3] >> (7 - (bitpos & 7))) & 1)
            bitpos += 1
        if flag == 0:
            out[o] = value
            o += 1
        else:
            off = (value >> 8) + 1
            length = (value & 0xFF) + MIN_MATCH
            if off > o or o + length > n:
                return out[:o], False
            for k in range(length):
                out[o + k] = out[o + k - off]
            o += length
    return out, True


def compress(data: bytes) -> bytes:
    return _encode(np.frombuffer(bytes(data), dtype=np.uint8)).tobytes()


def decompress(payload: bytes) -> bytes:
    if len(payload) < HEADER_SIZE:
        raise ValueError("payload shorter than the header")
    out, ok = _decode(np.frombuffer(bytes(payload), dtype=np.uint8))
    if not ok:
        raise ValueError("corrupt LZ77 payload")
    return out.tobytes()
