"""AES-128 round machinery with pluggable S-box and ShiftRows pattern.

The state is a flat list of 16 ints in the FIPS-197 column-major order:
byte ``i`` sits at row ``i % 4``, column ``i // 4``. With the standard
S-box and the classic (0, 1, 2, 3) shift pattern the transform is plain
AES-128, which is what :func:`aes128_ecb_classic` uses to wrap session keys.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .chaos import CLASSIC_SHIFTS, SBox, ShiftPattern

BLOCK_SIZE = 16
ROUNDS = 10
AES_POLY = 0x11B

RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


class PaddingError(ValueError):
    """PKCS#7 padding did not verify; almost always a wrong key."""


def xtime(a: int) -> int:
    a <<= 1
    if a & 0x100:
        a ^= AES_POLY
    return a


def gf_mul(a: int, b: int) -> int:
    """Multiply in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a = xtime(a)
        b >>= 1
    return out


MUL2 = tuple(gf_mul(i, 2) for i in range(256))
MUL3 = tuple(gf_mul(i, 3) for i in range(256))
MUL9 = tuple(gf_mul(i, 9) for i in range(256))
MUL11 = tuple(gf_mul(i, 11) for i in range(256))
MUL13 = tuple(gf_mul(i, 13) for i in range(256))
MUL14 = tuple(gf_mul(i, 14) for i in range(256))


def _gf_inverse(a: int) -> int:
    if a == 0:
        return 0
    # a^254 = a^-1 in GF(2^8)
    result, base, e = 1, a, 254
    while e:
        if e & 1:
            result = gf_mul(result, base)
        base = gf_mul(base, base)
        e >>= 1
    return result


def _standard_sbox_table() -> list[int]:
    table = []
    for a in range(256):
        inv = _gf_inverse(a)
        s = inv
        for k in range(1, 5):
            s ^= ((inv << k) | (inv >> (8 - k))) & 0xFF
        table.append(s ^ 0x63)
    return table


STANDARD_SBOX = SBox.from_forward(_standard_sbox_table())


@lru_cache(maxsize=None)
def _shift_index(shifts: tuple[int, ...]) -> tuple[int, ...]:
    # new[r + 4c] = old[r + 4((c + s_r) % 4)]
    return tuple(r + 4 * ((c + shifts[r]) % 4) for c in range(4) for r in range(4))


@lru_cache(maxsize=None)
def _unshift_index(shifts: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(r + 4 * ((c - shifts[r]) % 4) for c in range(4) for r in range(4))


def sub_bytes(state: Sequence[int], sbox: SBox) -> list[int]:
    f = sbox.forward
    return [f[b] for b in state]


def inv_sub_bytes(state: Sequence[int], sbox: SBox) -> list[int]:
    f = sbox.inverse
    return [f[b] for b in state]


def shift_rows_dynamic(state: Sequence[int], pattern: ShiftPattern) -> list[int]:
    """Cyclically left-shift row ``r`` by ``pattern.shifts[r]``."""
    return [state[i] for i in _shift_index(pattern.shifts)]


def inv_shift_rows_dynamic(state: Sequence[int], pattern: ShiftPattern) -> list[int]:
    return [state[i] for i in _unshift_index(pattern.shifts)]


def mix_columns(state: Sequence[int]) -> list[int]:
    out = [0] * 16
    m2, m3 = MUL2, MUL3
    for c in range(0, 16, 4):
        a0, a1, a2, a3 = state[c], state[c + 1], state[c + 2], state[c + 3]
        out[c] = m2[a0] ^ m3[a1] ^ a2 ^ a3
        out[c + 1] = a0 ^ m2[a1] ^ m3[a2] ^ a3
        out[c + 2] = a0 ^ a1 ^ m2[a2] ^ m3[a3]
        out[c + 3] = m3[a0] ^ a1 ^ a2 ^ m2[a3]
    return out


def inv_mix_columns(state: Sequence[int]) -> list[int]:
    out = [0] * 16
    m9, m11, m13, m14 = MUL9, MUL11, MUL13, MUL14
    for c in range(0, 16, 4):
        a0, a1, a2, a3 = state[c], state[c + 1], state[c + 2], state[c + 3]
        out[c] = m14[a0] ^ m11[a1] ^ m13[a2] ^ m9[a3]
        out[c + 1] = m9[a0] ^ m14[a1] ^ m11[a2] ^ m13[a3]
        out[c + 2] = m13[a0] ^ m9[a1] ^ m14[a2] ^ m11[a3]
        out[c + 3] = m11[a0] ^ m13[a1] ^ m9[a2] ^ m14[a3]
    return out


def add_round_key(state: Sequence[int], rk: Sequence[int]) -> list[int]:
    return [a ^ b for a, b in zip(state, rk)]


def expand_key(key: bytes, sbox: SBox) -> list[list[int]]:
    """AES-128 key schedule with SubWord routed through ``sbox``.

    Returns 11 round keys of 16 byte values each (the 44-word array ``W``
    regrouped per round).
    """
    key = bytes(key)
    if len(key) != BLOCK_SIZE:
        raise ValueError(f"AES-128 key must be 16 bytes, got {len(key)}")
    f = sbox.forward
    words = [list(key[4 * i : 4 * i + 4]) for i in range(4)]
    for i in range(4, 4 * (ROUNDS + 1)):
        temp = list(words[i - 1])
        if i % 4 == 0:
            temp = temp[1:] + temp[:1]
            temp = [f[b] for b in temp]
            temp[0] ^= RCON[i // 4 - 1]
        words.append([a ^ b for a, b in zip(words[i - 4], temp)])
    return [sum(words[4 * r : 4 * r + 4], []) for r in range(ROUNDS + 1)]


def encrypt_block_modified(
    block: bytes, rks: Sequence[Sequence[int]], sbox: SBox, pattern: ShiftPattern
) -> bytes:
    f = sbox.forward
    idx = _shift_index(pattern.shifts)
    s = [a ^ b for a, b in zip(block, rks[0])]
    for rnd in range(1, ROUNDS):
        s = mix_columns([f[s[i]] for i in idx])
        s = [a ^ b for a, b in zip(s, rks[rnd])]
    return bytes(f[s[i]] ^ k for i, k in zip(idx, rks[ROUNDS]))


def decrypt_block_modified(
    block: bytes, rks: Sequence[Sequence[int]], sbox: SBox, pattern: ShiftPattern
) -> bytes:
    inv = sbox.inverse
    idx = _unshift_index(pattern.shifts)
    s = [a ^ b for a, b in zip(block, rks[ROUNDS])]
    s = [inv[s[i]] for i in idx]
    for rnd in range(ROUNDS - 1, 0, -1):
        s = inv_mix_columns([a ^ b for a, b in zip(s, rks[rnd])])
        s = [inv[s[i]] for i in idx]
    return bytes(a ^ b for a, b in zip(s, rks[0]))


def pkcs7_pad(data: bytes, size: int = BLOCK_SIZE) -> bytes:
    n = size - len(data) % size
    return data + bytes([n]) * n


def pkcs7_unpad(data: bytes, size: int = BLOCK_SIZE) -> bytes:
    if not data or len(data) % size:
        raise PaddingError("padded data length is not a positive multiple of the block size")
    n = data[-1]
    if not 1 <= n <= size or data[-n:] != bytes([n]) * n:
        raise PaddingError("invalid PKCS#7 padding")
    return data[:-n]


def aes128_ecb_classic(data: bytes, key: bytes, direction: str = "encrypt") -> bytes:
    """Standard AES-128 in ECB mode with PKCS#7 padding."""
    rks = expand_key(key, STANDARD_SBOX)
    if direction == "encrypt":
        data = pkcs7_pad(bytes(data))
        return b"".join(
            encrypt_block_modified(data[i : i + 16], rks, STANDARD_SBOX, CLASSIC_SHIFTS)
            for i in range(0, len(data), 16)
        )
    if direction == "decrypt":
        data = bytes(data)
        if not data or len(data) % BLOCK_SIZE:
            raise PaddingError("ciphertext length is not a positive multiple of 16")
        plain = b"".join(
            decrypt_block_modified(data[i : i + 16], rks, STANDARD_SBOX, CLASSIC_SHIFTS)
            for i in range(0, len(data), 16)
        )
        return pkcs7_unpad(plain)
    raise ValueError(f"direction must be 'encrypt' or 'decrypt', not {direction!r}")
