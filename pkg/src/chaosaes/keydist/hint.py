"""Static-key bit flipping and the mod-128 hint message that locates the flip."""

from __future__ import annotations

import itertools
import secrets
import string

KEY_BITS = 128
HINT_MODULUS = 128
HINT_ALPHABET = string.ascii_uppercase
HINT_LENGTHS = (2, 3, 4)


class HintError(ValueError):
    """Hint text is empty, non-ASCII or otherwise unusable."""


def flip_bit(key: bytes, position: int) -> bytes:
    """Toggle bit ``position``; bit 0 is the most significant bit of byte 0."""
    key = bytes(key)
    if not 0 <= position < 8 * len(key):
        raise ValueError(f"bit position {position} outside 0..{8 * len(key) - 1}")
    k = bytearray(key)
    k[position // 8] ^= 0x80 >> (position % 8)
    return bytes(k)


def hint_position(msg: str) -> int:
    if not msg:
        raise HintError("empty hint message")
    if not msg.isascii():
        raise HintError("hint message must be ASCII")
    return sum(map(ord, msg)) % HINT_MODULUS


def make_hint(position: int, rng=None) -> str:
    """Random 2-4 letter uppercase word whose code sum is ``position`` mod 128."""
    if not 0 <= position < HINT_MODULUS:
        raise ValueError(f"bit position {position} outside 0..127")
    rng = rng or secrets.SystemRandom()
    lengths = list(HINT_LENGTHS)
    rng.shuffle(lengths)
    for length in lengths:
        for _ in range(64):
            head = [rng.choice(HINT_ALPHABET) for _ in range(length - 1)]
            need = (position - sum(map(ord, head))) % HINT_MODULUS
            if "A" <= chr(need) <= "Z":
                return "".join(head) + chr(need)
    # Unreachable in practice; exhaustive fallback keeps the function total.
    for length in HINT_LENGTHS:
        for word in itertools.product(HINT_ALPHABET, repeat=length):
            if sum(map(ord, word)) % HINT_MODULUS == position:
                return "".join(word)
    raise HintError(f"no hint exists for position {position}")
