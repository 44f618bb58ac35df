"""Chaotic sequence generators and the artifacts derived from them.

Three maps drive the cipher:

* the logistic map feeds the pixel permutation, the XOR keystream and the
  per-block ShiftRows patterns;
* the Hénon map orders byte values into per-block substitution boxes;
* the logistic-tent hybrid is available as a generator but is not wired into
  the default pipeline.

All arithmetic is plain IEEE-754 double precision evaluated left to right,
so every sequence is bit-reproducible across platforms running CPython.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_R = 3.99
HENON_A = 1.4
HENON_B = 0.3

SEED_STEP = 0.0001
SBOX_SIZE = 256
SBOX_CHUNK = 2 * SBOX_SIZE
SBOX_MAX_ITERATIONS = 10**6
# |x| beyond this means the orbit left the attractor's basin.
HENON_ESCAPE = 1e3
SEED_FLOOR = 1e-9
SEED_FALLBACK = 0.1


class ChaosError(ValueError):
    """Invalid seed/parameter, or a degenerate chaotic orbit."""


@dataclass(frozen=True)
class LogisticState:
    x: float
    r: float = DEFAULT_R

    def __post_init__(self):
        _check_logistic(self.x, self.r)

    def step(self) -> "LogisticState":
        return LogisticState(logistic_step(self.x, self.r), self.r)


@dataclass(frozen=True)
class HenonState:
    x: float
    y: float
    a: float = HENON_A
    b: float = HENON_B


@dataclass(frozen=True)
class SBox:
    """Bijective byte substitution table together with its inverse."""

    forward: tuple[int, ...]
    inverse: tuple[int, ...]

    @classmethod
    def from_forward(cls, forward: Sequence[int]) -> "SBox":
        forward = tuple(int(v) for v in forward)
        if sorted(forward) != list(range(SBOX_SIZE)):
            raise ChaosError("S-box forward table is not a permutation of 0..255")
        inverse = [0] * SBOX_SIZE
        for i, v in enumerate(forward):
            inverse[v] = i
        return cls(forward, tuple(inverse))

    @classmethod
    def identity(cls) -> "SBox":
        return cls.from_forward(range(SBOX_SIZE))


@dataclass(frozen=True)
class ShiftPattern:
    shifts: tuple[int, int, int, int]

    def __post_init__(self):
        if sorted(self.shifts) != [0, 1, 2, 3]:
            raise ChaosError(f"shift pattern {self.shifts} is not a permutation of 0..3")


CLASSIC_SHIFTS = ShiftPattern((0, 1, 2, 3))


def _check_logistic(x: float, r: float) -> None:
    if not 0.0 < r <= 4.0:
        raise ChaosError(f"logistic parameter r={r!r} outside (0, 4]")
    if not 0.0 < x < 1.0:
        raise ChaosError(f"logistic state x={x!r} outside (0, 1)")


def _guarded_step(x: float, r: float) -> float:
    x = r * x * (1.0 - x)
    # 0 and 1 are absorbing; only reachable at r == 4 or through rounding.
    if x <= 0.0 or x >= 1.0:
        return 0.5
    return x


def logistic_step(x: float, r: float = DEFAULT_R) -> float:
    """One logistic iteration ``r*x*(1-x)`` with the absorbing-state guard."""
    _check_logistic(x, r)
    return _guarded_step(x, r)


def logistic_sequence(seed: float, r: float, n: int) -> list[float]:
    """Return ``n`` iterates following ``seed``; the seed itself is not emitted."""
    if n < 1:
        raise ChaosError("logistic_sequence needs n >= 1")
    _check_logistic(seed, r)
    out = [0.0] * n
    x = seed
    for i in range(n):
        x = r * x * (1.0 - x)
        if x <= 0.0 or x >= 1.0:
            x = 0.5
        out[i] = x
    return out


def keystream_bytes(seed: float, r: float, n: int) -> bytes:
    """Byte keystream ``floor(256 * x_i) mod 256`` over the logistic orbit."""
    return bytes(int(256.0 * x) & 0xFF for x in logistic_sequence(seed, r, n))


def permutation_from_sequence(seq: Sequence[float]) -> np.ndarray:
    """Stable argsort: indices that put ``seq`` in ascending order."""
    if len(seq) == 0:
        raise ChaosError("cannot build a permutation from an empty sequence")
    return np.argsort(np.asarray(seq, dtype=np.float64), kind="stable")


def invert_permutation(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm), dtype=perm.dtype)
    return inv


def henon_step(s: HenonState) -> HenonState:
    return HenonState(1.0 - s.a * s.x * s.x + s.y, s.b * s.x, s.a, s.b)


def logistic_tent_step(x: float, mu: float) -> float:
    """Logistic branch below 0.5, tent branch scaled by ``mu`` from 0.5 up."""
    if not 0.0 <= x <= 1.0:
        raise ChaosError(f"logistic-tent state x={x!r} outside [0, 1]")
    if not 0.0 < mu <= 1.0:
        raise ChaosError(f"logistic-tent parameter mu={mu!r} outside (0, 1]")
    if x < 0.5:
        return 4.0 * x * (1.0 - x)
    return mu * (1.0 - abs(2.0 * x - 1.0))


def logistic_tent_sequence(seed: float, mu: float, n: int) -> list[float]:
    if n < 1:
        raise ChaosError("logistic_tent_sequence needs n >= 1")
    out = []
    x = seed
    for _ in range(n):
        x = logistic_tent_step(x, mu)
        out.append(x)
    return out


def generate_sbox(
    x0: float, y0: float, a: float = HENON_A, b: float = HENON_B
) -> tuple[SBox, HenonState]:
    """Build an S-box from the Hénon orbit starting at ``(x0, y0)``.

    Each iterate contributes ``min(floor(256 * (|x| mod 1)), 255)``; the first
    occurrence of every value is kept in order. The map runs in chunks of 512
    iterations until all 256 values have appeared, and the state after the
    last chunk is returned for chaining into the next block.
    """
    if not (math.isfinite(x0) and math.isfinite(y0)):
        raise ChaosError("Hénon seeds must be finite")
    x, y = float(x0), float(y0)
    seen = bytearray(SBOX_SIZE)
    order: list[int] = []
    iterations = 0
    while len(order) < SBOX_SIZE:
        if iterations >= SBOX_MAX_ITERATIONS:
            raise ChaosError(
                f"Hénon orbit from ({x0!r}, {y0!r}) yielded only {len(order)} "
                f"distinct values in {iterations} iterations"
            )
        try:
            for _ in range(SBOX_CHUNK):
                x, y = 1.0 - a * x * x + y, b * x
                v = int((abs(x) % 1.0) * 256.0)
                if v > 255:
                    v = 255
                if not seen[v]:
                    seen[v] = 1
                    order.append(v)
        except ValueError:  # int(nan) once the orbit overflows
            x = math.inf
        iterations += SBOX_CHUNK
        if not abs(x) < HENON_ESCAPE:
            raise ChaosError(f"Hénon orbit from ({x0!r}, {y0!r}) escaped to infinity")
    return SBox.from_forward(order), HenonState(x, y, a, b)


def next_henon_seed(state: HenonState) -> tuple[float, float]:
    """Seed for the following block: the previous block's final orbit point.

    Components whose magnitude collapses below 1e-9 are reset to 0.1 so the
    chain never restarts from the origin.
    """
    x, y = state.x, state.y
    if abs(x) <= SEED_FLOOR:
        x = SEED_FALLBACK
    if abs(y) <= SEED_FLOOR:
        y = SEED_FALLBACK
    return x, y


def sbox_chain(
    x0: float, y0: float, count: int, a: float = HENON_A, b: float = HENON_B
) -> list[SBox]:
    """Per-block S-boxes for ``count`` consecutive blocks."""
    boxes = []
    x, y = x0, y0
    for _ in range(count):
        box, final = generate_sbox(x, y, a, b)
        boxes.append(box)
        x, y = next_henon_seed(final)
    return boxes


def shift_pattern(seed: float, r: float, block_index: int) -> ShiftPattern:
    x = (seed + block_index * SEED_STEP) % 1.0
    if x <= 0.0:
        x = 0.5
    pattern: list[int] = []
    for _ in range(4):
        x = _guarded_step(x, r)
        shift = int(x * 4.0) % 4
        if shift not in pattern:
            pattern.append(shift)
    pattern.extend(v for v in range(4) if v not in pattern)
    return ShiftPattern(tuple(pattern))
