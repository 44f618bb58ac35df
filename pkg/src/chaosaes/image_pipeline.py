"""Whole-image encryption: chaotic preprocessing, per-block modified AES in
CBC mode, post-encryption XOR chaining and the ``MAE1`` container format."""

from __future__ import annotations

import secrets
import struct
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import chaos
from .block_cipher import BLOCK_SIZE, decrypt_block_modified, encrypt_block_modified, expand_key

REFERENCE_IV = bytes([23, 145, 67, 89, 12, 200, 34, 222, 57, 104, 18, 73, 94, 161, 205, 19])
REFERENCE_KEY = bytes([43, 40, 171, 9, 126, 174, 247, 207, 21, 210, 21, 79, 22, 166, 136, 60])

MAGIC = b"MAE1"
VERSION = 1
FLAG_POST_SHUFFLE = 0x01
_HEADER = struct.Struct(">4sBBII16s")
HEADER_SIZE = _HEADER.size


class ContainerError(ValueError):
    """Malformed, truncated or inconsistent cipher container."""


@dataclass(frozen=True)
class GrayImage:
    width: int
    height: int
    pixels: bytes = field(repr=False)

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ValueError("image dimensions must be non-negative")
        object.__setattr__(self, "pixels", bytes(self.pixels))
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"pixel buffer holds {len(self.pixels)} bytes, "
                f"expected {self.width}x{self.height}"
            )

    @classmethod
    def from_array(cls, arr) -> "GrayImage":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("grayscale image array must be 2-D")
        if arr.dtype != np.uint8:
            if arr.min(initial=0) < 0 or arr.max(initial=0) > 255:
                raise ValueError("pixel values must lie in 0..255")
            arr = arr.astype(np.uint8)
        h, w = arr.shape
        return cls(w, h, np.ascontiguousarray(arr).tobytes())

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.height, self.width).copy()

    def __array__(self, dtype=None, copy=None):
        arr = self.to_array()
        return arr if dtype is None else arr.astype(dtype)


@dataclass(frozen=True)
class ChaoticParams:
    """Every seed and map parameter that fixes an encryption session."""

    r: float = chaos.DEFAULT_R
    mask_seed: float = 0.5
    perm_seed: float = 0.75
    shift_seed: float = 0.7
    henon_a: float = chaos.HENON_A
    henon_b: float = chaos.HENON_B
    henon_x0: float = 0.1
    henon_y0: float = 0.1
    shuffle_seed: float = 0.37

    def __post_init__(self):
        if not 0.0 < self.r <= 4.0:
            raise chaos.ChaosError(f"r={self.r!r} outside (0, 4]")
        for name in ("mask_seed", "perm_seed", "shift_seed", "shuffle_seed", "henon_x0", "henon_y0"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise chaos.ChaosError(f"{name}={v!r} outside (0, 1)")


@dataclass(frozen=True)
class CipherImage:
    iv: bytes
    width: int
    height: int
    flags: int
    ciphertext: bytes = field(repr=False)

    def __post_init__(self):
        if len(self.iv) != BLOCK_SIZE:
            raise ContainerError("IV must be 16 bytes")
        if len(self.ciphertext) % BLOCK_SIZE:
            raise ContainerError("ciphertext length is not a multiple of 16")
        if len(self.ciphertext) != padded_length(self.width * self.height):
            raise ContainerError(
                f"ciphertext holds {len(self.ciphertext)} bytes but a "
                f"{self.width}x{self.height} image pads to {padded_length(self.width * self.height)}"
            )

    @property
    def post_shuffle(self) -> bool:
        return bool(self.flags & FLAG_POST_SHUFFLE)

    def as_image(self) -> GrayImage:
        """The ciphertext viewed as a ``width x height`` image (padding dropped)."""
        return GrayImage(self.width, self.height, self.ciphertext[: self.width * self.height])

    def with_ciphertext(self, data: bytes) -> "CipherImage":
        return CipherImage(self.iv, self.width, self.height, self.flags, bytes(data))


def padded_length(n: int) -> int:
    return -(-n // BLOCK_SIZE) * BLOCK_SIZE


def pad_to_block(data: bytes) -> bytes:
    """Zero-fill up to the next multiple of 16 (no-op when already aligned)."""
    return bytes(data) + bytes(padded_length(len(data)) - len(data))


def mask_with_feedback(data: bytes, keystream: bytes) -> bytes:
    if len(data) != len(keystream):
        raise ValueError("data and keystream lengths differ")
    if not data:
        return b""
    p = np.frombuffer(data, dtype=np.uint8)
    k = np.frombuffer(keystream, dtype=np.uint8)
    # M[i] = P[i] ^ K[i] ^ M[i-1] is a running XOR of P ^ K.
    return np.bitwise_xor.accumulate(p ^ k).tobytes()


def unmask_with_feedback(masked: bytes, keystream: bytes) -> bytes:
    if len(masked) != len(keystream):
        raise ValueError("data and keystream lengths differ")
    if not masked:
        return b""
    m = np.frombuffer(masked, dtype=np.uint8)
    k = np.frombuffer(keystream, dtype=np.uint8)
    prev = np.concatenate(([0], m[:-1])).astype(np.uint8)
    return (m ^ k ^ prev).tobytes()


def permute(data: bytes, perm) -> bytes:
    """``out[i] = data[perm[i]]``."""
    perm = np.asarray(perm)
    if len(perm) != len(data):
        raise ValueError("permutation and data lengths differ")
    return np.frombuffer(bytes(data), dtype=np.uint8)[perm].tobytes()


def unpermute(data: bytes, perm) -> bytes:
    perm = np.asarray(perm)
    if len(perm) != len(data):
        raise ValueError("permutation and data lengths differ")
    out = np.empty(len(perm), dtype=np.uint8)
    out[perm] = np.frombuffer(bytes(data), dtype=np.uint8)
    return out.tobytes()


def post_chain(data: bytes) -> bytes:
    """C'[0] = C[0]; C'[i] = C[i] ^ C'[i-1] over 16-byte blocks."""
    if not data:
        return b""
    blocks = np.frombuffer(data, dtype=np.uint8).reshape(-1, BLOCK_SIZE)
    return np.bitwise_xor.accumulate(blocks, axis=0).tobytes()


def undo_post_chain(data: bytes) -> bytes:
    if not data:
        return b""
    blocks = np.frombuffer(data, dtype=np.uint8).reshape(-1, BLOCK_SIZE)
    out = blocks.copy()
    out[1:] ^= blocks[:-1]
    return out.tobytes()


@lru_cache(maxsize=8)
def _permutation(seed: float, r: float, n: int) -> np.ndarray:
    perm = chaos.permutation_from_sequence(chaos.logistic_sequence(seed, r, n))
    perm.setflags(write=False)
    return perm


@lru_cache(maxsize=8)
def _keystream(seed: float, r: float, n: int) -> bytes:
    return chaos.keystream_bytes(seed, r, n)


@lru_cache(maxsize=4)
def _sboxes(x0: float, y0: float, a: float, b: float, count: int) -> tuple[chaos.SBox, ...]:
    return tuple(chaos.sbox_chain(x0, y0, count, a, b))


@lru_cache(maxsize=8)
def _patterns(seed: float, r: float, count: int) -> tuple[chaos.ShiftPattern, ...]:
    return tuple(chaos.shift_pattern(seed, r, i) for i in range(count))


def _block_schedule(params: ChaoticParams, nblocks: int):
    boxes = _sboxes(params.henon_x0, params.henon_y0, params.henon_a, params.henon_b, nblocks)
    return boxes, _patterns(params.shift_seed, params.r, nblocks)


def _check_key(key: bytes) -> bytes:
    key = bytes(key)
    if len(key) != BLOCK_SIZE:
        raise ValueError(f"key must be 16 bytes, got {len(key)}")
    return key


def encrypt_image(
    img: GrayImage,
    key: bytes,
    iv: bytes | None = None,
    params: ChaoticParams | None = None,
    post_shuffle: bool = False,
) -> CipherImage:
    params = params or ChaoticParams()
    key = _check_key(key)
    iv = secrets.token_bytes(BLOCK_SIZE) if iv is None else bytes(iv)
    if len(iv) != BLOCK_SIZE:
        raise ValueError("IV must be 16 bytes")
    if img.width == 0 or img.height == 0:
        raise ValueError("cannot encrypt a zero-sized image")

    data = pad_to_block(img.pixels)
    n = len(data)
    data = permute(data, _permutation(params.perm_seed, params.r, n))
    data = mask_with_feedback(data, _keystream(params.mask_seed, params.r, n))

    nblocks = n // BLOCK_SIZE
    boxes, patterns = _block_schedule(params, nblocks)
    rks = expand_key(key, boxes[0])
    out = bytearray(n)
    prev = iv
    for i in range(nblocks):
        lo = i * BLOCK_SIZE
        block = bytes(a ^ b for a, b in zip(data[lo : lo + BLOCK_SIZE], prev))
        prev = encrypt_block_modified(block, rks, boxes[i], patterns[i])
        out[lo : lo + BLOCK_SIZE] = prev

    cipher = post_chain(bytes(out))
    flags = 0
    if post_shuffle:
        cipher = permute(cipher, _permutation(params.shuffle_seed, params.r, n))
        flags |= FLAG_POST_SHUFFLE
    return CipherImage(iv, img.width, img.height, flags, cipher)


def decrypt_image(c: CipherImage, key: bytes, params: ChaoticParams | None = None) -> GrayImage:
    params = params or ChaoticParams()
    key = _check_key(key)
    n = len(c.ciphertext)
    if n != padded_length(c.width * c.height) or n == 0:
        raise ContainerError("ciphertext length does not match the stored dimensions")

    data = c.ciphertext
    if c.post_shuffle:
        data = unpermute(data, _permutation(params.shuffle_seed, params.r, n))
    data = undo_post_chain(data)

    nblocks = n // BLOCK_SIZE
    boxes, patterns = _block_schedule(params, nblocks)
    rks = expand_key(key, boxes[0])
    out = bytearray(n)
    prev = c.iv
    for i in range(nblocks):
        lo = i * BLOCK_SIZE
        block = data[lo : lo + BLOCK_SIZE]
        plain = decrypt_block_modified(block, rks, boxes[i], patterns[i])
        out[lo : lo + BLOCK_SIZE] = bytes(a ^ b for a, b in zip(plain, prev))
        prev = block

    data = unmask_with_feedback(bytes(out), _keystream(params.mask_seed, params.r, n))
    data = unpermute(data, _permutation(params.perm_seed, params.r, n))
    return GrayImage(c.width, c.height, data[: c.width * c.height])


def write_container(c: CipherImage) -> bytes:
    return _HEADER.pack(MAGIC, VERSION, c.flags, c.width, c.height, c.iv) + c.ciphertext


def read_container(blob: bytes) -> CipherImage:
    blob = bytes(blob)
    if len(blob) < HEADER_SIZE:
        raise ContainerError("container shorter than its header")
    magic, version, flags, width, height, iv = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ContainerError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ContainerError(f"unsupported container version {version}")
    if flags & ~FLAG_POST_SHUFFLE:
        raise ContainerError(f"unknown flag bits 0x{flags:02x}")
    body = blob[HEADER_SIZE:]
    expected = padded_length(width * height)
    if len(body) != expected:
        raise ContainerError(f"ciphertext is {len(body)} bytes, header implies {expected}")
    return CipherImage(iv, width, height, flags, body)
