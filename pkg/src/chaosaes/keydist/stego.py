"""Least-significant-bit payload embedding in grayscale images.

Layout, written MSB-first into pixel LSBs in row-major order:
``0x53 0x47`` magic, ``u32`` big-endian payload length, payload bytes.
"""

from __future__ import annotations

import numpy as np

from ..image_pipeline import GrayImage

STEGO_MAGIC = b"\x53\x47"
HEADER_BITS = 48


class StegoError(ValueError):
    """Missing header, bad length, or insufficient capacity."""


def capacity(img: GrayImage) -> int:
    """Largest payload (bytes) that fits after the header."""
    return max(0, (img.width * img.height - HEADER_BITS) // 8)


def embed_lsb(img: GrayImage, payload: bytes) -> GrayImage:
    payload = bytes(payload)
    message = STEGO_MAGIC + len(payload).to_bytes(4, "big") + payload
    bits = np.unpackbits(np.frombuffer(message, dtype=np.uint8))
    pixels = np.frombuffer(img.pixels, dtype=np.uint8).copy()
    if len(bits) > len(pixels):
        raise StegoError(
            f"payload of {len(payload)} bytes needs {len(bits)} pixels, image has {len(pixels)}"
        )
    pixels[: len(bits)] = (pixels[: len(bits)] & 0xFE) | bits
    return GrayImage(img.width, img.height, pixels.tobytes())


def extract_lsb(img: GrayImage) -> bytes:
    pixels = np.frombuffer(img.pixels, dtype=np.uint8)
    if len(pixels) < HEADER_BITS:
        raise StegoError("image too small to hold a stego header")
    header = np.packbits(pixels[:HEADER_BITS] & 1).tobytes()
    if header[:2] != STEGO_MAGIC:
        raise StegoError("no stego header found")
    length = int.from_bytes(header[2:6], "big")
    if HEADER_BITS + 8 * length > len(pixels):
        raise StegoError(f"declared payload length {length} exceeds image capacity")
    body = pixels[HEADER_BITS : HEADER_BITS + 8 * length] & 1
    return np.packbits(body).tobytes()
