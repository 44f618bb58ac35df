"""Encryption experiments: differential, avalanche, key sensitivity, data loss."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..image_pipeline import (
    REFERENCE_IV,
    REFERENCE_KEY,
    ChaoticParams,
    CipherImage,
    GrayImage,
    decrypt_image,
    encrypt_image,
)
from . import metrics
from .attacks import attack_data_loss
from .metrics import _rng

# Reference values reported for the benchmark photographs.
PUBLISHED_ENTROPY = {
    "Lena": 7.9976, "Peppers": 7.9973, "Brain": 7.9973, "FingerPrints": 7.9975,
    "Lung": 7.9972, "Surveillance": 7.9975, "Monalisa": 7.9968, "Plane": 7.9976,
    "Cameraman": 7.9971, "Baboon": 7.9968,
}
PUBLISHED_DIFFERENTIAL = {  # (NPCR %, UACI %)
    "Lena": (99.62, 49.91), "Peppers": (99.62, 49.94), "Brain": (99.59, 49.87),
    "FingerPrints": (99.60, 49.96), "Lung": (99.07, 49.73), "Surveillance": (99.62, 50.01),
    "Monalisa": (99.67, 50.08), "Plane": (99.64, 50.14), "Cameraman": (99.62, 49.91),
    "Baboon": (99.58, 49.98),
}
PUBLISHED_KEY_SENSITIVITY_SSIM = {
    "Lena": 0.01105, "Peppers": 0.00856, "Brain": 0.01008, "FingerPrints": 0.00278,
    "Lung": 0.00870, "Surveillance": 0.00697, "Monalisa": 0.00650, "Plane": 0.01065,
    "Cameraman": 0.00904, "Baboon": 0.01054,
}
PUBLISHED_DATA_LOSS_SSIM = {  # mean, sd over 10 runs
    "Lena": (0.1024, 0.0013), "Peppers": (0.1081, 0.0049), "Brain": (0.1359, 0.0095),
    "FingerPrints": (0.0848, 0.0045), "Lung": (0.0375, 0.0019), "Surveillance": (0.1807, 0.0090),
    "Monalisa": (0.0499, 0.0040), "Plane": (0.0675, 0.0049), "Cameraman": (0.0925, 0.0042),
    "Baboon": (0.1113, 0.0080),
}
PUBLISHED_HOMOGENEITY = 0.3894
PUBLISHED_ENERGY = 0.0039

# Which benchmark photograph each synthetic corpus image stands in for.
STAND_INS = {
    "scene": "Lena",
    "blobs": "Brain",
    "rings": "FingerPrints",
    "texture": "Baboon",
}


def perturb_first_pixel(img: GrayImage) -> GrayImage:
    """Plaintext twin with pixel (0, 0) incremented modulo 256."""
    px = bytearray(img.pixels)
    px[0] = (px[0] + 1) % 256
    return GrayImage(img.width, img.height, bytes(px))


@dataclass
class Differential:
    npcr: float
    uaci: float


def differential(
    img: GrayImage,
    key: bytes = REFERENCE_KEY,
    iv: bytes = REFERENCE_IV,
    params: ChaoticParams | None = None,
    post_shuffle: bool = False,
) -> Differential:
    """NPCR/UACI between the cipher images of ``img`` and its one-pixel twin."""
    c1 = encrypt_image(img, key, iv, params, post_shuffle).as_image()
    c2 = encrypt_image(perturb_first_pixel(img), key, iv, params, post_shuffle).as_image()
    return Differential(metrics.npcr(c1, c2), metrics.uaci(c1, c2))


def flip_key_bit(key: bytes, position: int) -> bytes:
    if not 0 <= position < 8 * len(key):
        raise ValueError("bit position out of range")
    k = bytearray(key)
    k[position // 8] ^= 0x80 >> (position % 8)
    return bytes(k)


def bit_difference(a: bytes, b: bytes) -> float:
    """Percentage of differing bits between equal-length byte strings."""
    if len(a) != len(b):
        raise ValueError("length mismatch")
    x = np.frombuffer(a, dtype=np.uint8) ^ np.frombuffer(b, dtype=np.uint8)
    return float(np.unpackbits(x).sum() / (8 * len(a)) * 100.0)


def avalanche(
    img: GrayImage,
    key: bytes,
    key_bit: int | None,
    iv: bytes = REFERENCE_IV,
    params: ChaoticParams | None = None,
) -> float:
    """Ciphertext bit difference (%) after flipping ``key_bit`` of the key.

    ``key_bit=None`` compares the key against itself (0 % by construction).
    """
    base = encrypt_image(img, key, iv, params).ciphertext
    other_key = key if key_bit is None else flip_key_bit(key, key_bit)
    other = encrypt_image(img, other_key, iv, params).ciphertext
    return bit_difference(base, other)


def avalanche_positions(count: int = 20) -> list[int]:
    """Five key bytes, four bits each: the fixed avalanche sampling grid."""
    byte_slots = np.linspace(0, 15, 5).round().astype(int)
    bits = (0, 2, 5, 7)
    out = [int(b) * 8 + bit for b in byte_slots for bit in bits]
    return out[:count]


def key_sensitivity(
    img: GrayImage,
    key: bytes = REFERENCE_KEY,
    iv: bytes = REFERENCE_IV,
    params: ChaoticParams | None = None,
    byte_index: int = 0,
    cipher: CipherImage | None = None,
) -> float:
    """SSIM between ``img`` and its decryption under a one-byte-changed key."""
    c = cipher if cipher is not None else encrypt_image(img, key, iv, params)
    wrong = bytearray(key)
    wrong[byte_index] = (wrong[byte_index] + 1) % 256
    return metrics.ssim(img, decrypt_image(c, bytes(wrong), params))


@dataclass
class DataLossResult:
    ssim_mean: float
    ssim_sd: float
    psnr_mean: float
    psnr_sd: float


def data_loss_experiment(
    img: GrayImage,
    key: bytes = REFERENCE_KEY,
    iv: bytes = REFERENCE_IV,
    params: ChaoticParams | None = None,
    fraction: float = 0.2,
    block_size: int = 16,
    iterations: int = 10,
    rng=0,
    cipher: CipherImage | None = None,
) -> DataLossResult:
    gen = _rng(rng)
    c = cipher if cipher is not None else encrypt_image(img, key, iv, params)
    ss, ps = [], []
    for _ in range(iterations):
        dec = decrypt_image(attack_data_loss(c, fraction, block_size, gen), key, params)
        ss.append(metrics.ssim(img, dec))
        ps.append(metrics.psnr(img, dec))
    return DataLossResult(float(np.mean(ss)), float(np.std(ss)), float(np.mean(ps)), float(np.std(ps)))
