"""Ciphertext corruption models and QR-image distortions.

Ciphertext attacks act on the ``height x width`` view of the cipher bytes;
zero padding past ``width * height`` (unaligned sizes only) is left alone.
Every randomized attack takes an explicit seed or ``numpy`` Generator.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from ..image_pipeline import CipherImage, GrayImage
from .metrics import _rng, as_array

DEFAULT_XOR_MASK = 0b00001110


def _cipher_view(c: CipherImage) -> np.ndarray:
    n = c.width * c.height
    return np.frombuffer(c.ciphertext[:n], dtype=np.uint8).reshape(c.height, c.width).copy()


def _rebuild(c: CipherImage, view: np.ndarray) -> CipherImage:
    n = c.width * c.height
    return c.with_ciphertext(view.astype(np.uint8).tobytes() + c.ciphertext[n:])


def attack_crop(c: CipherImage, x: int, y: int, w: int, h: int, mode: str = "occlude") -> CipherImage:
    """Zero a ``w x h`` region at ``(x, y)``.

    ``mode="retain"`` does the opposite: only the region survives and the
    rest of the cipher image is zeroed.
    """
    if w <= 0 or h <= 0 or x < 0 or y < 0 or x + w > c.width or y + h > c.height:
        raise ValueError("crop region outside the cipher image")
    view = _cipher_view(c)
    if mode == "occlude":
        view[y : y + h, x : x + w] = 0
    elif mode == "retain":
        kept = view[y : y + h, x : x + w].copy()
        view[:] = 0
        view[y : y + h, x : x + w] = kept
    else:
        raise ValueError(f"unknown crop mode {mode!r}")
    return _rebuild(c, view)


def attack_data_loss(c: CipherImage, fraction: float, block_size: int = 16, rng=None) -> CipherImage:
    """Zero ``round(fraction * tiles)`` randomly chosen ``block_size`` tiles."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    if block_size <= 0:
        raise ValueError("block_size must be positive")
    view = _cipher_view(c)
    rows, cols = c.height // block_size, c.width // block_size
    tiles = rows * cols
    k = int(round(fraction * tiles))
    if k == 0:
        return c
    for t in _rng(rng).choice(tiles, size=k, replace=False):
        r, q = divmod(int(t), cols)
        view[r * block_size : (r + 1) * block_size, q * block_size : (q + 1) * block_size] = 0
    return _rebuild(c, view)


def salt_pepper(arr, density: float, rng=None) -> np.ndarray:
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    gen = _rng(rng)
    out = as_array(arr).astype(np.uint8).copy()
    hit = gen.random(out.shape) < density
    out[hit] = np.where(gen.random(int(hit.sum())) < 0.5, 0, 255)
    return out


def gaussian_noise(arr, sigma: float, rng=None) -> np.ndarray:
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    a = as_array(arr).astype(np.float64)
    noisy = a + np.round(_rng(rng).normal(0.0, sigma, a.shape))
    return np.clip(noisy, 0, 255).astype(np.uint8)


def gaussian_blur(arr, sigma: float = 1.0, size: int = 5) -> np.ndarray:
    """Blur with a ``size x size`` Gaussian kernel."""
    a = as_array(arr).astype(np.float64)
    radius = (size - 1) // 2
    out = gaussian_filter(a, sigma=sigma, radius=radius, mode="nearest")
    return np.clip(np.round(out), 0, 255).astype(np.uint8)


def attack_salt_pepper(c: CipherImage, density: float, rng=None) -> CipherImage:
    return _rebuild(c, salt_pepper(_cipher_view(c), density, rng))


def attack_gaussian(c: CipherImage, sigma: float, rng=None) -> CipherImage:
    return _rebuild(c, gaussian_noise(_cipher_view(c), sigma, rng))


def attack_xor_mask(c: CipherImage, mask_byte: int = DEFAULT_XOR_MASK) -> CipherImage:
    if not 0 <= mask_byte <= 255:
        raise ValueError("mask must be a byte value")
    return _rebuild(c, _cipher_view(c) ^ np.uint8(mask_byte))


QR_DISTORTIONS = {
    "gaussian_noise_sigma20": lambda a, rng: gaussian_noise(a, 20.0, rng),
    "gaussian_blur_5x5": lambda a, rng: gaussian_blur(a, 1.0, 5),
    "salt_pepper_0.05": lambda a, rng: salt_pepper(a, 0.05, rng),
}


def distort(img: GrayImage, kind: str, rng=None) -> GrayImage:
    try:
        fn = QR_DISTORTIONS[kind]
    except KeyError:
        raise ValueError(f"unknown distortion {kind!r}") from None
    return GrayImage.from_array(fn(img.to_array(), _rng(rng)))
