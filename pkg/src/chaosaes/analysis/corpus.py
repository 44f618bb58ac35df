"""Synthetic 256x256 test images.

No copyrighted benchmark scans are shipped; these generators stand in for
them. ``scene``, ``blobs``, ``rings`` and ``texture`` imitate the smooth,
soft-tissue, ridge and high-frequency character of the usual photographs.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from ..image_pipeline import GrayImage

SIZE = 256


def _grid(size: int):
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    return y, x


def _to_u8(v: np.ndarray) -> np.ndarray:
    v = v - v.min()
    if v.max() > 0:
        v = v / v.max()
    return np.round(v * 255).astype(np.uint8)


def gradient(size: int = SIZE) -> np.ndarray:
    _, x = _grid(size)
    return np.round(x * 255 / (size - 1)).astype(np.uint8)


def radial(size: int = SIZE) -> np.ndarray:
    y, x = _grid(size)
    c = (size - 1) / 2
    return _to_u8(-np.hypot(y - c, x - c))


def checkerboard(size: int = SIZE, cell: int = 32) -> np.ndarray:
    y, x = _grid(size)
    return np.where(((y // cell) + (x // cell)) % 2 == 0, 255, 0).astype(np.uint8)


def noise(size: int = SIZE, seed: int = 1) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 256, (size, size), dtype=np.uint8)


def constant(size: int = SIZE, value: int = 128) -> np.ndarray:
    return np.full((size, size), value, dtype=np.uint8)


def stripes(size: int = SIZE, period: int = 24) -> np.ndarray:
    y, x = _grid(size)
    return _to_u8(np.sin(2 * np.pi * (x + 0.5 * y) / period))


def scene(size: int = SIZE, seed: int = 2) -> np.ndarray:
    """Piecewise-smooth scene: shaded background, a few discs and a bar."""
    rng = np.random.default_rng(seed)
    y, x = _grid(size)
    v = 60 + 80 * (y / size) + 20 * np.sin(x / 23.0)
    for _ in range(5):
        cy, cx = rng.uniform(0.15, 0.85, 2) * size
        rad = rng.uniform(0.08, 0.2) * size
        level = rng.uniform(0, 255)
        v = np.where(np.hypot(y - cy, x - cx) < rad, level + 0.3 * (x - cx), v)
    v[int(0.7 * size) : int(0.78 * size), int(0.1 * size) : int(0.9 * size)] = 230
    v = gaussian_filter(v, 1.2) + rng.normal(0, 3, v.shape)
    return np.clip(np.round(v), 0, 255).astype(np.uint8)


def blobs(size: int = SIZE, seed: int = 3) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return _to_u8(gaussian_filter(rng.normal(size=(size, size)), 8.0))


def rings(size: int = SIZE) -> np.ndarray:
    """Fingerprint-like ridge pattern."""
    y, x = _grid(size)
    c = size / 2
    r = np.hypot(y - c, (x - c) * 0.8)
    theta = np.arctan2(y - c, x - c)
    return _to_u8(np.sin(r / 2.2 + 0.8 * np.sin(3 * theta)))


def texture(size: int = SIZE, seed: int = 4) -> np.ndarray:
    """Fur-like high-frequency texture over a smooth base."""
    rng = np.random.default_rng(seed)
    base = gaussian_filter(rng.normal(size=(size, size)), 12.0)
    fine = gaussian_filter(rng.normal(size=(size, size)), 0.8)
    return _to_u8(base / base.std() + 0.9 * fine / fine.std())


GENERATORS = {
    "gradient": gradient,
    "radial": radial,
    "checkerboard": checkerboard,
    "noise": noise,
    "constant": constant,
    "stripes": stripes,
    "scene": scene,
    "blobs": blobs,
    "rings": rings,
    "texture": texture,
}


def corpus_images(size: int = SIZE) -> dict[str, GrayImage]:
    return {name: GrayImage.from_array(fn(size)) for name, fn in GENERATORS.items()}

