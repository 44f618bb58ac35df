"""Reading and writing grayscale images (PGM required, PNG optional)."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .image_pipeline import GrayImage


def luma(rgb: np.ndarray) -> np.ndarray:
    """Integer luma: round(0.299 R + 0.587 G + 0.114 B)."""
    rgb = np.asarray(rgb, dtype=np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8)


def load_image(path) -> GrayImage:
    with Image.open(path) as im:
        if im.mode == "L":
            arr = np.asarray(im, dtype=np.uint8)
        elif im.mode == "1":
            arr = np.asarray(im.convert("L"), dtype=np.uint8)
        elif im.mode in ("I;16", "I;16B", "I"):
            raise ValueError(f"{path}: only 8-bit images are supported")
        else:
            arr = luma(np.asarray(im.convert("RGB")))
    return GrayImage.from_array(arr)


def save_image(img: GrayImage, path) -> None:
    path = Path(path)
    fmt = "PPM" if path.suffix.lower() in (".pgm", ".pnm", "") else None
    Image.fromarray(img.to_array(), mode="L").save(path, format=fmt)
