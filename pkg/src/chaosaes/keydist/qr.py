"""QR codec boundary.

Anything with ``encode(text, ec_level, module_pixel_size, quiet_zone_modules)``
returning a {0, 255} :class:`GrayImage` and ``decode(image) -> text`` can be
plugged into the key-distribution protocol. :class:`OpenCvQrCodec` is the
default implementation.
"""

from __future__ import annotations

from typing import Protocol

import cv2
import numpy as np

from ..image_pipeline import GrayImage

EC_LEVELS = {
    "L": cv2.QRCODE_ENCODER_CORRECT_LEVEL_L,
    "M": cv2.QRCODE_ENCODER_CORRECT_LEVEL_M,
    "Q": cv2.QRCODE_ENCODER_CORRECT_LEVEL_Q,
    "H": cv2.QRCODE_ENCODER_CORRECT_LEVEL_H,
}


class QrError(ValueError):
    """Text could not be encoded, or an image could not be decoded."""


class QrCodec(Protocol):
    def encode(
        self, text: str, ec_level: str = "H", module_pixel_size: int = 8, quiet_zone_modules: int = 4
    ) -> GrayImage: ...

    def decode(self, img: GrayImage) -> str: ...


class OpenCvQrCodec:
    def encode(self, text, ec_level="H", module_pixel_size=8, quiet_zone_modules=4):
        if ec_level not in EC_LEVELS:
            raise QrError(f"error-correction level must be one of {sorted(EC_LEVELS)}")
        if module_pixel_size < 1 or quiet_zone_modules < 0:
            raise QrError("module size must be >= 1 and quiet zone >= 0")
        params = cv2.QRCodeEncoder_Params()
        params.correction_level = EC_LEVELS[ec_level]
        try:
            raw = cv2.QRCodeEncoder.create(params).encode(text)
        except cv2.error as exc:
            raise QrError(f"QR encoding failed: {exc}") from exc
        if raw is None or raw.size == 0:
            raise QrError("QR encoding produced no symbol")
        # OpenCV emits one pixel per module inside its own quiet zone.
        ys, xs = np.nonzero(raw == 0)
        symbol = raw[ys.min() : ys.max() + 1, xs.min() : xs.max() + 1]
        big = np.kron(symbol, np.ones((module_pixel_size, module_pixel_size), dtype=np.uint8))
        pad = quiet_zone_modules * module_pixel_size
        out = np.pad(big, pad, constant_values=255)
        return GrayImage.from_array(np.where(out < 128, 0, 255).astype(np.uint8))

    def decode(self, img):
        arr = img.to_array()
        # The ArUco-based detector is more reliable on clean synthetic symbols;
        # the classic detector is kept as a fallback. A 3x3 median pass is
        # tried last to suppress impulse noise.
        for candidate in (arr, cv2.medianBlur(arr, 3)):
            for detector in (cv2.QRCodeDetectorAruco(), cv2.QRCodeDetector()):
                text, points, _ = detector.detectAndDecode(candidate)
                if points is not None and text:
                    return text
        raise QrError("no decodable QR symbol found")


def binarize(img: GrayImage, threshold: int = 128) -> np.ndarray:
    return (img.to_array() >= threshold).astype(np.uint8)
