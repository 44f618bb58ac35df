"""Chaos-enhanced AES-128 image encryption with QR-based key distribution."""

from .image_pipeline import (
    REFERENCE_IV,
    REFERENCE_KEY,
    ChaoticParams,
    CipherImage,
    ContainerError,
    GrayImage,
    decrypt_image,
    encrypt_image,
    read_container,
    write_container,
)

__version__ = "0.1.0"
