"""Dual-key QR distribution: sender packaging and receiver recovery.

The visible QR layer carries the bit-flipped static key (hex) and the
dynamic session key wrapped under the original static key (base64). The
hidden LSB layer carries the ElGamal-encrypted hint naming the flipped bit.
"""

from __future__ import annotations

import base64
import binascii
import json
import secrets
from dataclasses import dataclass

from ..block_cipher import BLOCK_SIZE, PaddingError, aes128_ecb_classic
from ..image_pipeline import GrayImage
from . import elgamal, hint, stego
from .qr import OpenCvQrCodec, QrCodec, binarize


class PayloadError(ValueError):
    """QR text is not a well-formed key payload."""


class KeyUnwrapError(ValueError):
    """Dynamic key failed to unwrap: the recovered static key is wrong."""


@dataclass(frozen=True)
class QrPayload:
    flipped_static_key_hex: str
    wrapped_dynamic_key_b64: str
    meta: str | None = None

    def to_json(self) -> str:
        doc = {"sk": self.flipped_static_key_hex, "dk": self.wrapped_dynamic_key_b64}
        if self.meta is not None:
            doc["meta"] = self.meta
        return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "QrPayload":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PayloadError(f"QR payload is not JSON: {exc}") from exc
        if not isinstance(doc, dict) or not {"sk", "dk"} <= doc.keys():
            raise PayloadError("QR payload lacks 'sk'/'dk' fields")
        payload = cls(doc["sk"], doc["dk"], doc.get("meta"))
        payload.static_key()
        payload.wrapped_key()
        return payload

    def static_key(self) -> bytes:
        try:
            key = bytes.fromhex(self.flipped_static_key_hex)
        except (ValueError, TypeError) as exc:
            raise PayloadError("static key field is not hex") from exc
        if len(key) != BLOCK_SIZE:
            raise PayloadError("static key field must encode 16 bytes")
        return key

    def wrapped_key(self) -> bytes:
        try:
            raw = base64.b64decode(self.wrapped_dynamic_key_b64, validate=True)
        except (binascii.Error, TypeError) as exc:
            raise PayloadError("dynamic key field is not base64") from exc
        if len(raw) != 2 * BLOCK_SIZE:
            raise PayloadError("wrapped dynamic key must be 32 bytes")
        return raw


@dataclass(frozen=True)
class StegoQr:
    image: GrayImage
    # The unmodified QR, kept for verification; never needed by the receiver.
    clean: GrayImage | None = None

    def scannable(self) -> bool:
        return self.clean is None or bool((binarize(self.image) == binarize(self.clean)).all())


def wrap_key(dynamic_key: bytes, static_key: bytes) -> bytes:
    return aes128_ecb_classic(dynamic_key, static_key, "encrypt")


def unwrap_key(wrapped: bytes, static_key: bytes) -> bytes:
    try:
        key = aes128_ecb_classic(wrapped, static_key, "decrypt")
    except PaddingError as exc:
        raise KeyUnwrapError("dynamic key did not unwrap (wrong static key)") from exc
    if len(key) != BLOCK_SIZE:
        raise KeyUnwrapError("unwrapped dynamic key has the wrong length (wrong static key)")
    return key


def encode_hint(text: str) -> int:
    return int.from_bytes(text.encode("ascii"), "big")


def decode_hint(m: int) -> str:
    raw = m.to_bytes(max(1, (m.bit_length() + 7) // 8), "big")
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise hint.HintError("decrypted hint is not ASCII (wrong private key?)") from exc
    return text


def sender_package(
    static_key: bytes,
    dynamic_key: bytes,
    recipient: elgamal.ElGamalPublicKey,
    codec: QrCodec | None = None,
    rng=None,
    meta: str | None = None,
    module_pixel_size: int = 8,
) -> StegoQr:
    codec = codec or OpenCvQrCodec()
    rng = rng or secrets.SystemRandom()
    static_key, dynamic_key = bytes(static_key), bytes(dynamic_key)
    if len(static_key) != BLOCK_SIZE or len(dynamic_key) != BLOCK_SIZE:
        raise ValueError("static and dynamic keys must be 16 bytes each")

    position = rng.randrange(hint.KEY_BITS)
    flipped = hint.flip_bit(static_key, position)
    message = hint.make_hint(position, rng)
    m = encode_hint(message)
    if m >= recipient.params.p:
        raise elgamal.ElGamalError("hint does not fit in the ElGamal group")
    cipher = elgamal.elgamal_encrypt(m, recipient, rng=rng)

    wrapped = wrap_key(dynamic_key, static_key)
    payload = QrPayload(flipped.hex(), base64.b64encode(wrapped).decode("ascii"), meta)
    clean = codec.encode(payload.to_json(), "H", module_pixel_size, 4)
    image = stego.embed_lsb(clean, elgamal.serialize_ciphertext(cipher))
    return StegoQr(image, clean)


def receiver_recover(
    qr: StegoQr | GrayImage,
    private: elgamal.ElGamalKeyPair,
    codec: QrCodec | None = None,
) -> bytes:
    """Return the dynamic session key carried by a stego QR image."""
    codec = codec or OpenCvQrCodec()
    image = qr.image if isinstance(qr, StegoQr) else qr
    payload = QrPayload.from_json(codec.decode(image))
    cipher = elgamal.deserialize_ciphertext(stego.extract_lsb(image))
    message = decode_hint(elgamal.elgamal_decrypt(cipher, private))
    static_key = hint.flip_bit(payload.static_key(), hint.hint_position(message))
    return unwrap_key(payload.wrapped_key(), static_key)

