"""QR-based dual-key distribution: ElGamal, hint messages, LSB stego."""

from .elgamal import (
    DEFAULT_PARAMS,
    ElGamalError,
    ElGamalKeyPair,
    ElGamalParams,
    ElGamalPublicKey,
    elgamal_decrypt,
    elgamal_encrypt,
    elgamal_keygen,
)
from .hint import HintError, flip_bit, hint_position, make_hint
from .protocol import KeyUnwrapError, PayloadError, QrPayload, StegoQr, receiver_recover, sender_package
from .qr import OpenCvQrCodec, QrError
from .stego import StegoError, embed_lsb, extract_lsb
