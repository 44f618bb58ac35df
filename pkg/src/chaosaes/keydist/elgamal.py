"""ElGamal over the multiplicative group of a prime field."""

from __future__ import annotations

import secrets
from dataclasses import dataclass

import gmpy2

# RFC 3526 group 14: 2048-bit safe prime, generator 2.
MODP_2048 = int(
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF",
    16,
)


class ElGamalError(ValueError):
    """Out-of-range message, exponent or ciphertext component."""


@dataclass(frozen=True)
class ElGamalParams:
    p: int
    g: int

    def __post_init__(self):
        if self.p < 5 or not gmpy2.is_prime(self.p):
            raise ElGamalError("ElGamal modulus must be a prime >= 5")
        if not 1 < self.g < self.p:
            raise ElGamalError("generator must satisfy 1 < g < p")

    @property
    def byte_length(self) -> int:
        return (self.p.bit_length() + 7) // 8


DEFAULT_PARAMS = ElGamalParams(MODP_2048, 2)


@dataclass(frozen=True)
class ElGamalPublicKey:
    params: ElGamalParams
    y: int


@dataclass(frozen=True)
class ElGamalKeyPair:
    params: ElGamalParams
    x: int
    y: int

    @property
    def public(self) -> ElGamalPublicKey:
        return ElGamalPublicKey(self.params, self.y)


def _randbelow(rng, n: int) -> int:
    if rng is None:
        return secrets.randbelow(n)
    return rng.randrange(n)


def keypair_from_private(params: ElGamalParams, x: int) -> ElGamalKeyPair:
    if not 1 <= x <= params.p - 2:
        raise ElGamalError("private exponent must lie in [1, p-2]")
    return ElGamalKeyPair(params, x, pow(params.g, x, params.p))


def elgamal_keygen(params: ElGamalParams = DEFAULT_PARAMS, rng=None) -> ElGamalKeyPair:
    """Fresh key pair with ``x`` uniform in [1, p-2]."""
    return keypair_from_private(params, 1 + _randbelow(rng, params.p - 2))


def elgamal_encrypt(m: int, pub: ElGamalPublicKey, k: int | None = None, rng=None) -> tuple[int, int]:
    """Encrypt ``m`` as ``(g^k, m * y^k)`` mod p; ``k`` is drawn when omitted."""
    p, g = pub.params.p, pub.params.g
    if not 1 <= m < p:
        raise ElGamalError("message must satisfy 1 <= m < p")
    if k is None:
        k = 1 + _randbelow(rng, p - 2)
    elif not 1 <= k <= p - 2:
        raise ElGamalError("ephemeral exponent must lie in [1, p-2]")
    return pow(g, k, p), (m * pow(pub.y, k, p)) % p


def elgamal_decrypt(c: tuple[int, int], priv: ElGamalKeyPair) -> int:
    p = priv.params.p
    c1, c2 = c
    if not (1 <= c1 < p and 1 <= c2 < p):
        raise ElGamalError("ciphertext components must lie in [1, p-1]")
    return (c2 * pow(pow(c1, priv.x, p), -1, p)) % p


def serialize_ciphertext(c: tuple[int, int]) -> bytes:
    """``u16 len | c1 | u16 len | c2``, big-endian."""
    out = bytearray()
    for v in c:
        raw = v.to_bytes(max(1, (v.bit_length() + 7) // 8), "big")
        if len(raw) > 0xFFFF:
            raise ElGamalError("ciphertext component too large to serialize")
        out += len(raw).to_bytes(2, "big") + raw
    return bytes(out)


def deserialize_ciphertext(blob: bytes) -> tuple[int, int]:
    vals = []
    pos = 0
    for _ in range(2):
        if pos + 2 > len(blob):
            raise ElGamalError("truncated ElGamal ciphertext")
        n = int.from_bytes(blob[pos : pos + 2], "big")
        pos += 2
        if n == 0 or pos + n > len(blob):
            raise ElGamalError("truncated ElGamal ciphertext")
        vals.append(int.from_bytes(blob[pos : pos + n], "big"))
        pos += n
    if pos != len(blob):
        raise ElGamalError("trailing bytes after ElGamal ciphertext")
    return vals[0], vals[1]


def dump_key(key: ElGamalKeyPair | ElGamalPublicKey) -> dict:
    doc = {"p": hex(key.params.p), "g": hex(key.params.g), "y": hex(key.y)}
    if isinstance(key, ElGamalKeyPair):
        doc["x"] = hex(key.x)
    return doc


def load_key(doc: dict) -> ElGamalKeyPair | ElGamalPublicKey:
    try:
        params = ElGamalParams(int(doc["p"], 16), int(doc["g"], 16))
        y = int(doc["y"], 16)
        if "x" in doc:
            pair = keypair_from_private(params, int(doc["x"], 16))
            if pair.y != y:
                raise ElGamalError("key file: y does not match g^x mod p")
            return pair
    except ElGamalError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ElGamalError(f"malformed key document: {exc}") from exc
    if not 1 <= y < params.p:
        raise ElGamalError("public value outside [1, p-1]")
    return ElGamalPublicKey(params, y)
