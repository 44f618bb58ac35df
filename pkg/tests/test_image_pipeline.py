import dataclasses
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaosaes import image_pipeline as ip
from chaosaes.analysis import metrics
from chaosaes.analysis.corpus import GENERATORS
from chaosaes.chaos import ChaosError
from chaosaes.image_pipeline import (
    REFERENCE_IV,
    REFERENCE_KEY,
    ChaoticParams,
    CipherImage,
    ContainerError,
    GrayImage,
)

small_images = st.builds(
    lambda w, h, seed: GrayImage.from_array(
        np.random.default_rng(seed).integers(0, 256, (h, w), dtype=np.uint8)
    ),
    st.integers(1, 24),
    st.integers(1, 24),
    st.integers(0, 2**32 - 1),
)
safe_params = st.builds(
    ChaoticParams,
    mask_seed=st.floats(0.01, 0.99),
    perm_seed=st.floats(0.01, 0.99),
    shift_seed=st.floats(0.01, 0.99),
    henon_x0=st.floats(0.01, 0.99),
    henon_y0=st.floats(0.01, 0.19),
    shuffle_seed=st.floats(0.01, 0.99),
)


def byte_diff(a: bytes, b: bytes) -> float:
    x, y = np.frombuffer(a, dtype=np.uint8), np.frombuffer(b, dtype=np.uint8)
    return float((x != y).mean() * 100)


class TestGrayImage:
    def test_array_round_trip(self):
        arr = np.arange(12, dtype=np.uint8).reshape(3, 4)
        img = GrayImage.from_array(arr)
        assert (img.width, img.height) == (4, 3)
        assert (img.to_array() == arr).all()
        assert (np.asarray(img) == arr).all()

    def test_validation(self):
        with pytest.raises(ValueError):
            GrayImage(2, 2, b"abc")
        with pytest.raises(ValueError):
            GrayImage.from_array(np.full((2, 2), 300))
        with pytest.raises(ValueError):
            GrayImage.from_array(np.zeros(4))


class TestParams:
    def test_defaults(self):
        p = ChaoticParams()
        assert (p.r, p.mask_seed, p.perm_seed, p.shift_seed) == (3.99, 0.5, 0.75, 0.7)
        assert (p.henon_a, p.henon_b, p.henon_x0, p.henon_y0, p.shuffle_seed) == (1.4, 0.3, 0.1, 0.1, 0.37)

    @pytest.mark.parametrize("field, value", [("mask_seed", 0.0), ("perm_seed", 1.0), ("r", 4.5), ("henon_y0", -0.1)])
    def test_out_of_range(self, field, value):
        with pytest.raises(ChaosError):
            ChaoticParams(**{field: value})


class TestStages:
    def test_pad(self):
        assert len(ip.pad_to_block(bytes(65536))) == 65536
        padded = ip.pad_to_block(bytes(range(1, 18)))
        assert len(padded) == 32 and padded[17:] == bytes(15)
        assert ip.pad_to_block(b"") == b""

    def test_mask_examples(self):
        assert ip.mask_with_feedback(bytes([1, 2, 3]), bytes([5, 5, 5])) == bytes([4, 3, 5])
        p = bytes([7, 1, 9, 200])
        prefix = bytes([7, 7 ^ 1, 7 ^ 1 ^ 9, 7 ^ 1 ^ 9 ^ 200])
        assert ip.mask_with_feedback(p, bytes(4)) == prefix

    @settings(max_examples=1000)
    @given(st.binary(max_size=256), st.data())
    def test_mask_round_trip(self, p, data):
        k = data.draw(st.binary(min_size=len(p), max_size=len(p)))
        assert ip.unmask_with_feedback(ip.mask_with_feedback(p, k), k) == p

    def test_permute_examples(self):
        assert ip.permute(b"xyz", [0, 1, 2]) == b"xyz"
        assert ip.permute(b"abc", [1, 2, 0]) == b"bca"

    @given(st.binary(min_size=1, max_size=300), st.randoms())
    def test_permute_round_trip(self, data, rnd):
        perm = list(range(len(data)))
        rnd.shuffle(perm)
        assert ip.unpermute(ip.permute(data, perm), perm) == data

    @given(st.integers(0, 20).flatmap(lambda n: st.binary(min_size=16 * n, max_size=16 * n)))
    def test_post_chain_round_trip(self, data):
        chained = ip.post_chain(data)
        assert chained[:16] == data[:16]
        assert ip.undo_post_chain(chained) == data

    def test_post_chain_direction(self):
        data = bytes(range(48))
        out = ip.post_chain(data)
        assert out[16:32] == bytes(a ^ b for a, b in zip(data[16:32], out[:16]))
        assert out[32:] == bytes(a ^ b for a, b in zip(data[32:], out[16:32]))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ip.mask_with_feedback(b"ab", b"a")
        with pytest.raises(ValueError):
            ip.permute(b"ab", [0])


class TestEncryptDecrypt:
    def test_round_trip_corpus(self, corpus, encrypted):
        for name, img in corpus.items():
            assert ip.decrypt_image(encrypted[name], REFERENCE_KEY) == img, name

    @settings(max_examples=25, deadline=None)
    @given(small_images, st.binary(min_size=16, max_size=16), safe_params, st.booleans())
    def test_round_trip_property(self, img, key, params, shuffle):
        c = ip.encrypt_image(img, key, REFERENCE_IV, params, post_shuffle=shuffle)
        assert c.post_shuffle == shuffle
        assert ip.decrypt_image(c, key, params) == img

    def test_unaligned_size(self):
        img = GrayImage.from_array(np.arange(7 * 5, dtype=np.uint8).reshape(5, 7))
        c = ip.encrypt_image(img, REFERENCE_KEY, REFERENCE_IV)
        assert len(c.ciphertext) == 48
        assert ip.decrypt_image(c, REFERENCE_KEY) == img

    def test_fixed_iv_deterministic(self, corpus, encrypted):
        again = ip.encrypt_image(corpus["scene"], REFERENCE_KEY, REFERENCE_IV)
        assert again == encrypted["scene"]

    def test_random_iv_default(self, corpus):
        img = GrayImage.from_array(GENERATORS["gradient"](32))
        a = ip.encrypt_image(img, REFERENCE_KEY)
        b = ip.encrypt_image(img, REFERENCE_KEY)
        assert a.iv != b.iv and a.ciphertext != b.ciphertext

    def test_iv_sensitivity(self, corpus, encrypted):
        iv = bytearray(REFERENCE_IV)
        iv[7] ^= 0x01
        other = ip.encrypt_image(corpus["scene"], REFERENCE_KEY, bytes(iv))
        assert byte_diff(other.ciphertext, encrypted["scene"].ciphertext) >= 99.0

    def test_constant_image_entropy(self, encrypted):
        assert metrics.entropy(encrypted["constant"].as_image()) >= 7.99

    def test_wrong_key_ssim(self, corpus, encrypted):
        wrong = bytearray(REFERENCE_KEY)
        wrong[3] ^= 0x01
        dec = ip.decrypt_image(encrypted["scene"], bytes(wrong))
        assert metrics.ssim(corpus["scene"], dec) < 0.05

    @pytest.mark.parametrize("name", sorted(GENERATORS))
    def test_entropy_64(self, name):
        img = GrayImage.from_array(GENERATORS[name](64))
        c = ip.encrypt_image(img, REFERENCE_KEY, REFERENCE_IV)
        assert metrics.entropy(c.as_image()) >= 7.95

    def test_bad_arguments(self, corpus):
        with pytest.raises(ValueError):
            ip.encrypt_image(corpus["scene"], bytes(15), REFERENCE_IV)
        with pytest.raises(ValueError):
            ip.encrypt_image(corpus["scene"], REFERENCE_KEY, bytes(8))
        with pytest.raises(ValueError):
            ip.encrypt_image(GrayImage(0, 0, b""), REFERENCE_KEY, REFERENCE_IV)

    def test_escaping_henon_seed(self):
        img = GrayImage.from_array(np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(ChaosError):
            ip.encrypt_image(img, REFERENCE_KEY, REFERENCE_IV, ChaoticParams(henon_x0=0.5, henon_y0=0.99))


SENSITIVE_SEEDS = ["perm_seed", "shuffle_seed", "henon_x0", "henon_y0", "r"]


class TestSeedSensitivity:
    @pytest.fixture(scope="class")
    @classmethod
    def base(cls, corpus):
        return ip.encrypt_image(corpus["scene"], REFERENCE_KEY, REFERENCE_IV, post_shuffle=True)

    def _changed(self, corpus, base, **override):
        p = dataclasses.replace(ChaoticParams(), **override)
        c = ip.encrypt_image(corpus["scene"], REFERENCE_KEY, REFERENCE_IV, p, post_shuffle=True)
        return byte_diff(c.ciphertext, base.ciphertext)

    @pytest.mark.parametrize("field", SENSITIVE_SEEDS)
    def test_tiny_change(self, corpus, base, field):
        value = getattr(ChaoticParams(), field) + 1e-10
        assert self._changed(corpus, base, **{field: value}) >= 99.0

    def test_mask_seed_off_critical_point(self, corpus):
        img = corpus["scene"]
        a = ip.encrypt_image(img, REFERENCE_KEY, REFERENCE_IV, ChaoticParams(mask_seed=0.3))
        b = ip.encrypt_image(img, REFERENCE_KEY, REFERENCE_IV, ChaoticParams(mask_seed=0.3 + 1e-10))
        assert byte_diff(a.ciphertext, b.ciphertext) >= 99.0

    @pytest.mark.xfail(strict=True, reason="0.5 is the logistic critical point; a 1e-10 offset vanishes in one step")
    def test_mask_seed_default(self, corpus, base):
        assert self._changed(corpus, base, mask_seed=0.5 + 1e-10) >= 99.0

    @pytest.mark.xfail(strict=True, reason="shift patterns use only four logistic iterations")
    def test_shift_seed_default(self, corpus, base):
        assert self._changed(corpus, base, shift_seed=0.7 + 1e-10) >= 99.0


class TestContainer:
    def test_layout(self, encrypted):
        c = encrypted["scene"]
        blob = ip.write_container(c)
        assert ip.HEADER_SIZE == 30
        assert len(blob) == 30 + 65536
        magic, ver, flags, w, h = struct.unpack(">4sBBII", blob[:14])
        assert (magic, ver, flags, w, h) == (b"MAE1", 1, 0, 256, 256)
        assert blob[14:30] == REFERENCE_IV

    @given(small_images, st.binary(min_size=16, max_size=16), st.booleans())
    def test_round_trip(self, img, iv, shuffle):
        c = CipherImage(iv, img.width, img.height, int(shuffle), ip.pad_to_block(img.pixels))
        assert ip.read_container(ip.write_container(c)) == c

    def test_corruptions(self, encrypted):
        blob = bytearray(ip.write_container(encrypted["gradient"]))
        with pytest.raises(ContainerError, match="magic"):
            ip.read_container(b"XAE1" + bytes(blob[4:]))
        with pytest.raises(ContainerError, match="version"):
            ip.read_container(bytes(blob[:4]) + b"\x02" + bytes(blob[5:]))
        with pytest.raises(ContainerError, match="flag"):
            ip.read_container(bytes(blob[:5]) + b"\x80" + bytes(blob[6:]))
        with pytest.raises(ContainerError):
            ip.read_container(bytes(blob[:-16]))
        with pytest.raises(ContainerError):
            ip.read_container(bytes(blob[:20]))

    def test_cipher_image_validation(self):
        with pytest.raises(ContainerError):
            CipherImage(bytes(16), 4, 4, 0, bytes(32))
        with pytest.raises(ContainerError):
            CipherImage(bytes(15), 4, 4, 0, bytes(16))
