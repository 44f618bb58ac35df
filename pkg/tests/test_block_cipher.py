import numpy as np
import pytest
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from hypothesis import given, settings
from hypothesis import strategies as st

from chaosaes import block_cipher as bc
from chaosaes import chaos
from chaosaes.chaos import CLASSIC_SHIFTS, SBox, ShiftPattern

FIPS_KEY = bytes.fromhex("000102030405060708090a0b0c0d0e0f")
FIPS_PT = bytes.fromhex("00112233445566778899aabbccddeeff")
FIPS_CT = bytes.fromhex("69c4e0d86a7b0430d8cdb78070b4c55a")

blocks = st.binary(min_size=16, max_size=16)
patterns = st.permutations([0, 1, 2, 3]).map(lambda p: ShiftPattern(tuple(p)))


def reference_aes(key: bytes, block: bytes) -> bytes:
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


def poly_mul_mod(a: int, b: int) -> int:
    """Carry-less product followed by long division by x^8+x^4+x^3+x+1."""
    prod = 0
    for i in range(8):
        if (b >> i) & 1:
            prod ^= a << i
    for deg in range(14, 7, -1):
        if (prod >> deg) & 1:
            prod ^= 0x11B << (deg - 8)
    return prod


def oracle_schedule(key: bytes, sbox) -> list[bytes]:
    rcon = [1, 2, 4, 8, 16, 32, 64, 128, 27, 54]
    w = [list(key[4 * i : 4 * i + 4]) for i in range(4)]
    for i in range(4, 44):
        t = list(w[i - 1])
        if i % 4 == 0:
            t = [sbox[v] for v in t[1:] + t[:1]]
            t[0] ^= rcon[i // 4 - 1]
        w.append([a ^ b for a, b in zip(w[i - 4], t)])
    return [bytes(sum(w[4 * r : 4 * r + 4], [])) for r in range(11)]


def random_sbox(rng) -> SBox:
    return SBox.from_forward(rng.permutation(256))


class TestField:
    def test_gf_mul_exhaustive(self):
        for a in range(256):
            for b in range(256):
                assert bc.gf_mul(a, b) == poly_mul_mod(a, b)

    def test_known_products(self):
        assert bc.gf_mul(0x57, 0x83) == 0xC1
        assert bc.gf_mul(0x57, 0x13) == 0xFE
        assert bc.xtime(0x80) == 0x1B


class TestStandardSbox:
    def test_known_entries(self):
        fwd = bc.STANDARD_SBOX.forward
        assert fwd[:8] == (0x63, 0x7C, 0x77, 0x7B, 0xF2, 0x6B, 0x6F, 0xC5)
        assert fwd[0x53] == 0xED
        assert bc.STANDARD_SBOX.inverse[0x63] == 0x00


class TestRoundOps:
    def test_sub_bytes(self):
        rng = np.random.default_rng(0)
        state = list(range(16))
        assert bc.sub_bytes(state, SBox.identity()) == state
        box = random_sbox(rng)
        assert bc.sub_bytes([0] * 16, box) == [box.forward[0]] * 16
        for _ in range(1000):
            box = random_sbox(rng)
            s = list(rng.integers(0, 256, 16))
            assert bc.inv_sub_bytes(bc.sub_bytes(s, box), box) == s

    def test_classic_shift_rows(self):
        # column-major state, s[r + 4c]
        state = list(range(16))
        out = bc.shift_rows_dynamic(state, CLASSIC_SHIFTS)
        assert out == [0, 5, 10, 15, 4, 9, 14, 3, 8, 13, 2, 7, 12, 1, 6, 11]

    def test_pattern_1023(self):
        state = list(range(16))
        out = bc.shift_rows_dynamic(state, ShiftPattern((1, 0, 2, 3)))
        row = lambda s, r: [s[r + 4 * c] for c in range(4)]
        assert row(out, 0) == [4, 8, 12, 0]
        assert row(out, 1) == row(state, 1)

    @settings(max_examples=1000)
    @given(blocks, patterns)
    def test_shift_rows_round_trip(self, block, pattern):
        s = list(block)
        assert bc.inv_shift_rows_dynamic(bc.shift_rows_dynamic(s, pattern), pattern) == s

    def test_mix_columns_vector(self):
        col = [0xDB, 0x13, 0x53, 0x45] * 4
        assert bc.mix_columns(col)[:4] == [0x8E, 0x4D, 0xA1, 0xBC]
        assert bc.mix_columns([0] * 16) == [0] * 16

    def test_mix_columns_round_trip(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            s = list(rng.integers(0, 256, 16))
            assert bc.inv_mix_columns(bc.mix_columns(s)) == s

    def test_add_round_key(self):
        s = list(range(16))
        assert bc.add_round_key(s, [0] * 16) == s
        rk = list(range(100, 116))
        assert bc.add_round_key(bc.add_round_key(s, rk), rk) == s
        assert bc.add_round_key(s, [0xFF] * 16) == [0xFF - v for v in s]


class TestKeySchedule:
    def test_fips_expansion(self):
        rks = bc.expand_key(bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c"), bc.STANDARD_SBOX)
        assert bytes(rks[1]).hex() == "a0fafe1788542cb123a339392a6c7605"
        assert bytes(rks[10]).hex() == "d014f9a8c9ee2589e13f0cc8b6630ca6"

    def test_zero_key_first_word(self):
        rks = bc.expand_key(bytes(16), bc.STANDARD_SBOX)
        assert bytes(rks[1][:4]) == bytes.fromhex("62636363")

    def test_random_keys_match_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            key = rng.bytes(16)
            got = [bytes(r) for r in bc.expand_key(key, bc.STANDARD_SBOX)]
            assert got == oracle_schedule(key, bc.STANDARD_SBOX.forward)

    def test_identity_sbox_schedule(self):
        key = bytes(range(16))
        got = [bytes(r) for r in bc.expand_key(key, SBox.identity())]
        assert got == oracle_schedule(key, list(range(256)))

    def test_reference_key_chaotic_schedule(self):
        from chaosaes.image_pipeline import REFERENCE_KEY

        box, _ = chaos.generate_sbox(0.1, 0.1)
        got = [bytes(r) for r in bc.expand_key(REFERENCE_KEY, box)]
        assert got == oracle_schedule(REFERENCE_KEY, box.forward)
        assert got[1].hex() == "bb38a1ffc5965630d044437fc6e2cb43"
        assert got[10].hex() == "97c5dd76a5e473f7ffcca287d322ba6f"

    def test_bad_key_length(self):
        with pytest.raises(ValueError):
            bc.expand_key(bytes(15), bc.STANDARD_SBOX)


class TestBlock:
    def test_fips_vector(self):
        rks = bc.expand_key(FIPS_KEY, bc.STANDARD_SBOX)
        ct = bc.encrypt_block_modified(FIPS_PT, rks, bc.STANDARD_SBOX, CLASSIC_SHIFTS)
        assert ct == FIPS_CT
        assert bc.decrypt_block_modified(ct, rks, bc.STANDARD_SBOX, CLASSIC_SHIFTS) == FIPS_PT

    def test_classic_equivalence(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            key, block = rng.bytes(16), rng.bytes(16)
            rks = bc.expand_key(key, bc.STANDARD_SBOX)
            ours = bc.encrypt_block_modified(block, rks, bc.STANDARD_SBOX, CLASSIC_SHIFTS)
            assert ours == reference_aes(key, block)

    def test_round_trip_random(self):
        rng = np.random.default_rng(4)
        boxes = [random_sbox(rng) for _ in range(50)]
        pats = [ShiftPattern(tuple(int(v) for v in rng.permutation(4))) for _ in range(24)]
        for i in range(10_000):
            box, pat = boxes[i % 50], pats[i % 24]
            key, block = rng.bytes(16), rng.bytes(16)
            rks = bc.expand_key(key, box)
            ct = bc.encrypt_block_modified(block, rks, box, pat)
            assert bc.decrypt_block_modified(ct, rks, box, pat) == block

    def test_diffusion(self):
        rng = np.random.default_rng(5)
        boxes = chaos.sbox_chain(0.1, 0.1, 20)
        changed = []
        for i in range(1000):
            box = boxes[i % 20]
            pat = chaos.shift_pattern(0.7, 3.99, i)
            rks = bc.expand_key(rng.bytes(16), box)
            block = bytearray(rng.bytes(16))
            a = bc.encrypt_block_modified(bytes(block), rks, box, pat)
            bit = int(rng.integers(128))
            block[bit // 8] ^= 1 << (bit % 8)
            b = bc.encrypt_block_modified(bytes(block), rks, box, pat)
            changed.append(bin(int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).count("1"))
        assert np.mean(changed) >= 40


class TestEcbAndPadding:
    def test_pkcs7(self):
        assert bc.pkcs7_pad(b"") == bytes([16]) * 16
        assert bc.pkcs7_pad(b"abc") == b"abc" + bytes([13]) * 13
        assert bc.pkcs7_unpad(bc.pkcs7_pad(b"hello")) == b"hello"
        with pytest.raises(bc.PaddingError):
            bc.pkcs7_unpad(b"x" * 15 + b"\x00")
        with pytest.raises(bc.PaddingError):
            bc.pkcs7_unpad(b"x" * 14 + b"\x01\x02")

    def test_ecb_matches_reference(self):
        key = bytes(range(16))
        ct = bc.aes128_ecb_classic(FIPS_PT, key, "encrypt")
        padded = bc.pkcs7_pad(FIPS_PT)
        assert ct == reference_aes(key, padded[:16]) + reference_aes(key, padded[16:])
        assert bc.aes128_ecb_classic(ct, key, "decrypt") == FIPS_PT

    @given(st.binary(min_size=16, max_size=16), st.binary(min_size=16, max_size=16))
    def test_wrap_round_trip(self, dyn, key):
        assert bc.aes128_ecb_classic(bc.aes128_ecb_classic(dyn, key), key, "decrypt") == dyn

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            bc.aes128_ecb_classic(b"x", bytes(16), "sideways")
