"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 I/O, 4 format, 5 crypto/protocol failure.
"""

from __future__ import annotations

import argparse
import json
import random
import secrets
import sys
from pathlib import Path

from PIL import UnidentifiedImageError

from . import image_pipeline as ip
from .chaos import ChaosError
from .analysis import metrics
from .analysis.corpus import corpus_images
from .analysis.report import format_table, reproduce, to_json
from .images import load_image, save_image
from .keydist import elgamal, hint, protocol, qr, stego

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_CRYPTO = 5

SSIM_WARN = 0.5
ALL_METRICS = ("entropy", "correlation", "npcr", "uaci", "mse", "psnr", "ssim", "homogeneity", "energy")
SEED_NAMES = {
    "mask": "mask_seed",
    "perm": "perm_seed",
    "shift": "shift_seed",
    "shuffle": "shuffle_seed",
    "henon_x": "henon_x0",
    "henon_y": "henon_y0",
    "r": "r",
}


class UsageError(Exception):
    pass


class KeyFileError(ValueError):
    """ElGamal key file is unreadable JSON or an inconsistent key document."""


def _parse_hex_key(text: str, what: str = "key") -> bytes:
    try:
        key = bytes.fromhex(text)
    except ValueError:
        raise UsageError(f"{what} is not valid hex") from None
    if len(key) != 16:
        raise UsageError(f"{what} must be 32 hex characters (16 bytes)")
    return key


def _key_from_args(args, hex_attr="key", file_attr="key_file", what="key") -> bytes:
    text, path = getattr(args, hex_attr), getattr(args, file_attr)
    if bool(text) == bool(path):
        raise UsageError(f"give exactly one of --{hex_attr.replace('_', '-')} or --{file_attr.replace('_', '-')}")
    if text:
        return _parse_hex_key(text, what)
    raw = Path(path).read_bytes()
    if len(raw) != 16:
        raise UsageError(f"{path}: raw key files must hold exactly 16 bytes")
    return raw


def _params(args) -> ip.ChaoticParams:
    overrides = {}
    for item in filter(None, (args.seeds or "").split(",")):
        name, _, value = item.partition("=")
        if name.strip() not in SEED_NAMES:
            raise UsageError(f"unknown seed {name!r}; expected one of {', '.join(SEED_NAMES)}")
        try:
            overrides[SEED_NAMES[name.strip()]] = float(value)
        except ValueError:
            raise UsageError(f"seed {name!r} needs a numeric value") from None
    try:
        return ip.ChaoticParams(**overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _rng(args):
    # Seeded runs are for reproducible experiments only; production draws use the OS CSPRNG.
    return random.Random(args.seed) if args.seed is not None else secrets.SystemRandom()


def _iv(args) -> bytes:
    mode = "paper" if args.fixed_iv else args.iv
    if mode == "paper":
        return ip.REFERENCE_IV
    if mode == "random":
        if args.seed is not None:
            return random.Random(args.seed).randbytes(16)
        return secrets.token_bytes(16)
    return _parse_hex_key(mode, "IV")


def cmd_encrypt(args) -> int:
    key = _key_from_args(args)
    params = _params(args)
    img = load_image(args.input)
    c = ip.encrypt_image(img, key, _iv(args), params, post_shuffle=args.post_shuffle)
    Path(args.output).write_bytes(ip.write_container(c))
    if args.cipher_image:
        save_image(c.as_image(), args.cipher_image)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = _key_from_args(args)
    params = _params(args)
    c = ip.read_container(Path(args.input).read_bytes())
    img = ip.decrypt_image(c, key, params)
    save_image(img, args.output)
    if args.verify_against:
        ref = load_image(args.verify_against)
        score = metrics.ssim(ref, img)
        if score < SSIM_WARN:
            print(
                f"warning: SSIM against {args.verify_against} is {score:.4f}; "
                "the key or parameters are probably wrong",
                file=sys.stderr,
            )
        else:
            print(f"SSIM against reference: {score:.4f}")
    return EXIT_OK


def cmd_keygen(args) -> int:
    rng = _rng(args)
    if args.aes:
        print(bytes(rng.randrange(256) for _ in range(16)).hex())
        return EXIT_OK
    if not args.private:
        raise UsageError("keygen needs --private (or --aes)")
    params = elgamal.DEFAULT_PARAMS
    if args.group == "test64":
        params = elgamal.ElGamalParams(2**64 - 59, 2)
    pair = elgamal.elgamal_keygen(params, rng)
    Path(args.private).write_text(json.dumps(elgamal.dump_key(pair)))
    if args.public:
        Path(args.public).write_text(json.dumps(elgamal.dump_key(pair.public)))
    return EXIT_OK


def _load_key_file(path):
    try:
        return elgamal.load_key(json.loads(Path(path).read_text()))
    except (json.JSONDecodeError, elgamal.ElGamalError) as exc:
        raise KeyFileError(f"{path}: {exc}") from exc


def cmd_package(args) -> int:
    static_key = _parse_hex_key(args.static_key, "static key")
    dynamic_key = _parse_hex_key(args.dynamic_key, "dynamic key")
    pub = _load_key_file(args.public)
    if isinstance(pub, elgamal.ElGamalKeyPair):
        pub = pub.public
    package = protocol.sender_package(static_key, dynamic_key, pub, rng=_rng(args), meta=args.meta)
    save_image(package.image, args.output)
    return EXIT_OK


def cmd_recover(args) -> int:
    priv = _load_key_file(args.private)
    if not isinstance(priv, elgamal.ElGamalKeyPair):
        raise UsageError(f"{args.private} holds a public key; recovery needs the private key")
    print(protocol.receiver_recover(load_image(args.qr), priv).hex())
    return EXIT_OK


def cmd_analyze(args) -> int:
    if args.reproduce_paper:
        results = reproduce(corpus_images(), _params(args), rng=args.seed or 0)
        print(to_json(results) if args.json else format_table(results))
        return EXIT_OK
    if not args.input:
        raise UsageError("analyze needs --in or --reproduce-paper")
    wanted = ALL_METRICS if not args.metrics else tuple(m.strip() for m in args.metrics.split(","))
    unknown = set(wanted) - set(ALL_METRICS)
    if unknown:
        raise UsageError(f"unknown metrics: {', '.join(sorted(unknown))}")
    img = load_image(args.input).to_array()
    ref = load_image(args.reference).to_array() if args.reference else None
    seed = args.seed if args.seed is not None else 0
    out: dict[str, float | None] = {}
    if "entropy" in wanted:
        out["entropy"] = metrics.entropy(img)
    if "correlation" in wanted:
        for d in metrics.DIRECTIONS:
            out[f"corr_{d}"] = metrics.correlation(img, d, rng=seed)
    if "homogeneity" in wanted:
        out["homogeneity"] = metrics.homogeneity(metrics.glcm(img, args.levels))
    if "energy" in wanted:
        out["energy"] = metrics.energy(metrics.glcm(img, args.levels))
    pairwise = {"npcr", "uaci", "mse", "psnr", "ssim"} & set(wanted)
    if pairwise and ref is None and args.metrics:
        raise UsageError(f"{', '.join(sorted(pairwise))} need --reference")
    if ref is not None:
        for name in ("npcr", "uaci", "mse", "psnr", "ssim"):
            if name in wanted:
                out[name] = getattr(metrics, name)(ref, img)
    if args.json:
        print(json.dumps({k: (None if v == float("inf") else v) for k, v in out.items()}))
    else:
        for k, v in out.items():
            print(f"{k:<16} {v:.6f}" if v != float("inf") else f"{k:<16} inf")
    return EXIT_OK


def _add_cipher_flags(p):
    p.add_argument("--key", help="AES-128 key as 32 hex characters")
    p.add_argument("--key-file", help="file holding the raw 16-byte key")
    p.add_argument("--seeds", help="chaotic seed overrides, e.g. mask=0.5,perm=0.75,shift=0.7,shuffle=0.37")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaosaes",
        description="Chaos-driven AES-128 image encryption, QR key distribution and security metrics.",
    )
    parser.add_argument("--seed", type=int, help="seed every random choice (reproducible runs)")
    # Also accepted after the subcommand; SUPPRESS keeps the top-level value when omitted there.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encrypt", parents=[common], help="encrypt a grayscale image into an MAE1 container")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    _add_cipher_flags(p)
    p.add_argument("--iv", default="random", help="random | paper | 32 hex characters")
    p.add_argument("--fixed-iv", action="store_true", help="same as --iv paper")
    p.add_argument("--post-shuffle", action="store_true")
    p.add_argument("--cipher-image", help="also write the ciphertext as a viewable image")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", parents=[common], help="decrypt an MAE1 container to an image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    _add_cipher_flags(p)
    p.add_argument("--verify-against", help="plain image to compare with (prints SSIM)")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("keygen", parents=[common], help="generate an ElGamal key pair or an AES key")
    p.add_argument("--private")
    p.add_argument("--public")
    p.add_argument("--group", choices=("modp2048", "test64"), default="modp2048")
    p.add_argument("--aes", action="store_true", help="print a fresh 16-byte key as hex instead")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("package", parents=[common], help="build a stego QR carrying the session key")
    p.add_argument("--static-key", required=True)
    p.add_argument("--dynamic-key", required=True)
    p.add_argument("--public", required=True, help="recipient ElGamal public key file")
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--meta")
    p.set_defaults(func=cmd_package)

    p = sub.add_parser("recover", parents=[common], help="recover the session key from a stego QR")
    p.add_argument("--qr", required=True)
    p.add_argument("--private", required=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("analyze", parents=[common], help="security metrics for an image")
    p.add_argument("--in", dest="input")
    p.add_argument("--reference", help="plain image for pairwise metrics")
    p.add_argument("--metrics", help=f"comma list from {','.join(ALL_METRICS)}")
    p.add_argument("--levels", type=int, default=8, help="GLCM quantization levels")
    p.add_argument("--seeds", help="chaotic seed overrides for --reproduce-paper")
    p.add_argument("--reproduce-paper", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ChaosError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, UnidentifiedImageError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (
        ip.ContainerError,
        stego.StegoError,
        qr.QrError,
        protocol.PayloadError,
        KeyFileError,
    ) as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (protocol.KeyUnwrapError, elgamal.ElGamalError, hint.HintError) as exc:
        print(f"crypto error: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
