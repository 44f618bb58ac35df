"""Metric table over the synthetic corpus, next to published reference values."""

from __future__ import annotations

import json
import math

from ..image_pipeline import REFERENCE_IV, REFERENCE_KEY, ChaoticParams, GrayImage, encrypt_image
from . import experiments as ex
from . import metrics

COLUMNS = (
    "entropy",
    "corr_h",
    "corr_v",
    "corr_d",
    "npcr",
    "uaci",
    "key_ssim",
    "homogeneity8",
    "energy16",
)


def reproduce_row(img: GrayImage, params: ChaoticParams | None = None, rng=0) -> dict:
    c = encrypt_image(img, REFERENCE_KEY, REFERENCE_IV, params)
    ci = c.as_image()
    diff = ex.differential(img, REFERENCE_KEY, REFERENCE_IV, params)
    return {
        "entropy": metrics.entropy(ci),
        "corr_h": metrics.correlation(ci, "horizontal", rng=rng),
        "corr_v": metrics.correlation(ci, "vertical", rng=rng),
        "corr_d": metrics.correlation(ci, "diagonal", rng=rng),
        "npcr": diff.npcr,
        "uaci": diff.uaci,
        "key_ssim": ex.key_sensitivity(img, REFERENCE_KEY, REFERENCE_IV, params, cipher=c),
        "homogeneity8": metrics.homogeneity(metrics.glcm(ci, 8)),
        "energy16": metrics.energy(metrics.glcm(ci, 16)),
    }


def published_values(name: str) -> dict:
    photo = ex.STAND_INS.get(name)
    if photo is None:
        return {}
    npcr, uaci = ex.PUBLISHED_DIFFERENTIAL[photo]
    return {
        "photo": photo,
        "entropy": ex.PUBLISHED_ENTROPY[photo],
        "npcr": npcr,
        "uaci": uaci,
        "key_ssim": ex.PUBLISHED_KEY_SENSITIVITY_SSIM[photo],
        "homogeneity8": ex.PUBLISHED_HOMOGENEITY,
        "energy16": ex.PUBLISHED_ENERGY,
    }


def reproduce(images: dict[str, GrayImage], params: ChaoticParams | None = None, rng=0) -> dict:
    return {
        name: {"measured": reproduce_row(img, params, rng), "published": published_values(name)}
        for name, img in images.items()
    }


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float) and not math.isfinite(v):
        return "inf"
    return f"{v:.4f}"


def format_table(results: dict) -> str:
    head = f"{'image':<16}" + "".join(f"{c:>13}" for c in COLUMNS)
    lines = [head, "-" * len(head)]
    for name, row in results.items():
        lines.append(f"{name:<16}" + "".join(f"{_fmt(row['measured'][c]):>13}" for c in COLUMNS))
        ref = row["published"]
        if ref:
            label = f"  ({ref['photo']})"
            lines.append(f"{label:<16}" + "".join(f"{_fmt(ref.get(c)):>13}" for c in COLUMNS))
    return "\n".join(lines)


def to_json(results: dict) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        return v

    return json.dumps(
        {n: {k: {c: clean(v) for c, v in d.items()} for k, d in r.items()} for n, r in results.items()},
        indent=2,
    )
