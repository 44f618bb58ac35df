"""Statistical security metrics for 8-bit grayscale images."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

DIRECTIONS = {
    "horizontal": (0, 1),
    "vertical": (1, 0),
    "diagonal": (1, 1),
}
DEFAULT_PAIRS = 5000

SSIM_SIGMA = 1.5
SSIM_TRUNCATE = 3.5  # radius 5 at sigma 1.5, i.e. an 11x11 window
SSIM_WIN = 11
SSIM_K1 = 0.01
SSIM_K2 = 0.03
MAX_PIXEL = 255.0


class DegenerateSampleWarning(RuntimeWarning):
    """Correlation sample had zero variance; coefficient reported as 0."""


def as_array(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D grayscale image")
    return arr


def _same_shape(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_array(a), as_array(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def _rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def entropy(img) -> float:
    """Shannon entropy of the 256-bin intensity histogram, in bits."""
    arr = as_array(img)
    if arr.size == 0:
        raise ValueError("entropy of an empty image")
    counts = np.bincount(arr.astype(np.uint8).ravel(), minlength=256)
    p = counts[counts > 0] / arr.size
    return float(-(p * np.log2(p)).sum()) + 0.0


def pearson(x, y) -> float:
    """Population correlation coefficient; 0 with a warning when undefined."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx, dy = x - x.mean(), y - y.mean()
    vx, vy = (dx * dx).mean(), (dy * dy).mean()
    if vx == 0.0 or vy == 0.0:
        warnings.warn("zero-variance correlation sample", DegenerateSampleWarning, stacklevel=3)
        return 0.0
    r = (dx * dy).mean() / math.sqrt(vx * vy)
    return float(min(1.0, max(-1.0, r)))


def adjacent_pairs(img, direction: str, n_pairs: int = DEFAULT_PAIRS, rng=None):
    """Randomly sampled (pixel, neighbour) value pairs along ``direction``."""
    arr = as_array(img)
    try:
        dy, dx = DIRECTIONS[direction]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}") from None
    h, w = arr.shape[0] - dy, arr.shape[1] - dx
    if h <= 0 or w <= 0:
        raise ValueError("image too small for adjacent-pixel sampling")
    anchors = h * w
    gen = _rng(rng)
    idx = gen.choice(anchors, size=n_pairs, replace=n_pairs > anchors)
    rows, cols = np.divmod(idx, w)
    return arr[rows, cols], arr[rows + dy, cols + dx]


def correlation(img, direction: str = "horizontal", n_pairs: int = DEFAULT_PAIRS, rng=None) -> float:
    x, y = adjacent_pairs(img, direction, n_pairs, rng)
    return pearson(x, y)


def npcr(e1, e2) -> float:
    a, b = _same_shape(e1, e2)
    return float(np.count_nonzero(a != b) / a.size * 100.0)


def uaci(e1, e2) -> float:
    a, b = _same_shape(e1, e2)
    diff = np.abs(a.astype(np.int16) - b.astype(np.int16))
    return float(diff.mean() / MAX_PIXEL * 100.0)


def mse(a, b) -> float:
    a, b = _same_shape(a, b)
    d = a.astype(np.float64) - b.astype(np.float64)
    return float((d * d).mean())


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(MAX_PIXEL**2 / err)


def ssim(a, b) -> float:
    """Mean SSIM with an 11x11 Gaussian window (sigma 1.5).

    Local statistics use population (biased) moments and border windows are
    excluded from the mean, following the reference formulation of Wang et al.
    """
    a, b = _same_shape(a, b)
    if min(a.shape) < SSIM_WIN:
        raise ValueError(f"SSIM needs images of at least {SSIM_WIN}x{SSIM_WIN}")
    x = a.astype(np.float64)
    y = b.astype(np.float64)

    def blur(v):
        return gaussian_filter(v, sigma=SSIM_SIGMA, truncate=SSIM_TRUNCATE, mode="reflect")

    mx, my = blur(x), blur(y)
    vx = blur(x * x) - mx * mx
    vy = blur(y * y) - my * my
    cxy = blur(x * y) - mx * my
    c1 = (SSIM_K1 * MAX_PIXEL) ** 2
    c2 = (SSIM_K2 * MAX_PIXEL) ** 2
    s = ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2))
    pad = (SSIM_WIN - 1) // 2
    return float(s[pad:-pad, pad:-pad].mean())


@dataclass(frozen=True)
class Glcm:
    levels: int
    offset: tuple[int, int]
    matrix: np.ndarray


def quantize(img, levels: int) -> np.ndarray:
    return (as_array(img).astype(np.int64) * levels) // 256


def glcm(img, levels: int = 8, offset: tuple[int, int] = (1, 0)) -> Glcm:
    """Normalized co-occurrence matrix for neighbour at ``(dx, dy)``."""
    if levels < 2:
        raise ValueError("GLCM needs at least 2 levels")
    q = quantize(img, levels)
    dx, dy = offset
    h, w = q.shape
    if abs(dx) >= w or abs(dy) >= h:
        raise ValueError("offset exceeds image size")
    r0, r1 = max(0, -dy), h - max(0, dy)
    c0, c1 = max(0, -dx), w - max(0, dx)
    src = q[r0:r1, c0:c1]
    dst = q[r0 + dy : r1 + dy, c0 + dx : c1 + dx]
    counts = np.bincount((src * levels + dst).ravel(), minlength=levels * levels)
    matrix = counts.reshape(levels, levels) / counts.sum()
    return Glcm(levels, (dx, dy), matrix)


def homogeneity(g: Glcm) -> float:
    i, j = np.indices(g.matrix.shape)
    return float((g.matrix / (1.0 + np.abs(i - j))).sum())


def energy(g: Glcm) -> float:
    return float((g.matrix**2).sum())


@dataclass
class MetricReport:
    entropy: float
    corr_horizontal: float
    corr_vertical: float
    corr_diagonal: float
    npcr: float | None = None
    uaci: float | None = None
    mse: float | None = None
    psnr: float | None = None
    ssim: float | None = None
    homogeneity: float | None = None
    energy: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)

    def lines(self) -> list[str]:
        out = []
        for k, v in self.as_dict().items():
            if v is None:
                continue
            out.append(f"{k:<16} {v:.6f}" if math.isfinite(v) else f"{k:<16} inf")
        return out


def metric_report(img, reference=None, rng=0, glcm_levels: int = 8) -> MetricReport:
    """Statistics of ``img``; comparisons against ``reference`` when given."""
    gen = _rng(rng)
    rep = MetricReport(
        entropy=entropy(img),
        corr_horizontal=correlation(img, "horizontal", rng=gen),
        corr_vertical=correlation(img, "vertical", rng=gen),
        corr_diagonal=correlation(img, "diagonal", rng=gen),
    )
    g = glcm(img, glcm_levels)
    rep.homogeneity = homogeneity(g)
    rep.energy = energy(g)
    if reference is not None:
        rep.npcr = npcr(reference, img)
        rep.uaci = uaci(reference, img)
        rep.mse = mse(reference, img)
        rep.psnr = psnr(reference, img)
        if min(as_array(img).shape) >= SSIM_WIN:
            rep.ssim = ssim(reference, img)
    return rep
