"""JPEG-like fixed-rate compression harness.

Each 8x8 block is level shifted by -128, transformed, truncated to its first
``r`` coefficients in scan order, inverse transformed and shifted back.  Only
luma (single channel) images are handled.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core.matrix import ShapeMismatch

BLOCK = 8
SSIM_WINDOW = 8
SSIM_K1, SSIM_K2 = 0.01, 0.03
PEAK = 255.0


class MalformedHeader(ValueError):
    pass


class UnsupportedMaxval(ValueError):
    pass


class InvalidRetention(ValueError):
    pass


@dataclass
class GrayImage:
    """8-bit samples, padded to multiples of 8 by edge replication.

    ``width``/``height`` are the original dimensions; ``samples`` may be
    larger when padding was applied.
    """

    samples: np.ndarray
    width: int = 0
    height: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.uint8)
        if self.samples.ndim != 2:
            raise ShapeMismatch("a gray image is two-dimensional")
        h, w = self.samples.shape
        self.height = self.height or h
        self.width = self.width or w

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    def cropped(self) -> np.ndarray:
        return self.samples[: self.height, : self.width]


def pad_image(pixels: np.ndarray, block: int = BLOCK) -> GrayImage:
    """Edge-replicate to a multiple of ``block``; the padding is recorded."""
    pixels = np.asarray(pixels)
    if pixels.min(initial=0) < 0 or pixels.max(initial=0) > 255:
        raise ValueError("samples must lie in [0, 255]")
    h, w = pixels.shape
    ph, pw = (-h) % block, (-w) % block
    padded = np.pad(pixels, ((0, ph), (0, pw)), mode="edge") if ph or pw else pixels
    return GrayImage(padded.astype(np.uint8), w, h, {"pad_bottom": ph, "pad_right": pw})


_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*(\S+)")


def read_pgm(data: bytes) -> GrayImage:
    """Binary P5 with maxval 255; comments in the header are skipped."""
    pos = 0
    fields = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if not m:
            raise MalformedHeader("truncated PGM header")
        fields.append(m.group(1))
        pos = m.end()
    if fields[0] != b"P5":
        raise MalformedHeader(f"expected P5 magic, got {fields[0]!r}")
    try:
        w, h, maxval = (int(f) for f in fields[1:])
    except ValueError as exc:
        raise MalformedHeader("non-integer PGM header field") from exc
    if w <= 0 or h <= 0:
        raise MalformedHeader("image dimensions must be positive")
    if maxval != 255:
        raise UnsupportedMaxval(f"only maxval 255 is supported, got {maxval}")
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise MalformedHeader("missing whitespace after maxval")
    pos += 1
    raster = data[pos:pos + w * h]
    if len(raster) != w * h:
        raise MalformedHeader(f"expected {w * h} samples, got {len(raster)}")
    return pad_image(np.frombuffer(raster, dtype=np.uint8).reshape(h, w))


def write_pgm(image: GrayImage) -> bytes:
    pixels = image.cropped()
    h, w = pixels.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()


def zigzag_order(n: int = BLOCK) -> list[tuple[int, int]]:
    """JPEG zig-zag scan: (0,0), (0,1), (1,0), (2,0), (1,1), (0,2), ..."""
    cells = [(i, j) for i in range(n) for j in range(n)]
    return sorted(cells, key=lambda c: (c[0] + c[1], c[1] if (c[0] + c[1]) % 2 == 0 else c[0]))


def raster_order(n: int = BLOCK) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n)]


RETAIN_ORDERS = {"zigzag": zigzag_order, "raster": raster_order}


def retention_mask(r: int, order: str = "zigzag", n: int = BLOCK) -> np.ndarray:
    if not 1 <= r <= n * n:
        raise InvalidRetention(f"retained count must be in [1, {n * n}], got {r}")
    if order not in RETAIN_ORDERS:
        raise InvalidRetention(f"unknown retention order {order!r}")
    mask = np.zeros((n, n), dtype=bool)
    for i, j in RETAIN_ORDERS[order](n)[:r]:
        mask[i, j] = True
    return mask


def _blocks(x: np.ndarray) -> np.ndarray:
    h, w = x.shape
    return x.reshape(h // BLOCK, BLOCK, w // BLOCK, BLOCK).swapaxes(1, 2)


def _unblocks(b: np.ndarray) -> np.ndarray:
    nh, nw = b.shape[:2]
    return b.swapaxes(1, 2).reshape(nh * BLOCK, nw * BLOCK)


@dataclass
class CompressionResult:
    retained: int
    rate_percent: float
    psnr_db: float
    ssim: float
    reconstructed: GrayImage


def rate_percent(r: int) -> float:
    return 100.0 * (1.0 - r / (BLOCK * BLOCK))


def reconstruct(image: GrayImage, forward, inverse, r: int, order: str = "zigzag") -> np.ndarray:
    """Float reconstruction (level shift undone, no clamping or rounding)."""
    mask = retention_mask(r, order)
    forward = np.asarray(forward, dtype=float)
    inverse = np.asarray(inverse, dtype=float)
    if forward.shape != (BLOCK, BLOCK) or inverse.shape != (BLOCK, BLOCK):
        raise ShapeMismatch("compress needs an 8x8 forward/inverse pair")
    x = _blocks(image.samples.astype(float) - 128.0)
    y = np.where(mask, forward @ x @ forward.T, 0.0)
    return _unblocks(inverse @ y @ inverse.T) + 128.0


def compress(image: GrayImage, forward, inverse, r: int, order: str = "zigzag") -> CompressionResult:
    """Blockwise transform, keep ``r`` coefficients, reconstruct to 8 bits."""
    rec = np.clip(np.rint(reconstruct(image, forward, inverse, r, order)), 0, 255).astype(np.uint8)
    out = GrayImage(rec, image.width, image.height, dict(image.meta))
    return CompressionResult(r, rate_percent(r), psnr(image, out), ssim(image, out), out)


def sweep_retention(image: GrayImage, forward, inverse, counts: Sequence[int] = range(1, 65),
                    order: str = "zigzag") -> list[CompressionResult]:
    return [compress(image, forward, inverse, r, order) for r in counts]


def _pixels(a) -> np.ndarray:
    return a.cropped() if isinstance(a, GrayImage) else np.asarray(a)


def psnr(a, b) -> float:
    """Peak SNR in dB on the unpadded region; ``inf`` for identical images."""
    a, b = _pixels(a).astype(float), _pixels(b).astype(float)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    err = float(np.mean((a - b) ** 2))
    if err == 0:
        return float("inf")
    return float(10.0 * np.log10(PEAK**2 / err))


def _window_means(x: np.ndarray, w: int) -> np.ndarray:
    """Mean over every ``w x w`` window (unit stride) via an integral image."""
    s = np.zeros((x.shape[0] + 1, x.shape[1] + 1))
    s[1:, 1:] = x.cumsum(0).cumsum(1)
    return (s[w:, w:] - s[:-w, w:] - s[w:, :-w] + s[:-w, :-w]) / (w * w)


def ssim(a, b, window: int = SSIM_WINDOW) -> float:
    """Mean SSIM over all ``window x window`` windows at unit stride."""
    a, b = _pixels(a).astype(float), _pixels(b).astype(float)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    if min(a.shape) < window:
        raise ShapeMismatch(f"image smaller than the {window}x{window} SSIM window")
    c1, c2 = (SSIM_K1 * PEAK) ** 2, (SSIM_K2 * PEAK) ** 2
    # centre first so the second moments do not lose digits
    off = 0.5 * (a.mean() + b.mean())
    a, b = a - off, b - off
    mu_a, mu_b = _window_means(a, window), _window_means(b, window)
    var_a = _window_means(a * a, window) - mu_a**2
    var_b = _window_means(b * b, window) - mu_b**2
    cov = _window_means(a * b, window) - mu_a * mu_b
    mu_a, mu_b = mu_a + off, mu_b + off
    s = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / ((mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2))
    return float(s.mean())
