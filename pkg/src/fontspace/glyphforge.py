"""Synthetic parametric font families rendered as pangram bitmaps.

Each family is a jittered variant of 26 fixed stroke skeletons plus a
StyleParams draw; styles are deterministic perturbations of the family base
(bold widens strokes, italic adds shear, light thins, condensed tightens
spacing). Bitmaps are 200x1000 grayscale, 0 = ink, 255 = background.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field, replace

import numpy as np

BITMAP_H = 200
BITMAP_W = 1000
CROP_SIZE = 100

# 35 characters, covers all 26 letters.
PANGRAM = "sphinx of black quartz judge my vow"

STYLE_ORDER = ("regular", "bold", "italic", "light", "condensed")

MANIFEST_COLUMNS = (
    "family_id",
    "style_id",
    "foundry_id",
    "release_date",
    "glyph_count",
    "price",
    "category",
    "tags",
)


class ParamError(ValueError):
    """A StyleParams field is outside its admissible domain."""


class IngestError(ValueError):
    """A corpus file or manifest row failed validation."""


@dataclass(frozen=True)
class StyleParams:
    stroke_width: float = 2.6  # pixels
    slant: float = 0.0         # shear ratio
    curvature: float = 0.5     # in [0, 1]
    serif_weight: float = 0.3  # in [0, 1]
    spacing: float = 9.0       # pixels between characters
    x_height_ratio: float = 0.62

    def validate(self) -> None:
        vals = (self.stroke_width, self.slant, self.curvature,
                self.serif_weight, self.spacing, self.x_height_ratio)
        if not all(np.isfinite(v) for v in vals):
            raise ParamError(f"non-finite style parameter in {self}")
        if self.stroke_width < 1.0:
            raise ParamError(f"stroke_width must be >= 1 pixel, got {self.stroke_width}")
        if not 0.0 <= self.curvature <= 1.0:
            raise ParamError(f"curvature must lie in [0,1], got {self.curvature}")
        if not 0.0 <= self.serif_weight <= 1.0:
            raise ParamError(f"serif_weight must lie in [0,1], got {self.serif_weight}")
        if self.spacing <= 0:
            raise ParamError(f"spacing must be positive, got {self.spacing}")
        if not 0.0 < self.x_height_ratio < 1.0:
            raise ParamError(f"x_height_ratio must lie in (0,1), got {self.x_height_ratio}")


@dataclass
class PangramBitmap:
    pixels: np.ndarray  # uint8, BITMAP_H x BITMAP_W
    family_id: str
    style_id: str
    foundry_id: str

    def validate(self) -> None:
        if self.pixels.shape != (BITMAP_H, BITMAP_W):
            raise IngestError(
                f"{self.family_id}/{self.style_id}: bitmap is {self.pixels.shape}, "
                f"expected {(BITMAP_H, BITMAP_W)}")
        if self.pixels.dtype != np.uint8:
            raise IngestError(f"{self.family_id}/{self.style_id}: pixels must be uint8")


@dataclass
class Crop:
    pixels: np.ndarray  # uint8, CROP_SIZE x CROP_SIZE
    family_id: str
    style_id: str
    char_count: int
    offset: tuple  # (row, col) of the window's top-left corner in the source


@dataclass
class Corpus:
    bitmaps: list
    meta: dict = field(default_factory=dict)  # (family_id, style_id) -> manifest row dict

    def __len__(self):
        return len(self.bitmaps)

    def families(self):
        return sorted({b.family_id for b in self.bitmaps})

    def sorted_bitmaps(self):
        return sorted(self.bitmaps, key=lambda b: (b.family_id, b.style_id))

    def by_family(self):
        out = {}
        for b in self.sorted_bitmaps():
            out.setdefault(b.family_id, []).append(b)
        return out


# --- glyph skeletons ---------------------------------------------------------
#
# Stroke = (x0, y0, x1, y1, bow, flags) in a unit letter box, y = 0 at the top
# of the box and y = 1 at the baseline (descenders exceed 1). bow displaces the
# quadratic control point sideways; flags mark serif terminals (1 start, 2 end).

SKELETONS = {
    "a": [(0.78, 0.25, 0.78, 1.00, 0.00, 2), (0.78, 0.35, 0.78, 0.95, -0.75, 0)],
    "b": [(0.22, 0.00, 0.22, 1.00, 0.00, 3), (0.22, 0.45, 0.22, 0.98, 0.75, 0)],
    "c": [(0.82, 0.15, 0.82, 0.85, -0.95, 3)],
    "d": [(0.78, 0.00, 0.78, 1.00, 0.00, 3), (0.78, 0.45, 0.78, 0.98, -0.75, 0)],
    "e": [(0.15, 0.50, 0.85, 0.50, 0.00, 0), (0.85, 0.50, 0.35, 0.95, 0.50, 2),
          (0.85, 0.50, 0.40, 0.08, 0.50, 0)],
    "f": [(0.50, 0.08, 0.50, 1.00, 0.00, 2), (0.50, 0.08, 0.82, 0.04, -0.35, 0),
          (0.25, 0.38, 0.75, 0.38, 0.00, 0)],
    "g": [(0.78, 0.12, 0.78, 1.30, 0.00, 0), (0.78, 0.20, 0.78, 0.80, -0.80, 0),
          (0.78, 1.30, 0.30, 1.32, 0.30, 2)],
    "h": [(0.22, 0.00, 0.22, 1.00, 0.00, 3), (0.22, 0.55, 0.78, 0.50, -0.50, 0),
          (0.78, 0.55, 0.78, 1.00, 0.00, 2)],
    "i": [(0.50, 0.30, 0.50, 1.00, 0.00, 3), (0.50, 0.05, 0.50, 0.14, 0.00, 0)],
    "j": [(0.60, 0.30, 0.60, 1.25, 0.00, 1), (0.60, 1.25, 0.25, 1.30, 0.35, 2),
          (0.60, 0.05, 0.60, 0.14, 0.00, 0)],
    "k": [(0.22, 0.00, 0.22, 1.00, 0.00, 3), (0.75, 0.40, 0.24, 0.68, 0.00, 1),
          (0.45, 0.60, 0.80, 1.00, 0.00, 2)],
    "l": [(0.50, 0.00, 0.50, 1.00, 0.00, 3)],
    "m": [(0.15, 0.25, 0.15, 1.00, 0.00, 3), (0.15, 0.38, 0.50, 0.38, 0.55, 0),
          (0.50, 0.38, 0.50, 1.00, 0.00, 2), (0.50, 0.38, 0.85, 0.38, 0.55, 0),
          (0.85, 0.40, 0.85, 1.00, 0.00, 2)],
    "n": [(0.20, 0.25, 0.20, 1.00, 0.00, 3), (0.20, 0.40, 0.80, 0.38, 0.55, 0),
          (0.80, 0.40, 0.80, 1.00, 0.00, 2)],
    "o": [(0.50, 0.08, 0.50, 0.95, -0.85, 0), (0.50, 0.08, 0.50, 0.95, 0.85, 0)],
    "p": [(0.22, 0.25, 0.22, 1.32, 0.00, 3), (0.22, 0.30, 0.22, 0.90, 0.80, 0)],
    "q": [(0.78, 0.25, 0.78, 1.32, 0.00, 3), (0.78, 0.30, 0.78, 0.90, -0.80, 0)],
    "r": [(0.25, 0.25, 0.25, 1.00, 0.00, 3), (0.25, 0.45, 0.75, 0.30, 0.45, 2)],
    "s": [(0.78, 0.12, 0.25, 0.30, -0.45, 1), (0.25, 0.30, 0.75, 0.72, 0.55, 0),
          (0.75, 0.72, 0.22, 0.92, -0.45, 2)],
    "t": [(0.45, 0.00, 0.45, 0.90, 0.00, 1), (0.45, 0.90, 0.78, 0.95, 0.35, 2),
          (0.20, 0.30, 0.75, 0.30, 0.00, 0)],
    "u": [(0.20, 0.25, 0.20, 0.75, 0.00, 1), (0.20, 0.75, 0.80, 0.75, -0.55, 0),
          (0.80, 0.25, 0.80, 1.00, 0.00, 2)],
    "v": [(0.20, 0.25, 0.50, 1.00, 0.00, 1), (0.50, 1.00, 0.80, 0.25, 0.00, 2)],
    "w": [(0.15, 0.25, 0.35, 1.00, 0.00, 1), (0.35, 1.00, 0.50, 0.45, 0.00, 0),
          (0.50, 0.45, 0.65, 1.00, 0.00, 0), (0.65, 1.00, 0.85, 0.25, 0.00, 2)],
    "x": [(0.20, 0.25, 0.80, 1.00, 0.00, 3), (0.80, 0.25, 0.20, 1.00, 0.00, 3)],
    "y": [(0.20, 0.25, 0.50, 0.85, 0.00, 1), (0.80, 0.25, 0.35, 1.33, 0.00, 2)],
    "z": [(0.20, 0.28, 0.80, 0.28, 0.00, 1), (0.80, 0.28, 0.20, 0.97, 0.00, 0),
          (0.20, 0.97, 0.80, 0.97, 0.00, 2)],
}

TALL_LETTERS = frozenset("bdfhiklt")
DESCENDER_LETTERS = frozenset("gjpqy")

BASELINE_Y = 150.0
CAP_TOP_Y = 55.0
LEFT_MARGIN = 25.0
CHAR_INK_WIDTH = 18.0  # advance = CHAR_INK_WIDTH + spacing
JITTER = 0.08


def family_jitter(seed: int) -> dict:
    """Per-family perturbation of every skeleton stroke, fixed across styles.

    Uses raw uniform draws only, for cross-version stream stability.
    """
    rng = np.random.default_rng(seed)
    jit = {}
    for letter in sorted(SKELETONS):
        strokes = SKELETONS[letter]
        jit[letter] = (rng.random((len(strokes), 5)) * 2.0 - 1.0) * JITTER
    return jit


def _segments_of_stroke(x0, y0, x1, y1, bow, n_sub=8):
    """Flatten one quadratic stroke into a polyline of n_sub segments."""
    p0 = np.array([x0, y0])
    p1 = np.array([x1, y1])
    d = p1 - p0
    length = float(np.hypot(d[0], d[1]))
    if length < 1e-9:
        return np.array([p0, p1])
    perp = np.array([d[1], -d[0]]) / length
    ctrl = (p0 + p1) / 2.0 + bow * length * perp
    t = np.linspace(0.0, 1.0, n_sub + 1)[:, None]
    pts = (1 - t) ** 2 * p0 + 2 * t * (1 - t) * ctrl + t**2 * p1
    return pts


def _paint_segments(canvas, pts_list, halfwidths):
    """Darken the canvas with anti-aliased strokes given polyline points."""
    all_pts = np.concatenate(pts_list, axis=0)
    pad = max(halfwidths) + 1.5
    x_lo = max(int(np.floor(all_pts[:, 0].min() - pad)), 0)
    x_hi = min(int(np.ceil(all_pts[:, 0].max() + pad)) + 1, BITMAP_W)
    y_lo = max(int(np.floor(all_pts[:, 1].min() - pad)), 0)
    y_hi = min(int(np.ceil(all_pts[:, 1].max() + pad)) + 1, BITMAP_H)
    if x_lo >= x_hi or y_lo >= y_hi:
        return
    ys, xs = np.mgrid[y_lo:y_hi, x_lo:x_hi]
    px = xs.astype(np.float64)
    py = ys.astype(np.float64)
    ink = np.zeros(px.shape)
    for pts, hw in zip(pts_list, halfwidths):
        for i in range(len(pts) - 1):
            ax, ay = pts[i]
            bx, by = pts[i + 1]
            dx, dy = bx - ax, by - ay
            den = dx * dx + dy * dy
            if den < 1e-12:
                dist = np.hypot(px - ax, py - ay)
            else:
                t = ((px - ax) * dx + (py - ay) * dy) / den
                np.clip(t, 0.0, 1.0, out=t)
                dist = np.hypot(px - (ax + t * dx), py - (ay + t * dy))
            np.maximum(ink, np.clip(hw + 0.5 - dist, 0.0, 1.0), out=ink)
    patch = canvas[y_lo:y_hi, x_lo:x_hi]
    np.minimum(patch, np.rint(255.0 * (1.0 - ink)).astype(np.uint8), out=patch)


def render_pangram(params: StyleParams, jitter: dict) -> np.ndarray:
    """Render the fixed pangram with the given style onto a 200x1000 canvas."""
    params.validate()
    canvas = np.full((BITMAP_H, BITMAP_W), 255, dtype=np.uint8)
    advance = CHAR_INK_WIDTH + params.spacing
    hw = params.stroke_width / 2.0
    serif_len = params.serif_weight * (2.2 * params.stroke_width + 2.0)
    cap_h = BASELINE_Y - CAP_TOP_Y
    bow_scale = 0.35 + 1.3 * params.curvature
    x_pen = LEFT_MARGIN
    for ch in PANGRAM:
        if ch == " ":
            x_pen += advance
            continue
        if ch in TALL_LETTERS:
            top = CAP_TOP_Y
            box_h = cap_h
        else:
            box_h = params.x_height_ratio * cap_h
            top = BASELINE_Y - box_h
        pts_list = []
        hws = []
        for (x0, y0, x1, y1, bow, flags), jit in zip(SKELETONS[ch], jitter[ch]):
            x0j, y0j, x1j, y1j = x0 + jit[0], y0 + jit[1], x1 + jit[2], y1 + jit[3]
            bj = (bow + jit[4]) * bow_scale
            p = _segments_of_stroke(x0j, y0j, x1j, y1j, bj)
            pix = np.empty_like(p)
            pix[:, 0] = x_pen + p[:, 0] * CHAR_INK_WIDTH
            pix[:, 1] = top + p[:, 1] * box_h
            pix[:, 0] += params.slant * (BASELINE_Y - pix[:, 1])
            pts_list.append(pix)
            hws.append(hw)
            if serif_len > 0.5:
                for flag_bit, end in ((1, pix[0]), (2, pix[-1])):
                    if flags & flag_bit:
                        tang = pix[-1] - pix[0] if flag_bit == 1 else pix[-1] - pix[-2]
                        n = np.hypot(tang[0], tang[1])
                        if n < 1e-9:
                            continue
                        perp = np.array([-tang[1], tang[0]]) / n * (serif_len / 2.0)
                        pts_list.append(np.array([end - perp, end + perp]))
                        hws.append(max(0.55 * hw, 0.5))
        _paint_segments(canvas, pts_list, hws)
        x_pen += advance
    return canvas


def style_variant(base: StyleParams, style_id: str) -> StyleParams:
    if style_id == "regular":
        return base
    if style_id == "bold":
        return replace(base, stroke_width=base.stroke_width * 1.8)
    if style_id == "italic":
        return replace(base, slant=base.slant + 0.25)
    if style_id == "light":
        return replace(base, stroke_width=max(base.stroke_width * 0.6, 1.0))
    if style_id == "condensed":
        return replace(base, spacing=base.spacing * 0.7)
    raise ParamError(f"unknown style {style_id!r}")


def generate_family(base: StyleParams, n_styles: int, seed: int,
                    family_id: str | None = None,
                    foundry_id: str = "synthetic") -> list:
    """Render n_styles variants of one family; deterministic in (base, seed)."""
    base.validate()
    if not 1 <= n_styles <= len(STYLE_ORDER):
        raise ParamError(f"n_styles must be in [1,{len(STYLE_ORDER)}], got {n_styles}")
    if family_id is None:
        family_id = f"fam{seed:016x}"
    jitter = family_jitter(seed)
    out = []
    for style_id in STYLE_ORDER[:n_styles]:
        pixels = render_pangram(style_variant(base, style_id), jitter)
        bm = PangramBitmap(pixels, family_id, style_id, foundry_id)
        bm.validate()
        out.append(bm)
    return out


def random_style_params(rng: np.random.Generator) -> StyleParams:
    """Draw a family-base StyleParams from the generator's design ranges."""
    u = rng.random(6)
    return StyleParams(
        stroke_width=1.5 + 3.0 * u[0],
        slant=-0.12 + 0.24 * u[1],
        curvature=0.1 + 0.8 * u[2],
        serif_weight=0.9 * u[3],
        spacing=6.0 + 6.0 * u[4],
        x_height_ratio=0.45 + 0.30 * u[5],
    )


def ink_coverage(pixels: np.ndarray) -> float:
    """Fraction of pixels darker than mid-gray."""
    return float(np.mean(pixels < 128))


# --- crops -------------------------------------------------------------------


def crop_window_width(char_count: int) -> int:
    """Source-column width of a char_count crop: (char_count/20) x half-width."""
    if char_count not in (3, 4, 5, 6, 7):
        raise ParamError(f"char_count must be in 3..7, got {char_count}")
    return int(round(char_count / 20.0 * (BITMAP_W // 2)))


def bilinear_resize(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample with half-pixel centers; returns float64."""
    in_h, in_w = img.shape
    src = img.astype(np.float64)
    ys = (np.arange(out_h) + 0.5) * in_h / out_h - 0.5
    xs = (np.arange(out_w) + 0.5) * in_w / out_w - 0.5
    ys = np.clip(ys, 0.0, in_h - 1.0)
    xs = np.clip(xs, 0.0, in_w - 1.0)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    top = src[np.ix_(y0, x0)] * (1 - wx) + src[np.ix_(y0, x1)] * wx
    bot = src[np.ix_(y1, x0)] * (1 - wx) + src[np.ix_(y1, x1)] * wx
    return top * (1 - wy) + bot * wy


def _window_to_crop(bitmap: PangramBitmap, col0: int, width: int, char_count: int) -> Crop:
    window = bitmap.pixels[:, col0:col0 + width]
    resized = bilinear_resize(window, CROP_SIZE, CROP_SIZE)
    pixels = np.rint(np.clip(resized, 0.0, 255.0)).astype(np.uint8)
    return Crop(pixels, bitmap.family_id, bitmap.style_id, char_count, (0, col0))


def sample_crop(bitmap: PangramBitmap, char_count: int, seed: int) -> Crop:
    """Random 100x100 crop: a char_count-wide window of one half, rescaled."""
    width = crop_window_width(char_count)
    rng = np.random.default_rng(seed)
    half = int(rng.integers(0, 2))
    offset = int(rng.integers(0, BITMAP_W // 2 - width + 1))
    return _window_to_crop(bitmap, half * (BITMAP_W // 2) + offset, width, char_count)


def fixed_crop_grid(bitmap: PangramBitmap, char_count: int = 5, n: int = 8) -> list:
    """Deterministic crop grid used for representative embeddings."""
    width = crop_window_width(char_count)
    per_half = n // 2
    offsets = np.rint(np.linspace(0, BITMAP_W // 2 - width, per_half)).astype(int)
    crops = []
    for half in (0, 1):
        for off in offsets:
            crops.append(_window_to_crop(bitmap, half * (BITMAP_W // 2) + int(off),
                                         width, char_count))
    return crops


# --- PGM + manifest io -------------------------------------------------------


def save_pgm(path: str, pixels: np.ndarray) -> None:
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.astype(np.uint8).tobytes())


def load_pgm(path: str) -> np.ndarray:
    name = os.path.basename(path)
    with open(path, "rb") as fh:
        data = fh.read()
    # header: magic, width, height, maxval tokens; '#' comments allowed
    tokens = []
    pos = 0
    while len(tokens) < 4:
        m = re.match(rb"\s*(#[^\n]*\n|\S+)", data[pos:])
        if m is None:
            raise IngestError(f"{name}: truncated PGM header")
        tok = m.group(1)
        pos += m.end()
        if not tok.startswith(b"#"):
            tokens.append(tok)
    if tokens[0] != b"P5":
        raise IngestError(f"{name}: not a binary PGM (magic {tokens[0]!r})")
    try:
        w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise IngestError(f"{name}: malformed PGM header") from exc
    if maxval != 255:
        raise IngestError(f"{name}: maxval must be 255, got {maxval}")
    # exactly one whitespace byte separates the maxval token from the raster
    raster = data[pos + 1:]
    if len(raster) != w * h:
        raise IngestError(f"{name}: raster has {len(raster)} bytes, expected {w * h}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(h, w).copy()


def bitmap_filename(family_id: str, style_id: str, foundry_id: str) -> str:
    return f"{family_id}__{style_id}__{foundry_id}.pgm"


def default_meta(bitmap: PangramBitmap) -> dict:
    return {
        "family_id": bitmap.family_id,
        "style_id": bitmap.style_id,
        "foundry_id": bitmap.foundry_id,
        "release_date": "",
        "glyph_count": "0",
        "price": "0",
        "category": "",
        "tags": "",
    }


def save_corpus(corpus: Corpus, path: str) -> None:
    """Write PGM files plus manifest.csv; load_corpus restores bit-exactly."""
    os.makedirs(path, exist_ok=True)
    lines = [",".join(MANIFEST_COLUMNS)]
    for bm in corpus.sorted_bitmaps():
        bm.validate()
        fname = bitmap_filename(bm.family_id, bm.style_id, bm.foundry_id)
        save_pgm(os.path.join(path, fname), bm.pixels)
        meta = corpus.meta.get((bm.family_id, bm.style_id)) or default_meta(bm)
        lines.append(",".join(str(meta[c]) for c in MANIFEST_COLUMNS))
    with open(os.path.join(path, "manifest.csv"), "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def load_corpus(path: str) -> Corpus:
    manifest_path = os.path.join(path, "manifest.csv")
    if not os.path.exists(manifest_path):
        raise IngestError(f"{manifest_path}: manifest not found")
    with open(manifest_path, "r") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip() and not ln.startswith("#")]
    header = tuple(lines[0].split(","))
    if header != MANIFEST_COLUMNS:
        raise IngestError(f"manifest.csv: header {header} != {MANIFEST_COLUMNS}")
    bitmaps = []
    meta = {}
    for i, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(MANIFEST_COLUMNS):
            raise IngestError(f"manifest.csv row {i}: {len(cells)} fields, "
                              f"expected {len(MANIFEST_COLUMNS)}")
        row = dict(zip(MANIFEST_COLUMNS, cells))
        fname = bitmap_filename(row["family_id"], row["style_id"], row["foundry_id"])
        fpath = os.path.join(path, fname)
        if not os.path.exists(fpath):
            raise IngestError(f"manifest.csv row {i}: missing bitmap file {fname}")
        pixels = load_pgm(fpath)
        if pixels.shape != (BITMAP_H, BITMAP_W):
            raise IngestError(f"{fname}: bitmap is {pixels.shape[1]}x{pixels.shape[0]}, "
                              f"expected {BITMAP_W}x{BITMAP_H}")
        bm = PangramBitmap(pixels, row["family_id"], row["style_id"], row["foundry_id"])
        bm.validate()
        bitmaps.append(bm)
        meta[(row["family_id"], row["style_id"])] = row
    return Corpus(bitmaps, meta)
