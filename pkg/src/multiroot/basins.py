"""Basins of attraction on a grid of the complex plane.

Every grid point is iterated with one of the methods in hardware double
precision until it comes within ``tol`` of a known root (converged) or the
iteration cap is hit, a step fails or the orbit leaves the finite numbers
(diverged). Images are written as binary PPM.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .methods import MethodSpec, apply_map
from .problems import Problem
from .scalar import DOUBLE

DIVERGED = -1
DEFAULT_CAP = 100
DEFAULT_TOL = 1e-3


@dataclass(frozen=True)
class GridSpec:
    re_min: float = -3.0
    re_max: float = 3.0
    im_min: float = -3.0
    im_max: float = 3.0
    width: int = 256
    height: int = 256

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("grid bounds must satisfy min < max")
        if self.width < 1 or self.height < 1:
            raise ValueError("grid needs at least one pixel")

    def real_axis(self) -> np.ndarray:
        i = np.arange(self.width, dtype=np.float64)
        return self.re_min + (i + 0.5) * ((self.re_max - self.re_min) / self.width)

    def imag_axis(self) -> np.ndarray:
        # row 0 is the top of the picture
        j = np.arange(self.height, dtype=np.float64)
        return self.im_max - (j + 0.5) * ((self.im_max - self.im_min) / self.height)

    def point(self, i: int, j: int) -> complex:
        """Centre of pixel (column i, row j)."""
        return complex(self.real_axis()[i], self.imag_axis()[j])

    def points(self) -> np.ndarray:
        return self.real_axis()[None, :] + 1j * self.imag_axis()[:, None]


@dataclass(frozen=True)
class PixelOutcome:
    root_index: int
    iterations: int
    final: complex = 0j

    @property
    def converged(self) -> bool:
        return self.root_index != DIVERGED


@dataclass
class BasinImage:
    grid: GridSpec
    problem: str
    spec: MethodSpec
    roots: np.ndarray
    root_index: np.ndarray  # (height, width), DIVERGED for black pixels
    iterations: np.ndarray  # (height, width)
    final: np.ndarray  # last iterate of every orbit
    cap: int = DEFAULT_CAP
    tol: float = DEFAULT_TOL
    meta: dict = field(default_factory=dict)

    def outcome(self, i: int, j: int) -> PixelOutcome:
        return PixelOutcome(int(self.root_index[j, i]), int(self.iterations[j, i]), complex(self.final[j, i]))

    @property
    def diverged_count(self) -> int:
        return int(np.count_nonzero(self.root_index == DIVERGED))

    def counts(self) -> dict:
        out = {f"root{k}": int(np.count_nonzero(self.root_index == k)) for k in range(len(self.roots))}
        out["diverged"] = self.diverged_count
        return out


def _orbits(p: Problem, spec: MethodSpec, z0: np.ndarray, roots: np.ndarray, cap: int, tol: float):
    """Iterate a flat array of starting points; returns (index, iterations, final)."""
    n = z0.size
    idx = np.full(n, DIVERGED, dtype=np.int16)
    its = np.zeros(n, dtype=np.int16)
    final = z0.astype(np.complex128).copy()
    active = np.arange(n)
    z = final.copy()

    def settle(step_no):
        nonlocal active, z
        with np.errstate(all="ignore"):
            dist = np.abs(z[:, None] - roots[None, :])
        nearest = np.argmin(dist, axis=1)
        hit = dist[np.arange(len(z)), nearest] <= tol
        done = active[hit]
        idx[done] = nearest[hit]
        its[done] = step_no
        keep = ~hit
        active, z = active[keep], z[keep]

    settle(0)
    for k in range(1, cap + 1):
        if active.size == 0:
            break
        z = apply_map(p, spec, z)
        final[active] = z
        bad = ~np.isfinite(z)
        if bad.any():
            its[active[bad]] = k
            active, z = active[~bad], z[~bad]
        settle(k)
    its[active] = cap
    return idx, its, final


def _root_array(p: Problem) -> np.ndarray:
    roots = np.array(p.roots(DOUBLE), dtype=np.complex128)
    if roots.size == 0:
        raise ValueError(f"{p.name} has no known roots")
    return roots


def classify_orbit(p: Problem, spec: MethodSpec, z0: complex, cap: int = DEFAULT_CAP,
                   tol: float = DEFAULT_TOL) -> PixelOutcome:
    """Outcome of the orbit from a single starting point.

    Uses the same vectorised kernel as :func:`render`, so the result is
    identical to the corresponding pixel of a rendered image.
    """
    idx, its, final = _orbits(p, spec, np.array([z0], dtype=np.complex128), _root_array(p), cap, tol)
    return PixelOutcome(int(idx[0]), int(its[0]), complex(final[0]))


def render(p: Problem, spec: Optional[MethodSpec] = None, grid: GridSpec = GridSpec(), cap: int = DEFAULT_CAP,
           tol: float = DEFAULT_TOL, block_rows: int = 16, workers: int = 1,
           order: Optional[Sequence[int]] = None) -> BasinImage:
    """Classify every pixel of ``grid``.

    The grid is processed in fixed blocks of ``block_rows`` rows; ``order``
    (a permutation of block numbers) and ``workers`` only change the schedule,
    never the result.
    """
    if spec is None:
        spec = MethodSpec("mpp", p.multiplicity)
    roots = _root_array(p)
    pts = grid.points()
    h, w = pts.shape
    idx = np.empty((h, w), dtype=np.int16)
    its = np.empty((h, w), dtype=np.int16)
    final = np.empty((h, w), dtype=np.complex128)
    blocks = [(s, min(s + block_rows, h)) for s in range(0, h, block_rows)]
    if order is None:
        order = range(len(blocks))
    elif sorted(order) != list(range(len(blocks))):
        raise ValueError("order must be a permutation of the block indices")

    def run(b):
        lo, hi = blocks[b]
        r_idx, r_its, r_fin = _orbits(p, spec, pts[lo:hi].ravel(), roots, cap, tol)
        idx[lo:hi] = r_idx.reshape(hi - lo, w)
        its[lo:hi] = r_its.reshape(hi - lo, w)
        final[lo:hi] = r_fin.reshape(hi - lo, w)

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            list(ex.map(run, order))
    else:
        for b in order:
            run(b)
    return BasinImage(grid, p.name, spec, roots, idx, its, final, cap, tol)


# --- colouring ----------------------------------------------------------


def _hsv_to_rgb(h: Fraction, s: Fraction, v: Fraction) -> tuple[int, int, int]:
    h6 = h * 6
    sector = int(h6) % 6
    frac = h6 - int(h6)
    p = v * (1 - s)
    q = v * (1 - s * frac)
    t = v * (1 - s * (1 - frac))
    rgb = [(v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)][sector]
    # round half up, exactly
    return tuple(int(c * 255 + Fraction(1, 2)) for c in rgb)


def pixel_color(k: int, n_roots: int, iterations: int, cap: int = DEFAULT_CAP) -> tuple[int, int, int]:
    """Hue k/K, full saturation, brightness 0.3 + 0.7 max(0, 1 - n/cap)."""
    v = Fraction(3, 10) + Fraction(7, 10) * max(Fraction(0), 1 - Fraction(iterations, cap))
    return _hsv_to_rgb(Fraction(k, n_roots), Fraction(1), v)


@lru_cache(maxsize=64)
def palette(n_roots: int, cap: int) -> np.ndarray:
    """(n_roots, cap + 1, 3) uint8 lookup of converged pixel colours."""
    lut = np.zeros((n_roots, cap + 1, 3), dtype=np.uint8)
    for k in range(n_roots):
        for n in range(cap + 1):
            lut[k, n] = pixel_color(k, n_roots, n, cap)
    lut.setflags(write=False)
    return lut


def rgb_array(img: BasinImage) -> np.ndarray:
    lut = palette(len(img.roots), img.cap)
    out = np.zeros(img.root_index.shape + (3,), dtype=np.uint8)
    ok = img.root_index != DIVERGED
    out[ok] = lut[img.root_index[ok], np.minimum(img.iterations[ok], img.cap)]
    return out


def encode_image(img: BasinImage) -> bytes:
    """Binary PPM (P6, maxval 255), rows from the top."""
    h, w = img.root_index.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + rgb_array(img).tobytes()


encode_ppm = encode_image


def default_filename(img: BasinImage) -> str:
    return f"{img.problem}_{img.spec.kind}_{img.grid.width}x{img.grid.height}.ppm"


def write_ppm(img: BasinImage, path=None) -> Path:
    path = Path(path) if path is not None else Path(default_filename(img))
    path.write_bytes(encode_image(img))
    return path


def image_digest(img: BasinImage) -> str:
    return hashlib.sha256(encode_image(img)).hexdigest()


# problem names and multiplicities of the reference figure panels
FIGURES = {
    1: ("pp", [("p1", 1), ("p2", 1), ("p3", 1)]),
    2: ("mpp", [("p1pow5", 5), ("p2pow3", 3), ("p1pow2", 2)]),
    3: ("osada", [("p1pow5", 5), ("p2pow3", 3), ("p1pow2", 2)]),
    4: ("dong", [("p1pow5", 5), ("p2pow3", 3), ("p1pow2", 2)]),
    5: ("chun", [("p1pow5", 5), ("p2pow3", 3), ("p1pow2", 2)]),
}


def figure_panels(number: int) -> list[tuple[str, MethodSpec]]:
    kind, panels = FIGURES[number]
    return [(name, MethodSpec(kind, m)) for name, m in panels]
