"""Generation and rendering of self-similar measures and attractors.

Provides exact cylinder-point enumeration, truncated i.i.d. sampling of the
stationary measure, rasterization to a density grid with PGM export, and the
structural constructions (convolution systems, decimation, the planar gasket,
ratio rotation).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .config import node_budget, stream
from .core import IFSSpec, _as_complex
from .errors import BudgetError, ValidationError
from .utils import parallel_map

_SAMPLE_CHUNK = 1 << 16


@dataclass(frozen=True)
class PointCloud:
    """Sampled points of a stationary measure, with truncation metadata."""

    points: np.ndarray  # complex128
    seed: int
    truncation_n: int
    tail_radius: float

    @property
    def count(self) -> int:
        return int(self.points.shape[0])


@dataclass(frozen=True)
class DensityGrid:
    """Cell masses on a rectangular grid.

    cells has shape (ny, nx); row 0 is the top of the bounding box so the
    array writes directly as an image.  total_mass + clipped_mass equals the
    deposited mass (1 for a full point cloud).
    """

    bounds: tuple[float, float, float, float]  # xmin, xmax, ymin, ymax
    nx: int
    ny: int
    cells: np.ndarray
    total_mass: float
    clipped_mass: float


def cylinder_points(spec: IFSSpec, n: int, budget: int | None = None) -> np.ndarray:
    """All level-n cylinder sums a_{i_1} + lam*a_{i_2} + ... in word order.

    Words are ordered lexicographically with the first letter most
    significant; the first letter carries lam**0.
    """
    if n < 0:
        raise ValidationError("n", f"level must be >= 0, got {n}")
    m = spec.arity
    cap = node_budget(budget)
    total = m**n
    if total > cap:
        raise BudgetError(
            f"cylinder enumeration needs m**n = {m}**{n} = {total} points, budget is {cap}",
            required=total,
            budget=cap,
        )
    a = np.asarray(spec.translations, dtype=np.complex128)
    pts = np.zeros(1, dtype=np.complex128)
    power = 1.0 + 0.0j
    for _ in range(n):
        pts = (pts[:, None] + power * a[None, :]).ravel()
        power *= spec.lam
    return pts


def truncation_depth(spec: IFSSpec, tol: float) -> tuple[int, float]:
    """Smallest N with max|a| * |lam|**(N+1) / (1-|lam|) <= tol, and that bound."""
    if not (tol > 0.0):
        raise ValidationError("tol", f"tolerance must be positive, got {tol!r}")
    r = abs(spec.lam)
    amax = max(abs(a) for a in spec.translations)
    n = 0
    while amax * r ** (n + 1) / (1.0 - r) > tol:
        n += 1
    return n, amax * r ** (n + 1) / (1.0 - r)


def sample_measure(
    spec: IFSSpec,
    count: int,
    seed: int,
    tol: float = 1e-9,
    threads: int = 1,
) -> PointCloud:
    """Draw `count` i.i.d. points of the stationary measure, truncated at tol.

    Deterministic in (spec, count, seed, tol): chunk c of the output uses the
    counter-based stream (seed, c), so any thread count yields identical
    points.
    """
    if count <= 0:
        raise ValidationError("count", f"sample count must be positive, got {count}")
    n_trunc, tail_radius = truncation_depth(spec, tol)
    a = np.asarray(spec.translations, dtype=np.complex128)
    p = np.asarray(spec.weights, dtype=np.float64)
    p = p / p.sum()
    powers = spec.lam ** np.arange(n_trunc + 1)
    ranges = [(c, min(_SAMPLE_CHUNK, count - c * _SAMPLE_CHUNK)) for c in range((count + _SAMPLE_CHUNK - 1) // _SAMPLE_CHUNK)]

    def draw(chunk: tuple[int, int]) -> np.ndarray:
        cid, size = chunk
        rng = stream(seed, cid)
        idx = rng.choice(spec.arity, size=(size, n_trunc + 1), p=p)
        return a[idx] @ powers

    parts = parallel_map(draw, ranges, threads=threads)
    points = np.concatenate(parts) if len(parts) > 1 else parts[0]
    return PointCloud(points=points, seed=seed, truncation_n=n_trunc, tail_radius=tail_radius)


def auto_bounds(points: np.ndarray, margin: float = 0.01) -> tuple[float, float, float, float]:
    """Tight bounding box of the points, padded by a relative margin."""
    xs, ys = points.real, points.imag
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    pad = margin * max(xmax - xmin, ymax - ymin, 1e-12)
    return (xmin - pad, xmax + pad, ymin - pad, ymax + pad)


def rasterize(
    cloud: PointCloud | np.ndarray,
    bounds: tuple[float, float, float, float] | None = None,
    nx: int = 512,
    ny: int = 512,
) -> DensityGrid:
    """Deposit 1/count of mass per point into its containing cell.

    Points outside the bounds are tallied as clipped mass, never wrapped.
    """
    points = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud)
    if nx <= 0 or ny <= 0:
        raise ValidationError("resolution", f"grid resolution must be positive, got {(nx, ny)}")
    if bounds is None:
        bounds = auto_bounds(points)
    xmin, xmax, ymin, ymax = (float(b) for b in bounds)
    if not (xmin < xmax and ymin < ymax):
        raise ValidationError("bounds", f"need xmin < xmax and ymin < ymax, got {bounds}")
    count = points.shape[0]
    ix = np.floor((points.real - xmin) / (xmax - xmin) * nx).astype(np.int64)
    iy = np.floor((ymax - points.imag) / (ymax - ymin) * ny).astype(np.int64)
    inside = (ix >= 0) & (ix < nx) & (iy >= 0) & (iy < ny)
    flat = iy[inside] * nx + ix[inside]
    cells = np.bincount(flat, minlength=nx * ny).astype(np.float64).reshape(ny, nx)
    cells /= count
    total = float(inside.sum()) / count
    return DensityGrid(
        bounds=(xmin, xmax, ymin, ymax),
        nx=nx,
        ny=ny,
        cells=cells,
        total_mass=total,
        clipped_mass=1.0 - total,
    )


def save_pgm(grid: DensityGrid, path) -> None:
    """Write the grid as a binary 16-bit PGM, max-normalized."""
    peak = float(grid.cells.max())
    if peak > 0.0:
        img = np.rint(grid.cells / peak * 65535.0).astype(">u2")
    else:
        img = np.zeros((grid.ny, grid.nx), dtype=">u2")
    header = f"P5\n{grid.nx} {grid.ny}\n65535\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(img.tobytes())


def grid_sidecar(grid: DensityGrid) -> dict:
    """JSON-ready metadata accompanying a PGM export."""
    return {
        "bounds": [float(b) for b in grid.bounds],
        "nx": grid.nx,
        "ny": grid.ny,
        "total_mass": grid.total_mass,
        "clipped_mass": grid.clipped_mass,
        "max_cell_mass": float(grid.cells.max()),
    }


def save_grid(grid: DensityGrid, pgm_path, json_path) -> None:
    save_pgm(grid, pgm_path)
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(grid_sidecar(grid), fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_points_csv(cloud: PointCloud | np.ndarray, path) -> None:
    """Write points as CSV rows re,im with a header."""
    points = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("re,im\n")
        for z in points:
            fh.write(f"{float(z.real)!r},{float(z.imag)!r}\n")


def convolution_ifs(spec: IFSSpec, u: complex) -> IFSSpec:
    """System whose measure is the convolution of the measure with its
    u-scaled copy: translations a_i + u*a_j (i major), product weights.

    Duplicate translations are allowed; they occur precisely at exact
    overlaps of the convolution.
    """
    u = _as_complex(u, "u")
    m = spec.arity
    trans = tuple(spec.translations[i] + u * spec.translations[j] for i in range(m) for j in range(m))
    weights = tuple(spec.weights[i] * spec.weights[j] for i in range(m) for j in range(m))
    return IFSSpec(
        lam=spec.lam,
        translations=trans,
        weights=weights,
        allow_duplicate_translations=True,
    )


def decimate_ifs(spec: IFSSpec, k: int, budget: int | None = None) -> tuple[IFSSpec, IFSSpec]:
    """Split the measure as mu * eta by keeping every k-th digit.

    eta collects digit positions divisible by k: system (lam**k, a, p).
    mu collects the k-1 positions in between: system (lam**k, c, q) where,
    for each word w of length k-1, c_w = sum_{j=1..k-1} lam**j * a_{w_j} and
    q_w is the product weight.  The Fourier transform factors exactly:
    ft(spec) = ft(mu) * ft(eta).
    """
    if not isinstance(k, int) or k < 2:
        raise ValidationError("k", f"decimation step must be an integer >= 2, got {k!r}")
    m = spec.arity
    cap = node_budget(budget)
    if m ** (k - 1) > cap:
        raise BudgetError(
            f"decimation needs m**(k-1) = {m}**{k-1} = {m**(k-1)} translations, budget is {cap}",
            required=m ** (k - 1),
            budget=cap,
        )
    a = np.asarray(spec.translations, dtype=np.complex128)
    p = np.asarray(spec.weights, dtype=np.float64)
    c = np.zeros(1, dtype=np.complex128)
    q = np.ones(1, dtype=np.float64)
    power = spec.lam
    for _ in range(k - 1):
        c = (c[:, None] + power * a[None, :]).ravel()
        q = (q[:, None] * p[None, :]).ravel()
        power *= spec.lam
    mu = IFSSpec(
        lam=spec.lam**k,
        translations=tuple(c.tolist()),
        weights=tuple(q.tolist()),
        allow_duplicate_translations=True,
    )
    eta = IFSSpec(
        lam=spec.lam**k,
        translations=spec.translations,
        weights=spec.weights,
        allow_duplicate_translations=spec.allow_duplicate_translations,
    )
    return mu, eta


def gasket_spec(lam: float) -> IFSSpec:
    """Three-map system on the cube roots of unity with equal weights."""
    lam = float(lam)
    if not (0.0 < lam < 1.0):
        raise ValidationError("lambda", f"gasket ratio must be real in (0, 1), got {lam!r}")
    roots = tuple(np.exp(2j * np.pi * j / 3.0) for j in range(3))
    third = 1.0 / 3.0
    return IFSSpec(lam=complex(lam), translations=roots, weights=(third, third, third))


def rotate_ifs(spec: IFSSpec, omega: complex) -> IFSSpec:
    """Replace the ratio lam by omega*lam for |omega| = 1."""
    omega = _as_complex(omega, "omega")
    if abs(abs(omega) - 1.0) > 1e-12:
        raise ValidationError("omega", f"rotation factor must have modulus 1, got |omega| = {abs(omega)!r}")
    return IFSSpec(
        lam=omega * spec.lam,
        translations=spec.translations,
        weights=spec.weights,
        allow_duplicate_translations=spec.allow_duplicate_translations,
    )
