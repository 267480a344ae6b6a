"""Attractor points, sampling, rasterisation, and the IFS algebra operations."""

import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fractalconv.core import IFSSpec, bernoulli_spec, polar, similarity_dimension
from fractalconv.errors import BudgetError, ValidationError
from fractalconv.fourier import ft_eval
from fractalconv.measure import (
    auto_bounds,
    convolution_ifs,
    cylinder_points,
    decimate_ifs,
    gasket_spec,
    rasterize,
    rotate_ifs,
    sample_measure,
    save_grid,
    save_points_csv,
    truncation_depth,
)
from fractalconv.separation import delta_n_brute


def uniform_spec():
    # real ratio: validate_ifs warns about it, plain construction does not
    return bernoulli_spec(0.5)


# ---------------------------------------------------------------------------
# cylinder points


def test_cylinder_level_one_is_translation_set():
    pts = cylinder_points(bernoulli_spec(0.6 + 0.3j), 1)
    assert sorted(pts.tolist(), key=lambda z: z.real) == [-1, 1]


def test_cylinder_level_two_dyadic():
    spec = IFSSpec(lam=0.5, translations=(0j, 1 + 0j), weights=(0.5, 0.5))
    pts = np.sort_complex(cylinder_points(spec, 2))
    assert np.allclose(pts, [0.0, 0.5, 1.0, 1.5], atol=1e-15)


def test_cylinder_level_three_matches_direct_enumeration():
    spec = IFSSpec(lam=0.5 + 0.3j, translations=(-1 + 0j, 1 + 0j), weights=(0.5, 0.5))
    pts = np.sort_complex(cylinder_points(spec, 3))
    direct = [
        sum(a * spec.lam ** k for k, a in enumerate(word))
        for word in itertools.product(spec.translations, repeat=3)
    ]
    assert np.allclose(pts, np.sort_complex(np.array(direct)), atol=1e-14)


@given(
    st.floats(min_value=0.2, max_value=0.8),
    st.floats(min_value=0.1, max_value=3.0),
    st.integers(min_value=1, max_value=6),
)
def test_cylinder_points_inside_attractor_radius(r, angle, n):
    spec = IFSSpec(lam=polar(r, angle), translations=(-1 + 0j, 1 + 0j, 0.5 + 0.5j), weights=(1 / 3,) * 3)
    pts = cylinder_points(spec, n)
    radius = max(abs(a) for a in spec.translations) / (1 - abs(spec.lam))
    assert np.all(np.abs(pts) <= radius + 1e-12)


def test_cylinder_min_gap_equals_brute_separation():
    # The minimum gap and the brute separation search describe the same number.
    # They accumulate the geometric sums in different orders, so agreement is
    # to the last couple of ulps rather than bit-for-bit.
    for lam in (0.6 + 0.3j, 0.45 - 0.2j):
        spec = IFSSpec(lam=lam, translations=(0j, 1 + 0j), weights=(0.5, 0.5))
        for n in (2, 3, 4):
            pts = cylinder_points(spec, n)
            gap = min(
                abs(p - q) for p, q in itertools.combinations(pts.tolist(), 2)
            )
            value = delta_n_brute(spec, n).value
            assert abs(gap - value) <= 4 * np.spacing(value)


def test_cylinder_budget_guard():
    spec = IFSSpec(lam=0.5 + 0.2j, translations=(0j, 1 + 0j, 2 + 0j), weights=(1 / 3,) * 3)
    with pytest.raises(BudgetError):
        cylinder_points(spec, 20, budget=1000)


# ---------------------------------------------------------------------------
# sampling


def test_truncation_depth_meets_tolerance():
    spec = bernoulli_spec(0.6 + 0.3j)
    n, bound = truncation_depth(spec, 1e-9)
    lam_abs = abs(spec.lam)
    amax = max(abs(a) for a in spec.translations)
    assert bound == pytest.approx(amax * lam_abs ** (n + 1) / (1 - lam_abs), rel=1e-12)
    assert bound <= 1e-9
    # minimality: one level shallower misses the tolerance
    assert amax * lam_abs ** n / (1 - lam_abs) > 1e-9


def test_sampling_is_deterministic_in_seed():
    spec = bernoulli_spec(0.55 + 0.25j)
    one = sample_measure(spec, 256, seed=42)
    two = sample_measure(spec, 256, seed=42)
    other = sample_measure(spec, 256, seed=43)
    assert np.array_equal(one.points, two.points)
    assert not np.array_equal(one.points, other.points)
    assert one.count == 256
    assert one.tail_radius <= 1e-9


def test_sample_mean_symmetric_case():
    cloud = sample_measure(uniform_spec(), 20_000, seed=1)
    mean = cloud.points.real.mean()
    stderr = cloud.points.real.std() / math.sqrt(cloud.count)
    assert abs(mean - 0.0) <= 3 * stderr


def test_sample_mean_shifted_case():
    spec = IFSSpec(lam=0.5, translations=(0j, 1 + 0j), weights=(0.5, 0.5))
    cloud = sample_measure(spec, 20_000, seed=2)
    mean = cloud.points.real.mean()
    stderr = cloud.points.real.std() / math.sqrt(cloud.count)
    # E sum lam^n a = (1/2) / (1 - 1/2)
    assert abs(mean - 1.0) <= 3 * stderr


def test_sample_threads_do_not_change_stream():
    spec = bernoulli_spec(0.55 + 0.25j)
    one = sample_measure(spec, 1000, seed=9, threads=1)
    four = sample_measure(spec, 1000, seed=9, threads=4)
    assert np.array_equal(one.points, four.points)


# ---------------------------------------------------------------------------
# rasterisation


def test_rasterize_single_cell_holds_everything():
    cloud = sample_measure(bernoulli_spec(0.6 + 0.3j), 2000, seed=5)
    grid = rasterize(cloud, nx=1, ny=1)
    assert grid.cells.shape == (1, 1)
    assert grid.total_mass == pytest.approx(1.0, abs=1e-12)
    assert grid.clipped_mass == 0.0


def test_rasterize_conserves_mass_with_clipping():
    cloud = sample_measure(bernoulli_spec(0.6 + 0.3j), 5000, seed=6)
    grid = rasterize(cloud, bounds=(-0.5, 0.5, -0.5, 0.5), nx=32, ny=32)
    assert grid.total_mass + grid.clipped_mass == pytest.approx(1.0, abs=1e-12)
    assert grid.clipped_mass > 0  # the attractor extends past this window
    assert grid.cells.sum() == pytest.approx(grid.total_mass, abs=1e-12)


def test_rasterize_flat_marginal_for_uniform_measure():
    count = 40_000
    cloud = sample_measure(uniform_spec(), count, seed=7)
    nx = 16
    grid = rasterize(cloud, bounds=(-2.0, 2.0, -1.0, 1.0), nx=nx, ny=1)
    col_counts = grid.cells.sum(axis=0) * count
    expected = count / nx
    assert np.all(np.abs(col_counts - expected) < 5 * math.sqrt(expected))


def test_auto_bounds_cover_points():
    pts = np.array([0 + 0j, 1 + 1j, -0.5 - 2j])
    xmin, xmax, ymin, ymax = auto_bounds(pts)
    assert xmin <= -0.5 and xmax >= 1.0 and ymin <= -2.0 and ymax >= 1.0


def test_grid_and_point_files(tmp_path):
    cloud = sample_measure(bernoulli_spec(0.6 + 0.3j), 3000, seed=8)
    grid = rasterize(cloud, nx=32, ny=24)
    pgm = tmp_path / "density.pgm"
    sidecar = tmp_path / "density.json"
    save_grid(grid, pgm, sidecar)
    raw = pgm.read_bytes()
    header, dims, maxval, _ = raw.split(b"\n", 3)
    assert header == b"P5"
    assert dims == b"32 24"
    assert maxval == b"65535"
    payload = raw.split(b"\n", 3)[3]
    assert len(payload) == 32 * 24 * 2  # 16-bit row-major
    meta = json.loads(sidecar.read_text())
    assert meta["nx"] == 32 and meta["ny"] == 24
    assert meta["total_mass"] == pytest.approx(grid.total_mass)
    assert len(meta["bounds"]) == 4

    csv_path = tmp_path / "points.csv"
    save_points_csv(cloud, csv_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "re,im"
    assert len(lines) == 1 + cloud.count
    re, im = lines[1].split(",")
    z = complex(float(re), float(im))
    assert z == cloud.points[0]


# ---------------------------------------------------------------------------
# convolution systems


def test_convolution_overlap_example():
    spec = IFSSpec(lam=0.5 + 0.2j, translations=(0j, 1 + 0j), weights=(0.5, 0.5))
    out = convolution_ifs(spec, 1.0)
    assert out.translations == (0j, 1 + 0j, 1 + 0j, 2 + 0j)
    assert out.weights == (0.25, 0.25, 0.25, 0.25)
    assert out.allow_duplicate_translations


def test_convolution_rotated_copy():
    spec = IFSSpec(lam=0.5 + 0.2j, translations=(0j, 1 + 0j), weights=(0.5, 0.5))
    out = convolution_ifs(spec, 1j)
    assert set(out.translations) == {0j, 1j, 1 + 0j, 1 + 1j}
    assert sum(out.weights) == pytest.approx(1.0, abs=1e-12)


def test_convolution_transform_identity():
    spec = bernoulli_spec(0.55 + 0.3j)
    u = 0.8 - 0.4j
    conv = convolution_ifs(spec, u)
    for xi in (0.3 + 0.1j, -1.2 + 0.7j, 2.0 - 0.5j):
        lhs = ft_eval(conv, xi, tol=1e-10)
        f1 = ft_eval(spec, xi, tol=1e-10)
        f2 = ft_eval(spec, u.conjugate() * xi, tol=1e-10)
        tol = 2 * (lhs.tail_error + f1.tail_error + f2.tail_error)
        assert abs(lhs.value - f1.value * f2.value) <= tol


# ---------------------------------------------------------------------------
# decimation


def test_decimate_two_blocks():
    spec = bernoulli_spec(0.6 + 0.3j)
    mu, eta = decimate_ifs(spec, 2)
    lam2 = spec.lam ** 2
    assert mu.lam == lam2 and eta.lam == lam2
    assert eta.translations == spec.translations
    assert np.allclose(
        np.sort_complex(np.array(mu.translations)),
        np.sort_complex(np.array([spec.lam * a for a in spec.translations])),
    )
    assert mu.weights == spec.weights


def test_decimate_three_blocks_dyadic():
    lam = 0.5 + 0.2j
    spec = IFSSpec(lam=lam, translations=(0j, 1 + 0j), weights=(0.3, 0.7))
    mu, eta = decimate_ifs(spec, 3)
    want = np.sort_complex(np.array([0j, lam ** 2, lam, lam + lam ** 2]))
    assert np.allclose(np.sort_complex(np.array(mu.translations)), want, atol=1e-15)
    # product weights over the two inner letters
    assert sorted(mu.weights) == pytest.approx(sorted((0.09, 0.21, 0.21, 0.49)))
    assert eta.lam == lam ** 3 and eta.translations == spec.translations


def test_decimate_transform_identity():
    spec = bernoulli_spec(0.62 + 0.2j)
    mu, eta = decimate_ifs(spec, 3)
    for xi in (0.4 + 0.2j, -1.1 - 0.6j, 1.7 + 0.05j):
        full = ft_eval(spec, xi, tol=1e-10)
        fmu = ft_eval(mu, xi, tol=1e-10)
        feta = ft_eval(eta, xi, tol=1e-10)
        tol = 2 * (full.tail_error + fmu.tail_error + feta.tail_error)
        assert abs(full.value - fmu.value * feta.value) <= tol


# ---------------------------------------------------------------------------
# triangle system and rotations


def test_gasket_translations_form_centred_triangle():
    spec = gasket_spec(0.62)
    assert len(spec.translations) == 3
    assert abs(sum(spec.translations)) < 1e-14
    assert all(abs(abs(a) - 1.0) < 1e-14 for a in spec.translations)
    assert spec.weights == (1 / 3, 1 / 3, 1 / 3)


def test_gasket_dimension_threshold():
    crit = 3 ** -0.5
    below = gasket_spec(crit - 0.01)
    above = gasket_spec(crit + 0.01)
    assert similarity_dimension(below.lam, below.weights) < 2.0
    assert similarity_dimension(above.lam, above.weights) > 2.0


def test_rotate_multiplies_ratio():
    spec = bernoulli_spec(0.6 + 0.3j)
    assert rotate_ifs(spec, 1.0) == spec
    omega = polar(1.0, math.pi / 3)
    out = rotate_ifs(spec, omega)
    assert out.lam == omega * spec.lam
    assert out.translations == spec.translations and out.weights == spec.weights


def test_rotate_periodicity():
    spec = bernoulli_spec(0.6 + 0.3j)
    # pi/3 turns: half period after three, full period after six
    omega6 = polar(1.0, math.pi / 3)
    cur = spec
    for _ in range(3):
        cur = rotate_ifs(cur, omega6)
    assert cur.lam == pytest.approx(-spec.lam, abs=1e-14)
    for _ in range(3):
        cur = rotate_ifs(cur, omega6)
    assert cur.lam == pytest.approx(spec.lam, abs=1e-14)
    # pi/6 turns: sign flip after six, identity after twelve
    omega12 = polar(1.0, math.pi / 6)
    cur = spec
    for _ in range(6):
        cur = rotate_ifs(cur, omega12)
    assert cur.lam == pytest.approx(-spec.lam, abs=1e-14)
    for _ in range(6):
        cur = rotate_ifs(cur, omega12)
    assert cur.lam == pytest.approx(spec.lam, abs=1e-13)


def test_rotate_rejects_non_unit_factor():
    with pytest.raises(ValidationError):
        rotate_ifs(bernoulli_spec(0.6 + 0.3j), 1.5 + 0j)


def test_rotate_triangle_symmetry_preserves_transform():
    spec = gasket_spec(0.62)
    rotated = rotate_ifs(spec, polar(1.0, 2 * math.pi / 3))
    for xi in (0.37 + 0.81j, -1.4 + 0.2j, 0.9 - 1.1j):
        a = ft_eval(spec, xi, tol=1e-10)
        b = ft_eval(rotated, xi, tol=1e-10)
        assert abs(a.value - b.value) <= 2 * (a.tail_error + b.tail_error)
