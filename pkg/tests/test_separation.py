"""Exact cylinder-separation search, concentration diagnostic, overlap roots,
and contour zero counting."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fractalconv.core import Annulus, IFSSpec, polar
from fractalconv.config import stream
from fractalconv.errors import BudgetError, ContourError
from fractalconv.separation import (
    concentration_diagnostic,
    count_zeros_disk,
    decimation_separation_check,
    delta_n_brute,
    delta_n_pruned,
    difference_set,
    overlap_roots,
)

GOLDEN = IFSSpec(lam=(5 ** 0.5 - 1) / 2, translations=(0j, 1 + 0j), weights=(0.5, 0.5))


def two_map(lam):
    return IFSSpec(lam=lam, translations=(-1 + 0j, 1 + 0j), weights=(0.5, 0.5))


# ---------------------------------------------------------------------------
# difference sets


def test_difference_set_contains_zero_and_negations():
    diffs = difference_set(two_map(0.6 + 0.3j))
    assert set(diffs) == {-2 + 0j, 0j, 2 + 0j}
    spec3 = IFSSpec(
        lam=0.5 + 0.2j, translations=(0j, 1 + 0j, 1j), weights=(1 / 3,) * 3
    )
    diffs3 = set(difference_set(spec3))
    assert 0j in diffs3
    assert all(-d in diffs3 for d in diffs3)
    assert len(diffs3) == 7


# ---------------------------------------------------------------------------
# brute and pruned searches


def test_level_one_gap_is_translation_gap():
    res = delta_n_brute(two_map(0.6 + 0.3j), 1)
    assert res.value == 2.0
    assert res.n == 1


def test_level_two_example():
    res = delta_n_brute(two_map(0.6 + 0.3j), 2)
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_golden_ratio_overlap_at_level_three():
    assert delta_n_brute(GOLDEN, 3).value <= 1e-12
    assert delta_n_pruned(GOLDEN, 3).value <= 1e-12


def test_reported_argmin_reproduces_value():
    for method in (delta_n_brute, delta_n_pruned):
        res = method(two_map(0.57 + 0.33j), 5)
        recomputed = abs(
            sum(d * (0.57 + 0.33j) ** k for k, d in enumerate(res.argmin_diff))
        )
        assert recomputed == pytest.approx(res.value, rel=1e-12)
        assert any(d != 0 for d in res.argmin_diff)


def test_pruned_equals_brute_on_level_one():
    res_b = delta_n_brute(two_map(0.5 + 0.3j), 1)
    res_p = delta_n_pruned(two_map(0.5 + 0.3j), 1)
    assert res_p.value == res_b.value


@st.composite
def small_systems(draw):
    m = draw(st.integers(min_value=2, max_value=3))
    r = draw(st.floats(min_value=0.25, max_value=0.75))
    ang = draw(st.floats(min_value=0.05, max_value=math.pi - 0.05))
    ints = draw(
        st.lists(
            st.tuples(
                st.integers(min_value=-3, max_value=3),
                st.integers(min_value=-3, max_value=3),
            ),
            min_size=m,
            max_size=m,
            unique=True,
        )
    )
    translations = tuple(complex(a, b) for a, b in ints)
    return IFSSpec(lam=polar(r, ang), translations=translations, weights=(1.0 / m,) * m)


@given(small_systems(), st.integers(min_value=1, max_value=5))
def test_pruned_matches_brute_bit_for_bit(spec, n):
    brute = delta_n_brute(spec, n)
    pruned = delta_n_pruned(spec, n)
    assert pruned.value == brute.value  # exact equality, not approximate


def test_pruned_expands_fewer_nodes_deep():
    spec = two_map(0.55 + 0.3j)
    brute = delta_n_brute(spec, 8)
    pruned = delta_n_pruned(spec, 8)
    assert pruned.value == brute.value
    assert pruned.nodes_expanded < brute.nodes_expanded
    assert pruned.nodes_pruned > 0


def test_delta_nonincreasing_in_level():
    spec = two_map(0.6 + 0.3j)
    values = [delta_n_pruned(spec, n).value for n in range(1, 8)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_scale_equivariance_power_of_two_is_exact():
    base = two_map(0.57 + 0.31j)
    doubled = IFSSpec(
        lam=base.lam,
        translations=tuple(2.0 * a for a in base.translations),
        weights=base.weights,
    )
    for n in (1, 3, 5):
        assert delta_n_pruned(doubled, n).value == 2.0 * delta_n_pruned(base, n).value


def test_scale_equivariance_complex_factor():
    base = two_map(0.57 + 0.31j)
    c = 0.7 + 0.4j
    scaled = IFSSpec(
        lam=base.lam,
        translations=tuple(c * a for a in base.translations),
        weights=base.weights,
    )
    for n in (2, 4):
        assert delta_n_pruned(scaled, n).value == pytest.approx(
            abs(c) * delta_n_pruned(base, n).value, rel=1e-12
        )


def test_brute_budget_guard():
    spec = IFSSpec(
        lam=0.55 + 0.2j,
        translations=(0j, 1 + 0j, 2.3 + 0.4j, -1 + 1j, 0.5 - 0.7j),
        weights=(0.2,) * 5,
    )
    with pytest.raises(BudgetError):
        delta_n_brute(spec, 10, budget=1000)


# ---------------------------------------------------------------------------
# concentration diagnostic


def test_diagnostic_flags_exact_overlap():
    report = concentration_diagnostic(GOLDEN, n_max=6)
    assert report.classification == "exact-overlap"
    assert report.overlap_n == 3
    assert any(delta <= report.overlap_tol for _, delta, _ in report.records)


def test_diagnostic_clean_case_stays_unflagged():
    report = concentration_diagnostic(two_map(0.6 + 0.3j), n_max=12)
    assert report.classification == "no-concentration-evidence"
    assert report.overlap_n is None
    assert all(ratio >= -1.2 for _, _, ratio in report.records)
    assert len(report.records) == 12
    assert report.truncated_at is None


def test_diagnostic_classification_matches_overlap_rule():
    for spec, n_max in ((GOLDEN, 5), (two_map(0.6 + 0.3j), 8)):
        report = concentration_diagnostic(spec, n_max=n_max)
        has_overlap = any(delta <= report.overlap_tol for _, delta, _ in report.records)
        assert (report.classification == "exact-overlap") == has_overlap


def test_diagnostic_truncates_on_budget():
    spec = IFSSpec(
        lam=0.55 + 0.2j,
        translations=(0j, 1 + 0j, 2.3 + 0.4j, -1 + 1j, 0.5 - 0.7j),
        weights=(0.2,) * 5,
    )
    report = concentration_diagnostic(spec, n_max=8, budget=2000)
    assert report.truncated_at is not None
    assert len(report.records) == report.truncated_at - 1


# ---------------------------------------------------------------------------
# block-separation inequality


def test_block_separation_dominates_full_depth():
    rng = stream(31, 0)
    for _ in range(3):
        lam = polar(rng.uniform(0.45, 0.65), rng.uniform(0.2, math.pi - 0.2))
        rows = decimation_separation_check(two_map(lam), 2, (1, 2, 3))
        for row in rows:
            assert row.delta_decimated >= row.delta_full


# ---------------------------------------------------------------------------
# overlap roots


def test_quadratic_overlap_root_found():
    roots = overlap_roots((-1, 0, 1), 2, Annulus(0.5, 0.8))
    golden_inv = (5 ** 0.5 - 1) / 2
    assert any(abs(r.root - golden_inv) <= 1e-8 for r in roots)
    assert all(r.residual <= 1e-12 for r in roots)


def test_linear_polynomials_have_no_interior_roots():
    assert overlap_roots((-1, 0, 1), 1, Annulus(0.1, 0.99)) == []


def test_overlap_roots_lie_in_annulus():
    annulus = Annulus(0.5, 0.8)
    for r in overlap_roots((-1, 0, 1), 3, annulus):
        assert annulus.inner - 1e-10 <= abs(r.root) <= annulus.outer + 1e-10


# ---------------------------------------------------------------------------
# zero counting


def test_count_double_zero_at_origin():
    assert count_zeros_disk((0, 0, 1), 1.0).count == 2


def test_count_mixed_roots():
    # (z - 0.5)(z - 2) = z^2 - 2.5 z + 1
    assert count_zeros_disk((1.0, -2.5, 1.0), 1.0).count == 1


def test_count_rejects_root_on_contour():
    with pytest.raises(ContourError):
        count_zeros_disk((-1.0, 1.0), 1.0)


def test_count_matches_root_finder_tally():
    rng = stream(37, 0)
    diffs = (-2, -1, 0, 1, 2)
    for _ in range(10):
        coeffs = tuple(float(rng.choice(diffs)) for _ in range(9))
        if all(c == 0 for c in coeffs) or coeffs[-1] == 0:
            continue
        roots = np.roots(list(reversed(coeffs)))
        radius = 0.8
        if min(abs(abs(r) - radius) for r in roots) < 1e-6:
            continue  # keep clear of the contour
        want = int(sum(1 for r in roots if abs(r) < radius))
        assert count_zeros_disk(coeffs, radius).count == want
