"""Cylinder separation and overlap diagnostics.

The level-n separation of a system (lam, a, p) is

    Delta_n = min |d_0 + d_1*lam + ... + d_{n-1}*lam**(n-1)|

over coefficient vectors d in D**n minus the zero vector, where D = {a_i -
a_j} is the difference set of the translations (0 included).  Since the
translations are distinct, d = 0 corresponds exactly to equal index words,
so the minimum ranges over distinct word pairs.  Exponentially small or
vanishing Delta_n flags measure concentration; Delta_n = 0 is an exact
overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import node_budget
from .core import Annulus, IFSSpec
from .errors import BudgetError, ContourError, ValidationError


# Concentration classifier: slope of log(Delta_n)/n per step over the final
# third of the record that counts as super-exponential collapse.
SLOPE_THRESHOLD = -0.15

OVERLAP_TOL_RELATIVE = 1e-10


@dataclass(frozen=True)
class SeparationResult:
    """Minimum cylinder gap at one level, with search accounting.

    nodes_expanded counts every coefficient prefix examined; the exhaustive
    scan examines all sum(|D|**k, k=1..n) of them, the pruned search a
    subset.  Ties in the minimum resolve to the lexicographically smallest
    coefficient vector under the canonical (re, im) ordering of D.
    """

    value: float
    argmin_diff: tuple[complex, ...]
    n: int
    nodes_expanded: int
    nodes_pruned: int = 0
    nodes_merged: int = 0
    method: str = "brute"


def difference_set(spec: IFSSpec) -> tuple[complex, ...]:
    """Sorted distinct pairwise differences of the translations, 0 included."""
    vals = {complex(x - y) for x in spec.translations for y in spec.translations}
    return tuple(sorted(vals, key=lambda z: (z.real, z.imag)))


def _has_duplicate_translations(spec: IFSSpec) -> bool:
    return len(set(spec.translations)) != len(spec.translations)


def _check_level(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n", f"separation level must be an integer >= 1, got {n!r}")


def delta_n_brute(spec: IFSSpec, n: int, budget: int | None = None) -> SeparationResult:
    """Exhaustive minimum over D**n minus 0, vectorized.

    Partial sums accumulate left to right in ascending powers of lam, the
    same order the pruned search uses, so both methods return bit-identical
    values.
    """
    _check_level(n)
    if _has_duplicate_translations(spec):
        return SeparationResult(value=0.0, argmin_diff=(0j,) * n, n=n, nodes_expanded=0, method="brute")
    d = np.asarray(difference_set(spec), dtype=np.complex128)
    base = d.shape[0]
    cap = node_budget(budget)
    if base**n > cap:
        raise BudgetError(
            f"exhaustive separation scan needs |D|**n = {base}**{n} = {base**n} vectors, budget is {cap}",
            required=base**n,
            budget=cap,
        )
    sums = np.zeros(1, dtype=np.complex128)
    power = 1.0 + 0.0j
    for _ in range(n):
        # Scalar products go through Python complex arithmetic so each
        # elementary operation matches the pruned search bit for bit.
        prods = np.array([power * complex(x) for x in d], dtype=np.complex128)
        sums = (sums[:, None] + prods[None, :]).ravel()
        power *= spec.lam
    zero_pos = next(i for i, z in enumerate(d) if z == 0)
    zero_index = sum(zero_pos * base**k for k in range(n))
    # Minimize squared magnitudes (re*re + im*im, each operation rounded
    # separately) and take one square root at the end; simd hypot variants
    # would not reproduce scalar arithmetic bit for bit.
    mags2 = sums.real * sums.real + sums.imag * sums.imag
    mags2[zero_index] = np.inf
    flat = int(np.argmin(mags2))
    value = math.sqrt(float(mags2[flat]))
    digits = []
    rem = flat
    for k in range(n):
        digits.append(rem // base ** (n - 1 - k))
        rem %= base ** (n - 1 - k)
    argmin = tuple(complex(d[i]) for i in digits)
    nodes = sum(base**k for k in range(1, n + 1))
    return SeparationResult(value=value, argmin_diff=argmin, n=n, nodes_expanded=nodes, method="brute")


def delta_n_pruned(spec: IFSSpec, n: int, budget: int | None = None) -> SeparationResult:
    """Depth-first minimum with an exact tail bound.

    A prefix with partial sum s at depth k is cut when |s| > best + r_k,
    r_k = max|D| * sum(|lam|**j, j=k..n-1), since the remaining n-k digits
    move the sum by at most r_k and therefore no completion can undercut
    best.  Prefixes with bit-identical partial sums share one subtree (the
    completions then coincide exactly, so collapsing them cannot move the
    minimum).  Powers of lam accumulate by repeated multiplication, the
    same elementary operations as the exhaustive scan, so the returned
    value is bit-identical to it.
    """
    _check_level(n)
    if _has_duplicate_translations(spec):
        return SeparationResult(value=0.0, argmin_diff=(0j,) * n, n=n, nodes_expanded=0, method="pruned")
    d = difference_set(spec)
    base = len(d)
    cap = node_budget(budget)
    r = abs(spec.lam)
    dmax = max(abs(x) for x in d)
    powers = [1.0 + 0.0j]
    for _ in range(n - 1):
        powers.append(powers[-1] * spec.lam)
    tails = [dmax * (r**k - r**n) / (1.0 - r) for k in range(n + 1)]
    zero_pos = next(i for i, z in enumerate(d) if z == 0)

    nonzero = [(x.real * x.real + x.imag * x.imag, i) for i, x in enumerate(d) if i != zero_pos]
    best2, best_pos = min(nonzero)
    best_vec: tuple[int, ...] | None = (best_pos,) + (zero_pos,) * (n - 1)
    # Prune threshold carries a relative slack of a few ulps so the mix of
    # squared comparisons and one square root can never cut a true minimizer.
    slack = 1.0 + 1e-12

    nodes_expanded = 0
    nodes_pruned = 0
    nodes_merged = 0
    seen: list[dict] = [dict() for _ in range(n + 1)]
    # Stack entries: (depth, partial sum, positions so far, all-zero flag)
    stack: list[tuple[int, complex, tuple[int, ...], bool]] = [(0, 0j, (), True)]
    while stack:
        depth, s, positions, allzero = stack.pop()
        if depth == n:
            if allzero:
                continue
            mag2 = s.real * s.real + s.imag * s.imag
            if mag2 < best2 or (mag2 == best2 and (best_vec is None or positions < best_vec)):
                best2 = mag2
                best_vec = positions
            continue
        bound = (math.sqrt(best2) + tails[depth + 1]) * slack
        bound2 = bound * bound
        for pos in range(base - 1, -1, -1):
            child = s + d[pos] * powers[depth]
            nodes_expanded += 1
            if nodes_expanded > cap:
                raise BudgetError(
                    f"pruned separation scan exceeded the node budget {cap} at level {n}",
                    required=nodes_expanded,
                    budget=cap,
                )
            child_zero = allzero and pos == zero_pos
            mag2 = child.real * child.real + child.imag * child.imag
            if mag2 > bound2:
                nodes_pruned += 1
                continue
            key = (child, child_zero)
            level = seen[depth + 1]
            if key in level:
                nodes_merged += 1
                continue
            level[key] = True
            stack.append((depth + 1, child, positions + (pos,), child_zero))

    argmin = tuple(complex(d[i]) for i in (best_vec or ()))
    return SeparationResult(
        value=math.sqrt(best2),
        argmin_diff=argmin,
        n=n,
        nodes_expanded=nodes_expanded,
        nodes_pruned=nodes_pruned,
        nodes_merged=nodes_merged,
        method="pruned",
    )


@dataclass(frozen=True)
class ConcentrationReport:
    """Separation records (n, Delta_n, log(Delta_n)/n) and a classification.

    Classifications: exact-overlap (some Delta_n at or below the overlap
    tolerance), super-exponential-suspect (log(Delta_n)/n still falling
    steeply over the final third), no-concentration-evidence otherwise.
    """

    records: tuple[tuple[int, float, float], ...]
    classification: str
    overlap_tol: float
    overlap_n: int | None
    slope: float | None
    slope_window: tuple[int, ...]
    truncated_at: int | None = None

    def to_dict(self) -> dict:
        return {
            "records": [
                {"n": n, "delta": delta, "log_delta_over_n": (None if math.isinf(y) else y)}
                for n, delta, y in self.records
            ],
            "classification": self.classification,
            "overlap_tol": self.overlap_tol,
            "overlap_n": self.overlap_n,
            "slope": self.slope,
            "slope_window": list(self.slope_window),
            "truncated_at": self.truncated_at,
        }


def _delta_2_exhaustive(spec: IFSSpec, budget: int | None = None) -> float:
    """Level-2 minimum by chunked exhaustive scan of d0 + lam*d1.

    Pruning cannot help at this level when the digit scale dwarfs the
    minimum, so the scan walks the full |D|**2 grid in bounded-memory
    chunks.  Serves as a fallback for alphabets too wide for the search
    tree; the vectorized arithmetic may differ from the tree's value in
    the last bits, which the diagnostic's log-scale records never resolve.
    """
    d = np.array(difference_set(spec), dtype=np.complex128)
    cap = 64 * node_budget(budget)
    if d.size * d.size > cap:
        raise BudgetError(
            f"level-2 exhaustive scan needs {d.size * d.size} evaluations",
            required=d.size * d.size,
            budget=cap,
        )
    zero = np.abs(d) == 0.0
    best = math.inf
    chunk = max(1, (8 << 20) // max(1, d.size))
    for lo in range(0, d.size, chunk):
        hi = min(d.size, lo + chunk)
        sums = d[lo:hi, None] + spec.lam * d[None, :]
        mag2 = sums.real * sums.real + sums.imag * sums.imag
        mag2[np.ix_(zero[lo:hi], zero)] = math.inf
        best = min(best, float(mag2.min()))
    return math.sqrt(best)


def concentration_diagnostic(
    spec: IFSSpec,
    n_max: int = 10,
    overlap_tol: float | None = None,
    slope_threshold: float = SLOPE_THRESHOLD,
    budget: int | None = None,
) -> ConcentrationReport:
    """Track Delta_n for n = 1..n_max and classify the decay shape.

    The default overlap tolerance is 1e-10 relative to Delta_1.  Levels
    whose search would exceed the node budget end the sweep early; the
    classification then rests on the completed prefix (at least two levels,
    with a chunked exhaustive fallback keeping level 2 reachable for wide
    alphabets), and truncated_at records the first level skipped.
    """
    if n_max < 2:
        raise ValidationError("n_max", f"need n_max >= 2, got {n_max}")
    deltas: list[float] = []
    truncated_at: int | None = None
    for n in range(1, n_max + 1):
        try:
            deltas.append(delta_n_pruned(spec, n, budget=budget).value)
        except BudgetError:
            if n == 2:
                deltas.append(_delta_2_exhaustive(spec, budget=budget))
                continue
            truncated_at = n
            break
    depth = len(deltas)
    if overlap_tol is None:
        overlap_tol = OVERLAP_TOL_RELATIVE * deltas[0] if deltas[0] > 0 else 0.0
    records = tuple(
        (n, delta, (math.log(delta) / n if delta > 0.0 else float("-inf")))
        for n, delta in enumerate(deltas, start=1)
    )
    overlap_n = next((n for n, delta, _ in records if delta <= overlap_tol), None)
    slope = None
    window: tuple[int, ...] = ()
    if overlap_n is not None:
        classification = "exact-overlap"
    else:
        start = max(1, depth - max(2, depth // 3))
        window = tuple(range(start, depth + 1))
        ys = [records[n - 1][2] for n in window]
        slope = float(np.polyfit(np.array(window, dtype=float), np.array(ys), 1)[0])
        # Two levels cannot distinguish collapse from the density of a wide
        # alphabet, so the suspect call needs at least three.
        classification = (
            "super-exponential-suspect"
            if slope < slope_threshold and depth >= 3
            else "no-concentration-evidence"
        )
    return ConcentrationReport(
        records=records,
        classification=classification,
        overlap_tol=float(overlap_tol),
        overlap_n=overlap_n,
        slope=slope,
        slope_window=window,
        truncated_at=truncated_at,
    )


def _delta_restricted(
    spec: IFSSpec, levels: int, forbidden_residue: int, k: int, budget: int | None = None
) -> float:
    """Minimum |sum d_m lam**m| over d in D**levels, nonzero, with d_m
    forced to 0 whenever m % k == forbidden_residue.

    Same power ladder and elementary operations as delta_n_pruned, so every
    candidate value here also occurs bit-identically in the unrestricted
    level search: the result is >= the unrestricted minimum by subset
    inclusion, with no rounding caveat.
    """
    d = difference_set(spec)
    base = len(d)
    cap = node_budget(budget)
    r = abs(spec.lam)
    dmax = max(abs(x) for x in d)
    powers = [1.0 + 0.0j]
    for _ in range(levels - 1):
        powers.append(powers[-1] * spec.lam)
    tails = [dmax * (r**m - r**levels) / (1.0 - r) for m in range(levels + 1)]
    zero_pos = next(i for i, z in enumerate(d) if z == 0)
    slack = 1.0 + 1e-12

    best2 = math.inf
    nodes = 0
    seen: list[dict] = [dict() for _ in range(levels + 1)]
    stack: list[tuple[int, complex, bool]] = [(0, 0j, True)]
    while stack:
        depth, s, allzero = stack.pop()
        if depth == levels:
            if allzero:
                continue
            mag2 = s.real * s.real + s.imag * s.imag
            if mag2 < best2:
                best2 = mag2
            continue
        masked = depth % k == forbidden_residue
        bound = (math.sqrt(best2) + tails[depth + 1]) * slack if best2 < math.inf else math.inf
        bound2 = bound * bound
        for pos in range(base - 1, -1, -1):
            if masked and pos != zero_pos:
                continue
            child = s + d[pos] * powers[depth]
            nodes += 1
            if nodes > cap:
                raise BudgetError(
                    f"restricted separation scan exceeded the node budget {cap}",
                    required=nodes,
                    budget=cap,
                )
            child_zero = allzero and pos == zero_pos
            mag2 = child.real * child.real + child.imag * child.imag
            if mag2 > bound2:
                continue
            key = (child, child_zero)
            level = seen[depth + 1]
            if key in level:
                continue
            level[key] = True
            stack.append((depth + 1, child, child_zero))
    return math.sqrt(best2)


@dataclass(frozen=True)
class DecimationCheckRow:
    """One level of the decimation comparison.

    delta_decimated is the level-n separation of the decimated system
    (ratio lam**k, translations c): each of its coefficient chains rewrites
    exactly as a level-(k*n) chain of the base system with zeros in the
    dropped-digit slots (multiples of k, since the c blocks occupy powers
    1..k-1), and it is evaluated in that form with the same arithmetic as
    delta_full, so delta_decimated >= delta_full holds without rounding
    caveats.  delta_block is the analogous quantity for blocks at powers
    0..k-2 (dropped slots at residue k-1).
    """

    n: int
    delta_decimated: float
    delta_block: float
    delta_full: float

    @property
    def ok(self) -> bool:
        return self.delta_decimated >= self.delta_full

    @property
    def ok_block(self) -> bool:
        return self.delta_block >= self.delta_full


def decimation_separation_check(
    spec: IFSSpec,
    k: int,
    n_values,
    budget: int | None = None,
) -> list[DecimationCheckRow]:
    """Compare decimated-system separation against the base system.

    For each n, computes Delta_n of the decimated system (in embedded form,
    and likewise for its power-0 block variant) and Delta_{k*n} of the base
    system.
    """
    if int(k) < 2:
        raise ValidationError("k", f"decimation order must be >= 2, got {k}")
    rows = []
    for n in n_values:
        _check_level(int(n))
        if _has_duplicate_translations(spec):
            rows.append(DecimationCheckRow(n=int(n), delta_decimated=0.0, delta_block=0.0, delta_full=0.0))
            continue
        levels = int(k * n)
        dc = _delta_restricted(spec, levels, 0, int(k), budget=budget)
        db = _delta_restricted(spec, levels, int(k) - 1, int(k), budget=budget)
        dfull = delta_n_pruned(spec, levels, budget=budget).value
        rows.append(
            DecimationCheckRow(
                n=int(n),
                delta_decimated=dc,
                delta_block=db,
                delta_full=dfull,
            )
        )
    return rows


@dataclass(frozen=True)
class OverlapRoot:
    """A ratio where some difference polynomial vanishes."""

    root: complex
    coeffs: tuple[complex, ...]
    residual: float


def overlap_roots(
    diffs,
    max_degree: int,
    annulus: Annulus,
    budget: int | None = None,
) -> list[OverlapRoot]:
    """All ratios inside the annulus killing some nonzero polynomial with
    coefficients in the difference set.

    Polynomials proportional to an already-scanned one are skipped; roots
    are Newton-refined and kept only when |P(root)| <= 1e-12, then
    deduplicated at 1e-10.
    """
    if isinstance(diffs, IFSSpec):
        diffs = difference_set(diffs)
    d = tuple(complex(x) for x in diffs)
    if not d:
        raise ValidationError("diffs", "difference set is empty")
    if max_degree < 1:
        raise ValidationError("max_degree", f"need degree >= 1, got {max_degree}")
    base = len(d)
    cap = node_budget(budget)
    total = base ** (max_degree + 1)
    if total > cap:
        raise BudgetError(
            f"overlap scan needs |D|**(deg+1) = {base}**{max_degree + 1} = {total} polynomials, budget is {cap}",
            required=total,
            budget=cap,
        )
    seen_polys: set[tuple] = set()
    roots: list[OverlapRoot] = []
    for flat in range(total):
        rem = flat
        coeffs = []
        for _ in range(max_degree + 1):
            coeffs.append(d[rem % base])
            rem //= base
        vec = tuple(coeffs)  # index k = coefficient of z**k
        trimmed = _trim_high(vec)
        if len(trimmed) < 2:
            continue  # zero or constant: no roots
        lead_skip = next(i for i, c in enumerate(trimmed) if c != 0)
        core = trimmed[lead_skip:]
        if len(core) < 2:
            continue
        pivot = core[0]
        key = tuple((round((c / pivot).real, 12), round((c / pivot).imag, 12)) for c in core)
        if key in seen_polys:
            continue
        seen_polys.add(key)
        for z in np.roots(list(reversed(core))):
            z = complex(z)
            if not annulus.contains(z, tol=1e-9):
                continue
            z, res = _newton_refine(core, z)
            if res <= 1e-12 and annulus.contains(z, tol=1e-12):
                roots.append(OverlapRoot(root=z, coeffs=vec, residual=res))
    roots.sort(key=lambda o: (o.root.real, o.root.imag, o.residual))
    kept: list[OverlapRoot] = []
    for cand in roots:
        if all(abs(cand.root - other.root) > 1e-10 for other in kept):
            kept.append(cand)
    return kept


def _trim_high(vec: tuple[complex, ...]) -> tuple[complex, ...]:
    last = len(vec)
    while last > 0 and vec[last - 1] == 0:
        last -= 1
    return vec[:last]


def _poly_eval(coeffs, z: complex) -> complex:
    out = 0j
    for c in reversed(coeffs):
        out = out * z + c
    return out


def _poly_derivative(coeffs) -> list[complex]:
    return [k * c for k, c in enumerate(coeffs)][1:]


def _newton_refine(coeffs, z: complex, steps: int = 3) -> tuple[complex, float]:
    deriv = _poly_derivative(coeffs)
    best_z, best_res = z, abs(_poly_eval(coeffs, z))
    for _ in range(steps):
        dp = _poly_eval(deriv, z)
        if dp == 0:
            break
        z = z - _poly_eval(coeffs, z) / dp
        res = abs(_poly_eval(coeffs, z))
        if res < best_res:
            best_z, best_res = z, res
    return best_z, best_res


@dataclass(frozen=True)
class ZeroCountReport:
    """Winding-number count of polynomial zeros inside |z| < radius."""

    radius: float
    count: int
    quadrature_nodes: int
    min_modulus: float


def count_zeros_disk(coeffs, radius: float, max_nodes: int = 1 << 20) -> ZeroCountReport:
    """Count zeros (with multiplicity) inside the disk via the boundary
    argument increment.

    The contour is refined adaptively until adjacent phase steps stay below
    pi/2 and the total winding is within 1e-6 of an integer.  A contour
    point too close to a zero raises ContourError; perturb the radius.
    """
    coeffs = [complex(c) for c in coeffs]
    trimmed = _trim_high(tuple(coeffs))
    if len(trimmed) == 0:
        raise ValidationError("coeffs", "zero polynomial has no well-defined zero count")
    if not (radius > 0.0):
        raise ValidationError("radius", f"need radius > 0, got {radius!r}")
    if len(trimmed) == 1:
        return ZeroCountReport(radius=radius, count=0, quadrature_nodes=0, min_modulus=abs(trimmed[0]))
    scale = sum(abs(c) * radius**k for k, c in enumerate(trimmed))
    nodes = 64
    while True:
        phi = np.linspace(0.0, 2.0 * np.pi, nodes, endpoint=False)
        z = radius * np.exp(1j * phi)
        vals = np.zeros_like(z)
        for c in reversed(trimmed):
            vals = vals * z + c
        min_mod = float(np.abs(vals).min())
        if min_mod < 1e-8 * scale:
            raise ContourError(
                f"contour min |P| = {min_mod:.3e} is below 1e-8 * scale; a zero sits within "
                f"~1e-8 of |z| = {radius}; perturb the radius"
            )
        ratios = np.roll(vals, -1) / vals
        steps = np.angle(ratios)
        total = float(steps.sum())
        winding = round(total / (2.0 * np.pi))
        if float(np.abs(steps).max()) <= 0.5 * np.pi and abs(total / (2.0 * np.pi) - winding) <= 1e-6:
            return ZeroCountReport(
                radius=radius, count=int(winding), quadrature_nodes=nodes, min_modulus=min_mod
            )
        nodes *= 2
        if nodes > max_nodes:
            raise BudgetError(
                f"contour refinement exceeded {max_nodes} nodes without stabilizing", budget=max_nodes
            )
