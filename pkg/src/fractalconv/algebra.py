"""Integer polynomials and algebraic expansion classification.

An expansion theta whose minimal polynomial is monic over the integers, with
exactly one non-real conjugate pair outside the closed unit disk and every
other conjugate strictly inside, makes 1/theta a ratio whose measure keeps
Fourier mass along the frequencies conj(theta)**N: the defects 2*Re(theta**n)
- nearest-integer shrink geometrically, so the transform factors never
leave a neighborhood of +-1 along that ladder.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import node_budget
from .core import Annulus
from .errors import ValidationError

BOUNDARY_TOL = 1e-9

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending power order."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        try:
            coeffs = tuple(int(c) for c in self.coeffs)
        except (TypeError, ValueError) as exc:
            raise ValidationError("coeffs", f"coefficients must be integers, got {self.coeffs!r}") from exc
        if any(int(c) != c for c in self.coeffs):
            raise ValidationError("coeffs", f"coefficients must be integers, got {self.coeffs!r}")
        if len(coeffs) < 2:
            raise ValidationError("coeffs", "need degree >= 1")
        if coeffs[-1] == 0:
            raise ValidationError("coeffs", "leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, z):
        out = 0
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def to_dict(self) -> dict:
        return {"coeffs": list(self.coeffs)}


def _as_poly(poly) -> IntPolynomial:
    if isinstance(poly, IntPolynomial):
        return poly
    return IntPolynomial(tuple(poly))


def poly_roots(poly) -> np.ndarray:
    """All complex roots via the companion matrix, Newton-polished.

    Returns roots sorted by (re, im).  Multiple roots appear with
    multiplicity.
    """
    p = _as_poly(poly)
    coeffs = np.array(p.coeffs, dtype=np.float64)
    raw = np.roots(coeffs[::-1])
    deriv = np.polynomial.polynomial.polyder(coeffs)
    polished = []
    for z in raw:
        z = complex(z)
        best_z, best_res = z, abs(_horner(coeffs, z))
        for _ in range(5):
            dp = _horner(deriv, z)
            if dp == 0:
                break
            z = z - _horner(coeffs, z) / dp
            res = abs(_horner(coeffs, z))
            if res < best_res:
                best_z, best_res = z, res
            else:
                break
        polished.append(best_z)
    return np.array(sorted(polished, key=lambda w: (w.real, w.imag)), dtype=np.complex128)


def _horner(coeffs, z: complex) -> complex:
    out = 0j
    for c in coeffs[::-1]:
        out = out * z + c
    return out


def _integer_divisors(n: int) -> list[int]:
    n = abs(n)
    divs = []
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0:
            divs.append(d)
            if d != n // d:
                divs.append(n // d)
    return sorted(divs)


def _divide_exact(f: tuple[int, ...], g: tuple[int, ...]) -> bool:
    """True when monic g divides f exactly over the integers."""
    rem = list(f)
    dg = len(g) - 1
    while len(rem) - 1 >= dg:
        lead = rem[-1]
        shift = len(rem) - 1 - dg
        for i, c in enumerate(g):
            rem[shift + i] -= lead * c
        while rem and rem[-1] == 0:
            rem.pop()
        if not rem:
            return True
    return all(c == 0 for c in rem)


def _irreducibility_screen(p: IntPolynomial, factor_budget: int) -> str:
    """Returns 'irreducible-screened', 'rational-root', 'factor-found', or
    'budget-exhausted'.

    Monic integer polynomials only have integer rational roots, so linear
    factors reduce to divisor checks of the constant term; higher-degree
    factors are searched exhaustively under the standard coefficient bound
    for monic divisors.  An exhausted search never claims irreducibility.
    """
    deg = p.degree
    c0 = p.coeffs[0]
    if deg == 1:
        return "irreducible-screened"
    if c0 == 0:
        return "rational-root"
    for d in _integer_divisors(c0):
        if p(d) == 0 or p(-d) == 0:
            return "rational-root"
    norm = math.sqrt(sum(c * c for c in p.coeffs))
    budget_left = factor_budget
    for m in range(2, deg // 2 + 1):
        bounds = [math.comb(m, i) * math.ceil(norm) for i in range(m)]
        const_choices = [s * d for d in _integer_divisors(c0) for s in (1, -1) if s * d != 0]
        const_choices = [c for c in const_choices if abs(c) <= bounds[0]]
        space = len(const_choices)
        for b in bounds[1:]:
            space *= 2 * b + 1
        if space > budget_left:
            return "budget-exhausted"
        budget_left -= space
        mid_ranges = [range(-b, b + 1) for b in bounds[1:]]
        for g0 in const_choices:
            for mid in itertools.product(*mid_ranges):
                g = (g0, *mid, 1)
                if _divide_exact(p.coeffs, g):
                    return "factor-found"
    return "irreducible-screened"


@dataclass(frozen=True)
class PisotReport:
    """Classification of a monic integer polynomial's dominant roots.

    classification: complex-pisot | real-pisot | not-pisot | reducible-unknown.
    theta is the dominant root (Im > 0 representative for the complex case);
    lambda_inverse = 1/theta is the associated contraction ratio, and
    lambda_inverse_in_u says whether it falls in the supercritical ring
    (|theta| in (1, sqrt(2)), theta non-real).
    """

    poly: IntPolynomial
    classification: str
    screen: str
    roots: tuple[complex, ...]
    theta: complex | None
    theta_modulus: float | None
    lambda_inverse: complex | None
    lambda_inverse_in_u: bool

    def to_dict(self) -> dict:
        return {
            "poly": self.poly.to_dict(),
            "classification": self.classification,
            "screen": self.screen,
            "roots": [[z.real, z.imag] for z in self.roots],
            "theta": None if self.theta is None else [self.theta.real, self.theta.imag],
            "theta_modulus": self.theta_modulus,
            "lambda_inverse": (
                None if self.lambda_inverse is None else [self.lambda_inverse.real, self.lambda_inverse.imag]
            ),
            "lambda_inverse_in_u": self.lambda_inverse_in_u,
        }


def is_complex_pisot(
    poly,
    boundary_tol: float = BOUNDARY_TOL,
    factor_budget: int = 200_000,
) -> PisotReport:
    """Classify a monic integer polynomial by its root layout.

    complex-pisot: screened irreducible, exactly one non-real conjugate pair
    outside the closed unit disk, all other roots strictly inside.
    real-pisot: one real root outside, all others strictly inside.
    Roots within boundary_tol of the unit circle defeat both.  A screen
    failure (factor found, rational root, or exhausted search) reports
    reducible-unknown and never upgrades to a positive classification.
    """
    p = _as_poly(poly)
    if not p.is_monic:
        raise ValidationError("poly", f"leading coefficient must be 1, got {p.coeffs[-1]}")
    screen = _irreducibility_screen(p, factor_budget)
    roots = tuple(complex(z) for z in poly_roots(p))
    if screen != "irreducible-screened":
        return PisotReport(
            poly=p,
            classification="reducible-unknown",
            screen=screen,
            roots=roots,
            theta=None,
            theta_modulus=None,
            lambda_inverse=None,
            lambda_inverse_in_u=False,
        )
    outside = [z for z in roots if abs(z) > 1.0 + boundary_tol]
    boundary = [z for z in roots if 1.0 - boundary_tol <= abs(z) <= 1.0 + boundary_tol]
    classification = "not-pisot"
    theta = None
    if not boundary:
        if len(outside) == 1 and abs(outside[0].imag) <= boundary_tol * (1.0 + abs(outside[0])):
            classification = "real-pisot"
            theta = complex(outside[0].real, 0.0)
        elif len(outside) == 2:
            z1, z2 = outside
            non_real = min(abs(z1.imag), abs(z2.imag)) > boundary_tol
            conjugate = abs(z1 - z2.conjugate()) <= 1e-9 * max(1.0, abs(z1))
            if non_real and conjugate:
                classification = "complex-pisot"
                theta = z1 if z1.imag > 0 else z2
    lam_inv = None if theta is None else 1.0 / theta
    in_u = (
        classification == "complex-pisot"
        and theta is not None
        and 1.0 < abs(theta) < _SQRT2
    )
    return PisotReport(
        poly=p,
        classification=classification,
        screen=screen,
        roots=roots,
        theta=theta,
        theta_modulus=None if theta is None else abs(theta),
        lambda_inverse=lam_inv,
        lambda_inverse_in_u=in_u,
    )


@dataclass(frozen=True)
class PisotScanResult:
    """Scan output: the surviving reports plus search accounting."""

    reports: tuple[PisotReport, ...]
    scanned: int
    truncated: bool


def pisot_scan(
    max_degree: int,
    coeff_bound: int,
    annulus: Annulus,
    budget: int | None = None,
    progress=None,
) -> PisotScanResult:
    """Scan monic integer polynomials for complex-pisot expansions.

    Degrees 2..max_degree, non-leading coefficients in [-coeff_bound,
    coeff_bound], constant term nonzero.  Keeps classifications with theta
    inside the annulus, deduplicated by theta at 1e-9, sorted by (re, im).
    Degree-1 polynomials have only real roots, so max_degree = 1 yields an
    empty scan.  Exhausting the node budget stops the scan early and sets
    the truncated flag on the partial result.  progress, if given, is called
    once per degree with a summary dict.
    """
    if max_degree < 1:
        raise ValidationError("max_degree", f"need max_degree >= 1, got {max_degree}")
    if coeff_bound < 1:
        raise ValidationError("coeff_bound", f"need coeff_bound >= 1, got {coeff_bound}")
    if annulus.side != "theta":
        raise ValidationError("annulus", "scan needs a theta-side annulus (1 < inner < outer)")
    cap = node_budget(budget)
    found: list[PisotReport] = []
    scanned = 0
    truncated = False
    for deg in range(2, max_degree + 1):
        hits = 0
        deg_scanned = 0
        for tail in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=deg):
            if scanned >= cap:
                truncated = True
                break
            scanned += 1
            deg_scanned += 1
            if tail[0] == 0:
                continue
            report = is_complex_pisot(IntPolynomial((*tail, 1)))
            if report.classification != "complex-pisot":
                continue
            if not annulus.contains(report.theta, tol=1e-12):
                continue
            if any(abs(report.theta - other.theta) <= 1e-9 for other in found):
                continue
            found.append(report)
            hits += 1
        if progress is not None:
            progress(
                {"degree": deg, "scanned": deg_scanned, "new": hits, "total_found": len(found)}
            )
        if truncated:
            break
    found.sort(key=lambda rep: (rep.theta.real, rep.theta.imag))
    return PisotScanResult(reports=tuple(found), scanned=scanned, truncated=truncated)
