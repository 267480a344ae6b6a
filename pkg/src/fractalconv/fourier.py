"""Fourier-side analysis of stationary measures.

The transform of the stationary measure of (lam, a, p) at frequency xi is
the infinite product over n >= 0 of sum_j p_j * exp(2*pi*i*Re(lam**n * a_j *
conj(xi))).  Factors approach 1 geometrically, so truncating at depth N
leaves a multiplicative tail controlled by 2*pi*max|a|*|xi|*|lam|**(N+1) /
(1-|lam|); that bound is reported with every evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import IFSSpec, _as_complex
from .errors import PrecisionError, ValidationError
from .separation import ConcentrationReport, concentration_diagnostic
from .utils import parallel_map

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

# Verdict thresholds for ac_report: decay slopes at or below the floor count
# as no-decay evidence; log-space fit residuals above the cap void the fit.
SINGULAR_GAMMA_FLOOR = 0.05
FIT_RESIDUAL_CAP = 1.0


@dataclass(frozen=True)
class FourierSample:
    """One transform evaluation with its truncation certificate."""

    xi: complex
    value: complex
    truncation_n: int
    tail_error: float


def _tail_bound(amax: float, r: float, abs_xi: float, n: int) -> float:
    return 2.0 * math.pi * amax * abs_xi * r ** (n + 1) / (1.0 - r)


def _truncation(spec: IFSSpec, abs_xi: np.ndarray, tol: float) -> np.ndarray:
    """Per-frequency smallest N with the geometric tail bound <= tol."""
    if not (0.0 < tol <= 0.1):
        raise ValidationError("tol", f"tolerance must lie in (0, 0.1], got {tol!r}")
    r = abs(spec.lam)
    amax = max(abs(a) for a in spec.translations)
    scale = 2.0 * math.pi * amax * np.asarray(abs_xi, dtype=np.float64) / (1.0 - r)
    # scale * r**(N+1) <= tol  <=>  N+1 >= log(tol/scale)/log(r)
    with np.errstate(divide="ignore"):
        raw = np.log(tol / np.maximum(scale, 1e-300)) / math.log(r)
    n = np.maximum(0, np.ceil(raw).astype(np.int64) - 1)
    # Guard against edge-of-ulp rounding in the closed form.
    for _ in range(4):
        bad = scale * r ** (n + 1) > tol
        if not bad.any():
            break
        n = np.where(bad, n + 1, n)
    return n


def _ft_batch(spec: IFSSpec, xis: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized transform values, tail errors and truncation depths."""
    xis = np.asarray(xis, dtype=np.complex128)
    abs_xi = np.abs(xis)
    depth = _truncation(spec, abs_xi, tol)
    r = abs(spec.lam)
    amax = max(abs(a) for a in spec.translations)
    tails = 2.0 * math.pi * amax * abs_xi * r ** (depth + 1) / (1.0 - r)
    a = np.asarray(spec.translations, dtype=np.complex128)
    p = np.asarray(spec.weights, dtype=np.float64)
    base = a[:, None] * np.conj(xis)[None, :]  # (m, K)
    values = np.ones(xis.shape, dtype=np.complex128)
    power = 1.0 + 0.0j
    for n in range(int(depth.max()) + 1):
        active = depth >= n
        if not active.any():
            break
        phases = (power * base[:, active]).real
        values[active] *= p @ np.exp(2j * np.pi * phases)
        power *= spec.lam
    return values, tails, depth


def ft_eval(spec: IFSSpec, xi: complex, tol: float = 1e-9) -> FourierSample:
    """Evaluate the transform at one frequency with tail bound <= tol."""
    xi = _as_complex(xi, "xi")
    values, tails, depth = _ft_batch(spec, np.array([xi]), tol)
    return FourierSample(xi=xi, value=complex(values[0]), truncation_n=int(depth[0]), tail_error=float(tails[0]))


def ft_eval_many(spec: IFSSpec, xis, tol: float = 1e-9) -> list[FourierSample]:
    xis = np.asarray(list(xis), dtype=np.complex128)
    values, tails, depth = _ft_batch(spec, xis, tol)
    return [
        FourierSample(xi=complex(x), value=complex(v), truncation_n=int(n), tail_error=float(t))
        for x, v, n, t in zip(xis, values, depth, tails)
    ]


@dataclass(frozen=True)
class AnnulusSup:
    """Sampled supremum of |transform| over the annulus [R, 2R]."""

    R: float
    sup: float
    arg_xi: complex
    samples: int
    tail_error: float


def annulus_frequencies(R: float, samples: int, real_axis: bool = False) -> np.ndarray:
    """Low-discrepancy frequencies covering |xi| in [R, 2R].

    Radii follow a uniform ladder in log scale, angles a golden-ratio
    rotation, so the lattice is quasi-uniform in (angle, log-radius) and
    fully deterministic.  With real_axis the angles collapse to 0.
    """
    s = np.arange(samples, dtype=np.float64)
    radii = R * 2.0 ** ((s + 0.5) / samples)
    if real_axis:
        return radii.astype(np.complex128)
    angles = 2.0 * np.pi * np.mod(s * _GOLDEN, 1.0)
    return radii * np.exp(1j * angles)


def _real_supported(spec: IFSSpec) -> bool:
    return spec.lam.imag == 0.0 and all(a.imag == 0.0 for a in spec.translations)


def ft_sup_on_annulus(
    spec: IFSSpec,
    R: float,
    samples: int = 64,
    tol: float = 1e-9,
    extra_xis=(),
) -> AnnulusSup:
    """Max of |transform| over sampled frequencies with R <= |xi| <= 2R.

    A measure carried by the real line has a transform constant along the
    imaginary frequency direction, so such specs are sampled on the real
    axis where the radial envelope is meaningful; all other specs use the
    full angular lattice.  extra_xis lets callers fold in known probe
    frequencies (kept only when they land in the annulus); either way the
    result is a lower bound for the true supremum.
    """
    if not (R > 0.0):
        raise ValidationError("R", f"annulus radius must be positive, got {R!r}")
    if samples < 8:
        raise ValidationError("samples", f"need at least 8 samples, got {samples}")
    xis = annulus_frequencies(R, samples, real_axis=_real_supported(spec))
    keep = [complex(x) for x in extra_xis if R * (1.0 - 1e-9) <= abs(x) <= 2.0 * R * (1.0 + 1e-9)]
    if keep:
        xis = np.concatenate([xis, np.asarray(keep, dtype=np.complex128)])
    values, tails, _ = _ft_batch(spec, xis, tol)
    mags = np.abs(values)
    best = int(np.argmax(mags))
    return AnnulusSup(
        R=float(R),
        sup=float(mags[best]),
        arg_xi=complex(xis[best]),
        samples=int(xis.shape[0]),
        tail_error=float(tails[best]),
    )


@dataclass(frozen=True)
class DecayEstimate:
    """Power-law fit |transform| ~ C * R**(-gamma) over annulus suprema."""

    gamma_hat: float
    c_hat: float
    r_values: tuple[float, ...]
    sup_values: tuple[float, ...]
    fit_residual: float
    clamped: bool = False

    def to_dict(self) -> dict:
        return {
            "gamma_hat": self.gamma_hat,
            "c_hat": self.c_hat,
            "r_values": list(self.r_values),
            "sup_values": list(self.sup_values),
            "fit_residual": self.fit_residual,
            "clamped": self.clamped,
        }


_SUP_FLOOR = 1e-300


def decay_exponent(
    spec: IFSSpec,
    r_min: float,
    r_max: float,
    n_annuli: int,
    samples: int = 64,
    tol: float = 1e-9,
    probe_xis=None,
    threads: int = 1,
) -> DecayEstimate:
    """Fit log(sup) against log(R) over geometrically spaced annuli.

    gamma_hat is minus the fitted slope.  Suprema that underflow are clamped
    at a tiny floor and flagged.  probe_xis are distributed to every annulus
    whose range contains them.
    """
    if not (1.0 <= r_min < r_max):
        raise ValidationError("r_range", f"need 1 <= r_min < r_max, got ({r_min!r}, {r_max!r})")
    if n_annuli < 4:
        raise ValidationError("n_annuli", f"need at least 4 annuli for a fit, got {n_annuli}")
    ratio = (r_max / r_min) ** (1.0 / (n_annuli - 1))
    radii = [r_min * ratio**i for i in range(n_annuli)]
    probes = [complex(x) for x in (probe_xis or ())]

    def one(R: float) -> AnnulusSup:
        return ft_sup_on_annulus(spec, R, samples=samples, tol=tol, extra_xis=probes)

    sups = parallel_map(one, radii, threads=threads)
    raw = np.array([s.sup for s in sups], dtype=np.float64)
    clamped = bool((raw < _SUP_FLOOR).any())
    vals = np.maximum(raw, _SUP_FLOOR)
    logs = np.log(vals)
    logr = np.log(np.array(radii))
    slope, intercept = np.polyfit(logr, logs, 1)
    residual = float(np.sqrt(np.mean((logs - (slope * logr + intercept)) ** 2)))
    return DecayEstimate(
        gamma_hat=float(-slope),
        c_hat=float(math.exp(intercept)),
        r_values=tuple(float(r) for r in radii),
        sup_values=tuple(float(v) for v in raw),
        fit_residual=residual,
        clamped=clamped,
    )


def aligned_frequencies(theta: complex, n_values) -> list[complex]:
    """Frequencies conj(theta)**n, the directions where an algebraic
    expansion keeps the transform away from zero."""
    theta = _as_complex(theta, "theta")
    return [complex(np.conj(theta) ** int(n)) for n in n_values]


def default_c1(spec: IFSSpec) -> float:
    """0.5 * max over distinct-translation pairs of p_i * p_j."""
    best = 0.0
    m = spec.arity
    for i in range(m):
        for j in range(i + 1, m):
            if spec.translations[i] != spec.translations[j]:
                best = max(best, spec.weights[i] * spec.weights[j])
    if best == 0.0:
        raise ValidationError("weights", "no pair of distinct translations to bound with")
    return 0.5 * best


def ek_upper_bound(theta: complex, t: complex, N: int, c1: float) -> float:
    """prod_{n=1..N} (1 - c1 * ||Re(theta**n * t)||**2), ||.|| = distance
    to the nearest integer.

    Dominates |transform| at xi with conj(xi) = theta**N * t for two-atom
    systems with unit translation gap, up to the dropped tail factors.
    """
    theta = _as_complex(theta, "theta")
    t = _as_complex(t, "t")
    if abs(theta) <= 1.0:
        raise ValidationError("theta", f"need |theta| > 1, got modulus {abs(theta)!r}")
    if not (0.0 <= c1 <= 1.0):
        raise ValidationError("c1", f"need 0 <= c1 <= 1, got {c1!r}")
    if N < 1:
        raise ValidationError("N", f"need N >= 1, got {N}")
    if abs(theta) ** N * max(1.0, abs(t)) > 2.0**53:
        raise PrecisionError(
            f"|theta|**N * |t| exceeds 2**53; reduce N={N} or use the wide-precision sequence mode"
        )
    out = 1.0
    z = theta
    for _ in range(N):
        x = (z * t).real
        frac = abs(x - round(x))
        out *= 1.0 - c1 * frac * frac
        z *= theta
    return out


def smoothness_order(gamma: float, ell: int) -> int:
    """Largest k >= 0 with ell * gamma > k + 2, else -1.

    An ell-fold convolution of factors with polynomial decay gamma has an
    order-k continuously differentiable density exactly when the combined
    decay beats k + 2 in the plane.
    """
    if gamma < 0.0:
        raise ValidationError("gamma", f"decay exponent must be >= 0, got {gamma!r}")
    if not isinstance(ell, int) or ell < 1:
        raise ValidationError("ell", f"fold count must be an integer >= 1, got {ell!r}")
    k = math.ceil(ell * gamma - 2.0) - 1
    return max(-1, k)


@dataclass(frozen=True)
class DecayParams:
    """Knobs for the decay fit inside ac_report."""

    r_min: float = 4.0
    r_max: float = 256.0
    n_annuli: int = 8
    samples: int = 64
    tol: float = 1e-8


@dataclass(frozen=True)
class SeparationParams:
    """Knobs for the concentration diagnostic inside ac_report."""

    n_max: int = 10
    overlap_tol: float | None = None


@dataclass(frozen=True)
class ACReport:
    """Combined evidence about absolute continuity of one system."""

    spec: IFSSpec
    k: int
    s_value: float
    s_decimated: float
    identity_gap: float
    concentration: ConcentrationReport
    decay: DecayEstimate
    verdict: str
    aligned_gamma: float | None = None

    def to_dict(self) -> dict:
        from .core import spec_to_dict

        return {
            "spec": spec_to_dict(self.spec),
            "k": self.k,
            "s_value": self.s_value,
            "s_decimated": self.s_decimated,
            "identity_gap": self.identity_gap,
            "concentration": self.concentration.to_dict(),
            "decay": self.decay.to_dict(),
            "verdict": self.verdict,
            "aligned_gamma": self.aligned_gamma,
        }


def _aligned_gamma(spec: IFSSpec, tol: float) -> float | None:
    """Decay exponent along the frequency ladder conj(1/lam)**n, n = 5..25.

    A generic contraction shows the same power decay there as anywhere
    else, but when 1/lam is an algebraic integer whose conjugates stay
    inside the unit disk the ladder sits asymptotically near integers and
    the transform does not decay along it.  Returns None when the ladder
    values sink to noise level (decayed measures need no probe).
    """
    theta = 1.0 / spec.lam
    pts = []
    vals = []
    for n in range(5, 26):
        xi = theta.conjugate() ** n
        v = abs(ft_eval(spec, xi, tol=tol).value)
        if v > 1e-300:
            pts.append(math.log(abs(xi)))
            vals.append(math.log(v))
    if len(pts) < 8 or np.median(np.exp(vals)) < 1e-12:
        return None
    slope = float(np.polyfit(pts, vals, 1)[0])
    return -slope


def ac_report(
    spec: IFSSpec,
    k: int,
    decay_params: DecayParams | None = None,
    separation_params: SeparationParams | None = None,
    threads: int = 1,
) -> ACReport:
    """Decimate, probe the factors, and classify the combined evidence.

    The k-fold decimation splits the measure as mu * eta.  The similarity
    dimension of mu obeys s(lam**k, q) = (1 - 1/k) * s(lam, p); the report
    checks that identity numerically, runs the concentration diagnostic on
    mu and the decay fit on eta, and issues a verdict:

    - singular-indicator: an exact overlap was found, eta shows no decay,
      or the transform stays flat along the aligned ladder conj(1/lam)**n;
    - consistent-with-AC: s > 2, no concentration evidence, positive fitted
      decay with a trustworthy fit;
    - inconclusive: anything else.
    """
    from .core import similarity_dimension
    from .measure import decimate_ifs

    from .separation import difference_set

    if k < 3:
        raise ValidationError("k", f"need k >= 3 for a meaningful split, got {k}")
    dp = decay_params or DecayParams()
    sp = separation_params
    mu, eta = decimate_ifs(spec, k)
    s_value = similarity_dimension(spec.lam, spec.weights)
    s_decimated = similarity_dimension(mu.lam, mu.weights)
    expected = (1.0 - 1.0 / k) * s_value
    identity_gap = abs(s_decimated - expected)
    if identity_gap > 1e-9 * max(1.0, abs(expected)):
        raise ValidationError(
            "k", f"decimated dimension {s_decimated!r} disagrees with (1-1/k)*s = {expected!r}"
        )
    if sp is None:
        # Default the sweep depth to what the decimated alphabet can afford:
        # roughly half a million chains, never fewer than two levels.
        width = len(difference_set(mu))
        sp = SeparationParams(n_max=max(2, min(10, int(math.log(5e5) / math.log(max(2, width))))))
    concentration = concentration_diagnostic(mu, n_max=sp.n_max, overlap_tol=sp.overlap_tol)
    decay = decay_exponent(
        eta,
        dp.r_min,
        dp.r_max,
        dp.n_annuli,
        samples=dp.samples,
        tol=dp.tol,
        threads=threads,
    )
    aligned = _aligned_gamma(spec, dp.tol)
    if concentration.classification == "exact-overlap":
        verdict = "singular-indicator"
    elif decay.gamma_hat <= SINGULAR_GAMMA_FLOOR:
        verdict = "singular-indicator"
    elif aligned is not None and aligned <= SINGULAR_GAMMA_FLOOR:
        verdict = "singular-indicator"
    elif (
        s_value > 2.0
        and concentration.classification == "no-concentration-evidence"
        and decay.gamma_hat > 0.0
        and decay.fit_residual < FIT_RESIDUAL_CAP
    ):
        verdict = "consistent-with-AC"
    else:
        verdict = "inconclusive"
    return ACReport(
        spec=spec,
        k=k,
        s_value=s_value,
        s_decimated=s_decimated,
        identity_gap=identity_gap,
        concentration=concentration,
        decay=decay,
        verdict=verdict,
        aligned_gamma=aligned,
    )
