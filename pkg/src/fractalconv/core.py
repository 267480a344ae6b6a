"""Core types: planar self-similar systems and their basic statistics.

An `IFSSpec` describes the homogeneous iterated function system

    f_i(z) = lam * z + a_i,   i = 1..m,

with a common complex contraction ratio `lam`, translations `a_i`, and a
probability vector of selection weights.  The stationary measure is the law
of sum(lam**n * X_n) for i.i.d. X_n distributed over the translations.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass, replace

from .errors import ValidationError

WEIGHT_SUM_TOL = 1e-12

# Moduli strictly between 1/sqrt(2) and 1 (ratio non-real) put the similarity
# dimension of an equal-weight pair above 2, the planar threshold.
SUPERCRITICAL_INNER = 1.0 / math.sqrt(2.0)


class RealRatioWarning(UserWarning):
    """The contraction ratio is real; planar covering arguments degenerate."""


def _as_complex(value, field_name: str) -> complex:
    try:
        return complex(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(field_name, f"not interpretable as a complex number: {value!r}") from exc


def check_weights(weights, field_name: str = "weights") -> tuple[float, ...]:
    """Validate a probability vector: length >= 2, positive entries, sum 1.

    Sums within 1e-12 of 1 are renormalized exactly; anything further off is
    rejected.
    """
    try:
        w = tuple(float(x) for x in weights)
    except (TypeError, ValueError) as exc:
        raise ValidationError(field_name, f"not a sequence of reals: {weights!r}") from exc
    if len(w) < 2:
        raise ValidationError(field_name, f"need at least 2 entries, got {len(w)}")
    if any(not math.isfinite(x) or x <= 0.0 for x in w):
        raise ValidationError(field_name, f"entries must be finite and positive, got {w}")
    total = math.fsum(w)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValidationError(field_name, f"entries must sum to 1 within {WEIGHT_SUM_TOL}, got {total!r}")
    if total != 1.0:
        w = tuple(x / total for x in w)
    return w


@dataclass(frozen=True)
class IFSSpec:
    """A homogeneous planar IFS with selection weights.

    allow_duplicate_translations relaxes the distinctness check; convolution
    systems legitimately repeat translations.
    """

    lam: complex
    translations: tuple[complex, ...]
    weights: tuple[float, ...]
    allow_duplicate_translations: bool = False

    def __post_init__(self):
        lam = _as_complex(self.lam, "lambda")
        object.__setattr__(self, "lam", lam)
        if not (0.0 < abs(lam) < 1.0):
            raise ValidationError("lambda", f"modulus must lie in (0, 1), got |lambda| = {abs(lam)!r}")
        try:
            trans = tuple(_as_complex(a, "translations") for a in self.translations)
        except TypeError as exc:
            raise ValidationError("translations", f"not a sequence: {self.translations!r}") from exc
        object.__setattr__(self, "translations", trans)
        if len(trans) < 2:
            raise ValidationError("translations", f"need at least 2 maps, got {len(trans)}")
        if not self.allow_duplicate_translations and len(set(trans)) != len(trans):
            raise ValidationError("translations", "entries must be pairwise distinct")
        object.__setattr__(self, "weights", check_weights(self.weights))
        if len(self.weights) != len(trans):
            raise ValidationError(
                "weights",
                f"length {len(self.weights)} does not match {len(trans)} translations",
            )

    @property
    def arity(self) -> int:
        return len(self.translations)

    def attractor_radius(self) -> float:
        """Radius of a disk centered at 0 containing the attractor."""
        return max(abs(a) for a in self.translations) / (1.0 - abs(self.lam))

    def mean(self) -> complex:
        """Barycenter of the stationary measure."""
        avg = sum(p * a for p, a in zip(self.weights, self.translations))
        return avg / (1.0 - self.lam)


def validate_ifs(spec) -> IFSSpec:
    """Check a spec (IFSSpec or parsed JSON dict) and return the typed form.

    Raises ValidationError naming the offending field.  Emits a
    RealRatioWarning when the ratio is real, since the planar theory needs a
    non-real ratio.
    """
    if isinstance(spec, dict):
        spec = spec_from_dict(spec)
    elif not isinstance(spec, IFSSpec):
        raise ValidationError("spec", f"expected IFSSpec or dict, got {type(spec).__name__}")
    # Dataclass construction already validated fields; re-derive to normalize.
    checked = replace(spec)
    if checked.lam.imag == 0.0:
        warnings.warn(
            "contraction ratio is real; planar-decay estimates do not apply",
            RealRatioWarning,
            stacklevel=2,
        )
    return checked


def entropy(weights) -> float:
    """Shannon entropy (natural log) of a probability vector."""
    w = check_weights(weights)
    return -math.fsum(p * math.log(p) for p in w)


def similarity_dimension(lam: complex, weights) -> float:
    """entropy(weights) / -log|lam|, the similarity dimension of the system."""
    lam = _as_complex(lam, "lambda")
    r = abs(lam)
    if not (0.0 < r < 1.0):
        raise ValidationError("lambda", f"modulus must lie in (0, 1), got {r!r}")
    return entropy(weights) / (-math.log(r))


def in_supercritical_region(lam: complex) -> bool:
    """True when lam is non-real with modulus in (1/sqrt(2), 1)."""
    lam = complex(lam)
    return lam.imag != 0.0 and SUPERCRITICAL_INNER < abs(lam) < 1.0


@dataclass(frozen=True)
class RegionH:
    """Expansion-side region: b1 <= |z| <= b2, Im(z) > eta, with b1 > 1."""

    b1: float
    b2: float
    eta: float

    def __post_init__(self):
        if not (1.0 < self.b1 < self.b2):
            raise ValidationError("region", f"need 1 < b1 < b2, got b1={self.b1!r}, b2={self.b2!r}")
        if not (self.eta > 0.0):
            raise ValidationError("region", f"need eta > 0, got {self.eta!r}")

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        r = abs(z)
        return (self.b1 - slack <= r <= self.b2 + slack) and z.imag > self.eta - slack

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax) of the region."""
        return (-self.b2, self.b2, self.eta, self.b2)


@dataclass(frozen=True)
class Annulus:
    """Closed annulus inner <= |z| <= outer on one side of the unit circle.

    side = "lambda" keeps 0 < inner < outer < 1 (contraction ratios);
    side = "theta" keeps 1 < inner < outer (expansions).
    """

    inner: float
    outer: float
    side: str = "lambda"

    def __post_init__(self):
        if self.side not in ("lambda", "theta"):
            raise ValidationError("annulus", f"side must be 'lambda' or 'theta', got {self.side!r}")
        if not (0.0 < self.inner < self.outer):
            raise ValidationError(
                "annulus", f"need 0 < inner < outer, got inner={self.inner!r}, outer={self.outer!r}"
            )
        if self.side == "lambda" and not self.outer < 1.0:
            raise ValidationError("annulus", f"lambda-side annulus needs outer < 1, got {self.outer!r}")
        if self.side == "theta" and not self.inner > 1.0:
            raise ValidationError("annulus", f"theta-side annulus needs inner > 1, got {self.inner!r}")

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        r = abs(z)
        return self.inner - tol <= r <= self.outer + tol


def _complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _pair_to_complex(value, field_name: str) -> complex:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValidationError(field_name, f"complex values must be [re, im] pairs, got {value!r}")
    try:
        return complex(float(value[0]), float(value[1]))
    except (TypeError, ValueError) as exc:
        raise ValidationError(field_name, f"complex pair entries must be reals, got {value!r}") from exc


def spec_to_dict(spec: IFSSpec) -> dict:
    """JSON-ready dict with complex values as [re, im] pairs."""
    out = {
        "lambda": _complex_to_pair(spec.lam),
        "translations": [_complex_to_pair(a) for a in spec.translations],
        "weights": list(spec.weights),
    }
    if spec.allow_duplicate_translations:
        out["allow_duplicate_translations"] = True
    return out


def spec_from_dict(data: dict) -> IFSSpec:
    if not isinstance(data, dict):
        raise ValidationError("spec", f"expected a JSON object, got {type(data).__name__}")
    for key in ("lambda", "translations", "weights"):
        if key not in data:
            raise ValidationError(key, "missing required field")
    lam = _pair_to_complex(data["lambda"], "lambda")
    raw_trans = data["translations"]
    if not isinstance(raw_trans, (list, tuple)):
        raise ValidationError("translations", f"expected a list, got {type(raw_trans).__name__}")
    translations = tuple(_pair_to_complex(a, "translations") for a in raw_trans)
    return IFSSpec(
        lam=lam,
        translations=translations,
        weights=tuple(data["weights"]) if isinstance(data["weights"], (list, tuple)) else data["weights"],
        allow_duplicate_translations=bool(data.get("allow_duplicate_translations", False)),
    )


def save_spec(spec: IFSSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_spec(path) -> IFSSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError("spec", f"invalid JSON in {path}: {exc}") from exc
    return spec_from_dict(data)


def bernoulli_spec(lam: complex) -> IFSSpec:
    """The two-map system with translations -1, +1 and equal weights."""
    return IFSSpec(lam=lam, translations=(-1.0 + 0.0j, 1.0 + 0.0j), weights=(0.5, 0.5))


def polar(modulus: float, angle: float) -> complex:
    """Convenience wrapper for modulus * exp(i * angle)."""
    return modulus * cmath.exp(1j * angle)
