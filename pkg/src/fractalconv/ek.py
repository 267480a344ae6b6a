"""Integer-shadow sequences, reconstruction, and cover enumeration.

For an expansion theta (|theta| > 1) and a seed t, the real parts Re(theta**n
* t) stay within 1/2 of integers K_n whenever the associated measure keeps
Fourier mass at the matching frequency.  Four consecutive exact values
x_j = Re(theta**j * z0) determine theta and the imaginary parts in closed
form; running the same algebra on the rounded K_n recovers theta up to an
error shrinking like |theta|**(-n).  Enumerating all integer sequences that
could arise this way yields a ball cover of the candidate expansions, whose
cardinality growth measures the dimension of the exceptional set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import node_budget, stream
from .core import RegionH, _as_complex
from .errors import (
    DegenerateInputError,
    NonRealBetaError,
    PrecisionError,
    ValidationError,
)
from .utils import round_half_even

_EXACT_INT_LIMIT = 2.0**53
# Relative floor for the quadratic denominator x1**2 - x0*x2 below which a
# window cannot be inverted in double precision.
_DEGENERATE_REL = 1e-13


@dataclass(frozen=True)
class EKSequence:
    """Forward integer shadow of one (theta, t): K_n + eps_n = Re(theta**n t).

    Index n runs 1..N; y holds the exact imaginary parts Im(theta**n t).
    """

    theta: complex
    t: complex
    K: tuple[int, ...]
    eps: tuple[float, ...]
    Y: tuple[float, ...]

    @property
    def N(self) -> int:
        return len(self.K)


def _check_exact_range(theta: complex, t: complex, N: int, wide: bool) -> bool:
    peak = abs(theta) ** N * max(1.0, abs(t))
    if peak <= _EXACT_INT_LIMIT:
        return False
    if not wide:
        raise PrecisionError(
            f"|theta|**N * |t| = {peak:.3e} exceeds 2**53; integers would round; "
            "reduce N or pass wide=True"
        )
    return True


def ek_sequence(theta: complex, t: complex, N: int, wide: bool = False) -> EKSequence:
    """Forward-generate K, eps, y for n = 1..N.

    Rounds ties to even.  Raises PrecisionError when powers leave the exact
    double range, unless wide=True switches to arbitrary precision.
    """
    theta = _as_complex(theta, "theta")
    t = _as_complex(t, "t")
    if N < 1:
        raise ValidationError("N", f"need N >= 1, got {N}")
    if abs(theta) <= 1.0:
        raise ValidationError("theta", f"need |theta| > 1, got {abs(theta)!r}")
    if _check_exact_range(theta, t, N, wide):
        return _ek_sequence_wide(theta, t, N)
    powers = np.cumprod(np.full(N, theta, dtype=np.complex128)) * t
    x = powers.real
    k = np.rint(x)
    return EKSequence(
        theta=theta,
        t=t,
        K=tuple(int(v) for v in k),
        eps=tuple((x - k).tolist()),
        Y=tuple(powers.imag.tolist()),
    )


def _ek_sequence_wide(theta: complex, t: complex, N: int) -> EKSequence:
    import mpmath as mp

    digits = 30 + int(N * math.log10(abs(theta)) + math.log10(max(1.0, abs(t)))) + 10
    with mp.workdps(digits):
        th = mp.mpc(theta.real, theta.imag)
        seed = mp.mpc(t.real, t.imag)
        ks, eps, ys = [], [], []
        z = seed
        for _ in range(N):
            z = z * th
            x = z.real
            k = int(mp.nint(x))
            ks.append(k)
            eps.append(float(x - k))
            ys.append(float(z.imag))
    return EKSequence(theta=theta, t=t, K=tuple(ks), eps=tuple(eps), Y=tuple(ys))


def _window_scale(x0: float, x1: float, x2: float, x3: float) -> float:
    return max(1.0, x0 * x0, x1 * x1, x2 * x2, x3 * x3)


def reconstruct_theta(x0: float, x1: float, x2: float, x3: float) -> tuple[complex, float]:
    """Invert four consecutive real parts x_j = Re(theta**j * z0).

    Returns (theta, y3) where y3 = Im(theta**3 * z0) and theta has positive
    imaginary part.  Raises DegenerateInputError when x1**2 - x0*x2
    vanishes (that quantity equals |z0|**2 * Im(theta)**2 up to sign for
    exact inputs) and NonRealBetaError when the recovered |theta|**2 -
    Re(theta)**2 is not positive.
    """
    den = x1 * x1 - x0 * x2
    if abs(den) <= _DEGENERATE_REL * _window_scale(x0, x1, x2, x3):
        raise DegenerateInputError(
            f"window ({x0}, {x1}, {x2}, {x3}) has vanishing x1^2 - x0*x2; cannot invert"
        )
    mod2 = (x2 * x2 - x1 * x3) / den
    alpha = (x1 * x2 - x0 * x3) / (2.0 * den)
    beta2 = mod2 - alpha * alpha
    if beta2 <= 0.0:
        raise NonRealBetaError(
            f"window ({x0}, {x1}, {x2}, {x3}) yields non-positive squared imaginary part {beta2!r}"
        )
    beta = math.sqrt(beta2)
    y0 = (alpha * x0 - x1) / beta
    y3 = (3.0 * alpha * alpha * beta - beta**3) * x0 + (alpha**3 - 3.0 * alpha * beta2) * y0
    return complex(alpha, beta), y3


def g_estimate(x0: float, x1: float, x2: float, x3: float) -> float:
    """The y3 component of reconstruct_theta: Im(theta**3 * z0)."""
    return reconstruct_theta(x0, x1, x2, x3)[1]


@dataclass(frozen=True)
class CoverBall:
    """A candidate-parameter ball emitted at depth N.

    source_K records the integer window that produced the center (5 values
    for expansion balls, 4 for translation balls).
    """

    center: complex
    radius: float
    N: int
    source_K: tuple[int, ...] = ()


def theta_ball(window: tuple[int, int, int, int, int], b1: float, N: int, c4_hat: float) -> CoverBall:
    """Ball around the expansion estimate from (K_{N-3}, ..., K_{N+1}).

    center = (K_{N+1} + i*G(K_{N-2..N+1})) / (K_N + i*G(K_{N-3..N})),
    radius = c4_hat * b1**(-N).
    """
    if len(window) != 5:
        raise ValidationError("window", f"need 5 consecutive integers, got {len(window)}")
    if not (b1 > 1.0):
        raise ValidationError("b1", f"need b1 > 1, got {b1!r}")
    if N < 4:
        raise ValidationError("N", f"need N >= 4, got {N}")
    w0, w1, w2, w3, w4 = (float(w) for w in window)
    y_hi = g_estimate(w1, w2, w3, w4)
    y_lo = g_estimate(w0, w1, w2, w3)
    denom = complex(w3, y_lo)
    if denom == 0:
        raise DegenerateInputError("window denominator K_N + i*G = 0")
    center = complex(w4, y_hi) / denom
    return CoverBall(
        center=center,
        radius=c4_hat * b1 ** (-N),
        N=N,
        source_K=tuple(int(w) for w in window),
    )


def predict_K(window: tuple[int, int, int, int, int]) -> float:
    """Real-valued prediction of K_{n+2} from (K_{n-3}, ..., K_{n+1}).

    Computes Re((K_{n+1} + i*Yt_{n+1})**2 / (K_n + i*Yt_n)) with the
    imaginary parts estimated from the two 4-subwindows; exact inputs give
    exactly Re(theta**(n+2) * z0).
    """
    if len(window) != 5:
        raise ValidationError("window", f"need 5 consecutive integers, got {len(window)}")
    w0, w1, w2, w3, w4 = (float(w) for w in window)
    y_hi = g_estimate(w1, w2, w3, w4)
    y_lo = g_estimate(w0, w1, w2, w3)
    denom = complex(w3, y_lo)
    if denom == 0:
        raise DegenerateInputError("window denominator K_n + i*G = 0")
    return ((complex(w4, y_hi) ** 2) / denom).real


# ---------------------------------------------------------------------------
# Empirical constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EKCalibration:
    """Region-specific constants fitted on forward-generated sequences.

    c4_hat scales the reconstruction ball radius c4_hat * b1**(-N); c5_hat
    bounds |K_{n+2} - prediction| / max|eps| in the small-error regime that
    rho gates; rho = 1/(2*c5_hat) is the eps level below which rounding the
    prediction is exact on the calibration distribution; M = ceil(2*c5_hat)
    + 1 bounds the integer choices otherwise.  All maxima carry a 2x safety
    factor.

    Windows whose rounded values land far off the sequence manifold (the
    rounding can cancel the reconstruction denominator almost exactly) give
    arbitrarily wild reconstructions; both maxima therefore run over windows
    passing the same consistency checks the cover enumeration applies: the
    denominator modulus must sit near the feasible |t|*|theta|**n range and
    the reconstructed center must land inside the slackened region.
    """

    region: RegionH
    c4_hat: float
    c5_hat: float
    rho: float
    M: int
    n_sequences: int
    n_max: int
    n_lo: int
    seed: int


def _vector_g(x0, x1, x2, x3):
    """Vectorized g_estimate returning (y3, valid_mask)."""
    den = x1 * x1 - x0 * x2
    scale = np.maximum.reduce([np.ones_like(x0), x0 * x0, x1 * x1, x2 * x2, x3 * x3])
    valid = np.abs(den) > _DEGENERATE_REL * scale
    safe_den = np.where(valid, den, 1.0)
    mod2 = (x2 * x2 - x1 * x3) / safe_den
    alpha = (x1 * x2 - x0 * x3) / (2.0 * safe_den)
    beta2 = mod2 - alpha * alpha
    valid &= beta2 > 0.0
    beta = np.sqrt(np.where(valid, beta2, 1.0))
    y0 = (alpha * x0 - x1) / beta
    y3 = (3.0 * alpha * alpha * beta - beta**3) * x0 + (alpha**3 - 3.0 * alpha * beta2) * y0
    return y3, valid


def sample_region(region: RegionH, count: int, seed: int, stream_id: int = 0) -> np.ndarray:
    """Uniform sample of the region by rejection from its bounding box."""
    rng = stream(seed, stream_id)
    xmin, xmax, ymin, ymax = region.bounding_box()
    out = np.empty(count, dtype=np.complex128)
    have = 0
    while have < count:
        need = max(64, 2 * (count - have))
        z = rng.uniform(xmin, xmax, need) + 1j * rng.uniform(ymin, ymax, need)
        r = np.abs(z)
        good = z[(r >= region.b1) & (r <= region.b2) & (z.imag > region.eta)]
        take = min(good.shape[0], count - have)
        out[have : have + take] = good[:take]
        have += take
    return out


def _forward_x(thetas: np.ndarray, ts: np.ndarray, n_max: int) -> np.ndarray:
    """Re(theta**n * t) for n = 1..n_max, shape (len(thetas), n_max)."""
    powers = np.cumprod(np.broadcast_to(thetas[:, None], (thetas.shape[0], n_max)), axis=1)
    return (powers * ts[:, None]).real


# Perturbation level for the predictor-constant pass.  Derivative-scale
# noise measures the local sensitivity of the prediction; the resulting rho
# stays small enough that the linearization is still accurate there.
_CAL_EPS = 1e-8


def _window_stats(vals, region, n, thetas):
    """Reconstruction outputs plus the consistency mask for one window depth.

    vals holds the (possibly rounded or perturbed) sequence values; column
    i = n - 1 is position n.  Returns (centers, pred, ok) where ok marks
    windows whose denominator modulus sits in the feasible |t|*|theta|**n
    band and whose center lands inside the slackened region.
    """
    i = n - 1
    y_hi, ok_hi = _vector_g(vals[:, i - 2], vals[:, i - 1], vals[:, i], vals[:, i + 1])
    y_lo, ok_lo = _vector_g(vals[:, i - 3], vals[:, i - 2], vals[:, i - 1], vals[:, i])
    ok = ok_hi & ok_lo
    denom = vals[:, i] + 1j * y_lo
    mod = np.abs(denom)
    ok &= (mod > 0.5 * region.b1**n) & (mod < 2.0 * region.b2 ** (n + 1))
    num = vals[:, i + 1] + 1j * y_hi
    safe = np.where(ok, denom, 1.0)
    centers = np.where(ok, num / safe, np.nan)
    cmod = np.abs(centers)
    ok &= (cmod >= 0.98 * region.b1) & (cmod <= 1.02 * region.b2)
    ok &= centers.imag > 0.5 * region.eta
    pred = (num**2 / safe).real
    return centers, pred, ok


def calibrate_constants(
    region: RegionH,
    n_sequences: int = 10_000,
    n_max: int = 40,
    n_lo: int = 6,
    seed: int = 7,
) -> EKCalibration:
    """Fit c4_hat, c5_hat, rho, M on forward sequences from the region.

    Sequences use theta uniform over the region and |t| uniform in [1, b2]
    with uniform angle.  Windows before n_lo are skipped: the first few
    integer windows carry order-one rounding noise at order-one scale and
    would dominate both maxima.

    The center-error constant c4 is fitted on the rounded integer windows.
    The predictor constant c5 maximizes the error ratio over two regimes:
    the rounded integer windows themselves, and the same exact sequences
    under independent uniform perturbations of size _CAL_EPS.  Rounding
    noise in a forward sample almost never drops below rho simultaneously
    in six consecutive positions, so the regime that rho gates has to be
    probed directly, at derivative scale.
    """
    if abs(region.b2) ** (n_max + 1) * region.b2 > _EXACT_INT_LIMIT:
        raise PrecisionError(f"calibration depth {n_max} leaves exact range for b2 = {region.b2}")
    thetas = sample_region(region, n_sequences, seed, stream_id=1)
    rng = stream(seed, 2)
    t_mod = rng.uniform(1.0, region.b2, n_sequences)
    t_arg = rng.uniform(0.0, 2.0 * np.pi, n_sequences)
    ts = t_mod * np.exp(1j * t_arg)
    x = _forward_x(thetas, ts, n_max)
    k = np.rint(x)
    eps = x - k
    delta = rng.uniform(-_CAL_EPS, _CAL_EPS, x.shape)
    shifted = x - delta

    # Reconstruction error ratios: windows (n-3 .. n+1) at ball depth n.
    c4_best = 0.0
    c5_best = 0.0
    for n in range(max(n_lo, 4), n_max - 1):
        i = n - 1
        centers, pred_nat, ok = _window_stats(k, region, n, thetas)
        err = np.abs(centers - thetas)
        ratio = err[ok] * region.b1**n
        if ratio.size:
            c4_best = max(c4_best, float(np.nanmax(ratio)))
        if n + 2 <= n_max:
            for vals, noise, pred, valid in (
                (k, eps, pred_nat, ok),
                (shifted, delta, *_window_stats(shifted, region, n, thetas)[1:]),
            ):
                perr = np.abs(vals[:, i + 2] - pred)
                window_eps = np.max(np.abs(noise[:, i - 3 : i + 3]), axis=1)
                good = valid & (window_eps > 0)
                pratio = perr[good] / window_eps[good]
                if pratio.size:
                    c5_best = max(c5_best, float(np.nanmax(pratio)))
    if c4_best == 0.0 or c5_best == 0.0:
        raise DegenerateInputError("calibration produced no valid windows; widen the region")
    c4_hat = 2.0 * c4_best
    c5_hat = 2.0 * c5_best
    return EKCalibration(
        region=region,
        c4_hat=c4_hat,
        c5_hat=c5_hat,
        rho=1.0 / (2.0 * c5_hat),
        M=int(math.ceil(2.0 * c5_hat)) + 1,
        n_sequences=n_sequences,
        n_max=n_max,
        n_lo=n_lo,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Cover enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationParams:
    """Inputs for enumerate_covers.

    delta is the fraction of positions allowed to need a branch token; rho
    and M come from calibration (or a deliberate override); seed_grid is the
    per-axis resolution of the (theta, t) seeding grid; c4_hat scales ball
    radii.
    """

    region: RegionH
    N: int
    delta: float
    rho: float
    M: int
    seed_grid: int = 12
    c4_hat: float = 10.0
    budget: int | None = None

    def __post_init__(self):
        if self.N < 5:
            raise ValidationError("N", f"need N >= 5, got {self.N}")
        if not (0.0 <= self.delta < 1.0):
            raise ValidationError("delta", f"need 0 <= delta < 1, got {self.delta!r}")
        if not (0.0 < self.rho <= 0.5):
            raise ValidationError("rho", f"need 0 < rho <= 0.5, got {self.rho!r}")
        if self.M < 1:
            raise ValidationError("M", f"need M >= 1, got {self.M}")
        if self.seed_grid < 2:
            raise ValidationError("seed_grid", f"need seed_grid >= 2, got {self.seed_grid}")
        if not (self.c4_hat > 0.0):
            raise ValidationError("c4_hat", f"need c4_hat > 0, got {self.c4_hat!r}")

    def max_tokens(self) -> int:
        return int(math.floor(self.delta * self.N))


@dataclass(frozen=True)
class CoverResult:
    """Deduplicated cover balls plus enumeration accounting."""

    balls: tuple[CoverBall, ...]
    params: EnumerationParams
    seed_windows: int
    counts_per_depth: tuple[int, ...]
    token_histogram: dict[int, int]
    leaves: int
    dropped_degenerate: int
    truncated: bool

    def metadata(self) -> dict:
        return {
            "region": {
                "b1": self.params.region.b1,
                "b2": self.params.region.b2,
                "eta": self.params.region.eta,
            },
            "N": self.params.N,
            "delta": self.params.delta,
            "rho": self.params.rho,
            "M": self.params.M,
            "seed_grid": self.params.seed_grid,
            "c4_hat": self.params.c4_hat,
            "max_tokens": self.params.max_tokens(),
            "seed_windows": self.seed_windows,
            "counts_per_depth": list(self.counts_per_depth),
            "token_histogram": {str(k): v for k, v in sorted(self.token_histogram.items())},
            "leaves": self.leaves,
            "balls": len(self.balls),
            "dropped_degenerate": self.dropped_degenerate,
            "truncated": self.truncated,
        }


def _seed_windows(params: EnumerationParams) -> list[tuple[int, ...]]:
    """Distinct 5-windows realized by a (theta, t) grid over the region."""
    region = params.region
    g = params.seed_grid
    radii = np.linspace(region.b1, region.b2, g)
    angles = np.linspace(0.0, math.pi, g, endpoint=False)
    thetas = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    thetas = thetas[thetas.imag > region.eta]
    t_radii = np.linspace(1.0, region.b2, g)
    t_angles = np.linspace(0.0, 2.0 * math.pi, g, endpoint=False)
    ts = (t_radii[:, None] * np.exp(1j * t_angles)[None, :]).ravel()
    pairs_theta = np.repeat(thetas, ts.shape[0])
    pairs_t = np.tile(ts, thetas.shape[0])
    x = _forward_x(pairs_theta, pairs_t, 5)
    k = np.rint(x).astype(np.int64)
    windows = {tuple(int(v) for v in row) for row in k}
    return sorted(windows)


def enumerate_covers(params: EnumerationParams) -> CoverResult:
    """Enumerate candidate integer sequences and emit one ball per leaf.

    Seeds are the distinct 5-windows realized on a (theta, t) grid.  Each
    extension appends either the rounded prediction (free) or one of the M
    integers nearest the prediction (consuming one of floor(delta * N)
    branch tokens).  Windows that cannot be inverted drop out.  Leaves at
    depth N + 1 produce theta balls, deduplicated by center proximity at
    half a radius; centers farther than three radii outside the region are
    discarded (anything relevant to in-region parameters, even with a
    generous containment slack, sits closer than that).
    """
    region = params.region
    cap = node_budget(params.budget)
    seeds = _seed_windows(params)
    max_tokens = params.max_tokens()
    states: dict[tuple[tuple[int, ...], int], None] = {(w, 0): None for w in seeds}
    counts = [len(states)]
    dropped = 0
    truncated = False
    examined = len(states)
    for _ in range(5, params.N + 1):
        nxt: dict[tuple[tuple[int, ...], int], None] = {}
        for window, tokens in sorted(states):
            try:
                pred = predict_K(window)
            except DegenerateInputError:
                dropped += 1
                continue
            if not math.isfinite(pred) or abs(pred) > _EXACT_INT_LIMIT:
                dropped += 1
                continue
            rounded = round_half_even(pred)
            children = [(rounded, tokens)]
            if tokens < max_tokens:
                lo = math.floor(pred)
                ladder = []
                for step in range(params.M + 1):
                    for cand in (lo - step, lo + 1 + step):
                        ladder.append((abs(cand - pred), cand))
                ladder.sort()
                near = [c for _, c in ladder[: params.M]]
                children.extend((c, tokens + 1) for c in near if c != rounded)
            for k_next, tok in children:
                key = (window[1:] + (k_next,), tok)
                if key not in nxt:
                    nxt[key] = None
                    examined += 1
                    if examined > cap:
                        truncated = True
                        break
            if truncated:
                break
        states = nxt
        counts.append(len(states))
        if truncated:
            break
    token_hist: dict[int, int] = {}
    raw_balls: list[tuple[CoverBall, int]] = []
    for window, tokens in sorted(states):
        try:
            ball = theta_ball(window, region.b1, params.N, params.c4_hat)
        except (DegenerateInputError, NonRealBetaError):
            dropped += 1
            continue
        if not region.contains(ball.center, slack=3.0 * ball.radius):
            continue
        token_hist[tokens] = token_hist.get(tokens, 0) + 1
        raw_balls.append((ball, tokens))
    raw_balls.sort(key=lambda pair: (pair[0].center.real, pair[0].center.imag))
    kept: list[CoverBall] = []
    for ball, _ in raw_balls:
        if all(abs(ball.center - other.center) > 0.5 * ball.radius for other in kept):
            kept.append(ball)
    return CoverResult(
        balls=tuple(kept),
        params=params,
        seed_windows=len(seeds),
        counts_per_depth=tuple(counts),
        token_histogram=token_hist,
        leaves=len(raw_balls),
        dropped_degenerate=dropped,
        truncated=truncated,
    )


# ---------------------------------------------------------------------------
# Translation variant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TranslationEKSequence:
    """Joint integer shadows of t and u*t under theta = 1/lam.

    K_n + eps_n = Re(theta**n t), L_n + delt_n = Re(theta**n u t), n = 1..N.
    """

    lam: complex
    u: complex
    t: complex
    K: tuple[int, ...]
    L: tuple[int, ...]
    eps: tuple[float, ...]
    delt: tuple[float, ...]

    @property
    def N(self) -> int:
        return len(self.K)


def ek_sequence_translation(lam: complex, u: complex, t: complex, N: int, wide: bool = False) -> TranslationEKSequence:
    """Forward-generate the joint shadow sequences for (lam, u, t)."""
    lam = _as_complex(lam, "lambda")
    u = _as_complex(u, "u")
    if lam.imag == 0.0:
        raise ValidationError("lambda", "ratio must be non-real for the translation sequences")
    if not (0.0 < abs(lam) < 1.0):
        raise ValidationError("lambda", f"modulus must lie in (0, 1), got {abs(lam)!r}")
    theta = 1.0 / lam
    seq_t = ek_sequence(theta, t, N, wide=wide)
    seq_ut = ek_sequence(theta, u * t, N, wide=wide)
    return TranslationEKSequence(
        lam=lam,
        u=u,
        t=_as_complex(t, "t"),
        K=seq_t.K,
        L=seq_ut.K,
        eps=seq_t.eps,
        delt=seq_ut.eps,
    )


def reconstruct_u(
    k_pair: tuple[int, int],
    l_pair: tuple[int, int],
    lam: complex,
    n: int,
    c2_hat: float = 10.0,
) -> CoverBall:
    """Ball around the translation estimate from (K_n, K_{n+1}, L_n, L_{n+1}).

    With alpha + i*beta = lam, the imaginary part of theta**(n+1) t recovers
    from consecutive real parts as beta**-1 (alpha*x_{n+1} - x_n), so the
    ratio of the completed numerator and denominator approximates u with
    error c2_hat * |theta|**(-n).
    """
    lam = _as_complex(lam, "lambda")
    if lam.imag == 0.0:
        raise ValidationError("lambda", "ratio must be non-real to recover imaginary parts")
    if not (0.0 < abs(lam) < 1.0):
        raise ValidationError("lambda", f"modulus must lie in (0, 1), got {abs(lam)!r}")
    if n < 1:
        raise ValidationError("n", f"need n >= 1, got {n}")
    if not (c2_hat > 0.0):
        raise ValidationError("c2_hat", f"need c2_hat > 0, got {c2_hat!r}")
    alpha, beta = lam.real, lam.imag
    k_n, k_n1 = (float(v) for v in k_pair)
    l_n, l_n1 = (float(v) for v in l_pair)
    denom = complex(k_n1, (alpha * k_n1 - k_n) / beta)
    if denom == 0:
        raise DegenerateInputError("window denominator K_{n+1} + i*yhat = 0")
    num = complex(l_n1, (alpha * l_n1 - l_n) / beta)
    theta_mod = 1.0 / abs(lam)
    return CoverBall(
        center=num / denom,
        radius=c2_hat * theta_mod ** (-n),
        N=n,
        source_K=(int(k_pair[0]), int(k_pair[1]), int(l_pair[0]), int(l_pair[1])),
    )
