"""Seeded, parallel Monte Carlo estimation of subsystem entropy statistics.

Reproducibility contract: sample j always uses the Philox stream
(master_seed, namespace * 2^32 + j), regardless of how samples are divided
among workers, and per-sample results are assembled by global sample index.
Aggregates are therefore bit-identical for any worker count.

Comparisons against asymptotic predictions should allow, besides the usual
3-sigma statistical band, an additive 2/n for the unquantified order-one
corrections at finite mode number.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import analytic
from .errors import InputError, NumericalError
from .gaussian import (
    SqueezingConfig,
    _eta,
    _initial_diagonal,
    _reduced_sigma_from_unitary,
    _renyi2_from_matrix,
    _symplectic_values,
    h1,
)
from .haar import RNG_ALGORITHM, SeededStream, _raw_haar_matrix

__all__ = [
    "RunConfig",
    "CurveEstimate",
    "ConstantEstimate",
    "TypicalityRecord",
    "DerivativeEstimate",
    "MeanCovarianceResult",
    "estimate_entropy_statistics",
    "estimate_constant_term",
    "typicality_probe",
    "conjecture_probe",
    "mean_covariance_check",
]

_CHUNK = 256  # fixed chunk size; independent of worker count by design


@dataclass(frozen=True)
class RunConfig:
    """One Monte Carlo run: system, subsystem sizes, sample count, seeding."""

    n: int
    squeezing: SqueezingConfig
    subsystem_sizes: tuple[int, ...]
    samples: int
    master_seed: int = 0
    workers: int = 1
    stream_namespace: int = 0

    def __post_init__(self):
        object.__setattr__(self, "subsystem_sizes", tuple(int(k) for k in self.subsystem_sizes))
        if self.n < 1:
            raise InputError(f"n must be >= 1, got {self.n}")
        if self.squeezing.n != self.n:
            raise InputError(
                f"squeezing has {self.squeezing.n} entries for n={self.n} modes"
            )
        if any(not 0 <= k <= self.n for k in self.subsystem_sizes):
            raise InputError(f"subsystem sizes must lie in [0, {self.n}]")
        if self.samples < 1:
            raise InputError("samples must be >= 1")
        if self.workers < 1:
            raise InputError("workers must be >= 1")


@dataclass(frozen=True)
class CurveEstimate:
    """Per-subsystem-size entropy statistics plus full provenance."""

    subsystem_sizes: tuple[int, ...]
    mean_s2: tuple[float, ...]
    mean_s1: tuple[float, ...]
    var_s2: tuple[float, ...]      # unbiased sample variance
    stderr_s2: tuple[float, ...]   # sqrt(var / samples)
    samples: int
    master_seed: int
    rng_algorithm: str
    n: int
    squeezing: tuple[float, ...]


def _entropies_for_sample(u, diag, n, ks, with_s1):
    """S2 (and optionally S1) of every requested subsystem for one unitary."""
    s2 = np.zeros(len(ks))
    s1 = np.zeros(len(ks)) if with_s1 else None
    positive = [k for k in ks if k > 0]
    full = None
    if sum(positive) >= n and positive:
        eta = _eta(u)
        full = (eta * diag) @ eta.T
    for i, k in enumerate(ks):
        if k == 0:
            continue
        if full is not None:
            idx = list(range(k)) + list(range(n, n + k))
            red = full[np.ix_(idx, idx)]
        else:
            red = _reduced_sigma_from_unitary(u, diag, n, k)
        s2[i] = _renyi2_from_matrix(red)
        if with_s1:
            s1[i] = math.fsum(h1(nu) for nu in _symplectic_values(red))
    return s2, s1


def _entropy_chunk(args):
    n, s_values, ks, master_seed, namespace, j0, j1, with_s1 = args
    diag = _initial_diagonal(s_values)
    s2 = np.empty((j1 - j0, len(ks)))
    s1 = np.empty((j1 - j0, len(ks))) if with_s1 else None
    for j in range(j0, j1):
        stream = SeededStream(master_seed, (namespace * 2**32 + j) % 2**64)
        u = _raw_haar_matrix(n, stream.generator())
        try:
            row2, row1 = _entropies_for_sample(u, diag, n, ks, with_s1)
        except NumericalError as exc:
            raise NumericalError(f"sample {j} (seed {master_seed}): {exc}") from exc
        s2[j - j0] = row2
        if with_s1:
            s1[j - j0] = row1
    return j0, s2, s1


def _run_entropy_samples(n, s_values, ks, samples, master_seed, namespace, workers, with_s1):
    chunks = [
        (n, tuple(s_values), tuple(ks), master_seed, namespace, j0, min(j0 + _CHUNK, samples), with_s1)
        for j0 in range(0, samples, _CHUNK)
    ]
    s2 = np.empty((samples, len(ks)))
    s1 = np.empty((samples, len(ks))) if with_s1 else None
    if workers == 1 or len(chunks) == 1:
        results = map(_entropy_chunk, chunks)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        try:
            results = list(pool.map(_entropy_chunk, chunks))
        finally:
            pool.shutdown()
    for j0, chunk2, chunk1 in results:
        s2[j0 : j0 + len(chunk2)] = chunk2
        if with_s1:
            s1[j0 : j0 + len(chunk1)] = chunk1
    return s2, s1


def estimate_entropy_statistics(config: RunConfig) -> CurveEstimate:
    """Sample Haar interferometers and aggregate subsystem entropies.

    Records both the Renyi-2 and von Neumann entropy of every requested
    subsystem size for every sample; aggregation order is fixed by global
    sample index, so results do not depend on the worker count.
    """
    s2, s1 = _run_entropy_samples(
        config.n,
        config.squeezing.values,
        config.subsystem_sizes,
        config.samples,
        config.master_seed,
        config.stream_namespace,
        config.workers,
        with_s1=True,
    )
    var = s2.var(axis=0, ddof=1) if config.samples > 1 else np.zeros(s2.shape[1])
    return CurveEstimate(
        subsystem_sizes=config.subsystem_sizes,
        mean_s2=tuple(float(x) for x in s2.mean(axis=0)),
        mean_s1=tuple(float(x) for x in s1.mean(axis=0)),
        var_s2=tuple(float(x) for x in var),
        stderr_s2=tuple(float(x) for x in np.sqrt(var / config.samples)),
        samples=config.samples,
        master_seed=config.master_seed,
        rng_algorithm=RNG_ALGORITHM,
        n=config.n,
        squeezing=config.squeezing.values,
    )


@dataclass(frozen=True)
class ConstantEstimate:
    """1/n-extrapolated order-one entropy deficit with bootstrap uncertainty."""

    value: float
    stderr: float
    ladder: tuple[int, ...]
    per_n: tuple[float, ...]   # n * density - mean(S2) at each ladder point
    samples: int
    master_seed: int
    rng_algorithm: str


def _extrapolate_intercept(ns, values):
    """Least-squares intercept of value = a + b/n."""
    x = np.array([1.0 / n for n in ns])
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, np.asarray(values), rcond=None)
    return float(coef[0])


def estimate_constant_term(
    n_ladder,
    s: float,
    r,
    samples: int,
    seed: int,
    workers: int = 1,
    bootstrap_resamples: int = 1000,
    tol: analytic.SeriesTolerance | None = None,
) -> ConstantEstimate:
    """Estimate the order-one deficit lambda by ladder extrapolation.

    At each ladder point computes n * density(s, r) - mean(S2) and
    extrapolates linearly in 1/n; the uncertainty is the bootstrap standard
    deviation of the extrapolated value (resampling per ladder point).
    """
    ladder = sorted(int(n) for n in n_ladder)
    if len(ladder) < 3:
        raise InputError(f"ladder needs at least 3 points, got {ladder}")
    rq = Fraction(r)
    density = analytic.page_curve_density(s, rq, tol)
    per_point = []
    for i, n in enumerate(ladder):
        k = rq * n
        if k.denominator != 1:
            raise InputError(f"r*n must be integral, got r={r}, n={n}")
        s2, _ = _run_entropy_samples(
            n, (s,) * n, (int(k),), samples, seed, namespace=i, workers=workers, with_s1=False
        )
        per_point.append(s2[:, 0])
    lam_hat = [n * density - float(col.mean()) for n, col in zip(ladder, per_point)]
    value = _extrapolate_intercept(ladder, lam_hat)

    boot_stream = SeededStream(seed, 0xB007).generator()
    boots = np.empty(bootstrap_resamples)
    for b in range(bootstrap_resamples):
        resampled = []
        for n, col in zip(ladder, per_point):
            idx = boot_stream.integers(0, len(col), size=len(col))
            resampled.append(n * density - float(col[idx].mean()))
        boots[b] = _extrapolate_intercept(ladder, resampled)
    return ConstantEstimate(
        value=value,
        stderr=float(boots.std(ddof=1)),
        ladder=tuple(ladder),
        per_n=tuple(lam_hat),
        samples=samples,
        master_seed=seed,
        rng_algorithm=RNG_ALGORITHM,
    )


@dataclass(frozen=True)
class TypicalityRecord:
    """Empirical deviation frequencies of S2 from its sample mean at one n."""

    n: int
    k: int
    epsilon: float
    strong_deviation_frequency: float  # |S2 - mean| >= epsilon
    weak_deviation_frequency: float    # |S2/mean - 1| >= epsilon
    mean_s2: float
    samples: int


def _resolve_k_rule(k_rule, n: int) -> int:
    if callable(k_rule):
        return int(k_rule(n))
    if k_rule == "sqrt":
        return math.isqrt(n - 1) + 1 if n > 1 else 1  # ceil(sqrt(n))
    if isinstance(k_rule, str) and k_rule.startswith("ratio:"):
        ratio = float(k_rule.split(":", 1)[1])
        if not 0 <= ratio <= 1:
            raise InputError(f"ratio must be in [0, 1], got {ratio}")
        return round(ratio * n)
    raise InputError(f"unknown k rule {k_rule!r} (use 'sqrt', 'ratio:<x>', or a callable)")


def typicality_probe(
    n_list, k_rule, s: float, epsilon: float, samples: int, seed: int, workers: int = 1
) -> list[TypicalityRecord]:
    """Frequencies of absolute and relative entropy deviations at each n."""
    if epsilon <= 0:
        raise InputError(f"epsilon must be positive, got {epsilon}")
    out = []
    for i, n in enumerate(int(n) for n in n_list):
        k = _resolve_k_rule(k_rule, n)
        if not 0 <= k <= n:
            raise InputError(f"k rule produced k={k} outside [0, {n}]")
        s2, _ = _run_entropy_samples(
            n, (s,) * n, (k,), samples, seed, namespace=i, workers=workers, with_s1=False
        )
        col = s2[:, 0]
        mean = float(col.mean())
        strong = float(np.mean(np.abs(col - mean) >= epsilon))
        if abs(mean) < 1e-12:
            # relative deviation is meaningless at zero mean (vacuum, k=0);
            # fall back to the absolute criterion
            weak = float(np.mean(np.abs(col - mean) >= epsilon))
        else:
            weak = float(np.mean(np.abs(col / mean - 1.0) >= epsilon))
        out.append(
            TypicalityRecord(
                n=n,
                k=k,
                epsilon=epsilon,
                strong_deviation_frequency=strong,
                weak_deviation_frequency=weak,
                mean_s2=mean,
                samples=samples,
            )
        )
    return out


@dataclass(frozen=True)
class DerivativeEstimate:
    """Common-random-number finite difference of mean S2 in one s_i^2."""

    derivative: float
    stderr: float
    negative_fraction: float  # fraction of samples with a negative per-U derivative
    h_plus: float             # s_i^2 used on the upper side
    h_minus: float
    samples: int


def _derivative_chunk(args):
    n, s_values, mode_index, k, h_plus, h_minus, master_seed, j0, j1 = args
    plus = list(s_values)
    minus = list(s_values)
    sign = -1.0 if s_values[mode_index] < 0 else 1.0
    plus[mode_index] = sign * math.sqrt(h_plus)
    minus[mode_index] = sign * math.sqrt(h_minus)
    diag_p = _initial_diagonal(plus)
    diag_m = _initial_diagonal(minus)
    diffs = np.empty(j1 - j0)
    for j in range(j0, j1):
        stream = SeededStream(master_seed, j)
        u = _raw_haar_matrix(n, stream.generator())
        s2p = _renyi2_from_matrix(_reduced_sigma_from_unitary(u, diag_p, n, k))
        s2m = _renyi2_from_matrix(_reduced_sigma_from_unitary(u, diag_m, n, k))
        diffs[j - j0] = (s2p - s2m) / (h_plus - h_minus)
    return j0, diffs


def conjecture_probe(
    config: SqueezingConfig,
    mode_index: int,
    delta: float,
    samples: int,
    seed: int,
    k: int,
    workers: int = 1,
) -> DerivativeEstimate:
    """Central finite difference of the mean S2 with respect to s_i^2.

    Uses common random numbers (the same unitary on both sides of the
    difference), which suppresses the variance of the estimate by orders of
    magnitude.  `mode_index` is zero-based.  Near s_i = 0 the lower side is
    clamped at zero, degrading gracefully to a forward difference.
    """
    if not 0 <= mode_index < config.n:
        raise InputError(f"mode_index {mode_index} outside [0, {config.n})")
    if delta <= 0:
        raise InputError(f"delta must be positive, got {delta}")
    if not 1 <= k <= config.n:
        raise InputError(f"need 1 <= k <= {config.n}, got k={k}")
    h = config.values[mode_index] ** 2
    h_plus = h + delta
    h_minus = max(h - delta, 0.0)
    chunks = [
        (config.n, config.values, mode_index, k, h_plus, h_minus, seed, j0, min(j0 + _CHUNK, samples))
        for j0 in range(0, samples, _CHUNK)
    ]
    diffs = np.empty(samples)
    if workers == 1 or len(chunks) == 1:
        results = map(_derivative_chunk, chunks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_derivative_chunk, chunks))
    for j0, chunk in results:
        diffs[j0 : j0 + len(chunk)] = chunk
    std = float(diffs.std(ddof=1)) if samples > 1 else 0.0
    return DerivativeEstimate(
        derivative=float(diffs.mean()),
        stderr=std / math.sqrt(samples),
        negative_fraction=float(np.mean(diffs < 0)),
        h_plus=h_plus,
        h_minus=h_minus,
        samples=samples,
    )


@dataclass(frozen=True)
class MeanCovarianceResult:
    """Deviation of the sampled mean reduced covariance from its Haar average."""

    max_abs_deviation: float
    max_sigma_units: float       # worst entrywise |deviation| / stderr
    target_diagonal: float       # (1/n) sum cosh(2 s_i)
    mean: np.ndarray
    stderr: np.ndarray
    samples: int


def _covariance_chunk(args):
    n, s_values, k, master_seed, j0, j1 = args
    diag = _initial_diagonal(s_values)
    acc = np.zeros((2 * k, 2 * k))
    acc_sq = np.zeros((2 * k, 2 * k))
    for j in range(j0, j1):
        stream = SeededStream(master_seed, j)
        u = _raw_haar_matrix(n, stream.generator())
        red = _reduced_sigma_from_unitary(u, diag, n, k)
        acc += red
        acc_sq += red * red
    return j0, acc, acc_sq


def mean_covariance_check(
    n: int, config: SqueezingConfig, k: int, samples: int, seed: int, workers: int = 1
) -> MeanCovarianceResult:
    """Compare the sampled mean reduced covariance with (Tr B / n) I.

    B = (Z + Z^-1)/2, so the Haar-average covariance is (1/n) sum_i cosh(2 s_i)
    times the identity on the subsystem.
    """
    if config.n != n:
        raise InputError(f"squeezing has {config.n} entries for n={n}")
    if not 1 <= k <= n:
        raise InputError(f"need 1 <= k <= {n}, got k={k}")
    chunks = [
        (n, config.values, k, seed, j0, min(j0 + _CHUNK, samples))
        for j0 in range(0, samples, _CHUNK)
    ]
    acc = np.zeros((2 * k, 2 * k))
    acc_sq = np.zeros((2 * k, 2 * k))
    if workers == 1 or len(chunks) == 1:
        results = map(_covariance_chunk, chunks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_covariance_chunk, chunks))
    for _, a, a2 in sorted(results, key=lambda t: t[0]):
        acc += a
        acc_sq += a2
    mean = acc / samples
    var = np.maximum(acc_sq / samples - mean * mean, 0.0)
    stderr = np.sqrt(var / samples)
    target = math.fsum(math.cosh(2.0 * v) for v in config.values) / n
    deviation = np.abs(mean - target * np.eye(2 * k))
    floor = 1e-13 * max(1.0, target)  # below matrix-multiplication rounding
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_units = np.where(deviation <= floor, 0.0, deviation / stderr)
    return MeanCovarianceResult(
        max_abs_deviation=float(deviation.max()),
        max_sigma_units=float(np.nanmax(sigma_units)),
        target_diagonal=target,
        mean=mean,
        stderr=stderr,
        samples=samples,
    )
