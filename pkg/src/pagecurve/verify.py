"""Named verification suites behind the CLI `verify` subcommand.

Each check compares an observed value against an independent expectation and
reports a CheckResult; suites are deterministic given the seed.  Statistical
checks in the `montecarlo` suite use widened 5-sigma bands (plus the 2/n
finite-size allowance) so the reduced default sample counts stay reliable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import analytic, gaussian, montecarlo, weingarten
from .gaussian import SqueezingConfig
from .haar import SeededStream, sample_haar_unitary

__all__ = ["CheckResult", "run_suite", "SUITES"]

# Reference coefficients for the low-order mean-overlap polynomials,
# transcribed independently of the generating code.
F_REFERENCE: dict[int, dict[int, int]] = {
    1: {2: 1},
    2: {4: -1, 3: 2},
    3: {6: 2, 5: -6, 4: 5},
    4: {8: -5, 7: 20, 6: -28, 5: 14},
    5: {10: 14, 9: -70, 8: 135, 7: -120, 6: 42},
    6: {12: -42, 11: 252, 10: -616, 9: 770, 8: -495, 7: 132},
    7: {14: 132, 13: -924, 12: 2730, 11: -4368, 10: 4004, 9: -2002, 8: 429},
    8: {16: -429, 15: 3432, 14: -11880, 13: 23100, 12: -27300, 11: 19656, 10: -8008, 9: 1430},
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: str
    expected: str
    tolerance: str

    def as_dict(self):
        return asdict(self)


def _check(name, passed, observed, expected, tolerance="exact") -> CheckResult:
    return CheckResult(name, bool(passed), str(observed), str(expected), str(tolerance))


def suite_coefficients(seed: int = 0, samples: int = 0) -> list[CheckResult]:
    """Exact checks of the polynomial machinery; no randomness involved."""
    out = []
    for l, ref in F_REFERENCE.items():
        poly = analytic.f_polynomial(l)
        expected = {d: Fraction(c) for d, c in ref.items()}
        out.append(
            _check(
                f"f_{l} coefficients",
                poly.coefficients == expected,
                dict(sorted(poly.coefficients.items())),
                dict(sorted(expected.items())),
            )
        )
    for l in range(1, 5):
        value = weingarten.a_ell_enumeration(l)
        closed = Fraction((-1) ** l * 4 ** (l - 1))
        out.append(_check(f"a^({l}) enumeration", value == closed, value, closed))
    for l in range(1, 11):
        observed = analytic.g_exact(l, Fraction(1, 2))
        closed = analytic.g_half_closed_form(l)
        out.append(_check(f"G_{l}(1/2) closed form", observed == closed, observed, closed))
    for l in range(1, 11):
        f = analytic.f_polynomial(l)
        holds = all(
            f(Fraction(num, 64)) - f(1 - Fraction(num, 64)) == 2 * Fraction(num, 64) - 1
            for num in range(0, 65, 7)
        )
        out.append(_check(f"f_{l}(r) - f_{l}(1-r) = 2r - 1", holds, holds, True))
    return out


def suite_weingarten(seed: int = 7, samples: int = 2000) -> list[CheckResult]:
    out = []
    for q in (2, 3, 4):
        for n in (5, 9):
            table = weingarten.wg_class_table(q, n)
            ok = True
            for sigma in itertools.permutations(range(1, q + 1)):
                p_sigma = weingarten.Permutation(sigma)
                total = Fraction(0)
                for tau in itertools.permutations(range(1, q + 1)):
                    p_tau = weingarten.Permutation(tau)
                    inv = [0] * q
                    for a, b in enumerate(tau):
                        inv[b - 1] = a + 1
                    comp = tuple(sigma[inv[i] - 1] for i in range(q))
                    ctype = tuple(weingarten.cycle_type(weingarten.Permutation(comp)))
                    total += table[ctype] * n ** p_tau.cycle_count
                if total != (1 if p_sigma.transposition_distance == 0 else 0):
                    ok = False
                    break
            out.append(_check(f"orthogonality q={q} n={n}", ok, ok, True))

    swap = weingarten.Permutation((2, 1))
    exact = weingarten.wg_exact(swap, 50)
    asym = weingarten.wg_asymptotic(swap, 50)
    gap = abs(asym / float(exact) - 1.0)
    out.append(_check("asymptotic Wg gap (transposition, n=50)", gap <= 5e-4, gap, "<= 5e-4", 5e-4))

    moment = weingarten.haar_moment_trace_product([1], 6, 3)
    out.append(_check("E Tr W (n=6, k=3)", moment == Fraction(12, 7), moment, Fraction(12, 7)))

    traces = np.empty(samples)
    for j in range(samples):
        u = sample_haar_unitary(6, SeededStream(seed, j))
        traces[j] = gaussian.trace_W_powers(u, 3, 1)[0]
    stderr = traces.std(ddof=1) / math.sqrt(samples)
    dev = abs(traces.mean() - float(moment))
    out.append(
        _check(
            f"MC Tr W agreement ({samples} samples)",
            dev <= 3 * stderr,
            f"dev={dev:.4g}",
            f"<= 3*stderr={3 * stderr:.4g}",
            "3 sigma",
        )
    )
    return out


def suite_montecarlo(seed: int = 7, samples: int = 500) -> list[CheckResult]:
    out = []
    n = 12
    vacuum = montecarlo.estimate_entropy_statistics(
        montecarlo.RunConfig(
            n=n,
            squeezing=SqueezingConfig.equal(n, 0.0),
            subsystem_sizes=(0, 3, n),
            samples=min(samples, 50),
            master_seed=seed,
        )
    )
    worst = max(abs(v) for v in vacuum.mean_s2)
    out.append(_check("vacuum entropies vanish", worst <= 1e-10, worst, "<= 1e-10", 1e-10))

    k = 4
    comp_dev = 0.0
    for j in range(min(samples, 50)):
        u = sample_haar_unitary(n, SeededStream(seed, j))
        state = gaussian.evolve(
            gaussian.build_initial_covariance(SqueezingConfig.equal(n, 0.6)), u
        )
        first = gaussian.renyi2_entropy(gaussian.reduce_subsystem(state, k))
        rest = gaussian.renyi2_entropy(gaussian.reduce_modes(state, range(k, n)))
        comp_dev = max(comp_dev, abs(first - rest))
    out.append(
        _check("complement symmetry per sample", comp_dev <= 1e-9, comp_dev, "<= 1e-9", 1e-9)
    )

    n2 = 20
    est = montecarlo.estimate_entropy_statistics(
        montecarlo.RunConfig(
            n=n2,
            squeezing=SqueezingConfig.equal(n2, 0.75),
            subsystem_sizes=(n2 // 2,),
            samples=samples,
            master_seed=seed,
        )
    )
    predicted = analytic.page_curve_prediction(n2, 0.75, n2 // 2)
    band = 5 * est.stderr_s2[0] + 2.0 / n2
    dev = abs(est.mean_s2[0] - predicted)
    out.append(
        _check(
            f"mean S2 vs asymptotic prediction (n={n2}, {samples} samples)",
            dev <= band,
            f"dev={dev:.4g}",
            f"<= {band:.4g}",
            "5 sigma + 2/n",
        )
    )

    cov = montecarlo.mean_covariance_check(
        8, SqueezingConfig.equal(8, 0.75), 3, samples, seed
    )
    out.append(
        _check(
            "mean reduced covariance vs (Tr B / n) I",
            cov.max_sigma_units <= 5.0,
            f"{cov.max_sigma_units:.3g} sigma",
            "<= 5 sigma",
            "5 sigma",
        )
    )

    small = montecarlo.RunConfig(
        n=8,
        squeezing=SqueezingConfig.equal(8, 0.5),
        subsystem_sizes=(2,),
        samples=min(samples, 64),
        master_seed=seed,
    )
    one = montecarlo.estimate_entropy_statistics(small)
    two = montecarlo.estimate_entropy_statistics(
        montecarlo.RunConfig(**{**small.__dict__, "workers": 2})
    )
    same = one.mean_s2 == two.mean_s2 and one.var_s2 == two.var_s2
    out.append(_check("worker-count invariance", same, same, True))
    return out


SUITES = {
    "coefficients": suite_coefficients,
    "weingarten": suite_weingarten,
    "montecarlo": suite_montecarlo,
}


def run_suite(name: str, seed: int = 7, samples: int | None = None) -> list[CheckResult]:
    """Run one named suite (or 'all'); returns the individual check results."""
    if name == "all":
        out = []
        for key in ("coefficients", "weingarten", "montecarlo"):
            out.extend(run_suite(key, seed=seed, samples=samples))
        return out
    if name not in SUITES:
        raise KeyError(name)
    kwargs = {"seed": seed}
    if samples is not None:
        kwargs["samples"] = samples
    return SUITES[name](**kwargs)
