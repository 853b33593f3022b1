"""Acceptance checks, shared between the CLI `verify` command and pytest.

Each check returns a list of CheckResult rows; a suite passes when every
row does.  Tolerances are pinned here and nowhere else.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .asymptotics import (
    RangeError,
    bk_delta,
    cbe_moment_limit,
    circular_exponent,
    circular_fit_family,
    classify_2f1,
    fit_divergence,
)
from .hyperg import Hyp2F1Params, hyp1f0_equal, series_term
from .jack import p_principal
from .jackexact import jack_principal_exact
from .mcmc import ChainConfig, linear_statistic_check, mc_moment
from .moments import Circular, circular_moment, group_moment, jacobi_moment
from .partitions import partition_layer
from .quadrature import (
    QuadratureSpec,
    circular_quadrature,
    group_quadrature,
    jacobi_quadrature,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: {self.detail}"


def check_binomial() -> list[CheckResult]:
    """Criterion 1: 1F0 identity to 1e-10 relative at rel_tol 1e-12."""
    out = []
    worst = 0.0
    for a in (0.7, 2.0):
        for alpha in (0.5, 1.0, 2.0):
            for N in (1, 2, 3, 4):
                for t in (0.2, 0.6):
                    res = hyp1f0_equal(a, alpha, N, t, 1e-12)
                    target = (1.0 - t) ** (-a * N)
                    rel = abs(res.value - target) / target
                    worst = max(worst, rel)
    out.append(
        CheckResult(
            "binomial identity (48 cases)", worst <= 1e-10, f"worst rel err {worst:.2e}"
        )
    )
    return out


def check_jack_lock() -> list[CheckResult]:
    """Criterion 2: product formula == exact oracle, zero tolerance."""
    mismatches = 0
    cases = 0
    for w in range(0, 7):
        for kappa in partition_layer(w, w if w else 1):
            for N in (1, 2, 3, 4):
                for alpha in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)):
                    exact = (
                        jack_principal_exact(kappa, alpha, N)
                        if len(kappa) <= N
                        else Fraction(0)
                    )
                    if p_principal(kappa, alpha, N) != exact:
                        mismatches += 1
                    cases += 1
    return [
        CheckResult(
            "jack principal specialization lock",
            mismatches == 0,
            f"{cases} cases, {mismatches} mismatches (exact rational)",
        )
    ]


def check_n1_reduction() -> list[CheckResult]:
    """Criterion 3: N=1 term-by-term equals the classical Gauss series."""
    rng = random.Random(20240311)
    bad = 0
    for _ in range(50):
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
        b = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
        c = Fraction(rng.randint(1, 9), rng.randint(1, 7)) + 10  # keep (c)_k nonzero
        alpha = Fraction(rng.randint(1, 8), rng.randint(1, 5))
        t = Fraction(rng.randint(-3, 3), 7)
        p = Hyp2F1Params(a=a, b=b, c=c, alpha=alpha, N=1, t=t)
        rising = lambda u, k: math.prod((u + i for i in range(k)), start=Fraction(1))
        for k in range(20):
            lhs = series_term((k,) if k else (), p).value
            rhs = (
                rising(a, k)
                * rising(b, k)
                / (rising(c, k) * math.factorial(k))
                * t**k
            )
            if lhs != rhs:
                bad += 1
    return [
        CheckResult(
            "N=1 classical reduction",
            bad == 0,
            f"50 rational triples x 20 terms, {bad} mismatches (exact)",
        )
    ]


def check_oracle_triangle_circular() -> list[CheckResult]:
    """Criterion 4, deterministic half: series vs quadrature <= 1e-8."""
    worst = 0.0
    worst_case = ""
    spec = QuadratureSpec(nodes_per_dim=16, max_nodes_per_dim=2048)
    for beta in (1.0, 2.0, 4.0):
        for N in (2, 3):
            for mu in (-1.0, -0.75, 0.5):
                for absz in (0.3, 0.6):
                    s = circular_moment(beta, N, mu, absz, 1e-10).value
                    q = circular_quadrature(beta, N, mu, absz, spec)
                    rel = abs(s - q) / abs(q)
                    if rel > worst:
                        worst, worst_case = rel, f"beta={beta} N={N} mu={mu} |z|={absz}"
    return [
        CheckResult(
            "circular series vs quadrature (36 cases)",
            worst <= 1e-8,
            f"worst rel err {worst:.2e} at {worst_case}",
        )
    ]


def check_mc_triangle(fast: bool = False) -> list[CheckResult]:
    """Criterion 4, stochastic half: MC within 3 sigma of the series at N=8."""
    out = []
    cfg = ChainConfig(n_samples=20_000 if fast else 80_000, seed=1712)
    for mu, absz in ((-1.0, 0.3), (-0.75, 0.6), (0.5, 0.6)):
        st = mc_moment(Circular(2.0, 8), mu, absz, cfg)
        ref = circular_moment(2.0, 8, mu, absz, 1e-10).value
        pull = abs(st.estimate - ref) / st.std_error
        out.append(
            CheckResult(
                f"circular MC (N=8, mu={mu}, |z|={absz})",
                pull <= 3.0,
                f"estimate {st.estimate:.6f} +- {st.std_error:.2g}, series {ref:.6f}, pull {pull:.2f}",
            )
        )
    return out


def check_oracle_triangle_jacobi() -> list[CheckResult]:
    """Criterion 5: Jacobi series vs endpoint-weighted quadrature <= 1e-6."""
    out = []
    spec = QuadratureSpec(nodes_per_dim=16, max_nodes_per_dim=2048)
    for a, b in ((0.0, 0.0), (0.5, 0.5), (0.5, -0.5)):
        s = jacobi_moment(a, b, 2.0, 2, -0.6, 1.5, 1e-9).value
        q = jacobi_quadrature(a, b, 2.0, 2, -0.6, 1.5, spec)
        rel = abs(s - q) / abs(q)
        out.append(
            CheckResult(
                f"jacobi series vs quadrature (a={a}, b={b})",
                rel <= 1e-6,
                f"series {s:.10g} quad {q:.10g} rel {rel:.2e}",
            )
        )
    return out


def check_group_pipeline() -> list[CheckResult]:
    """Criterion 6: group pipeline vs cos(theta)-density quadrature <= 1e-6."""
    out = []
    spec = QuadratureSpec(nodes_per_dim=16, max_nodes_per_dim=2048)
    for family, N in (("sp", 2), ("o+", 2), ("o-", 2)):
        s = group_moment(family, N, -0.6, 0.5, 1e-9).value
        q = group_quadrature(family, N, -0.6, 0.5, spec)
        rel = abs(s - q) / abs(q)
        out.append(
            CheckResult(
                f"group pipeline {family}({2*N})",
                rel <= 1e-6,
                f"series {s:.10g} quad {q:.10g} rel {rel:.2e}",
            )
        )
    return out


def check_exponent_identities() -> list[CheckResult]:
    """Criterion 7: bk_delta == corollary delta; classify reproduces corollary."""
    out = []
    worst = 0.0
    count = 0
    for beta in (0.5, 1.0, 2.0, 3.0, 4.0):
        for i in range(100):
            k = 1.0 + 7.0 * (i + 0.5) / 100.0
            frac = (k - 1.0) / beta
            if abs(frac - round(frac)) < 1e-6:
                k += 3.3e-4  # nudge off the lattice
            form = circular_exponent(-k / 2.0, beta, 32)
            worst = max(worst, abs(bk_delta(k, beta) - form.delta))
            count += 1
    out.append(
        CheckResult(
            f"bk_delta == corollary delta ({count} points)",
            worst <= 1e-12,
            f"worst abs gap {worst:.2e}",
        )
    )
    bad = 0
    checked = 0
    for beta in (0.5, 1.0, 2.0, 4.0):
        for N in (5, 30):
            for mu in np.linspace(-4.0, -0.05, 80):
                params = (-mu, -mu, (beta / 2.0) * (N - 1) + 1.0, 2.0 / beta)
                cls = classify_2f1(*params, N)
                try:
                    cor = circular_exponent(mu, beta, N)
                except RangeError:
                    # above the last corollary window the general classifier
                    # must sit in the per-variable power regime
                    if not (cls.regime == "power" and cls.j == N):
                        bad += 1
                    continue
                checked += 1
                same = (
                    cls.regime == cor.regime
                    and cls.j == cor.j
                    and abs(cls.delta - cor.delta) <= 1e-12 * max(1.0, abs(cor.delta))
                )
                if not same:
                    bad += 1
    out.append(
        CheckResult(
            f"classify_2f1 reproduces corollary ({checked} in-range points)",
            bad == 0,
            f"{bad} disagreements",
        )
    )
    return out


def check_divergence_fits() -> list[CheckResult]:
    """Criterion 8: fitted exponents for power / log / bounded sweeps."""
    out = []
    grid = list(np.geomspace(1e-2, 1e-3, 10))
    power = fit_divergence(
        circular_fit_family(2.0, -1.0, 30),
        grid,
        circular_exponent(-1.0, 2.0, 30),
        1e-8,
    )
    out.append(
        CheckResult(
            "power fit (beta=2, mu=-1, N=30)",
            abs(power.fitted_delta - 1.0) <= 0.03 and power.all_converged,
            f"fitted delta {power.fitted_delta:.5f} (predicted 1), rms {power.residual_rms:.1e}",
        )
    )
    logfit = fit_divergence(
        circular_fit_family(2.0, -1.5, 30),
        grid,
        circular_exponent(-1.5, 2.0, 30),
        1e-8,
    )
    out.append(
        CheckResult(
            "log fit (beta=2, mu=-1.5, N=30)",
            abs(logfit.fitted_delta - 2.0) <= 0.10 and logfit.fitted_log_coeff > 0,
            f"fitted delta {logfit.fitted_delta:.5f} (predicted 2), "
            f"log coeff {logfit.fitted_log_coeff:.3f}",
        )
    )
    bounded = fit_divergence(
        circular_fit_family(2.0, -0.25, 30),
        grid,
        circular_exponent(-0.25, 2.0, 30),
        1e-8,
    )
    out.append(
        CheckResult(
            "bounded fit (beta=2, mu=-0.25, N=30)",
            abs(bounded.fitted_delta) <= 0.05,
            f"fitted delta {bounded.fitted_delta:.5f} (predicted 0)",
        )
    )
    return out


def check_macroscopic_limit() -> list[CheckResult]:
    """Criterion 9: finite-N values approach the Szego/Johansson limit."""
    limit = cbe_moment_limit(-1.0, 2.0, 0.6)
    gaps = []
    for N in (8, 16, 32):
        val = circular_moment(2.0, N, -1.0, 0.6, 1e-10).value
        gaps.append(abs(val - limit) / limit)
    monotone = gaps[0] + 1e-10 >= gaps[1] and gaps[1] + 1e-10 >= gaps[2]
    return [
        CheckResult(
            "macroscopic limit (beta=2, mu=-1, |z|=0.6)",
            monotone and gaps[-1] < 0.02,
            f"gaps at N=8,16,32: {gaps[0]:.2e}, {gaps[1]:.2e}, {gaps[2]:.2e} "
            f"(limit {limit:.6f})",
        )
    ]


def check_fluctuations(fast: bool = False) -> list[CheckResult]:
    """Criterion 10: variance of A(z) matches -(4/beta) log(1-|z|^2)."""
    out = []
    n = 30_000 if fast else 100_000
    rep2 = linear_statistic_check(2.0, 32, 0.5, ChainConfig(n_samples=n, seed=7))
    ratio2 = rep2.empirical_variance / rep2.predicted_variance
    out.append(
        CheckResult(
            "fluctuation variance beta=2",
            abs(ratio2 - 1.0) <= 0.10,
            f"empirical {rep2.empirical_variance:.4f} vs predicted "
            f"{rep2.predicted_variance:.4f} (ratio {ratio2:.3f})",
        )
    )
    rep4 = linear_statistic_check(4.0, 32, 0.5, ChainConfig(n_samples=n, seed=8))
    ratio4 = rep4.empirical_variance / rep4.predicted_variance
    scaling_gap = abs(rep4.empirical_variance - 0.5 * rep2.empirical_variance)
    scaling_ok = scaling_gap <= 3.0 * (rep4.variance_std_error + 0.5 * rep2.variance_std_error)
    out.append(
        CheckResult(
            "fluctuation variance beta=4 and 1/beta scaling",
            abs(ratio4 - 1.0) <= 0.10 and scaling_ok,
            f"empirical {rep4.empirical_variance:.4f} vs predicted "
            f"{rep4.predicted_variance:.4f} (ratio {ratio4:.3f}); "
            f"half the beta=2 value within {scaling_gap:.4f}",
        )
    )
    return out


SUITES = {
    "jack": (check_jack_lock, check_n1_reduction),
    "binomial": (check_binomial,),
    "quadrature": (
        check_oracle_triangle_circular,
        check_oracle_triangle_jacobi,
        check_group_pipeline,
    ),
    "mc": (check_mc_triangle, check_fluctuations),
    "exponents": (check_exponent_identities,),
    "fits": (check_divergence_fits,),
    "limits": (check_macroscopic_limit,),
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        results = []
        for checks in SUITES.values():
            for check in checks:
                results.extend(check())
        return results
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    results = []
    for check in SUITES[name]:
        results.extend(check())
    return results
