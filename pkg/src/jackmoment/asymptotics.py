"""Divergence regimes, predicted exponents, macroscopic limits, and fits.

The equal-argument 2F1 with gamma := a + b - c and beta := 2/alpha falls,
as t -> 1-, into one of three regimes (positivity of the term ratios
assumed, which holds for the moment parameterizations):

* bounded        when gamma < -(N-1) beta/2,
* (1-t)^(-delta) * log(1/(1-t)) with delta = (j-1) j beta/2
                 when gamma = beta(j - 1 - (N-1)/2) for some j in 1..N,
* (1-t)^(-delta) with delta = j (gamma + (N-j) beta/2)
                 between lattice points (index j), extending to
                 delta = N gamma above the last lattice point.

delta is continuous in gamma across the lattice.  Specializing to the
moment parameterizations gives the circular exponents (log thresholds
2|mu| = beta(j-1)+1), the Berry-Keating formula, and the Jacobi/group
exponent tables; ``fit_divergence`` verifies exponents numerically from an
epsilon sweep of converged series values.

Lattice membership is a discrete decision: it is tested exactly when the
inputs arrive as Fractions (the CLI prefers rational syntax) and with a
1e-12 tolerance otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .hyperg import NonConvergenceError, SeriesResult
from .moments import GROUP_WEIGHTS, Group

LATTICE_TOL = 1e-12


class RangeError(ValueError):
    """Requested exponent lies outside the stated j = 1..N windows."""


class InsufficientDataError(RuntimeError):
    """Fewer than 4 converged points were available for a fit."""


@dataclass(frozen=True)
class AsymptoticForm:
    regime: str  # "bounded" | "power" | "log"
    delta: float
    log_flag: bool
    j: int
    gamma: float


def _is_exact(*vals) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in vals)


def _nearest_int(x, exact: bool):
    """(j, on_lattice) for x against the integers."""
    if exact:
        fx = Fraction(x)
        if fx.denominator == 1:
            return int(fx), True
        return math.floor(fx), False
    j = round(float(x))
    if abs(float(x) - j) <= LATTICE_TOL * max(1.0, abs(j)):
        return int(j), True
    return math.floor(float(x)), False


def classify_2f1(a, b, c, alpha, N: int) -> AsymptoticForm:
    """Regime of 2F1(a,b;c; t*1^N) as t -> 1-, total over real gamma."""
    exact = _is_exact(a, b, c, alpha)
    if exact:
        a, b, c, alpha = Fraction(a), Fraction(b), Fraction(c), Fraction(alpha)
    gamma = a + b - c
    beta = 2 / Fraction(alpha) if exact else 2.0 / alpha
    # gamma = beta*(j - 1 - (N-1)/2)  <=>  j = gamma/beta + (N+1)/2
    j_real = gamma / beta + Fraction(N + 1, 2) if exact else gamma / beta + (N + 1) / 2.0
    j, on_lattice = _nearest_int(j_real, exact)
    g = float(gamma)
    if on_lattice and 1 <= j <= N:
        return AsymptoticForm("log", float((j - 1) * j * beta / 2), True, j, g)
    if j_real < 1:
        return AsymptoticForm("bounded", 0.0, False, 0, g)
    if j_real > N:
        return AsymptoticForm("power", float(N * gamma), False, N, g)
    j = min(max(j, 1), N - 1) if N > 1 else 1
    return AsymptoticForm("power", float(j * (gamma + (N - j) * beta / 2)), False, j, g)


def circular_exponent(mu, beta, N: int) -> AsymptoticForm:
    """Divergence of the circular average as |z| -> 1-, mu < 0.

    Log thresholds 2|mu| = beta(j-1)+1 (delta = (j-1) j beta/2); in between,
    delta = j(2|mu| - 1 - (j-1) beta/2) with j = int[(2|mu|-1)/beta + 1].
    Rejects 2|mu| > beta N + 1 (beyond the j = N window).
    """
    if mu >= 0:
        raise ValueError("circular_exponent is stated for mu < 0")
    exact = _is_exact(mu, beta)
    if exact:
        mu, beta = Fraction(mu), Fraction(beta)
    k = -2 * mu
    gamma = float(k - 1 - (N - 1) * beta / 2)
    if k < 1:
        return AsymptoticForm("bounded", 0.0, False, 0, gamma)
    j, on_lattice = _nearest_int((k - 1) / beta + 1, exact)
    if on_lattice:
        if j > N:
            raise RangeError(f"log index j={j} exceeds N={N}")
        return AsymptoticForm("log", float((j - 1) * j * beta / 2), True, j, gamma)
    if j > N:
        raise RangeError(f"2|mu|={float(k)} beyond the j={N} window (beta N + 1)")
    return AsymptoticForm(
        "power", float(j * (k - 1 - (j - 1) * beta / 2)), False, j, gamma
    )


def bk_delta(k: float, beta: float) -> float:
    """Berry-Keating exponent: delta = j (k - 1 + beta/2 - beta j / 2),
    j = int[(k-1)/beta + 1], for k = 2|mu| >= 1."""
    if k < 1:
        raise ValueError("stated for k >= 1")
    j = math.floor((k - 1) / beta + 1)
    return j * (k - 1 + beta / 2 - beta * j / 2)


def jacobi_exponent(mu, b, beta, N: int) -> AsymptoticForm:
    """Divergence of x^{-2 mu N} <prod|x - x_l|^{2 mu}> as x -> 1+ in (1 - 1/x).

    Classification is delegated to classify_2f1 on the series parameters
    (2|mu|, (beta/2)(N-1); beta(N-1)+b+2), whose gamma is
    2|mu| - b - 2 - (beta/2)(N-1): log thresholds 2|mu| = beta(j-1)+b+2,
    in between delta = j(2|mu| - b - 2 - (j-1) beta/2).
    """
    if mu >= 0:
        raise ValueError("jacobi_exponent is stated for mu < 0")
    exact = _is_exact(mu, b, beta)
    if exact:
        mu, b, beta = Fraction(mu), Fraction(b), Fraction(beta)
        alpha = 2 / beta
        form = classify_2f1(
            -2 * mu, beta * (N - 1) / 2, beta * (N - 1) + b + 2, alpha, N
        )
        q = -2 * mu - b - 2
    else:
        alpha = 2.0 / beta
        form = classify_2f1(
            -2.0 * mu, beta * (N - 1) / 2.0, beta * (N - 1) + b + 2.0, alpha, N
        )
        q = -2.0 * mu - b - 2.0
    if form.regime == "power" and form.j == N and q >= beta * N:
        raise RangeError(f"2|mu|={float(-2*mu)} beyond the j={N} window")
    return form


def group_exponent(family: str, N: int, mu) -> AsymptoticForm:
    """Divergence of <|det((1+eps)I - U)|^{2 mu}> in eps as eps -> 0+.

    The Jacobi variable satisfies 1 - 1/x ~ eps^2/2, so group deltas are
    exactly twice the Jacobi ones; o- is shifted by -1 on top (the stated
    fixed-eigenvalue correction), with j capped at N-1.
    """
    Group(family, N)
    _, b = GROUP_WEIGHTS[family]
    M = N - 1 if family == "o-" else N
    form = jacobi_exponent(mu, b, 2, M)
    if form.regime == "bounded":
        return form
    delta = 2.0 * form.delta
    if family == "o-":
        delta -= 1.0
    return AsymptoticForm(form.regime, delta, form.log_flag, form.j, form.gamma)


def circular_symbol_coeffs(mu: float, z: complex, p_max: int) -> dict[int, complex]:
    """Fourier coefficients of 2 mu log|z - e^{i theta}| up to |p| <= p_max.

    a_p = -mu conj(z)^p / p (p > 0), a_p = mu z^{-p} / p (p < 0), a_0 = 0.
    """
    if abs(z) >= 1:
        raise ValueError("requires |z| < 1")
    out: dict[int, complex] = {0: 0.0}
    for p in range(1, p_max + 1):
        out[p] = -mu * np.conj(z) ** p / p
        out[-p] = mu * z**p / p
    return out


def szego_limit(fourier: dict[int, complex], beta: float, N: int) -> float:
    """Large-N limit exp(N a_0 + (2/beta) sum_{p>=1} p a_p a_{-p}).

    ``fourier`` maps p to a_p with finitely many entries (a finite map
    always satisfies the summability condition sum |p| |a_p|^2 < infty).
    """
    a0 = fourier.get(0, 0.0)
    acc = 0.0 + 0.0j
    for p, ap in fourier.items():
        if p >= 1:
            acc += p * ap * fourier.get(-p, 0.0)
    val = np.exp(N * a0 + (2.0 / beta) * acc)
    if abs(np.imag(val)) > 1e-9 * max(1.0, abs(np.real(val))):
        raise ValueError("limit came out non-real; check the coefficient map")
    return float(np.real(val))


def cbe_moment_limit(mu: float, beta: float, absz: float) -> float:
    """Closed-form macroscopic limit exp(-(2 mu^2/beta) log(1 - |z|^2))."""
    if not 0 <= absz < 1:
        raise ValueError("requires |z| < 1")
    return math.exp(-(2.0 * mu * mu / beta) * math.log(1.0 - absz * absz))


@dataclass
class FitReport:
    fitted_delta: float
    fitted_log_coeff: float
    predicted: AsymptoticForm
    epsilons: list[float]
    values: list[float]
    converged: list[bool]
    residual_rms: float
    all_converged: bool


def fit_divergence(
    moment_fn,
    eps_grid,
    predicted: AsymptoticForm,
    rel_tol: float,
    max_workers: int = 1,
) -> FitReport:
    """Least-squares exponent fit over an epsilon sweep.

    ``moment_fn(eps, rel_tol)`` must return a SeriesResult for the moment at
    distance eps from the support (circular: |z| = 1 - eps; jacobi:
    x = 1/(1 - eps)).  Unconverged points are recorded and excluded; the fit
    needs at least 4 converged points.  Model: log M = -delta log eps + c,
    plus a log log(1/eps) regressor when the prediction carries a log.
    """
    eps_grid = [float(e) for e in eps_grid]
    if any(not 0 < e <= 0.2 for e in eps_grid):
        raise ValueError("epsilon grid must lie in (0, 0.2]")
    if any(e2 >= e1 for e1, e2 in zip(eps_grid, eps_grid[1:])):
        raise ValueError("epsilon grid must be strictly decreasing")

    def eval_point(eps: float) -> tuple[float, bool]:
        try:
            res = moment_fn(eps, rel_tol)
            return res.value, res.converged
        except NonConvergenceError as exc:
            return exc.partial.value, False

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(eval_point, eps_grid))
    else:
        results = [eval_point(e) for e in eps_grid]

    values = [v for v, _ in results]
    conv = [c for _, c in results]
    eps_ok = [e for e, c in zip(eps_grid, conv) if c]
    val_ok = [v for v, c in zip(values, conv) if c]
    if len(eps_ok) < 4:
        raise InsufficientDataError(
            f"only {len(eps_ok)} converged points out of {len(eps_grid)}"
        )
    le = np.log(eps_ok)
    ly = np.log(val_ok)
    cols = [np.ones_like(le), -le]
    if predicted.log_flag:
        cols.append(np.log(np.log(1.0 / np.asarray(eps_ok))))
    design = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - design @ coef
    return FitReport(
        fitted_delta=float(coef[1]),
        fitted_log_coeff=float(coef[2]) if predicted.log_flag else 0.0,
        predicted=predicted,
        epsilons=eps_grid,
        values=values,
        converged=conv,
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        all_converged=all(conv),
    )


def circular_fit_family(beta: float, mu: float, N: int, **kw):
    """Moment evaluator for circular sweeps: eps -> moment at |z| = 1 - eps."""
    from .moments import circular_moment

    def fn(eps: float, rel_tol: float) -> SeriesResult:
        return circular_moment(beta, N, mu, 1.0 - eps, rel_tol, **kw)

    return fn


def jacobi_fit_family(a: float, b: float, beta: float, mu: float, N: int, **kw):
    """Moment evaluator for jacobi sweeps: eps -> moment at x = 1/(1 - eps),
    normalized by x^{-2 mu N} (the corollary's left-hand side)."""
    from .moments import jacobi_moment

    def fn(eps: float, rel_tol: float) -> SeriesResult:
        x = 1.0 / (1.0 - eps)
        res = jacobi_moment(a, b, beta, N, mu, x, rel_tol, **kw)
        return res.scaled(x ** (-2.0 * mu * N))

    return fn
