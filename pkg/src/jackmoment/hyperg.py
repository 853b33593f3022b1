"""Adaptive summation of the Jack-polynomial hypergeometric series.

``hyp2f1_equal`` evaluates

    2F1(a, b; c; t * 1^N) = sum over partitions of
        [a]_k [b]_k / ([c]_k |k|!) * C_k(t, ..., t)

with weight-by-weight truncation, a three-consecutive-layer stopping rule,
a geometric tail estimate, and an explicit divergence guard.  Two engines
share the same contract:

* ``layers``: exact enumeration of partitions per weight, vectorized through
  :class:`jackmoment.jack.LayerTables`.  Works for any alpha; cost grows with
  the number of partitions, which explodes as t -> 1 unless the series
  length-truncates (a or b on the alpha lattice).
* ``hankel``: alpha = 1 only.  Via the Schur specialization the series
  collapses to an N x N Hankel determinant of one-dimensional moment sums

    F = K / sf(N) * t^(-N(N-1)/2) * det[ M_(p+q) ],
    M_r = sum_h h^r g(h) t^h,
    g(h) = G(h+a-N+1) G(h+b-N+1) / (G(h+c-N+1) h!),

  where K = prod_i G(c-i+1)/(G(a-i+1) G(b-i+1)) and sf is the
  superfactorial.  Each M_r converges at the same geometric rate as a
  classical Gauss series, so the cost near t = 1 is polynomial, not
  combinatorial.  The determinant cancellation is handled by multiprecision
  arithmetic with an agreement check between two precision levels.

Determinism: terms inside a weight layer are summed in enumeration order and
layers are added in increasing weight, so identical inputs give bit-identical
results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np

from .jack import LayerTables, PoleError, c_principal_term, gen_pochhammer
from .partitions import Partition, cells, partition_layer

W_STOP = 3  # consecutive negligible layers required to stop
DIVERGENCE_RUN = 10  # consecutive growing layers past weight 50 that abort
DEFAULT_MAX_WEIGHT = 100_000
DEFAULT_TERM_BUDGET = 2_000_000


@dataclass(frozen=True)
class Hyp2F1Params:
    """Equal-argument series parameters; |t| < 1 for convergence claims."""

    a: float
    b: float
    c: float
    alpha: float
    N: int
    t: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")


@dataclass
class SeriesResult:
    value: float
    trunc_weight: int
    tail_estimate: float
    converged: bool
    terms_summed: int
    engine: str = "layers"

    def scaled(self, factor: float) -> "SeriesResult":
        return replace(
            self,
            value=self.value * factor,
            tail_estimate=self.tail_estimate * abs(factor),
        )


@dataclass
class TermValue:
    value: float
    kappa: Partition


class NonConvergenceError(RuntimeError):
    """Series did not converge; carries the partial result."""

    def __init__(self, message: str, partial: SeriesResult):
        super().__init__(message)
        self.partial = partial


def series_term(kappa: Partition, p: Hyp2F1Params) -> TermValue:
    """Single summand for partition kappa; exact if inputs are exact.

    Raises :class:`PoleError` naming the offending cell when a cell factor
    of [c]_kappa vanishes.
    """
    kappa = tuple(kappa)
    if len(kappa) > p.N:
        raise ValueError(f"partition length {len(kappa)} exceeds N={p.N}")
    cpoch = gen_pochhammer(p.c, kappa, p.alpha, p.N)
    if cpoch == 0:
        for i, j in cells(kappa):
            if p.c - Fraction(i - 1, 1) / Fraction(p.alpha) + (j - 1) == 0:
                raise PoleError(p.c, (i, j))
        raise PoleError(p.c, (0, 0))
    num = gen_pochhammer(p.a, kappa, p.alpha, p.N) * gen_pochhammer(
        p.b, kappa, p.alpha, p.N
    )
    val = (
        num
        / cpoch
        / math.factorial(sum(kappa))
        * c_principal_term(kappa, p.alpha, p.N, p.t)
    )
    return TermValue(val, kappa)


def _lattice_truncation(u: float, alpha: float) -> int | None:
    """Row-count cap from [u]'s lattice zeros: parts beyond alpha*u vanish.

    Cell (i, 1) of [u] is u - (i-1)/alpha, zero at i = alpha*u + 1; any
    partition with that many parts contributes nothing.  Only exact float
    integrality counts (near-misses are genuinely nonzero terms).
    """
    au = alpha * u
    if au > 0 and au == round(au):
        return int(round(au))
    return None


@lru_cache(maxsize=None)
def _count_upto(w: int, m: int) -> int:
    """Number of partitions of w with at most m parts."""
    if w == 0:
        return 1
    if m == 0 or w < 0:
        return 0
    return _count_upto(w - m, m) + _count_upto(w, m - 1)


@lru_cache(maxsize=4096)
def _layer_array(w: int, max_parts: int) -> np.ndarray:
    """Partitions of weight w, padded to max_parts columns, row per partition."""
    layer = partition_layer(w, max_parts)
    out = np.zeros((len(layer), max_parts), dtype=np.int64)
    for r, kappa in enumerate(layer):
        out[r, : len(kappa)] = kappa
    return out


def _effective_max_parts(p: Hyp2F1Params) -> int:
    cap = p.N
    for u in (p.a, p.b):
        trunc = _lattice_truncation(u, p.alpha)
        if trunc is not None:
            cap = min(cap, trunc)
    return cap


def _hankel_applicable(p: Hyp2F1Params) -> bool:
    if p.alpha != 1.0 or p.t <= 0:
        return False
    for u in (p.a, p.b, p.c):
        if u == round(u) and u < p.N:
            return False
    return True


def _estimate_weight_needed(t: float, rel_tol: float) -> int:
    if t == 0:
        return 1
    return max(8, int(math.log(rel_tol * max(1e-6, (1 - abs(t)))) / math.log(abs(t))) + 30)


def _choose_engine(p: Hyp2F1Params, rel_tol: float, term_budget: int) -> str:
    if not _hankel_applicable(p):
        return "layers"
    max_parts = _effective_max_parts(p)
    w_est = _estimate_weight_needed(p.t, rel_tol)
    total = 0
    for w in range(0, w_est + 1, max(1, w_est // 32)):
        total += _count_upto(w, max_parts) * max(1, w_est // 32)
        if total > term_budget:
            return "hankel"
    return "layers"


def hyp2f1_equal(
    p: Hyp2F1Params,
    rel_tol: float,
    engine: str = "auto",
    max_weight: int = DEFAULT_MAX_WEIGHT,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> SeriesResult:
    """Sum the equal-argument series to relative tolerance ``rel_tol``.

    Stops once the last three weight layers each contribute less than
    rel_tol times the partial sum and the geometric tail estimate is within
    tolerance; aborts with :class:`NonConvergenceError` when layer sums grow
    for ten consecutive weights past weight 50, or when caps are exceeded.
    """
    if abs(p.t) >= 1:
        raise ValueError(f"series requires |t| < 1, got t={p.t}")
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if engine not in ("auto", "layers", "hankel"):
        raise ValueError(f"unknown engine {engine!r}")
    if p.t == 0:
        return SeriesResult(1.0, 0, 0.0, True, 1, "layers")
    if engine == "auto":
        engine = _choose_engine(p, rel_tol, term_budget)
    if engine == "hankel":
        if not _hankel_applicable(p):
            raise ValueError(
                "hankel engine needs alpha == 1, t > 0, and non-lattice parameters"
            )
        return _hyp2f1_hankel(p, rel_tol)
    return _hyp2f1_layers(p, rel_tol, max_weight, term_budget)


def hyp1f0_equal(
    a: float,
    alpha: float,
    N: int,
    t: float,
    rel_tol: float,
    max_weight: int = DEFAULT_MAX_WEIGHT,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> SeriesResult:
    """Binomial series 1F0(a; t * 1^N); converged value is (1-t)^(-aN).

    Internally a 2F1 with b = c chosen off every parameter lattice so the
    ratio [b]/[c] is exactly 1 cell by cell.
    """
    bc = N / alpha + N + 0.25
    p = Hyp2F1Params(a=a, b=bc, c=bc, alpha=alpha, N=N, t=t)
    if t == 0:
        return SeriesResult(1.0, 0, 0.0, True, 1, "layers")
    return _hyp2f1_layers(p, rel_tol, max_weight, term_budget)


def _hyp2f1_layers(
    p: Hyp2F1Params, rel_tol: float, max_weight: int, term_budget: int
) -> SeriesResult:
    max_parts = _effective_max_parts(p)
    if max_parts == 0:
        # [a] kills every nonempty partition (a = 0 lattice)
        return SeriesResult(1.0, 0, 0.0, True, 1, "layers")
    tables = LayerTables(p.a, p.b, p.c, p.alpha, p.N, max_parts)
    total = 1.0
    terms = 1
    prev_layer = 1.0
    last_layer = 1.0
    small_run = 0
    grow_run = 0
    w = 0

    def result(converged: bool) -> SeriesResult:
        if last_layer == 0.0 or prev_layer == 0.0:
            tail = 0.0 if last_layer == 0.0 else abs(last_layer)
        else:
            r = min(abs(last_layer) / abs(prev_layer), 0.99)
            tail = abs(last_layer) * r / (1 - r)
        return SeriesResult(total, w, tail, converged, terms, "layers")

    while True:
        w += 1
        if w > max_weight:
            res = result(False)
            raise NonConvergenceError(
                f"weight cap {max_weight} reached without convergence", res
            )
        arr = _layer_array(w, max_parts)
        terms += arr.shape[0]
        if terms > term_budget:
            res = result(False)
            raise NonConvergenceError(
                f"term budget {term_budget} exhausted at weight {w}", res
            )
        layer = tables.layer_sum(arr, w, p.t)
        total += layer
        prev_layer, last_layer = last_layer, layer
        if not math.isfinite(total):
            res = result(False)
            raise NonConvergenceError("series overflow; parameters diverge", res)
        if abs(layer) < rel_tol * abs(total):
            small_run += 1
        else:
            small_run = 0
        if w > 50 and abs(layer) > abs(prev_layer) != 0:
            grow_run += 1
            if grow_run >= DIVERGENCE_RUN:
                res = result(False)
                raise NonConvergenceError(
                    f"layer sums grew for {DIVERGENCE_RUN} consecutive weights", res
                )
        else:
            grow_run = 0
        if small_run >= W_STOP:
            res = result(True)
            if res.tail_estimate <= rel_tol * abs(res.value):
                return res
            small_run = 0  # geometric tail still too fat; keep summing


# ---------------------------------------------------------------------------
# Hankel determinant engine (alpha = 1)
# ---------------------------------------------------------------------------


def _hankel_once(p: Hyp2F1Params, digits: int) -> tuple[float, int, int]:
    """One evaluation at fixed working precision.

    Returns (value, h_max, terms).  All arithmetic in gmpy2 mpfr, whose
    exponent range absorbs the huge dynamic range of K and det without
    log bookkeeping.
    """
    N = p.N
    bits = int(digits * 3.33) + 24
    with gmpy2.context(precision=bits):
        a = gmpy2.mpfr(p.a)
        b = gmpy2.mpfr(p.b)
        c = gmpy2.mpfr(p.c)
        t = gmpy2.mpfr(p.t)
        one = gmpy2.mpfr(1)

        K = one
        for i in range(1, N + 1):
            K *= gmpy2.gamma(c - i + 1) / (gmpy2.gamma(a - i + 1) * gmpy2.gamma(b - i + 1))
        superfact = one
        for k in range(1, N):
            superfact *= gmpy2.factorial(k)

        n_mom = 2 * N - 1
        moments = [gmpy2.mpfr(0) for _ in range(n_mom)]
        g = gmpy2.gamma(a - N + 1) * gmpy2.gamma(b - N + 1) / gmpy2.gamma(c - N + 1)
        tp = one
        h = 0
        # the weight h^(2N-2) g(h) t^h peaks near (2N-2)/(-ln t); never stop before
        h_floor = int((2 * N + 4) / max(1e-12, -math.log(p.t))) + 16
        stop_run = 0
        eps_stop = gmpy2.mpfr(10) ** (-(digits + 15))
        last = n_mom - 1
        while True:
            cur = g * tp
            for r in range(last):
                moments[r] += cur
                cur *= h
            moments[last] += cur  # cur is now the top-moment contribution
            if h > h_floor:
                scale = max(abs(moments[0]), abs(moments[last]))
                if abs(cur) < eps_stop * scale:
                    stop_run += 1
                    if stop_run >= 24:
                        break
                else:
                    stop_run = 0
            g *= (h + a - N + 1) * (h + b - N + 1) / ((h + c - N + 1) * (h + 1))
            tp *= t
            h += 1
            if h > 50_000_000:
                raise NonConvergenceError(
                    "hankel moment series failed to decay",
                    SeriesResult(float("nan"), h, float("inf"), False, h, "hankel"),
                )

        mat = [[moments[i + j] for j in range(N)] for i in range(N)]
        det = _mpfr_det(mat, N)
        value = K / superfact * t ** gmpy2.mpz(-N * (N - 1) // 2) * det
        return float(value), h, h * n_mom


def _mpfr_det(mat, N: int):
    """LU determinant with partial pivoting in mpfr."""
    det = gmpy2.mpfr(1)
    for k in range(N):
        piv = max(range(k, N), key=lambda r: abs(mat[r][k]))
        if mat[piv][k] == 0:
            return gmpy2.mpfr(0)
        if piv != k:
            mat[k], mat[piv] = mat[piv], mat[k]
            det = -det
        det *= mat[k][k]
        inv = 1 / mat[k][k]
        for r in range(k + 1, N):
            f = mat[r][k] * inv
            if f == 0:
                continue
            for cc in range(k, N):
                mat[r][cc] -= f * mat[k][cc]
    return det


def _hyp2f1_hankel(p: Hyp2F1Params, rel_tol: float) -> SeriesResult:
    digits = 30 + 3 * p.N
    target = max(rel_tol, 1e-11)
    total_terms = 0
    v_prev = None
    for _ in range(3):
        value, h_max, terms = _hankel_once(p, digits)
        total_terms += terms
        if v_prev is not None and math.isfinite(value) and value != 0:
            gap = abs(value - v_prev) / abs(value)
            if gap <= target:
                return SeriesResult(
                    value, h_max, gap * abs(value), True, total_terms, "hankel"
                )
        v_prev = value
        digits = int(digits * 1.6) + 20
    res = SeriesResult(v_prev, h_max, abs(v_prev), False, total_terms, "hankel")
    raise NonConvergenceError(
        "hankel determinant did not stabilize under precision escalation", res
    )
