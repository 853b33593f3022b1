"""Hook products, generalized Pochhammer symbols, and principal specializations.

These are the per-partition building blocks of every hypergeometric series
term.  Two evaluation paths live here:

* scalar functions (``gen_pochhammer``, ``dprime``, ``p_principal``, ...)
  that work on any numeric type, including ``fractions.Fraction`` for exact
  arithmetic; and
* ``LayerTables``, a vectorized engine that evaluates all terms of a fixed
  total weight at once from cached log-magnitude prefix tables.  Everything
  a term needs factorizes over diagram rows once legs are resolved through
  the conjugate partition, so a term costs O(length^2) table gathers instead
  of O(|kappa|) multiplications.

The generalized Pochhammer symbol is always the cell product
``prod (u - (i-1)/alpha + j - 1)``, never a ratio of gamma functions: the
product form agrees with the gamma form away from poles and extends it
continuously across them, which matters because moment parameters routinely
sit next to those poles.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np

from .partitions import Partition, cells, conjugate


def _exactable(v):
    """Promote ints to Fraction so chains of int inputs stay exact."""
    return Fraction(v) if isinstance(v, int) else v


def gen_pochhammer(u, kappa: Partition, alpha, N: int):
    """Generalized Pochhammer [u]_kappa^(alpha) as a diagram cell product.

    Computed as prod over cells (i,j) of (u - (i-1)/alpha + j - 1), which
    equals Gamma(u-(j-1)/alpha+kappa_j)/Gamma(u-(j-1)/alpha) products where
    those are finite and is pole-free everywhere else.  Returns 0 when a
    cell factor vanishes.  Exact when u and alpha are Fractions or ints.
    """
    if len(kappa) > N:
        raise ValueError(f"partition length {len(kappa)} exceeds N={N}")
    u = _exactable(u)
    alpha = _exactable(alpha)
    out = u - u + 1 if not isinstance(u, float) else 1.0  # one of u's type
    for i, j in cells(kappa):
        out = out * (u - Fraction(i - 1, 1) / alpha + (j - 1))
        if out == 0:
            return out
    return out


def dprime(kappa: Partition, alpha):
    """Hook-type product d'_kappa = prod(alpha*(arm+1) + leg); positive."""
    alpha = _exactable(alpha)
    conj = conjugate(kappa)
    out = alpha / alpha if not isinstance(alpha, float) else 1.0
    for i, j in cells(kappa):
        a = kappa[i - 1] - j
        l = conj[j - 1] - i
        out = out * (alpha * (a + 1) + l)
    return out


def dhook(kappa: Partition, alpha):
    """Companion hook product d_kappa = prod(alpha*arm + leg + 1)."""
    alpha = _exactable(alpha)
    conj = conjugate(kappa)
    out = alpha / alpha if not isinstance(alpha, float) else 1.0
    for i, j in cells(kappa):
        a = kappa[i - 1] - j
        l = conj[j - 1] - i
        out = out * (alpha * a + l + 1)
    return out


def p_principal(kappa: Partition, alpha, N: int):
    """Principal specialization P_kappa^(alpha)(1^N).

    Uses the product formula prod (N - (i-1) + alpha*(j-1)) / (alpha*arm +
    leg + 1).  The formula is locked in by exact agreement with the
    monomial-expansion oracle (see jackexact); on its own it is an
    implementation hypothesis.  Returns 0 when the partition has more than
    N parts (the polynomial vanishes there).
    """
    if len(kappa) > N:
        return 0
    alpha = _exactable(alpha)
    num = alpha / alpha if not isinstance(alpha, float) else 1.0
    for i, j in cells(kappa):
        num = num * (N - (i - 1) + alpha * (j - 1))
    return num / dhook(kappa, alpha)


def c_principal_term(kappa: Partition, alpha, N: int, t):
    """C_kappa^(alpha)(t,...,t) = t^|kappa| * alpha^|kappa| |kappa|!/d'_kappa * P(1^N)."""
    w = sum(kappa)
    if len(kappa) > N:
        return 0
    alpha = _exactable(alpha)
    t = _exactable(t)
    return t**w * alpha**w * factorial(w) * p_principal(kappa, alpha, N) / dprime(kappa, alpha)


class PoleError(ValueError):
    """A lattice pole: some cell factor of a denominator parameter vanishes."""

    def __init__(self, u, cell: tuple[int, int]):
        self.u = u
        self.cell = cell
        super().__init__(
            f"denominator parameter {u} has a vanishing cell factor at {cell}"
        )


class LayerTables:
    """Vectorized weight-layer evaluation of 2F1-type series terms.

    For fixed (a, b, c, alpha, N) and max_parts, a term is

        t^w * alpha^w * [a]_k [b]_k / [c]_k * num_k / (dhook_k * dprime_k)

    (the |kappa|! of the series cancels against the one in C_kappa).  All
    five factors are accumulated in log magnitude with sign tracking:

    * Pochhammer and N-numerator factors factorize over rows, so rows gather
      from prefix-sum tables indexed by (row, part).
    * Hook products factorize over constant-leg row segments cut by the
      conjugate partition, so each (row, lower-row) pair gathers a prefix
      difference from per-leg tables.

    Tables grow geometrically as larger weights are requested.
    """

    def __init__(self, a: float, b: float, c: float, alpha: float, N: int, max_parts: int):
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)
        self.alpha = float(alpha)
        self.N = N
        self.max_parts = min(max_parts, N)
        self._cap = 0
        self._grow(64)

    def _poch_table(self, u: float, W: int) -> tuple[np.ndarray, np.ndarray, bool]:
        """Prefix log-magnitudes and sign products for row factors of [u].

        Returns (logmag, sign, has_zero); a zero factor marks -inf from that
        column on (the whole row product is zero).
        """
        rows = np.arange(self.max_parts, dtype=np.float64)[:, None]
        j = np.arange(1, W + 1, dtype=np.float64)[None, :]
        fac = u - rows / self.alpha + (j - 1)
        zero = fac == 0.0
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(fac))
        logs[zero] = -np.inf
        logmag = np.concatenate(
            [np.zeros((self.max_parts, 1)), np.cumsum(logs, axis=1)], axis=1
        )
        sign = np.concatenate(
            [np.ones((self.max_parts, 1)), np.cumprod(np.sign(fac) + zero, axis=1)],
            axis=1,
        )
        return logmag, sign, bool(zero.any())

    def _grow(self, W: int) -> None:
        if W <= self._cap:
            return
        W = max(W, 2 * self._cap)
        self._cap = W
        self.la, self.sa, _ = self._poch_table(self.a, W)
        self.lb, self.sb, _ = self._poch_table(self.b, W)
        self.lc, self.sc, c_zero = self._poch_table(self.c, W)
        if c_zero:
            fac = (
                self.c
                - np.arange(self.max_parts)[:, None] / self.alpha
                + np.arange(W)[None, :]
            )
            for i, j in np.argwhere(fac == 0.0):
                # cell (i+1, j+1) only sits inside partitions of weight >= (i+1)(j+1)
                if (int(i) + 1) * (int(j) + 1) <= W:
                    raise PoleError(self.c, (int(i) + 1, int(j) + 1))
        # numerator of P(1^N): prod over row i of (N - i + alpha*(j-1)), 0-based i
        rows = np.arange(self.max_parts, dtype=np.float64)[:, None]
        j = np.arange(1, W + 1, dtype=np.float64)[None, :]
        self.ln = np.concatenate(
            [
                np.zeros((self.max_parts, 1)),
                np.cumsum(np.log(self.N - rows + self.alpha * (j - 1)), axis=1),
            ],
            axis=1,
        )
        # per-leg hook prefix tables
        legs = np.arange(self.max_parts, dtype=np.float64)[:, None]
        m = np.arange(1, W + 1, dtype=np.float64)[None, :]
        self.gp = np.concatenate(
            [
                np.zeros((self.max_parts, 1)),
                np.cumsum(np.log(self.alpha * m + legs), axis=1),
            ],
            axis=1,
        )
        m0 = np.arange(0, W, dtype=np.float64)[None, :]
        self.gq = np.concatenate(
            [
                np.zeros((self.max_parts, 1)),
                np.cumsum(np.log(self.alpha * m0 + legs + 1.0), axis=1),
            ],
            axis=1,
        )

    def layer_sum(self, parts_array: np.ndarray, w: int, t: float) -> float:
        """Sum of all series terms of weight ``w``; deterministic order.

        ``parts_array`` is an int array (n_partitions, max_parts), rows
        padded with zeros, enumeration order preserved.
        """
        if w == 0:
            return 1.0
        self._grow(w + 1)
        P = parts_array
        L = self.max_parts
        logmag = np.zeros(P.shape[0])
        sign = np.ones(P.shape[0])
        for i in range(L):
            ki = P[:, i]
            logmag += self.la[i, ki] + self.lb[i, ki] - self.lc[i, ki] + self.ln[i, ki]
            sign *= self.sa[i, ki] * self.sb[i, ki] * self.sc[i, ki]
            # hook products over constant-leg segments of row i
            for r in range(i, L):
                hi = P[:, r]
                lo = P[:, r + 1] if r + 1 < L else np.zeros_like(hi)
                leg = r - i
                logmag -= self.gp[leg, ki - lo] - self.gp[leg, ki - hi]
                logmag -= self.gq[leg, ki - lo] - self.gq[leg, ki - hi]
        logmag += w * (np.log(abs(t)) + np.log(self.alpha))
        if t < 0 and w % 2 == 1:
            sign = -sign
        peak = logmag.max()
        if peak == -np.inf:
            return 0.0
        return float(np.exp(peak) * np.sum(sign * np.exp(logmag - peak)))
