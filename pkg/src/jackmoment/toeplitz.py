"""Toeplitz-determinant route for beta = 2 circular averages.

D_N[f] with symbol f(theta) = |z - e^{i theta}|^{2 mu} equals the unitary
average of prod |z - e^{i theta_l}|^{2 mu}, giving an evaluation of the
beta = 2 moment that never touches the partition series: the Fourier
coefficients of (1 - z e^{-i theta})^mu (1 - z e^{i theta})^mu are the
rapidly convergent sums

    c_m = (-z)^m sum_k binom(mu, k) binom(mu, k+m) z^{2k},  c_{-m} = c_m,

for real 0 <= z < 1, and the moment is det of the N x N symmetric Toeplitz
matrix built from them.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import det, toeplitz


def symbol_fourier_coeffs(mu: float, absz: float, m_max: int, tol: float = 1e-16) -> np.ndarray:
    """c_0..c_{m_max} of |z - e^{i theta}|^{2 mu}; needs 0 <= |z| < 1."""
    if not 0 <= absz < 1:
        raise ValueError("requires 0 <= |z| < 1")
    if absz == 0:
        out = np.zeros(m_max + 1)
        out[0] = 1.0
        return out
    # binom(mu, k) by downward recurrence until the geometric tail is spent
    K = m_max + 64
    while True:
        k = np.arange(K)
        binom = np.empty(K)
        binom[0] = 1.0
        np.cumprod((mu - k[:-1]) / (k[:-1] + 1.0), out=binom[1:])
        zpow = absz ** (2.0 * k)
        if abs(binom[-1]) * zpow[-1] < tol and K > 4 * m_max + 64:
            break
        K *= 2
    out = np.empty(m_max + 1)
    for m in range(m_max + 1):
        out[m] = (-absz) ** m * float(np.dot(binom[: K - m] * zpow[: K - m], binom[m:]))
    return out


def toeplitz_moment(mu: float, absz: float, N: int) -> float:
    """Beta = 2 circular moment as det[c_{j-k}] of size N."""
    c = symbol_fourier_coeffs(mu, absz, N - 1)
    return float(det(toeplitz(c)))
