"""Deterministic N-dimensional quadrature of ensemble averages, N <= 3.

Ground truth for the series pipeline.  Numerator and denominator (the
normalization integral) always use the same rule so that rule error
partially cancels in the ratio.  Convergence is assessed by doubling
nodes until the relative change drops below the requested threshold.

Rules:

* circular, even integer beta: uniform periodic grid.  The integrand is a
  trigonometric polynomial times an analytic periodic factor, so the
  trapezoid rule converges geometrically.
* circular, other beta: |prod of differences|^beta has cusps at eigenvalue
  coincidences, which stall any rule on the full torus.  On the ordered
  sector theta_1 <= ... <= theta_N every difference satisfies
  sin((theta_k - theta_j)/2) >= 0, the absolute values drop, and iterated
  Gauss-Legendre with variable limits converges fast again.
* jacobi, even integer beta: tensor Gauss-Jacobi absorbing the t^a (1-t)^b
  endpoint weight into the rule (a, b = +-1/2 would wreck naive rules).
* jacobi, other beta (N <= 2): ordered sector with the (t2 - t1)^beta
  factor absorbed into an inner Gauss-Jacobi rule.
* groups: tensor Gauss-Jacobi directly in the y = cos(theta) variable,
  fully independent of the affine map used by the series route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from .moments import GROUP_WEIGHTS, Circular, Group, Jacobi, MomentQuery


class QuadratureError(RuntimeError):
    """Node cap reached before the doubling test passed."""

    def __init__(self, message: str, last_two: tuple[float, float]):
        super().__init__(message)
        self.last_two = last_two


@dataclass(frozen=True)
class QuadratureSpec:
    nodes_per_dim: int = 32
    max_nodes_per_dim: int = 4096
    rel_change: float = 1e-10


def _doubling(values_at, spec: QuadratureSpec) -> float:
    n = spec.nodes_per_dim
    prev = values_at(n)
    while True:
        n *= 2
        if n > spec.max_nodes_per_dim:
            raise QuadratureError(
                f"no convergence up to {spec.max_nodes_per_dim} nodes per dim",
                (prev, prev),
            )
        cur = values_at(n)
        if abs(cur - prev) <= spec.rel_change * max(abs(cur), 1e-300):
            return cur
        prev = cur


def _is_even_integer(beta: float) -> bool:
    return beta == round(beta) and int(round(beta)) % 2 == 0


def circular_quadrature(
    beta: float, N: int, mu: float, absz: float, spec: QuadratureSpec = QuadratureSpec()
) -> float:
    """<prod |z - e^{i theta}|^{2 mu}>_{CbetaE_N} by quadrature, N <= 3."""
    if N > 3:
        raise ValueError("quadrature oracle supports N <= 3")
    if not 0 <= absz < 1:
        raise ValueError("point must satisfy 0 <= |z| < 1")
    if mu == 0:
        return 1.0
    z = absz

    def onebody(theta):
        return (1.0 - 2.0 * z * np.cos(theta) + z * z) ** mu

    if N == 1:
        def value(n):
            theta = 2 * np.pi * np.arange(n) / n
            return float(np.mean(onebody(theta)))

        return _doubling(value, spec)

    if _is_even_integer(beta):
        half = int(round(beta)) // 2

        def value(n):
            theta = 2 * np.pi * np.arange(n) / n
            num = 0.0
            den = 0.0
            if N == 2:
                d = theta[:, None] - theta[None, :]
                w = (2.0 - 2.0 * np.cos(d)) ** half
                f = onebody(theta)
                num = float(np.einsum("i,ij,j->", f, w, f))
                den = float(w.sum())
            else:
                f = onebody(theta)
                for i in range(n):
                    d12 = (2.0 - 2.0 * np.cos(theta[i] - theta)) ** half
                    d23 = (2.0 - 2.0 * np.cos(theta[:, None] - theta[None, :])) ** half
                    w = d12[:, None] * d12[None, :] * d23
                    num += f[i] * float(np.einsum("j,jk,k->", f, w, f))
                    den += float(w.sum())
            return num / den

        return _doubling(value, spec)

    # ordered sector, iterated Gauss-Legendre
    def value(n):
        s, w = leggauss(n)
        two_pi = 2 * np.pi

        def seg(lo, hi):
            # nodes and weights for integration over [lo, hi]
            mid = 0.5 * (hi + lo)
            rad = 0.5 * (hi - lo)
            return mid + rad * s, rad * w

        t1, w1 = seg(0.0, two_pi)
        num = 0.0
        den = 0.0
        for i in range(n):
            t2, w2 = seg(t1[i], two_pi)
            v12 = (2.0 * np.sin(0.5 * (t2 - t1[i]))) ** beta
            if N == 2:
                f = onebody(t1[i]) * onebody(t2)
                num += w1[i] * float(np.sum(w2 * v12 * f))
                den += w1[i] * float(np.sum(w2 * v12))
            else:
                for j in range(n):
                    t3, w3 = seg(t2[j], two_pi)
                    v = (
                        v12[j]
                        * (2.0 * np.sin(0.5 * (t3 - t1[i]))) ** beta
                        * (2.0 * np.sin(0.5 * (t3 - t2[j]))) ** beta
                    )
                    f = onebody(t1[i]) * onebody(t2[j]) * onebody(t3)
                    num += w1[i] * w2[j] * float(np.sum(w3 * v * f))
                    den += w1[i] * w2[j] * float(np.sum(w3 * v))
        return num / den

    return _doubling(value, spec)


def jacobi_quadrature(
    a: float,
    b: float,
    beta: float,
    N: int,
    mu: float,
    x: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """<prod |x - x_l|^{2 mu}>_{JbetaE_N} by endpoint-weighted quadrature."""
    if N > 3:
        raise ValueError("quadrature oracle supports N <= 3")
    if not (x > 1 or x < 0):
        raise ValueError("point must lie off [0, 1]")
    if mu == 0:
        return 1.0

    def onebody(t):
        return np.abs(x - t) ** (2.0 * mu)

    if N == 1:
        def value(n):
            y, w = roots_jacobi(n, b, a)  # weight (1-y)^b (1+y)^a on (-1,1)
            t = 0.5 * (1.0 + y)
            return float(np.sum(w * onebody(t)) / np.sum(w))

        return _doubling(value, spec)

    if _is_even_integer(beta):
        p = int(round(beta))

        def value(n):
            y, w = roots_jacobi(n, b, a)
            t = 0.5 * (1.0 + y)
            f = onebody(t)
            if N == 2:
                v = np.abs(t[:, None] - t[None, :]) ** p
                num = float(np.einsum("i,ij,j->", w * f, v, w * f))
                den = float(np.einsum("i,ij,j->", w, v, w))
            else:
                num = 0.0
                den = 0.0
                v = np.abs(t[:, None] - t[None, :]) ** p
                for i in range(n):
                    wmat = v[i][:, None] * v[i][None, :] * v
                    num += (w[i] * f[i]) * float(
                        np.einsum("j,jk,k->", w * f, wmat, w * f)
                    )
                    den += w[i] * float(np.einsum("j,jk,k->", w, wmat, w))
            return num / den

        return _doubling(value, spec)

    if N == 3:
        raise ValueError("general-beta jacobi quadrature implemented for N <= 2 only")

    # ordered sector 0 < t1 < t2 < 1: outer Gauss-Jacobi in t2 absorbs
    # t2^a (1-t2)^b, inner rule on [0, t2] absorbs t1^a and (t2-t1)^beta.
    def value(n):
        y2, w2 = roots_jacobi(n, b, a)
        t2 = 0.5 * (1.0 + y2)
        y1, w1 = roots_jacobi(n, beta, a)  # weight (1-y)^beta (1+y)^a
        num = 0.0
        den = 0.0
        for j in range(n):
            t1 = 0.5 * t2[j] * (1.0 + y1)
            # scaled-interval Jacobian of the absorbed t1^a (t2-t1)^beta weight
            fac = t2[j] ** (a + beta + 1.0)
            rest = (1.0 - t1) ** b
            f12 = onebody(t1) * onebody(t2[j])
            num += fac * w2[j] * float(np.sum(w1 * rest * f12))
            den += fac * w2[j] * float(np.sum(w1 * rest))
        return num / den

    return _doubling(value, spec)


def group_quadrature(
    family: str,
    N: int,
    mu: float,
    eps: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """<|det((1+eps)I - U)|^{2 mu}> by quadrature over the cos(theta) density.

    Works directly in y = cos(theta): |det| = |z^2-1|^{[o-]} *
    prod_l |z^2 + 1 - 2 z y_l|, with the free pairs distributed as the
    beta = 2 Jacobi density with the family's weight exponents.
    """
    Group(family, N)
    if eps <= 0:
        raise ValueError("eps must be positive")
    a, b = GROUP_WEIGHTS[family]
    M = N - 1 if family == "o-" else N
    if M > 3:
        raise ValueError("quadrature oracle supports at most 3 free pairs")
    z = 1.0 + eps
    fixed = abs(z * z - 1.0) ** (2.0 * mu) if family == "o-" else 1.0
    if mu == 0:
        return 1.0

    def onebody(y):
        return (z * z + 1.0 - 2.0 * z * y) ** (2.0 * mu)

    def value(n):
        y, w = roots_jacobi(n, b, a)
        f = onebody(y)
        if M == 1:
            return float(np.sum(w * f) / np.sum(w))
        v = np.abs(y[:, None] - y[None, :]) ** 2
        if M == 2:
            num = float(np.einsum("i,ij,j->", w * f, v, w * f))
            den = float(np.einsum("i,ij,j->", w, v, w))
            return num / den
        num = 0.0
        den = 0.0
        for i in range(n):
            wmat = v[i][:, None] * v[i][None, :] * v
            num += (w[i] * f[i]) * float(np.einsum("j,jk,k->", w * f, wmat, w * f))
            den += w[i] * float(np.einsum("j,jk,k->", w, wmat, w))
        return num / den

    return fixed * _doubling(value, spec)


def quadrature_moment(q: MomentQuery, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Dispatch a MomentQuery to the matching quadrature rule."""
    ens = q.ensemble
    if isinstance(ens, Circular):
        return circular_quadrature(ens.beta, ens.N, q.mu, q.point, spec)
    if isinstance(ens, Jacobi):
        return jacobi_quadrature(ens.a, ens.b, ens.beta, ens.N, q.mu, q.point, spec)
    return group_quadrature(ens.family, ens.N, q.mu, q.point, spec)
