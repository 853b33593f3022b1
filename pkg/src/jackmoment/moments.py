"""Random-matrix moment averages as equal-argument hypergeometric evaluations.

Circular beta-ensemble, for |z| < 1 (t = |z|^2, alpha = 2/beta):

    < prod |z - e^{i theta_l}|^{2 mu} > = 2F1(-mu, -mu; (beta/2)(N-1)+1; t * 1^N)

with the reflection  average(z) = |z|^{2 mu N} * average(1/z)  covering
|z| > 1.  Jacobi beta-ensemble on (0,1) with weight x^a (1-x)^b, for x > 1:

    < prod |x - x_l|^{2 mu} >
        = x^{2 mu N} * 2F1(-2 mu, (beta/2)(N-1)+a+1; beta(N-1)+a+b+2; 1/x * 1^N).

The second parameter carries the +1 required by the underlying Selberg
average of prod (1 - t_l/x)^{2 mu} with weight exponent lambda_1 = a; the
N = 1 check against the elementary integral (x(x-1))^{-1} pins it, as do
the quadrature oracles.

Classical-group averages reduce to Jacobi form: with z = 1 + eps the
determinant splits off (2z)^M and optional fixed-eigenvalue factors, the
free eigenvalues become x = cos(theta) in (-1,1), and the affine map
xt = (1+x)/2 lands on (0,1), turning each |x_c - x| into 2 |xt_c - xt|.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hyperg import Hyp2F1Params, SeriesResult, hyp2f1_equal

GROUP_FAMILIES = ("sp", "o+", "o-")

# (a, b) weight exponents of the cos(theta) density mapped to (0,1)
GROUP_WEIGHTS = {"sp": (0.5, 0.5), "o+": (-0.5, -0.5), "o-": (0.5, -0.5)}


@dataclass(frozen=True)
class Circular:
    beta: float
    N: int

    def __post_init__(self):
        if self.beta <= 0 or self.N < 1:
            raise ValueError("circular ensemble needs beta > 0 and N >= 1")


@dataclass(frozen=True)
class Jacobi:
    a: float
    b: float
    beta: float
    N: int

    def __post_init__(self):
        if self.beta <= 0 or self.N < 1:
            raise ValueError("jacobi ensemble needs beta > 0 and N >= 1")
        if self.a <= -1 or self.b <= -1:
            raise ValueError("jacobi weight exponents must satisfy a, b > -1")


@dataclass(frozen=True)
class Group:
    family: str
    N: int

    def __post_init__(self):
        if self.family not in GROUP_FAMILIES:
            raise ValueError(f"family must be one of {GROUP_FAMILIES}")
        if self.N < 1 or (self.family == "o-" and self.N < 2):
            raise ValueError("group dimension too small")


EnsembleSpec = Circular | Jacobi | Group


@dataclass(frozen=True)
class MomentQuery:
    ensemble: EnsembleSpec
    mu: float
    point: float  # |z| (circular), x (jacobi), eps (group)


def circular_params(beta: float, N: int, mu: float, absz: float) -> Hyp2F1Params:
    return Hyp2F1Params(
        a=-mu, b=-mu, c=(beta / 2.0) * (N - 1) + 1.0, alpha=2.0 / beta, N=N, t=absz**2
    )


def circular_moment(
    beta: float, N: int, mu: float, absz: float, rel_tol: float, **kw
) -> SeriesResult:
    """CbetaE_N average of prod |z - e^{i theta}|^{2 mu} at |z| = absz < 1."""
    Circular(beta, N)
    if not 0 <= absz < 1:
        raise ValueError(f"circular_moment needs 0 <= |z| < 1, got {absz}")
    return hyp2f1_equal(circular_params(beta, N, mu, absz), rel_tol, **kw)


def circular_reflect(mu: float, N: int, absz: float) -> tuple[float, float]:
    """Reflection |z| > 1 -> (prefactor |z|^{2 mu N}, reflected point 1/|z|)."""
    if absz <= 1:
        raise ValueError(f"reflection applies to |z| > 1 only, got {absz}")
    return absz ** (2.0 * mu * N), 1.0 / absz


def jacobi_params(a: float, b: float, beta: float, N: int, mu: float, x: float) -> Hyp2F1Params:
    return Hyp2F1Params(
        a=-2.0 * mu,
        b=(beta / 2.0) * (N - 1) + a + 1.0,
        c=beta * (N - 1) + a + b + 2.0,
        alpha=2.0 / beta,
        N=N,
        t=1.0 / x,
    )


def jacobi_moment(
    a: float, b: float, beta: float, N: int, mu: float, x: float, rel_tol: float, **kw
) -> SeriesResult:
    """JbetaE_N average of prod |x - x_l|^{2 mu} at x > 1 (weight x^a (1-x)^b)."""
    Jacobi(a, b, beta, N)
    if x <= 1:
        raise ValueError(f"jacobi_moment needs x > 1, got {x}")
    series = hyp2f1_equal(jacobi_params(a, b, beta, N, mu, x), rel_tol, **kw)
    return series.scaled(x ** (2.0 * mu * N))


def group_map_point(eps: float) -> float:
    """Jacobi evaluation point for z = 1 + eps: xt = (1 + (z^2+1)/(2z)) / 2."""
    z = 1.0 + eps
    x_c = (z * z + 1.0) / (2.0 * z)
    return (1.0 + x_c) / 2.0


def group_prefactor(family: str, N: int, mu: float, eps: float) -> tuple[float, int]:
    """Deterministic factor and Jacobi dimension M for the group reduction.

    |det((1+eps)I - U)|^{2 mu} = pref * prod_l |xt_c - xt_l|^{2 mu} with
    pref = (2z)^{2 mu M} * 2^{2 mu M} (and |z^2-1|^{2 mu} extra for o-),
    M = N except o- where the fixed pair +-1 leaves M = N-1 free pairs.
    """
    z = 1.0 + eps
    if family == "o-":
        M = N - 1
        pref = abs(z * z - 1.0) ** (2.0 * mu) * (2.0 * z) ** (2.0 * mu * M)
    else:
        M = N
        pref = (2.0 * z) ** (2.0 * mu * M)
    return pref * 2.0 ** (2.0 * mu * M), M


def group_moment(
    family: str, N: int, mu: float, eps: float, rel_tol: float, **kw
) -> SeriesResult:
    """Classical-group average <|det((1+eps)I - U)|^{2 mu}>, eps > 0."""
    Group(family, N)
    if eps <= 0:
        raise ValueError(f"group_moment needs eps > 0, got {eps}")
    a, b = GROUP_WEIGHTS[family]
    pref, M = group_prefactor(family, N, mu, eps)
    xt = group_map_point(eps)
    series = jacobi_moment(a, b, 2.0, M, mu, xt, rel_tol, **kw)
    return series.scaled(pref)


def evaluate_moment(q: MomentQuery, rel_tol: float, **kw) -> tuple[float, SeriesResult]:
    """Dispatch a MomentQuery; returns (reflection prefactor, series result).

    For circular queries with |z| > 1 the reflection is applied and the
    prefactor reported separately; otherwise the prefactor is 1.
    """
    ens = q.ensemble
    if isinstance(ens, Circular):
        if q.point > 1:
            pref, reflected = circular_reflect(q.mu, ens.N, q.point)
            return pref, circular_moment(ens.beta, ens.N, q.mu, reflected, rel_tol, **kw)
        return 1.0, circular_moment(ens.beta, ens.N, q.mu, q.point, rel_tol, **kw)
    if isinstance(ens, Jacobi):
        return 1.0, jacobi_moment(ens.a, ens.b, ens.beta, ens.N, q.mu, q.point, rel_tol, **kw)
    return 1.0, group_moment(ens.family, ens.N, q.mu, q.point, rel_tol, **kw)
