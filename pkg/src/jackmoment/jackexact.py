"""Exact Jack polynomials in the monomial basis, for small degree.

This module is correctness scaffolding: it constructs P_kappa^(alpha) as
m_kappa + sum of lower monomials with exact rational coefficients and no
floating point anywhere, then serves as the independent oracle that locks
in the product formulas of :mod:`jackmoment.jack`.

Construction: P_kappa is the eigenfunction of the Laplace-Beltrami-type
operator

    D = sum_i x_i^2 d_i^2 + (2/alpha) sum_{i<j} (x_i^2 d_i - x_j^2 d_j)/(x_i - x_j)

that is monic on m_kappa.  D is triangular on monomial symmetric functions
with respect to dominance order, so the coefficients solve a triangular
linear system weight by weight; for real alpha > 0 the eigenvalues of
comparable partitions never collide, and collisions elsewhere are refused
with an explicit error.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .jack import dprime, gen_pochhammer
from .partitions import Partition, dominance_leq, partition_layer

DEGREE_CAP = 8

# polynomials are dicts: exponent tuple (fixed length) -> Fraction


class DegreeCapError(ValueError):
    pass


class AlphaCollisionError(ValueError):
    """Eigenvalue collision in the triangular recursion at this alpha."""


def _distinct_permutations(seq: tuple[int, ...]):
    return set(permutations(seq))


def _monomial_poly(mu: Partition, n: int) -> dict[tuple[int, ...], Fraction]:
    """m_mu expanded in n variables (zero if mu has more than n parts)."""
    if len(mu) > n:
        return {}
    padded = tuple(mu) + (0,) * (n - len(mu))
    return {expo: Fraction(1) for expo in _distinct_permutations(padded)}


def _divide_by_diff(poly: dict, i: int, j: int) -> dict:
    """Exact division of ``poly`` by (x_i - x_j); raises if not divisible."""
    rem = dict(poly)
    quo: dict = {}
    while rem:
        expo = max(rem, key=lambda e: e[i])
        coef = rem.pop(expo)
        if coef == 0:
            continue
        if expo[i] == 0:
            raise ArithmeticError("polynomial not divisible by (x_i - x_j)")
        q = list(expo)
        q[i] -= 1
        quo[tuple(q)] = quo.get(tuple(q), Fraction(0)) + coef
        r = list(q)
        r[j] += 1
        key = tuple(r)
        rem[key] = rem.get(key, Fraction(0)) + coef
        if rem[key] == 0:
            del rem[key]
    return quo


def _apply_operator(poly: dict, n: int, alpha: Fraction) -> dict:
    out: dict = {}

    def add(expo, coef):
        if coef:
            out[expo] = out.get(expo, Fraction(0)) + coef
            if out[expo] == 0:
                del out[expo]

    for expo, coef in poly.items():
        for i in range(n):
            add(expo, coef * expo[i] * (expo[i] - 1))
    two_over_alpha = Fraction(2) / alpha
    for i in range(n):
        for j in range(i + 1, n):
            g: dict = {}
            for expo, coef in poly.items():
                if expo[i]:
                    e = list(expo)
                    e[i] += 1
                    g[tuple(e)] = g.get(tuple(e), Fraction(0)) + coef * expo[i]
                if expo[j]:
                    e = list(expo)
                    e[j] += 1
                    g[tuple(e)] = g.get(tuple(e), Fraction(0)) - coef * expo[j]
            g = {k: v for k, v in g.items() if v}
            for expo, coef in _divide_by_diff(g, i, j).items():
                add(expo, coef * two_over_alpha)
    return out


def _to_monomial_basis(poly: dict) -> dict[Partition, Fraction]:
    """Read a symmetric polynomial off at sorted exponent representatives."""
    out: dict[Partition, Fraction] = {}
    for expo, coef in poly.items():
        if tuple(sorted(expo, reverse=True)) == expo:
            key = tuple(p for p in expo if p)
            out[key] = coef
    return out


@lru_cache(maxsize=None)
def _operator_matrix(d: int, alpha: Fraction) -> dict[Partition, dict[Partition, Fraction]]:
    """Action of D on m_mu for all partitions mu of weight d, in d variables."""
    n = max(d, 1)
    mat = {}
    for mu in partition_layer(d, d if d else 1):
        image = _apply_operator(_monomial_poly(mu, n), n, alpha)
        mat[mu] = _to_monomial_basis(image)
    return mat


def _eigenvalue(mu: Partition, n: int, alpha: Fraction) -> Fraction:
    return sum(
        Fraction(p * (p - 1)) + Fraction(2, 1) / alpha * (n - i) * p
        for i, p in enumerate(mu, start=1)
    )


class MonomialExpansion:
    """Exact expansion P_kappa^(alpha) = sum over mu of a_{kappa mu} m_mu."""

    def __init__(self, kappa: Partition, alpha: Fraction, coefficients: dict[Partition, Fraction]):
        self.kappa = kappa
        self.alpha = alpha
        self.coefficients = coefficients

    def dump(self) -> str:
        """One line per coefficient: kappa; mu; numerator/denominator."""
        lines = []
        for mu in sorted(self.coefficients, reverse=True):
            c = self.coefficients[mu]
            lines.append(
                f"{','.join(map(str, self.kappa)) or '-'};"
                f"{','.join(map(str, mu)) or '-'};"
                f"{c.numerator}/{c.denominator}"
            )
        return "\n".join(lines)


def jack_monomial_expansion(kappa, alpha, degree_cap: int = DEGREE_CAP) -> MonomialExpansion:
    """Construct the exact monomial expansion of P_kappa^(alpha).

    alpha may be an int, Fraction, or anything Fraction() accepts exactly.
    """
    kappa = tuple(kappa)
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    d = sum(kappa)
    if d > degree_cap:
        raise DegreeCapError(f"|kappa|={d} exceeds degree cap {degree_cap}")
    if d == 0:
        return MonomialExpansion((), alpha, {(): Fraction(1)})
    n = d
    mat = _operator_matrix(d, alpha)
    layer = partition_layer(d, d)  # reverse-lex refines dominance downward
    e_kappa = _eigenvalue(kappa, n, alpha)
    assert mat[kappa].get(kappa, Fraction(0)) == e_kappa, (
        "operator diagonal disagrees with eigenvalue"
    )
    coeffs: dict[Partition, Fraction] = {kappa: Fraction(1)}
    started = False
    for mu in layer:
        if mu == kappa:
            started = True
            continue
        if not started:
            continue
        num = Fraction(0)
        for nu, c_nu in coeffs.items():
            num += c_nu * mat[nu].get(mu, Fraction(0))
        denom = e_kappa - _eigenvalue(mu, n, alpha)
        if denom == 0:
            if num == 0:
                continue
            raise AlphaCollisionError(
                f"eigenvalue collision between {kappa} and {mu} at alpha={alpha}"
            )
        if num:
            coeffs[mu] = num / denom
    return MonomialExpansion(kappa, alpha, coeffs)


def jack_evaluate(exp: MonomialExpansion, xs) -> Fraction:
    """Exact value of P_kappa^(alpha)(x_1,...,x_n) from its expansion."""
    xs = tuple(Fraction(x) for x in xs)
    n = len(xs)
    total = Fraction(0)
    for mu, coef in exp.coefficients.items():
        if len(mu) > n:
            continue
        padded = tuple(mu) + (0,) * (n - len(mu))
        m_val = Fraction(0)
        for perm in _distinct_permutations(padded):
            term = Fraction(1)
            for x, e in zip(xs, perm):
                term *= x**e
            m_val += term
        total += coef * m_val
    return total


def jack_principal_exact(kappa, alpha, N: int) -> Fraction:
    """P_kappa^(alpha)(1^N) through the monomial oracle."""
    exp = jack_monomial_expansion(kappa, alpha)
    return jack_evaluate(exp, (Fraction(1),) * N)


def binomial_identity_check(
    a, xs, weight_cap: int, alpha=1, degree_cap: int = DEGREE_CAP
) -> tuple[float, float]:
    """Truncated LHS and exact RHS of the generalized binomial sum.

    LHS = sum over |kappa| <= weight_cap of [a]_kappa C_kappa(x) / |kappa|!,
    RHS = prod (1 - x_j)^(-a).  Both sides returned as floats; the gap must
    be attributable to the geometric tail.
    """
    if weight_cap > degree_cap:
        raise DegreeCapError(f"weight_cap {weight_cap} exceeds degree cap {degree_cap}")
    a = Fraction(a)
    alpha = Fraction(alpha)
    xs = tuple(Fraction(x) for x in xs)
    if any(abs(x) >= 1 for x in xs):
        raise ValueError("binomial identity requires |x_i| < 1")
    n = len(xs)
    lhs = Fraction(0)
    for w in range(weight_cap + 1):
        for kappa in partition_layer(w, min(n, w) if w else 1):
            poch = gen_pochhammer(a, kappa, alpha, n)
            if poch == 0:
                continue
            p_val = jack_evaluate(jack_monomial_expansion(kappa, alpha), xs)
            lhs += poch * alpha**w * p_val / dprime(kappa, alpha)
    rhs = 1.0
    for x in xs:
        rhs *= float(1 - x) ** float(-a)
    return float(lhs), rhs


def schur_monomial_coefficients(kappa) -> dict[Partition, int]:
    """Kostka numbers of shape kappa by brute-force SSYT counting.

    Independent of the Jack construction; used to pin the alpha=1 case.
    """
    kappa = tuple(kappa)
    d = sum(kappa)
    out: dict[Partition, int] = {}
    for mu in partition_layer(d, d if d else 1):
        out[mu] = _count_ssyt(kappa, mu)
    return {mu: c for mu, c in out.items() if c}


def _count_ssyt(shape: Partition, content: Partition) -> int:
    """Number of semistandard tableaux of given shape and content."""
    rows = [[0] * part for part in shape]

    def positions():
        for i, part in enumerate(shape):
            for j in range(part):
                yield i, j

    pos = list(positions())
    remaining = list(content)

    def fill(idx: int) -> int:
        if idx == len(pos):
            return 1 if all(r == 0 for r in remaining) else 0
        i, j = pos[idx]
        lo = 1
        if j > 0:
            lo = max(lo, rows[i][j - 1])
        if i > 0:
            lo = max(lo, rows[i - 1][j] + 1)
        total = 0
        for v in range(lo, len(remaining) + 1):
            if remaining[v - 1] == 0:
                continue
            rows[i][j] = v
            remaining[v - 1] -= 1
            total += fill(idx + 1)
            remaining[v - 1] += 1
            rows[i][j] = 0
        return total

    return fill(0)
