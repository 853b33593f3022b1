"""Integer partitions, diagram geometry, and dominance order.

Partitions are plain tuples of weakly decreasing positive ints; the empty
tuple is the empty partition.  Every series in this package is indexed by
partitions of bounded length, enumerated weight by weight in
reverse-lexicographic order so that truncated sums are reproducible
bit for bit.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

Partition = tuple[int, ...]


def is_partition(parts) -> bool:
    """True if ``parts`` is weakly decreasing with all parts >= 1."""
    parts = tuple(parts)
    return all(p >= 1 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1)
    )


def weight(kappa: Partition) -> int:
    return sum(kappa)


def length(kappa: Partition) -> int:
    return len(kappa)


def conjugate(kappa: Partition) -> Partition:
    """Transpose of the diagram: conj_j = #{i : kappa_i >= j}."""
    if not kappa:
        return ()
    out = [0] * kappa[0]
    for part in kappa:
        for j in range(part):
            out[j] += 1
    return tuple(out)


def enumerate_partitions(w: int, max_parts: int) -> Iterator[Partition]:
    """Yield all partitions of ``w`` with at most ``max_parts`` parts.

    Order is reverse-lexicographic, e.g. (4) > (3,1) > (2,2) > (2,1,1).
    Weight 0 yields exactly the empty partition.
    """
    if w < 0:
        raise ValueError(f"weight must be >= 0, got {w}")
    if max_parts < 1:
        raise ValueError(f"max_parts must be >= 1, got {max_parts}")

    def rec(remaining: int, cap: int, slots: int, prefix: list[int]):
        if remaining == 0:
            yield tuple(prefix)
            return
        if slots == 0:
            return
        # smallest admissible first part: must fit remainder into slots-1 parts
        for first in range(min(cap, remaining), 0, -1):
            if remaining - first > (slots - 1) * first:
                break
            prefix.append(first)
            yield from rec(remaining - first, first, slots - 1, prefix)
            prefix.pop()

    yield from rec(w, w if w else 1, max_parts, [])


@lru_cache(maxsize=None)
def partition_layer(w: int, max_parts: int) -> tuple[Partition, ...]:
    """All partitions of weight ``w`` with <= ``max_parts`` parts, cached."""
    return tuple(enumerate_partitions(w, max_parts))


@lru_cache(maxsize=None)
def partition_count(w: int) -> int:
    """Partition function p(w) via Euler's pentagonal-number recurrence."""
    if w < 0:
        return 0
    if w == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > w and g2 > w:
            break
        sign = -1 if k % 2 == 0 else 1
        if g1 <= w:
            total += sign * partition_count(w - g1)
        if g2 <= w:
            total += sign * partition_count(w - g2)
        k += 1
    return total


def _check_node(kappa: Partition, i: int, j: int) -> None:
    if not (1 <= i <= len(kappa)) or not (1 <= j <= kappa[i - 1]):
        raise ValueError(f"({i},{j}) is not a node of the diagram of {kappa}")


def arm(kappa: Partition, i: int, j: int) -> int:
    """Arm length a(i,j): nodes in row i strictly right of column j."""
    _check_node(kappa, i, j)
    return kappa[i - 1] - j


def leg(kappa: Partition, i: int, j: int) -> int:
    """Leg length l(i,j): nodes in column j strictly below row i."""
    _check_node(kappa, i, j)
    return sum(1 for ip in range(i, len(kappa)) if kappa[ip] >= j)


def cells(kappa: Partition) -> Iterator[tuple[int, int]]:
    """Diagram nodes (i, j), 1-based, row-major."""
    for i, part in enumerate(kappa, start=1):
        for j in range(1, part + 1):
            yield i, j


def dominance_leq(mu: Partition, kappa: Partition) -> bool:
    """True iff mu <= kappa in dominance order (equal weights required).

    mu <= kappa means sum(mu[:p]) <= sum(kappa[:p]) for every p.
    """
    if sum(mu) != sum(kappa):
        raise ValueError(
            f"dominance comparison needs equal weights, got |mu|={sum(mu)}, |kappa|={sum(kappa)}"
        )
    s_mu = 0
    s_ka = 0
    for p in range(max(len(mu), len(kappa))):
        s_mu += mu[p] if p < len(mu) else 0
        s_ka += kappa[p] if p < len(kappa) else 0
        if s_mu > s_ka:
            return False
    return True
