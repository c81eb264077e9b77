"""Exact character theory of the symmetric group.

Partitions are tuples of positive ints in non-increasing order.  All character
values are exact Python ints; nothing in this module touches floating point.
Character evaluation uses the Murnaghan-Nakayama border-strip recursion over
beta-sets, memoized on (remaining shape, remaining cycle suffix) with cycles
consumed largest-first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache, lru_cache

from .errors import LimitExceeded, PreconditionError
from .perm import sn_class_size

Partition = tuple


def _descending_parts(n: int, max_part: int):
    if n == 0:
        yield ()
        return
    for first in range(min(max_part, n), 0, -1):
        for rest in _descending_parts(n - first, first):
            yield (first,) + rest


@cache
def partitions(n: int) -> tuple:
    """All partitions of n in reverse lexicographic order: (n), ..., (1^n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return tuple(_descending_parts(n, n))


def is_partition(lam) -> bool:
    return all(p >= 1 for p in lam) and all(a >= b for a, b in zip(lam, lam[1:]))


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    out = []
    for i in range(lam[0]):
        out.append(sum(1 for p in lam if p > i))
    return tuple(out)


def class_sign(mu: Partition) -> int:
    """Sign of the S_n class with cycle type mu: (-1)^(n - #parts)."""
    return -1 if (sum(mu) - len(mu)) % 2 else 1


@cache
def dimension(lam: Partition) -> int:
    """Irrep dimension by the hook length formula: n! / prod(hooks)."""
    if not is_partition(lam):
        raise ValueError(f"{lam} is not a partition")
    n = sum(lam)
    conj = conjugate(lam)
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return math.factorial(n) // hooks


@lru_cache(maxsize=None)
def _mn(lam: Partition, mu: Partition) -> int:
    """chi_lam(mu) for mu sorted non-increasing; both partitions of the same n."""
    if not mu:
        return 1
    strip = mu[0]
    rest = mu[1:]
    k = len(lam)
    beta = [lam[i] + (k - 1 - i) for i in range(k)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        nb = b - strip
        if nb < 0 or nb in beta_set:
            continue
        height = sum(1 for x in beta if nb < x < b)
        nbeta = sorted((x for x in beta if x != b), reverse=True)
        lo = 0
        hi = len(nbeta)
        while lo < hi:
            mid = (lo + hi) // 2
            if nbeta[mid] > nb:
                lo = mid + 1
            else:
                hi = mid
        nbeta.insert(lo, nb)
        lam2 = []
        for j, x in enumerate(nbeta):
            part = x - (k - 1 - j)
            if part:
                lam2.append(part)
        value = _mn(tuple(lam2), rest)
        total += -value if height % 2 else value
    return total


def mn_character(lam: Partition, mu: Partition) -> int:
    """Exact character value chi_lam on the class of cycle type mu."""
    lam = tuple(lam)
    mu = tuple(sorted(mu, reverse=True))
    if not (is_partition(lam) and is_partition(mu)):
        raise ValueError("arguments must be partitions")
    if sum(lam) != sum(mu):
        raise PreconditionError(
            f"partition sizes differ: {sum(lam)} vs {sum(mu)}"
        )
    return _mn(lam, mu)


def character_cache_info():
    return _mn.cache_info()


def clear_character_cache() -> None:
    _mn.cache_clear()


@dataclass(frozen=True)
class OrthogonalityReport:
    n: int
    num_irreps: int
    passed: bool
    failure: str | None = None


def orthogonality_check(n: int, limit: int = 12) -> OrthogonalityReport:
    """Verify row and column orthogonality of the full S_n character table.

    Rows: sum_mu |C_mu| chi_lam(mu) chi_lam'(mu) = n! * delta(lam, lam').
    Columns: sum_lam chi_lam(mu) chi_lam(mu') = delta(mu, mu') * n!/|C_mu|.
    Returns the first counterexample if one exists.
    """
    if n > limit:
        raise LimitExceeded(f"full-table orthogonality check is capped at n={limit}")
    parts = partitions(n)
    sizes = {mu: sn_class_size(mu) for mu in parts}
    table = {(lam, mu): mn_character(lam, mu) for lam in parts for mu in parts}
    fact = math.factorial(n)
    for i, lam in enumerate(parts):
        for lam2 in parts[i:]:
            inner = sum(sizes[mu] * table[lam, mu] * table[lam2, mu] for mu in parts)
            want = fact if lam == lam2 else 0
            if inner != want:
                return OrthogonalityReport(
                    n, len(parts), False,
                    f"row orthogonality fails at {lam}, {lam2}: {inner} != {want}",
                )
    for i, mu in enumerate(parts):
        for mu2 in parts[i:]:
            inner = sum(table[lam, mu] * table[lam, mu2] for lam in parts)
            want = fact // sizes[mu] if mu == mu2 else 0
            if inner != want:
                return OrthogonalityReport(
                    n, len(parts), False,
                    f"column orthogonality fails at {mu}, {mu2}: {inner} != {want}",
                )
    return OrthogonalityReport(n, len(parts), True)
