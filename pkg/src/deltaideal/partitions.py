"""Admissible tuples (n_1, ..., n_k) and the sharp coefficient c(n_1, ..., n_k)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError


@dataclass(frozen=True, order=False)
class Partition:
    """An unordered tuple of subspace dimensions, stored non-increasing.

    The empty tuple (``k = 0``) is admissible and gives the trivial
    invariant, the scalar curvature.
    """

    n: int
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if self.n < 2:
            raise DimensionError(f"ambient dimension must be >= 2, got {self.n}")
        if any(p < 2 or p > self.n - 1 for p in parts):
            raise ValueError(f"parts must lie in [2, {self.n - 1}], got {parts}")
        if sum(parts) > self.n:
            raise ValueError(f"parts {parts} sum to more than n={self.n}")
        object.__setattr__(self, "parts", parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return "()" if not self.parts else "(" + ",".join(map(str, self.parts)) + ")"

    def to_json(self) -> list:
        return list(self.parts)


def _descending(max_part, budget):
    """Non-increasing tuples of parts in [2, max_part] with sum <= budget."""
    yield ()
    for first in range(2, min(max_part, budget) + 1):
        for rest in _descending(first, budget - first):
            yield (first,) + rest


def enumerate_tuples(n: int) -> list:
    """All admissible partitions of dimension ``n``, the empty one included.

    Ordered by number of parts, then lexicographically, so ``n=5`` gives
    ``(), (2), (3), (4), (2,2), (3,2)``.
    """
    if n < 2:
        raise DimensionError(f"ambient dimension must be >= 2, got {n}")
    tuples = sorted(_descending(n - 1, n), key=lambda t: (len(t), t))
    return [Partition(n, t) for t in tuples]


def c_coefficient_exact(p: Partition) -> Fraction:
    num = p.n**2 * (p.n + p.k - 1 - p.total)
    den = 2 * (p.n + p.k - p.total)
    return Fraction(num, den)


def c_coefficient(p: Partition) -> float:
    """``n^2 (n + k - 1 - sum n_j) / (2 (n + k - sum n_j))``."""
    return float(c_coefficient_exact(p))
