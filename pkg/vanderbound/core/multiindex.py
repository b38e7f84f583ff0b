"""Graded monomial basis and the integer combinatorics around it.

Order: total degree ascending; within a degree, exponent tuples in descending
lexicographic order with the first coordinate most significant, so for n=2,
N=2 the basis is 1, x, y, x^2, xy, y^2. Every coefficient vector and every
Vandermonde column in the package is indexed by this order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .errors import ContractViolation, DimensionOverflowError

MultiIndex = Tuple[int, ...]

INDEX_LIMIT = 2**63


def _check_shape(n: int, N: int) -> None:
    if int(n) != n or n < 1:
        raise ContractViolation(f"dimension n must be a positive integer, got {n!r}")
    if int(N) != N or N < 0:
        raise ContractViolation(f"degree N must be a non-negative integer, got {N!r}")


def dimension(n: int, N: int) -> int:
    """nu(n, N) = C(N + n, N), the number of monomials of degree <= N."""

    _check_shape(n, N)
    nu = math.comb(N + n, N)
    if nu >= INDEX_LIMIT:
        raise DimensionOverflowError(f"nu({n}, {N}) = C({N + n}, {N}) does not fit in a signed 64-bit index")
    return nu


def _compositions(n: int, k: int) -> Iterator[MultiIndex]:
    """Exponent tuples of length n summing to k, descending lex."""

    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


def enumerate_monomials(n: int, N: int) -> List[MultiIndex]:
    """All multi-indices with |alpha| <= N in graded order (zero index first)."""

    dimension(n, N)
    out: List[MultiIndex] = []
    for k in range(N + 1):
        out.extend(_compositions(n, k))
    return out


def multinomial(k: int, alpha: Sequence[int]) -> int:
    """k! / prod(alpha_l!) for |alpha| = k, as a product of binomials."""

    if any(a < 0 for a in alpha):
        raise ContractViolation(f"multi-index entries must be >= 0, got {tuple(alpha)}")
    if sum(alpha) != k:
        raise ContractViolation(f"multinomial needs |alpha| = k, got |{tuple(alpha)}| = {sum(alpha)} != {k}")
    out = 1
    partial = 0
    for a in alpha:
        partial += a
        out *= math.comb(partial, a)
    return out


@dataclass(frozen=True)
class MonomialOrder:
    """The fixed graded basis for (n, N), with lookup and cached tables."""

    n: int
    N: int
    indices: Tuple[MultiIndex, ...] = field(repr=False)
    exponents: np.ndarray = field(repr=False, compare=False)
    degrees: np.ndarray = field(repr=False, compare=False)
    multinomials: np.ndarray = field(repr=False, compare=False)
    _index: Dict[MultiIndex, int] = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def index_of(self, alpha: Sequence[int]) -> int:
        key = tuple(int(a) for a in alpha)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"{key} is not a monomial of degree <= {self.N} in {self.n} variables") from None

    def __getitem__(self, k: int) -> MultiIndex:
        return self.indices[k]

    def power_table(self, points: np.ndarray, degree: int | None = None) -> np.ndarray:
        """t[..., l, k] = points[..., l] ** k for k = 0..degree, by repeated squaring."""

        degree = self.N if degree is None else degree
        x = np.asarray(points, dtype=float)
        table = np.empty(x.shape + (degree + 1,), dtype=float)
        table[..., 0] = 1.0
        for k in range(1, degree + 1):
            half = table[..., k // 2]
            table[..., k] = half * half if k % 2 == 0 else half * half * x
        return table

    def monomials(self, points: np.ndarray) -> np.ndarray:
        """Rows of z^alpha for each point (shape (s, nu)), columns in graded order."""

        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[-1] != self.n:
            raise ContractViolation(f"points must have {self.n} coordinates, got {pts.shape[-1]}")
        table = self.power_table(pts)
        out = np.ones((pts.shape[0], self.size), dtype=float)
        for ell in range(self.n):
            out *= table[:, ell, :][:, self.exponents[:, ell]]
        return out


@lru_cache(maxsize=64)
def monomial_order(n: int, N: int) -> MonomialOrder:
    """Build (and cache) the graded order for (n, N)."""

    indices = tuple(enumerate_monomials(n, N))
    exponents = np.array(indices, dtype=np.int64).reshape(len(indices), n)
    exponents.setflags(write=False)
    degrees = exponents.sum(axis=1)
    degrees.setflags(write=False)
    multinomials = np.array([multinomial(int(d), a) for d, a in zip(degrees, indices)], dtype=float)
    multinomials.setflags(write=False)
    return MonomialOrder(
        n=n,
        N=N,
        indices=indices,
        exponents=exponents,
        degrees=degrees,
        multinomials=multinomials,
        _index={alpha: i for i, alpha in enumerate(indices)},
    )
