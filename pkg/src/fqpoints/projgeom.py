"""Points and hyperplanes of affine/projective space over F_q.

Coordinates are field codes (see :mod:`fqpoints.gf`).  Projective points are
kept in normalized form: the first nonzero coordinate is 1.  Enumeration
order is by position of that leading 1, then the remaining coordinates in
lexicographic field order.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import OutOfRange, TooLarge
from .gf import GF

MAX_POINTS = 2**24


@dataclass(frozen=True, order=True)
class ProjPoint:
    coords: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.coords) - 1


@dataclass(frozen=True, order=True)
class Hyperplane:
    """The hyperplane sum(coeffs[i] * x_i) = 0, coeffs normalized."""

    coeffs: tuple[int, ...]


def p_count(j: int, q: int) -> int:
    """|P^j(F_q)|; zero for negative j."""
    if j < 0:
        return 0
    return (q ** (j + 1) - 1) // (q - 1)


def _check_m(m: int) -> None:
    if m < 1:
        raise OutOfRange(f"m must be >= 1, got {m}")


def normalize(coords: Sequence[int], F: GF) -> ProjPoint:
    """Scale a nonzero coordinate vector so its first nonzero entry is 1."""
    coords = [int(c) for c in coords]
    lead = next((c for c in coords if c != 0), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    s = F.cinv(lead)
    return ProjPoint(tuple(F.cmul(s, c) for c in coords))


@functools.lru_cache(maxsize=64)
def _affine_array(m: int, F: GF) -> np.ndarray:
    n = F.q**m
    idx = np.arange(n, dtype=np.int64)
    out = np.empty((n, m), dtype=np.int64)
    for col in range(m):
        out[:, col] = (idx // F.q ** (m - 1 - col)) % F.q
    out.setflags(write=False)
    return out


def affine_array(m: int, F: GF) -> np.ndarray:
    """All of A^m(F_q) as a (q^m, m) code array, lexicographic."""
    _check_m(m)
    if F.q**m > MAX_POINTS:
        raise TooLarge(f"q^m = {F.q**m} exceeds {MAX_POINTS}")
    return _affine_array(m, F)


@functools.lru_cache(maxsize=64)
def _projective_array(m: int, F: GF) -> np.ndarray:
    blocks = []
    for lead in range(m + 1):
        tail = m - lead
        n = F.q**tail
        block = np.zeros((n, m + 1), dtype=np.int64)
        block[:, lead] = F.one_code
        if tail:
            block[:, lead + 1:] = _affine_array(tail, F)
        blocks.append(block)
    out = np.concatenate(blocks)
    out.setflags(write=False)
    return out


def projective_array(m: int, F: GF) -> np.ndarray:
    """All normalized points of P^m(F_q) as a (p_m, m+1) code array."""
    _check_m(m)
    if p_count(m, F.q) > MAX_POINTS:
        raise TooLarge(f"p_{m} = {p_count(m, F.q)} exceeds {MAX_POINTS}")
    return _projective_array(m, F)


def enumerate_projective(m: int, F: GF) -> list[ProjPoint]:
    return [ProjPoint(tuple(int(c) for c in row)) for row in projective_array(m, F)]


def enumerate_affine(m: int, F: GF) -> list[tuple[int, ...]]:
    return [tuple(int(c) for c in row) for row in affine_array(m, F)]


def enumerate_hyperplanes(m: int, F: GF) -> list[Hyperplane]:
    return [Hyperplane(tuple(int(c) for c in row)) for row in projective_array(m, F)]


def points_to_array(X: Iterable[ProjPoint], m: int) -> np.ndarray:
    rows = [pt.coords for pt in X]
    for r in rows:
        if len(r) != m + 1:
            raise ValueError(f"point {r} is not in P^{m}")
    return np.array(rows, dtype=np.int64).reshape(len(rows), m + 1)


def _dot(A: np.ndarray, B: np.ndarray, F: GF) -> np.ndarray:
    """Matrix product A @ B.T over F_q for code arrays."""
    if F.is_prime_field:
        # float64 keeps BLAS speed; sums stay far below 2**53
        return (A.astype(np.float64) @ B.T.astype(np.float64)).astype(np.int64) % F.p
    out = np.zeros((A.shape[0], B.shape[0]), dtype=np.int64)
    for i in range(A.shape[1]):
        out = F.vadd(out, F.vmul(A[:, i:i + 1], B[None, :, i]))
    return out


def incidence_counts(X: Iterable[ProjPoint], m: int, F: GF) -> np.ndarray:
    """|X ∩ H| for every hyperplane H, in enumeration order."""
    H = projective_array(m, F)
    P = points_to_array(X, m)
    if len(P) == 0:
        return np.zeros(len(H), dtype=np.int64)
    return (_dot(H, P, F) == 0).sum(axis=1)


def max_hyperplane_section(X: Iterable[ProjPoint], m: int, F: GF) -> tuple[int, Hyperplane]:
    """Largest hyperplane section of X and the first hyperplane attaining it."""
    counts = incidence_counts(X, m, F)
    best = int(np.argmax(counts))
    witness = Hyperplane(tuple(int(c) for c in projective_array(m, F)[best]))
    return int(counts[best]), witness


def zanella_set_bound(a: int, q: int) -> int:
    if a < 0:
        raise OutOfRange(f"a must be >= 0, got {a}")
    return a * q + 1


def homma_set_bound(a: int, m: int, q: int) -> int:
    if m < 2:
        raise OutOfRange(f"m must be >= 2, got {m}")
    top = p_count(m - 1, q)
    if not 1 <= a <= top:
        raise OutOfRange(f"a = {a} outside [1, p_{m - 1}] = [1, {top}]")
    return (a - 1) * q + 1 + (a - 1) // p_count(m - 2, q)


def format_point(pt: ProjPoint | Hyperplane, F: GF) -> str:
    coords = pt.coords if isinstance(pt, ProjPoint) else pt.coeffs
    return ":".join(F.format(c) for c in coords)


def parse_point(text: str, F: GF) -> ProjPoint:
    return normalize([F.parse(t) for t in text.split(":")], F)


def all_points_iter(m: int, F: GF):
    """Lazy version of enumerate_projective for callers that stream."""
    for lead in range(m + 1):
        head = (0,) * lead + (F.one_code,)
        for tail in itertools.product(range(F.q), repeat=m - lead):
            yield ProjPoint(head + tail)
