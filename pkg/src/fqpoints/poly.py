"""Monomials, homogeneous forms, and linear algebra over F_q.

Exponent tuples ``(a_1, ..., a_{m+1})`` give the exponent of ``x_{i-1}`` in
position ``i``: variables are x_0..x_m, positions are 1-based in the
mathematical notation and 0-based in the tuple.  The monomial basis of
degree-d forms is always Λ(d, m) in descending lexicographic order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    FieldMismatch,
    MixedDegrees,
    OutOfRange,
    ParseError,
    TooLarge,
)
from .gf import GF, FieldElement
from .projgeom import ProjPoint

MAX_MONOMIALS = 2**20
MAX_SUBSPACES = 2**27

Exps = tuple[int, ...]


def monomial_count(d: int, m: int) -> int:
    return math.comb(m + d, m)


def _compositions(total: int, parts: int) -> int:
    """Number of ways to write total as an ordered sum of parts nonneg ints."""
    if parts == 0:
        return 1 if total == 0 else 0
    return math.comb(total + parts - 1, parts - 1)


def enumerate_lambda(d: int, m: int) -> list[Exps]:
    """Λ(d, m) in strictly descending lexicographic order."""
    if d < 0 or m < 0:
        raise OutOfRange(f"need d, m >= 0, got d={d}, m={m}")
    if monomial_count(d, m) > MAX_MONOMIALS:
        raise TooLarge(f"C(m+d, m) = {monomial_count(d, m)} exceeds {MAX_MONOMIALS}")

    def rec(rest: int, slots: int) -> Iterator[Exps]:
        if slots == 1:
            yield (rest,)
            return
        for a in range(rest, -1, -1):
            for tail in rec(rest - a, slots - 1):
                yield (a,) + tail

    return list(rec(d, m + 1))


def lambda_element(d: int, m: int, r: int) -> Exps:
    """The r-th (1-based) element of Λ(d, m), by unranking."""
    n = monomial_count(d, m)
    if not 1 <= r <= n:
        raise OutOfRange(f"r = {r} outside [1, {n}]")
    out = []
    rest, skip = d, r - 1
    for pos in range(m + 1):
        slots_after = m - pos
        if slots_after == 0:
            out.append(rest)
            break
        for a in range(rest, -1, -1):
            block = _compositions(rest - a, slots_after)
            if skip < block:
                out.append(a)
                rest -= a
                break
            skip -= block
    return tuple(out)


def lambda_rank(exps: Sequence[int]) -> int:
    """Inverse of lambda_element: 1-based position of exps in Λ(d, m)."""
    rank, rest = 0, sum(exps)
    slots = len(exps)
    for pos, e in enumerate(exps[:-1]):
        after = slots - pos - 1
        for a in range(rest, e, -1):
            rank += _compositions(rest - a, after)
        rest -= e
    return rank + 1


# -- polynomials -------------------------------------------------------------

def _clean_terms(terms, field: GF, nvars: int) -> tuple[tuple[Exps, int], ...]:
    acc: dict[Exps, int] = {}
    for exps, c in (terms.items() if isinstance(terms, dict) else terms):
        if isinstance(c, FieldElement):
            c = field.code(c)
        exps = tuple(int(e) for e in exps)
        if len(exps) != nvars:
            raise ArityMismatch(f"monomial {exps} has {len(exps)} exponents, expected {nvars}")
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        acc[exps] = field.cadd(acc.get(exps, 0), int(c))
    return tuple(sorted(((e, c) for e, c in acc.items() if c), reverse=True))


@dataclass(frozen=True)
class _Poly:
    field: GF
    terms: tuple[tuple[Exps, int], ...]

    @property
    def nvars(self) -> int:
        raise NotImplementedError

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict[Exps, int]:
        return dict(self.terms)

    def _mul_terms(self, other: _Poly) -> dict[Exps, int]:
        if other.field != self.field:
            raise FieldMismatch("polynomials over different fields")
        if other.nvars != self.nvars:
            raise ArityMismatch("polynomials in different numbers of variables")
        F = self.field
        acc: dict[Exps, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = F.cadd(acc.get(e, 0), F.cmul(c1, c2))
        return acc

    def values(self, points: np.ndarray) -> np.ndarray:
        """Values (codes) at each row of a code array of points."""
        F = self.field
        points = np.asarray(points, dtype=np.int64)
        if points.ndim != 2 or points.shape[1] != self.nvars:
            raise ArityMismatch(f"points have {points.shape[-1]} coordinates, expected {self.nvars}")
        out = np.zeros(points.shape[0], dtype=np.int64)
        for exps, c in self.terms:
            v = np.full(points.shape[0], c, dtype=np.int64)
            for i, e in enumerate(exps):
                if e:
                    v = F.vmul(v, F.vpow(points[:, i], e))
            out = F.vadd(out, v)
        return out

    def value_at(self, coords: Sequence[int]) -> int:
        if len(coords) != self.nvars:
            raise ArityMismatch(f"got {len(coords)} coordinates, expected {self.nvars}")
        F = self.field
        total = 0
        for exps, c in self.terms:
            v = c
            for x, e in zip(coords, exps):
                if e:
                    v = F.cmul(v, F.cpow(int(x), e))
            total = F.cadd(total, v)
        return total


@dataclass(frozen=True)
class HomogPoly(_Poly):
    """Homogeneous form of degree d in x_0..x_m.  Zero keeps its degree tag."""

    m: int = 0
    d: int = 0

    @property
    def nvars(self) -> int:
        return self.m + 1

    @classmethod
    def make(cls, field: GF, m: int, d: int, terms) -> HomogPoly:
        cleaned = _clean_terms(terms, field, m + 1)
        bad = [e for e, _ in cleaned if sum(e) != d]
        if bad:
            raise MixedDegrees(f"monomials {bad} are not of degree {d}")
        return cls(field, cleaned, m, d)

    @classmethod
    def monomial(cls, field: GF, exps: Sequence[int], coeff: int | None = None) -> HomogPoly:
        c = field.one_code if coeff is None else coeff
        return cls.make(field, len(exps) - 1, sum(exps), {tuple(exps): c})

    @classmethod
    def from_coeff_vector(cls, field: GF, m: int, d: int, vec) -> HomogPoly:
        basis = enumerate_lambda(d, m)
        if len(vec) != len(basis):
            raise ArityMismatch(f"coefficient vector of length {len(vec)}, expected {len(basis)}")
        return cls.make(field, m, d, {e: int(c) for e, c in zip(basis, vec) if c})

    def coeff_vector(self) -> np.ndarray:
        out = np.zeros(monomial_count(self.d, self.m), dtype=np.int64)
        for exps, c in self.terms:
            out[lambda_rank(exps) - 1] = c
        return out

    def __add__(self, other: HomogPoly) -> HomogPoly:
        if (other.m, other.d) != (self.m, self.d):
            raise MixedDegrees("sum of forms of different shape")
        return HomogPoly.make(self.field, self.m, self.d, list(self.terms) + list(other.terms))

    def scale(self, c: int) -> HomogPoly:
        F = self.field
        return HomogPoly.make(F, self.m, self.d, {e: F.cmul(c, v) for e, v in self.terms})

    def __mul__(self, other: HomogPoly) -> HomogPoly:
        return HomogPoly.make(self.field, self.m, self.d + other.d, self._mul_terms(other))

    def __str__(self) -> str:
        return format_poly(self)


@dataclass(frozen=True)
class AffinePoly(_Poly):
    """Polynomial in x_1..x_m (exponent tuples have length m)."""

    m: int = 0

    @property
    def nvars(self) -> int:
        return self.m

    @classmethod
    def make(cls, field: GF, m: int, terms) -> AffinePoly:
        return cls(field, _clean_terms(terms, field, m), m)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def __mul__(self, other: AffinePoly) -> AffinePoly:
        return AffinePoly.make(self.field, self.m, self._mul_terms(other))

    def __str__(self) -> str:
        return format_poly(self)


def evaluate(F: _Poly, P: ProjPoint | Sequence[int]) -> FieldElement:
    """Value of F at a point, using the stored (normalized) representative."""
    coords = P.coords if isinstance(P, ProjPoint) else tuple(P)
    return F.field.element(F.value_at(coords))


def format_poly(f: _Poly) -> str:
    if f.is_zero():
        return "0"
    F = f.field
    offset = 0 if isinstance(f, HomogPoly) else 1
    out = []
    for exps, c in f.terms:
        factors = []
        if c != F.one_code or not any(exps):
            factors.append(F.format(c))
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(f"x{i + offset}")
            elif e > 1:
                factors.append(f"x{i + offset}^{e}")
        out.append("*".join(factors))
    return " + ".join(out)


def parse_poly(text: str, field: GF, m: int | None = None, line: int | None = None) -> HomogPoly:
    """Parse ``"c*x0^a0*x1^a1 + ..."`` into a HomogPoly.

    m defaults to the largest variable index that appears.  Inputs whose
    terms do not share one degree are rejected, naming the offending terms.
    """
    raw_terms = []
    col = 1
    for chunk in text.split("+"):
        start = col + len(chunk) - len(chunk.lstrip())
        col += len(chunk) + 1
        chunk = chunk.strip()
        if not chunk:
            raise ParseError("empty term", line, start)
        coeff = field.one_code
        exps: dict[int, int] = {}
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ParseError(f"empty factor in term {chunk!r}", line, start)
            if factor.startswith("x"):
                name, _, power = factor.partition("^")
                try:
                    idx = int(name[1:])
                    e = int(power) if power else 1
                except ValueError:
                    raise ParseError(f"bad variable factor {factor!r}", line, start) from None
                if idx < 0 or e < 0:
                    raise ParseError(f"bad variable factor {factor!r}", line, start)
                exps[idx] = exps.get(idx, 0) + e
            else:
                try:
                    coeff = field.cmul(coeff, field.parse(factor))
                except ParseError as err:
                    raise ParseError(str(err), line, start) from None
        raw_terms.append((exps, coeff))
    top = max((i for e, _ in raw_terms for i in e), default=0)
    if m is None:
        m = max(top, 1)
    elif top > m:
        raise ParseError(f"variable x{top} out of range for m = {m}", line)
    degrees = [sum(e.values()) for e, _ in raw_terms]
    d = degrees[0]
    bad = [i for i, dd in enumerate(degrees) if dd != d]
    if bad:
        raise ParseError(f"not homogeneous: terms {bad} differ in degree from term 0 (degree {d})", line)
    terms = [(tuple(e.get(i, 0) for i in range(m + 1)), c) for e, c in raw_terms]
    return HomogPoly.make(field, m, d, terms)


# -- evaluation matrices -----------------------------------------------------

def evaluation_matrix(monomials: Sequence[Exps], points: np.ndarray, F: GF) -> np.ndarray:
    """(len(monomials), len(points)) code array of monomial values."""
    points = np.asarray(points, dtype=np.int64)
    if not monomials:
        return np.zeros((0, len(points)), dtype=np.int64)
    dmax = max(max(e) for e in monomials)
    nv = points.shape[1]
    powers = [[None] * (dmax + 1) for _ in range(nv)]
    for i in range(nv):
        powers[i][0] = np.full(len(points), F.one_code, dtype=np.int64)
        for e in range(1, dmax + 1):
            powers[i][e] = F.vmul(powers[i][e - 1], points[:, i])
    out = np.empty((len(monomials), len(points)), dtype=np.int64)
    for row, exps in enumerate(monomials):
        v = powers[0][exps[0]]
        for i in range(1, nv):
            if exps[i]:
                v = F.vmul(v, powers[i][exps[i]])
        out[row] = v
    return out


def combine_rows(coeffs: np.ndarray, E: np.ndarray, F: GF) -> np.ndarray:
    """coeffs @ E over F_q; coeffs (N, K), E (K, n) code arrays."""
    if F.is_prime_field:
        return (coeffs.astype(np.float64) @ E.astype(np.float64)).astype(np.int64) % F.p
    out = np.zeros((coeffs.shape[0], E.shape[1]), dtype=np.int64)
    for i in range(E.shape[0]):
        col = coeffs[:, i:i + 1]
        if np.any(col):
            out = F.vadd(out, F.vmul(col, E[i][None, :]))
    return out


# -- linear algebra ----------------------------------------------------------

def rref(M, F: GF) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_q and its pivot columns."""
    A = [[int(x) for x in row] for row in np.asarray(M, dtype=np.int64)]
    ncols = len(A[0]) if A else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        s = F.cinv(A[r][c])
        A[r] = [F.cmul(s, x) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = F.cneg(A[i][c])
                A[i] = [F.cadd(x, F.cmul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return np.array(A, dtype=np.int64).reshape(len(A), ncols), pivots


def rank(M, F: GF) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, F)[1])


def is_independent(family: Sequence[HomogPoly]) -> bool:
    if not family:
        return True
    f0 = family[0]
    for f in family:
        if f.field != f0.field:
            raise FieldMismatch("family mixes fields")
        if (f.m, f.d) != (f0.m, f0.d):
            raise MixedDegrees("family mixes degrees or ambient dimensions")
    if any(f.is_zero() for f in family):
        return False
    return rank(np.stack([f.coeff_vector() for f in family]), f0.field) == len(family)


def gaussian_binomial(k: int, r: int, q: int) -> int:
    if not 0 <= r <= k:
        raise OutOfRange(f"need 0 <= r <= k, got r={r}, k={k}")
    num = den = 1
    for i in range(r):
        num *= q ** (k - i) - 1
        den *= q ** (r - i) - 1
    return num // den


def check_subspace_args(k: int, r: int, F: GF) -> None:
    if not 1 <= r <= k:
        raise OutOfRange(f"need 1 <= r <= k, got r={r}, k={k}")
    count = gaussian_binomial(k, r, F.q)
    if count > MAX_SUBSPACES:
        raise TooLarge(f"[{k},{r}]_{F.q} = {count} subspaces exceeds {MAX_SUBSPACES}")


def iter_subspace_codes(k: int, r: int, F: GF, batch_digits: int | None = None) -> Iterator[np.ndarray]:
    """Canonical RREF bases of all r-dim subspaces of F_q^k, batched.

    Yields (N, r) arrays whose entries are row codes: the row vector v
    encoded as sum(v[j] * q**(k-1-j)).  Order: pivot profiles in
    lexicographic order, then free entries (row-major) in field order.
    """
    check_subspace_args(k, r, F)
    q = F.q
    if q**k >= 2**62:
        raise TooLarge(f"q^k = {q}^{k} does not fit row codes")
    if batch_digits is None:
        batch_digits = max(1, int(math.log(1 << 16, q)))
    for pivots in itertools.combinations(range(k), r):
        pset = set(pivots)
        free = [(i, j) for i, pi in enumerate(pivots) for j in range(pi + 1, k) if j not in pset]
        base = np.array([F.one_code * q ** (k - 1 - pi) for pi in pivots], dtype=np.int64)
        W = np.zeros((len(free), r), dtype=np.int64)
        for t, (i, j) in enumerate(free):
            W[t, i] = q ** (k - 1 - j)
        n_low = min(len(free), batch_digits)
        n_high = len(free) - n_low
        # the low free digits run through one fixed block; the high ones shift it
        low = _all_digit_vectors(n_low, q) @ W[n_high:] + base
        for t in range(q**n_high):
            offset = np.zeros(r, dtype=np.int64)
            for j in range(n_high - 1, -1, -1):
                t, digit = divmod(t, q)
                if digit:
                    offset += digit * W[j]
            yield low + offset


def _all_digit_vectors(n: int, q: int) -> np.ndarray:
    """All of {0..q-1}^n in lexicographic order, shape (q**n, n)."""
    out = np.zeros((q**n, n), dtype=np.int64)
    for col in range(n):
        out[:, col] = np.tile(np.repeat(np.arange(q, dtype=np.int64), q ** (n - 1 - col)), q**col)
    return out


class CodeEvaluator:
    """Evaluate coefficient vectors, given by their codes, against a matrix.

    For a (K, n) code array E this computes c @ E over F_q for each code c
    without decoding c digit by digit: the K digits are split into groups
    whose contributions are tabulated once, then summed per code.
    """

    TABLE_CELLS = 1 << 22

    def __init__(self, E: np.ndarray, F: GF):
        self.F = F
        self.K, self.n = E.shape
        q = F.q
        size = max(1, int(math.log(max(2, self.TABLE_CELLS // max(1, self.n)), q)))
        size = min(size, self.K)
        self.groups = []  # (divisor, modulus, table)
        for hi in range(0, self.K, size):
            rows = E[hi:hi + size]
            g = len(rows)
            table = combine_rows(_all_digit_vectors(g, q), rows, F)
            self.groups.append((q ** (self.K - hi - g), q**g, table))

    def values(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        out = None
        F = self.F
        for div, mod, table in self.groups:
            part = table[(codes // div) % mod if div > 1 else codes % mod]
            if out is None:
                out = part
            elif F.is_prime_field:
                out = out + part
            else:
                out = F.vadd(out, part)
        if F.is_prime_field and len(self.groups) > 1:
            out %= F.p
        return out


def codes_to_vectors(codes: np.ndarray, k: int, q: int) -> np.ndarray:
    """Decode row codes into coordinate vectors (extra trailing axis of size k)."""
    place = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (np.asarray(codes, dtype=np.int64)[..., None] // place) % q


def vectors_to_codes(vecs: np.ndarray, q: int) -> np.ndarray:
    vecs = np.asarray(vecs, dtype=np.int64)
    k = vecs.shape[-1]
    place = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return vecs @ place


def enumerate_subspaces(k: int, r: int, F: GF) -> Iterator[np.ndarray]:
    """One canonical RREF r x k basis matrix per r-dim subspace of F_q^k."""
    for codes in iter_subspace_codes(k, r, F):
        for mat in codes_to_vectors(codes, k, F.q):
            yield mat
