"""Exact point counts of zero sets, extremal families, and max-count search."""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    BadBudget,
    DegreeExceedsQ,
    DegreeExceedsQPlus1,
    FieldMismatch,
    OutOfRange,
    ZeroPolynomial,
)
from .gf import GF
from .poly import (
    AffinePoly,
    CodeEvaluator,
    HomogPoly,
    check_subspace_args,
    codes_to_vectors,
    enumerate_lambda,
    evaluation_matrix,
    format_poly,
    iter_subspace_codes,
    monomial_count,
    rank,
    vectors_to_codes,
)
from .projgeom import affine_array, projective_array

POINT_CHUNK = 1 << 18
DEFAULT_SEED = 20150601


def _check_family(family: Sequence[HomogPoly], m: int, F: GF) -> None:
    if not family:
        raise ValueError("empty family")
    for f in family:
        if f.field != F:
            raise FieldMismatch(f"{format_poly(f)} is not over {F!r}")
        if f.m != m:
            raise ArityMismatch(f"{format_poly(f)} lives in P^{f.m}, not P^{m}")


def _common_zero_chunks(family: Sequence[HomogPoly], m: int, F: GF):
    pts = projective_array(m, F)
    for start in range(0, len(pts), POINT_CHUNK):
        chunk = pts[start:start + POINT_CHUNK]
        zero = np.ones(len(chunk), dtype=bool)
        for f in family:
            zero &= f.values(chunk) == 0
        yield zero


def count_projective_zeros(family: Sequence[HomogPoly], m: int, F: GF) -> int:
    """|V(F_1, ..., F_r)| over P^m(F_q), by evaluation at every point."""
    _check_family(family, m, F)
    return sum(int(z.sum()) for z in _common_zero_chunks(family, m, F))


def common_zeros(family: Sequence[HomogPoly], m: int, F: GF) -> np.ndarray:
    """The common zeros themselves, as a code array of normalized points."""
    _check_family(family, m, F)
    pts = projective_array(m, F)
    mask = np.concatenate(list(_common_zero_chunks(family, m, F)))
    return pts[mask]


def count_exceeding(family: Sequence[HomogPoly], m: int, F: GF, best: int,
                    chunk: int = 64) -> int | None:
    """Exact count if it exceeds ``best``, else None.

    Scans points in chunks and stops once the points left cannot lift the
    running count above ``best``.
    """
    _check_family(family, m, F)
    pts = projective_array(m, F)
    n = len(pts)
    count = 0
    for start in range(0, n, chunk):
        if count + (n - start) <= best:
            return None
        block = pts[start:start + chunk]
        zero = np.ones(len(block), dtype=bool)
        for f in family:
            zero &= f.values(block) == 0
        count += int(zero.sum())
    return count if count > best else None


def count_affine_zeros(f: AffinePoly, m: int, F: GF) -> int:
    """|Z(f)| over A^m(F_q)."""
    if f.field != F:
        raise FieldMismatch("polynomial over a different field")
    if f.m != m:
        raise ArityMismatch(f"polynomial in {f.m} variables, expected {m}")
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial vanishes everywhere")
    pts = affine_array(m, F)
    return sum(int((f.values(pts[s:s + POINT_CHUNK]) == 0).sum())
               for s in range(0, len(pts), POINT_CHUNK))


# -- constructions -----------------------------------------------------------

def _e(m: int, *idx: int) -> tuple[int, ...]:
    out = [0] * (m + 1)
    for i in idx:
        out[i] += 1
    return tuple(out)


def construct_g_affine(d: int, m: int, F: GF) -> AffinePoly:
    """(x_1 - a_1)...(x_1 - a_d) with a_i the first d field elements."""
    if not 1 <= d <= F.q:
        raise DegreeExceedsQ(f"need 1 <= d <= q = {F.q}, got d = {d}")
    if m < 1:
        raise OutOfRange("m must be >= 1")
    x1 = tuple(1 if i == 0 else 0 for i in range(m))
    const = (0,) * m
    g = AffinePoly.make(F, m, {const: F.one_code})
    for a in range(d):
        g = g * AffinePoly.make(F, m, {x1: F.one_code, const: F.cneg(a)})
    return g


def construct_G_projective(d: int, m: int, F: GF) -> HomogPoly:
    """(x_1 - a_1 x_0)...(x_1 - a_d x_0); for d = q+1, x_0 times the d = q form."""
    if not 1 <= d <= F.q + 1:
        raise DegreeExceedsQPlus1(f"need 1 <= d <= q+1 = {F.q + 1}, got d = {d}")
    if m < 1:
        raise OutOfRange("m must be >= 1")
    if d == F.q + 1:
        return HomogPoly.monomial(F, _e(m, 0)) * construct_G_projective(F.q, m, F)
    G = HomogPoly.make(F, m, 0, {(0,) * (m + 1): F.one_code})
    for a in range(d):
        G = G * HomogPoly.make(F, m, 1, {_e(m, 1): F.one_code, _e(m, 0): F.cneg(a)})
    return G


def construct_quadric_family(m: int, r: int, F: GF) -> list[HomogPoly]:
    """x_0x_1, ..., x_0x_r, and x_0^2 appended when r = m+1."""
    if m < 1 or not 1 <= r <= m + 1:
        raise OutOfRange(f"need 1 <= r <= m+1, got m={m}, r={r}")
    fam = [HomogPoly.monomial(F, _e(m, 0, i)) for i in range(1, min(r, m) + 1)]
    if r == m + 1:
        fam.append(HomogPoly.monomial(F, _e(m, 0, 0)))
    return fam


def dropped_monomials(m: int) -> list[tuple[int, ...]]:
    """x_m^2, x_{m-1}^2, x_{m-1}x_m, x_{m-2}^2 as exponent tuples, drop order."""
    return [_e(m, m, m), _e(m, m - 1, m - 1), _e(m, m - 1, m), _e(m, m - 2, m - 2)]


def construct_dropped_monomial_family(m: int, s: int, F: GF) -> list[HomogPoly]:
    """All degree-2 monomials except the first s of :func:`dropped_monomials`."""
    if m < 2 or not 0 <= s <= 4:
        raise OutOfRange(f"need m >= 2 and 0 <= s <= 4, got m={m}, s={s}")
    drop = set(dropped_monomials(m)[:s])
    return [HomogPoly.monomial(F, e) for e in enumerate_lambda(2, m) if e not in drop]


# -- search --------------------------------------------------------------------

@dataclass
class CountReport:
    count: int
    d: int
    m: int
    r: int
    q: int
    method: str
    elapsed_ms: float
    witness: list[HomogPoly] = field(default_factory=list)
    trials: int = 0
    seed: int | None = None
    witness_source: str = ""

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "count": self.count,
            "d": self.d,
            "m": self.m,
            "r": self.r,
            "q": self.q,
            "method": self.method,
            "witness": [format_poly(f) for f in self.witness],
            "witness_source": self.witness_source,
            "trials": self.trials,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing else None,
        }


class ZeroMasker:
    """Zero sets of degree-d forms on P^m(F_q) as packed bitmasks.

    A form is addressed by the code of its coefficient vector in the
    descending-lex monomial basis.  The common zero set of a family is the
    AND of its members' masks, so a subspace's count only needs its basis.
    """

    TABLE_BYTES = 1 << 26

    def __init__(self, d: int, m: int, F: GF, table: bool = True):
        self.d, self.m, self.F = d, m, F
        self.points = projective_array(m, F)
        self.monomials = enumerate_lambda(d, m)
        self.K = len(self.monomials)
        self.E = evaluation_matrix(self.monomials, self.points, F)
        self.evaluator = CodeEvaluator(self.E, F)
        self.nbytes = (len(self.points) + 7) // 8
        self.table = None
        if table and F.q**self.K * self.nbytes <= self.TABLE_BYTES:
            n = F.q**self.K
            self.table = np.concatenate([
                self.compute(np.arange(s, min(n, s + (1 << 16)), dtype=np.int64))
                for s in range(0, n, 1 << 16)
            ])

    def compute(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        vals = self.evaluator.values(codes.reshape(-1))
        packed = np.packbits(vals == 0, axis=1)
        return packed.reshape(codes.shape + (self.nbytes,))

    def masks(self, codes: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return self.table[codes]
        return self.compute(codes)

    def counts(self, codes: np.ndarray) -> np.ndarray:
        """Common-zero counts for a batch of families given as (N, r) codes."""
        common = np.bitwise_and.reduce(self.masks(codes), axis=1)
        return np.bitwise_count(common).sum(axis=-1, dtype=np.int64)

    def family(self, row_codes: Iterable[int]) -> list[HomogPoly]:
        vecs = codes_to_vectors(np.asarray(list(row_codes)), self.K, self.F.q)
        return [HomogPoly.from_coeff_vector(self.F, self.m, self.d, v) for v in vecs]


def known_constructions(d: int, m: int, r: int, F: GF, max_subsets: int = 256):
    """Deterministic constructions applicable to (d, m, r), as (label, family)."""
    out = []
    lam = enumerate_lambda(d, m)
    if r <= len(lam):
        out.append(("first_monomials", [HomogPoly.monomial(F, e) for e in lam[:r]]))
    if r == 1 and d <= F.q + 1:
        out.append(("G_d", [construct_G_projective(d, m, F)]))
    if d == 2 and r <= m + 1:
        out.append(("quadric_family", construct_quadric_family(m, r, F)))
    if d == 2 and m >= 2:
        for s in range(5):
            fam = construct_dropped_monomial_family(m, s, F)
            if len(fam) < r:
                continue
            if math.comb(len(fam), r) <= max_subsets:
                for sub in itertools.combinations(fam, r):
                    out.append((f"dropped_s{s}", list(sub)))
            else:
                out.append((f"dropped_s{s}", fam[:r]))
    return out


def _validate_search(d: int, m: int, r: int, F: GF) -> int:
    if d < 1 or m < 1:
        raise OutOfRange(f"need d, m >= 1, got d={d}, m={m}")
    K = monomial_count(d, m)
    if not 1 <= r <= K:
        raise OutOfRange(f"r = {r} outside [1, C(m+d, m)] = [1, {K}]")
    return K


def search_max_points(d: int, m: int, r: int, F: GF, mode: str = "exhaustive",
                      budget: int = 10_000, seed: int = DEFAULT_SEED,
                      threads: int = 1) -> CountReport:
    """Largest |V(F_1..F_r)| over r-dim subspaces of degree-d forms.

    ``exhaustive`` visits every subspace once (canonical RREF basis) and is
    exact.  ``randomized`` samples ``budget`` uniformly random independent
    families from a PCG64 stream seeded with ``seed``, and also scores every
    construction from :func:`known_constructions`; the result is a lower bound.
    """
    K = _validate_search(d, m, r, F)
    t0 = time.perf_counter()
    if mode == "exhaustive":
        check_subspace_args(K, r, F)
        masker = ZeroMasker(d, m, F, table=r > 1)
        best, best_codes, visited = _exhaustive(masker, K, r, threads)
        report = CountReport(best, d, m, r, F.q, "exhaustive", 0.0,
                             masker.family(best_codes), trials=visited,
                             witness_source="subspace_search")
    elif mode == "randomized":
        if budget < 1:
            raise BadBudget(f"budget must be >= 1, got {budget}")
        report = _randomized(d, m, r, F, budget, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report


def _exhaustive(masker: ZeroMasker, K: int, r: int, threads: int):
    best, best_codes, visited = -1, None, 0

    def score(codes):
        c = masker.counts(codes)
        i = int(np.argmax(c))
        return int(c[i]), codes[i], len(codes)

    batches = iter_subspace_codes(K, r, masker.F)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = pool.map(score, batches)
            for c, codes, n in results:
                visited += n
                if c > best:
                    best, best_codes = c, codes
    else:
        for batch in batches:
            c, codes, n = score(batch)
            visited += n
            if c > best:
                best, best_codes = c, codes
    return best, best_codes, visited


def _randomized(d: int, m: int, r: int, F: GF, budget: int, seed: int) -> CountReport:
    best, witness, source = -1, [], ""
    for label, fam in known_constructions(d, m, r, F):
        c = count_exceeding(fam, m, F, best)
        if c is not None:
            best, witness, source = c, fam, label

    masker = ZeroMasker(d, m, F)
    rng = np.random.Generator(np.random.PCG64(seed))
    K = masker.K
    done = 0
    rejected = 0
    while done < budget:
        n = min(1024, budget - done)
        draws = rng.integers(0, F.q, size=(n, r, K), dtype=np.int64)
        keep = [i for i in range(n) if rank(draws[i], F) == r]
        rejected += n - len(keep)
        if rejected > 100 * budget + 1000:
            raise RuntimeError("random families are almost never independent")  # pragma: no cover
        if not keep:
            continue
        draws = draws[keep]
        codes = vectors_to_codes(draws, F.q)
        counts = masker.counts(codes)
        i = int(np.argmax(counts))
        if counts[i] > best:
            best, witness, source = int(counts[i]), masker.family(codes[i]), "random"
        done += len(keep)
    return CountReport(best, d, m, r, F.q, "randomized", 0.0, witness,
                       trials=done, seed=seed, witness_source=source)
