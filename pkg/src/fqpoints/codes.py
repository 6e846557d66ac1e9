"""Projective Reed-Muller codes and generalized Hamming weights."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import Degenerate, HypothesisViolated, LengthMismatch, OutOfRange, TooLarge
from .gf import GF
from .poly import (
    CodeEvaluator,
    HomogPoly,
    check_subspace_args,
    codes_to_vectors,
    combine_rows,
    enumerate_lambda,
    iter_subspace_codes,
    monomial_count,
    rank,
    rref,
)
from .projgeom import p_count, projective_array
from .bounds import delta
from .varieties import search_max_points

MAX_MATRIX_ENTRIES = 1 << 26


@dataclass
class LinearCode:
    field: GF
    n: int
    k: int
    gen: np.ndarray  # k x n field codes, rows are basis codewords
    label: str = ""

    @classmethod
    def from_generator(cls, field: GF, gen, label: str = "") -> LinearCode:
        gen = np.asarray(gen, dtype=np.int64)
        k = rank(gen, field)
        if k != gen.shape[0]:
            raise ValueError(f"generator rows are dependent (rank {k} < {gen.shape[0]})")
        return cls(field, gen.shape[1], k, gen, label)

    def is_nondegenerate(self) -> bool:
        return bool(np.all(np.any(self.gen != 0, axis=0)))

    def encode(self, messages) -> np.ndarray:
        """Codewords for a batch of message vectors (N, k)."""
        return combine_rows(np.atleast_2d(np.asarray(messages, dtype=np.int64)), self.gen, self.field)

    def to_dict(self) -> dict:
        return {"label": self.label, "n": self.n, "k": self.k, "q": self.field.q,
                "gen": [[self.field.format(int(x)) for x in row] for row in self.gen]}


def generator_matrix_text(C: LinearCode) -> str:
    """One codeword row per line, entries in field text form."""
    return "".join(" ".join(C.field.format(int(x)) for x in row) + "\n" for row in C.gen)


def prm_code(d: int, m: int, F: GF) -> LinearCode:
    """PRM_q(d, m): monomials of Λ(d, m) evaluated at the normalized points.

    If the evaluation rows are dependent (possible once d >= q) the
    generator keeps the first maximal independent set of monomial rows.
    """
    if d < 1 or m < 1:
        raise OutOfRange(f"need d, m >= 1, got d={d}, m={m}")
    pts = projective_array(m, F)
    K = monomial_count(d, m)
    if K * len(pts) > MAX_MATRIX_ENTRIES:
        raise TooLarge(f"{K} x {len(pts)} generator matrix is too large")
    rows = np.stack([HomogPoly.monomial(F, e).values(pts) for e in enumerate_lambda(d, m)])
    _, pivots = rref(rows.T, F)
    gen = rows[pivots]
    if d < F.q:
        assert len(pivots) == K, "evaluation map must be injective for d < q"
    return LinearCode(F, len(pts), len(pivots), gen, f"PRM(q={F.q},d={d},m={m})")


def support_weight(D: Sequence[Sequence[int]]) -> int:
    """Positions where some codeword of D (equivalently of its span) is nonzero."""
    D = [list(c) for c in D]
    if not D:
        return 0
    n = len(D[0])
    if any(len(c) != n for c in D):
        raise LengthMismatch("codewords of different lengths")
    return int(np.any(np.asarray(D) != 0, axis=0).sum())


class _SupportMasker:
    TABLE_BYTES = 1 << 26

    def __init__(self, C: LinearCode):
        self.C = C
        self.nbytes = (C.n + 7) // 8
        self.evaluator = CodeEvaluator(C.gen, C.field)
        self.table = None
        size = C.field.q**C.k
        if size * self.nbytes <= self.TABLE_BYTES:
            self.table = np.concatenate([
                self.compute(np.arange(s, min(size, s + (1 << 16)), dtype=np.int64))
                for s in range(0, size, 1 << 16)
            ])

    def compute(self, codes: np.ndarray) -> np.ndarray:
        words = self.evaluator.values(codes.reshape(-1))
        return np.packbits(words != 0, axis=1).reshape(codes.shape + (self.nbytes,))

    def weights(self, codes: np.ndarray) -> np.ndarray:
        masks = self.table[codes] if self.table is not None else self.compute(codes)
        return np.bitwise_count(np.bitwise_or.reduce(masks, axis=1)).sum(axis=-1, dtype=np.int64)


def higher_weight_witness(C: LinearCode, r: int, threads: int = 1) -> tuple[int, np.ndarray]:
    """d_r(C) and a minimizing subcode basis (codewords, r x n).

    Subcodes are enumerated as r-dim subspaces of the message space; the
    witness is the first minimizer in canonical subspace order.
    """
    if not 1 <= r <= C.k:
        raise OutOfRange(f"r = {r} outside [1, k] = [1, {C.k}]")
    check_subspace_args(C.k, r, C.field)
    sm = _SupportMasker(C)

    def score(codes):
        w = sm.weights(codes)
        i = int(np.argmin(w))
        return int(w[i]), codes[i]

    batches = iter_subspace_codes(C.k, r, C.field)
    best, best_codes = C.n + 1, None
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(score, batches))
    else:
        results = map(score, batches)
    for w, codes in results:
        if w < best:
            best, best_codes = w, codes
    witness = C.encode(codes_to_vectors(best_codes, C.k, C.field.q))
    return best, witness


def higher_weight(C: LinearCode, r: int, threads: int = 1) -> int:
    return higher_weight_witness(C, r, threads)[0]


@dataclass
class WeightHierarchy:
    weights: dict[int, int]
    method: str
    label: str = ""
    meta: dict = field(default_factory=dict)

    def as_list(self) -> list[int | None]:
        top = max(self.weights, default=0)
        return [self.weights.get(r) for r in range(1, top + 1)]

    def is_strictly_increasing(self) -> bool:
        keys = sorted(self.weights)
        return all(self.weights[a] < self.weights[b] for a, b in zip(keys, keys[1:]))

    def to_dict(self) -> dict:
        return {"label": self.label, "method": self.method, "weights": self.as_list()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "d_r"])
        for r in sorted(self.weights):
            w.writerow([r, self.weights[r]])
        return buf.getvalue()


def weight_hierarchy(C: LinearCode, threads: int = 1) -> WeightHierarchy:
    return WeightHierarchy({r: higher_weight(C, r, threads) for r in range(1, C.k + 1)},
                           "subspace_search", C.label)


def higher_weight_geometric(d: int, m: int, r: int, F: GF, mode: str = "exhaustive",
                            threads: int = 1, **search_kw) -> int:
    """p_m minus the largest common-zero count of r independent degree-d forms.

    Only defined for d < q.  With mode="randomized" the search maximum is a
    lower bound, so the result is an upper bound on d_r.
    """
    if d >= F.q:
        raise HypothesisViolated(f"geometric identity needs d < q, got d={d}, q={F.q}")
    report = search_max_points(d, m, r, F, mode=mode, threads=threads, **search_kw)
    return p_count(m, F.q) - report.count


def geometric_hierarchy(d: int, m: int, F: GF, threads: int = 1) -> WeightHierarchy:
    K = monomial_count(d, m)
    return WeightHierarchy(
        {r: higher_weight_geometric(d, m, r, F, threads=threads) for r in range(1, K + 1)},
        "geometric", f"PRM(q={F.q},d={d},m={m})")


def prm_quadric_closed_forms(m: int, q: int) -> WeightHierarchy:
    """Known d_r of PRM_q(2, m): r <= m+1 and the last five r."""
    if m < 2:
        raise OutOfRange(f"need m >= 2, got {m}")
    if q <= 2:
        raise HypothesisViolated(f"closed forms need d = 2 < q, got q = {q}")
    out: dict[int, int] = {}
    for r in range(1, m + 2):
        out[r] = q**m - (q ** (m - r) if m - r >= 0 else 0)
    pm = p_count(m, q)
    for s in range(5):
        v = pm - s if s <= 2 else pm - (q + s - 2)
        idx = delta(m) - s
        if idx in out and out[idx] != v:
            raise AssertionError(f"closed forms disagree at r={idx}: {out[idx]} vs {v}")
        out[idx] = v
    return WeightHierarchy(dict(sorted(out.items())), "closed_form", f"PRM(q={q},d=2,m={m})")


@dataclass
class PlotkinReport:
    n: int
    k: int
    q: int
    d1: int
    plotkin_rhs: Fraction
    plotkin_ok: bool
    a: int
    set_bound: int
    set_bound_ok: bool

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["plotkin_rhs"] = str(self.plotkin_rhs)
        return out


def plotkin_check(C: LinearCode) -> PlotkinReport:
    """d_1 against the Plotkin bound, and n <= a q + 1 with a = n - d_1."""
    if not C.is_nondegenerate():
        raise Degenerate(f"{C.label or 'code'} has an identically zero position")
    q, n, k = C.field.q, C.n, C.k
    d1 = higher_weight(C, 1)
    rhs = Fraction(n * q**k * (q - 1), (q**k - 1) * q)
    a = n - d1
    return PlotkinReport(n, k, q, d1, rhs, d1 <= rhs, a, a * q + 1, n <= a * q + 1)
