"""Closed-form point-count bounds and their comparisons.

Every bound is a total function returning a :class:`BoundResult`; when the
hypothesis under which the bound is known to hold fails, the value is still
returned and ``hypothesis_ok`` is False with a reason in ``note``.
Arithmetic is exact integer arithmetic throughout.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .errors import DimensionTooLarge, OutOfRange
from .poly import lambda_element, monomial_count
from .projgeom import homma_set_bound, p_count, zanella_set_bound

BOUND_NAMES = (
    "schwarz_zippel", "serre", "tb", "zanella_quadric", "couvreur_general",
    "couvreur_equidim", "tb_ci", "couvreur_ci", "homma", "zanella_set",
)


@dataclass
class BoundResult:
    name: str
    value: int
    params: dict
    hypothesis_ok: bool = True
    note: str = ""

    def __post_init__(self):
        if self.name not in BOUND_NAMES:
            raise ValueError(f"unknown bound name {self.name!r}")
        if self.value < 0:
            raise ValueError(f"negative bound value {self.value}")

    def to_dict(self) -> dict:
        return asdict(self)


def _flag(ok: bool, reason: str) -> dict:
    return {"hypothesis_ok": ok, "note": "" if ok else reason}


def schwarz_zippel_bound(d: int, m: int, q: int) -> BoundResult:
    """d q^(m-1) zeros for a degree-d polynomial on A^m(F_q)."""
    if d < 1 or m < 1:
        raise OutOfRange(f"need d, m >= 1, got d={d}, m={m}")
    return BoundResult("schwarz_zippel", d * q ** (m - 1), {"d": d, "m": m, "q": q},
                       **_flag(d <= q, f"d = {d} > q = {q}: bound exceeds q^m"))


def serre_bound(d: int, m: int, q: int) -> BoundResult:
    """d q^(m-1) + p_(m-2), sharp for d <= q+1."""
    if d < 1 or m < 1:
        raise OutOfRange(f"need d, m >= 1, got d={d}, m={m}")
    return BoundResult("serre", d * q ** (m - 1) + p_count(m - 2, q), {"d": d, "m": m, "q": q},
                       **_flag(d <= q + 1, f"d = {d} > q+1 = {q + 1}"))


def delta(j: int) -> int:
    """Number of degree-2 monomials in j+1 variables, C(j+2, 2)."""
    if j < -1:
        raise OutOfRange(f"delta needs j >= -1, got {j}")
    return math.comb(j + 2, 2)


def tb_value(d: int, m: int, r: int, q: int) -> int:
    nu = lambda_element(d, m, r)
    j = next(i for i, v in enumerate(nu, start=1) if v)
    total = p_count(m - 2 * j, q)
    for i in range(j, m + 1):
        total += nu[i - 1] * (p_count(m - i, q) - p_count(m - i - j, q))
    return total


def tb_bound(d: int, m: int, r: int, q: int) -> BoundResult:
    """Tsfasman-Boguslavsky value for r independent degree-d forms on P^m."""
    if d < 1 or m < 1:
        raise OutOfRange(f"need d, m >= 1, got d={d}, m={m}")
    n = monomial_count(d, m)
    if not 1 <= r <= n:
        raise OutOfRange(f"r = {r} outside [1, {n}]")
    return BoundResult("tb", tb_value(d, m, r, q), {"d": d, "m": m, "r": r, "q": q},
                       **_flag(d < q - 1, f"d = {d} is not < q-1 = {q - 1}"))


def zanella_k(m: int, r: int) -> int:
    """The unique k in [-1, m) with delta_m - delta_(k+1) < r <= delta_m - delta_k."""
    dm = delta(m)
    if not 1 <= r <= dm:
        raise OutOfRange(f"r = {r} outside [1, delta_{m}] = [1, {dm}]")
    for k in range(-1, m):
        if dm - delta(k + 1) < r <= dm - delta(k):
            return k
    raise AssertionError("unreachable")  # pragma: no cover


def _floor_q_pow(q: int, e: int) -> int:
    # floor(q^e) for integer e: zero once e < 0
    return q**e if e >= 0 else 0


def zanella_quadric_bound(m: int, r: int, q: int) -> BoundResult:
    """Bound on the common zeros of r independent quadrics in P^m."""
    if m < 1:
        raise OutOfRange(f"m must be >= 1, got {m}")
    k = zanella_k(m, r)
    eps = delta(m) - delta(k) - r
    value = p_count(k, q) + _floor_q_pow(q, eps - 1)
    return BoundResult("zanella_quadric", value, {"m": m, "r": r, "q": q, "k": k, "epsilon": eps})


@dataclass
class GapRow:
    r: int
    k: int
    i: int
    T_r: int
    Z_r: int
    gap: int
    closed_form_gap: int | None = None
    label: str = ""


CENSUS_COLUMNS = ("r", "k", "i", "T_r", "Z_r", "gap")


def tb_zanella_census(m: int, q: int) -> list[GapRow]:
    """T_r vs Z_r for every r in [1, delta_m], with quadrics (d = 2).

    On rows with 0 <= k < m-1 and 1 <= i <= k the gap is also computed as
    p_(k-i) - p_(2k-m-i+1) and must agree with the direct difference.
    A positive gap shows T_r is never attained; it says nothing against T_r
    being an upper bound, so such rows are labelled "attainment disproved".
    """
    if m < 2:
        raise OutOfRange(f"census needs m >= 2, got {m}")
    rows = []
    for r in range(1, delta(m) + 1):
        k = zanella_k(m, r)
        i = r - (delta(m) - delta(k + 1))
        T = tb_value(2, m, r, q)
        Z = zanella_quadric_bound(m, r, q).value
        row = GapRow(r, k, i, T, Z, T - Z)
        if 0 <= k < m - 1 and 1 <= i <= k:
            row.closed_form_gap = p_count(k - i, q) - p_count(2 * k - m - i + 1, q)
            if row.closed_form_gap != row.gap:
                raise AssertionError(
                    f"gap mismatch at m={m}, q={q}, r={r}: {row.gap} != {row.closed_form_gap}")
        if row.gap > 0:
            row.label = "attainment disproved"
        rows.append(row)
    return rows


def census_failing(rows: Sequence[GapRow]) -> list[GapRow]:
    return [row for row in rows if row.gap > 0]


def census_csv(rows: Sequence[GapRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CENSUS_COLUMNS)
    for row in rows:
        w.writerow([getattr(row, c) for c in CENSUS_COLUMNS])
    return buf.getvalue()


# -- Couvreur ----------------------------------------------------------------

def couvreur_bound(m: int, q: int, components: Sequence[tuple[int, int]]) -> BoundResult:
    """Bound from component dimensions n_i and degrees deg_i (all n_i < m)."""
    if not components:
        raise OutOfRange("need at least one component")
    for n_i, deg_i in components:
        if n_i >= m:
            raise DimensionTooLarge(f"component dimension {n_i} is not < m = {m}")
        if n_i < 0 or deg_i < 1:
            raise OutOfRange(f"bad component ({n_i}, {deg_i})")
    n = max(n_i for n_i, _ in components)
    value = p_count(2 * n - m, q) + sum(
        deg_i * (p_count(n_i, q) - p_count(2 * n_i - m, q)) for n_i, deg_i in components)
    return BoundResult("couvreur_general", value,
                       {"m": m, "q": q, "components": [list(c) for c in components]})


def couvreur_equidim_bound(m: int, q: int, n: int, deg: int) -> BoundResult:
    if not 0 <= n < m:
        raise DimensionTooLarge(f"need 0 <= n < m, got n={n}, m={m}")
    if deg < 1:
        raise OutOfRange(f"degree must be >= 1, got {deg}")
    value = deg * p_count(n, q) - (deg - 1) * p_count(2 * n - m, q)
    return BoundResult("couvreur_equidim", value, {"m": m, "q": q, "n": n, "deg": deg})


@dataclass
class CIComparison:
    T: BoundResult
    C: BoundResult
    relation: str  # "C<T", "C=T" or "C>T"
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"T": self.T.to_dict(), "C": self.C.to_dict(),
                "relation": self.relation, "params": self.params}


def ci_compare(d: int, m: int, r: int, q: int) -> CIComparison:
    """TB value vs Couvreur bound for a complete intersection of r degree-d forms.

    The variety has dimension m - r and degree d^r.
    """
    if d < 2:
        raise OutOfRange(f"need d > 1, got {d}")
    if not 1 <= r <= m:
        raise OutOfRange(f"need 1 <= r <= m, got r={r}, m={m}")
    params = {"d": d, "m": m, "r": r, "q": q}
    ok = d**r <= q + 1
    why = f"d^r = {d**r} > q+1 = {q + 1}"
    T = (d - 1) * q ** (m - 1) + q ** (m - r) + p_count(m - 2, q)
    C = d**r * (p_count(m - r, q) - p_count(m - 2 * r, q)) + p_count(m - 2 * r, q)
    tb = BoundResult("tb_ci", T, params, **_flag(ok, why))
    cv = BoundResult("couvreur_ci", C, params, **_flag(ok, why))
    rel = "C<T" if C < T else ("C=T" if C == T else "C>T")
    return CIComparison(tb, cv, rel, params)


def tb_lower_bound_ci(d: int, m: int, r: int, q: int) -> int:
    """(q^m + q^(m-r+1) - q^(m-r) - 1) / (q-1), a lower bound for T_r(d)."""
    if d < 2 or not 1 <= r <= m:
        raise OutOfRange(f"need d >= 2 and 1 <= r <= m, got d={d}, r={r}, m={m}")
    num = q**m + q ** (m - r + 1) - q ** (m - r) - 1
    assert num % (q - 1) == 0
    return num // (q - 1)


def homma_bound(a: int, m: int, q: int) -> BoundResult:
    return BoundResult("homma", homma_set_bound(a, m, q), {"a": a, "m": m, "q": q})


def zanella_set(a: int, q: int) -> BoundResult:
    return BoundResult("zanella_set", zanella_set_bound(a, q), {"a": a, "q": q})
