"""Arithmetic in F_q, q = p^k.

Elements are coefficient vectors ``rep`` (lowest degree first) in the
polynomial basis F_p[x]/(modulus).  Every element also has an integer
*code*: its position in :meth:`GF.elements`, which lists reps in
lexicographic order.  Bulk code paths (enumeration, evaluation, search)
work on codes held in numpy arrays; :class:`FieldElement` is the scalar,
self-describing form.

For prime fields the code of a residue is the residue itself.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NotPrime, ParseError, TooLarge

MAX_P = 2**16
MAX_Q = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p as coefficient lists, lowest degree first ----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    k = len(m) - 1
    for a in range(p):
        if sum(c * pow(a, i, p) for i, c in enumerate(m)) % p == 0:
            return False
    for deg in range(2, k // 2 + 1):
        for n in range(p**deg):
            div = [(n // p**i) % p for i in range(deg)] + [1]
            if not _pmod(m, div, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k over F_p.

    Candidates x^k + c_{k-1}x^{k-1} + ... + c_0 are ordered lexicographically
    on (c_{k-1}, ..., c_0).  Returned lowest degree first, length k + 1.
    """
    for n in range(p**k):
        m = [(n // p**i) % p for i in range(k)] + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise RuntimeError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldElement:
    rep: tuple[int, ...]
    tag: tuple

    def __repr__(self) -> str:
        if len(self.rep) == 1:
            return f"FieldElement({self.rep[0]})"
        return f"FieldElement({list(self.rep)})"


class GF:
    """The field F_q.  Build instances with :func:`field_create`."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | None):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self.tag = (p, k, modulus)
        # weight of rep[i] inside a code
        self._w = [p ** (k - 1 - i) for i in range(k)]
        self.one_code = self._w[0]
        self._mul_table: list[list[int]] | None = None
        self._log: np.ndarray | None = None
        self._exp: np.ndarray | None = None
        if k > 1 and self.q <= 256:
            self._mul_table = [
                [self._cmul_slow(a, b) for b in range(self.q)] for a in range(self.q)
            ]

    def __repr__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, modulus={list(self.modulus)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and other.tag == self.tag

    def __hash__(self) -> int:
        return hash(self.tag)

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    # -- codes <-> reps ----------------------------------------------------

    def rep_of(self, code: int) -> tuple[int, ...]:
        return tuple((code // w) % self.p for w in self._w)

    def code_of(self, rep) -> int:
        return sum((c % self.p) * w for c, w in zip(rep, self._w))

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} outside [0, {self.q})")
        return FieldElement(self.rep_of(code), self.tag)

    def code(self, a: FieldElement) -> int:
        self._check(a)
        return self.code_of(a.rep)

    def elements(self) -> list[FieldElement]:
        return [self.element(c) for c in range(self.q)]

    @property
    def zero(self) -> FieldElement:
        return self.element(0)

    @property
    def one(self) -> FieldElement:
        return self.element(self.one_code)

    def _check(self, a: FieldElement) -> None:
        if not isinstance(a, FieldElement) or a.tag != self.tag:
            raise FieldMismatch(f"{a!r} does not belong to {self!r}")

    # -- scalar arithmetic on codes -----------------------------------------

    def cadd(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return sum(((a // w + b // w) % self.p) * w for w in self._w)

    def cneg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return sum(((-(a // w)) % self.p) * w for w in self._w)

    def csub(self, a: int, b: int) -> int:
        return self.cadd(a, self.cneg(b))

    def _cmul_slow(self, a: int, b: int) -> int:
        ra, rb = self.rep_of(a), self.rep_of(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ra):
            if x:
                for j, y in enumerate(rb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.code_of(_pmod(prod, list(self.modulus), self.p))

    def cmul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._cmul_slow(a, b)

    def cpow(self, a: int, n: int) -> int:
        if n < 0:
            return self.cpow(self.cinv(a), -n)
        if self.k == 1:
            return pow(a, n, self.p)
        result, base = self.one_code, a
        while n:
            if n & 1:
                result = self.cmul(result, base)
            base = self.cmul(base, base)
            n >>= 1
        return result

    def cinv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.cpow(a, self.q - 2)

    # -- FieldElement arithmetic ----------------------------------------------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.element(self.cadd(self.code(a), self.code(b)))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.element(self.csub(self.code(a), self.code(b)))

    def neg(self, a: FieldElement) -> FieldElement:
        return self.element(self.cneg(self.code(a)))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.element(self.cmul(self.code(a), self.code(b)))

    def inv(self, a: FieldElement) -> FieldElement:
        return self.element(self.cinv(self.code(a)))

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.element(self.cmul(self.code(a), self.cinv(self.code(b))))

    def pow(self, a: FieldElement, n: int) -> FieldElement:
        return self.element(self.cpow(self.code(a), int(n)))

    # -- vectorized arithmetic on code arrays ---------------------------------

    def _digits(self, a: np.ndarray) -> list[np.ndarray]:
        return [(a // w) % self.p for w in self._w]

    def vadd(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for w, da, db in zip(self._w, self._digits(a), self._digits(b)):
            out += ((da + db) % self.p) * w
        return out

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        out = np.zeros_like(a)
        for w, da in zip(self._w, self._digits(a)):
            out += ((-da) % self.p) * w
        return out

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def _log_tables(self) -> tuple[np.ndarray, np.ndarray]:
        if self._log is None:
            order = self.q - 1
            factors = _prime_factors(order)
            g = next(
                c for c in range(1, self.q)
                if all(self.cpow(c, order // f) != self.one_code for f in factors)
            )
            exp = np.empty(order, dtype=np.int64)
            log = np.zeros(self.q, dtype=np.int64)
            x = self.one_code
            for i in range(order):
                exp[i] = x
                log[x] = i
                x = self.cmul(x, g)
            self._exp, self._log = exp, log
        return self._log, self._exp

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        log, exp = self._log_tables()
        prod = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vpow(self, a, n: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        result = np.full(a.shape, self.one_code, dtype=np.int64)
        base = a
        while n:
            if n & 1:
                result = self.vmul(result, base)
            base = self.vmul(base, base)
            n >>= 1
        return result

    # -- text form ----------------------------------------------------------

    def format(self, a) -> str:
        code = self.code(a) if isinstance(a, FieldElement) else int(a)
        if self.k == 1:
            return str(code)
        return "[" + ",".join(str(c) for c in self.rep_of(code)) + "]"

    def parse(self, text: str) -> int:
        """Parse the element text form and return its code.

        Prime fields accept any decimal integer (reduced mod p).  Extension
        fields accept ``[c0,c1,...]`` with at most k coefficients, or a bare
        integer meaning an element of the prime subfield.
        """
        s = text.strip()
        try:
            if s.startswith("["):
                if not s.endswith("]"):
                    raise ValueError
                parts = [x for x in s[1:-1].split(",") if x.strip()]
                coeffs = [int(x) % self.p for x in parts]
                if len(coeffs) > self.k:
                    raise ParseError(f"element {s!r} has more than {self.k} coefficients")
                return self.code_of(coeffs + [0] * (self.k - len(coeffs)))
            v = int(s) % self.p
        except ValueError:
            raise ParseError(f"bad field element {text!r}") from None
        return self.code_of([v] + [0] * (self.k - 1))


@functools.lru_cache(maxsize=None)
def field_create(p: int, k: int = 1) -> GF:
    """Return F_{p^k}; the modulus is the smallest irreducible (see above)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if p > MAX_P:
        raise TooLarge(f"p = {p} exceeds supported range {MAX_P}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p**k > MAX_Q:
        raise TooLarge(f"q = {p}^{k} exceeds enumeration cap {MAX_Q}")
    modulus = smallest_irreducible(p, k) if k > 1 else None
    return GF(p, k, modulus)


def field_from_q(q: int) -> GF:
    """F_q for a prime power q."""
    if q < 2:
        raise NotPrime(f"q = {q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    k, n = 0, q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise NotPrime(f"q = {q} is not a prime power")
    return field_create(p, k)


def enumerate_elements(F: GF) -> list[FieldElement]:
    return F.elements()
