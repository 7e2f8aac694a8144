"""Dense homogeneous polynomial arithmetic over pluggable coefficient rings.

A degree-d form in n variables is stored as a dense coefficient vector of
length C(n+d-1, d), indexed by the graded-colexicographic rank of its
monomial.  Colex order compares exponent vectors from the last variable
backwards, so X_1^d has rank 0 and X_n^d has the largest rank.  Ranking and
unranking go through the combinatorial number system (no lookup tables
needed), which keeps both operations linear in n + d.

Three coefficient rings are supported:

  QQ     exact rationals (Python int / fractions.Fraction, freely mixed)
  GF(p)  the prime field of odd prime order p < 2^31, elements in [0, p)
  RR     double-precision floats (approximate; rejected where exactness
         is required)

Forms are immutable after construction, and every operation here is a pure
function, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, Sequence


# ---------------------------------------------------------------------------
# Coefficient rings


class Ring:
    """Base class for coefficient rings of DenseForm."""

    exact: bool = True
    zero = 0
    one = 1

    def coerce(self, value):
        raise NotImplementedError

    def normalize(self, value):
        """Canonical representative after unchecked +/* arithmetic."""
        return value

    def neg(self, value):
        return -value

    def div(self, a, b):
        raise NotImplementedError

    def to_float(self, value) -> float:
        return float(value)


class RationalRing(Ring):
    """Arbitrary-precision rationals; ints and Fractions interoperate."""

    def coerce(self, value):
        if isinstance(value, (int, Fraction)):
            return value
        if isinstance(value, float):
            raise TypeError("float coefficient not allowed in the rational ring")
        return Fraction(value)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in rational ring")
        return Fraction(a, b) if isinstance(a, int) and isinstance(b, int) else Fraction(a) / Fraction(b)

    def __repr__(self) -> str:
        return "QQ"


class PrimeField(Ring):
    """F_p for an odd prime p < 2^31; elements stored as ints in [0, p)."""

    def __init__(self, p: int):
        if p < 3 or p % 2 == 0 or p >= 2**31:
            raise ValueError(f"prime field order must be an odd prime < 2^31, got {p}")
        if not _is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def coerce(self, value):
        p = self.p
        if isinstance(value, int):
            return value % p
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {p}")
            return (value.numerator % p) * pow(den, -1, p) % p
        raise TypeError(f"cannot coerce {type(value).__name__} into GF({p})")

    def normalize(self, value):
        return value % self.p

    def neg(self, value):
        return (-value) % self.p

    def div(self, a, b):
        b %= self.p
        if b == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return a * pow(b, -1, self.p) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


class FloatRing(Ring):
    """Double-precision floats.  Approximate: never use where exactness matters."""

    exact = False
    zero = 0.0
    one = 1.0

    def coerce(self, value):
        return float(value)

    def div(self, a, b):
        return a / b

    def __repr__(self) -> str:
        return "RR"


QQ = RationalRing()
RR = FloatRing()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    """The prime field of order p (cached, so GF(p) compares by identity)."""
    return PrimeField(p)


def _is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24 with these witness bases
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Graded-colex monomial indexing


def monomial_count(n: int, d: int) -> int:
    """Number of degree-d monomials in n variables, C(n+d-1, d)."""
    if n < 1 or d < 0:
        raise ValueError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    return comb(n + d - 1, d)


def monomial_rank(exponents: Sequence[int], n: int | None = None, d: int | None = None) -> int:
    """Colex rank of an exponent vector among monomials of its degree.

    Uses the combinatorial number system: with j_1 <= ... <= j_d the sorted
    0-based variable indices of the monomial (each repeated per its
    exponent), the rank is sum_i C(j_i + i - 1, i).
    """
    if n is not None and len(exponents) != n:
        raise ValueError(f"exponent vector has length {len(exponents)}, expected {n}")
    total = 0
    rank = 0
    i = 0
    for var, e in enumerate(exponents):
        if e < 0:
            raise ValueError(f"negative exponent {e} at position {var}")
        for _ in range(e):
            i += 1
            rank += comb(var + i - 1, i)
        total += e
    if d is not None and total != d:
        raise ValueError(f"exponent vector has degree {total}, expected {d}")
    return rank


def monomial_unrank(index: int, n: int, d: int) -> tuple[int, ...]:
    """Inverse of monomial_rank: the exponent vector at a given colex rank."""
    size = monomial_count(n, d)
    if not 0 <= index < size:
        raise IndexError(f"monomial index {index} out of range for n={n}, d={d}")
    e = [0] * n
    r = index
    hi = n + d - 2
    for i in range(d, 0, -1):
        b = hi
        while b >= i and comb(b, i) > r:
            b -= 1
        # b == i-1 means the remainder is exhausted by smaller positions
        r -= comb(b, i) if b >= i else 0
        e[b - i + 1] += 1
        hi = b - 1
    return tuple(e)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All degree-d exponent vectors in colex (rank) order."""
    return tuple(_iter_monomials(n, d))


def _iter_monomials(n: int, d: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (d,)
        return
    for last in range(d + 1):
        for head in _iter_monomials(n - 1, d - last):
            yield head + (last,)


@lru_cache(maxsize=None)
def quadratic_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Index pairs (j, k), j <= k, in the colex order of degree-2 monomials."""
    pairs = []
    for e in monomials(n, 2):
        support = [i for i, x in enumerate(e) if x]
        pairs.append((support[0], support[-1]))
    return tuple(pairs)


@lru_cache(maxsize=None)
def _product_table(n: int, d1: int, d2: int) -> tuple[tuple[int, ...], ...]:
    # table[i][j] = rank of monomial_i(d1) * monomial_j(d2)
    right = monomials(n, d2)
    table = []
    for a in monomials(n, d1):
        table.append(tuple(monomial_rank([x + y for x, y in zip(a, b)]) for b in right))
    return tuple(table)


# ---------------------------------------------------------------------------
# Dense forms


@dataclass(frozen=True)
class DenseForm:
    """A homogeneous degree-d polynomial in n variables, dense coefficients."""

    n: int
    d: int
    ring: Ring
    coeffs: tuple

    def __post_init__(self):
        size = monomial_count(self.n, self.d)
        if len(self.coeffs) != size:
            raise ValueError(
                f"coefficient vector has length {len(self.coeffs)}, "
                f"expected C({self.n + self.d - 1},{self.d}) = {size}"
            )

    @classmethod
    def from_coeffs(cls, n: int, d: int, coeffs: Iterable, ring: Ring = QQ) -> "DenseForm":
        return cls(n, d, ring, tuple(ring.coerce(c) for c in coeffs))

    @classmethod
    def zero(cls, n: int, d: int, ring: Ring = QQ) -> "DenseForm":
        return cls(n, d, ring, (ring.zero,) * monomial_count(n, d))

    @classmethod
    def monomial(cls, n: int, exponents: Sequence[int], coeff=1, ring: Ring = QQ) -> "DenseForm":
        d = sum(exponents)
        c = [ring.zero] * monomial_count(n, d)
        c[monomial_rank(exponents, n=n)] = ring.coerce(coeff)
        return cls(n, d, ring, tuple(c))

    @classmethod
    def variable(cls, n: int, index: int, ring: Ring = QQ) -> "DenseForm":
        e = [0] * n
        e[index] = 1
        return cls.monomial(n, e, ring=ring)

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    def coefficient(self, exponents: Sequence[int]):
        return self.coeffs[monomial_rank(exponents, n=self.n, d=self.d)]

    def convert(self, ring: Ring) -> "DenseForm":
        if ring is self.ring:
            return self
        return DenseForm(self.n, self.d, ring, tuple(ring.coerce(c) for c in self.coeffs))

    def scale(self, scalar) -> "DenseForm":
        ring = self.ring
        s = ring.coerce(scalar)
        return DenseForm(self.n, self.d, ring, tuple(ring.normalize(c * s) for c in self.coeffs))

    def __add__(self, other: "DenseForm") -> "DenseForm":
        _check_compatible(self, other, same_degree=True)
        ring = self.ring
        return DenseForm(
            self.n, self.d, ring,
            tuple(ring.normalize(a + b) for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "DenseForm") -> "DenseForm":
        _check_compatible(self, other, same_degree=True)
        ring = self.ring
        return DenseForm(
            self.n, self.d, ring,
            tuple(ring.normalize(a - b) for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "DenseForm":
        ring = self.ring
        return DenseForm(self.n, self.d, ring, tuple(ring.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, DenseForm):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __repr__(self) -> str:
        nnz = sum(1 for c in self.coeffs if c)
        return f"DenseForm(n={self.n}, d={self.d}, ring={self.ring!r}, nnz={nnz}/{len(self.coeffs)})"


def _check_compatible(f: DenseForm, g: DenseForm, same_degree: bool = False) -> None:
    if f.n != g.n:
        raise ValueError(f"variable count mismatch: {f.n} vs {g.n}")
    if f.ring != g.ring:
        raise ValueError(f"ring mismatch: {f.ring!r} vs {g.ring!r}")
    if same_degree and f.d != g.d:
        raise ValueError(f"degree mismatch: {f.d} vs {g.d}")


def multiply(f: DenseForm, g: DenseForm) -> DenseForm:
    """Coefficient-exact product of two forms (schoolbook over nonzero pairs)."""
    _check_compatible(f, g)
    ring = f.ring
    table = _product_table(f.n, f.d, g.d)
    out = [ring.zero] * monomial_count(f.n, f.d + g.d)
    gc = g.coeffs
    for i, a in enumerate(f.coeffs):
        if not a:
            continue
        row = table[i]
        for j, b in enumerate(gc):
            if b:
                out[row[j]] += a * b
    return DenseForm(f.n, f.d + g.d, ring, tuple(ring.normalize(c) for c in out))


def evaluate(f: DenseForm, point: Sequence):
    """Evaluate a form at a point (exact if ring and point are exact)."""
    if len(point) != f.n:
        raise ValueError(f"point has length {len(point)}, expected {f.n}")
    ring = f.ring
    total = ring.zero
    for e, c in zip(monomials(f.n, f.d), f.coeffs):
        if not c:
            continue
        term = c
        for x, k in zip(point, e):
            if k:
                term = term * x ** k
        total = total + term
    return ring.normalize(total)


def truncated_exp(parts: Sequence[DenseForm], d: int) -> DenseForm:
    """Degree-d homogeneous part of exp(sum of the given forms).

    The parts must be homogeneous of positive degree and share an exact
    ring; the result is computed by truncated power-series exponentiation
    exp(F) = sum_k F^k / k!, keeping only components of degree <= d.
    """
    if not parts:
        raise ValueError("need at least one part")
    first = parts[0]
    n, ring = first.n, first.ring
    if not ring.exact:
        raise ValueError("truncated_exp requires an exact ring")
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got {d}")
    by_degree: dict[int, DenseForm] = {}
    for part in parts:
        _check_compatible(first, part)
        if part.d < 1:
            raise ValueError("parts must have degree >= 1")
        if part.d in by_degree:
            by_degree[part.d] = by_degree[part.d] + part
        else:
            by_degree[part.d] = part

    result = DenseForm.zero(n, d, ring)
    if d == 0:
        return DenseForm(n, 0, ring, (ring.one,))
    # power[e] = degree-e component of F^k, truncated to degree <= d
    power: dict[int, DenseForm] = {0: DenseForm(n, 0, ring, (ring.one,))}
    for k in range(1, d + 1):
        nxt: dict[int, DenseForm] = {}
        for e1, comp in power.items():
            if comp.is_zero():
                continue
            for e2, part in by_degree.items():
                e = e1 + e2
                if e > d:
                    continue
                term = multiply(comp, part)
                nxt[e] = nxt[e] + term if e in nxt else term
        power = nxt
        if not power:
            break
        if d in power:
            result = result + power[d].scale(ring.div(ring.one, factorial(k)))
    return result
