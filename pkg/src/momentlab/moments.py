"""Gaussian moment forms and their structural identities.

The degree-d moment form of a Gaussian with linear part l = <mean, X> and
quadratic part q = X^T Sigma X is

    sum_{k=0..d//2}  c_k(d) * q^k * l^(d-2k),      c_k(d) = d! / (2^k k! (d-2k)!)

normalized so the coefficient of l^d is 1.  The d-homogeneous part of the
moment generating function exp(l + q/2) equals this form divided by d!;
all APIs here return the undivided normalization and tests carry the d!
factor explicitly where the two constructions are compared.

Quadratic data is stored Sigma-centric: the upper triangle of the symmetric
matrix, in the colex order of degree-2 monomials.  The monomial X_j X_k
(j < k) of q carries coefficient 2*Sigma[j,k]; diagonal entries map onto
the X_j^2 coefficients unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, isqrt
from typing import Sequence

import numpy as np

from .poly import (
    QQ,
    RR,
    DenseForm,
    Ring,
    monomials,
    multiply,
    quadratic_pairs,
)


def duonomial(d: int, k: int) -> int:
    """d! / (k! (d-2k)!), the coefficient combinatorics of the moment forms."""
    if k < 0 or 2 * k > d:
        raise ValueError(f"need 0 <= 2k <= d, got d={d}, k={k}")
    return factorial(d) // (factorial(k) * factorial(d - 2 * k))


def bivariate_coeffs(d: int) -> tuple[int, ...]:
    """Coefficients c_k = 2^{-k} * duonomial(d, k) for k = 0..d//2.

    Each c_k counts the ways to pick k disjoint pairs from d items, so the
    division is always exact.
    """
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got {d}")
    out = []
    for k in range(d // 2 + 1):
        num = duonomial(d, k)
        den = 2**k
        if num % den:
            raise ArithmeticError(f"2^{k} does not divide duonomial({d},{k})")
        out.append(num // den)
    return tuple(out)


@dataclass(frozen=True)
class BivariateMomentPoly:
    """The degree-d moment form viewed as a polynomial in (l, q)."""

    d: int
    coeffs: tuple[int, ...]

    @classmethod
    def of_degree(cls, d: int) -> "BivariateMomentPoly":
        return cls(d, bivariate_coeffs(d))

    def render(self) -> str:
        """Human-readable expansion, e.g. 'l^6 + 15 q l^4 + 45 q^2 l^2 + 15 q^3'."""
        terms = []
        for k, c in enumerate(self.coeffs):
            le = self.d - 2 * k
            factors = []
            if c != 1 or (le == 0 and k == 0):
                factors.append(str(c))
            if k:
                factors.append("q" if k == 1 else f"q^{k}")
            if le:
                factors.append("l" if le == 1 else f"l^{le}")
            terms.append(" ".join(factors) if factors else "1")
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# Parameter points


@dataclass(frozen=True)
class GaussianParams:
    """A parameter point (mean, Sigma) of the degree-d moment map.

    mean: n scalars, the coefficients of the linear part l.
    quad: n(n+1)/2 scalars, the upper triangle of Sigma in the colex order
          of degree-2 monomials (see quadratic_pairs).
    """

    n: int
    ring: Ring
    mean: tuple
    quad: tuple

    def __post_init__(self):
        if len(self.mean) != self.n:
            raise ValueError(f"mean has length {len(self.mean)}, expected {self.n}")
        expected = self.n * (self.n + 1) // 2
        if len(self.quad) != expected:
            raise ValueError(f"quad has length {len(self.quad)}, expected {expected}")

    @classmethod
    def make(cls, mean: Sequence, quad: Sequence, ring: Ring = QQ) -> "GaussianParams":
        return cls(
            len(mean), ring,
            tuple(ring.coerce(v) for v in mean),
            tuple(ring.coerce(v) for v in quad),
        )

    @classmethod
    def from_forms(cls, linear: DenseForm, quadratic: DenseForm) -> "GaussianParams":
        """Recover (mean, Sigma) from the forms l and q = X^T Sigma X."""
        if linear.d != 1 or quadratic.d != 2:
            raise ValueError("need a degree-1 and a degree-2 form")
        if linear.n != quadratic.n or linear.ring != quadratic.ring:
            raise ValueError("forms must share variables and ring")
        ring = linear.ring
        quad = []
        for (j, k), c in zip(quadratic_pairs(linear.n), quadratic.coeffs):
            quad.append(c if j == k else ring.div(c, 2))
        return cls(linear.n, ring, tuple(linear.coeffs), tuple(quad))

    def linear_form(self) -> DenseForm:
        return DenseForm(self.n, 1, self.ring, self.mean)

    def quadratic_form(self) -> DenseForm:
        ring = self.ring
        coeffs = []
        for (j, k), s in zip(quadratic_pairs(self.n), self.quad):
            coeffs.append(s if j == k else ring.normalize(s + s))
        return DenseForm(self.n, 2, ring, tuple(coeffs))

    def sigma_matrix(self) -> list[list]:
        out = [[self.ring.zero] * self.n for _ in range(self.n)]
        for (j, k), s in zip(quadratic_pairs(self.n), self.quad):
            out[j][k] = s
            out[k][j] = s
        return out

    def convert(self, ring: Ring) -> "GaussianParams":
        if ring is self.ring:
            return self
        return GaussianParams(
            self.n, ring,
            tuple(ring.coerce(v) for v in self.mean),
            tuple(ring.coerce(v) for v in self.quad),
        )

    def scale_gauge(self, t) -> "GaussianParams":
        """Apply the rescaling (l, Sigma) -> (t*l, t^2*Sigma)."""
        ring = self.ring
        t = ring.coerce(t)
        t2 = ring.normalize(t * t)
        return GaussianParams(
            self.n, ring,
            tuple(ring.normalize(v * t) for v in self.mean),
            tuple(ring.normalize(v * t2) for v in self.quad),
        )


@dataclass(frozen=True)
class MixtureParams:
    """Weighted list of Gaussian parameter points sharing n and ring."""

    components: tuple  # of (weight, GaussianParams)

    def __post_init__(self):
        if not self.components:
            raise ValueError("mixture must have at least one component")
        first = self.components[0][1]
        for _, p in self.components:
            if p.n != first.n or p.ring != first.ring:
                raise ValueError("components must share variable count and ring")

    @classmethod
    def make(cls, weights: Sequence, params: Sequence[GaussianParams]) -> "MixtureParams":
        if len(weights) != len(params):
            raise ValueError("one weight per component required")
        ring = params[0].ring
        return cls(tuple((ring.coerce(w), p) for w, p in zip(weights, params)))

    @classmethod
    def uniform(cls, params: Sequence[GaussianParams]) -> "MixtureParams":
        ring = params[0].ring
        w = ring.div(ring.one, len(params))
        return cls(tuple((w, p) for p in params))

    @property
    def n(self) -> int:
        return self.components[0][1].n

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def ring(self) -> Ring:
        return self.components[0][1].ring

    def convert(self, ring: Ring) -> "MixtureParams":
        if ring is self.ring:
            return self
        return MixtureParams(
            tuple((ring.coerce(w), p.convert(ring)) for w, p in self.components)
        )


# ---------------------------------------------------------------------------
# Moment forms


def moment_form(params: GaussianParams, d: int) -> DenseForm:
    """The degree-d moment form sum_k c_k q^k l^(d-2k) at a parameter point."""
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got {d}")
    ring = params.ring
    if d == 0:
        return DenseForm(params.n, 0, ring, (ring.one,))
    ell = params.linear_form()
    q = params.quadratic_form()
    coeffs = bivariate_coeffs(d)
    # powers l^e for e = 0..d and q^k for k = 0..d//2
    ell_pows = [DenseForm(params.n, 0, ring, (ring.one,))]
    for _ in range(d):
        ell_pows.append(multiply(ell_pows[-1], ell))
    q_pow = DenseForm(params.n, 0, ring, (ring.one,))
    total = DenseForm.zero(params.n, d, ring)
    for k, c in enumerate(coeffs):
        if k:
            q_pow = multiply(q_pow, q)
        total = total + multiply(q_pow, ell_pows[d - 2 * k]).scale(c)
    return total


def mixture_moment(mix: MixtureParams, d: int) -> DenseForm:
    """Weighted sum of the component moment forms."""
    total = DenseForm.zero(mix.n, d, mix.ring)
    for w, p in mix.components:
        total = total + moment_form(p, d).scale(w)
    return total


def _rational_root(value: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a positive rational, or None if irrational."""
    value = Fraction(value)
    if value <= 0:
        return None

    def iroot(a: int) -> int | None:
        if k == 1:
            return a
        if k == 2:
            r = isqrt(a)
            return r if r * r == a else None
        # integer Newton iteration; safe for arbitrarily large a
        r = 1 << (-(-a.bit_length() // k))
        while True:
            nxt = ((k - 1) * r + a // r ** (k - 1)) // k
            if nxt >= r:
                break
            r = nxt
        for c in (r - 1, r, r + 1):
            if c >= 1 and c**k == a:
                return c
        return None

    num = iroot(value.numerator)
    den = iroot(value.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def rescale_to_uniform(mix: MixtureParams, d: int) -> MixtureParams:
    """Fold the mixing weights into the parameters, preserving degree-d moments.

    Each component (w, mean, Sigma) becomes (1/m, (mw)^(1/d) mean,
    (mw)^(2/d) Sigma).  Over the rational ring the required roots must
    exist exactly; otherwise the mixture is converted to float mode.
    """
    m = mix.m
    ring = mix.ring
    for w, _ in mix.components:
        if not (w > 0):
            raise ValueError(f"weights must be positive, got {w}")
    if ring.exact:
        roots = [_rational_root(Fraction(w) * m, d) for w, _ in mix.components]
        if all(r is not None for r in roots):
            uniform = ring.div(ring.one, m)
            return MixtureParams(
                tuple(
                    (uniform, p.scale_gauge(r))
                    for r, (_, p) in zip(roots, mix.components)
                )
            )
        mix = mix.convert(RR)
    scaled = []
    for w, p in mix.components:
        t = (float(w) * m) ** (1.0 / d)
        scaled.append((1.0 / m, p.scale_gauge(t)))
    return MixtureParams(tuple(scaled))


# ---------------------------------------------------------------------------
# Structural checks


def euler_recurrence_check(d: int, trials: int = 3, n: int = 3, seed: int = 0) -> bool:
    """Verify s_d = l*s_{d-1} + (d-1)*q*s_{d-2} on random exact instances."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        mean = [Fraction(int(a), int(b)) for a, b in
                zip(rng.integers(-9, 10, n), rng.integers(1, 5, n))]
        quad = [Fraction(int(a), int(b)) for a, b in
                zip(rng.integers(-9, 10, n * (n + 1) // 2), rng.integers(1, 5, n * (n + 1) // 2))]
        p = GaussianParams.make(mean, quad)
        lhs = moment_form(p, d)
        rhs = multiply(p.linear_form(), moment_form(p, d - 1)) + \
            multiply(p.quadratic_form(), moment_form(p, d - 2)).scale(d - 1)
        if lhs != rhs:
            return False
    return True


def _dehomogenized_coeffs(k: int) -> list[int]:
    """Coefficients of u_k(t) = shat_k(1, t) by ascending power of t.

    shat_k strips one factor of l from the degree-k moment form when k is
    odd; substituting l = 1, q = t leaves a univariate polynomial whose
    t^j coefficient is c_j(k).
    """
    return list(bivariate_coeffs(k))


def sylvester_resultant(f: Sequence, g: Sequence):
    """Resultant of two univariate polynomials given by ascending coefficients.

    Exact over ints/Fractions: builds the Sylvester matrix and evaluates its
    determinant by fraction-free (Bareiss) elimination.
    """
    f = list(f)
    g = list(g)
    while f and not f[-1]:
        f.pop()
    while g and not g[-1]:
        g.pop()
    if not f or not g:
        raise ValueError("resultant of the zero polynomial is undefined")
    df, dg = len(f) - 1, len(g) - 1
    size = df + dg
    if size == 0:
        return 1
    rows = []
    fd = f[::-1]  # descending
    gd = g[::-1]
    for i in range(dg):
        rows.append([0] * i + fd + [0] * (size - df - 1 - i))
    for i in range(df):
        rows.append([0] * i + gd + [0] * (size - dg - 1 - i))
    return _bareiss_det(rows)


def _bareiss_det(rows: list[list]):
    a = [list(map(Fraction, r)) for r in rows]
    size = len(a)
    sign = 1
    prev = Fraction(1)
    for k in range(size - 1):
        if not a[k][k]:
            pivot = next((i for i in range(k + 1, size) if a[i][k]), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]
    det = sign * a[size - 1][size - 1]
    return int(det) if det.denominator == 1 else det


@dataclass(frozen=True)
class CommonRootReport:
    d: int
    resultant: int
    shares_root: bool


def common_root_check(d: int) -> CommonRootReport:
    """Resultant test: can the degree-(d-1) and degree-(d-2) moment forms
    vanish simultaneously at nonzero (l, q)?

    Works on the dehomogenizations u_{d-1}, u_{d-2} (substitute l=1, q=t
    after stripping one factor of l from odd degrees).  A nonzero resultant
    certifies the two have no common root, hence no simultaneous vanishing.
    """
    if not 4 <= d <= 9:
        raise ValueError(f"supported degree range is 4..9, got {d}")
    u1 = _dehomogenized_coeffs(d - 1)
    u2 = _dehomogenized_coeffs(d - 2)
    res = sylvester_resultant(u1, u2)
    return CommonRootReport(d, res, res == 0)


def eisenstein_check(k: int) -> int | None:
    """Largest prime witnessing Eisenstein irreducibility of shat_k(L, 1).

    shat_k(L, 1) has leading coefficient 1 and lower coefficients c_1..c_j
    (j = k//2 for even k, (k-1)//2 for odd).  A witness p divides every
    lower coefficient while p^2 does not divide the constant term.  Returns
    None if no prime witnesses.
    """
    if not 3 <= k <= 8:
        raise ValueError(f"supported range is 3..8, got {k}")
    lower = list(bivariate_coeffs(k))[1:]  # leading c_0 = 1 excluded
    constant = lower[-1]
    g = 0
    for c in lower:
        g = _gcd(g, c)
    witnesses = [p for p in _prime_factors(g) if constant % (p * p) != 0]
    return max(witnesses) if witnesses else None


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _prime_factors(n: int) -> list[int]:
    out = []
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Monomial moments and Monte Carlo validation


def monomial_moments(params: GaussianParams, d: int) -> dict[tuple[int, ...], Fraction]:
    """Raw moments E[Y^alpha] for |alpha| = d, from the moment form.

    The degree-d part of the moment generating function has X^alpha
    coefficient E[Y^alpha] / alpha!, so E[Y^alpha] equals the moment-form
    coefficient times alpha! / d!.
    """
    form = moment_form(params, d)
    out = {}
    for alpha, c in zip(monomials(params.n, d), form.coeffs):
        fact = 1
        for e in alpha:
            fact *= factorial(e)
        out[alpha] = Fraction(c) * fact / factorial(d)
    return out


def sample_gaussian(params: GaussianParams, size: int, seed: int) -> np.ndarray:
    """Draw samples via Cholesky of Sigma (requires positive definite Sigma)."""
    mean = np.array([float(v) for v in params.mean])
    sigma = np.array([[float(v) for v in row] for row in params.sigma_matrix()])
    chol = np.linalg.cholesky(sigma)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((size, params.n))
    return mean + z @ chol.T


def monte_carlo_check(
    params: GaussianParams, d: int, size: int = 1_000_000, seed: int = 2023
) -> float:
    """Largest relative error between empirical and analytic degree-d moments."""
    samples = sample_gaussian(params, size, seed)
    worst = 0.0
    for alpha, expected in monomial_moments(params, d).items():
        vals = np.ones(size)
        for j, e in enumerate(alpha):
            if e:
                vals = vals * samples[:, j] ** e
        emp = float(vals.mean())
        ref = float(expected)
        denom = abs(ref) if ref else 1.0
        worst = max(worst, abs(emp - ref) / denom)
    return worst
