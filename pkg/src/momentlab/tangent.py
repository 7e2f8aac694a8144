"""Tangent-space generator matrices of the Gaussian moment variety.

At a parameter point (l, q) the tangent space of the degree-d moment
variety is spanned by the forms s_{d-1}(l,q) * X_j (one per variable) and
s_{d-2}(l,q) * X_j X_k (one per monomial pair, j <= k), a total of
n + n(n+1)/2 = n(n+3)/2 generators.  A secant matrix stacks the generator
blocks of several points; its rank is the dimension of the sum of the
tangent spaces, hence of the secant variety at a generic point.

Rows live in the dense degree-d coefficient space of length C(n+d-1, d).
Blocks are assembled independently and concatenated in sample order, so
results do not depend on scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .moments import GaussianParams, moment_form
from .poly import QQ, DenseForm, Ring, monomial_count, multiply, quadratic_pairs


def gm_dimension(n: int) -> int:
    """Generic dimension n(n+3)/2 of the moment variety for degree >= 4."""
    return n * (n + 3) // 2


@dataclass(frozen=True)
class TangentBlock:
    """Generator matrix of one tangent space; rows are coefficient vectors."""

    params: GaussianParams
    d: int
    rows: tuple[tuple, ...]

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def col_count(self) -> int:
        return monomial_count(self.n, self.d)

    def matrix(self) -> list[list]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class SecantMatrix:
    """Row-stacked tangent blocks of m parameter points sharing (n, d, ring)."""

    blocks: tuple[TangentBlock, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("secant matrix needs at least one block")
        first = self.blocks[0]
        for b in self.blocks:
            if b.n != first.n or b.d != first.d or b.params.ring != first.params.ring:
                raise ValueError("blocks must share variable count, degree and ring")

    @property
    def n(self) -> int:
        return self.blocks[0].n

    @property
    def d(self) -> int:
        return self.blocks[0].d

    @property
    def m(self) -> int:
        return len(self.blocks)

    @property
    def row_count(self) -> int:
        return sum(b.row_count for b in self.blocks)

    @property
    def col_count(self) -> int:
        return self.blocks[0].col_count

    def matrix(self) -> list[list]:
        out = []
        for b in self.blocks:
            out.extend(list(r) for r in b.rows)
        return out


def tangent_matrix(params: GaussianParams, d: int) -> TangentBlock:
    """Generator rows {s_{d-1} X_j}_j then {s_{d-2} X_j X_k}_{j<=k}."""
    if d < 3:
        raise ValueError(f"tangent generators need d >= 3, got {d}")
    n = params.n
    s1 = moment_form(params, d - 1)
    s2 = moment_form(params, d - 2)
    rows = []
    for j in range(n):
        rows.append(multiply(s1, DenseForm.variable(n, j, params.ring)).coeffs)
    for j, k in quadratic_pairs(n):
        e = [0] * n
        e[j] += 1
        e[k] += 1
        rows.append(multiply(s2, DenseForm.monomial(n, e, ring=params.ring)).coeffs)
    return TangentBlock(params, d, tuple(rows))


def secant_matrix(samples: list[GaussianParams], d: int) -> SecantMatrix:
    """Stack the tangent blocks of the given parameter points."""
    if not samples:
        raise ValueError("need at least one parameter point")
    return SecantMatrix(tuple(tangent_matrix(p, d) for p in samples))


def differential(
    params: GaussianParams, d: int, direction: tuple[DenseForm, DenseForm]
) -> DenseForm:
    """Directional derivative of the degree-d moment map at a point.

    For a direction (a, b) with a linear and b quadratic this is
    d * s_{d-1}(l,q) * a  +  d(d-1)/2 * s_{d-2}(l,q) * b, the normalization
    constants coming from shifting the exponential series by one and two
    degrees respectively.
    """
    a, b = direction
    if a.d != 1 or b.d != 2:
        raise ValueError("direction must be a (degree-1, degree-2) pair")
    if a.n != params.n or b.n != params.n:
        raise ValueError("direction variable count mismatch")
    if a.ring != params.ring or b.ring != params.ring:
        raise ValueError("direction ring mismatch")
    term1 = multiply(moment_form(params, d - 1), a).scale(d)
    term2 = multiply(moment_form(params, d - 2), b).scale(d * (d - 1) // 2)
    return term1 + term2


def sample_params(
    seed: int, n: int, m: int, box: int = 10, ring: Ring = QQ
) -> list[GaussianParams]:
    """Deterministic integer-entry parameter points, uniform in [-box, box].

    The same seed yields a bit-identical sample regardless of how callers
    parallelize downstream work; draws happen serially here, mean first and
    Sigma upper triangle second for each component in turn.
    """
    if box < 1:
        raise ValueError(f"sampling box must be >= 1, got {box}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(m):
        mean = [int(v) for v in rng.integers(-box, box + 1, n)]
        quad = [int(v) for v in rng.integers(-box, box + 1, n * (n + 1) // 2)]
        out.append(GaussianParams.make(mean, quad, ring=ring))
    return out


def sample_split_params(
    seed: int, n1: int, n2: int, m: int, box: int = 10, ring: Ring = QQ
) -> list[GaussianParams]:
    """Variable-splitting sample: q_i generic in the first n1 variables only,
    l_i generic in the last n2 variables only, embedded in n1+n2 variables."""
    if box < 1:
        raise ValueError(f"sampling box must be >= 1, got {box}")
    n = n1 + n2
    rng = np.random.default_rng(seed)
    pair_index = {pair: idx for idx, pair in enumerate(quadratic_pairs(n))}
    out = []
    for _ in range(m):
        mean = [0] * n
        for j, v in enumerate(rng.integers(-box, box + 1, n2)):
            mean[n1 + j] = int(v)
        quad = [0] * (n * (n + 1) // 2)
        for j in range(n1):
            for k in range(j, n1):
                quad[pair_index[(j, k)]] = int(rng.integers(-box, box + 1))
        out.append(GaussianParams.make(mean, quad, ring=ring))
    return out
