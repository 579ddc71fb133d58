"""Second-order operators with nonnegative characteristic form.

An operator

    P = sum a_lj(x) D_l D_j + sum i b_l(x) D_l + c(x)

is stored through its exact polynomial coefficients: the symmetric matrix
`a`, the drift vector `b` and the zero-order term `c`, all polynomials in
x alone.  From it we derive the principal symbol p0 = sum a_lj xi_l xi_j,
the first/second order derived operators P^k and P_k, and the associated
family of 2n order-one symbols

    p^k = d(p0)/d(xi_k)              (k = 1..n)
    p^(n+k) = lam^-1 d(p0)/d(x_k)    (k = 1..n),

the elliptic weight lam = (1+|xi|^2)^(1/2) normalizing the x-derivative
members to homogeneity degree one, so that every iterated Poisson bracket
of family members again has degree one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    DEGENERATE,
    DimensionMismatch,
    Polynomial,
    WeightedSymbol,
)


def embed_x_poly(p: Polynomial, n: int) -> Polynomial:
    """Lift a polynomial in x1..xn into the 2n-variable symbol space."""
    if p.nvars != n:
        raise DimensionMismatch(f"coefficient over {p.nvars} variables, dim is {n}")
    return Polynomial(2 * n, {e + (0,) * n: c for e, c in p.terms.items()})


@dataclass(frozen=True)
class SecondOrderOperator:
    """Coefficient data (a, b, c) of a second-order operator on R^n."""

    n: int
    a: tuple  # n x n matrix of Polynomial in x
    b: tuple  # n-vector of Polynomial in x
    c: Polynomial

    def __post_init__(self):
        n = self.n
        if len(self.a) != n or any(len(row) != n for row in self.a):
            raise ValueError("coefficient matrix must be n x n")
        if len(self.b) != n:
            raise ValueError("drift vector must have length n")
        for row in self.a:
            for p in row:
                if p.nvars != n:
                    raise DimensionMismatch("matrix entries must be polynomials in x")
        for p in self.b:
            if p.nvars != n:
                raise DimensionMismatch("drift entries must be polynomials in x")
        if self.c.nvars != n:
            raise DimensionMismatch("zero-order term must be a polynomial in x")
        for l in range(n):
            for j in range(l + 1, n):
                if self.a[l][j] != self.a[j][l]:
                    raise ValueError(f"coefficient matrix not symmetric at ({l},{j})")

    @classmethod
    def from_matrix(cls, a: Sequence[Sequence[Polynomial]],
                    b: Sequence[Polynomial] | None = None,
                    c: Polynomial | None = None) -> "SecondOrderOperator":
        n = len(a)
        if b is None:
            b = tuple(Polynomial.zero(n) for _ in range(n))
        if c is None:
            c = Polynomial.zero(n)
        return cls(n, tuple(tuple(row) for row in a), tuple(b), c)

    @classmethod
    def laplacian(cls, n: int) -> "SecondOrderOperator":
        one = Polynomial.const(n, 1)
        zero = Polynomial.zero(n)
        a = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
        return cls(n, a, tuple(zero for _ in range(n)), zero)


@dataclass(frozen=True)
class SymbolFamily:
    """The ordered family p^1..p^2n attached to an operator."""

    n: int
    members: tuple  # 2n WeightedSymbol

    def __post_init__(self):
        if len(self.members) != 2 * self.n:
            raise ValueError("family must have 2n members")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __getitem__(self, k):
        return self.members[k]


def principal_symbol(op: SecondOrderOperator) -> WeightedSymbol:
    """p0(x, xi) = sum_lj a_lj(x) xi_l xi_j, a plain polynomial symbol."""
    n = op.n
    total = Polynomial.zero(2 * n)
    for l in range(n):
        for j in range(n):
            if op.a[l][j].is_zero():
                continue
            coeff = embed_x_poly(op.a[l][j], n)
            mono = Polynomial.variable(2 * n, n + l) * Polynomial.variable(2 * n, n + j)
            total = total + coeff * mono
    return WeightedSymbol.from_polynomial(n, total)


def symbol_family(op: SecondOrderOperator) -> SymbolFamily:
    """Members 1..n are xi-derivatives of p0; members n+1..2n are the
    x-derivatives carrying one inverse weight factor lam^-1."""
    n = op.n
    p0 = principal_symbol(op)
    members = []
    for k in range(n):
        members.append(p0.partial(n + k))
    for k in range(n):
        dx = p0.partial(k)
        members.append(WeightedSymbol(n, dx.even, dx.odd, dx.wexp + 1))
    return SymbolFamily(n, tuple(members))


@dataclass(frozen=True)
class DerivedOperators:
    """Coefficients of P^k (first order) and P_k (second order)."""

    k: int
    first_order: tuple   # n coefficients of D_l in P^k = 2 sum_l a_lk D_l
    second_order: tuple  # n x n coefficients of D_l D_j in P_k


def derived_operators(op: SecondOrderOperator, k: int) -> DerivedOperators:
    """P^k = 2 sum_l a_lk(x) D_l and P_k = sum_lj (d_k a_lj) D_l D_j (1-based k)."""
    n = op.n
    if not 1 <= k <= n:
        raise ValueError(f"index {k} out of range 1..{n}")
    i = k - 1
    first = tuple(op.a[l][i].scale(2) for l in range(n))
    second = tuple(tuple(op.a[l][j].partial(i) for j in range(n)) for l in range(n))
    return DerivedOperators(k, first, second)


def is_characteristic(op: SecondOrderOperator, point: Sequence) -> bool:
    """Whether p0 vanishes at the cotangent point (x0, xi0), xi0 != 0."""
    n = op.n
    if len(point) != 2 * n:
        raise DimensionMismatch(f"point of length {len(point)}, expected {2 * n}")
    if all(Fraction(point[n + j]) == 0 for j in range(n)):
        raise ValueError("zero covector rejected")
    return principal_symbol(op).evaluate(point).is_zero()


@dataclass(frozen=True)
class PsdReport:
    """Sampled positive-semidefiniteness evidence; a pass is not a proof."""

    passed: bool
    failures: tuple = field(default_factory=tuple)  # (x, v, value) triples


def psd_sample_check(op: SecondOrderOperator,
                     sample_points: Sequence[Sequence],
                     probes: Sequence[Sequence]) -> PsdReport:
    """Evaluate <A(x)v, v> exactly on the given samples and probes."""
    n = op.n
    failures = []
    for x in sample_points:
        aval = [[op.a[l][j].evaluate(x) for j in range(n)] for l in range(n)]
        for v in probes:
            vv = [Fraction(t) for t in v]
            quad = sum(aval[l][j] * vv[l] * vv[j] for l in range(n) for j in range(n))
            if quad < 0:
                failures.append((tuple(Fraction(t) for t in x), tuple(vv), quad))
    return PsdReport(passed=not failures, failures=tuple(failures))
