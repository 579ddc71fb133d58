"""Sums-of-squares systems of real vector fields.

A system X_1..X_m of first-order fields X_j = sum_l a~_lj(x) D_l carries
two notions of type at a cotangent point: the Lie type, computed from
iterated Poisson brackets of the field symbols X_j(x, xi) = sum a~_lj xi_l
over the alphabet 1..m, and the type of the associated second-order
operator sum_j X_j^2 + X_0 + c through its symbol family.  The comparison
facts checked here: the Lie type never exceeds the operator type, and the
two agree whenever the Lie type is at most two.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import DimensionMismatch, Polynomial, WeightedSymbol
from .brackets import TypeResult, type_at
from .operators import SecondOrderOperator, embed_x_poly, symbol_family


@dataclass(frozen=True)
class VectorFieldSystem:
    """First-order fields with polynomial coefficients, optional drift X_0
    (ignored by type computations) and zero-order term c."""

    n: int
    fields: tuple  # m entries, each an n-tuple of Polynomial in x
    drift: Optional[tuple] = None  # n-tuple of Polynomial, or None
    c: Optional[Polynomial] = None

    def __post_init__(self):
        for coeffs in self.fields:
            if len(coeffs) != self.n:
                raise ValueError("each field needs one coefficient per variable")
            for p in coeffs:
                if p.nvars != self.n:
                    raise DimensionMismatch("field coefficients must be polynomials in x")
        if self.drift is not None and len(self.drift) != self.n:
            raise ValueError("drift needs one coefficient per variable")
        if self.c is not None and self.c.nvars != self.n:
            raise DimensionMismatch("zero-order term must be a polynomial in x")

    @property
    def m(self) -> int:
        return len(self.fields)


def field_symbols(sys: VectorFieldSystem) -> tuple:
    """Symbols X_j(x, xi) = sum_l a~_lj(x) xi_l, linear in xi."""
    n = sys.n
    out = []
    for coeffs in sys.fields:
        total = Polynomial.zero(2 * n)
        for l, p in enumerate(coeffs):
            if p.is_zero():
                continue
            total = total + embed_x_poly(p, n) * Polynomial.variable(2 * n, n + l)
        out.append(WeightedSymbol.from_polynomial(n, total))
    return tuple(out)


def lie_type_at(sys: VectorFieldSystem, point: Sequence, cap: int) -> TypeResult:
    """Minimal bracket-word length over the field alphabet with a symbol
    not vanishing at the point; drift and zero-order play no role."""
    return type_at(field_symbols(sys), point, cap)


def to_hor_operator(sys: VectorFieldSystem) -> SecondOrderOperator:
    """Expand sum_j X_j^2 + X_0 + c into coefficient form.

    The second-order matrix is a_l1,l = sum_j a~_l1,j a~_l,j (symmetric and
    positive semidefinite by construction); the first-order part collects
    the drift plus the derivative cross terms of the squares.
    """
    n = sys.n
    a = [[Polynomial.zero(n) for _ in range(n)] for _ in range(n)]
    b = [Polynomial.zero(n) for _ in range(n)]
    for coeffs in sys.fields:
        for l1 in range(n):
            if coeffs[l1].is_zero():
                continue
            for l in range(n):
                if coeffs[l].is_zero():
                    continue
                a[l1][l] = a[l1][l] + coeffs[l1] * coeffs[l]
                b[l] = b[l] - coeffs[l1] * coeffs[l].partial(l1)
    if sys.drift is not None:
        for l in range(n):
            b[l] = b[l] + sys.drift[l]
    c = sys.c if sys.c is not None else Polynomial.zero(n)
    return SecondOrderOperator(n, tuple(tuple(row) for row in a), tuple(b), c)


@dataclass(frozen=True)
class TypeComparison:
    """Both types at a point plus the two comparison facts."""

    tau_x: TypeResult
    tau_p: TypeResult
    conclusive: bool
    dp1_holds: Optional[bool]  # tau_x <= tau_p
    dp2_holds: Optional[bool]  # tau_x <= 2 implies tau_x == tau_p

    def as_dict(self) -> dict:
        return {
            "tau_x": self.tau_x.as_dict(),
            "tau_p": self.tau_p.as_dict(),
            "conclusive": self.conclusive,
            "dp1_holds": self.dp1_holds,
            "dp2_holds": self.dp2_holds,
        }


def compare_types(sys: VectorFieldSystem, point: Sequence, cap: int) -> TypeComparison:
    """Compute both types within `cap` and test the comparison facts;
    inconclusive when either search exceeds the cap."""
    tau_x = lie_type_at(sys, point, cap)
    tau_p = type_at(symbol_family(to_hor_operator(sys)), point, cap)
    if tau_x.exceeded or tau_p.exceeded:
        return TypeComparison(tau_x, tau_p, False, None, None)
    dp1 = tau_x.type <= tau_p.type
    dp2 = (tau_x.type > 2) or (tau_x.type == tau_p.type)
    return TypeComparison(tau_x, tau_p, True, dp1, dp2)
