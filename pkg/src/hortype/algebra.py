"""Exact sparse polynomial arithmetic and the weighted symbol ring.

Polynomials are stored as dictionaries mapping exponent tuples to exact
rational coefficients (int or Fraction; integer-valued Fractions are
demoted to int so the common integer paths stay fast).  The zero
polynomial has an empty term dict; canonical form never stores a zero
coefficient.

On top of the plain ring, `WeightedSymbol` models elements of

    Q[x_1..x_n, xi_1..xi_n, lam] / (lam^2 - 1 - |xi|^2),

i.e. symbols that may carry integer powers of the elliptic weight
lam = (1 + |xi|^2)^(1/2).  Because d(lam)/d(xi_j) = xi_j / lam, closing
the ring under differentiation requires negative powers of lam; a symbol
is therefore stored as

    lam^(-wexp) * (even + odd * lam),      wexp >= 0,

with `even` and `odd` plain polynomials in the 2n variables x, xi.  The
form is canonical: wexp is reduced whenever the even numerator part is
divisible by 1 + |xi|^2.  Since lam > 0 everywhere, the denominator never
affects zero tests or vanishing at a point.

Evaluation at a rational point (x0, xi0) lands in Q + Q*sqrt(1+|xi0|^2),
represented exactly by `AlgebraicValue`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

Coeff = Union[int, Fraction]
Exponent = tuple  # tuple[int, ...], one entry per variable


class DimensionMismatch(ValueError):
    """Operands live over different variable counts."""


def _norm_coeff(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _grlex_key(exps: Exponent):
    return (sum(exps), exps)


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    Immutable after construction; suitable as a dict key.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponent, Coeff]] = None):
        self.nvars = nvars
        clean: dict = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise DimensionMismatch(
                        f"exponent tuple {exps} has length {len(exps)}, expected {nvars}")
                c = _norm_coeff(c)
                if c != 0:
                    clean[tuple(exps)] = c
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value: Coeff) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], coeff: Coeff = 1) -> "Polynomial":
        return cls(nvars, {tuple(exps): Fraction(coeff)})

    # -- queries -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Coeff]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def min_degree_on(self, indices: Sequence[int]) -> int:
        """Min over terms of the summed exponents on `indices`; inf if zero."""
        if not self._terms:
            return math.inf  # type: ignore[return-value]
        return min(sum(e[i] for i in indices) for e in self._terms)

    def degree_in(self, index: int) -> int:
        if not self._terms:
            return -1
        return max(e[index] for e in self._terms)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lexicographic order (deterministic)."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading_coeff(self) -> Coeff:
        if not self._terms:
            return 0
        return self._terms[max(self._terms, key=_grlex_key)]

    # -- ring operations ----------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"polynomials over {self.nvars} and {other.nvars} variables")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return Polynomial(self.nvars, out)

    def scale(self, c: Coeff) -> "Polynomial":
        c = _norm_coeff(Fraction(c)) if not isinstance(c, int) else c
        if c == 0:
            return Polynomial(self.nvars)
        return Polynomial(self.nvars, {e: c * v for e, v in self._terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def partial(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable `index`."""
        out: dict = {}
        for e, c in self._terms.items():
            k = e[index]
            if k:
                ne = e[:index] + (k - 1,) + e[index + 1:]
                out[ne] = out.get(ne, 0) + c * k
        return Polynomial(self.nvars, out)

    def evaluate(self, point: Sequence[Coeff]) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionMismatch(
                f"point of length {len(point)} for {self.nvars} variables")
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            v = Fraction(c)
            for p, k in zip(pt, e):
                if k:
                    v *= p ** k
            total += v
        return total

    def shift(self, offsets: Sequence[Coeff]) -> "Polynomial":
        """Substitute variable i -> variable i + offsets[i]."""
        if len(offsets) != self.nvars:
            raise DimensionMismatch("offset length mismatch")
        result = Polynomial(self.nvars)
        for e, c in self._terms.items():
            term = Polynomial.const(self.nvars, c)
            for i, k in enumerate(e):
                if k:
                    base = Polynomial(self.nvars, {
                        tuple(1 if j == i else 0 for j in range(self.nvars)): 1,
                        (0,) * self.nvars: Fraction(offsets[i]),
                    })
                    term = term * base ** k
            result = result + term
        return result

    def div_exact(self, divisor: "Polynomial") -> Optional["Polynomial"]:
        """Quotient self/divisor if it divides exactly, else None.

        Single-divisor multivariate division in graded-lex order; exact
        membership test since a single generator is its own Gröbner basis.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = max(divisor._terms, key=_grlex_key)
        lead_c = divisor._terms[lead]
        rem = dict(self._terms)
        quo: dict = {}
        while rem:
            e = max(rem, key=_grlex_key)
            if any(a < b for a, b in zip(e, lead)):
                return None
            q_exp = tuple(a - b for a, b in zip(e, lead))
            q_c = _norm_coeff(Fraction(rem[e]) / Fraction(lead_c))
            quo[q_exp] = q_c
            for de, dc in divisor._terms.items():
                ne = tuple(a + b for a, b in zip(q_exp, de))
                s = rem.get(ne, 0) - q_c * dc
                if s:
                    rem[ne] = s
                elif ne in rem:
                    del rem[ne]
        return Polynomial(self.nvars, quo)

    def content(self) -> Fraction:
        """Positive gcd of all coefficients; 0 for the zero polynomial."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            f = Fraction(c)
            num = math.gcd(num, f.numerator)
            den = den * f.denominator // math.gcd(den, f.denominator)
        return Fraction(num, den)

    # -- identity ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- rendering -----------------------------------------------------

    def to_str(self, names: Sequence[str]) -> str:
        """Deterministic rendering, descending graded-lex term order."""
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            c = Fraction(c)
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_str([f"v{i}" for i in range(self.nvars)])

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self._terms!r})"


@lru_cache(maxsize=None)
def weight_square(n: int) -> Polynomial:
    """The polynomial 1 + |xi|^2 over the 2n symbol variables (x, xi)."""
    terms = {(0,) * (2 * n): 1}
    for j in range(n):
        e = [0] * (2 * n)
        e[n + j] = 2
        terms[tuple(e)] = 1
    return Polynomial(2 * n, terms)


def symbol_var_names(n: int) -> list:
    """Canonical variable names x1..xn, xi1..xin for the symbol space."""
    return [f"x{i + 1}" for i in range(n)] + [f"xi{i + 1}" for i in range(n)]


class _Degenerate:
    """Marker for the zero symbol, which is homogeneous of every degree."""

    def __repr__(self) -> str:
        return "degenerate-homogeneous"


#: homogeneity_degree of the zero symbol (homogeneous of every degree;
#: by convention treated as degree 1 where a degree is needed).
DEGENERATE = _Degenerate()


class AlgebraicValue:
    """Exact value a + b*sqrt(R) with rational a, b and R = 1 + |xi0|^2."""

    __slots__ = ("rational", "radical", "radicand")

    def __init__(self, rational: Coeff, radical: Coeff, radicand: Coeff):
        self.rational = Fraction(rational)
        self.radical = Fraction(radical)
        self.radicand = Fraction(radicand)
        if self.radicand < 0:
            raise ValueError("radicand must be nonnegative")

    def _check(self, other: "AlgebraicValue") -> None:
        if self.radicand != other.radicand:
            raise ValueError("algebraic values over different radicands")

    def __add__(self, other: "AlgebraicValue") -> "AlgebraicValue":
        self._check(other)
        return AlgebraicValue(self.rational + other.rational,
                              self.radical + other.radical, self.radicand)

    def __neg__(self) -> "AlgebraicValue":
        return AlgebraicValue(-self.rational, -self.radical, self.radicand)

    def __sub__(self, other: "AlgebraicValue") -> "AlgebraicValue":
        return self + (-other)

    def __mul__(self, other: "AlgebraicValue") -> "AlgebraicValue":
        self._check(other)
        return AlgebraicValue(
            self.rational * other.rational + self.radical * other.radical * self.radicand,
            self.rational * other.radical + self.radical * other.rational,
            self.radicand)

    def is_zero(self) -> bool:
        # a + b*sqrt(R) = 0 exactly: both parts zero, or a = -b*sqrt(R)
        # with sqrt(R) rational (detected via a^2 = b^2 R, opposite signs).
        if self.rational == 0 and self.radical == 0:
            return True
        if self.rational * self.radical >= 0:
            return False
        return self.rational ** 2 == self.radical ** 2 * self.radicand

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlgebraicValue):
            self._check(other)
            return (self - other).is_zero()
        if isinstance(other, (int, Fraction)):
            return (self - AlgebraicValue(other, 0, self.radicand)).is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.rational, self.radical, self.radicand))

    def __float__(self) -> float:
        return float(self.rational) + float(self.radical) * math.sqrt(float(self.radicand))

    def __repr__(self) -> str:
        return f"AlgebraicValue({self.rational}, {self.radical}, sqrt({self.radicand}))"

    def __str__(self) -> str:
        if self.radical == 0:
            return str(self.rational)
        if self.rational == 0:
            return f"{self.radical}*sqrt({self.radicand})"
        return f"{self.rational} + {self.radical}*sqrt({self.radicand})"


class WeightedSymbol:
    """Element lam^(-wexp) * (even + odd*lam) of the weighted symbol ring.

    `n` is the spatial dimension; `even` and `odd` live over the 2n
    variables x1..xn, xi1..xin.  Canonical form: wexp >= 0 is minimal
    (reduced through divisibility of the even part by 1 + |xi|^2), and a
    zero numerator forces wexp = 0.
    """

    __slots__ = ("n", "even", "odd", "wexp", "_hash")

    def __init__(self, n: int, even: Polynomial, odd: Polynomial, wexp: int = 0):
        if even.nvars != 2 * n or odd.nvars != 2 * n:
            raise DimensionMismatch("symbol parts must live over 2n variables")
        if wexp < 0:
            raise ValueError("wexp must be nonnegative")
        if even.is_zero() and odd.is_zero():
            wexp = 0
        else:
            q = weight_square(n)
            # lam^-e (A + B lam) = lam^-(e-1) (B + (A/Q) lam) when Q | A.
            while wexp > 0:
                quo = even.div_exact(q)
                if quo is None:
                    break
                even, odd = odd, quo
                wexp -= 1
        self.n = n
        self.even = even
        self.odd = odd
        self.wexp = wexp
        self._hash = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "WeightedSymbol":
        z = Polynomial.zero(2 * n)
        return cls(n, z, z)

    @classmethod
    def from_polynomial(cls, n: int, p: Polynomial) -> "WeightedSymbol":
        return cls(n, p, Polynomial.zero(2 * n))

    @classmethod
    def lam(cls, n: int) -> "WeightedSymbol":
        """The weight (1 + |xi|^2)^(1/2) itself."""
        return cls(n, Polynomial.zero(2 * n), Polynomial.const(2 * n, 1))

    @classmethod
    def const(cls, n: int, value: Coeff) -> "WeightedSymbol":
        return cls.from_polynomial(n, Polynomial.const(2 * n, value))

    @classmethod
    def x_var(cls, n: int, i: int) -> "WeightedSymbol":
        return cls.from_polynomial(n, Polynomial.variable(2 * n, i))

    @classmethod
    def xi_var(cls, n: int, i: int) -> "WeightedSymbol":
        return cls.from_polynomial(n, Polynomial.variable(2 * n, n + i))

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        return self.wexp == 0 and self.odd.is_zero()

    def lambda_weight(self) -> int:
        """Net power of lam carried by the symbol: 1, 0, or -wexp offsets.

        The even part sits at lam^-wexp, the odd part at lam^(1-wexp);
        returns the weight of the nonzero part when unambiguous, else 0.
        """
        if self.odd.is_zero():
            return -self.wexp
        if self.even.is_zero():
            return 1 - self.wexp
        return 0

    def _check(self, other: "WeightedSymbol") -> None:
        if self.n != other.n:
            raise DimensionMismatch("symbols over different dimensions")

    # -- arithmetic --------------------------------------------------------

    def _raise_wexp(self, target: int) -> tuple:
        """Numerator (even, odd) rewritten at denominator lam^target."""
        delta = target - self.wexp
        if delta == 0:
            return self.even, self.odd
        q = weight_square(self.n)
        even, odd = self.even, self.odd
        # multiply numerator by lam^delta: lam (A + B lam) = QB + A lam
        for _ in range(delta):
            even, odd = q * odd, even
        return even, odd

    def __add__(self, other: "WeightedSymbol") -> "WeightedSymbol":
        self._check(other)
        w = max(self.wexp, other.wexp)
        e1, o1 = self._raise_wexp(w)
        e2, o2 = other._raise_wexp(w)
        return WeightedSymbol(self.n, e1 + e2, o1 + o2, w)

    def __neg__(self) -> "WeightedSymbol":
        return WeightedSymbol(self.n, -self.even, -self.odd, self.wexp)

    def __sub__(self, other: "WeightedSymbol") -> "WeightedSymbol":
        return self + (-other)

    def __mul__(self, other: "WeightedSymbol") -> "WeightedSymbol":
        self._check(other)
        q = weight_square(self.n)
        even = self.even * other.even + q * (self.odd * other.odd)
        odd = self.even * other.odd + self.odd * other.even
        return WeightedSymbol(self.n, even, odd, self.wexp + other.wexp)

    def scale(self, c: Coeff) -> "WeightedSymbol":
        return WeightedSymbol(self.n, self.even.scale(c), self.odd.scale(c), self.wexp)

    def partial(self, index: int) -> "WeightedSymbol":
        """dS/dv for v the `index`-th symbol variable (x for index < n).

        xi-derivatives use d(lam)/d(xi_j) = xi_j/lam, which raises the
        denominator exponent by two before renormalization:

            d/dxi_j [lam^-e (A + B lam)]
              = lam^-(e+2) [(Q A' - e xi_j A) + (Q B' + (1-e) xi_j B) lam]

        with Q = 1 + |xi|^2 and ' the plain polynomial derivative.
        """
        n = self.n
        if not 0 <= index < 2 * n:
            raise ValueError(f"variable index {index} out of range")
        if index < n:
            return WeightedSymbol(n, self.even.partial(index),
                                  self.odd.partial(index), self.wexp)
        q = weight_square(n)
        xi = Polynomial.variable(2 * n, index)
        e = self.wexp
        even = q * self.even.partial(index) - xi.scale(e) * self.even
        odd = q * self.odd.partial(index) + xi.scale(1 - e) * self.odd
        return WeightedSymbol(n, even, odd, e + 2)

    def poisson(self, other: "WeightedSymbol") -> "WeightedSymbol":
        """Poisson bracket {self, other} = sum_j (d_xi_j self d_x_j other
        - d_x_j self d_xi_j other)."""
        self._check(other)
        n = self.n
        acc = WeightedSymbol.zero(n)
        for j in range(n):
            acc = acc + self.partial(n + j) * other.partial(j)
            acc = acc - self.partial(j) * other.partial(n + j)
        return acc

    def evaluate(self, point: Sequence[Coeff]) -> AlgebraicValue:
        """Exact value at a rational cotangent point (x0, xi0)."""
        n = self.n
        if len(point) != 2 * n:
            raise DimensionMismatch(f"point of length {len(point)}, expected {2 * n}")
        radicand = Fraction(1) + sum(Fraction(point[n + j]) ** 2 for j in range(n))
        a = self.even.evaluate(point)
        b = self.odd.evaluate(point)
        # divide by lam0^wexp: even powers are rational, an odd leftover
        # power divides once more via 1/sqrt(R) = sqrt(R)/R.
        half, rem = divmod(self.wexp, 2)
        a /= radicand ** half
        b /= radicand ** half
        if rem:
            a, b = b, a / radicand
        return AlgebraicValue(a, b, radicand)

    def homogeneity_degree(self):
        """Common degree under deg(xi_j) = deg(lam) = 1, deg(x_j) = 0.

        Returns the integer degree for a homogeneous symbol, None when
        terms carry mixed degrees, and DEGENERATE for the zero symbol.
        """
        if self.is_zero():
            return DEGENERATE
        n = self.n
        xi_idx = range(n, 2 * n)
        degrees = {sum(e[i] for i in xi_idx) - self.wexp for e in self.even.terms}
        degrees |= {sum(e[i] for i in xi_idx) + 1 - self.wexp for e in self.odd.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedSymbol):
            return NotImplemented
        return (self.n == other.n and self.wexp == other.wexp
                and self.even == other.even and self.odd == other.odd)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.wexp, self.even, self.odd))
        return self._hash

    def canonical_key(self, up_to_scalar: bool = False):
        """Hashable canonical form; with `up_to_scalar`, coefficients are
        divided by the signed content so proportional symbols collide."""
        even, odd = self.even, self.odd
        if up_to_scalar and not self.is_zero():
            num, den = 0, 1
            for part in (even, odd):
                for c in part.terms.values():
                    f = Fraction(c)
                    num = math.gcd(num, f.numerator)
                    den = den * f.denominator // math.gcd(den, f.denominator)
            scalar = Fraction(num, den)
            lead = even.leading_coeff() if not even.is_zero() else odd.leading_coeff()
            if lead < 0:
                scalar = -scalar
            inv = Fraction(1) / scalar
            even = even.scale(inv)
            odd = odd.scale(inv)
        return (self.wexp, frozenset(even.terms.items()), frozenset(odd.terms.items()))

    # -- rendering -----------------------------------------------------------

    def to_str(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = symbol_var_names(self.n)
        if self.is_zero():
            return "0"
        even_s = self.even.to_str(names)
        odd_s = self.odd.to_str(names)
        if self.odd.is_zero():
            body = even_s
        elif self.even.is_zero():
            body = f"({odd_s})*lam"
        else:
            body = f"{even_s} + ({odd_s})*lam"
        if self.wexp == 0:
            return body
        denom = "lam" if self.wexp == 1 else f"lam^{self.wexp}"
        return f"({body})/{denom}"

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"WeightedSymbol({self.to_str()})"


def poisson_bracket(q1: WeightedSymbol, q2: WeightedSymbol) -> WeightedSymbol:
    """Module-level alias for the Poisson bracket of two symbols."""
    return q1.poisson(q2)
