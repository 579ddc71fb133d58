"""Multivariate Faà di Bruno combinatorics and exact integer checks.

High derivatives of a composition h = f(g_1, .., g_q) expand as

    d^beta h = sum_{1 <= |gamma| <= |beta|} f^(gamma)(g)
               sum_{p(beta, gamma)} beta! prod_j (d^(l_j) g)^(k_j)
                                           / (k_j! (l_j!)^|k_j|),

where p(beta, gamma) ranges over tuples of multi-index pairs (k_j, l_j)
whose active slots carry strictly increasing derivative multi-indices l_j
(ordered by total degree, then first coordinate, then the remaining
coordinates) with k-multiplicities summing to gamma and |k_j|-weighted
l_j summing to beta.  Everything here is exact rational arithmetic over
the sparse polynomial ring, so the expansion can be compared verbatim
against direct differentiation of the composed polynomial.

The module also houses the truncated-exponent helper (k - M)^+ and the
exhaustive big-integer verification of k^j <= max(M,3)^j N^((k-M)^+).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

from .algebra import Polynomial

MultiIndex = Tuple[int, ...]


def mindex_factorial(mu: MultiIndex) -> int:
    out = 1
    for k in mu:
        out *= math.factorial(k)
    return out


def mindex_order(mu: MultiIndex) -> int:
    return sum(mu)


def prec_less(mu: MultiIndex, nu: MultiIndex) -> bool:
    """Strict order on multi-indices: total degree, then first coordinate,
    then the remaining coordinates in turn."""
    if len(mu) != len(nu):
        raise ValueError("multi-indices of different lengths")
    if sum(mu) != sum(nu):
        return sum(mu) < sum(nu)
    return mu < nu


def _mindices_upto(bound: MultiIndex) -> List[MultiIndex]:
    """All nonzero multi-indices componentwise <= bound, sorted by prec."""
    axes = [range(b + 1) for b in bound]
    out: List[MultiIndex] = []

    def rec(prefix: tuple, rest):
        if not rest:
            if any(prefix):
                out.append(prefix)
            return
        for v in rest[0]:
            rec(prefix + (v,), rest[1:])

    rec((), axes)
    out.sort(key=lambda mu: (sum(mu), mu))
    return out


def _compositions(total: MultiIndex, parts: int) -> Iterator[tuple]:
    """Ordered splittings of a multi-index into `parts` nonzero summands."""
    if parts == 0:
        if not any(total):
            yield ()
        return
    for head in _mindices_upto(total):
        rest = tuple(t - h for t, h in zip(total, head))
        for tail in _compositions(rest, parts - 1):
            yield (head,) + tail


@dataclass(frozen=True)
class FaaTerm:
    """One active-slot assignment of the partition set p(beta, gamma).

    `slots` lists the active pairs (k_j, l_j) only; the leading padding
    pairs (0, 0) of the indexed form are implicit.  Invariants: each
    |k_j| > 0, the l_j strictly increase in the prec order, sum k_j =
    gamma and sum |k_j| l_j = beta.
    """

    gamma: MultiIndex
    slots: tuple  # ((k_1, l_1), .., (k_s, l_s))

    def weight(self, beta: MultiIndex) -> Fraction:
        denom = 1
        for k, l in self.slots:
            denom *= mindex_factorial(k) * mindex_factorial(l) ** mindex_order(k)
        return Fraction(mindex_factorial(beta), denom)


def faa_di_bruno_partitions(beta: MultiIndex, gamma: MultiIndex) -> List[FaaTerm]:
    """Exhaustive, duplicate-free enumeration of p(beta, gamma).

    Empty when |gamma| > |beta| or |gamma| = 0; at most |beta| slots can
    be active since every active slot contributes at least one to |beta|.
    """
    beta = tuple(beta)
    gamma = tuple(gamma)
    if mindex_order(gamma) == 0 or mindex_order(gamma) > mindex_order(beta):
        return []
    q = len(gamma)
    ells = _mindices_upto(beta)  # candidates, already prec-sorted
    terms: List[FaaTerm] = []

    def rec(start: int, beta_left: MultiIndex, gamma_left: MultiIndex, acc: tuple):
        if not any(beta_left):
            if not any(gamma_left):
                terms.append(FaaTerm(gamma, acc))
            return
        if not any(gamma_left):
            return
        for idx in range(start, len(ells)):
            l = ells[idx]
            if any(a > b for a, b in zip(l, beta_left)):
                continue
            # multiplicity k with |k| >= 1, sum k <= gamma_left and
            # |k| * l componentwise <= beta_left
            max_total = min(b // w for b, w in zip(beta_left, l) if w) if any(l) else 0
            for k in _mindices_upto(gamma_left):
                kk = mindex_order(k)
                if kk > max_total:
                    continue
                nb = tuple(b - kk * w for b, w in zip(beta_left, l))
                if any(v < 0 for v in nb):
                    continue
                ng = tuple(g - kv for g, kv in zip(gamma_left, k))
                rec(idx + 1, nb, ng, acc + ((k, l),))

    rec(0, beta, gamma, ())
    return terms


def compose(f: Polynomial, g: Sequence[Polynomial]) -> Polynomial:
    """Substitute g_i for the i-th variable of f; result over g's variables."""
    if len(g) != f.nvars:
        raise ValueError(f"need {f.nvars} inner polynomials, got {len(g)}")
    if not g:
        raise ValueError("empty composition")
    nvars = g[0].nvars
    result = Polynomial.zero(nvars)
    for exps, c in f.terms.items():
        term = Polynomial.const(nvars, c)
        for gi, k in zip(g, exps):
            if k:
                term = term * gi ** k
        result = result + term
    return result


def composite_derivative(f: Polynomial, g: Sequence[Polynomial],
                         beta: MultiIndex) -> Polynomial:
    """d^beta of f(g_1, .., g_q) assembled from the partition sum.

    Agrees exactly with differentiating the composed polynomial directly;
    beta = 0 reduces to plain composition.
    """
    beta = tuple(beta)
    if not g:
        raise ValueError("empty composition")
    nvars = g[0].nvars
    if len(beta) != nvars:
        raise ValueError("beta must index the inner variables")
    if mindex_order(beta) == 0:
        return compose(f, g)

    # cache of d^l g_i
    dcache: dict = {}

    def dg(i: int, l: MultiIndex) -> Polynomial:
        key = (i, l)
        if key not in dcache:
            p = g[i]
            for axis, times in enumerate(l):
                for _ in range(times):
                    p = p.partial(axis)
            dcache[key] = p
        return dcache[key]

    total = Polynomial.zero(nvars)
    for gamma in _mindices_upto((mindex_order(beta),) * f.nvars):
        if mindex_order(gamma) > mindex_order(beta):
            continue
        fg = f
        for axis, times in enumerate(gamma):
            for _ in range(times):
                fg = fg.partial(axis)
        if fg.is_zero():
            continue
        outer = compose(fg, g)
        inner = Polynomial.zero(nvars)
        for term in faa_di_bruno_partitions(beta, gamma):
            prod = Polynomial.const(nvars, term.weight(beta))
            for k, l in term.slots:
                for i, kv in enumerate(k):
                    if kv:
                        prod = prod * dg(i, l) ** kv
            inner = inner + prod
        if not inner.is_zero():
            total = total + outer * inner
    return total


def direct_derivative(p: Polynomial, beta: MultiIndex) -> Polynomial:
    """Plain iterated partial derivative d^beta p."""
    for axis, times in enumerate(beta):
        for _ in range(times):
            p = p.partial(axis)
    return p


def nplus(k: int, M: int) -> int:
    """The truncated exponent (k - M)^+ = max(k - M, 0)."""
    return max(k - M, 0)


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of the exhaustive k^j <= B^j N^((k-M)^+) verification."""

    N: int
    M: int
    B: int
    checked: int
    failures: tuple
    passed: bool


def lemma_l1_check(N: int, M: int) -> LemmaReport:
    """Verify k^j <= B^j N^((k-M)^+), B = max(M, 3), for all 1 <= j <= k <= N.

    Exact big-integer arithmetic; products are built incrementally so the
    full triangle of (j, k) pairs stays cheap.  The equality frontier at
    k = M (where the truncation kicks in) is covered like any other pair.
    """
    if N < 1 or M < 0:
        raise ValueError("need N >= 1 and M >= 0")
    B = max(M, 3)
    checked = 0
    failures = []
    for k in range(1, N + 1):
        npow = N ** nplus(k, M)
        lhs = 1
        rhs = npow
        for j in range(1, k + 1):
            lhs *= k
            rhs *= B
            checked += 1
            if lhs > rhs:
                failures.append((j, k))
    return LemmaReport(N, M, B, checked, tuple(failures), not failures)
