"""Iterated Poisson brackets and type computation at a cotangent point.

A bracket word I = (i_1, .., i_r) over the alphabet 1..K of a symbol
family indexes the left-nested iterated bracket

    p^I = {{..{{p^(i_1), p^(i_2)}, p^(i_3)}, ..}, p^(i_r)},

and the type at a point (x0, xi0), xi0 != 0, is the least word length
whose bracket does not vanish there.  `type_at` explores words in
breadth-first order with two sound reductions:

  * per-level deduplication keyed on the canonical symbol form up to a
    rational scalar (brackets are bilinear, so proportional symbols have
    proportional descendants and identical vanishing);
  * vanishing-order pruning: a bracket lowers the x-vanishing order at
    x0 by at most one, so a symbol vanishing to order greater than the
    remaining depth cannot produce a within-cap hit.

Neither reduction changes the reported type or the lexicographically
least witness; `type_at_bruteforce` re-derives the same answer from the
full K^r enumeration and serves as the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import DimensionMismatch, WeightedSymbol

BracketWord = tuple  # tuple[int, ...], 1-based letters


def _members(family) -> tuple:
    """Accept a SymbolFamily or any sequence of WeightedSymbol."""
    members = tuple(getattr(family, "members", family))
    if not members:
        raise ValueError("empty symbol family")
    return members


def _check_point(n: int, point: Sequence) -> tuple:
    if len(point) != 2 * n:
        raise DimensionMismatch(f"point of length {len(point)}, expected {2 * n}")
    pt = tuple(Fraction(t) for t in point)
    if all(t == 0 for t in pt[n:]):
        raise ValueError("zero covector rejected")
    return pt


@dataclass(frozen=True)
class TypeResult:
    """Either a finite type with its witnessing word, or a cap marker.

    `type` is the minimal word length with a nonvanishing bracket at the
    point (and equals len(witness)), or None when every word up to `cap`
    vanishes there.
    """

    type: Optional[int]
    witness: Optional[BracketWord]
    witness_symbol: Optional[WeightedSymbol]
    cap: int

    @property
    def exceeded(self) -> bool:
        return self.type is None

    def as_dict(self) -> dict:
        if self.exceeded:
            return {"type": None, "cap": self.cap}
        return {
            "type": self.type,
            "witness": list(self.witness),
            "symbol": self.witness_symbol.to_str(),
        }


def iterated_bracket(family, word: Sequence[int]) -> WeightedSymbol:
    """The left-nested iterated bracket indexed by `word` (1-based letters)."""
    members = _members(family)
    if not word:
        raise ValueError("bracket word must be nonempty")
    for letter in word:
        if not 1 <= letter <= len(members):
            raise ValueError(f"letter {letter} outside alphabet 1..{len(members)}")
    acc = members[word[0] - 1]
    for letter in word[1:]:
        acc = acc.poisson(members[letter - 1])
    return acc


def _vanishing_order(sym: WeightedSymbol, x0: tuple):
    """Order of vanishing in x at x0 (min shifted x-degree); inf if zero."""
    if sym.is_zero():
        return math.inf
    n = sym.n
    x_idx = range(n)
    shifted_offsets = tuple(x0) + (Fraction(0),) * n
    best = math.inf
    for part in (sym.even, sym.odd):
        if part.is_zero():
            continue
        p = part.shift(shifted_offsets) if any(x0) else part
        best = min(best, p.min_degree_on(x_idx))
    return best


def type_at(family, point: Sequence, cap: int,
            dedup: bool = True, prune: bool = True) -> TypeResult:
    """Breadth-first type search; returns the lexicographically least
    witness of minimal length, or an exceeds-cap result."""
    members = _members(family)
    n = members[0].n
    pt = _check_point(n, point)
    if cap < 1:
        raise ValueError("cap must be at least 1")
    x0 = pt[:n]

    frontier = []
    seen = set()
    for i, sym in enumerate(members):
        word = (i + 1,)
        if sym.is_zero():
            continue
        if not sym.evaluate(pt).is_zero():
            return TypeResult(1, word, sym, cap)
        if dedup:
            key = sym.canonical_key(up_to_scalar=True)
            if key in seen:
                continue
            seen.add(key)
        if prune and _vanishing_order(sym, x0) > cap - 1:
            continue
        frontier.append((word, sym))

    for level in range(2, cap + 1):
        new_frontier = []
        seen = set()
        for word, sym in frontier:
            for i, member in enumerate(members):
                bracket = sym.poisson(member)
                if bracket.is_zero():
                    continue
                new_word = word + (i + 1,)
                if not bracket.evaluate(pt).is_zero():
                    return TypeResult(level, new_word, bracket, cap)
                if dedup:
                    key = bracket.canonical_key(up_to_scalar=True)
                    if key in seen:
                        continue
                    seen.add(key)
                if prune and _vanishing_order(bracket, x0) > cap - level:
                    continue
                new_frontier.append((new_word, bracket))
        frontier = new_frontier
        if not frontier:
            break
    return TypeResult(None, None, None, cap)


def type_at_bruteforce(family, point: Sequence, cap: int) -> TypeResult:
    """Oracle: exhaustive K^r enumeration, no dedup, no pruning."""
    members = _members(family)
    n = members[0].n
    pt = _check_point(n, point)
    if cap < 1:
        raise ValueError("cap must be at least 1")

    level_syms = []
    for i, sym in enumerate(members):
        if not sym.evaluate(pt).is_zero():
            return TypeResult(1, (i + 1,), sym, cap)
        level_syms.append(((i + 1,), sym))

    for level in range(2, cap + 1):
        next_syms = []
        for word, sym in level_syms:
            for i, member in enumerate(members):
                bracket = sym.poisson(member)
                new_word = word + (i + 1,)
                if not bracket.evaluate(pt).is_zero():
                    return TypeResult(level, new_word, bracket, cap)
                next_syms.append((new_word, bracket))
        level_syms = next_syms
    return TypeResult(None, None, None, cap)


@dataclass(frozen=True)
class DirectionReport:
    """Per-direction types at a base point; a sampled lower bound for the
    sup over all covectors (never an exact sup)."""

    x0: tuple
    results: tuple          # (direction, TypeResult) pairs
    max_type: Optional[int]  # max over finite results, None if none finite
    exceeded: tuple          # directions whose search hit the cap
    cap: int

    def as_dict(self) -> dict:
        return {
            "x0": [str(t) for t in self.x0],
            "kind": "lower bound",
            "max_type": self.max_type,
            "cap": self.cap,
            "directions": [
                {"direction": [str(c) for c in d], **res.as_dict()}
                for d, res in self.results
            ],
            "exceeded": [[str(c) for c in d] for d in self.exceeded],
        }


def type_over_directions(family, x0: Sequence, directions: Sequence[Sequence],
                         cap: int) -> DirectionReport:
    """Max of type_at over the sampled covector directions."""
    members = _members(family)
    n = members[0].n
    if not directions:
        raise ValueError("direction list must be nonempty")
    base = tuple(Fraction(t) for t in x0)
    if len(base) != n:
        raise DimensionMismatch(f"base point of length {len(base)}, expected {n}")
    results = []
    exceeded = []
    max_type = None
    for d in directions:
        dd = tuple(Fraction(t) for t in d)
        res = type_at(members, base + dd, cap)
        results.append((dd, res))
        if res.exceeded:
            exceeded.append(dd)
        elif max_type is None or res.type > max_type:
            max_type = res.type
    return DirectionReport(base, tuple(results), max_type, tuple(exceeded), cap)
