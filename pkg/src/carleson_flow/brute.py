"""Exhaustive oracles over all subcollections (small instances only)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .model import Collection
from .sfm import BRUTE_LIMIT, MinimizationResult

LAMBDA_LIMIT = 20


def _tables(c: Collection, dom: list[int]):
    """Union measure and total weight of every subset of ``dom``, as integers
    over a common denominator, indexed by bitmask."""
    k = len(dom)
    bit = {q: 1 << i for i, q in enumerate(dom)}
    denom = math.lcm(*(a.measure.denominator for a in c.atoms), *(s.weight.denominator for s in c.sets))
    # inside[X] = measure of atoms whose domain-part is nonempty and within X
    inside = [0] * (1 << k)
    for atom, mem in zip(c.atoms, c.members):
        m = 0
        for q in mem:
            m |= bit.get(q, 0)
        if m:
            inside[m] += int(atom.measure * denom)
    for i in range(k):
        b = 1 << i
        for X in range(1 << k):
            if X & b:
                inside[X] += inside[X ^ b]
    full = (1 << k) - 1
    union = [inside[full] - inside[full ^ X] for X in range(1 << k)]
    wsum = [0] * (1 << k)
    for X in range(1, 1 << k):
        low = X & -X
        wsum[X] = wsum[X ^ low] + int(c.sets[dom[low.bit_length() - 1]].weight * denom)
    return union, wsum, denom


def _ids(c: Collection, dom: list[int], X: int) -> frozenset[str]:
    return frozenset(c.sets[q].id for i, q in enumerate(dom) if X >> i & 1)


def brute_lambda(c: Collection) -> tuple[Fraction, frozenset[str]]:
    """Largest weight-to-union-measure ratio over all nonempty subcollections.

    Ties go to the largest subcollection, then to the lexicographically first one
    (sets compared by their position in the collection).
    """
    n = len(c.sets)
    if n > LAMBDA_LIMIT:
        raise ValueError(f"brute force is limited to {LAMBDA_LIMIT} sets, got {n}")
    dom = list(range(n))
    union, wsum, _ = _tables(c, dom)
    best = None
    best_key = None
    for X in range(1, 1 << n):
        num, den = wsum[X], union[X]
        if best is None:
            better = True
        else:
            bn, bd = wsum[best], union[best]
            lhs, rhs = num * bd, bn * den
            if lhs != rhs:
                better = lhs > rhs
            else:
                key = (-bin(X).count("1"), [i for i in range(n) if X >> i & 1])
                better = key < best_key
        if better:
            best = X
            best_key = (-bin(X).count("1"), [i for i in range(n) if X >> i & 1])
    return Fraction(wsum[best], union[best]), _ids(c, dom, best)


def brute_min_f(c: Collection, lam, domain: Iterable[str] | None = None) -> MinimizationResult:
    """Minimum of lam * mu(union A) - weight(A) over subsets A of ``domain``, by
    enumeration; the maximal minimizer is the union of all minimizers, and it is
    checked to be a minimizer itself."""
    lam = Fraction(lam)
    dom_ids = list(c.ids) if domain is None else list(dict.fromkeys(domain))
    if len(dom_ids) > BRUTE_LIMIT:
        raise ValueError(f"brute force is limited to {BRUTE_LIMIT} sets, got {len(dom_ids)}")
    dom = [c.index(q) for q in dom_ids]
    union, wsum, denom = _tables(c, dom)
    p, q = lam.numerator, lam.denominator
    # q * denom * f(X) as an integer
    vals = [p * union[X] - q * wsum[X] for X in range(1 << len(dom))]
    low = min(vals)
    joined = 0
    for X, v in enumerate(vals):
        if v == low:
            joined |= X
    if vals[joined] != low:
        raise AssertionError("union of minimizers is not a minimizer; f is not submodular")
    return MinimizationResult(Fraction(low, q * denom), _ids(c, dom, joined))
