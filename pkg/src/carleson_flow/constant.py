"""The optimal Carleson constant of a collection.

Starting from the whole collection, repeatedly set lam to the weight/measure
ratio of the current subcollection and shrink the subcollection to the largest
minimizer of f_lam over it; stop once that minimum is zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .model import Collection, union_measure
from .rational import as_rational
from .sfm import minimize_f


@dataclass(frozen=True)
class CarlesonResult:
    lam: Fraction
    witness: frozenset[str]
    iterations: int
    trace: tuple[tuple[Fraction, int], ...] = field(default=())


@dataclass(frozen=True)
class Certificate:
    """A subcollection whose weight/measure ratio exceeds a claimed constant."""

    subcollection: frozenset[str]
    ratio: Fraction
    claimed: Fraction


class CarlesonViolation(Exception):
    def __init__(self, certificate: Certificate):
        self.certificate = certificate
        super().__init__(
            f"{len(certificate.subcollection)} sets have ratio {certificate.ratio} > {certificate.claimed}"
        )


def ratio(c: Collection, subcollection: Iterable[str]) -> Fraction:
    A = list(subcollection)
    if not A:
        raise ValueError("ratio of an empty subcollection")
    return sum((c.sets[q].weight for q in c.indices(A)), Fraction(0)) / union_measure(c, A)


def carleson_constant(c: Collection, backend: str = "mincut") -> CarlesonResult:
    if not c.sets:
        raise ValueError("empty collection")
    current = frozenset(c.ids)
    trace = []
    while True:
        lam = ratio(c, current)
        res = minimize_f(c, lam, [q for q in c.ids if q in current], backend=backend)
        # the current subcollection has f = 0, so the largest minimizer contains it when the minimum is 0
        nxt = res.minimizer
        trace.append((lam, len(nxt)))
        if res.value == 0:
            return CarlesonResult(lam, nxt, len(trace), tuple(trace))
        current = nxt


def check_carleson(c: Collection, lam, backend: str = "mincut") -> Certificate | None:
    """None when every subcollection has ratio <= lam, else a violating one."""
    lam = as_rational(lam)
    res = minimize_f(c, lam, backend=backend)
    if res.value == 0:
        return None
    return Certificate(res.minimizer, ratio(c, res.minimizer), lam)
