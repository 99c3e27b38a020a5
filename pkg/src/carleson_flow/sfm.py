"""Minimization of f(A) = lam * mu(union A) - sum of weights over A.

f is a scaled coverage function minus a modular one, so it is submodular and its
minimum over subsets of a domain is a single min-cut computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .flow import _dinic, _greedy_paths, _integer_caps, _residual, network_from_parts
from .model import Collection, union_measure
from .rational import as_rational

BRUTE_LIMIT = 25


@dataclass(frozen=True)
class MinimizationResult:
    value: Fraction
    minimizer: frozenset[str]


def evaluate_f(c: Collection, lam, subcollection: Iterable[str]) -> Fraction:
    lam = as_rational(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    A = list(subcollection)
    idx = c.indices(A)
    return lam * union_measure(c, A) - sum((c.sets[q].weight for q in idx), Fraction(0))


def minimize_f(c: Collection, lam, domain: Iterable[str] | None = None,
               backend: str = "mincut") -> MinimizationResult:
    """Minimum of f over subsets of ``domain`` (default: all sets) and the
    largest minimizer, i.e. the union of all minimizers."""
    lam = as_rational(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    dom = list(c.ids) if domain is None else list(dict.fromkeys(domain))
    if not dom:
        raise ValueError("domain must be nonempty")
    if backend == "brute":
        from .brute import brute_min_f

        return brute_min_f(c, lam, dom)
    if backend != "mincut":
        raise ValueError(f"unknown backend {backend!r}")
    return _minimize_mincut(c, lam, dom)


def _minimize_mincut(c: Collection, lam: Fraction, dom: list[str]) -> MinimizationResult:
    keep = sorted(c.indices(dom))
    pos = {q: k for k, q in enumerate(keep)}
    # atoms that look alike from inside the domain are merged; the cut values are unchanged
    merged: dict[tuple[int, ...], Fraction] = {}
    for atom, mem in zip(c.atoms, c.members):
        sub = tuple(pos[q] for q in mem if q in pos)
        if sub:
            merged[sub] = merged.get(sub, Fraction(0)) + atom.measure
    sigs = list(merged)
    weights = [c.sets[q].weight for q in keep]
    net = network_from_parts([c.sets[q].id for q in keep], [w / lam for w in weights],
                             list(range(len(sigs))), [merged[s] for s in sigs], sigs)
    caps, scale = _integer_caps(net)
    to, res, adj = _residual(net, caps)
    _greedy_paths(net, to, res, adj)
    _dinic(net.n_nodes, net.source, net.sink, to, res, adj)

    # residual reachability from the source; unreachable set nodes form the largest minimizer
    seen = [False] * net.n_nodes
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for e in adj[u]:
            if res[e] > 0 and not seen[to[e]]:
                seen[to[e]] = True
                stack.append(to[e])
    minimizer = frozenset(net.set_ids[k] for k in range(len(keep)) if not seen[net.set_node(k)])
    flow_value = Fraction(sum(res[2 * e + 1] for e in range(len(sigs))), scale)
    value = lam * flow_value - sum(weights, Fraction(0))
    direct = evaluate_f(c, lam, minimizer)
    if direct != value:
        raise AssertionError(f"min-cut value {value} disagrees with f(minimizer) = {direct}")
    return MinimizationResult(value, minimizer)
