"""Source/atom/set/sink flow networks with exact max-flow and min-cut.

Node numbering: 0 is the source, then one node per atom, then one node per set,
and the sink last.  Edges come in construction order: source edges, then the
atom-to-set edges atom by atom, then the set-to-sink edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import Collection
from .rational import as_rational, fmt

INF = math.inf


@dataclass(frozen=True, eq=False)
class FlowNetwork:
    set_ids: tuple[str, ...]
    atom_ids: tuple[int, ...]
    tail: tuple[int, ...]
    head: tuple[int, ...]
    cap: tuple  # Fraction, or INF

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return len(self.atom_ids) + len(self.set_ids) + 1

    @property
    def n_nodes(self) -> int:
        return len(self.atom_ids) + len(self.set_ids) + 2

    @property
    def n_edges(self) -> int:
        return len(self.tail)

    def atom_node(self, k: int) -> int:
        return 1 + k

    def set_node(self, k: int) -> int:
        return 1 + len(self.atom_ids) + k

    def node_name(self, v: int) -> str:
        if v == self.source:
            return "s"
        if v == self.sink:
            return "t"
        if v <= len(self.atom_ids):
            return f"A:{self.atom_ids[v - 1]}"
        return f"Q:{self.set_ids[v - 1 - len(self.atom_ids)]}"

    def to_dot(self) -> str:
        lines = ["digraph G {", "  rankdir=LR;"]
        for u, v, c in zip(self.tail, self.head, self.cap):
            label = "inf" if c == INF else fmt(c)
            lines.append(f'  "{self.node_name(u)}" -> "{self.node_name(v)}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class Flow:
    """Edge flows stored as integers over a common denominator ``scale``."""

    network: FlowNetwork
    units: tuple[int, ...]
    scale: int

    def amount(self, e: int) -> Fraction:
        return Fraction(self.units[e], self.scale)

    @property
    def amounts(self) -> list[Fraction]:
        return [Fraction(u, self.scale) for u in self.units]

    @property
    def value(self) -> Fraction:
        s = self.network.source
        return Fraction(sum(u for e, u in enumerate(self.units) if self.network.tail[e] == s), self.scale)


@dataclass(frozen=True)
class Cut:
    S: frozenset[int]
    T: frozenset[int]
    capacity: Fraction | float


def network_from_parts(set_ids: Sequence[str], sink_caps: Sequence[Fraction],
                       atom_ids: Sequence[int], atom_caps: Sequence[Fraction],
                       atom_members: Sequence[Sequence[int]]) -> FlowNetwork:
    """Assemble a network from atom supplies, memberships (set positions) and set demands."""
    m, n = len(atom_ids), len(set_ids)
    t = m + n + 1
    tail: list[int] = []
    head: list[int] = []
    cap: list = []
    for k, c in enumerate(atom_caps):
        tail.append(0)
        head.append(1 + k)
        cap.append(c)
    for k, mem in enumerate(atom_members):
        u = 1 + k
        for q in mem:
            tail.append(u)
            head.append(1 + m + q)
            cap.append(INF)
    for q, c in enumerate(sink_caps):
        tail.append(1 + m + q)
        head.append(t)
        cap.append(c)
    return FlowNetwork(tuple(set_ids), tuple(atom_ids), tuple(tail), tuple(head), tuple(cap))


def build_network(c: Collection, lam, domain: Iterable[str] | None = None) -> FlowNetwork:
    """The network for ``c`` at constant ``lam``: source->atom with the atom's
    measure, atom->set with infinite capacity, set->sink with weight/lam.

    With ``domain`` given, only those sets get nodes, atom signatures are cut down
    to the domain and atoms left with nothing are omitted.
    """
    lam = as_rational(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if domain is None:
        keep = list(range(len(c.sets)))
    else:
        keep = sorted(c.indices(domain))
    pos = {q: k for k, q in enumerate(keep)}
    atom_ids, atom_caps, atom_members = [], [], []
    for atom, mem in zip(c.atoms, c.members):
        sub = [pos[q] for q in mem if q in pos]
        if sub:
            atom_ids.append(atom.id)
            atom_caps.append(atom.measure)
            atom_members.append(sub)
    set_ids = [c.sets[q].id for q in keep]
    sink_caps = [c.sets[q].weight / lam for q in keep]
    return network_from_parts(set_ids, sink_caps, atom_ids, atom_caps, atom_members)


def _integer_caps(net: FlowNetwork) -> tuple[list[int], int]:
    finite = [c for c in net.cap if c != INF]
    scale = math.lcm(*{c.denominator for c in finite}) if finite else 1
    caps = []
    for c in net.cap:
        caps.append(-1 if c == INF else c.numerator * (scale // c.denominator))
    s = net.source
    supply = 0
    for e, u in enumerate(net.tail):
        if u == s:
            if caps[e] < 0:
                raise ValueError("source edges must have finite capacity")
            supply += caps[e]
    # no edge can ever carry more than the total source supply
    big = supply + 1
    return [big if x < 0 else x for x in caps], scale


def _residual(net: FlowNetwork, caps: list[int]):
    N = net.n_nodes
    to = [0] * (2 * net.n_edges)
    res = [0] * (2 * net.n_edges)
    adj: list[list[int]] = [[] for _ in range(N)]
    for e, (u, v) in enumerate(zip(net.tail, net.head)):
        to[2 * e] = v
        to[2 * e + 1] = u
        res[2 * e] = caps[e]
        adj[u].append(2 * e)
        adj[v].append(2 * e + 1)
    return to, res, adj


def _reachable(N: int, s: int, to, res, adj) -> list[bool]:
    seen = [False] * N
    seen[s] = True
    stack = [s]
    while stack:
        u = stack.pop()
        for e in adj[u]:
            if res[e] > 0:
                v = to[e]
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
    return seen


def _greedy_paths(net: FlowNetwork, to, res, adj) -> None:
    """Saturate what can be routed along source->u->v->sink paths, in edge order."""
    s, t = net.source, net.sink
    into_sink: dict[int, list[int]] = {}
    for e in adj[t]:
        if e & 1:
            into_sink.setdefault(to[e], []).append(e ^ 1)
    for e1 in adj[s]:
        if e1 & 1:
            continue
        u = to[e1]
        for e2 in adj[u]:
            if res[e1] == 0:
                break
            if e2 & 1:
                continue
            for e3 in into_sink.get(to[e2], ()):
                if res[e3] == 0:
                    continue
                b = min(res[e1], res[e2], res[e3])
                for e in (e1, e2, e3):
                    res[e] -= b
                    res[e ^ 1] += b
                if res[e1] == 0:
                    break


def _dinic(N: int, s: int, t: int, to, res, adj) -> None:
    while True:
        level = [-1] * N
        level[s] = 0
        queue = [s]
        for u in queue:
            lv = level[u] + 1
            for e in adj[u]:
                if res[e] > 0:
                    v = to[e]
                    if level[v] < 0:
                        level[v] = lv
                        queue.append(v)
        if level[t] < 0:
            return
        it = [0] * N
        path: list[int] = []
        u = s
        while True:
            if u == t:
                b = min(res[e] for e in path)
                cut_at = -1
                for i, e in enumerate(path):
                    res[e] -= b
                    res[e ^ 1] += b
                    if cut_at < 0 and res[e] == 0:
                        cut_at = i
                del path[cut_at:]
                u = to[path[-1]] if path else s
                continue
            a = adj[u]
            i = it[u]
            lv = level[u] + 1
            while i < len(a):
                e = a[i]
                if res[e] > 0 and level[to[e]] == lv:
                    break
                i += 1
            it[u] = i
            if i < len(a):
                path.append(a[i])
                u = to[a[i]]
            else:
                if u == s:
                    break
                level[u] = -1
                e = path.pop()
                u = to[e ^ 1]
                it[u] += 1


def max_flow(net: FlowNetwork) -> Flow:
    """Maximum flow by Dinic's method on integer-rescaled capacities.

    A greedy pass over three-edge paths seeds the flow first; both steps follow
    node and edge order, so the result is deterministic.
    """
    caps, scale = _integer_caps(net)
    to, res, adj = _residual(net, caps)
    _greedy_paths(net, to, res, adj)
    _dinic(net.n_nodes, net.source, net.sink, to, res, adj)
    return Flow(net, tuple(res[2 * e + 1] for e in range(net.n_edges)), scale)


def min_cut(net: FlowNetwork, flow: Flow) -> Cut:
    """Source side = nodes reachable from the source in the residual graph of ``flow``."""
    caps, scale = _integer_caps(net)
    if flow.scale != scale:
        units = [Fraction(u * scale, flow.scale) for u in flow.units]
        if any(x.denominator != 1 for x in units):
            raise ValueError("flow amounts are not commensurate with the capacities")
        units = [int(x) for x in units]
    else:
        units = list(flow.units)
    to, res, adj = _residual(net, caps)
    for e, f in enumerate(units):
        if f < 0 or f > caps[e]:
            raise ValueError(f"flow violates the capacity of edge {e}")
        res[2 * e] -= f
        res[2 * e + 1] += f
    seen = _reachable(net.n_nodes, net.source, to, res, adj)
    if seen[net.sink]:
        raise ValueError("flow is not maximum: an augmenting path exists")
    S = frozenset(v for v in range(net.n_nodes) if seen[v])
    T = frozenset(v for v in range(net.n_nodes) if not seen[v])
    return Cut(S, T, cut_capacity(net, S))


def cut_capacity(net: FlowNetwork, S: Iterable[int]):
    S = set(S)
    total = Fraction(0)
    for u, v, c in zip(net.tail, net.head, net.cap):
        if u in S and v not in S:
            if c == INF:
                return INF
            total += c
    return total
