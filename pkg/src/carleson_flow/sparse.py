"""Sparse witnesses read off a maximum flow.

For a collection satisfying the lam-Carleson condition, a maximum flow in the
network built at lam saturates every set's demand weight/lam.  The flow from
atom B to set Q then gives both the density of phi_Q on B and the amount of B
handed to Q when carving out disjoint subsets E_Q.
"""

from __future__ import annotations

import bisect
import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .constant import CarlesonViolation, Certificate, carleson_constant, ratio
from .flow import Flow, FlowNetwork, build_network, max_flow, min_cut
from .model import Box, Collection
from .rational import as_rational, fmt


@dataclass(frozen=True)
class PhiWitness:
    """phi_Q = sum over atoms B of coefficients[Q][B] * indicator(B); zero entries omitted."""

    lam: Fraction
    coefficients: dict[str, dict[int, Fraction]]


@dataclass(frozen=True)
class Selection:
    """Measure of each atom handed to each set; per set, (atom id, amount) in atom order."""

    lam: Fraction
    allocations: dict[str, list[tuple[int, Fraction]]]


@dataclass(frozen=True)
class BoxRealization:
    lam: Fraction
    boxes: dict[str, list[Box]]


Witness = Union[PhiWitness, Selection, BoxRealization]


def _saturating_flow(c: Collection, lam) -> tuple[Fraction, FlowNetwork, Flow]:
    lam = carleson_constant(c).lam if lam is None else as_rational(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    net = build_network(c, lam)
    flow = max_flow(net)
    demand = sum((s.weight for s in c.sets), Fraction(0)) / lam
    if flow.value < demand:
        cut = min_cut(net, flow)
        bad = frozenset(net.set_ids[k] for k in range(len(net.set_ids)) if net.set_node(k) in cut.T)
        raise CarlesonViolation(Certificate(bad, ratio(c, bad), lam))
    return lam, net, flow


def _atom_set_flows(net: FlowNetwork, flow: Flow):
    """Yield (atom id, set id, amount) for every atom->set edge with positive flow."""
    m = len(net.atom_ids)
    for e in range(m, net.n_edges - len(net.set_ids)):
        u = flow.units[e]
        if u:
            yield net.atom_ids[net.tail[e] - 1], net.set_ids[net.head[e] - 1 - m], Fraction(u, flow.scale)


def construct_phi(c: Collection, lam=None) -> PhiWitness:
    """Functions phi_Q with values in [0, 1], summing to at most 1, and integrating
    to weight(Q)/lam.  ``lam`` defaults to the optimal constant; raises
    :class:`CarlesonViolation` if the collection is not lam-Carleson."""
    lam, net, flow = _saturating_flow(c, lam)
    measure = {a.id: a.measure for a in c.atoms}
    coeffs: dict[str, dict[int, Fraction]] = {q: {} for q in c.ids}
    for b, q, amount in _atom_set_flows(net, flow):
        if measure[b]:
            coeffs[q][b] = amount / measure[b]
    return PhiWitness(lam, coeffs)


def construct_selection(c: Collection, lam=None) -> Selection:
    """Allocation of atom measure to sets; realizable as disjoint subsets E_Q."""
    lam, net, flow = _saturating_flow(c, lam)
    alloc: dict[str, list[tuple[int, Fraction]]] = {q: [] for q in c.ids}
    for b, q, amount in _atom_set_flows(net, flow):
        alloc[q].append((b, amount))
    return Selection(lam, alloc)


def realize_boxes(c: Collection, sel: Selection) -> BoxRealization:
    """Turn an allocation into explicit disjoint boxes.

    Each atom is covered by runs of grid cells along the last axis.  The runs
    are consumed in lexicographic order and the sets of the atom take their
    amounts in collection order, cutting a run into slabs along the first axis
    where an amount runs out inside it.
    """
    geo = c.geometry
    if geo is None:
        raise ValueError("collection has no box geometry (only box instances can be realized)")
    per_atom: dict[int, list[tuple[int, Fraction]]] = defaultdict(list)
    for q, items in sel.allocations.items():
        k = c.index(q)
        for b, amount in items:
            if amount < 0:
                raise ValueError(f"negative amount for set {q!r} on atom {b}")
            if amount:
                per_atom[b].append((k, amount))
    runs = geo.runs_by_atom(len(c.atoms))
    out: dict[str, list[Box]] = {q: [] for q in c.ids}
    for b, items in per_atom.items():
        pos = c.atom_position.get(b)
        if pos is None:
            raise ValueError(f"selection refers to unknown atom {b}")
        if sum(a for _, a in items) > c.atoms[pos].measure:
            raise ValueError(f"selection exceeds the measure of atom {b}")
        items.sort()
        run_iter = iter(runs[pos])
        box = None
        x = None
        for k, need in items:
            q = c.sets[k].id
            while need > 0:
                if box is None:
                    box = next(run_iter)
                    x = box.low[0]
                    cross = box.volume / (box.high[0] - box.low[0])
                left = (box.high[0] - x) * cross
                if need >= left:
                    out[q].append(Box((x,) + box.low[1:], box.high))
                    need -= left
                    box = None
                else:
                    x2 = x + need / cross
                    out[q].append(Box((x,) + box.low[1:], (x2,) + box.high[1:]))
                    x = x2
                    need = Fraction(0)
    return BoxRealization(sel.lam, out)


def verify_witness(c: Collection, w: Witness, lam=None) -> list[str]:
    """Re-check a witness from scratch; returns the violated invariants (empty if ok)."""
    if not isinstance(w, (PhiWitness, Selection, BoxRealization)):
        raise TypeError(f"not a witness: {type(w).__name__}")
    lam = w.lam if lam is None else as_rational(lam)
    if isinstance(w, PhiWitness):
        return _verify_phi(c, w, lam)
    if isinstance(w, Selection):
        return _verify_selection(c, w, lam)
    return _verify_boxes(c, w, lam)


def _atom_lookup(c: Collection):
    return {a.id: (a, set(a.signature)) for a in c.atoms}


def _verify_phi(c: Collection, w: PhiWitness, lam: Fraction) -> list[str]:
    problems = []
    atoms = _atom_lookup(c)
    load: dict[int, Fraction] = defaultdict(Fraction)
    known = set(c.ids)
    for q in w.coefficients:
        if q not in known:
            problems.append(f"unknown-set: {q!r}")
    for s in c.sets:
        integral = Fraction(0)
        for b, coeff in w.coefficients.get(s.id, {}).items():
            if b not in atoms:
                problems.append(f"unknown-atom: set {s.id!r} uses atom {b}")
                continue
            atom, sig = atoms[b]
            if not 0 <= coeff <= 1:
                problems.append(f"range: phi of {s.id!r} is {fmt(coeff)} on atom {b}")
            if coeff and s.id not in sig:
                problems.append(f"support: phi of {s.id!r} is nonzero on atom {b} outside the set")
            load[b] += coeff
            integral += coeff * atom.measure
        if integral != s.weight / lam:
            problems.append(f"integral: set {s.id!r} integrates to {fmt(integral)}, expected {fmt(s.weight / lam)}")
    for b, total in load.items():
        if total > 1:
            problems.append(f"per-atom-sum: phi sums to {fmt(total)} > 1 on atom {b}")
    return problems


def _verify_selection(c: Collection, w: Selection, lam: Fraction) -> list[str]:
    problems = []
    atoms = _atom_lookup(c)
    used: dict[int, Fraction] = defaultdict(Fraction)
    known = set(c.ids)
    for q in w.allocations:
        if q not in known:
            problems.append(f"unknown-set: {q!r}")
    for s in c.sets:
        total = Fraction(0)
        for b, amount in w.allocations.get(s.id, []):
            if b not in atoms:
                problems.append(f"unknown-atom: set {s.id!r} uses atom {b}")
                continue
            if amount < 0:
                problems.append(f"range: negative amount {fmt(amount)} for {s.id!r} on atom {b}")
            if amount and s.id not in atoms[b][1]:
                problems.append(f"support: {s.id!r} takes measure from atom {b} outside the set")
            used[b] += amount
            total += amount
        if total != s.weight / lam:
            problems.append(f"total: set {s.id!r} receives {fmt(total)}, expected {fmt(s.weight / lam)}")
    for b, total in used.items():
        if b in atoms and total > atoms[b][0].measure:
            problems.append(f"feasibility: atom {b} hands out {fmt(total)} > its measure {fmt(atoms[b][0].measure)}")
    return problems


def _verify_boxes(c: Collection, w: BoxRealization, lam: Fraction) -> list[str]:
    problems = []
    if c.geometry is None:
        return ["containment: collection has no box geometry"]
    known = set(c.ids)
    for q in w.boxes:
        if q not in known:
            problems.append(f"unknown-set: {q!r}")
    tagged = []
    for s, shape in zip(c.sets, c.geometry.boxes):
        vol = Fraction(0)
        for bx in w.boxes.get(s.id, []):
            if bx.dim != shape.dim:
                problems.append(f"dimension: a box of {s.id!r} has dimension {bx.dim}")
                continue
            if not shape.contains(bx):
                problems.append(f"containment: box {_box_str(bx)} of {s.id!r} leaves the set")
            vol += bx.volume
            tagged.append((bx, s.id))
        if vol != s.weight / lam:
            problems.append(f"volume: set {s.id!r} gets volume {fmt(vol)}, expected {fmt(s.weight / lam)}")
    clash = first_overlap([bx for bx, _ in tagged])
    if clash is not None:
        i, j = clash
        problems.append(
            f"disjointness: {_box_str(tagged[i][0])} of {tagged[i][1]!r} meets {_box_str(tagged[j][0])} of {tagged[j][1]!r}"
        )
    return problems


def _box_str(b: Box) -> str:
    return "[" + ", ".join(f"{fmt(a)}..{fmt(h)}" for a, h in zip(b.low, b.high)) + ")"


def first_overlap(boxes: list[Box]) -> tuple[int, int] | None:
    """Indices of some pair of intersecting boxes, or None.

    Sweeps along the first axis.  In two dimensions the active boxes are kept
    sorted by their second-axis interval, which must be pairwise disjoint, so a
    new box only needs checking against its neighbours.  In higher dimensions
    active boxes are bucketed on a coarse grid over the other axes and a new box
    is checked against those sharing a bucket.
    """
    if not boxes:
        return None
    d = boxes[0].dim
    events = []
    for i, b in enumerate(boxes):
        events.append((b.low[0], 1, i))
        events.append((b.high[0], 0, i))
    events.sort()
    if d == 1:
        last = None
        for x, kind, i in events:
            if kind == 1:
                if last is not None:
                    return (last, i)
                last = i
            elif last == i:
                last = None
        return None
    if d == 2:
        lows: list[tuple[Fraction, int]] = []
        for x, kind, i in events:
            b = boxes[i]
            key = (b.low[1], i)
            if kind == 0:
                del lows[bisect.bisect_left(lows, key)]
                continue
            k = bisect.bisect_left(lows, key)
            if k > 0 and boxes[lows[k - 1][1]].high[1] > b.low[1]:
                return (lows[k - 1][1], i)
            if k < len(lows) and lows[k][0] < b.high[1]:
                return (lows[k][1], i)
            lows.insert(k, key)
        return None
    # active boxes are bucketed on a coarse grid over the remaining axes
    k = max(1, round(len(boxes) ** (1 / d)))
    edges = []
    for ax in range(1, d):
        lows = sorted(b.low[ax] for b in boxes)
        edges.append(sorted({lows[len(lows) * j // k] for j in range(1, k)}))

    def buckets(b: Box):
        spans = [range(bisect.bisect_right(e, b.low[ax + 1]), bisect.bisect_left(e, b.high[ax + 1]) + 1)
                 for ax, e in enumerate(edges)]
        return list(itertools.product(*spans))

    grid: dict[tuple[int, ...], set[int]] = defaultdict(set)
    where: dict[int, list[tuple[int, ...]]] = {}
    for x, kind, i in events:
        if kind == 0:
            for key in where.pop(i):
                grid[key].discard(i)
            continue
        keys = buckets(boxes[i])
        seen: set[int] = set()
        for key in keys:
            for j in grid[key]:
                if j not in seen:
                    seen.add(j)
                    if boxes[i].intersects(boxes[j]):
                        return (j, i)
        for key in keys:
            grid[key].add(i)
        where[i] = keys
    return None


def render_svg(c: Collection, real: BoxRealization, size: int = 640) -> str:
    """SVG picture of a planar realization: set outlines dashed, each E_Q filled
    with its own hatch pattern and colour, areas in tooltips."""
    if c.geometry is None or c.geometry.boxes[0].dim != 2:
        raise ValueError("SVG rendering needs a two-dimensional box instance")
    shapes = c.geometry.boxes
    x0 = min(b.low[0] for b in shapes)
    x1 = max(b.high[0] for b in shapes)
    y0 = min(b.low[1] for b in shapes)
    y1 = max(b.high[1] for b in shapes)
    pad = 10
    s = Fraction(size - 2 * pad) / max(x1 - x0, y1 - y0)
    height = float((y1 - y0) * s) + 2 * pad
    width = float((x1 - x0) * s) + 2 * pad

    def X(v):
        return float((v - x0) * s) + pad

    def Y(v):
        return height - (float((v - y0) * s) + pad)

    n = len(c.sets)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}">', "<defs>"]
    for k in range(n):
        hue = round(360 * k / n)
        angle = round(180 * k / n)
        out.append(
            f'<pattern id="p{k}" patternUnits="userSpaceOnUse" width="6" height="6" patternTransform="rotate({angle})">'
            f'<rect width="6" height="6" fill="hsl({hue},70%,80%)"/>'
            f'<line x1="0" y1="0" x2="0" y2="6" stroke="hsl({hue},70%,35%)" stroke-width="2"/></pattern>'
        )
    out.append("</defs>")
    for k, q in enumerate(c.ids):
        parts = real.boxes.get(q, [])
        area = sum((b.volume for b in parts), Fraction(0))
        out.append(f'<g fill="url(#p{k})"><title>E_{q}: area {fmt(area)}</title>')
        for b in parts:
            out.append(
                f'<rect x="{X(b.low[0]):.3f}" y="{Y(b.high[1]):.3f}" '
                f'width="{X(b.high[0]) - X(b.low[0]):.3f}" height="{Y(b.low[1]) - Y(b.high[1]):.3f}"/>'
            )
        out.append("</g>")
    for q, b in zip(c.ids, shapes):
        out.append(
            f'<rect x="{X(b.low[0]):.3f}" y="{Y(b.high[1]):.3f}" width="{X(b.high[0]) - X(b.low[0]):.3f}" '
            f'height="{Y(b.low[1]) - Y(b.high[1]):.3f}" fill="none" stroke="black" stroke-dasharray="4 2">'
            f"<title>{q}: area {fmt(b.volume)}</title></rect>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
