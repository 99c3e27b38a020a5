"""Finite set collections represented through their atom partition.

A collection of measurable sets is stored as its list of set occurrences plus
the cells of the partition they induce: each atom records which sets contain it
(its signature) and its measure.  Everything downstream works from these data
alone.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .rational import as_rational


class InvalidCollection(ValueError):
    pass


@dataclass(frozen=True)
class SetOccurrence:
    id: str
    weight: Fraction
    label: str | None = None


@dataclass(frozen=True)
class Atom:
    """One partition cell.  ``signature`` lists the ids of the sets containing it,
    in collection order; it is a set semantically."""

    id: int
    signature: tuple[str, ...]
    measure: Fraction


@dataclass(frozen=True)
class DyadicCube:
    """The cube ``2**level * ([0, 1)**d + offset)``."""

    level: int
    offset: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(int(k) for k in self.offset))
        if not self.offset:
            raise InvalidCollection("dyadic cube needs dimension >= 1")

    @property
    def dim(self) -> int:
        return len(self.offset)

    @property
    def volume(self) -> Fraction:
        return Fraction(2) ** (self.level * self.dim)

    def contains(self, other: DyadicCube) -> bool:
        if other.level > self.level:
            return False
        shift = self.level - other.level
        return all((k >> shift) == kk for k, kk in zip(other.offset, self.offset))

    def to_box(self) -> Box:
        side = Fraction(2) ** self.level
        return Box(tuple(k * side for k in self.offset), tuple((k + 1) * side for k in self.offset))


@dataclass(frozen=True)
class Box:
    """Half-open axis-parallel box ``[low, high)``."""

    low: tuple[Fraction, ...]
    high: tuple[Fraction, ...]

    def __post_init__(self):
        low = tuple(as_rational(x) for x in self.low)
        high = tuple(as_rational(x) for x in self.high)
        if not low or len(low) != len(high):
            raise InvalidCollection(f"box corners have mismatched dimensions: {len(low)} vs {len(high)}")
        if any(a >= b for a, b in zip(low, high)):
            raise InvalidCollection(f"box has empty extent: low={low}, high={high}")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)

    @property
    def dim(self) -> int:
        return len(self.low)

    @property
    def volume(self) -> Fraction:
        return math.prod((b - a for a, b in zip(self.low, self.high)), start=Fraction(1))

    def contains(self, other: Box) -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.low, self.high, other.low, other.high))

    def intersects(self, other: Box) -> bool:
        return all(c < b and a < d for a, b, c, d in zip(self.low, self.high, other.low, other.high))


@dataclass(frozen=True, eq=False)
class BoxGeometry:
    """Grid data retained by :func:`build_from_boxes`.

    ``coords[i]`` are the sorted distinct endpoints along axis ``i``;
    ``cell_atom`` maps each grid cell (C order, i.e. lexicographic) to its atom
    index, or -1 when no box covers it.
    """

    boxes: tuple[Box, ...]
    coords: tuple[tuple[Fraction, ...], ...]
    cell_atom: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(c) - 1 for c in self.coords)

    def cell_box(self, flat_index: int) -> Box:
        idx = np.unravel_index(flat_index, self.shape)
        return Box(
            tuple(self.coords[i][int(j)] for i, j in enumerate(idx)),
            tuple(self.coords[i][int(j) + 1] for i, j in enumerate(idx)),
        )

    def cells_by_atom(self, n_atoms: int) -> list[np.ndarray]:
        """Flat cell indices of every atom, each in lexicographic order."""
        order = np.argsort(self.cell_atom, kind="stable")
        labels = self.cell_atom[order]
        bounds = np.searchsorted(labels, np.arange(n_atoms + 1))
        return [order[bounds[a]:bounds[a + 1]] for a in range(n_atoms)]

    def runs_by_atom(self, n_atoms: int) -> list[list[Box]]:
        """Every atom as boxes made of maximal runs of cells along the last axis,
        in lexicographic order."""
        row = self.shape[-1]
        top = self.coords[-1]
        out = []
        for cells in self.cells_by_atom(n_atoms):
            if not len(cells):
                out.append([])
                continue
            cut = np.nonzero((np.diff(cells) != 1) | (cells[1:] % row == 0))[0] + 1
            starts = np.concatenate(([0], cut))
            ends = np.concatenate((cut, [len(cells)])) - 1
            runs = []
            for a, b in zip(cells[starts].tolist(), cells[ends].tolist()):
                first = self.cell_box(a)
                runs.append(Box(first.low, first.high[:-1] + (top[b % row + 1],)))
            out.append(runs)
        return out


@dataclass(frozen=True)
class Collection:
    sets: tuple[SetOccurrence, ...]
    atoms: tuple[Atom, ...]
    geometry: BoxGeometry | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.sets:
            raise InvalidCollection("collection has no sets")
        index: dict[str, int] = {}
        for i, s in enumerate(self.sets):
            if s.id in index:
                raise InvalidCollection(f"duplicate set id {s.id!r}")
            if not s.weight > 0:
                raise InvalidCollection(f"set {s.id!r} has nonpositive weight {s.weight}")
            index[s.id] = i

        members = []
        seen_sigs = set()
        seen_atom_ids = set()
        measure = [Fraction(0)] * len(self.sets)
        covered = [False] * len(self.sets)
        for a in self.atoms:
            if a.id in seen_atom_ids:
                raise InvalidCollection(f"duplicate atom id {a.id!r}")
            seen_atom_ids.add(a.id)
            if not a.signature:
                raise InvalidCollection(f"atom {a.id!r} has an empty signature")
            if a.measure < 0:
                raise InvalidCollection(f"atom {a.id!r} has negative measure {a.measure}")
            try:
                m = tuple(sorted(index[q] for q in a.signature))
            except KeyError as exc:
                raise InvalidCollection(f"atom {a.id!r} refers to unknown set id {exc.args[0]!r}") from None
            if len(set(m)) != len(m):
                raise InvalidCollection(f"atom {a.id!r} lists a set twice")
            if m in seen_sigs:
                raise InvalidCollection(f"atom {a.id!r} repeats the signature of another atom")
            seen_sigs.add(m)
            members.append(m)
            for q in m:
                measure[q] += a.measure
                covered[q] = True
        for i, s in enumerate(self.sets):
            if not covered[i]:
                raise InvalidCollection(f"set {s.id!r} is covered by no atom")
            if not measure[i] > 0:
                raise InvalidCollection(f"set {s.id!r} has zero measure")

        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_members", tuple(members))
        object.__setattr__(self, "_set_measure", tuple(measure))

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.sets)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(s.weight for s in self.sets)

    @property
    def members(self) -> tuple[tuple[int, ...], ...]:
        """Per atom, the sorted indices of the sets containing it."""
        return self._members

    def index(self, set_id: str) -> int:
        try:
            return self._index[set_id]
        except KeyError:
            raise KeyError(f"unknown set id {set_id!r}") from None

    def indices(self, ids: Iterable[str]) -> set[int]:
        return {self.index(q) for q in ids}

    def measure(self, set_id: str) -> Fraction:
        """mu(Q), derived from the atoms."""
        return self._set_measure[self.index(set_id)]

    @property
    def set_measures(self) -> tuple[Fraction, ...]:
        return self._set_measure

    @cached_property
    def atoms_of(self) -> tuple[tuple[int, ...], ...]:
        """Per set, the indices of the atoms it contains."""
        out: list[list[int]] = [[] for _ in self.sets]
        for b, m in enumerate(self._members):
            for q in m:
                out[q].append(b)
        return tuple(tuple(x) for x in out)

    @cached_property
    def atom_position(self) -> dict[int, int]:
        return {a.id: b for b, a in enumerate(self.atoms)}


def _make_sets(ids, weights, measures) -> list[SetOccurrence]:
    out = []
    for q, w, mu in zip(ids, weights, measures):
        out.append(SetOccurrence(str(q), mu if w is None else as_rational(w)))
    return out


def build_from_atoms(sets: Sequence, atoms: Sequence) -> Collection:
    """Validate a directly given partition.

    ``sets`` holds ``(id, weight)`` or ``(id, weight, label)`` entries; a weight of
    ``None`` means "use the set's measure".  ``atoms`` holds ``(signature, measure)``
    pairs.  Atoms of measure zero are dropped after the coverage check.
    """
    entries = [tuple(s) for s in sets]
    ids = [str(e[0]) for e in entries]
    if len(set(ids)) != len(ids):
        dup = next(q for q in ids if ids.count(q) > 1)
        raise InvalidCollection(f"duplicate set id {dup!r}")
    pos = {q: i for i, q in enumerate(ids)}
    raw = []
    covered = set()
    for k, (sig, mu) in enumerate(atoms):
        sig = [str(q) for q in sig]
        if not sig:
            raise InvalidCollection(f"atom {k} has an empty signature")
        for q in sig:
            if q not in pos:
                raise InvalidCollection(f"atom {k} refers to unknown set id {q!r}")
        mu = as_rational(mu)
        if mu < 0:
            raise InvalidCollection(f"atom {k} has negative measure {mu}")
        covered.update(sig)
        raw.append((tuple(sorted(set(sig), key=pos.__getitem__)), mu))
    for q in ids:
        if q not in covered:
            raise InvalidCollection(f"set {q!r} is covered by no atom")

    kept = [(sig, mu) for sig, mu in raw if mu > 0]
    measures = [Fraction(0)] * len(ids)
    for sig, mu in kept:
        for q in sig:
            measures[pos[q]] += mu
    for q, mu in zip(ids, measures):
        if mu == 0:
            raise InvalidCollection(f"set {q!r} has zero measure")
    out_sets = []
    for e, mu in zip(entries, measures):
        w = e[1] if len(e) > 1 else None
        label = e[2] if len(e) > 2 else None
        out_sets.append(SetOccurrence(str(e[0]), mu if w is None else as_rational(w), label))
    return Collection(tuple(out_sets), tuple(Atom(b, sig, mu) for b, (sig, mu) in enumerate(kept)))


def build_from_dyadic(cubes: Sequence[DyadicCube], weights: Sequence | None = None,
                      ids: Sequence[str] | None = None) -> Collection:
    """Atoms of a dyadic collection, one per distinct cube at most.

    The atom attached to a cube is the part of it not covered by strictly smaller
    cubes of the collection; its signature is every occurrence of a cube containing it.
    """
    cubes = list(cubes)
    if not cubes:
        raise InvalidCollection("no cubes given")
    d = cubes[0].dim
    if any(c.dim != d for c in cubes):
        raise InvalidCollection("cubes have different dimensions")
    n = len(cubes)
    ids = [f"Q{i + 1}" for i in range(n)] if ids is None else [str(q) for q in ids]
    weights = [None] * n if weights is None else list(weights)
    if len(ids) != n or len(weights) != n:
        raise InvalidCollection("ids/weights length does not match the number of cubes")

    distinct: list[DyadicCube] = []
    occurrences: dict[DyadicCube, list[int]] = {}
    for i, c in enumerate(cubes):
        if c not in occurrences:
            occurrences[c] = []
            distinct.append(c)
        occurrences[c].append(i)

    # the strict containers of a cube form a chain; its parent is the lowest one
    parent: dict[DyadicCube, DyadicCube] = {}
    for u in distinct:
        best = None
        for v in distinct:
            if v != u and v.contains(u) and (best is None or v.level < best.level):
                best = v
        if best is not None:
            parent[u] = best
    covered_by_children: dict[DyadicCube, Fraction] = defaultdict(Fraction)
    for u, p in parent.items():
        covered_by_children[p] += u.volume

    measures = [Fraction(0)] * n
    raw = []
    for u in distinct:
        mu = u.volume - covered_by_children[u]
        if mu == 0:
            continue
        sig = sorted(i for v in distinct if v.contains(u) for i in occurrences[v])
        raw.append((tuple(sig), mu))
        for i in sig:
            measures[i] += mu
    sets = _make_sets(ids, weights, measures)
    atoms = tuple(Atom(b, tuple(ids[i] for i in sig), mu) for b, (sig, mu) in enumerate(raw))
    return Collection(tuple(sets), atoms)


def build_from_boxes(boxes: Sequence[Box], weights: Sequence | None = None,
                     ids: Sequence[str] | None = None) -> Collection:
    """Atoms of a collection of half-open boxes via coordinate compression.

    Grid cells are labelled with the bitmask of boxes covering them and grouped by
    label; each group is one atom, ordered by its lexicographically first cell.
    """
    boxes = list(boxes)
    if not boxes:
        raise InvalidCollection("no boxes given")
    d = boxes[0].dim
    if any(b.dim != d for b in boxes):
        raise InvalidCollection("boxes have different dimensions")
    n = len(boxes)
    ids = [f"Q{i + 1}" for i in range(n)] if ids is None else [str(q) for q in ids]
    weights = [None] * n if weights is None else list(weights)
    if len(ids) != n or len(weights) != n:
        raise InvalidCollection("ids/weights length does not match the number of boxes")

    coords = tuple(tuple(sorted({b.low[i] for b in boxes} | {b.high[i] for b in boxes})) for i in range(d))
    where = [{x: j for j, x in enumerate(c)} for c in coords]
    shape = tuple(len(c) - 1 for c in coords)
    words = (n + 63) // 64
    mask = np.zeros(shape + (words,), dtype=np.uint64)
    for k, b in enumerate(boxes):
        sl = tuple(slice(where[i][b.low[i]], where[i][b.high[i]]) for i in range(d))
        mask[sl + (k // 64,)] |= np.uint64(1 << (k % 64))
    rows = mask.reshape(-1, words)
    ncell = rows.shape[0]
    covered = np.flatnonzero(rows.any(axis=1))
    keys = np.ascontiguousarray(rows[covered]).view(np.dtype((np.void, 8 * words))).ravel()
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    inverse = inverse.ravel()
    # renumber groups by first covered cell so atoms come out in lexicographic order
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    labels = rank[inverse]
    m = len(first)
    cell_atom = np.full(ncell, -1, dtype=np.int64)
    cell_atom[covered] = labels

    # exact cell volumes on a per-axis integer lattice
    denoms = [math.lcm(*(x.denominator for x in c)) for c in coords]
    widths = [[int((c[j + 1] - c[j]) * D) for j in range(len(c) - 1)] for c, D in zip(coords, denoms)]
    units = [0] * m
    multi = np.unravel_index(covered, shape)
    for cell_pos, a in enumerate(labels.tolist()):
        v = 1
        for i in range(d):
            v *= widths[i][int(multi[i][cell_pos])]
        units[a] += v
    scale = math.prod(denoms)

    rep_rows = rows[covered[np.sort(first)]]
    bits = np.unpackbits(rep_rows.view(np.uint8).reshape(m, -1), axis=1, bitorder="little")[:, :n]
    r, col = np.nonzero(bits)
    bounds = np.searchsorted(r, np.arange(m + 1))
    col = col.tolist()
    members = [col[bounds[a]:bounds[a + 1]] for a in range(m)]

    measures = [Fraction(0)] * n
    atom_measure = [Fraction(u, scale) for u in units]
    for a in range(m):
        for q in members[a]:
            measures[q] += atom_measure[a]
    sets = _make_sets(ids, weights, measures)
    atoms = tuple(Atom(a, tuple(ids[q] for q in members[a]), atom_measure[a]) for a in range(m))
    geometry = BoxGeometry(tuple(boxes), coords, cell_atom)
    return Collection(tuple(sets), atoms, geometry)


def union_measure(c: Collection, subcollection: Iterable[str]) -> Fraction:
    """mu of the union of the given sets: the total measure of atoms meeting them."""
    hit: set[int] = set()
    for q in c.indices(subcollection):
        hit.update(c.atoms_of[q])
    return sum((c.atoms[b].measure for b in hit), Fraction(0))


def atom_measures_from_oracle(signatures: Sequence[Iterable[str]],
                              oracle: Callable[[frozenset[str]], Fraction]) -> list[Fraction]:
    """Recover atom measures from a union-measure oracle.

    ``signatures`` must be the full list of atom signatures.  Processing atoms by
    increasing signature size, the measure of an atom is the part of the total
    union missed by the sets outside its signature, minus the atoms with strictly
    smaller signatures already accounted for.  Calls the oracle once per
    signature and once for the whole union.
    """
    sigs = [frozenset(str(q) for q in s) for s in signatures]
    if any(not s for s in sigs):
        raise ValueError("signatures must be nonempty")
    universe = frozenset().union(*sigs)
    bit = {q: 1 << i for i, q in enumerate(sorted(universe))}
    masks = [sum(bit[q] for q in s) for s in sigs]

    def call(arg: frozenset[str]) -> Fraction:
        v = as_rational(oracle(arg))
        if v < 0:
            raise ValueError(f"oracle returned a negative measure for {sorted(arg)}")
        return v

    total = call(universe)
    out: list[Fraction | None] = [None] * len(sigs)
    done: list[int] = []
    for k in sorted(range(len(sigs)), key=lambda k: len(sigs[k])):
        a = masks[k]
        below = sum((out[j] for j in done if masks[j] & ~a == 0 and masks[j] != a), Fraction(0))
        v = total - call(universe - sigs[k]) - below
        if v < 0:
            raise ValueError(f"inconsistent oracle: atom {sorted(sigs[k])} would have measure {v}")
        out[k] = v
        done.append(k)
    return out
