import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import any_collection, atom_collections

from carleson_flow import (
    Box,
    build_from_atoms,
    build_from_boxes,
    carleson_constant,
    check_carleson,
    ratio,
    union_measure,
)


def naive_lambda(c):
    best = Fraction(0)
    for r in range(1, len(c.ids) + 1):
        for A in itertools.combinations(c.ids, r):
            best = max(best, ratio(c, A))
    return best


def test_counting(counting):
    res = carleson_constant(counting)
    assert res.lam == 2
    assert res.witness == {"A1", "A2", "A12"}
    assert res.iterations == 1


def test_intervals(intervals):
    assert carleson_constant(intervals).lam == Fraction(4, 3)


def test_rects3(rects3):
    res = carleson_constant(rects3)
    # full collection: weights 8.75 + 6.6 + 17.39 over union 17.39
    assert res.lam == Fraction("32.74") / Fraction("17.39") == Fraction(3274, 1739)
    assert res.witness == {"Q1", "Q2", "Q3"}


def test_chain(chain3):
    assert carleson_constant(chain3).lam == Fraction(7, 4)


def test_disjoint_and_single(disjoint, single):
    assert carleson_constant(disjoint).lam == 1
    assert carleson_constant(single).lam == 1


def test_duplicated_trace(duplicated):
    res = carleson_constant(duplicated)
    assert res.lam == 2
    assert res.witness == {"A", "B"}
    assert [x for x, _ in res.trace] == [Fraction(3, 2), 2]
    assert res.iterations == 2


def test_ratio_of_empty_rejected(counting):
    with pytest.raises(ValueError):
        ratio(counting, [])


def test_check_carleson(counting):
    assert check_carleson(counting, 2) is None
    assert check_carleson(counting, 3) is None
    cert = check_carleson(counting, Fraction(3, 2))
    assert cert.subcollection == {"A1", "A2", "A12"}
    assert cert.ratio == 2 > cert.claimed


def test_weighted_sets_can_exceed_two():
    c = build_from_atoms([("P", 5), ("Q", 1)], [(["P"], 1), (["Q"], 1)])
    res = carleson_constant(c)
    assert res.lam == 5 and res.witness == {"P"}


@settings(max_examples=100, deadline=None)
@given(any_collection)
def test_matches_enumeration(c):
    res = carleson_constant(c)
    assert res.lam == naive_lambda(c)
    assert ratio(c, res.witness) == res.lam
    assert carleson_constant(c, backend="brute") == res
    assert res.iterations <= len(c.ids)
    lams = [x for x, _ in res.trace]
    assert lams == sorted(lams)
    assert check_carleson(c, res.lam) is None


@settings(max_examples=60, deadline=None)
@given(any_collection)
def test_lower_bounds(c):
    lam = carleson_constant(c).lam
    assert lam >= max(s.weight / mu for s, mu in zip(c.sets, c.set_measures))
    assert lam >= sum(c.weights) / union_measure(c, c.ids)


@settings(max_examples=50, deadline=None)
@given(atom_collections(), st.builds(Fraction, st.integers(1, 9), st.integers(1, 9)))
def test_weight_scaling(c, k):
    scaled = build_from_atoms([(s.id, s.weight * k) for s in c.sets],
                              [(a.signature, a.measure) for a in c.atoms])
    assert carleson_constant(scaled).lam == k * carleson_constant(c).lam


@settings(max_examples=50, deadline=None)
@given(atom_collections(), st.builds(Fraction, st.integers(1, 9), st.integers(1, 9)))
def test_measure_scaling(c, k):
    # weights scale with the measure, so the constant is unchanged
    scaled = build_from_atoms([(s.id, s.weight * k) for s in c.sets],
                              [(a.signature, a.measure * k) for a in c.atoms])
    assert carleson_constant(scaled).lam == carleson_constant(c).lam


@settings(max_examples=50, deadline=None)
@given(atom_collections(), st.data())
def test_monotone_under_removal(c, data):
    if len(c.ids) < 2:
        return
    drop = data.draw(st.sampled_from(c.ids))
    rest = [s for s in c.sets if s.id != drop]
    atoms = []
    for a in c.atoms:
        sig = [q for q in a.signature if q != drop]
        if sig:
            atoms.append((sig, a.measure))
    merged = {}
    for sig, mu in atoms:
        merged[tuple(sig)] = merged.get(tuple(sig), 0) + mu
    sub = build_from_atoms([(s.id, s.weight) for s in rest], list(merged.items()))
    assert carleson_constant(sub).lam <= carleson_constant(c).lam


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=8))
def test_disjoint_equals_max_density(widths):
    boxes, x = [], 0
    for w in widths:
        boxes.append(Box((x,), (x + w,)))
        x += w + 1
    weights = [Fraction(k + 1, w) * w for k, w in enumerate(widths)]
    c = build_from_boxes(boxes, weights=weights)
    assert carleson_constant(c).lam == max(Fraction(w) / mu for w, mu in zip(weights, c.set_measures))
