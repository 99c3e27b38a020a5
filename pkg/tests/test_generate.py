import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carleson_flow import GeneratorSpec, generate, generate_instance
from carleson_flow.generate import corpus


def test_deterministic():
    for kind, d in [("atoms", 1), ("dyadic", 2), ("boxes", 3)]:
        spec = GeneratorSpec(kind, 9, d, seed=4, weight_mode="random")
        assert generate_instance(spec).to_json() == generate_instance(spec).to_json()
    a = generate_instance(GeneratorSpec("boxes", 9, 2, seed=1)).to_json()
    b = generate_instance(GeneratorSpec("boxes", 9, 2, seed=2)).to_json()
    assert a != b


def test_boxes_partition_bound():
    c = generate(GeneratorSpec("boxes", 8, 2))
    assert len(c.sets) == 8
    assert len(c.atoms) <= 16 ** 2


def test_atoms_small():
    c = generate(GeneratorSpec("atoms", 3, seed=0))
    assert c.ids == ("Q1", "Q2", "Q3")
    assert all(a.measure > 0 for a in c.atoms)


@pytest.mark.parametrize("kwargs", [
    dict(kind="cubes", n=3), dict(kind="atoms", n=0), dict(kind="boxes", n=2, d=0),
    dict(kind="atoms", n=2, weight_mode="heavy"),
])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        GeneratorSpec(**kwargs)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["atoms", "dyadic", "boxes"]), st.integers(1, 20), st.integers(1, 3),
       st.integers(0, 10 ** 6), st.sampled_from(["measure", "random"]))
def test_generated_instances_are_valid(kind, n, d, seed, mode):
    spec = GeneratorSpec(kind, n, d, seed, mode)
    c = generate(spec)
    assert len(c.sets) == n
    if mode == "measure":
        assert list(c.weights) == list(c.set_measures)
    if kind == "dyadic":
        assert len(c.atoms) <= n
    if kind == "boxes":
        assert len(c.atoms) <= (2 * n) ** d


def test_corpus_mix():
    items = corpus(12, n_max=6, seed=3)
    assert {(s.kind, s.d) for s, _ in items} == {
        ("dyadic", 1), ("dyadic", 2), ("boxes", 1), ("boxes", 2), ("boxes", 3), ("atoms", 1)
    }
    assert [s for s, _ in items] == [s for s, _ in corpus(12, n_max=6, seed=3)]
