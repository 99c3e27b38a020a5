import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from strategies import any_collection

from carleson_flow import construct_phi, construct_selection, realize_boxes
from carleson_flow.instance import (
    InstanceError,
    instance_from_collection,
    load_collection,
    parse_instance,
    parse_witness,
    witness_to_json,
)


def atoms_of(c):
    return [(a.signature, a.measure) for a in c.atoms]


def test_decimal_coordinates_are_exact(rects3):
    assert rects3.geometry.boxes[0].low == (Fraction(17, 20), 1)


def test_boxes_without_sets_get_default_ids():
    inst = parse_instance('{"kind": "boxes", "boxes": [{"low": [0], "high": ["1/2"]}]}')
    c = inst.build()
    assert c.ids == ("Q1",) and c.measure("Q1") == Fraction(1, 2)


def test_dyadic_instance():
    inst = parse_instance({"kind": "dyadic", "sets": [{"id": "a", "weight": "3"}, {"id": "b"}],
                           "cubes": [{"level": 0, "offset": [0]}, {"level": -1, "offset": [1]}]})
    c = inst.build()
    assert c.weights == (3, Fraction(1, 2))


@pytest.mark.parametrize("text, where", [
    ('{"kind": "atoms"', "line 1"),
    ('[]', "instance: expected"),
    ('{"kind": "polygons"}', "instance.kind"),
    ('{"kind": "atoms", "atoms": []}', "instance.sets"),
    ('{"kind": "atoms", "sets": [{"id": "Q"}], "atoms": [{"signature": ["Q"], "measure": 0.5e}]}', "line 1"),
    ('{"kind": "atoms", "sets": [{"id": "Q"}], "atoms": [{"signature": ["Q"], "measure": "x"}]}',
     "instance.atoms[0].measure"),
    ('{"kind": "atoms", "sets": [{"nope": 1}], "atoms": []}', "instance.sets[0]"),
    ('{"kind": "dyadic", "cubes": [{"level": 0.5, "offset": [0]}]}', "instance.cubes[0]"),
    ('{"kind": "boxes", "boxes": [{"low": [1], "high": [0]}]}', "instance.boxes[0]"),
    ('{"kind": "boxes", "sets": [{"id": "a"}, {"id": "b"}], "boxes": [{"low": [0], "high": [1]}]}',
     "2 entries for 1 boxes"),
])
def test_parse_errors(text, where):
    with pytest.raises(InstanceError) as info:
        parse_instance(text)
    assert where in str(info.value)


def test_load_collection_wraps_model_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "atoms", "sets": [{"id": "Q"}, {"id": "R"}], "atoms": [{"signature": ["Q"], "measure": 1}]}')
    with pytest.raises(InstanceError, match="covered by no atom"):
        load_collection(path)


@settings(max_examples=60, deadline=None)
@given(any_collection)
def test_collection_round_trip(c):
    text = json.dumps(instance_from_collection(c).to_json())
    back = parse_instance(text).build()
    assert back.ids == c.ids and back.weights == c.weights
    assert atoms_of(back) == atoms_of(c)


@settings(max_examples=40, deadline=None)
@given(any_collection)
def test_witness_round_trip(c):
    witnesses = [construct_phi(c), construct_selection(c)]
    if c.geometry is not None:
        witnesses.append(realize_boxes(c, witnesses[1]))
    for w in witnesses:
        assert parse_witness(json.dumps(witness_to_json(w))) == w


def test_generated_round_trip(rects3):
    from carleson_flow import GeneratorSpec, generate_instance

    inst = generate_instance(GeneratorSpec("boxes", 6, 2, seed=5, weight_mode="random"))
    again = parse_instance(json.dumps(inst.to_json()))
    assert again == inst


@pytest.mark.parametrize("text", [
    '{"phi": []}', '{"lambda": "1"}', '{"lambda": "1", "phi": [{"set": "Q"}]}',
    '{"lambda": "1", "boxes": [{"set": "Q", "boxes": [{"low": [1], "high": [0]}]}]}',
    '{"lambda": "z", "phi": []}',
])
def test_witness_parse_errors(text):
    with pytest.raises(InstanceError):
        parse_witness(text)
