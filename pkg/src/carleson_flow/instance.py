"""JSON instance and witness formats.

Instance::

    {"kind": "atoms",  "sets": [{"id": "Q1", "weight": "3/2"}, ...],
     "atoms": [{"signature": ["Q1", "Q2"], "measure": "1/4"}, ...]}
    {"kind": "dyadic", "sets": [...], "cubes": [{"level": -1, "offset": [0, 1]}, ...]}
    {"kind": "boxes",  "sets": [...], "boxes": [{"low": ["0", "1/2"], "high": [1, 2]}, ...]}

``sets`` is optional for the geometric kinds (ids default to Q1..Qn) and, when
present, is aligned with the cubes/boxes.  A missing weight means the set's
measure.  Rationals may be ints, decimal or "p/q" strings, or JSON numbers; all
are parsed exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .model import Box, Collection, DyadicCube, InvalidCollection, build_from_atoms, build_from_boxes, build_from_dyadic
from .rational import as_rational, fmt
from .sparse import BoxRealization, PhiWitness, Selection, Witness

KINDS = ("atoms", "dyadic", "boxes")


class InstanceError(ValueError):
    pass


@dataclass
class Instance:
    kind: str
    ids: list[str]
    weights: list[Fraction | None]
    labels: list[str | None] = field(default_factory=list)
    atoms: list[tuple[list[str], Fraction]] = field(default_factory=list)
    cubes: list[DyadicCube] = field(default_factory=list)
    boxes: list[Box] = field(default_factory=list)

    def build(self) -> Collection:
        if self.kind == "atoms":
            labels = self.labels or [None] * len(self.ids)
            return build_from_atoms(list(zip(self.ids, self.weights, labels)), self.atoms)
        if self.kind == "dyadic":
            return build_from_dyadic(self.cubes, self.weights, self.ids)
        if self.kind == "boxes":
            return build_from_boxes(self.boxes, self.weights, self.ids)
        raise InstanceError(f"unknown kind {self.kind!r}")

    def to_json(self) -> dict[str, Any]:
        sets = []
        for i, q in enumerate(self.ids):
            entry: dict[str, Any] = {"id": q}
            if self.weights[i] is not None:
                entry["weight"] = fmt(self.weights[i])
            if self.labels and self.labels[i] is not None:
                entry["label"] = self.labels[i]
            sets.append(entry)
        out: dict[str, Any] = {"kind": self.kind, "sets": sets}
        if self.kind == "atoms":
            out["atoms"] = [{"signature": list(sig), "measure": fmt(mu)} for sig, mu in self.atoms]
        elif self.kind == "dyadic":
            out["cubes"] = [{"level": c.level, "offset": list(c.offset)} for c in self.cubes]
        else:
            out["boxes"] = [{"low": [fmt(x) for x in b.low], "high": [fmt(x) for x in b.high]} for b in self.boxes]
        return out


def instance_from_collection(c: Collection) -> Instance:
    """Atom-level dump of any collection."""
    return Instance(
        "atoms",
        list(c.ids),
        list(c.weights),
        [s.label for s in c.sets],
        atoms=[(list(a.signature), a.measure) for a in c.atoms],
    )


def _rat(x, where: str) -> Fraction:
    try:
        return as_rational(x)
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"{where}: {exc}") from None


def _list(obj, key: str, where: str) -> list:
    val = obj.get(key)
    if not isinstance(val, list):
        raise InstanceError(f"{where}.{key}: expected a list")
    return val


def loads_json(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse_instance(data: Any) -> Instance:
    if isinstance(data, str):
        data = loads_json(data)
    if not isinstance(data, dict):
        raise InstanceError("instance: expected a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise InstanceError(f"instance.kind: expected one of {KINDS}, got {kind!r}")
    raw_sets = data.get("sets")
    if raw_sets is not None and not isinstance(raw_sets, list):
        raise InstanceError("instance.sets: expected a list")
    ids, weights, labels = [], [], []
    for i, s in enumerate(raw_sets or []):
        if not isinstance(s, dict) or "id" not in s:
            raise InstanceError(f"instance.sets[{i}]: expected an object with an id")
        ids.append(str(s["id"]))
        weights.append(None if s.get("weight") is None else _rat(s["weight"], f"instance.sets[{i}].weight"))
        labels.append(s.get("label"))

    inst = Instance(kind, ids, weights, labels)
    if kind == "atoms":
        if raw_sets is None:
            raise InstanceError("instance.sets: required for kind 'atoms'")
        for i, a in enumerate(_list(data, "atoms", "instance")):
            where = f"instance.atoms[{i}]"
            if not isinstance(a, dict) or not isinstance(a.get("signature"), list):
                raise InstanceError(f"{where}: expected an object with a signature list")
            inst.atoms.append(([str(q) for q in a["signature"]], _rat(a.get("measure"), f"{where}.measure")))
        return inst

    if kind == "dyadic":
        for i, cube in enumerate(_list(data, "cubes", "instance")):
            where = f"instance.cubes[{i}]"
            try:
                level = cube["level"]
                offset = cube["offset"]
                if isinstance(level, bool) or not isinstance(level, int) or not all(
                    isinstance(k, int) and not isinstance(k, bool) for k in offset
                ):
                    raise TypeError
                inst.cubes.append(DyadicCube(level, tuple(offset)))
            except (KeyError, TypeError):
                raise InstanceError(f"{where}: expected integer level and integer offset list") from None
            except InvalidCollection as exc:
                raise InstanceError(f"{where}: {exc}") from None
        count = len(inst.cubes)
    else:
        for i, box in enumerate(_list(data, "boxes", "instance")):
            where = f"instance.boxes[{i}]"
            if not isinstance(box, dict):
                raise InstanceError(f"{where}: expected an object")
            low = [_rat(x, f"{where}.low") for x in _list(box, "low", where)]
            high = [_rat(x, f"{where}.high") for x in _list(box, "high", where)]
            try:
                inst.boxes.append(Box(tuple(low), tuple(high)))
            except InvalidCollection as exc:
                raise InstanceError(f"{where}: {exc}") from None
        count = len(inst.boxes)
    if raw_sets is None:
        inst.ids = [f"Q{i + 1}" for i in range(count)]
        inst.weights = [None] * count
        inst.labels = [None] * count
    elif len(raw_sets) != count:
        raise InstanceError(f"instance.sets: {len(raw_sets)} entries for {count} {kind}")
    return inst


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def load_collection(path: str | Path) -> Collection:
    inst = load_instance(path)
    try:
        return inst.build()
    except InvalidCollection as exc:
        raise InstanceError(f"instance: {exc}") from None


def witness_to_json(w: Witness) -> dict[str, Any]:
    if isinstance(w, PhiWitness):
        body = [
            {"set": q, "atoms": [{"atom": b, "coeff": fmt(v)} for b, v in sorted(row.items())]}
            for q, row in w.coefficients.items()
        ]
        return {"lambda": fmt(w.lam), "phi": body}
    if isinstance(w, Selection):
        body = [
            {"set": q, "atoms": [{"atom": b, "amount": fmt(v)} for b, v in items]}
            for q, items in w.allocations.items()
        ]
        return {"lambda": fmt(w.lam), "selection": body}
    if isinstance(w, BoxRealization):
        body = [
            {"set": q, "boxes": [{"low": [fmt(x) for x in b.low], "high": [fmt(x) for x in b.high]} for b in boxes]}
            for q, boxes in w.boxes.items()
        ]
        return {"lambda": fmt(w.lam), "boxes": body}
    raise TypeError(f"not a witness: {type(w).__name__}")


def parse_witness(data: Any) -> Witness:
    if isinstance(data, str):
        data = loads_json(data)
    if not isinstance(data, dict) or "lambda" not in data:
        raise InstanceError("witness: expected an object with a lambda")
    lam = _rat(data["lambda"], "witness.lambda")
    try:
        if "phi" in data:
            return PhiWitness(lam, {
                str(r["set"]): {int(a["atom"]): _rat(a["coeff"], "witness.phi.coeff") for a in r["atoms"]}
                for r in data["phi"]
            })
        if "selection" in data:
            return Selection(lam, {
                str(r["set"]): [(int(a["atom"]), _rat(a["amount"], "witness.selection.amount")) for a in r["atoms"]]
                for r in data["selection"]
            })
        if "boxes" in data:
            return BoxRealization(lam, {
                str(r["set"]): [
                    Box(tuple(_rat(x, "witness.boxes.low") for x in b["low"]),
                        tuple(_rat(x, "witness.boxes.high") for x in b["high"]))
                    for b in r["boxes"]
                ]
                for r in data["boxes"]
            })
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"witness: malformed entry ({exc})") from None
    except InvalidCollection as exc:
        raise InstanceError(f"witness: {exc}") from None
    raise InstanceError("witness: expected one of 'phi', 'selection', 'boxes'")
