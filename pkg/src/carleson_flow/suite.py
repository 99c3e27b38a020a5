"""Property checks run by ``carleson verify`` over a single instance or a generated corpus."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .brute import LAMBDA_LIMIT, brute_lambda, brute_min_f
from .constant import CarlesonViolation, carleson_constant, ratio
from .flow import build_network, max_flow, min_cut
from .generate import corpus, generate_instance
from .instance import instance_from_collection
from .model import Collection, atom_measures_from_oracle, union_measure
from .sfm import BRUTE_LIMIT, minimize_f
from .sparse import construct_phi, construct_selection, realize_boxes, verify_witness

PROPERTIES = (
    "lambda-oracle",
    "backend-equivalence",
    "algorithm-structure",
    "phi-witness",
    "selection-witness",
    "flow-cut-duality",
    "infeasibility-certificates",
    "partition-recursion",
    "box-realization",
)


@dataclass
class PropertyReport:
    name: str
    checked: int = 0
    failures: int = 0
    counterexample: dict[str, Any] | None = None
    detail: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "passed": self.passed, "checked": self.checked,
                               "failures": self.failures}
        if self.counterexample is not None:
            out["detail"] = self.detail
            out["counterexample"] = self.counterexample
        return out


def check_collection(c: Collection, rng: random.Random) -> dict[str, str | None]:
    """Run every applicable property on one collection.

    Returns property name -> None (pass) or a failure message; properties that do
    not apply (brute force too large, no box geometry) are left out.
    """
    out: dict[str, str | None] = {}
    n = len(c.sets)
    res = carleson_constant(c)
    lam = res.lam

    if n <= LAMBDA_LIMIT:
        b_lam, _ = brute_lambda(c)
        msg = None
        if b_lam != lam:
            msg = f"algorithm gives {lam}, enumeration gives {b_lam}"
        elif ratio(c, res.witness) != lam:
            msg = f"witness ratio {ratio(c, res.witness)} differs from {lam}"
        out["lambda-oracle"] = msg

    if n <= BRUTE_LIMIT:
        msg = None
        for _ in range(3):
            test_lam = lam * Fraction(rng.randint(1, 12), 8)
            dom = [q for q in c.ids if rng.random() < 0.7] or [c.ids[0]]
            a = minimize_f(c, test_lam, dom, backend="mincut")
            b = brute_min_f(c, test_lam, dom)
            if a != b:
                msg = f"lam={test_lam}, domain={dom}: min-cut {a}, enumeration {b}"
                break
        out["backend-equivalence"] = msg

    lams = [x for x, _ in res.trace]
    msg = None
    if res.iterations > n:
        msg = f"{res.iterations} iterations for {n} sets"
    elif any(x > y for x, y in zip(lams, lams[1:])):
        msg = f"trace decreases: {lams}"
    out["algorithm-structure"] = msg

    phi = construct_phi(c, lam)
    problems = verify_witness(c, phi)
    out["phi-witness"] = "; ".join(problems[:3]) if problems else None
    sel = construct_selection(c, lam)
    problems = verify_witness(c, sel)
    out["selection-witness"] = "; ".join(problems[:3]) if problems else None

    net = build_network(c, lam)
    flow = max_flow(net)
    cut = min_cut(net, flow)
    demand = sum(c.weights, Fraction(0)) / lam
    msg = None
    if flow.value != demand:
        msg = f"max flow {flow.value} but total demand {demand}"
    elif cut.capacity != flow.value:
        msg = f"min cut {cut.capacity} differs from max flow {flow.value}"
    out["flow-cut-duality"] = msg

    msg = None
    for k in (2, 4, 8):
        low = lam * (1 - Fraction(1, k))
        try:
            construct_phi(c, low)
            msg = f"construct_phi accepted lam={low} below the optimum {lam}"
        except CarlesonViolation as exc:
            sub = exc.certificate.subcollection
            if not sub or sum((c.sets[q].weight for q in c.indices(sub)), Fraction(0)) <= low * union_measure(c, sub):
                msg = f"certificate at lam={low} does not violate the condition"
        if msg:
            break
    out["infeasibility-certificates"] = msg

    if len(c.atoms) <= 4096:
        rec = atom_measures_from_oracle([a.signature for a in c.atoms], lambda A: union_measure(c, A))
        stored = [a.measure for a in c.atoms]
        out["partition-recursion"] = None if rec == stored else "recursion disagrees with stored atom measures"

    if c.geometry is not None:
        problems = verify_witness(c, realize_boxes(c, sel))
        out["box-realization"] = "; ".join(problems[:3]) if problems else None
    return out


def run_suite(count: int = 60, n_max: int = 12, seed: int = 0) -> list[PropertyReport]:
    reports = {name: PropertyReport(name) for name in PROPERTIES}
    rng = random.Random(seed)
    for spec, c in corpus(count, n_max, seed):
        for name, msg in check_collection(c, rng).items():
            rep = reports[name]
            rep.checked += 1
            if msg is not None:
                rep.failures += 1
                if rep.counterexample is None:
                    rep.detail = msg
                    rep.counterexample = {"spec": spec.__dict__, "instance": generate_instance(spec).to_json()}
    return list(reports.values())


def check_single(c: Collection, seed: int = 0) -> list[PropertyReport]:
    reports = []
    for name, msg in check_collection(c, random.Random(seed)).items():
        rep = PropertyReport(name, checked=1, failures=int(msg is not None))
        if msg is not None:
            rep.detail = msg
            rep.counterexample = instance_from_collection(c).to_json()
        reports.append(rep)
    return reports
