"""One test per acceptance criterion; each appends a PASS/FAIL line to the terminal summary."""

import contextlib
import io
import json
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest
from conftest import ACCEPTANCE_LINES

from carleson_flow import (
    CarlesonViolation,
    GeneratorSpec,
    atom_measures_from_oracle,
    brute_lambda,
    brute_min_f,
    build_network,
    carleson_constant,
    construct_phi,
    construct_selection,
    generate,
    max_flow,
    min_cut,
    minimize_f,
    ratio,
    realize_boxes,
    union_measure,
    verify_witness,
)
from carleson_flow.cli import main
from carleson_flow.generate import corpus

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_SIZE = 540


@contextlib.contextmanager
def criterion(number, title):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        ACCEPTANCE_LINES.append(f"[{status}] {number}. {title} ({time.perf_counter() - start:.2f}s)")


@pytest.fixture(scope="module")
def small_corpus():
    start = time.perf_counter()
    items = corpus(CORPUS_SIZE, n_max=12, seed=2024)
    results = [carleson_constant(c) for _, c in items]
    return items, results, time.perf_counter() - start


def cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([str(a) for a in argv])
    return code, json.loads(buf.getvalue())


def test_criterion_1_counting_fixture(counting):
    with criterion(1, "counting fixture: lambda = 2, integrals (1/2, 1/2, 1), no box realization, < 1 s"):
        start = time.perf_counter()
        code, res = cli("lambda", FIXTURES / "counting.json")
        assert code == 0 and Fraction(res["payload"]["lambda"]) == 2
        phi = construct_phi(counting, 2)
        measure = {a.id: a.measure for a in counting.atoms}
        integrals = [sum((x * measure[b] for b, x in phi.coefficients[q].items()), Fraction(0)) for q in counting.ids]
        assert integrals == [Fraction(1, 2), Fraction(1, 2), Fraction(1)]
        load = {b: sum(phi.coefficients[q].get(b, 0) for q in counting.ids) for b in measure}
        assert all(v <= 1 for v in load.values())
        assert verify_witness(counting, phi) == []
        with pytest.raises(ValueError):
            realize_boxes(counting, construct_selection(counting, 2))
        code, res = cli("sparse", FIXTURES / "counting.json", "--emit", "boxes")
        assert code == 1
        assert time.perf_counter() - start < 1


def test_criterion_2_lambda_oracle(small_corpus):
    with criterion(2, f"carleson_constant == brute_lambda on {CORPUS_SIZE} instances, witness ratio exact, < 5 min"):
        items, results, elapsed = small_corpus
        start = time.perf_counter()
        kinds = set()
        for (spec, c), res in zip(items, results):
            kinds.add((spec.kind, spec.d))
            assert spec.n <= 12
            lam, _ = brute_lambda(c)
            assert res.lam == lam, spec
            assert ratio(c, res.witness) == res.lam, spec
        assert len(items) >= 500
        assert kinds == {("dyadic", 1), ("dyadic", 2), ("boxes", 1), ("boxes", 2), ("boxes", 3), ("atoms", 1)}
        assert elapsed + time.perf_counter() - start < 300


def test_criterion_3_sfm_backends(small_corpus):
    with criterion(3, "minimize_f(mincut) == brute_min_f on >= 500 (instance, lambda) pairs, < 5 min"):
        items, results, _ = small_corpus
        rng = random.Random(7)
        start = time.perf_counter()
        pairs = 0
        for (spec, c), res in zip(items, results):
            for lam in (res.lam, res.lam * Fraction(rng.randint(1, 16), 8)):
                dom = [q for q in c.ids if rng.random() < 0.75] or list(c.ids)
                for domain in (None, dom):
                    a = minimize_f(c, lam, domain)
                    b = brute_min_f(c, lam, domain)
                    assert (a.value, a.minimizer) == (b.value, b.minimizer), (spec, lam, domain)
                    pairs += 1
        assert pairs >= 500
        assert time.perf_counter() - start < 300


def test_criterion_4_algorithm_structure(small_corpus, duplicated):
    with criterion(4, "iterations <= n, nondecreasing trace, duplicated fixture trace 3/2 then 2"):
        items, results, _ = small_corpus
        for (spec, c), res in zip(items, results):
            assert res.iterations <= len(c.sets), spec
            lams = [x for x, _ in res.trace]
            assert all(x <= y for x, y in zip(lams, lams[1:])), spec
        trace = [x for x, _ in carleson_constant(duplicated).trace]
        assert trace == [Fraction(3, 2), Fraction(2)]


def test_criterion_5_sparse_witnesses(small_corpus):
    with criterion(5, "phi and selection witnesses exact at the optimum, max flow == demand == min cut"):
        items, results, _ = small_corpus
        for (spec, c), res in zip(items, results):
            lam = res.lam
            phi = construct_phi(c, lam)
            assert verify_witness(c, phi) == [], spec
            measure = {a.id: a.measure for a in c.atoms}
            for s in c.sets:
                row = phi.coefficients[s.id]
                assert sum((x * measure[b] for b, x in row.items()), Fraction(0)) == s.weight / lam
            load = {}
            for row in phi.coefficients.values():
                for b, x in row.items():
                    load[b] = load.get(b, 0) + x
            assert all(v <= 1 for v in load.values())
            sel = construct_selection(c, lam)
            assert verify_witness(c, sel) == [], spec
            net = build_network(c, lam)
            flow = max_flow(net)
            demand = sum(c.weights, Fraction(0)) / lam
            assert flow.value == demand == min_cut(net, flow).capacity, spec


def test_criterion_6_certificates(small_corpus):
    with criterion(6, "below the optimum (k = 2, 4, 8) construct_phi fails with a violating subcollection"):
        items, results, _ = small_corpus
        for (spec, c), res in zip(items, results):
            for k in (2, 4, 8):
                low = res.lam * (1 - Fraction(1, k))
                with pytest.raises(CarlesonViolation) as info:
                    construct_phi(c, low)
                sub = info.value.certificate.subcollection
                assert sub
                assert sum((c.sets[i].weight for i in c.indices(sub)), Fraction(0)) > low * union_measure(c, sub)


def test_criterion_7_partition_bounds(small_corpus):
    with criterion(7, "dyadic |P0| <= n, boxes |P0| <= (2n)^d, oracle recursion exact"):
        items, _, _ = small_corpus
        geometric = 0
        for spec, c in items:
            n = len(c.sets)
            if spec.kind == "dyadic":
                assert len(c.atoms) <= n, spec
            elif spec.kind == "boxes":
                assert len(c.atoms) <= (2 * n) ** spec.d, spec
            else:
                continue
            geometric += 1
            rec = atom_measures_from_oracle([a.signature for a in c.atoms], lambda A: union_measure(c, A))
            assert rec == [a.measure for a in c.atoms], spec
        assert geometric > 0


def test_criterion_8_box_realization():
    with criterion(8, "box corpus d <= 3, n <= 50: disjoint boxes inside Q with volume exactly weight/lambda"):
        rng = random.Random(8)
        checked = 0
        for i in range(90):
            d = 1 + i % 3
            n = rng.randint(1, 50) if i >= 3 else 50
            spec = GeneratorSpec("boxes", n, d, rng.getrandbits(32), rng.choice(("measure", "random")))
            c = generate(spec)
            real = realize_boxes(c, construct_selection(c))
            assert verify_witness(c, real) == [], spec
            checked += 1
        assert checked == 90


def test_criterion_9_performance(tmp_path):
    with criterion(9, "n = 200 rectangles in d = 2: lambda + sparse end-to-end < 60 s"):
        generated = tmp_path / "generated.json"
        assert main(["gen", "--kind", "boxes", "--n", "200", "--d", "2", "--seed", "0", "-o", str(generated)]) == 0
        # square i is [i, i + 200) x [-i, 200 - i); 20100 atoms
        shifted = tmp_path / "shifted.json"
        shifted.write_text(json.dumps({"kind": "boxes", "boxes": [
            {"low": [i, -i], "high": [i + 200, 200 - i]} for i in range(200)
        ]}))
        for path in (generated, shifted):
            start = time.perf_counter()
            code, res = cli("lambda", path)
            assert code == 0
            code, sparse = cli("sparse", path, "--emit", "boxes")
            assert code == 0 and sparse["status"] == "ok"
            elapsed = time.perf_counter() - start
            ACCEPTANCE_LINES.append(f"    {path.stem}: lambda {res['payload']['lambda']}, {elapsed:.1f}s")
            assert elapsed < 60
