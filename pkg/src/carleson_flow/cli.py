"""Command-line front end: partition, lambda, sparse, verify, gen.

Every command except ``gen`` prints ``{"status", "payload", "timing_ms"}`` as
JSON.  Exit codes: 0 ok, 2 mathematical violation (with certificate), 1 error.
``gen`` prints the instance JSON itself so it can be redirected to a file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .constant import CarlesonViolation, carleson_constant
from .flow import build_network
from .generate import GeneratorSpec, generate_instance
from .instance import InstanceError, load_collection, parse_witness, witness_to_json
from .model import InvalidCollection, atom_measures_from_oracle, union_measure
from .rational import as_rational, fmt
from .sparse import construct_phi, construct_selection, realize_boxes, render_svg, verify_witness
from .suite import check_single, run_suite

EXIT = {"ok": 0, "violation": 2, "error": 1}


@dataclass
class CommandResult:
    status: str
    payload: dict[str, Any]
    timing_ms: float = 0.0

    def to_json(self) -> dict[str, Any]:
        return {"status": self.status, "payload": self.payload, "timing_ms": round(self.timing_ms, 3)}


def _ordered(c, ids) -> list[str]:
    chosen = set(ids)
    return [q for q in c.ids if q in chosen]


def cmd_partition(args) -> CommandResult:
    c = load_collection(args.instance)
    payload: dict[str, Any] = {
        "sets": [{"id": s.id, "weight": fmt(s.weight), "measure": fmt(mu)} for s, mu in zip(c.sets, c.set_measures)],
        "atoms": [{"atom": a.id, "signature": list(a.signature), "measure": fmt(a.measure)} for a in c.atoms],
        "count": len(c.atoms),
    }
    if args.via_oracle:
        rec = atom_measures_from_oracle([a.signature for a in c.atoms], lambda A: union_measure(c, A))
        agree = rec == [a.measure for a in c.atoms]
        payload["via_oracle"] = {"measures": [fmt(x) for x in rec], "agree": agree}
        if not agree:
            return CommandResult("error", payload)
    return CommandResult("ok", payload)


def cmd_lambda(args) -> CommandResult:
    c = load_collection(args.instance)
    res = carleson_constant(c, backend=args.backend)
    if args.dump_graph:
        Path(args.dump_graph).write_text(build_network(c, res.lam).to_dot())
    return CommandResult("ok", {
        "lambda": fmt(res.lam),
        "witness": _ordered(c, res.witness),
        "iterations": res.iterations,
        "trace": [{"lambda": fmt(x), "size": k} for x, k in res.trace],
        "backend": args.backend,
    })


def cmd_sparse(args) -> CommandResult:
    c = load_collection(args.instance)
    lam = None if args.lam == "auto" else as_rational(args.lam)
    geo = c.geometry
    wants_boxes = args.emit == "boxes" or args.svg
    if wants_boxes and geo is None:
        return CommandResult("error", {"error": "box emission needs a 'boxes' instance"})
    if args.emit == "boxes" and geo.boxes[0].dim > 3:
        return CommandResult("error", {"error": "box emission supports dimension <= 3"})
    if args.svg and geo.boxes[0].dim != 2:
        return CommandResult("error", {"error": "SVG output needs a two-dimensional instance"})
    try:
        if args.emit == "phi":
            witness = construct_phi(c, lam)
        else:
            sel = construct_selection(c, lam)
            witness = realize_boxes(c, sel) if args.emit == "boxes" else sel
    except CarlesonViolation as exc:
        cert = exc.certificate
        return CommandResult("violation", {"certificate": {
            "subcollection": _ordered(c, cert.subcollection),
            "ratio": fmt(cert.ratio),
            "lambda": fmt(cert.claimed),
        }})
    problems = verify_witness(c, witness)
    if args.svg:
        real = witness if args.emit == "boxes" else realize_boxes(c, construct_selection(c, witness.lam))
        problems += verify_witness(c, real)
        Path(args.svg).write_text(render_svg(c, real))
    if args.dump_graph:
        Path(args.dump_graph).write_text(build_network(c, witness.lam).to_dot())
    payload = witness_to_json(witness)
    if problems:
        return CommandResult("error", {"error": "constructed witness failed verification", "problems": problems})
    return CommandResult("ok", payload)


def cmd_verify(args) -> CommandResult:
    if args.witness:
        if not args.instance:
            return CommandResult("error", {"error": "--witness needs an instance file"})
        c = load_collection(args.instance)
        w = parse_witness(Path(args.witness).read_text())
        problems = verify_witness(c, w)
        return CommandResult("violation" if problems else "ok", {"witness": args.witness, "problems": problems})
    if args.instance:
        reports = check_single(load_collection(args.instance), args.seed)
    else:
        reports = run_suite(args.count, args.n_max, args.seed)
    ok = all(r.passed for r in reports)
    return CommandResult("ok" if ok else "error", {"properties": [r.to_json() for r in reports]})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="carleson", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("partition", help="list the atoms and their measures")
    sp.add_argument("instance")
    sp.add_argument("--via-oracle", action="store_true", help="recompute measures from union measures and compare")
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("lambda", help="optimal Carleson constant")
    sp.add_argument("instance")
    sp.add_argument("--backend", choices=("mincut", "brute"), default="mincut")
    sp.add_argument("--dump-graph", metavar="DOT", help="write the flow network at the optimum as DOT")
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("sparse", help="sparse witness (phi, selection or boxes)")
    sp.add_argument("instance")
    sp.add_argument("--lambda", dest="lam", default="auto", help="'auto' or a rational such as 3/2")
    sp.add_argument("--emit", choices=("phi", "selection", "boxes"), default="phi")
    sp.add_argument("--svg", metavar="FILE", help="draw the box realization (2-D box instances)")
    sp.add_argument("--dump-graph", metavar="DOT")
    sp.set_defaults(func=cmd_sparse)

    sp = sub.add_parser("verify", help="property suite, single-instance checks or witness re-check")
    sp.add_argument("instance", nargs="?")
    sp.add_argument("--witness", metavar="FILE")
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=60)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="generate a random instance")
    sp.add_argument("--kind", choices=("atoms", "dyadic", "boxes"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--weight-mode", choices=("measure", "random"), default="measure")
    sp.add_argument("-o", "--output", metavar="FILE")
    sp.set_defaults(func=None)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen":
        try:
            spec = GeneratorSpec(args.kind, args.n, args.d, args.seed, args.weight_mode)
        except ValueError as exc:
            parser.error(str(exc))
        text = json.dumps(generate_instance(spec).to_json(), indent=1) + "\n"
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return 0

    start = time.perf_counter()
    try:
        result = args.func(args)
    except (InstanceError, InvalidCollection, OSError, ValueError) as exc:
        result = CommandResult("error", {"error": str(exc)})
    result.timing_ms = (time.perf_counter() - start) * 1000
    json.dump(result.to_json(), sys.stdout, indent=1)
    sys.stdout.write("\n")
    return EXIT[result.status]
