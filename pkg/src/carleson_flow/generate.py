"""Seeded random instances."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .instance import Instance
from .model import Box, Collection, DyadicCube


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    d: int = 1
    seed: int = 0
    weight_mode: str = "measure"

    def __post_init__(self):
        if self.kind not in ("atoms", "dyadic", "boxes"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        if self.weight_mode not in ("measure", "random"):
            raise ValueError(f"unknown weight mode {self.weight_mode!r}")


def _dyadic(rng: random.Random, n: int, d: int) -> list[DyadicCube]:
    # cubes inside [0, 2)^d, at most `depth` halvings below unit size
    depth = 2 + n // 6
    out = []
    for _ in range(n):
        if out and rng.random() < 0.1:
            out.append(rng.choice(out))
            continue
        level = -rng.randint(0, depth)
        span = 2 << -level
        out.append(DyadicCube(level, tuple(rng.randrange(span) for _ in range(d))))
    return out


def _boxes(rng: random.Random, n: int, d: int) -> list[Box]:
    # integer grid of side `grid`, coordinates divided by 4
    grid = max(8, 4 * n)
    out = []
    for _ in range(n):
        if out and rng.random() < 0.1:
            out.append(rng.choice(out))
            continue
        low, high = [], []
        for _ in range(d):
            length = rng.randint(1, grid // 2)
            a = rng.randint(0, grid - length)
            low.append(Fraction(a, 4))
            high.append(Fraction(a + length, 4))
        out.append(Box(tuple(low), tuple(high)))
    return out


def _atoms(rng: random.Random, n: int, ids: list[str]) -> list[tuple[list[str], Fraction]]:
    p = min(0.5, 2.5 / n) if n > 2 else 0.5
    sigs: dict[tuple[int, ...], Fraction] = {}
    for _ in range(rng.randint(n, 3 * n)):
        sig = tuple(q for q in range(n) if rng.random() < p) or (rng.randrange(n),)
        sigs[sig] = Fraction(rng.randint(1, 12), rng.randint(1, 4))
    covered = {q for sig in sigs for q in sig}
    for q in range(n):
        if q not in covered:
            sigs.setdefault((q,), Fraction(rng.randint(1, 12), rng.randint(1, 4)))
    return [([ids[q] for q in sig], mu) for sig, mu in sigs.items()]


def generate_instance(spec: GeneratorSpec) -> Instance:
    """Deterministic in the GeneratorSpec (stdlib Mersenne Twister seeded with its fields)."""
    rng = random.Random(f"{spec.kind}:{spec.n}:{spec.d}:{spec.seed}")
    ids = [f"Q{i + 1}" for i in range(spec.n)]
    inst = Instance(spec.kind, ids, [None] * spec.n, [None] * spec.n)
    if spec.kind == "dyadic":
        inst.cubes = _dyadic(rng, spec.n, spec.d)
    elif spec.kind == "boxes":
        inst.boxes = _boxes(rng, spec.n, spec.d)
    else:
        inst.atoms = _atoms(rng, spec.n, ids)
    if spec.weight_mode == "random":
        measures = inst.build().set_measures
        inst.weights = [mu * Fraction(rng.randint(1, 8), 4) for mu in measures]
    return inst


def generate(spec: GeneratorSpec) -> Collection:
    return generate_instance(spec).build()


def corpus(count: int, n_max: int = 12, seed: int = 0) -> list[tuple[GeneratorSpec, Collection]]:
    """A reproducible mix of dyadic (d = 1, 2), box (d = 1, 2, 3) and atom instances."""
    rng = random.Random(seed)
    kinds = [("dyadic", 1), ("dyadic", 2), ("boxes", 1), ("boxes", 2), ("boxes", 3), ("atoms", 1)]
    out = []
    for i in range(count):
        kind, d = kinds[i % len(kinds)]
        spec = GeneratorSpec(kind, rng.randint(1, n_max), d, rng.getrandbits(63),
                             rng.choice(("measure", "random")))
        out.append((spec, generate(spec)))
    return out
