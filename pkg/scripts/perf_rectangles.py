"""Time lambda + sparse on large planar rectangle collections.

    python scripts/perf_rectangles.py --n 200
"""

import argparse
import time

from carleson_flow import (
    Box,
    GeneratorSpec,
    build_from_boxes,
    carleson_constant,
    construct_phi,
    construct_selection,
    generate,
    realize_boxes,
    verify_witness,
)


def shifted_squares(n):
    # square i is [i, i + n) x [-i, n - i): every cell sees a distinct run of indices
    return build_from_boxes([Box((i, -i), (i + n, n - i)) for i in range(n)])


def crossing_strips(n):
    half = n // 2
    vertical = [Box((2 * i, 0), (2 * i + 1, 2 * half)) for i in range(half)]
    horizontal = [Box((0, 2 * i), (2 * half, 2 * i + 1)) for i in range(n - half)]
    return build_from_boxes(vertical + horizontal)


def run(name, build):
    t0 = time.perf_counter()
    c = build()
    t1 = time.perf_counter()
    res = carleson_constant(c)
    t2 = time.perf_counter()
    phi = construct_phi(c, res.lam)
    sel = construct_selection(c, res.lam)
    t3 = time.perf_counter()
    real = realize_boxes(c, sel)
    t4 = time.perf_counter()
    problems = verify_witness(c, phi) + verify_witness(c, sel) + verify_witness(c, real)
    t5 = time.perf_counter()
    pieces = sum(len(v) for v in real.boxes.values())
    print(f"{name:16s} atoms={len(c.atoms):7d} lambda={float(res.lam):.4f} iters={res.iterations} "
          f"build={t1 - t0:.2f}s lambda={t2 - t1:.2f}s witness={t3 - t2:.2f}s "
          f"realize={t4 - t3:.2f}s ({pieces} boxes) verify={t5 - t4:.2f}s ok={not problems}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    run("generated", lambda: generate(GeneratorSpec("boxes", args.n, 2, args.seed)))
    run("generated-rand", lambda: generate(GeneratorSpec("boxes", args.n, 2, args.seed, "random")))
    run("shifted-squares", lambda: shifted_squares(args.n))
    run("crossing-strips", lambda: crossing_strips(args.n))


if __name__ == "__main__":
    main()
