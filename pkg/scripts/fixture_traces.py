"""Print the iteration trace, optimal constant and phi integrals for each fixture.

    python scripts/fixture_traces.py [tests/fixtures/*.json]
"""

import argparse
from fractions import Fraction
from pathlib import Path

from carleson_flow import carleson_constant, construct_phi
from carleson_flow.instance import load_collection

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def report(path):
    c = load_collection(path)
    res = carleson_constant(c)
    print(f"{path.name}: {len(c.sets)} sets, {len(c.atoms)} atoms, lambda = {res.lam}")
    for j, (lam, size) in enumerate(res.trace, 1):
        print(f"  step {j}: lambda_j = {lam}, next subcollection has {size} sets")
    print(f"  witness: {sorted(res.witness)}")
    phi = construct_phi(c, res.lam)
    measure = {a.id: a.measure for a in c.atoms}
    for q in c.ids:
        total = sum((x * measure[b] for b, x in phi.coefficients[q].items()), Fraction(0))
        print(f"  integral of phi_{q} = {total}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("paths", nargs="*", type=Path)
    args = p.parse_args()
    for path in args.paths or sorted(FIXTURES.glob("*.json")):
        report(path)


if __name__ == "__main__":
    main()
