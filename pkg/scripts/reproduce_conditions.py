"""Compute the first isochronicity conditions of the full quartic family.

Prints each nonzero condition with its weighted degree and term count, then
the monotonicity index.  Usage: python scripts/reproduce_conditions.py [m]
"""
import sys
import time
from pathlib import Path

from isochron.cli import load_spec
from isochron.conditions import conditions_for, monotonicity_index
from isochron.systems import default_weights

SPEC = Path(__file__).resolve().parent / "specs" / "full_c4.yaml"


def main(m: int = 3) -> None:
    spec = load_spec(SPEC)
    bindings, _ = spec.exact_bindings()
    lp = spec.lienard(bindings)
    t0 = time.perf_counter()
    cs = conditions_for(lp, m)
    w = default_weights(cs.variables)
    print(f"m={m}: {len(cs.conditions)} conditions in {time.perf_counter() - t0:.2f}s")
    for k, p in zip(cs.indices, cs.conditions):
        wd = p.weighted_degree(w)
        text = str(p)
        print(f"  P_{k + 1}: weighted degree {wd.degree}, {len(p.terms)} terms")
        print(f"    {text if len(text) < 400 else text[:400] + ' ...'}")
    mi = monotonicity_index(lp)
    print(f"monotonicity index = {mi.factor} * ({mi.normalized})")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
