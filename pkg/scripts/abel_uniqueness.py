"""Classify isochronous Abel systems x' = -y, y' = x(1 + a_1 y + ... + a_n y^n) for small n."""
import sys
import time

from isochron.cli import Inconclusive, cmd_abel


def main(degrees=(3, 4, 5), m: int = 7) -> None:
    for n in degrees:
        t0 = time.perf_counter()
        try:
            pl = cmd_abel(n, m)["payload"]
        except Inconclusive as exc:
            print(f"n={n}: inconclusive ({exc})")
            continue
        print(f"n={n}, m={m}: {pl['verdict']}  [{time.perf_counter() - t0:.1f}s]")
        if "route" in pl:
            print(f"    route: {pl['route']}")
        if "family" in pl:
            print(f"    family: {pl['family']}")


if __name__ == "__main__":
    main(tuple(int(a) for a in sys.argv[1:]) or (3, 4, 5))
