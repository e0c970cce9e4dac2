"""Run every applicable certificate on each catalog family and tabulate the verdicts."""
import sys
import time

from isochron.cli import verify_family
from isochron.systems import catalog_ids


def main(m: int = 9) -> int:
    bad = 0
    for fid in catalog_ids():
        t0 = time.perf_counter()
        rep = verify_family(fid, m=m)
        checks = ", ".join(f"{c['check']}={'ok' if c['passed'] else 'FAIL'}" for c in rep["checks"])
        print(f"{fid:<22} {rep['verdict']:<9} {time.perf_counter() - t0:6.1f}s  {checks}")
        bad += rep["verdict"] != "verified"
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 9))
