"""Numerical period functions for isochronous and non-isochronous examples."""
from pathlib import Path

from isochron.cli import load_spec
from isochron.conditions import monotonicity_index
from isochron.period import TWO_PI, classify_monotonicity, period_scan
from isochron.systems import catalog_lookup

SPECS = Path(__file__).resolve().parent / "specs"


def show(label, scan, verdict=None):
    print(f"{label}: max |T - 2pi| = {scan.max_deviation_from_2pi:.2e}")
    for a, t in zip(scan.amplitudes, scan.periods):
        print(f"    A={a:.2f}  T-2pi={t - TWO_PI:+.3e}")
    if verdict is not None:
        print(f"    {verdict.numeric_class}, expected {verdict.expected}, consistent={verdict.consistent}")


def main() -> None:
    for fid, vals in (("deg4.family1.case1", {"a_4_0": 1}), ("deg5.case2", {"b_4_1": 1}), ("abel.ab3", {})):
        show(f"{fid} {vals}", period_scan(catalog_lookup(fid).planar(), values=vals))
    for name in ("quadratic_a20.yaml", "abel_a2.yaml"):
        spec = load_spec(SPECS / name)
        b, _ = spec.exact_bindings()
        S = monotonicity_index(spec.lienard(b)).value.constant_value()
        scan = period_scan(spec.planar(b))
        show(f"{name} (index {S})", scan, classify_monotonicity(scan, S))


if __name__ == "__main__":
    main()
