import math

import mpmath
import pytest

from isochron.algebra.poly import Poly
from isochron.period import (TWO_PI, PeriodError, PeriodScan, classify_monotonicity, orbit_period,
                             orbit_period_estimate, orbit_period_extended, period_scan)
from isochron.systems import PlanarSystem, cn_planar

x, y = Poly.variables("x", "y")
LINEAR = PlanarSystem(-y, x)


def test_linear_center_is_flat():
    scan = period_scan(LINEAR)
    assert scan.max_deviation_from_2pi < 1e-9
    assert classify_monotonicity(scan, 0).numeric_class == "flat"


def test_quadratic_period_grows():
    # x'' + x + x^2 = 0: T(A) = 2 pi (1 + 5 A^2 / 12 + ...) for small A
    sys = cn_planar({"a_2_0": 1}, 2)
    A = 0.05
    T = orbit_period(sys, A)
    assert T == pytest.approx(TWO_PI * (1 + 5 * A * A / 12), rel=5e-5)


def test_error_estimate_is_small():
    r = orbit_period_estimate(cn_planar({"a_2_0": 1}, 2), 0.2, tol=1e-10)
    assert r.error_estimate < 1e-8


def test_extended_precision_matches():
    sys = cn_planar({"a_2_0": 1}, 2)
    T = orbit_period_extended(sys, mpmath.mpf("0.2"), dps=25)
    assert abs(float(T) - orbit_period(sys, 0.2, tol=1e-12)) < 1e-9


def test_extended_linear_is_two_pi():
    with mpmath.workdps(30):
        T = orbit_period_extended(LINEAR, 1, dps=25)
        assert abs(T - 2 * mpmath.pi) < mpmath.mpf(10) ** -20


def test_escaping_orbit_is_a_gap():
    # the saddle of x'' + x + x^2 = 0 sits at x = -1; amplitude 1.5 has no closed orbit
    scan = period_scan(cn_planar({"a_2_0": 1}, 2), 0.5, 1.5, 0.5)
    assert scan.gaps and scan.gaps[-1][0] == 1.5


def test_bad_arguments():
    with pytest.raises(ValueError):
        period_scan(LINEAR, 0.4, 0.1, 0.1)
    with pytest.raises(ValueError):
        orbit_period(LINEAR, -1.0)


def test_classification_rules():
    up = PeriodScan([0.1 * k for k in range(1, 6)], [6.0 + 0.01 * k for k in range(5)], [0.0] * 5, 1e-10, 0.1)
    assert classify_monotonicity(up, 10).consistent is True
    assert classify_monotonicity(up, -1).consistent is False
    assert classify_monotonicity(up, 0).consistent is None
    flat = PeriodScan([0.1 * k for k in range(1, 6)], [TWO_PI] * 5, [0.0] * 5, 1e-10, 0.0)
    with pytest.raises(PeriodError, match="inconclusive"):
        classify_monotonicity(flat, 3)
    with pytest.raises(PeriodError):
        classify_monotonicity(PeriodScan([0.1], [6.0], [0.0], 1e-10, 0.1), 1)
    with pytest.raises(ValueError):
        PeriodScan([0.1], [], [], 1e-10, 0.0)


def test_rows_are_serializable():
    scan = period_scan(LINEAR, 0.1, 0.3, 0.1)
    assert [r["amplitude"] for r in scan.rows()] == [0.1, 0.2, 0.3]
    assert all(math.isfinite(r["period"]) for r in scan.rows())
