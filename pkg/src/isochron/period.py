"""Numerical period function of a center.

The orbit through (A, 0) turns counterclockwise (the linear part is the
rotation x' = -y, y' = x).  We integrate to the crossing of the negative
x-axis and then on to the next upward crossing of the positive x-axis;
splitting the run keeps the starting point from registering as an event.

Default mode uses scipy's DOP853 with dense output; scipy locates events by
root finding on the interpolant.  ``extended=True`` switches to mpmath's
Taylor-series integrator with the return time found by a secant search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .algebra.numbers import to_rat
from .systems import PlanarSystem

TWO_PI = 2 * math.pi


class PeriodError(RuntimeError):
    pass


@dataclass
class OrbitPeriod:
    amplitude: float
    period: float
    error_estimate: float
    tolerance: float


@dataclass
class PeriodScan:
    amplitudes: list[float]
    periods: list[float]
    errors: list[float]
    integrator_tolerance: float
    max_deviation_from_2pi: float
    gaps: list[tuple[float, str]] = field(default_factory=list)

    def __post_init__(self):
        if not (len(self.amplitudes) == len(self.periods) == len(self.errors)):
            raise ValueError("amplitudes, periods and errors must have equal length")

    def rows(self) -> list[dict]:
        return [{"amplitude": a, "period": p, "error_estimate": e}
                for a, p, e in zip(self.amplitudes, self.periods, self.errors)]


def _rhs(sys: PlanarSystem, values: Mapping | None):
    f = sys.numeric(values or {}, float)

    def rhs(t, z):
        return f(z[0], z[1])

    return rhs


def _one_period(rhs, A: float, rtol: float, max_time: float) -> float:
    rtol = max(rtol, 3e-14)      # scipy's floor for DOP853
    opts = dict(method="DOP853", rtol=rtol, atol=rtol * 1e-2, dense_output=True)

    def down(t, z):
        return z[1]
    down.terminal, down.direction = True, -1

    def up(t, z):
        return z[1]
    up.terminal, up.direction = True, 1

    s1 = solve_ivp(rhs, (0.0, max_time), [A, 0.0], events=down, **opts)
    if s1.status != 1 or not len(s1.t_events[0]):
        raise PeriodError(f"orbit from ({A}, 0) does not reach the negative x-axis")
    t1, z1 = s1.t_events[0][0], s1.y_events[0][0]
    if z1[0] >= 0:
        raise PeriodError(f"orbit from ({A}, 0) crosses y = 0 at x = {z1[0]:.3g} >= 0")
    s2 = solve_ivp(rhs, (t1, t1 + max_time), [z1[0], 0.0], events=up, **opts)
    if s2.status != 1 or not len(s2.t_events[0]):
        raise PeriodError(f"orbit from ({A}, 0) does not return to the positive x-axis")
    T, z2 = s2.t_events[0][0], s2.y_events[0][0]
    if z2[0] <= 0:
        raise PeriodError(f"orbit from ({A}, 0) returns at x = {z2[0]:.3g} <= 0")
    return float(T)


def orbit_period_estimate(sys: PlanarSystem, amplitude: float, tol: float = 1e-10,
                          values: Mapping | None = None, max_time: float = 100.0) -> OrbitPeriod:
    """Period plus an error estimate from a second run at tol/100."""
    if amplitude <= 0:
        raise ValueError("amplitude must be positive")
    rhs = _rhs(sys, values)
    T1 = _one_period(rhs, amplitude, tol, max_time)
    T2 = _one_period(rhs, amplitude, tol / 100, max_time)
    return OrbitPeriod(amplitude, T2, abs(T1 - T2), tol)


def orbit_period(sys: PlanarSystem, amplitude: float, tol: float = 1e-10,
                 values: Mapping | None = None, extended: bool = False, dps: int = 30) -> float:
    if extended:
        return float(orbit_period_extended(sys, amplitude, dps, values))
    return orbit_period_estimate(sys, amplitude, tol, values).period


def orbit_period_extended(sys: PlanarSystem, amplitude, dps: int = 30, values: Mapping | None = None):
    """Period to about ``dps`` digits with mpmath's Taylor integrator."""
    with mpmath.workdps(dps + 10):
        vals = {k: (mpmath.mpf(int(to_rat(v).numerator)) / int(to_rat(v).denominator)
                    if not isinstance(v, mpmath.mpf) else v) for k, v in (values or {}).items()}
        f = sys.numeric(vals, mpmath.mpf)
        A = mpmath.mpf(amplitude) if not hasattr(amplitude, "numerator") else \
            mpmath.mpf(int(amplitude.numerator)) / int(amplitude.denominator)
        sol = mpmath.odefun(lambda t, z: list(f(z[0], z[1])), 0, [A, mpmath.mpf(0)],
                            tol=mpmath.mpf(10) ** (-dps - 5))
        guess = mpmath.mpf(orbit_period(sys, float(A), 1e-10, {k: float(v) for k, v in vals.items()}))
        T = mpmath.findroot(lambda t: sol(t)[1], guess, tol=mpmath.mpf(10) ** (-2 * dps))
        if sol(T)[0] <= 0:
            raise PeriodError("extended integration converged to the wrong crossing")
        return +T


def _amplitudes(lo: float, hi: float, step: float) -> list[float]:
    if not (0 < lo < hi) or step <= 0:
        raise ValueError("need 0 < lo < hi and step > 0")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + k * step, 12) for k in range(n + 1)]


def period_scan(sys: PlanarSystem, lo: float = 0.05, hi: float = 0.4, step: float = 0.05,
                tol: float = 1e-10, values: Mapping | None = None) -> PeriodScan:
    amps, Ts, errs, gaps = [], [], [], []
    for A in _amplitudes(lo, hi, step):
        try:
            r = orbit_period_estimate(sys, A, tol, values)
        except PeriodError as exc:
            gaps.append((A, str(exc)))
            continue
        amps.append(A)
        Ts.append(r.period)
        errs.append(r.error_estimate)
    dev = max((abs(T - TWO_PI) for T in Ts), default=float("nan"))
    return PeriodScan(amps, Ts, errs, tol, dev, gaps)


@dataclass
class MonotonicityVerdict:
    numeric_class: str              # increasing, decreasing, flat, mixed
    expected: str                   # from the sign of S
    consistent: bool | None         # None: S = 0 and the scan is not flat
    band: float


def _classify(scan: PeriodScan) -> tuple[str, float]:
    band = 10 * scan.integrator_tolerance + max(scan.errors, default=0.0)
    d = np.diff(np.asarray(scan.periods))
    if np.all(np.abs(np.asarray(scan.periods) - scan.periods[0]) <= band):
        return "flat", band
    if np.all(d > band):
        return "increasing", band
    if np.all(d < -band):
        return "decreasing", band
    return "mixed", band


def classify_monotonicity(scan: PeriodScan, S_value) -> MonotonicityVerdict:
    """Compare the scan's shape with the sign of the monotonicity index."""
    if len(scan.periods) < 5:
        raise PeriodError("need at least 5 amplitudes to classify the period function")
    s = to_rat(S_value) if not isinstance(S_value, float) else S_value
    expected = "increasing" if s > 0 else "decreasing" if s < 0 else "flat"
    cls, band = _classify(scan)
    if cls == "flat" and expected != "flat":
        raise PeriodError(f"inconclusive: period variation below the noise band {band:.2e} although S != 0")
    if expected == "flat":
        return MonotonicityVerdict(cls, expected, True if cls == "flat" else None, band)
    return MonotonicityVerdict(cls, expected, cls == expected, band)


__all__ = [
    "orbit_period", "orbit_period_estimate", "orbit_period_extended", "period_scan",
    "classify_monotonicity", "PeriodScan", "OrbitPeriod", "MonotonicityVerdict", "PeriodError", "TWO_PI",
]
