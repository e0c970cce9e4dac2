"""Command-line entry point: ``isochron <command> ...``.

Every command builds a report mapping (``cmd_*`` functions, usable from
Python) and ``main`` writes it as YAML.  The ``payload`` part of a report is
deterministic; timings live under ``resources``.

Exit codes: 0 success, 2 a mathematical check failed, 3 inconclusive or
budget exceeded, 4 input error.
"""

from __future__ import annotations

import argparse
import logging
import os
import platform
import sys
import time
from typing import Mapping

import yaml
from gmpy2 import mpq

from . import __version__
from .algebra.numbers import QuadExt, rat_str
from .algebra.orders import WeightedOrder
from .algebra.parse import ParseError, parse_poly
from .algebra.poly import Poly
from .algebra.sturm import UPoly, exact_real_roots, squarefree_part, sturm_real_roots
from .conditions import (ConditionError, ConditionSet, conditions_for, homogenize_reparametrize,
                         monotonicity_index, normalize_a20)
from .groebner import (BudgetExceeded, GroebnerError, Ideal, buchberger, eliminate, radical_contains,
                       saturate)
from .period import PeriodError, classify_monotonicity, period_scan
from .systems import (FORMAT_VERSION, AbelSystem, SystemError_, SystemSpec, abel_names, catalog_ids,
                      catalog_lookup, catalog_settings, lienard_from_abel)
from .verify import (UrabeClosedForm, VerifyError, check_first_integral, check_linearization,
                     check_urabe_closed_form, check_zero_urabe, substitute_family)

log = logging.getLogger("isochron")

EXIT_OK, EXIT_MATH, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 2, 3, 4
BUDGET_ENV = "ISOCHRON_BUDGET_PAIRS"
DEFAULT_BUDGET = 20000


class InputError(ValueError):
    pass


class Inconclusive(RuntimeError):
    def __init__(self, msg: str, report: dict | None = None):
        super().__init__(msg)
        self.report = report


def default_budget() -> int:
    text = os.environ.get(BUDGET_ENV)
    if text is None:
        return DEFAULT_BUDGET
    try:
        return int(text)
    except ValueError:
        raise InputError(f"{BUDGET_ENV} must be an integer, got {text!r}") from None


def _versions() -> dict:
    import gmpy2
    import mpmath
    import scipy
    return {"isochron": __version__, "python": platform.python_version(), "gmpy2": gmpy2.version(),
            "mpmath": mpmath.__version__, "scipy": scipy.__version__}


def _report(command: str, inputs: dict, payload: dict, seconds: float) -> dict:
    return {"format_version": FORMAT_VERSION, "command": command, "inputs": inputs, "payload": payload,
            "resources": {"seconds": round(seconds, 3)}, "versions": _versions()}


# ---------------------------------------------------------------------- input files
def load_yaml(path: str) -> dict:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise InputError(f"{path}: malformed structured text{where}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a mapping at the top level")
    v = data.get("format_version", FORMAT_VERSION)
    if v != FORMAT_VERSION:
        raise InputError(f"{path}: unsupported format_version {v} (expected {FORMAT_VERSION})")
    return data


def load_spec(path: str) -> SystemSpec:
    data = load_yaml(path)
    body = data.get("system", data)
    try:
        return SystemSpec.from_mapping(body)
    except (SystemError_, ParseError) as exc:
        raise InputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------- conditions
def _weights_for(spec: SystemSpec, mode: str) -> WeightedOrder | None:
    if mode == "explicit":
        if not spec.weights:
            raise InputError("--weights explicit needs a 'weights' map in the spec file")
        return WeightedOrder.make("weighted-degrevlex", spec.weights)
    return None


def conditionset_payload(cs: ConditionSet) -> dict:
    return {
        "order_m": cs.order_m,
        "method": cs.method,
        "weights": cs.weights.descriptor(),
        "variables": list(cs.variables),
        "homogenized": cs.homogenized,
        "branch": cs.branch,
        "back_substitution": dict(cs.back_substitution),
        "conditions": [p.to_str(cs.weights) if _has_weights(p, cs.weights) else str(p) for p in cs.conditions],
        "indices": list(cs.indices),
        "urabe_coeffs": {f"c{2 * j + 1}": str(c) for j, c in enumerate(cs.urabe_coeffs)},
    }


def _has_weights(p: Poly, order: WeightedOrder) -> bool:
    if order.kind != "weighted-degrevlex":
        return True
    w = order.weight_map
    return all(v in w for v in p.used_vars())


def cmd_conditions(spec: SystemSpec, m: int = 9, N: int | None = None, weights: str = "default",
                   homogenize: bool = False, normalize: str = "none") -> tuple[dict, ConditionSet]:
    t0 = time.perf_counter()
    N = N or 2 * m + 4
    if N < 2 * m + 4:
        raise InputError(f"--series-order {N} too low for --order-m {m} (need >= {2 * m + 4})")
    try:
        bindings, _ = spec.exact_bindings()
        lp = spec.lienard(bindings)
    except SystemError_ as exc:
        raise InputError(str(exc)) from None
    cs = conditions_for(lp, m, N, _weights_for(spec, weights))
    if normalize != "none" or homogenize:
        cs = homogenize_reparametrize(cs)
    if normalize != "none":
        cs = normalize_a20(cs, {"a20_zero": "set_zero", "a20_one": "set_one"}[normalize])
    inputs = {"system": spec.to_mapping(), "order_m": m, "series_order": N, "weights": weights,
              "homogenize": homogenize, "normalize": normalize}
    return _report("conditions", inputs, conditionset_payload(cs), time.perf_counter() - t0), cs


# ---------------------------------------------------------------------- groebner
def read_ideal(data: Mapping) -> Ideal:
    """Ideal file: ``generators`` (or a conditions report) plus an order descriptor."""
    body = data.get("payload", data)
    gens = body.get("generators", body.get("conditions", body.get("basis")))
    if not gens:
        raise InputError("ideal file has no generators")
    order = body.get("order") or body.get("weights") or {"kind": "degrevlex"}
    try:
        polys = [parse_poly(str(g)) for g in gens]
        wo = WeightedOrder.from_descriptor(order)
    except (ParseError, ValueError) as exc:
        raise InputError(f"ideal file: {exc}") from None
    return Ideal(polys, wo)


def cmd_groebner(I: Ideal, budget: int | None = None, order: WeightedOrder | None = None) -> dict:
    t0 = time.perf_counter()
    if order is not None:
        I = Ideal(I.generators, order)
    budget = default_budget() if budget is None else budget
    inputs = {"generators": [str(g) for g in I.generators], "order": I.order.descriptor(), "budget_pairs": budget}
    try:
        G = buchberger(I, budget)
    except BudgetExceeded as exc:
        rep = _report("groebner", inputs, {"status": "budget_exceeded", "stats": exc.stats},
                      time.perf_counter() - t0)
        raise Inconclusive(str(exc), rep) from None
    payload = {"status": "ok", "order": G.order.descriptor(), "reduced": G.reduced, "complete": G.complete,
               "basis": [g.to_str(G.order) for g in G.basis], "unit_ideal": G.is_unit,
               "stats": {k: v for k, v in G.stats.items() if k != "seconds"}}
    return _report("groebner", inputs, payload, time.perf_counter() - t0)


# ---------------------------------------------------------------------- verify
_SETTING_CACHE: dict[tuple[str, int], ConditionSet] = {}


def setting_conditions(setting: str, m: int) -> ConditionSet:
    key = (setting, m)
    if key not in _SETTING_CACHE:
        spec = catalog_settings()[setting]
        b, _ = spec.exact_bindings()
        _SETTING_CACHE[key] = conditions_for(spec.lienard(b), m)
    return _SETTING_CACHE[key]


def _urabe_order_needed(urabe: Mapping) -> int:
    ks = [int(k[1:]) for k in (urabe.get("coefficients") or {})]
    return (max(ks) - 1) // 2 if ks else 0


def verify_family(fid: str, m: int = 9, order: int = 30, dps: int = 60) -> dict:
    """All applicable certificates for one catalog family."""
    fam = catalog_lookup(fid)
    rad = tuple(fam.radicals)
    checks: list[dict] = []
    cs = setting_conditions(fam.setting, m)
    sub = substitute_family(cs, fam, dps)
    checks.append({"check": "substitute_family", "route": f"conditions m={m}, {sub.mode}",
                   "passed": sub.all_zero, "residuals": sub.residuals,
                   **({"max_abs_residual": sub.max_abs, "working_dps": sub.dps} if sub.max_abs is not None else {})})
    if not fam.numeric_only:
        lp = fam.lienard()
        if fam.urabe.get("kind") == "zero":
            z = check_zero_urabe(lp, rad)
            checks.append({"check": "zero_urabe", "route": "g'+fg=1 (zero Urabe function)",
                           "passed": z.holds, "residual": "0" if z.holds else str(z.residual)[:200]})
        elif fam.urabe.get("kind") == "closed_form":
            h = UrabeClosedForm.from_mapping(fam.urabe)
            mm = max(m, _urabe_order_needed(fam.urabe))
            r = check_urabe_closed_form(lp, h, mm, None, rad)
            listed = {}
            for name, text in (fam.urabe.get("coefficients") or {}).items():
                k = int(name[1:])
                want = parse_poly(text)
                listed[name] = (h.series(k, lp.var)[k] - want).trim().is_zero()
            ok = r.holds and all(listed.values())
            checks.append({"check": "urabe_closed_form", "route": "X/(1+h(X)) = g e^F with closed-form h",
                           "passed": ok, "order": r.order, "identity": r.identity_holds,
                           "integrated": r.integrated_holds, "mismatched_coefficients": r.mismatches,
                           "listed_coefficients": listed})
        needs_planar = fam.first_integral or fam.linearization
        sysp = fam.planar() if needs_planar else None
        if fam.first_integral:
            fi = check_first_integral(sysp, fam.first_integral, order, rad)
            checks.append({"check": "first_integral", "route": fi.method, "passed": fi.holds,
                           "order": fi.order, "integral": fam.first_integral})
        if fam.linearization:
            li = check_linearization(sysp, fam.linearization["u"], fam.linearization["v"], order, rad)
            expected_fail = (fam.expect or {}).get("linearization") == "fails"
            checks.append({"check": "linearization", "route": f"series order {order}",
                           "passed": li.holds != expected_fail, "holds": li.holds,
                           "expected": "fails" if expected_fail else "holds",
                           "first_failure_order": li.first_failure_order, "scale_u": li.scale_u,
                           "scale_v": li.scale_v, "prefactor_u": li.prefactor_u,
                           "prefactor_v": li.prefactor_v, "same_scale": li.same_scale})
    verdict = all(c["passed"] for c in checks)
    return {"family": fid, "title": fam.title, "verdict": "verified" if verdict else "failed", "checks": checks}


def cmd_verify(fid: str, m: int = 9, order: int = 30, dps: int = 60) -> dict:
    t0 = time.perf_counter()
    try:
        payload = verify_family(fid, m, order, dps)
    except KeyError as exc:
        raise InputError(str(exc.args[0]) if exc.args else str(exc)) from None
    return _report("verify", {"family": fid, "order_m": m, "series_order": order, "precision_digits": dps},
                   payload, time.perf_counter() - t0)


# ---------------------------------------------------------------------- abel
def _slice_solutions(I: Ideal, fixed: dict[str, int], free: list[str], budget: int) -> tuple[list, str]:
    """Real points of the zero-dimensional slice, as exact values where possible.

    Returns (solutions, status) with status "ok", "empty" (no real points)
    or "inconclusive".
    """
    gens = [g.subs(fixed).trim() for g in I.generators]
    J = Ideal([g for g in gens if not g.is_zero()], WeightedOrder.make("degrevlex"))
    if not J.generators:
        return [], "inconclusive"
    G = buchberger(J, budget)
    if G.is_unit:
        return [], "empty"
    roots: dict[str, list] = {}
    for v in free:
        others = [u for u in free if u != v]
        E = eliminate(Ideal(G.basis, J.order), others, budget) if others else Ideal(G.basis, J.order)
        uni = [g for g in E.generators if set(g.used_vars()) <= {v}]
        if not uni:
            return [], "inconclusive"     # slice not zero-dimensional
        p = UPoly.from_poly(min(uni, key=lambda g: g.degree(v)))
        sq = squarefree_part(p)
        if sturm_real_roots(sq) == 0:
            return [], "empty"
        exact, rest = exact_real_roots(sq)
        if rest.degree > 0 and sturm_real_roots(rest) > 0:
            return [], "inconclusive"
        roots[v] = exact
    sols = [{}]
    for v in free:
        sols = [dict(s, **{v: r}) for s in sols for r in roots[v]]
    good = []
    for s in sols:
        vals = dict(fixed, **s)
        if all(_is_zero_value(g.evaluate(vals)) for g in J.generators):
            good.append(s)
    return good, ("ok" if good else "empty")


def _is_zero_value(v) -> bool:
    if isinstance(v, QuadExt):
        return v.is_zero()
    return v == 0


def _value_str(v) -> str:
    return str(v) if isinstance(v, QuadExt) else rat_str(v)


def cmd_abel(n: int, m: int = 9, budget: int | None = None) -> dict:
    """Isochronous Abel systems x' = -y, y' = x(1 + a_1 y + ... + a_n y^n) with a_n != 0."""
    if not 1 <= n <= 9:
        raise InputError("n must satisfy 1 <= n <= 9")
    budget = default_budget() if budget is None else budget
    t0 = time.perf_counter()
    names = abel_names(n)
    lp = lienard_from_abel(AbelSystem.symbolic(n))
    cs = conditions_for(lp, m)
    inputs = {"n": n, "order_m": m, "budget_pairs": budget}
    payload: dict = {"conditions": len(cs.conditions), "weights": cs.weights.descriptor()}
    an = Poly.variable(names[-1])
    try:
        I = Ideal(cs.conditions, cs.weights)
        G = buchberger(I, budget)
        payload["groebner"] = {"size": len(G.basis), "basis": [g.to_str(G.order) for g in G.basis],
                               "stats": {k: v for k, v in G.stats.items() if k != "seconds"}}
        S = saturate(I, an, budget)
        if S.has_unit():
            payload.update(verdict=f"no isochronous with {names[-1]}≠0", route="saturation to the unit ideal")
            return _report("abel", inputs, payload, time.perf_counter() - t0)
        families = []
        # a_n != 0: rescale y so that a_n = 1 (or -1 when n is even); what remains is zero-dimensional
        status_all = []
        for sgn in ((1,) if n % 2 else (1, -1)):
            sols, status = _slice_solutions(S, {names[-1]: sgn}, names[:-1], budget)
            status_all.append(status)
            for s in sols:
                families.append(dict({k: _value_str(v) for k, v in s.items()}, **{names[-1]: str(sgn)}))
        if "inconclusive" in status_all:
            payload.update(verdict="inconclusive at this m/budget", route="eliminants with unresolved roots")
            raise Inconclusive(payload["verdict"], _report("abel", inputs, payload, time.perf_counter() - t0))
        if not families:
            payload.update(verdict=f"no isochronous with {names[-1]}≠0",
                           route="eliminants with no admissible real roots (Sturm)")
            return _report("abel", inputs, payload, time.perf_counter() - t0)
        payload["slice_points"] = families
        fam = _abel_family(n, families, names)
        payload.update(fam)
        if n == 3 and fam.get("family_exact"):
            payload.update(_abel_n3_certificates(I, G, budget, m))
    except BudgetExceeded as exc:
        payload.update(verdict="inconclusive at this m/budget", route=f"budget exceeded: {exc}")
        raise Inconclusive(payload["verdict"], _report("abel", inputs, payload, time.perf_counter() - t0)) from None
    return _report("abel", inputs, payload, time.perf_counter() - t0)


def _abel_family(n: int, points: list[dict], names: list[str]) -> dict:
    """Undo the rescaling: a slice point with a_1 = r_1 gives a_k = (a_1/r_1)^k r_k ... as a family in a_1."""
    out = {"families": []}
    exact = True
    for p in points:
        try:
            r1 = Poly.parse(p[names[0]]).constant_value()
        except (ParseError, ValueError):
            exact = False
            out["families"].append({k: v for k, v in p.items()})
            continue
        if r1 == 0:
            exact = False
            out["families"].append({k: v for k, v in p.items()})
            continue
        fam = {names[0]: names[0]}
        for k, name in enumerate(names[1:], start=2):
            rk = Poly.parse(p[name]).constant_value()
            c = rk / r1 ** k
            fam[name] = f"{rat_str(c)}*{names[0]}^{k}" if c else "0"
        out["families"].append(fam)
    out["family_exact"] = exact and len(points) == 1
    if len(out["families"]) == 1 and exact:
        fam = out["families"][0]
        out["verdict"] = "unique family"
        out["route"] = "saturation by a_n, slice a_n = 1, exact eliminant roots, inverse rescaling"
        out["family"] = fam
    else:
        out["verdict"] = "families found"
        out["route"] = "saturation by a_n, eliminants"
    return out


def _abel_n3_certificates(I: Ideal, G, budget: int, m: int) -> dict:
    from .verify import abel_first_integral
    a1, a2, a3 = (Poly.variable(v) for v in ("a1", "a2", "a3"))
    p2 = a2.scale(3) - a1 ** 2
    p3 = a3.scale(27) - a1 ** 3
    fam_lp = lienard_from_abel(AbelSystem(3, (a1, (a1 ** 2).scale(mpq(1, 3)), (a1 ** 3).scale(mpq(1, 27)))))
    h = UrabeClosedForm.from_mapping({"k1": "-a1/3", "k2": "1", "k3": "0", "p": 1, "q": 2})
    u = check_urabe_closed_form(fam_lp, h, m)
    fi = abel_first_integral(AbelSystem(3, (a1, (a1 ** 2).scale(mpq(1, 3)), (a1 ** 3).scale(mpq(1, 27)))))
    J = Ideal([p2, p3], I.order)
    GJ = buchberger(J, budget)
    return {
        "normal_forms": {"3*a2 - a1^2": str(G.normal_form(p2)), "27*a3 - a1^3": str(G.normal_form(p3)),
                         "(27*a3 - a1^3)^2": str(G.normal_form(p3 * p3))},
        "radical_membership": {"3*a2 - a1^2": radical_contains(I, p2, budget),
                               "27*a3 - a1^3": radical_contains(I, p3, budget)},
        "conditions_in_family_ideal": all(GJ.contains(g) for g in I.generators),
        "family_ideal_basis": [str(g) for g in GJ.basis],
        "urabe": {"h": "-a1*X/3", "passed": u.holds, "order": u.order},
        "first_integral": {"expr": fi.text, "closed_form": fi.closed_form, "verified": fi.verified},
    }


# ---------------------------------------------------------------------- period
def cmd_period(spec: SystemSpec, lo: float, hi: float, step: float, tol: float) -> dict:
    t0 = time.perf_counter()
    if spec.names() and any(v == "free" for v in spec.coefficients.values()):
        raise InputError("period scans need every coefficient bound to a number")
    try:
        if spec.is_numeric():
            vals = spec.numeric_values(30)
            syms = {k: Poly.variable(k) for k in spec.coefficients}
            sysp = spec.planar(syms)
            values = {k: float(v) for k, v in vals.items()}
            S = None
        else:
            b, _ = spec.exact_bindings()
            sysp = spec.planar(b)
            values = {}
            S = monotonicity_index(spec.lienard(b)).value
    except SystemError_ as exc:
        raise InputError(str(exc)) from None
    scan = period_scan(sysp, lo, hi, step, tol, values)
    payload = {"rows": scan.rows(), "max_deviation_from_2pi": scan.max_deviation_from_2pi,
               "integrator_tolerance": tol, "gaps": [{"amplitude": a, "reason": r} for a, r in scan.gaps]}
    if S is not None and S.is_constant():
        sval = S.constant_value()
        payload["monotonicity_index"] = rat_str(sval)
        try:
            v = classify_monotonicity(scan, sval)
            payload.update(classification=v.numeric_class, expected=v.expected, consistent=v.consistent,
                           noise_band=v.band)
        except PeriodError as exc:
            payload.update(classification="inconclusive", note=str(exc))
    inputs = {"system": spec.to_mapping(), "lo": lo, "hi": hi, "step": step, "tol": tol}
    return _report("period", inputs, payload, time.perf_counter() - t0)


# ---------------------------------------------------------------------- catalog
def cmd_catalog_list() -> dict:
    rows = [{"id": fid, "title": catalog_lookup(fid).title, "setting": catalog_lookup(fid).setting}
            for fid in catalog_ids()]
    return {"format_version": FORMAT_VERSION, "families": rows}


def cmd_catalog_show(fid: str) -> dict:
    try:
        fam = catalog_lookup(fid)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    out = {"format_version": FORMAT_VERSION, "id": fam.id, "title": fam.title, "setting": fam.setting,
           "system": fam.spec.to_mapping(), "urabe": dict(fam.urabe)}
    for k in ("first_integral", "linearization", "exact_text", "expect", "notes"):
        v = getattr(fam, k)
        if v:
            out[k] = v
    return out


# ---------------------------------------------------------------------- argparse
def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isochron", description="Isochronicity conditions, Groebner bases and checks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")

    c = sub.add_parser("conditions", help="isochronicity conditions of a system")
    c.add_argument("spec")
    c.add_argument("--order-m", type=int, default=9)
    c.add_argument("--series-order", type=int)
    c.add_argument("--weights", choices=["default", "explicit"], default="default")
    c.add_argument("--homogenize", action="store_true")
    c.add_argument("--normalize", choices=["none", "a20_zero", "a20_one"], default="none")
    out(c)

    g = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    g.add_argument("ideal")
    g.add_argument("--order", help="order kind (lex, degrevlex, weighted-degrevlex); default from file")
    g.add_argument("--budget-pairs", type=int)
    out(g)

    v = sub.add_parser("verify", help="certificates for a catalog family")
    v.add_argument("family")
    v.add_argument("--order-m", type=int, default=9)
    v.add_argument("--series-order", type=int, default=30)
    v.add_argument("--precision-digits", type=int, default=60)
    out(v)

    a = sub.add_parser("abel", help="isochronous Abel systems of degree n")
    a.add_argument("n", type=int)
    a.add_argument("--order-m", type=int, default=9)
    a.add_argument("--budget-pairs", type=int)
    out(a)

    pr = sub.add_parser("period", help="numerical period function scan")
    pr.add_argument("spec")
    pr.add_argument("--lo", type=float, default=0.05)
    pr.add_argument("--hi", type=float, default=0.4)
    pr.add_argument("--step", type=float, default=0.05)
    pr.add_argument("--tol", type=float, default=1e-10)
    out(pr)

    cat = sub.add_parser("catalog", help="list or show catalog families")
    cs = cat.add_subparsers(dest="action", required=True)
    cs.add_parser("list")
    sh = cs.add_parser("show")
    sh.add_argument("family")
    return p


class _NoAliasDumper(yaml.SafeDumper):
    def ignore_aliases(self, data):
        return True


def dump_report(report: dict) -> str:
    return yaml.dump(report, Dumper=_NoAliasDumper, sort_keys=False, allow_unicode=True, width=100)


def _emit(report: dict, path: str | None) -> None:
    text = dump_report(report)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_for(report: dict) -> int:
    pl = report.get("payload", {})
    if pl.get("verdict") == "failed":
        return EXIT_MATH
    if pl.get("consistent") is False:
        return EXIT_MATH
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "conditions":
            rep, _ = cmd_conditions(load_spec(args.spec), args.order_m, args.series_order, args.weights,
                                    args.homogenize, args.normalize)
        elif args.command == "groebner":
            I = read_ideal(load_yaml(args.ideal))
            order = None
            if args.order:
                order = WeightedOrder.make(args.order, dict(I.order.weights) if args.order != "lex" else None)
            rep = cmd_groebner(I, args.budget_pairs, order)
        elif args.command == "verify":
            rep = cmd_verify(args.family, args.order_m, args.series_order, args.precision_digits)
        elif args.command == "abel":
            rep = cmd_abel(args.n, args.order_m, args.budget_pairs)
        elif args.command == "period":
            rep = cmd_period(load_spec(args.spec), args.lo, args.hi, args.step, args.tol)
        else:
            rep = cmd_catalog_list() if args.action == "list" else cmd_catalog_show(args.family)
    except Inconclusive as exc:
        if exc.report:
            _emit(exc.report, getattr(args, "out", None))
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (InputError, SystemError_, ParseError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConditionError, VerifyError, GroebnerError, PeriodError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    _emit(rep, getattr(args, "out", None))
    return _exit_for(rep)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
