import pytest
from gmpy2 import mpq

from isochron.algebra.parse import parse_expr
from isochron.algebra.poly import Poly
from isochron.conditions import conditions_for
from isochron.systems import AbelSystem, SystemSpec, catalog_lookup, catalog_settings, lienard_from_abel
from isochron.verify import (UrabeClosedForm, VerifyError, abel_first_integral, check_first_integral,
                             check_linearization, check_urabe_closed_form, check_zero_urabe, substitute_family)

ZERO_KIND = [f"deg4.family1.case{i}" for i in (1, 3, 4, 5, 6, 7)] + \
    [f"deg4.family2.case{i}" for i in (1, 3, 4, 5, 6)] + ["deg5.case1", "deg5.case2"]


@pytest.mark.parametrize("fid", ZERO_KIND)
def test_zero_urabe_families(fid):
    rec = catalog_lookup(fid)
    assert check_zero_urabe(rec.lienard(), rec.radicals).holds


def test_zero_urabe_fails_for_nonzero_urabe():
    rec = catalog_lookup("deg4.family1.case2")
    r = check_zero_urabe(rec.lienard())
    assert not r.holds and not r.residual.is_zero()


@pytest.mark.parametrize("fid", ["deg4.family1.case1", "deg4.family1.case2", "deg4.family1.case3",
                                 "deg5.case1", "deg5.case2", "abel.ab3"])
def test_printed_first_integrals(fid):
    rec = catalog_lookup(fid)
    r = check_first_integral(rec.planar(), rec.first_integral)
    assert r.holds and r.method == "exact"


def test_first_integral_detects_wrong_candidate():
    rec = catalog_lookup("deg5.case2")
    r = check_first_integral(rec.planar(), "(x^2 + y^2)^2/(1 + b_4_1*x^4)")
    assert not r.holds


def test_series_first_integral_for_algebraic_expression():
    rec = catalog_lookup("deg4.family1.case3")
    # a fractional power of a first integral is again one; exercises the series route
    r = check_first_integral(rec.planar(), "(x^2 + y^2)/(-1 + a_2_2*x^3)^(2/3)", order=16)
    assert r.holds and r.method == "series"
    bad = check_first_integral(rec.planar(), "(x^2 + y^2)/(-1 + a_2_2*x^3)^(1/3)", order=16)
    assert not bad.holds and bad.lowest_residual_degree is not None


@pytest.mark.parametrize("fid", ["deg4.family1.case1", "deg4.family1.case3", "deg5.case1", "deg5.case2"])
def test_printed_linearizations(fid):
    rec = catalog_lookup(fid)
    r = check_linearization(rec.planar(), rec.linearization["u"], rec.linearization["v"], order=30)
    assert r.holds, r


def test_reflected_map_is_recorded():
    rec = catalog_lookup("deg5.case1")
    r = check_linearization(rec.planar(), rec.linearization["u"], rec.linearization["v"], order=20)
    assert r.holds and not r.same_scale
    assert (r.scale_u, r.scale_v) == ("-1", "1")


def test_s2_printed_linearization_fails_at_degree_four():
    rec = catalog_lookup("deg4.family1.case2")
    assert rec.expect.get("linearization") == "fails"
    r = check_linearization(rec.planar(), rec.linearization["u"], rec.linearization["v"], order=12)
    assert not r.holds and r.first_failure_order == 4


def test_linearization_rejects_degenerate_maps():
    rec = catalog_lookup("deg5.case2")
    with pytest.raises(VerifyError):
        check_linearization(rec.planar(), "x^2", "y")


def test_perturbed_map_fails():
    rec = catalog_lookup("deg5.case2")
    u = rec.linearization["u"] + "*(1 + x^3)"
    assert not check_linearization(rec.planar(), u, rec.linearization["v"], order=12).holds


def test_closed_form_series():
    h = UrabeClosedForm.from_mapping({"k1": "b", "k2": "2", "k3": "b^2", "p": 3, "q": 6})
    b = Poly.variable("b")
    assert h.coefficient(3) == b.scale(mpq(1, 2))
    assert h.coefficient(9) == (b ** 3).scale(mpq(-1, 16))
    assert h.coefficient(21) == (b ** 7).scale(mpq(-5, 2048))
    assert h.coefficient(5).is_zero()
    with pytest.raises(VerifyError):
        UrabeClosedForm.from_mapping({"k1": "b", "k2": "0"})
    with pytest.raises(VerifyError):
        UrabeClosedForm.from_mapping({"k1": "b", "k2": "1", "p": 2})


@pytest.mark.parametrize("fid,m", [("deg4.family1.case2", 10), ("abel.n3", 6), ("abel.ab3", 6)])
def test_closed_form_urabe(fid, m):
    rec = catalog_lookup(fid)
    h = UrabeClosedForm.from_mapping(rec.urabe)
    r = check_urabe_closed_form(rec.lienard(), h, m)
    assert r.holds and r.identity_holds and r.integrated_holds and not r.mismatches


def test_closed_form_urabe_rejects_wrong_h():
    rec = catalog_lookup("deg4.family1.case2")
    h = UrabeClosedForm.from_mapping({"k1": "b_3_1", "k2": "1", "k3": "b_3_1^2", "p": 3, "q": 6})
    r = check_urabe_closed_form(rec.lienard(), h, 5)
    assert not r.holds and 3 in r.mismatches


def _setting_cs(setting, m):
    spec = catalog_settings()[setting]
    b, _ = spec.exact_bindings()
    return conditions_for(spec.lienard(b), m)


@pytest.mark.parametrize("fid", ["deg4.family1.case1", "deg4.family1.case7", "deg4.family2.case4",
                                 "deg4.family2.case6"])
def test_substitution_exact_low_order(fid):
    rec = catalog_lookup(fid)
    r = substitute_family(_setting_cs(rec.setting, 5), rec)
    assert r.all_zero and r.mode == "exact"


def test_substitution_numeric_low_order():
    rec = catalog_lookup("deg4.family2.case7")
    r = substitute_family(_setting_cs(rec.setting, 5), rec, dps=60)
    assert r.all_zero and r.mode.startswith("numeric") and r.max_abs < 1e-40


def test_substitution_detects_non_family():
    spec = SystemSpec.from_mapping({"kind": "cn", "degree": 4, "coefficients": {"a_2_0": "1", "a_0_2": "1"}})
    from isochron.systems import FamilyRecord
    fake = FamilyRecord(id="fake", title="", setting="deg4.family1", spec=spec, bindings=spec.exact_bindings()[0],
                        radicals=frozenset(), free=(), urabe={"kind": "zero"})
    r = substitute_family(_setting_cs("deg4.family1", 3), fake)
    assert not r.all_zero


def test_substitution_unbound_variable():
    rec = catalog_lookup("abel.n3")
    with pytest.raises(VerifyError):
        substitute_family(_setting_cs("deg4.family1", 2), rec)


def test_abel_first_integral_closed_form():
    ab3 = AbelSystem(3, (Poly.constant(3), Poly.constant(3), Poly.constant(1)))
    I = abel_first_integral(ab3)
    assert I.closed_form and I.verified
    # same level sets as the printed x^2 + y^2/(1+y)^2
    printed = parse_expr("x^2 + y^2/(1 + y)^2")
    assert check_first_integral(ab3.planar(), printed).holds


def test_abel_first_integral_symbolic_family():
    a1 = Poly.variable("a1")
    fam = AbelSystem(3, (a1, (a1 ** 2).scale(mpq(1, 3)), (a1 ** 3).scale(mpq(1, 27))))
    I = abel_first_integral(fam)
    assert I.verified
    assert check_urabe_closed_form(lienard_from_abel(fam), UrabeClosedForm.from_mapping(
        {"k1": "-a1/3", "k2": "1", "k3": "0", "p": 1, "q": 2}), 5).holds


def test_abel_first_integral_falls_back_to_quadrature():
    sys = AbelSystem(2, (Poly.constant(1), Poly.constant(1)))
    I = abel_first_integral(sys)
    assert not I.closed_form and I.note
