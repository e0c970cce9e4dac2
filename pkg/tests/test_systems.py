import pytest
from gmpy2 import mpq

from isochron.algebra.parse import parse_expr
from isochron.algebra.poly import Poly
from isochron.systems import (AbelSystem, LienardPair, PlanarSystem, SystemError_, SystemSpec, catalog_ids,
                              catalog_lookup, catalog_settings, cn_names, cn_planar, default_weights,
                              lienard_from_abel, lienard_from_cn, reduction_residual)

x, y = Poly.variables("x", "y")


def full_c4():
    return {k: Poly.variable(k) for k in cn_names(4)}


def test_cn_names_for_degree_four():
    assert cn_names(4) == ["b_1_1", "b_2_1", "b_3_1", "a_2_0", "a_3_0", "a_4_0", "a_0_2", "a_1_2", "a_2_2"]
    assert cn_names(1) == []


def test_default_weights_follow_the_scaling():
    w = default_weights(cn_names(4))
    assert w["b_1_1"] == 1 and w["a_1_2"] == 2 and w["a_4_0"] == 3
    assert default_weights(["a1", "a2", "a3"]) == {"a1": 1, "a2": 2, "a3": 3}
    with pytest.raises(KeyError):
        default_weights(["mystery"])


def test_cn_lienard_reduction_is_exact():
    coeffs = full_c4()
    r = reduction_residual(cn_planar(coeffs, 4), lienard_from_cn(coeffs, 4))
    assert r.is_zero()


def test_abel_reduction_uses_y():
    sys = AbelSystem.symbolic(3)
    lp = lienard_from_abel(sys)
    # with y as the position, y'' + f(y) y'^2 + g(y) vanishes
    r = reduction_residual(sys.planar(), lp, coordinate="y")
    assert r.is_zero()


def test_planar_system_checks_linear_part():
    with pytest.raises(SystemError_):
        PlanarSystem(y, x)
    PlanarSystem(-y + x * x, x)


def test_lienard_pair_rejects_non_centers():
    one = parse_expr("1")
    with pytest.raises(SystemError_):
        LienardPair(one, parse_expr("2*x"))
    with pytest.raises(SystemError_):
        LienardPair(parse_expr("1/x"), parse_expr("x"))


def test_spec_parsing_diagnostics():
    with pytest.raises(SystemError_, match="kind"):
        SystemSpec.from_mapping({"kind": "bogus"})
    with pytest.raises(SystemError_, match="unknown name"):
        SystemSpec.from_mapping({"kind": "cn", "degree": 2, "coefficients": {"a_9_9": "1"}})
    with pytest.raises(SystemError_, match="binary floats"):
        SystemSpec.from_mapping({"kind": "cn", "degree": 2, "coefficients": {"a_2_0": 0.5}})
    with pytest.raises(SystemError_, match="cyclic"):
        SystemSpec.from_mapping({"kind": "cn", "degree": 2,
                                 "coefficients": {"a_2_0": "a_0_2", "a_0_2": "a_2_0"}}).exact_bindings()


def test_spec_bindings_resolve_references():
    spec = SystemSpec.from_mapping({"kind": "cn", "degree": 4,
                                    "coefficients": {"a_2_2": "free", "b_3_1": "a_2_2", "a_4_0": "b_3_1/2"}})
    b, rads = spec.exact_bindings()
    assert not rads
    assert b["a_4_0"].num == Poly.variable("a_2_2").scale(mpq(1, 2))
    assert spec.to_mapping()["coefficients"]["b_3_1"] == "a_2_2"


def test_spec_radicals():
    rec = catalog_lookup("deg4.family2.case4")
    _, rads = rec.spec.exact_bindings()
    assert rads == {33}


def test_lienard_kind():
    spec = SystemSpec.from_mapping({"kind": "lienard", "f": "f1*x", "g": "x + g2*x^2"})
    lp = spec.lienard({})
    assert set(lp.parameters) == {"f1", "g2"}


def test_numeric_values_need_bound_coefficients():
    spec = SystemSpec.from_mapping({"kind": "cn", "degree": 2, "coefficients": {"a_2_0": "free"}})
    with pytest.raises(SystemError_):
        spec.numeric_values()


def test_catalog_is_complete_and_consistent():
    ids = catalog_ids()
    assert len(ids) == 18
    assert len([i for i in ids if i.startswith("deg4.family1")]) == 7
    assert len([i for i in ids if i.startswith("deg4.family2")]) == 7
    settings = catalog_settings()
    for fid in ids:
        rec = catalog_lookup(fid)
        assert rec.setting in settings
        allowed = set(settings[rec.setting].coefficients) | set(cn_names(4) if rec.setting.startswith("deg4") else [])
        assert set(rec.spec.coefficients) <= allowed or rec.setting.startswith(("deg5", "abel"))
    with pytest.raises(KeyError):
        catalog_lookup("deg9.nothing")


def test_numeric_family_refuses_exact_use():
    rec = catalog_lookup("deg4.family2.case7")
    assert rec.numeric_only
    with pytest.raises(SystemError_):
        rec.lienard()
    vals = rec.numeric_values(30)
    assert abs(float(vals["a_0_2"]) + 2) < 1e-12


def test_numeric_rhs():
    sys = cn_planar({"a_2_0": 1}, 2)
    f = sys.numeric({}, float)
    assert f(1.0, 2.0) == pytest.approx((-2.0, 2.0))
