import pytest

from tannaka.bialgebroid import build_bialgebroid, comodule_of_object
from tannaka.fiber import CheckConfig, validate_fiber_functor
from tannaka.fixtures import _mutant, cyclic, grading_catalog, group_bialgebra, groupoid_qq, trivial
from tannaka.linear import QQ, Matrix, rref
from tannaka.reconstruct import (CatalogNotClosed, ComoduleCatalog, comparison_map_n, fiber_from_bialgebroid,
                                 reconstruction_roundtrip, validate_catalog, verify_bialgebroid_iso)

FIXTURES = {"trivial": trivial(), "Z/2": cyclic(2), "Z/3": cyclic(3), "groupoid": groupoid_qq()}


def self_catalog(name):
    """The object comodules of a reconstructed bialgebroid, as a catalog over it."""
    c, f = FIXTURES[name]
    h = build_bialgebroid(f)
    coms = {x: comodule_of_object(f, h, x) for x in c.objects}
    return ComoduleCatalog(h, coms, c.unit, {(a, b): c.tensor(a, b) for a in c.objects for b in c.objects})


CATALOGS = {k: self_catalog(k) for k in FIXTURES}
CATALOGS.update({"k[Z/2]": grading_catalog(group_bialgebra(2)), "k[Z/3]": grading_catalog(group_bialgebra(3))})


@pytest.mark.parametrize("name", list(CATALOGS))
def test_catalogs_validate(name):
    assert validate_catalog(CATALOGS[name]).passed


@pytest.mark.parametrize("name", list(CATALOGS))
def test_round_trip(name):
    rep = reconstruction_roundtrip(CATALOGS[name])
    assert rep.passed, rep.to_text()
    assert rep.status_of("n well defined") == "pass"


@pytest.mark.parametrize("name", ["k[Z/2]", "k[Z/3]", "Z/3"])
def test_comparison_map_is_invertible_and_unital(name):
    cat = CATALOGS[name]
    j = cat.bialgebroid
    _, f = fiber_from_bialgebroid(cat)
    h = build_bialgebroid(f)
    n = comparison_map_n(h, j, cat)
    assert n.rows == n.cols == j.dim and rref(n)[2] == j.dim
    assert n @ h.unit == j.unit


def test_group_bialgebra_catalog_recovers_cyclic_category():
    c, f = fiber_from_bialgebroid(CATALOGS["k[Z/2]"])
    assert validate_fiber_functor(f, CheckConfig()).passed
    assert {(a, b): c.dim(a, b) for a in c.objects for b in c.objects} == {
        ("1", "1"): 1, ("1", "s"): 0, ("s", "1"): 0, ("s", "s"): 1}
    assert c.tensor("s", "s") == "1"


def test_non_multiplicative_bijection():
    j = group_bialgebra(3)
    swap = Matrix.from_rows(QQ, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    rep = verify_bialgebroid_iso(swap, j, j)
    failed = {e.name: e.witness for e in rep.failures}
    assert rep.status_of("bijective") == "pass"
    assert "multiplicative" in failed and len(failed["multiplicative"]) == 2
    assert "unit" in failed


def test_mutated_target_fails_iso():
    j = group_bialgebra(2)
    bad = _mutant(j, mult=j.mult.scale(QQ(2)))
    rep = verify_bialgebroid_iso(j.ident(), j, bad)
    assert "multiplicative" in {e.name for e in rep.failures}


def test_catalog_not_closed():
    cat = CATALOGS["k[Z/3]"]
    short = ComoduleCatalog(cat.bialgebroid, {k: cat.comodules[k] for k in ["1", "w"]}, "1")
    with pytest.raises(CatalogNotClosed):
        fiber_from_bialgebroid(short)


def test_catalog_needs_unit():
    cat = CATALOGS["k[Z/2]"]
    bad = ComoduleCatalog(cat.bialgebroid, {"s": cat.comodules["s"]}, "s")
    with pytest.raises(CatalogNotClosed):
        fiber_from_bialgebroid(bad)
