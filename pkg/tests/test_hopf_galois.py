import pytest

from tannaka.bialgebroid import build_bialgebroid, comodule_of_object, unit_comodule
from tannaka.fixtures import _mutant, cyclic, group_bialgebra, groupoid_qq, trivial, z2_sign_twist
from tannaka.hopf_galois import (LEFT_H, RIGHT_H_PRIME, Antipode, MissingDuality, MissingPivot, bicomodule_algebra,
                                 build_antipode, coinvariants, cotensor, galois_beta, galois_inverse_explicit,
                                 ulbrich_roundtrip, validate_antipode, validate_bicomodule_algebra)
from tannaka.linear import QQ, Field, Matrix, inverse

PIVOTAL = {"trivial": trivial()[1], "Z/2": cyclic(2)[1], "Z/3": cyclic(3)[1], "Z/2 twisted": z2_sign_twist()[2],
           "Z/3 mod 7": cyclic(3, Field(7))[1]}
H = {k: build_bialgebroid(f) for k, f in PIVOTAL.items()}
GROUPOID = groupoid_qq()[1]
H_GROUPOID = build_bialgebroid(GROUPOID)


def by_object(h):
    return {tag[0]: i for i, tag in enumerate(h.carrier.basis_tags)}


@pytest.mark.parametrize("name", list(PIVOTAL))
def test_antipode_axioms(name):
    s = build_antipode(PIVOTAL[name], H[name])
    rep = validate_antipode(H[name], s)
    assert rep.passed, rep.to_text()


@pytest.mark.parametrize("name", list(PIVOTAL))
def test_antipode_involutive(name):
    s = build_antipode(PIVOTAL[name], H[name]).S
    assert s @ s == H[name].ident()


def test_small_antipodes():
    assert build_antipode(PIVOTAL["trivial"], H["trivial"]).S == Matrix.identity(QQ, 1)
    assert build_antipode(PIVOTAL["Z/2"], H["Z/2"]).S == Matrix.identity(QQ, 2)


def test_z3_antipode_swaps_nontrivial_objects():
    h = H["Z/3"]
    s = build_antipode(PIVOTAL["Z/3"], h).S
    idx = by_object(h)
    e = {x: h.basis(i) for x, i in idx.items()}
    assert s @ e["1"] == e["1"]
    assert s @ e["w"] == e["w2"] and s @ e["w2"] == e["w"]


def test_wrong_permutation_fails_s3():
    h = H["Z/3"]
    rep = validate_antipode(h, Antipode(h.ident(), h.ident()))
    failed = {c.name: c.witness for c in rep.failures}
    assert any(k.startswith("(S-3)") for k in failed)
    assert all(w is not None for w in failed.values())


def test_antipode_needs_duality_and_pivot():
    with pytest.raises(MissingDuality):
        build_antipode(GROUPOID, H_GROUPOID)
    c, f = cyclic(2)
    c.pivot = None
    with pytest.raises(MissingPivot):
        build_antipode(f, build_bialgebroid(f))


def test_beta_examples():
    beta, ok = galois_beta(H["trivial"])
    assert ok and beta == Matrix.identity(QQ, 1)
    beta, ok = galois_beta(H["Z/2"])
    assert ok and beta.rows == beta.cols == 4
    j = group_bialgebra(2)
    bad = _mutant(j, delta_rep=Matrix.from_rows(QQ, [[1, 0], [0, 0], [0, 1], [0, 0]]))
    assert not galois_beta(bad)[1]


@pytest.mark.parametrize("name", list(PIVOTAL))
def test_explicit_beta_inverse_matches_matrix_inverse(name):
    beta, ok = galois_beta(H[name])
    assert ok
    binv, gammas, rep = galois_inverse_explicit(PIVOTAL[name], H[name])
    assert rep.passed, rep.to_text()
    assert binv == inverse(beta)
    assert set(gammas) == set(PIVOTAL[name].category.objects)


def test_explicit_inverse_needs_duality():
    with pytest.raises(MissingDuality):
        galois_inverse_explicit(GROUPOID, H_GROUPOID)


def _pairs():
    out = {k: (f, f) for k, f in PIVOTAL.items()}
    c, f, fp = z2_sign_twist()
    out["Z/2 with twist"] = (f, fp)
    out["groupoid"] = (GROUPOID, GROUPOID)
    return out


PAIRS = _pairs()


@pytest.mark.parametrize("name", list(PAIRS))
def test_bicomodule_algebras_validate(name):
    f, fp = PAIRS[name]
    a = bicomodule_algebra(f, fp)
    rep = validate_bicomodule_algebra(a)
    assert rep.passed, rep.to_text()
    assert rep.status_of("t_A injective") == "pass"


def test_trivial_pair_is_ground_field():
    f = PIVOTAL["trivial"]
    assert bicomodule_algebra(f, f).dim == 1


def test_twisted_pair_dimension():
    f, fp = PAIRS["Z/2 with twist"]
    assert bicomodule_algebra(f, fp).dim == 2


@pytest.mark.parametrize("name", ["trivial", "Z/2", "Z/3", "groupoid"])
def test_coinvariants_of_h(name):
    f = PAIRS[name][0]
    h = H_GROUPOID if name == "groupoid" else H[name]
    a = bicomodule_algebra(f, f, h, h)
    ker, rep = coinvariants(a, RIGHT_H_PRIME)
    assert rep.passed and ker.cols == f.base.dim
    ker, rep = coinvariants(a, LEFT_H)
    assert rep.passed and ker.cols == f.base.dim


def test_cotensor_examples():
    f, fp = PAIRS["Z/2 with twist"]
    a = bicomodule_algebra(f, fp)
    h = a.h
    assert cotensor(unit_comodule(h), a).dim == coinvariants(a, LEFT_H)[0].cols
    assert cotensor(comodule_of_object(f, h, "s"), a).dim == 1
    g = PIVOTAL["Z/3"]
    a = bicomodule_algebra(g, g, H["Z/3"], H["Z/3"])
    for x in g.category.objects:
        assert cotensor(comodule_of_object(g, H["Z/3"], x), a).dim == g.dim(x)


@pytest.mark.parametrize("name", ["Z/2", "Z/3", "Z/2 with twist"])
def test_ulbrich_round_trip(name):
    f, fp = PAIRS[name]
    rep = ulbrich_roundtrip(f, fp)
    assert rep.passed, rep.to_text()
    assert all(c.status == "pass" for c in rep.entries)


def test_ulbrich_preconditions_are_skips():
    rep = ulbrich_roundtrip(GROUPOID, GROUPOID)
    assert rep.passed
    assert [c.status for c in rep.entries] == ["skip"]
