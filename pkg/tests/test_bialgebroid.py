import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from tannaka.algebra import FrobeniusDatum
from tannaka.bialgebroid import (build_bialgebroid, check_counit_splits, comodule_naturality, comodule_of_object,
                                 comodule_tensor, export_weak_bialgebra, unit_comodule, validate_comodule,
                                 validate_right_bialgebroid, validate_weak_bialgebra)
from tannaka.coend import tensor_over_C
from tannaka.fiber import FiberFunctor, pointwise_dual
from tannaka.fixtures import (coordinate_frobenius, cyclic, group_bialgebra, groupoid_qq, mutated_group_bialgebras,
                              trivial, z2_sign_twist)
from tannaka.linear import QQ, Matrix
from tannaka.reconstruct import comodule_isomorphism, verify_bialgebroid_iso

FIXTURES = {"trivial": trivial(), "Z/2": cyclic(2), "Z/3": cyclic(3), "groupoid": groupoid_qq(),
            "Z/2 twisted": z2_sign_twist()[::2]}
H = {k: build_bialgebroid(f) for k, (_, f) in FIXTURES.items()}


def by_object(h):
    """Basis index of the class e_C for categories with one-dimensional objects."""
    return {tag[0]: i for i, tag in enumerate(h.carrier.basis_tags)}


@pytest.mark.parametrize("name", list(H))
def test_reconstructed_bialgebroids_validate(name):
    rep = validate_right_bialgebroid(H[name])
    assert rep.passed, rep.to_text()


def test_trivial_is_ground_field():
    h = H["trivial"]
    one = Matrix.identity(QQ, 1)
    assert h.dim == 1
    assert h.mult == one and h.unit == one.column_matrix(0) and h.s == one and h.t == one and h.eps == one


def cyclic_oracle(n):
    """Structure constants of the dual group algebra, written down directly."""
    mult = [[[int((i + j) % n == k) for k in range(n)] for j in range(n)] for i in range(n)]
    delta = [[[int(i == j == k) for k in range(n)] for j in range(n)] for i in range(n)]
    return mult, delta


@pytest.mark.parametrize("n", [2, 3])
def test_cyclic_structure_constants_match_oracle(n):
    c, _ = FIXTURES["Z/%d" % n]
    h = H["Z/%d" % n]
    idx = by_object(h)
    order = [idx[x] for x in c.objects]
    mult, delta = cyclic_oracle(n)
    assert h.dim == n
    for i in range(n):
        for j in range(n):
            got = h.mul(h.basis(order[i]), h.basis(order[j]))
            assert got == sum((h.basis(order[k]).scale(QQ(mult[i][j][k])) for k in range(n)),
                              Matrix.zeros(QQ, n, 1))
    drep = h.delta_rep()
    for i in range(n):
        want = Matrix.zeros(QQ, n * n, 1)
        for j in range(n):
            for k in range(n):
                if delta[i][j][k]:
                    want = want + h.basis(order[j]).kron(h.basis(order[k]))
        assert h.bar2().proj @ drep @ h.basis(order[i]) == h.bar2().proj @ want
    assert h.eps == Matrix(QQ, 1, n, [[QQ(1)] * n])
    # s(1) = t(1) = 1_H = e_1; a unital source map cannot send 1 to the sum of all e_C
    assert h.s == h.t == h.basis(idx["1"])
    assert h.unit == h.basis(idx["1"])


def test_twisted_square_uses_transposed_scalars():
    h = H["Z/2 twisted"]
    idx = by_object(h)
    es = h.basis(idx["s"])
    assert h.mul(es, es) == h.basis(idx["1"])


@pytest.mark.parametrize("name", list(H))
def test_counit_splits_source_and_target(name):
    assert check_counit_splits(H[name])


@pytest.mark.parametrize("name", list(H))
def test_carrier_is_the_coend(name):
    _, f = FIXTURES[name]
    assert H[name].dim == tensor_over_C(pointwise_dual(f), f).dim


@pytest.mark.parametrize("name", list(H))
def test_object_comodules(name):
    c, f = FIXTURES[name]
    h = H[name]
    for x in c.objects:
        rep = validate_comodule(comodule_of_object(f, h, x))
        assert rep.passed, rep.to_text()
    assert comodule_naturality(f, h).passed


def test_sigma_coaction_is_grading():
    c, f = FIXTURES["Z/2"]
    h = H["Z/2"]
    m = comodule_of_object(f, h, "s")
    es = h.basis(by_object(h)["s"])
    assert m.delta == m.bar().proj @ Matrix.identity(QQ, 1).kron(es)


def test_unit_object_has_unit_coaction():
    c, f = FIXTURES["groupoid"]
    h = H["groupoid"]
    assert comodule_isomorphism(comodule_of_object(f, h, "I"), unit_comodule(h)) is not None


def test_comodule_tensor_examples():
    c, f = FIXTURES["Z/2"]
    h = H["Z/2"]
    ks = comodule_of_object(f, h, "s")
    k1 = comodule_of_object(f, h, "1")
    ss = comodule_tensor(ks, ks)
    assert validate_comodule(ss).passed
    assert comodule_isomorphism(ss, k1) is not None
    assert comodule_isomorphism(ss, ks) is None
    assert comodule_isomorphism(comodule_tensor(ks, unit_comodule(h)), ks) is not None


@pytest.mark.parametrize("name", ["groupoid", "Z/3"])
def test_tensor_of_object_comodules_is_coassociative(name):
    c, f = FIXTURES[name]
    h = H[name]
    coms = [comodule_of_object(f, h, x) for x in c.objects]
    for m in coms:
        for n in coms:
            assert validate_comodule(comodule_tensor(m, n)).passed


def test_weak_export_over_ground_field_is_plain():
    h = H["Z/2"]
    fr = FrobeniusDatum(Matrix.column(QQ, [1]), Matrix.identity(QQ, 1))
    delta_k, eps_k, rep = export_weak_bialgebra(h, fr)
    assert rep.passed
    assert delta_k == h.delta_rep()
    assert eps_k == h.eps


def test_weak_export_groupoid():
    h = H["groupoid"]
    delta_k, eps_k, rep = export_weak_bialgebra(h, coordinate_frobenius(h.base))
    assert rep.passed, rep.to_text()
    assert validate_weak_bialgebra(h, delta_k, eps_k).passed


def test_group_bialgebra_validates():
    assert validate_right_bialgebroid(group_bialgebra(2)).passed
    assert validate_right_bialgebroid(group_bialgebra(3)).passed


EXPECTED_BREAKS = {
    "flipped-constant": {"B1", "B3", "B4", "B5", "B6"},
    "doubled-source": {"B2", "B3", "B4", "B6"},
    "coproduct-g-tensor-1": {"B4"},
    "square-minus-one": {"B5", "B6"},
}


@pytest.mark.parametrize("name", list(EXPECTED_BREAKS))
def test_mutants_fail_expected_axioms(name):
    rep = validate_right_bialgebroid(mutated_group_bialgebras()[name])
    broken = {c.name[1:3] for c in rep.failures}
    assert broken == EXPECTED_BREAKS[name]
    assert all(c.witness is not None for c in rep.failures)


def _permuted(f, perm):
    c = f.category
    c2 = dataclasses.replace(c, objects=[c.objects[i] for i in perm])
    return FiberFunctor(c2, f.base, f.images, f.arrows, f.F2, f.F0, f.name)


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["Z/2", "Z/3", "groupoid"]), st.randoms(use_true_random=False))
def test_object_order_does_not_matter(name, rnd):
    _, f = FIXTURES[name]
    h = H[name]
    perm = list(range(len(f.category.objects)))
    rnd.shuffle(perm)
    h2 = build_bialgebroid(_permuted(f, perm))
    assert h2.dim == h.dim
    # n sends each basis class of H' to the class with the same tag in H
    cols = []
    for c, a, b in h2.carrier.basis_tags:
        g = h.dual_functor
        cols.append(h.carrier.cls(c, Matrix.unit(QQ, g.dim(c), a), Matrix.unit(QQ, f.dim(c), b)))
    n = Matrix.hstack(QQ, h.dim, cols)
    rep = verify_bialgebroid_iso(n, h2, h)
    assert rep.passed, rep.to_text()
