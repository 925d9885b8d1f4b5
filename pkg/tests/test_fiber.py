import pytest
from hypothesis import given, settings, strategies as st

from tannaka.fiber import (CheckConfig, NotMonoidalNatural, check_coarse, check_subcanonical_condition7,
                           compare_dual_constructions, dual_from_duality, invert_monoidal_nat, pointwise_dual,
                           validate_fiber_functor)
from tannaka.fixtures import subcanonical_counterexample, cyclic, groupoid_qq, trivial, unfaithful_z2, z2_sign_twist
from tannaka.linear import QQ, Field, Matrix, inverse
from tannaka.moncat import Arrow

F7 = Field(7)
CFG = CheckConfig()


def _functors():
    out = {"trivial": trivial()[1], "Z/2": cyclic(2)[1], "Z/3": cyclic(3)[1], "groupoid": groupoid_qq()[1],
           "non-subcanonical": subcanonical_counterexample()[1], "Z/2 twisted": z2_sign_twist()[2],
           "Z/3 mod 7": cyclic(3, F7)[1]}
    return out


FUNCTORS = _functors()
PIVOTAL = {k: FUNCTORS[k] for k in ("trivial", "Z/2", "Z/3", "Z/2 twisted", "Z/3 mod 7")}


@pytest.mark.parametrize("name", [n for n in FUNCTORS if n != "non-subcanonical"])
def test_fixture_functors_validate(name):
    rep = validate_fiber_functor(FUNCTORS[name], CFG)
    assert rep.passed, rep.to_text()


def test_counterexample_does_not_reflect_isomorphisms():
    # s: Z -> X is sent to an isomorphism but has no inverse
    rep = validate_fiber_functor(FUNCTORS["non-subcanonical"], CFG)
    assert [c.name for c in rep.failures] == ["reflects isomorphisms"]


def test_unfaithful_functor_fails():
    _, f = unfaithful_z2()
    rep = validate_fiber_functor(f, CFG)
    failed = [c for c in rep.failures]
    assert any("faithful" in c.name for c in failed)
    assert all(c.witness is not None for c in failed)


def test_pointwise_dual_examples():
    g = pointwise_dual(FUNCTORS["trivial"])
    assert g.base.dim == 1 and g.dim("I") == 1
    g = pointwise_dual(FUNCTORS["Z/2"])
    assert g.dim("s") == 1
    assert g.G2[("s", "s")] == Matrix.identity(QQ, 1)
    f = FUNCTORS["groupoid"]
    g = pointwise_dual(f)
    assert g.base == f.base.opposite()
    assert all(g.dim(x) == f.dim(x) for x in f.category.objects)


def test_twisted_dual_transposes_scalars():
    g = pointwise_dual(FUNCTORS["Z/2 twisted"])
    assert g.G2[("s", "s")] == Matrix.identity(QQ, 1).scale(QQ(-1))


@pytest.mark.parametrize("name", list(PIVOTAL))
def test_dual_constructions_agree(name):
    assert compare_dual_constructions(PIVOTAL[name]).passed


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(n, x) for n, f in PIVOTAL.items() for x in f.category.objects]))
def test_double_dual_returns_functor(nx):
    name, x = nx
    f = PIVOTAL[name]
    c = f.category
    g = pointwise_dual(f)
    kappa = dual_from_duality(f)

    def phi(a):
        return kappa[c.dual(a)] @ f.apply(c.theta(a))

    assert phi(x).rows == phi(x).cols
    inverse(phi(x))
    for b in c.objects:
        for t in c.basis(x, b):
            assert phi(b) @ f.apply(t) == g.apply(c.dual_arrow(t)) @ phi(x)


def test_subcanonical_check_examples():
    assert check_subcanonical_condition7(FUNCTORS["trivial"]).passed
    assert check_subcanonical_condition7(FUNCTORS["Z/2"]).passed
    rep = check_subcanonical_condition7(FUNCTORS["non-subcanonical"])
    assert not rep.passed and rep.failures[0].witness is not None


def test_coarse_examples():
    assert check_coarse(FUNCTORS["trivial"]).passed
    assert check_coarse(FUNCTORS["Z/2"]).passed
    rep = check_coarse(FUNCTORS["non-subcanonical"])
    assert not rep.passed and rep.failures[0].witness is not None


def test_invert_identity():
    f = FUNCTORS["Z/3"]
    u = {x: Matrix.identity(QQ, f.dim(x)) for x in f.category.objects}
    v = invert_monoidal_nat(f, f, u)
    assert all(v[x] == u[x] for x in u)


def test_invert_rejects_bad_unit():
    f = FUNCTORS["Z/2"]
    u = {"1": Matrix.identity(QQ, 1).scale(QQ(2)), "s": Matrix.identity(QQ, 1)}
    with pytest.raises(NotMonoidalNatural):
        invert_monoidal_nat(f, f, u)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([1, 2, 4]))
def test_invert_characters_mod_7(a):
    # characters of Z/3 with values in the cube roots of unity of F_7
    f = FUNCTORS["Z/3 mod 7"]
    vals = {"1": 1, "w": a, "w2": a * a}
    u = {x: Matrix.identity(F7, 1).scale(F7(v)) for x, v in vals.items()}
    v = invert_monoidal_nat(f, f, u)
    for x in u:
        assert u[x] @ v[x] == Matrix.identity(F7, 1)


def test_sign_character_on_z2():
    f = FUNCTORS["Z/2"]
    u = {"1": Matrix.identity(QQ, 1), "s": Matrix.identity(QQ, 1).scale(QQ(-1))}
    v = invert_monoidal_nat(f, f, u)
    assert v["s"] == u["s"]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([n for n in FUNCTORS if n != "non-subcanonical"]), st.data())
def test_functoriality_on_random_arrows(name, data):
    f = FUNCTORS[name]
    c = f.category
    a, b, d = (data.draw(st.sampled_from(c.objects)) for _ in range(3))

    def arrow(x, y):
        n = c.dim(x, y)
        return Arrow(x, y, Matrix.column(c.field, data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))))

    s, t = arrow(a, b), arrow(b, d)
    assert f.apply(c.comp(t, s)) == f.apply(t) @ f.apply(s)
