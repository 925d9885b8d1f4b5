import pytest
from hypothesis import given, settings, strategies as st

from tannaka.fixtures import (broken_interchange_z2, broken_pivot_z3, subcanonical_counterexample, cyclic,
                              dual_numbers_category, groupoid_qq, trivial)
from tannaka.linear import QQ, Matrix, solve
from tannaka.moncat import Arrow, MissingData, kernel_at, validate_category, validate_duality_and_pivot, \
    weak_kernel_certificate

TRIVIAL = trivial()[0]
Z2 = cyclic(2)[0]
Z3 = cyclic(3)[0]
GROUPOID = groupoid_qq()[0]
DUAL_NUMBERS = dual_numbers_category()
C7 = subcanonical_counterexample()[0]


@pytest.mark.parametrize("c", [TRIVIAL, Z2, Z3, GROUPOID, DUAL_NUMBERS, C7], ids=lambda c: c.name)
def test_fixture_categories_validate(c):
    assert validate_category(c).passed


def test_broken_interchange_fails_with_witness():
    c, _ = broken_interchange_z2()
    rep = validate_category(c)
    assert not rep.passed
    assert all(x.witness is not None for x in rep.failures)


@pytest.mark.parametrize("c", [TRIVIAL, Z2, Z3], ids=lambda c: c.name)
def test_duality_and_pivot_pass(c):
    assert validate_duality_and_pivot(c).passed


def test_scaled_pivot_breaks_monoidality():
    c, _ = cyclic(2)
    c.pivot = dict(c.pivot)
    c.pivot["s"] = Matrix.column(QQ, [2])
    rep = validate_duality_and_pivot(c)
    assert "pivot monoidal (tensor)" in [x.name for x in rep.failures]
    c, _ = broken_pivot_z3()
    assert not validate_duality_and_pivot(c).passed


def test_duality_required():
    with pytest.raises(MissingData):
        validate_duality_and_pivot(GROUPOID)


def test_weak_kernel_examples():
    w = weak_kernel_certificate(GROUPOID, GROUPOID.id("I"))
    assert w.is_zero()
    t = GROUPOID.zero("E01", "E00")
    w = weak_kernel_certificate(GROUPOID, t)
    assert (w.dom, w.cod) == ("E01", "E01") and w == GROUPOID.id("E01")
    assert weak_kernel_certificate(Z2, Z2.id("s")).is_zero()


def test_weak_kernel_of_nilpotent():
    c = DUAL_NUMBERS
    n = c.arrow("X", "X", [0, 1])
    w = weak_kernel_certificate(c, n)
    assert c.comp(n, w).is_zero() and not w.is_zero()


def arrows_of(c, a, b, coeffs):
    v = Matrix.column(c.field, coeffs[:c.dim(a, b)] + [0] * max(0, c.dim(a, b) - len(coeffs)))
    return Arrow(a, b, v)


coeff_lists = st.lists(st.integers(-3, 3), min_size=2, max_size=2)
groupoid_objects = st.sampled_from(GROUPOID.objects)


@settings(max_examples=60, deadline=None)
@given(groupoid_objects, groupoid_objects, groupoid_objects, groupoid_objects, coeff_lists, coeff_lists, coeff_lists)
def test_composition_associative_and_unital(a, b, c_, d, x, y, z):
    c = GROUPOID
    f, g, h = arrows_of(c, a, b, x), arrows_of(c, b, c_, y), arrows_of(c, c_, d, z)
    assert c.comp(h, c.comp(g, f)) == c.comp(c.comp(h, g), f)
    assert c.comp(c.id(b), f) == f == c.comp(f, c.id(a))


@settings(max_examples=60, deadline=None)
@given(groupoid_objects, groupoid_objects, groupoid_objects, groupoid_objects, groupoid_objects,
       groupoid_objects, coeff_lists, coeff_lists, coeff_lists, coeff_lists)
def test_tensor_interchange(a, b, c_, a2, b2, c2, x, y, z, w):
    c = GROUPOID
    f, g = arrows_of(c, a, b, x), arrows_of(c, b, c_, y)
    f2, g2 = arrows_of(c, a2, b2, z), arrows_of(c, b2, c2, w)
    assert c.comp(c.tens(g, g2), c.tens(f, f2)) == c.tens(c.comp(g, f), c.comp(g2, f2))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(c, x) for c in (TRIVIAL, Z2, Z3) for x in c.objects]))
def test_snake_composite_is_identity(cx):
    c, x = cx
    sx = c.dual(x)
    s = c.comp(c.rho(x), c.idt(x, c.ev(x)), c.alpha(x, sx, x), c.tid(c.db(x), x), c.lam_inv(x))
    assert s == c.id(x)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([GROUPOID, DUAL_NUMBERS, C7]), st.data())
def test_weak_kernel_certificate_generates(c, data):
    a = data.draw(st.sampled_from(c.objects))
    b = data.draw(st.sampled_from(c.objects))
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=c.dim(a, b), max_size=c.dim(a, b)))
    t = Arrow(a, b, Matrix.column(c.field, coeffs))
    w = weak_kernel_certificate(c, t)
    assert c.comp(t, w).is_zero()
    for x in c.objects:
        k = kernel_at(c, t, x)
        if k.cols == 0 or k.rows == 0:
            continue
        span = [c.comp(w, r).v for r in c.basis(x, w.dom)]
        assert span, (x, t)
        assert solve(Matrix.hstack(c.field, k.rows, span), k) is not None
