from hypothesis import given, settings, strategies as st

from tannaka.algebra import (RIGHT_ONLY, TWO_SIDED, AlgebraPresentation, Bimodule, FrobeniusDatum,
                             bimodule_hom_basis, bimodule_tensor, right_dual_data, validate_algebra,
                             validate_bimodule, validate_separable_frobenius, vec)
from tannaka.fixtures import coordinate_frobenius, one_dim
from tannaka.linear import QQ, Matrix, inverse, solve

R = AlgebraPresentation.diagonal(QQ, 2)
K = AlgebraPresentation.ground(QQ)


def corner(i, j):
    """Q with e_i acting on the left and e_j on the right."""
    return one_dim(R, [int(k == i) for k in range(2)], [int(k == j) for k in range(2)])


def direct_sum(mods):
    a = mods[0].algebra
    n = a.dim
    dim = sum(m.dim for m in mods)
    left = [Matrix.block_diag(QQ, [m.left[i] for m in mods]) for i in range(n)]
    right = [Matrix.block_diag(QQ, [m.right[i] for m in mods]) for i in range(n)]
    return Bimodule(a, dim, left, right)


def conjugate(m, p):
    pi = inverse(p)
    return Bimodule(m.algebra, m.dim, [p @ x @ pi for x in m.left], [p @ x @ pi for x in m.right])


@st.composite
def bimodules(draw, max_summands=3):
    """Direct sums of corner lines over Q x Q in a random basis."""
    pairs = draw(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=max_summands))
    m = direct_sum([corner(i, j) for i, j in pairs])
    n = m.dim
    p = Matrix.identity(QQ, n)
    for _ in range(draw(st.integers(0, 3))):
        a, b = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if a != b:
            e = Matrix.identity(QQ, n)
            e.data[a][b] = QQ(draw(st.integers(-2, 2)))
            p = e @ p
    return conjugate(m, p)


def test_ground_and_product_algebras_pass():
    assert validate_algebra(K).passed
    assert validate_algebra(R).passed


def test_non_unital_constants_fail():
    c = [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]
    a = AlgebraPresentation.from_constants(QQ, c, [1, 0])
    rep = validate_algebra(a)
    assert not rep.passed
    assert all(x.witness is not None for x in rep.failures)


def test_tensor_with_regular_is_identity_size():
    m = corner(0, 1)
    assert bimodule_tensor(R.regular(), m).module.dim == m.dim
    assert bimodule_tensor(m, R.regular()).module.dim == m.dim


def test_tensor_of_mismatched_corners_vanishes():
    e1_col = one_dim(R, [1, 1], [1, 0])
    e2_row = one_dim(R, [0, 1], [1, 1])
    assert bimodule_tensor(e1_col, e2_row).module.dim == 0


def test_tensor_over_ground_field():
    m = direct_sum([K.regular()] * 2)
    n = direct_sum([K.regular()] * 3)
    assert bimodule_tensor(m, n).module.dim == 6


def test_hom_examples():
    assert len(bimodule_hom_basis(R.regular(), R.regular(), TWO_SIDED)) == 2
    assert len(bimodule_hom_basis(K.regular(), K.regular(), RIGHT_ONLY)) == 1
    e1 = one_dim(R, [1, 1], [1, 0])
    e2 = one_dim(R, [1, 1], [0, 1])
    assert bimodule_hom_basis(e1, e2, RIGHT_ONLY) == []


def test_dual_data_examples():
    d = right_dual_data(K.regular())
    assert d.dual.dim == 1 and len(d.xs) == 1
    d = right_dual_data(direct_sum([R.regular(), R.regular()]))
    assert len(d.xs) == 2 * R.dim
    d = right_dual_data(corner(0, 0))
    assert len(d.xs) == 1
    assert all(r.is_zero() for r in d.snake_residuals())


def test_free_module_has_two_pairs_over_ground():
    d = right_dual_data(direct_sum([K.regular(), K.regular()]))
    assert len(d.xs) == 2


def test_frobenius_examples():
    assert validate_separable_frobenius(K, FrobeniusDatum(Matrix.column(QQ, [1]), Matrix.identity(QQ, 1))).passed
    assert validate_separable_frobenius(R, coordinate_frobenius(R)).passed
    bad = FrobeniusDatum(Matrix.column(QQ, [1, 1]), Matrix.from_rows(QQ, [[0, 1], [0, 0]]))
    rep = validate_separable_frobenius(R, bad)
    assert not rep.passed
    assert "sum e_i f_i = 1" in [c.name for c in rep.failures]


@settings(max_examples=25, deadline=None)
@given(bimodules())
def test_random_bimodules_are_valid(m):
    assert validate_bimodule(m).passed


@settings(max_examples=20, deadline=None)
@given(bimodules(2), bimodules(2), bimodules(2))
def test_tensor_associative_up_to_coherence(m, n, p):
    mn = bimodule_tensor(m, n)
    np_ = bimodule_tensor(n, p)
    left = bimodule_tensor(mn.module, p)
    right = bimodule_tensor(m, np_.module)
    assert left.module.dim == right.module.dim
    idm, idp = Matrix.identity(QQ, m.dim), Matrix.identity(QQ, p.dim)
    # (M N) P -> M N P -> M (N P), both sides quotients of the same triple tensor
    a = right.projection @ idm.kron(np_.projection) @ mn.section.kron(idp) @ left.section
    b = left.projection @ mn.projection.kron(idp) @ idm.kron(np_.section) @ right.section
    assert a @ b == Matrix.identity(QQ, a.rows)
    assert b @ a == Matrix.identity(QQ, a.cols)


@settings(max_examples=30, deadline=None)
@given(bimodules())
def test_snake_residuals_vanish(m):
    res1, res2 = right_dual_data(m).snake_residuals()
    assert res1.is_zero() and res2.is_zero()


@settings(max_examples=25, deadline=None)
@given(bimodules(2), bimodules(2))
def test_two_sided_homs_are_right_linear(m, n):
    two = bimodule_hom_basis(m, n, TWO_SIDED)
    one = bimodule_hom_basis(m, n, RIGHT_ONLY)
    if not two:
        return
    span = Matrix.hstack(QQ, m.dim * n.dim, [vec(x) for x in one])
    for x in two:
        assert solve(span, vec(x)) is not None
