from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tannaka.linear import (QQ, Field, Matrix, NotIdempotent, Quotient, inverse, kernel_basis, rref, solve,
                            split_idempotent)

F2 = Field(2)
F5 = Field(5)


def mat(rows, field=QQ):
    return Matrix.from_rows(field, rows)


@st.composite
def matrices(draw, field=QQ, max_dim=4):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    vals = st.integers(-3, 3)
    rows = [[draw(vals) for _ in range(c)] for _ in range(r)]
    return Matrix.from_rows(field, rows, cols=c)


@st.composite
def idempotents(draw, max_dim=4):
    """P D P^-1 with D a 0/1 diagonal, so e^2 = e by construction."""
    n = draw(st.integers(1, max_dim))
    while True:
        p = Matrix.from_rows(QQ, [[draw(st.integers(-2, 2)) for _ in range(n)] for _ in range(n)])
        if p.rank() == n:
            break
        p = p + Matrix.identity(QQ, n)
        if p.rank() == n:
            break
    d = Matrix.zeros(QQ, n, n)
    for i in range(n):
        d.data[i][i] = QQ(draw(st.integers(0, 1)))
    return p @ d @ inverse(p)


def test_rref_identity():
    red, piv, rk = rref(Matrix.identity(QQ, 2))
    assert red == Matrix.identity(QQ, 2)
    assert piv == [0, 1] and rk == 2


def test_rref_proportional_rows():
    red, _, rk = rref(mat([[1, 2], [2, 4]]))
    assert red == mat([[1, 2], [0, 0]])
    assert rk == 1


def test_rank_over_f2():
    # det = 1 mod 2
    assert rref(mat([[1, 1], [1, 2]], F2))[2] == 2
    assert rref(mat([[1, 1], [1, 3]], F2))[2] == 1


def test_kernel_identity_is_empty():
    assert kernel_basis(Matrix.identity(QQ, 3)).cols == 0


def test_kernel_of_zero_spans():
    k = kernel_basis(Matrix.zeros(QQ, 2, 3))
    assert k.cols == 3 and k.rank() == 3


def test_kernel_of_row():
    k = kernel_basis(mat([[1, 2]]))
    assert k.cols == 1
    v = k.col(0)
    assert v[0] == -2 * v[1] and v[1] != 0


def test_split_identity():
    s, r = split_idempotent(Matrix.identity(QQ, 2))
    assert s == Matrix.identity(QQ, 2) and r == Matrix.identity(QQ, 2)


def test_split_zero():
    s, r = split_idempotent(Matrix.zeros(QQ, 2, 2))
    assert s.shape == (2, 0) and r.shape == (0, 2)


def test_split_diag():
    s, r = split_idempotent(mat([[1, 0], [0, 0]]))
    assert s == mat([[1], [0]])
    assert r == mat([[1, 0]])


def test_split_rejects_non_idempotent():
    with pytest.raises(NotIdempotent):
        split_idempotent(mat([[2]]))


def test_prime_field_arithmetic():
    a = F5(3)
    assert a * F5(2) == F5(1)
    assert F5(1) / a == F5(2)
    assert F5.parse("2") == F5(2)
    with pytest.raises(ValueError):
        F5.parse("7")
    assert QQ.parse("-3/4") == Fraction(-3, 4)
    with pytest.raises(ValueError):
        Field(6)


def test_solve_and_quotient():
    a = mat([[1, 1], [0, 1]])
    b = mat([[3], [1]])
    x = solve(a, b)
    assert a @ x == b
    q = Quotient(QQ, 3, mat([[1, -1, 0]]))
    assert q.dim == 2
    assert q.proj @ q.sect == Matrix.identity(QQ, 2)
    assert (q.proj @ Matrix.column(QQ, [1, -1, 0])).is_zero()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_rank_nullity(m):
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert m.rank() + k.cols == m.cols


@settings(max_examples=40, deadline=None)
@given(matrices(field=F5))
def test_kernel_rank_nullity_mod_p(m):
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert m.rank() + k.cols == m.cols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_idempotent(m):
    red = rref(m)[0]
    assert rref(red)[0] == red


@settings(max_examples=40, deadline=None)
@given(idempotents())
def test_split_idempotent_round_trip(e):
    s, r = split_idempotent(e)
    assert r @ s == Matrix.identity(QQ, s.cols)
    assert s @ r == e
