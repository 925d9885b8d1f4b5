import dataclasses

import pytest

from tannaka.algebra import validate_algebra
from tannaka.bialgebroid import build_bialgebroid
from tannaka.fiber import CheckConfig, check_coarse, validate_fiber_functor
from tannaka.fixtures import cyclic, groupoid_qq, trivial
from tannaka.fusion import (NoDecomposition, build_coarse_fiber, dual_basis_matrices, fusion_system_from_index,
                            pq_residual, validate_coarse_construction, validate_fusion_system)
from tannaka.linear import QQ, Matrix
from tannaka.site import covering_sieves_contain_identity

CFG = CheckConfig()
CATS = {"trivial": trivial()[0], "Z/2": cyclic(2)[0], "Z/3": cyclic(3)[0]}


def system(name, order=None, bounds=None):
    c = CATS[name]
    return c, fusion_system_from_index(c, order or list(c.objects), bounds)


@pytest.mark.parametrize("name", list(CATS))
def test_fusion_systems_validate(name):
    c, fs = system(name)
    assert validate_fusion_system(c, fs).passed
    assert all(fs.bound(x) == 1 for x in c.objects)


def test_zero_bound_fails():
    c, fs = system("Z/2", bounds={"1": 0, "s": 0})
    rep = validate_fusion_system(c, fs)
    assert [e.name for e in rep.failures] == ["multiplicities within bounds"]
    assert rep.failures[0].witness is not None


def test_missing_unit_fails():
    c = CATS["Z/2"]
    with pytest.raises(NoDecomposition):
        fusion_system_from_index(c, ["s"])
    _, fs = system("Z/2")
    fs = dataclasses.replace(fs, index=["s"])
    assert "unit object in index set" in [e.name for e in validate_fusion_system(c, fs).failures]


def test_groupoid_has_no_decomposition():
    c, _ = groupoid_qq()
    with pytest.raises(NoDecomposition):
        fusion_system_from_index(c, ["I"])


def test_trivial_dual_basis():
    c, fs = system("trivial")
    P, Q = dual_basis_matrices(c, fs, "I")
    assert len(P) == len(Q) == 1
    assert P[0] == {("I", "I"): c.id("I")} and Q[0] == {("I", "I"): c.id("I")}


def test_z2_dual_basis_blocks():
    c, fs = system("Z/2")
    P, Q = dual_basis_matrices(c, fs, "s")
    assert len(P) == 1
    # block permutation: A (x) s lands in the other index object
    assert set(P[0]) == {("1", "s"), ("s", "1")}
    assert set(Q[0]) == {("s", "1"), ("1", "s")}
    P, Q = dual_basis_matrices(c, fs, "1")
    assert set(P[0]) == {("1", "1"), ("s", "s")}
    assert all(p == c.id(p.dom) for p in P[0].values())


@pytest.mark.parametrize("name", list(CATS))
@pytest.mark.parametrize("reverse", [False, True])
def test_pq_is_identity(name, reverse):
    c, fs = system(name)
    order = list(reversed(fs.index)) if reverse else None
    for x in c.objects:
        P, Q = dual_basis_matrices(c, fs, x, order)
        assert pq_residual(c, fs, x, P, Q) is None


@pytest.mark.parametrize("name", list(CATS))
def test_coarse_fiber(name):
    c, fs = system(name)
    f = build_coarse_fiber(c, fs)
    assert f.base.dim == len(c.objects)
    assert validate_algebra(f.base).passed
    assert validate_coarse_construction(f, fs).passed
    assert validate_coarse_construction(f, fs, list(reversed(fs.index))).passed
    assert validate_fiber_functor(f, CFG).passed
    assert check_coarse(f, CFG).passed
    assert covering_sieves_contain_identity(f, 2, CFG).passed


def test_z2_images():
    c, fs = system("Z/2")
    f = build_coarse_fiber(c, fs)
    assert f.dim("1") == 2 and f.dim("s") == 2
    # the idempotent of block 1 moves to block s when acting through F(s)
    ms = f.images["s"]
    labels, _ = f.fusion_layout["s"]
    for i, (a, b, _) in enumerate(labels):
        e = Matrix.unit(QQ, 2, i)
        ia, ib = fs.index.index(a), fs.index.index(b)
        assert ms.left[ia] @ e == e and ms.right[ib] @ e == e


def test_z2_reconstructed_dimension():
    # H is the coend of End_k(FC) over two objects with identity arrows only: 4 + 4
    c, fs = system("Z/2")
    h = build_bialgebroid(build_coarse_fiber(c, fs))
    assert h.dim == sum(n * n for n in (2, 2))
    assert h.base.dim == 2


def _relabel(f, f2, R_perm):
    """Check that matching block labels give an isomorphism of fiber functors f -> f2."""
    c = f.category
    perms = {}
    for x in c.objects:
        l1, _ = f.fusion_layout[x]
        l2, _ = f2.fusion_layout[x]
        p = Matrix.zeros(QQ, len(l2), len(l1))
        for j, lab in enumerate(l1):
            p.data[l2.index(lab)][j] = QQ(1)
        perms[x] = p
    for x in c.objects:
        m1, m2, p = f.images[x], f2.images[x], perms[x]
        for i in range(f.base.dim):
            k = R_perm[i]
            assert p @ m1.left[i] == m2.left[k] @ p
            assert p @ m1.right[i] == m2.right[k] @ p
        for y in c.objects:
            for t in c.basis(x, y):
                assert perms[y] @ f.apply(t) == f2.apply(t) @ p
            xy = c.tensor(x, y)
            assert perms[xy] @ f.F2[(x, y)] == f2.F2[(x, y)] @ p.kron(perms[y])


@pytest.mark.parametrize("name", ["Z/2", "Z/3"])
def test_index_order_gives_isomorphic_functor(name):
    c, fs = system(name)
    _, fs2 = system(name, order=list(reversed(c.objects)))
    f, f2 = build_coarse_fiber(c, fs), build_coarse_fiber(c, fs2)
    n = len(fs.index)
    R_perm = {i: fs2.index.index(fs.index[i]) for i in range(n)}
    _relabel(f, f2, R_perm)
