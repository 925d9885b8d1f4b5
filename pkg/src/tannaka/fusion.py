"""Bounded fusion systems and the coarse fiber functor they determine.

A fusion system picks an index set of objects and, for every A in the index
set and every object C, a decomposition of A (x) C into index objects.  The
base algebra is the block matrix algebra with (A, B) block hom(B, A), and
F(C) is the block space with (A, B) block hom(B, A (x) C).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .algebra import AlgebraPresentation, Bimodule
from .fiber import FiberFunctor
from .linear import Matrix
from .moncat import Arrow, CategoryPresentation
from .report import Report


class NoDecomposition(ValueError):
    pass


@dataclass
class Summand:
    obj: str
    p: Arrow        # obj -> A (x) C
    q: Arrow        # A (x) C -> obj


@dataclass
class FusionSystem:
    index: list
    summands: dict                          # (A, C) -> list[Summand]
    bounds: dict = field(default_factory=dict)

    def multiplicity(self, b, a, c) -> int:
        return sum(1 for s in self.summands[(a, c)] if s.obj == b)

    def bound(self, c) -> int:
        if c in self.bounds:
            return self.bounds[c]
        return max((sum(self.multiplicity(b, a, c) for a in self.index) for b in self.index), default=0)


def _is_zero_object(c: CategoryPresentation, x) -> bool:
    return c.identities[x].is_zero()


def fusion_system_from_index(c: CategoryPresentation, index: list, bounds: dict | None = None) -> FusionSystem:
    """Decompose every A (x) C using identities, zero objects or a presented biproduct."""
    summands = {}
    for a, x in product(index, c.objects):
        t = c.tensor(a, x)
        if t in index:
            summands[(a, x)] = [Summand(t, c.id(t), c.id(t))]
        elif _is_zero_object(c, t):
            summands[(a, x)] = []
        else:
            bp = next((b for b in c.biproducts if b.target == t and all(s in index for s in b.summands)), None)
            if bp is None:
                raise NoDecomposition("%s (x) %s = %s has no decomposition into %s" % (a, x, t, index))
            summands[(a, x)] = [Summand(s, i, p) for s, i, p in zip(bp.summands, bp.injections, bp.projections)]
    return FusionSystem(list(index), summands, dict(bounds or {}))


def validate_fusion_system(c: CategoryPresentation, fs: FusionSystem) -> Report:
    rep = Report("fusion system")
    rep.check("unit object in index set", c.unit in fs.index, fs.index, "fusion/index")
    bad = None
    for a, x in product(fs.index, c.objects):
        t = c.tensor(a, x)
        total = c.zero(t, t)
        for s in fs.summands.get((a, x), []):
            if s.obj not in fs.index or s.p.dom != s.obj or s.p.cod != t or s.q.dom != t or s.q.cod != s.obj:
                bad = bad or (a, x, "shape", s.obj)
                continue
            total = total + c.comp(s.p, s.q)
        if total.v != c.identities[t]:
            bad = bad or (a, x, total.coords())
    rep.check("summands resolve the identity", bad is None, bad, "fusion/decomposition")
    bad = None
    for x in c.objects:
        m = fs.bound(x)
        for b in fs.index:
            occ = sum(fs.multiplicity(b, a, x) for a in fs.index)
            if occ > m:
                bad = bad or (b, x, occ, m)
    rep.check("multiplicities within bounds", bad is None, bad, "fusion/bound")
    bad = None
    if c.unit in fs.index:
        for x in c.objects:
            total = c.zero(x, x)
            for s in fs.summands[(c.unit, x)]:
                total = total + c.comp(c.lam(x), s.p, s.q, c.inv(c.lam(x)))
            if total.v != c.identities[x]:
                bad = bad or (x, total.coords())
    else:
        bad = ("no unit",)
    rep.check("index objects generate", bad is None, bad, "fusion/generation")
    return rep


def _blocks(c: CategoryPresentation, index, target):
    """Basis (A, B, k) of the block space with (A, B) block hom(B, target(A))."""
    labels, off = [], {}
    for a, b in product(index, index):
        off[(a, b)] = len(labels)
        labels.extend((a, b, k) for k in range(c.dim(b, target(a))))
    return labels, off


def _embed(v: Matrix, off: int, out: Matrix, col: int, scale=1):
    for i in range(v.rows):
        if v.data[i][0]:
            out.data[off + i][col] += v.data[i][0] * scale


def block_algebra(c: CategoryPresentation, index) -> AlgebraPresentation:
    fld = c.field
    labels, off = _blocks(c, index, lambda a: a)
    n = len(labels)
    mul = Matrix.zeros(fld, n, n * n)
    for i, (a, d, k) in enumerate(labels):
        for j, (d2, b, l) in enumerate(labels):
            if d != d2:
                continue
            g = c.comp(c.basis(d, a)[k], c.basis(b, d)[l])
            _embed(g.v, off[(a, b)], mul, i * n + j)
    unit = Matrix.zeros(fld, n, 1)
    for a in index:
        _embed(c.identities[a], off[(a, a)], unit, 0)
    return AlgebraPresentation(fld, n, mul, unit, ["%s<-%s:%d" % (b, a, k) for b, a, k in labels])


def _block_module(c: CategoryPresentation, index, R: AlgebraPresentation, x) -> tuple[Bimodule, list, dict]:
    fld = c.field
    rl, _ = _blocks(c, index, lambda a: a)
    labels, off = _blocks(c, index, lambda a: c.tensor(a, x))
    n = len(labels)
    left, right = [], []
    for a2, a, l in rl:
        r = c.basis(a, a2)[l]
        m = Matrix.zeros(fld, n, n)
        for j, (a3, b, k) in enumerate(labels):
            if a3 == a:
                g = c.comp(c.tid(r, x), c.basis(b, c.tensor(a, x))[k])
                _embed(g.v, off[(a2, b)], m, j)
        left.append(m)
    for d2, b, l in rl:
        r = c.basis(b, d2)[l]
        m = Matrix.zeros(fld, n, n)
        for j, (a, d, k) in enumerate(labels):
            if d == d2:
                g = c.comp(c.basis(d, c.tensor(a, x))[k], r)
                _embed(g.v, off[(a, b)], m, j)
        right.append(m)
    return Bimodule(R, n, left, right, ["%s" % ((a, b, k),) for a, b, k in labels]), labels, off


def build_coarse_fiber(c: CategoryPresentation, fs: FusionSystem, name: str = "F") -> FiberFunctor:
    fld = c.field
    index = fs.index
    R = block_algebra(c, index)
    images, layout = {}, {}
    for x in c.objects:
        m, labels, off = _block_module(c, index, R, x)
        images[x] = m
        layout[x] = (labels, off)
    arrows = {}
    for x, y in product(c.objects, c.objects):
        mats = []
        lx, _ = layout[x]
        _, oy = layout[y]
        for t in c.basis(x, y):
            m = Matrix.zeros(fld, images[y].dim, images[x].dim)
            for j, (a, b, k) in enumerate(lx):
                g = c.comp(c.idt(a, t), c.basis(b, c.tensor(a, x))[k])
                _embed(g.v, oy[(a, b)], m, j)
            mats.append(m)
        if mats:
            arrows[(x, y)] = mats
    F2 = {}
    for x, y in product(c.objects, c.objects):
        lx, _ = layout[x]
        ly, _ = layout[y]
        xy = c.tensor(x, y)
        _, oxy = layout[xy]
        ny = len(ly)
        m = Matrix.zeros(fld, images[xy].dim, len(lx) * ny)
        for i, (a2, b, k) in enumerate(lx):
            u = c.basis(b, c.tensor(a2, x))[k]
            for j, (b2, a, l) in enumerate(ly):
                if b != b2:
                    continue
                w = c.basis(a, c.tensor(b, y))[l]
                g = c.comp(c.alpha(a2, x, y), c.tid(u, y), w)
                _embed(g.v, oxy[(a2, a)], m, i * ny + j)
        F2[(x, y)] = m
    rl, _ = _blocks(c, index, lambda a: a)
    _, oi = layout[c.unit]
    F0 = Matrix.zeros(fld, images[c.unit].dim, R.dim)
    for j, (a, b, k) in enumerate(rl):
        g = c.comp(c.inv(c.rho(a)), c.basis(b, a)[k])
        _embed(g.v, oi[(a, b)], F0, j)
    f = FiberFunctor(c, R, images, arrows, F2, F0, name)
    f.fusion_layout = layout
    return f


def dual_basis_matrices(c: CategoryPresentation, fs: FusionSystem, x, order: list | None = None):
    """Block matrices P^j(x), Q^j(x) with sum_j P^j Q^j = 1.

    P^j maps (A, B) to an arrow B -> A (x) x and Q^j maps (B, A) to an arrow
    A (x) x -> B.  Summand i of A (x) x with object B is sent to slot j = the
    number of earlier summands with object B, visiting A in ``order``.
    """
    order = order or fs.index
    m = fs.bound(x)
    P = [dict() for _ in range(m)]
    Q = [dict() for _ in range(m)]
    used = {b: 0 for b in fs.index}
    for a in order:
        for s in fs.summands[(a, x)]:
            j = used[s.obj]
            if j >= m:
                raise ValueError("summand %s of %s (x) %s exceeds the bound %d" % (s.obj, a, x, m))
            used[s.obj] += 1
            P[j][(a, s.obj)] = s.p
            Q[j][(s.obj, a)] = s.q
    return P, Q


def pq_residual(c: CategoryPresentation, fs: FusionSystem, x, P, Q):
    """First (A, A') where sum_j P^j Q^j differs from the block identity, or None."""
    for a, a2 in product(fs.index, fs.index):
        src, dst = c.tensor(a2, x), c.tensor(a, x)
        total = c.zero(src, dst)
        for pj, qj in zip(P, Q):
            for b in fs.index:
                if (a, b) in pj and (b, a2) in qj:
                    total = total + c.comp(pj[(a, b)], qj[(b, a2)])
        want = c.identities[dst] if a == a2 else Matrix.zeros(c.field, c.dim(src, dst), 1)
        if total.v != want:
            return (a, a2, total.coords())
    return None


def assembled_f2_inverse(f: FiberFunctor, fs: FusionSystem, x, y, order: list | None = None) -> Matrix:
    """Representatives in Fx (x)_k Fy of the inverse of F2_{x,y} built from P^j, Q^j."""
    c = f.category
    fld = c.field
    lx, ox = f.fusion_layout[x]
    ly, oy = f.fusion_layout[y]
    lxy, _ = f.fusion_layout[c.tensor(x, y)]
    P, Q = dual_basis_matrices(c, fs, x, order)
    nx, ny = len(lx), len(ly)
    out = Matrix.zeros(fld, nx * ny, len(lxy))
    for col, (a2, a, k) in enumerate(lxy):
        z = c.basis(a, c.tensor(a2, c.tensor(x, y)))[k]
        back = c.comp(c.inv(c.alpha(a2, x, y)), z)
        for pj, qj in zip(P, Q):
            pv = Matrix.zeros(fld, nx, 1)
            for (a3, b), p in pj.items():
                _embed(p.v, ox[(a3, b)], pv, 0)
            yv = Matrix.zeros(fld, ny, 1)
            for (b, a4), q in qj.items():
                if a4 == a2:
                    _embed(c.comp(c.tid(q, y), back).v, oy[(b, a)], yv, 0)
            out = out + _place(pv.kron(yv), col, len(lxy))
    return out


def _place(v: Matrix, col: int, cols: int) -> Matrix:
    m = Matrix.zeros(v.field, v.rows, cols)
    for i in range(v.rows):
        m.data[i][col] = v.data[i][0]
    return m


def validate_coarse_construction(f: FiberFunctor, fs: FusionSystem, order: list | None = None) -> Report:
    c = f.category
    rep = Report("coarse construction " + f.name)
    bad = None
    for x in c.objects:
        P, Q = dual_basis_matrices(c, fs, x, order)
        r = pq_residual(c, fs, x, P, Q)
        if r is not None:
            bad = bad or (x, r)
    rep.check("PQ = 1", bad is None, bad, "fusion/PQ")
    bad = None
    for x, y in product(c.objects, c.objects):
        inv = assembled_f2_inverse(f, fs, x, y, order)
        n = f.dim(c.tensor(x, y))
        if f.F2[(x, y)] @ inv != Matrix.identity(c.field, n):
            bad = bad or (x, y)
    rep.check("F2 after assembled inverse is the identity", bad is None, bad, "fusion/F2-inverse")
    return rep
