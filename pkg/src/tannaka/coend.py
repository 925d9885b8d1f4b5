"""Tensor products over a presented category, Day convolution, and monoidal presheaves."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .linear import Matrix, Quotient, rref
from .moncat import Arrow, CategoryPresentation
from .report import Report


class PresentedPresheaf:
    """A contravariant functor given by a matrix U(t): U(cod t) -> U(dom t) per basis arrow."""

    def __init__(self, category: CategoryPresentation, dims: dict, mats: dict, name: str = "U"):
        self.category = category
        self.field = category.field
        self.dims = dims
        self.mats = mats
        self.name = name

    def dim(self, c) -> int:
        self.category.check_object(c)
        return self.dims[c]

    def apply(self, t: Arrow) -> Matrix:
        mats = self.mats.get((t.dom, t.cod), [])
        out = Matrix.zeros(self.field, self.dims[t.dom], self.dims[t.cod])
        for i, m in enumerate(mats):
            c = t.v.data[i][0]
            if c:
                out = out + m.scale(c)
        return out


def representable(c: CategoryPresentation, a) -> PresentedPresheaf:
    """YA = hom(-, A), acting by precomposition."""
    dims = {x: c.dim(x, a) for x in c.objects}
    mats = {}
    for x, y in product(c.objects, c.objects):
        if not c.dim(x, y):
            continue
        ms = []
        for t in c.basis(x, y):
            cols = [c.comp(q, t).v for q in c.basis(y, a)]
            ms.append(Matrix.hstack(c.field, dims[x], cols) if cols else Matrix.zeros(c.field, dims[x], 0))
        mats[(x, y)] = ms
    return PresentedPresheaf(c, dims, mats, "Y" + a)


def presheaf_validate(u: PresentedPresheaf) -> Report:
    c = u.category
    rep = Report("presheaf " + u.name)
    bad = None
    for x in c.objects:
        if u.apply(c.id(x)) != Matrix.identity(u.field, u.dim(x)):
            bad = bad or (x,)
    for a, b, d in product(c.objects, repeat=3):
        for s in c.basis(a, b):
            for t in c.basis(b, d):
                if u.apply(c.comp(t, s)) != u.apply(s) @ u.apply(t):
                    bad = bad or (a, b, d, s.coords(), t.coords())
    rep.check("contravariant functor", bad is None, bad, "presheaf/functor")
    return rep


class CoendSpace:
    """The quotient of the sum of U(C) (x) V(C) by U(t)y (x) x - y (x) V(t)x."""

    def __init__(self, category: CategoryPresentation, u, v):
        self.category = category
        self.field = category.field
        self.u = u
        self.v = v
        fld = self.field
        self.offsets = {}
        self.tags = []
        n = 0
        for c in category.objects:
            self.offsets[c] = n
            du, dv = u.dim(c), v.dim(c)
            for a in range(du):
                for b in range(dv):
                    self.tags.append((c, a, b))
            n += du * dv
        self.ambient = n
        rows = []
        for a, b in product(category.objects, category.objects):
            for t in category.basis(a, b):
                ut, vt = u.apply(t), v.apply(t)
                for y in range(u.dim(b)):
                    ey = Matrix.unit(fld, u.dim(b), y)
                    for x in range(v.dim(a)):
                        ex = Matrix.unit(fld, v.dim(a), x)
                        r = self.embed(a, (ut @ ey).kron(ex)) - self.embed(b, ey.kron(vt @ ex))
                        if not r.is_zero():
                            rows.append(r.T)
        rel = Matrix.vstack(fld, n, rows) if rows else None
        self.quotient = Quotient(fld, n, rel)
        self.dim = self.quotient.dim
        self.proj = self.quotient.proj
        self.sect = self.quotient.sect
        self.basis_tags = [self.tags[j] for j in self.quotient.free]

    def embed(self, c, w: Matrix) -> Matrix:
        """Ambient vector of an element of U(C) (x) V(C)."""
        out = Matrix.zeros(self.field, self.ambient, 1)
        o = self.offsets[c]
        for i in range(w.rows):
            if w.data[i][0]:
                out.data[o + i][0] = w.data[i][0]
        return out

    def block(self, c, w: Matrix) -> Matrix:
        """The U(C) (x) V(C) component of an ambient vector."""
        o = self.offsets[c]
        n = self.u.dim(c) * self.v.dim(c)
        return Matrix(self.field, n, 1, [[w.data[o + i][0]] for i in range(n)])

    def embedding(self, c) -> Matrix:
        """Ambient <- U(C) (x) V(C) inclusion matrix."""
        n = self.u.dim(c) * self.v.dim(c)
        out = Matrix.zeros(self.field, self.ambient, n)
        o = self.offsets[c]
        for i in range(n):
            out.data[o + i][i] = self.field.one
        return out

    def cls(self, c, y: Matrix, x: Matrix) -> Matrix:
        """Quotient coordinates of the class of y (x)_C x."""
        return self.proj @ self.embed(c, y.kron(x))

    def relation_residual(self) -> Matrix:
        """proj applied to the relation basis; zero exactly when the quotient is consistent."""
        rel = self.quotient.relations
        return self.proj @ rel.T if rel.rows else Matrix.zeros(self.field, self.dim, 0)


def tensor_over_C(u, v) -> CoendSpace:
    return CoendSpace(u.category if hasattr(u, "category") else v.category, u, v)


def yoneda_check(c: CategoryPresentation, v) -> Report:
    """tensor_over_C(YB, V) -> V(B), s (x) x -> V(s)x, is an isomorphism for every B."""
    rep = Report("coend Yoneda reduction")
    bad = None
    for b in c.objects:
        yb = representable(c, b)
        sp = tensor_over_C(yb, v)
        if sp.dim != v.dim(b):
            bad = bad or (b, "dimension", sp.dim, v.dim(b))
            continue
        cols = []
        for j in range(sp.ambient):
            cc, s, x = sp.tags[j]
            arrow = c.basis(cc, b)[s]
            cols.append(v.apply(arrow) @ Matrix.unit(c.field, v.dim(cc), x))
        amb = Matrix.hstack(c.field, v.dim(b), cols) if cols else Matrix.zeros(c.field, v.dim(b), 0)
        rel = sp.quotient.relations
        if rel.rows and not (amb @ rel.T).is_zero():
            bad = bad or (b, "not well defined")
            continue
        m = amb @ sp.sect
        if rref(m)[2] != v.dim(b):
            bad = bad or (b, "not invertible")
    rep.check("V(B) recovered", bad is None, bad, "coend/yoneda")
    return rep


@dataclass
class DaySpace:
    """(U . V)(C) as a quotient of the sum over (A, B) of U(A) (x) V(B) (x) hom(C, A (x) B)."""

    category: CategoryPresentation
    target: str
    offsets: dict
    ambient: int
    quotient: Quotient
    udims: dict
    vdims: dict

    @property
    def dim(self):
        return self.quotient.dim

    def generator(self, a, b, x: Matrix, y: Matrix, t: Arrow) -> Matrix:
        """Ambient vector of [x, y, t]_{A,B}."""
        c = self.category
        fld = c.field
        w = x.kron(y).kron(t.v)
        out = Matrix.zeros(fld, self.ambient, 1)
        o = self.offsets[(a, b)]
        for i in range(w.rows):
            if w.data[i][0]:
                out.data[o + i][0] = w.data[i][0]
        return out

    def normal_form(self, a, b, x: Matrix, y: Matrix, t: Arrow) -> Matrix:
        return self.quotient.proj @ self.generator(a, b, x, y, t)

    def generators(self):
        """All basis generators as (a, b, x index, y index, arrow)."""
        c = self.category
        for a, b in product(c.objects, c.objects):
            ab = c.tensor(a, b)
            for t in c.basis(self.target, ab):
                for i in range(self.udims[a]):
                    for j in range(self.vdims[b]):
                        yield a, b, i, j, t


def day_convolution_at(u, v, c) -> DaySpace:
    cat = u.category
    cat.check_object(c)
    fld = cat.field
    offsets = {}
    n = 0
    for a, b in product(cat.objects, cat.objects):
        offsets[(a, b)] = n
        n += u.dim(a) * v.dim(b) * cat.dim(c, cat.tensor(a, b))
    space = DaySpace(cat, c, offsets, n, None, {a: u.dim(a) for a in cat.objects},
                     {b: v.dim(b) for b in cat.objects})
    rows = []
    # [U(t')x, y, t]_{A',B} = [x, y, (t' (x) B) o t]_{A,B}, and the same in the second slot
    for a2, a in product(cat.objects, cat.objects):
        for tp in cat.basis(a2, a):
            ut = u.apply(tp)
            for b in cat.objects:
                mor = cat.tid(tp, b)
                for t in cat.basis(c, cat.tensor(a2, b)):
                    moved = cat.comp(mor, t)
                    for i in range(u.dim(a)):
                        x = Matrix.unit(fld, u.dim(a), i)
                        for j in range(v.dim(b)):
                            y = Matrix.unit(fld, v.dim(b), j)
                            r = space.generator(a2, b, ut @ x, y, t) - space.generator(a, b, x, y, moved)
                            if not r.is_zero():
                                rows.append(r.T)
    for b2, b in product(cat.objects, cat.objects):
        for tp in cat.basis(b2, b):
            vt = v.apply(tp)
            for a in cat.objects:
                mor = cat.idt(a, tp)
                for t in cat.basis(c, cat.tensor(a, b2)):
                    moved = cat.comp(mor, t)
                    for i in range(u.dim(a)):
                        x = Matrix.unit(fld, u.dim(a), i)
                        for j in range(v.dim(b)):
                            y = Matrix.unit(fld, v.dim(b), j)
                            r = space.generator(a, b2, x, vt @ y, t) - space.generator(a, b, x, y, moved)
                            if not r.is_zero():
                                rows.append(r.T)
    space.quotient = Quotient(fld, n, Matrix.vstack(fld, n, rows) if rows else None)
    return space


def day_yoneda_check(c: CategoryPresentation, a, b) -> Report:
    """(YA . YB)(C) -> hom(C, A (x) B), [x, y, t] -> (x (x) y) o t, is an isomorphism."""
    rep = Report("Day convolution of representables")
    ya, yb = representable(c, a), representable(c, b)
    ab = c.tensor(a, b)
    bad = None
    for x in c.objects:
        sp = day_convolution_at(ya, yb, x)
        n = c.dim(x, ab)
        cols = []
        for a2, b2, i, j, t in _ambient_order(sp):
            arrow = c.comp(c.tens(c.basis(a2, a)[i], c.basis(b2, b)[j]), t)
            cols.append(arrow.v)
        amb = Matrix.hstack(c.field, n, cols) if cols else Matrix.zeros(c.field, n, 0)
        rel = sp.quotient.relations
        if rel.rows and not (amb @ rel.T).is_zero():
            bad = bad or (x, "not well defined")
        elif sp.dim != n or rref(amb @ sp.quotient.sect)[2] != n:
            bad = bad or (x, "not bijective", sp.dim, n)
    rep.check("YA . YB = Y(A (x) B)", bad is None, bad, "day/yoneda")
    return rep


def _ambient_order(sp: DaySpace):
    """Basis generators in ambient index order."""
    c = sp.category
    for a, b in product(c.objects, c.objects):
        ab = c.tensor(a, b)
        n = c.dim(sp.target, ab)
        for i in range(sp.udims[a]):
            for j in range(sp.vdims[b]):
                for k in range(n):
                    yield a, b, i, j, c.basis(sp.target, ab)[k]


def day_multiplication(g, c) -> tuple[DaySpace, Matrix]:
    """m: (G . G)(C) -> G(C), [f, h, t] -> G(t) G2(f (x) h), on ambient coordinates."""
    sp = day_convolution_at(g, g, c)
    cols = []
    for a, b, i, j, t in _ambient_order(sp):
        f = Matrix.unit(g.field, g.dim(a), i)
        h = Matrix.unit(g.field, g.dim(b), j)
        cols.append(g.apply(t) @ g.G2[(a, b)] @ f.kron(h))
    amb = Matrix.hstack(g.field, g.dim(c), cols) if cols else Matrix.zeros(g.field, g.dim(c), 0)
    return sp, amb


def monoid_check(g) -> Report:
    """G with m from G2 and u from G0 is a monoid for Day convolution."""
    cat = g.category
    fld = g.field
    rep = Report("monoidal presheaf " + getattr(g, "name", "G"))
    bad = None
    for c in cat.objects:
        sp, amb = day_multiplication(g, c)
        rel = sp.quotient.relations
        if rel.rows and not (amb @ rel.T).is_zero():
            bad = bad or (c,)
    rep.check("multiplication well defined on Day classes", bad is None, bad, "day/monoid-well-defined")
    bad = None
    for a, b, d in product(cat.objects, repeat=3):
        ab, bd = cat.tensor(a, b), cat.tensor(b, d)
        lhs = g.apply(cat.alpha(a, b, d)) @ g.G2[(a, bd)] @ Matrix.identity(fld, g.dim(a)).kron(g.G2[(b, d)])
        rhs = g.G2[(ab, d)] @ g.G2[(a, b)].kron(Matrix.identity(fld, g.dim(d)))
        if lhs != rhs:
            bad = bad or (a, b, d)
    rep.check("associativity", bad is None, bad, "day/monoid-associative")
    unit = g.G0 @ g.base.unit
    bad = None
    I = cat.unit
    for b in cat.objects:
        ib = Matrix.identity(fld, g.dim(b))
        if g.G2[(I, b)] @ unit.kron(ib) != g.apply(cat.lam(b)):
            bad = bad or ("left", b)
        if g.G2[(b, I)] @ ib.kron(unit) != g.apply(cat.rho(b)):
            bad = bad or ("right", b)
    rep.check("unit laws", bad is None, bad, "day/monoid-unit")
    return rep
