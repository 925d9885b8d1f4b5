"""Finitely presented k-linear monoidal categories.

Arrows are coordinate columns in named hom bases.  Composition and the
tensor product of arrows are bilinear maps stored as matrices acting on
Kronecker products of coordinates.  The object tensor is a total table of
labels; coherence isomorphisms are explicit arrows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import product

from .linear import Field, Matrix, NotInvertible, kernel_basis, solve
from .report import Report


class MissingData(ValueError):
    pass


class NotPrincipal(ValueError):
    pass


class UnknownObject(KeyError):
    pass


@dataclass(frozen=True)
class Arrow:
    dom: str
    cod: str
    v: Matrix

    def __add__(self, other):
        assert (self.dom, self.cod) == (other.dom, other.cod)
        return Arrow(self.dom, self.cod, self.v + other.v)

    def __sub__(self, other):
        assert (self.dom, self.cod) == (other.dom, other.cod)
        return Arrow(self.dom, self.cod, self.v - other.v)

    def __neg__(self):
        return Arrow(self.dom, self.cod, -self.v)

    def scale(self, c):
        return Arrow(self.dom, self.cod, self.v.scale(c))

    def is_zero(self):
        return self.v.is_zero()

    def coords(self):
        return [str(x) for x in self.v.flat()]

    def __repr__(self):
        return "Arrow(%s->%s: %s)" % (self.dom, self.cod, " ".join(self.coords()))


@dataclass
class Biproduct:
    target: str
    summands: list[str]
    injections: list[Arrow]
    projections: list[Arrow]


@dataclass
class Duality:
    dual: dict                      # C -> C*
    ev: dict                        # C -> arrow C* (x) C -> I
    db: dict                        # C -> arrow I -> C (x) C*
    u: Arrow                        # I -> I*
    v: dict                         # (C, D) -> arrow D* (x) C* -> (C (x) D)*


@dataclass
class CategoryPresentation:
    field: Field
    objects: list[str]
    unit: str
    hom: dict                                   # (A, B) -> list of basis labels
    compose: dict                               # (A, B, C) -> matrix hom(A,C) <- hom(B,C) (x) hom(A,B)
    identities: dict                            # A -> column in hom(A, A)
    tensor_obj: dict                            # (A, B) -> label
    tensor_mor: dict                            # (A, B, A2, B2) -> matrix
    associator: dict                            # (A, B, C) -> column
    left_unitor: dict                           # A -> column in hom(I (x) A, A)
    right_unitor: dict                          # A -> column in hom(A (x) I, A)
    biproducts: list = dc_field(default_factory=list)
    duality: Duality | None = None
    pivot: dict | None = None                   # C -> column in hom(C, C**)
    weak_kernels: dict | None = None            # (A, B, i) -> Arrow
    name: str = ""

    def __post_init__(self):
        self._inv_cache = {}
        self._index = {o: i for i, o in enumerate(self.objects)}

    # basic access

    def check_object(self, a):
        if a not in self._index:
            raise UnknownObject(a)

    def dim(self, a, b) -> int:
        return len(self.hom.get((a, b), ()))

    def tensor(self, a, b) -> str:
        return self.tensor_obj[(a, b)]

    def arrow(self, a, b, coords) -> Arrow:
        return Arrow(a, b, Matrix.column(self.field, coords))

    def zero(self, a, b) -> Arrow:
        return Arrow(a, b, Matrix.zeros(self.field, self.dim(a, b), 1))

    def basis(self, a, b) -> list[Arrow]:
        n = self.dim(a, b)
        return [Arrow(a, b, Matrix.unit(self.field, n, i)) for i in range(n)]

    def all_basis_arrows(self):
        for a in self.objects:
            for b in self.objects:
                yield from self.basis(a, b)

    def id(self, a) -> Arrow:
        return Arrow(a, a, self.identities[a])

    def compose_matrix(self, a, b, c) -> Matrix:
        m = self.compose.get((a, b, c))
        if m is None:
            return Matrix.zeros(self.field, self.dim(a, c), self.dim(b, c) * self.dim(a, b))
        return m

    def tensor_matrix(self, a, b, a2, b2) -> Matrix:
        m = self.tensor_mor.get((a, b, a2, b2))
        if m is None:
            return Matrix.zeros(self.field, self.dim(self.tensor(a, a2), self.tensor(b, b2)),
                                self.dim(a, b) * self.dim(a2, b2))
        return m

    def comp(self, *arrows: Arrow) -> Arrow:
        """comp(g, f) = g o f; more arguments compose right to left."""
        out = arrows[-1]
        for g in reversed(arrows[:-1]):
            if g.dom != out.cod:
                raise ValueError("cannot compose %s after %s" % (g, out))
            out = Arrow(out.dom, g.cod, self.compose_matrix(out.dom, out.cod, g.cod) @ g.v.kron(out.v))
        return out

    def tens(self, f: Arrow, g: Arrow) -> Arrow:
        m = self.tensor_matrix(f.dom, f.cod, g.dom, g.cod)
        return Arrow(self.tensor(f.dom, g.dom), self.tensor(f.cod, g.cod), m @ f.v.kron(g.v))

    def alpha(self, a, b, c) -> Arrow:
        ab, bc = self.tensor(a, b), self.tensor(b, c)
        return Arrow(self.tensor(ab, c), self.tensor(a, bc), self.associator[(a, b, c)])

    def lam(self, a) -> Arrow:
        return Arrow(self.tensor(self.unit, a), a, self.left_unitor[a])

    def rho(self, a) -> Arrow:
        return Arrow(self.tensor(a, self.unit), a, self.right_unitor[a])

    def inv(self, f: Arrow) -> Arrow:
        key = (f.dom, f.cod, tuple(f.v.flat()))
        hit = self._inv_cache.get(key)
        if hit is not None:
            return hit
        a, b = f.dom, f.cod
        n = self.dim(b, a)
        if n == 0:
            if self.identities[a].is_zero() and self.identities[b].is_zero():
                return Arrow(b, a, Matrix.zeros(self.field, 0, 1))
            raise NotInvertible("arrow %r has no inverse" % (f,))
        # g o f = id_a and f o g = id_b, linear in g
        cols_l = [self.comp(g, f).v for g in self.basis(b, a)]
        cols_r = [self.comp(f, g).v for g in self.basis(b, a)]
        lhs = Matrix.vstack(self.field, n, [
            Matrix.hstack(self.field, self.dim(a, a), cols_l) if n else Matrix.zeros(self.field, self.dim(a, a), 0),
            Matrix.hstack(self.field, self.dim(b, b), cols_r) if n else Matrix.zeros(self.field, self.dim(b, b), 0),
        ])
        rhs = Matrix.vstack(self.field, 1, [self.identities[a], self.identities[b]])
        x = solve(lhs, rhs)
        if x is None:
            raise NotInvertible("arrow %r has no inverse" % (f,))
        g = Arrow(b, a, x)
        self._inv_cache[key] = g
        return g

    def is_invertible(self, f: Arrow) -> bool:
        try:
            self.inv(f)
            return True
        except NotInvertible:
            return False

    def alpha_inv(self, a, b, c):
        return self.inv(self.alpha(a, b, c))

    def lam_inv(self, a):
        return self.inv(self.lam(a))

    def rho_inv(self, a):
        return self.inv(self.rho(a))

    def idt(self, a, f: Arrow) -> Arrow:
        """a (x) f"""
        return self.tens(self.id(a), f)

    def tid(self, f: Arrow, a) -> Arrow:
        """f (x) a"""
        return self.tens(f, self.id(a))

    def linear_map(self, fn, a, b) -> Matrix:
        """Matrix of a linear map on hom(a, b) given on basis arrows."""
        cols = [fn(x).v for x in self.basis(a, b)]
        if not cols:
            return None
        return Matrix.hstack(self.field, cols[0].rows, cols)

    # duality

    def require_duality(self):
        if self.duality is None:
            raise MissingData("category has no duality data")
        return self.duality

    def dual(self, c) -> str:
        return self.require_duality().dual[c]

    def ev(self, c) -> Arrow:
        d = self.require_duality()
        return Arrow(self.tensor(d.dual[c], c), self.unit, d.ev[c])

    def db(self, c) -> Arrow:
        d = self.require_duality()
        return Arrow(self.unit, self.tensor(c, d.dual[c]), d.db[c])

    def u(self) -> Arrow:
        d = self.require_duality()
        return d.u

    def v(self, c, dd) -> Arrow:
        return self.require_duality().v[(c, dd)]

    def theta(self, c) -> Arrow:
        if self.pivot is None:
            raise MissingData("category has no pivotal structure")
        cc = self.dual(self.dual(c))
        return Arrow(c, cc, self.pivot[c])

    def dual_arrow(self, t: Arrow) -> Arrow:
        """t*: B* -> A* for t: A -> B."""
        a, b = t.dom, t.cod
        sa, sb = self.dual(a), self.dual(b)
        return self.comp(
            self.lam(sa),
            self.tid(self.ev(b), sa),
            self.tid(self.idt(sb, t), sa),
            self.alpha_inv(sb, a, sa),
            self.idt(sb, self.db(a)),
            self.rho_inv(sb),
        )

    def right_ev(self, c) -> Arrow:
        """ev~_C = ev_{C*} o (theta_C (x) C*): C (x) C* -> I."""
        sc = self.dual(c)
        return self.comp(self.ev(sc), self.tid(self.theta(c), sc))

    def right_db(self, c) -> Arrow:
        """db~_C = (C* (x) theta_C^-1) o db_{C*}: I -> C* (x) C."""
        sc = self.dual(c)
        return self.comp(self.idt(sc, self.inv(self.theta(c))), self.db(sc))


def _first(bad, w):
    return bad if bad is not None else w


def validate_category(c: CategoryPresentation) -> Report:
    rep = Report("category" + (" " + c.name if c.name else ""))
    objs = c.objects
    I = c.unit
    rep.check("unit object present", I in objs, I, "category/unit")
    bad = None
    for a, b in product(objs, objs):
        t = c.tensor_obj.get((a, b))
        if t not in objs:
            bad = _first(bad, (a, b))
    rep.check("object tensor total", bad is None, bad, "category/tensor-table")
    if not rep.passed:
        return rep

    # composition
    bad_u = bad_a = None
    for a, b in product(objs, objs):
        for f in c.basis(a, b):
            if c.comp(c.id(b), f) != f or c.comp(f, c.id(a)) != f:
                bad_u = _first(bad_u, (a, b, f.coords()))
    rep.check("composition unital", bad_u is None, bad_u, "category/identity")
    for a, b, cc, d in product(objs, repeat=4):
        if not (c.dim(a, b) and c.dim(b, cc) and c.dim(cc, d)):
            continue
        for f in c.basis(a, b):
            for g in c.basis(b, cc):
                gf = c.comp(g, f)
                for h in c.basis(cc, d):
                    if c.comp(h, gf) != c.comp(c.comp(h, g), f):
                        bad_a = _first(bad_a, (a, b, cc, d, f.coords(), g.coords(), h.coords()))
    rep.check("composition associative", bad_a is None, bad_a, "category/associativity")

    # functoriality of the tensor product
    bad_id = None
    for a, b in product(objs, objs):
        if c.tens(c.id(a), c.id(b)) != c.id(c.tensor(a, b)):
            bad_id = _first(bad_id, (a, b))
    rep.check("tensor of identities", bad_id is None, bad_id, "category/tensor-identity")
    bad = None
    for a, b, cc, a2, b2, c2 in product(objs, repeat=6):
        if not (c.dim(a, b) and c.dim(b, cc) and c.dim(a2, b2) and c.dim(b2, c2)):
            continue
        for f in c.basis(a, b):
            for g in c.basis(b, cc):
                for f2 in c.basis(a2, b2):
                    for g2 in c.basis(b2, c2):
                        lhs = c.comp(c.tens(g, g2), c.tens(f, f2))
                        rhs = c.tens(c.comp(g, f), c.comp(g2, f2))
                        if lhs != rhs:
                            bad = _first(bad, (a, b, cc, a2, b2, c2, f.coords(), g.coords(),
                                               f2.coords(), g2.coords()))
    rep.check("interchange law", bad is None, bad, "category/interchange")

    # coherence isomorphisms
    bad = None
    for a, b, cc in product(objs, repeat=3):
        if not c.is_invertible(c.alpha(a, b, cc)):
            bad = _first(bad, ("alpha", a, b, cc))
    for a in objs:
        if not c.is_invertible(c.lam(a)):
            bad = _first(bad, ("lambda", a))
        if not c.is_invertible(c.rho(a)):
            bad = _first(bad, ("rho", a))
    rep.check("coherence arrows invertible", bad is None, bad, "category/coherence-iso")
    if bad is not None:
        return rep

    bad = None
    for a, a2, b, b2, cc, c2 in product(objs, repeat=6):
        if not (c.dim(a, a2) and c.dim(b, b2) and c.dim(cc, c2)):
            continue
        for f in c.basis(a, a2):
            for g in c.basis(b, b2):
                for h in c.basis(cc, c2):
                    lhs = c.comp(c.alpha(a2, b2, c2), c.tens(c.tens(f, g), h))
                    rhs = c.comp(c.tens(f, c.tens(g, h)), c.alpha(a, b, cc))
                    if lhs != rhs:
                        bad = _first(bad, (a, b, cc, a2, b2, c2, f.coords(), g.coords(), h.coords()))
    rep.check("associator natural", bad is None, bad, "category/associator-naturality")
    bad = None
    for a, b in product(objs, objs):
        for f in c.basis(a, b):
            if c.comp(f, c.lam(a)) != c.comp(c.lam(b), c.idt(I, f)):
                bad = _first(bad, ("lambda", a, b, f.coords()))
            if c.comp(f, c.rho(a)) != c.comp(c.rho(b), c.tid(f, I)):
                bad = _first(bad, ("rho", a, b, f.coords()))
    rep.check("unitors natural", bad is None, bad, "category/unitor-naturality")

    bad = None
    for a, b, cc, d in product(objs, repeat=4):
        ab, bc, cd = c.tensor(a, b), c.tensor(b, cc), c.tensor(cc, d)
        lhs = c.comp(c.alpha(a, b, cd), c.alpha(ab, cc, d))
        rhs = c.comp(c.idt(a, c.alpha(b, cc, d)), c.alpha(a, bc, d), c.tid(c.alpha(a, b, cc), d))
        if lhs != rhs:
            bad = _first(bad, (a, b, cc, d))
    rep.check("pentagon", bad is None, bad, "category/pentagon")
    bad = None
    for a, b in product(objs, objs):
        lhs = c.comp(c.idt(a, c.lam(b)), c.alpha(a, I, b))
        rhs = c.tid(c.rho(a), b)
        if lhs != rhs:
            bad = _first(bad, (a, b))
    rep.check("triangle", bad is None, bad, "category/triangle")

    if c.biproducts:
        bad = None
        for k, bp in enumerate(c.biproducts):
            tot = c.zero(bp.target, bp.target)
            for p, q in zip(bp.injections, bp.projections):
                tot = tot + c.comp(p, q)
            if tot != c.id(bp.target):
                bad = _first(bad, (k, "sum p q != id"))
            for i, q in enumerate(bp.projections):
                for j, p in enumerate(bp.injections):
                    want = c.id(bp.summands[i]) if i == j else c.zero(p.dom, q.cod)
                    if c.comp(q, p) != want:
                        bad = _first(bad, (k, i, j))
        rep.check("biproduct identities", bad is None, bad, "category/biproducts")
    if c.weak_kernels:
        bad = None
        for key, w in sorted(c.weak_kernels.items(), key=lambda kv: str(kv[0])):
            a, b, i = key
            t = c.basis(a, b)[i]
            if not c.comp(t, w).is_zero():
                bad = _first(bad, key)
        rep.check("weak kernels annihilate", bad is None, bad, "category/weak-kernels")
    return rep


def validate_duality_and_pivot(c: CategoryPresentation) -> Report:
    if c.duality is None:
        raise MissingData("category has no duality data")
    rep = Report("duality and pivot" + (" " + c.name if c.name else ""))
    objs = c.objects
    I = c.unit
    bad1 = bad2 = None
    for x in objs:
        sx = c.dual(x)
        s1 = c.comp(c.rho(x), c.idt(x, c.ev(x)), c.alpha(x, sx, x), c.tid(c.db(x), x), c.lam_inv(x))
        if s1 != c.id(x):
            bad1 = _first(bad1, x)
        s2 = c.comp(c.lam(sx), c.tid(c.ev(x), sx), c.alpha_inv(sx, x, sx), c.idt(sx, c.db(x)), c.rho_inv(sx))
        if s2 != c.id(sx):
            bad2 = _first(bad2, x)
    rep.check("snake (C)", bad1 is None, bad1, "duality/snake-object")
    rep.check("snake (C*)", bad2 is None, bad2, "duality/snake-dual")
    bad = None
    if not c.is_invertible(c.u()):
        bad = ("u",)
    for x, y in product(objs, objs):
        if not c.is_invertible(c.v(x, y)):
            bad = _first(bad, ("v", x, y))
    rep.check("u, v invertible", bad is None, bad, "duality/monoidal-structure")
    if c.pivot is None:
        rep.skip("pivot", "no pivotal structure supplied", "pivot/invertible")
        return rep
    bad = None
    for x in objs:
        if not c.is_invertible(c.theta(x)):
            bad = _first(bad, x)
    rep.check("pivot invertible", bad is None, bad, "pivot/invertible")
    if bad is not None:
        return rep
    bad = None
    for a, b in product(objs, objs):
        for t in c.basis(a, b):
            lhs = c.comp(c.dual_arrow(c.dual_arrow(t)), c.theta(a))
            rhs = c.comp(c.theta(b), t)
            if lhs != rhs:
                bad = _first(bad, (a, b, t.coords()))
    rep.check("pivot natural", bad is None, bad, "pivot/naturality")
    bad = None
    for b, x in product(objs, objs):
        sb, sx = c.dual(b), c.dual(x)
        rhs = c.comp(c.dual_arrow(c.inv(c.v(b, x))), c.v(sx, sb), c.tens(c.theta(b), c.theta(x)))
        if c.theta(c.tensor(b, x)) != rhs:
            bad = _first(bad, (b, x))
    rep.check("pivot monoidal (tensor)", bad is None, bad, "pivot/monoidal-tensor")
    u = c.u()
    rep.check("pivot monoidal (unit)", c.theta(I) == c.comp(c.dual_arrow(c.inv(u)), u),
              c.theta(I).coords(), "pivot/monoidal-unit")
    bad1 = bad2 = None
    for x in objs:
        sx = c.dual(x)
        s1 = c.comp(c.lam(x), c.tid(c.right_ev(x), x), c.alpha_inv(x, sx, x), c.idt(x, c.right_db(x)),
                    c.rho_inv(x))
        if s1 != c.id(x):
            bad1 = _first(bad1, x)
        s2 = c.comp(c.rho(sx), c.idt(sx, c.right_ev(x)), c.alpha(sx, x, sx), c.tid(c.right_db(x), sx),
                    c.lam_inv(sx))
        if s2 != c.id(sx):
            bad2 = _first(bad2, x)
    rep.check("derived right duality snake (C)", bad1 is None, bad1, "duality/right-snake-object")
    rep.check("derived right duality snake (*C)", bad2 is None, bad2, "duality/right-snake-dual")
    return rep


def kernel_at(c: CategoryPresentation, t: Arrow, x) -> Matrix:
    """Columns spanning {q in hom(x, dom t) : t o q = 0}."""
    a = t.dom
    n = c.dim(x, a)
    if n == 0:
        return Matrix.zeros(c.field, 0, 0)
    m = c.linear_map(lambda q: c.comp(t, q), x, a)
    if m.rows == 0:
        return Matrix.identity(c.field, n)
    return kernel_basis(m)


def generated_span(c: CategoryPresentation, ws: list[Arrow], x) -> Matrix | None:
    """Columns spanning {w o r : w in ws, r in hom(x, dom w)} inside hom(x, cod)."""
    cols = []
    for w in ws:
        for r in c.basis(x, w.dom):
            cols.append(c.comp(w, r).v)
    if not cols:
        return None
    return Matrix.hstack(c.field, cols[0].rows, cols)


def _contains(span: Matrix | None, target: Matrix) -> bool:
    if target.cols == 0 or target.rows == 0:
        return True
    if span is None:
        return target.is_zero()
    return solve(span, target) is not None


def weak_kernel_certificate(c: CategoryPresentation, t: Arrow, seed: int = 0, samples: int = 8) -> Arrow:
    """A single arrow w with t o w = 0 generating the kernel sieve of t at presented objects."""
    a = t.dom
    kernels = {x: kernel_at(c, t, x) for x in c.objects}
    if all(k.cols == 0 for k in kernels.values()):
        return c.zero(a, a)
    rng = random.Random(seed)
    candidates = []
    if c.comp(t, c.id(a)).is_zero():
        candidates.append(c.id(a))
    for w_obj in c.objects:
        k = kernels[w_obj]
        if k.cols == 0:
            continue
        vecs = [k.column_matrix(j) for j in range(k.cols)]
        candidates.extend(Arrow(w_obj, a, v) for v in vecs)
        tot = vecs[0]
        for v in vecs[1:]:
            tot = tot + v
        candidates.append(Arrow(w_obj, a, tot))
        for _ in range(samples):
            s = Matrix.zeros(c.field, vecs[0].rows, 1)
            for v in vecs:
                s = s + v.scale(rng.randint(-3, 3))
            if not s.is_zero():
                candidates.append(Arrow(w_obj, a, s))
    for w in candidates:
        if all(_contains(generated_span(c, [w], x), kernels[x]) for x in c.objects if kernels[x].cols):
            return w
    raise NotPrincipal("no single generator found for the kernel sieve of %r" % (t,))
