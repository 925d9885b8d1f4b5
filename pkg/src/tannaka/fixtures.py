"""Small categories with fiber functors used by tests, demos and shipped bundles."""

from __future__ import annotations

from itertools import product

from .algebra import AlgebraPresentation, Bimodule, FrobeniusDatum
from .bialgebroid import Bialgebroid, Comodule
from .concrete import concrete_category, left_action_map, right_action_map
from .fiber import FiberFunctor
from .linear import QQ, Field, Matrix
from .moncat import Arrow, CategoryPresentation, Duality
from .reconstruct import ComoduleCatalog


def one_dim(R: AlgebraPresentation, left=None, right=None) -> Bimodule:
    """A one-dimensional bimodule; over k this is k itself."""
    fld = R.field
    left = left or [R.unit.data[i][0] for i in range(R.dim)]
    right = right or left
    return Bimodule(R, 1, [Matrix(fld, 1, 1, [[fld(x)]]) for x in left],
                    [Matrix(fld, 1, 1, [[fld(x)]]) for x in right])


def scalar(fld, x) -> Matrix:
    return Matrix(fld, 1, 1, [[fld(x)]])


def trivial(field: Field = QQ):
    R = AlgebraPresentation.ground(field)
    mods = {"I": R.regular()}
    cat, f = concrete_category(R, mods, "I", {("I", "I"): "I"}, {("I", "I"): scalar(field, 1)},
                               Matrix.identity(field, 1), name="trivial")
    one = Matrix.column(field, [1])
    cat.duality = Duality({"I": "I"}, {"I": one}, {"I": one}, Arrow("I", "I", one),
                          {("I", "I"): Arrow("I", "I", one)})
    cat.pivot = {"I": one}
    return cat, f


def cyclic_names(n: int) -> list[str]:
    if n == 2:
        return ["1", "s"]
    if n == 3:
        return ["1", "w", "w2"]
    return ["1"] + ["g%d" % k for k in range(1, n)]


def cyclic(n: int, field: Field = QQ, cocycle=None):
    """The Z/n-graded category with one-dimensional simple objects and trivial associator.

    ``cocycle`` maps (g, h) index pairs to the scalar F2_{g,h}; it must be a
    normalized 2-cocycle, and the category is built from the untwisted functor.
    """
    names = cyclic_names(n)
    R = AlgebraPresentation.ground(field)
    mods = {x: one_dim(R) for x in names}
    tens = {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)}
    one = scalar(field, 1)
    F2 = {key: one for key in tens}
    homs = {(a, b): ([one] if a == b else []) for a in names for b in names}
    cat, f = concrete_category(R, mods, "1", tens, F2, Matrix.identity(field, 1), homs=homs,
                               name="Z/%d" % n)
    col = Matrix.column(field, [1])
    dual = {names[i]: names[(-i) % n] for i in range(n)}
    v = {(x, y): Arrow(tens[(dual[y], dual[x])], dual[tens[(x, y)]], col) for x in names for y in names}
    cat.duality = Duality(dual, {x: col for x in names}, {x: col for x in names}, Arrow("1", "1", col), v)
    cat.pivot = {x: col for x in names}
    if cocycle is not None:
        f = twisted(f, cocycle, "F'")
    return cat, f


def twisted(f: FiberFunctor, cocycle, name="F'") -> FiberFunctor:
    """The same functor with F2 rescaled by a 2-cocycle on object indices."""
    c = f.category
    idx = {x: i for i, x in enumerate(c.objects)}
    F2 = {}
    for (x, y), m in f.F2.items():
        F2[(x, y)] = m.scale(c.field(cocycle.get((idx[x], idx[y]), 1)))
    return FiberFunctor(c, f.base, f.images, f.arrows, F2, f.F0, name)


def z2_sign_twist(field: Field = QQ):
    """Z/2 with the forgetful functor and the functor twisted by F'2_{s,s} = -1."""
    cat, f = cyclic(2, field)
    return cat, f, twisted(f, {(1, 1): -1})


def groupoid_qq(field: Field = QQ):
    """Bimodules over Q x Q: the unit R, one line per corner E_ij, and zero."""
    R = AlgebraPresentation.diagonal(field, 2)
    reg = R.regular()
    e = {}
    for i, j in product(range(2), range(2)):
        left = [1 if k == i else 0 for k in range(2)]
        right = [1 if k == j else 0 for k in range(2)]
        e["E%d%d" % (i, j)] = one_dim(R, left, right)
    zero = Bimodule(R, 0, [Matrix.zeros(field, 0, 0)] * 2, [Matrix.zeros(field, 0, 0)] * 2)
    mods = {"I": reg, **e, "Z": zero}
    names = list(mods)
    tens, F2 = {}, {}
    for a, b in product(names, names):
        ma, mb = mods[a], mods[b]
        if a == "I":
            t = b
            m = left_action_map(mb)
        elif b == "I":
            t = a
            m = right_action_map(ma)
        elif a == "Z" or b == "Z" or a[2] != b[1]:
            t = "Z"
            m = Matrix.zeros(field, 0, ma.dim * mb.dim)
        else:
            t = "E" + a[1] + b[2]
            m = scalar(field, 1)
        tens[(a, b)] = t
        F2[(a, b)] = m
    return concrete_category(R, mods, "I", tens, F2, Matrix.identity(field, 2), name="Q x Q groupoid")


def coordinate_frobenius(R: AlgebraPresentation) -> FrobeniusDatum:
    """phi(e_i) = 1 and e = sum_i e_i (x) e_i on a diagonal algebra."""
    fld = R.field
    n = R.dim
    return FrobeniusDatum(Matrix.column(fld, [1] * n), Matrix.identity(fld, n))


def subcanonical_counterexample(field: Field = QQ):
    """Objects I, Z, X, Y over k with arrows s: Z -> X and t: Z -> Y only.

    Every non-unit tensor product is Z.  The identity FX -> FY satisfies the
    covering hypothesis through s and t but is not the image of an arrow.
    """
    R = AlgebraPresentation.ground(field)
    names = ["I", "Z", "X", "Y"]
    mods = {x: one_dim(R) for x in names}
    one = scalar(field, 1)
    tens = {(a, b): (b if a == "I" else a if b == "I" else "Z") for a in names for b in names}
    F2 = {key: one for key in tens}
    homs = {(a, b): [] for a in names for b in names}
    for x in names:
        homs[(x, x)] = [one]
    homs[("Z", "X")] = [one]
    homs[("Z", "Y")] = [one]
    return concrete_category(R, mods, "I", tens, F2, Matrix.identity(field, 1), homs=homs,
                             name="non-subcanonical counterexample")


def unfaithful_z2(field: Field = QQ):
    """Z/2 with the basis arrow of s sent to zero."""
    cat, f = cyclic(2, field)
    arrows = dict(f.arrows)
    arrows[("s", "s")] = [Matrix.zeros(field, 1, 1)]
    return cat, FiberFunctor(cat, f.base, f.images, arrows, f.F2, f.F0, "F-unfaithful")


def broken_interchange_z2(field: Field = QQ):
    """Z/2 with the tensor product of the basis arrows of s doubled."""
    cat, f = cyclic(2, field)
    key = ("s", "s", "s", "s")
    cat.tensor_mor[key] = cat.tensor_mor[key].scale(field(2))
    cat.name = "Z/2 broken interchange"
    return cat, f


def broken_pivot_z3(field: Field = QQ):
    cat, f = cyclic(3, field)
    cat.pivot = dict(cat.pivot)
    cat.pivot["w"] = Matrix.column(field, [2])
    cat.name = "Z/3 broken pivot"
    return cat, f


def dual_numbers_category(field: Field = QQ) -> CategoryPresentation:
    """One object X with hom(X, X) = k[n]/n^2 and tensor of arrows given by the product.

    A strict monoidal category without a fiber functor, used to exercise the
    sieve calculus on a nonzero arrow whose kernel sieve is nonzero.
    """
    one, zero = field.one, field.zero
    # basis (id, n); compose[(X,X,X)] maps g (x) f -> g o f
    prod = Matrix(field, 2, 4, [[one, zero, zero, zero], [zero, one, one, zero]])
    col = Matrix.column(field, [1, 0])
    return CategoryPresentation(
        field=field, objects=["X"], unit="X", hom={("X", "X"): ["id", "n"]},
        compose={("X", "X", "X"): prod}, identities={"X": col}, tensor_obj={("X", "X"): "X"},
        tensor_mor={("X", "X", "X", "X"): prod}, associator={("X", "X", "X"): col},
        left_unitor={"X": col}, right_unitor={"X": col}, name="dual numbers")


def group_bialgebra(n: int, field: Field = QQ) -> Bialgebroid:
    """k[Z/n] with group-like basis g^0, ..., g^(n-1), as a bialgebroid over k."""
    R = AlgebraPresentation.ground(field)
    mult = Matrix.zeros(field, n, n * n)
    delta = Matrix.zeros(field, n * n, n)
    for i, j in product(range(n), range(n)):
        mult.data[(i + j) % n][i * n + j] = field.one
    for i in range(n):
        delta.data[i * n + i][i] = field.one
    unit = Matrix.unit(field, n, 0)
    eps = Matrix(field, 1, n, [[field.one] * n])
    h = Bialgebroid(R, n, mult, unit, unit, unit, None, eps, labels=["g^%d" % i for i in range(n)])
    h.delta = h.bar2().proj @ delta
    return h


def grading_catalog(j: Bialgebroid) -> ComoduleCatalog:
    """The one-dimensional comodules x -> x (x) g^i of a group bialgebra, named like cyclic()."""
    n = j.dim
    fld = j.field
    names = cyclic_names(n)
    coms = {}
    for i, name in enumerate(names):
        m = Comodule(one_dim(j.base), None, j, name)
        m.delta = m.bar().proj @ Matrix.unit(fld, n, i)
        coms[name] = m
    return ComoduleCatalog(j, coms, names[0])


def _mutant(h: Bialgebroid, **changes) -> Bialgebroid:
    parts = dict(mult=h.mult, unit=h.unit, s=h.s, t=h.t, eps=h.eps)
    delta_rep = changes.pop("delta_rep", None)
    parts.update(changes)
    out = Bialgebroid(h.base, h.dim, parts["mult"], parts["unit"], parts["s"], parts["t"], None, parts["eps"],
                      labels=h.labels)
    out.delta = out.bar2().proj @ (delta_rep if delta_rep is not None else h.delta_rep())
    return out


def mutated_group_bialgebras(field: Field = QQ) -> dict:
    """k[Z/2] with one structure map perturbed; each breaks a different group of axioms.

    flipped-constant sets g.1 = -g, which breaks associativity and the unit.
    """
    h = group_bialgebra(2, field)
    one = field.one
    flipped = Matrix(field, 2, 4, [[one, 0, 0, one], [0, one, -one, 0]])
    square_minus_one = Matrix(field, 2, 4, [[one, 0, 0, -one], [0, one, one, 0]])
    delta_left = Matrix(field, 4, 2, [[one, 0], [0, 0], [0, one], [0, 0]])
    return {
        "flipped-constant": _mutant(h, mult=flipped),
        "doubled-source": _mutant(h, s=h.s.scale(field(2))),
        "coproduct-g-tensor-1": _mutant(h, delta_rep=delta_left),
        "square-minus-one": _mutant(h, mult=square_minus_one),
    }


def mutated_antipodes(field: Field = QQ) -> tuple:
    """Reconstructed H of Z/3 with wrong antipodes: (h, {name: Antipode}).

    identity keeps S multiplicative but misses the swap w <-> w2; negated
    breaks S t = s and antimultiplicativity.
    """
    from .bialgebroid import build_bialgebroid
    from .hopf_galois import Antipode, build_antipode
    from .linear import inverse

    _, f = cyclic(3, field)
    h = build_bialgebroid(f)
    s = build_antipode(f, h).S
    neg = s.scale(field(-1))
    return h, {"identity": Antipode(h.ident(), h.ident()), "negated": Antipode(neg, inverse(neg))}


def nonzero_covering(c: CategoryPresentation):
    """Covering predicate 'the sieve is nonzero'; on dual_numbers_category it is not local."""
    def covers(s) -> bool:
        return any(s.span(x).cols for x in c.objects)
    return covers
