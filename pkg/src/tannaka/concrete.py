"""Categories presented concretely by R-bimodules, with the forgetful fiber functor.

Composition, tensor of arrows and coherence arrows are read off from the
bimodule realization and the chosen structure maps F2, F0.
"""

from __future__ import annotations

from itertools import product

from .algebra import AlgebraPresentation, Bimodule, TWO_SIDED, bimodule_hom_basis, bimodule_tensor, vec
from .fiber import FiberFunctor
from .linear import Matrix, inverse, solve
from .moncat import CategoryPresentation


class NotClosed(ValueError):
    pass


def _balanced_inverse(m: Bimodule, n: Bimodule, f2: Matrix) -> Matrix:
    q = bimodule_tensor(m, n)
    return q.section @ inverse(f2 @ q.section)


def left_action_map(m: Bimodule) -> Matrix:
    """r (x) x -> r.x as a matrix on R (x)_k M."""
    r, d = m.algebra.dim, m.dim
    out = Matrix.zeros(m.algebra.field, d, r * d)
    for i in range(r):
        for x in range(d):
            for o in range(d):
                out.data[o][i * d + x] = m.left[i].data[o][x]
    return out


def right_action_map(m: Bimodule) -> Matrix:
    """x (x) r -> x.r as a matrix on M (x)_k R."""
    r, d = m.algebra.dim, m.dim
    out = Matrix.zeros(m.algebra.field, d, d * r)
    for i in range(r):
        for x in range(d):
            for o in range(d):
                out.data[o][x * r + i] = m.right[i].data[o][x]
    return out


def concrete_category(R: AlgebraPresentation, modules: dict, unit: str, tensor_obj: dict, F2: dict,
                      F0: Matrix, homs: dict | None = None, hom_filter=None, name: str = "",
                      functor_name: str = "F"):
    """Build a CategoryPresentation and its forgetful fiber functor.

    ``homs`` may fix the basis of some hom spaces as lists of matrices; other
    pairs get the two-sided bimodule maps, optionally cut down by
    ``hom_filter(a, b, maps) -> maps``.
    """
    fld = R.field
    objects = list(modules)
    homs = dict(homs or {})
    basis = {}
    for a, b in product(objects, objects):
        if (a, b) in homs:
            maps = list(homs[(a, b)])
        else:
            maps = bimodule_hom_basis(modules[a], modules[b], TWO_SIDED)
            if hom_filter is not None:
                maps = hom_filter(a, b, maps)
        basis[(a, b)] = maps

    stacked = {}
    for key, maps in basis.items():
        a, b = key
        rows = modules[a].dim * modules[b].dim
        stacked[key] = Matrix.hstack(fld, rows, [vec(m) for m in maps]) if maps else None

    def coords(a, b, m: Matrix) -> Matrix:
        n = len(basis[(a, b)])
        if n == 0:
            if not m.is_zero():
                raise NotClosed("map %s -> %s outside the presented hom space" % (a, b))
            return Matrix.zeros(fld, 0, 1)
        if m.rows * m.cols == 0:
            return Matrix.zeros(fld, n, 1)
        x = solve(stacked[(a, b)], vec(m))
        if x is None:
            raise NotClosed("map %s -> %s outside the presented hom space" % (a, b))
        return x

    def from_cols(a, b, cols):
        return Matrix.hstack(fld, len(basis[(a, b)]), cols) if cols else \
            Matrix.zeros(fld, len(basis[(a, b)]), 0)

    compose = {}
    for a, b, c in product(objects, repeat=3):
        fs, gs = basis[(a, b)], basis[(b, c)]
        if not fs or not gs:
            continue
        compose[(a, b, c)] = from_cols(a, c, [coords(a, c, g @ f) for g in gs for f in fs])
    identities = {a: coords(a, a, modules[a].identity()) for a in objects}

    f2inv = {}
    for a, b in product(objects, objects):
        f2inv[(a, b)] = _balanced_inverse(modules[a], modules[b], F2[(a, b)])

    tensor_mor = {}
    for a, b, a2, b2 in product(objects, repeat=4):
        fs, gs = basis[(a, b)], basis[(a2, b2)]
        if not fs or not gs:
            continue
        src, dst = tensor_obj[(a, a2)], tensor_obj[(b, b2)]
        cols = [coords(src, dst, F2[(b, b2)] @ f.kron(g) @ f2inv[(a, a2)]) for f in fs for g in gs]
        tensor_mor[(a, b, a2, b2)] = from_cols(src, dst, cols)

    associator = {}
    for a, b, c in product(objects, repeat=3):
        ab, bc = tensor_obj[(a, b)], tensor_obj[(b, c)]
        pull = f2inv[(a, b)].kron(modules[c].identity()) @ f2inv[(ab, c)]
        push = F2[(a, bc)] @ modules[a].identity().kron(F2[(b, c)])
        associator[(a, b, c)] = coords(tensor_obj[(ab, c)], tensor_obj[(a, bc)], push @ pull)
    f0inv = inverse(F0)
    left_unitor, right_unitor = {}, {}
    for a in objects:
        ia = modules[a].identity()
        lm = left_action_map(modules[a]) @ f0inv.kron(ia) @ f2inv[(unit, a)]
        rm = right_action_map(modules[a]) @ ia.kron(f0inv) @ f2inv[(a, unit)]
        left_unitor[a] = coords(tensor_obj[(unit, a)], a, lm)
        right_unitor[a] = coords(tensor_obj[(a, unit)], a, rm)

    labels = {key: ["%s>%s#%d" % (key[0], key[1], i) for i in range(len(maps))]
              for key, maps in basis.items() if maps}
    cat = CategoryPresentation(
        field=fld, objects=objects, unit=unit, hom=labels, compose=compose, identities=identities,
        tensor_obj=dict(tensor_obj), tensor_mor=tensor_mor, associator=associator,
        left_unitor=left_unitor, right_unitor=right_unitor, name=name)
    arrows = {key: maps for key, maps in basis.items() if maps}
    fib = FiberFunctor(cat, R, dict(modules), arrows, dict(F2), F0, functor_name)
    fib.hom_coordinates = coords
    return cat, fib
