"""Round trip from a bialgebroid through a finite catalog of comodules and back.

The catalog spans a small monoidal category of comodules whose forgetful
functor is a fiber functor; the bialgebroid rebuilt from it maps to the
original one by n(phi (x) x) = x_(1) t(phi(x_(0))).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .algebra import TWO_SIDED, NotFgProjective, bimodule_hom_basis, right_dual_data
from .bialgebroid import (Bialgebroid, Comodule, build_bialgebroid, comodule_maps, comodule_tensor,
                          unit_comodule, validate_comodule, well_defined_on)
from .concrete import concrete_category
from .fiber import FiberFunctor
from .hopf_galois import NotWellDefined, _first_relation_witness
from .linear import Matrix, rref
from .moncat import CategoryPresentation
from .report import Report


class CatalogNotClosed(ValueError):
    pass


@dataclass
class ComoduleCatalog:
    """Finitely many comodules over ``bialgebroid``, one per object name.

    ``tensor`` optionally fixes the object map; missing pairs are found by
    searching the catalog for an isomorphic comodule.
    """

    bialgebroid: Bialgebroid
    comodules: dict
    unit: str
    tensor: dict = field(default_factory=dict)

    @property
    def names(self) -> list:
        return list(self.comodules)


def validate_catalog(cat: ComoduleCatalog) -> Report:
    rep = Report("comodule catalog", scope="finite catalog")
    bad = None
    for name, m in cat.comodules.items():
        if not validate_comodule(m).passed:
            bad = bad or (name, "comodule")
            continue
        try:
            right_dual_data(m.module)
        except NotFgProjective:
            bad = bad or (name, "not finitely generated projective")
    rep.check("entries are fgp comodules", bad is None, bad, "reconstruct/catalog")
    rep.check("unit comodule listed", cat.unit in cat.comodules, cat.unit, "reconstruct/catalog")
    return rep


def _invertible(m: Matrix) -> bool:
    return m.rows == m.cols and (m.rows == 0 or rref(m)[2] == m.rows)


def comodule_isomorphism(m: Comodule, n: Comodule, seed: int = 0, tries: int = 24) -> Matrix | None:
    """An invertible comodule map M -> N, or None when none is found."""
    fld = m.h.field
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return Matrix.zeros(fld, 0, 0)
    maps = comodule_maps(m, n, bimodule_hom_basis(m.module, n.module, TWO_SIDED))
    for x in maps:
        if _invertible(x):
            return x
    rng = random.Random(seed)
    for _ in range(tries if len(maps) > 1 else 0):
        tot = Matrix.zeros(fld, n.dim, m.dim)
        for x in maps:
            tot = tot + x.scale(fld(rng.randint(-3, 3)))
        if _invertible(tot):
            return tot
    return None


def fiber_from_bialgebroid(cat: ComoduleCatalog, name: str = "comodules") -> tuple[CategoryPresentation, FiberFunctor]:
    j = cat.bialgebroid
    R = j.base
    mods = cat.comodules
    names = cat.names
    tensor_obj, F2 = {}, {}
    for a, b in product(names, names):
        t = comodule_tensor(mods[a], mods[b])
        targets = [cat.tensor[(a, b)]] if (a, b) in cat.tensor else names
        hit = None
        for c in targets:
            iso = comodule_isomorphism(t, mods[c])
            if iso is not None:
                hit = (c, iso)
                break
        if hit is None:
            raise CatalogNotClosed("%s (x) %s is not isomorphic to a catalog entry" % (a, b))
        tensor_obj[(a, b)] = hit[0]
        F2[(a, b)] = hit[1] @ t.tensor_data.projection
    F0 = comodule_isomorphism(unit_comodule(j), mods[cat.unit])
    if F0 is None:
        raise CatalogNotClosed("entry %s is not the unit comodule" % cat.unit)

    def only_comodule_maps(a, b, maps):
        return comodule_maps(mods[a], mods[b], maps)

    return concrete_category(R, {x: mods[x].module for x in names}, cat.unit, tensor_obj, F2, F0,
                             hom_filter=only_comodule_maps, name=name, functor_name="forget")


def comparison_ambient(h: Bialgebroid, j: Bialgebroid, cat: ComoduleCatalog) -> Matrix:
    """n on the direct sum before the coend relations, one column per tag."""
    fld = j.field
    sp = h.carrier
    g = h.dual_functor
    cols = []
    for c, a, b in sp.tags:
        m = cat.comodules[c]
        d = g.duals[c]
        phi = d.functional(Matrix.unit(fld, len(d.basis), a))
        rep = m.delta_rep() @ Matrix.unit(fld, m.dim, b)
        tot = Matrix.zeros(fld, j.dim, 1)
        for x0, x1 in product(range(m.dim), range(j.dim)):
            cf = rep.data[x0 * j.dim + x1][0]
            if cf:
                r = phi @ Matrix.unit(fld, m.dim, x0)
                tot = tot + j.rmul(j.t @ r) @ j.basis(x1).scale(cf)
        cols.append(tot)
    return Matrix.hstack(fld, j.dim, cols) if cols else Matrix.zeros(fld, j.dim, 0)


def comparison_map_n(h: Bialgebroid, j: Bialgebroid, cat: ComoduleCatalog) -> Matrix:
    amb = comparison_ambient(h, j, cat)
    q = h.carrier.quotient
    w = _first_relation_witness(q, amb)
    if w is not None:
        raise NotWellDefined("n does not vanish on coend relation %d" % w, w)
    return amb @ q.sect


def verify_bialgebroid_iso(n: Matrix, h: Bialgebroid, j: Bialgebroid) -> Report:
    rep = Report("bialgebroid isomorphism")
    rep.check("bijective", _invertible(n), (n.rows, n.cols), "reconstruct/bijective")
    if n.rows != j.dim or n.cols != h.dim:
        rep.fail("shape", (n.rows, n.cols, j.dim, h.dim), "reconstruct/shape")
        return rep
    bad = None
    for a, b in product(range(h.dim), range(h.dim)):
        ea, eb = h.basis(a), h.basis(b)
        if n @ h.mul(ea, eb) != j.mul(n @ ea, n @ eb):
            bad = bad or (a, b)
    rep.check("multiplicative", bad is None, bad, "reconstruct/mult")
    rep.check("unit", n @ h.unit == j.unit, n @ h.unit, "reconstruct/unit")
    rep.check("source map", n @ h.s == j.s, n @ h.s - j.s, "reconstruct/source")
    rep.check("target map", n @ h.t == j.t, n @ h.t - j.t, "reconstruct/target")
    nn = n.kron(n)
    q = j.bar2()
    ok = well_defined_on(h.bar2(), q.proj @ nn)
    lhs = q.proj @ nn @ h.delta_rep()
    rhs = j.delta @ n
    rep.check("comultiplicative", ok and lhs == rhs, (lhs - rhs) if ok else "n (x) n not balanced", "reconstruct/delta")
    rep.check("counit", j.eps @ n == h.eps, j.eps @ n - h.eps, "reconstruct/counit")
    return rep


def reconstruction_roundtrip(cat: ComoduleCatalog) -> Report:
    """Catalog -> category and fiber functor -> bialgebroid H -> n: H -> J."""
    j = cat.bialgebroid
    rep = Report("reconstruction round trip", scope="finite catalog")
    rep.extend(validate_catalog(cat))
    _, f = fiber_from_bialgebroid(cat)
    h = build_bialgebroid(f)
    rep.check("dim H = dim J", h.dim == j.dim, (h.dim, j.dim), "reconstruct/dimension")
    try:
        n = comparison_map_n(h, j, cat)
    except NotWellDefined as e:
        rep.fail("n well defined", e.witness, "reconstruct/well-defined")
        return rep
    rep.check("n well defined", True, anchor="reconstruct/well-defined")
    rep.extend(verify_bialgebroid_iso(n, h, j))
    return rep
