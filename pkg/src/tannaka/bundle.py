"""JSON bundles: a category with fiber functors and optional extra data.

Matrices are nested arrays of field-element strings, columns are flat
arrays.  Parsing is strict: unknown keys, undeclared objects, missing table
entries and wrong shapes all raise Malformed with the path of the offending
field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from .algebra import AlgebraPresentation, Bimodule, FrobeniusDatum
from .bialgebroid import Bialgebroid, Comodule
from .fiber import FiberFunctor
from .fusion import FusionSystem, Summand
from .linear import QQ, Field, Matrix
from .moncat import Arrow, Biproduct, CategoryPresentation, Duality
from .reconstruct import ComoduleCatalog

FORMAT = "tannaka-bundle/1"


class Malformed(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__("%s: %s" % (path or "<root>", msg))
        self.path = path


@dataclass
class Bundle:
    field: Field
    category: CategoryPresentation
    functors: dict = field(default_factory=dict)
    bialgebroid: Bialgebroid | None = None
    fusion_systems: dict = field(default_factory=dict)
    frobenius: tuple | None = None          # (functor name, FrobeniusDatum)
    catalog: ComoduleCatalog | None = None


# writing

def _col(m: Matrix) -> list[str]:
    return [str(x) for x in m.flat()]


def _mat(m: Matrix) -> list[list[str]]:
    return m.to_strings()


def _algebra_json(a: AlgebraPresentation) -> dict:
    return {"dim": a.dim, "labels": list(a.labels), "mul": _mat(a.mul), "unit": _col(a.unit)}


def _bimodule_json(m: Bimodule) -> dict:
    return {"dim": m.dim, "left": [_mat(x) for x in m.left], "right": [_mat(x) for x in m.right]}


def category_json(c: CategoryPresentation) -> dict:
    objs = c.objects
    out = {
        "name": c.name,
        "objects": list(objs),
        "unit": c.unit,
        "hom": {a: {b: list(c.hom.get((a, b), [])) for b in objs} for a in objs},
        "compose": {},
        "identities": {a: _col(c.identities[a]) for a in objs},
        "tensor_obj": {a: {b: c.tensor(a, b) for b in objs} for a in objs},
        "tensor_mor": {},
        "associator": {a: {b: {d: _col(c.associator[(a, b, d)]) for d in objs} for b in objs} for a in objs},
        "left_unitor": {a: _col(c.left_unitor[a]) for a in objs},
        "right_unitor": {a: _col(c.right_unitor[a]) for a in objs},
    }
    for a, b, d in product(objs, repeat=3):
        if c.dim(a, b) and c.dim(b, d):
            out["compose"].setdefault(a, {}).setdefault(b, {})[d] = _mat(c.compose_matrix(a, b, d))
    for a, b, a2, b2 in product(objs, repeat=4):
        if c.dim(a, b) and c.dim(a2, b2):
            out["tensor_mor"].setdefault(a, {}).setdefault(b, {}).setdefault(a2, {})[b2] = \
                _mat(c.tensor_matrix(a, b, a2, b2))
    if c.biproducts:
        out["biproducts"] = [{"target": bp.target, "summands": list(bp.summands),
                              "injections": [_col(x.v) for x in bp.injections],
                              "projections": [_col(x.v) for x in bp.projections]} for bp in c.biproducts]
    if c.duality is not None:
        d = c.duality
        out["duality"] = {
            "dual": dict(d.dual),
            "ev": {a: _col(d.ev[a]) for a in objs},
            "db": {a: _col(d.db[a]) for a in objs},
            "u": _col(d.u.v),
            "v": {a: {b: _col(d.v[(a, b)].v) for b in objs} for a in objs},
        }
    if c.pivot is not None:
        out["pivot"] = {a: _col(c.pivot[a]) for a in objs}
    if c.weak_kernels:
        out["weak_kernels"] = [{"source": a, "target": b, "index": i, "kernel": _arrow_json(w)}
                               for (a, b, i), w in c.weak_kernels.items()]
    return out


def _arrow_json(t: Arrow) -> dict:
    return {"dom": t.dom, "cod": t.cod, "coords": _col(t.v)}


def functor_json(f: FiberFunctor) -> dict:
    c = f.category
    arrows = {}
    for (a, b), mats in f.arrows.items():
        if c.dim(a, b):
            arrows.setdefault(a, {})[b] = [_mat(m) for m in mats]
    return {
        "base": _algebra_json(f.base),
        "images": {x: _bimodule_json(f.images[x]) for x in c.objects},
        "arrows": arrows,
        "F2": {a: {b: _mat(f.F2[(a, b)]) for b in c.objects} for a in c.objects},
        "F0": _mat(f.F0),
    }


def bialgebroid_json(h: Bialgebroid) -> dict:
    return {"base": _algebra_json(h.base), "dim": h.dim, "mult": _mat(h.mult), "unit": _col(h.unit),
            "s": _mat(h.s), "t": _mat(h.t), "delta": _mat(h.delta_rep()), "eps": _mat(h.eps)}


def fusion_json(fs: FusionSystem, c: CategoryPresentation) -> dict:
    return {
        "index": list(fs.index),
        "summands": {a: {x: [{"object": s.obj, "p": _col(s.p.v), "q": _col(s.q.v)}
                             for s in fs.summands[(a, x)]] for x in c.objects} for a in fs.index},
        "bounds": {x: fs.bound(x) for x in c.objects},
    }


def catalog_json(cat: ComoduleCatalog) -> dict:
    out = {"unit": cat.unit,
           "comodules": {n: {"module": _bimodule_json(m.module), "coaction": _mat(m.delta_rep())}
                         for n, m in cat.comodules.items()}}
    if cat.tensor:
        out["tensor"] = {}
        for (a, b), t in cat.tensor.items():
            out["tensor"].setdefault(a, {})[b] = t
    return out


def bundle_json(b: Bundle) -> dict:
    out = {"format": FORMAT, "field": b.field.to_json(), "category": category_json(b.category)}
    if b.functors:
        out["functors"] = {n: functor_json(f) for n, f in b.functors.items()}
    if b.bialgebroid is not None:
        out["bialgebroid"] = bialgebroid_json(b.bialgebroid)
    if b.fusion_systems:
        out["fusion_systems"] = {n: fusion_json(fs, b.category) for n, fs in b.fusion_systems.items()}
    if b.frobenius is not None:
        name, fr = b.frobenius
        out["frobenius"] = {"functor": name, "phi": _col(fr.phi), "e": _mat(fr.e)}
    if b.catalog is not None:
        out["catalog"] = catalog_json(b.catalog)
    return out


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def write_bundle(b: Bundle, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(bundle_json(b)))


# reading

class _Reader:
    def __init__(self, fld: Field):
        self.field = fld

    def obj(self, d, path, required=(), optional=()):
        if not isinstance(d, dict):
            raise Malformed(path, "expected an object")
        allowed = set(required) | set(optional)
        for k in d:
            if k not in allowed:
                raise Malformed(_join(path, k), "unknown field")
        for k in required:
            if k not in d:
                raise Malformed(_join(path, k), "missing field")
        return d

    def elem(self, x, path):
        try:
            return self.field.parse(x)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise Malformed(path, "bad field element %r (%s)" % (x, e))

    def col(self, x, path, n) -> Matrix:
        if not isinstance(x, list):
            raise Malformed(path, "expected a column array")
        if len(x) != n:
            raise Malformed(path, "expected %d entries, got %d" % (n, len(x)))
        return Matrix(self.field, n, 1, [[self.elem(e, "%s[%d]" % (path, i))] for i, e in enumerate(x)])

    def mat(self, x, path, rows, cols) -> Matrix:
        if not isinstance(x, list):
            raise Malformed(path, "expected a matrix array")
        if len(x) != rows:
            raise Malformed(path, "expected %d rows, got %d" % (rows, len(x)))
        data = []
        for i, r in enumerate(x):
            if not isinstance(r, list) or len(r) != cols:
                raise Malformed("%s[%d]" % (path, i), "expected a row of %d entries" % cols)
            data.append([self.elem(e, "%s[%d][%d]" % (path, i, j)) for j, e in enumerate(r)])
        return Matrix(self.field, rows, cols, data)

    def int_(self, x, path, lo=0) -> int:
        if not isinstance(x, int) or isinstance(x, bool) or x < lo:
            raise Malformed(path, "expected an integer >= %d" % lo)
        return x

    def str_(self, x, path) -> str:
        if not isinstance(x, str):
            raise Malformed(path, "expected a string")
        return x

    def name(self, x, path, names) -> str:
        self.str_(x, path)
        if x not in names:
            raise Malformed(path, "undeclared object %r" % x)
        return x

    def table(self, d, path, keys):
        """A dict keyed exactly by declared names (missing keys allowed)."""
        if not isinstance(d, dict):
            raise Malformed(path, "expected an object")
        for k in d:
            if k not in keys:
                raise Malformed(_join(path, k), "undeclared object %r" % k)
        return d

    def total(self, d, path, keys):
        self.table(d, path, keys)
        for k in keys:
            if k not in d:
                raise Malformed(_join(path, k), "missing entry")
        return d


def _dig(r: _Reader, d, path, keys, names):
    """Entry at a nested key path, or None; every level must be keyed by declared names."""
    node = d
    for k in keys:
        r.table(node, path, names)
        if k not in node:
            return None
        node = node[k]
        path = _join(path, k)
    return node


def _join(path, k):
    return "%s.%s" % (path, k) if path else str(k)


def _parse_field(x) -> Field:
    r = _Reader(QQ)
    r.obj(x, "field", ["kind"], ["p"])
    if x["kind"] == "rationals":
        if "p" in x:
            raise Malformed("field.p", "rationals take no characteristic")
        return QQ
    if x["kind"] == "prime":
        if "p" not in x:
            raise Malformed("field.p", "missing field")
        try:
            return Field(r.int_(x["p"], "field.p", 2))
        except ValueError as e:
            raise Malformed("field.p", str(e))
    raise Malformed("field.kind", "expected 'rationals' or 'prime'")


def _parse_category(r: _Reader, d, path="category") -> CategoryPresentation:
    r.obj(d, path, ["name", "objects", "unit", "hom", "compose", "identities", "tensor_obj", "tensor_mor",
                    "associator", "left_unitor", "right_unitor"],
          ["biproducts", "duality", "pivot", "weak_kernels"])
    objs = d["objects"]
    if not isinstance(objs, list) or not objs or not all(isinstance(o, str) for o in objs):
        raise Malformed(path + ".objects", "expected a non-empty list of names")
    if len(set(objs)) != len(objs):
        raise Malformed(path + ".objects", "duplicate object names")
    r.str_(d["name"], path + ".name")
    unit = r.name(d["unit"], path + ".unit", objs)
    hom = {}
    r.total(d["hom"], path + ".hom", objs)
    for a in objs:
        row = r.total(d["hom"][a], "%s.hom.%s" % (path, a), objs)
        for b in objs:
            labels = row[b]
            p = "%s.hom.%s.%s" % (path, a, b)
            if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
                raise Malformed(p, "expected a list of basis labels")
            if labels:
                hom[(a, b)] = list(labels)
    dim = lambda a, b: len(hom.get((a, b), ()))
    tobj = {}
    r.total(d["tensor_obj"], path + ".tensor_obj", objs)
    for a in objs:
        row = r.total(d["tensor_obj"][a], "%s.tensor_obj.%s" % (path, a), objs)
        for b in objs:
            tobj[(a, b)] = r.name(row[b], "%s.tensor_obj.%s.%s" % (path, a, b), objs)
    compose = {}
    for a, b, c in product(objs, repeat=3):
        p = "%s.compose.%s.%s.%s" % (path, a, b, c)
        entry = _dig(r, d["compose"], path + ".compose", (a, b, c), objs)
        if dim(a, b) and dim(b, c):
            if entry is None:
                raise Malformed(p, "missing entry")
            compose[(a, b, c)] = r.mat(entry, p, dim(a, c), dim(b, c) * dim(a, b))
        elif entry is not None:
            raise Malformed(p, "entry for an empty hom space")
    r.total(d["identities"], path + ".identities", objs)
    ids = {a: r.col(d["identities"][a], "%s.identities.%s" % (path, a), dim(a, a)) for a in objs}
    tmor = {}
    for a, b, a2, b2 in product(objs, repeat=4):
        p = "%s.tensor_mor.%s.%s.%s.%s" % (path, a, b, a2, b2)
        entry = _dig(r, d["tensor_mor"], path + ".tensor_mor", (a, b, a2, b2), objs)
        if dim(a, b) and dim(a2, b2):
            if entry is None:
                raise Malformed(p, "missing entry")
            tmor[(a, b, a2, b2)] = r.mat(entry, p, dim(tobj[(a, a2)], tobj[(b, b2)]), dim(a, b) * dim(a2, b2))
        elif entry is not None:
            raise Malformed(p, "entry for an empty hom space")
    assoc = {}
    r.total(d["associator"], path + ".associator", objs)
    for a in objs:
        r.total(d["associator"][a], "%s.associator.%s" % (path, a), objs)
        for b in objs:
            r.total(d["associator"][a][b], "%s.associator.%s.%s" % (path, a, b), objs)
            for c in objs:
                src, dst = tobj[(tobj[(a, b)], c)], tobj[(a, tobj[(b, c)])]
                assoc[(a, b, c)] = r.col(d["associator"][a][b][c], "%s.associator.%s.%s.%s" % (path, a, b, c),
                                         dim(src, dst))
    r.total(d["left_unitor"], path + ".left_unitor", objs)
    r.total(d["right_unitor"], path + ".right_unitor", objs)
    lu = {a: r.col(d["left_unitor"][a], "%s.left_unitor.%s" % (path, a), dim(tobj[(unit, a)], a)) for a in objs}
    ru = {a: r.col(d["right_unitor"][a], "%s.right_unitor.%s" % (path, a), dim(tobj[(a, unit)], a)) for a in objs}
    c = CategoryPresentation(field=r.field, objects=list(objs), unit=unit, hom=hom, compose=compose,
                             identities=ids, tensor_obj=tobj, tensor_mor=tmor, associator=assoc,
                             left_unitor=lu, right_unitor=ru, name=d["name"])
    if "biproducts" in d:
        if not isinstance(d["biproducts"], list):
            raise Malformed(path + ".biproducts", "expected a list")
        for i, bp in enumerate(d["biproducts"]):
            p = "%s.biproducts[%d]" % (path, i)
            r.obj(bp, p, ["target", "summands", "injections", "projections"])
            t = r.name(bp["target"], p + ".target", objs)
            if not isinstance(bp["summands"], list):
                raise Malformed(p + ".summands", "expected a list")
            ss = [r.name(s, "%s.summands[%d]" % (p, k), objs) for k, s in enumerate(bp["summands"])]
            for key in ("injections", "projections"):
                if not isinstance(bp[key], list) or len(bp[key]) != len(ss):
                    raise Malformed(p + "." + key, "expected one column per summand")
            inj = [Arrow(s, t, r.col(x, "%s.injections[%d]" % (p, k), dim(s, t)))
                   for k, (s, x) in enumerate(zip(ss, bp["injections"]))]
            prj = [Arrow(t, s, r.col(x, "%s.projections[%d]" % (p, k), dim(t, s)))
                   for k, (s, x) in enumerate(zip(ss, bp["projections"]))]
            c.biproducts.append(Biproduct(t, ss, inj, prj))
    if "duality" in d:
        p = path + ".duality"
        dd = r.obj(d["duality"], p, ["dual", "ev", "db", "u", "v"])
        r.total(dd["dual"], p + ".dual", objs)
        dual = {a: r.name(dd["dual"][a], "%s.dual.%s" % (p, a), objs) for a in objs}
        r.total(dd["ev"], p + ".ev", objs)
        r.total(dd["db"], p + ".db", objs)
        ev = {a: r.col(dd["ev"][a], "%s.ev.%s" % (p, a), dim(tobj[(dual[a], a)], unit)) for a in objs}
        db = {a: r.col(dd["db"][a], "%s.db.%s" % (p, a), dim(unit, tobj[(a, dual[a])])) for a in objs}
        u = Arrow(unit, dual[unit], r.col(dd["u"], p + ".u", dim(unit, dual[unit])))
        v = {}
        r.total(dd["v"], p + ".v", objs)
        for a in objs:
            r.total(dd["v"][a], "%s.v.%s" % (p, a), objs)
            for b in objs:
                src, dst = tobj[(dual[b], dual[a])], dual[tobj[(a, b)]]
                v[(a, b)] = Arrow(src, dst, r.col(dd["v"][a][b], "%s.v.%s.%s" % (p, a, b), dim(src, dst)))
        c.duality = Duality(dual, ev, db, u, v)
    if "pivot" in d:
        if c.duality is None:
            raise Malformed(path + ".pivot", "pivot without duality")
        r.total(d["pivot"], path + ".pivot", objs)
        dual = c.duality.dual
        c.pivot = {a: r.col(d["pivot"][a], "%s.pivot.%s" % (path, a), dim(a, dual[dual[a]])) for a in objs}
    if "weak_kernels" in d:
        if not isinstance(d["weak_kernels"], list):
            raise Malformed(path + ".weak_kernels", "expected a list")
        c.weak_kernels = {}
        for i, w in enumerate(d["weak_kernels"]):
            p = "%s.weak_kernels[%d]" % (path, i)
            r.obj(w, p, ["source", "target", "index", "kernel"])
            a = r.name(w["source"], p + ".source", objs)
            b = r.name(w["target"], p + ".target", objs)
            k = r.int_(w["index"], p + ".index")
            if k >= dim(a, b):
                raise Malformed(p + ".index", "no basis arrow %d in hom(%s, %s)" % (k, a, b))
            c.weak_kernels[(a, b, k)] = _parse_arrow(r, w["kernel"], p + ".kernel", objs, dim)
    return c


def _parse_arrow(r: _Reader, d, path, objs, dim) -> Arrow:
    r.obj(d, path, ["dom", "cod", "coords"])
    a = r.name(d["dom"], path + ".dom", objs)
    b = r.name(d["cod"], path + ".cod", objs)
    return Arrow(a, b, r.col(d["coords"], path + ".coords", dim(a, b)))


def _parse_algebra(r: _Reader, d, path) -> AlgebraPresentation:
    r.obj(d, path, ["dim", "mul", "unit"], ["labels"])
    n = r.int_(d["dim"], path + ".dim", 1)
    labels = d.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n
                               or not all(isinstance(x, str) for x in labels)):
        raise Malformed(path + ".labels", "expected %d label strings" % n)
    return AlgebraPresentation(r.field, n, r.mat(d["mul"], path + ".mul", n, n * n),
                               r.col(d["unit"], path + ".unit", n), labels)


def _parse_bimodule(r: _Reader, d, path, a: AlgebraPresentation) -> Bimodule:
    r.obj(d, path, ["dim", "left", "right"])
    n = r.int_(d["dim"], path + ".dim")
    out = {}
    for side in ("left", "right"):
        ms = d[side]
        if not isinstance(ms, list) or len(ms) != a.dim:
            raise Malformed(path + "." + side, "expected one matrix per base basis element (%d)" % a.dim)
        out[side] = [r.mat(m, "%s.%s[%d]" % (path, side, i), n, n) for i, m in enumerate(ms)]
    return Bimodule(a, n, out["left"], out["right"])


def _parse_functor(r: _Reader, d, path, c: CategoryPresentation, name: str) -> FiberFunctor:
    r.obj(d, path, ["base", "images", "arrows", "F2", "F0"])
    objs = c.objects
    R = _parse_algebra(r, d["base"], path + ".base")
    r.total(d["images"], path + ".images", objs)
    images = {x: _parse_bimodule(r, d["images"][x], "%s.images.%s" % (path, x), R) for x in objs}
    arrows = {}
    for a, b in product(objs, objs):
        p = "%s.arrows.%s.%s" % (path, a, b)
        ms = _dig(r, d["arrows"], path + ".arrows", (a, b), objs)
        if c.dim(a, b):
            if ms is None:
                raise Malformed(p, "missing entry")
            if not isinstance(ms, list) or len(ms) != c.dim(a, b):
                raise Malformed(p, "expected one matrix per basis arrow (%d)" % c.dim(a, b))
            arrows[(a, b)] = [r.mat(m, "%s[%d]" % (p, i), images[b].dim, images[a].dim) for i, m in enumerate(ms)]
        elif ms is not None:
            raise Malformed(p, "entry for an empty hom space")
    F2 = {}
    r.total(d["F2"], path + ".F2", objs)
    for a in objs:
        r.total(d["F2"][a], "%s.F2.%s" % (path, a), objs)
        for b in objs:
            t = c.tensor(a, b)
            F2[(a, b)] = r.mat(d["F2"][a][b], "%s.F2.%s.%s" % (path, a, b), images[t].dim,
                               images[a].dim * images[b].dim)
    F0 = r.mat(d["F0"], path + ".F0", images[c.unit].dim, R.dim)
    return FiberFunctor(c, R, images, arrows, F2, F0, name)


def _parse_bialgebroid(r: _Reader, d, path) -> Bialgebroid:
    r.obj(d, path, ["base", "dim", "mult", "unit", "s", "t", "delta", "eps"], ["labels"])
    R = _parse_algebra(r, d["base"], path + ".base")
    n = r.int_(d["dim"], path + ".dim", 1)
    h = Bialgebroid(R, n, r.mat(d["mult"], path + ".mult", n, n * n), r.col(d["unit"], path + ".unit", n),
                    r.mat(d["s"], path + ".s", n, R.dim), r.mat(d["t"], path + ".t", n, R.dim), None,
                    r.mat(d["eps"], path + ".eps", R.dim, n))
    rep = r.mat(d["delta"], path + ".delta", n * n, n)
    h.delta = h.bar2().proj @ rep
    return h


def _parse_fusion(r: _Reader, d, path, c: CategoryPresentation) -> FusionSystem:
    r.obj(d, path, ["index", "summands"], ["bounds"])
    objs = c.objects
    if not isinstance(d["index"], list):
        raise Malformed(path + ".index", "expected a list")
    index = [r.name(x, "%s.index[%d]" % (path, i), objs) for i, x in enumerate(d["index"])]
    summands = {}
    r.total(d["summands"], path + ".summands", index)
    for a in index:
        r.total(d["summands"][a], "%s.summands.%s" % (path, a), objs)
        for x in objs:
            p = "%s.summands.%s.%s" % (path, a, x)
            lst = d["summands"][a][x]
            if not isinstance(lst, list):
                raise Malformed(p, "expected a list")
            t = c.tensor(a, x)
            out = []
            for i, s in enumerate(lst):
                q = "%s[%d]" % (p, i)
                r.obj(s, q, ["object", "p", "q"])
                b = r.name(s["object"], q + ".object", index)
                out.append(Summand(b, Arrow(b, t, r.col(s["p"], q + ".p", c.dim(b, t))),
                                   Arrow(t, b, r.col(s["q"], q + ".q", c.dim(t, b)))))
            summands[(a, x)] = out
    bounds = {}
    if "bounds" in d:
        r.table(d["bounds"], path + ".bounds", objs)
        bounds = {x: r.int_(v, "%s.bounds.%s" % (path, x)) for x, v in d["bounds"].items()}
    return FusionSystem(index, summands, bounds)


def _parse_catalog(r: _Reader, d, path, h: Bialgebroid) -> ComoduleCatalog:
    r.obj(d, path, ["unit", "comodules"], ["tensor"])
    cd = d["comodules"]
    if not isinstance(cd, dict) or not cd:
        raise Malformed(path + ".comodules", "expected a non-empty object")
    names = list(cd)
    unit = r.name(d["unit"], path + ".unit", names)
    coms = {}
    for name in names:
        p = "%s.comodules.%s" % (path, name)
        r.obj(cd[name], p, ["module", "coaction"])
        m = _parse_bimodule(r, cd[name]["module"], p + ".module", h.base)
        com = Comodule(m, None, h, name)
        rep = r.mat(cd[name]["coaction"], p + ".coaction", m.dim * h.dim, m.dim)
        com.delta = com.bar().proj @ rep
        coms[name] = com
    tensor = {}
    if "tensor" in d:
        r.table(d["tensor"], path + ".tensor", names)
        for a, row in d["tensor"].items():
            r.table(row, "%s.tensor.%s" % (path, a), names)
            for b, t in row.items():
                tensor[(a, b)] = r.name(t, "%s.tensor.%s.%s" % (path, a, b), names)
    return ComoduleCatalog(h, coms, unit, tensor)


def _named(doc, key) -> dict:
    d = doc.get(key, {})
    if not isinstance(d, dict):
        raise Malformed(key, "expected an object keyed by name")
    return d


def parse_bundle_doc(doc) -> Bundle:
    r0 = _Reader(QQ)
    r0.obj(doc, "", ["format", "field", "category"],
           ["functors", "bialgebroid", "fusion_systems", "frobenius", "catalog"])
    if doc["format"] != FORMAT:
        raise Malformed("format", "expected %r" % FORMAT)
    fld = _parse_field(doc["field"])
    r = _Reader(fld)
    c = _parse_category(r, doc["category"])
    b = Bundle(fld, c)
    for name, fd in _named(doc, "functors").items():
        b.functors[name] = _parse_functor(r, fd, "functors." + name, c, name)
    if "bialgebroid" in doc:
        b.bialgebroid = _parse_bialgebroid(r, doc["bialgebroid"], "bialgebroid")
    for name, fd in _named(doc, "fusion_systems").items():
        b.fusion_systems[name] = _parse_fusion(r, fd, "fusion_systems." + name, c)
    if "frobenius" in doc:
        d = r.obj(doc["frobenius"], "frobenius", ["functor", "phi", "e"])
        name = r.name(d["functor"], "frobenius.functor", list(b.functors))
        n = b.functors[name].base.dim
        b.frobenius = (name, FrobeniusDatum(r.col(d["phi"], "frobenius.phi", n), r.mat(d["e"], "frobenius.e", n, n)))
    if "catalog" in doc:
        if b.bialgebroid is None:
            raise Malformed("catalog", "a comodule catalog needs a bialgebroid section")
        b.catalog = _parse_catalog(r, doc["catalog"], "catalog", b.bialgebroid)
    return b


def parse_bundle(path: str) -> Bundle:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise Malformed("", "cannot read %s: %s" % (path, e))
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise Malformed("line %d column %d" % (e.lineno, e.colno), e.msg)
    return parse_bundle_doc(doc)
