"""The JSON bundles shipped in fixtures/, generated from the Python fixtures."""

from __future__ import annotations

import os

from .bialgebroid import build_bialgebroid, comodule_of_object
from .bundle import Bundle, bundle_json, dumps
from .fixtures import (broken_interchange_z2, broken_pivot_z3, coordinate_frobenius, cyclic, group_bialgebra,
                       grading_catalog, groupoid_qq, mutated_group_bialgebras, trivial, twisted, unfaithful_z2)
from .fusion import fusion_system_from_index
from .reconstruct import ComoduleCatalog


def _self_catalog(c, f):
    h = build_bialgebroid(f)
    return h, ComoduleCatalog(h, {x: comodule_of_object(f, h, x) for x in c.objects}, c.unit)


def shipped_bundles() -> dict:
    """Relative path -> Bundle."""
    out = {}
    c, f = trivial()
    h, cat = _self_catalog(c, f)
    out["trivial.json"] = Bundle(c.field, c, {"F1": f}, h, {"unit": fusion_system_from_index(c, [c.unit])},
                                 catalog=cat)

    c, f = cyclic(2)
    j = group_bialgebra(2)
    out["z2.json"] = Bundle(c.field, c, {"F1": f, "F1-twisted": twisted(f, {(1, 1): -1}, "F1-twisted")}, j,
                            {"simples": fusion_system_from_index(c, list(c.objects))}, catalog=grading_catalog(j))

    c, f = cyclic(3)
    out["z3.json"] = Bundle(c.field, c, {"F1": f}, fusion_systems={"simples": fusion_system_from_index(c, list(c.objects))})

    c, f = groupoid_qq()
    h, cat = _self_catalog(c, f)
    out["groupoid.json"] = Bundle(c.field, c, {"F1": f}, h, frobenius=("F1", coordinate_frobenius(f.base)), catalog=cat)

    c, f = broken_interchange_z2()
    out["mutations/z2-broken-interchange.json"] = Bundle(c.field, c, {"F1": f})
    c, f = broken_pivot_z3()
    out["mutations/z3-broken-pivot.json"] = Bundle(c.field, c, {"F1": f})
    c, f = unfaithful_z2()
    out["mutations/z2-unfaithful.json"] = Bundle(c.field, c, {"F1": f})
    c, f = cyclic(2)
    for name, m in mutated_group_bialgebras().items():
        out["mutations/z2-bialgebra-%s.json" % name] = Bundle(c.field, c, {"F1": f}, m)
    fs = fusion_system_from_index(c, list(c.objects), bounds={x: 0 for x in c.objects})
    out["mutations/z2-fusion-zero-bound.json"] = Bundle(c.field, c, {"F1": f}, fusion_systems={"simples": fs})
    return out


def write_shipped(root: str) -> list[str]:
    written = []
    for rel, b in shipped_bundles().items():
        path = os.path.join(root, rel)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps(bundle_json(b)))
        written.append(path)
    return written
