"""Acceptance criteria, one test each; every run prints a PASS/FAIL line with the timing.

Run directly (python tests/test_acceptance.py) for the table alone.
"""

import os
import sys
import time

import pytest

from tannaka.algebra import AlgebraPresentation, validate_separable_frobenius
from tannaka.bialgebroid import (build_bialgebroid, comodule_of_object, export_weak_bialgebra,
                                 validate_right_bialgebroid, validate_weak_bialgebra)
from tannaka.bundle import parse_bundle
from tannaka.coend import representable
from tannaka.fiber import CheckConfig, check_coarse, validate_fiber_functor
from tannaka.fixtures import (coordinate_frobenius, cyclic, dual_numbers_category, grading_catalog, group_bialgebra,
                              groupoid_qq, mutated_antipodes, nonzero_covering, trivial, z2_sign_twist)
from tannaka.fusion import (build_coarse_fiber, dual_basis_matrices, fusion_system_from_index, pq_residual,
                            validate_coarse_construction)
from tannaka.hopf_galois import (RIGHT_H_PRIME, bicomodule_algebra, build_antipode, coinvariants, galois_beta,
                                 galois_inverse_explicit, ulbrich_roundtrip, validate_antipode)
from tannaka.linear import QQ, Matrix, inverse
from tannaka.moncat import validate_category, validate_duality_and_pivot
from tannaka.reconstruct import ComoduleCatalog, reconstruction_roundtrip
from tannaka.site import covering_sieves_contain_identity, sheaf_check, validate_topology_axioms

CFG = CheckConfig()
MUTATIONS = os.path.join(os.path.dirname(__file__), "..", "fixtures", "mutations")


class Unmet(AssertionError):
    pass


def need(ok, what):
    if not ok:
        raise Unmet(what)


def by_object(h):
    return {tag[0]: i for i, tag in enumerate(h.carrier.basis_tags)}


def full_pipeline_trivial():
    c, f = trivial()
    one = Matrix.identity(QQ, 1)
    need(validate_category(c).passed and validate_duality_and_pivot(c).passed, "category")
    need(validate_fiber_functor(f, CFG).passed, "fiber functor")
    h = build_bialgebroid(f)
    need(h.dim == 1 and h.mult == one and validate_right_bialgebroid(h).passed, "H = Q")
    s = build_antipode(f, h)
    need(s.S == one and validate_antipode(h, s).passed, "S = id")
    beta, ok = galois_beta(h)
    need(ok and beta == one, "beta = id")
    need(validate_topology_axioms(f, 2, cfg=CFG).passed, "topology")
    need(sheaf_check(representable(c, "I"), f, 2, CFG).passed, "sheaf")
    cat = ComoduleCatalog(h, {"I": comodule_of_object(f, h, "I")}, "I")
    need(reconstruction_roundtrip(cat).passed, "round trip")
    return "H = Q, S = id, beta = id"


def oracle_one_dim(f):
    """Structure constants of H for a functor with one-dimensional images, from F2 and F0 alone.

    With e_C = [phi_C (x) x_C]: e_C e_D = g2(C,D) f2(C,D) e_{CD} where g2 = 1/f2 is the
    dual coherence, 1 = g0 f0 e_1, Delta e_C = e_C (x) e_C and eps e_C = phi_C(x_C) = 1.
    """
    c = f.category
    f2 = {k: v.data[0][0] for k, v in f.F2.items()}
    f0 = f.F0.data[0][0]
    mult = {(a, b): (c.tensor(a, b), (1 / f2[(a, b)]) * f2[(a, b)]) for a in c.objects for b in c.objects}
    return mult, (c.unit, (1 / f0) * f0)


def z2_structure_constants():
    c, f = cyclic(2)
    h = build_bialgebroid(f)
    need(h.dim == 2, "dim H = 2")
    idx = by_object(h)
    e = {x: h.basis(i) for x, i in idx.items()}
    mult, (u, cu) = oracle_one_dim(f)
    for (a, b), (ab, k) in mult.items():
        need(h.mul(e[a], e[b]) == e[ab].scale(k), "product e_%s e_%s" % (a, b))
    need(h.unit == e[u].scale(cu), "unit")
    q = h.bar2().proj
    for x in c.objects:
        need(q @ h.delta_rep() @ e[x] == q @ e[x].kron(e[x]), "coproduct of e_%s" % x)
        need((h.eps @ e[x]).data[0][0] == QQ(1), "counit of e_%s" % x)
    rep = validate_right_bialgebroid(h)
    need(rep.passed, rep.to_text())
    return "oracle matches; (B1)-(B6) exact"


def z3_antipode():
    c, f = cyclic(3)
    h = build_bialgebroid(f)
    s = build_antipode(f, h)
    idx = by_object(h)
    e = {x: h.basis(i) for x, i in idx.items()}
    need(s.S @ e["w"] == e["w2"] and s.S @ e["w2"] == e["w"] and s.S @ e["1"] == e["1"], "swap")
    rep = validate_antipode(h, s)
    need(rep.passed and all(rep.status_of(n.name) == "pass" for n in rep.entries), rep.to_text())
    need(s.S @ s.S == h.ident(), "S^2 = id")
    return "S swaps e_w, e_w2; S^2 = id"


def galois_explicit_inverse():
    for n in (2, 3):
        _, f = cyclic(n)
        h = build_bialgebroid(f)
        beta, ok = galois_beta(h)
        need(ok, "beta invertible Z/%d" % n)
        binv, gammas, rep = galois_inverse_explicit(f, h)
        need(binv == inverse(beta), "explicit inverse Z/%d" % n)
        need(rep.status_of("gamma gamma^-1 = id at every object") == "pass"
             and rep.status_of("gamma^-1 gamma = id at every object") == "pass", rep.to_text())
        need(set(gammas) == set(f.category.objects), "gamma at every object")
    return "Z/2, Z/3 exact"


def coinvariants_of_h():
    dims = []
    for make in (lambda: cyclic(2), lambda: cyclic(3), groupoid_qq):
        _, f = make()
        h = build_bialgebroid(f)
        ker, rep = coinvariants(bicomodule_algebra(f, f, h, h), RIGHT_H_PRIME)
        need(ker.cols == f.base.dim, "dimension")
        need(rep.status_of("span equals the predicted subalgebra") == "pass", rep.to_text())
        dims.append(ker.cols)
    return "dims %s = dim R" % dims


def fusion_z2():
    c, _ = cyclic(2)
    fs = fusion_system_from_index(c, ["1", "s"])
    for x in c.objects:
        P, Q = dual_basis_matrices(c, fs, x)
        need(pq_residual(c, fs, x, P, Q) is None, "PQ = 1 at %s" % x)
    f = build_coarse_fiber(c, fs)
    need(f.base.dim == 2 and f.base.mul == AlgebraPresentation.diagonal(QQ, 2).mul, "R = Q x Q")
    need(validate_coarse_construction(f, fs).passed, "coarse construction")
    need(validate_fiber_functor(f, CFG).passed, "fiber functor")
    need(check_coarse(f, CFG).passed, "coarse")
    need(covering_sieves_contain_identity(f, 2, CFG).passed, "identity in covering sieves")
    return "PQ = 1, R = Q x Q, coarse"


def site_z2():
    c, f = cyclic(2)
    rep = validate_topology_axioms(f, 2, cfg=CFG)
    need(rep.passed, rep.to_text())
    for x in c.objects:
        need(sheaf_check(representable(c, x), f, 2, CFG).passed, "Y%s sheaf" % x)
    return "(i)-(iii) pass; representables are sheaves"


def round_trips():
    c, f = groupoid_qq()
    h = build_bialgebroid(f)
    cats = {"k[Z/2]": grading_catalog(group_bialgebra(2)),
            "groupoid": ComoduleCatalog(h, {x: comodule_of_object(f, h, x) for x in c.objects}, c.unit)}
    for name, cat in cats.items():
        rep = reconstruction_roundtrip(cat)
        need(rep.passed and not any(e.status == "skip" for e in rep.entries), "%s\n%s" % (name, rep.to_text()))
    return "k[Z/2], groupoid"


def weak_export():
    _, f = groupoid_qq()
    h = build_bialgebroid(f)
    fr = coordinate_frobenius(h.base)
    need(validate_separable_frobenius(h.base, fr).passed, "separable Frobenius")
    delta_k, eps_k, rep = export_weak_bialgebra(h, fr)
    need(rep.passed, rep.to_text())
    rep = validate_weak_bialgebra(h, delta_k, eps_k)
    need(rep.passed, rep.to_text())
    return "Q x Q coordinate datum"


def ulbrich():
    _, f, fp = z2_sign_twist()
    rep = ulbrich_roundtrip(f, fp)
    for name in ["Psi: F' -> F'' invertible at every object", "Psi natural", "Psi monoidal",
                 "A -> G (x)_C F'' -> A is the identity"]:
        need(rep.status_of(name) == "pass", name)
    need(rep.passed, rep.to_text())
    return "F'' ~ F' on the sign twist"


def _failed_with_witness(rep, prefix=""):
    return {e.name for e in rep.failures if e.name.startswith(prefix) and e.witness is not None}


def mutation_suite():
    hit = set()
    b = parse_bundle(os.path.join(MUTATIONS, "z2-broken-interchange.json"))
    if _failed_with_witness(validate_category(b.category)):
        hit.add("category")
    b = parse_bundle(os.path.join(MUTATIONS, "z3-broken-pivot.json"))
    if _failed_with_witness(validate_duality_and_pivot(b.category)):
        hit.add("pivot")
    for name in ["flipped-constant", "doubled-source", "coproduct-g-tensor-1", "square-minus-one"]:
        b = parse_bundle(os.path.join(MUTATIONS, "z2-bialgebra-%s.json" % name))
        hit |= {n[1:3] for n in _failed_with_witness(validate_right_bialgebroid(b.bialgebroid), "(B")}
    b = parse_bundle(os.path.join(MUTATIONS, "z3-broken-pivot.json"))
    f = next(iter(b.functors.values()))
    h = build_bialgebroid(f)
    hit |= {n[1:4] for n in _failed_with_witness(validate_antipode(h, build_antipode(f, h)), "(S")}
    h, wrong = mutated_antipodes()
    for s in wrong.values():
        hit |= {n[1:4] for n in _failed_with_witness(validate_antipode(h, s), "(S")}
    c = dual_numbers_category()
    hit |= {n[:5] for n in _failed_with_witness(validate_topology_axioms(c, 2, covering=nonzero_covering(c)))}
    want = {"category", "pivot", "B1", "B2", "B3", "B4", "B5", "B6", "S-1", "S-2", "S-3", "S-4", "(iii)"}
    need(want <= hit, "vacuous: %s" % sorted(want - hit))
    return "%d validators caught" % len(want)


CRITERIA = [
    (1, "trivial full pipeline", full_pipeline_trivial, 0.1),
    (2, "Z/2 structure constants", z2_structure_constants, 1.0),
    (3, "Z/3 antipode", z3_antipode, 1.0),
    (4, "Galois explicit inverses", galois_explicit_inverse, None),
    (5, "coinvariants of H", coinvariants_of_h, None),
    (6, "fusion Z/2", fusion_z2, 5.0),
    (7, "site axioms on Z/2", site_z2, None),
    (8, "reconstruction round trip", round_trips, 10.0),
    (9, "weak bialgebra export", weak_export, None),
    (10, "Ulbrich round trip", ulbrich, None),
    (11, "mutation suite", mutation_suite, None),
]


def run(num, title, fn, budget):
    t0 = time.perf_counter()
    try:
        detail, ok = fn(), True
    except Unmet as e:
        detail, ok = "unmet: %s" % e, False
    dt = time.perf_counter() - t0
    if ok and budget is not None and dt >= budget:
        detail, ok = "over budget (%.3f s >= %.1f s)" % (dt, budget), False
    line = "criterion %2d %-28s %s  %.3f s  %s" % (num, title, "PASS" if ok else "FAIL", dt, detail)
    return ok, line


@pytest.mark.parametrize("num,title,fn,budget", CRITERIA, ids=["criterion-%d" % c[0] for c in CRITERIA])
def test_criterion(num, title, fn, budget, capsys):
    fn()  # warm caches so the timing measures the computation, not first imports
    ok, line = run(num, title, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    print("%d/%d criteria pass" % (sum(ok for ok, _ in results), len(results)))
    sys.exit(0 if all(ok for ok, _ in results) else 1)
