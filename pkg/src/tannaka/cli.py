"""Command line entry point: tannaka <command> <bundle.json> [flags]."""

from __future__ import annotations

import argparse
import os
import sys

from .bialgebroid import (build_bialgebroid, comodule_naturality,
                          comodule_of_object, export_weak_bialgebra, validate_right_bialgebroid,
                          validate_weak_bialgebra)
from .bundle import Bundle, Malformed, bialgebroid_json, dumps, functor_json, parse_bundle
from .coend import representable
from .fiber import CheckConfig, check_coarse, validate_fiber_functor
from .fusion import build_coarse_fiber, validate_coarse_construction, validate_fusion_system
from .hopf_galois import (RIGHT_H_PRIME, MissingDuality, MissingPivot, NotWellDefined, bicomodule_algebra,
                          build_antipode, coinvariants, galois_beta, galois_inverse_explicit,
                          ulbrich_roundtrip, validate_antipode, validate_bicomodule_algebra)
from .linear import inverse
from .moncat import validate_category, validate_duality_and_pivot
from .reconstruct import ComoduleCatalog, reconstruction_roundtrip, validate_catalog
from .report import Report
from .site import covering_sieves_contain_identity, sheaf_check, validate_topology_axioms

COMMANDS = ["validate", "reconstruct", "antipode", "galois", "site", "fusion-build", "roundtrip", "export-weak"]


class InputError(ValueError):
    pass


def _functor(b: Bundle, name: str | None):
    if not b.functors:
        raise InputError("bundle has no fiber functors")
    if name is None:
        return next(iter(b.functors.values()))
    if name not in b.functors:
        raise InputError("no functor named %r (have %s)" % (name, ", ".join(b.functors)))
    return b.functors[name]


def cmd_validate(b: Bundle, args, cfg):
    reps = [validate_category(b.category)]
    if b.category.duality is not None:
        reps.append(validate_duality_and_pivot(b.category))
    for f in b.functors.values():
        reps.append(validate_fiber_functor(f, cfg))
    if b.bialgebroid is not None:
        reps.append(validate_right_bialgebroid(b.bialgebroid))
    for name, fs in b.fusion_systems.items():
        r = validate_fusion_system(b.category, fs)
        r.title += " " + name
        reps.append(r)
    if b.catalog is not None:
        reps.append(validate_catalog(b.catalog))
    return reps, {}


def cmd_reconstruct(b: Bundle, args, cfg):
    f = _functor(b, args.functor)
    h = build_bialgebroid(f)
    rep = validate_right_bialgebroid(h)
    rep.title += " (dim %d over a base of dim %d)" % (h.dim, h.base.dim)
    return [rep, comodule_naturality(f, h)], {"bialgebroid": bialgebroid_json(h)}


def cmd_antipode(b: Bundle, args, cfg):
    f = _functor(b, args.functor)
    h = build_bialgebroid(f)
    s = build_antipode(f, h)
    return [validate_antipode(h, s)], {"antipode": s.S.to_strings(), "inverse_antipode": s.S_inv.to_strings()}


def cmd_galois(b: Bundle, args, cfg):
    f = _functor(b, args.functor)
    h = build_bialgebroid(f)
    rep = Report("Galois map")
    beta, ok = galois_beta(h)
    rep.check("beta invertible", ok, (beta.rows, beta.cols), "galois/beta")
    reps = [rep]
    if b.category.duality is not None:
        binv, _, r = galois_inverse_explicit(f, h)
        if ok:
            r.check("explicit inverse equals the computed inverse", binv == inverse(beta), binv - inverse(beta),
                    "galois/beta-inverse")
        reps.append(r)
    a = bicomodule_algebra(f, f, h, h)
    reps.append(coinvariants(a, RIGHT_H_PRIME)[1])
    if args.second is not None:
        fp = _functor(b, args.second)
        reps.append(validate_bicomodule_algebra(bicomodule_algebra(f, fp)))
        reps.append(ulbrich_roundtrip(f, fp))
    return reps, {}


def cmd_site(b: Bundle, args, cfg):
    f = _functor(b, args.functor)
    g = args.max_generators
    reps = [validate_topology_axioms(f, g, cfg=cfg)]
    for x in b.category.objects:
        reps.append(sheaf_check(representable(b.category, x), f, g, cfg))
    if check_coarse(f, cfg).passed:
        reps.append(covering_sieves_contain_identity(f, g, cfg))
    return reps, {}


def cmd_fusion_build(b: Bundle, args, cfg):
    if not b.fusion_systems:
        raise InputError("bundle has no fusion systems")
    name = args.system or next(iter(b.fusion_systems))
    if name not in b.fusion_systems:
        raise InputError("no fusion system named %r" % name)
    fs = b.fusion_systems[name]
    rep = validate_fusion_system(b.category, fs)
    if not rep.passed:
        return [rep], {}
    f = build_coarse_fiber(b.category, fs, name)
    reps = [rep, validate_coarse_construction(f, fs), validate_fiber_functor(f, cfg), check_coarse(f, cfg),
            covering_sieves_contain_identity(f, args.max_generators, cfg)]
    return reps, {"functor": functor_json(f)}


def cmd_roundtrip(b: Bundle, args, cfg):
    cat = b.catalog
    if cat is None:
        f = _functor(b, args.functor)
        h = build_bialgebroid(f)
        cat = ComoduleCatalog(h, {x: comodule_of_object(f, h, x) for x in b.category.objects}, b.category.unit)
    return [reconstruction_roundtrip(cat)], {}


def cmd_export_weak(b: Bundle, args, cfg):
    if b.frobenius is None:
        raise InputError("bundle has no Frobenius datum")
    name, fr = b.frobenius
    h = build_bialgebroid(b.functors[name])
    delta_k, eps_k, rep = export_weak_bialgebra(h, fr)
    rep.extend(validate_weak_bialgebra(h, delta_k, eps_k))
    return [rep], {"delta": delta_k.to_strings(), "eps": eps_k.to_strings()}


HANDLERS = {
    "validate": cmd_validate,
    "reconstruct": cmd_reconstruct,
    "antipode": cmd_antipode,
    "galois": cmd_galois,
    "site": cmd_site,
    "fusion-build": cmd_fusion_build,
    "roundtrip": cmd_roundtrip,
    "export-weak": cmd_export_weak,
}


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tannaka", description="Reconstruct and check bialgebroids from a bundle.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("bundle")
    p.add_argument("--functor", help="fiber functor name (default: the first one)")
    p.add_argument("--second", help="second fiber functor for the Galois bicomodule algebra")
    p.add_argument("--system", help="fusion system name (default: the first one)")
    p.add_argument("--max-generators", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample", type=int, default=8, help="random arrows drawn per hom space")
    p.add_argument("-o", "--output", help="write the structured result document here")
    return p


def dispatch(command: str, b: Bundle, args) -> tuple[list[Report], dict]:
    seed = int(os.environ["TANNAKA_SEED"]) if os.environ.get("TANNAKA_SEED") else args.seed
    cfg = CheckConfig(sample_count=args.sample, seed=seed)
    return HANDLERS[command](b, args, cfg)


def result_document(command: str, reps: list[Report], extra: dict) -> dict:
    doc = {"command": command, "passed": all(r.passed for r in reps), "reports": [r.to_json() for r in reps]}
    doc.update(extra)
    return doc


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        b = parse_bundle(args.bundle)
        reps, extra = dispatch(args.command, b, args)
    except (Malformed, InputError, MissingDuality, MissingPivot) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except NotWellDefined as e:
        reps, extra = [Report(args.command)], {}
        reps[0].fail("construction well defined", e.witness, "construction")
    for r in reps:
        print(r.to_text())
    ok = all(r.passed for r in reps)
    print("%s: %s" % (args.command, "all checks pass" if ok else "FAILED"))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(result_document(args.command, reps, extra)))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
