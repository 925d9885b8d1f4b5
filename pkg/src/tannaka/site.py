"""Additive sieves, the topology induced by a fiber functor, and sheaf checks at enumeration scale."""

from __future__ import annotations

import random
from itertools import combinations, product

from .fiber import CheckConfig, FiberFunctor, sample_arrows
from .linear import Matrix, kernel_basis, rref, solve
from .moncat import Arrow, CategoryPresentation
from .report import Report


class ObjectMismatch(ValueError):
    pass


def _category(x) -> CategoryPresentation:
    return x if isinstance(x, CategoryPresentation) else x.category


class Sieve:
    """The sieve on ``target`` generated by finitely many arrows into it."""

    def __init__(self, category: CategoryPresentation, target, generators: list[Arrow]):
        self.category = category
        self.target = target
        for g in generators:
            if g.cod != target:
                raise ObjectMismatch("generator %r does not end at %s" % (g, target))
        self.generators = list(generators)
        self._span = {}

    def span(self, x) -> Matrix:
        """Basis columns (in hom(x, target) coordinates) of the sieve at x."""
        if x not in self._span:
            c = self.category
            n = c.dim(x, self.target)
            cols = []
            for g in self.generators:
                for r in c.basis(x, g.dom):
                    cols.append(c.comp(g, r).v)
            if n == 0 or not cols:
                self._span[x] = Matrix.zeros(c.field, n, 0)
            else:
                m = Matrix.hstack(c.field, n, cols)
                _, piv, _ = rref(m)
                self._span[x] = m.select_columns(piv)
        return self._span[x]

    def arrows(self, x) -> list[Arrow]:
        sp = self.span(x)
        return [Arrow(x, self.target, sp.column_matrix(j)) for j in range(sp.cols)]

    def signature(self):
        """Canonical per-object row spaces; equal exactly when the closures agree."""
        out = []
        for x in self.category.objects:
            sp = self.span(x)
            red, _, rank = rref(sp.T) if sp.cols else (None, None, 0)
            out.append(tuple(tuple(red.data[i]) for i in range(rank)) if rank else ())
        return tuple(out)

    def contains_sieve(self, other: "Sieve") -> bool:
        return all(sieve_membership(self, q) for x in self.category.objects for q in other.arrows(x))

    def __repr__(self):
        return "Sieve(%s, %d generators)" % (self.target, len(self.generators))


def maximal_sieve(c: CategoryPresentation, target) -> Sieve:
    return Sieve(c, target, [c.id(target)])


def zero_sieve(c: CategoryPresentation, target) -> Sieve:
    return Sieve(c, target, [])


def sieve_membership(s: Sieve, q: Arrow) -> bool:
    if q.cod != s.target:
        raise ObjectMismatch("arrow %r does not end at %s" % (q, s.target))
    sp = s.span(q.dom)
    if q.v.is_zero():
        return True
    if sp.cols == 0:
        return False
    return solve(sp, q.v) is not None


def is_covering(s: Sieve, f: FiberFunctor) -> bool:
    """The images of the generators jointly span F(target)."""
    n = f.dim(s.target)
    if n == 0:
        return True
    imgs = [f.apply(g) for g in s.generators if f.dim(g.dom)]
    if not imgs:
        return False
    return rref(Matrix.hstack(f.field, n, imgs))[2] == n


def pullback_sieve(g: Arrow, s: Sieve) -> Sieve:
    """{q : g o q in S} on dom g, with a basis at each object as generators."""
    if g.cod != s.target:
        raise ObjectMismatch("arrow %r does not end at %s" % (g, s.target))
    c = s.category
    gens = []
    for x in c.objects:
        n = c.dim(x, g.dom)
        if n == 0:
            continue
        m = c.linear_map(lambda q: c.comp(g, q), x, g.dom)
        sp = s.span(x)
        if m.rows == 0:
            sol = Matrix.identity(c.field, n)
        else:
            big = Matrix.hstack(c.field, m.rows, [m, -sp]) if sp.cols else m
            ker = kernel_basis(big)
            sol = Matrix(c.field, n, ker.cols, [list(ker.data[i]) for i in range(n)])
        if sol.cols:
            _, piv, _ = rref(sol)
            for j in piv:
                gens.append(Arrow(x, g.dom, sol.column_matrix(j)))
    return Sieve(c, g.dom, gens)


def _candidates(c: CategoryPresentation, target, cfg: CheckConfig, rng: random.Random) -> list[Arrow]:
    out = []
    for x in c.objects:
        for a in sample_arrows(c, x, target, cfg, rng):
            if not a.v.is_zero():
                out.append(a)
    return out


def enumerate_sieves(c: CategoryPresentation, target, max_generators: int,
                     cfg: CheckConfig | None = None) -> list[Sieve]:
    """Distinct sieves generated by at most ``max_generators`` candidate arrows, zero sieve first."""
    cfg = cfg or CheckConfig()
    rng = random.Random(cfg.seed)
    cands = _candidates(c, target, cfg, rng)
    seen = {}
    for k in range(0, max_generators + 1):
        for gens in combinations(cands, k):
            s = Sieve(c, target, list(gens))
            seen.setdefault(s.signature(), s)
    m = maximal_sieve(c, target)
    seen.setdefault(m.signature(), m)
    return list(seen.values())


def validate_topology_axioms(f, max_generators: int = 2, covering=None,
                             cfg: CheckConfig | None = None) -> Report:
    """Axioms (i)-(iii) of a Grothendieck topology over the enumerated sieves.

    ``covering`` replaces the F-covering predicate (then ``f`` may be a bare
    category); it receives a Sieve.
    """
    cfg = cfg or CheckConfig()
    c = _category(f)
    cover = covering or (lambda s: is_covering(s, f))
    rep = Report("topology axioms", scope="enumeration scale <= %d generators" % max_generators)
    rng = random.Random(cfg.seed)
    sieves = {x: enumerate_sieves(c, x, max_generators, cfg) for x in c.objects}
    bad = None
    for x in c.objects:
        if not cover(maximal_sieve(c, x)):
            bad = bad or (x,)
    rep.check("(i) maximal sieves cover", bad is None, bad, "site/axiom-i")
    bad = None
    for x in c.objects:
        covering_here = [s for s in sieves[x] if cover(s)]
        for b in c.objects:
            for g in sample_arrows(c, b, x, cfg, rng):
                for s in covering_here:
                    if not cover(pullback_sieve(g, s)):
                        bad = bad or (x, b, g.coords(), [a.coords() for a in s.generators])
    rep.check("(ii) pullbacks of covering sieves cover", bad is None, bad, "site/axiom-ii")
    bad = None
    for x in c.objects:
        covering_here = [s for s in sieves[x] if cover(s)]
        for r in sieves[x]:
            if cover(r):
                continue
            for s in covering_here:
                arrows = [q for y in c.objects for q in s.arrows(y)]
                if all(cover(pullback_sieve(q, r)) for q in arrows):
                    bad = bad or (x, [a.coords() for a in s.generators], [a.coords() for a in r.generators])
                    break
    rep.check("(iii) local character", bad is None, bad, "site/axiom-iii")
    return rep


def _natural_from_sieve(s: Sieve, u):
    """Matrix whose kernel is Nat(S, U), and the unknown layout per object."""
    c = s.category
    fld = c.field
    layout, off = {}, 0
    for x in c.objects:
        n = s.span(x).cols * u.dim(x)
        layout[x] = off
        off += n
    rows = []
    for x, x2 in product(c.objects, c.objects):
        for r in c.basis(x, x2):
            sp2, sp = s.span(x2), s.span(x)
            ur = u.apply(r)            # U(x2) -> U(x)
            for j in range(sp2.cols):
                q = Arrow(x2, s.target, sp2.column_matrix(j))
                qr = c.comp(q, r).v
                coef = solve(sp, qr) if sp.cols else Matrix.zeros(fld, 0, 1)
                # U(r) phi_x2(e_j) - phi_x(coef) = 0, one row per coordinate of U(x)
                for o in range(u.dim(x)):
                    row = [fld.zero] * off
                    for p in range(u.dim(x2)):
                        cf = ur.data[o][p]
                        if cf:
                            row[layout[x2] + p * sp2.cols + j] += cf
                    for k in range(sp.cols):
                        cf = coef.data[k][0]
                        if cf:
                            row[layout[x] + o * sp.cols + k] -= cf
                    if any(row):
                        rows.append(row)
    m = Matrix(fld, len(rows), off, rows) if rows else Matrix.zeros(fld, 0, off)
    return m, layout, off


def sheaf_check(u, f: FiberFunctor, max_generators: int = 2, cfg: CheckConfig | None = None) -> Report:
    """Restriction U(C) = Nat(YC, U) -> Nat(S, U) is bijective for every enumerated covering S."""
    c = f.category
    fld = c.field
    rep = Report("sheaf condition " + getattr(u, "name", "U"),
                 scope="enumeration scale <= %d generators" % max_generators)
    bad_u = bad_e = None
    for x in c.objects:
        for s in enumerate_sieves(c, x, max_generators, cfg):
            if not is_covering(s, f):
                continue
            m, layout, off = _natural_from_sieve(s, u)
            nat = kernel_basis(m).cols if m.rows else off
            cols = []
            for k in range(u.dim(x)):
                uk = Matrix.unit(fld, u.dim(x), k)
                v = [fld.zero] * off
                for y in c.objects:
                    sp = s.span(y)
                    for j in range(sp.cols):
                        img = u.apply(Arrow(y, x, sp.column_matrix(j))) @ uk
                        for o in range(u.dim(y)):
                            v[layout[y] + o * sp.cols + j] = img.data[o][0]
                cols.append(Matrix(fld, off, 1, [[e] for e in v]))
            rank = rref(Matrix.hstack(fld, off, cols))[2] if cols and off else 0
            gens = [g.coords() for g in s.generators]
            if rank < u.dim(x):
                bad_u = bad_u or (x, gens)
            if rank < nat:
                bad_e = bad_e or (x, gens, nat - rank)
    rep.check("matching families glue uniquely (uniqueness)", bad_u is None, bad_u, "site/sheaf")
    rep.check("matching families glue (existence)", bad_e is None, bad_e, "site/sheaf")
    return rep


def covering_sieves_contain_identity(f: FiberFunctor, max_generators: int = 2,
                                     cfg: CheckConfig | None = None) -> Report:
    c = f.category
    rep = Report("covering sieves contain identities", scope="enumeration scale <= %d generators" % max_generators)
    bad = None
    for x in c.objects:
        for s in enumerate_sieves(c, x, max_generators, cfg):
            if is_covering(s, f) and not sieve_membership(s, c.id(x)):
                bad = bad or (x, [g.coords() for g in s.generators])
    rep.check("every covering sieve contains the identity", bad is None, bad, "site/coarse")
    return rep
