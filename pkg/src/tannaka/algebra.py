"""Finite-rank algebras, bimodules, tensor products over the base, duals.

Vectors are column matrices.  A bimodule stores the action matrices of the
basis elements of its algebra: ``left[i]`` acts as ``b_i . m`` and
``right[i]`` acts as ``m . b_i``, so ``right[j] @ right[i]`` is the action of
``b_i b_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .linear import Field, Matrix, Quotient, kernel_basis, solve
from .report import Report


class NotFgProjective(ValueError):
    pass


class FrobeniusInvalid(ValueError):
    pass


class AlgebraPresentation:
    """Associative unital algebra given by structure constants.

    ``mul`` is the dim x dim^2 matrix with ``mul[l][i*dim + j] = c[i][j][l]``.
    """

    def __init__(self, field: Field, dim: int, mul: Matrix, unit: Matrix, labels=None):
        self.field = field
        self.dim = dim
        self.mul = mul
        self.unit = unit
        self.labels = list(labels) if labels else ["b%d" % i for i in range(dim)]
        self._lm = None
        self._rm = None

    @classmethod
    def from_constants(cls, field, c, unit, labels=None):
        n = len(c)
        mul = Matrix.zeros(field, n, n * n)
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    mul.data[l][i * n + j] = field(c[i][j][l])
        return cls(field, n, mul, Matrix.column(field, unit), labels)

    @classmethod
    def ground(cls, field):
        return cls.from_constants(field, [[[1]]], [1], ["1"])

    @classmethod
    def diagonal(cls, field, n, labels=None):
        """The product algebra k x ... x k with orthogonal idempotents."""
        c = [[[1 if (i == j == l) else 0 for l in range(n)] for j in range(n)] for i in range(n)]
        return cls.from_constants(field, c, [1] * n, labels or ["e%d" % (i + 1) for i in range(n)])

    def constant(self, i, j, l):
        return self.mul.data[l][i * self.dim + j]

    def basis(self, i) -> Matrix:
        return Matrix.unit(self.field, self.dim, i)

    def product(self, a: Matrix, b: Matrix) -> Matrix:
        return self.mul @ a.kron(b)

    def left_mult(self, i) -> Matrix:
        """Matrix of r -> b_i r."""
        if self._lm is None:
            n = self.dim
            self._lm = [Matrix(self.field, n, n,
                               [[self.constant(i_, j, l) for j in range(n)] for l in range(n)])
                        for i_ in range(n)]
        return self._lm[i]

    def right_mult(self, i) -> Matrix:
        """Matrix of r -> r b_i."""
        if self._rm is None:
            n = self.dim
            self._rm = [Matrix(self.field, n, n,
                               [[self.constant(j, i_, l) for j in range(n)] for l in range(n)])
                        for i_ in range(n)]
        return self._rm[i]

    def left_mult_by(self, a: Matrix) -> Matrix:
        return combine(self.field, a, [self.left_mult(i) for i in range(self.dim)], self.dim)

    def right_mult_by(self, a: Matrix) -> Matrix:
        return combine(self.field, a, [self.right_mult(i) for i in range(self.dim)], self.dim)

    def opposite(self) -> "AlgebraPresentation":
        n = self.dim
        mul = Matrix.zeros(self.field, n, n * n)
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    mul.data[l][i * n + j] = self.constant(j, i, l)
        return AlgebraPresentation(self.field, n, mul, self.unit, [x + "^op" for x in self.labels])

    def regular(self) -> "Bimodule":
        n = self.dim
        return Bimodule(self, n, [self.left_mult(i) for i in range(n)],
                        [self.right_mult(i) for i in range(n)])

    def __eq__(self, other):
        return (isinstance(other, AlgebraPresentation) and self.field == other.field
                and self.dim == other.dim and self.mul == other.mul and self.unit == other.unit)

    def __hash__(self):
        return hash((self.dim, hash(self.mul)))


def combine(field, coeffs: Matrix, mats: list[Matrix], n: int | None = None) -> Matrix:
    """Sum_i coeffs[i] * mats[i]."""
    if not mats:
        return Matrix.zeros(field, n or 0, n or 0)
    out = Matrix.zeros(field, mats[0].rows, mats[0].cols)
    for i, m in enumerate(mats):
        c = coeffs.data[i][0]
        if c:
            out = out + m.scale(c)
    return out


def validate_algebra(a: AlgebraPresentation) -> Report:
    rep = Report("algebra")
    n = a.dim
    bad = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                bi, bj, bk = a.basis(i), a.basis(j), a.basis(k)
                if a.product(a.product(bi, bj), bk) != a.product(bi, a.product(bj, bk)):
                    bad = bad or (i, j, k)
    rep.check("associativity", bad is None, bad, "algebra/associativity")
    bad = None
    for i in range(n):
        bi = a.basis(i)
        if a.product(a.unit, bi) != bi or a.product(bi, a.unit) != bi:
            bad = bad or (i,)
    rep.check("unit", bad is None, bad, "algebra/unit")
    return rep


class Bimodule:
    def __init__(self, algebra: AlgebraPresentation, dim: int, left: list[Matrix], right: list[Matrix],
                 labels=None):
        self.algebra = algebra
        self.field = algebra.field
        self.dim = dim
        self.left = left
        self.right = right
        self.labels = labels

    def act_left(self, r: Matrix) -> Matrix:
        return combine(self.field, r, self.left, self.dim)

    def act_right(self, r: Matrix) -> Matrix:
        return combine(self.field, r, self.right, self.dim)

    def swapped(self, algebra_op: AlgebraPresentation) -> "Bimodule":
        """The same space viewed as a bimodule over the opposite algebra."""
        return Bimodule(algebra_op, self.dim, self.right, self.left, self.labels)

    def basis(self, i) -> Matrix:
        return Matrix.unit(self.field, self.dim, i)

    def identity(self) -> Matrix:
        return Matrix.identity(self.field, self.dim)


def validate_bimodule(m: Bimodule) -> Report:
    rep = Report("bimodule")
    a = m.algebra
    n = a.dim
    bad_l = bad_r = bad_c = None
    for i in range(n):
        for j in range(n):
            prod = a.product(a.basis(i), a.basis(j))
            if m.left[i] @ m.left[j] != m.act_left(prod):
                bad_l = bad_l or (i, j)
            if m.right[j] @ m.right[i] != m.act_right(prod):
                bad_r = bad_r or (i, j)
            if m.left[i] @ m.right[j] != m.right[j] @ m.left[i]:
                bad_c = bad_c or (i, j)
    ident = m.identity()
    rep.check("left action multiplicative", bad_l is None, bad_l, "bimodule/left")
    rep.check("right action multiplicative", bad_r is None, bad_r, "bimodule/right")
    rep.check("actions commute", bad_c is None, bad_c, "bimodule/commute")
    ul, ur = m.act_left(a.unit), m.act_right(a.unit)
    rep.check("unital", ul == ident and ur == ident, [ul, ur], "bimodule/unit")
    return rep


class BimoduleTensor(NamedTuple):
    module: Bimodule
    projection: Matrix
    section: Matrix


def balanced_quotient(field, dm: int, dn: int, pairs) -> Quotient:
    """Quotient of k^dm (x) k^dn by the span of (A (x) 1 - 1 (x) B) over the pairs (A, B)."""
    blocks = []
    idm, idn = Matrix.identity(field, dm), Matrix.identity(field, dn)
    for a, b in pairs:
        blocks.append((a.kron(idn) - idm.kron(b)).T)
    rel = Matrix.vstack(field, dm * dn, blocks) if blocks else None
    return Quotient(field, dm * dn, rel)


def bimodule_tensor(m: Bimodule, n: Bimodule) -> BimoduleTensor:
    """M (x)_R N realized as a quotient of M (x)_k N."""
    a = m.algebra
    q = balanced_quotient(a.field, m.dim, n.dim, list(zip(m.right, n.left)))
    idm, idn = m.identity(), n.identity()
    left = [q.proj @ m.left[i].kron(idn) @ q.sect for i in range(a.dim)]
    right = [q.proj @ idm.kron(n.right[i]) @ q.sect for i in range(a.dim)]
    return BimoduleTensor(Bimodule(a, q.dim, left, right), q.proj, q.sect)


RIGHT_ONLY = "RightOnly"
TWO_SIDED = "TwoSided"


def bimodule_hom_basis(m: Bimodule, n: Bimodule, sided: str = TWO_SIDED) -> list[Matrix]:
    """Basis of the matrices X: M -> N commuting with the right (and left) actions."""
    f = m.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    idm, idn = m.identity(), n.identity()
    blocks = []
    pairs = list(zip(m.right, n.right))
    if sided == TWO_SIDED:
        pairs += list(zip(m.left, n.left))
    elif sided != RIGHT_ONLY:
        raise ValueError("sided must be RightOnly or TwoSided")
    for am, an in pairs:
        # row-major vec(A X B) = (A kron B^T) vec(X)
        blocks.append(idn.kron(am.T) - an.kron(idm))
    if not blocks:
        return [_unvec(f, c, dn, dm) for c in Matrix.identity(f, dn * dm).columns()]
    sys = Matrix.vstack(f, dn * dm, blocks)
    ker = kernel_basis(sys)
    return [_unvec(f, ker.col(j), dn, dm) for j in range(ker.cols)]


def _unvec(f, v, rows, cols) -> Matrix:
    return Matrix(f, rows, cols, [list(v[i * cols:(i + 1) * cols]) for i in range(rows)])


def vec(x: Matrix) -> Matrix:
    return Matrix(x.field, x.rows * x.cols, 1, [[e] for e in x.flat()])


@dataclass
class DualityDatum:
    """Right dual M* = Hom_R(M, R) with its dual basis.

    ``basis`` holds the matrices (R.dim x M.dim) of the chosen basis of M*;
    dual vectors are coordinate columns in that basis.  ``xs`` and ``fs``
    are the dual-basis pairs with sum_i x_i . f_i(m) = m.
    """

    module: Bimodule
    dual: Bimodule
    basis: list[Matrix]
    ev: Matrix
    xs: list[Matrix]
    fs: list[Matrix]

    def functional(self, f: Matrix) -> Matrix:
        """The R x M matrix of a dual vector."""
        return combine(self.module.field, f, self.basis, None) if self.basis else \
            Matrix.zeros(self.module.field, self.module.algebra.dim, self.module.dim)

    def coordinates(self, phi: Matrix) -> Matrix:
        """Dual coordinates of a right-linear functional given as a matrix."""
        f = self.module.field
        big = Matrix.hstack(f, phi.rows * phi.cols, [vec(b) for b in self.basis])
        x = solve(big, vec(phi))
        if x is None:
            raise ValueError("functional is not right R-linear")
        return x

    def pair(self, f: Matrix, m: Matrix) -> Matrix:
        return self.functional(f) @ m

    def snake_residuals(self):
        """Return (left, right) residual matrices of the two snake identities."""
        mod = self.module
        fld = mod.field
        res1 = Matrix.zeros(fld, mod.dim, mod.dim)
        for c in range(mod.dim):
            x = mod.basis(c)
            tot = Matrix.zeros(fld, mod.dim, 1)
            for xi, fi in zip(self.xs, self.fs):
                tot = tot + mod.act_right(self.pair(fi, x)) @ xi
            for i in range(mod.dim):
                res1.data[i][c] = tot.data[i][0] - x.data[i][0]
        dd = self.dual.dim
        res2 = Matrix.zeros(fld, dd, dd)
        for c in range(dd):
            g = Matrix.unit(fld, dd, c)
            tot = Matrix.zeros(fld, dd, 1)
            for xi, fi in zip(self.xs, self.fs):
                tot = tot + self.dual.act_left(self.pair(g, xi)) @ fi
            for i in range(dd):
                res2.data[i][c] = tot.data[i][0] - g.data[i][0]
        return res1, res2


def right_dual_data(m: Bimodule) -> DualityDatum:
    a = m.algebra
    f = a.field
    reg = a.regular()
    basis = bimodule_hom_basis(m, reg, RIGHT_ONLY)
    D, d, r = len(basis), m.dim, a.dim
    if d == 0:
        dual = Bimodule(a, 0, [Matrix.zeros(f, 0, 0)] * r, [Matrix.zeros(f, 0, 0)] * r)
        return DualityDatum(m, dual, [], Matrix.zeros(f, r, 0), [], [])
    big = Matrix.hstack(f, r * d, [vec(b) for b in basis]) if basis else None

    def coords(phi):
        x = solve(big, vec(phi))
        assert x is not None
        return x

    left = []
    right = []
    for i in range(r):
        left.append(Matrix.hstack(f, D, [coords(a.left_mult(i) @ b) for b in basis]))
        right.append(Matrix.hstack(f, D, [coords(b @ m.left[i]) for b in basis]))
    dual = Bimodule(a, D, left, right)
    ev = Matrix.zeros(f, r, D * d)
    for b, phi in enumerate(basis):
        for c in range(d):
            for i in range(r):
                ev.data[i][b * d + c] = phi.data[i][c]
    # unknowns coef[(a_, b)]: f^a = sum_b coef * phi_b, with x^a = e_a
    sysm = Matrix.zeros(f, d * d, d * D)
    for c in range(d):
        for o in range(d):
            row = sysm.data[c * d + o]
            for a_ in range(d):
                for b, phi in enumerate(basis):
                    s = f.zero
                    for i in range(r):
                        p = phi.data[i][c]
                        if p:
                            s = s + p * m.right[i].data[o][a_]
                    row[a_ * D + b] = s
    rhs = vec(Matrix.identity(f, d).T)  # row (c, o) -> delta_{o c}
    sol = solve(sysm, rhs) if D else None
    if sol is None:
        raise NotFgProjective("no dual basis of size <= %d exists" % d)
    xs, fs = [], []
    for a_ in range(d):
        fv = Matrix(f, D, 1, [[sol.data[a_ * D + b][0]] for b in range(D)])
        if not fv.is_zero():
            xs.append(m.basis(a_))
            fs.append(fv)
    return DualityDatum(m, dual, basis, ev, xs, fs)


@dataclass
class FrobeniusDatum:
    """phi: values on the basis; e: matrix E with e = sum E[i][j] b_i (x) b_j."""

    phi: Matrix
    e: Matrix

    def phi_of(self, r: Matrix):
        return (self.phi.T @ r).data[0][0]

    def pairs(self, a: AlgebraPresentation):
        out = []
        for i in range(a.dim):
            for j in range(a.dim):
                if self.e.data[i][j]:
                    out.append((a.basis(i).scale(self.e.data[i][j]), a.basis(j)))
        return out


def validate_separable_frobenius(a: AlgebraPresentation, d: FrobeniusDatum) -> Report:
    rep = Report("separable Frobenius structure")
    f = a.field
    pairs = d.pairs(a)
    bad1 = bad2 = None
    for k in range(a.dim):
        r = a.basis(k)
        s1 = Matrix.zeros(f, a.dim, 1)
        s2 = Matrix.zeros(f, a.dim, 1)
        for ei, fi in pairs:
            s1 = s1 + fi.scale(d.phi_of(a.product(r, ei)))
            s2 = s2 + ei.scale(d.phi_of(a.product(fi, r)))
        if s1 != r:
            bad1 = bad1 or (k, s1)
        if s2 != r:
            bad2 = bad2 or (k, s2)
    rep.check("sum phi(r e_i) f_i = r", bad1 is None, bad1, "frobenius/left")
    rep.check("sum e_i phi(f_i r) = r", bad2 is None, bad2, "frobenius/right")
    tot = Matrix.zeros(f, a.dim, 1)
    for ei, fi in pairs:
        tot = tot + a.product(ei, fi)
    rep.check("sum e_i f_i = 1", tot == a.unit, tot, "frobenius/separable")
    evec = vec(d.e)
    idm = Matrix.identity(f, a.dim)
    bad = None
    for k in range(a.dim):
        if a.left_mult(k).kron(idm) @ evec != idm.kron(a.right_mult(k)) @ evec:
            bad = bad or (k,)
    rep.check("e is central", bad is None, bad, "frobenius/central")
    return rep
