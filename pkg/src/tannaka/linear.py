"""Exact dense linear algebra over Q or a prime field F_p.

Matrices are small (a few hundred rows at most) and entries are exact, so
plain Gaussian elimination on Python lists is all that is needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class NotIdempotent(ValueError):
    pass


class NotInvertible(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Fp:
    """Element of Z/p, stored as its canonical representative."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Fp):
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.v - self._lift(other), self.p)

    def __rsub__(self, other):
        return Fp(self._lift(other) - self.v, self.p)

    def __mul__(self, other):
        return Fp(self.v * self._lift(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other) % self.p
        if o == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return Fp(self._lift(other), self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "Fp(%d, %d)" % (self.v, self.p)

    def __str__(self):
        return str(self.v)


class Field:
    """Either the rationals (p is None) or the prime field F_p."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError("%r is not prime" % p)
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @property
    def kind(self) -> str:
        return "rationals" if self.p is None else "prime"

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, Fp):
                raise TypeError("cannot coerce a prime-field element to Q")
            return Fraction(x)
        if isinstance(x, Fp):
            if x.p != self.p:
                raise TypeError("characteristic mismatch")
            return x
        if isinstance(x, Fraction):
            return Fp(x.numerator, self.p) / Fp(x.denominator, self.p)
        return Fp(int(x), self.p)

    def parse(self, s: str):
        if not isinstance(s, str):
            raise TypeError("field elements are serialized as strings")
        if self.p is None:
            return Fraction(s)
        v = int(s)
        if not 0 <= v < self.p:
            raise ValueError("%r is not a canonical representative mod %d" % (s, self.p))
        return Fp(v, self.p)

    @staticmethod
    def format(x) -> str:
        return str(x)

    def to_json(self) -> dict:
        if self.p is None:
            return {"kind": "rationals"}
        return {"kind": "prime", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else "F_%d" % self.p


QQ = Field()


class Matrix:
    """Dense rows x cols matrix with exact entries.  Treated as immutable."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: list[list]):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    # construction

    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero
        return cls(field, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence], cols: int | None = None):
        data = [[field(x) for x in r] for r in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise ValueError("ragged matrix")
        return cls(field, len(data), cols, data)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], rows: int):
        cols = [list(c) for c in columns]
        data = [[field(c[i]) for c in cols] for i in range(rows)]
        return cls(field, rows, len(cols), data)

    @classmethod
    def column(cls, field, entries: Sequence):
        return cls(field, len(entries), 1, [[field(x)] for x in entries])

    @classmethod
    def unit(cls, field, n, i):
        v = cls.zeros(field, n, 1)
        v.data[i][0] = field.one
        return v

    @classmethod
    def hstack(cls, field, rows, blocks: Sequence["Matrix"]):
        data = [[] for _ in range(rows)]
        cols = 0
        for b in blocks:
            assert b.rows == rows, (b.rows, rows)
            for i in range(rows):
                data[i].extend(b.data[i])
            cols += b.cols
        return cls(field, rows, cols, data)

    @classmethod
    def vstack(cls, field, cols, blocks: Sequence["Matrix"]):
        data = []
        for b in blocks:
            assert b.cols == cols, (b.cols, cols)
            data.extend(list(r) for r in b.data)
        return cls(field, len(data), cols, data)

    @classmethod
    def block_diag(cls, field, blocks: Sequence["Matrix"]):
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks)
        m = cls.zeros(field, r, c)
        i0 = j0 = 0
        for b in blocks:
            for i in range(b.rows):
                m.data[i0 + i][j0:j0 + b.cols] = list(b.data[i])
            i0 += b.rows
            j0 += b.cols
        return m

    # access

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def copy(self):
        return Matrix(self.field, self.rows, self.cols, [list(r) for r in self.data])

    def col(self, j) -> list:
        return [r[j] for r in self.data]

    def column_matrix(self, j) -> "Matrix":
        return Matrix(self.field, self.rows, 1, [[r[j]] for r in self.data])

    def columns(self) -> list[list]:
        return [self.col(j) for j in range(self.cols)]

    def select_columns(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix(self.field, self.rows, len(idx), [[r[j] for j in idx] for r in self.data])

    def select_rows(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix(self.field, len(idx), self.cols, [list(self.data[i]) for i in idx])

    def flat(self) -> list:
        return [x for r in self.data for x in r]

    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    def nonzero_entry(self):
        for i, r in enumerate(self.data):
            for j, x in enumerate(r):
                if x:
                    return (i, j)
        return None

    def is_square(self):
        return self.rows == self.cols

    # arithmetic

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        z = self.field.zero
        ocols = other.cols
        odata = other.data
        out = []
        for r in self.data:
            acc = [z] * ocols
            for k, a in enumerate(r):
                if a:
                    orow = odata[k]
                    for j in range(ocols):
                        b = orow[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.field, self.rows, ocols, out)

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(self.field, self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(self.field, self.rows, self.cols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self):
        return Matrix(self.field, self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c):
        c = self.field(c) if not isinstance(c, (Fraction, Fp)) else c
        return Matrix(self.field, self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.data, other.data) for a, b in zip(r, s))

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.flat())))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; index (i, k) of the result is i * other.rows + k."""
        out = []
        z = self.field.zero
        for r in self.data:
            for s in other.data:
                row = []
                for a in r:
                    if a:
                        row.extend(a * b for b in s)
                    else:
                        row.extend([z] * other.cols)
                out.append(row)
        return Matrix(self.field, self.rows * other.rows, self.cols * other.cols, out)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return "Matrix(%dx%d: [%s])" % (self.rows, self.cols, body)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.data]

    # linear algebra shortcuts

    def rank(self) -> int:
        return rref(self)[2]

    def inverse(self) -> "Matrix":
        return inverse(self)


def kron_all(mats: Sequence[Matrix]) -> Matrix:
    out = mats[0]
    for m in mats[1:]:
        out = out.kron(m)
    return out


def rref(m: Matrix):
    """Reduced row echelon form, pivot columns and rank.

    The pivot in each column is the first nonzero entry at or below the
    current row; exact arithmetic makes magnitude pivoting pointless.
    """
    a = [list(r) for r in m.data]
    rows, cols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = r
        while k < rows and not a[k][c]:
            k += 1
        if k == rows:
            continue
        if k != r:
            a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        inv = 1 / piv
        row = a[r]
        for j in range(c, cols):
            if row[j]:
                row[j] = row[j] * inv
        for i in range(rows):
            if i != r:
                f = a[i][c]
                if f:
                    ai = a[i]
                    for j in range(c, cols):
                        if row[j]:
                            ai[j] = ai[j] - f * row[j]
        pivots.append(c)
        r += 1
    return Matrix(m.field, rows, cols, a), pivots, len(pivots)


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning the right null space, one per free column."""
    red, pivots, rank = rref(m)
    f = m.field
    free = [j for j in range(m.cols) if j not in set(pivots)]
    out = Matrix.zeros(f, m.cols, len(free))
    for k, j in enumerate(free):
        out.data[j][k] = f.one
        for i, p in enumerate(pivots):
            v = red.data[i][j]
            if v:
                out.data[p][k] = -v
    return out


def column_space(m: Matrix) -> Matrix:
    """Columns of m at its pivot positions: a basis of the image."""
    _, pivots, _ = rref(m)
    return m.select_columns(pivots)


def row_space(m: Matrix) -> Matrix:
    """Nonzero rows of the rref: a canonical basis of the row space."""
    red, _, rank = rref(m)
    return red.select_rows(range(rank))


def solve(a: Matrix, b: Matrix):
    """A particular X with a @ X == b (free variables set to zero), or None."""
    f = a.field
    aug = Matrix.hstack(f, a.rows, [a, b])
    red, pivots, rank = rref(aug)
    n = a.cols
    if any(p >= n for p in pivots):
        return None
    x = Matrix.zeros(f, n, b.cols)
    for i, p in enumerate(pivots):
        x.data[p] = list(red.data[i][n:])
    return x


def in_span(a: Matrix, v: Matrix) -> bool:
    return solve(a, v) is not None


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise NotInvertible("non-square matrix %s" % (m.shape,))
    x = solve(m, Matrix.identity(m.field, m.rows))
    if x is None or rref(m)[2] != m.rows:
        raise NotInvertible("singular matrix")
    return x


def split_idempotent(e: Matrix):
    """Return (section, retraction) with retraction @ section = 1, section @ retraction = e."""
    if e.rows != e.cols or e @ e != e:
        raise NotIdempotent("matrix is not idempotent")
    section = column_space(e)
    if section.cols == 0:
        return section, Matrix.zeros(e.field, 0, e.rows)
    retraction = solve(section, e)
    return section, retraction


class Quotient:
    """The quotient k^n / W for a subspace W given by spanning vectors.

    The basis of the quotient consists of the classes of the coordinate
    vectors e_j whose index j is not a pivot of the rref of the relations.
    """

    __slots__ = ("field", "ambient", "dim", "proj", "sect", "free", "relations")

    def __init__(self, field: Field, ambient: int, relation_rows: Matrix | None = None):
        self.field = field
        self.ambient = ambient
        if relation_rows is None or relation_rows.rows == 0:
            red, pivots = Matrix.zeros(field, 0, ambient), []
        else:
            red, pivots, rank = rref(relation_rows)
            red = red.select_rows(range(rank))
        self.relations = red
        pset = set(pivots)
        self.free = [j for j in range(ambient) if j not in pset]
        q = len(self.free)
        self.dim = q
        pos = {j: k for k, j in enumerate(self.free)}
        proj = Matrix.zeros(field, q, ambient)
        for j, k in pos.items():
            proj.data[k][j] = field.one
        for i, p in enumerate(pivots):
            row = red.data[i]
            for j, k in pos.items():
                if row[j]:
                    proj.data[k][p] = -row[j]
        sect = Matrix.zeros(field, ambient, q)
        for j, k in pos.items():
            sect.data[j][k] = field.one
        self.proj = proj
        self.sect = sect

    @classmethod
    def from_columns(cls, field, ambient, relation_cols: Matrix):
        return cls(field, ambient, relation_cols.T if relation_cols.cols else None)
