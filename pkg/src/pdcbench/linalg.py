"""Exact dense linear algebra over the rationals and prime fields.

Matrices are immutable wrappers around python-flint matrices (``fmpq_mat``
for Q, ``nmod_mat`` for F_p).  Every other module only talks to
:class:`ExactMatrix`, so the backend stays swappable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import flint


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: the rationals (characteristic 0) or F_p."""

    kind: str
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == "rationals":
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        elif self.kind == "prime":
            p = self.characteristic
            if not _is_prime(p) or p >= 2**31:
                raise ValueError(f"characteristic must be a prime below 2^31, got {p}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls):
        return cls("rationals", 0)

    @classmethod
    def prime(cls, p):
        return cls("prime", int(p))

    @property
    def is_rational(self):
        return self.kind == "rationals"

    def __str__(self):
        return "QQ" if self.is_rational else f"GF({self.characteristic})"

    def scalar(self, x):
        """Canonical Python scalar: ``Fraction`` over Q, ``int`` in [0, p) over F_p."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.is_rational:
            if isinstance(x, flint.fmpq):
                return Fraction(int(x.p), int(x.q))
            return Fraction(x)
        p = self.characteristic
        if isinstance(x, flint.nmod):
            return int(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({p})")
            return x.numerator * pow(x.denominator, -1, p) % p
        if isinstance(x, float) and not x.is_integer():
            raise TypeError("floats are not exact scalars")
        return int(x) % p

    def inv(self, x):
        s = self.scalar(x)
        if s == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational:
            return 1 / s
        return pow(s, -1, self.characteristic)

    def _raw(self, x):
        s = self.scalar(x)
        if self.is_rational:
            return flint.fmpq(s.numerator, s.denominator)
        return s

    def format(self, x):
        """JSON-friendly form: int when integral, else the string "p/q"."""
        s = self.scalar(x)
        if self.is_rational and s.denominator != 1:
            return f"{s.numerator}/{s.denominator}"
        return int(s)

    def to_dict(self):
        if self.is_rational:
            return {"kind": "rationals"}
        return {"kind": "prime", "characteristic": self.characteristic}


QQ = FieldSpec.rationals()


class ExactMatrix:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("field", "_m")

    def __init__(self, field, rows, ncols=None):
        self.field = field
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        flat = [field._raw(x) for r in rows for x in r]
        self._m = _make(field, len(rows), ncols, flat)

    @classmethod
    def _wrap(cls, field, m):
        out = cls.__new__(cls)
        out.field = field
        out._m = m
        return out

    @classmethod
    def _from_flat(cls, field, r, c, flat):
        return cls._wrap(field, _make(field, r, c, flat))

    @classmethod
    def zeros(cls, field, r, c):
        return cls._wrap(field, _make(field, r, c, None))

    @classmethod
    def identity(cls, field, n):
        flat = [0] * (n * n)
        for i in range(n):
            flat[i * n + i] = 1
        return cls._from_flat(field, n, n, flat)

    @classmethod
    def column(cls, field, values):
        values = list(values)
        return cls._from_flat(field, len(values), 1, [field._raw(v) for v in values])

    @classmethod
    def unit_column(cls, field, n, i):
        flat = [0] * n
        flat[i] = 1
        return cls._from_flat(field, n, 1, flat)

    @classmethod
    def from_columns(cls, field, n, cols):
        """Matrix whose columns are the given flat vectors of length n."""
        cols = list(cols)
        k = len(cols)
        flat = [0] * (n * k)
        for j, v in enumerate(cols):
            for i in range(n):
                flat[i * k + j] = v[i]
        return cls._from_flat(field, n, k, flat)

    @property
    def rows(self):
        return self._m.nrows()

    @property
    def cols(self):
        return self._m.ncols()

    @property
    def shape(self):
        return (self.rows, self.cols)

    def raw_entries(self):
        """Row-major backend scalars (fast path for internal reshaping)."""
        return self._m.entries()

    def entries(self):
        return [self.field.scalar(x) for x in self._m.entries()]

    def tolist(self):
        e = self.entries()
        c = self.cols
        return [e[i * c:(i + 1) * c] for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.field.scalar(self._m[i, j])

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.tolist()})"

    def _check(self, other):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return ExactMatrix.zeros(self.field, self.rows, other.cols)
        return ExactMatrix._wrap(self.field, self._m * other._m)

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        if self.rows == 0 or self.cols == 0:
            return self
        return ExactMatrix._wrap(self.field, self._m + other._m)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        if self.rows == 0 or self.cols == 0:
            return self
        return ExactMatrix._wrap(self.field, -self._m)

    def scale(self, c):
        if self.rows == 0 or self.cols == 0:
            return self
        return ExactMatrix._wrap(self.field, self._m * self.field._raw(c))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    @property
    def T(self):
        if self.rows == 0 or self.cols == 0:
            return ExactMatrix.zeros(self.field, self.cols, self.rows)
        return ExactMatrix._wrap(self.field, self._m.transpose())

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self.rows == 0 or self.cols == 0:
            return True
        return self._m == other._m

    __hash__ = None

    def is_zero(self):
        return all(x == 0 for x in self._m.entries())

    def take_rows(self, idx):
        idx = list(idx)
        c = self.cols
        if 4 * len(idx) < self.rows:
            m = self._m
            flat = [m[i, j] for i in idx for j in range(c)]
            return ExactMatrix._from_flat(self.field, len(idx), c, flat)
        e = self._m.entries()
        flat = [x for i in idx for x in e[i * c:(i + 1) * c]]
        return ExactMatrix._from_flat(self.field, len(idx), c, flat)

    def take_cols(self, idx):
        idx = list(idx)
        c = self.cols
        m = self._m
        if 4 * len(idx) < c:
            flat = [m[i, j] for i in range(self.rows) for j in idx]
        else:
            e = m.entries()
            flat = [e[i * c + j] for i in range(self.rows) for j in idx]
        return ExactMatrix._from_flat(self.field, self.rows, len(idx), flat)

    def row_slice(self, start, stop):
        return self.take_rows(range(start, stop))

    def col_slice(self, start, stop):
        return self.take_cols(range(start, stop))

    def column_vectors(self):
        """Columns as flat lists of backend scalars."""
        e = self._m.entries()
        c = self.cols
        return [e[j::c] if c else [] for j in range(c)]


def _make(field, r, c, flat):
    if field.is_rational:
        if flat is None:
            return flint.fmpq_mat(r, c)
        return flint.fmpq_mat(r, c, flat)
    p = field.characteristic
    if flat is None:
        return flint.nmod_mat(r, c, p)
    return flint.nmod_mat(r, c, [int(x) for x in flat], p)


def hstack(mats, rows=None, field=None):
    """Concatenate horizontally; ``rows``/``field`` are needed only for an empty list."""
    mats = list(mats)
    if not mats:
        return ExactMatrix.zeros(field, rows or 0, 0)
    f = mats[0].field
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise ValueError("hstack row mismatch")
    parts = [(m.raw_entries(), m.cols) for m in mats]
    flat = []
    for i in range(r):
        for e, c in parts:
            flat.extend(e[i * c:(i + 1) * c])
    return ExactMatrix._from_flat(f, r, sum(c for _, c in parts), flat)


def vstack(mats, cols=None, field=None):
    mats = list(mats)
    if not mats:
        return ExactMatrix.zeros(field, 0, cols or 0)
    f = mats[0].field
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise ValueError("vstack column mismatch")
    flat = []
    for m in mats:
        flat.extend(m.raw_entries())
    return ExactMatrix._from_flat(f, sum(m.rows for m in mats), c, flat)


def block_diag(mats, field=None):
    mats = list(mats)
    if not mats:
        return ExactMatrix.zeros(field, 0, 0)
    f = mats[0].field
    R = sum(m.rows for m in mats)
    C = sum(m.cols for m in mats)
    flat = [0] * (R * C)
    r0 = c0 = 0
    for m in mats:
        e = m.raw_entries()
        for i in range(m.rows):
            base = (r0 + i) * C + c0
            flat[base:base + m.cols] = e[i * m.cols:(i + 1) * m.cols]
        r0 += m.rows
        c0 += m.cols
    return ExactMatrix._from_flat(f, R, C, flat)


def block_matrix(blocks, row_sizes, col_sizes, field):
    """Assemble from a dict {(i, j): matrix}; missing blocks are zero."""
    R = sum(row_sizes)
    C = sum(col_sizes)
    flat = [0] * (R * C)
    roff = [sum(row_sizes[:i]) for i in range(len(row_sizes))]
    coff = [sum(col_sizes[:j]) for j in range(len(col_sizes))]
    for (i, j), m in blocks.items():
        if m.shape != (row_sizes[i], col_sizes[j]):
            raise ValueError(f"block {(i, j)} has shape {m.shape}")
        e = m.raw_entries()
        for a in range(m.rows):
            base = (roff[i] + a) * C + coff[j]
            flat[base:base + m.cols] = e[a * m.cols:(a + 1) * m.cols]
    return ExactMatrix._from_flat(field, R, C, flat)


def kronecker(a, b):
    """Kronecker product with lexicographic (left factor major) indexing."""
    a._check(b)
    ea, eb = a.raw_entries(), b.raw_entries()
    ra, ca, rb, cb = a.rows, a.cols, b.rows, b.cols
    flat = [0] * (ra * rb * ca * cb)
    C = ca * cb
    for i in range(ra):
        for j in range(ca):
            x = ea[i * ca + j]
            if x == 0:
                continue
            for k in range(rb):
                base = (i * rb + k) * C + j * cb
                for l in range(cb):
                    y = eb[k * cb + l]
                    if y != 0:
                        flat[base + l] = x * y
    return ExactMatrix._from_flat(a.field, ra * rb, C, flat)


def rref(m):
    """Reduced row echelon form and pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return m, []
    R, rk = m._m.rref()
    e = R.entries()
    c = m.cols
    pivots = []
    j = 0
    for i in range(rk):
        while e[i * c + j] == 0:
            j += 1
        pivots.append(j)
    return ExactMatrix._wrap(m.field, R), pivots


def rank(m):
    if m.rows == 0 or m.cols == 0:
        return 0
    return m._m.rank()


def kernel_basis(m):
    """Columns form a basis of the right kernel of ``m``."""
    c = m.cols
    R, piv = rref(m)
    pset = set(piv)
    free = [j for j in range(c) if j not in pset]
    e = R.raw_entries()
    k = len(free)
    flat = [0] * (c * k)
    for t, f in enumerate(free):
        flat[f * k + t] = 1
        for i, p in enumerate(piv):
            x = e[i * c + f]
            if x != 0:
                flat[p * k + t] = -x
    return ExactMatrix._from_flat(m.field, c, k, flat)


def image_basis(m):
    """Independent columns of ``m`` spanning its column space."""
    _, piv = rref(m)
    return m.take_cols(piv)


def solve(m, b):
    """Some x with m @ x == b, or None when the system is inconsistent."""
    if m.rows != b.rows:
        raise ValueError(f"shape mismatch: {m.shape} vs rhs {b.shape}")
    c, q = m.cols, b.cols
    if m.rows == 0:
        return ExactMatrix.zeros(m.field, c, q)
    R, piv = rref(hstack([m, b]))
    if piv and piv[-1] >= c:
        return None
    e = R.raw_entries()
    w = c + q
    flat = [0] * (c * q)
    for i, p in enumerate(piv):
        flat[p * q:(p + 1) * q] = e[i * w + c:(i + 1) * w]
    return ExactMatrix._from_flat(m.field, c, q, flat)


def inverse(m):
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    if m.rows == 0:
        return m
    if rank(m) < m.rows:
        raise ZeroDivisionError("singular matrix")
    return ExactMatrix._wrap(m.field, m._m.inv())


def is_invertible(m):
    return m.rows == m.cols and rank(m) == m.rows


def left_inverse(k):
    """X with X @ k == I for a matrix of full column rank."""
    n, r = k.shape
    if r == 0:
        return ExactMatrix.zeros(k.field, 0, n)
    x = solve(k.T, ExactMatrix.identity(k.field, r))
    if x is None:
        raise ValueError("columns are not independent")
    return x.T


def quotient_data(w, n=None, field=None):
    """Projection ``q`` and section ``s`` for V / span(w), V of dim n.

    ``q`` is surjective with kernel span(w) and ``q @ s`` is the identity.
    """
    if n is None:
        n = w.rows
    field = field or w.field
    wb = image_basis(w) if w.cols else ExactMatrix.zeros(field, n, 0)
    _, piv = rref(wb.T) if wb.cols else (None, [])
    pset = set(piv)
    comp = [j for j in range(n) if j not in pset]
    s = ExactMatrix.identity(field, n).take_cols(comp)
    if not pset:
        return ExactMatrix.identity(field, n), s
    full = inverse(hstack([wb, s]))
    q = full.row_slice(wb.cols, n)
    return q, s


def in_span(basis, v):
    """True when every column of ``v`` lies in the column span of ``basis``."""
    if v.cols == 0:
        return True
    if basis.cols == 0:
        return v.is_zero()
    return rank(hstack([basis, v])) == rank(basis)


def vec(m):
    """Row-major vectorisation as a column."""
    return ExactMatrix._from_flat(m.field, m.rows * m.cols, 1, m.raw_entries())


def unvec(v, r, c):
    return ExactMatrix._from_flat(v.field, r, c, v.raw_entries())
