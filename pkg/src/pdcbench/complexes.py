"""Bounded cochain complexes of modules, chain maps and the standard operations.

Grading is cohomological: ``d[n]`` maps the degree n term to degree n + 1.
Sign conventions:

* shift: ``C[k]^n = C^{n+k}`` with differential ``(-1)^k d``;
* cone of f: X -> Y: ``cone^n = X^{n+1} ⊕ Y^n``, ``d(x, y) = (-dx, f x + dy)``;
* Hom complex: ``Hom^n = ∏_p Hom(X^p, Y^{p+n})``, ``D f = d∘f - (-1)^n f∘d``;
* tensor: ``d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy``;
* totalization of a bicomplex with commuting squares: ``d = d_h + (-1)^p d_v``.
"""

from __future__ import annotations

from .algebra import ground_algebra
from .linalg import (
    ExactMatrix,
    block_matrix,
    kernel_basis,
    kronecker,
    left_inverse,
    rank,
    vstack,
)
from .modules import (
    direct_sum,
    dual,
    flip,
    forget,
    hom_module,
    tensor_module,
    zero_module,
    submodule,
    quotient,
)


class ComplexError(ValueError):
    """Raised when data does not define a complex or a chain map."""


class Complex:
    """A bounded complex; terms outside the stored window are zero."""

    def __init__(self, terms, diffs=None, left=None, right=None, name=None, check=True):
        terms = {int(n): m for n, m in terms.items()}
        if terms:
            first = next(iter(terms.values()))
            left = left or first.left
            right = right or first.right
        if left is None:
            raise ComplexError("an empty complex needs its algebras")
        right = right or ground_algebra(left.field)
        self.left = left
        self.right = right
        self.field = left.field
        self.name = name
        if terms:
            self.lo, self.hi = min(terms), max(terms)
        else:
            self.lo, self.hi = 0, -1
        self._terms = {}
        for n in range(self.lo, self.hi + 1):
            m = terms.get(n)
            if m is None:
                m = zero_module(left, right)
            elif m.left != left or m.right != right:
                raise ComplexError(f"term in degree {n} lives over different algebras")
            self._terms[n] = m
        self._d = {}
        diffs = diffs or {}
        for n in range(self.lo, self.hi):
            D = diffs.get(n)
            shape = (self._terms[n + 1].dim, self._terms[n].dim)
            if D is None:
                D = ExactMatrix.zeros(self.field, *shape)
            elif D.shape != shape:
                raise ComplexError(f"differential in degree {n} has shape {D.shape}, expected {shape}")
            self._d[n] = D
        for n, D in diffs.items():
            if not (self.lo <= n < self.hi) and not D.is_zero():
                raise ComplexError(f"nonzero differential in degree {n} leaves the window")
        self._ranks = {}
        self._zero = zero_module(left, right)
        self.meta = {}
        if check:
            self.verify()

    def __repr__(self):
        dims = [self[n].dim for n in range(self.lo, self.hi + 1)]
        return f"Complex({self.name or '?'}, [{self.lo},{self.hi}], dims={dims})"

    def __getitem__(self, n):
        return self._terms.get(n, self._zero)

    def d(self, n):
        D = self._d.get(n)
        if D is None:
            return ExactMatrix.zeros(self.field, self[n + 1].dim, self[n].dim)
        return D

    @property
    def degrees(self):
        return range(self.lo, self.hi + 1)

    @property
    def terms(self):
        return dict(self._terms)

    @property
    def diffs(self):
        return dict(self._d)

    def is_empty(self):
        return all(self[n].dim == 0 for n in self.degrees)

    def support(self):
        """(lo, hi) of the nonzero terms, or None for the zero complex."""
        nz = [n for n in self.degrees if self[n].dim]
        return (min(nz), max(nz)) if nz else None

    def verify(self):
        for n in range(self.lo, self.hi - 1):
            if not (self.d(n + 1) @ self.d(n)).is_zero():
                raise ComplexError(f"d∘d is nonzero at degree {n}")
        for n in range(self.lo, self.hi):
            _check_intertwines(self[n], self[n + 1], self.d(n), f"differential in degree {n}")

    def rank_d(self, n):
        r = self._ranks.get(n)
        if r is None:
            r = rank(self.d(n))
            self._ranks[n] = r
        return r

    def homology_dim(self, n):
        return self[n].dim - self.rank_d(n) - self.rank_d(n - 1)

    def homology_dims(self):
        return {n: self.homology_dim(n) for n in self.degrees if self.homology_dim(n)}

    def euler_characteristic(self):
        return sum((-1) ** (n % 2) * self[n].dim for n in self.degrees)

    def trimmed(self):
        s = self.support()
        if s is None:
            return Complex({}, left=self.left, right=self.right, name=self.name, check=False)
        lo, hi = s
        return Complex({n: self[n] for n in range(lo, hi + 1)},
                       {n: self.d(n) for n in range(lo, hi)}, self.left, self.right, self.name, check=False)


def _check_intertwines(src, tgt, F, what):
    if src.left == tgt.left:
        for X, Y in zip(src.view("left")[2], tgt.view("left")[2]):
            if F @ X != Y @ F:
                raise ComplexError(f"{what} is not left linear")
    if src.right == tgt.right and src.right.dim > 1:
        for X, Y in zip(src.view("right")[2], tgt.view("right")[2]):
            if F @ X != Y @ F:
                raise ComplexError(f"{what} is not right linear")


def complex_from_module(m, degree=0, name=None):
    return Complex({degree: m}, name=name or m.name, check=False)


def zero_complex(left, right=None):
    return Complex({}, left=left, right=right, check=False)


class ChainMap:
    """Degree-zero morphism of complexes, components indexed by degree."""

    def __init__(self, source, target, comps, check=True, name=None):
        self.source = source
        self.target = target
        self.name = name
        self._c = {}
        for n, F in comps.items():
            shape = (target[n].dim, source[n].dim)
            if F.shape != shape:
                raise ComplexError(f"component in degree {n} has shape {F.shape}, expected {shape}")
            self._c[int(n)] = F
        if check:
            self.verify()

    def __getitem__(self, n):
        F = self._c.get(n)
        if F is None:
            return ExactMatrix.zeros(self.source.field, self.target[n].dim, self.source[n].dim)
        return F

    @property
    def degrees(self):
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    def verify(self):
        X, Y = self.source, self.target
        for n in self.degrees:
            if self.target.d(n) @ self[n] != self[n + 1] @ X.d(n):
                raise ComplexError(f"chain map does not commute with differentials at degree {n}")
        for n in self.degrees:
            if X[n].dim and Y[n].dim:
                _check_intertwines(X[n], Y[n], self[n], f"chain map component in degree {n}")

    def compose(self, other):
        """self ∘ other."""
        comps = {n: self[n] @ other[n] for n in other.degrees}
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other):
        return ChainMap(self.source, self.target,
                        {n: self[n] + other[n] for n in self.degrees}, check=False)

    def scale(self, c):
        return ChainMap(self.source, self.target, {n: self[n].scale(c) for n in self.degrees}, check=False)


def identity_map(c):
    return ChainMap(c, c, {n: ExactMatrix.identity(c.field, c[n].dim) for n in c.degrees}, check=False)


def zero_map(x, y):
    return ChainMap(x, y, {}, check=False)


# basic operations -----------------------------------------------------------------

def shift(c, k):
    """C[k]: degree n term is C^{n+k}, differential multiplied by (-1)^k."""
    sign = -1 if k % 2 else 1
    terms = {n - k: c[n] for n in c.degrees}
    diffs = {n - k: c.d(n).scale(sign) for n in range(c.lo, c.hi)}
    return Complex(terms, diffs, c.left, c.right, check=False)


def shift_map(f, k):
    return ChainMap(shift(f.source, k), shift(f.target, k), {n - k: f[n] for n in f.degrees}, check=False)


def cone(f):
    """Mapping cone: cone^n = X^{n+1} ⊕ Y^n, d = [[-d_X, 0], [f, d_Y]]."""
    X, Y = f.source, f.target
    fld = X.field
    if X.is_empty() and Y.is_empty():
        return zero_complex(X.left, X.right)
    lo = min(X.lo - 1, Y.lo)
    hi = max(X.hi - 1, Y.hi)
    terms = {n: direct_sum([X[n + 1], Y[n]]) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        rs = [X[n + 2].dim, Y[n + 1].dim]
        cs = [X[n + 1].dim, Y[n].dim]
        diffs[n] = block_matrix({(0, 0): -X.d(n + 1), (1, 0): f[n + 1], (1, 1): Y.d(n)}, rs, cs, fld)
    return Complex(terms, diffs, X.left, X.right, check=False)


class HomologyData:
    """Cycles basis, projection to homology coordinates and a section."""

    def __init__(self, module, cycles, q, s):
        self.module = module
        self.cycles = cycles
        self.q = q
        self.s = s

    def project(self, v):
        """Homology coordinates of cycles given as columns."""
        return self.q @ left_inverse(self.cycles) @ v


def homology_data(c, n):
    Z = kernel_basis(c.d(n))
    Zmod, _ = submodule(c[n], Z, check=False)
    B = left_inverse(Z) @ c.d(n - 1) if Z.cols else ExactMatrix.zeros(c.field, 0, c[n - 1].dim)
    H, q, s = quotient(Zmod, B)
    return HomologyData(H, Z, q, s)


def homology(c, n):
    """H^n(C) = ker d^n / im d^{n-1} with the induced module structure."""
    return homology_data(c, n).module


def induced_on_homology(f, n):
    """Matrix of H^n(f) in the bases chosen by :func:`homology_data`."""
    hx = homology_data(f.source, n)
    hy = homology_data(f.target, n)
    reps = hx.cycles @ hx.s
    return hy.project(f[n] @ reps)


def acyclic_witness(c, lo=None, hi=None):
    """First degree in [lo, hi] with nonzero homology, or None."""
    for n in c.degrees:
        if lo is not None and n < lo:
            continue
        if hi is not None and n > hi:
            continue
        if c.homology_dim(n):
            return n
    return None


def is_acyclic(c, lo=None, hi=None):
    return acyclic_witness(c, lo, hi) is None


def is_quasi_isomorphism(f, lo=None, hi=None):
    """True iff the cone of f is acyclic (in degrees lo..hi when given)."""
    return is_acyclic(cone(f), lo, hi)


def truncate_above(c, n):
    """τ≤n C together with its inclusion into C."""
    if n >= c.hi:
        return c, identity_map(c)
    if n < c.lo:
        z = zero_complex(c.left, c.right)
        return z, zero_map(z, c)
    Z = kernel_basis(c.d(n))
    Zmod, _ = submodule(c[n], Z, check=False)
    terms = {m: c[m] for m in range(c.lo, n)}
    terms[n] = Zmod
    diffs = {m: c.d(m) for m in range(c.lo, n - 1)}
    if n - 1 >= c.lo:
        diffs[n - 1] = left_inverse(Z) @ c.d(n - 1) if Z.cols else ExactMatrix.zeros(c.field, 0, c[n - 1].dim)
    t = Complex(terms, diffs, c.left, c.right, check=False)
    comps = {m: ExactMatrix.identity(c.field, c[m].dim) for m in range(c.lo, n)}
    comps[n] = Z
    return t, ChainMap(t, c, comps, check=False)


def truncate_below(c, n):
    """τ≥n C together with the projection C -> τ≥n C."""
    if n <= c.lo:
        return c, identity_map(c)
    if n > c.hi:
        z = zero_complex(c.left, c.right)
        return z, zero_map(c, z)
    Q, q, s = quotient(c[n], c.d(n - 1))
    terms = {m: c[m] for m in range(n + 1, c.hi + 1)}
    terms[n] = Q
    diffs = {m: c.d(m) for m in range(n + 1, c.hi)}
    if n < c.hi:
        diffs[n] = c.d(n) @ s
    t = Complex(terms, diffs, c.left, c.right, check=False)
    comps = {m: ExactMatrix.identity(c.field, c[m].dim) for m in range(n + 1, c.hi + 1)}
    comps[n] = q
    return t, ChainMap(c, t, comps, check=False)


def direct_sum_complex(cs):
    cs = list(cs)
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    fld = cs[0].field
    terms = {n: direct_sum([c[n] for c in cs]) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        rs = [c[n + 1].dim for c in cs]
        cols = [c[n].dim for c in cs]
        diffs[n] = block_matrix({(i, i): c.d(n) for i, c in enumerate(cs)}, rs, cols, fld)
    return Complex(terms, diffs, cs[0].left, cs[0].right, check=False)


def dual_complex(c):
    """D(C)^n = D(C^{-n}) with differential the transpose of d^{-n-1}."""
    terms = {-n: dual(c[n]) for n in c.degrees}
    diffs = {n: c.d(-n - 1).T for n in range(-c.hi, -c.lo)}
    return Complex(terms, diffs, c.right, c.left, check=False)


def dual_map(f):
    """D(f): D(Y) -> D(X)."""
    return ChainMap(dual_complex(f.target), dual_complex(f.source),
                    {-n: f[n].T for n in f.degrees}, check=False)


def map_complex(c, fn, left=None, right=None):
    """Apply a termwise module operation that keeps matrices (flip, forget...)."""
    terms = {n: fn(c[n]) for n in c.degrees}
    any_term = next(iter(terms.values()), None)
    left = left or (any_term.left if any_term else c.left)
    right = right or (any_term.right if any_term else c.right)
    out = Complex(terms, c.diffs, left, right, c.name, check=False)
    out.meta = dict(c.meta)
    return out


def flip_complex(c):
    return map_complex(c, flip, c.right.opposite(), c.left.opposite())


def forget_complex(c, side):
    g = ground_algebra(c.field)
    if side == "left":
        return map_complex(c, lambda m: forget(m, "left"), c.left, g)
    return map_complex(c, lambda m: forget(m, "right"), g, c.right)


# bicomplexes ----------------------------------------------------------------------

class Bicomplex:
    """Double complex with commuting squares: dh (p,q)->(p+1,q), dv (p,q)->(p,q+1)."""

    def __init__(self, terms, dh=None, dv=None, check=True):
        self.terms = dict(terms)
        if not self.terms:
            raise ComplexError("empty bicomplex")
        first = next(iter(self.terms.values()))
        self.left, self.right, self.field = first.left, first.right, first.field
        self._zero = zero_module(self.left, self.right)
        self.dh = dict(dh or {})
        self.dv = dict(dv or {})
        if check:
            self.verify()

    def __getitem__(self, pq):
        return self.terms.get(pq, self._zero)

    def h(self, p, q):
        D = self.dh.get((p, q))
        return D if D is not None else ExactMatrix.zeros(self.field, self[p + 1, q].dim, self[p, q].dim)

    def v(self, p, q):
        D = self.dv.get((p, q))
        return D if D is not None else ExactMatrix.zeros(self.field, self[p, q + 1].dim, self[p, q].dim)

    def verify(self):
        for (p, q) in self.terms:
            if not (self.h(p + 1, q) @ self.h(p, q)).is_zero():
                raise ComplexError(f"row differential squares to nonzero at {(p, q)}")
            if not (self.v(p, q + 1) @ self.v(p, q)).is_zero():
                raise ComplexError(f"column differential squares to nonzero at {(p, q)}")
            if self.v(p + 1, q) @ self.h(p, q) != self.h(p, q + 1) @ self.v(p, q):
                raise ComplexError(f"square at {(p, q)} does not commute")


def totalize(b):
    """Direct-sum totalization with differential d_h + (-1)^p d_v."""
    keys = [pq for pq, m in b.terms.items()]
    degs = sorted({p + q for p, q in keys})
    lo, hi = degs[0], degs[-1]
    blocks = {n: sorted((p, q) for p, q in keys if p + q == n) for n in range(lo, hi + 1)}
    terms = {n: direct_sum([b[pq] for pq in blocks[n]], b.left, b.right) for n in blocks}
    diffs = {}
    for n in range(lo, hi):
        src, tgt = blocks[n], blocks[n + 1]
        tpos = {pq: i for i, pq in enumerate(tgt)}
        mats = {}
        for j, (p, q) in enumerate(src):
            if (p + 1, q) in tpos:
                mats[(tpos[(p + 1, q)], j)] = b.h(p, q)
            if (p, q + 1) in tpos:
                mats[(tpos[(p, q + 1)], j)] = b.v(p, q).scale(-1 if p % 2 else 1)
        diffs[n] = block_matrix(mats, [b[pq].dim for pq in tgt], [b[pq].dim for pq in src], b.field)
    out = Complex(terms, diffs, b.left, b.right, check=False)
    out.meta["blocks"] = blocks
    return out


def map_bicomplex(f):
    """The two-row bicomplex of a chain map (row 0 = source shifted into p-1)."""
    X, Y = f.source, f.target
    terms = {}
    dh, dv = {}, {}
    for n in X.degrees:
        terms[(n, -1)] = X[n]
        dh[(n, -1)] = X.d(n)
        dv[(n, -1)] = f[n]
    for n in Y.degrees:
        terms[(n, 0)] = Y[n]
        dh[(n, 0)] = Y.d(n)
    return Bicomplex(terms, dh, dv)


# Hom and tensor complexes ----------------------------------------------------------

def hom_complex(x, y, side="left"):
    """Total Hom complex Hom_A(X, Y) over the left algebra (or the right one).

    For side='left', X is a complex of (A,S)- and Y of (A,T)-bimodules and the
    result consists of (S,T)-bimodules.  ``meta['blocks'][n]`` lists
    (p, HomBasis, offset) for the summand Hom(X^p, Y^{p+n}).
    """
    if side == "right":
        h = hom_complex(flip_complex(x), flip_complex(y), "left")
        out = flip_complex(h)
        return out
    if x.left != y.left:
        raise ComplexError("Hom complex over mismatched algebras")
    fld = x.field
    S, T = x.right, y.right
    xs, ys = x.support(), y.support()
    if xs is None or ys is None:
        out = zero_complex(S, T)
        out.meta["blocks"] = {}
        return out
    lo, hi = ys[0] - xs[1], ys[1] - xs[0]
    mods = {}
    bases = {}
    for p in range(xs[0], xs[1] + 1):
        for q in range(ys[0], ys[1] + 1):
            if x[p].dim and y[q].dim:
                mods[(p, q)], bases[(p, q)] = hom_module(x[p], y[q])
    blocks = {}
    terms = {}
    for n in range(lo, hi + 1):
        entries = []
        off = 0
        parts = []
        for p in range(xs[0], xs[1] + 1):
            H = bases.get((p, p + n))
            if H is None or H.dim == 0:
                continue
            entries.append((p, H, off))
            parts.append(mods[(p, p + n)])
            off += H.dim
        blocks[n] = entries
        terms[n] = direct_sum(parts, S, T)
    diffs = {}
    for n in range(lo, hi):
        sign = -1 if n % 2 else 1
        src, tgt = blocks[n], blocks[n + 1]
        tpos = {p: i for i, (p, _, _) in enumerate(tgt)}
        mats = {}
        for j, (p, H, _) in enumerate(src):
            els = H.elements()
            if p in tpos:
                i = tpos[p]
                Ht = tgt[i][1]
                dY = y.d(p + n)
                mats[(i, j)] = Ht.coords_many([dY @ F for F in els])
            if p - 1 in tpos:
                i = tpos[p - 1]
                Ht = tgt[i][1]
                dX = x.d(p - 1)
                m = Ht.coords_many([F @ dX for F in els]).scale(-sign)
                mats[(i, j)] = mats[(i, j)] + m if (i, j) in mats else m
        diffs[n] = block_matrix(mats, [H.dim for _, H, _ in tgt], [H.dim for _, H, _ in src], fld)
    out = Complex(terms, diffs, S, T, check=False)
    out.meta["blocks"] = blocks
    out.meta["hom"] = (x, y)
    return out


def hom_element(hc, n, vec_col):
    """Split a degree-n element of a Hom complex into its maps {p: X^p -> Y^{p+n}}."""
    out = {}
    for p, H, off in hc.meta["blocks"].get(n, []):
        coeffs = vec_col.take_rows(range(off, off + H.dim))
        out[p] = H.combine(coeffs)
    return out


def hom_vector(hc, n, maps):
    """Coordinates (column) of a family of maps {p: X^p -> Y^{p+n}} in Hom^n."""
    parts = []
    for p, H, _ in hc.meta["blocks"].get(n, []):
        F = maps.get(p)
        if F is None:
            parts.append(ExactMatrix.zeros(hc.field, H.dim, 1))
        else:
            parts.append(H.coords(F))
    if not parts:
        return ExactMatrix.zeros(hc.field, 0, 1)
    return vstack(parts)


def tensor_complex(x, y):
    """Total tensor complex X ⊗_S Y.

    X is a complex of (R,S)- and Y of (S,T)-bimodules; ``meta['blocks'][n]``
    lists (p, q, TensorData, offset) for the summand X^p ⊗ Y^q.
    """
    if x.right != y.left:
        raise ComplexError("tensor complex over mismatched algebras")
    fld = x.field
    R, T = x.left, y.right
    xs, ys = x.support(), y.support()
    if xs is None or ys is None:
        out = zero_complex(R, T)
        out.meta["blocks"] = {}
        return out
    mods = {}
    data = {}
    for p in range(xs[0], xs[1] + 1):
        for q in range(ys[0], ys[1] + 1):
            if x[p].dim and y[q].dim:
                mods[(p, q)], data[(p, q)] = tensor_module(x[p], y[q])
    lo, hi = xs[0] + ys[0], xs[1] + ys[1]
    blocks = {}
    terms = {}
    for n in range(lo, hi + 1):
        entries = []
        parts = []
        off = 0
        for p in range(xs[0], xs[1] + 1):
            q = n - p
            td = data.get((p, q))
            if td is None or mods[(p, q)].dim == 0:
                continue
            entries.append((p, q, td, off))
            parts.append(mods[(p, q)])
            off += mods[(p, q)].dim
        blocks[n] = entries
        terms[n] = direct_sum(parts, R, T)
    diffs = {}
    for n in range(lo, hi):
        src, tgt = blocks[n], blocks[n + 1]
        tpos = {(p, q): i for i, (p, q, _, _) in enumerate(tgt)}
        mats = {}
        for j, (p, q, td, _) in enumerate(src):
            if (p + 1, q) in tpos:
                i = tpos[(p + 1, q)]
                tt = tgt[i][2]
                K = kronecker(x.d(p), ExactMatrix.identity(fld, y[q].dim))
                mats[(i, j)] = tt.q @ K @ td.s
            if (p, q + 1) in tpos:
                i = tpos[(p, q + 1)]
                tt = tgt[i][2]
                K = kronecker(ExactMatrix.identity(fld, x[p].dim), y.d(q))
                mats[(i, j)] = (tt.q @ K @ td.s).scale(-1 if p % 2 else 1)
        diffs[n] = block_matrix(mats, [t.q.rows for _, _, t, _ in tgt],
                                [t.q.rows for _, _, t, _ in src], fld)
    out = Complex(terms, diffs, R, T, check=False)
    out.meta["blocks"] = blocks
    out.meta["tensor"] = (x, y)
    return out


__all__ = [
    "Complex", "ComplexError", "ChainMap", "Bicomplex", "complex_from_module", "zero_complex",
    "identity_map", "zero_map", "shift", "shift_map", "cone", "homology", "homology_data",
    "induced_on_homology", "acyclic_witness", "is_acyclic", "is_quasi_isomorphism",
    "truncate_above", "truncate_below", "direct_sum_complex", "dual_complex", "dual_map",
    "map_complex", "flip_complex", "forget_complex", "totalize", "map_bicomplex", "hom_complex",
    "hom_element", "hom_vector", "tensor_complex",
]
