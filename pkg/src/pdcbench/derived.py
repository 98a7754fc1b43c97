"""Derived Hom and tensor on bounded complexes, Ext/Tor, and the adjunction maps.

Every derived result records the degree interval in which its homology is
guaranteed to agree with the true derived functor, given the resolution
window.  Asking for a degree outside that interval raises
:class:`WindowExceeded`.

Conventions: L is a complex of (A, B)-bimodules, RHom_A(L, -) lands in
left B-modules and L ⊗_B - in left A-modules.  Truncated resolutions are
brutal truncations of the full minimal resolution, which is what the trust
bounds below rely on.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

from .complexes import (
    ChainMap,
    Complex,
    complex_from_module,
    hom_complex,
    hom_element,
    hom_vector,
    induced_on_homology,
    tensor_complex,
    truncate_above,
    truncate_below,
)
from .linalg import ExactMatrix, hstack, is_invertible, vstack
from .resolutions import injective_coresolution, projective_resolution


class WindowExceeded(Exception):
    """A degree outside the range certified by the resolution window was requested."""

    def __init__(self, degree, trusted):
        self.degree = degree
        self.trusted = trusted
        super().__init__(f"degree {degree} lies outside the trusted range {format_range(trusted)}")


class AlgebraMismatch(ValueError):
    pass


def format_range(r):
    lo, hi = r
    return f"[{'-inf' if lo is None else lo}, {'+inf' if hi is None else hi}]"


_COMPLEX_OF = weakref.WeakKeyDictionary()
_RESOLUTIONS = weakref.WeakKeyDictionary()


def as_complex(x):
    """Modules become complexes concentrated in degree 0 (memoised so caches stick)."""
    if isinstance(x, Complex):
        return x
    hit = _COMPLEX_OF.get(x)
    if hit is None:
        hit = complex_from_module(x)
        _COMPLEX_OF[x] = hit
    return hit


def cached_resolution(c, depth, side, closure=None):
    """Projective resolution of c, reused across calls (a deeper one serves shallower requests)."""
    c = as_complex(c)
    store = _RESOLUTIONS.setdefault(c, {})
    best = None
    for (sd, cl, dp), res in store.items():
        if sd == side and cl == closure and (dp >= depth or res.complete):
            if best is None or dp < best[0]:
                best = (dp, res)
    if best is not None:
        return best[1]
    res = projective_resolution(c, depth, side, closure)
    store[(side, closure, depth)] = res
    return res


def _is_ground(alg):
    return alg.dim == 1


def _two_sided(c):
    """(side, closure) for resolving a bimodule complex while keeping both actions."""
    if _is_ground(c.right):
        return "left", None
    if _is_ground(c.left):
        return "right", None
    return "both", "both"


@dataclass
class DerivedResult:
    """A complex computing a derived functor, with its trusted degree range."""

    complex: Complex
    trusted: tuple
    strategy: str
    replaced: str
    resolution: object = None

    def is_trusted(self, n):
        lo, hi = self.trusted
        return (lo is None or n >= lo) and (hi is None or n <= hi)

    def homology_dim(self, n):
        if not self.is_trusted(n):
            raise WindowExceeded(n, self.trusted)
        return self.complex.homology_dim(n)

    def trusted_degrees(self):
        """Degrees of the computed complex that are trusted (outside them homology may be spurious)."""
        c = self.complex
        return [n for n in range(c.lo - 1, c.hi + 2) if self.is_trusted(n)]

    def homology_dims(self):
        return {n: d for n in self.trusted_degrees() if (d := self.complex.homology_dim(n))}

    def fully_trusted(self):
        return self.trusted == (None, None)


def _lo(c):
    s = c.support()
    return None if s is None else s[0]


def _hi(c):
    s = c.support()
    return None if s is None else s[1]


def rhom(l, m, window=8, strategy="resolve-first", keep_structure=True):
    """RHom_A(L, M) as a complex of left B-modules (or vector spaces).

    strategy 'resolve-first' replaces L by a projective resolution on the A
    side, 'coresolve-second' replaces M by an injective coresolution.
    """
    L, M = as_complex(l), as_complex(m)
    if L.left != M.left:
        raise AlgebraMismatch("RHom needs complexes over the same left algebra")
    if strategy == "resolve-first":
        if keep_structure:
            side, closure = _two_sided(L)
            closure = "left" if closure else None
        else:
            side, closure = "left", None
        res = cached_resolution(L, window, side, closure)
        H = hom_complex(res.complex, M)
        mlo = _lo(M)
        hi = None if res.complete or mlo is None else mlo - res.lowest - 1
        return DerivedResult(H, (None, hi), strategy, "first", res)
    if strategy == "coresolve-second":
        co = injective_coresolution(M, window, "left")
        H = hom_complex(L, co.complex)
        lhi = _hi(L)
        hi = None if co.complete or lhi is None else co.highest - lhi - 1
        return DerivedResult(H, (None, hi), strategy, "second", co)
    raise ValueError(f"unknown strategy {strategy!r}")


def derived_tensor(l, n, window=8, strategy="resolve-first", keep_structure=True):
    """L ⊗^L_B N as a complex of left A-modules (or vector spaces)."""
    L, N = as_complex(l), as_complex(n)
    if L.right != N.left:
        raise AlgebraMismatch("derived tensor needs L's right algebra to act on N")
    if strategy == "resolve-first":
        if keep_structure:
            side, closure = _two_sided(L)
            closure = "right" if closure else None
        else:
            side, closure = "right", None
        res = cached_resolution(L, window, side, closure)
        T = tensor_complex(res.complex, N)
        nhi = _hi(N)
        lo = None if res.complete or nhi is None else res.lowest + nhi + 1
        return DerivedResult(T, (lo, None), strategy, "first", res)
    if strategy == "resolve-second":
        res = cached_resolution(N, window, "left")
        T = tensor_complex(L, res.complex)
        lhi = _hi(L)
        lo = None if res.complete or lhi is None else res.lowest + lhi + 1
        return DerivedResult(T, (lo, None), strategy, "second", res)
    raise ValueError(f"unknown strategy {strategy!r}")


def ext(l, m, n, window=8, strategy="resolve-first"):
    """dim Ext^n_A(L, M)."""
    return rhom(l, m, window, strategy, keep_structure=False).homology_dim(n)


def tor(l, n, k, window=8, strategy="resolve-first"):
    """dim Tor^B_k(L, N) = dim H^{-k}(L ⊗^L N)."""
    return derived_tensor(l, n, window, strategy, keep_structure=False).homology_dim(-k)


# homology comparison ----------------------------------------------------------------

def homology_iso_witness(f, lo=None, hi=None):
    """First degree in [lo, hi] where f is not an isomorphism on homology, or None."""
    X, Y = f.source, f.target
    degs = [n for n in range(min(X.lo, Y.lo), max(X.hi, Y.hi) + 1)
            if (lo is None or n >= lo) and (hi is None or n <= hi)]
    for n in degs:
        hx, hy = X.homology_dim(n), Y.homology_dim(n)
        if hx != hy:
            return n
        if hx and not is_invertible(induced_on_homology(f, n)):
            return n
    return None


# adjunction maps ---------------------------------------------------------------------

def _evaluation(P, G, iota, H, E):
    """x ⊗ g -> (-1)^{|x||g|} ι(g)(x) from P ⊗_B G to E, where ι: G -> Hom_A(P, E)."""
    T = tensor_complex(P, G)
    fld = P.field
    comps = {}
    for n, entries in T.meta["blocks"].items():
        if E[n].dim == 0 or not entries:
            continue
        parts = []
        for p, q, td, _ in entries:
            dx, dy = td.dx, td.dy
            cols = [None] * (dx * dy)
            zero = [0] * E[n].dim
            for b in range(dy):
                g = iota[q].take_cols([b])
                F = hom_element(H, q, g).get(p)
                for a in range(dx):
                    cols[a * dy + b] = F.take_cols([a]).raw_entries() if F is not None else zero
            ev = ExactMatrix.from_columns(fld, E[n].dim, cols) if cols else ExactMatrix.zeros(fld, E[n].dim, 0)
            blk = ev @ td.s
            parts.append(blk.scale(-1) if (p * q) % 2 else blk)
        comps[n] = hstack(parts, rows=E[n].dim, field=fld)
    return T, ChainMap(T, E, comps, check=False)


def _coevaluation(P, F, U, pi, K):
    """y -> (x -> (-1)^{|x||y|} π(x ⊗ y)) from F to K = Hom_A(P, U), U a quotient of P ⊗_B F."""
    T = pi.source
    fld = P.field
    blocks = {}
    for n, entries in T.meta["blocks"].items():
        for p, q, td, off in entries:
            blocks[(p, q)] = (n, td, off)
    comps = {}
    for q in F.degrees:
        if F[q].dim == 0 or K[q].dim == 0:
            continue
        cols = []
        for b in range(F[q].dim):
            maps = {}
            for p in P.degrees:
                hit = blocks.get((p, q))
                if hit is None or P[p].dim == 0:
                    continue
                n, td, off = hit
                dy = td.dy
                sel = td.q.take_cols([a * dy + b for a in range(td.dx)])
                dim_t = T[n].dim
                top = ExactMatrix.zeros(fld, off, td.dx)
                bottom = ExactMatrix.zeros(fld, dim_t - off - sel.rows, td.dx)
                emb = vstack([top, sel, bottom], cols=td.dx, field=fld)
                img = pi[n] @ emb
                maps[p] = img.scale(-1) if (p * q) % 2 else img
            cols.append(hom_vector(K, q, maps))
        comps[q] = hstack(cols)
    return ChainMap(F, K, comps, check=False)


@dataclass
class AdjunctionMaps:
    """Explicit unit and/or counit together with the degrees in which they are trusted."""

    counit: ChainMap = None
    unit: ChainMap = None
    counit_trusted: tuple = (None, None)
    unit_trusted: tuple = (None, None)
    resolution: object = None
    truncation: int = None

    def counit_witness(self):
        lo, hi = self.counit_trusted
        return homology_iso_witness(self.counit, lo, hi)

    def unit_witness(self):
        lo, hi = self.unit_trusted
        return homology_iso_witness(self.unit, lo, hi)


def counit_map(l, e, l1, window=8):
    """L ⊗_B τ≤t Hom_A(P, E) -> E with P -> L two-sided projective and t = sup(E) + l1."""
    L, E = as_complex(l), as_complex(e)
    if L.left != E.left:
        raise AlgebraMismatch("the counit needs E over L's left algebra")
    side, closure = _two_sided(L)
    sup = E.support()
    if sup is None:
        res = cached_resolution(L, window, side, closure)
        z = Complex({}, left=E.left, right=E.right, check=False)
        return AdjunctionMaps(counit=ChainMap(z, E, {}, check=False), resolution=res)
    elo, ehi = sup
    t = ehi + l1
    llo = _lo(L) if _lo(L) is not None else 0
    depth = max(window, llo - elo + t + 2)
    res = cached_resolution(L, depth, side, closure)
    P = res.complex
    H = hom_complex(P, E)
    G, iota = truncate_above(H, t)
    _, ev = _evaluation(P, G, iota, H, E)
    lo = None if res.complete else res.lowest + t + 1
    return AdjunctionMaps(counit=ev, counit_trusted=(lo, None), resolution=res, truncation=t)


def unit_map(l, f, l1, window=8):
    """F -> Hom_A(P, τ≥u (P ⊗_B F)) with u = inf(F) - l1."""
    L, F = as_complex(l), as_complex(f)
    if L.right != F.left:
        raise AlgebraMismatch("the unit needs F over L's right algebra")
    side, closure = _two_sided(L)
    sup = F.support()
    if sup is None:
        res = cached_resolution(L, window, side, closure)
        z = Complex({}, left=F.left, right=F.right, check=False)
        return AdjunctionMaps(unit=ChainMap(F, z, {}, check=False), resolution=res)
    flo, fhi = sup
    u = flo - l1
    llo = _lo(L) if _lo(L) is not None else 0
    depth = max(window, llo - u + fhi + 2)
    res = cached_resolution(L, depth, side, closure)
    P = res.complex
    T = tensor_complex(P, F)
    U, pi = truncate_below(T, u)
    pi = ChainMap(T, pi.target, {n: pi[n] for n in pi.degrees}, check=False)
    K = hom_complex(P, U)
    eta = _coevaluation(P, F, U, pi, K)
    hi = None if res.complete else u - res.lowest - 1
    return AdjunctionMaps(unit=eta, unit_trusted=(None, hi), resolution=res, truncation=u)


def adjunction_maps(l, x, window=8, l1=None):
    """Counit (x over A), unit (x over B) or both when A = B."""
    L = as_complex(l)
    X = as_complex(x)
    if l1 is None:
        lo = _lo(L)
        l1 = 0 if lo is None else max(0, -lo)
    out = AdjunctionMaps()
    if X.left == L.left:
        c = counit_map(L, X, l1, window)
        out.counit, out.counit_trusted, out.resolution = c.counit, c.counit_trusted, c.resolution
    if X.left == L.right:
        u = unit_map(L, X, l1, window)
        out.unit, out.unit_trusted, out.resolution = u.unit, u.unit_trusted, u.resolution
    if out.counit is None and out.unit is None:
        raise AlgebraMismatch("x is neither over L's left nor over its right algebra")
    return out


# dg adjunction --------------------------------------------------------------------------

@dataclass
class DGAdjunctionData:
    lhs: Complex
    rhs: Complex
    maps: dict
    dims_equal: bool
    bijective: bool
    commutes: bool

    @property
    def ok(self):
        return self.dims_equal and self.bijective and self.commutes


def dg_adjunction_data(l, p, j):
    """Hom_A(L ⊗_B P, J) -> Hom_B(P, Hom_A(L, J)), φ -> (y -> (x -> (-1)^{|x||y|} φ(x⊗y)))."""
    L, P, J = as_complex(l), as_complex(p), as_complex(j)
    LP = tensor_complex(L, P)
    lhs = hom_complex(LP, J)
    HLJ = hom_complex(L, J)
    rhs = hom_complex(P, HLJ)
    fld = L.field
    degs = range(min(lhs.lo, rhs.lo), max(lhs.hi, rhs.hi) + 1)
    maps = {}
    for n in degs:
        cols = []
        for col in range(lhs[n].dim):
            phi = hom_element(lhs, n, ExactMatrix.unit_column(fld, lhs[n].dim, col))
            out = {}
            for t, F in phi.items():
                for a, b, td, off in LP.meta["blocks"].get(t, []):
                    if P[b].dim == 0:
                        continue
                    dmod = td.q.rows
                    Fab = F.take_cols(range(off, off + dmod))
                    dy = td.dy
                    ys = []
                    for c in range(dy):
                        g = Fab @ td.q.take_cols([x * dy + c for x in range(td.dx)])
                        if (a * b) % 2:
                            g = g.scale(-1)
                        ys.append(hom_vector(HLJ, b + n, {a: g}))
                    M = hstack(ys)
                    prev = out.get(b)
                    out[b] = M if prev is None else prev + M
            cols.append(hom_vector(rhs, n, out))
        maps[n] = hstack(cols, rows=rhs[n].dim, field=fld)
    dims_equal = all(lhs[n].dim == rhs[n].dim for n in degs)
    bijective = dims_equal and all(is_invertible(maps[n]) for n in degs)
    commutes = all(rhs.d(n) @ maps[n] == maps[n + 1] @ lhs.d(n) for n in degs if n + 1 in maps)
    return DGAdjunctionData(lhs, rhs, maps, dims_equal, bijective, commutes)


def dg_adjunction_check(l, p, j):
    """Exact verdict: the adjunction bijection is an isomorphism of Hom complexes."""
    return dg_adjunction_data(l, p, j).ok


__all__ = [
    "WindowExceeded", "AlgebraMismatch", "DerivedResult", "AdjunctionMaps", "DGAdjunctionData",
    "as_complex", "cached_resolution", "rhom", "derived_tensor", "ext", "tor", "counit_map",
    "unit_map", "adjunction_maps", "homology_iso_witness", "dg_adjunction_data",
    "dg_adjunction_check", "format_range",
]
