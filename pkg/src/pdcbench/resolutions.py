"""Windowed projective resolutions, injective coresolutions and syzygy periodicity.

Resolutions of a bounded complex C (support [a, b]) are built top down.  In
degree n the module

    Z^n = ker(P^{n+1} ⊕ C^n -> P^{n+2} ⊕ C^{n+1}),  (p, c) -> (dp, εp - dc)

is covered minimally by a projective P^n; the two components of the cover
give the differential and the augmentation.  Below the support Z^n is the
usual syzygy module.  A resolution is *complete* once some Z vanishes (or,
when closure is requested, once a syzygy is projective on the requested
sides); then the augmentation is a quasi-isomorphism in every degree.
Otherwise it is one in degrees >= lowest + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .complexes import ChainMap, Complex, complex_from_module, dual_complex
from .linalg import ExactMatrix, block_matrix, is_invertible, kernel_basis
from .modules import (
    Module,
    direct_sum,
    dual,
    find_isomorphism,
    from_carrier,
    is_projective,
    projective_cover,
    submodule,
    zero_module,
)

_SWAP = {"left": "right", "right": "left", "both": "both"}


@dataclass
class PeriodicityCertificate:
    """Witness that syzygy(offset) ≅ syzygy(offset + period) for a minimal resolution."""

    offset: int
    period: int
    witness: ExactMatrix
    source: Module
    target: Module
    side: str
    kind: str = "syzygy"

    def verify(self):
        if not is_invertible(self.witness):
            return False
        gs = self.source.view("left")[2]
        gt = self.target.view("left")[2]
        return all(self.witness @ X == Y @ self.witness for X, Y in zip(gs, gt))

    def to_dict(self):
        return {"kind": self.kind, "offset": self.offset, "period": self.period,
                "side": self.side, "module_dim": self.source.dim}


@dataclass
class Resolution:
    """A (possibly truncated) projective resolution P -> C."""

    complex: Complex
    augmentation: ChainMap
    side: str
    lowest: int
    complete: bool
    support: tuple
    syzygies: dict = dc_field(default_factory=dict)
    closed_by: str = ""

    @property
    def trusted_from(self):
        """Degrees >= this are where the augmentation is a quasi-isomorphism (None: all)."""
        return None if self.complete else self.lowest + 1

    def syzygy_sequence(self):
        """Syzygies Ω^0 = Z^a, Ω^1 = Z^{a-1}, ... as view modules."""
        a = self.support[0]
        out = []
        n = a
        while n in self.syzygies:
            out.append(self.syzygies[n])
            n -= 1
        return out

    def length(self):
        """Number of steps below the support used by a complete resolution."""
        if not self.complete:
            return None
        return self.support[0] - self.lowest


@dataclass
class Coresolution:
    """A (possibly truncated) injective coresolution C -> J."""

    complex: Complex
    coaugmentation: ChainMap
    side: str
    highest: int
    complete: bool
    support: tuple
    dual_resolution: Resolution = None

    @property
    def trusted_to(self):
        return None if self.complete else self.highest - 1

    def cosyzygy_sequence(self):
        return [dual(m) for m in self.dual_resolution.syzygy_sequence()]

    def length(self):
        if not self.complete:
            return None
        return self.highest - self.support[1]


def _as_complex(x):
    return complex_from_module(x) if isinstance(x, Module) else x


def _closure_sides(closure):
    if closure is None:
        return ()
    if closure == "both":
        return ("left", "right")
    return (closure,)


def _terms_projective(c, side, closure):
    sides = _closure_sides(closure) or (side,)
    for n in c.degrees:
        m = c[n]
        if m.dim and not all(is_projective(m, s) for s in sides):
            return False
    return True


def projective_resolution(x, depth, side="left", closure=None, minimal_shortcut=True):
    """Resolve a module or bounded complex by projectives on ``side``.

    ``side`` selects the linearity: 'left' (left algebra), 'right' (right
    algebra) or 'both' (bimodules).  ``closure`` ('left', 'right', 'both')
    allows finishing with a syzygy that is projective on those sides only.
    Terms are returned as modules over the input's algebras (one-sided
    views lose the other action).
    """
    if depth < 1:
        raise ValueError("the resolution window must be at least 1")
    c = _as_complex(x)
    sup = c.support()
    left, right = c.left, c.right
    fld = c.field
    if side == "left":
        rl, rr = left, None
    elif side == "right":
        rl, rr = None, right
    else:
        rl, rr = left, right

    def back(m):
        return from_carrier(m, side, rl or left, rr or right)

    if sup is None:
        z0 = back(zero_module(c[0].view(side)[0]))
        z = Complex({}, left=z0.left, right=z0.right, check=False)
        return Resolution(z, ChainMap(z, c, {}, check=False), side, 0, True, (0, -1))
    a, b = sup
    if minimal_shortcut and _terms_projective(c, side, closure):
        terms = {n: back(c[n].carrier(side)) for n in range(a, b + 1)}
        P = Complex(terms, {n: c.d(n) for n in range(a, b)}, check=False)
        eps = ChainMap(P, c, {n: ExactMatrix.identity(fld, c[n].dim) for n in range(a, b + 1)}, check=False)
        return Resolution(P, eps, side, a, True, sup, {}, "input")

    lam = c[b].view(side)[0]
    cv = {n: c[n].carrier(side) for n in range(a, b + 1)}
    zero = zero_module(lam)
    s = a - depth
    P = {}
    d = {}
    eps = {}
    syz = {}
    complete = False
    closed_by = ""
    lowest = s
    n = b
    while n >= s - 1:
        Pn1 = P.get(n + 1, zero)
        Cn = cv.get(n, zero)
        Pn2_dim = P[n + 2].dim if n + 2 in P else 0
        Cn1_dim = cv[n + 1].dim if n + 1 in cv else 0
        phi = block_matrix(
            {(0, 0): d.get(n + 1, ExactMatrix.zeros(fld, Pn2_dim, Pn1.dim)),
             (1, 0): eps.get(n + 1, ExactMatrix.zeros(fld, Cn1_dim, Pn1.dim)),
             (1, 1): -c.d(n)},
            [Pn2_dim, Cn1_dim], [Pn1.dim, Cn.dim], fld)
        K = kernel_basis(phi)
        Zmod, _ = submodule(direct_sum([Pn1, Cn]), K, check=False)
        if n <= a:
            syz[n] = Zmod
        if Zmod.dim == 0:
            complete = True
            lowest = n + 1
            closed_by = "zero syzygy"
            break
        if n < a and closure and all(is_projective(back(Zmod), t) for t in _closure_sides(closure)):
            P[n] = Zmod
            d[n] = K.row_slice(0, Pn1.dim)
            eps[n] = K.row_slice(Pn1.dim, K.rows)
            complete = True
            lowest = n
            closed_by = f"syzygy projective on {closure}"
            break
        if n == s - 1:
            break
        Pc, pi, _ = projective_cover(Zmod, "left")
        top = K.row_slice(0, Pn1.dim)
        bot = K.row_slice(Pn1.dim, K.rows)
        P[n] = Pc
        d[n] = top @ pi
        eps[n] = bot @ pi
        n -= 1
    lo = min(P) if P else a
    terms = {m: back(P[m]) for m in range(lo, b + 1) if m in P}
    for m in range(lo, b + 1):
        terms.setdefault(m, back(zero))
    Pc = Complex(terms, {m: d[m] for m in range(lo, b) if m in d}, check=False)
    aug = ChainMap(Pc, c, {m: eps[m] for m in eps if m >= a}, check=False)
    return Resolution(Pc, aug, side, lowest, complete, sup, syz, closed_by)


def injective_coresolution(x, depth, side="left", closure=None):
    """Dual of the projective resolution of the dual over the opposite side."""
    c = _as_complex(x)
    dc = dual_complex(c)
    res = projective_resolution(dc, depth, _SWAP[side], None if closure is None else _SWAP[closure])
    J = dual_complex(res.complex)
    eta = ChainMap(c, J, {n: res.augmentation[-n].T for n in c.degrees}, check=False)
    sup = c.support() or (0, -1)
    return Coresolution(J, eta, side, -res.lowest, res.complete, sup, res)


def detect_periodicity(x, max_steps=8, side=None, resolution=None):
    """Search the minimal syzygies for an isomorphic repeat.

    Returns a verified :class:`PeriodicityCertificate` or None (also None when
    the resolution terminates).
    """
    if resolution is None:
        if side is None:
            side = x.side if isinstance(x, Module) and x.side != "vector" else "left"
        resolution = projective_resolution(x, max_steps, side)
    if resolution.complete:
        return None
    seq = resolution.syzygy_sequence()
    for j in range(1, len(seq)):
        for i in range(j):
            if seq[i].dim != seq[j].dim or seq[i].dim == 0:
                continue
            F = find_isomorphism(seq[i], seq[j], "left")
            if F is not None:
                cert = PeriodicityCertificate(i, j - i, F, seq[i], seq[j], resolution.side)
                if cert.verify():
                    return cert
    return None


def detect_coperiodicity(x, max_steps=8, side="left", coresolution=None):
    """Periodicity of cosyzygies, found on the dual resolution."""
    if coresolution is None:
        coresolution = injective_coresolution(x, max_steps, side)
    cert = detect_periodicity(None, resolution=coresolution.dual_resolution)
    if cert is not None:
        cert.kind = "cosyzygy"
    return cert


def syzygy(m, n, side="left"):
    """The n-th minimal syzygy of a module (as a module over its algebras)."""
    if n == 0:
        return m
    res = projective_resolution(m, n, side)
    seq = res.syzygy_sequence()
    alg = m.view(side)[0]
    z = seq[n] if n < len(seq) else zero_module(alg)
    return from_carrier(z, side, m.left, m.right)


def cosyzygy(m, n, side="left"):
    other = _SWAP[side]
    return dual(syzygy(dual(m), n, other))


def coresolution_dimension(m, oracle, bound, side="left"):
    """Least n <= bound whose n-th cosyzygy satisfies ``oracle``; None if beyond the bound."""
    dm = dual(m)
    other = _SWAP[side]
    res = projective_resolution(dm, max(bound, 1), other)
    seq = res.syzygy_sequence()
    for n in range(bound + 1):
        if n < len(seq):
            z = dual(from_carrier(seq[n], other, dm.left, dm.right))
        else:
            z = zero_module(m.left, m.right)
        if oracle(z):
            return n
    return None


def resolution_dimension(m, oracle, bound, side="left"):
    """Least n <= bound whose n-th syzygy satisfies ``oracle``; None if beyond the bound."""
    res = projective_resolution(m, max(bound, 1), side)
    seq = res.syzygy_sequence()
    for n in range(bound + 1):
        if n < len(seq):
            z = from_carrier(seq[n], side, m.left, m.right)
        else:
            z = zero_module(m.left, m.right)
        if oracle(z):
            return n
    return None


def projective_dimension(m, bound=8, side="left"):
    res = projective_resolution(m, bound, side)
    return res.length() if res.complete else None


def injective_dimension(m, bound=8, side="left"):
    res = injective_coresolution(m, bound, side)
    return res.length() if res.complete else None


__all__ = [
    "PeriodicityCertificate", "Resolution", "Coresolution", "projective_resolution",
    "injective_coresolution", "detect_periodicity", "detect_coperiodicity", "syzygy", "cosyzygy",
    "coresolution_dimension", "resolution_dimension", "projective_dimension", "injective_dimension",
]
