"""Module catalogs, seeded random generators and standard candidate complexes."""

from __future__ import annotations

import random

from .algebra import Algebra, kA2
from .complexes import Complex, ChainMap
from .linalg import ExactMatrix, hstack, image_basis, is_invertible, kernel_basis, rank, solve, vec, vstack
from .modules import (
    Module,
    are_isomorphic,
    change_basis,
    direct_sum,
    dual,
    from_carrier,
    hom_space,
    indecomposable_injective,
    indecomposable_projective,
    projective_cover,
    quotient,
    regular_bimodule,
    simple_modules,
    submodule,
)


def _dedupe(mods):
    out = []
    for m in mods:
        if m.dim and not any(o.dim == m.dim and are_isomorphic(o, m) for o in out):
            out.append(m)
    return out


def indecomposables(alg, side="left"):
    """Simples, indecomposable projectives and injectives up to isomorphism.

    For the sample algebras (k, kA2, k[x]/(x^2), upper triangular 2x2) this
    is the complete list of indecomposables.
    """
    r = len(alg.primitive_idempotents())
    mods = list(simple_modules(alg, side))
    mods += [indecomposable_projective(alg, t, side) for t in range(r)]
    mods += [indecomposable_injective(alg, t, side) for t in range(r)]
    return _dedupe(mods)


def projectives(alg, side="left"):
    return _dedupe([indecomposable_projective(alg, t, side) for t in range(len(alg.primitive_idempotents()))])


def injectives(alg, side="left"):
    return _dedupe([indecomposable_injective(alg, t, side) for t in range(len(alg.primitive_idempotents()))])


def multisets_up_to_dim(items, max_dim, dim=lambda m: m.dim):
    """All nonempty multisets of ``items`` with total dimension <= max_dim (as index tuples)."""
    out = []

    def rec(start, acc, total):
        if acc:
            out.append(tuple(acc))
        for i in range(start, len(items)):
            d = dim(items[i])
            if d and total + d <= max_dim:
                rec(i, acc + [i], total + d)

    rec(0, [], 0)
    return out


def modules_up_to_dim(alg, max_dim, side="left"):
    """Every module of dimension 1..max_dim up to isomorphism, as direct sums of indecomposables."""
    ind = indecomposables(alg, side)
    out = []
    for combo in multisets_up_to_dim(ind, max_dim):
        m = direct_sum([ind[i] for i in combo])
        m.name = "+".join(ind[i].name or "?" for i in combo)
        out.append(m)
    return out


def random_invertible(field, n, rng, bound=3):
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        M = ExactMatrix(field, rows, n)
        if is_invertible(M):
            return M


def random_module(alg, rng, max_dim=4, side="left", min_dim=1):
    """A direct sum of random indecomposables in a random basis."""
    ind = indecomposables(alg, side)
    combos = [c for c in multisets_up_to_dim(ind, max_dim) if sum(ind[i].dim for i in c) >= min_dim]
    combo = rng.choice(combos)
    m = direct_sum([ind[i] for i in combo])
    m = change_basis(m, random_invertible(alg.field, m.dim, rng))
    m.name = "~(" + "+".join(ind[i].name or "?" for i in combo) + ")"
    return m


def random_hom(m, n, rng, side="left", bound=2):
    H = hom_space(m, n, side)
    if H.dim == 0:
        return ExactMatrix.zeros(m.field, n.dim, m.dim)
    return H.combine([rng.randint(-bound, bound) for _ in range(H.dim)])


def random_complex_on(terms, rng, side="left", lo=0):
    """Random differentials with d∘d = 0 between the given modules (degrees lo, lo+1, ...)."""
    f = terms[0].field
    diffs = {}
    prev = None
    for i in range(len(terms) - 1):
        X, Y = terms[i], terms[i + 1]
        H = hom_space(X, Y, side)
        if H.dim == 0:
            D = ExactMatrix.zeros(f, Y.dim, X.dim)
        elif prev is None or prev.cols == 0 or X.dim == 0:
            D = H.combine([rng.randint(-2, 2) for _ in range(H.dim)])
        else:
            # coefficients c with (Σ c_i H_i) ∘ prev = 0
            cons = hstack([vec(F @ prev) for F in H.elements()])
            K = kernel_basis(cons)
            if K.cols == 0:
                D = ExactMatrix.zeros(f, Y.dim, X.dim)
            else:
                coeffs = K @ ExactMatrix.column(f, [rng.randint(-2, 2) for _ in range(K.cols)])
                D = H.combine(coeffs)
        diffs[lo + i] = D
        prev = D
    return Complex({lo + i: t for i, t in enumerate(terms)}, diffs, check=True)


def random_complex(alg, rng, max_term_dim=3, max_length=3, side="left"):
    """A random bounded complex of modules with random module-map differentials."""
    length = rng.randint(1, max_length)
    lo = rng.randint(-1, 1)
    terms = [random_module(alg, rng, max_term_dim, side) for _ in range(length)]
    return random_complex_on(terms, rng, side, lo)


def random_complex_from(pool, rng, max_length=3, max_summands=2, side="left"):
    """Random complex whose terms are direct sums of modules from ``pool``."""
    length = rng.randint(1, max_length)
    lo = rng.randint(-1, 1)
    terms = []
    for _ in range(length):
        k = rng.randint(1, max_summands)
        terms.append(direct_sum([rng.choice(pool) for _ in range(k)]))
    return random_complex_on(terms, rng, side, lo)


class ShortExactSequence:
    """0 -> X -> Y -> Z -> 0 with explicit inclusion i and projection p."""

    def __init__(self, x, y, z, i, p):
        self.x, self.y, self.z, self.i, self.p = x, y, z, i, p

    def verify(self):
        f = self.y.field
        if not (self.p @ self.i).is_zero():
            return False
        rank_ok = kernel_basis(self.i).cols == 0 and kernel_basis(self.p).cols == self.x.dim
        surj = solve(self.p, ExactMatrix.identity(f, self.z.dim)) is not None if self.z.dim else True
        return rank_ok and surj


def random_ses(alg, rng, max_dim=4, side="left"):
    """Split off the submodule generated by a random vector of a random module."""
    y = random_module(alg, rng, max_dim, side)
    f = alg.field
    v = ExactMatrix.column(f, [rng.randint(-2, 2) for _ in range(y.dim)])
    acts = y.view(side)[1]
    span = hstack([X @ v for X in acts])
    W = image_basis(span)
    x, i = submodule(y, W, check=False)
    z, q, _ = quotient(y, W)
    return ShortExactSequence(x, y, z, i, q)


def extension_modules(z, x, side="left", limit=None):
    """Middle terms of extensions 0 -> X -> Y -> Z -> 0 for a basis of cocycles Ω(Z) -> X."""
    P, pi, _ = projective_cover(z, side)
    P = from_carrier(P, side, z.left, z.right)
    K = kernel_basis(pi)
    omega, inc = submodule(P, K, check=False)
    H = hom_space(omega, x, side)
    out = []
    for F in H.elements()[:limit]:
        # pushout: (X ⊕ P) / {(F w, -inc w)}
        rel = vstack([F, inc.scale(-1)])
        y, _, _ = quotient(direct_sum([x, P]), rel)
        out.append(y)
    if not out:
        out.append(direct_sum([x, z]))
    return out


# candidates -------------------------------------------------------------------------

def regular_complex(alg):
    return Complex({0: regular_bimodule(alg)}, check=False)


def dual_regular_complex(alg):
    """D(A) as an (A, A)-bimodule in degree 0."""
    m = dual(regular_bimodule(alg))
    m.name = "D(A)"
    return Complex({0: m}, check=False)


def simple_bimodule_complex(alg):
    """The first simple with both actions through its character (A-A-bimodule)."""
    s = simple_modules(alg)[0]
    m = Module(alg, alg, s.lact, s.lact, name="S")
    return Complex({0: m}, check=False)


def chain_endomorphisms(t, side="left"):
    """Basis of the strict chain endomorphisms of t, as dicts {degree: matrix}.

    Also returns the dimension of the space of null-homotopic endomorphisms.
    """
    f = t.field
    degs = [n for n in t.degrees if t[n].dim]
    bases = {n: hom_space(t[n], t[n], side) for n in degs}
    offs = {}
    total = 0
    for n in degs:
        offs[n] = total
        total += bases[n].dim
    rows = []
    for n in degs:
        if n + 1 not in bases:
            continue
        d = t.d(n)
        if d.is_zero():
            continue
        # d F_n - F_{n+1} d = 0, vectorised
        blocks = {}
        blocks[n] = hstack([vec(d @ F) for F in bases[n].elements()])
        blocks[n + 1] = hstack([vec(F @ d) for F in bases[n + 1].elements()]).scale(-1)
        nrow = d.rows * d.cols
        cols = []
        for m in degs:
            cols.append(blocks.get(m, ExactMatrix.zeros(f, nrow, bases[m].dim)))
        rows.append(hstack(cols))
    if rows:
        K = kernel_basis(vstack(rows))
    else:
        K = ExactMatrix.identity(f, total)
    maps = []
    for c in range(K.cols):
        col = K.take_cols([c])
        maps.append({n: bases[n].combine(col.take_rows(range(offs[n], offs[n] + bases[n].dim)))
                     for n in degs})
    # null-homotopic maps d h + h d
    hvecs = []
    for n in degs:
        if n - 1 not in bases:
            continue
        Hn = hom_space(t[n], t[n - 1], side)
        for h in Hn.elements():
            comp = {}
            comp[n] = t.d(n - 1) @ h
            comp[n - 1] = h @ t.d(n - 1)
            hvecs.append(vstack([vec(comp.get(m, ExactMatrix.zeros(f, t[m].dim, t[m].dim))) for m in degs]))
    null_dim = 0
    if hvecs:
        null_dim = rank(hstack(hvecs))
    return maps, null_dim


def _stack_map(g, degs, f, dims):
    return vstack([vec(g.get(n, ExactMatrix.zeros(f, dims[n], dims[n]))) for n in degs])


def endomorphism_algebra(t, side="left"):
    """The algebra of chain endomorphisms of t (product = composition, e_i e_j = e_i ∘ e_j).

    Raises ValueError when nonzero null-homotopic endomorphisms exist, since
    then the strict algebra differs from the homotopy one.
    """
    maps, null_dim = chain_endomorphisms(t, side)
    if null_dim:
        raise ValueError("the complex has nonzero null-homotopic endomorphisms")
    f = t.field
    degs = [n for n in t.degrees if t[n].dim]
    dims = {n: t[n].dim for n in degs}
    basis = hstack([_stack_map(g, degs, f, dims) for g in maps])
    structure = []
    for gi in maps:
        row = []
        for gj in maps:
            prod = {n: gi[n] @ gj[n] for n in degs}
            c = solve(basis, _stack_map(prod, degs, f, dims))
            row.append(list(c.entries()))
        structure.append(row)
    ident = {n: ExactMatrix.identity(f, dims[n]) for n in degs}
    unit = list(solve(basis, _stack_map(ident, degs, f, dims)).entries())
    alg = Algebra(f, structure, unit, labels=[f"g{i}" for i in range(len(maps))], name="End(T)")
    return alg, maps


def bimodule_from_endomorphisms(t, alg, maps):
    """t as a complex of (A, B)-bimodules with B = alg^op acting through the chain maps."""
    B = alg.opposite()
    terms = {}
    for n in t.degrees:
        m = t[n]
        ract = [g.get(n, ExactMatrix.zeros(t.field, m.dim, m.dim)) for g in maps]
        terms[n] = Module(m.left, B, m.lact, ract, name=m.name)
    return Complex(terms, t.diffs, t.left, B, name=t.name)


def apr_tilting_complex(alg=None):
    """P1 ⊕ (P2 -> P1) over kA2 in degrees -1, 0 (the APR tilt at the simple projective)."""
    A = alg or kA2()
    P1 = indecomposable_projective(A, 0)
    P2 = indecomposable_projective(A, 1)
    iota = hom_space(P2, P1).element(0)
    f = A.field
    t0 = direct_sum([P1, P1])
    d = vstack([ExactMatrix.zeros(f, P1.dim, P2.dim), iota])
    return Complex({-1: P2, 0: t0}, {-1: d}, name="T")


def tilting_bimodule_complex(alg=None):
    """The APR tilting complex with B = End(T)^op acting on the right."""
    t = apr_tilting_complex(alg)
    end, maps = endomorphism_algebra(t)
    return bimodule_from_endomorphisms(t, end, maps), end, maps


def random_chain_map(x, y, rng, side="left"):
    """A random chain map x -> y (kernel of the commutation constraints)."""
    f = x.field
    degs = [n for n in x.degrees if x[n].dim and y[n].dim]
    bases = {n: hom_space(x[n], y[n], side) for n in degs}
    offs, total = {}, 0
    for n in degs:
        offs[n] = total
        total += bases[n].dim
    if total == 0:
        return ChainMap(x, y, {}, check=False)
    rows = []
    for n in range(min(x.lo, y.lo) - 1, max(x.hi, y.hi) + 1):
        nrow = y[n + 1].dim * x[n].dim
        if nrow == 0:
            continue
        cols = []
        for m in degs:
            if m == n:
                cols.append(hstack([vec(y.d(n) @ F) for F in bases[m].elements()], rows=nrow, field=f))
            elif m == n + 1:
                cols.append(hstack([vec(F @ x.d(n)) for F in bases[m].elements()], rows=nrow, field=f).scale(-1))
            else:
                cols.append(ExactMatrix.zeros(f, nrow, bases[m].dim))
        rows.append(hstack(cols))
    K = kernel_basis(vstack(rows)) if rows else ExactMatrix.identity(f, total)
    coeffs = K @ ExactMatrix.column(f, [rng.randint(-2, 2) for _ in range(K.cols)]) if K.cols else None
    comps = {}
    for n in degs:
        if coeffs is None:
            continue
        comps[n] = bases[n].combine(coeffs.take_rows(range(offs[n], offs[n] + bases[n].dim)))
    return ChainMap(x, y, comps, check=True)


def seeded(seed):
    return random.Random(seed)


__all__ = [
    "indecomposables", "projectives", "injectives", "multisets_up_to_dim", "modules_up_to_dim",
    "random_invertible", "random_module", "random_hom", "random_complex", "random_complex_on",
    "random_complex_from", "ShortExactSequence", "random_ses", "extension_modules",
    "regular_complex", "dual_regular_complex", "simple_bimodule_complex", "chain_endomorphisms",
    "endomorphism_algebra", "bimodule_from_endomorphisms", "apr_tilting_complex",
    "tilting_bimodule_complex", "random_chain_map", "seeded",
]
