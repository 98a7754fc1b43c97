"""Finite-dimensional modules and bimodules given by action matrices.

Every module is stored as a bimodule over (left algebra, right algebra); a
one-sided module uses the ground field on the unused side.  Right actions
follow the convention ``ract[j] @ ract[i] == sum_k c[i][j][k] ract[k]``, so
``ract[j]`` is the matrix of v -> v e_j.

Algorithms that only care about one kind of linearity work with a *view*:
the left module over A (``"left"``), the left module over B^op
(``"right"``) or the left module over A ⊗ B^op (``"both"``).
"""

from __future__ import annotations

import random

from .algebra import ground_algebra, enveloping
from .linalg import (
    ExactMatrix,
    block_diag,
    hstack,
    image_basis,
    is_invertible,
    kernel_basis,
    kronecker,
    left_inverse,
    quotient_data,
    rref,
    vec,
    unvec,
    vstack,
)

SIDES = ("left", "right", "both")


class ModuleError(ValueError):
    """Raised for action matrices that do not define a module."""


class Module:
    """A finite-dimensional (left, right)-bimodule."""

    def __init__(self, left, right, lact, ract, name=None, check=True):
        lact = tuple(lact)
        ract = tuple(ract)
        if len(lact) != left.dim or len(ract) != right.dim:
            raise ModuleError("need one action matrix per basis element")
        dims = {m.rows for m in lact + ract} | {m.cols for m in lact + ract}
        if len(dims) != 1:
            raise ModuleError("action matrices must be square of a common size")
        self.left = left
        self.right = right
        self.lact = lact
        self.ract = ract
        self.dim = lact[0].rows
        self.field = left.field
        self.name = name
        self._views = {}
        if check:
            self.verify()

    @classmethod
    def _raw(cls, left, right, lact, ract, name=None):
        return cls(left, right, lact, ract, name=name, check=False)

    def __repr__(self):
        return f"Module({self.name or '?'}, dim={self.dim}, {self.left.name}-{self.right.name})"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Module):
            return NotImplemented
        return (self.dim == other.dim and self.left == other.left and self.right == other.right
                and self.lact == other.lact and self.ract == other.ract)

    __hash__ = object.__hash__

    @property
    def side(self):
        """'left', 'right', 'both' or 'vector' (both algebras trivial)."""
        lg, rg = self.left.dim == 1, self.right.dim == 1
        if lg and rg:
            return "vector"
        if rg:
            return "left"
        if lg:
            return "right"
        return "both"

    def verify(self):
        f = self.field
        n = self.dim
        ident = ExactMatrix.identity(f, n)
        for alg, acts, rightside in ((self.left, self.lact, False), (self.right, self.ract, True)):
            if _combine(acts, alg.unit, f, n) != ident:
                raise ModuleError("the unit does not act as the identity")
            c = alg.structure_constants()
            for i in range(alg.dim):
                for j in range(alg.dim):
                    lhs = acts[j] @ acts[i] if rightside else acts[i] @ acts[j]
                    if lhs != _combine(acts, c[i][j], f, n):
                        kind = "right" if rightside else "left"
                        raise ModuleError(f"{kind} action fails on the pair ({i},{j})")
        if self.left.dim > 1 and self.right.dim > 1:
            for i, L in enumerate(self.lact):
                for j, R in enumerate(self.ract):
                    if L @ R != R @ L:
                        raise ModuleError(f"left and right actions do not commute ({i},{j})")

    def act_left(self, x):
        return _combine(self.lact, x, self.field, self.dim)

    def act_right(self, x):
        return _combine(self.ract, x, self.field, self.dim)

    def view(self, side):
        """(algebra, action matrices, generator action matrices) for a one-sided view."""
        hit = self._views.get(side)
        if hit is not None:
            return hit
        if side == "left":
            alg = self.left
            acts = self.lact
            gens = [self.act_left(g) for g in alg.generators]
        elif side == "right":
            alg = self.right.opposite()
            acts = self.ract
            gens = [self.act_right(g) for g in self.right.generators]
        elif side == "both":
            alg = enveloping(self.left, self.right)
            acts = tuple(L @ R for L in self.lact for R in self.ract)
            gens = ([self.act_left(g) for g in self.left.generators if self.left.dim > 1]
                    + [self.act_right(g) for g in self.right.generators if self.right.dim > 1])
            if not gens:
                gens = [ExactMatrix.identity(self.field, self.dim)]
        else:
            raise ValueError(f"unknown side {side!r}")
        hit = (alg, tuple(acts), tuple(gens))
        self._views[side] = hit
        return hit

    def carrier(self, side="both"):
        """The view as a left module over the corresponding algebra."""
        alg, acts, _ = self.view(side)
        if side == "left" and self.right.dim == 1:
            return self
        g = ground_algebra(self.field)
        out = Module._raw(alg, g, acts, [ExactMatrix.identity(self.field, self.dim)], self.name)
        out._views["left"] = (alg, acts, self.view(side)[2])
        return out


def _combine(acts, x, field, n):
    out = None
    for xi, m in zip(x, acts):
        if xi != 0:
            out = m.scale(xi) if out is None else out + m.scale(xi)
    return out if out is not None else ExactMatrix.zeros(field, n, n)


def from_carrier(n_mod, side, left, right):
    """Inverse of :meth:`Module.carrier`: rebuild a (left, right)-module."""
    f = left.field
    d = n_mod.dim
    I = ExactMatrix.identity(f, d)
    if side == "left":
        return Module._raw(left, ground_algebra(f), n_mod.lact, [I])
    if side == "right":
        return Module._raw(ground_algebra(f), right, [I], n_mod.lact)
    lam = n_mod.lact
    nb = right.dim
    lact = [_combine(lam, [x * y for x in a for y in right.unit], f, d)
            for a in (left.basis_vector(i) for i in range(left.dim))]
    ract = [_combine(lam, [x * y for x in left.unit for y in b], f, d)
            for b in (right.basis_vector(j) for j in range(nb))]
    return Module._raw(left, right, lact, ract)


# constructors ----------------------------------------------------------------

def left_module(alg, actions, name=None, check=True):
    f = alg.field
    d = actions[0].rows if actions else 0
    return Module(alg, ground_algebra(f), actions, [ExactMatrix.identity(f, d)], name, check)


def right_module(alg, actions, name=None, check=True):
    f = alg.field
    d = actions[0].rows if actions else 0
    return Module(ground_algebra(f), alg, [ExactMatrix.identity(f, d)], actions, name, check)


def zero_module(left, right=None):
    right = right or ground_algebra(left.field)
    z = ExactMatrix.zeros(left.field, 0, 0)
    return Module._raw(left, right, [z] * left.dim, [z] * right.dim, "0")


def vector_space(field, d):
    g = ground_algebra(field)
    I = ExactMatrix.identity(field, d)
    return Module._raw(g, g, [I], [I], f"k^{d}")


def regular_module(alg):
    """A as a left module over itself."""
    return left_module(alg, alg.lmul, name=f"{alg.name}", check=False)


def regular_right_module(alg):
    return right_module(alg, alg.rmul, name=f"{alg.name}_{alg.name}", check=False)


def regular_bimodule(alg):
    return Module._raw(alg, alg, alg.lmul, alg.rmul, f"{alg.name}")


def free_module(alg, r):
    return direct_sum([regular_module(alg)] * r) if r else zero_module(alg)


def submodule(m, k, check=True):
    """Submodule spanned by the independent columns of ``k``; returns (module, inclusion)."""
    if k.cols == 0:
        return zero_module(m.left, m.right), k
    kinv = left_inverse(k)
    lact = []
    ract = []
    for acts, out in ((m.lact, lact), (m.ract, ract)):
        for X in acts:
            XK = X @ k
            Y = kinv @ XK
            if check and k @ Y != XK:
                raise ModuleError("subspace is not invariant")
            out.append(Y)
    return Module._raw(m.left, m.right, lact, ract), k


def quotient(m, w):
    """Quotient by the submodule spanned by the columns of ``w``; returns (module, projection, section)."""
    q, s = quotient_data(w, m.dim, m.field)
    lact = [q @ X @ s for X in m.lact]
    ract = [q @ X @ s for X in m.ract]
    return Module._raw(m.left, m.right, lact, ract), q, s


def direct_sum(mods, left=None, right=None):
    mods = list(mods)
    if not mods:
        return zero_module(left, right)
    a, b = mods[0].left, mods[0].right
    for m in mods[1:]:
        if m.left != a or m.right != b:
            raise ModuleError("direct sum of modules over different algebras")
    f = a.field
    lact = [block_diag([m.lact[i] for m in mods], f) for i in range(a.dim)]
    ract = [block_diag([m.ract[j] for m in mods], f) for j in range(b.dim)]
    return Module._raw(a, b, lact, ract)


def dual(m):
    """k-linear dual Hom_k(M, k): a (right, left)-bimodule with transposed actions."""
    return Module._raw(m.right, m.left, [R.T for R in m.ract], [L.T for L in m.lact],
                       None if m.name is None else f"D({m.name})")


def flip(m):
    """An (A, B)-bimodule viewed as a (B^op, A^op)-bimodule; same matrices."""
    return Module._raw(m.right.opposite(), m.left.opposite(), m.ract, m.lact, m.name)


def forget(m, side):
    """Keep only the ``side`` action ('left' or 'right')."""
    g = ground_algebra(m.field)
    I = ExactMatrix.identity(m.field, m.dim)
    if side == "left":
        return Module._raw(m.left, g, m.lact, [I], m.name)
    if side == "right":
        return Module._raw(g, m.right, [I], m.ract, m.name)
    raise ValueError(side)


def change_basis(m, p):
    """Conjugate the actions by an invertible matrix (new basis = columns of p)."""
    pinv = left_inverse(p)
    return Module._raw(m.left, m.right, [pinv @ X @ p for X in m.lact],
                       [pinv @ X @ p for X in m.ract], m.name)


def restrict(m, left=None, phi_left=None, right=None, phi_right=None):
    """Restriction of scalars along algebra maps into m.left / m.right.

    ``phi_left`` is a (m.left.dim x left.dim) matrix giving the images of the
    basis of ``left``; likewise for the right side.
    """
    lact, ract = m.lact, m.ract
    L, R = m.left, m.right
    if phi_left is not None:
        lact = [m.act_left(tuple(phi_left.take_cols([i]).entries())) for i in range(left.dim)]
        L = left
    if phi_right is not None:
        ract = [m.act_right(tuple(phi_right.take_cols([j]).entries())) for j in range(right.dim)]
        R = right
    return Module._raw(L, R, lact, ract, m.name)


# projectives, injectives, simples --------------------------------------------

def indecomposable_projective(alg, t, side="left"):
    """A e_t (left) or e_t A (right)."""
    e = alg.primitive_idempotents()[t]
    if side == "left":
        B = alg.indecomposable_projective_basis(t)
        Binv = left_inverse(B)
        return left_module(alg, [Binv @ L @ B for L in alg.lmul], name=f"P{t + 1}", check=False)
    B = image_basis(alg.left_matrix(e))
    Binv = left_inverse(B)
    return right_module(alg, [Binv @ R @ B for R in alg.rmul], name=f"P{t + 1}^r", check=False)


def indecomposable_injective(alg, t, side="left"):
    """D(e_t A) (left) or D(A e_t) (right)."""
    other = "right" if side == "left" else "left"
    out = dual(indecomposable_projective(alg, t, other))
    out.name = f"I{t + 1}" if side == "left" else f"I{t + 1}^r"
    return out


def simple_modules(alg, side="left"):
    """The one-dimensional simple modules, one per primitive idempotent."""
    chi = alg.characters()
    f = alg.field
    out = []
    for t in range(chi.rows):
        acts = [ExactMatrix(f, [[chi[t, i]]]) for i in range(alg.dim)]
        if side == "left":
            out.append(left_module(alg, acts, name=f"S{t + 1}", check=False))
        else:
            out.append(right_module(alg, acts, name=f"S{t + 1}^r", check=False))
    return out


def projective_cover(m, side="left"):
    """Minimal projective cover of the ``side`` view of m.

    Returns (P, pi, summands) where P is a left module over the view algebra,
    pi : P -> m is surjective and ``summands`` lists the idempotent index of
    each indecomposable summand of P, in order.
    """
    alg, acts, gens = m.view(side)
    f = m.field
    n = m.dim
    J = alg.radical()
    jm_parts = []
    for c in range(J.cols):
        x = tuple(J.take_cols([c]).entries())
        jm_parts.append(_combine(acts, x, f, n))
    JM = image_basis(hstack(jm_parts, rows=n, field=f)) if jm_parts and n else ExactMatrix.zeros(f, n, 0)
    summands = []
    gens_vec = []
    span = JM
    for t, e in enumerate(alg.primitive_idempotents()):
        Et = _combine(acts, e, f, n)
        eM = image_basis(Et) if n else ExactMatrix.zeros(f, 0, 0)
        if eM.cols == 0:
            continue
        _, piv = rref(hstack([span, eM]))
        chosen = [p - span.cols for p in piv if p >= span.cols]
        if chosen:
            pick = eM.take_cols(chosen)
            span = hstack([span, pick])
            for c in range(pick.cols):
                summands.append(t)
                gens_vec.append(pick.take_cols([c]))
    if not summands:
        return zero_module(alg), ExactMatrix.zeros(f, n, 0), []
    parts = []
    blocks = []
    for t, v in zip(summands, gens_vec):
        B = alg.indecomposable_projective_basis(t)
        orbit = hstack([X @ v for X in acts])  # column k = e_k . v
        parts.append(orbit @ B)
        blocks.append(_projective_view_module(alg, t))
    P = direct_sum(blocks)
    pi = hstack(parts)
    return P, pi, summands


def _projective_view_module(alg, t):
    key = ("P", t)
    hit = alg._projectives.get(key)
    if hit is None:
        hit = indecomposable_projective(alg, t, "left")
        alg._projectives[key] = hit
    return hit


def top_dimension(m, side="left"):
    return len(projective_cover(m, side)[2])


# Hom spaces -------------------------------------------------------------------

class HomBasis:
    """Basis of a Hom space stored as vectorised (row-major) columns."""

    def __init__(self, matrix, shape):
        self.matrix = matrix
        self.shape = shape
        self._inv = None

    @property
    def dim(self):
        return self.matrix.cols

    def element(self, i):
        return unvec(self.matrix.take_cols([i]), *self.shape)

    def elements(self):
        r, c = self.shape
        f = self.matrix.field
        return [ExactMatrix._from_flat(f, r, c, v) for v in self.matrix.column_vectors()]

    def coords(self, f):
        """Coordinates (column) of a map f lying in the space."""
        if self._inv is None:
            self._inv = left_inverse(self.matrix)
        return self._inv @ vec(f)

    def coords_many(self, fs):
        if self._inv is None:
            self._inv = left_inverse(self.matrix)
        if not fs:
            return ExactMatrix.zeros(self.matrix.field, self.dim, 0)
        return self._inv @ hstack([vec(f) for f in fs])

    def combine(self, coeffs):
        c = ExactMatrix.column(self.matrix.field, coeffs) if not isinstance(coeffs, ExactMatrix) else coeffs
        return unvec(self.matrix @ c, *self.shape)


def intertwiner_basis(src_gens, tgt_gens, m, n, field):
    """Basis of {F (n x m) : F X_g = Y_g F for all g}."""
    if m == 0 or n == 0:
        return HomBasis(ExactMatrix.zeros(field, n * m, 0), (n, m))
    In = ExactMatrix.identity(field, n)
    Im = ExactMatrix.identity(field, m)
    blocks = []
    for X, Y in zip(src_gens, tgt_gens):
        blocks.append(kronecker(In, X.T) - kronecker(Y, Im))
    if not blocks:
        return HomBasis(ExactMatrix.identity(field, n * m), (n, m))
    return HomBasis(kernel_basis(vstack(blocks)), (n, m))


def hom_space(m, n, side="left"):
    """Basis of Hom(m, n) for the ``side`` view ('left', 'right' or 'both')."""
    am, _, gm = m.view(side)
    an, _, gn = n.view(side)
    if am != an:
        raise ModuleError(f"hom_space between modules over different algebras ({am} vs {an})")
    return intertwiner_basis(gm, gn, m.dim, n.dim, m.field)


def hom_module(x, y):
    """Hom_A(X, Y) for X an (A,S)- and Y an (A,T)-bimodule, as an (S,T)-bimodule.

    (s.f)(v) = f(v s) and (f.t)(v) = f(v) t.  Returns (module, basis).
    """
    H = hom_space(x, y, "left")
    f = x.field
    els = H.elements()
    lact = []
    for R in x.ract:
        lact.append(H.coords_many([F @ R for F in els]) if els else ExactMatrix.zeros(f, 0, 0))
    ract = []
    for R in y.ract:
        ract.append(H.coords_many([R @ F for F in els]) if els else ExactMatrix.zeros(f, 0, 0))
    return Module._raw(x.right, y.right, lact, ract), H


class TensorData:
    """Quotient data for X ⊗_S Y inside X ⊗_k Y (lexicographic, X major)."""

    def __init__(self, q, s, dx, dy):
        self.q = q
        self.s = s
        self.dx = dx
        self.dy = dy


def tensor_module(x, y):
    """X ⊗_S Y for X an (R,S)- and Y an (S,T)-bimodule, as an (R,T)-bimodule."""
    if x.right != y.left:
        raise ModuleError("tensor product over mismatched algebras")
    f = x.field
    dx, dy = x.dim, y.dim
    S = x.right
    Ix = ExactMatrix.identity(f, dx)
    Iy = ExactMatrix.identity(f, dy)
    rel = []
    if S.dim > 1:
        for g in S.generators:
            rel.append(kronecker(x.act_right(g), Iy) - kronecker(Ix, y.act_left(g)))
    W = hstack(rel, rows=dx * dy, field=f) if rel else ExactMatrix.zeros(f, dx * dy, 0)
    q, s = quotient_data(W, dx * dy, f)
    lact = [q @ kronecker(L, Iy) @ s for L in x.lact]
    ract = [q @ kronecker(Ix, R) @ s for R in y.ract]
    return Module._raw(x.left, y.right, lact, ract), TensorData(q, s, dx, dy)


# recognition -------------------------------------------------------------------

def is_projective(m, side=None):
    """Projectivity on the ``side`` view, decided by the minimal projective cover."""
    side = side or _default_side(m)
    if m.dim == 0:
        return True
    # the cover is minimal, so it splits exactly when it is an isomorphism
    P, _, _ = projective_cover(m, side)
    return P.dim == m.dim


def is_injective(m, side=None):
    side = side or _default_side(m)
    other = {"left": "right", "right": "left", "both": "both"}[side]
    return is_projective(dual(m), other)


def _default_side(m):
    s = m.side
    if s == "vector":
        return "left"
    return s


def find_isomorphism(m, n, side=None, tries=24, seed=0):
    """An invertible intertwiner m -> n, or None if none was found.

    Random combinations of a Hom basis are tried; a returned matrix is always
    a verified isomorphism.
    """
    side = side or _default_side(m)
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return ExactMatrix.zeros(m.field, 0, 0)
    H = hom_space(m, n, side)
    if H.dim == 0:
        return None
    rng = random.Random(seed)
    f = m.field
    for attempt in range(tries):
        if attempt == 0:
            coeffs = [1] * H.dim
        else:
            coeffs = [rng.randint(-9, 9) for _ in range(H.dim)]
        F = H.combine(ExactMatrix.column(f, coeffs))
        if is_invertible(F):
            return F
    return None


def are_isomorphic(m, n, side=None):
    return find_isomorphism(m, n, side) is not None


def kernel_module(f_map, source):
    K = kernel_basis(f_map)
    return submodule(source, K, check=False)


__all__ = [
    "Module", "ModuleError", "from_carrier", "left_module", "right_module", "zero_module",
    "vector_space", "regular_module", "regular_right_module", "regular_bimodule", "free_module",
    "submodule", "quotient", "direct_sum", "dual", "flip", "forget", "change_basis", "restrict",
    "indecomposable_projective", "indecomposable_injective", "simple_modules", "projective_cover",
    "top_dimension", "HomBasis", "intertwiner_basis", "hom_space", "hom_module", "TensorData",
    "tensor_module", "is_projective", "is_injective", "find_isomorphism", "are_isomorphic",
    "kernel_module",
]
