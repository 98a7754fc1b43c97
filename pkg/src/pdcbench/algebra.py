"""Finite-dimensional associative unital algebras given by structure constants."""

from __future__ import annotations

from .linalg import (
    ExactMatrix,
    QQ,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    kronecker,
    left_inverse,
    quotient_data,
    rref,
)


class AlgebraError(ValueError):
    """Raised for malformed algebra data (non-associative, non-unital, bad relations)."""


class Algebra:
    """Algebra with basis e_0..e_{n-1} and e_i e_j = sum_k c[i][j][k] e_k.

    Left and right multiplication by basis elements are stored as matrices
    ``lmul[i]`` (x -> e_i x) and ``rmul[j]`` (x -> x e_j).  Idempotents and
    the radical may be supplied by a constructor; otherwise they are computed
    on demand for basic split algebras.
    """

    def __init__(self, field, structure, unit, labels=None, *, idempotents=None,
                 radical=None, generators=None, name=None, check=True):
        n = len(structure)
        if n == 0:
            raise AlgebraError("an algebra must have positive dimension")
        for i, row in enumerate(structure):
            if len(row) != n or any(len(v) != n for v in row):
                raise AlgebraError(f"structure constants must be {n}x{n}x{n} (row {i})")
        lmul = []
        rmul = []
        for i in range(n):
            # L_i[k, j] = c[i][j][k]
            lmul.append(ExactMatrix(field, [[structure[i][j][k] for j in range(n)] for k in range(n)]))
        for j in range(n):
            rmul.append(ExactMatrix(field, [[structure[i][j][k] for i in range(n)] for k in range(n)]))
        self._init(field, lmul, rmul, [field.scalar(u) for u in unit], labels, idempotents,
                   radical, generators, name)
        if check:
            self.verify()

    def _init(self, field, lmul, rmul, unit, labels, idempotents, radical, generators, name):
        n = len(lmul)
        self.field = field
        self.dim = n
        self.lmul = tuple(lmul)
        self.rmul = tuple(rmul)
        self.unit = tuple(unit)
        self.labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(n))
        if len(self.labels) != n:
            raise AlgebraError("wrong number of basis labels")
        self.name = name
        self._idempotents = None if idempotents is None else [tuple(field.scalar(x) for x in e) for e in idempotents]
        self._radical = radical
        self._generators = None if generators is None else [tuple(field.scalar(x) for x in g) for g in generators]
        self._opposite = None
        self._tensor_cache = {}
        self._projectives = {}
        self._characters = None

    @classmethod
    def _from_mult(cls, field, lmul, rmul, unit, labels=None, **kw):
        out = cls.__new__(cls)
        out._init(field, lmul, rmul, unit, labels, kw.get("idempotents"), kw.get("radical"),
                  kw.get("generators"), kw.get("name"))
        return out

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field})"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return (self.field == other.field and self.dim == other.dim
                and self.unit == other.unit and self.lmul == other.lmul)

    def __hash__(self):
        return hash((self.field, self.dim))

    def structure_constants(self):
        n = self.dim
        ls = [m.entries() for m in self.lmul]
        return [[[ls[i][k * n + j] for k in range(n)] for j in range(n)] for i in range(n)]

    def verify(self):
        """Check associativity and the unit laws exactly; raise AlgebraError naming a failure."""
        n = self.dim
        f = self.field
        c = self.structure_constants()
        for i in range(n):
            for j in range(n):
                lhs = self.lmul[i] @ self.lmul[j]
                rhs = ExactMatrix.zeros(f, n, n)
                for k in range(n):
                    if c[i][j][k] != 0:
                        rhs = rhs + self.lmul[k].scale(c[i][j][k])
                if lhs != rhs:
                    diff = (lhs - rhs).tolist()
                    l = next(col for col in range(n) if any(diff[r][col] != 0 for r in range(n)))
                    raise AlgebraError(f"associativity fails for the triple (i,j,l) = ({i},{j},{l})")
        ident = ExactMatrix.identity(f, n)
        if self.left_matrix(self.unit) != ident:
            raise AlgebraError("unit vector is not a left unit")
        if self.right_matrix(self.unit) != ident:
            raise AlgebraError("unit vector is not a right unit")

    def basis_vector(self, i):
        v = [self.field.scalar(0)] * self.dim
        v[i] = self.field.scalar(1)
        return tuple(v)

    def left_matrix(self, x):
        out = ExactMatrix.zeros(self.field, self.dim, self.dim)
        for xi, m in zip(x, self.lmul):
            if xi != 0:
                out = out + m.scale(xi)
        return out

    def right_matrix(self, x):
        out = ExactMatrix.zeros(self.field, self.dim, self.dim)
        for xi, m in zip(x, self.rmul):
            if xi != 0:
                out = out + m.scale(xi)
        return out

    def mul(self, x, y):
        return tuple((self.left_matrix(x) @ ExactMatrix.column(self.field, y)).entries())

    @property
    def generators(self):
        if self._generators is None:
            return [self.basis_vector(i) for i in range(self.dim)]
        return self._generators

    def opposite(self):
        if self._opposite is None:
            name = None if self.name is None else f"{self.name}^op"
            op = Algebra._from_mult(self.field, self.rmul, self.lmul, self.unit, self.labels,
                                    idempotents=self._idempotents, radical=self._radical,
                                    generators=self._generators, name=name)
            op._opposite = self
            self._opposite = op
        return self._opposite

    # radical and idempotents -------------------------------------------------

    def radical(self):
        """Basis (columns) of the Jacobson radical."""
        if self._radical is None:
            self._radical = self._trace_radical()
        return self._radical

    def _trace_radical(self):
        n = self.dim
        p = self.field.characteristic
        if p != 0 and p <= n:
            raise NotImplementedError(
                f"radical over GF({p}) for dimension {n} needs a constructor that supplies it")
        tr = [sum((m[k, k] for k in range(n)), self.field.scalar(0)) for m in self.lmul]
        c = self.structure_constants()
        form = ExactMatrix(self.field, [[sum((c[i][j][k] * tr[k] for k in range(n)), self.field.scalar(0))
                                         for j in range(n)] for i in range(n)])
        return kernel_basis(form.T)

    def primitive_idempotents(self):
        """Complete set of primitive orthogonal idempotents (basic split algebras only)."""
        if self._idempotents is None:
            self._idempotents = self._compute_idempotents()
        return self._idempotents

    def _compute_idempotents(self):
        f = self.field
        n = self.dim
        J = self.radical()
        q, s = quotient_data(J, n, f)
        r = q.rows
        # multiplication in A/J through the section
        bar_l = [q @ self.left_matrix(tuple(s.take_cols([t]).entries())) @ s for t in range(r)]
        for a in range(r):
            for b in range(a):
                if bar_l[a] @ bar_l[b] != bar_l[b] @ bar_l[a]:
                    raise NotImplementedError("only basic split algebras are supported "
                                              "(semisimple quotient is not commutative)")
        one_bar = q @ ExactMatrix.column(f, self.unit)

        def lmat(v):
            out = ExactMatrix.zeros(f, r, r)
            for t, x in enumerate(v.entries()):
                if x != 0:
                    out = out + bar_l[t].scale(x)
            return out

        idem = [one_bar]
        changed = True
        while changed:
            changed = False
            new = []
            for e in idem:
                E = lmat(e)
                W = image_basis(E)
                split = None
                for g in range(r):
                    G = bar_l[g] @ E
                    Mg = left_inverse(W) @ G @ W
                    roots = _split_roots(Mg, f)
                    if len(roots) > 1:
                        split = (G, roots)
                        break
                if split is None:
                    new.append(e)
                    continue
                G, roots = split
                changed = True
                for i, li in enumerate(roots):
                    v = e
                    for j, lj in enumerate(roots):
                        if j != i:
                            v = (G @ v - v.scale(lj)).scale(f.inv(f.scalar(li) - f.scalar(lj)))
                    new.append(v)
            idem = new
        # lift to orthogonal idempotents of A
        one = ExactMatrix.column(f, self.unit)
        c = one
        out = []
        for e in idem[:-1]:
            C = self.left_matrix(tuple(c.entries()))
            x = C @ self.right_matrix(tuple(c.entries())) @ (s @ e)
            for _ in range(2 * n + 4):
                X = self.left_matrix(tuple(x.entries()))
                x2 = X @ x
                if x2 == x:
                    break
                x3 = X @ x2
                x = x2.scale(3) - x3.scale(2)
            else:
                raise NotImplementedError("idempotent lifting did not converge")
            out.append(tuple(x.entries()))
            c = c - x
        out.append(tuple(c.entries()))
        return out

    def characters(self):
        """Row matrix chi with chi[t] giving the scalar by which a basis element acts on the t-th simple."""
        if self._characters is None:
            f = self.field
            q, _ = quotient_data(self.radical(), self.dim, f)
            E = hstack([q @ ExactMatrix.column(f, e) for e in self.primitive_idempotents()],
                       rows=q.rows, field=f)
            if E.rows != E.cols:
                raise NotImplementedError("only basic split algebras are supported")
            self._characters = inverse(E) @ q
        return self._characters

    # tensor products -----------------------------------------------------------

    def tensor(self, other):
        """A ⊗ B with lexicographic basis (left factor major)."""
        key = id(other)
        hit = self._tensor_cache.get(key)
        if hit is not None and hit[0] is other:
            return hit[1]
        f = self.field
        if other.field != f:
            raise AlgebraError("field mismatch")
        lm = [kronecker(a, b) for a in self.lmul for b in other.lmul]
        rm = [kronecker(a, b) for a in self.rmul for b in other.rmul]
        unit = [x * y for x in self.unit for y in other.unit]
        labels = [f"{a}⊗{b}" for a in self.labels for b in other.labels]
        idem = [tuple(x * y for x in e for y in g)
                for e in self.primitive_idempotents() for g in other.primitive_idempotents()]
        Ja, Jb = self.radical(), other.radical()
        Ia = ExactMatrix.identity(f, self.dim)
        Ib = ExactMatrix.identity(f, other.dim)
        J = hstack([kronecker(Ja, Ib), kronecker(Ia, Jb)], rows=self.dim * other.dim, field=f)
        J = image_basis(J) if J.cols else J
        ga = [tuple(x * y for x in g for y in other.unit) for g in self.generators]
        gb = [tuple(x * y for x in self.unit for y in g) for g in other.generators]
        name = None
        if self.name and other.name:
            name = f"{self.name}⊗{other.name}"
        out = Algebra._from_mult(f, lm, rm, unit, labels, idempotents=idem, radical=J,
                                 generators=ga + gb, name=name)
        self._tensor_cache[key] = (other, out)
        return out

    def indecomposable_projective_basis(self, t):
        """Columns spanning A e_t inside A."""
        hit = self._projectives.get(t)
        if hit is None:
            e = self.primitive_idempotents()[t]
            hit = image_basis(self.right_matrix(e))
            self._projectives[t] = hit
        return hit


def _split_roots(m, field):
    """Distinct roots of the minimal polynomial of m; raises if it does not split."""
    if m.rows == 0:
        return []
    mp = m._m.minpoly()
    facs = mp.factor()[1]
    roots = []
    for g, _ in facs:
        if g.degree() != 1:
            raise NotImplementedError("only split algebras are supported "
                                      "(minimal polynomial has an irreducible factor of degree > 1)")
        c = g.coeffs()
        roots.append(field.scalar(-c[0] / c[1]))
    return roots


def enveloping(a, b):
    """Enveloping algebra A ⊗ B^op; modules over it are A-B-bimodules."""
    return a.tensor(b.opposite())


def is_algebra_hom(phi, source, target):
    """True when the matrix ``phi`` (target.dim x source.dim) is a unital algebra map."""
    f = source.field
    if phi.shape != (target.dim, source.dim):
        return False
    if phi @ ExactMatrix.column(f, source.unit) != ExactMatrix.column(f, target.unit):
        return False
    for i in range(source.dim):
        pi = tuple(phi.take_cols([i]).entries())
        Li = target.left_matrix(pi)
        for j in range(source.dim):
            lhs = phi @ source.lmul[i].take_cols([j])
            rhs = Li @ phi.take_cols([j])
            if lhs != rhs:
                return False
    return True


# sample algebras -------------------------------------------------------------

_GROUND = {}


def ground_algebra(field=QQ):
    """The field itself as a one-dimensional algebra (cached per field)."""
    if field not in _GROUND:
        one = ExactMatrix.identity(field, 1)
        alg = Algebra._from_mult(field, [one], [one], [field.scalar(1)], ["1"],
                                 idempotents=[(field.scalar(1),)],
                                 radical=ExactMatrix.zeros(field, 1, 0), name="k")
        alg._opposite = alg
        _GROUND[field] = alg
    return _GROUND[field]


def is_ground(alg):
    return alg.dim == 1


def _parse_word(word, names):
    parts = [w.strip() for w in word.replace("·", "*").split("*") if w.strip()]
    if not parts:
        raise AlgebraError(f"malformed relation word {word!r}")
    idx = []
    for w in parts:
        if w not in names:
            raise AlgebraError(f"unknown arrow {w!r} in relation")
        idx.append(names[w])
    return tuple(reversed(idx))  # traversal order


def path_algebra(field, n_vertices, arrows, relations=(), *, max_length=24, name=None):
    """Path algebra of a quiver modulo homogeneous relations.

    ``arrows`` is a list of (name, source, target) with vertices numbered from 1.
    Each relation is a dict {word: coefficient}; a word lists arrow names in
    composition order separated by ``*`` ("b*a" means a first, then b).
    The basis consists of vertex idempotents ``e1..en`` followed by normal
    form paths, shortest first.
    """
    arrows = [(str(nm), int(s), int(t)) for nm, s, t in arrows]
    names = {}
    for i, (nm, s, t) in enumerate(arrows):
        if nm in names:
            raise AlgebraError(f"duplicate arrow name {nm!r}")
        if not (1 <= s <= n_vertices and 1 <= t <= n_vertices):
            raise AlgebraError(f"arrow {nm!r} has an endpoint outside 1..{n_vertices}")
        names[nm] = i
    src = [s for _, s, _ in arrows]
    tgt = [t for _, _, t in arrows]

    rels = []
    for rel in relations:
        terms = []
        length = None
        for word, coef in rel.items():
            path = _parse_word(word, names)
            for a, b in zip(path, path[1:]):
                if tgt[a] != src[b]:
                    raise AlgebraError(f"relation word {word!r} is not a path")
            if length is None:
                length = len(path)
            elif len(path) != length:
                raise AlgebraError("malformed relations: terms of different lengths")
            terms.append((field.scalar(coef), path))
        if terms:
            rels.append((length, terms))

    def paths_of_length(m):
        if m == 0:
            return []
        cur = [(a,) for a in range(len(arrows))]
        for _ in range(m - 1):
            cur = [p + (a,) for p in cur for a in range(len(arrows)) if tgt[p[-1]] == src[a]]
        return cur

    normal = {}  # length -> (list of basis paths, reduction map path -> {basis path: coef})
    length = 1
    while True:
        if length > max_length:
            raise AlgebraError(f"infinite-dimensional quotient: paths of length {max_length} survive")
        P = paths_of_length(length)
        if not P:
            break
        pos = {p: i for i, p in enumerate(P)}
        rows = []
        for m, terms in rels:
            if m > length:
                continue
            for a in range(length - m + 1):
                b = length - m - a
                for q in ([()] if b == 0 else paths_of_length(b)):
                    for pfx in ([()] if a == 0 else paths_of_length(a)):
                        row = {}
                        for coef, t in terms:
                            w = q + t + pfx
                            if all(tgt[x] == src[y] for x, y in zip(w, w[1:])):
                                row[pos[w]] = row.get(pos[w], 0) + coef
                        if any(v != 0 for v in row.values()):
                            rows.append(row)
        if rows:
            M = ExactMatrix(field, [[r.get(j, 0) for j in range(len(P))] for r in rows])
            R, piv = rref(M)
        else:
            R, piv = None, []
        pset = set(piv)
        basis = [P[j] for j in range(len(P)) if j not in pset]
        red = {}
        for j in range(len(P)):
            if j not in pset:
                red[P[j]] = {P[j]: field.scalar(1)}
        for i, pj in enumerate(piv):
            red[P[pj]] = {P[j]: -R[i, j] for j in range(len(P)) if j not in pset and R[i, j] != 0}
        normal[length] = (basis, red)
        if not basis:
            break
        length += 1

    basis = [("v", v) for v in range(1, n_vertices + 1)]
    for m in sorted(normal):
        basis.extend(("p", p) for p in normal[m][0])
    index = {b: i for i, b in enumerate(basis)}
    n = len(basis)

    def source(b):
        return b[1] if b[0] == "v" else src[b[1][0]]

    def target(b):
        return b[1] if b[0] == "v" else tgt[b[1][-1]]

    zero = field.scalar(0)
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            if source(bi) != target(bj):
                continue
            if bi[0] == "v":
                c[i][j][j] = field.scalar(1)
            elif bj[0] == "v":
                c[i][j][i] = field.scalar(1)
            else:
                w = bj[1] + bi[1]
                m = len(w)
                if m not in normal:
                    continue
                for p, coef in normal[m][1].get(w, {}).items():
                    c[i][j][index[("p", p)]] += coef

    def label(b):
        if b[0] == "v":
            return f"e{b[1]}"
        return "*".join(arrows[a][0] for a in reversed(b[1]))

    labels = [label(b) for b in basis]
    unit = [field.scalar(1) if b[0] == "v" else zero for b in basis]
    idem = [tuple(field.scalar(1) if k == i else zero for k in range(n)) for i in range(n_vertices)]
    rad_idx = [i for i, b in enumerate(basis) if b[0] == "p"]
    radical = ExactMatrix.identity(field, n).take_cols(rad_idx)
    gens = list(idem)
    for nm, _, _ in arrows:
        key = ("p", (names[nm],))
        if key in index:
            gens.append(tuple(field.scalar(1) if k == index[key] else zero for k in range(n)))
    return Algebra(field, c, unit, labels, idempotents=idem, radical=radical,
                   generators=gens, name=name)


def kA2(field=QQ):
    """Path algebra of 1 -> 2 (arrow a); basis e1, e2, a."""
    return path_algebra(field, 2, [("a", 1, 2)], name="kA2")


def dual_numbers(field=QQ):
    """k[x]/(x^2); basis e1, x."""
    return path_algebra(field, 1, [("x", 1, 1)], [{"x*x": 1}], name="k[x]/(x^2)")


def truncated_polynomial(field, n):
    """k[x]/(x^n)."""
    word = "*".join(["x"] * n)
    return path_algebra(field, 1, [("x", 1, 1)], [{word: 1}], name=f"k[x]/(x^{n})")


def upper_triangular(field=QQ):
    """Upper-triangular 2x2 matrices; basis E11, E12, E22."""
    z, o = field.scalar(0), field.scalar(1)
    c = [[[z] * 3 for _ in range(3)] for _ in range(3)]
    # index: 0 = E11, 1 = E12, 2 = E22
    c[0][0][0] = o
    c[0][1][1] = o
    c[1][2][1] = o
    c[2][2][2] = o
    return Algebra(field, c, [o, z, o], ["E11", "E12", "E22"],
                   idempotents=[(o, z, z), (z, z, o)],
                   radical=ExactMatrix(field, [[0], [1], [0]]),
                   generators=[(o, z, z), (z, o, z), (z, z, o)], name="UT2")


def sample_algebras(field=QQ):
    """The four sample algebras used throughout the tests and demos."""
    return {
        "k": ground_algebra(field),
        "kA2": kA2(field),
        "k[x]/(x^2)": dual_numbers(field),
        "UT2": upper_triangular(field),
    }


def algebra_from_structure(field, structure, unit, labels=None, name=None):
    """Validated algebra from raw structure constants; idempotents computed on demand."""
    return Algebra(field, structure, unit, labels, name=name)


__all__ = [
    "Algebra", "AlgebraError", "enveloping", "is_algebra_hom", "ground_algebra", "is_ground",
    "path_algebra", "kA2", "dual_numbers", "truncated_polynomial", "upper_triangular",
    "sample_algebras", "algebra_from_structure",
]
