"""Matrices of finite sets and their 2-morphisms.

A matrix x : A -> B has an entry set x[b;a] for every pair of objects.  Every
entry element carries a tag (its FinSet label) and composites build their tags
from the tags of their parts, so every identification below is an explicit
function on tags.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Callable, Iterator

from .finkit import (
    DEFAULT_CAP,
    EnumerationBudgetError,
    FinFunction,
    FinSet,
    ShapeError,
    enumerate_functions,
    product,
)

UNIT_TAG = "*"


def _tagged(s: FinSet) -> FinSet:
    return s if s.labels is not None else FinSet(s.size, tuple(range(s.size)))


@dataclass(frozen=True, eq=False)
class Mat:
    src: FinSet
    tgt: FinSet
    entry: dict

    def __post_init__(self):
        for b in range(self.tgt.size):
            for a in range(self.src.size):
                if (b, a) not in self.entry:
                    raise ShapeError(f"matrix entry ({b},{a}) missing")
        object.__setattr__(self, "entry", {k: _tagged(v) for k, v in self.entry.items()})

    @classmethod
    def build(cls, src: FinSet, tgt: FinSet, fn: Callable[[int, int], object]) -> "Mat":
        """fn(b, a) returns an iterable of tags for the entry x[b;a]."""
        return cls(src, tgt, {(b, a): FinSet.of(fn(b, a)) for b in tgt for a in src})

    def __getitem__(self, key) -> FinSet:
        return self.entry[key]

    def keys(self):
        return [(b, a) for b in range(self.tgt.size) for a in range(self.src.size)]

    def size(self) -> int:
        return sum(s.size for s in self.entry.values())

    def sizes(self) -> dict:
        return {k: s.size for k, s in self.entry.items()}

    def elements(self) -> Iterator[tuple[int, int, object]]:
        for (b, a) in self.keys():
            for t in self.entry[(b, a)].labels:
                yield b, a, t


@dataclass(frozen=True, eq=False)
class MatTwoMorphism:
    """A cell from x : A -> B to y : A' -> B' over f : A -> A' and g : B -> B'."""

    dom: Mat
    cod: Mat
    f: FinFunction
    g: FinFunction
    comp: dict

    def __post_init__(self):
        if self.f.dom != self.dom.src or self.f.cod != self.cod.src:
            raise ShapeError("source-side vertical map has the wrong boundary")
        if self.g.dom != self.dom.tgt or self.g.cod != self.cod.tgt:
            raise ShapeError("target-side vertical map has the wrong boundary")
        for (b, a) in self.dom.keys():
            c = self.comp[(b, a)]
            if c.dom != self.dom[(b, a)] or c.cod != self.cod[(self.g(b), self.f(a))]:
                raise ShapeError(f"component at ({b},{a}) has the wrong boundary")

    @classmethod
    def from_tags(cls, dom: Mat, cod: Mat, f: FinFunction, g: FinFunction, fn) -> "MatTwoMorphism":
        """fn(b, a, tag) returns the tag of the image element."""
        comp = {}
        for (b, a) in dom.keys():
            src, tgt = dom[(b, a)], cod[(g(b), f(a))]
            comp[(b, a)] = FinFunction(src, tgt, tuple(tgt.index(fn(b, a, t)) for t in src.labels))
        return cls(dom, cod, f, g, comp)

    @classmethod
    def globular(cls, dom: Mat, cod: Mat, fn) -> "MatTwoMorphism":
        return cls.from_tags(dom, cod, FinFunction.identity(dom.src), FinFunction.identity(dom.tgt), fn)

    def apply(self, b: int, a: int, tag):
        """Image tag of the element `tag` of dom[b;a]."""
        c = self.comp[(b, a)]
        return c.cod.labels[c.table[c.dom.index(tag)]]

    def is_globular(self) -> bool:
        return self.f.table == tuple(range(self.f.dom.size)) and self.g.table == tuple(range(self.g.dom.size)) \
            and self.f.dom == self.f.cod and self.g.dom == self.g.cod

    def is_globular_iso(self) -> bool:
        return self.is_globular() and all(c.is_bijective() for c in self.comp.values())

    def same_as(self, other: "MatTwoMorphism") -> bool:
        return (self.f.table == other.f.table and self.g.table == other.g.table
                and all(self.comp[k].table == other.comp[k].table for k in self.dom.keys()))


# GlobularIso is a MatTwoMorphism whose verticals are identities and components bijective.
GlobularIso = MatTwoMorphism


def identity_mat(A: FinSet) -> Mat:
    return Mat.build(A, A, lambda b, a: [UNIT_TAG] if a == b else [])


def identity_cell(x: Mat) -> MatTwoMorphism:
    return MatTwoMorphism.globular(x, x, lambda b, a, t: t)


def vertical_identity(f: FinFunction) -> MatTwoMorphism:
    """The cell id_A => id_A' over (f, f)."""
    return MatTwoMorphism.from_tags(identity_mat(f.dom), identity_mat(f.cod), f, f, lambda b, a, t: t)


def vcompose(alpha: MatTwoMorphism, beta: MatTwoMorphism) -> MatTwoMorphism:
    """Stack alpha on top of beta: first alpha, then beta."""
    if alpha.cod is not beta.dom and not same_shape(alpha.cod, beta.dom):
        raise ShapeError("vertical composite of non-matching cells")
    comp = {k: alpha.comp[k].then(beta.comp[(alpha.g(k[0]), alpha.f(k[1]))]) for k in alpha.dom.keys()}
    return MatTwoMorphism(alpha.dom, beta.cod, alpha.f.then(beta.f), alpha.g.then(beta.g), comp)


def same_shape(x: Mat, y: Mat) -> bool:
    return x.src == y.src and x.tgt == y.tgt and all(x[k] == y[k] for k in x.keys())


# -- composition ---------------------------------------------------------------

def mat_compose(y: Mat, x: Mat) -> Mat:
    """(y o x)[c;a] is the disjoint union over b of y[c;b] x x[b;a]; tags are (b, y-tag, x-tag)."""
    if x.tgt != y.src:
        raise ShapeError("matrices are not composable")
    entry = {}
    for c in range(y.tgt.size):
        for a in range(x.src.size):
            tags = [(b, ty, tx)
                    for b in range(x.tgt.size)
                    for ty in y[(c, b)].labels
                    for tx in x[(b, a)].labels]
            entry[(c, a)] = FinSet.of(tags)
    return Mat(x.src, y.tgt, entry)


def compose_cells(beta: MatTwoMorphism, alpha: MatTwoMorphism) -> MatTwoMorphism:
    """Horizontal composite of alpha : x => x' (over f, g) and beta : y => y' (over g, h)."""
    if alpha.g.table != beta.f.table or alpha.g.dom != beta.f.dom:
        raise ShapeError("cells do not share the middle vertical map")
    dom, cod = mat_compose(beta.dom, alpha.dom), mat_compose(beta.cod, alpha.cod)
    g = alpha.g

    def fn(c, a, t):
        b, ty, tx = t
        return (g(b), beta.apply(c, b, ty), alpha.apply(b, a, tx))

    return MatTwoMorphism.from_tags(dom, cod, alpha.f, beta.g, fn)


def left_unitor(x: Mat) -> MatTwoMorphism:
    """x => id o x."""
    return MatTwoMorphism.globular(x, mat_compose(identity_mat(x.tgt), x), lambda b, a, t: (b, UNIT_TAG, t))


def right_unitor(x: Mat) -> MatTwoMorphism:
    """x => x o id."""
    return MatTwoMorphism.globular(x, mat_compose(x, identity_mat(x.src)), lambda b, a, t: (a, t, UNIT_TAG))


def associator(z: Mat, y: Mat, x: Mat) -> MatTwoMorphism:
    """(z o y) o x => z o (y o x)."""
    lhs, rhs = mat_compose(mat_compose(z, y), x), mat_compose(z, mat_compose(y, x))

    def fn(d, a, t):
        b, (c, tz, ty), tx = t
        return (c, tz, (b, ty, tx))

    return MatTwoMorphism.globular(lhs, rhs, fn)


def invert(alpha: MatTwoMorphism) -> MatTwoMorphism:
    if not alpha.is_globular_iso():
        raise ShapeError("only globular isomorphisms are inverted")
    comp = {k: alpha.comp[k].inverse() for k in alpha.dom.keys()}
    return MatTwoMorphism(alpha.cod, alpha.dom, alpha.f, alpha.g, comp)


# -- tensor ---------------------------------------------------------------------

def product_objects(A: FinSet, B: FinSet) -> FinSet:
    return product([_tagged(A), _tagged(B)])[0]


def pair_index(B: FinSet, a: int, b: int) -> int:
    return a * B.size + b


def mat_tensor(x: Mat, y: Mat) -> Mat:
    src, tgt = product_objects(x.src, y.src), product_objects(x.tgt, y.tgt)
    entry = {}
    for a2 in range(x.tgt.size):
        for b2 in range(y.tgt.size):
            for a1 in range(x.src.size):
                for b1 in range(y.src.size):
                    tags = [(s, t) for s in x[(a2, a1)].labels for t in y[(b2, b1)].labels]
                    entry[(pair_index(y.tgt, a2, b2), pair_index(y.src, a1, b1))] = FinSet.of(tags)
    return Mat(src, tgt, entry)


def product_function(f: FinFunction, g: FinFunction) -> FinFunction:
    dom, cod = product_objects(f.dom, g.dom), product_objects(f.cod, g.cod)
    return FinFunction(dom, cod, tuple(pair_index(g.cod, f(a), g(b)) for a in f.dom for b in g.dom))


def tensor_cells(alpha: MatTwoMorphism, beta: MatTwoMorphism) -> MatTwoMorphism:
    dom, cod = mat_tensor(alpha.dom, beta.dom), mat_tensor(alpha.cod, beta.cod)

    def fn(b, a, t):
        s, u = t
        b1, b2 = divmod(b, beta.dom.tgt.size)
        a1, a2 = divmod(a, beta.dom.src.size)
        return (alpha.apply(b1, a1, s), beta.apply(b2, a2, u))

    return MatTwoMorphism.from_tags(dom, cod, product_function(alpha.f, beta.f),
                                    product_function(alpha.g, beta.g), fn)


def swap_function(A: FinSet, B: FinSet) -> FinFunction:
    dom, cod = product_objects(A, B), product_objects(B, A)
    return FinFunction(dom, cod, tuple(pair_index(A, b, a) for a in A for b in B))


def symmetry(x: Mat, y: Mat) -> MatTwoMorphism:
    """x (x) y => y (x) x over the coordinate swaps."""
    return MatTwoMorphism.from_tags(mat_tensor(x, y), mat_tensor(y, x), swap_function(x.src, y.src),
                                    swap_function(x.tgt, y.tgt), lambda b, a, t: (t[1], t[0]))


def interchanger(y1: Mat, x1: Mat, y2: Mat, x2: Mat) -> MatTwoMorphism:
    """xi : (y1 o x1) (x) (y2 o x2) => (y1 (x) y2) o (x1 (x) x2)."""
    lhs = mat_tensor(mat_compose(y1, x1), mat_compose(y2, x2))
    rhs = mat_compose(mat_tensor(y1, y2), mat_tensor(x1, x2))
    mid = x2.tgt

    def fn(c, a, t):
        (b1, s1, r1), (b2, s2, r2) = t
        return (pair_index(mid, b1, b2), (s1, s2), (r1, r2))

    return MatTwoMorphism.globular(lhs, rhs, fn)


def tensor_unitor(x: Mat, unit: FinSet | None = None) -> MatTwoMorphism:
    """x => x (x) id_1 over the canonical A = A x 1 identifications."""
    one = unit if unit is not None else FinSet(1, (UNIT_TAG,))
    u = identity_mat(one)
    rhs = mat_tensor(x, u)
    f = FinFunction(x.src, rhs.src, tuple(range(x.src.size)))
    g = FinFunction(x.tgt, rhs.tgt, tuple(range(x.tgt.size)))
    return MatTwoMorphism.from_tags(x, rhs, f, g, lambda b, a, t: (t, UNIT_TAG))


def sigma_tau(a1: Mat, a2: Mat) -> tuple[MatTwoMorphism, MatTwoMorphism]:
    """The two globular cells out of a1 (x) a2 into the two whiskered composites.

    sigma : a1 (x) a2 => (a1 (x) id) o (id (x) a2)
    tau   : a1 (x) a2 => (id (x) a2) o (a1 (x) id)
    each built as (unitor (x) unitor) followed by the interchanger.
    """
    id_src1, id_tgt1 = identity_mat(a1.src), identity_mat(a1.tgt)
    id_src2, id_tgt2 = identity_mat(a2.src), identity_mat(a2.tgt)
    # sigma: a1 = a1 o id_{A1}, a2 = id_{A2'} o a2
    s_pre = tensor_cells(right_unitor(a1), left_unitor(a2))
    s_xi = interchanger(a1, id_src1, id_tgt2, a2)
    sigma = vcompose(s_pre, s_xi)
    # tau: a1 = id_{A1'} o a1, a2 = a2 o id_{A2}
    t_pre = tensor_cells(left_unitor(a1), right_unitor(a2))
    t_xi = interchanger(id_tgt1, a1, a2, id_src2)
    tau = vcompose(t_pre, t_xi)
    return _globularise(sigma), _globularise(tau)


def _globularise(cell: MatTwoMorphism) -> MatTwoMorphism:
    """Re-express a cell whose vertical maps are identities on equal sets."""
    return MatTwoMorphism(cell.dom, cell.cod, FinFunction.identity(cell.dom.src),
                          FinFunction.identity(cell.dom.tgt), cell.comp)


# -- internal hom -----------------------------------------------------------------

def function_set(B: FinSet, C: FinSet, cap: int = DEFAULT_CAP) -> FinSet:
    return FinSet.of(tuple(f.table) for f in enumerate_functions(B, C, cap))


def mat_hom(y: Mat, z: Mat, cap: int = DEFAULT_CAP) -> Mat:
    """[[y,z]] : [[B,C]] -> [[B',C']] for y : B -> B' and z : C -> C'.

    An element of the entry at (g', g) is a tuple, indexed by the pairs (b, b')
    in lexicographic order, of functions y[b';b] -> z[g'(b'); g(b)] stored as
    tuples of target tags.
    """
    src, tgt = function_set(y.src, z.src, cap), function_set(y.tgt, z.tgt, cap)
    pairs = [(b, bp) for b in range(y.src.size) for bp in range(y.tgt.size)]
    entry = {}
    for gi, gp in enumerate(tgt.labels):
        for fi, g in enumerate(src.labels):
            factors = []
            total = 1
            for b, bp in pairs:
                dom, cod = y[(bp, b)], z[(gp[bp], g[b])]
                total *= cod.size ** dom.size
                if total > cap:
                    raise EnumerationBudgetError("hom entry exceeds the cap")
                factors.append([tuple(cod.labels[i] for i in f.table) for f in enumerate_functions(dom, cod, cap)])
            entry[(gi, fi)] = FinSet.of(_cartesian(*factors))
    return Mat(src, tgt, entry)


def transpose(cell: MatTwoMorphism, y: Mat, z: Mat, cap: int = DEFAULT_CAP) -> MatTwoMorphism:
    """phi : x (x) y => z  becomes  x => [[y,z]]."""
    x_src = FinSet(cell.dom.src.size // y.src.size)
    x_tgt = FinSet(cell.dom.tgt.size // y.tgt.size)
    hom = mat_hom(y, z, cap)
    nb, nbp = y.src.size, y.tgt.size
    fhat = tuple(hom.src.index(tuple(cell.f(a * nb + b) for b in range(nb))) for a in range(x_src.size))
    ghat = tuple(hom.tgt.index(tuple(cell.g(a * nbp + b) for b in range(nbp))) for a in range(x_tgt.size))
    x = _left_factor(cell.dom, x_src, x_tgt, y)
    f = FinFunction(x.src, hom.src, fhat)
    g = FinFunction(x.tgt, hom.tgt, ghat)

    def fn(ap, a, t):
        fam = []
        for b in range(nb):
            for bp in range(nbp):
                fam.append(tuple(cell.apply(ap * nbp + bp, a * nb + b, (t, u)) for u in y[(bp, b)].labels))
        return tuple(fam)

    return MatTwoMorphism.from_tags(x, hom, f, g, fn)


def untranspose(cell: MatTwoMorphism, x: Mat, y: Mat, z: Mat) -> MatTwoMorphism:
    """psi : x => [[y,z]]  becomes  x (x) y => z."""
    hom = cell.cod
    dom = mat_tensor(x, y)
    nb, nbp = y.src.size, y.tgt.size
    f = FinFunction(dom.src, z.src, tuple(hom.src.labels[cell.f(a)][b] for a in x.src for b in y.src))
    g = FinFunction(dom.tgt, z.tgt, tuple(hom.tgt.labels[cell.g(a)][b] for a in x.tgt for b in y.tgt))

    def fn(bb, aa, t):
        ap, bp = divmod(bb, nbp)
        a, b = divmod(aa, nb)
        s, u = t
        fam = cell.apply(ap, a, s)
        k = b * nbp + bp
        return fam[k][y[(bp, b)].index(u)]

    return MatTwoMorphism.from_tags(dom, z, f, g, fn)


def _left_factor(t: Mat, src: FinSet, tgt: FinSet, y: Mat) -> Mat:
    """Recover x from the tags of x (x) y (requires every y entry used to be inhabited)."""
    entry = {}
    for ap in range(tgt.size):
        for a in range(src.size):
            seen = []
            for bp in range(y.tgt.size):
                for b in range(y.src.size):
                    for s, _ in t[(ap * y.tgt.size + bp, a * y.src.size + b)].labels:
                        if s not in seen:
                            seen.append(s)
            entry[(ap, a)] = FinSet.of(seen)
    return Mat(src, tgt, entry)


def enumerate_cells(x: Mat, y: Mat, cap: int = DEFAULT_CAP) -> Iterator[MatTwoMorphism]:
    """Every 2-morphism x => y over every pair of vertical maps."""
    for f in enumerate_functions(x.src, y.src, cap):
        for g in enumerate_functions(x.tgt, y.tgt, cap):
            keys = x.keys()
            choices = [list(enumerate_functions(x[k], y[(g(k[0]), f(k[1]))], cap)) for k in keys]
            total = 1
            for c in choices:
                total *= len(c)
            if total > cap:
                raise EnumerationBudgetError("cell enumeration exceeds the cap")
            for combo in _cartesian(*choices):
                yield MatTwoMorphism(x, y, f, g, dict(zip(keys, combo)))


def count_cells(x: Mat, y: Mat, cap: int = DEFAULT_CAP) -> int:
    total = 0
    for f in enumerate_functions(x.src, y.src, cap):
        for g in enumerate_functions(x.tgt, y.tgt, cap):
            n = 1
            for (b, a) in x.keys():
                n *= y[(g(b), f(a))].size ** x[(b, a)].size
            total += n
    return total


# -- companions, conjoints, tabulators -------------------------------------------

def companion_conjoint(f: FinFunction) -> tuple[Mat, Mat]:
    comp = Mat.build(f.dom, f.cod, lambda b, a: [UNIT_TAG] if f(a) == b else [])
    conj = Mat.build(f.cod, f.dom, lambda a, b: [UNIT_TAG] if f(a) == b else [])
    return comp, conj


def companion_cells(f: FinFunction):
    """(p1, q1, p2, q2): p1 : f_* => id_B, q1 : id_A => f_*, p2 : id_A => f^*, q2 : f^* => id_B."""
    comp, conj = companion_conjoint(f)
    A, B = f.dom, f.cod
    idA, idB = FinFunction.identity(A), FinFunction.identity(B)
    keep = lambda b, a, t: UNIT_TAG
    p1 = MatTwoMorphism.from_tags(comp, identity_mat(B), f, idB, keep)
    q1 = MatTwoMorphism.from_tags(identity_mat(A), comp, idA, f, keep)
    p2 = MatTwoMorphism.from_tags(identity_mat(A), conj, f, idA, keep)
    q2 = MatTwoMorphism.from_tags(conj, identity_mat(B), idB, f, keep)
    return p1, q1, p2, q2


def tabulator(x: Mat) -> tuple[FinSet, FinFunction, FinFunction, MatTwoMorphism]:
    tags = [(a, b, t) for a in range(x.src.size) for b in range(x.tgt.size) for t in x[(b, a)].labels]
    T = FinSet.of(tags)
    ps = FinFunction(T, x.src, tuple(a for a, _, _ in tags))
    pt = FinFunction(T, x.tgt, tuple(b for _, b, _ in tags))
    cell = MatTwoMorphism.from_tags(identity_mat(T), x, ps, pt, lambda j, i, _: T.labels[i][2])
    return T, ps, pt, cell


def factor_through_tabulator(x: Mat, theta: MatTwoMorphism) -> FinFunction:
    """The unique h : X -> Tx with theta = (id_h) ; pi, for theta : id_X => x."""
    T, _, _, _ = tabulator(x)
    X = theta.dom.src
    return FinFunction(X, T, tuple(T.index((theta.f(i), theta.g(i), theta.apply(i, i, UNIT_TAG))) for i in X))
