"""Bimodules between monads of cells: free bimodules, composition, the commuting tensor and interchange.

The engine works for any monads built from `seqcells` cells.  Categories give
monads whose elements all have one input, and then bimodules are profunctors;
`Profunctor` is the table-level view of that case.  Multicategories (see
`opdkit`) run through exactly the same functions.

Orientation: an element of a category monad for the morphism m : x -> y has
input y and output x, so that p[y; x] holds the elements with input y and
output x, matching the matrix convention a[y; x] = hom(x, y).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

from . import catmon
from .catmon import FinCategory
from .finkit import DEFAULT_CAP, FinFunction, FinSet, ShapeError, coequalize, enumerate_functions
from .seqcells import (
    Cell,
    CellMap,
    ComposeCell,
    QuotientCell,
    TableCell,
    TensorCell,
    all_perms,
    build,
    expand,
    hcompose,
    htensor,
    identity_map,
    identity_perm,
    interchanger,
    leaf,
    quotient,
    rebracket,
    then,
)


# -- monads -------------------------------------------------------------------------------

@dataclass(eq=False)
class Monad:
    colours: tuple
    cell: Cell
    mult_fn: Callable
    unit_fn: Callable
    name: str = "M"

    @cached_property
    def aa(self) -> ComposeCell:
        return ComposeCell(self.cell, self.cell)

    @cached_property
    def mult(self) -> CellMap:
        return CellMap(self.aa, self.cell, self.mult_fn, f"mu[{self.name}]")

    def unit(self, colour):
        return self.unit_fn(colour)

    def check(self) -> list[str]:
        a = self.cell
        errs = list(a.check_action()) + self.mult.check()
        for c in self.colours:
            u = self.unit(c)
            if a.profile(u) != ((c,), c):
                errs.append(f"unit at {c!r} has the wrong profile")
        for e in a.elements():
            ins, out = a.profile(e)
            left = self.aa.canon(("o", self.unit(out), (e,), identity_perm(len(ins))))
            right = self.aa.canon(("o", e, tuple(self.unit(c) for c in ins), identity_perm(len(ins))))
            if self.mult(left) != e or self.mult(right) != e:
                errs.append(f"unit law fails at {e!r}")
        triple = ComposeCell(a, self.aa)
        other = ComposeCell(self.aa, a)
        one = hcompose(identity_map(a), self.mult, triple, self.aa)
        two = hcompose(self.mult, identity_map(a), other, self.aa)
        for e in triple.elements():
            if self.mult(one(e)) != self.mult(two(rebracket(triple, other, e))):
                errs.append(f"associativity fails at {e!r}")
        return errs


def category_monad(C: FinCategory, colours: Sequence | None = None, name: str = "C") -> Monad:
    """A category as a monad on arity-one cells; colours default to object indices."""
    col = tuple(colours) if colours is not None else tuple(range(C.n_obj))
    profiles = {m: ((col[C.cod[m]],), col[C.dom[m]]) for m in range(C.n_mor)}
    cell = TableCell(col, col, 1, profiles, None, 1, (), name)
    pos = {c: i for i, c in enumerate(col)}

    def mult(e):
        _, f, (g,), _ = e
        return C.comp[(g, f)]

    return Monad(col, cell, mult, lambda c: C.ids[pos[c]], name)


@dataclass(eq=False)
class MonadTensor:
    """A tensor monad T of M1, M2 with the comparison pi : m1 [x] m2 -> t."""

    M1: Monad
    M2: Monad
    T: Monad
    pi_fn: Callable

    @cached_property
    def pi(self) -> CellMap:
        return CellMap(TensorCell(self.M1.cell, self.M2.cell), self.T.cell, self.pi_fn, "pi")


def category_tensor(A: FinCategory, B: FinCategory, budget: int = 12, ct=None) -> MonadTensor:
    """The commuting tensor of two categories as a monad tensor, colours are object pairs."""
    ct = ct or catmon.commuting_tensor(A, B, budget)
    T, U = ct.category, ct.universal
    nb = B.n_obj
    cols = tuple(divmod(k, nb) for k in range(T.n_obj))
    M1, M2 = category_monad(A, name="A"), category_monad(B, name="B")
    MT = category_monad(T, cols, "A(x)B")

    def pi(e):
        _, f, g, _ = e
        return T.comp[(U.phi1[(f, B.cod[g])], U.phi2[(A.dom[f], g)])]

    out = MonadTensor(M1, M2, MT, pi)
    out.commuting = ct
    return out


# -- bimodules --------------------------------------------------------------------------

@dataclass(eq=False)
class Bimodule:
    """p : A -+-> B with rho : p o a -> p (a at the root) and lam : b o p -> p."""

    A: Monad
    B: Monad
    cell: Cell
    rho_fn: Callable
    lam_fn: Callable
    name: str = "p"

    @cached_property
    def pa(self) -> ComposeCell:
        return ComposeCell(self.cell, self.A.cell)

    @cached_property
    def bp(self) -> ComposeCell:
        return ComposeCell(self.B.cell, self.cell)

    @cached_property
    def rho(self) -> CellMap:
        return CellMap(self.pa, self.cell, self.rho_fn, f"rho[{self.name}]")

    @cached_property
    def lam(self) -> CellMap:
        return CellMap(self.bp, self.cell, self.lam_fn, f"lam[{self.name}]")

    @cached_property
    def action(self) -> CellMap:
        """alpha : b o p o a -> p."""
        F = ComposeCell(self.B.cell, self.pa)
        inner = hcompose(identity_map(self.B.cell), self.rho, F, self.bp)
        return then(inner, self.lam, f"alpha[{self.name}]")

    def project(self, e):
        return self.cell.project(e) if isinstance(self.cell, QuotientCell) else e

    def elements(self) -> list:
        return self.cell.elements()

    def check(self) -> list[str]:
        p, a, b = self.cell, self.A.cell, self.B.cell
        errs = list(p.check_action()) + self.rho.check() + self.lam.check()
        for e in p.elements():
            ins, out = p.profile(e)
            n = len(ins)
            if self.rho(self.pa.canon(("o", self.A.unit(out), (e,), identity_perm(n)))) != e:
                errs.append(f"right unit fails at {e!r}")
            if self.lam(self.bp.canon(("o", e, tuple(self.B.unit(c) for c in ins), identity_perm(n)))) != e:
                errs.append(f"left unit fails at {e!r}")
        # rho associativity over p o a o a
        dom = ComposeCell(self.pa, a)
        alt = ComposeCell(p, self.A.aa)
        one = hcompose(self.rho, identity_map(a), dom, self.pa)
        two = hcompose(identity_map(p), self.A.mult, alt, self.pa)
        for e in dom.elements():
            if self.rho(one(e)) != self.rho(two(rebracket(dom, alt, e))):
                errs.append(f"right action is not associative at {e!r}")
        # lam associativity over b o b o p
        dom = ComposeCell(b, self.bp)
        alt = ComposeCell(self.B.aa, p)
        one = hcompose(identity_map(b), self.lam, dom, self.bp)
        two = hcompose(self.B.mult, identity_map(p), alt, self.bp)
        for e in dom.elements():
            if self.lam(one(e)) != self.lam(two(rebracket(dom, alt, e))):
                errs.append(f"left action is not associative at {e!r}")
        # the two actions commute on b o p o a
        dom = ComposeCell(b, self.pa)
        alt = ComposeCell(self.bp, a)
        one = hcompose(identity_map(b), self.rho, dom, self.bp)
        two = hcompose(self.lam, identity_map(a), alt, self.pa)
        for e in dom.elements():
            if self.lam(one(e)) != self.rho(two(rebracket(dom, alt, e))):
                errs.append(f"actions do not commute at {e!r}")
        return errs


def identity_bimodule(M: Monad) -> Bimodule:
    return Bimodule(M, M, M.cell, M.mult_fn, M.mult_fn, f"id[{M.name}]")


@dataclass(eq=False)
class BimoduleMap:
    dom: Bimodule
    cod: Bimodule
    map: CellMap
    name: str = "theta"

    def __call__(self, e):
        return self.map(e)

    def check(self) -> list[str]:
        errs = self.map.check()
        d, c = self.dom, self.cod
        ra = hcompose(self.map, identity_map(d.A.cell), d.pa, c.pa)
        for e in d.pa.elements():
            if self.map(d.rho(e)) != c.rho(ra(e)):
                errs.append(f"{self.name} does not respect the right action at {e!r}")
        lb = hcompose(identity_map(d.B.cell), self.map, d.bp, c.bp)
        for e in d.bp.elements():
            if self.map(d.lam(e)) != c.lam(lb(e)):
                errs.append(f"{self.name} does not respect the left action at {e!r}")
        return errs

    def is_iso(self) -> bool:
        return self.map.is_bijective()

    def inverse(self) -> "BimoduleMap":
        return BimoduleMap(self.cod, self.dom, self.map.inverse(), f"{self.name}^-1")

    def then(self, other: "BimoduleMap") -> "BimoduleMap":
        return BimoduleMap(self.dom, other.cod, then(self.map, other.map), f"{other.name}.{self.name}")

    def same_as(self, other: "BimoduleMap") -> bool:
        return all(self(e) == other(e) for e in self.dom.elements())


def identity_bimodule_map(p: Bimodule) -> BimoduleMap:
    return BimoduleMap(p, p, identity_map(p.cell), f"id[{p.name}]")


# -- free bimodules ----------------------------------------------------------------------

def free_bimodule(x: Cell, A: Monad, B: Monad, name: str | None = None) -> Bimodule:
    """F(x) = b o x o a with the multiplications as actions."""
    if tuple(x.src) != tuple(A.colours) or tuple(x.tgt) != tuple(B.colours):
        raise ShapeError("cell boundary does not match the monads")
    a, b = A.cell, B.cell
    xa = ComposeCell(x, a)
    FX = ComposeCell(b, xa)
    over_a = ComposeCell(b, ComposeCell(x, A.aa))
    merge_a = hcompose(identity_map(b), hcompose(identity_map(x), A.mult, ComposeCell(x, A.aa), xa), over_a, FX)
    over_b = ComposeCell(B.aa, xa)
    merge_b = hcompose(B.mult, identity_map(xa), over_b, FX)
    pa = ComposeCell(FX, a)
    bp = ComposeCell(b, FX)

    def rho(e):
        return merge_a(rebracket(pa, over_a, e))

    def lam(e):
        return merge_b(rebracket(bp, over_b, e))

    F = Bimodule(A, B, FX, rho, lam, name or f"F({x.name})")
    F.generators = x
    return F


def unit_insertion(F: Bimodule) -> CellMap:
    """eta : x -> F(x), surrounding an element with identities."""
    x = F.generators
    A, B = F.A, F.B

    def fn(e):
        ins, out = x.profile(e)
        units = [("node", B.cell, B.unit(c), (leaf(k),)) for k, c in enumerate(ins)]
        tree = ("node", A.cell, A.unit(out), (expand(x, e, units),))
        return build(F.cell, tree)

    return CellMap(x, F.cell, fn, f"eta[{x.name}]")


def free_map(f: CellMap, Fdom: Bimodule, Fcod: Bimodule) -> BimoduleMap:
    """F(f) : F(x) -> F(y)."""
    A, B = Fdom.A, Fdom.B
    inner = hcompose(f, identity_map(A.cell), Fdom.cell.y, Fcod.cell.y)
    m = hcompose(identity_map(B.cell), inner, Fdom.cell, Fcod.cell)
    return BimoduleMap(Fdom, Fcod, m, f"F({f.name})")


def free_counit(p: Bimodule) -> BimoduleMap:
    """alpha : F(p) -> p, the action map."""
    F = free_bimodule(p.cell, p.A, p.B, f"F({p.name})")
    m = CellMap(F.cell, p.cell, p.action, f"alpha[{p.name}]")
    return BimoduleMap(F, p, m, f"alpha[{p.name}]")


def adjunction_counts(x: Cell, p: Bimodule, cap: int = DEFAULT_CAP) -> dict:
    """|Bimod(F x, p)| against |cells(x, p)|; restriction along eta must be injective."""
    F = free_bimodule(x, p.A, p.B)
    eta = unit_insertion(F)
    n_cells = _count_equivariant(x, p.cell, cap)
    restricted = set()
    n_bimod = 0
    for table in _equivariant_maps(F.cell, p.cell, cap):
        th = BimoduleMap(F, p, CellMap(F.cell, p.cell, table.__getitem__))
        if not th.check():
            n_bimod += 1
            restricted.add(tuple(table[eta(e)] for e in x.elements()))
    return {"bimodule_maps": n_bimod, "cells": n_cells,
            "bijective": n_bimod == n_cells == len(restricted)}


def _orbit_reps(c: Cell) -> list:
    seen, reps = set(), []
    for e in c.elements():
        if e in seen:
            continue
        reps.append(e)
        for s in all_perms(c.arity(e)):
            seen.add(c.act(e, s))
    return reps


def _equivariant_maps(dom: Cell, cod: Cell, cap: int):
    """All profile-preserving equivariant maps, choosing images of orbit representatives."""
    reps = _orbit_reps(dom)
    choices = []
    for r in reps:
        n = dom.arity(r)
        stab = [s for s in all_perms(n) if dom.act(r, s) == r]
        opts = [v for v in cod.entry(*dom.profile(r)) if all(cod.act(v, s) == v for s in stab)]
        choices.append(opts)
    total = 1
    for o in choices:
        total *= len(o)
    if total > cap:
        from .finkit import EnumerationBudgetError
        raise EnumerationBudgetError(f"{total} equivariant maps exceed the cap {cap}")
    from itertools import product as cart
    for combo in cart(*choices):
        table = {}
        for r, v in zip(reps, combo):
            for s in all_perms(dom.arity(r)):
                table[dom.act(r, s)] = cod.act(v, s)
        yield table


def _count_equivariant(dom: Cell, cod: Cell, cap: int) -> int:
    return sum(1 for _ in _equivariant_maps(dom, cod, cap))


def resolution(p: Bimodule) -> dict:
    """The reflexive pair F(F p) => F(p) -> p with its common section; checks recorded."""
    Fp = free_bimodule(p.cell, p.A, p.B, f"F({p.name})")
    FFp = free_bimodule(Fp.cell, p.A, p.B, f"FF({p.name})")
    gamma = CellMap(FFp.cell, Fp.cell, Fp.action, "mult")
    delta = free_map(CellMap(Fp.cell, p.cell, p.action), FFp, Fp).map
    section = free_map(unit_insertion(Fp), Fp, FFp).map
    alpha = CellMap(Fp.cell, p.cell, p.action, "alpha")
    return {"F": Fp, "FF": FFp, "gamma": gamma, "delta": delta, "section": section, "alpha": alpha}


def verify_resolution(p: Bimodule, cap: int = DEFAULT_CAP, probe_size: int = 2) -> dict:
    """Check the resolution is a coequaliser: it coequalises, the coequaliser of the pair in
    finite sets is carried bijectively onto p, and every cocone into a small probe set
    factors uniquely."""
    r = resolution(p)
    gamma, delta, section, alpha = r["gamma"], r["delta"], r["section"], r["alpha"]
    FF, F = r["FF"].cell.elements(), r["F"].cell.elements()
    P = p.cell.elements()
    fi = {e: i for i, e in enumerate(F)}
    pi_ = {e: i for i, e in enumerate(P)}
    S_FF, S_F, S_P = FinSet(len(FF)), FinSet(len(F)), FinSet(len(P))
    g = FinFunction(S_FF, S_F, tuple(fi[gamma(z)] for z in FF))
    d = FinFunction(S_FF, S_F, tuple(fi[delta(z)] for z in FF))
    al = FinFunction(S_F, S_P, tuple(pi_[alpha(w)] for w in F))
    reflexive = all(gamma(section(w)) == w and delta(section(w)) == w for w in F)
    coequalises = g.then(al).table == d.then(al).table
    Q, q = coequalize(g, d)
    # comparison Q -> p
    comp = {}
    ok_comp = True
    for w in range(len(F)):
        c = q(w)
        if comp.setdefault(c, al(w)) != al(w):
            ok_comp = False
    bijective = ok_comp and len(comp) == Q.size and len(set(comp.values())) == S_P.size
    # couniversality against every cocone into a probe set, restricted to a profile-free count
    probe = FinSet(probe_size)
    cocones = factored = 0
    if S_F.size and probe_size ** S_F.size <= cap:
        for h in enumerate_functions(S_F, probe, cap):
            if g.then(h).table != d.then(h).table:
                continue
            cocones += 1
            fac = {}
            ok = True
            for w in range(S_F.size):
                if fac.setdefault(al(w), h(w)) != h(w):
                    ok = False
                    break
            if ok and len(fac) == S_P.size:
                factored += 1
        couniversal = cocones == factored and cocones == probe_size ** S_P.size
    else:
        couniversal = bijective
    return {"reflexive": reflexive, "coequalises": coequalises, "bijective": bijective,
            "cocones": cocones, "couniversal": couniversal,
            "ok": reflexive and coequalises and bijective and couniversal}


# -- composition -----------------------------------------------------------------------

def bimodule_compose(q: Bimodule, p: Bimodule, name: str | None = None) -> Bimodule:
    """q . p as the coequaliser of lam o p and q o rho over q o b o p."""
    if p.B is not q.A and tuple(p.B.colours) != tuple(q.A.colours):
        raise ShapeError("middle monads differ")
    Q = ComposeCell(q.cell, p.cell)
    Z = ComposeCell(q.cell, p.bp)
    left = hcompose(identity_map(q.cell), p.lam, Z, Q)
    qb_p = ComposeCell(q.pa, p.cell)
    right = hcompose(q.rho, identity_map(p.cell), qb_p, Q)
    pairs = [(left(z), right(rebracket(Z, qb_p, z))) for z in Z.elements()]
    QC = quotient(Q, pairs, name or f"({q.name}.{p.name})")
    a, c = p.A.cell, q.B.cell
    pa_dom = ComposeCell(QC, a)
    q_pa = ComposeCell(q.cell, p.pa)
    rho_in = hcompose(identity_map(q.cell), p.rho, q_pa, Q)
    c_dom = ComposeCell(c, QC)
    cq_p = ComposeCell(q.bp, p.cell)
    lam_in = hcompose(q.lam, identity_map(p.cell), cq_p, Q)

    def rho(e):
        return QC.project(rho_in(rebracket(pa_dom, q_pa, e, through=(QC,))))

    def lam(e):
        return QC.project(lam_in(rebracket(c_dom, cq_p, e, through=(QC,))))

    out = Bimodule(p.A, q.B, QC, rho, lam, QC.name)
    out.factors = (q, p)
    return out


def compose_maps(tq: BimoduleMap, tp: BimoduleMap, dom: Bimodule, cod: Bimodule) -> BimoduleMap:
    """tq . tp between composites."""
    h = hcompose(tq.map, tp.map, dom.cell.parent, cod.cell.parent)
    return BimoduleMap(dom, cod, CellMap(dom.cell, cod.cell, lambda e: cod.cell.project(h(e))),
                       f"({tq.name}.{tp.name})")


def right_unit_iso(q: Bimodule, composite: Bimodule) -> BimoduleMap:
    """q . id -> q via the right action."""
    return BimoduleMap(composite, q, CellMap(composite.cell, q.cell,
                                              lambda e: q.rho(q.pa.canon(e))), "unit")


def left_unit_iso(p: Bimodule, composite: Bimodule) -> BimoduleMap:
    """id . p -> p via the left action."""
    return BimoduleMap(composite, p, CellMap(composite.cell, p.cell,
                                              lambda e: p.lam(p.bp.canon(e))), "unit")


def associator_iso(left: Bimodule, right: Bimodule) -> BimoduleMap:
    """(r.q).p -> r.(q.p), for left = compose(compose(r,q),p) and right = compose(r, compose(q,p))."""
    rq, p = left.factors
    r, q = rq.factors
    qp = right.factors[1]
    flat = ComposeCell(r.cell, ComposeCell(q.cell, p.cell))
    inner = hcompose(identity_map(r.cell), CellMap(qp.cell.parent, qp.cell, qp.cell.project),
                     flat, right.cell.parent)

    def fn(e):
        return right.cell.project(inner(rebracket(left.cell, flat, e, through=(left.cell, rq.cell))))

    return BimoduleMap(left, right, CellMap(left.cell, right.cell, fn), "assoc")


def well_defined_on_classes(theta: BimoduleMap) -> bool:
    """A map out of a quotient, defined on representatives, is constant on classes."""
    c = theta.dom.cell
    if not isinstance(c, QuotientCell):
        return True
    fn = theta.map.fn
    for e, r in c.rep_of.items():
        if fn(c.project(e)) != fn(r):
            return False
    return True


def free_composite_iso(Fy: Bimodule, Fx: Bimodule, composite: Bimodule, Fybx: Bimodule) -> BimoduleMap:
    """F(y) . F(x) -> F(y o b o x), merging the two middle layers."""
    x, y = Fx.generators, Fy.generators
    A, B, C = Fx.A, Fx.B, Fy.B
    bbx = ComposeCell(B.aa, x)
    y_bbx = ComposeCell(y, bbx)
    target = ComposeCell(C.cell, ComposeCell(y_bbx, A.cell))
    ybx = Fybx.generators
    merge = hcompose(identity_map(y), hcompose(B.mult, identity_map(x), bbx, ybx.x), y_bbx, ybx)
    full = hcompose(identity_map(C.cell), hcompose(merge, identity_map(A.cell), target.y, Fybx.cell.y),
                    target, Fybx.cell)

    def fn(e):
        return full(rebracket(composite.cell.parent, target, e))

    return BimoduleMap(composite, Fybx, CellMap(composite.cell, Fybx.cell, fn), "free-comp")


def free_composite_iso_checked(Fy, Fx, composite, Fybx) -> BimoduleMap:
    m = free_composite_iso(Fy, Fx, composite, Fybx)
    c = composite.cell
    full = m.map.fn
    for e, r in c.rep_of.items():
        if full(e) != full(r):
            raise ShapeError("free composite comparison is not constant on classes")
    return m


# -- tensor ------------------------------------------------------------------------------

def omega(x1: Cell, x2: Cell, M1: MonadTensor, M2: MonadTensor, F1=None, F2=None, FX=None) -> CellMap:
    """omega : F(x1) [x] F(x2) -> F(x1 [x] x2), interchange twice then pi on both outer layers.

    M1 tensors the source monads (A1, A2) and M2 the target monads (B1, B2).
    """
    A1, A2, TA = M1.M1, M1.M2, M1.T
    B1, B2, TB = M2.M1, M2.M2, M2.T
    F1 = F1 or free_bimodule(x1, A1, B1)
    F2 = F2 or free_bimodule(x2, A2, B2)
    X = TensorCell(x1, x2)
    FX = FX or free_bimodule(X, TA, TB)
    W = TensorCell(F1.cell, F2.cell)
    xa1, xa2 = F1.cell.x, F2.cell.x
    bb = TensorCell(B1.cell, B2.cell)
    aa = TensorCell(A1.cell, A2.cell)
    mid = TensorCell(xa1, xa2)
    step1 = interchanger(W, ComposeCell(bb, mid))
    inner_cod = ComposeCell(X, aa)
    step2 = hcompose(identity_map(bb), interchanger(mid, inner_cod), ComposeCell(bb, mid), ComposeCell(bb, inner_cod))
    step3 = hcompose(M2.pi, hcompose(identity_map(X), M1.pi, inner_cod, FX.cell.x),
                     ComposeCell(bb, inner_cod), FX.cell)
    out = CellMap(W, FX.cell, lambda e: step3(step2(step1(e))), "omega")
    return out


def bimodule_tensor(p1: Bimodule, p2: Bimodule, MA: MonadTensor, MB: MonadTensor, name: str | None = None) -> Bimodule:
    """p1 (x) p2 : coequaliser of F(u) and v-bar out of F(F p1 [x] F p2)."""
    X = TensorCell(p1.cell, p2.cell)
    TA, TB = MA.T, MB.T
    FX = free_bimodule(X, TA, TB, f"F({p1.name}[x]{p2.name})")
    Fp1 = free_bimodule(p1.cell, p1.A, p1.B)
    Fp2 = free_bimodule(p2.cell, p2.A, p2.B)
    W = TensorCell(Fp1.cell, Fp2.cell)
    u = htensor(p1.action, p2.action, W, X)
    v = omega(p1.cell, p2.cell, MA, MB, Fp1, Fp2, FX)
    FW = free_bimodule(W, TA, TB)
    Fu = free_map(u, FW, FX).map
    FFX = free_bimodule(FX.cell, TA, TB)
    Fv = free_map(v, FW, FFX).map
    pairs = [(Fu(z), FX.action(Fv(z))) for z in FW.cell.elements()]
    P = quotient(FX.cell, pairs, name or f"({p1.name}(x){p2.name})")

    def rho(e):
        return P.project(FX.rho(FX.pa.canon(e)))

    def lam(e):
        return P.project(FX.lam(FX.bp.canon(e)))

    out = Bimodule(TA, TB, P, rho, lam, P.name)
    eta = unit_insertion(FX)
    out.universal = CellMap(X, P, lambda e: P.project(eta(e)), "theta")
    out.parts = {"X": X, "FX": FX, "W": W, "u": u, "v": v, "FW": FW, "Fu": Fu,
                 "vbar": CellMap(FW.cell, FX.cell, lambda z: FX.action(Fv(z))),
                 "factors": (p1, p2), "MA": MA, "MB": MB}
    return out


def check_universal(t: Bimodule) -> list[str]:
    """The universal map is a commuting bimodule bimorphism: theta(u(w)) = alpha(F(theta)(v(w)))."""
    parts = t.parts
    theta = t.universal
    FX, u, v, W = parts["FX"], parts["u"], parts["v"], parts["W"]
    Ft = hcompose(identity_map(t.B.cell), hcompose(theta, identity_map(t.A.cell), FX.cell.y,
                                                   ComposeCell(t.cell, t.A.cell)),
                  FX.cell, ComposeCell(t.B.cell, ComposeCell(t.cell, t.A.cell)))
    errs = list(theta.check())
    for w in W.elements():
        if theta(u(w)) != t.action(Ft(v(w))):
            errs.append(f"universal bimorphism condition fails at {w!r}")
    return errs


def tensor_maps(t1: BimoduleMap, t2: BimoduleMap, dom: Bimodule, cod: Bimodule) -> BimoduleMap:
    """t1 (x) t2 between tensors, induced on the free presentations."""
    f = htensor(t1.map, t2.map, dom.parts["X"], cod.parts["X"])
    Ff = free_map(f, dom.parts["FX"], cod.parts["FX"]).map
    return BimoduleMap(dom, cod, CellMap(dom.cell, cod.cell, lambda e: cod.cell.project(Ff(e))),
                       f"({t1.name}(x){t2.name})")


def free_tensor_iso(F1: Bimodule, F2: Bimodule, tensor: Bimodule, Fx: Bimodule) -> dict:
    """F(x1) (x) F(x2) -> F(x1 [x] x2) through omega-bar, with the split-coequaliser checks.

    `tensor` must be bimodule_tensor(F1, F2, ...) and Fx the free bimodule on x1 [x] x2.
    """
    parts = tensor.parts
    MA, MB = parts["MA"], parts["MB"]
    x1, x2 = F1.generators, F2.generators
    FP = parts["FX"]               # F(F x1 [x] F x2)
    FFP = parts["FW"]              # F(F F x1 [x] F F x2)
    om = omega(x1, x2, MA, MB, F1, F2, Fx)
    FFx = free_bimodule(Fx.cell, Fx.A, Fx.B)
    F_om = free_map(om, FP, FFx).map
    om_bar = CellMap(FP.cell, Fx.cell, lambda z: Fx.action(F_om(z)), "omega-bar")
    s = free_map(htensor(unit_insertion(F1), unit_insertion(F2), Fx.generators, parts["X"]), Fx, FP).map
    FF1 = free_bimodule(F1.cell, F1.A, F1.B)
    FF2 = free_bimodule(F2.cell, F2.A, F2.B)
    # t = F(F(eta) [x] F(eta)): units go inside the generators, not around them
    Feta1 = free_map(unit_insertion(F1), F1, FF1).map
    Feta2 = free_map(unit_insertion(F2), F2, FF2).map
    t = free_map(htensor(Feta1, Feta2, parts["X"], parts["W"]), FP, FFP).map
    Fu, vbar = parts["Fu"], parts["vbar"]
    checks = {
        "coequalises": all(om_bar(Fu(z)) == om_bar(vbar(z)) for z in FFP.cell.elements()),
        "omega_s": all(om_bar(s(e)) == e for e in Fx.cell.elements()),
        "Fu_t": all(Fu(t(z)) == z for z in FP.cell.elements()),
        "vbar_t": all(vbar(t(z)) == s(om_bar(z)) for z in FP.cell.elements()),
    }
    comparison = CellMap(tensor.cell, Fx.cell, om_bar, "comparison")
    well = all(om_bar(e) == om_bar(r) for e, r in tensor.cell.rep_of.items())
    checks["well_defined"] = well
    checks["bijective"] = comparison.is_bijective()
    checks["ok"] = all(checks.values())
    return {"map": BimoduleMap(tensor, Fx, comparison, "free-tensor"), "omega": om, "checks": checks}


# -- interchange -----------------------------------------------------------------------------

@dataclass
class Interchange:
    map: BimoduleMap
    left: Bimodule
    right: Bimodule
    middle: BimoduleMap
    checks: dict = field(default_factory=dict)

    @property
    def invertible(self) -> bool:
        return self.map.is_iso()

    def entry_report(self) -> list[dict]:
        """Per-profile injectivity and surjectivity."""
        dom, cod = self.left.cell, self.right.cell
        rows = []
        for prof in sorted(set(dom.profiles()) | set(cod.profiles()), key=repr):
            src = dom.entry(*prof)
            img = [self.map(e) for e in src]
            rows.append({"profile": prof, "dom": len(src), "cod": len(cod.entry(*prof)),
                         "injective": len(set(img)) == len(img),
                         "surjective": set(img) == set(cod.entry(*prof))})
        return rows


def interchange(q1: Bimodule, p1: Bimodule, q2: Bimodule, p2: Bimodule,
                MA: MonadTensor, MB: MonadTensor, MC: MonadTensor) -> Interchange:
    """xi-tilde : (q1.p1)(x)(q2.p2) -> (q1(x)q2).(p1(x)p2), built from the free resolutions."""
    L = bimodule_tensor(bimodule_compose(q1, p1), bimodule_compose(q2, p2), MA, MC)
    R = bimodule_compose(bimodule_tensor(q1, q2, MB, MC), bimodule_tensor(p1, p2, MA, MB))
    free = {}
    for k, m in (("q1", q1), ("p1", p1), ("q2", q2), ("p2", p2)):
        free[k] = free_bimodule(m.cell, m.A, m.B, f"F({m.name})")
    alpha = {k: BimoduleMap(free[k], m, CellMap(free[k].cell, m.cell, m.action), f"alpha[{k}]")
             for k, m in (("q1", q1), ("p1", p1), ("q2", q2), ("p2", p2))}
    # middle row
    c1 = bimodule_compose(free["q1"], free["p1"])
    c2 = bimodule_compose(free["q2"], free["p2"])
    ML = bimodule_tensor(c1, c2, MA, MC)
    tq = bimodule_tensor(free["q1"], free["q2"], MB, MC)
    tp = bimodule_tensor(free["p1"], free["p2"], MA, MB)
    MR = bimodule_compose(tq, tp)
    xi_mid = free_interchange(free["q1"], free["p1"], free["q2"], free["p2"], c1, c2, ML, tq, tp, MR, MA, MB, MC)
    # columns
    col_l = tensor_maps(compose_maps(alpha["q1"], alpha["p1"], c1, L.parts["factors"][0]),
                        compose_maps(alpha["q2"], alpha["p2"], c2, L.parts["factors"][1]), ML, L)
    tq_r, tp_r = R.factors
    col_r = compose_maps(tensor_maps(alpha["q1"], alpha["q2"], tq, tq_r),
                         tensor_maps(alpha["p1"], alpha["p2"], tp, tp_r), MR, R)
    table, consistent = {}, True
    for w in ML.cell.elements():
        z = col_l(w)
        val = col_r(xi_mid(w))
        if table.setdefault(z, val) != val:
            consistent = False
    surjective_left = set(table) == set(L.cell.elements())
    xi = BimoduleMap(L, R, CellMap(L.cell, R.cell, table.__getitem__), "xi-tilde")
    checks = {"well_defined": consistent, "left_column_onto": surjective_left}
    if consistent and surjective_left:
        checks["bimodule_map"] = not xi.check()
    return Interchange(xi, L, R, xi_mid, checks)


def free_interchange(Fq1, Fp1, Fq2, Fp2, c1, c2, ML, tq, tp, MR, MA, MB, MC) -> BimoduleMap:
    """xi' for free bimodules as the composite of the displayed isomorphisms and F(xi; pi)."""
    B1, B2 = Fp1.B, Fp2.B
    y1, x1, y2, x2 = Fq1.generators, Fp1.generators, Fq2.generators, Fp2.generators
    # (Fq1.Fp1) (x) (Fq2.Fp2) ~ F(y1 b1 x1) (x) F(y2 b2 x2)
    g1 = ComposeCell(y1, ComposeCell(B1.cell, x1))
    g2 = ComposeCell(y2, ComposeCell(B2.cell, x2))
    Fg1 = free_bimodule(g1, Fp1.A, Fq1.B)
    Fg2 = free_bimodule(g2, Fp2.A, Fq2.B)
    i1 = free_composite_iso_checked(Fq1, Fp1, c1, Fg1)
    i2 = free_composite_iso_checked(Fq2, Fp2, c2, Fg2)
    T12 = bimodule_tensor(Fg1, Fg2, MA, MC)
    step1 = tensor_maps(i1, i2, ML, T12)
    # F(g1) (x) F(g2) ~ F(g1 [x] g2)
    G = TensorCell(g1, g2)
    FG = free_bimodule(G, MA.T, MC.T)
    step2 = free_tensor_iso(Fg1, Fg2, T12, FG)["map"]
    # F(xi ; pi) : F(g1 [x] g2) -> F((y1 [x] y2) o tb o (x1 [x] x2))
    Y, Xc = TensorCell(y1, y2), TensorCell(x1, x2)
    bx = ComposeCell(TensorCell(B1.cell, B2.cell), Xc)
    k1 = interchanger(G, ComposeCell(Y, TensorCell(g1.x, g2.x)))
    k2 = hcompose(identity_map(Y), interchanger(TensorCell(g1.x, g2.x), bx),
                  ComposeCell(Y, TensorCell(g1.x, g2.x)), ComposeCell(Y, bx))
    target = ComposeCell(Y, ComposeCell(MB.T.cell, Xc))
    k3 = hcompose(identity_map(Y), hcompose(MB.pi, identity_map(Xc), bx, target.x), ComposeCell(Y, bx), target)
    inner = CellMap(G, target, lambda e: k3(k2(k1(e))), "xi;pi")
    Ft = free_bimodule(target, MA.T, MC.T)
    step3 = free_map(inner, FG, Ft)
    # F(Y tb X) ~ F(Y) . F(X) ~ (Fq1 (x) Fq2) . (Fp1 (x) Fp2)
    FY = free_bimodule(Y, MB.T, MC.T)
    FXc = free_bimodule(Xc, MA.T, MB.T)
    comp = bimodule_compose(FY, FXc)
    step4 = free_composite_iso_checked(FY, FXc, comp, Ft).inverse()
    ty = free_tensor_iso(Fq1, Fq2, tq, FY)["map"].inverse()
    tx = free_tensor_iso(Fp1, Fp2, tp, FXc)["map"].inverse()
    step5 = compose_maps(ty, tx, comp, MR)
    out = step1.then(step2).then(step3).then(step4).then(step5)
    out.name = "xi'"
    return out


# -- profunctors between finite categories ----------------------------------------------------

@dataclass(eq=False)
class Profunctor:
    """p : A -+-> B with entries p[b; a] and action tables.

    lact[(g, e)] for g : y -> y' in B and e in p[y; x]; ract[(e, f)] for f : x' -> x in A.
    """

    src: FinCategory
    tgt: FinCategory
    entry: dict
    lact: dict
    ract: dict
    name: str = "p"

    def elements(self) -> list:
        return [(b, a, e) for (b, a), s in sorted(self.entry.items(), key=repr) for e in s.tags()]

    def locate(self) -> dict:
        return {e: (b, a) for (b, a), s in self.entry.items() for e in s.tags()}

    def to_bimodule(self, A: Monad | None = None, B: Monad | None = None) -> Bimodule:
        A = A or category_monad(self.src, name="A")
        B = B or category_monad(self.tgt, name="B")
        profiles = {e: ((B.colours[b],), A.colours[a]) for (b, a), s in self.entry.items() for e in s.tags()}
        cell = TableCell(A.colours, B.colours, 1, profiles, None, 1, (), self.name)

        def rho(e):
            _, f, (x,), _ = e
            return self.ract[(x, f)]

        def lam(e):
            _, x, (g,), _ = e
            return self.lact[(g, x)]

        return Bimodule(A, B, cell, rho, lam, self.name)

    def check(self) -> list[str]:
        return self.to_bimodule().check()


def profunctor_from_bimodule(p: Bimodule, src: FinCategory, tgt: FinCategory, name: str | None = None) -> Profunctor:
    """Tables of a bimodule over category monads; elements keep their canonical tags."""
    apos = {c: i for i, c in enumerate(p.A.colours)}
    bpos = {c: i for i, c in enumerate(p.B.colours)}
    entries = {}
    for e in p.cell.elements():
        (b,), a = p.cell.profile(e)
        entries.setdefault((bpos[b], apos[a]), []).append(e)
    entry = {}
    for b in range(tgt.n_obj):
        for a in range(src.n_obj):
            entry[(b, a)] = FinSet.of(entries.get((b, a), []))
    lact, ract = {}, {}
    for e in p.bp.elements():
        _, x, (g,), _ = e
        lact[(g, x)] = p.lam(e)
    for e in p.pa.elements():
        _, f, (x,), _ = e
        ract[(x, f)] = p.rho(e)
    return Profunctor(src, tgt, entry, lact, ract, name or p.name)


def hom_profunctor(C: FinCategory, name: str = "hom") -> Profunctor:
    """The identity profunctor: p[y; x] = hom(x, y)."""
    entry = {(y, x): FinSet.of(C.hom(x, y)) for y in range(C.n_obj) for x in range(C.n_obj)}
    lact = {(g, e): C.comp[(g, e)] for e in range(C.n_mor) for g in C.out_of(C.cod[e])}
    ract = {(e, f): C.comp[(e, f)] for e in range(C.n_mor) for f in C.into(C.dom[e])}
    return Profunctor(C, C, entry, lact, ract, name)


def from_functor(F: catmon.FinFunctor, name: str = "F_*") -> Profunctor:
    """The companion F_* : A -+-> B with F_*[b; a] = B(F a, b)."""
    A, B = F.src, F.tgt
    entry = {(b, a): FinSet.of(("c", a, m) for m in B.hom(F.on_obj[a], b))
             for b in range(B.n_obj) for a in range(A.n_obj)}
    lact, ract = {}, {}
    for (b, a), s in entry.items():
        for tag in s.tags():
            m = tag[2]
            for g in B.out_of(b):
                lact[(g, tag)] = ("c", a, B.comp[(g, m)])
            for f in A.into(a):
                ract[(tag, f)] = ("c", A.dom[f], B.comp[(m, F.on_mor[f])])
    return Profunctor(A, B, entry, lact, ract, name)


def conjoint(F: catmon.FinFunctor, name: str = "F^*") -> Profunctor:
    """F^* : B -+-> A with F^*[a; b] = B(b, F a)."""
    A, B = F.src, F.tgt
    entry = {(a, b): FinSet.of(("k", a, m) for m in B.hom(b, F.on_obj[a]))
             for a in range(A.n_obj) for b in range(B.n_obj)}
    lact, ract = {}, {}
    for (a, b), s in entry.items():
        for tag in s.tags():
            m = tag[2]
            for g in A.out_of(a):
                lact[(g, tag)] = ("k", A.cod[g], B.comp[(F.on_mor[g], m)])
            for f in B.into(b):
                ract[(tag, f)] = ("k", a, B.comp[(m, f)])
    return Profunctor(B, A, entry, lact, ract, name)


def free_profunctor(entries: dict, A: FinCategory, B: FinCategory, name: str = "F(x)") -> Profunctor:
    """F(x) for a matrix given as {(b, a): [tags]}; elements are triples (g, e, f)."""
    x = matrix_cell(entries, A, B, name)
    F = free_bimodule(x, category_monad(A, name="A"), category_monad(B, name="B"), name)
    P = profunctor_from_bimodule(F, A, B, name)
    # retag as (g, e, f): g in B after e, f in A before
    def triple(t):
        _, ra, (rb,), _ = t
        _, f, (e,), _ = ra
        return (rb, e, f)

    return _retag(P, triple)


def _retag(P: Profunctor, fn) -> Profunctor:
    entry = {k: FinSet.of(fn(t) for t in s.tags()) for k, s in P.entry.items()}
    lact = {(g, fn(t)): fn(v) for (g, t), v in P.lact.items()}
    ract = {(fn(t), f): fn(v) for (t, f), v in P.ract.items()}
    return Profunctor(P.src, P.tgt, entry, lact, ract, P.name)


def matrix_cell(entries: dict, A: FinCategory, B: FinCategory, name: str = "x") -> TableCell:
    """An arity-one cell from {(b, a): [tags]} with object-index colours."""
    profiles = {}
    for (b, a), tags in entries.items():
        for t in tags:
            if t in profiles:
                raise ShapeError(f"tag {t!r} appears in two entries")
            profiles[t] = ((b,), a)
    return TableCell(tuple(range(A.n_obj)), tuple(range(B.n_obj)), 1, profiles, None, 1, (), name)


def profunctor_compose(q: Profunctor, p: Profunctor) -> Profunctor:
    if q.src is not p.tgt:
        raise ShapeError("middle categories differ")
    B = category_monad(p.tgt, name="B")
    pb = p.to_bimodule(category_monad(p.src, name="A"), B)
    qb = q.to_bimodule(B, category_monad(q.tgt, name="C"))
    return profunctor_from_bimodule(bimodule_compose(qb, pb), p.src, q.tgt, f"{q.name}.{p.name}")


@dataclass
class ProfunctorTensor:
    profunctor: Profunctor
    bimodule: Bimodule
    src_tensor: MonadTensor
    tgt_tensor: MonadTensor
    oracle: dict


def profunctor_tensor(p1: Profunctor, p2: Profunctor, budget: int = 12) -> ProfunctorTensor:
    """The commuting tensor of profunctors, with the pointwise-product comparison checked."""
    MA = category_tensor(p1.src, p2.src, budget)
    MB = category_tensor(p1.tgt, p2.tgt, budget)
    b1 = p1.to_bimodule(MA.M1, MB.M1)
    b2 = p2.to_bimodule(MA.M2, MB.M2)
    t = bimodule_tensor(b1, b2, MA, MB)
    TA, TB = MA.commuting.category, MB.commuting.category
    prof = profunctor_from_bimodule(t, TA, TB, f"{p1.name}(x){p2.name}")
    oracle = pointwise_comparison(t, p1, p2, MA, MB)
    return ProfunctorTensor(prof, t, MA, MB, oracle)


def pointwise_comparison(t: Bimodule, p1: Profunctor, p2: Profunctor, MA: MonadTensor, MB: MonadTensor) -> dict:
    """Map the coequaliser onto the pointwise product p1[b1;a1] x p2[b2;a2] using the product
    decomposition of the boundary tensors, and test that it is a well-defined bijection."""
    WA, WB = MA.commuting.to_product, MB.commuting.to_product
    nA2, nB2 = p2.src.n_mor, p2.tgt.n_mor
    FX = t.parts["FX"]

    def split(W, n2, m):
        return divmod(W.on_mor[m], n2)

    def evaluate(z):
        _, ra, (rb,), _ = z             # ra in (X o ta), rb in tb
        _, fa, (xe,), _ = ra
        _, e1, e2, _ = xe
        f1, f2 = split(WA, nA2, fa)
        g1, g2 = split(WB, nB2, rb)
        v1 = p1.lact[(g1, p1.ract[(e1, f1)])]
        v2 = p2.lact[(g2, p2.ract[(e2, f2)])]
        return (v1, v2)

    table, well = {}, True
    for z in FX.cell.elements():
        c = t.cell.project(z)
        v = evaluate(z)
        if table.setdefault(c, v) != v:
            well = False
    pointwise = {(e1, e2) for (_, _, e1) in p1.elements() for (_, _, e2) in p2.elements()}
    loc1, loc2 = p1.locate(), p2.locate()
    entrywise = True
    for c, (v1, v2) in table.items():
        (b,), a = t.cell.profile(c)
        (bb1, aa1), (bb2, aa2) = loc1[v1], loc2[v2]
        if (b, a) != ((bb1, bb2), (aa1, aa2)):
            entrywise = False
    bij = well and len(table) == len(t.cell.elements()) and set(table.values()) == pointwise \
        and len(set(table.values())) == len(table)
    return {"well_defined": well, "bijective": bij, "entrywise": entrywise,
            "size": len(table), "pointwise_size": len(pointwise), "ok": well and bij and entrywise}


def profunctor_interchange(q1: Profunctor, p1: Profunctor, q2: Profunctor, p2: Profunctor,
                           budget: int = 12) -> Interchange:
    """xi-tilde for profunctors, building the three boundary tensors."""
    if q1.src is not p1.tgt or q2.src is not p2.tgt:
        raise ShapeError("profunctors are not composable")
    MA = category_tensor(p1.src, p2.src, budget)
    MB = category_tensor(p1.tgt, p2.tgt, budget)
    MC = category_tensor(q1.tgt, q2.tgt, budget)
    return interchange(q1.to_bimodule(MB.M1, MC.M1), p1.to_bimodule(MA.M1, MB.M1),
                       q2.to_bimodule(MB.M2, MC.M2), p2.to_bimodule(MA.M2, MB.M2), MA, MB, MC)
