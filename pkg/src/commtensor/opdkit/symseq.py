"""Symmetric sequences: the S-construction, composite, arithmetic product and divided-powers hom."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Sequence

from ..finkit import DEFAULT_CAP, EnumerationBudgetError
from ..seqcells import (
    Cell,
    ComposeCell,
    TableCell,
    TensorCell,
    UnitCell,
    all_perms,
    free_action_cell,
    key,
    trivial_action_cell,
)

SymSeq = Cell


# -- the S-construction -----------------------------------------------------------------

@dataclass(frozen=True)
class SGroupoid:
    """Colour lists up to length N; a morphism u -> v is a permutation s with v[i] = u[s[i]]."""

    colours: tuple
    N: int

    def objects(self) -> list[tuple]:
        out = []
        for n in range(self.N + 1):
            out.extend(_cartesian(self.colours, repeat=n))
        return out

    def hom(self, u: Sequence, v: Sequence) -> list[tuple]:
        if len(u) != len(v):
            return []
        return [s for s in all_perms(len(u)) if all(v[i] == u[s[i]] for i in range(len(u)))]

    @staticmethod
    def concat(u: Sequence, v: Sequence) -> tuple:
        return tuple(u) + tuple(v)

    empty: tuple = ()


def s_construction(colours: Sequence, N: int = 3) -> SGroupoid:
    return SGroupoid(tuple(colours), N)


# -- constructors ---------------------------------------------------------------------

def free_symseq(src, tgt, gens: dict, N: int = 3, name: str = "x") -> TableCell:
    """Generators with free Sigma-action: gens maps a name to (inputs, output)."""
    return free_action_cell(src, tgt, N, gens, name)


def point_symseq(colour, arities: Sequence[int], N: int = 3, name: str = "pt") -> TableCell:
    """One Sigma-fixed element at each listed arity, single colour."""
    pts = {(name, n): (tuple([colour] * n), colour) for n in arities}
    return trivial_action_cell((colour,), (colour,), N, pts, name)


def unit_symseq(colours, N: int = 3) -> UnitCell:
    return UnitCell(colours, N)


def empty_symseq(src, tgt, N: int = 3, name: str = "0") -> TableCell:
    return TableCell(src, tgt, N, {}, None, 0, (), name)


def symseq_compose(y: Cell, x: Cell, N: int | None = None) -> ComposeCell:
    """(y o x)[c; a] as the coend over colour lists, computed on canonical orbit representatives."""
    return ComposeCell(y, x, N)


def arithmetic_product(x: Cell, y: Cell, N: int | None = None) -> TensorCell:
    return TensorCell(x, y, N)


def entries(c: Cell) -> dict:
    """{(inputs, output): [elements]} for every inhabited profile."""
    return {p: c.entry(*p) for p in c.profiles()}


def certification(c: Cell) -> dict:
    return {"truncation": c.N, "inexact_arities": sorted(c.inexact),
            "exact_arities": [k for k in range(c.N + 1) if c.exact(k)]}


# -- divided-powers hom ---------------------------------------------------------------------

def _grid_perm_right(m: int, n: int, rho) -> tuple:
    """id_m [x] rho on grid positions j*m + i."""
    return tuple(rho[g // m] * m + g % m for g in range(m * n))


def _grid_perm_left(m: int, n: int, pi) -> tuple:
    return tuple((g // m) * m + pi[g % m] for g in range(m * n))


def _orbit_reps(c: Cell) -> list:
    seen, reps = set(), []
    for e in c.elements():
        if e in seen:
            continue
        reps.append(e)
        for s in all_perms(c.arity(e)):
            seen.add(c.act(e, s))
    return reps


class HomCell(TableCell):
    """[[y, z]] : its elements of profile (a', a) are equivariant families
    y[b'; b] -> z[a' [x] b'; (a, b)], stored as a tuple of images over y's elements."""

    def __init__(self, y: Cell, z: Cell, N: int | None = None, cap: int = DEFAULT_CAP, name: str | None = None):
        self.y, self.z = y, z
        A = tuple(dict.fromkeys(a for a, _ in z.src))
        Ap = tuple(dict.fromkeys(a for a, _ in z.tgt))
        ymax = max((y.arity(e) for e in y.elements()), default=0)
        known = y.fully_known()
        if N is None:
            N = z.N // max(1, ymax) if ymax else z.N
        profiles = {}
        inexact = set()
        yel = y.elements()
        self._yel = yel
        self._ypos = {e: i for i, e in enumerate(yel)}
        reps = _orbit_reps(y)
        for m in range(N + 1):
            if not known or any(not z.exact(m * y.arity(e)) for e in yel):
                inexact.add(m)
            for aprime in _cartesian(Ap, repeat=m):
                for a in A:
                    for fam in self._families(aprime, a, reps, cap):
                        profiles[fam] = (tuple(aprime), a)
        super().__init__(A, Ap, N, profiles, self._act_fn, None, inexact, name or f"[[{y.name},{z.name}]]")
        self._prof = profiles

    def _families(self, aprime, a, reps, cap):
        y, z = self.y, self.z
        m = len(aprime)
        choices = []
        for r in reps:
            bins, b = y.profile(r)
            n = len(bins)
            target_ins = tuple((aprime[g % m], bins[g // m]) for g in range(m * n))
            stab = [s for s in all_perms(n) if y.act(r, s) == r]
            opts = [v for v in z.entry(target_ins, (a, b))
                    if all(z.act(v, _grid_perm_right(m, n, s)) == v for s in stab)]
            choices.append(opts)
        total = 1
        for o in choices:
            total *= len(o)
        if total > cap:
            raise EnumerationBudgetError(f"{total} hom elements exceed the cap {cap}")
        for combo in _cartesian(*choices):
            images = [None] * len(self._yel)
            for r, v in zip(reps, combo):
                n = y.arity(r)
                for s in all_perms(n):
                    images[self._ypos[y.act(r, s)]] = z.act(v, _grid_perm_right(m, n, s))
            yield ("hom", tuple(aprime), a, tuple(images))

    def _act_fn(self, f, pi):
        _, aprime, a, images = f
        m = len(aprime)
        new = tuple(None if v is None else self.z.act(v, _grid_perm_left(m, self.y.arity(e), pi))
                    for e, v in zip(self._yel, images))
        return ("hom", tuple(aprime[pi[i]] for i in range(m)), a, new)

    def apply(self, f, e):
        return f[3][self._ypos[e]]


def symseq_hom(y: Cell, z: Cell, N: int | None = None, cap: int = DEFAULT_CAP) -> HomCell:
    return HomCell(y, z, N, cap)


def transpose(theta: dict, x: Cell, y: Cell, hom: HomCell) -> dict:
    """theta : x [x] y -> z  gives  x -> [[y, z]],  e |-> (e' |-> theta(e [x] e'))."""
    t = TensorCell(x, y, hom.z.N)
    out = {}
    for ex in x.elements():
        m = x.arity(ex)
        ins, a = x.profile(ex)
        images = []
        for ey in hom._yel:
            n = y.arity(ey)
            images.append(theta.get(t.canon(("x", ex, ey, tuple(range(m * n))))))
        out[ex] = ("hom", tuple(ins), a, tuple(images))
    return out


def equivariant_maps(dom: Cell, cod: Cell, cap: int = DEFAULT_CAP):
    """All profile-preserving equivariant maps, as dicts."""
    reps = _orbit_reps(dom)
    choices = []
    for r in reps:
        n = dom.arity(r)
        stab = [s for s in all_perms(n) if dom.act(r, s) == r]
        choices.append([v for v in cod.entry(*dom.profile(r)) if all(cod.act(v, s) == v for s in stab)])
    total = 1
    for o in choices:
        total *= len(o)
    if total > cap:
        raise EnumerationBudgetError(f"{total} maps exceed the cap {cap}")
    for combo in _cartesian(*choices):
        table = {}
        for r, v in zip(reps, combo):
            for s in all_perms(dom.arity(r)):
                table[dom.act(r, s)] = cod.act(v, s)
        yield table


def adjunction_count(x: Cell, y: Cell, z: Cell, cap: int = DEFAULT_CAP) -> dict:
    """|Hom(x [x] y, z)| against |Hom(x, [[y, z]])|, plus injectivity of transposition."""
    t = TensorCell(x, y, z.N)
    hom = HomCell(y, z, x.N, cap)
    left = list(equivariant_maps(t, z, cap))
    right = sum(1 for _ in equivariant_maps(x, hom, cap))
    images = set()
    for theta in left:
        tr = transpose(theta, x, y, hom)
        images.add(tuple(sorted(((key(k), key(v)) for k, v in tr.items()))))
    return {"left": len(left), "right": right, "transpose_injective": len(images) == len(left),
            "ok": len(left) == right == len(images)}
