"""Horizontal cells of symmetric sequences, with canonical elements.

A cell x : A -> B has elements with a profile (inputs, output): a tuple of
B-colours and one A-colour.  Sigma acts on the right: in e.s the i-th input is
input s[i] of e.  Matrices are the cells whose elements all have exactly one
input, which is how the category-level code reuses everything here.

Composite elements are stored as ('o', root, children, labels): `root` lives in
the root cell, children[j] is plugged into input j of the root, and labels[p]
is the input index of the whole element carried by the p-th leaf in planar
order.  Tensor elements are ('x', left, right, labels) with grid position
j*m + i for input i of the left factor and input j of the right one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product as _cartesian
from typing import Callable, Iterable, Sequence

from .finkit import ShapeError, UnionFind


# -- permutations ----------------------------------------------------------------

def identity_perm(n: int) -> tuple:
    return tuple(range(n))


def perm_inverse(s: Sequence[int]) -> tuple:
    inv = [0] * len(s)
    for i, v in enumerate(s):
        inv[v] = i
    return tuple(inv)


def perm_compose(s: Sequence[int], t: Sequence[int]) -> tuple:
    """(s t)(i) = s(t(i))."""
    return tuple(s[t[i]] for i in range(len(t)))


def argsort(values: Sequence) -> tuple:
    return tuple(sorted(range(len(values)), key=lambda i: values[i]))


def all_perms(n: int) -> list[tuple]:
    return list(permutations(range(n)))


def key(e) -> str:
    return repr(e)


# -- cells -------------------------------------------------------------------------

class Cell:
    """Common interface; subclasses fill in `_enumerate`, `_profile`, `act`, `canon`."""

    src: tuple
    tgt: tuple
    N: int
    name: str = "cell"

    def __init__(self):
        self._elements = None
        self._profiles = {}
        self._by_output = None
        self._by_profile = None

    def elements(self) -> list:
        if self._elements is None:
            self._elements = sorted(set(self._enumerate()), key=key)
        return self._elements

    def profile(self, e) -> tuple:
        p = self._profiles.get(e)
        if p is None:
            p = self._profile(e)
            self._profiles[e] = p
        return p

    def inputs(self, e) -> tuple:
        return self.profile(e)[0]

    def output(self, e):
        return self.profile(e)[1]

    def arity(self, e) -> int:
        return len(self.profile(e)[0])

    def by_output(self, colour) -> list:
        if self._by_output is None:
            table = {}
            for e in self.elements():
                table.setdefault(self.output(e), []).append(e)
            self._by_output = table
        return self._by_output.get(colour, [])

    def entry(self, inputs: tuple, output) -> list:
        if self._by_profile is None:
            table = {}
            for e in self.elements():
                table.setdefault(self.profile(e), []).append(e)
            self._by_profile = table
        return self._by_profile.get((tuple(inputs), output), [])

    def profiles(self) -> list:
        self.entry((), None)
        return sorted(self._by_profile, key=key)

    def has_nullary(self) -> bool:
        return any(self.arity(e) == 0 for e in self.elements())

    def exact(self, arity: int) -> bool:
        return arity <= self.N and arity not in self.inexact

    def fully_known(self) -> bool:
        return self.bound is not None and self.bound <= self.N and all(
            self.exact(k) for k in range(self.bound + 1))

    def size(self) -> int:
        return len(self.elements())

    def sizes_by_arity(self) -> dict:
        out = {}
        for e in self.elements():
            out[self.arity(e)] = out.get(self.arity(e), 0) + 1
        return out

    def check_action(self) -> list[str]:
        """Group-action laws for every element (exhaustive below truncation)."""
        errs = []
        for e in self.elements():
            n = self.arity(e)
            ins, out = self.profile(e)
            if self.act(e, identity_perm(n)) != e:
                errs.append(f"identity does not act trivially on {e!r}")
            perms = all_perms(n)
            for s in perms:
                es = self.act(e, s)
                if self.profile(es) != (tuple(ins[s[i]] for i in range(n)), out):
                    errs.append(f"action moves {e!r} to the wrong profile")
                    continue
                for t in perms:
                    if self.act(es, t) != self.act(e, perm_compose(s, t)):
                        errs.append(f"action is not associative at {e!r}")
                        break
        return errs


class TableCell(Cell):
    """A cell given by explicit elements, profiles, and an action function or table."""

    def __init__(self, src, tgt, N: int, profiles: dict, act=None, bound=None, inexact=(), name="table"):
        super().__init__()
        self.src, self.tgt, self.N = tuple(src), tuple(tgt), N
        self._table_profiles = dict(profiles)
        self._act = act
        self.bound = bound
        self.inexact = frozenset(inexact)
        self.name = name

    def _enumerate(self):
        return [e for e, p in self._table_profiles.items() if len(p[0]) <= self.N]

    def _profile(self, e):
        return self._table_profiles[e]

    def act(self, e, s):
        if self._act is None or all(i == v for i, v in enumerate(s)):
            return e
        if callable(self._act):
            return self._act(e, tuple(s))
        return self._act[(e, tuple(s))]

    def canon(self, e):
        return e


def free_action_cell(src, tgt, N, gens: dict, name="free") -> TableCell:
    """Elements (g, s) for each generator g with profile (inputs, output) and each s in Sigma_n."""
    profiles = {}
    for g, (ins, out) in gens.items():
        for s in all_perms(len(ins)):
            if len(ins) <= N:
                profiles[(g, s)] = (tuple(ins[s[i]] for i in range(len(ins))), out)

    def act(e, s):
        g, t = e
        return (g, perm_compose(t, s))

    bound = max((len(i) for i, _ in gens.values()), default=0)
    return TableCell(src, tgt, N, profiles, act, bound, (), name)


def trivial_action_cell(src, tgt, N, points: dict, name="points") -> TableCell:
    """Elements fixed by Sigma; each point's inputs must be constant up to reordering (single colour)."""
    for g, (ins, _) in points.items():
        if len(set(ins)) > 1:
            raise ShapeError("a Sigma-fixed element needs a constant input list")
    bound = max((len(i) for i, _ in points.values()), default=0)
    return TableCell(src, tgt, N, points, None, bound, (), name)


class UnitCell(Cell):
    def __init__(self, colours, N: int = 1):
        super().__init__()
        self.src = self.tgt = tuple(colours)
        self.N = max(N, 1)
        self.bound = 1
        self.inexact = frozenset()
        self.name = "id"

    def _enumerate(self):
        return [("id", c) for c in self.src]

    def _profile(self, e):
        return ((e[1],), e[1])

    def act(self, e, s):
        return e

    def canon(self, e):
        return e


class ComposeCell(Cell):
    """y o x : the root lives in x and y-elements are plugged into its inputs."""

    def __init__(self, y: Cell, x: Cell, N: int | None = None):
        super().__init__()
        if tuple(x.tgt) != tuple(y.src):
            raise ShapeError("cells are not composable")
        self.y, self.x = y, x
        self.src, self.tgt = x.src, y.tgt
        self.N = min(x.N, y.N) if N is None else N
        self.name = f"({y.name} o {x.name})"
        ynull = y.has_nullary()
        xfull = x.fully_known()
        inexact = set()
        for k in range(self.N + 1):
            xr = range(self.N + 1) if ynull else range(k + 1)
            ok = all(x.exact(n) for n in xr) and all(y.exact(j) for j in range(k + 1))
            if ynull and not xfull:
                ok = False
            if not ok:
                inexact.add(k)
        self.inexact = frozenset(inexact)
        self.bound = x.bound * y.bound if x.bound is not None and y.bound is not None else None

    def _enumerate(self):
        y, x, N = self.y, self.x, self.N
        out = set()
        for ex in x.elements():
            ins = x.inputs(ex)
            options = [y.by_output(c) for c in ins]
            for combo in _bounded_choices(options, y, N):
                sizes = [y.arity(e) for e in combo]
                for lab in _shuffles(sizes):
                    out.add(self.canon(("o", ex, tuple(combo), lab)))
        return out

    def _profile(self, e):
        _, ex, eys, lab = e
        leaves = [c for ey in eys for c in self.y.inputs(ey)]
        ins = [None] * len(leaves)
        for p, c in enumerate(leaves):
            ins[lab[p]] = c
        return (tuple(ins), self.x.output(ex))

    def canon(self, raw):
        _, ex, eys, lab = raw
        y = self.y
        blocks = []
        off = 0
        for ey in eys:
            k = y.arity(ey)
            labels = lab[off:off + k]
            off += k
            tau = argsort(labels)
            blocks.append((y.act(ey, tau), tuple(labels[t] for t in tau)))
        keys = [(0, b[1][0], "") if b[1] else (1, 0, key(b[0])) for b in blocks]
        order = sorted(range(len(blocks)), key=lambda j: keys[j])
        order = self._break_ties(ex, order, keys)
        new_ex = self.x.act(ex, tuple(order))
        new_eys = tuple(blocks[j][0] for j in order)
        new_lab = tuple(l for j in order for l in blocks[j][1])
        return ("o", new_ex, new_eys, new_lab)

    def _break_ties(self, ex, order, keys):
        """Children that are identical nullary elements can be swapped freely; pick the least root."""
        groups = {}
        for pos, j in enumerate(order):
            if keys[j][0] == 1:
                groups.setdefault(keys[j], []).append(pos)
        groups = [g for g in groups.values() if len(g) > 1]
        if not groups:
            return order
        best, best_key = order, None
        slot_sets = [g for g in groups]
        for choice in _cartesian(*[list(permutations(g)) for g in slot_sets]):
            cand = list(order)
            for slots, perm in zip(slot_sets, choice):
                for p, q in zip(slots, perm):
                    cand[p] = order[q]
            k = key(self.x.act(ex, tuple(cand)))
            if best_key is None or k < best_key:
                best, best_key = cand, k
        return best

    def act(self, e, s):
        if all(i == v for i, v in enumerate(s)):
            return e
        inv = perm_inverse(s)
        _, ex, eys, lab = e
        return self.canon(("o", ex, eys, tuple(inv[l] for l in lab)))


def _bounded_choices(options, y: Cell, N: int):
    """All tuples choosing one element from each option list with total arity <= N."""
    result = []

    def rec(i, acc, total):
        if i == len(options):
            result.append(tuple(acc))
            return
        for e in options[i]:
            k = y.arity(e)
            if total + k <= N:
                acc.append(e)
                rec(i + 1, acc, total + k)
                acc.pop()

    rec(0, [], 0)
    return result


def _shuffles(sizes: Sequence[int]) -> list[tuple]:
    """Label sequences that are increasing inside each block."""
    m = sum(sizes)
    out = []
    for lab in permutations(range(m)):
        off, ok = 0, True
        for k in sizes:
            block = lab[off:off + k]
            if any(block[i] > block[i + 1] for i in range(k - 1)):
                ok = False
                break
            off += k
        if ok:
            out.append(tuple(lab))
    return out


class TensorCell(Cell):
    """The arithmetic product x (x) y on colour pairs."""

    def __init__(self, x: Cell, y: Cell, N: int | None = None):
        super().__init__()
        self.x, self.y = x, y
        self.src = tuple((a, b) for a in x.src for b in y.src)
        self.tgt = tuple((a, b) for a in x.tgt for b in y.tgt)
        self.N = min(x.N, y.N) if N is None else N
        self.name = f"({x.name} [x] {y.name})"
        inexact = set()
        for k in range(self.N + 1):
            if k == 0:
                ok = (not x.has_nullary() or y.fully_known()) and (not y.has_nullary() or x.fully_known())
                ok = ok and x.exact(0) and y.exact(0)
            else:
                ok = all(x.exact(j) and y.exact(j) for j in range(1, k + 1))
            if not ok:
                inexact.add(k)
        self.inexact = frozenset(inexact)
        self.bound = x.bound * y.bound if x.bound is not None and y.bound is not None else None

    def _enumerate(self):
        out = set()
        x, y = self.x, self.y
        for ex in x.elements():
            m = x.arity(ex)
            for ey in y.elements():
                n = y.arity(ey)
                if m * n > self.N:
                    continue
                for lab in permutations(range(m * n)):
                    out.add(self.canon(("x", ex, ey, tuple(lab))))
        return out

    def _profile(self, e):
        _, ex, ey, lab = e
        xi, yi = self.x.inputs(ex), self.y.inputs(ey)
        m = len(xi)
        ins = [None] * len(lab)
        for g, l in enumerate(lab):
            j, i = divmod(g, m)
            ins[l] = (xi[i], yi[j])
        return (tuple(ins), (self.x.output(ex), self.y.output(ey)))

    def canon(self, raw):
        _, ex, ey, lab = raw
        x, y = self.x, self.y
        m, n = x.arity(ex), y.arity(ey)
        if m * n == 0:
            bx = min((x.act(ex, p) for p in all_perms(m)), key=key)
            by = min((y.act(ey, p) for p in all_perms(n)), key=key)
            return ("x", bx, by, ())
        best = None
        for pi in all_perms(m):
            for rho in all_perms(n):
                new = tuple(lab[rho[j] * m + pi[i]] for j in range(n) for i in range(m))
                if best is None or new < best[0]:
                    best = (new, pi, rho)
        new, pi, rho = best
        return ("x", x.act(ex, pi), y.act(ey, rho), new)

    def act(self, e, s):
        if all(i == v for i, v in enumerate(s)):
            return e
        inv = perm_inverse(s)
        _, ex, ey, lab = e
        return self.canon(("x", ex, ey, tuple(inv[l] for l in lab)))


class QuotientCell(Cell):
    """Elements are least representatives of a Sigma-stable partition of the parent."""

    def __init__(self, parent: Cell, rep_of: dict, name="quotient"):
        super().__init__()
        self.parent = parent
        self.rep_of = rep_of
        self.src, self.tgt, self.N = parent.src, parent.tgt, parent.N
        self.inexact, self.bound = parent.inexact, parent.bound
        self.name = name

    def _enumerate(self):
        return set(self.rep_of.values())

    def _profile(self, e):
        return self.parent.profile(e)

    def act(self, e, s):
        return self.rep_of[self.parent.act(e, s)]

    def canon(self, e):
        return e

    def project(self, e):
        return self.rep_of[e]

    def members(self) -> dict:
        out = {}
        for e, r in self.rep_of.items():
            out.setdefault(r, []).append(e)
        return out


def quotient(parent: Cell, pairs: Iterable[tuple], name="quotient") -> QuotientCell:
    """Quotient by the least Sigma-stable equivalence containing the pairs."""
    elems = parent.elements()
    idx = {e: i for i, e in enumerate(elems)}
    uf = UnionFind(len(elems))
    for a, b in pairs:
        uf.union(idx[a], idx[b])
    # close under the action (pairs from equivariant maps are already stable; this guards the rest)
    changed = True
    while changed:
        changed = False
        for e in elems:
            r = elems[uf.find(idx[e])]
            if r == e:
                continue
            for s in all_perms(parent.arity(e)):
                if uf.union(idx[parent.act(e, s)], idx[parent.act(r, s)]):
                    changed = True
    rep_of = {}
    best = {}
    for e in elems:
        root = uf.find(idx[e])
        if root not in best or key(e) < key(best[root]):
            best[root] = e
    for e in elems:
        rep_of[e] = best[uf.find(idx[e])]
    return QuotientCell(parent, rep_of, name)


# -- trees -----------------------------------------------------------------------------

LEAF = "leaf"


def leaf(k: int) -> tuple:
    return (LEAF, k)


def is_leaf(t) -> bool:
    return t[0] == LEAF


def expand(cell: Cell, e, leaves: Sequence, through: tuple = ()) -> tuple:
    """Unfold nested composites into a tree of nodes ('node', cell, element, children).

    Quotient cells listed in `through` are unfolded into their parents as well.
    """
    if isinstance(cell, ComposeCell):
        _, ex, eys, lab = e
        children, off = [], 0
        for ey in eys:
            k = cell.y.arity(ey)
            children.append(expand(cell.y, ey, [leaves[lab[off + i]] for i in range(k)], through))
            off += k
        return expand(cell.x, ex, children, through)
    if isinstance(cell, QuotientCell) and any(cell is c for c in through):
        return expand(cell.parent, e, leaves, through)
    return ("node", cell, e, tuple(leaves))


def collapse(cell: Cell, tree) -> tuple:
    """Inverse of expand: (element, subtrees), element input k carrying subtrees[k]."""
    if isinstance(cell, ComposeCell):
        ex, subs = collapse(cell.x, tree)
        eys, planar = [], []
        for sub in subs:
            ey, ls = collapse(cell.y, sub)
            eys.append(ey)
            planar.extend(ls)
        raw = ("o", ex, tuple(eys), identity_perm(len(planar)))
        return cell.canon(raw), planar
    if is_leaf(tree) or not same_cell(tree[1], cell):
        got = "leaf" if is_leaf(tree) else tree[1].name
        raise ShapeError(f"expected a node of {cell.name}, found {got}")
    return tree[2], list(tree[3])


def same_cell(c: Cell, d: Cell) -> bool:
    """Identity of leaf cells, up to rebuilding tensors and units of the same pieces."""
    if c is d:
        return True
    if isinstance(c, TensorCell) and isinstance(d, TensorCell):
        return same_cell(c.x, d.x) and same_cell(c.y, d.y)
    if isinstance(c, UnitCell) and isinstance(d, UnitCell):
        return c.src == d.src
    return False


def rebracket(src: Cell, tgt: Cell, e, through: tuple = ()):
    n = src.arity(e)
    tree = expand(src, e, [leaf(k) for k in range(n)], through)
    out, leaves = collapse(tgt, tree)
    pos = {lf[1]: j for j, lf in enumerate(leaves)}
    return tgt.act(out, tuple(pos[i] for i in range(n)))


def build(cell: Cell, tree):
    """Collapse a tree whose leaves are leaf(0..n-1) and restore the input numbering."""
    out, leaves = collapse(cell, tree)
    pos = {lf[1]: j for j, lf in enumerate(leaves)}
    return cell.act(out, tuple(pos[i] for i in range(len(leaves))))


# -- maps ----------------------------------------------------------------------------

@dataclass(eq=False)
class CellMap:
    """A globular, Sigma-equivariant map of cells given by a function on elements."""

    dom: Cell
    cod: Cell
    fn: Callable
    name: str = "map"
    _table: dict = field(default=None, repr=False)

    def __call__(self, e):
        if self._table is not None and e in self._table:
            return self._table[e]
        v = self.fn(e)
        if self._table is None:
            self._table = {}
        self._table[e] = v
        return v

    def table(self) -> dict:
        return {e: self(e) for e in self.dom.elements()}

    def check(self) -> list[str]:
        errs = []
        for e in self.dom.elements():
            v = self(e)
            if self.cod.profile(v) != self.dom.profile(e):
                errs.append(f"{self.name} changes the profile of {e!r}")
                continue
            for s in all_perms(self.dom.arity(e)):
                if self(self.dom.act(e, s)) != self.cod.act(v, s):
                    errs.append(f"{self.name} is not equivariant at {e!r}")
                    break
        return errs

    def is_bijective(self) -> bool:
        vals = [self(e) for e in self.dom.elements()]
        return len(set(vals)) == len(vals) == len(self.cod.elements())

    def inverse(self) -> "CellMap":
        inv = {}
        for e in self.dom.elements():
            v = self(e)
            if v in inv:
                raise ShapeError(f"{self.name} is not injective")
            inv[v] = e
        if len(inv) != len(self.cod.elements()):
            raise ShapeError(f"{self.name} is not surjective")
        return CellMap(self.cod, self.dom, inv.__getitem__, f"{self.name}^-1")


def identity_map(c: Cell) -> CellMap:
    return CellMap(c, c, lambda e: e, f"id[{c.name}]")


def then(f: CellMap, g: CellMap, name=None) -> CellMap:
    return CellMap(f.dom, g.cod, lambda e: g(f(e)), name or f"{g.name}.{f.name}")


def hcompose(beta: CellMap, alpha: CellMap, dom: ComposeCell | None = None, cod: ComposeCell | None = None) -> CellMap:
    """Horizontal composite beta o alpha : y o x -> y' o x'."""
    dom = dom or ComposeCell(beta.dom, alpha.dom)
    cod = cod or ComposeCell(beta.cod, alpha.cod)

    def fn(e):
        _, ex, eys, lab = e
        return cod.canon(("o", alpha(ex), tuple(beta(ey) for ey in eys), lab))

    return CellMap(dom, cod, fn, f"({beta.name} o {alpha.name})")


def htensor(alpha: CellMap, beta: CellMap, dom: TensorCell | None = None, cod: TensorCell | None = None) -> CellMap:
    dom = dom or TensorCell(alpha.dom, beta.dom)
    cod = cod or TensorCell(alpha.cod, beta.cod)

    def fn(e):
        _, ex, ey, lab = e
        return cod.canon(("x", alpha(ex), beta(ey), lab))

    return CellMap(dom, cod, fn, f"({alpha.name} [x] {beta.name})")


def associator(z: Cell, y: Cell, x: Cell, dom=None, cod=None) -> CellMap:
    """(z o y) o x -> z o (y o x)."""
    dom = dom or ComposeCell(ComposeCell(z, y), x)
    cod = cod or ComposeCell(z, ComposeCell(y, x))
    return CellMap(dom, cod, lambda e: rebracket(dom, cod, e), "assoc")


def interchanger(dom: TensorCell, cod: ComposeCell) -> CellMap:
    """xi : (y1 o x1) (x) (y2 o x2) -> (y1 (x) y2) o (x1 (x) x2)."""
    c1, c2 = dom.x, dom.y
    root_cell, child_cell = cod.x, cod.y
    if not (isinstance(c1, ComposeCell) and isinstance(c2, ComposeCell)):
        raise ShapeError("interchanger needs composites on both sides")

    def fn(e):
        _, e1, e2, lab = e
        m1 = c1.arity(e1)
        _, ex1, eys1, lab1 = e1
        _, ex2, eys2, lab2 = e2
        n1, n2 = len(eys1), len(eys2)
        offs1 = _offsets([c1.y.arity(v) for v in eys1])
        offs2 = _offsets([c2.y.arity(v) for v in eys2])
        root = root_cell.canon(("x", ex1, ex2, identity_perm(n1 * n2)))
        children, labels = [], []
        for q in range(n2):
            for p in range(n1):
                k1, k2 = c1.y.arity(eys1[p]), c2.y.arity(eys2[q])
                children.append(child_cell.canon(("x", eys1[p], eys2[q], identity_perm(k1 * k2))))
                for t in range(k2):
                    for s in range(k1):
                        i = lab1[offs1[p] + s]
                        j = lab2[offs2[q] + t]
                        labels.append(lab[j * m1 + i])
        return cod.canon(("o", root, tuple(children), tuple(labels)))

    return CellMap(dom, cod, fn, "xi")


def _offsets(sizes):
    out, acc = [], 0
    for k in sizes:
        out.append(acc)
        acc += k
    return out


def left_unitor(x: Cell) -> CellMap:
    """x -> id o x (units plugged into every input)."""
    u = UnitCell(x.tgt, x.N)
    cod = ComposeCell(u, x)

    def fn(e):
        ins = x.inputs(e)
        return cod.canon(("o", e, tuple(("id", c) for c in ins), identity_perm(len(ins))))

    return CellMap(x, cod, fn, "lunit")


def right_unitor(x: Cell) -> CellMap:
    """x -> x o id (a unit at the root)."""
    u = UnitCell(x.src, x.N)
    cod = ComposeCell(x, u)

    def fn(e):
        return cod.canon(("o", ("id", x.output(e)), (e,), identity_perm(x.arity(e))))

    return CellMap(x, cod, fn, "runit")
