"""Symmetric multicategories: tree terms, presentations, Table views, the BV tensor and algebras.

A tree is either a leaf (an int, the input index it carries) or a node
(generator, children).  A generator is typed by (input colours, output colour).
Identities are the separate elements ('#id', colour).  Generators act freely,
so a planar tree with labelled leaves is already a normal form of the free
multicategory; presented ones are quotients computed by congruence closure.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product as _cartesian
from typing import Sequence

from ..catmon import TruncatedError
from ..finkit import DEFAULT_CAP, EnumerationBudgetError, ShapeError, UnionFind
from ..promod import Monad, MonadTensor
from ..seqcells import TableCell, all_perms, key, perm_inverse

ID = "#id"


def is_identity(t) -> bool:
    return isinstance(t, tuple) and len(t) == 2 and t[0] == ID


def is_leaf(t) -> bool:
    return isinstance(t, int)


@dataclass(frozen=True)
class TreeTerm:
    """A tree over a signature with its typing; `tree` is the raw nested tuple."""

    tree: object
    sig: tuple

    def profile(self):
        return tree_profile(dict(self.sig), self.tree)


# -- basic tree operations -------------------------------------------------------------

def tree_size(t) -> int:
    if is_leaf(t) or is_identity(t):
        return 0
    return 1 + sum(tree_size(c) for c in t[1])


def tree_leaves(t) -> list[int]:
    if is_leaf(t):
        return [t]
    if is_identity(t):
        return [0]
    return [l for c in t[1] for l in tree_leaves(c)]


def tree_arity(t) -> int:
    return len(tree_leaves(t))


def tree_profile(sig: dict, t) -> tuple:
    if is_identity(t):
        return ((t[1],), t[1])
    ins = {}

    def walk(s, colour):
        if is_leaf(s):
            ins[s] = colour
            return
        g, children = s
        gin, gout = sig[g]
        if gout != colour and colour is not None:
            raise ShapeError(f"generator {g!r} has output {gout!r}, expected {colour!r}")
        if len(gin) != len(children):
            raise ShapeError(f"generator {g!r} has arity {len(gin)}")
        for c, col in zip(children, gin):
            walk(c, col)

    if is_leaf(t):
        raise ShapeError("a bare leaf needs a colour; use an identity")
    walk(t, None)
    n = len(ins)
    if sorted(ins) != list(range(n)):
        raise ShapeError("leaf labels must be 0..n-1")
    return (tuple(ins[i] for i in range(n)), sig[t[0]][1])


def relabel(t, f):
    if is_leaf(t):
        return f[t]
    if is_identity(t):
        return t
    return (t[0], tuple(relabel(c, f) for c in t[1]))


def tree_act(t, s):
    """t.s : the new input i is old input s[i]."""
    if is_identity(t):
        return t
    inv = perm_inverse(s)
    return relabel(t, inv)


def as_tree(t):
    """Identities become bare leaves so they can be grafted."""
    return 0 if is_identity(t) else t


def graft(root, children: Sequence, labels: Sequence[int], colour=None):
    """Plug children[k] into input k of root; labels[p] is the final label of the
    p-th child input in order (child 0's inputs first)."""
    offs, acc = [], 0
    for ch in children:
        offs.append(acc)
        acc += tree_arity(ch) if not is_identity(ch) else 1
    subs = []
    for k, ch in enumerate(children):
        n = tree_arity(ch) if not is_identity(ch) else 1
        subs.append(relabel(as_tree(ch), {i: labels[offs[k] + i] for i in range(n)}))
    if is_identity(root):
        out = subs[0]
    else:
        out = relabel(root, {k: subs[k] for k in range(len(subs))})
    if is_leaf(out):
        return (ID, colour)
    return out


def substitute_at(t, k: int, sub, sub_arity: int):
    """Plug `sub` (leaves 0..sub_arity-1) at leaf k of t, shifting other labels."""
    def f(l):
        if l < k:
            return l
        if l > k:
            return l + sub_arity - 1
        return relabel(sub, {i: k + i for i in range(sub_arity)})

    if is_identity(t):
        return sub
    n = tree_arity(t)
    return relabel(t, {l: f(l) for l in range(n)})


# -- enumeration ----------------------------------------------------------------------

def _skeletons(sig: dict, colour, size: int, memo: dict) -> list:
    """Planar trees of exactly `size` nodes with output colour, leaves as ('?', colour)."""
    k = (colour, size)
    if k in memo:
        return memo[k]
    out = []
    if size == 0:
        out.append(("?", colour))
    else:
        for g, (ins, o) in sorted(sig.items(), key=lambda kv: key(kv[0])):
            if o != colour:
                continue
            for split in _compositions(size - 1, len(ins)):
                opts = [_skeletons(sig, c, s, memo) for c, s in zip(ins, split)]
                for combo in _cartesian(*opts):
                    out.append((g, tuple(combo)))
    memo[k] = out
    return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _skeleton_holes(s) -> int:
    if s[0] == "?":
        return 1
    return sum(_skeleton_holes(c) for c in s[1])


def _fill(s, labels, pos):
    if s[0] == "?":
        v = labels[pos[0]]
        pos[0] += 1
        return v
    return (s[0], tuple(_fill(c, labels, pos) for c in s[1]))


def enumerate_trees(sig: dict, colours: Sequence, max_size: int, max_arity: int) -> list:
    """Identities and all labelled trees with at most max_size nodes and arity <= max_arity."""
    memo = {}
    out = [(ID, c) for c in colours]
    for c in colours:
        for size in range(1, max_size + 1):
            for sk in _skeletons(sig, c, size, memo):
                n = _skeleton_holes(sk)
                if n > max_arity:
                    continue
                for labels in permutations(range(n)):
                    out.append(_fill(sk, labels, [0]))
    return out


# -- presentations ----------------------------------------------------------------------

@dataclass
class Certificate:
    budget: int
    N: int
    exact_arities: tuple
    exact_by_size: bool
    closed: bool
    spills: int
    nullary: bool

    def as_dict(self) -> dict:
        return {"budget": self.budget, "truncation": self.N, "exact_arities": list(self.exact_arities),
                "exact_by_size": self.exact_by_size, "closed": self.closed, "spills": self.spills,
                "nullary_generators": self.nullary}


@dataclass(eq=False)
class SymMulticat:
    """Presented form: colours, signature, relation pairs of trees, a size budget and an arity truncation."""

    colours: tuple
    sig: dict
    relations: tuple = ()
    budget: int = 3
    N: int = 3
    name: str = "M"

    def __post_init__(self):
        self.colours = tuple(self.colours)
        for g in self.sig:
            if g == ID:
                raise ShapeError("reserved generator name")
        for l, r in self.relations:
            pl = self.profile(l)
            if not is_leaf(r):
                pr = self.profile(r)
            else:
                pr = ((pl[1],), pl[1]) if r == 0 else None
            if pl != pr:
                raise ShapeError(f"relation sides have different types: {l!r} / {r!r}")

    def profile(self, t):
        if is_leaf(t):
            raise ShapeError("bare leaf")
        return tree_profile(self.sig, t)

    def check(self) -> list[str]:
        errs = []
        for l, r in self.relations:
            try:
                self.profile(l)
            except ShapeError as exc:
                errs.append(str(exc))
        return errs

    @cached_property
    def view(self) -> "TableView":
        return table_view(self)

    def monad(self) -> Monad:
        return self.view.monad

    def with_truncation(self, N: int, budget: int | None = None) -> "SymMulticat":
        return SymMulticat(self.colours, self.sig, self.relations,
                           self.budget if budget is None else budget, N, self.name)


def free_multicat(colours, sig: dict, budget: int = 3, N: int = 3, name: str = "Free") -> SymMulticat:
    return SymMulticat(tuple(colours), dict(sig), (), budget, N, name)


def trivial_multicat(colours=("*",), N: int = 1, name: str = "nabla1") -> SymMulticat:
    """Only identities: the unit for the tensor when single-coloured."""
    return SymMulticat(tuple(colours), {}, (), 0, N, name)


def _norm_rel(t, colour):
    return (ID, colour) if is_leaf(t) else t


@dataclass(eq=False)
class TableView:
    multicat: SymMulticat
    elements: list
    rep_of: dict
    monad: Monad
    certificate: Certificate

    def entry(self, inputs, output) -> list:
        return self.monad.cell.entry(tuple(inputs), output)

    def sizes_by_arity(self) -> dict:
        return self.monad.cell.sizes_by_arity()

    def normalise(self, t):
        return _normalise(self, t)


def table_view(M: SymMulticat) -> TableView:
    """Congruence closure on all trees inside the budget."""
    sig, N, budget = M.sig, M.N, M.budget
    trees = enumerate_trees(sig, M.colours, budget, N)
    idx = {t: i for i, t in enumerate(trees)}
    prof = {t: (tree_profile(sig, t)) for t in trees}
    uf = UnionFind(len(trees))
    spills = set()
    queue = []
    for l, r in M.relations:
        queue.append((l, _norm_rel(r, tree_profile(sig, l)[1])))
    gens = sorted(sig.items(), key=lambda kv: key(kv[0]))
    while queue:
        p, q = queue.pop()
        ip, iq = idx.get(p), idx.get(q)
        if ip is None or iq is None:
            if ip is not None or iq is not None:
                known = p if ip is not None else q
                spills.add(len(prof[known][0]))
            continue
        if not uf.union(ip, iq):
            continue
        ins, out = prof[p]
        n = len(ins)
        for s in all_perms(n):
            queue.append((_act(p, s), _act(q, s)))
        for g, (gin, gout) in gens:
            # root extensions
            for slot, col in enumerate(gin):
                if col != out:
                    continue
                queue.append((_root_extend(g, gin, slot, p, n), _root_extend(g, gin, slot, q, n)))
            # leaf extensions
            for k in range(n):
                if ins[k] != gout:
                    continue
                sub = (g, tuple(range(len(gin))))
                queue.append((_leaf_extend(p, k, sub, len(gin)), _leaf_extend(q, k, sub, len(gin))))
    classes = {}
    for t in trees:
        classes.setdefault(uf.find(idx[t]), []).append(t)
    rep_of = {}
    for members in classes.values():
        rep = min(members, key=lambda t: (tree_size(t), key(t)))
        for t in members:
            rep_of[t] = rep
    reps = sorted(set(rep_of.values()), key=lambda t: (tree_size(t), key(t)))
    nullary = any(len(gin) == 0 for gin, _ in sig.values())
    unary = any(len(gin) == 1 for gin, _ in sig.values())
    size_preserving = all(tree_size(l) == tree_size(_norm_rel(r, None)) for l, r in M.relations)
    view = TableView(M, reps, rep_of, None, None)
    closed = _closure_certificate(view, gens) if not nullary else False
    verified = False
    if closed:
        # a closed model that satisfies the axioms and the relations is the presented
        # multicategory itself, whatever spilled during closure
        view.certificate = Certificate(budget, N, tuple(range(N + 1)), False, True, len(spills), False)
        view.monad = _monad_of(view)
        # without nullary generators a relation above N cannot reach the truncated part
        verified = not view.monad.check() and all(
            _normalise(view, l) == _normalise(view, _norm_rel(r, tree_profile(sig, l)[1]))
            for l, r in M.relations if tree_arity(l) <= N)
    exact = []
    for k in range(N + 1):
        if nullary:
            continue
        size_complete = not unary and (k == 0 or k - 1 <= budget) and k not in spills
        if size_complete or verified:
            exact.append(k)
    cert = Certificate(budget, N, tuple(exact), size_preserving and not spills, verified, len(spills), nullary)
    view.certificate = cert
    view.monad = _monad_of(view)
    return view


def _act(t, s):
    return tree_act(t, s)


def _root_extend(g, gin, slot, t, n):
    """g with t at `slot` and fresh leaves n, n+1, ... elsewhere."""
    children, nxt = [], n
    for j in range(len(gin)):
        if j == slot:
            children.append(as_tree(t))
        else:
            children.append(nxt)
            nxt += 1
    return (g, tuple(children))


def _leaf_extend(t, k, sub, m):
    if is_identity(t):
        return sub
    return substitute_at(t, k, sub, m)


def _normalise(view: TableView, t):
    """Bottom-up reduction to a representative; raises TruncatedError outside the budget."""
    if is_identity(t):
        return t
    if t in view.rep_of:
        return view.rep_of[t]
    if is_leaf(t):
        raise ShapeError("bare leaf")
    g, children = t
    new = []
    for c in children:
        if is_leaf(c):
            new.append(c)
            continue
        labels = sorted(tree_leaves(c))
        rank = {l: i for i, l in enumerate(labels)}
        std = relabel(c, rank)
        r = _normalise(view, std)
        back = {i: l for i, l in enumerate(labels)}
        new.append(labels[0] if is_identity(r) else relabel(r, back))
    t2 = (g, tuple(new))
    if t2 in view.rep_of:
        return view.rep_of[t2]
    raise TruncatedError(f"tree of size {tree_size(t2)} and arity {tree_arity(t2)} lies outside "
                         f"budget {view.multicat.budget} / truncation {view.multicat.N}")


def _closure_certificate(view: TableView, gens) -> bool:
    """Every one-generator extension of every representative reduces to a representative."""
    sig = view.multicat.sig
    N = view.multicat.N
    for r in view.elements:
        ins, out = tree_profile(sig, r)
        n = len(ins)
        for g, (gin, gout) in gens:
            if n + len(gin) - 1 > N:
                continue
            for slot, col in enumerate(gin):
                if col == out:
                    try:
                        _normalise(view, _root_extend(g, gin, slot, r, n))
                    except TruncatedError:
                        return False
            for k in range(n):
                if ins[k] == gout:
                    try:
                        _normalise(view, _leaf_extend(r, k, (g, tuple(range(len(gin)))), len(gin)))
                    except TruncatedError:
                        return False
    return True


def _monad_of(view: TableView) -> Monad:
    M = view.multicat
    sig = M.sig
    profiles = {r: tree_profile(sig, r) for r in view.elements}
    inexact = [k for k in range(M.N + 1) if k not in view.certificate.exact_arities]

    def act(e, s):
        return _normalise(view, tree_act(e, s))

    cell = TableCell(M.colours, M.colours, M.N, profiles, act, None, inexact, M.name)

    def mult(e):
        _, root, children, lab = e
        colour = cell.output(root)
        return _normalise(view, graft(root, children, lab, colour))

    return Monad(M.colours, cell, mult, lambda c: (ID, c), M.name)


# -- BV tensor ----------------------------------------------------------------------------

def _map_gens(t, f):
    if is_leaf(t) or is_identity(t):
        return t
    return (f(t[0]), tuple(_map_gens(c, f) for c in t[1]))


def left_gen(g, d):
    return ("L", g, d)


def right_gen(c, g):
    return ("R", c, g)


def interchange_relation(M: SymMulticat, N: SymMulticat, mu, nu) -> tuple:
    """mu applied to copies of nu equals nu applied to copies of mu, inputs on the grid j*m + i."""
    cin, c = M.sig[mu]
    din, d = N.sig[nu]
    m, n = len(cin), len(din)
    lhs = (left_gen(mu, d), tuple((right_gen(cin[i], nu), tuple(j * m + i for j in range(n))) for i in range(m)))
    rhs = (right_gen(c, nu), tuple((left_gen(mu, din[j]), tuple(j * m + i for i in range(m))) for j in range(n)))
    return lhs, rhs


def bv_tensor(M: SymMulticat, N: SymMulticat, budget: int | None = None, trunc: int | None = None) -> SymMulticat:
    """Colours are pairs; generators (mu, d) and (c, nu); relations are each factor's at every
    colour of the other plus every interchange instance."""
    colours = tuple((c, d) for c in M.colours for d in N.colours)
    sig = {}
    for g, (gin, gout) in M.sig.items():
        for d in N.colours:
            sig[left_gen(g, d)] = (tuple((c, d) for c in gin), (gout, d))
    for g, (gin, gout) in N.sig.items():
        for c in M.colours:
            sig[right_gen(c, g)] = (tuple((c, d) for d in gin), (c, gout))
    rels = []
    for l, r in M.relations:
        for d in N.colours:
            rels.append((_map_gens(l, lambda g: left_gen(g, d)), _map_gens(r, lambda g: left_gen(g, d))))
    for l, r in N.relations:
        for c in M.colours:
            rels.append((_map_gens(l, lambda g: right_gen(c, g)), _map_gens(r, lambda g: right_gen(c, g))))
    for mu in sorted(M.sig, key=key):
        for nu in sorted(N.sig, key=key):
            rels.append(interchange_relation(M, N, mu, nu))
    budget = max(M.budget, N.budget) if budget is None else budget
    trunc = max(M.N, N.N) if trunc is None else trunc
    T = SymMulticat(colours, sig, tuple(rels), budget, trunc, f"({M.name}(x){N.name})")
    T.factors = (M, N)
    return T


def bv_monad_tensor(M: SymMulticat, N: SymMulticat, T: SymMulticat | None = None) -> MonadTensor:
    """The comparison pi : M [x] N -> M (x) N sends (mu, nu) to mu on top of copies of nu."""
    T = T or bv_tensor(M, N)
    view = T.view

    def pi(e):
        _, mu, nu, lab = e
        (cin, c), (din, d) = tree_profile(M.sig, mu), tree_profile(N.sig, nu)
        m, n = len(cin), len(din)
        top = _map_gens(mu, lambda g: left_gen(g, d))
        children = [_map_gens(nu, lambda g, ci=ci: right_gen(ci, g)) if not is_identity(nu) else (ID, (ci, d))
                    for ci in cin]
        # leaf (i, j) of the grafted tree is input j of copy i, carrying label lab[j*m + i]
        labels = [lab[j * m + i] for i in range(m) for j in range(n)]
        return _normalise(view, graft(top, children, labels, (c, d)))

    return MonadTensor(M.monad(), N.monad(), view.monad, pi)


def tree_profile_any(M: SymMulticat, t):
    return tree_profile(M.sig, t)


def unit_iso_check(M: SymMulticat) -> dict:
    """nabla1 (x) M against M: relabel colours (*, c) -> c and generators (*, g) -> g, then compare Tables."""
    one = trivial_multicat()
    T = bv_tensor(one, M, M.budget, M.N)
    tv, mv = T.view, M.view

    def back(t):
        if is_identity(t):
            return (ID, t[1][1])
        return _map_gens(t, lambda g: g[2])

    image = [back(t) for t in tv.elements]
    bij = sorted(image, key=key) == sorted(mv.elements, key=key) and len(set(image)) == len(image)
    hom = True
    if bij:
        fmap = dict(zip(tv.elements, image))
        tcell, mcell = tv.monad.aa, mv.monad.aa
        for e in tcell.elements():
            _, root, ch, lab = e
            img = mcell.canon(("o", fmap[root], tuple(fmap[c] for c in ch), lab))
            left, right = _try(tv.monad.mult, e), _try(mv.monad.mult, img)
            if (left is None) != (right is None) or (left is not None and fmap[left] != right):
                hom = False
                break
    return {"bijective": bij, "preserves_composition": hom, "size": len(image), "ok": bij and hom}


def _try(fn, e):
    """Composites that leave the budget are compared only when both sides do."""
    try:
        return fn(e)
    except TruncatedError:
        return None


def swap_iso_check(M: SymMulticat, N: SymMulticat) -> dict:
    """M (x) N -> N (x) M by swapping colour pairs and generator sides."""
    A, B = bv_tensor(M, N), bv_tensor(N, M)
    av, bv = A.view, B.view

    def sw(g):
        side, x, y = g
        return ("R", y, x) if side == "L" else ("L", y, x)

    def f(t):
        if is_identity(t):
            return (ID, (t[1][1], t[1][0]))
        return bv.normalise(_map_gens(t, sw))

    image = [f(t) for t in av.elements]
    bij = len(set(image)) == len(image) == len(bv.elements)
    return {"bijective": bij, "size": len(image), "ok": bij}


# -- algebras ------------------------------------------------------------------------------

def evaluate(sig: dict, interp: dict, t, args: Sequence):
    if is_leaf(t):
        return args[t]
    if is_identity(t):
        return args[0]
    g, children = t
    vals = tuple(evaluate(sig, interp, c, args) for c in children)
    return interp[g][vals]


def _carrier(sizes, colour) -> int:
    return sizes[colour] if isinstance(sizes, dict) else sizes


def _relation_holds(M: SymMulticat, sizes, interp, l, r) -> bool:
    ins, _ = M.profile(l)
    for args in _cartesian(*[range(_carrier(sizes, c)) for c in ins]):
        if evaluate(M.sig, interp, l, args) != evaluate(M.sig, interp, _norm_rel(r, None), args):
            return False
    return True


def enumerate_algebras(M: SymMulticat, sizes, cap: int = DEFAULT_CAP):
    """All interpretations of the generators on finite carriers satisfying the relations.

    Works on the presentation, so it is exact however large the multicategory is."""
    gens = sorted(M.sig, key=key)
    domains, total = [], 1
    for g in gens:
        gin, gout = M.sig[g]
        dom = list(_cartesian(*[range(_carrier(sizes, c)) for c in gin]))
        domains.append((dom, _carrier(sizes, gout)))
        total *= _carrier(sizes, gout) ** len(dom)
    if total > cap:
        raise EnumerationBudgetError(f"{total} interpretations exceed the cap {cap}")
    needed = {}
    for l, r in M.relations:
        used = _gens_in(l) | _gens_in(_norm_rel(r, None))
        last = max(gens.index(g) for g in used) if used else -1
        needed.setdefault(last, []).append((l, r))
    interp = {}
    results = []

    def rec(i):
        if i == len(gens):
            results.append(dict(interp))
            return
        dom, k = domains[i]
        for values in _cartesian(range(k), repeat=len(dom)):
            interp[gens[i]] = dict(zip(dom, values))
            if all(_relation_holds(M, sizes, interp, l, r) for l, r in needed.get(i, [])):
                rec(i + 1)
        interp.pop(gens[i], None)

    if all(_relation_holds(M, sizes, interp, l, r) for l, r in needed.get(-1, [])):
        rec(0)
    return results


def count_algebras(M: SymMulticat, sizes, cap: int = DEFAULT_CAP) -> int:
    return len(enumerate_algebras(M, sizes, cap))


def _gens_in(t) -> set:
    if is_leaf(t) or is_identity(t):
        return set()
    out = {t[0]}
    for c in t[1]:
        out |= _gens_in(c)
    return out


def count_algebras_in_algebras(M: SymMulticat, N: SymMulticat, sizes, cap: int = DEFAULT_CAP) -> int:
    """M-structures on N-algebras whose operations are N-homomorphisms, counted directly.

    Carriers are indexed by colour pairs (c, d); `sizes` is an int or a dict on pairs."""
    count = 0
    n_algs = _product_algebras(N, M.colours, lambda c, d: _carrier(sizes, (c, d)), cap, side=1)
    for nalg in n_algs:
        for malg in _product_algebras(M, N.colours, lambda c, d: _carrier(sizes, (c, d)), cap, side=0):
            if _interchanges(M, N, sizes, malg, nalg):
                count += 1
    return count


def _product_algebras(P: SymMulticat, other_colours, size, cap, side):
    """Families of P-algebras indexed by the other factor's colours, as dicts keyed by (g, other)."""
    per = []
    for o in other_colours:
        sz = {c: (size(c, o) if side == 0 else size(o, c)) for c in P.colours}
        per.append([(o, a) for a in enumerate_algebras(P, sz, cap)])
    for combo in _cartesian(*per):
        out = {}
        for o, a in combo:
            for g, table in a.items():
                out[(g, o)] = table
        yield out


def _interchanges(M, N, sizes, malg, nalg) -> bool:
    for mu, (cin, c) in M.sig.items():
        for nu, (din, d) in N.sig.items():
            m, n = len(cin), len(din)
            ranges = [range(_carrier(sizes, (cin[i], din[j]))) for i in range(m) for j in range(n)]
            for flat in _cartesian(*ranges):
                x = [[flat[i * n + j] for j in range(n)] for i in range(m)]
                rows = tuple(nalg[(nu, cin[i])][tuple(x[i])] for i in range(m))
                lhs = malg[(mu, d)][rows]
                cols = tuple(malg[(mu, din[j])][tuple(x[i][j] for i in range(m))] for j in range(n))
                rhs = nalg[(nu, c)][cols]
                if lhs != rhs:
                    return False
    return True
