"""Finite categories as monads in Mat, their funny and commuting tensor products, and the hom constructions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as _cartesian
from typing import Iterable, Iterator, Sequence

from . import vmatrix as vm
from .finkit import (
    DEFAULT_CAP,
    EnumerationBudgetError,
    FinFunction,
    FinSet,
    ShapeError,
    UnionFind,
    equalize,
    product,
)


class TruncatedError(RuntimeError):
    """Raised when an operation needs a finite category but only a truncated presentation exists."""

    def __init__(self, message, presentation=None):
        super().__init__(message)
        self.presentation = presentation


# -- finite categories ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FinCategory:
    """Morphisms are global indices; comp[(g, f)] is g after f and is defined exactly when cod f = dom g."""

    objects: FinSet
    dom: tuple
    cod: tuple
    ids: tuple
    comp: dict
    names: tuple

    def __post_init__(self):
        for x, i in enumerate(self.ids):
            if self.dom[i] != x or self.cod[i] != x:
                raise ShapeError("identity has the wrong boundary")
        homs = {}
        for m in range(len(self.dom)):
            homs.setdefault((self.dom[m], self.cod[m]), []).append(m)
        object.__setattr__(self, "_homs", {k: tuple(v) for k, v in homs.items()})
        out = [[] for _ in self.objects]
        into = [[] for _ in self.objects]
        for m in range(len(self.dom)):
            out[self.dom[m]].append(m)
            into[self.cod[m]].append(m)
        object.__setattr__(self, "_out", tuple(map(tuple, out)))
        object.__setattr__(self, "_into", tuple(map(tuple, into)))

    @property
    def n_mor(self) -> int:
        return len(self.dom)

    @property
    def n_obj(self) -> int:
        return self.objects.size

    def hom(self, x: int, y: int) -> tuple:
        return self._homs.get((x, y), ())

    def hom_set(self, x: int, y: int) -> FinSet:
        return FinSet.of(self.hom(x, y))

    def out_of(self, x: int) -> tuple:
        return self._out[x]

    def into(self, y: int) -> tuple:
        return self._into[y]

    def compose(self, g: int, f: int) -> int:
        return self.comp[(g, f)]

    def is_identity(self, m: int) -> bool:
        return self.ids[self.dom[m]] == m

    def non_identities(self) -> list[int]:
        return [m for m in range(self.n_mor) if not self.is_identity(m)]

    def composable_pairs(self) -> Iterator[tuple[int, int]]:
        for f in range(self.n_mor):
            for g in self.out_of(self.cod[f]):
                yield g, f

    def obj_name(self, x: int):
        return self.objects.label(x)

    def hom_mat(self) -> vm.Mat:
        """The underlying matrix a with a[y;x] = hom(x, y); tags are morphism indices."""
        return vm.Mat.build(self.objects, self.objects, lambda y, x: self.hom(x, y))

    def monad(self):
        """(a, mu, eta) as matrix cells: mu : a o a => a and eta : id => a."""
        a = self.hom_mat()
        aa = vm.mat_compose(a, a)
        mu = vm.MatTwoMorphism.globular(aa, a, lambda z, x, t: self.comp[(t[1], t[2])])
        eta = vm.MatTwoMorphism.globular(vm.identity_mat(self.objects), a, lambda y, x, t: self.ids[x])
        return a, mu, eta

    def check_axioms(self) -> list[str]:
        errs = []
        for (g, f) in self.composable_pairs():
            h = self.comp.get((g, f))
            if h is None:
                errs.append(f"missing composite {g} o {f}")
            elif self.dom[h] != self.dom[f] or self.cod[h] != self.cod[g]:
                errs.append(f"composite {g} o {f} has the wrong boundary")
        if errs:
            return errs
        for f in range(self.n_mor):
            if self.comp[(f, self.ids[self.dom[f]])] != f or self.comp[(self.ids[self.cod[f]], f)] != f:
                errs.append(f"unit law fails at {f}")
        for f in range(self.n_mor):
            for g in self.out_of(self.cod[f]):
                gf = self.comp[(g, f)]
                for h in self.out_of(self.cod[g]):
                    if self.comp[(h, gf)] != self.comp[(self.comp[(h, g)], f)]:
                        errs.append(f"associativity fails at ({h},{g},{f})")
        return errs

    def summary(self) -> dict:
        return {"objects": self.n_obj, "morphisms": self.n_mor}


def make_category(objects: Sequence, morphisms: Sequence[tuple], rule) -> FinCategory:
    """Build from object labels, (name, dom, cod) triples for the non-identity morphisms,
    and rule(g_name, f_name) giving the name of g after f (identities are handled here)."""
    objs = FinSet.of(objects)
    names = [("id", o) for o in objects] + [m[0] for m in morphisms]
    dom = list(range(len(objects))) + [objs.index(m[1]) for m in morphisms]
    cod = list(range(len(objects))) + [objs.index(m[2]) for m in morphisms]
    idx = {n: i for i, n in enumerate(names)}
    n_obj = len(objects)
    comp = {}
    for f in range(len(names)):
        for g in range(len(names)):
            if cod[f] != dom[g]:
                continue
            if g < n_obj:
                comp[(g, f)] = f
            elif f < n_obj:
                comp[(g, f)] = g
            else:
                r = rule(names[g], names[f])
                comp[(g, f)] = idx[r] if r in idx else idx[("id", r)]
    return FinCategory(objs, tuple(dom), tuple(cod), tuple(range(n_obj)), comp, tuple(names))


def discrete(A: FinSet) -> FinCategory:
    labels = A.tags()
    n = A.size
    return FinCategory(FinSet.of(labels), tuple(range(n)), tuple(range(n)), tuple(range(n)),
                       {(i, i): i for i in range(n)}, tuple(("id", l) for l in labels))


def terminal() -> FinCategory:
    return discrete(FinSet.of(["*"]))


def monoid(elements: Sequence, mult, unit) -> FinCategory:
    """One-object category from a finite monoid given by its multiplication mult(g, f) = g after f."""
    others = [e for e in elements if e != unit]
    cat = make_category(["*"], [(e, "*", "*") for e in others],
                        lambda g, f: mult(g, f) if mult(g, f) != unit else "*")
    return cat


def chain(n: int) -> FinCategory:
    """The ordinal [n-1] = 0 < 1 < ... < n-1 as a category."""
    objs = list(range(n))
    mors = [((i, j), i, j) for i in range(n) for j in range(i + 1, n)]
    return make_category(objs, mors, lambda g, f: (f[0], g[1]) if f[0] != g[1] else f[0])


def product_category(A: FinCategory, B: FinCategory) -> FinCategory:
    """The cartesian product A x B, built directly from the factor tables."""
    objs = product([A.objects, B.objects])[0]
    nb = B.n_mor
    dom = tuple(A.dom[f] * B.n_obj + B.dom[g] for f in range(A.n_mor) for g in range(nb))
    cod = tuple(A.cod[f] * B.n_obj + B.cod[g] for f in range(A.n_mor) for g in range(nb))
    ids = tuple(A.ids[x] * nb + B.ids[y] for x in range(A.n_obj) for y in range(B.n_obj))
    comp = {}
    for (f2, f1) in A.composable_pairs():
        for (g2, g1) in B.composable_pairs():
            comp[(f2 * nb + g2, f1 * nb + g1)] = A.comp[(f2, f1)] * nb + B.comp[(g2, g1)]
    names = tuple((A.names[f], B.names[g]) for f in range(A.n_mor) for g in range(nb))
    return FinCategory(objs, dom, cod, ids, comp, names)


def opposite(A: FinCategory) -> FinCategory:
    comp = {(f, g): h for (g, f), h in A.comp.items()}
    return FinCategory(A.objects, A.cod, A.dom, A.ids, comp, A.names)


# -- functors -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FinFunctor:
    src: FinCategory
    tgt: FinCategory
    on_obj: tuple
    on_mor: tuple

    def check_axioms(self) -> list[str]:
        errs = []
        A, C = self.src, self.tgt
        for f in range(A.n_mor):
            m = self.on_mor[f]
            if C.dom[m] != self.on_obj[A.dom[f]] or C.cod[m] != self.on_obj[A.cod[f]]:
                errs.append(f"morphism {f} sent to the wrong hom-set")
        if errs:
            return errs
        for x in range(A.n_obj):
            if self.on_mor[A.ids[x]] != C.ids[self.on_obj[x]]:
                errs.append(f"identity at {x} not preserved")
        for (g, f) in A.composable_pairs():
            if self.on_mor[A.comp[(g, f)]] != C.comp[(self.on_mor[g], self.on_mor[f])]:
                errs.append(f"composite {g} o {f} not preserved")
        return errs

    def then(self, G: "FinFunctor") -> "FinFunctor":
        return FinFunctor(self.src, G.tgt, tuple(G.on_obj[x] for x in self.on_obj),
                          tuple(G.on_mor[m] for m in self.on_mor))

    def is_isomorphism(self) -> bool:
        return (len(set(self.on_obj)) == self.tgt.n_obj == self.src.n_obj
                and len(set(self.on_mor)) == self.tgt.n_mor == self.src.n_mor)

    def on_hom(self, x: int, y: int) -> FinFunction:
        """The component A(x,y) -> C(Fx,Fy) as a FinFunction on hom-sets."""
        s = self.src.hom_set(x, y)
        t = self.tgt.hom_set(self.on_obj[x], self.on_obj[y])
        return FinFunction(s, t, tuple(t.index(self.on_mor[m]) for m in s.labels))

    def key(self) -> tuple:
        return self.on_obj, self.on_mor


def identity_functor(A: FinCategory) -> FinFunctor:
    return FinFunctor(A, A, tuple(range(A.n_obj)), tuple(range(A.n_mor)))


def generating_plan(A: FinCategory) -> list[tuple[int, int | None, int | None]]:
    """Order the non-identity morphisms so each is either a chosen generator (g, None, None)
    or forced as (m, g, k) with m = g o k for earlier g, k."""
    known = set(A.ids)
    plan = []
    todo = A.non_identities()

    def close():
        changed = True
        while changed:
            changed = False
            for m in list(known):
                for g in list(known):
                    if A.dom[g] == A.cod[m]:
                        h = A.comp[(g, m)]
                        if h not in known:
                            known.add(h)
                            plan.append((h, g, m))
                            changed = True

    for m in todo:
        if m in known:
            continue
        known.add(m)
        plan.append((m, None, None))
        close()
    return plan


def _obj_assignments(A: FinCategory, C: FinCategory, fixed=None) -> Iterator[tuple]:
    """Object maps with hom-emptiness pruning: A(x,y) inhabited forces C(Fx,Fy) inhabited."""
    n = A.n_obj
    assign = [None] * n

    def rec(i):
        if i == n:
            yield tuple(assign)
            return
        choices = [fixed[i]] if fixed is not None else range(C.n_obj)
        for c in choices:
            ok = True
            for y in range(i):
                if A.hom(i, y) and not C.hom(c, assign[y]):
                    ok = False
                    break
                if A.hom(y, i) and not C.hom(assign[y], c):
                    ok = False
                    break
            if ok:
                assign[i] = c
                yield from rec(i + 1)
        assign[i] = None

    yield from rec(0)


def enumerate_functors(A: FinCategory, C: FinCategory, on_obj=None, cap: int = DEFAULT_CAP) -> Iterator[FinFunctor]:
    plan = _plan_cached(A)
    order = [p[0] for p in plan]
    pos = {m: i for i, m in enumerate(order)}
    for x in A.ids:
        pos[x] = -1
    checks = [[] for _ in order]
    for (g, f) in A.composable_pairs():
        h = A.comp[(g, f)]
        last = max(pos[g], pos[f], pos[h])
        if last >= 0:
            checks[last].append((g, f, h))
    count = 0
    for obj in _obj_assignments(A, C, on_obj):
        img = [None] * A.n_mor
        for x in range(A.n_obj):
            img[A.ids[x]] = C.ids[obj[x]]

        def rec(i):
            nonlocal count
            if i == len(plan):
                count += 1
                if count > cap:
                    raise EnumerationBudgetError("functor enumeration exceeds the cap")
                yield FinFunctor(A, C, obj, tuple(img))
                return
            m, g, k = plan[i]
            if g is None:
                cands = C.hom(obj[A.dom[m]], obj[A.cod[m]])
            else:
                cands = (C.comp[(img[g], img[k])],)
            for c in cands:
                img[m] = c
                if all(img[h] == C.comp[(img[gg], img[ff])] for gg, ff, h in checks[i]):
                    yield from rec(i + 1)
            img[m] = None

        yield from rec(0)


@lru_cache(maxsize=None)
def _plan_cached(A: FinCategory):
    return generating_plan(A)


def count_functors(A: FinCategory, C: FinCategory, cap: int = DEFAULT_CAP) -> int:
    return sum(1 for _ in enumerate_functors(A, C, cap=cap))


def find_isomorphism(A: FinCategory, B: FinCategory) -> FinFunctor | None:
    if A.n_obj != B.n_obj or A.n_mor != B.n_mor:
        return None
    for F in enumerate_functors(A, B):
        if F.is_isomorphism():
            return F
    return None


# -- word systems and bounded congruence closure ---------------------------------------

@dataclass(frozen=True)
class Word:
    src: int
    tgt: int
    letters: tuple

    def __len__(self):
        return len(self.letters)


class FreeWords:
    """Paths in a graph; generators are edges (label, src, tgt)."""

    def __init__(self, objects: FinSet, edges: Sequence[tuple]):
        self.objects = objects
        self.edges = tuple(edges)

    def generator(self, e: int) -> Word:
        _, s, t = self.edges[e]
        return Word(s, t, (e,))

    def identity(self, x: int) -> Word:
        return Word(x, x, ())

    def mult(self, p: Word, q: Word) -> Word:
        """First p, then q."""
        if p.tgt != q.src:
            raise ShapeError("words are not composable")
        return Word(p.src, q.tgt, p.letters + q.letters)

    def extensions(self, w: Word) -> Iterator[Word]:
        for e, (_, s, _) in enumerate(self.edges):
            if s == w.tgt:
                yield self.mult(w, self.generator(e))

    def render(self, w: Word) -> str:
        if not w.letters:
            return f"id_{self.objects.label(w.src)}"
        return ".".join(str(self.edges[e][0]) for e in w.letters)


@dataclass
class Presentation:
    """Generators and relations over a free object, saturated up to a word-length budget."""

    system: object
    relations: list
    budget: int
    truncated: bool = True
    words: list = field(default_factory=list)
    classes: dict = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)

    def n_classes(self) -> int:
        return len(set(self.classes.values()))

    def words_by_length(self) -> dict:
        out = {}
        for w in self.words:
            out.setdefault(len(w), []).append(w)
        return out

    def class_reps(self) -> list:
        seen, reps = set(), []
        for w in self.words:
            c = self.classes[w]
            if c not in seen:
                seen.add(c)
                reps.append(w)
        return reps


def _bfs_words(system, budget: int) -> list[Word]:
    words = [system.identity(x) for x in range(system.objects.size)]
    seen = set(words)
    frontier = list(words)
    for _ in range(budget):
        nxt = []
        for w in frontier:
            for v in system.extensions(w):
                if v not in seen and len(v) == len(w) + 1:
                    seen.add(v)
                    nxt.append(v)
        words.extend(nxt)
        frontier = nxt
    return words


def saturate(system, relations: Sequence[tuple[Word, Word]], budget: int):
    """Bounded congruence closure with a finiteness certificate.

    Returns (FinCategory, rep_words, Presentation) when every word of length `budget`
    is equivalent to a shorter one and the induced table is a category satisfying the
    relations; then the table is the presented category.  Otherwise the category slot is None
    and the Presentation is flagged truncated.
    """
    for l, r in relations:
        if (l.src, l.tgt) != (r.src, r.tgt):
            raise ShapeError("relation sides are not parallel")
    words = _bfs_words(system, budget)
    idx = {w: i for i, w in enumerate(words)}
    uf = UnionFind(len(words))
    for l, r in relations:
        if l in idx and r in idx:
            uf.union(idx[l], idx[r])
    # per-generator one-step extensions inside the budget
    gens = [system.generator(e) for e in range(len(system.edges))]
    right, left = [], []
    for w in words:
        i = idx[w]
        for k, g in enumerate(gens):
            if g.src == w.tgt:
                v = system.mult(w, g)
                if v in idx:
                    right.append((k, i, idx[v]))
            if g.tgt == w.src:
                v = system.mult(g, w)
                if v in idx:
                    left.append((k, i, idx[v]))
    changed = True
    while changed:
        changed = False
        for table in (right, left):
            seen = {}
            for k, i, j in table:
                key = (k, uf.find(i))
                if key in seen:
                    if uf.union(seen[key], j):
                        changed = True
                else:
                    seen[key] = j
    classes = {w: uf.find(idx[w]) for w in words}
    pres = Presentation(system, list(relations), budget, True, words, classes)
    # frontier certificate
    short_classes = {classes[w] for w in words if len(w) < budget}
    frontier = [w for w in words if len(w) == budget]
    stuck = [w for w in frontier if classes[w] not in short_classes]
    pres.certificate = {"budget": budget, "frontier_words": len(frontier), "irreducible_frontier": len(stuck)}
    if stuck:
        return None, None, pres
    cat, reps = _model_from_classes(system, words, classes, budget)
    problems = _verify_model(system, cat, reps, words, classes, relations)
    pres.certificate["model_problems"] = problems[:5]
    if problems:
        return None, None, pres
    pres.truncated = False
    return cat, reps, pres


def _model_from_classes(system, words, classes, budget):
    reps, seen = [], set()
    for w in words:  # BFS order: shortest first
        if classes[w] not in seen:
            seen.add(classes[w])
            reps.append(w)
    pos = {classes[r]: k for k, r in enumerate(reps)}

    def reduce(w: Word) -> int:
        while len(w) > budget:
            head = _rebuild(system, w.src, w.letters[:budget])
            tail = _rebuild(system, head.tgt, w.letters[budget:])
            w = system.mult(reps[pos[classes[head]]], tail)
        return pos[classes[w]]

    objs = system.objects
    ids = tuple(pos[classes[system.identity(x)]] for x in range(objs.size))
    comp = {}
    for fi, f in enumerate(reps):
        for gi, g in enumerate(reps):
            if f.tgt == g.src:
                comp[(gi, fi)] = reduce(system.mult(f, g))
    cat = FinCategory(objs, tuple(r.src for r in reps), tuple(r.tgt for r in reps), ids, comp,
                      tuple(system.render(r) for r in reps))
    return cat, reps


def _rebuild(system, src: int, letters: tuple) -> Word:
    w = system.identity(src)
    for e in letters:
        w = system.mult(w, system.generator(e))
    return w


def evaluate_word(system, cat: FinCategory, gen_image: Sequence[int], w: Word) -> int:
    m = cat.ids[w.src]
    for e in w.letters:
        m = cat.comp[(gen_image[e], m)]
    return m


def _verify_model(system, cat, reps, words, classes, relations) -> list[str]:
    errs = cat.check_axioms()
    if errs:
        return errs
    pos = {classes[r]: k for k, r in enumerate(reps)}
    gen_image = [pos[classes[system.generator(e)]] for e in range(len(system.edges))]
    for k, r in enumerate(reps):
        if evaluate_word(system, cat, gen_image, r) != k:
            errs.append(f"representative {system.render(r)} does not evaluate to its class")
    for l, r in relations:
        if evaluate_word(system, cat, gen_image, l) != evaluate_word(system, cat, gen_image, r):
            errs.append(f"relation {system.render(l)} = {system.render(r)} fails in the table")
    return errs


# -- free categories -------------------------------------------------------------------

def _is_acyclic(n: int, edges) -> bool:
    indeg = [0] * n
    adj = [[] for _ in range(n)]
    for _, s, t in edges:
        adj[s].append(t)
        indeg[t] += 1
    q = deque(i for i in range(n) if indeg[i] == 0)
    seen = 0
    while q:
        v = q.popleft()
        seen += 1
        for t in adj[v]:
            indeg[t] -= 1
            if indeg[t] == 0:
                q.append(t)
    return seen == n


def free_category(objects: FinSet, edges: Sequence[tuple], budget: int = 8, relations=()):
    """Path category on a finite graph (edges are (label, src, tgt) with object indices).

    Without relations an acyclic graph gives the exact finite path category; a cyclic graph gives
    a truncated Presentation.  With relations the result is certified by saturation when possible.
    """
    system = FreeWords(objects, edges)
    rels = [(_rebuild(system, s, l), _rebuild(system, s2, r)) for (s, l), (s2, r) in relations]
    if not rels:
        if _is_acyclic(objects.size, edges):
            longest = objects.size
            cat, _, _ = saturate(system, [], longest)
            return cat
        words = _bfs_words(system, budget)
        return Presentation(system, [], budget, True, words, {w: i for i, w in enumerate(words)},
                            {"budget": budget, "reason": "cycle in generating graph"})
    cat, _, pres = saturate(system, rels, budget)
    return cat if cat is not None else pres


# -- funny tensor -----------------------------------------------------------------------

class AlternatingWords:
    """Normal forms of the funny tensor: composable words of non-identity moves that alternate
    between the two factors.  Generators are (0, f, b) moving in A at fixed b and (1, a, g)."""

    def __init__(self, A: FinCategory, B: FinCategory):
        self.A, self.B = A, B
        self.objects = product([A.objects, B.objects])[0]
        gens = []
        for f in A.non_identities():
            for b in range(B.n_obj):
                gens.append((0, f, b))
        for a in range(A.n_obj):
            for g in B.non_identities():
                gens.append((1, a, g))
        self.gens = gens
        self.gen_index = {g: i for i, g in enumerate(gens)}
        self.edges = tuple((self._label(g), self._src(g), self._tgt(g)) for g in gens)

    def _label(self, g):
        side, p, q = g
        if side == 0:
            return f"({self.A.names[p]},{self.B.obj_name(q)})"
        return f"({self.A.obj_name(p)},{self.B.names[q]})"

    def _pair(self, a, b):
        return a * self.B.n_obj + b

    def _src(self, g):
        side, p, q = g
        return self._pair(self.A.dom[p], q) if side == 0 else self._pair(p, self.B.dom[q])

    def _tgt(self, g):
        side, p, q = g
        return self._pair(self.A.cod[p], q) if side == 0 else self._pair(p, self.B.cod[q])

    def identity(self, x: int) -> Word:
        return Word(x, x, ())

    def generator(self, e: int) -> Word:
        _, s, t = self.edges[e]
        return Word(s, t, (e,))

    def _push(self, letters: list, e: int):
        """Append generator e to a normal form, merging same-side neighbours."""
        while True:
            if not letters:
                letters.append(e)
                return
            last = self.gens[letters[-1]]
            cur = self.gens[e]
            if last[0] != cur[0]:
                letters.append(e)
                return
            side = cur[0]
            if side == 0:
                h = self.A.comp[(cur[1], last[1])]
                letters.pop()
                if self.A.is_identity(h):
                    return
                e = self.gen_index[(0, h, cur[2])]
            else:
                h = self.B.comp[(cur[2], last[2])]
                letters.pop()
                if self.B.is_identity(h):
                    return
                e = self.gen_index[(1, cur[1], h)]

    def mult(self, p: Word, q: Word) -> Word:
        if p.tgt != q.src:
            raise ShapeError("words are not composable")
        letters = list(p.letters)
        for e in q.letters:
            self._push(letters, e)
        return Word(p.src, q.tgt, tuple(letters))

    def extensions(self, w: Word) -> Iterator[Word]:
        for e, (_, s, _) in enumerate(self.edges):
            if s == w.tgt:
                yield self.mult(w, self.generator(e))

    def render(self, w: Word) -> str:
        if not w.letters:
            a, b = divmod(w.src, self.B.n_obj)
            return f"id_({self.A.obj_name(a)},{self.B.obj_name(b)})"
        return ".".join(self.edges[e][0] for e in w.letters)

    def iota(self, side: int, p: int, q: int) -> Word:
        """Image of (f, b) (side 0) or (a, g) (side 1) as a normal form."""
        if side == 0:
            if self.A.is_identity(p):
                x = self._pair(self.A.dom[p], q)
                return self.identity(x)
        else:
            if self.B.is_identity(q):
                x = self._pair(p, self.B.dom[q])
                return self.identity(x)
        return self.generator(self.gen_index[(side, p, q)])


@dataclass
class FunnyTensor:
    A: FinCategory
    B: FinCategory
    system: AlternatingWords
    category: FinCategory | None
    words: list
    budget: int
    truncated: bool
    certificate: dict

    def word_index(self) -> dict:
        return {w: i for i, w in enumerate(self.words)}

    def universal(self) -> "Sesquifunctor":
        """The universal sesquifunctor A, B -> A funny B (requires a certified result)."""
        if self.category is None:
            raise TruncatedError("funny tensor did not close within the budget")
        idx = self.word_index()
        s = self.system
        nb = self.B.n_obj
        phi1 = {(f, b): idx[s.iota(0, f, b)] for f in range(self.A.n_mor) for b in range(nb)}
        phi2 = {(a, g): idx[s.iota(1, a, g)] for a in range(self.A.n_obj) for g in range(self.B.n_mor)}
        obj = tuple(range(self.A.n_obj * nb))
        return Sesquifunctor(self.A, self.B, self.category, obj, phi1, phi2)


def funny_tensor(A: FinCategory, B: FinCategory, budget: int = 12) -> FunnyTensor:
    """Alternating-word closure: stops when a length level produces no new normal form."""
    system = AlternatingWords(A, B)
    words = [system.identity(x) for x in range(system.objects.size)]
    seen = set(words)
    frontier = list(words)
    length = 0
    while frontier and length < budget:
        nxt = []
        for w in frontier:
            for v in system.extensions(w):
                if len(v) == len(w) + 1 and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        words.extend(nxt)
        frontier = nxt
        length += 1
    # the frontier is empty exactly when no normal form of the next length exists
    if frontier:
        probe = [v for w in frontier for v in system.extensions(w) if len(v) == len(w) + 1]
        closed = not probe
    else:
        closed = True
    cert = {"budget": budget, "max_word_length": max(len(w) for w in words) if words else 0,
            "closed": closed}
    if not closed:
        return FunnyTensor(A, B, system, None, words, budget, True, cert)
    idx = {w: i for i, w in enumerate(words)}
    comp = {}
    for fi, f in enumerate(words):
        for gi, g in enumerate(words):
            if f.tgt == g.src:
                comp[(gi, fi)] = idx[system.mult(f, g)]
    ids = tuple(idx[system.identity(x)] for x in range(system.objects.size))
    cat = FinCategory(system.objects, tuple(w.src for w in words), tuple(w.tgt for w in words), ids, comp,
                      tuple(system.render(w) for w in words))
    return FunnyTensor(A, B, system, cat, words, budget, False, cert)


# -- sesquifunctors and the hexagon -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Sesquifunctor:
    """obj[a*|B|+b] is an object of C; phi1[(f, b)] and phi2[(a, g)] are morphisms of C."""

    A: FinCategory
    B: FinCategory
    C: FinCategory
    obj: tuple
    phi1: dict
    phi2: dict

    def at(self, a: int, b: int) -> int:
        return self.obj[a * self.B.n_obj + b]

    def key(self):
        return (self.obj, tuple(sorted(self.phi1.items())), tuple(sorted(self.phi2.items())))


def sesqui_check(s: Sesquifunctor) -> bool:
    return not sesqui_violations(s)


def sesqui_violations(s: Sesquifunctor) -> list[str]:
    A, B, C = s.A, s.B, s.C
    if len(s.obj) != A.n_obj * B.n_obj:
        raise ShapeError("object map has the wrong size")
    errs = []
    for b in range(B.n_obj):
        F = FinFunctor(A, C, tuple(s.at(a, b) for a in range(A.n_obj)),
                       tuple(s.phi1[(f, b)] for f in range(A.n_mor)))
        errs += [f"phi1 at {b}: {e}" for e in F.check_axioms()]
    for a in range(A.n_obj):
        G = FinFunctor(B, C, tuple(s.at(a, b) for b in range(B.n_obj)),
                       tuple(s.phi2[(a, g)] for g in range(B.n_mor)))
        errs += [f"phi2 at {a}: {e}" for e in G.check_axioms()]
    return errs


@lru_cache(maxsize=256)
def hexagon_cells(A: FinCategory, B: FinCategory) -> tuple:
    """Unfold sigma and tau on every element (f, g) of (a1 (x) a2).

    Each entry is (f, g, sigma_path, tau_path) where a path is a pair of whisker cells
    ((side, morphism, fixed object), ...) listed in the order they are composed.
    """
    a1, a2 = A.hom_mat(), B.hom_mat()
    sigma, tau = vm.sigma_tau(a1, a2)
    nb = B.n_obj
    out = []
    for (yy, xx) in sigma.dom.keys():
        for tag in sigma.dom[(yy, xx)].labels:
            f, g = tag
            mid_s, (s1, _), (_, r2) = sigma.apply(yy, xx, tag)
            mid_t, (_, u2), (v1, _) = tau.apply(yy, xx, tag)
            # sigma lands in (a1 (x) id) o (id (x) a2): first g at the source A-object, then f
            sa, sb = divmod(mid_s, nb)
            ta, tb = divmod(mid_t, nb)
            out.append((f, g, ((1, sa, r2), (0, s1, sb)), ((0, v1, tb), (1, ta, u2))))
    return tuple(out)


def _whisker(s: Sesquifunctor, cell) -> int:
    side, p, q = cell
    return s.phi1[(p, q)] if side == 0 else s.phi2[(p, q)]


def is_commuting(s: Sesquifunctor):
    """(True, None) or (False, witness) where the witness names the failing element."""
    C = s.C
    for f, g, sig, tau in hexagon_cells(s.A, s.B):
        left = C.comp[(_whisker(s, sig[1]), _whisker(s, sig[0]))]
        right = C.comp[(_whisker(s, tau[1]), _whisker(s, tau[0]))]
        if left != right:
            return False, {"f": s.A.names[f], "g": s.B.names[g],
                           "sigma_leg": C.names[left], "tau_leg": C.names[right]}
    return True, None


def sesqui_from_functor(F: FinFunctor, A: FinCategory, B: FinCategory) -> Sesquifunctor:
    """Restrict a functor out of the cartesian product A x B along the two whiskerings."""
    nbm = B.n_mor
    obj = tuple(F.on_obj[a * B.n_obj + b] for a in range(A.n_obj) for b in range(B.n_obj))
    phi1 = {(f, b): F.on_mor[f * nbm + B.ids[b]] for f in range(A.n_mor) for b in range(B.n_obj)}
    phi2 = {(a, g): F.on_mor[A.ids[a] * nbm + g] for a in range(A.n_obj) for g in range(nbm)}
    return Sesquifunctor(A, B, F.tgt, obj, phi1, phi2)


def compose_sesqui_with_functor(s: Sesquifunctor, F: FinFunctor) -> Sesquifunctor:
    return Sesquifunctor(s.A, s.B, F.tgt, tuple(F.on_obj[x] for x in s.obj),
                         {k: F.on_mor[v] for k, v in s.phi1.items()},
                         {k: F.on_mor[v] for k, v in s.phi2.items()})


def enumerate_sesquifunctors(A: FinCategory, B: FinCategory, C: FinCategory, cap: int = DEFAULT_CAP):
    na, nb = A.n_obj, B.n_obj
    count = 0
    for obj in _cartesian(range(C.n_obj), repeat=na * nb):
        rows = []
        ok = True
        for b in range(nb):
            fs = list(enumerate_functors(A, C, on_obj=tuple(obj[a * nb + b] for a in range(na)), cap=cap))
            if not fs:
                ok = False
                break
            rows.append(fs)
        if not ok:
            continue
        cols = []
        for a in range(na):
            gs = list(enumerate_functors(B, C, on_obj=tuple(obj[a * nb + b] for b in range(nb)), cap=cap))
            if not gs:
                ok = False
                break
            cols.append(gs)
        if not ok:
            continue
        for choice_r in _cartesian(*rows):
            phi1 = {(f, b): choice_r[b].on_mor[f] for b in range(nb) for f in range(A.n_mor)}
            for choice_c in _cartesian(*cols):
                count += 1
                if count > cap:
                    raise EnumerationBudgetError("sesquifunctor enumeration exceeds the cap")
                phi2 = {(a, g): choice_c[a].on_mor[g] for a in range(na) for g in range(B.n_mor)}
                yield Sesquifunctor(A, B, C, tuple(obj), phi1, phi2)


# -- commuting tensor -------------------------------------------------------------------

@dataclass
class CommutingTensor:
    A: FinCategory
    B: FinCategory
    category: FinCategory
    universal: Sesquifunctor
    to_product: FinFunctor
    route: str
    certificate: dict
    quotient: FinFunctor | None = None
    funny: FunnyTensor | None = None


def congruence_quotient(C: FinCategory, pairs: Iterable[tuple[int, int]]):
    """Quotient of a finite category by the congruence generated by parallel pairs."""
    uf = UnionFind(C.n_mor)
    queue = deque()
    for p, q in pairs:
        if (C.dom[p], C.cod[p]) != (C.dom[q], C.cod[q]):
            raise ShapeError("congruence pairs must be parallel")
        queue.append((p, q))
    while queue:
        p, q = queue.popleft()
        if not uf.union(p, q):
            continue
        for w in C.out_of(C.cod[p]):
            queue.append((C.comp[(w, p)], C.comp[(w, q)]))
        for w in C.into(C.dom[p]):
            queue.append((C.comp[(p, w)], C.comp[(q, w)]))
    reps = sorted({uf.find(m) for m in range(C.n_mor)})
    pos = {r: k for k, r in enumerate(reps)}
    cls = [pos[uf.find(m)] for m in range(C.n_mor)]
    comp = {}
    for (g, f), h in C.comp.items():
        comp[(cls[g], cls[f])] = cls[h]
    Q = FinCategory(C.objects, tuple(C.dom[r] for r in reps), tuple(C.cod[r] for r in reps),
                    tuple(cls[i] for i in C.ids), comp, tuple(C.names[r] for r in reps))
    q = FinFunctor(C, Q, tuple(range(C.n_obj)), tuple(cls))
    return Q, q


def hexagon_relations(system: AlternatingWords) -> list[tuple[Word, Word]]:
    """(f, y2) after (x1, g)  =  (y1, g) after (f, x2) for non-identity f, g."""
    A, B = system.A, system.B
    rels = []
    for f in A.non_identities():
        for g in B.non_identities():
            x1, y1, x2, y2 = A.dom[f], A.cod[f], B.dom[g], B.cod[g]
            left = system.mult(system.iota(1, x1, g), system.iota(0, f, y2))
            right = system.mult(system.iota(0, f, x2), system.iota(1, y1, g))
            rels.append((left, right))
    return rels


def commuting_tensor(A: FinCategory, B: FinCategory, budget: int = 12) -> CommutingTensor:
    """Coequaliser of the funny tensor by the hexagon, certified against A x B."""
    funny = funny_tensor(A, B, budget)
    system = funny.system
    rels = hexagon_relations(system)
    if funny.category is not None:
        idx = funny.word_index()
        T, q = congruence_quotient(funny.category, [(idx[l], idx[r]) for l, r in rels])
        U = compose_sesqui_with_functor(funny.universal(), q)
        route = "quotient of certified funny tensor"
        cert = dict(funny.certificate)
        quotient = q
    else:
        # funny tensor is infinite: saturate its alternating-word presentation with the hexagon added
        T = None
        for depth in range(3, max(3, budget) + 1):
            T, reps, pres = saturate(system, rels, depth)
            if T is not None:
                break
        if T is None:
            raise TruncatedError("commuting tensor did not close within the budget", pres)
        pos = {pres.classes[r]: k for k, r in enumerate(reps)}
        nb = B.n_obj
        phi1 = {(f, b): pos[pres.classes[system.iota(0, f, b)]] for f in range(A.n_mor) for b in range(nb)}
        phi2 = {(a, g): pos[pres.classes[system.iota(1, a, g)]] for a in range(A.n_obj) for g in range(B.n_mor)}
        U = Sesquifunctor(A, B, T, tuple(range(A.n_obj * nb)), phi1, phi2)
        route = "saturated presentation (funny tensor infinite)"
        cert = dict(pres.certificate)
        quotient = None
    P = product_category(A, B)
    witness = _witness_to_product(T, U, P)
    cert["route"] = route
    return CommutingTensor(A, B, T, U, witness, route, cert, quotient, funny)


def _witness_to_product(T: FinCategory, U: Sesquifunctor, P: FinCategory) -> FinFunctor:
    """The comparison T -> A x B induced by the product projections, obtained by evaluating
    each class on its generators; it must be an isomorphism of categories."""
    A, B = U.A, U.B
    nbm = B.n_mor
    img = [None] * T.n_mor
    for x in range(T.n_obj):
        img[T.ids[x]] = P.ids[x]
    for (f, b), m in U.phi1.items():
        val = f * nbm + B.ids[b]
        if img[m] is not None and img[m] != val:
            raise ShapeError("comparison to the product is not well defined")
        img[m] = val
    for (a, g), m in U.phi2.items():
        val = A.ids[a] * nbm + g
        if img[m] is not None and img[m] != val:
            raise ShapeError("comparison to the product is not well defined")
        img[m] = val
    changed = True
    while changed:
        changed = False
        for (g, f), h in T.comp.items():
            if img[g] is not None and img[f] is not None:
                val = P.comp[(img[g], img[f])]
                if img[h] is None:
                    img[h] = val
                    changed = True
                elif img[h] != val:
                    raise ShapeError("comparison to the product is not functorial")
    if any(v is None for v in img):
        raise ShapeError("tensor has morphisms not generated by the whiskerings")
    F = FinFunctor(T, P, tuple(range(T.n_obj)), tuple(img))
    if F.check_axioms() or not F.is_isomorphism():
        raise ShapeError("comparison to the cartesian product is not an isomorphism")
    return F


# -- multimorphisms ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Multimorphism:
    """A functor of n variables A_1, ..., A_n -> C.

    obj maps tuples of objects to objects of C; phis[i] maps argument tuples whose i-th entry is a
    morphism of A_i (others objects) to morphisms of C.
    """

    doms: tuple
    cod: FinCategory
    obj: dict
    phis: tuple

    @property
    def arity(self) -> int:
        return len(self.doms)

    def check(self) -> list[str]:
        errs = []
        for i, Ai in enumerate(self.doms):
            others = [range(D.n_obj) for j, D in enumerate(self.doms) if j != i]
            for rest in _cartesian(*others):
                def args(x):
                    return tuple(rest[:i]) + (x,) + tuple(rest[i:])
                F = FinFunctor(Ai, self.cod, tuple(self.obj[args(x)] for x in range(Ai.n_obj)),
                               tuple(self.phis[i][args(f)] for f in range(Ai.n_mor)))
                errs += [f"slot {i} at {rest}: {e}" for e in F.check_axioms()]
        return errs

    def binary_reduction(self, i: int, j: int, rest: tuple) -> Sesquifunctor:
        """Fix every argument except i < j at the objects in `rest` (in order of the remaining slots)."""
        A, B = self.doms[i], self.doms[j]

        def args(x, y):
            out = list(rest)
            out.insert(i, x)
            out.insert(j, y)
            return tuple(out)

        obj = tuple(self.obj[args(a, b)] for a in range(A.n_obj) for b in range(B.n_obj))
        phi1 = {(f, b): self.phis[i][args(f, b)] for f in range(A.n_mor) for b in range(B.n_obj)}
        phi2 = {(a, g): self.phis[j][args(a, g)] for a in range(A.n_obj) for g in range(B.n_mor)}
        return Sesquifunctor(A, B, self.cod, obj, phi1, phi2)

    def is_commuting(self) -> bool:
        for i in range(self.arity):
            for j in range(i + 1, self.arity):
                others = [range(D.n_obj) for k, D in enumerate(self.doms) if k not in (i, j)]
                for rest in _cartesian(*others):
                    if not is_commuting(self.binary_reduction(i, j, rest))[0]:
                        return False
        return True

    def permute(self, perm: Sequence[int]) -> "Multimorphism":
        """Reorder the arguments: new slot k is old slot perm[k]."""
        inv = [0] * len(perm)
        for k, p in enumerate(perm):
            inv[p] = k

        def back(t):
            return tuple(t[inv[p]] for p in range(len(perm)))

        doms = tuple(self.doms[p] for p in perm)
        obj = {t: self.obj[back(t)] for t in _cartesian(*[range(D.n_obj) for D in doms])}
        phis = []
        for k, p in enumerate(perm):
            table = {}
            for key, v in self.phis[p].items():
                new = tuple(key[perm[j]] for j in range(len(perm)))
                table[new] = v
            phis.append(table)
        return Multimorphism(doms, self.cod, obj, tuple(phis))

    def same_as(self, other: "Multimorphism") -> bool:
        return self.obj == other.obj and all(a == b for a, b in zip(self.phis, other.phis))


def unary(F: FinFunctor) -> Multimorphism:
    return Multimorphism((F.src,), F.tgt, {(x,): F.on_obj[x] for x in range(F.src.n_obj)},
                         ({(f,): F.on_mor[f] for f in range(F.src.n_mor)},))


def from_sesquifunctor(s: Sesquifunctor) -> Multimorphism:
    nb = s.B.n_obj
    obj = {(a, b): s.obj[a * nb + b] for a in range(s.A.n_obj) for b in range(nb)}
    return Multimorphism((s.A, s.B), s.C, obj,
                         ({k: v for k, v in s.phi1.items()}, {k: v for k, v in s.phi2.items()}))


def sesqui_compose(G: Multimorphism, i: int, F: Multimorphism) -> Multimorphism:
    """G o_i F: plug F into slot i of G."""
    if G.doms[i] is not F.cod:
        raise ShapeError("codomain of the inner map must be the i-th domain of the outer one")
    n = F.arity
    doms = G.doms[:i] + F.doms + G.doms[i + 1:]
    obj = {}
    for t in _cartesian(*[range(D.n_obj) for D in doms]):
        obj[t] = G.obj[t[:i] + (F.obj[t[i:i + n]],) + t[i + n:]]
    phis = []
    for k, D in enumerate(doms):
        table = {}
        others = [range(E.n_obj) for j, E in enumerate(doms) if j != k]
        for rest in _cartesian(*others):
            for m in range(D.n_mor):
                t = tuple(rest[:k]) + (m,) + tuple(rest[k:])
                if i <= k < i + n:
                    inner = F.phis[k - i][t[i:i + n]]
                    table[t] = G.phis[i][t[:i] + (inner,) + t[i + n:]]
                else:
                    inner_obj = F.obj[t[i:i + n]]
                    gk = k if k < i else k - n + 1
                    table[t] = G.phis[gk][t[:i] + (inner_obj,) + t[i + n:]]
        phis.append(table)
    return Multimorphism(doms, G.cod, obj, tuple(phis))


# -- homs ------------------------------------------------------------------------------

@dataclass
class HomCategory:
    B: FinCategory
    C: FinCategory
    category: FinCategory
    functors: list
    commuting: bool


def funny_hom(B: FinCategory, C: FinCategory, cap: int = DEFAULT_CAP) -> HomCategory:
    """Functors B -> C with unnatural transformations: families of C(Fx, Gx)."""
    return _hom(B, C, cap, natural=False)


def commuting_hom(B: FinCategory, C: FinCategory, cap: int = DEFAULT_CAP) -> HomCategory:
    """Functors B -> C with natural transformations, carved out of the funny hom as an end."""
    return _hom(B, C, cap, natural=True)


def _component_sets(B, C, F, G):
    return [C.hom_set(F.on_obj[x], G.on_obj[x]) for x in range(B.n_obj)]


def transformations(B: FinCategory, C: FinCategory, F: FinFunctor, G: FinFunctor, natural: bool) -> list[tuple]:
    """All families (alpha_x) of morphisms Fx -> Gx; with natural=True the equaliser of
    prod_x C(Fx,Gx) => prod_{f:x->y} C(Fx,Gy) given by alpha_y.F(f) and G(f).alpha_x."""
    P, _ = product(_component_sets(B, C, F, G))
    fams = list(P.labels)
    if not natural:
        return fams
    targets = [C.hom_set(F.on_obj[B.dom[f]], G.on_obj[B.cod[f]]) for f in range(B.n_mor)]
    Q, _ = product(targets)
    if not fams:
        return []
    left = FinFunction(P, Q, tuple(Q.index(tuple(C.comp[(fam[B.cod[f]], F.on_mor[f])] for f in range(B.n_mor)))
                                   for fam in fams))
    right = FinFunction(P, Q, tuple(Q.index(tuple(C.comp[(G.on_mor[f], fam[B.dom[f]])] for f in range(B.n_mor)))
                                    for fam in fams))
    E, inc = equalize(left, right)
    return [fams[i] for i in inc.table]


def _hom(B: FinCategory, C: FinCategory, cap: int, natural: bool) -> HomCategory:
    functors = list(enumerate_functors(B, C, cap=cap))
    objs = FinSet.of(F.key() for F in functors)
    dom, cod, names = [], [], []
    index = {}
    for i, F in enumerate(functors):
        for j, G in enumerate(functors):
            for fam in transformations(B, C, F, G, natural):
                index[(i, j, fam)] = len(dom)
                dom.append(i)
                cod.append(j)
                names.append(fam)
    ids = tuple(index[(i, i, tuple(C.ids[F.on_obj[x]] for x in range(B.n_obj)))] for i, F in enumerate(functors))
    comp = {}
    for (i, j, fam1), m1 in index.items():
        for (j2, k, fam2), m2 in index.items():
            if j2 != j:
                continue
            fam = tuple(C.comp[(fam2[x], fam1[x])] for x in range(B.n_obj))
            comp[(m2, m1)] = index[(i, k, fam)]
    cat = FinCategory(objs, tuple(dom), tuple(cod), ids, comp, tuple(names))
    return HomCategory(B, C, cat, functors, natural)


def transpose_functor(s: Sesquifunctor, hom: HomCategory) -> FinFunctor:
    """A sesquifunctor A, B -> C becomes the functor A -> [[B, C]] sending a to s(a, -)
    and f to the family (s(f, b))_b."""
    A, B = s.A, s.B
    lookup = {F.key(): i for i, F in enumerate(hom.functors)}
    mor = {}
    for m in range(hom.category.n_mor):
        mor[(hom.category.dom[m], hom.category.cod[m], hom.category.names[m])] = m
    on_obj = []
    for a in range(A.n_obj):
        key = (tuple(s.at(a, b) for b in range(B.n_obj)), tuple(s.phi2[(a, g)] for g in range(B.n_mor)))
        on_obj.append(lookup[key])
    on_mor = []
    for f in range(A.n_mor):
        fam = tuple(s.phi1[(f, b)] for b in range(B.n_obj))
        on_mor.append(mor[(on_obj[A.dom[f]], on_obj[A.cod[f]], fam)])
    return FinFunctor(A, hom.category, tuple(on_obj), tuple(on_mor))


def untranspose_functor(K: FinFunctor, B: FinCategory, hom: HomCategory) -> Sesquifunctor:
    A, C = K.src, hom.C
    nb = B.n_obj
    obj = tuple(hom.functors[K.on_obj[a]].on_obj[b] for a in range(A.n_obj) for b in range(nb))
    phi2 = {(a, g): hom.functors[K.on_obj[a]].on_mor[g] for a in range(A.n_obj) for g in range(B.n_mor)}
    phi1 = {(f, b): hom.category.names[K.on_mor[f]][b] for f in range(A.n_mor) for b in range(nb)}
    return Sesquifunctor(A, B, C, obj, phi1, phi2)


def sesqui_from_tensor_functor(H: FinFunctor, universal: Sesquifunctor) -> Sesquifunctor:
    return compose_sesqui_with_functor(universal, H)


# -- classification -----------------------------------------------------------------------

@dataclass
class Classification:
    commuting_sesquifunctors: int
    tensor_functors: int
    injective: bool
    surjective: bool
    matching: list

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective and self.commuting_sesquifunctors == self.tensor_functors


def classify(A: FinCategory, B: FinCategory, C: FinCategory, cap: int = DEFAULT_CAP, budget: int = 12) -> Classification:
    T = commuting_tensor(A, B, budget)
    commuting = {}
    for s in enumerate_sesquifunctors(A, B, C, cap):
        if is_commuting(s)[0]:
            commuting[s.key()] = s
    images = {}
    matching = []
    for H in enumerate_functors(T.category, C, cap=cap):
        s = compose_sesqui_with_functor(T.universal, H)
        images.setdefault(s.key(), []).append(H)
        matching.append((H.key(), s.key()))
    injective = all(len(v) == 1 for v in images.values())
    surjective = set(images) == set(commuting)
    return Classification(len(commuting), sum(len(v) for v in images.values()), injective, surjective, matching)


def closedness_counts(A, B, C, cap=DEFAULT_CAP, budget=12) -> dict:
    """|Cat(A [] B, C)| against |Cat(A, [[B, C]])| for the funny and the commuting structure."""
    out = {}
    ft = funny_tensor(A, B, budget)
    if ft.category is None:
        raise TruncatedError("funny tensor does not close within the budget")
    hom = funny_hom(B, C, cap)
    out["funny"] = {"tensor_side": count_functors(ft.category, C, cap),
                    "hom_side": count_functors(A, hom.category, cap)}
    ct = commuting_tensor(A, B, budget)
    hom = commuting_hom(B, C, cap)
    out["commuting"] = {"tensor_side": count_functors(ct.category, C, cap),
                        "hom_side": count_functors(A, hom.category, cap)}
    return out
