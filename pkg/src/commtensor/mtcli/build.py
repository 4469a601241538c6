"""Turn a parsed document into library objects.  Objects are built once per environment so
that shared boundaries are literally the same object (the tensor and composite constructions
check boundaries by identity)."""
from __future__ import annotations

from ..catmon import FinCategory, FinFunctor, Presentation, chain, discrete, free_category, make_category
from ..catmon import opposite, product_category
from ..finkit import FinSet, ShapeError
from ..opdkit.multicat import SymMulticat, bv_tensor, trivial_multicat
from ..promod import conjoint, free_profunctor, from_functor, hom_profunctor
from ..seqcells import TableCell, all_perms, perm_compose
from ..opdkit.multiprof import free_multibimodule, identity_multibimodule
from .dsl import SpecDocument, SpecError

DEFAULT_BUDGET = 12
DEFAULT_TRUNC = 2
DEFAULT_TREE_BUDGET = 3


class Environment:
    def __init__(self, doc: SpecDocument, budget: int | None = None, trunc: int | None = None):
        self.doc = doc
        self.budget = budget if budget is not None else doc.budget if doc.budget is not None else DEFAULT_BUDGET
        self.trunc = trunc if trunc is not None else doc.trunc if doc.trunc is not None else DEFAULT_TRUNC
        # tree-size budget for presented multicategories; word budgets for categories are larger
        self.tree_budget = budget if budget is not None else doc.budget if doc.budget is not None else DEFAULT_TREE_BUDGET
        self._cache = {}

    def __getitem__(self, name: str):
        if name not in self._cache:
            d = self.doc.get(name)
            try:
                self._cache[name] = getattr(self, "_" + d.kind)(d)
            except ShapeError as exc:
                raise SpecError(f"{d.kind} {name}: {exc}", *d.pos) from exc
        return self._cache[name]

    def kind(self, name: str) -> str:
        return self.doc.get(name).kind

    # -- categories ------------------------------------------------------------------
    def _set(self, d):
        return FinSet.of(d.elements)

    def _graph(self, d):
        objs = self[d.on]
        for l, s, t in d.edges:
            for o in (s, t):
                if o not in objs.tags():
                    raise SpecError(f"{o!r} is not an element of {d.on}", *d.pos)
        return objs, tuple((l, objs.index(s), objs.index(t)) for l, s, t in d.edges)

    def _cat(self, d):
        if d.form == "discrete":
            return discrete(self[d.args[0]])
        if d.form == "chain":
            n = int(d.args[0])
            c = chain(n)
            names = tuple(("id", str(nm[1])) if nm[0] == "id" else f"c{nm[0]}_{nm[1]}" for nm in c.names)
            return FinCategory(FinSet.of([str(i) for i in range(n)]), c.dom, c.cod, c.ids, c.comp, names)
        if d.form == "op":
            return opposite(self.category(d.args[0]))
        if d.form == "product":
            return product_category(self.category(d.args[0]), self.category(d.args[1]))
        if d.form == "table":
            return self._table(d)
        objs, edges = self[d.args[0]]
        labels = [l for l, _, _ in edges]
        rels = [(self._word(objs, edges, labels, l, d), self._word(objs, edges, labels, r, d)) for l, r in d.relations]
        return free_category(objs, edges, self.budget, rels)

    def _word(self, objs, edges, labels, path, d):
        src, letters = None, []
        for a in path:
            if isinstance(a, tuple):
                x = objs.index(a[1])
                if src is None:
                    src = x
                continue
            if a not in labels:
                raise SpecError(f"{a!r} is not an edge", *d.pos)
            e = labels.index(a)
            if src is None:
                src = edges[e][1]
            letters.append(e)
        return (src, tuple(letters))

    def _table(self, d):
        comp = {(f, g): h for (f, g), h in d.composites}
        mors = [(n, s, t) for n, s, t in d.morphisms]

        def rule(g, f):
            # g after f, i.e. the path f.g
            if (f, g) not in comp:
                raise SpecError(f"table is missing the composite {f}.{g}", *d.pos)
            h = comp[(f, g)]
            return ("id", h[1]) if isinstance(h, tuple) else h
        try:
            return make_category(list(d.objects), mors, rule)
        except (ValueError, KeyError) as exc:
            raise SpecError(f"bad table: {exc}", *d.pos) from exc

    def category(self, name: str) -> FinCategory:
        c = self[name]
        if isinstance(c, Presentation):
            raise SpecError(f"category {name} is only known up to the saturation budget", *self.doc.get(name).pos)
        return c

    def morphism(self, C: FinCategory, atom) -> int:
        if isinstance(atom, tuple):
            return C.ids[C.objects.index(atom[1])]
        for i, n in enumerate(C.names):
            if n == atom:
                return i
        raise ShapeError(f"no morphism named {atom!r}")

    def path_value(self, C: FinCategory, path) -> int:
        m = None
        for a in path:
            f = self.morphism(C, a)
            if m is not None and (f, m) not in C.comp:
                raise ShapeError(f"path {'.'.join(map(str, path))} is not composable")
            m = f if m is None else C.comp[(f, m)]
        return m

    def _functor(self, d):
        A, B = self.category(d.src), self.category(d.tgt)
        omap = dict(d.objects)
        try:
            on_obj = tuple(B.objects.index(omap[A.objects.label(x)]) for x in range(A.n_obj))
        except KeyError as exc:
            raise SpecError(f"functor {d.name} does not say where {exc} goes", *d.pos) from exc
        mmap = {a: b for a, b in d.morphisms}
        on_mor = []
        for m in range(A.n_mor):
            nm = A.names[m]
            if A.is_identity(m):
                on_mor.append(B.ids[on_obj[A.dom[m]]])
            elif nm in mmap:
                on_mor.append(self.path_value(B, mmap[nm]))
            else:
                on_mor.append(None)
        # composite morphisms of free categories follow from their letters
        for m in range(A.n_mor):
            if on_mor[m] is None:
                parts = str(A.names[m]).split(".")
                if all(p in mmap for p in parts):
                    on_mor[m] = self.path_value(B, tuple(a for p in parts for a in mmap[p]))
                else:
                    raise SpecError(f"functor {d.name} does not say where {A.names[m]!r} goes", *d.pos)
        F = FinFunctor(A, B, on_obj, tuple(on_mor))
        errs = F.check_axioms()
        if errs:
            raise SpecError(f"functor {d.name} is not a functor: {errs[0]}", *d.pos)
        return F

    def _prof(self, d):
        A, B = self.category(d.src), self.category(d.tgt)
        if d.form == "hom":
            if A is not B:
                raise SpecError("hom needs the same category on both sides", *d.pos)
            return hom_profunctor(A, d.name)
        if d.form == "companion":
            F = self[d.arg]
            if F.src is not A or F.tgt is not B:
                raise SpecError(f"companion of {d.arg} goes {d.src} -> {d.tgt} only if F does", *d.pos)
            return from_functor(F, d.name)
        if d.form == "conjoint":
            F = self[d.arg]
            if F.src is not B or F.tgt is not A:
                raise SpecError(f"conjoint of {d.arg} needs {d.arg} : {d.tgt} -> {d.src}", *d.pos)
            return conjoint(F, d.name)
        entries = {}
        for lab, c, t in d.gens:
            entries.setdefault((B.objects.index(t), A.objects.index(c)), []).append(lab)
        return free_profunctor(entries, A, B, d.name)

    # -- multicategories ---------------------------------------------------------------
    def _sig(self, d):
        sig = {n: (tuple(ins), out) for n, ins, out, _ in d.ops}
        if d.on:
            colours = self[d.on].tags()
        else:
            seen = {}
            for ins, out in sig.values():
                for c in ins + (out,):
                    seen.setdefault(c, None)
            colours = tuple(seen) or ("*",)
        for ins, out in sig.values():
            for c in ins + (out,):
                if c not in colours:
                    raise SpecError(f"colour {c!r} is not in {d.on}", *d.pos)
        return tuple(colours), sig

    def _mcat(self, d):
        if d.form == "trivial":
            return trivial_multicat(self[d.args[0]].tags(), self.trunc, d.name)
        if d.form == "bv":
            M, N = self[d.args[0]], self[d.args[1]]
            T = bv_tensor(M, N, self.tree_budget, self.trunc)
            T.name = d.name
            return T
        colours, sig = self[d.args[0]]
        rels = tuple((_tree(l), _tree(r)) for l, r in d.relations)
        return SymMulticat(colours, sig, rels, self.tree_budget, self.trunc, d.name)

    def colours(self, name: str) -> tuple:
        kind = self.kind(name)
        if kind == "set":
            return self[name].tags()
        if kind == "sig":
            return self[name][0]
        return self[name].colours

    def _seq(self, d):
        return sequence_cell(self.colours(d.src), self.colours(d.tgt), d.gens, self.trunc, d.name)

    def _mprof(self, d):
        A, B = self[d.src], self[d.tgt]
        if d.form == "id":
            if A is not B:
                raise SpecError("an identity multiprofunctor needs equal boundaries", *d.pos)
            return identity_multibimodule(A)
        if d.arg:
            x = self[d.arg]
            if x.src != A.colours or x.tgt != B.colours:
                raise SpecError(f"{d.arg} does not have boundaries {d.src} -> {d.tgt}", *d.pos)
        else:
            x = sequence_cell(A.colours, B.colours, d.gens, self.trunc, d.name)
        return free_multibimodule(x, A, B, d.name)

    def _interchange(self, d):
        return d.factors

    def boundaries(self, name: str) -> tuple:
        d = self.doc.get(name)
        return d.src, d.tgt


def _tree(t):
    if t == "id":
        return 0
    if isinstance(t, int):
        return t
    return (t[0], tuple(_tree(c) for c in t[1]))


def sequence_cell(src, tgt, gens, N: int, name: str) -> TableCell:
    """Generators act freely unless marked fixed; a fixed generator needs a constant input list."""
    profiles = {}
    for g, ins, out, fixed in gens:
        if any(c not in tgt for c in ins) or out not in src:
            raise ShapeError(f"{g} has colours outside the boundary")
        if fixed:
            if len(set(ins)) > 1:
                raise ShapeError(f"{g} is fixed by Sigma but its inputs are not all one colour")
            if len(ins) <= N:
                profiles[(g, None)] = (tuple(ins), out)
            continue
        for s in all_perms(len(ins)):
            if len(ins) <= N:
                profiles[(g, s)] = (tuple(ins[s[i]] for i in range(len(ins))), out)

    def act(e, s):
        g, t = e
        return e if t is None else (g, perm_compose(t, s))

    bound = max((len(ins) for _, ins, _, _ in gens), default=0)
    return TableCell(tuple(src), tuple(tgt), N, profiles, act, bound, (), name)
