"""Brute-force reference computations.

Nothing here calls into the package's algorithms: each function reads raw tables
(domains, codomains, composition dicts, entry sets) and recomputes from scratch.
"""
from __future__ import annotations

from itertools import permutations, product
from math import factorial


# -- categories ---------------------------------------------------------------------------

def tables(C):
    """(n_obj, dom, cod, ids, comp) read straight off a FinCategory."""
    return C.objects.size, tuple(C.dom), tuple(C.cod), tuple(C.ids), dict(C.comp)


def product_hom_sizes(A, B) -> dict:
    na, da, ca, _, _ = tables(A)
    nb, db, cb, _, _ = tables(B)
    out = {}
    for x, y in product(range(na), repeat=2):
        ha = sum(1 for m in range(len(da)) if da[m] == x and ca[m] == y)
        for u, v in product(range(nb), repeat=2):
            hb = sum(1 for m in range(len(db)) if db[m] == u and cb[m] == v)
            out[((x, u), (y, v))] = ha * hb
    return out


def functors_with_objects(A, C, on_obj) -> list[tuple]:
    """Every on-morphism table over a fixed object map, by backtracking in index order."""
    _, da, ca, ida, compa = tables(A)
    _, dc, cc, idc, compc = tables(C)
    n = len(da)
    candidates = []
    for m in range(n):
        s, t = on_obj[da[m]], on_obj[ca[m]]
        if m in ida:
            candidates.append([idc[s]])
        else:
            candidates.append([k for k in range(len(dc)) if dc[k] == s and cc[k] == t])
    found = []
    img = [None] * n

    def consistent(upto):
        for (g, f), h in compa.items():
            if g <= upto and f <= upto and h <= upto:
                if compc[(img[g], img[f])] != img[h]:
                    return False
        return True

    def rec(m):
        if m == n:
            found.append(tuple(img))
            return
        for k in candidates[m]:
            img[m] = k
            if consistent(m):
                rec(m + 1)
        img[m] = None

    rec(0)
    return found


def count_functors(A, C) -> int:
    na = A.objects.size
    nc = C.objects.size
    return sum(len(functors_with_objects(A, C, obj)) for obj in product(range(nc), repeat=na))


def sesquifunctors(A, B, C, commuting: bool) -> int:
    """Row functors A -> C for each b and column functors B -> C for each a, agreeing on objects;
    with commuting=True the square phi2(a', g) phi1(f, b) = phi1(f, b') phi2(a, g) must hold."""
    na, da, ca, _, _ = tables(A)
    nb, db, cb, _, _ = tables(B)
    nc, _, _, _, compc = tables(C)
    total = 0
    for grid in product(range(nc), repeat=na * nb):
        at = lambda a, b: grid[a * nb + b]  # noqa: E731
        rows = [functors_with_objects(A, C, tuple(at(a, b) for a in range(na))) for b in range(nb)]
        cols = [functors_with_objects(B, C, tuple(at(a, b) for b in range(nb))) for a in range(na)]
        if not all(rows) or not all(cols):
            continue
        if not commuting:
            k = 1
            for r in rows + cols:
                k *= len(r)
            total += k
            continue
        for rchoice in product(*rows):
            for cchoice in product(*cols):
                ok = all(compc[(cchoice[ca[f]][g], rchoice[db[g]][f])] == compc[(rchoice[cb[g]][f], cchoice[da[f]][g])]
                         for f in range(len(da)) for g in range(len(db)))
                total += ok
    return total


# -- profunctors ---------------------------------------------------------------------------

class _Classes:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def join(self, x, y):
        self.parent[self.find(x)] = self.find(y)


def coend_sizes(q, p) -> dict:
    """|(q . p)[c; a]| as pairs (y, x) over the middle objects modulo y.g ~ g.x."""
    B = p.tgt
    nb, db, cb, _, _ = tables(B)
    out = {}
    for c in range(q.tgt.objects.size):
        for a in range(p.src.objects.size):
            uf = _Classes()
            for b in range(nb):
                for y in q.entry[(c, b)].tags():
                    for x in p.entry[(b, a)].tags():
                        uf.find((y, x))
            for g in range(len(db)):
                b, b2 = db[g], cb[g]
                for y in q.entry[(c, b2)].tags():
                    for x in p.entry[(b, a)].tags():
                        uf.join((q.ract[(y, g)], x), (y, p.lact[(g, x)]))
            out[(c, a)] = len({uf.find(k) for k in list(uf.parent)})
    return out


def pointwise_sizes(p1, p2) -> dict:
    """|p1[b1; a1]| * |p2[b2; a2]| keyed by ((b1, b2), (a1, a2))."""
    out = {}
    for (b1, a1), s1 in p1.entry.items():
        for (b2, a2), s2 in p2.entry.items():
            out[((b1, b2), (a1, a2))] = s1.size * s2.size
    return out


# -- symmetric groups and sequences ----------------------------------------------------------

def compose(s, t):
    return tuple(s[t[i]] for i in range(len(t)))


def generated_subgroup(gens, n) -> set:
    group = {tuple(range(n))}
    frontier = list(group)
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = compose(g, h)
                if k not in group:
                    group.add(k)
                    nxt.append(k)
        frontier = nxt
    return group


def grid_cosets(m: int, n: int) -> int:
    """Right cosets of the grid symmetries (permuting whole rows or columns of an m x n grid,
    cell g = j*m + i) in the symmetric group on m*n letters, by explicit enumeration."""
    size = m * n
    gens = []
    for j in range(n - 1):
        s = list(range(size))
        for i in range(m):
            s[j * m + i], s[(j + 1) * m + i] = s[(j + 1) * m + i], s[j * m + i]
        gens.append(tuple(s))
    for i in range(m - 1):
        s = list(range(size))
        for j in range(n):
            s[j * m + i], s[j * m + i + 1] = s[j * m + i + 1], s[j * m + i]
        gens.append(tuple(s))
    H = generated_subgroup(gens, size)
    seen, cosets = set(), 0
    for p in permutations(range(size)):
        if p in seen:
            continue
        cosets += 1
        for h in H:
            seen.add(compose(p, h))
    return cosets


# -- multicategories -----------------------------------------------------------------------

def commuting_words(max_len: int) -> int:
    """Words in f, g up to the given length modulo fg = gf, by rewriting gf -> fg to normal form."""
    normal = set()
    for k in range(max_len + 1):
        for w in product("fg", repeat=k):
            s = "".join(w)
            while "gf" in s:
                s = s.replace("gf", "fg", 1)
            normal.add(s)
    return len(normal)


def commuting_endomap_pairs(n: int) -> tuple[int, int]:
    """(all pairs, commuting pairs) of endomaps of an n-element set."""
    maps = list(product(range(n), repeat=n))
    pairs = [(f, g) for f in maps for g in maps]
    good = sum(1 for f, g in pairs if all(f[g[x]] == g[f[x]] for x in range(n)))
    return len(pairs), good


def catalan(k: int) -> int:
    return factorial(2 * k) // (factorial(k + 1) * factorial(k))


def free_binary_count(n: int) -> int:
    """Operations of arity n in the free symmetric multicategory on one binary generator."""
    return factorial(n) * catalan(n - 1)


def binary_algebras(n: int, commutative: bool, associative: bool) -> int:
    count = 0
    for table in product(range(n), repeat=n * n):
        op = lambda x, y: table[x * n + y]  # noqa: E731
        if commutative and any(op(x, y) != op(y, x) for x in range(n) for y in range(n)):
            continue
        if associative and any(op(op(x, y), z) != op(x, op(y, z))
                               for x in range(n) for y in range(n) for z in range(n)):
            continue
        count += 1
    return count


def free_composite_orbits(k: int, j: int) -> int:
    """Orbits of raw composites (root perm, child perms, leaf labelling) of a free k-ary root
    over free j-ary children, under reordering the children and relabelling inside each child."""
    n = k * j
    perms_k, perms_j, perms_n = list(permutations(range(k))), list(permutations(range(j))), list(permutations(range(n)))
    uf = _Classes()
    raw = [(r, cs, lab) for r in perms_k for cs in product(perms_j, repeat=k) for lab in perms_n]
    for r, cs, lab in raw:
        uf.find((r, cs, lab))
        # swap two neighbouring children, moving their label blocks along
        for p in range(k - 1):
            sw = list(range(k))
            sw[p], sw[p + 1] = sw[p + 1], sw[p]
            r2 = tuple(r[sw[i]] for i in range(k))
            cs2 = tuple(cs[sw[i]] for i in range(k))
            lab2 = tuple(lab[sw[q // j] * j + q % j] for q in range(n))
            uf.join((r, cs, lab), (r2, cs2, lab2))
        # relabel inside one child
        for p in range(k):
            for t in range(j - 1):
                sw = list(range(j))
                sw[t], sw[t + 1] = sw[t + 1], sw[t]
                c2 = tuple(cs[p][sw[i]] for i in range(j))
                cs2 = cs[:p] + (c2,) + cs[p + 1:]
                lab2 = tuple(lab[p * j + sw[q - p * j]] if p * j <= q < (p + 1) * j else lab[q] for q in range(n))
                uf.join((r, cs, lab), (r, cs2, lab2))
    return len({uf.find(x) for x in raw})
