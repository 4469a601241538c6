"""Finite sets, functions between them, and the finite (co)limits everything else is built from."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _cartesian
from typing import Hashable, Iterable, Iterator, Sequence

DEFAULT_CAP = 10**6


class ShapeError(ValueError):
    pass


class EnumerationBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class FinSet:
    """Elements are 0..size-1. Labels are optional tags used for display and decoding."""

    size: int
    labels: tuple | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.size < 0:
            raise ShapeError("negative size")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size:
                raise ShapeError("label count does not match size")
            index = {lab: i for i, lab in enumerate(labels)}
            if len(index) != self.size:
                raise ShapeError("labels must be distinct")
            object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, labels: Iterable[Hashable]) -> "FinSet":
        labels = tuple(labels)
        return cls(len(labels), labels)

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))

    def label(self, i: int):
        return i if self.labels is None else self.labels[i]

    def index(self, label) -> int:
        if self._index is None:
            if isinstance(label, int) and 0 <= label < self.size:
                return label
            raise KeyError(label)
        return self._index[label]

    def __contains__(self, label):
        if self._index is None:
            return isinstance(label, int) and 0 <= label < self.size
        return label in self._index

    def tags(self) -> tuple:
        return self.labels if self.labels is not None else tuple(range(self.size))


@dataclass(frozen=True)
class FinFunction:
    dom: FinSet
    cod: FinSet
    table: tuple

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.size:
            raise ShapeError("table length must equal domain size")
        for t in table:
            if not 0 <= t < self.cod.size:
                raise ShapeError(f"value {t} outside codomain of size {self.cod.size}")

    def __call__(self, i: int) -> int:
        return self.table[i]

    @classmethod
    def identity(cls, s: FinSet) -> "FinFunction":
        return cls(s, s, tuple(range(s.size)))

    @classmethod
    def from_labels(cls, dom: FinSet, cod: FinSet, mapping) -> "FinFunction":
        """Build from a label-to-label mapping (dict or callable)."""
        get = mapping.__getitem__ if hasattr(mapping, "__getitem__") else mapping
        return cls(dom, cod, tuple(cod.index(get(dom.label(i))) for i in range(dom.size)))

    def then(self, g: "FinFunction") -> "FinFunction":
        """Diagrammatic composite: first self, then g."""
        if self.cod != g.dom:
            raise ShapeError("composite of non-composable functions")
        return FinFunction(self.dom, g.cod, tuple(g.table[t] for t in self.table))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "FinFunction":
        if not self.is_bijective():
            raise ShapeError("function is not invertible")
        inv = [0] * self.cod.size
        for i, t in enumerate(self.table):
            inv[t] = i
        return FinFunction(self.cod, self.dom, tuple(inv))


class UnionFind:
    """Union-find over 0..n-1 whose roots are always the least element of their class."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry
        return True

    def grow(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1


@dataclass(frozen=True)
class Partition:
    carrier: FinSet
    class_of: tuple

    def __post_init__(self):
        for r in self.class_of:
            if self.class_of[r] != r:
                raise ShapeError("class representatives must be fixed points")

    @classmethod
    def from_pairs(cls, carrier: FinSet, pairs: Iterable[tuple[int, int]]) -> "Partition":
        uf = UnionFind(carrier.size)
        for x, y in pairs:
            uf.union(x, y)
        return cls(carrier, tuple(uf.find(i) for i in range(carrier.size)))

    def representatives(self) -> list[int]:
        return sorted(set(self.class_of))

    def quotient(self) -> tuple[FinSet, FinFunction]:
        reps = self.representatives()
        pos = {r: k for k, r in enumerate(reps)}
        labels = None
        if self.carrier.labels is not None:
            labels = tuple(self.carrier.labels[r] for r in reps)
        q = FinSet(len(reps), labels)
        return q, FinFunction(self.carrier, q, tuple(pos[c] for c in self.class_of))


def _check_parallel(f: FinFunction, g: FinFunction):
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeError("functions are not parallel")


def coequalize(f: FinFunction, g: FinFunction) -> tuple[FinSet, FinFunction]:
    _check_parallel(f, g)
    part = Partition.from_pairs(f.cod, zip(f.table, g.table))
    return part.quotient()


def equalize(f: FinFunction, g: FinFunction) -> tuple[FinSet, FinFunction]:
    _check_parallel(f, g)
    keep = [x for x in range(f.dom.size) if f.table[x] == g.table[x]]
    labels = None if f.dom.labels is None else tuple(f.dom.labels[x] for x in keep)
    sub = FinSet(len(keep), labels)
    return sub, FinFunction(sub, f.dom, tuple(keep))


def product(xs: Sequence[FinSet]) -> tuple[FinSet, list[FinFunction]]:
    """Lexicographic product: the last factor varies fastest."""
    tuples = list(_cartesian(*[range(x.size) for x in xs]))
    labels = None
    if all(x.labels is not None for x in xs):
        labels = tuple(tuple(xs[k].labels[t[k]] for k in range(len(xs))) for t in tuples)
    p = FinSet(len(tuples), labels)
    projs = [FinFunction(p, x, tuple(t[k] for t in tuples)) for k, x in enumerate(xs)]
    return p, projs


def coproduct(xs: Sequence[FinSet]) -> tuple[FinSet, list[FinFunction]]:
    """Tagged disjoint union; summand k occupies a contiguous block starting at its offset."""
    offsets = coproduct_offsets([x.size for x in xs])
    labels = None
    if all(x.labels is not None for x in xs):
        labels = tuple((k, lab) for k, x in enumerate(xs) for lab in x.labels)
    s = FinSet(sum(x.size for x in xs), labels)
    injs = [FinFunction(x, s, tuple(offsets[k] + i for i in range(x.size))) for k, x in enumerate(xs)]
    return s, injs


def product_coproduct(xs: Sequence[FinSet], mode: str = "product"):
    if mode == "product":
        return product(xs)
    if mode == "coproduct":
        return coproduct(xs)
    raise ValueError(f"unknown mode {mode!r}")


def coproduct_offsets(sizes: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


def encode_product(sizes: Sequence[int], idx: Sequence[int]) -> int:
    n = 0
    for s, i in zip(sizes, idx):
        if not 0 <= i < s:
            raise ShapeError("index out of range")
        n = n * s + i
    return n


def decode_product(sizes: Sequence[int], n: int) -> tuple[int, ...]:
    out = []
    for s in reversed(sizes):
        n, r = divmod(n, s)
        out.append(r)
    return tuple(reversed(out))


def encode_coproduct(sizes: Sequence[int], k: int, i: int) -> int:
    return coproduct_offsets(sizes)[k] + i


def decode_coproduct(sizes: Sequence[int], n: int) -> tuple[int, int]:
    for k, s in enumerate(sizes):
        if n < s:
            return k, n
        n -= s
    raise ShapeError("index out of range")


def count_functions(dom: FinSet, cod: FinSet) -> int:
    return cod.size ** dom.size


def enumerate_functions(dom: FinSet, cod: FinSet, cap: int = DEFAULT_CAP) -> Iterator[FinFunction]:
    n = count_functions(dom, cod)
    if n > cap:
        raise EnumerationBudgetError(f"{n} functions exceed the cap {cap}")
    for table in _cartesian(range(cod.size), repeat=dom.size):
        yield FinFunction(dom, cod, table)
