from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commtensor.finkit import (
    EnumerationBudgetError,
    FinFunction,
    FinSet,
    Partition,
    ShapeError,
    UnionFind,
    coequalize,
    coproduct,
    count_functions,
    decode_coproduct,
    decode_product,
    encode_coproduct,
    encode_product,
    enumerate_functions,
    equalize,
)
from commtensor.finkit import product as fin_product

sizes = st.lists(st.integers(1, 4), min_size=1, max_size=4)


@st.composite
def parallel_pair(draw):
    n = draw(st.integers(0, 5))
    m = draw(st.integers(1, 5))
    f = draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    g = draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    return FinFunction(FinSet(n), FinSet(m), f), FinFunction(FinSet(n), FinSet(m), g)


def test_finset_labels():
    s = FinSet.of("abc")
    assert s.index("b") == 1 and s.label(2) == "c" and "a" in s and "z" not in s
    with pytest.raises(ShapeError):
        FinSet.of("aa")
    with pytest.raises(ShapeError):
        FinSet(-1)


def test_function_checks_codomain():
    with pytest.raises(ShapeError):
        FinFunction(FinSet(2), FinSet(1), (0, 1))


def test_inverse_of_bijection():
    f = FinFunction(FinSet(3), FinSet(3), (2, 0, 1))
    assert f.then(f.inverse()).table == (0, 1, 2)
    with pytest.raises(ShapeError):
        FinFunction(FinSet(2), FinSet(2), (0, 0)).inverse()


@given(sizes, st.data())
def test_product_encoding_roundtrip(ns, data):
    idx = tuple(data.draw(st.integers(0, n - 1)) for n in ns)
    assert decode_product(ns, encode_product(ns, idx)) == idx


@given(sizes, st.data())
def test_coproduct_encoding_roundtrip(ns, data):
    k = data.draw(st.integers(0, len(ns) - 1))
    i = data.draw(st.integers(0, ns[k] - 1))
    assert decode_coproduct(ns, encode_coproduct(ns, k, i)) == (k, i)


@given(sizes)
def test_product_and_coproduct_sizes(ns):
    P, projections = fin_product([FinSet(n) for n in ns])
    C, injections = coproduct([FinSet(n) for n in ns])
    total = 1
    for n in ns:
        total *= n
    assert P.size == total and C.size == sum(ns)
    assert len(projections) == len(injections) == len(ns)
    images = set()
    for inj in injections:
        images |= set(inj.table)
    assert images == set(range(C.size))


@given(parallel_pair())
def test_coequaliser_is_universal(pair):
    f, g = pair
    Q, q = coequalize(f, g)
    assert f.then(q).table == g.then(q).table and q.is_surjective()
    # every cocone into a two-element set factors uniquely through q
    for h in enumerate_functions(f.cod, FinSet(2)):
        if f.then(h).table != g.then(h).table:
            continue
        factor = {}
        for x in range(f.cod.size):
            assert factor.setdefault(q(x), h(x)) == h(x)


@given(parallel_pair())
def test_equaliser(pair):
    f, g = pair
    E, e = equalize(f, g)
    assert e.then(f).table == e.then(g).table and e.is_injective()
    assert E.size == sum(1 for x in range(f.dom.size) if f(x) == g(x))


@given(st.integers(1, 12), st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=12))
def test_union_find_roots_are_least(n, pairs):
    uf = UnionFind(n)
    pairs = [(a % n, b % n) for a, b in pairs]
    for a, b in pairs:
        uf.union(a, b)
    for x in range(n):
        r = uf.find(x)
        assert r <= x and uf.find(r) == r
    for a, b in pairs:
        assert uf.find(a) == uf.find(b)
    part = Partition.from_pairs(FinSet(n), pairs)
    assert len(part.representatives()) == len({uf.find(x) for x in range(n)})


def test_function_counts():
    assert count_functions(FinSet(3), FinSet(2)) == 8
    assert sum(1 for _ in enumerate_functions(FinSet(3), FinSet(2))) == 8
    assert sum(1 for _ in enumerate_functions(FinSet(0), FinSet(0))) == 1
    with pytest.raises(EnumerationBudgetError):
        list(enumerate_functions(FinSet(10), FinSet(10), cap=100))


def test_enumerated_functions_are_distinct():
    tables = {f.table for f in enumerate_functions(FinSet(2), FinSet(3))}
    assert tables == set(product(range(3), repeat=2))
