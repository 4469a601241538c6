import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from commtensor import seqcells as sc
from commtensor.finkit import ShapeError
from commtensor.opdkit import symseq

STAR = ("*",)


def free(name, arity, N=4):
    return symseq.free_symseq(STAR, STAR, {name: (STAR * arity, "*")}, N, name)


@given(st.lists(st.integers(0, 4), min_size=4, max_size=4), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_perm_group_laws(a, b):
    s = sc.argsort(a)
    t = sc.argsort(b)
    assert sc.perm_compose(s, sc.perm_inverse(s)) == sc.identity_perm(4)
    u = sc.perm_compose(s, t)
    assert sc.perm_compose(u, sc.perm_inverse(u)) == sc.identity_perm(4)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_free_cell_is_a_free_action(k):
    x = free("g", k)
    assert x.size() == len(sc.all_perms(k)) and x.check_action() == []


def test_point_cell_is_fixed():
    pt = symseq.point_symseq("*", [0, 2, 3], 3)
    assert pt.size() == 3 and pt.check_action() == []
    with pytest.raises(ShapeError):
        sc.trivial_action_cell(("a", "b"), ("a",), 2, {"p": (("a", "b"), "a")})


@pytest.mark.parametrize("k,j", [(2, 2), (1, 3), (3, 1)])
def test_free_composite_size(k, j):
    c = sc.ComposeCell(free("h", j), free("g", k))
    assert c.check_action() == []
    assert c.sizes_by_arity() == {k * j: oracles.free_composite_orbits(k, j)}


def test_composite_of_points_counts_pairings():
    pt = symseq.point_symseq("*", [2], 4)
    c = sc.ComposeCell(pt, pt)
    # one element per way of splitting four leaves into two blocks of two
    blocks = {frozenset(frozenset(p) for p in ((a, b), tuple(set(range(4)) - {a, b})))
              for a in range(4) for b in range(a + 1, 4)}
    assert c.sizes_by_arity() == {4: len(blocks)} == {4: 3}


def test_associator_and_unitors_are_isos():
    g, h, k = free("g", 1), free("h", 2), free("k", 2)
    a = sc.associator(g, h, k)
    assert a.check() == [] and a.is_bijective()
    for x in (g, h, symseq.point_symseq("*", [0, 2], 4)):
        for u in (sc.left_unitor(x), sc.right_unitor(x)):
            assert u.check() == [] and u.is_bijective()


def test_map_inverse_and_then():
    g, h, k = free("g", 1), free("h", 2), free("k", 1)
    a = sc.associator(g, h, k)
    back = sc.then(a, a.inverse())
    assert all(back(e) == e for e in a.dom.elements())


@pytest.mark.parametrize("m,n", [(1, 1), (1, 3), (2, 1), (2, 2)])
def test_arithmetic_product_of_points(m, n):
    assert oracles.grid_cosets(m, n) == len(sc.all_perms(m * n)) // (len(sc.all_perms(m)) * len(sc.all_perms(n)))
    pt_m = symseq.point_symseq("*", [m], m * n, "p")
    pt_n = symseq.point_symseq("*", [n], m * n, "q")
    t = symseq.arithmetic_product(pt_m, pt_n, m * n)
    cc = ("*", "*")
    assert len(t.entry((cc,) * (m * n), cc)) == oracles.grid_cosets(m, n)
    assert t.check_action() == []


def test_arithmetic_product_of_free_cells_is_free():
    t = symseq.arithmetic_product(free("g", 2), free("k", 1), 2)
    # free on one generator of arity 2
    assert t.size() == 2 and t.check_action() == []


def test_interchanger_is_equivariant():
    g1, g2, k1, k2 = free("g1", 1), free("g2", 2), free("k1", 1), free("k2", 1)
    dom = sc.TensorCell(sc.ComposeCell(g1, g2), sc.ComposeCell(k1, k2))
    cod = sc.ComposeCell(sc.TensorCell(g1, k1), sc.TensorCell(g2, k2))
    xi = sc.interchanger(dom, cod)
    assert xi.check() == [] and xi.is_bijective()


def test_quotient_merges_orbits():
    x = free("h", 2)
    e0, e1 = x.elements()
    q = sc.quotient(x, [(e0, e1)])
    assert q.size() == 1 and q.check_action() == []
    assert q.project(e1) == q.project(e0)
