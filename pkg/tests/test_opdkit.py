from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from commtensor.opdkit import multicat as mc
from commtensor.opdkit import multiprof, symseq
from commtensor.seqcells import all_perms, free_action_cell, perm_compose

STAR = ("*",)
BIN = {"m": (("*", "*"), "*")}
COMM = (("m", (0, 1)), ("m", (1, 0)))
ASSOC = (("m", (("m", (0, 1)), 2)), ("m", (0, ("m", (1, 2)))))
PAIR = ("*", "*")


def com(N=3):
    return mc.SymMulticat(STAR, BIN, (COMM, ASSOC), 3, N, "Com")


def ass(N=3):
    return mc.SymMulticat(STAR, BIN, (ASSOC,), 3, N, "Ass")


def freebin(N=3):
    return mc.free_multicat(STAR, BIN, 3, N, "FreeBin")


def test_arity_counts():
    for n in (1, 2, 3):
        assert com().view.sizes_by_arity()[n] == 1
        assert ass().view.sizes_by_arity()[n] == factorial(n)
        assert freebin().view.sizes_by_arity()[n] == oracles.free_binary_count(n)
    assert oracles.catalan(3) == 5 and oracles.free_binary_count(3) == 12


def test_certificates():
    assert com().view.certificate.closed and ass().view.certificate.closed
    cert = mc.free_multicat(STAR, {"f": (STAR, "*")}, 2, 1).view.certificate
    assert not cert.closed


def test_monads_satisfy_laws():
    for M in (com(), ass(), freebin(2), mc.trivial_multicat(STAR, 2)):
        assert M.monad().check() == [], M.name


def test_relation_type_mismatch_rejected():
    with pytest.raises(mc.ShapeError):
        mc.SymMulticat(STAR, {**BIN, "u": (STAR, "*")}, ((("m", (0, 1)), ("u", (0,))),), 3, 2)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("which,commutative,associative", [("com", True, True), ("ass", False, True),
                                                          ("free", False, False)])
def test_algebra_counts_match_brute_force(n, which, commutative, associative):
    M = {"com": com, "ass": ass, "free": freebin}[which](2)
    assert mc.count_algebras(M, n) == oracles.binary_algebras(n, commutative, associative)


def test_algebra_counts_at_three():
    assert mc.count_algebras(com(3), 3) == oracles.binary_algebras(3, True, True)


def test_unit_and_swap():
    assert mc.unit_iso_check(com(2))["ok"]
    z2 = mc.SymMulticat(STAR, {"f": (STAR, "*")}, ((("f", (("f", (0,)),)), 0),), 3, 2, "Z2")
    assert mc.swap_iso_check(z2, com(2))["ok"]


@given(st.permutations(range(3)), st.permutations(range(3)))
def test_tree_action_is_a_right_action(s, t):
    tree = ("m", (("m", (0, 1)), 2))
    s, t = tuple(s), tuple(t)
    both = mc.tree_act(mc.tree_act(tree, s), t)
    assert both == mc.tree_act(tree, perm_compose(s, t))
    assert mc.tree_profile(BIN, both) == (STAR * 3, "*")


def test_enumerated_trees_have_the_right_arity():
    trees = mc.enumerate_trees(BIN, STAR, 2, 3)
    by_arity = {}
    for t in trees:
        by_arity[mc.tree_arity(t)] = by_arity.get(mc.tree_arity(t), 0) + 1
    assert by_arity == {1: 1, 2: 2, 3: 12}


# -- symmetric sequences --------------------------------------------------------------

def _pair_cell(gens, N=2):
    return free_action_cell((PAIR,), (PAIR,), N, gens, "z")


def test_hom_from_the_unit_point_is_the_target():
    y = symseq.point_symseq("*", [1], 2, "u")
    z = _pair_cell({"w": ((PAIR, PAIR), PAIR), "v": ((PAIR,), PAIR)})
    hom = symseq.symseq_hom(y, z)
    assert hom.sizes_by_arity() == z.sizes_by_arity()
    assert hom.check_action() == []


def test_hom_into_empty_is_empty():
    y = symseq.point_symseq("*", [1], 2, "u")
    z = symseq.empty_symseq((PAIR,), (PAIR,), 2)
    assert symseq.symseq_hom(y, z).size() == 0


@pytest.mark.parametrize("xk,yk", [(1, 1), (2, 1), (1, 2)])
def test_adjunction_count(xk, yk):
    x = symseq.free_symseq(STAR, STAR, {"g": (STAR * xk, "*")}, 2, "x")
    y = symseq.point_symseq("*", [yk], 2, "y")
    z = _pair_cell({"w": ((PAIR, PAIR), PAIR), "v": ((PAIR,), PAIR), "v2": ((PAIR,), PAIR)})
    r = symseq.adjunction_count(x, y, z)
    assert r["ok"] and r["transpose_injective"]


def test_certification_reports_exact_arities():
    x = symseq.free_symseq(STAR, STAR, {"g": (STAR * 2, "*")}, 3, "x")
    assert symseq.certification(x)["exact_arities"] == [0, 1, 2, 3]
    assert len(all_perms(3)) == 6


# -- multiprofunctors --------------------------------------------------------------------

def test_identity_multiprofunctor_composes_to_itself():
    M = com(2)
    I = multiprof.identity_multibimodule(M)
    assert I.check() == []
    comp = multiprof.multiprof_compose(I, I)
    assert comp.check() == [] and comp.cell.sizes_by_arity() == I.cell.sizes_by_arity()


def test_free_multiprofunctor():
    M = com(2)
    x = symseq.free_symseq(STAR, STAR, {"s": (STAR, "*")}, 2, "s")
    F = multiprof.free_multibimodule(x, M, M)
    assert F.check() == []
    # arity 2: m(s(0), s(1)) or s(m(0, 1)), with Com(2) a single orbit either way
    assert F.cell.sizes_by_arity() == {1: 1, 2: 2}
