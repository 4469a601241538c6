from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from commtensor import catmon as cm
from commtensor.finkit import FinSet


def cyclic(n: int) -> cm.FinCategory:
    return cm.monoid(list(range(n)), lambda g, f: (g + f) % n, 0)


def test_corpus_categories_satisfy_axioms(categories):
    assert len(categories) == 15
    for name, C in categories.items():
        assert C.check_axioms() == [], name


def test_identity_and_composition_lookup(categories):
    sq = categories["square"]
    assert sq.n_obj == 4 and sq.n_mor == 9
    for f in range(sq.n_mor):
        assert sq.compose(sq.ids[sq.cod[f]], f) == f == sq.compose(f, sq.ids[sq.dom[f]])


def test_loop_gives_truncated_presentation():
    pres = cm.free_category(FinSet.of(["*"]), [("f", 0, 0)], budget=3)
    assert isinstance(pres, cm.Presentation) and pres.truncated
    assert sorted(len(w) for w in pres.words) == [0, 1, 2, 3]


def test_loop_with_relation_closes():
    z2 = cm.free_category(FinSet.of(["*"]), [("f", 0, 0)], budget=6, relations=[((0, (0, 0)), (0, ()))])
    assert isinstance(z2, cm.FinCategory) and z2.n_mor == 2


def test_acyclic_free_category_is_exact():
    C = cm.free_category(FinSet(4), [("a", 0, 1), ("b", 1, 2), ("c", 2, 3)])
    assert C.n_mor == 10 and C.check_axioms() == []
    assert cm.find_isomorphism(C, cm.chain(4)) is not None


def test_funny_tensor_of_arrows(categories):
    a = categories["arrow"]
    ft = cm.funny_tensor(a, a)
    assert not ft.truncated and ft.category.n_mor == 10
    assert ft.category.check_axioms() == []
    assert cm.sesqui_check(ft.universal())
    assert not cm.is_commuting(ft.universal())[0]


def test_commuting_tensor_of_arrows_is_the_square(categories):
    a = categories["arrow"]
    T = cm.commuting_tensor(a, a)
    assert T.category.n_mor == 9
    assert T.to_product.is_isomorphism()
    assert cm.find_isomorphism(T.category, categories["square"]) is not None


# saturation cost climbs steeply with the group order (Z4 x Z4 takes most of a minute)
@settings(max_examples=15)
@given(st.integers(1, 3), st.integers(1, 3))
def test_commuting_tensor_of_cyclic_groups(n, m):
    T = cm.commuting_tensor(cyclic(n), cyclic(m))
    assert T.category.n_mor == n * m and T.to_product.is_isomorphism()


@settings(max_examples=20)
@given(st.integers(1, 4), st.integers(1, 4))
def test_functor_count_matches_oracle(n, m):
    A, C = cyclic(n), cyclic(m)
    assert cm.count_functors(A, C) == oracles.count_functors(A, C)


def test_functor_counts_on_corpus(categories):
    names = ["arrow", "parallel", "idem", "span", "flag", "band", "z2"]
    for a in names:
        for c in names:
            A, C = categories[a], categories[c]
            assert cm.count_functors(A, C) == oracles.count_functors(A, C), (a, c)


def test_sesquifunctor_enumeration_matches_oracle(categories):
    a, idem = categories["arrow"], categories["idem"]
    total = sum(1 for _ in cm.enumerate_sesquifunctors(a, a, idem))
    assert total == oracles.sesquifunctors(a, a, idem, commuting=False)
    comm = sum(1 for s in cm.enumerate_sesquifunctors(a, a, idem) if cm.is_commuting(s)[0])
    assert comm == oracles.sesquifunctors(a, a, idem, commuting=True)


def test_transpose_roundtrip(categories):
    a, band = categories["arrow"], categories["band"]
    hom = cm.commuting_hom(a, band)
    for s in cm.enumerate_sesquifunctors(a, a, band):
        if not cm.is_commuting(s)[0]:
            continue
        K = cm.transpose_functor(s, hom)
        assert K.check_axioms() == []
        assert cm.untranspose_functor(K, a, hom).key() == s.key()


def test_multimorphism_composition_and_permutation(categories):
    a, sq = categories["arrow"], categories["square"]
    s = next(s for s in cm.enumerate_sesquifunctors(a, a, sq) if cm.is_commuting(s)[0])
    M = cm.from_sesquifunctor(s)
    assert M.check() == [] and M.is_commuting()
    assert M.permute((1, 0)).permute((1, 0)).same_as(M)
    ident = cm.unary(cm.identity_functor(a))
    assert cm.sesqui_compose(M, 0, ident).same_as(M)
    assert cm.sesqui_compose(cm.unary(cm.identity_functor(sq)), 0, M).same_as(M)


def test_opposite_is_involutive(categories):
    for C in categories.values():
        assert cm.find_isomorphism(cm.opposite(cm.opposite(C)), C) is not None
