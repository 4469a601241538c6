from hypothesis import given, settings
from hypothesis import strategies as st

from commtensor import vmatrix as vm
from commtensor.finkit import FinFunction, FinSet


def _mat(src: int, tgt: int, sizes, prefix: str) -> vm.Mat:
    it = iter(sizes)
    return vm.Mat.build(FinSet(src), FinSet(tgt),
                        lambda b, a: [f"{prefix}{b}{a}{k}" for k in range(next(it))])


@st.composite
def mats(draw, src=None, tgt=None, prefix="x", max_entry=2):
    src = draw(st.integers(1, 2)) if src is None else src
    tgt = draw(st.integers(1, 2)) if tgt is None else tgt
    sizes = draw(st.lists(st.integers(0, max_entry), min_size=src * tgt, max_size=src * tgt))
    return _mat(src, tgt, sizes, prefix)


@st.composite
def chains(draw):
    a, b, c, d = (draw(st.integers(1, 2)) for _ in range(4))
    return (draw(mats(c, d, "z")), draw(mats(b, c, "y")), draw(mats(a, b, "x")))


def _is_iso(cell):
    return all(c.is_bijective() for c in cell.comp.values())


def test_composite_entry_sizes():
    x = _mat(1, 2, [1, 2], "x")
    y = _mat(2, 1, [3, 1], "y")
    c = vm.mat_compose(y, x)
    assert c.sizes() == {(0, 0): 3 * 1 + 1 * 2}


@given(chains())
def test_associator_is_globular_iso(ch):
    z, y, x = ch
    a = vm.associator(z, y, x)
    assert a.is_globular_iso()


@given(mats())
def test_unitors(x):
    assert vm.left_unitor(x).is_globular_iso() and vm.right_unitor(x).is_globular_iso()
    inv = vm.invert(vm.left_unitor(x))
    assert vm.vcompose(vm.left_unitor(x), inv).same_as(vm.identity_cell(x))


@settings(max_examples=25)
@given(mats(2, 2, "y1"), mats(2, 2, "x1"), mats(1, 2, "y2"), mats(2, 1, "x2"))
def test_interchanger_is_iso(y1, x1, y2, x2):
    assert _is_iso(vm.interchanger(y1, x1, y2, x2))


@given(mats(), mats(prefix="y"))
def test_symmetry_squares_to_identity(x, y):
    s, t = vm.symmetry(x, y), vm.symmetry(y, x)
    both = vm.vcompose(s, t)
    assert both.f.table == tuple(range(both.f.dom.size)) and all(c.table == tuple(range(c.dom.size))
                                                                   for c in both.comp.values())


@given(mats())
def test_tensor_unitor(x):
    assert _is_iso(vm.tensor_unitor(x))


def test_hom_transpose_roundtrip():
    x = _mat(1, 1, [1], "x")
    y = _mat(1, 2, [1, 1], "y")
    z = _mat(1, 2, [1, 2], "z")
    cells = list(vm.enumerate_cells(vm.mat_tensor(x, y), z))
    assert len(cells) == vm.count_cells(vm.mat_tensor(x, y), z)
    for c in cells:
        back = vm.untranspose(vm.transpose(c, y, z), x, y, z)
        assert back.same_as(c)


def test_closedness_counts_agree():
    x = _mat(1, 1, [2], "x")
    y = _mat(1, 1, [1], "y")
    z = _mat(2, 1, [1, 1], "z")
    hom = vm.mat_hom(y, z)
    assert vm.count_cells(vm.mat_tensor(x, y), z) == vm.count_cells(x, hom)


def test_companion_cells_are_cells():
    f = FinFunction(FinSet(3), FinSet(2), (0, 1, 1))
    comp, conj = vm.companion_conjoint(f)
    assert comp.size() == conj.size() == 3
    p1, q1, p2, q2 = vm.companion_cells(f)
    assert p1.cod.size() == 2 and q1.dom.size() == 3


def test_tabulator_factorisation():
    x = _mat(2, 2, [1, 0, 2, 1], "x")
    T, ps, pt, pi = vm.tabulator(x)
    assert T.size == x.size()
    # every cell id_X => x factors through the tabulator
    X = FinSet(1)
    for theta in vm.enumerate_cells(vm.identity_mat(X), x):
        h = vm.factor_through_tabulator(x, theta)
        assert h.then(ps).table == theta.f.table and h.then(pt).table == theta.g.table


def test_sigma_tau_globular():
    a1 = _mat(2, 2, [1, 1, 0, 1], "a")
    a2 = _mat(1, 1, [2], "b")
    sigma, tau = vm.sigma_tau(a1, a2)
    assert sigma.is_globular() and tau.is_globular()
