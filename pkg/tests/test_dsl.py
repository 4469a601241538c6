import pytest
from hypothesis import given
from hypothesis import strategies as st

from commtensor.mtcli.commands import corpus_dir
from commtensor.mtcli.dsl import SpecError, dump, parse_spec

CORPUS = sorted(p.name for p in corpus_dir().glob("*.spec"))

names = st.from_regex(r"[a-z][a-z0-9]{0,3}", fullmatch=True).filter(lambda s: s not in {"id", "as", "on"})


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_round_trips(name):
    doc = parse_spec((corpus_dir() / name).read_text())
    again = parse_spec(dump(doc))
    assert again == doc
    assert dump(again) == dump(doc)


@st.composite
def documents(draw):
    objs = draw(st.lists(names, min_size=1, max_size=4, unique=True))
    n_edges = draw(st.integers(0, 4))
    labels = draw(st.lists(names.filter(lambda s: s not in objs), min_size=n_edges, max_size=n_edges, unique=True))
    edges = [(lab, draw(st.sampled_from(objs)), draw(st.sampled_from(objs))) for lab in labels]
    lines = []
    if draw(st.booleans()):
        lines.append(f"budget {draw(st.integers(1, 20))}")
    lines.append("set O = {" + ", ".join(objs) + "}")
    lines.append("graph G on O" + (" : " + ", ".join(f"{s}->{t} as {l}" for l, s, t in edges) if edges else ""))
    lines.append("cat C = free(G)")
    lines.append("cat D = discrete(O)")
    lines.append(f"cat K = chain({draw(st.integers(1, 5))})")
    lines.append("cat P = product(C, D)")
    lines.append("prof H : C -> C { hom }")
    return "\n".join(lines) + "\n"


@given(documents())
def test_generated_documents_round_trip(text):
    doc = parse_spec(text)
    assert parse_spec(dump(doc)) == doc


def test_comments_and_multiline_blocks():
    text = """
    # a comment
    set O = {a, b}   # trailing
    cat T = table {
        objects a, b
        u : a -> b
    }
    """
    doc = parse_spec(text)
    (t,) = doc.of_kind("cat")
    assert t.form == "table" and t.morphisms == (("u", "a", "b"),)


@pytest.mark.parametrize("text,line,col", [
    ("set O = {a, b}\ncat C = free(G)\n", 2, 1),
    ("set O = {a}\nset O = {b}\n", 2, 1),
    ("set O = {a, b}\ngraph G on O : a -> b as f ?\n", 2, 28),
])
def test_errors_carry_positions(text, line, col):
    with pytest.raises(SpecError) as exc:
        parse_spec(text)
    assert (exc.value.line, exc.value.col) == (line, col)
    assert str(exc.value).startswith(f"{line}:{col}:")


def test_wrong_kind_is_reported():
    with pytest.raises(SpecError, match="expected graph"):
        parse_spec("set O = {a}\ncat C = free(O)\n")


def test_interchange_boundaries_checked():
    text = """
    set O = {a, b}
    graph G on O : a->b as f
    cat A = free(G)
    cat B = discrete(O)
    prof P : A -> B { hom }
    prof Q : A -> A { hom }
    interchange I = (Q, P, id, Q)
    """
    with pytest.raises(SpecError, match="boundary mismatch"):
        parse_spec(text)
