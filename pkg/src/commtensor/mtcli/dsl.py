"""Line-oriented presentation language: tokenizer, parser, document model and canonical printer.

    budget 12
    trunc 2
    set A = {x, y}
    set One = {z}
    graph G on A : x->y as f
    graph L on One : z->z as e
    cat C = free(G)
    cat Z2 = free(L) / { e.e = id(z) }
    cat D = discrete(A)
    cat T = table { objects p, q ; u : p -> q ; v : q -> q ; u.v = u ; v.v = v }
    functor F : C -> T { x -> p ; y -> q ; f -> u }
    prof P : C -> T { companion F }
    sig S { m : (c, c) -> c }
    mcat M = free(S) / { m(0, 1) = m(1, 0) }
    seq X : M -> M { g : (c) -> c ; pt : (c, c) -> c fixed }
    mprof Q : M -> M { free X }
    interchange I = (Q, Q, id, Q)

Paths are read left to right (f.g is f followed by g).  Blocks may span several lines;
inside a block, items are separated by `;` or line breaks.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*|\d+|\*")
PUNCT = ("->", "{", "}", "(", ")", ",", ";", ":", "=", "/", ".")


class SpecError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line, self.col = line, col


@dataclass
class Tok:
    kind: str          # "name", "punct", "nl", "end"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        i = 0
        while i < len(line):
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            for p in PUNCT:
                if line.startswith(p, i):
                    toks.append(Tok("punct", p, ln, i + 1))
                    i += len(p)
                    break
            else:
                m = NAME.match(line, i)
                if not m:
                    raise SpecError(f"unexpected character {ch!r}", ln, i + 1)
                toks.append(Tok("name", m.group(), ln, i + 1))
                i = m.end()
        toks.append(Tok("nl", "\n", ln, len(line) + 1))
    toks.append(Tok("end", "", len(text.splitlines()) + 1, 1))
    return toks


# -- document model ----------------------------------------------------------------------
# Positions are kept for error messages but are not part of equality.

def _pos():
    return field(default=(0, 0), compare=False, repr=False)


@dataclass
class SetDecl:
    name: str
    elements: tuple
    pos: tuple = _pos()
    kind = "set"


@dataclass
class GraphDecl:
    name: str
    on: str
    edges: tuple          # (label, src, tgt)
    pos: tuple = _pos()
    kind = "graph"


@dataclass
class CatDecl:
    name: str
    form: str             # free | discrete | chain | table | op | product
    args: tuple
    relations: tuple = ()  # (path, path); a path is a tuple of atoms, an atom is a name or ("id", obj)
    objects: tuple = ()   # table form
    morphisms: tuple = ()  # table form: (name, src, tgt)
    composites: tuple = ()  # table form: ((f, g), h) meaning f.g = h
    pos: tuple = _pos()
    kind = "cat"


@dataclass
class FunctorDecl:
    name: str
    src: str
    tgt: str
    objects: tuple        # (x, y)
    morphisms: tuple      # (f, path)
    pos: tuple = _pos()
    kind = "functor"


@dataclass
class ProfDecl:
    name: str
    src: str
    tgt: str
    form: str             # hom | companion | conjoint | free
    arg: str | None = None
    gens: tuple = ()      # (label, c, d): an element of P[d; c]
    pos: tuple = _pos()
    kind = "prof"


@dataclass
class SigDecl:
    name: str
    on: str | None
    ops: tuple            # (name, inputs, output)
    pos: tuple = _pos()
    kind = "sig"


@dataclass
class McatDecl:
    name: str
    form: str             # free | trivial | bv
    args: tuple
    relations: tuple = ()  # (term, term)
    pos: tuple = _pos()
    kind = "mcat"


@dataclass
class SeqDecl:
    name: str
    src: str
    tgt: str
    gens: tuple           # (name, inputs, output, fixed)
    pos: tuple = _pos()
    kind = "seq"


@dataclass
class MprofDecl:
    name: str
    src: str
    tgt: str
    form: str             # id | free
    arg: str | None = None
    gens: tuple = ()
    pos: tuple = _pos()
    kind = "mprof"


@dataclass
class InterchangeDecl:
    name: str
    factors: tuple        # (q1, p1, q2, p2); "id" marks an identity
    pos: tuple = _pos()
    kind = "interchange"


@dataclass
class SpecDocument:
    decls: list = field(default_factory=list)
    budget: int | None = None
    trunc: int | None = None

    def names(self) -> dict:
        return {d.name: d for d in self.decls}

    def get(self, name: str):
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)

    def of_kind(self, *kinds) -> list:
        return [d for d in self.decls if d.kind in kinds]


# -- parser ----------------------------------------------------------------------------

class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0

    # token helpers; newlines are skipped inside blocks and parentheses
    def peek(self) -> Tok:
        while self.depth and self.toks[self.i].kind == "nl":
            self.i += 1
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.peek()
        self.i += 1
        self.last = t
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "punct" and t.text == text

    def expect(self, text: str) -> Tok:
        t = self.next()
        if t.text != text or t.kind not in ("punct", "name"):
            raise SpecError(f"expected {text!r}, found {t.text.strip() or 'end of line'!r}", t.line, t.col)
        return t

    def name(self, what: str = "a name") -> str:
        t = self.next()
        if t.kind != "name":
            raise SpecError(f"expected {what}, found {t.text.strip() or 'end of line'!r}", t.line, t.col)
        return t.text

    def end_statement(self):
        t = self.toks[self.i]
        if t.kind not in ("nl", "end"):
            raise SpecError(f"unexpected {t.text!r} after statement", t.line, t.col)

    def block_items(self, item):
        """{ item ; item \\n item } -> list"""
        self.expect("{")
        self.depth += 1
        out = []
        while True:
            while self.at(";"):
                self.next()
            if self.at("}"):
                break
            out.append(item())
            if self.peek().line > self.last.line:
                continue
            if not (self.at(";") or self.at("}")):
                t = self.peek()
                raise SpecError(f"expected ';' or '}}', found {t.text!r}", t.line, t.col)
        self.depth -= 1
        self.expect("}")
        return out

    def tuple_of(self, item, opener="(", closer=")") -> tuple:
        self.expect(opener)
        self.depth += 1
        out = []
        if not self.at(closer):
            out.append(item())
            while self.at(","):
                self.next()
                out.append(item())
        self.expect(closer)
        self.depth -= 1
        return tuple(out)

    # grammar pieces
    def atom(self):
        t = self.peek()
        if t.kind == "name" and t.text == "id" and self.toks[self.i + 1].text == "(":
            self.next()
            (obj,) = self.tuple_of(self.name)
            return ("id", obj)
        if self.at("("):
            return self.path()
        return self.name("a morphism")

    def path(self) -> tuple:
        if self.at("("):
            self.next()
            self.depth += 1
            inner = self.path()
            self.expect(")")
            self.depth -= 1
            parts = list(inner)
        else:
            a = self.atom()
            parts = list(a) if isinstance(a, tuple) and a and a[0] != "id" else [a]
        while self.at("."):
            self.next()
            a = self.atom()
            if isinstance(a, tuple) and a and a[0] != "id":
                parts.extend(a)
            else:
                parts.append(a)
        return tuple(parts)

    def term(self):
        t = self.next()
        if t.kind != "name":
            raise SpecError("expected a term", t.line, t.col)
        if t.text.isdigit():
            return int(t.text)
        if t.text == "id" and not self.at("("):
            return "id"
        if not self.at("("):
            raise SpecError(f"operation {t.text!r} needs its arguments", t.line, t.col)
        return (t.text, self.tuple_of(self.term))

    def statement(self, doc: SpecDocument):
        t = self.next()
        kw = t.text
        pos = (t.line, t.col)
        if kw in ("budget", "trunc"):
            n = self.name("a number")
            if not n.isdigit():
                raise SpecError(f"{kw} needs a number", t.line, t.col)
            setattr(doc, kw, int(n))
            return None
        if kw == "set":
            name = self.name()
            self.expect("=")
            return SetDecl(name, self.tuple_of(self.name, "{", "}"), pos)
        if kw == "graph":
            name = self.name()
            self.expect("on")
            on = self.name()
            edges = []
            if self.at(":"):
                self.next()
                edges.append(self.edge())
                while self.at(","):
                    self.next()
                    edges.append(self.edge())
            for d in doc.decls:
                if d.kind == "graph" and d.name == name:
                    if d.on != on:
                        raise SpecError(f"graph {name} redeclared on another set", *pos)
                    d.edges = d.edges + tuple(edges)
                    return None
            return GraphDecl(name, on, tuple(edges), pos)
        if kw == "cat":
            return self.cat(pos)
        if kw == "functor":
            name = self.name()
            self.expect(":")
            src = self.name()
            self.expect("->")
            tgt = self.name()
            objs, mors = [], []

            def item():
                a = self.name()
                self.expect("->")
                b = self.path()
                if len(b) == 1 and not isinstance(b[0], tuple) and not any(a == o for o, _ in objs) \
                        and self._is_object_map(doc, src, a):
                    objs.append((a, b[0]))
                else:
                    mors.append((a, b))
            self.block_items(item)
            return FunctorDecl(name, src, tgt, tuple(objs), tuple(mors), pos)
        if kw == "prof":
            name = self.name()
            self.expect(":")
            src = self.name()
            self.expect("->")
            tgt = self.name()
            return self.prof_body(name, src, tgt, pos)
        if kw == "sig":
            name = self.name()
            on = None
            if self.peek().text == "on":
                self.next()
                on = self.name()
            ops = self.block_items(self.op)
            return SigDecl(name, on, tuple(ops), pos)
        if kw == "mcat":
            name = self.name()
            self.expect("=")
            form = self.name()
            if form not in ("free", "trivial", "bv"):
                raise SpecError(f"unknown multicategory form {form!r}", *pos)
            args = self.tuple_of(self.name)
            rels = ()
            if self.at("/"):
                self.next()
                rels = tuple(self.block_items(self.relation))
            return McatDecl(name, form, args, rels, pos)
        if kw == "seq":
            name = self.name()
            self.expect(":")
            src = self.name()
            self.expect("->")
            tgt = self.name()
            return SeqDecl(name, src, tgt, tuple(self.block_items(self.op)), pos)
        if kw == "mprof":
            name = self.name()
            self.expect(":")
            src = self.name()
            self.expect("->")
            tgt = self.name()
            body = self.block_items(self.mprof_item)
            if len(body) == 1 and body[0][0] in ("id", "free-ref"):
                form, arg = body[0]
                return MprofDecl(name, src, tgt, "id" if form == "id" else "free", arg, (), pos)
            if any(b[0] in ("id", "free-ref") for b in body):
                raise SpecError("'id' and 'free X' must stand alone in a block", *pos)
            return MprofDecl(name, src, tgt, "free", None, tuple(b[1] for b in body), pos)
        if kw == "interchange":
            name = self.name()
            self.expect("=")
            factors = self.tuple_of(self.name)
            if len(factors) != 4:
                raise SpecError("an interchange needs four factors (q1, p1, q2, p2)", *pos)
            return InterchangeDecl(name, factors, pos)
        raise SpecError(f"unknown statement {kw!r}", t.line, t.col)

    def _is_object_map(self, doc, cat_name, a) -> bool:
        try:
            d = doc.get(cat_name)
        except KeyError:
            return False
        return a in _objects_of(doc, d)

    def edge(self):
        s = self.name()
        self.expect("->")
        t = self.name()
        self.expect("as")
        return (self.name(), s, t)

    def op(self):
        n = self.name()
        self.expect(":")
        ins = self.tuple_of(self.name)
        self.expect("->")
        out = self.name()
        fixed = False
        if self.peek().text == "fixed":
            self.next()
            fixed = True
        return (n, ins, out, fixed)

    def relation(self):
        lhs = self.term()
        self.expect("=")
        return (lhs, self.term())

    def mprof_item(self):
        t = self.peek()
        if t.text == "id" and self.toks[self.i + 1].text != ":":
            self.next()
            return ("id", None)
        if t.text == "free" and self.toks[self.i + 1].kind == "name":
            self.next()
            return ("free-ref", self.name())
        return ("gen", self.op())

    def cat(self, pos):
        name = self.name()
        self.expect("=")
        form = self.name()
        if form == "table":
            objs, mors, comps = [], [], []

            def item():
                if self.peek().text == "objects":
                    self.next()
                    objs.append(self.name())
                    while self.at(","):
                        self.next()
                        objs.append(self.name())
                    return
                p = self.path()
                if self.at(":"):
                    self.next()
                    s = self.name()
                    self.expect("->")
                    mors.append((p[0], s, self.name()))
                    return
                self.expect("=")
                rhs = self.path()
                if len(p) != 2 or len(rhs) != 1:
                    raise SpecError("table composites read f.g = h", *pos)
                comps.append(((p[0], p[1]), rhs[0]))
            self.block_items(item)
            return CatDecl(name, "table", (), (), tuple(objs), tuple(mors), tuple(comps), pos)
        if form not in ("free", "discrete", "chain", "op", "product"):
            raise SpecError(f"unknown category form {form!r}", *pos)
        args = self.tuple_of(self.name)
        rels = ()
        if self.at("/"):
            if form != "free":
                raise SpecError("relations only apply to free categories", *pos)
            self.next()

            def rel():
                lhs = self.path()
                self.expect("=")
                return (lhs, self.path())
            rels = tuple(self.block_items(rel))
        return CatDecl(name, form, args, rels, pos=pos)

    def prof_body(self, name, src, tgt, pos):
        items = []

        def item():
            t = self.peek()
            if t.text in ("hom",) and self.toks[self.i + 1].text != ":":
                self.next()
                items.append(("hom", None))
            elif t.text in ("companion", "conjoint") and self.toks[self.i + 1].text != ":":
                self.next()
                items.append((t.text, self.name()))
            else:
                lab = self.name()
                self.expect(":")
                c = self.name()
                self.expect("->")
                items.append(("gen", (lab, c, self.name())))
        self.block_items(item)
        special = [i for i in items if i[0] != "gen"]
        if special:
            if len(items) != 1:
                raise SpecError("hom/companion/conjoint must stand alone in a block", *pos)
            return ProfDecl(name, src, tgt, special[0][0], special[0][1], (), pos)
        return ProfDecl(name, src, tgt, "free", None, tuple(i[1] for i in items), pos)


def _objects_of(doc: SpecDocument, d) -> tuple:
    if d.kind != "cat":
        return ()
    if d.form == "table":
        return d.objects
    if d.form in ("free", "discrete"):
        ref = doc.get(d.args[0])
        if ref.kind == "graph":
            ref = doc.get(ref.on)
        return ref.elements if ref.kind == "set" else ()
    if d.form == "chain":
        return tuple(str(i) for i in range(int(d.args[0])))
    if d.form == "op":
        return _objects_of(doc, doc.get(d.args[0]))
    return ()


REFS = {
    "graph": lambda d: [("on", d.on, ("set",))],
    "cat": lambda d: ([("arg", a, ("graph",) if d.form == "free" else ("set",) if d.form == "discrete" else ("cat",))
                       for a in d.args] if d.form not in ("chain", "table") else []),
    "functor": lambda d: [("src", d.src, ("cat",)), ("tgt", d.tgt, ("cat",))],
    "prof": lambda d: [("src", d.src, ("cat",)), ("tgt", d.tgt, ("cat",))]
    + ([("arg", d.arg, ("functor",))] if d.arg else []),
    "sig": lambda d: [("on", d.on, ("set",))] if d.on else [],
    "mcat": lambda d: [("arg", a, ("sig",) if d.form == "free" else ("set",) if d.form == "trivial" else ("mcat",))
                       for a in d.args],
    "seq": lambda d: [("src", d.src, ("mcat", "set", "sig")), ("tgt", d.tgt, ("mcat", "set", "sig"))],
    "mprof": lambda d: [("src", d.src, ("mcat",)), ("tgt", d.tgt, ("mcat",))]
    + ([("arg", d.arg, ("seq",))] if d.arg else []),
    "interchange": lambda d: [("factor", f, ("prof", "mprof")) for f in d.factors if f != "id"],
    "set": lambda d: [],
}


def validate(doc: SpecDocument) -> None:
    """Every name resolves to an earlier declaration of the right kind; names are unique."""
    seen = {}
    for d in doc.decls:
        line, col = d.pos
        if d.name in seen:
            raise SpecError(f"{d.name!r} is declared twice", line, col)
        for role, ref, kinds in REFS[d.kind](d):
            if ref not in seen:
                raise SpecError(f"unresolved name {ref!r} in {d.kind} {d.name}", line, col)
            if seen[ref].kind not in kinds:
                raise SpecError(f"{ref!r} is a {seen[ref].kind}, expected {' or '.join(kinds)}", line, col)
        seen[d.name] = d
        if d.kind == "interchange":
            _check_interchange(d, seen)
        if d.kind == "mcat" and d.form == "bv" and len(d.args) != 2:
            raise SpecError("bv takes two multicategories", line, col)
        if d.kind == "cat" and d.form == "product" and len(d.args) != 2:
            raise SpecError("product takes two categories", line, col)


def _check_interchange(d: InterchangeDecl, seen: dict) -> None:
    q1, p1, q2, p2 = d.factors
    kinds = {seen[f].kind for f in d.factors if f != "id"}
    if len(kinds) != 1:
        raise SpecError("interchange factors must all be profunctors or all multiprofunctors", *d.pos)
    for q, p in ((q1, p1), (q2, p2)):
        if q == "id" and p == "id":
            raise SpecError("a column cannot consist of two identities", *d.pos)
        if q != "id" and p != "id" and seen[q].src != seen[p].tgt:
            raise SpecError(f"boundary mismatch: {q} starts at {seen[q].src}, {p} ends at {seen[p].tgt}", *d.pos)


def parse_spec(text: str) -> SpecDocument:
    p = Parser(text)
    doc = SpecDocument()
    while True:
        t = p.peek()
        if t.kind == "end":
            break
        if t.kind == "nl":
            p.next()
            continue
        d = p.statement(doc)
        p.end_statement()
        if d is not None:
            doc.decls.append(d)
    validate(doc)
    return doc


# -- printer ---------------------------------------------------------------------------------

def _atom(a) -> str:
    return f"id({a[1]})" if isinstance(a, tuple) else a


def _path(p) -> str:
    return ".".join(_atom(a) for a in p)


def _term(t) -> str:
    if isinstance(t, int):
        return str(t)
    if t == "id":
        return "id"
    return f"{t[0]}({', '.join(_term(c) for c in t[1])})"


def _op(o) -> str:
    n, ins, out, fixed = o
    return f"{n} : ({', '.join(ins)}) -> {out}" + (" fixed" if fixed else "")


def _block(items) -> str:
    return "{ " + " ; ".join(items) + " }" if items else "{ }"


def dump(doc: SpecDocument) -> str:
    lines = []
    if doc.budget is not None:
        lines.append(f"budget {doc.budget}")
    if doc.trunc is not None:
        lines.append(f"trunc {doc.trunc}")
    for d in doc.decls:
        k = d.kind
        if k == "set":
            lines.append(f"set {d.name} = {{{', '.join(d.elements)}}}")
        elif k == "graph":
            edges = ", ".join(f"{s}->{t} as {l}" for l, s, t in d.edges)
            lines.append(f"graph {d.name} on {d.on}" + (f" : {edges}" if edges else ""))
        elif k == "cat":
            if d.form == "table":
                items = []
                if d.objects:
                    items.append("objects " + ", ".join(d.objects))
                items += [f"{n} : {s} -> {t}" for n, s, t in d.morphisms]
                items += [f"{f}.{g} = {h}" for (f, g), h in d.composites]
                lines.append(f"cat {d.name} = table {_block(items)}")
            else:
                line = f"cat {d.name} = {d.form}({', '.join(d.args)})"
                if d.relations:
                    line += " / " + _block([f"{_path(l)} = {_path(r)}" for l, r in d.relations])
                lines.append(line)
        elif k == "functor":
            items = [f"{a} -> {b}" for a, b in d.objects] + [f"{a} -> {_path(b)}" for a, b in d.morphisms]
            lines.append(f"functor {d.name} : {d.src} -> {d.tgt} {_block(items)}")
        elif k == "prof":
            if d.form == "free":
                body = _block([f"{l} : {c} -> {t}" for l, c, t in d.gens])
            else:
                body = _block([d.form + (f" {d.arg}" if d.arg else "")])
            lines.append(f"prof {d.name} : {d.src} -> {d.tgt} {body}")
        elif k == "sig":
            on = f" on {d.on}" if d.on else ""
            lines.append(f"sig {d.name}{on} {_block([_op(o) for o in d.ops])}")
        elif k == "mcat":
            line = f"mcat {d.name} = {d.form}({', '.join(d.args)})"
            if d.relations:
                line += " / " + _block([f"{_term(l)} = {_term(r)}" for l, r in d.relations])
            lines.append(line)
        elif k == "seq":
            lines.append(f"seq {d.name} : {d.src} -> {d.tgt} {_block([_op(o) for o in d.gens])}")
        elif k == "mprof":
            if d.form == "id":
                body = _block(["id"])
            elif d.arg:
                body = _block([f"free {d.arg}"])
            else:
                body = _block([_op(o) for o in d.gens])
            lines.append(f"mprof {d.name} : {d.src} -> {d.tgt} {body}")
        elif k == "interchange":
            lines.append(f"interchange {d.name} = ({', '.join(d.factors)})")
    return "\n".join(lines) + ("\n" if lines else "")
