"""Reading and writing the plain-text document format.

::

    space a b c
    blocks {a,b} {c}                 # optional, default singletons
    measure m { {a,b} = 1 {a,b,c} = 2 default = 0 }
    function f dim 1 { a = (1) b = (2) c = (3) }
    vmeasure mu dim 1 { {c} = (1/2) default = (0) }

Rationals are ``-?digits(/digits)?``; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..integrate import VecFunction, fmt_vector, zero_vector
from ..rn import VecMeasure
from ..setfunc import SetFunction, fmt_rational
from ..space import MSet, MeasureError, Universe

KEYWORDS = {"space", "blocks", "measure", "function", "vmeasure", "dim", "default"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<rat>-?\d+(?:/\d+)?)
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[{}(),=])
""", re.VERBOSE)


class ParseError(MeasureError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = mo.lastgroup
        if kind == "nl":
            line += 1
            start = mo.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, mo.group(), line, pos - start + 1))
        pos = mo.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class Document:
    universe: Universe
    measures: dict[str, SetFunction] = field(default_factory=dict)
    functions: dict[str, VecFunction] = field(default_factory=dict)
    vmeasures: dict[str, VecMeasure] = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.universe: Universe | None = None

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def name(self) -> Token:
        t = self.next()
        if t.kind != "word" or t.text in KEYWORDS:
            self.error(f"expected a name, found {t.text or 'end of input'!r}", t)
        return t

    def rational(self) -> Fraction:
        t = self.next()
        if t.kind != "rat":
            self.error(f"expected a rational, found {t.text or 'end of input'!r}", t)
        try:
            return Fraction(t.text)
        except ZeroDivisionError:
            self.error("zero denominator", t)

    def labels_in_braces(self) -> tuple[list[str], Token]:
        start = self.expect("{")
        labels = []
        if self.peek().text == "}":
            self.next()
            return labels, start
        while True:
            t = self.name()
            if self.universe is not None and t.text not in self.universe.index:
                self.error(f"undeclared point {t.text!r}", t)
            labels.append(t.text)
            t = self.next()
            if t.text == "}":
                return labels, start
            if t.text != ",":
                self.error(f"expected ',' or '}}', found {t.text!r}", t)

    def mset(self) -> MSet:
        labels, start = self.labels_in_braces()
        try:
            return self.universe.mset(labels)
        except MeasureError as exc:
            self.error(str(exc), start)

    def vector(self, dim: int) -> tuple[Fraction, ...]:
        start = self.expect("(")
        vals = [self.rational()]
        while self.peek().text == ",":
            self.next()
            vals.append(self.rational())
        self.expect(")")
        if len(vals) != dim:
            self.error(f"expected {dim} coordinates, got {len(vals)}", start)
        return tuple(vals)

    def dim(self) -> int:
        self.expect("dim")
        t = self.next()
        if t.kind != "rat" or "/" in t.text or t.text.startswith("-") or int(t.text) < 1:
            self.error("dim must be a positive integer", t)
        return int(t.text)

    def parse(self) -> Document:
        t = self.peek()
        if t.text != "space":
            self.error("a document starts with 'space'")
        self.next()
        labels = []
        while self.peek().kind == "word" and self.peek().text not in KEYWORDS:
            labels.append(self.next())
        if not labels:
            self.error("'space' needs at least one point")
        seen = set()
        for lt in labels:
            if lt.text in seen:
                self.error(f"duplicate point {lt.text!r}", lt)
            seen.add(lt.text)
        points = [lt.text for lt in labels]
        self.universe = Universe(points)
        if self.peek().text == "blocks":
            bt = self.next()
            blocks = []
            while self.peek().text == "{":
                blocks.append(self.labels_in_braces()[0])
            try:
                self.universe = Universe(points, blocks)
            except MeasureError as exc:
                self.error(str(exc), bt)
        doc = Document(self.universe)
        while self.peek().kind != "eof":
            t = self.next()
            if t.text == "measure":
                self.measure(doc)
            elif t.text == "function":
                self.function(doc)
            elif t.text == "vmeasure":
                self.vmeasure(doc)
            else:
                self.error(f"unexpected {t.text!r}", t)
        return doc

    def _entries(self, value):
        entries: dict[MSet, object] = {}
        while self.peek().text == "{":
            st = self.peek()
            s = self.mset()
            self.expect("=")
            if s in entries:
                self.error(f"{s} assigned twice", st)
            entries[s] = (value(), st)
        self.expect("default")
        self.expect("=")
        return entries, value()

    def measure(self, doc: Document) -> None:
        nt = self.name()
        if nt.text in doc.measures:
            self.error(f"measure {nt.text!r} defined twice", nt)
        self.expect("{")
        entries, default = self._entries(self.rational)
        self.expect("}")
        u = self.universe
        vals = [default] * (1 << u.n_blocks)
        vals[0] = Fraction(0)
        for s, (v, st) in entries.items():
            if v < 0:
                self.error(f"negative value {fmt_rational(v)}", st)
            if s.mask == 0 and v != 0:
                self.error("the empty set must have value 0", st)
            vals[s.mask] = v
        if default < 0:
            self.error("negative default", nt)
        doc.measures[nt.text] = SetFunction(u, tuple(vals))

    def function(self, doc: Document) -> None:
        nt = self.name()
        if nt.text in doc.functions:
            self.error(f"function {nt.text!r} defined twice", nt)
        d = self.dim()
        self.expect("{")
        vals: dict[str, tuple] = {}
        while self.peek().text != "}":
            lt = self.name()
            if lt.text not in self.universe.index:
                self.error(f"undeclared point {lt.text!r}", lt)
            if lt.text in vals:
                self.error(f"point {lt.text!r} assigned twice", lt)
            self.expect("=")
            vals[lt.text] = self.vector(d)
        end = self.expect("}")
        missing = [p for p in self.universe.points if p not in vals]
        if missing:
            self.error(f"function {nt.text!r} has no value for {','.join(missing)}", end)
        doc.functions[nt.text] = VecFunction(self.universe, d, tuple(vals[p] for p in self.universe.points))

    def vmeasure(self, doc: Document) -> None:
        nt = self.name()
        if nt.text in doc.vmeasures:
            self.error(f"vmeasure {nt.text!r} defined twice", nt)
        d = self.dim()
        self.expect("{")
        entries, default = self._entries(lambda: self.vector(d))
        self.expect("}")
        if any(default):
            self.error("vmeasure default must be the zero vector", nt)
        u = self.universe
        vals = [zero_vector(d)] * (1 << u.n_blocks)
        for s, (v, st) in entries.items():
            if s.mask == 0 and any(v):
                self.error("the empty set must map to the zero vector", st)
            vals[s.mask] = v
        doc.vmeasures[nt.text] = VecMeasure(u, d, tuple(vals))


def parse(text: str) -> Document:
    return _Parser(text).parse()


def format_measure(name: str, m: SetFunction) -> str:
    lines = [f"measure {name} {{"]
    for s in m.universe.msets():
        v = m(s)
        if s.mask and v != 0:
            lines.append(f"  {s} = {fmt_rational(v)}")
    lines.append("  default = 0")
    lines.append("}")
    return "\n".join(lines)


def format_function(name: str, f: VecFunction) -> str:
    lines = [f"function {name} dim {f.dim} {{"]
    for p, v in zip(f.universe.points, f.values):
        lines.append(f"  {p} = {fmt_vector(v)}")
    lines.append("}")
    return "\n".join(lines)


def format_vmeasure(name: str, mu: VecMeasure) -> str:
    lines = [f"vmeasure {name} dim {mu.dim} {{"]
    for s in mu.universe.msets():
        v = mu(s)
        if s.mask and any(v):
            lines.append(f"  {s} = {fmt_vector(v)}")
    lines.append(f"  default = {fmt_vector(zero_vector(mu.dim))}")
    lines.append("}")
    return "\n".join(lines)


def dump(doc: Document) -> str:
    u = doc.universe
    parts = ["space " + " ".join(u.points)]
    if not u.singleton_blocks:
        parts.append("blocks " + " ".join("{" + ",".join(b) + "}" for b in u.blocks))
    for name, m in doc.measures.items():
        parts.append(format_measure(name, m))
    for name, f in doc.functions.items():
        parts.append(format_function(name, f))
    for name, mu in doc.vmeasures.items():
        parts.append(format_vmeasure(name, mu))
    return "\n".join(parts) + "\n"


def parse_set_arg(u: Universe, text: str, measurable: bool = True):
    """Parse a ``{a,b}`` command-line argument into an MSet or a label tuple."""
    p = _Parser(text)
    p.universe = u
    labels, _ = p.labels_in_braces()
    if p.peek().kind != "eof":
        p.error("trailing input after set")
    if measurable:
        return u.mset(labels)
    return tuple(labels)


def parse_vector_arg(text: str) -> tuple[Fraction, ...]:
    p = _Parser(text)
    p.expect("(")
    vals = [p.rational()]
    while p.peek().text == ",":
        p.next()
        vals.append(p.rational())
    p.expect(")")
    return tuple(vals)
