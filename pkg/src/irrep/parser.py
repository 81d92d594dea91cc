"""Parsers for presentation files, point files and expressions.

Expression grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := '-'? factor ('*' factor)*
    factor := base ('^' NAT)?
    base   := IDENT | RAT | '(' expr ')'
    RAT    := INT ('/' POSINT)?

Multiplication keeps operand order.  Every error carries a line and column.

Presentation file (``#`` starts a comment)::

    field: QQ
    dimension: 2
    generators: X Y Z
    relation: (X*Y - Y*X)^2
    hint: alternating X Y
    hint: omit A
    hint: triangular X

Point file::

    field: QQ
    tower: t1 = t^2 - 2          # 't' stands for the new level variable
    matrix X: [[t1, 0], [0, -t1]]
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .freealg import NcPolynomial, Presentation
from .polyring import QQ, parse_field


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],]))")


@dataclass
class Token:
    kind: str   # 'int', 'ident', 'op', 'end'
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    """Split one logical line; ``column`` is the column of ``text[0]``."""
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column + pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), line, column + start))
        pos = m.end()
    out.append(Token("end", "", line, column + len(text)))
    return out


class ExprParser:
    """Recursive descent over a token list, producing :class:`NcPolynomial`."""

    def __init__(self, tokens: list[Token], generators, field=QQ):
        self.toks = tokens
        self.i = 0
        self.generators = tuple(generators)
        self.field = field
        self._index = {g: k for k, g in enumerate(self.generators)}

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.column)

    def accept(self, text) -> Token | None:
        t = self.tok
        if t.kind == "op" and t.text == text:
            self.i += 1
            return t
        return None

    def expect(self, text) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of line"
            self.error(f"expected {text!r}, found {found!r}")
        return t

    def parse(self) -> NcPolynomial:
        f = self.expr()
        if self.tok.kind != "end":
            if self.tok.text == ")":
                self.error("unmatched ')'")
            self.error(f"unexpected {self.tok.text!r}")
        return f

    def expr(self) -> NcPolynomial:
        f = self.term()
        while True:
            if self.accept("+"):
                f = f + self.term()
            elif self.accept("-"):
                f = f - self.term()
            else:
                return f

    def term(self) -> NcPolynomial:
        neg = self.accept("-") is not None
        f = self.factor()
        while self.accept("*"):
            f = f * self.factor()
        return -f if neg else f

    def factor(self) -> NcPolynomial:
        f = self.base()
        caret = self.accept("^")
        if caret is not None:
            t = self.tok
            if t.kind != "int":
                if t.kind == "op" and t.text == "-":
                    self.error("exponent must be a nonnegative integer")
                self.error("exponent must be an integer literal")
            self.i += 1
            nxt = self.tok
            if nxt.kind == "op" and nxt.text == "/":
                self.error("exponent must be an integer literal", nxt)
            f = f ** int(t.text)
        return f

    def base(self) -> NcPolynomial:
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            if t.text not in self._index:
                self.error(f"unknown identifier {t.text!r}", t)
            return NcPolynomial.word(self.generators, (self._index[t.text],), 1, self.field)
        if t.kind == "int":
            self.i += 1
            value = Fraction(int(t.text))
            if self.accept("/"):
                d = self.tok
                if d.kind != "int" or int(d.text) == 0:
                    self.error("denominator must be a positive integer", d)
                self.i += 1
                value = Fraction(int(t.text), int(d.text))
            try:
                return NcPolynomial.constant(self.generators, value, self.field)
            except ZeroDivisionError:
                self.error(f"{value} is not defined in {self.field.name}", t)
        if t.kind == "op" and t.text == "(":
            self.i += 1
            f = self.expr()
            if self.tok.kind == "end":
                self.error("unclosed '('", t)
            self.expect(")")
            return f
        if t.kind == "end":
            self.error("unexpected end of expression")
        if t.text == ")":
            self.error("unmatched ')'")
        self.error(f"unexpected {t.text!r}")


def parse_expression(text: str, generators, field=QQ, line: int = 1, column: int = 1) -> NcPolynomial:
    return ExprParser(tokenize(text, line, column), generators, field).parse()


# --------------------------------------------------------------------------
# line-oriented files


def _logical_lines(text: str):
    """Yield ``(lineno, key, value, value_column)`` for non-blank lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'key: value'", lineno, col)
        key, value = line.split(":", 1)
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        yield lineno, key.strip(), value.strip(), vcol


def _field(value, lineno, vcol):
    try:
        return parse_field(value)
    except ValueError as e:
        raise ParseError(str(e), lineno, vcol) from None


def parse_presentation(text: str) -> Presentation:
    fld = None
    dim = None
    gens = None
    rel_src: list[tuple[int, str, int]] = []
    hint_src: list[tuple[int, str, int]] = []
    for lineno, key, value, vcol in _logical_lines(text):
        if key == "field":
            fld = _field(value, lineno, vcol)
        elif key == "dimension":
            if not value.isdigit() or int(value) < 1:
                raise ParseError("dimension must be a positive integer", lineno, vcol)
            dim = int(value)
        elif key == "generators":
            names = value.replace(",", " ").split()
            for nm in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                    raise ParseError(f"invalid generator name {nm!r}", lineno, vcol)
            if len(set(names)) != len(names):
                raise ParseError("duplicate generator name", lineno, vcol)
            if not names:
                raise ParseError("no generators declared", lineno, vcol)
            gens = tuple(names)
        elif key == "relation":
            rel_src.append((lineno, value, vcol))
        elif key == "hint":
            hint_src.append((lineno, value, vcol))
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    if gens is None:
        raise ParseError("missing 'generators:' line", 1, 1)
    if dim is None:
        raise ParseError("missing 'dimension:' line", 1, 1)
    fld = fld or QQ
    rels = [parse_expression(src, gens, fld, ln, col) for ln, src, col in rel_src]
    hints = []
    for ln, src, col in hint_src:
        words = src.split()
        if not words:
            raise ParseError("empty hint", ln, col)
        kind, args = words[0], words[1:]
        idx = []
        for a in args:
            if a not in gens:
                raise ParseError(f"hint references unknown generator {a!r}", ln, col)
            idx.append(gens.index(a))
        if kind == "alternating":
            if len(idx) != 2 or idx[0] == idx[1]:
                raise ParseError("'alternating' needs two distinct generators", ln, col)
        elif kind in ("omit", "triangular"):
            if len(idx) != 1:
                raise ParseError(f"'{kind}' needs one generator", ln, col)
            if kind == "triangular" and any(k == "triangular" for k, _ in hints):
                raise ParseError("only one generator may be triangular", ln, col)
        else:
            raise ParseError(f"unknown hint {kind!r}", ln, col)
        hints.append((kind, tuple(idx)))
    return Presentation(fld, dim, gens, rels, hints)


@dataclass
class PointSpec:
    """Raw contents of a point file: tower levels and matrices whose entries
    are commutative expressions in the tower variables."""

    field: object = None
    tower: list = dc_field(default_factory=list)       # (name, NcPolynomial in names+[name])
    matrices: dict = dc_field(default_factory=dict)    # generator -> rows of NcPolynomial
    positions: dict = dc_field(default_factory=dict)   # generator -> (line, column)


def _split_matrix(value: str, lineno: int, vcol: int) -> list[list[tuple[str, int]]]:
    """Split ``[[a, b], [c, d]]`` into entry strings with their columns."""
    s = value
    i = 0

    def err(msg, at):
        raise ParseError(msg, lineno, vcol + at)

    def skip(k):
        while k < len(s) and s[k].isspace():
            k += 1
        return k

    i = skip(i)
    if i >= len(s) or s[i] != "[":
        err("matrix must start with '['", i)
    i += 1
    rows = []
    while True:
        i = skip(i)
        if i < len(s) and s[i] == "]" and not rows:
            err("empty matrix", i)
        if i >= len(s) or s[i] != "[":
            err("expected '[' starting a row", i)
        i += 1
        row = []
        start = i
        depth = 0
        while True:
            if i >= len(s):
                err("unclosed '['", start - 1)
            ch = s[i]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if depth == 0 and ch in ",]":
                piece = s[start:i]
                if not piece.strip():
                    err("empty matrix entry", start)
                lead = len(piece) - len(piece.lstrip())
                row.append((piece.strip(), start + lead))
                i += 1
                if ch == "]":
                    break
                start = i
            else:
                i += 1
        rows.append(row)
        i = skip(i)
        if i < len(s) and s[i] == ",":
            i += 1
            continue
        if i < len(s) and s[i] == "]":
            i += 1
            if skip(i) != len(s):
                err("trailing characters after matrix", skip(i))
            return rows
        err("expected ',' or ']'", i)


def parse_point(text: str, field=None) -> PointSpec:
    spec = PointSpec(field=field)
    names: list[str] = []
    for lineno, key, value, vcol in _logical_lines(text):
        if key == "field":
            spec.field = _field(value, lineno, vcol)
        elif key == "tower":
            if "=" not in value:
                raise ParseError("expected 'tower: NAME = polynomial'", lineno, vcol)
            nm, poly = value.split("=", 1)
            nm = nm.strip()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm) or nm in names or nm == "t":
                raise ParseError(f"invalid tower variable {nm!r}", lineno, vcol)
            pcol = vcol + value.index("=") + 1 + (len(poly) - len(poly.lstrip()))
            fld = spec.field or QQ
            # the level variable may be written as 't' or by its own name
            gens = tuple(names) + (nm, "t")
            f = parse_expression(poly.strip(), gens, fld, lineno, pcol)
            spec.tower.append((nm, f))
            names.append(nm)
        elif key.startswith("matrix"):
            parts = key.split()
            if len(parts) != 2:
                raise ParseError("expected 'matrix NAME: [[...]]'", lineno, 1)
            gen = parts[1]
            if gen in spec.matrices:
                raise ParseError(f"matrix {gen!r} given twice", lineno, 1)
            fld = spec.field or QQ
            rows = []
            for row in _split_matrix(value, lineno, vcol):
                rows.append([parse_expression(e, tuple(names), fld, lineno, c) for e, c in row])
            n = len(rows)
            if any(len(r) != n for r in rows):
                raise ParseError(f"matrix {gen!r} is not square", lineno, vcol)
            spec.matrices[gen] = rows
            spec.positions[gen] = (lineno, 1)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    spec.field = spec.field or QQ
    return spec
