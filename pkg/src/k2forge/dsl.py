"""Parser for the algebra description language.

Grammar::

    file      := fieldDecl? algDecl construct*
    fieldDecl := "field" ("Q" | "GF" prime)
    algDecl   := "algebra" name "gens" ident+ ("rel" poly)*
    construct := "construct" kind <rest of line>
    poly      := ("+"|"-")? term (("+"|"-") term)*
    term      := coeff? "*"? factor ("*" factor)*  |  coeff
    factor    := ident ("^" nat)? | "(" poly ")" ("^" nat)?
    coeff     := int ("/" nat)?

``#`` starts a comment running to the end of the line.  Every error is a
:class:`DSLError` carrying a 1-based line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .exactlin import GF, QQ, is_prime
from .freealg import Alphabet, NcPoly, Presentation

KEYWORDS = {"field", "algebra", "gens", "rel", "construct"}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>[-+*^/()])"
    r"|(?P<punct>[=;,>:.])"  # only meaningful inside construct directives
)


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


@dataclass
class Token:
    kind: str  # int | ident | op | eof
    text: str
    line: int
    col: int
    newline_before: bool = False


@dataclass
class AlgebraFile:
    presentation: Presentation
    field_spec: str
    constructs: list = dc_field(default_factory=list)  # [(kind, text, line)]

    @property
    def name(self) -> str:
        return self.presentation.name


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    saw_nl = False
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
            saw_nl = True
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col, saw_nl))
            saw_nl = False
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1, True))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet | None = None, field=None):
        self.text = text
        self.lines = text.split("\n")
        self.toks = tokenize(text)
        self.i = 0
        self.alphabet = alphabet
        self.field = field

    # token helpers ------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise DSLError(msg, tok.line, tok.col)

    def expect_keyword(self, kw: str) -> Token:
        if self.tok.kind != "ident" or self.tok.text != kw:
            self.error(f"expected '{kw}', found {self.describe(self.tok)}")
        return self.advance()

    def at_keyword(self, kw: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == kw

    @staticmethod
    def describe(t: Token) -> str:
        return "end of input" if t.kind == "eof" else repr(t.text)

    # file ---------------------------------------------------------------
    def parse_file(self) -> AlgebraFile:
        field_spec = "gf:32003"
        field = GF()
        if self.at_keyword("field"):
            self.advance()
            t = self.tok
            if t.kind == "ident" and t.text in ("Q", "QQ"):
                self.advance()
                field, field_spec = QQ, "q"
            elif t.kind == "ident" and t.text.upper() == "GF":
                self.advance()
                pt = self.tok
                if pt.kind != "int":
                    self.error("expected a prime after GF")
                self.advance()
                p = int(pt.text)
                if not is_prime(p):
                    self.error(f"{p} is not prime", pt)
                field, field_spec = GF(p), f"gf:{p}"
            else:
                self.error(f"expected 'Q' or 'GF <prime>', found {self.describe(t)}")
        self.field = field
        self.expect_keyword("algebra")
        nt = self.tok
        if nt.kind != "ident" or nt.text in KEYWORDS:
            self.error(f"expected an algebra name, found {self.describe(nt)}")
        name = self.advance().text
        self.expect_keyword("gens")
        names = []
        name_toks = []
        while self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
            t = self.advance()
            if t.text in names:
                self.error(f"duplicate generator {t.text!r}", t)
            names.append(t.text)
            name_toks.append(t)
        if not names:
            self.error("expected at least one generator name")
        self.alphabet = Alphabet(names)
        rels = []
        while self.at_keyword("rel"):
            rt = self.advance()
            start = self.tok
            p = self.parse_poly()
            if p.is_zero():
                self.error("relation is zero", start)
            if not p.is_homogeneous():
                self.error(f"relation {p} is not homogeneous (degrees {sorted(p.degrees())})", start)
            if p.degree() < 2:
                self.error(f"relation {p} has degree {p.degree()}; relations must have degree >= 2", start)
            rels.append(p)
        constructs = []
        while self.at_keyword("construct"):
            ct = self.advance()
            kt = self.tok
            if kt.kind != "ident":
                self.error("expected a construction kind after 'construct'")
            self.advance()
            # the directive's arguments are the raw remainder of the line
            line_text = self.lines[kt.line - 1]
            rest = line_text[kt.col - 1 + len(kt.text):].split("#", 1)[0].strip()
            while self.tok.kind != "eof" and not self.tok.newline_before:
                self.advance()
            constructs.append((kt.text, rest, ct.line))
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.describe(self.tok)}")
        pres = Presentation(self.alphabet, rels, field, name)
        return AlgebraFile(pres, field_spec, constructs)

    # polynomials --------------------------------------------------------
    def parse_poly(self) -> NcPoly:
        sign = 1
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
        total = self.parse_term().scale(sign)
        while self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
            total = total + self.parse_term().scale(sign)
        return total

    def _starts_factor(self) -> bool:
        t = self.tok
        return (t.kind == "ident" and t.text not in KEYWORDS) or (t.kind == "op" and t.text == "(")

    def parse_term(self) -> NcPoly:
        coef = Fraction(1)
        have_coef = False
        if self.tok.kind == "int":
            have_coef = True
            coef = Fraction(int(self.advance().text))
            if self.tok.kind == "op" and self.tok.text == "/":
                self.advance()
                dt = self.tok
                if dt.kind != "int":
                    self.error("expected a denominator")
                self.advance()
                if int(dt.text) == 0:
                    self.error("zero denominator", dt)
                coef /= int(dt.text)
            if self.tok.kind == "op" and self.tok.text == "*":
                self.advance()
                if not self._starts_factor():
                    self.error(f"expected a factor after '*', found {self.describe(self.tok)}")
        try:
            c = self.field(coef)
        except ZeroDivisionError:
            self.error(f"coefficient {coef} is undefined in {self.field!r}")
        if not self._starts_factor():
            if have_coef:
                return NcPoly(self.alphabet, self.field, {(): c})
            self.error(f"expected a term, found {self.describe(self.tok)}")
        prod = self.parse_factor()
        while self.tok.kind == "op" and self.tok.text == "*":
            self.advance()
            prod = prod * self.parse_factor()
        return prod.scale(c)

    def parse_factor(self) -> NcPoly:
        t = self.tok
        if t.kind == "ident":
            if t.text in KEYWORDS:
                self.error(f"unexpected keyword {t.text!r}")
            self.advance()
            if t.text not in self.alphabet.index:
                self.error(f"unknown generator {t.text!r}", t)
            base = NcPoly.gen(self.alphabet, self.field, t.text)
        elif t.kind == "op" and t.text == "(":
            self.advance()
            base = self.parse_poly()
            if not (self.tok.kind == "op" and self.tok.text == ")"):
                self.error(f"expected ')', found {self.describe(self.tok)}")
            self.advance()
        else:
            self.error(f"expected a generator or '(', found {self.describe(t)}")
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            et = self.tok
            if et.kind != "int":
                self.error("expected an exponent")
            self.advance()
            base = base ** int(et.text)
        return base


def parse(text: str) -> AlgebraFile:
    """Parse a whole algebra file."""
    return _Parser(text).parse_file()


def parse_poly(text: str, alphabet: Alphabet, field) -> NcPoly:
    """Parse a single polynomial over a known alphabet."""
    p = _Parser(text, alphabet, field)
    out = p.parse_poly()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.describe(p.tok)}")
    return out


def format_file(af: AlgebraFile) -> str:
    text = af.presentation.to_dsl()
    for kind, rest, _ in af.constructs:
        text += f"construct {kind} {rest}\n"
    return text
