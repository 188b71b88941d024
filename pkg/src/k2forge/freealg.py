"""Words and noncommutative polynomials in the tensor algebra T(V).

Generators all have degree 1.  A word is a tuple of generator indices, so
the empty tuple is the unit and the degree of a word is its length.  Words
are ordered degree-lexicographically using the declared generator order
(``deglex_key``); that order is what the Groebner engine uses to pick
leading words.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from .exactlin import GF, QQ

Word = tuple


def deglex_key(w: Word) -> tuple:
    return (len(w), w)


class Alphabet:
    """An ordered list of distinct generator names."""

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if not names:
            raise ValueError("an alphabet needs at least one generator")
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"duplicate generator {dup!r}")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Alphabet({list(self.names)!r})"

    def word(self, text: str | Sequence[str]) -> Word:
        """Parse ``"xyx"`` (single-letter names) or a sequence of names."""
        if isinstance(text, str):
            if all(len(n) == 1 for n in self.names):
                parts = list(text)
            else:
                parts = text.split()
        else:
            parts = list(text)
        try:
            return tuple(self.index[p] for p in parts)
        except KeyError as exc:
            raise ValueError(f"unknown generator {exc.args[0]!r}") from None

    def words(self, d: int) -> Iterable[Word]:
        """All words of length d in lexicographic order."""
        return itertools.product(range(len(self.names)), repeat=d)

    def format_word(self, w: Word) -> str:
        """Compact human form with powers, e.g. ``x^2*y``; ``1`` for the unit."""
        if not w:
            return "1"
        parts = []
        for g, run in itertools.groupby(w):
            k = len(list(run))
            name = self.names[g]
            parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts)

    def plain_word(self, w: Word) -> str:
        """Letters concatenated (spaces when names are longer than one char)."""
        sep = "" if all(len(n) == 1 for n in self.names) else " "
        return sep.join(self.names[g] for g in w) if w else "1"


class NcPoly:
    """A finite K-linear combination of words; zero coefficients never stored."""

    __slots__ = ("alphabet", "field", "terms")

    def __init__(self, alphabet: Alphabet, field, terms: Mapping[Word, object] | None = None):
        self.alphabet = alphabet
        self.field = field
        clean = {}
        n = len(alphabet)
        for w, c in (terms or {}).items():
            w = tuple(w)
            if any(not 0 <= g < n for g in w):
                raise ValueError(f"word {w} uses an index outside the alphabet")
            c = field(c)
            if c:
                clean[w] = field.reduce(clean.get(w, 0) + c)
                if not clean[w]:
                    del clean[w]
        self.terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, alphabet, field, terms: dict) -> "NcPoly":
        p = cls.__new__(cls)
        p.alphabet = alphabet
        p.field = field
        p.terms = terms
        return p

    @classmethod
    def zero(cls, alphabet, field) -> "NcPoly":
        return cls._raw(alphabet, field, {})

    @classmethod
    def one(cls, alphabet, field) -> "NcPoly":
        return cls._raw(alphabet, field, {(): field.one})

    @classmethod
    def monomial(cls, alphabet, field, word: Word, coef=1) -> "NcPoly":
        return cls(alphabet, field, {tuple(word): coef})

    @classmethod
    def gen(cls, alphabet, field, name: str) -> "NcPoly":
        return cls._raw(alphabet, field, {(alphabet.index[name],): field.one})

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "NcPoly"):
        if self.alphabet != other.alphabet:
            raise ValueError("polynomials over different alphabets")
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def _coerce(self, other) -> "NcPoly":
        if isinstance(other, NcPoly):
            self._check(other)
            return other
        c = self.field(other)
        return NcPoly._raw(self.alphabet, self.field, {(): c} if c else {})

    def __add__(self, other):
        other = self._coerce(other)
        red = self.field.reduce
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = red(out.get(w, 0) + c)
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NcPoly._raw(self.alphabet, self.field, out)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return NcPoly._raw(self.alphabet, self.field, {w: red(-c) for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "NcPoly":
        c = self.field(c)
        if not c:
            return NcPoly.zero(self.alphabet, self.field)
        red = self.field.reduce
        return NcPoly._raw(self.alphabet, self.field, {w: red(v * c) for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NcPoly):
            return self.scale(other)
        self._check(other)
        red = self.field.reduce
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = red(out.get(w, 0) + c1 * c2)
        return NcPoly._raw(self.alphabet, self.field, {w: c for w, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = NcPoly.one(self.alphabet, self.field)
        for _ in range(k):
            out = out * self
        return out

    def left_mul_word(self, u: Word) -> "NcPoly":
        return NcPoly._raw(self.alphabet, self.field, {u + w: c for w, c in self.terms.items()})

    def right_mul_word(self, u: Word) -> "NcPoly":
        return NcPoly._raw(self.alphabet, self.field, {w + u: c for w, c in self.terms.items()})

    # structure ----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.alphabet == other.alphabet and self.terms == other.terms
        if not self.terms:
            return other == 0
        return False

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def degree(self) -> int:
        """Maximal word length; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_component(self, d: int) -> "NcPoly":
        return NcPoly._raw(self.alphabet, self.field, {w: c for w, c in self.terms.items() if len(w) == d})

    def components(self) -> dict[int, "NcPoly"]:
        return {d: self.homogeneous_component(d) for d in sorted(self.degrees())}

    def leading_word(self) -> Word:
        if not self.terms:
            raise ValueError("zero polynomial has no leading word")
        return max(self.terms, key=deglex_key)

    def coefficient(self, w: Word):
        return self.terms.get(tuple(w), self.field.zero)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) == self.field.one

    def coordinates_in_degree(self, d: int) -> list:
        """Coordinates in the lexicographic word basis of T(V)_d (length n^d)."""
        if any(len(w) != d for w in self.terms):
            raise ValueError(f"polynomial is not homogeneous of degree {d}")
        n = len(self.alphabet)
        vec = [self.field.zero] * (n ** d)
        for w, c in self.terms.items():
            vec[word_rank(w, n)] = c
        return vec

    @classmethod
    def from_coordinates(cls, alphabet, field, d: int, vec: Sequence) -> "NcPoly":
        n = len(alphabet)
        if len(vec) != n ** d:
            raise ValueError("coordinate vector has the wrong length")
        return cls(alphabet, field, {word_unrank(i, n, d): c for i, c in enumerate(vec) if c})

    def map_words(self, fn) -> "NcPoly":
        """Apply a word -> NcPoly substitution linearly."""
        out = NcPoly.zero(self.alphabet, self.field)
        for w, c in self.terms.items():
            out = out + fn(w).scale(c)
        return out

    def substitute(self, images: Sequence["NcPoly"]) -> "NcPoly":
        """Algebra map sending generator i to ``images[i]``."""
        if not self.terms:
            return NcPoly.zero(images[0].alphabet, images[0].field) if images else self
        target_alpha, target_field = images[0].alphabet, images[0].field
        out = NcPoly.zero(target_alpha, target_field)
        for w, c in self.terms.items():
            term = NcPoly.one(target_alpha, target_field)
            for g in w:
                term = term * images[g]
            out = out + term.scale(c)
        return out

    def sorted_terms(self) -> list[tuple[Word, object]]:
        return sorted(self.terms.items(), key=lambda t: deglex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        pieces = []
        for w, c in self.sorted_terms():
            c = F.lift(c)
            neg = c < 0
            mag = -c if neg else c
            body = self.alphabet.format_word(w)
            if mag == 1:
                text = body
            elif not w:
                text = str(mag)
            else:
                text = f"{mag}*{body}"
            pieces.append(("-" if neg else "+", text))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"NcPoly({self})"


def word_rank(w: Word, n: int) -> int:
    r = 0
    for g in w:
        r = r * n + g
    return r


def word_unrank(r: int, n: int, d: int) -> Word:
    out = []
    for _ in range(d):
        r, g = divmod(r, n)
        out.append(g)
    return tuple(reversed(out))


def is_factor(u: Word, w: Word) -> bool:
    k = len(u)
    return any(w[i:i + k] == u for i in range(len(w) - k + 1))


class Presentation:
    """Generators (all degree 1) and homogeneous relations of degree >= 2."""

    def __init__(self, alphabet: Alphabet | Sequence[str], relations: Sequence[NcPoly] = (),
                 field=None, name: str = "A"):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet)
        field = field if field is not None else (relations[0].field if relations else GF())
        self.alphabet = alphabet
        self.field = field
        self.name = name
        rels = []
        for r in relations:
            if r.alphabet != alphabet:
                raise ValueError("relation over a different alphabet")
            if r.field != field:
                raise ValueError("relation over a different field")
            if r.is_zero():
                raise ValueError("zero relation")
            if not r.is_homogeneous():
                raise ValueError(f"relation {r} is not homogeneous")
            if r.degree() < 2:
                raise ValueError(f"relation {r} has degree {r.degree()} < 2")
            rels.append(r)
        self.relations = rels

    @classmethod
    def parse(cls, gens: Sequence[str] | str, relations: Sequence[str], field=None, name: str = "A"):
        """Build from relation strings in the DSL polynomial syntax."""
        from .dsl import parse_poly

        if isinstance(gens, str):
            gens = gens.split()
        alphabet = Alphabet(gens)
        field = field if field is not None else GF()
        rels = [parse_poly(text, alphabet, field) for text in relations]
        return cls(alphabet, rels, field, name)

    @property
    def ngens(self) -> int:
        return len(self.alphabet)

    def relation_degrees(self) -> list[int]:
        return [r.degree() for r in self.relations]

    def max_degree(self) -> int:
        return max(self.relation_degrees(), default=1)

    def gen(self, name: str) -> NcPoly:
        return NcPoly.gen(self.alphabet, self.field, name)

    def gens(self) -> list[NcPoly]:
        return [NcPoly.monomial(self.alphabet, self.field, (i,)) for i in range(self.ngens)]

    def poly(self, text: str) -> NcPoly:
        from .dsl import parse_poly

        return parse_poly(text, self.alphabet, self.field)

    def is_monomial(self) -> bool:
        return all(len(r.terms) == 1 for r in self.relations)

    def monomial_words(self) -> list[Word]:
        if not self.is_monomial():
            raise ValueError("presentation has non-monomial relations")
        return [next(iter(r.terms)) for r in self.relations]

    def with_field(self, field) -> "Presentation":
        rels = [NcPoly(self.alphabet, field, {w: _convert(c, self.field, field) for w, c in r.terms.items()})
                for r in self.relations]
        return Presentation(self.alphabet, rels, field, self.name)

    def with_relations(self, relations: Sequence[NcPoly], name: str | None = None) -> "Presentation":
        return Presentation(self.alphabet, relations, self.field, name or self.name)

    def to_dsl(self) -> str:
        lines = [f"field {'Q' if self.field == QQ else 'GF ' + str(self.field.p)}",
                 f"algebra {self.name}",
                 "gens " + " ".join(self.alphabet.names)]
        lines += [f"rel {r}" for r in self.relations]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations)
        return f"<{self.name} = {self.field!r}<{', '.join(self.alphabet)}> / ({rels})>"


def _convert(c, src, dst):
    if src == dst:
        return c
    if src == QQ:
        return dst(c)
    # prime-field value: use the symmetric lift as an integer
    return dst(src.lift(c))
