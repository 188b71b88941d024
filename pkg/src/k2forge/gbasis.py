"""Degree-truncated noncommutative Groebner bases (diamond-lemma completion).

``complete(P, D)`` builds a reduced rewriting system ``leading word ->
tail`` that is confluent for every word of length at most ``D``.  The work
is organised by degree: in degree ``e`` the overlap ambiguities of the
rules found so far (all of which have degree < e) are resolved, the
relations of degree ``e`` are added, and the resulting span is put in
reduced echelon form with the *largest* word of each row as pivot.  The
pivots become the new leading words.

The same per-degree echelon data also gives the essential projection
``I_e -> I_e / I'_e``: the span of the resolved overlaps is exactly the
normal-form image of ``I'_e`` (the part of the ideal generated in lower
degrees), and the relations of degree ``e`` complete it to a basis.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .automaton import FactorAutomaton
from .exactlin import Echelon
from .freealg import NcPoly, Presentation, Word

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def _col(w: Word) -> tuple:
    # Echelon pivots on the smallest column; negating letters makes the
    # lexicographically largest word of a fixed length the smallest key.
    return tuple(-g for g in w)


def _word(col: tuple) -> Word:
    return tuple(-g for g in col)


class DegreeBoundError(ValueError):
    """Raised when a query needs a degree beyond the confluence bound."""


@dataclass
class TruncatedGB:
    presentation: Presentation
    degree_bound: int
    rules: dict = dc_field(default_factory=dict)  # leading word -> {word: coef} tail
    confluent_through: int = 0
    is_complete: bool = False  # all overlaps live in degree <= bound: the basis is finite
    _ess: dict = dc_field(default_factory=dict, repr=False)  # degree -> Echelon (tagged)
    _rel_index: dict = dc_field(default_factory=dict, repr=False)  # degree -> [relation index]
    _nf_cache: dict = dc_field(default_factory=dict, repr=False)
    _lengths: tuple = dc_field(default=(), repr=False)
    _normal_cache: dict = dc_field(default_factory=dict, repr=False)
    _automaton: FactorAutomaton | None = dc_field(default=None, repr=False)

    # basic data ---------------------------------------------------------
    @property
    def field(self):
        return self.presentation.field

    @property
    def alphabet(self):
        return self.presentation.alphabet

    @property
    def ngens(self) -> int:
        return len(self.presentation.alphabet)

    def leading_words(self) -> list[Word]:
        return sorted(self.rules, key=lambda w: (len(w), w))

    def max_leading_length(self) -> int:
        return max((len(w) for w in self.rules), default=0)

    def rule_polys(self) -> list[NcPoly]:
        out = []
        for lw in self.leading_words():
            terms = {lw: 1}
            for w, c in self.rules[lw].items():
                terms[w] = self.field.reduce(-c)
            out.append(NcPoly(self.alphabet, self.field, terms))
        return out

    def _check_degree(self, d: int):
        if d > self.confluent_through and not self.is_complete:
            raise DegreeBoundError(
                f"degree {d} exceeds the confluence bound {self.confluent_through}")

    # normal forms -------------------------------------------------------
    def _find(self, w: Word) -> tuple[int, Word] | None:
        rules = self.rules
        for i in range(len(w)):
            for L in self._lengths:
                if i + L > len(w):
                    break
                f = w[i:i + L]
                if f in rules:
                    return i, f
        return None

    def nf_word(self, w: Word) -> dict:
        """Normal form of a single word as ``{normal word: coef}``."""
        cached = self._nf_cache.get(w)
        if cached is not None:
            return cached
        hit = self._find(w)
        if hit is None:
            out = {w: self.field.one}
        else:
            i, lw = hit
            u, v = w[:i], w[i + len(lw):]
            red = self.field.reduce
            out = {}
            for t, c in self.rules[lw].items():
                for nw, nc in self.nf_word(u + t + v).items():
                    val = red(out.get(nw, 0) + c * nc)
                    if val:
                        out[nw] = val
                    else:
                        out.pop(nw, None)
        self._nf_cache[w] = out
        return out

    def nf_terms(self, terms: dict) -> dict:
        red = self.field.reduce
        out: dict = {}
        for w, c in terms.items():
            for nw, nc in self.nf_word(w).items():
                val = red(out.get(nw, 0) + c * nc)
                if val:
                    out[nw] = val
                else:
                    out.pop(nw, None)
        return out

    def normal_form(self, p: NcPoly) -> NcPoly:
        if p.terms:
            self._check_degree(p.degree())
        return NcPoly._raw(p.alphabet, p.field, self.nf_terms(p.terms))

    def is_zero_in_A(self, p: NcPoly) -> bool:
        return self.normal_form(p).is_zero()

    def is_normal_word(self, w: Word) -> bool:
        return self._find(w) is None

    # normal words and Hilbert series -----------------------------------
    def normal_words(self, d: int) -> list[Word]:
        """Basis of A_d: words of length d avoiding every leading word (lex order)."""
        self._check_degree(d)
        return self._normal_words(d)

    def _normal_words(self, d: int) -> list[Word]:
        cached = self._normal_cache.get(d)
        if cached is not None:
            return cached
        if d == 0:
            out = [()]
        else:
            rules = self.rules
            lengths = self._lengths
            out = []
            for w in self._normal_words(d - 1):
                for a in range(self.ngens):
                    nw = w + (a,)
                    if not any(L <= d and nw[d - L:] in rules for L in lengths):
                        out.append(nw)
        self._normal_cache[d] = out
        return out

    def automaton(self) -> FactorAutomaton:
        if self._automaton is None:
            self._automaton = FactorAutomaton(self.rules.keys(), self.ngens)
        return self._automaton

    def hilbert_prefix(self, D: int | None = None) -> list[int]:
        """dim A_d for d = 0..D, counted on the automaton of leading words."""
        D = self.confluent_through if D is None else D
        self._check_degree(D)
        return self.automaton().count_avoiding(D)

    def normal_index(self, d: int) -> dict:
        return {w: i for i, w in enumerate(self.normal_words(d))}

    # essential relations -----------------------------------------------
    def relations_of_degree(self, e: int) -> list[int]:
        return list(self._rel_index.get(e, []))

    def essential_coordinates(self, f: NcPoly | dict, degree: int | None = None) -> dict:
        """Coordinates of the class of ``f`` in I_e / I'_e on the relations of degree e.

        Returns ``{relation index: coefficient}``.  ``f`` must be homogeneous
        and lie in I; a ValueError is raised otherwise.
        """
        terms = f.terms if isinstance(f, NcPoly) else f
        if not terms:
            return {}
        degs = {len(w) for w in terms}
        if len(degs) != 1:
            raise ValueError("essential projection needs a homogeneous element")
        e = degs.pop()
        self._check_degree(e)
        ech = self._ess.get(e)
        rels = self._rel_index.get(e, [])
        if ech is None or not rels:
            if not self.nf_terms(terms):
                return {}
            raise ValueError("element is not in the ideal")
        vec = {_col(w): c for w, c in self.nf_lower(terms, e).items()}
        res, tag = ech.reduce(vec, {})
        if res:
            raise ValueError("element is not in the ideal")
        red = self.field.reduce
        return {rels[s]: red(-c) for s, c in tag.items() if c}

    def nf_lower(self, terms: dict, e: int) -> dict:
        """Normal form using only rules of degree < e (the pre-degree-e system)."""
        sub = self._lower_systems.get(e)
        if sub is None:
            sub = TruncatedGB(self.presentation, e - 1,
                              {lw: t for lw, t in self.rules.items() if len(lw) < e},
                              e - 1)
            sub._lengths = tuple(sorted({len(w) for w in sub.rules}))
            self._lower_systems[e] = sub
        return sub.nf_terms(terms)

    def is_essential(self, f: NcPoly) -> bool:
        return bool(self.essential_coordinates(f))

    def __post_init__(self):
        self._lower_systems = {}


def _overlaps(rules: dict, prefix_index: dict, e: int) -> Iterable[tuple[Word, Word, int]]:
    """Pairs (a, b, k): suffix of a of length k equals prefix of b; |a|+|b|-k = e."""
    for a in rules:
        la = len(a)
        if la >= e:
            continue
        for k in range(1, la):
            lb = e - la + k
            if lb <= k:
                continue
            for b in prefix_index.get(a[la - k:], ()):
                if len(b) == lb:
                    yield a, b, k


def default_degree_bound(p: Presentation) -> int:
    return 2 * p.max_degree() + 4


def complete(p: Presentation, D: int | None = None) -> TruncatedGB:
    """Complete the presentation to a rewriting system confluent through degree D."""
    if D is None:
        D = default_degree_bound(p)
    maxdeg = max(p.relation_degrees(), default=0)
    if D < maxdeg:
        raise ValueError(f"degree bound {D} is below the maximal relation degree {maxdeg}")
    F = p.field
    red = F.reduce
    g = TruncatedGB(p, D)
    by_degree: dict[int, list[int]] = {}
    for i, r in enumerate(p.relations):
        by_degree.setdefault(r.degree(), []).append(i)
    prefix_index: dict[Word, list[Word]] = {}

    for e in range(2, D + 1):
        ech = Echelon(F)
        # resolve overlaps among rules of lower degree
        for a, b, k in _overlaps(g.rules, prefix_index, e):
            nf = g.nf_terms(_s_poly(g.rules, a, b, k, red))
            if nf:
                ech.add({_col(w): c for w, c in nf.items()}, {})
        rel_ids = by_degree.get(e, [])
        for slot, i in enumerate(rel_ids):
            nf = g.nf_terms(p.relations[i].terms)
            ok, _, _ = ech.add({_col(w): c for w, c in nf.items()}, {slot: F.one})
            if not ok:
                raise ValueError(
                    f"relation {p.relations[i]} is redundant: it lies in the ideal "
                    f"generated by the other relations")
        g._ess[e] = ech
        g._rel_index[e] = rel_ids
        new_rules = {}
        for row in ech.reduced_rows():
            piv = min(row)
            lw = _word(piv)
            new_rules[lw] = {_word(c): red(-v) for c, v in row.items() if c != piv}
        if new_rules:
            g.rules.update(new_rules)
            g._lengths = tuple(sorted({len(w) for w in g.rules}))
            g._nf_cache.clear()
            for lw in new_rules:
                for k in range(1, len(lw)):
                    prefix_index.setdefault(lw[:k], []).append(lw)
        g.confluent_through = e
    g.confluent_through = D
    g._nf_cache.clear()
    # diamond lemma: the rule set is a full Groebner basis when every overlap
    # beyond the bound also resolves to zero with the final rules
    complete_ = True
    top = 2 * g.max_leading_length()
    for e in range(D + 1, top):
        for a, b, k in _overlaps(g.rules, prefix_index, e):
            if g.nf_terms(_s_poly(g.rules, a, b, k, red)):
                complete_ = False
                break
        if not complete_:
            break
    g.is_complete = complete_
    return g


def _s_poly(rules: dict, a: Word, b: Word, k: int, red) -> dict:
    pa, qb = a[: len(a) - k], b[k:]
    s: dict = {}
    for w, c in rules[a].items():
        s[w + qb] = red(s.get(w + qb, 0) + c)
    for w, c in rules[b].items():
        s[pa + w] = red(s.get(pa + w, 0) - c)
    return {w: c for w, c in s.items() if c}


def ideal_dimensions_bruteforce(p: Presentation, D: int) -> list[int]:
    """dim I_d for d <= D from span{u r w}; an independent oracle (small cases only)."""
    F = p.field
    n = p.ngens
    out = []
    for d in range(D + 1):
        ech = Echelon(F)
        for r in p.relations:
            rd = r.degree()
            if rd > d:
                continue
            for lu in range(d - rd + 1):
                lw = d - rd - lu
                for u in p.alphabet.words(lu):
                    for w in p.alphabet.words(lw):
                        ech.add({u + x + w: c for x, c in r.terms.items()})
        out.append(ech.rank)
    return out
