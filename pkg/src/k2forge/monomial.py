"""Combinatorial K2 test for monomial algebras.

For a minimal set R of monomial relations:

* ``LE(R)`` - proper left ends: nonempty a with ab in R for some nonempty b;
* ``L(a, b)`` - the shortest suffix a' of a with a'b = 0 in A (None if ab != 0);
* ``L(b)`` - the a in LE(R) with L(a, b) = a, which generate the left
  annihilator of b;
* level sets ``S_1 = generators``, ``S_i = U_{b in S_{i-1}} L(b)`` minus the
  earlier levels.

A is K2 iff for every b in some S_i and every a in L(b) either ab is in R or
a is a single letter.  Zero tests use a factor automaton on R, independent
of the Groebner engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .automaton import FactorAutomaton
from .freealg import Alphabet, NcPoly, Presentation, Word, deglex_key, is_factor


class MonomialAlgebra:
    """A monomial presentation: an antichain R of words of length >= 2."""

    def __init__(self, alphabet: Alphabet | list[str], relations):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet)
        self.alphabet = alphabet
        words = []
        for r in relations:
            w = alphabet.word(r) if isinstance(r, str) else tuple(r)
            if len(w) < 2:
                raise ValueError(f"monomial relation {alphabet.plain_word(w)} has degree < 2")
            if any(not 0 <= g < len(alphabet) for g in w):
                raise ValueError("relation uses an unknown generator")
            if w not in words:
                words.append(w)
        for u in words:
            for v in words:
                if u != v and is_factor(u, v):
                    raise ValueError(
                        f"relation {alphabet.plain_word(v)} contains relation "
                        f"{alphabet.plain_word(u)}; the relation set is not minimal")
        self.R = tuple(sorted(words, key=deglex_key))
        self.Rset = frozenset(self.R)
        self._auto = FactorAutomaton(self.R, len(alphabet))
        self._l_cache: dict = {}

    @classmethod
    def from_presentation(cls, p: Presentation) -> "MonomialAlgebra":
        words = []
        for r in p.relations:
            if len(r.terms) != 1:
                raise ValueError(f"relation {r} is not a monomial")
            (w, c), = r.terms.items()
            words.append(w)
        return cls(p.alphabet, words)

    def presentation(self, field=None, name: str = "A") -> Presentation:
        from .exactlin import GF

        field = field or GF()
        return Presentation(self.alphabet, [NcPoly.monomial(self.alphabet, field, w) for w in self.R],
                            field, name)

    @property
    def ngens(self) -> int:
        return len(self.alphabet)

    def is_zero(self, w: Word) -> bool:
        return self._auto.contains_factor(w)

    def fmt(self, w: Word) -> str:
        return self.alphabet.plain_word(w)


def _alg(R, alphabet=None) -> MonomialAlgebra:
    if isinstance(R, MonomialAlgebra):
        return R
    if isinstance(R, Presentation):
        return MonomialAlgebra.from_presentation(R)
    if alphabet is None:
        raise ValueError("an alphabet is required for a bare relation list")
    return MonomialAlgebra(alphabet, R)


def left_ends(R, alphabet=None) -> set[Word]:
    A = _alg(R, alphabet)
    return {r[:k] for r in A.R for k in range(1, len(r))}


def l_of(a: Word, b: Word, R, alphabet=None) -> Word | None:
    """Shortest suffix a' of a with a'b = 0 in A; None when ab != 0."""
    A = _alg(R, alphabet)
    if not A.is_zero(a + b):
        return None
    for k in range(len(a) + 1):
        suffix = a[len(a) - k:]
        if A.is_zero(suffix + b):
            return suffix
    return a  # unreachable


def l_set(b: Word, R, alphabet=None) -> list[Word]:
    """L(b) = {a in LE(R) : L(a, b) = a}, in deglex order."""
    A = _alg(R, alphabet)
    cached = A._l_cache.get(b)
    if cached is not None:
        return cached
    out = []
    for a in sorted(left_ends(A), key=deglex_key):
        if A.is_zero(a + b) and l_of(a, b, A) == a:
            out.append(a)
    A._l_cache[b] = out
    return out


@dataclass
class LevelSets:
    alphabet: Alphabet
    S: list  # S[0] = S_1, ... ; the final empty level is not stored
    diagnostics: dict  # b -> [(a, ab in R, |a| == 1)]
    failure: tuple | None = None  # (level, b, a), minimal in (level, deglex b, deglex a)
    R: tuple = ()

    def level(self, i: int) -> list[Word]:
        """S_i for i >= 1 (empty beyond the last computed level)."""
        return self.S[i - 1] if 1 <= i <= len(self.S) else []

    @property
    def is_k2(self) -> bool:
        return self.failure is None

    @property
    def failure_level(self) -> int | None:
        return self.failure[0] if self.failure else None

    def as_words(self) -> list[list[str]]:
        return [[self.alphabet.plain_word(w) for w in level] for level in self.S]


def level_sets(R, alphabet=None) -> LevelSets:
    A = _alg(R, alphabet)
    seen: set = set()
    current = [(x,) for x in range(A.ngens)]
    levels = []
    diagnostics = {}
    failure = None
    limit = len(left_ends(A)) + 2
    i = 1
    while current:
        if i > limit:
            raise RuntimeError("level-set construction did not terminate")
        levels.append(current)
        seen.update(current)
        new: set = set()
        for b in current:
            diag = []
            for a in l_set(b, A):
                in_r = (a + b) in A.Rset
                diag.append((a, in_r, len(a) == 1))
                if failure is None and not in_r and len(a) > 1:
                    failure = (i, b, a)
                if a not in seen:
                    new.add(a)
            diagnostics[b] = diag
        current = sorted(new, key=deglex_key)
        i += 1
    return LevelSets(A.alphabet, levels, diagnostics, failure, A.R)


@dataclass
class MonomialVerdict:
    is_k2: bool
    failure_level: int | None
    witness: tuple | None  # (b, a)
    levels: LevelSets = dc_field(repr=False, default=None)


def monomial_k2_check(R, alphabet=None) -> MonomialVerdict:
    """Complete (unbounded) K2 decision for a monomial algebra."""
    ls = level_sets(R, alphabet)
    if ls.failure is None:
        return MonomialVerdict(True, None, None, ls)
    level, b, a = ls.failure
    return MonomialVerdict(False, level, (b, a), ls)


def monomial_resolution(R, n_max: int, alphabet=None, field=None, gb=None):
    """The combinatorial minimal resolution: each row of Mhat_m has one entry."""
    from .gbasis import complete
    from .resolution import from_matrices

    A = _alg(R, alphabet)
    P = A.presentation(field)
    if gb is None:
        gb = complete(P, max(P.max_degree(), 2))
    F = P.field
    zero = NcPoly.zero(A.alphabet, F)

    def mono(w):
        return NcPoly.monomial(A.alphabet, F, w)

    entries = [(x,) for x in range(A.ngens)]  # nonzero entry of each row
    matrices = [[[mono(e)] for e in entries]]
    for _ in range(2, n_max + 1):
        rows, new_entries = [], []
        for i, b in enumerate(entries):
            for a in l_set(b, A):
                row = [zero] * len(entries)
                row[i] = mono(a)
                rows.append(row)
                new_entries.append(a)
        if not rows:
            break
        matrices.append(rows)
        entries = new_entries
    # generator degrees accumulate entry lengths
    degs = [1] * A.ngens
    for M in matrices[1:]:
        degs = [next(len(next(iter(p.terms))) + degs[j] for j, p in enumerate(row) if p.terms) for row in M]
    d_max = max(degs) if matrices else 0
    res = from_matrices(gb, matrices, d_max)
    res.n_max = n_max
    res.terminated = len(matrices) < n_max or not any(l_set(b, A) for b in entries)
    return res


def n_homogeneous_level_check(R, alphabet=None) -> dict:
    """Dichotomy for N-homogeneous monomial algebras: either K2 with S_3 empty,
    or K2 fails at level 2."""
    A = _alg(R, alphabet)
    degs = {len(r) for r in A.R}
    if len(degs) != 1:
        raise ValueError(f"relations are not N-homogeneous (degrees {sorted(degs)})")
    N = degs.pop()
    ls = level_sets(A)
    if ls.failure is None:
        branch = "K2"
        holds = not ls.level(3)
    else:
        branch = "fails_at_level_2"
        holds = ls.failure[0] == 2
    return {"N": N, "branch": branch, "dichotomy_holds": holds, "levels": ls}
