"""Aho-Corasick automaton over integer alphabets.

Used for three things: the "contains a forbidden factor" test for monomial
algebras, enumeration of normal words, and counting normal words of each
length by dynamic programming over automaton states.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


class FactorAutomaton:
    """Recognises words that contain one of ``patterns`` as a factor."""

    def __init__(self, patterns: Iterable[Sequence[int]], nletters: int):
        self.nletters = nletters
        self.goto: list[dict[int, int]] = [{}]
        self.terminal: list[bool] = [False]
        for pat in patterns:
            s = 0
            for a in pat:
                nxt = self.goto[s].get(a)
                if nxt is None:
                    nxt = len(self.goto)
                    self.goto[s][a] = nxt
                    self.goto.append({})
                    self.terminal.append(False)
                s = nxt
            self.terminal[s] = True
        nstates = len(self.goto)
        fail = [0] * nstates
        delta = [[0] * nletters for _ in range(nstates)]
        queue = deque()
        for a in range(nletters):
            t = self.goto[0].get(a)
            if t is not None:
                delta[0][a] = t
                queue.append(t)
        while queue:
            s = queue.popleft()
            self.terminal[s] = self.terminal[s] or self.terminal[fail[s]]
            for a in range(nletters):
                t = self.goto[s].get(a)
                if t is not None:
                    fail[t] = delta[fail[s]][a]
                    delta[s][a] = t
                    queue.append(t)
                else:
                    delta[s][a] = delta[fail[s]][a]
        self.delta = delta
        self.fail = fail

    @property
    def nstates(self) -> int:
        return len(self.delta)

    def contains_factor(self, word: Sequence[int]) -> bool:
        s = 0
        if self.terminal[0]:
            return True
        for a in word:
            s = self.delta[s][a]
            if self.terminal[s]:
                return True
        return False

    def count_avoiding(self, max_len: int) -> list[int]:
        """Number of words of each length 0..max_len avoiding every pattern."""
        if self.terminal[0]:
            return [0] * (max_len + 1)
        counts = {0: 1}
        out = [1]
        for _ in range(max_len):
            nxt: dict[int, int] = {}
            for s, c in counts.items():
                row = self.delta[s]
                for a in range(self.nletters):
                    t = row[a]
                    if not self.terminal[t]:
                        nxt[t] = nxt.get(t, 0) + c
            counts = nxt
            out.append(sum(counts.values()))
        return out

    def words_avoiding(self, length: int) -> list[tuple]:
        """All words of the given length avoiding every pattern, lex order."""
        if self.terminal[0]:
            return []
        layer = [((), 0)]
        for _ in range(length):
            nxt = []
            for w, s in layer:
                row = self.delta[s]
                for a in range(self.nletters):
                    t = row[a]
                    if not self.terminal[t]:
                        nxt.append((w + (a,), t))
            layer = nxt
        return [w for w, _ in layer]
