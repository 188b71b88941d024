"""The [L_n : E_n] rank criterion, K2 verdicts and cup products.

``L_n`` is the linear part of the lifted differential ``Mhat_n``; ``E_n`` is
the class of ``Mhat_n Mhat_{n-1}`` in ``I / I'`` where
``I' = I V + V I``.  An algebra is K2 exactly when the rows of
``[L_n : E_n]`` are linearly independent for every ``2 < n <= pd_A(K)``;
for a cyclic module the range starts at ``n = 1`` with ``E_1 = 0``.

The classes in ``I_e / I'_e`` are written in the basis given by the minimal
relations of degree ``e`` (see :meth:`TruncatedGB.essential_coordinates`).
:class:`EssentialQuotient` computes the same projection from explicit bases
of ``I_e`` and ``I'_e`` in the word basis and serves as an oracle.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .exactlin import Echelon, KMatrix, left_kernel_basis, rank
from .freealg import NcPoly
from .gbasis import TruncatedGB
from .resolution import MinimalResolution, betti_table

K2_CONCLUSIVE = "K2_conclusive"
K2_UP_TO_BOUND = "K2_up_to_bound"
NOT_K2 = "not_K2"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("K2FORGE_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# explicit essential quotient (oracle)


class EssentialQuotient:
    """I_d, I'_d and a projection onto a complement, from explicit word-basis spans."""

    def __init__(self, g: TruncatedGB, d: int):
        g._check_degree(d)
        P = g.presentation
        F = g.field
        self.degree = d
        self.field = F
        lower = Echelon(F)  # I_{d-1}
        if d - 1 >= 2:
            for vec in _ideal_span(P, d - 1):
                lower.add(vec)
        self.iprime = Echelon(F)
        for f in lower.rows:
            for x in range(P.ngens):
                self.iprime.add({(x,) + w: c for w, c in f.items()})
                self.iprime.add({w + (x,): c for w, c in f.items()})
        self.ideal = Echelon(F)
        for f in self.iprime.rows:
            self.ideal.add(f)
        for vec in _ideal_span(P, d):
            self.ideal.add(vec)
        # projector: I' rows untagged, then a complement of I' in I chosen from
        # the relations of degree d, tagged by their position
        self.complement = [i for i, r in enumerate(P.relations) if r.degree() == d]
        self._proj = Echelon(F)
        for f in self.iprime.rows:
            self._proj.add(f, {})
        for slot, i in enumerate(self.complement):
            self._proj.add(dict(P.relations[i].terms), {slot: F.one})

    @property
    def dim_ideal(self) -> int:
        return self.ideal.rank

    @property
    def dim_iprime(self) -> int:
        return self.iprime.rank

    def contains(self, f: NcPoly) -> bool:
        return self.ideal.contains(dict(f.terms))

    def project(self, f: NcPoly) -> dict:
        """Coordinates of f in I_d / I'_d keyed by relation index."""
        res, tag = self._proj.reduce(dict(f.terms), {})
        if res:
            raise ValueError("element is not in the ideal")
        F = self.field
        return {self.complement[s]: F.reduce(-c) for s, c in tag.items() if c}

    def is_essential(self, f: NcPoly) -> bool:
        return bool(self.project(f))


def _ideal_span(P, d: int):
    for r in P.relations:
        rd = r.degree()
        if rd > d:
            continue
        for lu in range(d - rd + 1):
            for u in P.alphabet.words(lu):
                for w in P.alphabet.words(d - rd - lu):
                    yield {u + x + w: c for x, c in r.terms.items()}


def essential_quotient(g: TruncatedGB, d: int) -> EssentialQuotient:
    return EssentialQuotient(g, d)


# ---------------------------------------------------------------------------
# the [L_n : E_n] matrix


@dataclass
class LEMatrix:
    n: int
    matrix: KMatrix
    columns: list  # ("L", j, generator) or ("E", j, relation index)
    row_degrees: list

    @property
    def rows(self) -> int:
        return self.matrix.nrows

    def rank(self) -> int:
        return rank(self.matrix)

    def dependency(self) -> list | None:
        """A nonzero vector w with w^T [L_n:E_n] = 0, or None."""
        ker = left_kernel_basis(self.matrix)
        return ker[0] if ker else None

    def zero_rows(self) -> list[int]:
        return [i for i in range(self.matrix.nrows) if not self.matrix.row(i)]


def _matmul_T(X: list[list[NcPoly]], Y: list[list[NcPoly]], alphabet, field) -> list[list[NcPoly]]:
    red = field.reduce
    width = len(Y[0]) if Y else 0
    out = []
    for row in X:
        new = []
        for j in range(width):
            acc: dict = {}
            for k, a in enumerate(row):
                b = Y[k][j]
                if not a.terms or not b.terms:
                    continue
                for w1, c1 in a.terms.items():
                    for w2, c2 in b.terms.items():
                        w = w1 + w2
                        v = red(acc.get(w, 0) + c1 * c2)
                        if v:
                            acc[w] = v
                        else:
                            acc.pop(w, None)
            new.append(NcPoly._raw(alphabet, field, acc))
        out.append(new)
    return out


def le_matrix(res: MinimalResolution, g: TruncatedGB, n: int) -> LEMatrix:
    """Assemble [L_n : E_n]; E_1 = 0 by convention."""
    if not 1 <= n <= res.length:
        raise ValueError(f"n = {n} outside the computed range 1..{res.length}")
    F = g.field
    nx = g.ngens
    nrel = len(g.presentation.relations)
    Mn = res.lift_matrix(n)
    t_prev = res.rank(n - 1)
    columns = [("L", j, x) for j in range(t_prev) for x in range(nx)]
    t_prev2 = res.rank(n - 2) if n >= 2 else 0
    columns += [("E", j, s) for j in range(t_prev2) for s in range(nrel)]
    offset = t_prev * nx
    rows = []
    prod = _matmul_T(Mn, res.lift_matrix(n - 1), g.alphabet, F) if n >= 2 else None
    for i in range(len(Mn)):
        row = {}
        for j in range(t_prev):
            for x in range(nx):
                c = Mn[i][j].coefficient((x,))
                if c:
                    row[j * nx + x] = c
        if prod is not None:
            for j in range(t_prev2):
                for s, c in g.essential_coordinates(prod[i][j]).items():
                    if c:
                        row[offset + j * nrel + s] = c
        rows.append(row)
    return LEMatrix(n, KMatrix(F, len(rows), len(columns), rows), columns, list(res.degrees(n)))


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class K2Report:
    verdict: str
    witness: tuple | None  # (n, vector)
    ranks: dict  # n -> (rank, rows)
    bounds: dict
    betti: list
    terminated: bool = False
    termination_certified: bool = False
    start: int = 3
    witness_matrix: LEMatrix | None = dc_field(default=None, repr=False)
    notes: list = dc_field(default_factory=list)

    @property
    def is_k2(self) -> bool | None:
        if self.verdict == NOT_K2:
            return False
        return True if self.verdict == K2_CONCLUSIVE else None

    @property
    def semantics(self) -> str:
        if self.verdict == K2_UP_TO_BOUND:
            return f"through (n_max={self.bounds['n_max']}, d_max={self.bounds['d_max']})"
        return "conclusive"

    @property
    def failing_n(self) -> int | None:
        return self.witness[0] if self.witness else None


def _rank_tests(res, g, ns):
    def one(n):
        m = le_matrix(res, g, n)
        return n, m, m.rank()

    workers = worker_count()
    if workers > 1 and len(ns) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, ns))
    return [one(n) for n in ns]


def _check(res: MinimalResolution, g: TruncatedGB, start: int) -> K2Report:
    ns = list(range(start, res.length + 1))
    ranks = {}
    witness = None
    wmat = None
    for n, m, r in _rank_tests(res, g, ns):
        ranks[n] = (r, m.rows)
        if r < m.rows and witness is None:
            witness = (n, m.dependency())
            wmat = m
    bounds = {"n_max": res.n_max, "d_max": res.d_max}
    if witness is not None:
        verdict = NOT_K2
    elif res.terminated and res.termination_certified:
        verdict = K2_CONCLUSIVE
    else:
        verdict = K2_UP_TO_BOUND
    return K2Report(verdict, witness, ranks, bounds, betti_table(res), res.terminated,
                    res.termination_certified, start, wmat)


def k2_check(res: MinimalResolution, g: TruncatedGB | None = None) -> K2Report:
    """Rank criterion for the algebra: rows of [L_n:E_n] independent for n >= 3."""
    return _check(res, g or res.gb, 3)


def k2_module_check(res_w: MinimalResolution, g: TruncatedGB | None = None) -> K2Report:
    """Rank criterion for a cyclic module, n >= 1 with E_1 = 0."""
    return _check(res_w, g or res_w.gb, 1)


def delta(N: int, n: int) -> int:
    """Internal degree of E^n for an N-Koszul algebra."""
    return N * (n - 1) // 2 + 1 if n % 2 else N * n // 2


def n_koszul_check(res: MinimalResolution, g: TruncatedGB | None, N: int) -> dict:
    g = g or res.gb
    degs = g.presentation.relation_degrees()
    homogeneous = bool(degs) and all(d == N for d in degs)
    report = k2_check(res, g)
    pure = all(all(m == delta(N, n) for m in res.modules[n]) for n in range(len(res.modules)))
    ok = homogeneous and report.verdict != NOT_K2 and pure
    return {
        "n_koszul": ok,
        "N": N,
        "homogeneous": homogeneous,
        "pure": pure,
        "k2": report.verdict,
        "conclusive": (not ok) if not homogeneous or report.verdict == NOT_K2 else report.verdict == K2_CONCLUSIVE,
    }


# ---------------------------------------------------------------------------
# cup products by lifting chain maps


def chain_lift(res: MinimalResolution, k: int, b: int, a: int) -> list[list[dict]]:
    """Chain map lifting eps_{k,b}: F_0 = e_k, F_s : Q^{b+s} -> Q^s for s <= a.

    Returns ``lifts[s][i]`` = F_s(e_i) as a module vector of Q^s.
    """
    if b + a > res.length:
        raise ValueError(f"cup product needs Q^{b + a}, only {res.length} computed")
    F = res.gb.field
    deg_k = res.degrees(b)[k]
    lifts = [[{(0, ()): F.one} if i == k else {} for i in range(res.rank(b))]]
    for s in range(1, a + 1):
        out = []
        degs_src = res.degrees(b + s)
        for i, row in enumerate(res.rows(b + s)):
            # F_{s-1}(d_{b+s}(e_i)) in Q^{s-1}
            target = _apply_chain(res, row, lifts[s - 1])
            d = degs_src[i] - deg_k
            if d > res.d_max:
                raise ValueError("chain lift degree exceeds d_max")
            if s == 1:
                # compose with the augmentation: the target lies in Q^0 and must
                # be hit by d_1
                pre = res.preimage(1, target, d)
            else:
                pre = res.preimage(s, target, d)
            if pre is None:
                raise RuntimeError(f"chain lift failed at stage {s}, row {i}")
            out.append(pre)
        lifts.append(out)
    return lifts


def _apply_chain(res: MinimalResolution, row: dict, images: list[dict]) -> dict:
    g = res.gb
    red = g.field.reduce
    out: dict = {}
    for (j, w), c in row.items():
        for (m, w2), c2 in images[j].items():
            for nw, nc in g.nf_word(w + w2).items():
                v = red(out.get((m, nw), 0) + c * c2 * nc)
                if v:
                    out[(m, nw)] = v
                else:
                    out.pop((m, nw), None)
    return out


def cup_product(res: MinimalResolution, g: TruncatedGB | None, f: tuple, h: tuple) -> dict:
    """Coordinates of eps_{p,a} * eps_{k,b} on the basis eps_{j,a+b}.

    ``f = (p, a)`` with a in {1, 2}; ``h = (k, b)``.  The coefficient of
    eps_{j,a+b} is the constant term of the p-th entry of F_a(e_j).
    """
    p, a = f
    k, b = h
    if a not in (1, 2):
        raise ValueError("left factor must lie in E^1 or E^2")
    lifts = chain_lift(res, k, b, a)
    out = {}
    for j, vec in enumerate(lifts[a]):
        c = vec.get((p, ()))
        if c:
            out[j] = c
    return out


def low_degree_generation_dims(res: MinimalResolution, g: TruncatedGB | None, n: int) -> dict:
    """Per internal degree m: dim of (U_n + V_n) inside E^{n,m}.

    U_n = E^2 * E^{n-2} and V_n = E^1 * E^{n-1}.
    """
    g = g or res.gb
    F = g.field
    degs = res.degrees(n)
    spans: dict[int, Echelon] = {}
    for a in (1, 2):
        b = n - a
        if b < 0:
            continue
        for k in range(res.rank(b)):
            lifts = chain_lift(res, k, b, a)
            for p in range(res.rank(a)):
                vec = {}
                for j, v in enumerate(lifts[a]):
                    c = v.get((p, ()))
                    if c:
                        vec[j] = c
                if vec:
                    m = degs[next(iter(vec))]
                    spans.setdefault(m, Echelon(F)).add(vec)
    return {m: spans[m].rank if m in spans else 0 for m in sorted(set(degs))}


def cup_criterion(res: MinimalResolution, g: TruncatedGB | None = None) -> dict:
    """First n >= 3 with E^n != U_n + V_n (None when none within range)."""
    g = g or res.gb
    for n in range(3, res.length + 1):
        dims = low_degree_generation_dims(res, g, n)
        total = sum(dims.values())
        if total < res.rank(n):
            return {"generated": False, "n": n, "dims": dims}
    return {"generated": True, "n": None, "dims": None}
