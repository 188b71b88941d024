"""Minimal graded free resolutions over A = T(V)/I by degree-wise linear algebra.

Conventions
-----------
A free module ``Q^n`` has homogeneous generators ``e_0, e_1, ...`` of the
stored degrees.  An element of ``Q^n`` in internal degree ``d`` is a sparse
vector over the pairs ``(k, w)`` meaning ``w * e_k`` with ``w`` a normal
word of length ``d - deg(e_k)``.  The differential is written with row
vectors: ``d_n(e_i) = sum_j M_n[i][j] e_j``, so composites read
``M_{n+1} M_n`` exactly as in the usual matrix notation, and the relation
column satisfies ``Mhat_2 Mhat_1 = R``.

Algorithm
---------
Stage ``n`` finds minimal generators of ``Z = ker d_{n-1}`` degree by
degree.  In degree ``d`` the decomposable part of ``Z_d`` is the span of
``V * Z_{d-1}``; its dimension is compared with ``dim Z_d``, which follows
from exactness one stage down and the Hilbert series.  Only when they
differ is the kernel computed explicitly, and kernel vectors independent
modulo the decomposables become new generators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .exactlin import Echelon
from .freealg import NcPoly, Word
from .gbasis import TruncatedGB


# ---------------------------------------------------------------------------
# module-vector arithmetic


def _accumulate(out: dict, key, val, red):
    v = red(out.get(key, 0) + val)
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def left_multiply(g: TruncatedGB, u: Word, vec: dict) -> dict:
    """u * vec for a word u and a module vector."""
    red = g.field.reduce
    out: dict = {}
    for (k, w), c in vec.items():
        for nw, nc in g.nf_word(u + w).items():
            _accumulate(out, (k, nw), c * nc, red)
    return out


def apply_rows(g: TruncatedGB, vec: dict, rows: list[dict]) -> dict:
    """Image of a module vector under the map with row vectors ``rows``."""
    red = g.field.reduce
    out: dict = {}
    for (i, w), c in vec.items():
        for (j, w2), c2 in rows[i].items():
            for nw, nc in g.nf_word(w + w2).items():
                _accumulate(out, (j, nw), c * c2 * nc, red)
    return out


def poly_row_to_vec(g: TruncatedGB, row: list[NcPoly]) -> dict:
    red = g.field.reduce
    out: dict = {}
    for j, p in enumerate(row):
        for w, c in g.nf_terms(p.terms).items():
            _accumulate(out, (j, w), c, red)
    return out


def vec_to_poly_row(g: TruncatedGB, vec: dict, width: int) -> list[NcPoly]:
    parts: list[dict] = [{} for _ in range(width)]
    for (j, w), c in vec.items():
        parts[j][w] = c
    return [NcPoly._raw(g.alphabet, g.field, t) for t in parts]


# ---------------------------------------------------------------------------
# data types


@dataclass
class ResolutionStep:
    """The n-th differential: ``matrix_over_A`` and a homogeneous lift over T(V)."""

    matrix_over_A: list  # rows of NcPoly (normal forms)
    lift_over_T: list  # rows of NcPoly
    rows: list = dc_field(default_factory=list, repr=False)  # module vectors of the rows

    @property
    def shape(self) -> tuple[int, int]:
        width = len(self.matrix_over_A[0]) if self.matrix_over_A else 0
        return len(self.matrix_over_A), width


@dataclass
class MinimalResolution:
    gb: TruncatedGB
    modules: list  # modules[n] = generator degrees of Q^n
    steps: list  # steps[n] for n >= 1 (steps[0] is None)
    d_max: int
    n_max: int
    terminated: bool = False
    termination_certified: bool = False
    kind: str = "trivial"
    kernel_dims: dict = dc_field(default_factory=dict, repr=False)  # n -> {d: dim ker d_n}
    _preimage_cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def length(self) -> int:
        """Index of the last nonzero module computed."""
        return len(self.modules) - 1

    def degrees(self, n: int) -> list[int]:
        return self.modules[n] if n < len(self.modules) else []

    def rank(self, n: int) -> int:
        return len(self.degrees(n))

    def lift_matrix(self, n: int) -> list:
        return self.steps[n].lift_over_T

    def matrix(self, n: int) -> list:
        return self.steps[n].matrix_over_A

    def rows(self, n: int) -> list[dict]:
        return self.steps[n].rows

    # module bases --------------------------------------------------------
    def basis(self, n: int, d: int) -> list[tuple]:
        out = []
        for k, dk in enumerate(self.degrees(n)):
            if d >= dk:
                out.extend((k, w) for w in self.gb.normal_words(d - dk))
        return out

    def module_dim(self, n: int, d: int, hilbert: list[int] | None = None) -> int:
        if hilbert is None:
            return len(self.basis(n, d))
        return sum(hilbert[d - dk] for dk in self.degrees(n) if d >= dk)

    def differential(self, n: int, vec: dict) -> dict:
        """Apply d_n : Q^n -> Q^{n-1} to a module vector."""
        return apply_rows(self.gb, vec, self.rows(n))

    def preimage(self, n: int, vec: dict, d: int) -> dict | None:
        """Some x in Q^n_d with d_n(x) = vec, or None when vec is not a boundary."""
        if not vec:
            return {}
        key = (n, d)
        ech = self._preimage_cache.get(key)
        if ech is None:
            ech = Echelon(self.gb.field)
            if n < len(self.modules):
                for b in self.basis(n, d):
                    ech.add(self.differential(n, {b: 1}), {b: 1})
            self._preimage_cache[key] = ech
        res, tag = ech.reduce(vec, {})
        if res:
            return None
        red = self.gb.field.reduce
        return {k: red(-c) for k, c in tag.items() if c}

    def betti_table(self) -> list[tuple[int, int, int]]:
        return betti_table(self)


# ---------------------------------------------------------------------------
# construction


def _row_lift_words(g: TruncatedGB, vec: dict, width: int) -> list[NcPoly]:
    return vec_to_poly_row(g, vec, width)


def _stage(res: MinimalResolution, n: int, hilbert: list[int], candidates=None) -> bool:
    """Compute generators of Q^n (= minimal generators of ker d_{n-1}).

    ``candidates(d)`` may supply preferred kernel elements in degree d (used
    for the relation-aligned basis of Q^2); otherwise kernels are computed.
    Returns True when Q^n is nonzero through d_max.
    """
    g = res.gb
    F = g.field
    red = F.reduce
    prev = res.modules[n - 1]
    zlow = res.kernel_dims[n - 2]
    zdims: dict = {}
    zbasis_prev: list[dict] = []
    new_degs: list[int] = []
    new_rows: list[dict] = []
    new_lifts: list[list[NcPoly]] = []
    start = min(prev)
    for d in range(start, res.d_max + 1):
        expected = res.module_dim(n - 1, d, hilbert) - zlow.get(d, 0)
        decomp = Echelon(F)
        for z in zbasis_prev:
            for x in range(g.ngens):
                decomp.add(left_multiply(g, (x,), z))
        if decomp.rank < expected:
            if candidates is not None:
                cands = candidates(d)
            else:
                cands = _kernel_vectors(res, n - 1, d)
            for vec, lift in cands:
                ok, _, _ = decomp.add(vec)
                if ok:
                    new_degs.append(d)
                    new_rows.append(vec)
                    new_lifts.append(lift if lift is not None else vec_to_poly_row(g, vec, len(prev)))
                    if decomp.rank == expected:
                        break
        if decomp.rank != expected:
            raise RuntimeError(
                f"stage {n}, degree {d}: kernel dimension {expected} but found {decomp.rank}")
        zdims[d] = expected
        zbasis_prev = decomp.rows
    res.kernel_dims[n - 1] = zdims
    if not new_degs:
        return False
    order = sorted(range(len(new_degs)), key=lambda i: new_degs[i])
    res.modules.append([new_degs[i] for i in order])
    rows = [new_rows[i] for i in order]
    matrix = [vec_to_poly_row(g, r, len(prev)) for r in rows]
    lifts = [new_lifts[i] for i in order]
    res.steps.append(ResolutionStep(matrix, lifts, rows))
    return True


def _kernel_vectors(res: MinimalResolution, m: int, d: int):
    """Basis of ker(d_m) in degree d as (vector, None) pairs."""
    g = res.gb
    ech = Echelon(g.field)
    out = []
    for b in res.basis(m, d):
        ok, _, tag = ech.add(res.differential(m, {b: 1}), {b: 1})
        if not ok:
            out.append((tag, None))
    return out


def _first_stage(res: MinimalResolution, gens: list[NcPoly]) -> bool:
    """Q^1 from a (minimalised) list of module generators; records dim J_d."""
    g = res.gb
    F = g.field
    by_deg: dict[int, list[NcPoly]] = {}
    for p in gens:
        if p.is_zero():
            continue
        if not p.is_homogeneous():
            raise ValueError(f"module generator {p} is not homogeneous")
        if p.degree() < 1:
            raise ValueError("module generators must have positive degree")
        by_deg.setdefault(p.degree(), []).append(p)
    zdims = {0: 0}
    zbasis_prev: list[dict] = []
    degs, rows, lifts = [], [], []
    for d in range(1, res.d_max + 1):
        decomp = Echelon(F)
        for z in zbasis_prev:
            for x in range(g.ngens):
                decomp.add(left_multiply(g, (x,), z))
        for p in by_deg.get(d, []):
            vec = {(0, w): c for w, c in g.nf_terms(p.terms).items()}
            ok, _, _ = decomp.add(vec)
            if ok:
                degs.append(d)
                rows.append(vec)
                lifts.append([NcPoly._raw(g.alphabet, F, {w: c for (_, w), c in vec.items()})])
        zdims[d] = decomp.rank
        zbasis_prev = decomp.rows
    res.kernel_dims[0] = zdims
    if not degs:
        return False
    res.modules.append(degs)
    matrix = [[NcPoly._raw(g.alphabet, F, {w: c for (_, w), c in r.items()})] for r in rows]
    res.steps.append(ResolutionStep(matrix, lifts, rows))
    return True


def _relation_candidates(res: MinimalResolution):
    """Kernel candidates for Q^2 taken from the relations, split by last letter."""
    g = res.gb
    P = g.presentation
    n = g.ngens
    red = g.field.reduce
    by_deg: dict[int, list] = {}
    for r in P.relations:
        parts: list[dict] = [{} for _ in range(n)]
        for w, c in r.terms.items():
            parts[w[-1]][w[:-1]] = c
        lift = [NcPoly._raw(g.alphabet, g.field, t) for t in parts]
        vec: dict = {}
        for j, t in enumerate(parts):
            for w, c in g.nf_terms(t).items():
                _accumulate(vec, (j, w), c, red)
        by_deg.setdefault(r.degree(), []).append((vec, lift))

    def candidates(d):
        return by_deg.get(d, [])

    return candidates


def _finish(res: MinimalResolution, hilbert: list[int], stopped_early: bool):
    g = res.gb
    last = len(res.modules) - 1
    if stopped_early:
        res.terminated = True
    else:
        # arithmetic kernel of the last differential through d_max
        zlow = res.kernel_dims.get(last - 1, {})
        zd = {d: res.module_dim(last, d, hilbert) - zlow.get(d, 0) for d in range(res.d_max + 1)}
        res.kernel_dims[last] = zd
        res.terminated = all(v == 0 for v in zd.values())
    if res.terminated and g.is_complete:
        ell = max(g.max_leading_length(), 1)
        # generators of Q^m lie in degrees <= 1 + (m-1)(ell-1) (chain bound);
        # the first vanishing module is Q^{last+1}
        m = last + 1
        res.termination_certified = res.d_max >= 1 + (m - 1) * (ell - 1)


def _resolve(g: TruncatedGB, gens: list[NcPoly], n_max: int, d_max: int, kind: str) -> MinimalResolution:
    if not g.is_complete and d_max > g.confluent_through:
        raise ValueError(
            f"d_max = {d_max} exceeds the Groebner basis bound {g.confluent_through}")
    maxrel = g.presentation.max_degree()
    if kind == "trivial" and g.presentation.relations and d_max < maxrel:
        raise ValueError(f"d_max = {d_max} is below the maximal relation degree {maxrel}")
    hilbert = g.automaton().count_avoiding(d_max)
    res = MinimalResolution(g, [[0]], [None], d_max, n_max, kind=kind)
    if n_max < 1:
        _finish(res, hilbert, False)
        return res
    if not _first_stage(res, gens):
        _finish(res, hilbert, True)
        return res
    for n in range(2, n_max + 1):
        cands = _relation_candidates(res) if (kind == "trivial" and n == 2) else None
        if not _stage(res, n, hilbert, cands):
            _finish(res, hilbert, True)
            return res
    _finish(res, hilbert, False)
    return res


def resolve_trivial(g: TruncatedGB, n_max: int, d_max: int) -> MinimalResolution:
    """Minimal resolution of the trivial module K through (n_max, d_max)."""
    return _resolve(g, g.presentation.gens(), n_max, d_max, "trivial")


def resolve_cyclic(g: TruncatedGB, module_ideal_gens: list[NcPoly], n_max: int, d_max: int) -> MinimalResolution:
    """Minimal resolution of W = A / (A g_1 + ... + A g_k)."""
    return _resolve(g, list(module_ideal_gens), n_max, d_max, "cyclic")


def from_matrices(g: TruncatedGB, matrices: list[list[list[NcPoly]]], d_max: int,
                  kind: str = "trivial") -> MinimalResolution:
    """Wrap user-supplied matrices M_1, M_2, ... (rows over A) as a resolution."""
    modules = [[0]]
    steps = [None]
    for M in matrices:
        prev = modules[-1]
        degs = []
        for i, row in enumerate(M):
            if len(row) != len(prev):
                raise ValueError(f"row {i} has {len(row)} entries, expected {len(prev)}")
            deg = None
            for j, p in enumerate(row):
                if p.is_zero():
                    continue
                if not p.is_homogeneous():
                    raise ValueError(f"entry ({i},{j}) is not homogeneous")
                dj = p.degree() + prev[j]
                if deg is not None and dj != deg:
                    raise ValueError(f"row {i} is not homogeneous")
                deg = dj
            if deg is None:
                raise ValueError(f"row {i} is zero")
            degs.append(deg)
        rows = [poly_row_to_vec(g, row) for row in M]
        matrix = [vec_to_poly_row(g, r, len(prev)) for r in rows]
        modules.append(degs)
        steps.append(ResolutionStep(matrix, [list(row) for row in M], rows))
    return MinimalResolution(g, modules, steps, d_max, len(matrices), kind=kind)


# ---------------------------------------------------------------------------
# checks and derived data


def betti_table(res: MinimalResolution) -> list[tuple[int, int, int]]:
    """(n, m, dim E^{n,m}) for every nonzero entry computed."""
    out = []
    for n, degs in enumerate(res.modules):
        counts: dict[int, int] = {}
        for d in degs:
            counts[d] = counts.get(d, 0) + 1
        out.extend((n, m, c) for m, c in sorted(counts.items()))
    return out


def _rank_in_degree(res: MinimalResolution, n: int, d: int) -> int:
    ech = Echelon(res.gb.field)
    for b in res.basis(n, d):
        ech.add(res.differential(n, {b: 1}))
    return ech.rank


def verify(res: MinimalResolution, g: TruncatedGB | None = None) -> dict:
    """Independent rank-based certification of a computed resolution.

    Checks (a) d_{n} d_{n+1} = 0, (b) exactness in every internal degree
    through d_max, (c) minimality (no degree-0 entries), (d) the lifts reduce
    to the matrices.  Returns ``{"d2zero", "exact", "minimal", "lifts",
    "problems": [...]}``.
    """
    g = g or res.gb
    problems = []
    F = g.field
    d2zero = True
    for n in range(2, len(res.modules)):
        for i, row in enumerate(res.rows(n)):
            if res.differential(n - 1, row):
                d2zero = False
                problems.append(f"row {i} of M_{n} times M_{n - 1} is nonzero")
    minimal = True
    lifts_ok = True
    for n in range(1, len(res.modules)):
        degs, prev = res.modules[n], res.modules[n - 1]
        step = res.steps[n]
        for i in range(len(degs)):
            for j in range(len(prev)):
                a = step.matrix_over_A[i][j]
                h = step.lift_over_T[i][j]
                want = degs[i] - prev[j]
                if not a.is_zero():
                    if a.degrees() != {want}:
                        minimal = False
                        problems.append(f"M_{n}[{i}][{j}] has the wrong degree")
                    if want <= 0:
                        minimal = False
                        problems.append(f"M_{n}[{i}][{j}] has degree {want} <= 0")
                if not h.is_zero() and h.degrees() != {want}:
                    lifts_ok = False
                    problems.append(f"lift of M_{n}[{i}][{j}] is not homogeneous of degree {want}")
                if g.normal_form(h) != a:
                    lifts_ok = False
                    problems.append(f"lift of M_{n}[{i}][{j}] does not reduce to the matrix entry")
    exact = True
    last = len(res.modules) - 1
    for d in range(res.d_max + 1):
        # degree 0 end: the image of d_1 must be the module ideal
        ranks = [None] + [_rank_in_degree(res, n, d) for n in range(1, last + 1)]
        if res.kind == "trivial":
            want = len(g.normal_words(d)) if d > 0 else 0
            if ranks[1] is not None and last >= 1 and ranks[1] != want:
                exact = False
                problems.append(f"image of d_1 in degree {d} has dim {ranks[1]}, expected {want}")
        for n in range(1, last):
            kernel = len(res.basis(n, d)) - ranks[n]
            if kernel != ranks[n + 1]:
                exact = False
                problems.append(f"homology at Q^{n} in degree {d}: ker {kernel}, im {ranks[n + 1]}")
        if res.terminated and last >= 1:
            kernel = len(res.basis(last, d)) - ranks[last]
            if kernel:
                exact = False
                problems.append(f"last differential has a kernel in degree {d}")
    return {"d2zero": d2zero, "exact": exact, "minimal": minimal, "lifts": lifts_ok,
            "problems": problems}


def euler_check(res: MinimalResolution) -> bool:
    """sum_n (-1)^n P_{Q^n}(t) H_A(t) == 1 through the degrees fully determined."""
    g = res.gb
    if res.kind != "trivial":
        raise ValueError("the Euler identity check applies to the trivial module")
    top = res.d_max
    if not res.terminated:
        top = min(top, min(res.modules[-1]))
    h = g.automaton().count_avoiding(top)
    for d in range(top + 1):
        total = 0
        for n, degs in enumerate(res.modules):
            total += (-1) ** n * sum(h[d - m] for m in degs if m <= d)
        if total != (1 if d == 0 else 0):
            return False
    return True


# ---------------------------------------------------------------------------
# change of basis


def random_basis_change(res: MinimalResolution, n: int, rng: random.Random) -> list[list[NcPoly]]:
    """A random homogeneous automorphism P of Q^n: invertible degree-0 mixing of
    same-degree generators plus random positive-degree corrections."""
    g = res.gb
    F = g.field
    degs = res.modules[n]
    t = len(degs)
    P = [[NcPoly.zero(g.alphabet, F) for _ in range(t)] for _ in range(t)]
    groups: dict[int, list[int]] = {}
    for i, d in enumerate(degs):
        groups.setdefault(d, []).append(i)
    for idx in groups.values():
        # unit lower-triangular times unit upper-triangular: always invertible
        k = len(idx)
        L = [[F.one if a == b else (F.random(rng) if a > b else F.zero) for b in range(k)] for a in range(k)]
        U = [[F.one if a == b else (F.random(rng) if a < b else F.zero) for b in range(k)] for a in range(k)]
        for a in range(k):
            for b in range(k):
                c = F.reduce(sum(L[a][m] * U[m][b] for m in range(k)))
                if c:
                    P[idx[a]][idx[b]] = NcPoly._raw(g.alphabet, F, {(): c})
    for i in range(t):
        for j in range(t):
            e = degs[i] - degs[j]
            if e > 0 and e + degs[j] <= res.d_max:
                words = g.normal_words(e)
                terms = {}
                for w in rng.sample(words, min(2, len(words))):
                    c = F.random(rng)
                    if c:
                        terms[w] = c
                P[i][j] = NcPoly._raw(g.alphabet, F, terms)
    return P


def _mat_mul_A(g: TruncatedGB, X: list[list[NcPoly]], Y: list[list[NcPoly]]) -> list[list[NcPoly]]:
    out = []
    for row in X:
        new = []
        for j in range(len(Y[0]) if Y else 0):
            acc = NcPoly.zero(g.alphabet, g.field)
            for k, a in enumerate(row):
                if a.terms and Y[k][j].terms:
                    acc = acc + a * Y[k][j]
            new.append(g.normal_form(acc))
        out.append(new)
    return out


def _mat_mul_T(X, Y, alphabet, field):
    out = []
    for row in X:
        new = []
        for j in range(len(Y[0]) if Y else 0):
            acc = NcPoly.zero(alphabet, field)
            for k, a in enumerate(row):
                if a.terms and Y[k][j].terms:
                    acc = acc + a * Y[k][j]
            new.append(acc)
        out.append(new)
    return out


def invert_homogeneous(g: TruncatedGB, P: list[list[NcPoly]], degs: list[int], d_max: int):
    """Inverse over A of a homogeneous automorphism P = P0 + P+ (Neumann series)."""
    from .exactlin import KMatrix, inverse

    F = g.field
    t = len(P)
    P0 = KMatrix(F, t, t, [{j: P[i][j].coefficient(()) for j in range(t) if P[i][j].coefficient(())}
                           for i in range(t)])
    inv0 = inverse(P0)
    inv0_poly = [[NcPoly._raw(g.alphabet, F, {(): v} if (v := inv0.row(i).get(j)) else {})
                  for j in range(t)] for i in range(t)]
    Pplus = [[P[i][j].homogeneous_component(degs[i] - degs[j]) if degs[i] > degs[j]
              else NcPoly.zero(g.alphabet, F) for j in range(t)] for i in range(t)]
    N = _mat_mul_A(g, inv0_poly, Pplus)
    span = max(degs) - min(degs) if degs else 0
    total = [[NcPoly.one(g.alphabet, F) if i == j else NcPoly.zero(g.alphabet, F) for j in range(t)]
             for i in range(t)]
    power = total
    for _ in range(span):
        power = _mat_mul_A(g, power, N)
        power = [[-p for p in row] for row in power]
        total = [[total[i][j] + power[i][j] for j in range(t)] for i in range(t)]
    return _mat_mul_A(g, total, inv0_poly)


def change_basis(res: MinimalResolution, n: int, P: list[list[NcPoly]]) -> MinimalResolution:
    """New resolution with basis e'_i = sum_j P[i][j] e_j of Q^n."""
    g = res.gb
    F = g.field
    degs = res.modules[n]
    Pinv = invert_homogeneous(g, P, degs, res.d_max)
    steps = list(res.steps)
    s = res.steps[n]
    newM = _mat_mul_A(g, P, s.matrix_over_A)
    newL = _mat_mul_T(P, s.lift_over_T, g.alphabet, F)
    steps[n] = ResolutionStep(newM, newL, [poly_row_to_vec(g, r) for r in newM])
    if n + 1 < len(res.modules):
        s2 = res.steps[n + 1]
        newM2 = _mat_mul_A(g, s2.matrix_over_A, Pinv)
        newL2 = _mat_mul_T(s2.lift_over_T, Pinv, g.alphabet, F)
        steps[n + 1] = ResolutionStep(newM2, newL2, [poly_row_to_vec(g, r) for r in newM2])
    out = MinimalResolution(g, [list(m) for m in res.modules], steps, res.d_max, res.n_max,
                            res.terminated, res.termination_certified, res.kind,
                            dict(res.kernel_dims))
    return out
