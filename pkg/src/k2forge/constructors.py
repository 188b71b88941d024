"""Presentation-level constructions: Ore extensions, twisted tensor products,
twists, quotients by normal elements and commutative complete intersections.

Automorphisms are given by the images of the generators, each a linear form
(a degree-1 polynomial); they act on words letter by letter.  Derivations
are given by degree-2 images of the generators and extended by the twisted
Leibniz rule ``delta(ab) = delta(a) sigma(b) + a delta(b)``.

Every construction validates its hypotheses on the defining relations
(exactly) and cross-checks the expected Hilbert series through a stated
degree bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .exactlin import Echelon, KMatrix, inverse, rank
from .freealg import Alphabet, NcPoly, Presentation, Word, deglex_key
from .gbasis import complete, default_degree_bound


class ConstructionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# graded endomorphisms given on generators


class GradedEndo:
    """An algebra endomorphism of T(V) induced by a linear map on V."""

    def __init__(self, presentation: Presentation, images: Mapping[str, NcPoly | str] | Sequence):
        P = presentation
        self.presentation = P
        alpha = P.alphabet
        if isinstance(images, Mapping):
            seq = []
            for name in alpha.names:
                img = images.get(name, name)
                seq.append(img)
        else:
            seq = list(images)
        if len(seq) != len(alpha):
            raise ConstructionError("one image per generator is required")
        polys = []
        for name, img in zip(alpha.names, seq):
            p = P.poly(img) if isinstance(img, str) else img
            if p.terms and p.degrees() != {1}:
                raise ConstructionError(f"image of {name} is not a linear form")
            polys.append(p)
        self.images = polys
        n = len(alpha)
        self.matrix = KMatrix(P.field, n, n, [{w[0]: c for w, c in p.terms.items()} for p in polys])

    @classmethod
    def identity(cls, presentation: Presentation) -> "GradedEndo":
        return cls(presentation, presentation.gens())

    def is_invertible(self) -> bool:
        return rank(self.matrix) == self.matrix.nrows

    def inverse(self) -> "GradedEndo":
        if not self.is_invertible():
            raise ConstructionError("the map on generators is not invertible")
        inv = inverse(self.matrix)
        P = self.presentation
        imgs = [NcPoly(P.alphabet, P.field, {(j,): c for j, c in inv.row(i).items()})
                for i in range(inv.nrows)]
        return GradedEndo(P, imgs)

    def apply(self, p: NcPoly) -> NcPoly:
        return p.substitute(self.images)

    def power(self, k: int) -> "GradedEndo":
        base = self if k >= 0 else self.inverse()
        imgs = self.presentation.gens()
        for _ in range(abs(k)):
            imgs = [base.apply(q) for q in imgs]
        return GradedEndo(self.presentation, imgs)

    def preserves_ideal(self, gb) -> tuple[bool, NcPoly | None]:
        for r in self.presentation.relations:
            if not gb.is_zero_in_A(self.apply(r)):
                return False, r
        return True, None


def _endo(P: Presentation, spec) -> GradedEndo:
    if spec is None:
        return GradedEndo.identity(P)
    if isinstance(spec, GradedEndo):
        return spec
    return GradedEndo(P, spec)


def parse_map(text: str) -> dict[str, str]:
    """``"x->2*x, y->y"`` to ``{"x": "2*x", "y": "y"}``."""
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise ValueError(f"map entry {part!r} should look like 'x->image'")
        k, v = part.split("->", 1)
        out[k.strip()] = v.strip()
    return out


def _embed(p: NcPoly, alphabet: Alphabet, index_map: Sequence[int]) -> NcPoly:
    return NcPoly(alphabet, p.field, {tuple(index_map[g] for g in w): c for w, c in p.terms.items()})


def _hilbert(P: Presentation, bound: int) -> list[int]:
    return complete(P, max(bound, P.max_degree())).hilbert_prefix(bound)


def _series_mul(a: list[int], b: list[int], top: int) -> list[int]:
    return [sum(a[i] * b[d - i] for i in range(d + 1) if i < len(a) and d - i < len(b)) for d in range(top + 1)]


# ---------------------------------------------------------------------------
# Ore extensions


def _derivation_on_word(w: Word, delta: list[NcPoly], sigma: GradedEndo, one: NcPoly) -> NcPoly:
    out = NcPoly.zero(one.alphabet, one.field)
    for i, g in enumerate(w):
        left = one.left_mul_word(w[:i]) if i else one
        right = one
        for h in w[i + 1:]:
            right = right * sigma.images[h]
        out = out + left * delta[g] * right
    return out


def extend_derivation(P: Presentation, delta: Sequence[NcPoly], sigma: GradedEndo, p: NcPoly) -> NcPoly:
    one = NcPoly.one(P.alphabet, P.field)
    out = NcPoly.zero(P.alphabet, P.field)
    for w, c in p.terms.items():
        out = out + _derivation_on_word(w, list(delta), sigma, one).scale(c)
    return out


def ore_extension(B: Presentation, sigma=None, delta=None, z_name: str = "z",
                  bound: int | None = None, name: str | None = None) -> Presentation:
    """B[z; sigma, delta] with relations z b - sigma(b) z - delta(b) for generators b."""
    if z_name in B.alphabet.index:
        raise ConstructionError(f"generator name {z_name!r} already used")
    sig = _endo(B, sigma)
    if not sig.is_invertible():
        raise ConstructionError("sigma is not invertible on the generators")
    F = B.field
    if delta is None:
        dl = [NcPoly.zero(B.alphabet, F) for _ in range(B.ngens)]
    elif isinstance(delta, Mapping):
        dl = [B.poly(delta[n]) if isinstance(delta.get(n), str) else (delta.get(n) or NcPoly.zero(B.alphabet, F))
              for n in B.alphabet.names]
    else:
        dl = [B.poly(d) if isinstance(d, str) else d for d in delta]
    for name_, d in zip(B.alphabet.names, dl):
        if d.terms and d.degrees() != {2}:
            raise ConstructionError(f"delta({name_}) must be homogeneous of degree 2")
    bound = bound or default_degree_bound(B)
    gbB = complete(B, max(bound, B.max_degree()))
    ok, bad = sig.preserves_ideal(gbB)
    if not ok:
        raise ConstructionError(f"sigma does not preserve the ideal: sigma({bad}) is not in I")
    for r in B.relations:
        if not gbB.is_zero_in_A(extend_derivation(B, dl, sig, r)):
            raise ConstructionError(f"delta does not preserve the ideal: delta({r}) is not in I")
    alpha = Alphabet(list(B.alphabet.names) + [z_name])
    idx = list(range(B.ngens))
    z = NcPoly.monomial(alpha, F, (B.ngens,))
    rels = [_embed(r, alpha, idx) for r in B.relations]
    for i in range(B.ngens):
        b = NcPoly.monomial(alpha, F, (i,))
        rels.append(z * b - _embed(sig.images[i], alpha, idx) * z - _embed(dl[i], alpha, idx))
    # the commutation relations go first so that base relations made
    # redundant by them are the ones dropped
    rels = rels[len(B.relations):] + rels[:len(B.relations)]
    A = Presentation(alpha, minimize_relations(alpha, rels, F), F, name or f"{B.name}_ore")
    hb = _hilbert(B, bound)
    want = [sum(hb[: d + 1]) for d in range(bound + 1)]
    got = _hilbert(A, bound)
    if got != want:
        raise ConstructionError(f"Hilbert series check failed: {got} != H_B/(1-t) = {want}")
    return A


# ---------------------------------------------------------------------------
# twisted tensor products and twists


def tensor_product(B: Presentation, A: Presentation, sigma=None, bound: int | None = None,
                   name: str | None = None) -> Presentation:
    """B (x)^sigma A: generators of B then of A, a b = b sigma(a)."""
    clash = set(B.alphabet.names) & set(A.alphabet.names)
    if clash:
        raise ConstructionError(f"generator names collide: {sorted(clash)}")
    if B.field != A.field:
        raise ConstructionError("factors live over different fields")
    F = B.field
    sig = _endo(A, sigma)
    if not sig.is_invertible():
        raise ConstructionError("sigma is not invertible on the generators")
    bound = bound or max(default_degree_bound(A), default_degree_bound(B))
    ok, bad = sig.preserves_ideal(complete(A, max(bound, A.max_degree())))
    if not ok:
        raise ConstructionError(f"sigma does not preserve the ideal of A: sigma({bad}) is not in I")
    alpha = Alphabet(list(B.alphabet.names) + list(A.alphabet.names))
    nb = B.ngens
    bidx = list(range(nb))
    aidx = [nb + i for i in range(A.ngens)]
    rels = [_embed(r, alpha, bidx) for r in B.relations] + [_embed(r, alpha, aidx) for r in A.relations]
    for i in range(A.ngens):
        a = NcPoly.monomial(alpha, F, (nb + i,))
        sa = _embed(sig.images[i], alpha, aidx)
        for j in range(nb):
            b = NcPoly.monomial(alpha, F, (j,))
            rels.append(a * b - b * sa)
    T = Presentation(alpha, minimize_relations(alpha, rels, F), F, name or f"{B.name}_x_{A.name}")
    want = _series_mul(_hilbert(B, bound), _hilbert(A, bound), bound)
    got = _hilbert(T, bound)
    if got != want:
        raise ConstructionError(f"Hilbert series check failed: {got} != H_B * H_A = {want}")
    return T


def _normalise(p: NcPoly) -> NcPoly:
    if not p.terms:
        return p
    lead = p.terms[p.leading_word()]
    return p.scale(p.field.inv(lead))


def twist(A: Presentation, sigma, bound: int | None = None, name: str | None = None) -> Presentation:
    """Presentation of A^sigma (product a.b = a sigma^{|a|}(b)).

    A relation r of A is transported to psi^{-1}(r), where
    psi^{-1}(w_1 w_2 ... w_k) = w_1 sigma^{-1}(w_2) sigma^{-2}(w_3) ...
    """
    sig = _endo(A, sigma)
    if not sig.is_invertible():
        raise ConstructionError("sigma is not invertible on the generators")
    bound = bound or default_degree_bound(A)
    ok, bad = sig.preserves_ideal(complete(A, max(bound, A.max_degree())))
    if not ok:
        raise ConstructionError(f"sigma does not preserve the ideal: sigma({bad}) is not in I")
    inv_powers = {0: sig.power(0)}
    one = NcPoly.one(A.alphabet, A.field)

    def transport(w: Word) -> NcPoly:
        out = one
        for i, g in enumerate(w):
            if i not in inv_powers:
                inv_powers[i] = sig.power(-i)
            out = out * inv_powers[i].images[g]
        return out

    rels = [_normalise(r.map_words(transport)) for r in A.relations]
    return Presentation(A.alphabet, rels, A.field, name or f"{A.name}_tw")


# ---------------------------------------------------------------------------
# quotients by normal elements


@dataclass
class QuotientReport:
    presentation: Presentation | None
    normal: bool
    sigma: list | None  # images sigma(x) with x g = g sigma(x)
    normality_witness: str | None
    regular: bool | None
    regularity_witness: tuple | None  # (side, degree, kernel element)
    regular_through: int
    hilbert_consistent: bool | None
    bound: int
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.normal and self.regular and self.hilbert_consistent)


def _coords(terms: dict, index: dict) -> dict:
    return {index[w]: c for w, c in terms.items()}


def _solve_combination(F, target: dict, columns: list[dict]) -> list | None:
    """Scalars c with sum c_i columns[i] = target (sparse dict vectors)."""
    ech = Echelon(F)
    for i, col in enumerate(columns):
        ech.add(col, {i: F.one})
    res, tag = ech.reduce(target, {})
    if res:
        return None
    out = [F.zero] * len(columns)
    for i, c in tag.items():
        out[i] = F.reduce(-c)
    return out


def minimize_relations(alphabet: Alphabet, relations: Sequence[NcPoly], field, name: str = "B") -> list[NcPoly]:
    """Drop relations lying in the ideal generated by those kept before them
    (relations are visited by degree, preserving the given order within a degree)."""
    order = sorted(range(len(relations)), key=lambda i: relations[i].degree())
    kept: list[NcPoly] = []
    for i in order:
        r = relations[i]
        if r.is_zero():
            continue
        if kept:
            gb = complete(Presentation(alphabet, kept, field, name), r.degree())
            if gb.is_zero_in_A(r):
                continue
        kept.append(r)
    return kept


def quotient_by_normal(A: Presentation, g: NcPoly | str, bound: int | None = None,
                       name: str | None = None) -> QuotientReport:
    """B = A / gA together with bounded normality and regularity checks."""
    if isinstance(g, str):
        g = A.poly(g)
    if not g.is_homogeneous() or g.is_zero():
        raise ConstructionError("g must be a nonzero homogeneous element")
    d = g.degree()
    bound = bound or default_degree_bound(A)
    bound = max(bound, A.max_degree(), d + 1)
    gbA = complete(A, bound)
    F = A.field
    if gbA.is_zero_in_A(g):
        raise ConstructionError("g is zero in A")
    gn = gbA.normal_form(g)
    report = QuotientReport(None, False, None, None, None, None, 0, None, bound)
    # normality: x g = g sigma(x) and g x = tau(x) g with linear sigma, tau
    idx = gbA.normal_index(d + 1)
    gens = A.gens()
    g_right = [_coords(gbA.normal_form(gn * y).terms, idx) for y in gens]
    g_left = [_coords(gbA.normal_form(y * gn).terms, idx) for y in gens]
    sigma = []
    for x, name_ in zip(gens, A.alphabet.names):
        sol = _solve_combination(F, _coords(gbA.normal_form(x * gn).terms, idx), g_right)
        if sol is None:
            report.normality_witness = f"{name_}*g is not in g*A"
            return report
        sigma.append(NcPoly(A.alphabet, F, {(j,): c for j, c in enumerate(sol) if c}))
        if _solve_combination(F, _coords(gbA.normal_form(gn * x).terms, idx), g_left) is None:
            report.normality_witness = f"g*{name_} is not in A*g"
            return report
    report.normal = True
    report.sigma = sigma
    # regularity: a -> a g and a -> g a injective on A_e, e + d <= bound
    regular = True
    top = bound - d
    for e in range(0, top + 1):
        basis = gbA.normal_words(e)
        tidx = gbA.normal_index(e + d)
        for side in ("right", "left"):
            ech = Echelon(F)
            for w in basis:
                mono = NcPoly.monomial(A.alphabet, F, w)
                prod = mono * gn if side == "right" else gn * mono
                ok, _, tag = ech.add(_coords(gbA.normal_form(prod).terms, tidx), {w: F.one})
                if not ok:
                    regular = False
                    report.regularity_witness = (side, e, NcPoly(A.alphabet, F, tag))
                    break
            if not regular:
                break
        if not regular:
            break
        report.regular_through = e
    report.regular = regular
    # the quotient presentation
    bname = name or f"{A.name}_mod"
    if d == 1:
        lead = g.leading_word()[0]
        c = g.terms[(lead,)]
        keep = [i for i in range(A.ngens) if i != lead]
        if not keep:
            raise ConstructionError("cannot eliminate the only generator")
        alpha = Alphabet([A.alphabet.names[i] for i in keep])
        pos = {i: k for k, i in enumerate(keep)}
        inv = F.inv(c)
        images = []
        for i in range(A.ngens):
            if i == lead:
                images.append(NcPoly(alpha, F, {(pos[j],): F.reduce(-v * inv) for (j,), v in g.terms.items()
                                                if j != lead}))
            else:
                images.append(NcPoly.monomial(alpha, F, (pos[i],)))
        rels = [r.substitute(images) for r in A.relations]
        rels = minimize_relations(alpha, [_normalise(r) for r in rels if r.terms], F, bname)
        B = Presentation(alpha, rels, F, bname)
    else:
        rels = minimize_relations(A.alphabet, [g] + list(A.relations), F, bname)
        B = Presentation(A.alphabet, rels, F, bname)
    report.presentation = B
    hA = gbA.hilbert_prefix(bound)
    hB = complete(B, max(bound, B.max_degree())).hilbert_prefix(bound)
    want = [hA[e] - (hA[e - d] if e >= d else 0) for e in range(bound + 1)]
    report.hilbert_consistent = hB == want
    if regular and not report.hilbert_consistent:
        report.notes.append(f"H_B = {hB} but (1 - t^{d}) H_A = {want}")
    return report


# ---------------------------------------------------------------------------
# commutative complete intersections


def commutative_complete_intersection(variables: Sequence[str], forms: Sequence[str | NcPoly], field=None,
                                      bound: int | None = None, name: str = "CI") -> Presentation:
    """K[x_1..x_n]/(f_1..f_k) written in T(V): commutators plus symmetrised forms.

    Each word of a form is replaced by its sorted rearrangement, i.e. the
    form is read as a commutative polynomial.  The forms must be a regular
    sequence; this is checked (bounded) by successive quotients.
    """
    from .exactlin import GF

    field = field or GF()
    alpha = Alphabet(list(variables))
    base = Presentation(alpha, [], field, name)
    comm = []
    n = len(alpha)
    for i in range(n):
        for j in range(i + 1, n):
            xi = NcPoly.monomial(alpha, field, (i,))
            xj = NcPoly.monomial(alpha, field, (j,))
            comm.append(xj * xi - xi * xj)
    sym = []
    for f in forms:
        p = base.poly(f) if isinstance(f, str) else f
        if not p.is_homogeneous() or p.is_zero():
            raise ConstructionError(f"form {f} must be nonzero and homogeneous")
        if p.degree() < 2:
            raise ConstructionError(f"form {f} must have degree >= 2")
        q = NcPoly(alpha, field, {})
        for w, c in p.terms.items():
            q = q + NcPoly.monomial(alpha, field, tuple(sorted(w)), c)
        sym.append(q)
    current = Presentation(alpha, comm, field, name)
    for k, f in enumerate(sym):
        b = bound or (2 * max(current.max_degree(), f.degree()) + 2)
        rep = quotient_by_normal(current, f, bound=b, name=name)
        if not rep.normal:
            raise ConstructionError(f"form {k + 1} is not normal")  # cannot happen for commuting variables
        if not rep.regular:
            side, e, elt = rep.regularity_witness
            raise ConstructionError(f"forms are not a regular sequence: form {k + 1} kills {elt} in degree {e}")
        current = Presentation(alpha, list(current.relations) + [f], field, name)
    # keep the forms as given (symmetrised) and drop any that became redundant
    rels = minimize_relations(alpha, comm + sym, field, name)
    return Presentation(alpha, rels, field, name)
