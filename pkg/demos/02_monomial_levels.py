"""The combinatorial test for monomial algebras, compared with the general engine."""

from k2forge import catalog
from k2forge.gbasis import complete
from k2forge.k2core import k2_check
from k2forge.monomial import MonomialAlgebra, l_set, level_sets, monomial_k2_check
from k2forge.resolution import resolve_trivial

for name in ("monomial_k2", "monomial_levels"):
    A = MonomialAlgebra.from_presentation(catalog.presentation(name))
    print(f"== {name}: R = {{{', '.join(A.fmt(r) for r in A.R)}}}")
    for gen in A.alphabet.names:
        w = A.alphabet.word(gen)
        print(f"   L({gen}) = {[A.fmt(a) for a in l_set(w, A)]}")
    ls = level_sets(A)
    for i, level in enumerate(ls.as_words(), start=1):
        print(f"   S_{i} = {level}")
    v = monomial_k2_check(A)
    if v.is_k2:
        print("   combinatorial verdict: K2")
    else:
        b, a = v.witness
        print(f"   combinatorial verdict: not K2, first failure at level {v.failure_level}: "
              f"b = {A.fmt(b)}, a = {A.fmt(a)} (|a| > 1 and ab is not a relation)")

    g = complete(A.presentation(), 8)
    rep = k2_check(resolve_trivial(g, 5, 8), g)
    print(f"   general engine: {rep.verdict} ({rep.semantics}), failing n = {rep.failing_n}")
