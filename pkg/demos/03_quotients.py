"""Quotients by normal regular elements and what they do to the K2 property."""

from k2forge import catalog
from k2forge.constructors import quotient_by_normal
from k2forge.gbasis import complete
from k2forge.k2core import k2_check
from k2forge.resolution import resolve_trivial


def verdict(P, n_max, d_max):
    g = complete(P, d_max)
    res = resolve_trivial(g, n_max, d_max)
    return k2_check(res, g), res


for name, element, bound in (("central_cube", "y^3", 10), ("central_line", "g", 8)):
    A = catalog.presentation(name)
    rep_a, res_a = verdict(A, 4, bound)
    print(f"== {name}: {rep_a.verdict} ({rep_a.semantics}); modules {res_a.modules}")
    q = quotient_by_normal(A, element, bound=bound)
    print(f"   {element}: normal={q.normal} sigma={[str(s) for s in q.sigma]} "
          f"regular={q.regular} (through degree {q.regular_through}) "
          f"Hilbert identity={q.hilbert_consistent}")
    B = q.presentation
    print("   quotient relations:", ", ".join(map(str, B.relations)))
    rep_b, res_b = verdict(B, 4, bound)
    print(f"   quotient: {rep_b.verdict} at n = {rep_b.failing_n}; Q^3 degrees {res_b.degrees(3)}")
