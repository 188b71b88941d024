"""Walk through the full pipeline on a three-relation algebra that is not K2.

Gröbner basis -> Hilbert series -> minimal resolution -> the rank matrix
[L_n : E_n] -> verdict, with the dependency among rows as the witness.
"""

from k2forge import catalog
from k2forge.gbasis import complete
from k2forge.k2core import k2_check, le_matrix, low_degree_generation_dims
from k2forge.resolution import betti_table, resolve_trivial, verify

P = catalog.presentation("small_not_k2")
print("relations:", ", ".join(map(str, P.relations)))

g = complete(P, 10)
print("Gröbner basis complete through degree 10:", g.is_complete)
print("Hilbert series prefix:", g.hilbert_prefix(5))

res = resolve_trivial(g, 4, 10)
for n in range(1, res.length + 1):
    print(f"Q^{n} generator degrees: {res.degrees(n)}")
print("independent verification problems:", verify(res, g)["problems"])
print("betti table (n, degree, count):", betti_table(res))

m = le_matrix(res, g, 3)
print(f"[L_3 : E_3] has {m.rows} rows of degrees {m.row_degrees} and rank {m.rank()}")
print("zero rows:", m.zero_rows())

rep = k2_check(res, g)
print("verdict:", rep.verdict, "-", rep.semantics, "- failing n =", rep.failing_n)
print("dependency among rows:", rep.witness[1])

# the same failure seen through cup products: E^3 in degree 4 is bigger than
# what products of lower classes span
print("dim E^{3,4} =", res.degrees(3).count(4),
      "; span of products in degree 4 =", low_degree_generation_dims(res, g, 3)[4])
