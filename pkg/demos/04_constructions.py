"""Ore extensions, (twisted) tensor products, twists and complete intersections."""

from k2forge import catalog
from k2forge.constructors import commutative_complete_intersection, ore_extension, tensor_product, twist
from k2forge.freealg import Presentation
from k2forge.gbasis import complete
from k2forge.k2core import k2_check, n_koszul_check
from k2forge.resolution import resolve_trivial


def show(label, P, n_max=5, d_max=8):
    g = complete(P, d_max)
    rep = k2_check(resolve_trivial(g, n_max, d_max), g)
    print(f"{label:45s} {rep.verdict:16s} {', '.join(map(str, P.relations))}")


show("monomial K2 algebra", catalog.presentation("monomial_k2"))
show("its Ore extension by t", ore_extension(catalog.presentation("monomial_k2"), z_name="t"))
show("Ore extension with delta(y) = y^2",
     ore_extension(catalog.presentation("ore_base"), None, {"x": "0", "y": "y^2"}), 4, 9)
show("<x|x^3> (x) <y|y^2>", tensor_product(catalog.presentation("cubic_one_var"),
                                           Presentation.parse("y", ["y^2"])), 5, 10)
show("<x|x^2> (x) small non-K2 algebra",
     tensor_product(Presentation.parse("x", ["x^2"]),
                    Presentation.parse("u v", ["u^2 - u*v", "v*u", "v^3"])), 4, 8)
show("twist of central_cube by y -> -y", twist(catalog.presentation("central_cube"), {"x": "x", "y": "-y"}),
     5, 10)
show("K[x,y]/(x^3 + y^3)", commutative_complete_intersection(["x", "y"], ["x^3 + y^3"]))
show("K[x,y]/(x^2, y^2)", commutative_complete_intersection(["x", "y"], ["x^2", "y^2"]))

g = complete(catalog.presentation("cubic_one_var"), 12)
res = resolve_trivial(g, 6, 12)
print("<x|x^3> generator degrees:", res.modules, "->", n_koszul_check(res, g, 3))
