"""A small corpus of named presentations used by tests, demos and the CLI.

Each entry is DSL text, so the same data can be written to a file and fed
to the command-line tool.
"""

from __future__ import annotations

from .dsl import AlgebraFile, parse
from .freealg import Presentation

CORPUS: dict[str, str] = {
    # Hilbert series 1 + 2t + 2t^2; fails the rank criterion at n = 3
    "small_not_k2": """
algebra small_not_k2
gens x y
rel x^2 - x*y
rel y*x
rel y^3
""",
    # monomial algebra failing the level-set criterion
    "monomial_levels": """
algebra monomial_levels
gens w x y z
rel z^2*y^2
rel y^3*x^2
rel x^2*w
rel z*y^3*x
""",
    # monomial K2 algebra with S_3 empty
    "monomial_k2": """
algebra monomial_k2
gens x y z
rel x^4
rel y*x^3
rel x^3*z
""",
    # y^3 is central and regular; the algebra is K2 with a length-3 resolution
    "central_cube": """
algebra central_cube
gens x y
rel x^2*y - y*x^2
rel x*y^3 - y^3*x
""",
    # its quotient by y^3
    "central_cube_quotient": """
algebra central_cube_quotient
gens x y
rel x^2*y - y*x^2
rel y^3
""",
    # five generators with a central degree-one element g
    "central_line": """
algebra central_line
gens x y z w g
rel y^2*z
rel z*x^2 + g*w^2
rel y^2*w^2
rel x*g - g*x
rel y*g - g*y
rel w*g - g*w
rel z*g - g*z
""",
    # the monomial quotient of central_line by g
    "central_line_quotient": """
algebra central_line_quotient
gens x y z w
rel y^2*z
rel z*x^2
rel y^2*w^2
""",
    # z commutes with x, y; the cyclic module A/Az has a periodic resolution
    "periodic_module": """
algebra periodic_module
gens x y z
rel x*z - z*x
rel y*z - z*y
rel x^3*z
rel y^4 + x*z^3
""",
    # monomial algebra failing at level 2; base of an Ore extension
    "ore_base": """
algebra ore_base
gens x y
rel x*y*x
rel x*y^2*x
rel y^3
""",
    # quadratic, not Koszul
    "quadratic_not_koszul": """
algebra quadratic_not_koszul
gens x y
rel x^2 - x*y
rel y^2
""",
    "cubic_one_var": """
algebra cubic_one_var
gens x
rel x^3
""",
    "polynomial_plane": """
algebra polynomial_plane
gens x y
rel x*y - y*x
""",
    "ci_cubic": """
algebra ci_cubic
gens x y
rel x*y - y*x
rel x^3 + y^3
""",
    "ci_squares": """
algebra ci_squares
gens x y
rel x*y - y*x
rel x^2
rel y^2
""",
}

# module generators for cyclic-module entries: W = A / (A m_1 + ...)
MODULE_GENERATORS: dict[str, list[str]] = {
    "periodic_module": ["z"],
}


def algebra_file(name: str) -> AlgebraFile:
    try:
        return parse(CORPUS[name])
    except KeyError:
        raise KeyError(f"unknown corpus algebra {name!r}; known: {sorted(CORPUS)}") from None


def presentation(name: str) -> Presentation:
    return algebra_file(name).presentation


def names() -> list[str]:
    return sorted(CORPUS)
