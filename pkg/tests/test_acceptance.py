"""Acceptance suite: ten end-to-end criteria, each reported as one PASS/FAIL line.

Every criterion computes its facts first, records the line, then asserts.  Two
criteria describe behaviour that the exact computation contradicts; they are
kept verbatim and marked as strict expected failures (see the decision ledger).
"""

import random

import pytest

from k2forge import catalog
from k2forge.constructors import (
    commutative_complete_intersection,
    ore_extension,
    quotient_by_normal,
    tensor_product,
    twist,
)
from k2forge.freealg import Presentation, is_factor
from k2forge.gbasis import complete
from k2forge.k2core import (
    K2_CONCLUSIVE,
    NOT_K2,
    cup_criterion,
    k2_check,
    k2_module_check,
    le_matrix,
    low_degree_generation_dims,
    n_koszul_check,
)
from k2forge.monomial import MonomialAlgebra, level_sets, monomial_k2_check, monomial_resolution
from k2forge.resolution import (
    change_basis,
    euler_check,
    random_basis_change,
    resolve_cyclic,
    resolve_trivial,
    verify,
)

from conftest import corpus_resolution, record_criterion


def general_verdict(P, n_max, d_max):
    g = complete(P, d_max)
    return k2_check(resolve_trivial(g, n_max, d_max), g)


def test_criterion_1_small_algebra_end_to_end():
    g, res = corpus_resolution("small_not_k2", 4, 10)
    rep = k2_check(res, g)
    checks = [
        ("Hilbert prefix (1,2,2,0)", g.hilbert_prefix(3) == [1, 2, 2, 0]),
        ("Q1 degrees (1,1)", res.degrees(1) == [1, 1]),
        ("Q2 degrees (2,2,3)", res.degrees(2) == [2, 2, 3]),
        ("Q3 degrees (3,4,4,4,4)", res.degrees(3) == [3, 4, 4, 4, 4]),
        ("not_K2 with witness at n=3", rep.verdict == NOT_K2 and rep.failing_n == 3),
        ("dim E^{3,4} = 4", res.degrees(3).count(4) == 4),
        ("dim (U3+V3)_4 = 3", low_degree_generation_dims(res, g, 3).get(4) == 3),
    ]
    ok, detail = record_criterion(1, checks)
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="the stated failure witness contradicts the level-set "
                                       "definition: the first failure is at level 2 (ledger)")
def test_criterion_2_monomial_level_sets():
    A = MonomialAlgebra.from_presentation(catalog.presentation("monomial_levels"))
    w = A.alphabet.word
    ls = level_sets(A)
    expected = [["w", "x", "y", "z"], ["zzy", "yyyx", "xx", "zyyy"], ["yyy"], ["zz"]]
    levels_ok = all(set(ls.level(i + 1)) == {w(s) for s in level} for i, level in enumerate(expected))
    checks = [
        ("S1..S4 exact", levels_ok),
        ("S5 empty", ls.level(5) == []),
        ("failure at level 3 with witness (z^2, y^3)",
         ls.failure is not None and ls.failure[0] == 3 and ls.failure[1:] == (w("zz"), w("yyy"))),
    ]
    ok, detail = record_criterion(2, checks)
    if ls.failure is not None:
        level, b, a = ls.failure
        print(f"  computed first failure: level {level}, b={A.fmt(b)}, a={A.fmt(a)}")
    assert ok, detail


def test_criterion_3_monomial_k2():
    A = MonomialAlgebra.from_presentation(catalog.presentation("monomial_k2"))
    w = A.alphabet.word
    v = monomial_k2_check(A)
    checks = [
        ("verdict K2", v.is_k2),
        ("S2 = {x^3, yx^2}", set(v.levels.level(2)) == {w("xxx"), w("yxx")}),
        ("S3 empty", v.levels.level(3) == []),
    ]
    ok, detail = record_criterion(3, checks)
    assert ok, detail


def test_criterion_4_central_cube_and_quotient():
    g, res = corpus_resolution("central_cube", 6, 10)
    rep = k2_check(res, g)
    quot = quotient_by_normal(catalog.presentation("central_cube"), "y^3", bound=10)
    gb_b = complete(quot.presentation, 10)
    res_b = resolve_trivial(gb_b, 4, 10)
    rep_b = k2_check(res_b, gb_b)
    witness_degrees = set()
    if rep_b.witness is not None:
        n, vec = rep_b.witness
        rows = rep_b.witness_matrix.row_degrees
        witness_degrees = {rows[i] for i, c in enumerate(vec) if c}
    checks = [
        ("A conclusively K2", rep.verdict == K2_CONCLUSIVE),
        ("degrees (-5; -3,-4; -1,-1)", res.modules == [[0], [1, 1], [3, 4], [5]]),
        ("terminated", res.terminated),
        ("y^3 normal", quot.normal),
        ("y^3 regular through d_max=10", quot.regular and quot.bound >= 10),
        ("B not_K2", rep_b.verdict == NOT_K2 and rep_b.failing_n == 3),
        ("witness class in E^{3,5}(B)", witness_degrees == {5} and 5 in res_b.degrees(3)),
    ]
    ok, detail = record_criterion(4, checks)
    assert ok, detail


def test_criterion_5_central_line():
    B = catalog.presentation("central_line_quotient")
    mono = monomial_k2_check(B)
    general_b = general_verdict(B, 4, 8)
    quot = quotient_by_normal(catalog.presentation("central_line"), "g", bound=8)
    g, res = corpus_resolution("central_line", 4, 8)
    rep_a = k2_check(res, g)
    checks = [
        ("B not_K2 (monomial engine)", not mono.is_k2),
        ("B not_K2 (general engine)", general_b.verdict == NOT_K2),
        ("g normal and regular through d_max=8", quot.normal and quot.regular and quot.bound >= 8),
        ("H_A = H_B/(1-t) through d_max=8", quot.hilbert_consistent),
        ("quotient relations match B",
         sorted(map(str, quot.presentation.relations)) == sorted(map(str, B.relations))),
        ("A passes k2_check through n_max=4", rep_a.verdict != NOT_K2 and res.n_max >= 4),
    ]
    ok, detail = record_criterion(5, checks)
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="the displayed periodic resolution is not exact: "
                                       "ann(z) in degree 4 is 4-dimensional (ledger)")
def test_criterion_6_periodic_module():
    P = catalog.presentation("periodic_module")
    g = complete(P, 10)
    res_w = resolve_cyclic(g, [P.poly(m) for m in catalog.MODULE_GENERATORS["periodic_module"]], 4, 10)
    z, x3 = P.poly("z"), P.poly("x^3")
    maps = [res_w.matrix(n) for n in range(1, min(res_w.length, 4) + 1)]
    alternating = len(maps) == 4 and all(
        len(M) == 1 and len(M[0]) == 1 and M[0][0] == (z if n % 2 == 0 else x3) for n, M in enumerate(maps))
    mod_rep = k2_module_check(res_w, g)
    alg_rep = general_verdict(P, 4, 10)
    checks = [
        ("periodic degrees (0;1;4;5;8)", res_w.modules[:5] == [[0], [1], [4], [5], [8]]),
        ("maps alternate (z), (x^3)", alternating),
        ("k2_module_check passes", mod_rep.verdict != NOT_K2),
        ("A passes k2_check", alg_rep.verdict != NOT_K2),
    ]
    ok, detail = record_criterion(6, checks)
    print(f"  computed module degrees: {res_w.modules}")
    print(f"  module verdict {mod_rep.verdict} at n={mod_rep.failing_n}; "
          f"algebra verdict {alg_rep.verdict} at n={alg_rep.failing_n}")
    assert ok, detail


def test_criterion_7_quadratic_not_koszul():
    g, res = corpus_resolution("quadratic_not_koszul", 4, 7)
    rep = k2_check(res, g)
    checks = [
        ("dim E^{3,4} >= 1", res.degrees(3).count(4) >= 1),
        ("not_K2", rep.verdict == NOT_K2),
    ]
    ok, detail = record_criterion(7, checks)
    assert ok, detail


def random_monomial_algebra(rng):
    k = rng.randint(1, 3)
    words = {tuple(rng.randrange(k) for _ in range(rng.randint(2, 4))) for _ in range(rng.randint(1, 4))}
    words = [w for w in words if not any(u != w and is_factor(u, w) for u in words)]
    return MonomialAlgebra(list("xyz"[:k]), words)


def witness_generator_degree(A, level, b, a):
    """Internal degree of the generator of Q^{level+1} whose entry a sits over an entry b."""
    res = monomial_resolution(A, level + 1)
    if res.length < level + 1:
        return None
    prev = [next(iter(p.terms)) for row in res.matrix(level) for p in row if p.terms]
    degrees = [res.modules[level + 1][i]
               for i, row in enumerate(res.matrix(level + 1))
               for j, p in enumerate(row)
               if p.terms and next(iter(p.terms)) == a and prev[j] == b]
    return min(degrees) if degrees else None


@pytest.mark.slow
def test_criterion_8_monomial_engine_matches_general_engine():
    n_max, d_max = 6, 10
    rng = random.Random(8)
    compared = skipped = 0
    disagreements = []
    for _ in range(200):
        A = random_monomial_algebra(rng)
        mono = monomial_k2_check(A)
        rep = general_verdict(A.presentation(), n_max, d_max)
        if mono.is_k2:
            agree = rep.verdict != NOT_K2
        elif rep.verdict == NOT_K2:
            agree = rep.failing_n == mono.failure_level + 1
        elif rep.verdict == K2_CONCLUSIVE:
            agree = False
        else:
            degree = witness_generator_degree(A, mono.failure_level, *mono.witness)
            if mono.failure_level + 1 > n_max or degree is None or degree > d_max:
                skipped += 1
                continue
            agree = False
        compared += 1
        if not agree:
            disagreements.append((A.R, mono.failure_level, rep.verdict, rep.failing_n))
    checks = [
        (f"{compared} compared, {skipped} beyond bounds", compared + skipped == 200),
        (f"disagreements = {len(disagreements)}", not disagreements),
    ]
    ok, detail = record_criterion(8, checks)
    assert ok, disagreements[:5]


PROPERTY_BOUNDS = {
    "small_not_k2": (4, 8), "monomial_levels": (5, 7), "monomial_k2": (5, 8), "central_cube": (5, 10),
    "central_cube_quotient": (4, 9), "central_line": (4, 6), "central_line_quotient": (4, 8),
    "periodic_module": (4, 8), "ore_base": (5, 9), "quadratic_not_koszul": (4, 7),
    "cubic_one_var": (6, 10), "polynomial_plane": (4, 8), "ci_cubic": (4, 8), "ci_squares": (4, 8),
}


def le_ranks(res, g):
    return {n: le_matrix(res, g, n).rank() for n in range(1, res.length + 1)}


@pytest.mark.slow
def test_criterion_9_property_suite():
    assert set(PROPERTY_BOUNDS) == set(catalog.names())
    problems = []
    for name in catalog.names():
        n_max, d_max = PROPERTY_BOUNDS[name]
        g, res = corpus_resolution(name, n_max, d_max)
        report = verify(res, g)
        if report["problems"]:
            problems.append(f"{name}: {report['problems'][:2]}")
        if not euler_check(res):
            problems.append(f"{name}: Euler identity")
        base = le_ranks(res, g)
        rng = random.Random(name)
        for _ in range(20):
            n = rng.randint(1, res.length)
            changed = change_basis(res, n, random_basis_change(res, n, rng))
            if verify(changed, g)["problems"]:
                problems.append(f"{name}: basis change at n={n} broke the complex")
            if le_ranks(changed, g) != base:
                problems.append(f"{name}: rank changed under basis change at n={n}")
        rank_ok = k2_check(res, g).verdict != NOT_K2
        if cup_criterion(res, g)["generated"] != rank_ok:
            problems.append(f"{name}: rank and cup criteria disagree")
    checks = [(f"{len(PROPERTY_BOUNDS)} corpus algebras, 20 basis changes each, "
               f"{len(problems)} problems", not problems)]
    ok, detail = record_criterion(9, checks)
    assert ok, problems


def test_criterion_10_closure_spot_suite():
    monomial_k2 = catalog.presentation("monomial_k2")
    ore = ore_extension(monomial_k2, z_name="t")
    cubic = catalog.presentation("cubic_one_var")
    square = Presentation.parse("y", ["y^2"], name="square")
    renamed = Presentation.parse("u v", ["u^2 - u*v", "v*u", "v^3"], name="renamed")
    dual = Presentation.parse("x", ["x^2"], name="dual")
    cube = catalog.presentation("central_cube")
    levels = catalog.presentation("monomial_levels")
    _, res_cubic = corpus_resolution("cubic_one_var", 6, 10)
    koszul = n_koszul_check(res_cubic, res_cubic.gb, 3)
    checks = [
        ("Ore extension of the monomial K2 algebra is K2",
         general_verdict(ore, 5, 8).verdict != NOT_K2),
        ("tensor of two monomial K2 algebras is K2",
         general_verdict(tensor_product(cubic, square), 5, 10).verdict != NOT_K2),
        ("tensor with the small non-K2 algebra is not K2",
         general_verdict(tensor_product(dual, renamed), 4, 8).verdict == NOT_K2),
        ("scaling twist keeps a conclusive K2 verdict",
         general_verdict(twist(cube, {"x": "x", "y": "-y"}), 5, 10).verdict == K2_CONCLUSIVE),
        ("scaling twist keeps a not_K2 verdict",
         general_verdict(twist(levels, {"w": "w", "x": "2*x", "y": "y", "z": "3*z"}), 5, 7).verdict
         == NOT_K2),
        ("K[x,y]/(x^3+y^3) is K2",
         general_verdict(commutative_complete_intersection(["x", "y"], ["x^3 + y^3"]), 5, 9).verdict
         != NOT_K2),
        ("K[x,y]/(x^2,y^2) is K2",
         general_verdict(commutative_complete_intersection(["x", "y"], ["x^2", "y^2"]), 5, 8).verdict
         != NOT_K2),
        ("<x|x^3> is 3-Koszul with pure degrees", koszul["n_koszul"] and koszul["pure"]),
    ]
    ok, detail = record_criterion(10, checks)
    assert ok, detail
