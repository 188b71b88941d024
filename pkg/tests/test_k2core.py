import pytest

from k2forge import catalog
from k2forge.gbasis import complete
from k2forge.k2core import (
    K2_CONCLUSIVE,
    K2_UP_TO_BOUND,
    NOT_K2,
    cup_criterion,
    cup_product,
    delta,
    k2_check,
    k2_module_check,
    le_matrix,
    low_degree_generation_dims,
    n_koszul_check,
)
from k2forge.resolution import from_matrices, resolve_cyclic

from conftest import corpus_resolution


def test_small_algebra_rank_matrix():
    g, res = corpus_resolution("small_not_k2", 4, 10)
    m = le_matrix(res, g, 3)
    assert m.rows == 5
    assert m.zero_rows() == [1]
    assert m.rank() == 4
    assert m.row_degrees == [3, 4, 4, 4, 4]
    assert len([c for c in m.columns if c[0] == "L"]) == 6
    assert len([c for c in m.columns if c[0] == "E"]) == 6


def test_small_algebra_not_k2_at_three():
    g, res = corpus_resolution("small_not_k2", 4, 10)
    rep = k2_check(res, g)
    assert rep.verdict == NOT_K2
    assert rep.failing_n == 3
    assert rep.semantics == "conclusive"
    dep = rep.witness[1]
    assert dep == [0, 1, 0, 0, 0]


def test_small_algebra_ext_dimensions():
    g, res = corpus_resolution("small_not_k2", 4, 10)
    assert res.degrees(3).count(4) == 4
    assert low_degree_generation_dims(res, g, 3)[4] == 3


def test_central_cube_conclusive():
    g, res = corpus_resolution("central_cube", 6, 10)
    rep = k2_check(res, g)
    assert rep.verdict == K2_CONCLUSIVE
    assert rep.is_k2 is True


def test_quadratic_non_koszul():
    g, res = corpus_resolution("quadratic_not_koszul", 4, 7)
    assert res.degrees(3).count(4) >= 1
    assert k2_check(res, g).verdict == NOT_K2


def test_up_to_bound_semantics():
    g, res = corpus_resolution("ci_cubic", 4, 8)
    rep = k2_check(res, g)
    assert rep.verdict == K2_UP_TO_BOUND
    assert rep.semantics == "through (n_max=4, d_max=8)"
    assert rep.is_k2 is None


def test_monomial_quotient_paper_matrices_have_zero_first_row():
    B = catalog.presentation("central_line_quotient")
    g = complete(B, 8)
    zero = B.poly("0")
    M1 = [[B.poly(s)] for s in "xyzw"]
    M2 = [[zero, zero, B.poly("y^2"), zero], [B.poly("z*x"), zero, zero, zero],
          [zero, zero, zero, B.poly("y^2*w")]]
    M3 = [[zero, B.poly("y^2"), zero]]
    res = from_matrices(g, [M1, M2, M3], 8)
    m = le_matrix(res, g, 3)
    assert m.zero_rows() == [0]
    assert k2_check(res, g).verdict == NOT_K2


def test_delta_function():
    assert [delta(3, n) for n in range(6)] == [0, 1, 3, 4, 6, 7]
    assert [delta(2, n) for n in range(5)] == [0, 1, 2, 3, 4]


def test_cubic_is_three_koszul():
    g, res = corpus_resolution("cubic_one_var", 5, 10)
    out = n_koszul_check(res, g, 3)
    assert out["n_koszul"] and out["pure"] and out["homogeneous"]


def test_non_pure_algebra_is_not_n_koszul():
    g, res = corpus_resolution("quadratic_not_koszul", 4, 7)
    assert not n_koszul_check(res, g, 2)["n_koszul"]


def test_cup_products_on_the_plane():
    # E(K[x,y]) is an exterior algebra: e1 * e2 = -(e2 * e1) spans E^2
    g, res = corpus_resolution("polynomial_plane", 3, 6)
    a = cup_product(res, g, (0, 1), (1, 1))
    b = cup_product(res, g, (1, 1), (0, 1))
    F = g.field
    assert set(a) == set(b) == {0}
    assert F.reduce(a[0] + b[0]) == 0
    assert cup_product(res, g, (0, 1), (0, 1)) == {}


@pytest.mark.parametrize("name, n_max, d_max", [("small_not_k2", 4, 8), ("central_cube", 4, 10),
                                                ("quadratic_not_koszul", 4, 7), ("ci_squares", 4, 6),
                                                ("ore_base", 4, 8), ("central_cube_quotient", 4, 10)])
def test_rank_and_cup_criteria_agree(name, n_max, d_max):
    g, res = corpus_resolution(name, n_max, d_max)
    rank_ok = k2_check(res, g).verdict != NOT_K2
    assert cup_criterion(res, g)["generated"] == rank_ok


def test_module_check_on_plane_quotient():
    P = catalog.presentation("polynomial_plane")
    g = complete(P, 6)
    res = resolve_cyclic(g, [P.poly("y")], 4, 6)
    # y is regular, so 0 -> A(-1) -> A -> A/Ay -> 0 is the whole resolution
    assert k2_module_check(res, g).verdict == K2_CONCLUSIVE


def test_thread_count_does_not_change_verdicts(monkeypatch):
    g, res = corpus_resolution("small_not_k2", 5, 8)
    monkeypatch.setenv("K2FORGE_THREADS", "1")
    one = k2_check(res, g)
    monkeypatch.setenv("K2FORGE_THREADS", "4")
    four = k2_check(res, g)
    assert one.verdict == four.verdict and one.ranks == four.ranks and one.witness == four.witness
