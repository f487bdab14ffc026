"""
Tests for search: the exhaustive product-table search.
"""
import pytest

from services.solver.src.search import product_table, search
from services.solver.src.sequences import k_range, term, terms


def _naive(pair, k_max, n_max):
    u, v = terms(pair.U, k_max), terms(pair.V, n_max)
    return [
        (k, m, n)
        for k in range(1, k_max + 1)
        for m in range(1, n_max + 1)
        for n in range(m, n_max + 1)
        if u[k] == v[m] * v[n]
    ]


class TestSearch:
    def test_fpp_solutions(self, fpp_pair):
        solutions = search(fpp_pair, 400, 100)
        assert sorted({s.k for s in solutions}) == [1, 2, 3, 5, 12]
        triples = [(s.k, s.m, s.n) for s in solutions]
        assert triples == [(1, 1, 1), (2, 1, 1), (3, 1, 2), (5, 1, 3), (12, 4, 4)]
        assert solutions[-1].value == 144

    def test_ffp_solutions(self, ffp_pair):
        solutions = search(ffp_pair, 400, 100)
        assert sorted({s.k for s in solutions}) == [1, 2, 3, 7]
        assert (7, 7, 7) in [(s.k, s.m, s.n) for s in solutions]
        assert len(solutions) == 8

    @pytest.mark.parametrize("pair_name", ["fpp", "ffp"])
    def test_matches_naive_loop(self, request, pair_name):
        pair = request.getfixturevalue(f"{pair_name}_pair")
        found = [(s.k, s.m, s.n) for s in search(pair, 200, 60)]
        assert found == _naive(pair, 200, 60)

    @pytest.mark.parametrize("pair_name", ["fpp", "ffp"])
    def test_solutions_are_genuine_and_bracketed(self, request, pair_name):
        pair = request.getfixturevalue(f"{pair_name}_pair")
        for s in search(pair, 400, 100):
            assert term(pair.U, s.k) == term(pair.V, s.m) * term(pair.V, s.n) == s.value
            low, high = k_range(pair, s.m, s.n)
            assert low <= s.k <= high

    def test_product_table_owners(self, fpp_pair):
        products, owners = product_table(fpp_pair, 4)
        assert products == sorted(products)
        assert owners[144] == [(4, 4)]
        assert owners[1] == [(1, 1)]

    def test_budgets_must_be_positive(self, fpp_pair):
        with pytest.raises(ValueError):
            search(fpp_pair, 0, 10)
        with pytest.raises(ValueError):
            search(fpp_pair, 10, 0)
