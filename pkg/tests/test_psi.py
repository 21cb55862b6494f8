import itertools
import random
import warnings

import pytest
from hypothesis import given, strategies as st

from chow_engine import bitset
from chow_engine.matroid import LoopyMatroidError, MatroidError, from_boolean, from_graph, from_uniform
from chow_engine.oracle import (build_graded, linear_form, monomial_poly, oracle_degree, poly_add,
                                poly_mul, product, random_top_monomials)
from chow_engine.psi import (DegreeMismatchWarning, DivisorCombination, DivisorMonomial, FlagPsiTerm,
                             deg_expanded, deg_flag_mixed, deg_monomial, deg_psi_minus_product,
                             deg_psi_powers, expand_monomial, j_generator, psi_infinity, psi_minus,
                             psi_plus, psi_zero, rho)

from conftest import CATALOG, CHOW, matrix_matroids

B7 = from_boolean(7)
F1, F2, F3 = bitset.mask_of(range(2)), bitset.mask_of(range(5)), bitset.mask_of(range(6))
EXAMPLE = DivisorMonomial.from_pairs([(F1, 3), (F2, 2), (F3, 1)])


def m(*items):
    return bitset.mask_of(items)


class TestPsiClasses:
    def test_psi_infinity_is_sum_through_e(self, chow_matroid):
        M = chow_matroid
        expected = DivisorCombination.from_dict({G: 1 for G in M.proper_flats if G & 1})
        assert psi_minus(M, M.full, 0) == expected == psi_infinity(M)

    def test_psi_zero_is_sum_avoiding_e(self, chow_matroid):
        M = chow_matroid
        expected = DivisorCombination.from_dict({G: 1 for G in M.proper_flats if not G & 1})
        assert psi_plus(M, 0, 0) == expected == psi_zero(M)

    def test_u23_psi_infinity(self):
        M = from_uniform(2, 3)
        assert psi_minus(M, M.full, 1) == DivisorCombination.generator(m(1))

    def test_bad_element(self):
        with pytest.raises(MatroidError):
            psi_minus(from_uniform(2, 3), 7, 3)

    def test_loopy_rejected(self):
        with pytest.raises(LoopyMatroidError):
            psi_minus(from_graph(2, [(0, 0), (0, 1)]), 3)

    def test_e_independence_is_a_j_generator(self, chow_matroid):
        M = chow_matroid
        for F in M.flats:
            for e, f in itertools.combinations(range(M.n), 2):
                assert psi_minus(M, F, e) - psi_minus(M, F, f) == j_generator(M, e, f)
                assert psi_plus(M, F, e) - psi_plus(M, F, f) == -j_generator(M, e, f)


class TestPsiPowers:
    def test_boolean7(self):
        assert deg_psi_powers(B7, 2, 4) == 15

    def test_psi_infinity_top_power(self, chow_matroid):
        assert deg_psi_powers(chow_matroid, 0, chow_matroid.r) == 1

    def test_u23(self):
        assert deg_psi_powers(from_uniform(2, 3), 1, 0) == 2

    def test_wrong_degree(self, chow_matroid):
        assert deg_psi_powers(chow_matroid, chow_matroid.r, 1) == 0

    def test_matches_oracle(self, chow_matroid):
        M = chow_matroid
        for a in range(M.r + 1):
            poly = product(M, [psi_zero(M)] * a + [psi_infinity(M)] * (M.r - a))
            assert oracle_degree(M, poly) == deg_psi_powers(M, a, M.r - a)


class TestFlagMixed:
    def test_worked_example_term(self):
        term = FlagPsiTerm((F1, F2, F3), (0, 1, 0, 0), (1, 1, 0, 0))
        assert deg_flag_mixed(B7, term) == 2

    def test_empty_flag(self, chow_matroid):
        assert deg_flag_mixed(chow_matroid, FlagPsiTerm((), (0,), (chow_matroid.r,))) == 1

    def test_invalid_flag(self):
        with pytest.raises(MatroidError):
            deg_flag_mixed(B7, FlagPsiTerm((F2, F1), (0, 0, 0), (0, 0, 4)))

    @given(st.lists(st.integers(0, 3), min_size=8, max_size=8))
    def test_vanishes_off_degree(self, exps):
        term = FlagPsiTerm((F1, F2, F3), tuple(exps[:4]), tuple(exps[4:]))
        if term.psi_degree != B7.r - 3:
            assert deg_flag_mixed(B7, term) == 0


class TestExpansion:
    def test_single_factor(self):
        M = from_boolean(3)
        (term,) = expand_monomial(M, DivisorMonomial.of(m(0)))
        assert term == FlagPsiTerm((m(0),), (0, 0), (0, 0), 1)

    def test_incomparable(self):
        M = from_boolean(3)
        assert len(expand_monomial(M, DivisorMonomial.of(m(0), m(1)))) == 0

    def test_worked_example_expansion(self):
        terms = list(expand_monomial(B7, EXAMPLE))
        assert len(terms) == 6
        assert sorted(t.coefficient for t in terms) == [-2, -2, -1, -1, -1, -1]
        assert all(t.flag == (F1, F2, F3) for t in terms)


class TestClosedForm:
    def test_worked_example(self):
        assert deg_monomial(B7, EXAMPLE) == -4
        assert deg_expanded(B7, EXAMPLE) == -4

    def test_complete_flags(self, chow_matroid):
        for flag in chow_matroid.complete_flags():
            assert deg_monomial(chow_matroid, DivisorMonomial.of(*flag)) == 1

    def test_top_power(self, chow_matroid):
        M = chow_matroid
        assert deg_monomial(M, DivisorMonomial.from_pairs([(M.full, M.r)])) == (-1) ** M.r

    def test_wrong_degree_warns(self):
        with pytest.warns(DegreeMismatchWarning):
            assert deg_monomial(B7, DivisorMonomial.of(F1)) == 0

    def test_not_a_flat(self):
        M = from_uniform(2, 3)
        with pytest.raises(MatroidError):
            deg_monomial(M, DivisorMonomial.of(m(0, 1)))

    def test_three_way(self, chow_matroid):
        M = chow_matroid
        for mono in random_top_monomials(M, 150, seed=11):
            fast = deg_monomial(M, mono)
            assert deg_expanded(M, mono) == fast
            assert oracle_degree(M, mono) == fast
            assert oracle_degree(M, mono, method="rewrite") == fast


@given(matrix_matroids(loopless=True, max_rank=4, max_cols=6), st.integers(0, 1000))
def test_three_way_random_matroids(M, seed):
    if M.r < 1:
        return
    for mono in random_top_monomials(M, 8, seed):
        fast = deg_monomial(M, mono)
        assert deg_expanded(M, mono) == fast == oracle_degree(M, mono, method="rewrite")


@pytest.mark.parametrize("name", sorted(k for k, M in CHOW.items() if 2 <= M.r <= 3))
def test_self_intersection(name):
    M = CHOW[name]
    piece = build_graded(M, 2)
    for F in M.proper_flats:
        cls = monomial_poly(M, DivisorMonomial.from_pairs([(F, 2)]))
        poly_add(cls, poly_mul(M, {((F, 1),): 1}, linear_form(M, psi_minus(M, F) + psi_plus(M, F))))
        assert piece.is_zero(cls)


class TestBES:
    def test_all_top(self, chow_matroid):
        M = chow_matroid
        assert deg_psi_minus_product(M, [M.full] * M.r) == 1

    def test_u34_repeated_atom(self):
        M = from_uniform(3, 4)
        assert deg_psi_minus_product(M, [m(1), m(1)]) == 0

    def test_u34_atom_with_top(self):
        # an atom fails the size-one condition rk(F) > 1, and ψ^-_F vanishes for atoms
        M = from_uniform(3, 4)
        assert deg_psi_minus_product(M, [m(1), M.full]) == 0
        assert psi_minus(M, m(1), 1) == DivisorCombination()

    def test_u34_pair_of_lines(self):
        M = from_uniform(3, 4)
        assert deg_psi_minus_product(M, [m(0, 1), m(2, 3)]) == 1

    def test_count(self):
        with pytest.raises(ValueError):
            deg_psi_minus_product(B7, [B7.full])

    @pytest.mark.parametrize("name", sorted(k for k, M in CHOW.items() if M.r <= 3))
    def test_matches_oracle(self, name):
        M = CHOW[name]
        nonempty = [F for F in M.flats if F]
        tuples = list(itertools.combinations_with_replacement(nonempty, M.r))
        rng = random.Random(5)
        if len(tuples) > 400:
            tuples = rng.sample(tuples, 400)
        for flats in tuples:
            expected = oracle_degree(M, product(M, [psi_minus(M, F) for F in flats]))
            assert deg_psi_minus_product(M, list(flats)) == expected


class TestRho:
    def test_identity_on_full_set(self, chow_matroid):
        M = chow_matroid
        for G in M.proper_flats:
            assert rho(M, M.full, DivisorCombination.generator(G)) == DivisorCombination.generator(G)

    def test_psi_minus_from_restriction(self, chow_matroid):
        M = chow_matroid
        for F in M.proper_flats:
            assert rho(M, F, psi_infinity(M.restrict(F))) == psi_minus(M, F, bitset.lowest(F))

    def test_psi_plus_from_complement(self, chow_matroid):
        M = chow_matroid
        for F in M.proper_flats:
            S = M.full & ~F
            assert rho(M, S, psi_zero(M.restrict(S))) == psi_plus(M, F, bitset.lowest(S))

    def test_psi_zero_image(self, chow_matroid):
        M = chow_matroid
        for S in range(1, M.full + 1):
            e = bitset.lowest(S)
            correction = DivisorCombination.from_dict(
                {G: 1 for G in M.proper_flats if bitset.is_subset(G, M.full & ~S)})
            assert rho(M, S, psi_zero(M.restrict(S))) == psi_zero(M, e) - correction

    def test_composition(self, chow_matroid):
        M = chow_matroid
        rng = random.Random(2)
        for _ in range(40):
            S2 = rng.randrange(1, M.full + 1)
            S1 = S2 & rng.randrange(0, M.full + 1)
            if not S1:
                continue
            inner = M.restrict(S2)
            S1_inner = bitset.compress(S1, S2)
            for G in M.restrict(S1).proper_flats:
                c = DivisorCombination.generator(G)
                assert rho(M, S2, rho(inner, S1_inner, c)) == rho(M, S1, c)

    def test_empty_rejected(self):
        with pytest.raises(MatroidError):
            rho(B7, 0, DivisorCombination())


@pytest.mark.parametrize("name", sorted(k for k, M in CHOW.items() if M.is_simple() and M.r <= 3))
def test_degree_deletion_contraction(name):
    M = CHOW[name]
    r = M.r
    for e in range(M.n):
        bit = 1 << e
        if M.coloops() & bit:
            continue
        deleted, contracted = M.delete(bit), M.contract(bit)

        def deg(N, a, b):
            if a < 0 or N.r < 1 and a + b:
                return 0
            if N.r < 1:
                return 1
            return oracle_degree(N, product(N, [psi_zero(N)] * a + [psi_infinity(N)] * b))

        for a in range(r + 1):
            b = r - a
            assert deg(deleted, a, b) == deg(M, a, b) - deg(contracted, a - 1, b)
