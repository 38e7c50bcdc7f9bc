from itertools import permutations

import pytest

from finemix import perms
from finemix.errors import BadBounds, CyclicTournament
from finemix.perms import Tournament


# independent oracle: compose cycles by literal function application
def apply_cycles(cycles, n, x):
    for cycle in reversed(list(cycles)):
        if len(cycle) >= 2 and x in cycle:
            x = cycle[(cycle.index(x) + 1) % len(cycle)]
    return x


def oracle_ascending(p):
    n = len(p)
    cycles = [tuple(range(i, p[i - 1] + 1)) for i in range(n, 0, -1)]
    return tuple(apply_cycles(cycles, n, x) for x in range(1, n + 1))


def oracle_descending(q):
    n = len(q)
    cycles = [tuple(range(i, q[i - 1] - 1, -1)) for i in range(1, n + 1)]
    return tuple(apply_cycles(cycles, n, x) for x in range(1, n + 1))


def test_worked_ascending_example():
    assert perms.factor_ascending((2, 3, 6, 1, 4, 5)) == (4, 2, 3, 5, 6, 6)
    assert perms.compose_from_factors((4, 2, 3, 5, 6, 6)) == (2, 3, 6, 1, 4, 5)
    assert oracle_ascending((4, 2, 3, 5, 6, 6)) == (2, 3, 6, 1, 4, 5)


def test_worked_descending_example():
    assert perms.factor_descending((4, 1, 2, 5, 6, 3)) == (1, 2, 3, 1, 4, 5)
    assert perms.compose_from_factors_desc((1, 2, 3, 1, 4, 5)) == (4, 1, 2, 5, 6, 3)
    assert oracle_descending((1, 2, 3, 1, 4, 5)) == (4, 1, 2, 5, 6, 3)


def test_identity_factorizations():
    for n in range(1, 8):
        ident = perms.identity(n)
        assert perms.factor_ascending(ident) == ident
        assert perms.factor_descending(ident) == ident


def test_reversal_factors():
    # the reversal has every element inverted against every later one
    for n in range(1, 8):
        w = tuple(range(n, 0, -1))
        assert perms.factor_ascending(w) == tuple([n] * n)


def test_suffix_words_worked_example():
    words = perms.ascending_suffix_words((3, 2, 4, 5, 6, 6))
    assert words == [
        (6,),
        (6, 5),
        (5, 6, 4),
        (4, 5, 6, 3),
        (2, 4, 5, 6, 3),
        (3, 1, 4, 5, 6, 2),
    ]


def test_round_trips_exhaustive():
    for n in range(1, 8):
        for w in permutations(range(1, n + 1)):
            assert perms.compose_from_factors(perms.factor_ascending(w)) == w
            assert perms.compose_from_factors_desc(perms.factor_descending(w)) == w


def test_factorizations_against_oracle():
    for n in range(1, 7):
        for w in permutations(range(1, n + 1)):
            p = perms.factor_ascending(w)
            q = perms.factor_descending(w)
            assert oracle_ascending(p) == w
            assert oracle_descending(q) == w


def test_inversion_formula_matches_peeling():
    for n in range(1, 8):
        for w in permutations(range(1, n + 1)):
            p, q = perms.factors_from_inversions(w, w)
            assert p == perms.factor_ascending(w)
            assert q == perms.factor_descending(w)


def test_uniqueness_by_counting():
    # all n! factorization vectors compose to pairwise distinct permutations
    for n in range(1, 6):
        seen = set()
        stack = [()]
        for i in range(1, n + 1):
            stack = [p + (pi,) for p in stack for pi in range(i, n + 1)]
        for p in stack:
            seen.add(perms.compose_from_factors(p))
        import math

        assert len(seen) == math.factorial(n)


def test_bad_factor_bounds():
    with pytest.raises(BadBounds):
        perms.compose_from_factors((0, 2))
    with pytest.raises(BadBounds):
        perms.compose_from_factors((3, 2))  # p_1 > n
    with pytest.raises(BadBounds):
        perms.compose_from_factors_desc((1, 3))  # q_2 > 2
    with pytest.raises(BadBounds):
        perms.check_word((1, 1, 3))


def test_compose_and_inverse():
    for n in range(1, 6):
        for w in permutations(range(1, n + 1)):
            assert perms.compose(w, perms.inverse(w)) == perms.identity(n)
            assert perms.reverse(perms.reverse(w)) == w


# ---------------------------------------------------------------------------
# Tournaments
# ---------------------------------------------------------------------------

def test_tournament_edge_case_small():
    t = Tournament.from_edges(2, [(1, 2)])
    assert t.to_permutation() == (1, 2)


def test_tournament_worked_example():
    t = Tournament.from_edges(3, [(2, 1), (3, 1), (3, 2)])
    assert t.to_permutation() == (3, 2, 1)


def test_tournament_round_trip_exhaustive():
    for d in range(1, 7):
        for w in permutations(range(1, d + 1)):
            assert Tournament.from_order(w).to_permutation() == w


def test_cyclic_tournament_rejected():
    cyc = Tournament.from_edges(3, [(1, 2), (2, 3), (3, 1)])
    assert not cyc.is_acyclic()
    assert cyc.find_three_cycle() is not None
    with pytest.raises(CyclicTournament):
        cyc.to_permutation()


def test_acyclicity_methods_agree():
    import math

    for d in range(1, 6):
        count = 0
        for t in perms.all_tournaments(d):
            by_degree = t.is_acyclic()
            by_triangle = t.is_acyclic_by_triangles()
            assert by_degree == by_triangle
            count += by_degree
        assert count == math.factorial(d)


def test_tournament_reversal():
    for t in perms.all_tournaments(4):
        if t.is_acyclic():
            assert t.reversed_().to_permutation() == perms.reverse(
                t.to_permutation()
            )
