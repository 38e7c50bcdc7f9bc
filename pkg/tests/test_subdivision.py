import pytest

from finemix import lozenge, subdivision as sd, systems, verify
from finemix.errors import (
    BadIntersection,
    EmptySummand,
    NotATriangulation,
    NotFine,
    SimplexCountMismatch,
    VolumeMismatch,
)
from finemix.subdivision import FineMixedSubdivision


THREE_TILES = [[[1, 2, 3], [2]], [[1, 3], [1, 2]], [[3], [1, 2, 3]]]


def test_volume_and_fineness_examples():
    assert sd.cell_volume(sd.make_cell([[1, 2, 3], [2]]), 3) == 1
    assert sd.cell_volume(sd.make_cell([[1, 3], [1, 2]]), 3) == 2
    assert sd.cell_is_fine(sd.make_cell([[1, 2, 3], [2]]), 3)
    for d in range(1, 7):
        assert sd.cell_is_fine(sd.make_cell([list(range(1, d + 1))]), d)
    # the lone n=1 cell carries the whole normalized volume, which is 1
    assert sd.cell_volume(sd.make_cell([list(range(1, 5))]), 4) == 1
    assert sd.cell_volume(sd.make_cell([[1], [1, 2], [2, 3], [3, 4]]), 4) == 6
    assert not sd.cell_is_fine(sd.make_cell([[1, 2], [1, 2]]), 3)
    assert not sd.cell_is_fine(sd.make_cell([[1], [2]]), 3)  # dimension short


def test_empty_summand_rejected():
    with pytest.raises(EmptySummand):
        FineMixedSubdivision(2, 3, [[[1, 2, 3], []]])


def test_three_tile_subdivision_valid():
    s = FineMixedSubdivision(2, 3, THREE_TILES)
    sd.validate(s)


def test_chain_subdivisions_valid():
    for d in range(1, 7):
        chain = sd.chain_subdivision(2, d)
        sd.validate(chain)
        assert len(chain.cells) == d
    for n, d in [(3, 3), (3, 4), (2, 5), (4, 3)]:
        chain = sd.chain_subdivision(n, d)
        sd.validate(chain)
        assert sd.multinomial_census_ok(chain)


def test_empty_cell_list_is_volume_mismatch():
    with pytest.raises(VolumeMismatch):
        sd.validate(FineMixedSubdivision(2, 3, []))
    with pytest.raises(VolumeMismatch):
        sd.validate(FineMixedSubdivision(1, 1, []))


def test_not_fine_detected():
    bad = FineMixedSubdivision(2, 2, [[[1, 2], [1, 2]], [[1], [1]]])
    with pytest.raises(NotFine):
        sd.validate(bad)


def test_duplicate_cell_detected():
    with pytest.raises((BadIntersection, VolumeMismatch)):
        sd.validate(
            FineMixedSubdivision(2, 2, [[[1, 2], [1]], [[1, 2], [1]]])
        )


def test_same_polytope_different_decoration_detected():
    with pytest.raises(BadIntersection):
        sd.validate(FineMixedSubdivision(2, 2, [[[1, 2], [1]], [[1], [1, 2]]]))


def test_label_incompatible_cells_detected():
    # geometrically the valid three-tile picture, but the rhombus summands
    # are swapped between the two colors; the shared edges decompose
    # differently from the two sides
    bad = FineMixedSubdivision(
        2, 3, [[[1, 2, 3], [2]], [[1, 2], [1, 3]], [[3], [1, 2, 3]]]
    )
    with pytest.raises(BadIntersection):
        sd.validate(bad)


def test_edge_words_of_three_tiles():
    s = FineMixedSubdivision(2, 3, THREE_TILES)
    sigma = sd.system_of_permutations(s)
    assert sigma.sigma(1, 2) == (2, 1)
    assert sigma.sigma(2, 3) == (1, 2)
    assert sigma.sigma(3, 1) == (2, 1)


def test_edge_restriction_worked_example():
    # realize sigma_12=132, sigma_23=213, sigma_31=231 and read the edge cells
    sigma = systems.SystemOfPermutations(
        n=3, d=3, perms={(1, 2): (1, 3, 2), (2, 3): (2, 1, 3), (3, 1): (2, 3, 1)}
    )
    tiling = lozenge.realize(sigma)
    s = lozenge.to_subdivision(tiling)
    assert sd.system_of_permutations(s) == sigma
    edge_cells = set()
    for cell in s.cells:
        restricted = []
        for summand in cell:
            inter = tuple(x for x in summand if x in (1, 2))
            if not inter:
                break
            restricted.append(inter)
        else:
            if sum(len(r) - 1 for r in restricted) == 1:
                edge_cells.add(tuple(restricted))
    assert edge_cells == {
        ((1, 2), (1,), (1,)),
        ((2,), (1,), (1, 2)),
        ((2,), (1, 2), (2,)),
    }


def test_dual_of_three_tiles_is_segment_subdivision():
    s = FineMixedSubdivision(2, 3, THREE_TILES)
    ds = sd.dual(s)
    assert ds == FineMixedSubdivision(
        3, 2, [[[1], [1, 2], [1]], [[1, 2], [2], [1]], [[2], [2], [1, 2]]]
    )
    sd.validate(ds)
    assert sd.dual(ds) == s
    assert sd.system_of_permutations(ds) == systems.dual(sd.system_of_permutations(s))


def test_deletion_contraction_duality_exhaustive_small():
    for n, d in [(2, 3), (3, 3), (2, 4)]:
        for s in verify.enumerate_subdivisions(n, d):
            ds = sd.dual(s)
            for i in range(1, n + 1):
                assert sd.dual(sd.delete_color(s, i)) == sd.contract_letter(ds, i)
            for a in range(1, d + 1):
                assert sd.dual(sd.contract_letter(s, a)) == sd.delete_color(ds, a)


def test_system_compatibility_exhaustive_small():
    for n, d in [(2, 3), (3, 3)]:
        for s in verify.enumerate_subdivisions(n, d):
            sigma = sd.system_of_permutations(s)
            for i in range(1, n + 1):
                if n > 1:
                    assert sd.system_of_permutations(
                        sd.delete_color(s, i)
                    ) == systems.delete_color(sigma, i)
            for a in range(1, d + 1):
                if d > 2:
                    assert sd.system_of_permutations(
                        sd.contract_letter(s, a)
                    ) == systems.contract_letter(sigma, a)


def test_simplices_of_three_tiles():
    s = FineMixedSubdivision(2, 3, THREE_TILES)
    assert sd.simplices(s) == ((0, 1, 0), (0, 0, 1))
    assert systems.simplex_positions(sd.system_of_permutations(s)) == sd.simplices(s)


def test_simplex_count_mismatch():
    with pytest.raises(SimplexCountMismatch):
        sd.simplices(FineMixedSubdivision(2, 2, [[[1, 2], [1]], [[1, 2], [2]]]))


def test_lozenge_census():
    for n in range(1, 5):
        for tiling in lozenge.enumerate_tilings(n):
            s = lozenge.to_subdivision(tiling)
            census = sd.dim_vector_census(s)
            triangles = sum(
                c for delta, c in census.items() if max(delta) == 2
            )
            rhombi = sum(c for delta, c in census.items() if max(delta) == 1)
            assert triangles == n and rhombi == n * (n - 1) // 2
            # one rhombus per color pair
            for delta, count in census.items():
                assert count == 1
            assert sd.multinomial_census_ok(s)


def test_cayley_round_trip_and_prism():
    s = FineMixedSubdivision(2, 3, THREE_TILES)
    cayley = sd.mixed_to_cayley(s)
    assert cayley == frozenset(
        {
            frozenset({(1, 1), (1, 2), (1, 3), (2, 2)}),
            frozenset({(1, 1), (1, 3), (2, 1), (2, 2)}),
            frozenset({(1, 3), (2, 1), (2, 2), (2, 3)}),
        }
    )
    assert sd.cayley_to_mixed(cayley, 2, 3) == s


def test_cayley_round_trip_exhaustive_small():
    for n, d in [(2, 3), (3, 3), (2, 4)]:
        for s in verify.enumerate_subdivisions(n, d):
            assert sd.cayley_to_mixed(sd.mixed_to_cayley(s), n, d) == s


def test_not_a_triangulation():
    with pytest.raises(NotATriangulation):
        sd.cayley_to_mixed([frozenset({(1, 1), (1, 2)})], 2, 3)
    with pytest.raises(NotATriangulation):
        # two copies of one simplex
        tree = frozenset({(1, 1), (1, 2), (1, 3), (2, 2)})
        sd.cayley_to_mixed([tree, tree], 2, 3)


def test_single_cell_trivial():
    one = FineMixedSubdivision(1, 4, [[[1, 2, 3, 4]]])
    sd.validate(one)
    assert sd.simplices(one) == ((0, 0, 0, 0),)


def test_double_dual_exhaustive_small():
    for n, d in [(2, 3), (3, 3), (2, 4)]:
        for s in verify.enumerate_subdivisions(n, d):
            assert sd.dual(sd.dual(s)) == s
            assert sd.system_of_permutations(sd.dual(s)) == systems.dual(
                sd.system_of_permutations(s)
            )


def test_json_round_trip():
    s = FineMixedSubdivision(2, 3, THREE_TILES)
    assert FineMixedSubdivision.from_json(s.to_json()) == s


def test_delete_last_color_gives_empty_subdivision():
    one = FineMixedSubdivision(1, 4, [[[1, 2, 3, 4]]])
    empty = sd.delete_color(one, 1)
    assert empty.n == 0 and empty.cells == ()
    sd.validate(empty)
