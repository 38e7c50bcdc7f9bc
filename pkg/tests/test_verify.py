import json
from itertools import combinations, permutations

import pytest

from finemix import lozenge as lz, subdivision as sd, systems, verify
from finemix.errors import InfeasibleScale
from finemix.systems import SystemOfPermutations, system_from_triangle

SUBDIVISION_COUNTS = {
    (1, 3): 1,
    (2, 3): 6,
    (3, 3): 108,
    (2, 4): 24,
    (2, 5): 120,
}

ACYCLIC_COUNTS = {
    (1, 3): 1,
    (2, 3): 6,
    (3, 3): 102,
    (2, 4): 24,
    (3, 4): 3624,
    (4, 3): 3624,
    (2, 5): 120,
}


def test_acyclic_counts_frozen():
    for (n, d), expected in ACYCLIC_COUNTS.items():
        assert sum(1 for _ in verify.iter_raw_systems(n, d)) == expected


def test_subdivision_counts_frozen():
    for (n, d), expected in SUBDIVISION_COUNTS.items():
        assert sum(1 for _ in verify.enumerate_subdivisions(n, d)) == expected


def test_cross_enumerator_agreement():
    for n in (2, 3):
        cayley = {
            s for s in verify.enumerate_subdivisions(n, 3, method="cayley")
        }
        loz = {s for s in verify.enumerate_subdivisions(n, 3, method="lozenge")}
        assert cayley == loz


def test_all_2_4_isomorphic_to_chain():
    chain = sd.chain_subdivision(2, 4)

    def canon(sub):
        best = None
        for rho in permutations(range(1, sub.n + 1)):
            relabeled = sd.relabel_colors(sub, rho)
            for tau in permutations(range(1, sub.d + 1)):
                cells = sd.relabel_letters(relabeled, tau).cells
                if best is None or cells < best:
                    best = cells
        return best

    target = canon(chain)
    for sub in verify.enumerate_subdivisions(2, 4):
        assert canon(sub) == target


def test_infeasible_scales_error():
    with pytest.raises(InfeasibleScale):
        list(verify.enumerate_subdivisions(6, 4))
    with pytest.raises(InfeasibleScale):
        list(verify.enumerate_subdivisions(6, 3, method="lozenge"))
    with pytest.raises(InfeasibleScale):
        verify.sweep_systems(7, 7)
    with pytest.raises(InfeasibleScale):
        verify.weak_conjecture_search(6, 6)


def test_check_all_theorems_trivial():
    for d in (1, 2, 3, 5):
        report = verify.check_all_theorems(1, d)
        assert report.all_passed()


def test_check_all_theorems_small():
    for n, d in [(2, 3), (3, 3), (2, 4)]:
        report = verify.check_all_theorems(n, d)
        assert report.all_passed(), [
            c["name"] for c in report.checks if not c["passed"]
        ]
    report = verify.check_all_theorems(3, 3)
    assert report.counts == {
        "acyclic_systems": 102,
        "subdivisions": 108,
        "tilings": 18,
    }
    names = {c["name"] for c in report.checks}
    assert "realize_round_trip" in names
    assert "positions_determined_by_system" in names
    assert "system_positions_spread_out" in names


def test_report_determinism_across_runs_and_workers():
    first = verify.check_all_theorems(2, 3, workers=1).canonical_bytes()
    second = verify.check_all_theorems(2, 3, workers=1).canonical_bytes()
    forked = verify.check_all_theorems(2, 3, workers=2).canonical_bytes()
    assert first == second == forked


def test_report_json_shape():
    report = verify.check_all_theorems(2, 3)
    data = json.loads(report.canonical_bytes())
    assert data["n"] == 2 and data["d"] == 3
    assert "wall_time_ms" not in data
    timed = report.to_json(include_timing=True)
    assert "wall_time_ms" in timed


def test_realize_n3_figure_12():
    perms12 = {
        (a, b): ((1, 3, 2) if (a, b) == (1, 2) else (1, 2, 3))
        for a, b in combinations(range(1, 5), 2)
    }
    sigma = SystemOfPermutations(n=3, d=4, perms=perms12)
    sub = verify.realize_n3(sigma)
    sd.validate(sub)
    assert sd.system_of_permutations(sub) == sigma
    # the three simplices are ABCD+A+A, D+ABCD+B, D+D+ABCD
    assert sd.simplices(sub) == ((2, 0, 0, 0), (0, 1, 0, 1), (0, 0, 0, 2))
    full = tuple(range(1, 5))
    simplex_cells = sorted(
        cell for cell in sub.cells if any(len(s) == 4 for s in cell)
    )
    assert simplex_cells == sorted(
        [
            (full, (1,), (1,)),
            ((4,), full, (2,)),
            ((4,), (4,), full),
        ]
    )


def test_realize_n3_trivial_dimension():
    sigma = SystemOfPermutations(n=3, d=2, perms={(1, 2): (2, 1, 3)})
    sub = verify.realize_n3(sigma)
    assert sub.n == 3 and sub.d == 2
    assert sd.system_of_permutations(sub) == sigma


def test_realize_n3_exhaustive_3_3():
    count = 0
    for sigma in systems.enumerate_acyclic_systems(3, 3):
        sub = verify.realize_n3(sigma)
        assert sub.n == 3 and sub.d == 3
        count += 1
    assert count == 102


def test_weak_conjecture_search_small():
    report = verify.weak_conjecture_search(1, 3)
    assert report.counts["unmatched"] == 0
    report = verify.weak_conjecture_search(3, 3)
    assert report.all_passed()
    assert report.counts["unmatched"] == 0
    assert report.counts["spread_out_tuples"] == 102
    types = report.details["realizing_systems_per_type"]
    assert len(types) == report.counts["combinatorial_types"] == 4
    for entry in types:
        sigma = SystemOfPermutations.from_json(
            {"n": 3, "d": 3, "perms": entry["system"]}
        )
        assert systems.simplex_positions(sigma) == tuple(
            tuple(x) for x in entry["positions"]
        )


def test_weak_search_positions_cover_spread_tuples_2_4():
    report = verify.weak_conjecture_search(2, 4)
    assert report.all_passed()


def test_sweep_flags_all_pass_small():
    for n, d in [(2, 3), (3, 3), (2, 4), (3, 4)]:
        out = verify.sweep_systems(n, d, with_realize=(d == 3))
        assert all(out["flags"].values())
        assert out["realize_ok"] and out["routing_ok"] and out["positions_ok"]


def test_generic_point_rejects_degenerate_seeds():
    trees = verify._spanning_trees(2, 3)
    alpha, beta = verify._generic_point(trees, 2, 3)
    for tree in trees:
        weights = verify._tree_lambdas(tree, alpha, beta)
        assert all(w != 0 for w in weights.values())


def test_cross_enumerator_agreement_n4():
    cayley = sum(1 for _ in verify.enumerate_subdivisions(4, 3, method="cayley"))
    loz = sum(1 for _ in verify.enumerate_subdivisions(4, 3, method="lozenge"))
    assert cayley == loz == 4488


def test_verify_module_enumerator_matches_systems_module():
    for n, d in [(2, 3), (3, 3), (2, 4)]:
        fast = list(verify.enumerate_acyclic_systems(n, d))
        slow = list(systems.enumerate_acyclic_systems(n, d))
        assert set(fast) == set(slow) and len(fast) == len(slow)
