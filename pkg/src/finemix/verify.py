"""Exhaustive enumeration harnesses and theorem checkers.

The per-system checks run over a packed representation: each edge word is
an index into the n! words, precedence of every color pair is a bitmask,
and each color pair's letter tournament is a bitmask over edges.  All
per-pair logic then reduces to table lookups, which is what makes the
million-system sweeps affordable.  The public object API is used for the
subdivision-level checks and is cross-validated against the packed path
in the test suite.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from . import lozenge, perms, subdivision, systems
from .errors import InfeasibleScale, InternalInvariantViolation
from .subdivision import FineMixedSubdivision
from .systems import SystemOfPermutations


# ---------------------------------------------------------------------------
# Feasible scales
# ---------------------------------------------------------------------------

#: (n, d) pairs the general-dimension subdivision enumerator accepts
CAYLEY_SCALES = {(2, 3), (3, 3), (4, 3), (2, 4), (3, 4), (2, 5)}

#: (n, d) pairs where the acyclic-system sweep finishes at desk scale
SYSTEM_SCALES = {
    (2, 3), (3, 3), (4, 3), (5, 3),
    (2, 4), (3, 4), (4, 4),
    (2, 5), (3, 5),
    (2, 6),
}

MAX_LOZENGE_N = 5
MAX_SEGMENT_N = 7


def systems_feasible(n: int, d: int) -> bool:
    if n < 1 or d < 1:
        return False
    if n == 1 or d == 1:
        return True
    if d == 2:
        return n <= 8
    return (n, d) in SYSTEM_SCALES


def subdivisions_feasible(n: int, d: int) -> bool:
    if n < 1 or d < 1:
        return False
    if n == 1 or d == 1:
        return True
    if d == 2:
        return n <= MAX_SEGMENT_N
    if d == 3:
        return n <= MAX_LOZENGE_N
    return (n, d) in CAYLEY_SCALES


# ---------------------------------------------------------------------------
# Packed tables for the fast system sweep
# ---------------------------------------------------------------------------

class SweepTables:
    """Lookup tables for systems on n Delta_{d-1}."""

    def __init__(self, n: int, d: int):
        self.n = n
        self.d = d
        self.edges = list(combinations(range(1, d + 1), 2))
        self.edge_index = {e: k for k, e in enumerate(self.edges)}
        self.pairs = list(combinations(range(1, n + 1), 2))
        self.pair_index = {p: k for k, p in enumerate(self.pairs)}
        self.words = list(permutations(range(1, n + 1)))
        self.word_index = {w: k for k, w in enumerate(self.words)}
        self.prec = [self._prec(w, self.pairs) for w in self.words]
        self.letter_words = list(permutations(range(1, d + 1)))
        self.letter_word_index = {w: k for k, w in enumerate(self.letter_words)}
        self.letter_prec = [self._prec(w, self.edges) for w in self.letter_words]
        self.pair_mask = (1 << len(self.pairs)) - 1
        # tournaments on the letters: bits over self.edges, bit set = lo -> hi
        self.tourn_word: List[Optional[tuple]] = []
        self.tourn_word_id: List[Optional[int]] = []
        for bits in range(1 << len(self.edges)):
            degs = [0] * d
            for k, (a, b) in enumerate(self.edges):
                if bits >> k & 1:
                    degs[a - 1] += 1
                else:
                    degs[b - 1] += 1
            if sorted(degs) == list(range(d)):
                word = [0] * d
                for v, deg in enumerate(degs, 1):
                    word[d - 1 - deg] = v
                self.tourn_word.append(tuple(word))
                self.tourn_word_id.append(self.letter_word_index[tuple(word)])
            else:
                self.tourn_word.append(None)
                self.tourn_word_id.append(None)
        # tournaments on the colors, for the double dual
        self.color_tourn_word: List[Optional[tuple]] = []
        for bits in range(1 << len(self.pairs)):
            degs = [0] * n
            for k, (i, j) in enumerate(self.pairs):
                if bits >> k & 1:
                    degs[i - 1] += 1
                else:
                    degs[j - 1] += 1
            if sorted(degs) == list(range(n)):
                word = [0] * n
                for v, deg in enumerate(degs, 1):
                    word[n - 1 - deg] = v
                self.color_tourn_word.append(tuple(word))
            else:
                self.color_tourn_word.append(None)
        # spread-out thresholds: for each k, the vectors m with sum n - k
        self.thresholds = [
            (k, list(_vectors_summing(n - k, d))) for k in range(1, n)
        ]

    @staticmethod
    def _prec(word: tuple, pairs: list) -> int:
        pos = {v: k for k, v in enumerate(word)}
        bits = 0
        for k, (x, y) in enumerate(pairs):
            if pos[x] < pos[y]:
                bits |= 1 << k
        return bits


def _vectors_summing(total: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _vectors_summing(total - first, parts - 1):
            yield (first,) + rest


_tables_cache: Dict[tuple, SweepTables] = {}


def sweep_tables(n: int, d: int) -> SweepTables:
    if (n, d) not in _tables_cache:
        _tables_cache[(n, d)] = SweepTables(n, d)
    return _tables_cache[(n, d)]


RawSystem = Tuple[tuple, tuple]  # (word ids per edge, tournament bits per pair)


def iter_raw_systems(
    n: int, d: int, first_words: Optional[Sequence[int]] = None
) -> Iterator[RawSystem]:
    """All acyclic systems in packed form, in lexicographic edge-word order.

    ``first_words`` restricts the word of the first edge; the harness uses
    it to split work across processes.
    """
    t = sweep_tables(n, d)
    n_edges = len(t.edges)
    if n_edges == 0:
        yield ((), ())
        return
    pm = t.pair_mask
    word_range = range(len(t.words))
    chosen = [0] * n_edges
    # triangles completed at each edge: pairs of earlier edges forming one
    tri_checks: List[List[tuple]] = []
    for k, (a, b) in enumerate(t.edges):
        checks = []
        for c in range(1, d + 1):
            if c in (a, b):
                continue
            e1 = t.edge_index.get((min(a, c), max(a, c)))
            e2 = t.edge_index.get((min(b, c), max(b, c)))
            if e1 is None or e2 is None or e1 >= k or e2 >= k:
                continue
            checks.append((e1, a < c, e2, b < c))
        tri_checks.append(checks)

    prec = t.prec

    def dirs(word_id: int, forward: bool) -> int:
        bits = prec[word_id]
        return bits if forward else ~bits & pm

    def extend(k: int) -> Iterator[RawSystem]:
        if k == n_edges:
            tourn = []
            for pk in range(len(t.pairs)):
                bits = 0
                for e in range(n_edges):
                    bits |= (prec[chosen[e]] >> pk & 1) << e
                tourn.append(bits)
            yield (tuple(chosen), tuple(tourn))
            return
        words = first_words if (k == 0 and first_words is not None) else word_range
        for wid in words:
            ab = prec[wid]
            ok = True
            for e1, fwd1, e2, fwd2 in tri_checks[k]:
                ac = dirs(chosen[e1], fwd1)
                bc = dirs(chosen[e2], fwd2)
                # a->b->c->a or its reverse, simultaneously over all pairs
                if (ab & ~ac & bc | ~ab & ac & ~bc) & pm:
                    ok = False
                    break
            if ok:
                chosen[k] = wid
                yield from extend(k + 1)
        return

    yield from extend(0)


def raw_to_system(raw: RawSystem, t: SweepTables) -> SystemOfPermutations:
    word_ids, _ = raw
    return SystemOfPermutations(
        n=t.n,
        d=t.d,
        perms={e: t.words[wid] for e, wid in zip(t.edges, word_ids)},
    )


def enumerate_acyclic_systems(n: int, d: int) -> Iterator[SystemOfPermutations]:
    """Every acyclic system exactly once, via the packed backtracker.

    Same order and content as systems.enumerate_acyclic_systems; this
    route goes through the bitmask tables and is what the big sweeps use.
    """
    t = sweep_tables(n, d)
    for raw in iter_raw_systems(n, d):
        yield raw_to_system(raw, t)


def system_to_raw(system: SystemOfPermutations, t: SweepTables) -> RawSystem:
    word_ids = tuple(t.word_index[system.perms[e]] for e in t.edges)
    tourn = []
    for pk in range(len(t.pairs)):
        bits = 0
        for e in range(len(t.edges)):
            bits |= (t.prec[word_ids[e]] >> pk & 1) << e
        tourn.append(bits)
    return (word_ids, tuple(tourn))


# ---------------------------------------------------------------------------
# Packed per-system checks
# ---------------------------------------------------------------------------

def raw_dual_words(raw: RawSystem, t: SweepTables) -> tuple:
    """Dual edge words, one per color pair (i < j)."""
    return tuple(t.tourn_word[bits] for bits in raw[1])


def raw_sources(raw: RawSystem, t: SweepTables) -> list:
    """sources[i-1][j-1] = unique source of G_ij, for i != j."""
    n = t.n
    src = [[0] * n for _ in range(n)]
    for k, (i, j) in enumerate(t.pairs):
        word = t.tourn_word[raw[1][k]]
        src[i - 1][j - 1] = word[0]
        src[j - 1][i - 1] = word[-1]
    return src


def raw_positions(raw: RawSystem, t: SweepTables) -> tuple:
    src = raw_sources(raw, t)
    n, d = t.n, t.d
    out = []
    for i in range(n):
        x = [0] * d
        for j in range(n):
            if j != i:
                x[src[i][j] - 1] += 1
        out.append(tuple(x))
    return tuple(out)


def raw_spread_out(positions: tuple, t: SweepTables) -> bool:
    for k, vectors in t.thresholds:
        for m in vectors:
            hits = 0
            for x in positions:
                if all(xa >= ma for xa, ma in zip(x, m)):
                    hits += 1
                    if hits > k:
                        return False
    return True


def raw_checks(raw: RawSystem, t: SweepTables) -> dict:
    """All packed per-system predicates; spread positions included."""
    word_ids, tourn = raw
    result = {"transport": True, "involution": True, "h_subgraph": True}

    # L6.4 transport and the double dual, edge by edge
    letter_prec = t.letter_prec
    tourn_word_id = t.tourn_word_id
    dual_precs = [letter_prec[tourn_word_id[bits]] for bits in tourn]
    n_pairs = len(t.pairs)
    for e in range(len(t.edges)):
        gstar = 0
        for k in range(n_pairs):
            gstar |= (dual_precs[k] >> e & 1) << k
        if gstar != t.prec[word_ids[e]]:
            result["transport"] = False
        if t.color_tourn_word[gstar] != t.words[word_ids[e]]:
            result["involution"] = False

    src = raw_sources(raw, t)
    positions = raw_positions(raw, t)
    result["positions"] = positions
    result["spread"] = raw_spread_out(positions, t)

    # every H_ab edge i -> j must see i before j in sigma_ab
    prec = t.prec
    pair_index = t.pair_index
    edge_index = t.edge_index
    n, d = t.n, t.d

    def before(i: int, j: int, a: int, b: int) -> bool:
        if a > b:
            i, j, a, b = j, i, b, a
        wid = word_ids[edge_index[(a, b)]]
        if i < j:
            return bool(prec[wid] >> pair_index[(i, j)] & 1)
        return not prec[wid] >> pair_index[(j, i)] & 1

    ok = True
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or not ok:
                continue
            a = src[i - 1][j - 1]
            for b in range(1, d + 1):
                if b != a and not before(i, j, a, b):
                    ok = False
                    break
            if not ok:
                break
            bb = src[j - 1][i - 1]
            for a2 in range(1, d + 1):
                if a2 != bb and not before(i, j, a2, bb):
                    ok = False
                    break
            if not ok:
                break
            for l in range(1, n + 1):
                if l in (i, j):
                    continue
                a3, b3 = src[i - 1][l - 1], src[j - 1][l - 1]
                if a3 != b3 and not before(i, j, a3, b3):
                    ok = False
                    break
        if not ok:
            break
    result["h_subgraph"] = ok
    return result


# ---------------------------------------------------------------------------
# Subdivision enumeration
# ---------------------------------------------------------------------------

def enumerate_subdivisions(
    n: int, d: int, method: str = "auto"
) -> Iterator[FineMixedSubdivision]:
    """Every fine mixed subdivision of n Delta_{d-1}, canonical order.

    d = 3 goes through the lozenge enumeration (tilings times colorings);
    other dimensions grow Cayley triangulations cell by cell.  Scales
    beyond the configured limits raise InfeasibleScale.
    """
    if method not in ("auto", "lozenge", "cayley"):
        raise ValueError(f"unknown method {method!r}")
    if n < 1 or d < 1:
        raise InfeasibleScale(f"need n, d >= 1, got n={n} d={d}")
    if method == "lozenge" and d != 3:
        raise InfeasibleScale("the lozenge enumerator needs d = 3")
    if method == "auto":
        if d == 3 and n <= MAX_LOZENGE_N:
            method = "lozenge"
        elif d in (1, 2) or n == 1 or (n, d) in CAYLEY_SCALES:
            method = "cayley" if d > 2 and n > 1 else "direct"
        else:
            raise InfeasibleScale(
                f"(n, d) = ({n}, {d}) beyond the configured enumeration scales"
            )
    if method == "lozenge":
        if n > MAX_LOZENGE_N:
            raise InfeasibleScale(f"lozenge enumeration capped at n = {MAX_LOZENGE_N}")
        for tiling in lozenge.enumerate_tilings(n):
            base = lozenge.to_subdivision(tiling)
            for rho in permutations(range(1, n + 1)):
                yield subdivision.relabel_colors(base, rho)
        return
    if method == "cayley" and not (d > 2 and n > 1):
        method = "direct"
    if method == "direct":
        yield from _enumerate_direct(n, d)
        return
    if (n, d) not in CAYLEY_SCALES:
        raise InfeasibleScale(
            f"(n, d) = ({n}, {d}) beyond the configured Cayley scales"
        )
    yield from _enumerate_cayley(n, d)


def _enumerate_direct(n: int, d: int) -> Iterator[FineMixedSubdivision]:
    if d == 1:
        yield FineMixedSubdivision(n, 1, [[(1,)] * n])
        return
    if n == 1:
        yield FineMixedSubdivision(1, d, [[tuple(range(1, d + 1))]])
        return
    # d == 2: one subdivision per conversion order of the colors
    if n > MAX_SEGMENT_N:
        raise InfeasibleScale(f"segment enumeration capped at n = {MAX_SEGMENT_N}")
    for order in permutations(range(1, n + 1)):
        cells = []
        for k in range(n):
            cell = []
            for c in range(1, n + 1):
                at = order.index(c)
                if at < k:
                    cell.append((2,))
                elif at == k:
                    cell.append((1, 2))
                else:
                    cell.append((1,))
            cells.append(tuple(cell))
        yield FineMixedSubdivision(n, 2, cells)


# --- Cayley growth ---------------------------------------------------------

def _spanning_trees(n: int, d: int) -> List[FrozenSet[tuple]]:
    """All spanning trees of the complete bipartite color/letter graph."""
    verts = [(i, a) for i in range(1, n + 1) for a in range(1, d + 1)]
    out = []

    def is_tree(chosen: tuple) -> bool:
        parent = list(range(n + d))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, a in chosen:
            ri, ra = find(i - 1), find(n + a - 1)
            if ri == ra:
                return False
            parent[ri] = ra
        return True

    for chosen in combinations(verts, n + d - 1):
        if is_tree(chosen):
            out.append(frozenset(chosen))
    return out


def _cayley_point(vertex: tuple, n: int, d: int) -> tuple:
    i, a = vertex
    coords = [0] * (n + d)
    coords[i - 1] = 1
    coords[n + a - 1] = 1
    return tuple(coords)


def _facet_oracle(n: int, d: int):
    """side(facet, vertex): sign of vertex against the facet's hyperplane.

    The functional is the exact rational solution vanishing on the facet
    points inside the affine hull of the product.
    """
    cache: Dict[FrozenSet[tuple], tuple] = {}

    def functional(facet: FrozenSet[tuple]) -> tuple:
        if facet in cache:
            return cache[facet]
        pts = [_cayley_point(v, n, d) for v in sorted(facet)]
        # rows: point differences + the two affine-hull normals; null vector
        # orthogonal to all of them gives the facet hyperplane
        rows = [
            tuple(Fraction(p[k] - pts[0][k]) for k in range(n + d))
            for p in pts[1:]
        ]
        rows.append(tuple(Fraction(1 if k < n else 0) for k in range(n + d)))
        rows.append(tuple(Fraction(0 if k < n else 1) for k in range(n + d)))
        null = _nullspace_vector(rows, n + d)
        base = sum(c * x for c, x in zip(null, pts[0]))
        cache[facet] = (null, base)
        return cache[facet]

    def side(facet: FrozenSet[tuple], vertex: tuple) -> int:
        null, base = functional(facet)
        value = sum(c * x for c, x in zip(null, _cayley_point(vertex, n, d))) - base
        return (value > 0) - (value < 0)

    return side


def _nullspace_vector(rows: List[tuple], width: int) -> tuple:
    """A nonzero rational vector orthogonal to all rows."""
    matrix = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(width):
        pivot = next((k for k in range(r, len(matrix)) if matrix[k][col] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = Fraction(1, 1) / matrix[r][col]
        matrix[r] = [v * inv for v in matrix[r]]
        for k in range(len(matrix)):
            if k != r and matrix[k][col] != 0:
                f = matrix[k][col]
                matrix[k] = [a - f * b for a, b in zip(matrix[k], matrix[r])]
        pivots.append(col)
        r += 1
    free = next(c for c in range(width) if c not in pivots)
    vec = [Fraction(0)] * width
    vec[free] = Fraction(1)
    for row_idx, col in enumerate(pivots):
        vec[col] = -matrix[row_idx][free]
    return tuple(vec)


def _tree_lambdas(tree: FrozenSet[tuple], alpha: list, beta: list) -> Dict[tuple, Fraction]:
    """Barycentric weight of each tree vertex at the point (alpha, beta).

    The tree transportation problem has a unique solution, found by
    repeatedly settling a leaf of the color/letter graph.
    """
    supply: Dict[tuple, Fraction] = {("c", i): a for i, a in enumerate(alpha, 1)}
    supply.update({("l", a): -b for a, b in enumerate(beta, 1)})
    adj: Dict[tuple, Set[tuple]] = {}
    for edge in tree:
        i, a = edge
        adj.setdefault(("c", i), set()).add(edge)
        adj.setdefault(("l", a), set()).add(edge)
    stack = [v for v, es in adj.items() if len(es) == 1]
    weight: Dict[tuple, Fraction] = {}
    while stack:
        v = stack.pop()
        if len(adj[v]) != 1:
            continue
        (edge,) = adj[v]
        i, a = edge
        other = ("l", a) if v == ("c", i) else ("c", i)
        flow = supply[v] if v[0] == "c" else -supply[v]
        weight[edge] = flow
        supply[other] += supply[v]
        supply[v] = Fraction(0)
        adj[v].remove(edge)
        adj[other].remove(edge)
        if len(adj[other]) == 1:
            stack.append(other)
    if len(weight) != len(tree):
        raise InternalInvariantViolation("tree transportation did not settle")
    return weight


def _generic_point(trees: List[FrozenSet[tuple]], n: int, d: int) -> tuple:
    """A rational interior point lying on no wall of any potential cell."""
    for attempt in range(1, 30):
        alpha = [Fraction(_PRIMES[k] ** attempt) for k in range(n)]
        alpha = [a / sum(alpha) for a in alpha]
        beta = [Fraction(_PRIMES[n + k] ** attempt) for k in range(d)]
        beta = [b / sum(beta) for b in beta]
        if all(
            all(w != 0 for w in _tree_lambdas(t, alpha, beta).values())
            for t in trees
        ):
            return alpha, beta
    raise InternalInvariantViolation("no generic seed point found")


def _enumerate_cayley(n: int, d: int) -> Iterator[FineMixedSubdivision]:
    trees = sorted(_spanning_trees(n, d), key=sorted)
    side = _facet_oracle(n, d)
    target_cells = _binom(n + d - 2, n - 1)
    alpha, beta = _generic_point(trees, n, d)
    seeds = [
        t
        for t in trees
        if all(w > 0 for w in _tree_lambdas(t, alpha, beta).values())
    ]

    def facets(tree: FrozenSet[tuple]) -> Iterator[tuple]:
        for v in sorted(tree):
            rest = tree - {v}
            rows = {i for i, _ in rest}
            cols = {a for _, a in rest}
            boundary = len(rows) < n or len(cols) < d
            yield (rest, v, boundary)

    all_vertices = sorted(product(range(1, n + 1), range(1, d + 1)))

    def grow(
        cells: List[FrozenSet[tuple]],
        cells_set: Set[FrozenSet[tuple]],
        open_facets: Dict[FrozenSet[tuple], tuple],
        boundary_used: Set[FrozenSet[tuple]],
    ) -> Iterator[FineMixedSubdivision]:
        if not open_facets:
            yield subdivision.cayley_to_mixed(cells, n, d)
            return
        if len(cells) >= target_cells:
            return
        facet = min(open_facets, key=sorted)
        owner_vertex = open_facets[facet]
        for u in all_vertices:
            if u in facet:
                continue
            candidate = facet | {u}
            if candidate in cells_set:
                continue
            if not subdivision.cell_is_fine(_tree_cell(candidate, n), d):
                continue
            if side(facet, u) * side(facet, owner_vertex) != -1:
                continue
            new_open = dict(open_facets)
            del new_open[facet]
            new_boundary = set()
            conflict = False
            for rest, v, boundary in facets(candidate):
                if rest == facet:
                    continue
                if boundary:
                    if rest in boundary_used:
                        conflict = True
                        break
                    new_boundary.add(rest)
                    continue
                if rest in new_open:
                    if side(rest, v) * side(rest, new_open[rest]) != -1:
                        conflict = True
                        break
                    del new_open[rest]
                else:
                    new_open[rest] = v
            if conflict:
                continue
            cells.append(candidate)
            cells_set.add(candidate)
            boundary_used |= new_boundary
            yield from grow(cells, cells_set, new_open, boundary_used)
            boundary_used -= new_boundary
            cells.pop()
            cells_set.remove(candidate)

    for seed in sorted(seeds, key=sorted):
        open_facets: Dict[FrozenSet[tuple], tuple] = {}
        boundary_used: Set[FrozenSet[tuple]] = set()
        for rest, v, boundary in facets(seed):
            if boundary:
                boundary_used.add(rest)
            else:
                open_facets[rest] = v
        yield from grow([seed], {seed}, open_facets, boundary_used)


def _tree_cell(tree: FrozenSet[tuple], n: int) -> tuple:
    summands: List[List[int]] = [[] for _ in range(n)]
    for i, a in tree:
        summands[i - 1].append(a)
    return tuple(tuple(sorted(s)) for s in summands)


def _binom(a: int, b: int) -> int:
    from math import comb

    return comb(a, b)


_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class EnumerationReport:
    """Deterministic summary of an exhaustive run.

    Wall time is kept out of the canonical serialization so that reports
    for the same parameters are byte-identical across runs and workers.
    """

    n: int
    d: int
    counts: Dict[str, int] = field(default_factory=dict)
    checks: List[dict] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)
    wall_time_ms: Optional[float] = None

    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self, include_timing: bool = False) -> dict:
        data = {
            "n": self.n,
            "d": self.d,
            "counts": dict(sorted(self.counts.items())),
            "checks": sorted(self.checks, key=lambda c: c["name"]),
            "details": {k: self.details[k] for k in sorted(self.details)},
        }
        if include_timing and self.wall_time_ms is not None:
            data["wall_time_ms"] = self.wall_time_ms
        return data

    def canonical_bytes(self) -> bytes:
        return json.dumps(
            self.to_json(), sort_keys=True, separators=(",", ":")
        ).encode()


def _check(name: str, passed: bool, witness=None) -> dict:
    entry = {"name": name, "passed": bool(passed)}
    if witness is not None:
        entry["witness"] = witness
    return entry


# ---------------------------------------------------------------------------
# The system sweep
# ---------------------------------------------------------------------------

_SYSTEM_FLAGS = ("transport", "involution", "spread", "h_subgraph")


def _sweep_systems_chunk(args) -> dict:
    n, d, first_words, with_realize = args
    t = sweep_tables(n, d)
    out = {
        "count": 0,
        "flags": {k: True for k in _SYSTEM_FLAGS},
        "witnesses": {},
        "realize_ok": True,
        "routing_ok": True,
        "positions_ok": True,
    }
    for raw in iter_raw_systems(n, d, first_words):
        out["count"] += 1
        checks = raw_checks(raw, t)
        for flag in _SYSTEM_FLAGS:
            if not checks[flag] and out["flags"][flag]:
                out["flags"][flag] = False
                out["witnesses"][flag] = raw[0]
        if with_realize and d == 3:
            system = raw_to_system(raw, t)
            tiling = lozenge.realize(system)
            if lozenge.extract_system(tiling) != system:
                if out["realize_ok"]:
                    out["realize_ok"] = False
                    out["witnesses"]["realize"] = raw[0]
            routed = lozenge.realize_via_routing(system)
            if lozenge.extract_system(routed) != system:
                if out["routing_ok"]:
                    out["routing_ok"] = False
                    out["witnesses"]["routing"] = raw[0]
            pq = lozenge.positions_from_system(system)
            got = tuple(
                (x[0] + x[2] + 1, x[2] + 1) for x in checks["positions"]
            )
            if pq != got and out["positions_ok"]:
                out["positions_ok"] = False
                out["witnesses"]["positions"] = raw[0]
    return out


def _merge_chunks(chunks: List[dict]) -> dict:
    merged = {
        "count": 0,
        "flags": {k: True for k in _SYSTEM_FLAGS},
        "witnesses": {},
        "realize_ok": True,
        "routing_ok": True,
        "positions_ok": True,
    }
    for chunk in chunks:
        merged["count"] += chunk["count"]
        for flag in _SYSTEM_FLAGS:
            merged["flags"][flag] &= chunk["flags"][flag]
        for key in ("realize_ok", "routing_ok", "positions_ok"):
            merged[key] &= chunk[key]
        for key, witness in chunk["witnesses"].items():
            old = merged["witnesses"].get(key)
            if old is None or witness < old:
                merged["witnesses"][key] = witness
    return merged


def sweep_systems(
    n: int, d: int, workers: int = 1, with_realize: bool = True
) -> dict:
    """Run every packed per-system check over all acyclic systems."""
    if not systems_feasible(n, d):
        raise InfeasibleScale(f"system sweep at (n, d) = ({n}, {d}) not configured")
    t = sweep_tables(n, d)
    n_words = len(t.words) if t.edges else 1
    if workers <= 1 or n_words == 1:
        chunks = [_sweep_systems_chunk((n, d, None, with_realize))]
    else:
        workers = min(workers, n_words)
        groups = [list(range(k, n_words, workers)) for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(
                pool.map(
                    _sweep_systems_chunk,
                    [(n, d, g, with_realize) for g in groups],
                )
            )
    return _merge_chunks(chunks)


# ---------------------------------------------------------------------------
# The subdivision sweep
# ---------------------------------------------------------------------------

def _subdivision_checks(sub: FineMixedSubdivision) -> dict:
    """All per-subdivision predicates used by the harness."""
    out = {}
    try:
        subdivision.validate(sub)
        out["valid"] = True
    except Exception:
        out["valid"] = False
        return out
    simplex_positions = subdivision.simplices(sub)
    out["simplex_count"] = True  # simplices() raises on a bad count
    out["simplices_spread"] = systems.is_spread_out(simplex_positions)
    out["volume"] = (
        sum(subdivision.cell_volume(c, sub.d) for c in sub.cells)
        == sub.n ** (sub.d - 1)
    )
    out["multinomial_census"] = subdivision.multinomial_census_ok(sub)
    out["cayley_roundtrip"] = (
        subdivision.cayley_to_mixed(
            subdivision.mixed_to_cayley(sub), sub.n, sub.d
        )
        == sub
    )
    dual_sub = subdivision.dual(sub)
    out["double_dual"] = subdivision.dual(dual_sub) == sub
    if sub.d < 2:
        return out
    sigma = subdivision.system_of_permutations(sub)
    out["acyclic"] = systems.is_acyclic(sigma)
    if out["acyclic"]:
        table = systems.table_of_positions(sigma)
        out["positions_determined"] = (
            simplex_positions
            == tuple(table.position(i) for i in range(1, sub.n + 1))
        )
        full = frozenset(range(1, sub.d + 1))
        rows_ok = True
        for cell in sub.cells:
            wide = [i for i, s in enumerate(cell, 1) if len(s) == sub.d]
            if wide:
                i = wide[0]
                row = table.rows[i - 1]
                for j, summand in enumerate(cell, 1):
                    want = full if j == i else row[j - 1]
                    if frozenset(summand) != want:
                        rows_ok = False
        out["decompositions_determined"] = rows_ok
    if out["acyclic"] and sub.n >= 2:
        out["dual_system"] = (
            subdivision.system_of_permutations(dual_sub) == systems.dual(sigma)
        )
    ok_del, ok_con = True, True
    for i in range(1, sub.n + 1):
        if sub.n > 1:
            deleted = subdivision.delete_color(sub, i)
            if subdivision.dual(deleted) != subdivision.contract_letter(dual_sub, i):
                ok_del = False
            if sub.n - 1 >= 1 and sub.d >= 2:
                if subdivision.system_of_permutations(deleted) != systems.delete_color(
                    sigma, i
                ):
                    ok_del = False
    for a in range(1, sub.d + 1):
        if sub.d > 1:
            contracted = subdivision.contract_letter(sub, a)
            if subdivision.dual(contracted) != subdivision.delete_color(dual_sub, a):
                ok_con = False
            if sub.d - 1 >= 2:
                if subdivision.system_of_permutations(
                    contracted
                ) != systems.contract_letter(sigma, a):
                    ok_con = False
    out["deletion_compat"] = ok_del
    out["contraction_compat"] = ok_con
    return out


_SUBDIVISION_FLAGS = (
    "valid",
    "acyclic",
    "simplex_count",
    "positions_determined",
    "decompositions_determined",
    "simplices_spread",
    "volume",
    "multinomial_census",
    "cayley_roundtrip",
    "double_dual",
    "dual_system",
    "deletion_compat",
    "contraction_compat",
)


def sweep_subdivisions(n: int, d: int, method: str = "auto") -> dict:
    out = {
        "count": 0,
        "flags": {k: True for k in _SUBDIVISION_FLAGS},
        "witnesses": {},
    }
    groups: Dict[SystemOfPermutations, tuple] = {}
    positions_unique = True
    for sub in enumerate_subdivisions(n, d, method=method):
        out["count"] += 1
        checks = _subdivision_checks(sub)
        for flag in _SUBDIVISION_FLAGS:
            if flag in checks and not checks[flag] and out["flags"][flag]:
                out["flags"][flag] = False
                out["witnesses"][flag] = sub.to_json()
        if d >= 2 and checks.get("valid"):
            sigma = subdivision.system_of_permutations(sub)
            pos = subdivision.simplices(sub)
            if groups.setdefault(sigma, pos) != pos:
                positions_unique = False
                out["witnesses"].setdefault("positions_unique", sub.to_json())
    out["flags"]["positions_unique"] = positions_unique
    return out


# ---------------------------------------------------------------------------
# check_all_theorems
# ---------------------------------------------------------------------------

def check_all_theorems(n: int, d: int, workers: int = 1) -> EnumerationReport:
    """Machine-check every theorem over the enumerable universe at (n, d)."""
    import time

    start = time.perf_counter()
    report = EnumerationReport(n=n, d=d)
    if systems_feasible(n, d):
        with_realize = d == 3 and n <= MAX_LOZENGE_N
        sweep = sweep_systems(n, d, workers=workers, with_realize=with_realize)
        report.counts["acyclic_systems"] = sweep["count"]
        wit = sweep["witnesses"]

        def witness_json(key):
            if key not in wit:
                return None
            t = sweep_tables(n, d)
            return {
                "perms": {
                    f"{a},{b}": list(t.words[wid])
                    for (a, b), wid in zip(t.edges, wit[key])
                }
            }

        report.checks.append(
            _check(
                "order_transport",
                sweep["flags"]["transport"],
                witness_json("transport"),
            )
        )
        report.checks.append(
            _check(
                "system_double_dual",
                sweep["flags"]["involution"],
                witness_json("involution"),
            )
        )
        report.checks.append(
            _check(
                "system_positions_spread_out",
                sweep["flags"]["spread"],
                witness_json("spread"),
            )
        )
        report.checks.append(
            _check(
                "h_graphs_inside_edge_tournaments",
                sweep["flags"]["h_subgraph"],
                witness_json("h_subgraph"),
            )
        )
        if with_realize:
            report.checks.append(
                _check(
                    "realize_round_trip",
                    sweep["realize_ok"],
                    witness_json("realize"),
                )
            )
            report.checks.append(
                _check(
                    "routing_realizer_round_trip",
                    sweep["routing_ok"],
                    witness_json("routing"),
                )
            )
            report.checks.append(
                _check(
                    "factorization_positions_match_sources",
                    sweep["positions_ok"],
                    witness_json("positions"),
                )
            )
    if subdivisions_feasible(n, d):
        sweep = sweep_subdivisions(n, d)
        report.counts["subdivisions"] = sweep["count"]
        named = {
            "valid": "all_subdivisions_validate",
            "acyclic": "extracted_systems_acyclic",
            "simplex_count": "simplex_count_is_n",
            "positions_determined": "positions_determined_by_system",
            "decompositions_determined": "decompositions_determined_by_system",
            "simplices_spread": "simplices_spread_out",
            "volume": "volume_census",
            "multinomial_census": "dim_vector_census_conjecture",
            "cayley_roundtrip": "cayley_round_trip",
            "double_dual": "double_dual_subdivision",
            "dual_system": "dual_subdivision_system_compatible",
            "deletion_compat": "deletion_duality_compatible",
            "contraction_compat": "contraction_duality_compatible",
            "positions_unique": "positions_unique_per_system",
        }
        for flag, name in named.items():
            report.checks.append(
                _check(name, sweep["flags"][flag], sweep["witnesses"].get(flag))
            )
    if d == 3 and n <= MAX_LOZENGE_N:
        count = 0
        bijection_ok = True
        for tiling in lozenge.enumerate_tilings(n):
            count += 1
            if lozenge.routing_to_tiling(lozenge.tiling_to_routing(tiling)) != tiling:
                bijection_ok = False
        report.counts["tilings"] = count
        report.checks.append(_check("routing_bijection_round_trip", bijection_ok))
    report.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return report


# ---------------------------------------------------------------------------
# n = 3 realization and the conjecture search
# ---------------------------------------------------------------------------

def realize_n3(system: SystemOfPermutations) -> FineMixedSubdivision:
    """Realize an acyclic system with three colors in any dimension.

    The dual system lives on the triangle, so a lozenge realization of the
    dual dualizes back to a subdivision with the wanted system.
    """
    if system.n != 3:
        raise InfeasibleScale(f"realize_n3 needs n = 3, got n = {system.n}")
    systems.require_acyclic(system)
    dual_system = systems.dual(system)
    tiling = lozenge.realize(dual_system)
    dual_sub = lozenge.to_subdivision(tiling)
    sub = subdivision.dual(dual_sub)
    subdivision.validate(sub)
    if subdivision.system_of_permutations(sub) != system:
        raise InternalInvariantViolation("realize_n3 produced a wrong system")
    return sub


def _position_type(positions: tuple, d: int) -> tuple:
    """Canonical form of a position tuple under letter relabeling."""
    best = None
    for tau in permutations(range(d)):
        image = tuple(
            tuple(sorted((x[tau[a]] for a in range(d)), reverse=True))
            for x in positions
        )
        key = tuple(sorted(image))
        if best is None or key < best:
            best = key
    return best


def weak_conjecture_search(n: int, d: int, workers: int = 1) -> EnumerationReport:
    """Search for spread-out position tuples missed by every acyclic system.

    Enumerates all ordered spread-out n-tuples of lattice positions and
    matches them against the positions realized by acyclic systems;
    unmatched tuples are counterexample candidates.
    """
    import time

    start = time.perf_counter()
    if not systems_feasible(n, d):
        raise InfeasibleScale(f"search at (n, d) = ({n}, {d}) not configured")
    t = sweep_tables(n, d)
    realized: Dict[tuple, tuple] = {}
    for raw in iter_raw_systems(n, d):
        positions = raw_positions(raw, t)
        if positions not in realized:
            realized[positions] = raw[0]
    points = list(_vectors_summing(n - 1, d))
    spread_tuples = [
        combo
        for combo in product(points, repeat=n)
        if systems.is_spread_out(combo, n)
    ]
    unmatched = sorted(c for c in spread_tuples if c not in realized)
    report = EnumerationReport(n=n, d=d)
    report.counts["spread_out_tuples"] = len(spread_tuples)
    report.counts["realized_position_tuples"] = len(realized)
    report.counts["unmatched"] = len(unmatched)
    report.checks.append(
        _check(
            "weak_spread_out_conjecture",
            not unmatched,
            [[list(x) for x in combo] for combo in unmatched[:5]] or None,
        )
    )
    if n == 3:
        transcript = {}
        for positions, word_ids in sorted(realized.items()):
            kind = _position_type(positions, d)
            if kind not in transcript:
                transcript[kind] = {
                    "positions": [list(x) for x in positions],
                    "system": {
                        f"{a},{b}": list(t.words[wid])
                        for (a, b), wid in zip(t.edges, word_ids)
                    },
                }
        report.details["realizing_systems_per_type"] = [
            transcript[k] for k in sorted(transcript)
        ]
        report.counts["combinatorial_types"] = len(transcript)
    report.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return report
