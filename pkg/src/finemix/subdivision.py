"""Fine mixed subdivisions of n Delta_{d-1}, exactly.

A cell is an ordered list of n nonempty letter sets B_1..B_n (the Minkowski
summands); the cell is the polytope sum(conv{e_a : a in B_i}) inside the
hyperplane x_1+...+x_d = n.  A cell is *fine* when the summand dimensions
add up to d-1 and the bipartite graph {(i,a) : a in B_i} is a spanning tree
of colors and letters.

Geometry is exact and purely combinatorial: a cell equals the polymatroid
base polytope of f(A) = #{i : B_i meets A}, so faces, lattice points, and
pairwise intersections are decided by integer comparisons (the intersection
of two such polytopes is again a lattice polytope).
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, product
from math import comb, factorial
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from . import perms, systems
from .errors import (
    BadBounds,
    BadIntersection,
    EmptySummand,
    IndexOutOfRange,
    MalformedEdgeRestriction,
    NotATriangulation,
    NotFine,
    SimplexCountMismatch,
    VolumeMismatch,
)
from .systems import SystemOfPermutations

Cell = Tuple[Tuple[int, ...], ...]  # summand i is a sorted tuple of letters


def make_cell(summands: Sequence[Sequence[int]]) -> Cell:
    return tuple(tuple(sorted(set(s))) for s in summands)


def check_cell(cell: Cell, n: int, d: int) -> Cell:
    cell = make_cell(cell)
    if len(cell) != n:
        raise BadBounds(f"cell has {len(cell)} summands, expected {n}")
    for i, summand in enumerate(cell, start=1):
        if not summand:
            raise EmptySummand(f"summand {i} is empty", cell=[list(s) for s in cell])
        if summand[0] < 1 or summand[-1] > d:
            raise IndexOutOfRange(f"summand {i} uses letters outside 1..{d}")
    return cell


def cell_is_fine(cell: Cell, d: int) -> bool:
    """Dimensions add to d-1 and the summand graph is a spanning tree."""
    n = len(cell)
    edges = sum(len(s) for s in cell)
    if edges != n + d - 1:
        return False
    # union-find over n colors + d letters
    parent = list(range(n + d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, summand in enumerate(cell):
        for a in summand:
            ri, ra = find(i), find(n + a - 1)
            if ri == ra:
                return False  # cycle
            parent[ri] = ra
    return True


def cell_volume(cell: Cell, d: int) -> int:
    """Normalized volume (d-1)! / prod (|B_i| - 1)! of a fine cell."""
    vol = factorial(d - 1)
    for summand in cell:
        vol //= factorial(len(summand) - 1)
    return vol


def cell_dim_vector(cell: Cell) -> Tuple[int, ...]:
    return tuple(len(s) - 1 for s in cell)


# ---------------------------------------------------------------------------
# Exact cell geometry (polymatroid view)
# ---------------------------------------------------------------------------

def _summand_masks(cell: Cell) -> List[int]:
    return [sum(1 << (a - 1) for a in s) for s in cell]


def cell_rank(cell: Cell, mask: int) -> int:
    """f(A) = #{i : B_i meets A}; the max of sum_{a in A} x_a over the cell."""
    return sum(1 for m in _summand_masks(cell) if m & mask)


def cell_vertices(cell: Cell, d: int) -> FrozenSet[Tuple[int, ...]]:
    """All lattice vertices: one letter picked from each summand."""
    verts = set()
    for pick in product(*cell):
        v = [0] * d
        for a in pick:
            v[a - 1] += 1
        verts.add(tuple(v))
    return frozenset(verts)


_rank_vector_cache: Dict[Tuple[int, ...], tuple] = {}


def _rank_vector(x: Tuple[int, ...]) -> tuple:
    """sum over each letter subset of the coordinates of x, indexed by bitmask."""
    cached = _rank_vector_cache.get(x)
    if cached is not None:
        return cached
    d = len(x)
    out = [0] * (1 << d)
    for mask in range(1, 1 << d):
        low = mask & -mask
        out[mask] = out[mask ^ low] + x[low.bit_length() - 1]
    out = tuple(out)
    _rank_vector_cache[x] = out
    return out


def _compositions_of(total: int, parts: int) -> List[tuple]:
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _compositions_of(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def cell_lattice_points(cell: Cell, n: int, d: int) -> FrozenSet[Tuple[int, ...]]:
    """All integer points of the cell inside the hyperplane sum x = n."""
    masks = _summand_masks(cell)
    ranks = [sum(1 for m in masks if m & mask) for mask in range(1 << d)]
    top = (1 << d) - 1
    points = []
    for x in _compositions_of(n, d):
        rv = _rank_vector(x)
        if all(rv[mask] <= ranks[mask] for mask in range(1, top)):
            points.append(x)
    return frozenset(points)


class _CellGeometry:
    """Cached exact data used by the pairwise face-to-face test."""

    __slots__ = ("cell", "ranks", "vertices", "lattice")

    def __init__(self, cell: Cell, n: int, d: int):
        self.cell = cell
        masks = _summand_masks(cell)
        self.ranks = tuple(
            sum(1 for m in masks if m & mask) for mask in range(1 << d)
        )
        self.vertices = cell_vertices(cell, d)
        self.lattice = cell_lattice_points(cell, n, d)


_geometry_cache: Dict[tuple, _CellGeometry] = {}


def cell_geometry(cell: Cell, n: int, d: int) -> _CellGeometry:
    key = (cell, n, d)
    geo = _geometry_cache.get(key)
    if geo is None:
        geo = _CellGeometry(cell, n, d)
        _geometry_cache[key] = geo
    return geo


def cells_meet_face_to_face(
    geo_p: _CellGeometry, geo_q: _CellGeometry, d: int
) -> bool:
    """Exact test that the two cells intersect in a common face.

    Both cells are polymatroid base polytopes, so their intersection is a
    lattice polytope and equals the hull of the shared lattice points L.
    The intersection is a common face iff the minimal faces of each cell
    containing L coincide and every point of L lies on them.
    """
    L = geo_p.lattice & geo_q.lattice
    if not L:
        return True  # empty intersection, the empty face of both
    rvs = [_rank_vector(x) for x in L]
    top = (1 << d) - 1
    # constraints tight on all of conv(L); the face they cut out of each
    # cell is the minimal face containing the intersection
    tight_p = []
    tight_q = []
    for mask in range(1, top):
        low = min(rv[mask] for rv in rvs)
        if low == geo_p.ranks[mask]:
            tight_p.append(mask)
        if low == geo_q.ranks[mask]:
            tight_q.append(mask)
    face_p = {
        v
        for v in geo_p.vertices
        if all(_rank_vector(v)[mask] == geo_p.ranks[mask] for mask in tight_p)
    }
    face_q = {
        v
        for v in geo_q.vertices
        if all(_rank_vector(v)[mask] == geo_q.ranks[mask] for mask in tight_q)
    }
    if face_p != face_q:
        return False
    # distinct cells must meet in a proper face; equality of the underlying
    # polytopes would double-cover the region
    if face_p == geo_p.vertices and face_q == geo_q.vertices:
        return False
    # the Minkowski decompositions induced on the face must agree, or the
    # two labeled cells are not faces of one complex (the Cayley condition)
    return _face_labels(geo_p.cell, face_p) == _face_labels(geo_q.cell, face_q)


def _vertex_pick(cell: Cell, v: Tuple[int, ...]) -> tuple:
    """The unique choice of one letter per summand sending the cell onto v."""
    for pick in product(*cell):
        counts = [0] * len(v)
        for a in pick:
            counts[a - 1] += 1
        if tuple(counts) == v:
            return pick
    raise BadBounds(f"{v} is not a vertex of the cell")


def _face_labels(cell: Cell, face_vertices) -> FrozenSet[tuple]:
    pairs = set()
    for v in face_vertices:
        for i, a in enumerate(_vertex_pick(cell, v), 1):
            pairs.add((i, a))
    return frozenset(pairs)


# ---------------------------------------------------------------------------
# Subdivisions
# ---------------------------------------------------------------------------

class FineMixedSubdivision:
    """A set of fine mixed cells intended to tile n Delta_{d-1}.

    Cells are canonicalized (summands sorted, cell list sorted) so
    subdivisions compare by structural equality.  Construction checks only
    well-formedness; call validate() for the full tiling test.
    """

    __slots__ = ("n", "d", "cells", "color_map", "letter_map")

    def __init__(self, n: int, d: int, cells: Sequence[Sequence[Sequence[int]]]):
        if n < 0 or d < 1:
            raise BadBounds(f"need n >= 0 and d >= 1, got n={n} d={d}")
        self.n = n
        self.d = d
        self.cells: Tuple[Cell, ...] = tuple(
            sorted(check_cell(make_cell(c), n, d) for c in cells)
        )
        self.color_map = None
        self.letter_map = None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FineMixedSubdivision)
            and (self.n, self.d, self.cells) == (other.n, other.d, other.cells)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.d, self.cells))

    def __repr__(self) -> str:
        return f"FineMixedSubdivision(n={self.n}, d={self.d}, {len(self.cells)} cells)"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "cells": [[list(s) for s in cell] for cell in self.cells],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FineMixedSubdivision":
        return cls(int(data["n"]), int(data["d"]), data["cells"])


def validate(sub: FineMixedSubdivision) -> None:
    """Raise NotFine / VolumeMismatch / BadIntersection on the first failure."""
    n, d = sub.n, sub.d
    for cell in sub.cells:
        if not cell_is_fine(cell, d):
            raise NotFine(
                "cell is not fine", cell=[list(s) for s in cell]
            )
    total = sum(cell_volume(cell, d) for cell in sub.cells)
    if total != n ** (d - 1):
        raise VolumeMismatch(
            f"cell volumes sum to {total}, expected {n ** (d - 1)}",
            total=total,
            expected=n ** (d - 1),
        )
    if len(set(sub.cells)) != len(sub.cells):
        dup = next(c for c in sub.cells if sub.cells.count(c) > 1)
        raise BadIntersection(
            "duplicated cell", cells=[[list(s) for s in dup]] * 2
        )
    geos = [cell_geometry(cell, n, d) for cell in sub.cells]
    for gp, gq in combinations(geos, 2):
        key = (gp.cell, gq.cell, n, d)
        verdict = _face_to_face_cache.get(key)
        if verdict is None:
            verdict = cells_meet_face_to_face(gp, gq, d)
            _face_to_face_cache[key] = verdict
        if not verdict:
            raise BadIntersection(
                "cells do not meet in a common face",
                cells=[[list(s) for s in gp.cell], [list(s) for s in gq.cell]],
            )


_face_to_face_cache: Dict[tuple, bool] = {}


def is_valid(sub: FineMixedSubdivision) -> bool:
    try:
        validate(sub)
        return True
    except (NotFine, VolumeMismatch, BadIntersection):
        return False


# ---------------------------------------------------------------------------
# Edge restriction: the system of permutations
# ---------------------------------------------------------------------------

def _edge_word(sub: FineMixedSubdivision, a: int, b: int) -> perms.Word:
    """sigma_ab read off the one-dimensional faces on the edge (a, b)."""
    n = sub.n
    slots: List[Optional[int]] = [None] * n
    seen = set()
    for cell in sub.cells:
        restricted = []
        for summand in cell:
            inter = tuple(x for x in summand if x in (a, b))
            if not inter:
                break
            restricted.append(inter)
        else:
            long_ones = [i for i, s in enumerate(restricted, 1) if len(s) == 2]
            if len(long_ones) != 1:
                continue  # a vertex of the edge, not a unit segment
            face = tuple(restricted)
            if face in seen:
                continue
            seen.add(face)
            k = sum(1 for s in restricted if s == (b,)) + 1  # position from a
            color = long_ones[0]
            if not 1 <= k <= n or slots[k - 1] is not None:
                raise MalformedEdgeRestriction(
                    f"edge ({a},{b}) slot {k} filled twice", edge=[a, b]
                )
            slots[k - 1] = color
    if any(s is None for s in slots):
        raise MalformedEdgeRestriction(
            f"edge ({a},{b}) has uncovered segments", edge=[a, b]
        )
    return tuple(slots)


def system_of_permutations(sub: FineMixedSubdivision) -> SystemOfPermutations:
    """Restrict the subdivision to every edge of the big simplex."""
    if sub.d < 2:
        raise IndexOutOfRange("edges need d >= 2")
    words = {}
    for a, b in combinations(range(1, sub.d + 1), 2):
        forward = _edge_word(sub, a, b)
        backward = _edge_word(sub, b, a)
        if perms.reverse(forward) != backward:
            raise MalformedEdgeRestriction(
                f"edge ({a},{b}) readings are not mutually reversed", edge=[a, b]
            )
        words[(a, b)] = forward
    return SystemOfPermutations(n=sub.n, d=sub.d, perms=words)


# ---------------------------------------------------------------------------
# Duality, deletion, contraction
# ---------------------------------------------------------------------------

def dual(sub: FineMixedSubdivision) -> FineMixedSubdivision:
    """The dual subdivision of d Delta_{n-1}: Z_a = {i : a in B_i}."""
    cells = []
    for cell in sub.cells:
        cells.append(
            tuple(
                tuple(i for i in range(1, sub.n + 1) if a in cell[i - 1])
                for a in range(1, sub.d + 1)
            )
        )
    return FineMixedSubdivision(n=sub.d, d=sub.n, cells=cells)


def delete_color(sub: FineMixedSubdivision, i: int) -> FineMixedSubdivision:
    """Drop summand i everywhere, keeping the full-dimensional cells."""
    if not 1 <= i <= sub.n:
        raise IndexOutOfRange(f"color {i} outside 1..{sub.n}")
    if sub.n == 1:
        # the subdivision of 0 Delta is empty
        result = FineMixedSubdivision(n=0, d=sub.d, cells=[])
        result.color_map = {}
        return result
    d = sub.d
    kept = set()
    for cell in sub.cells:
        if len(cell[i - 1]) == 1:  # dimensions still sum to d-1
            kept.add(cell[: i - 1] + cell[i:])
    result = FineMixedSubdivision(n=sub.n - 1, d=d, cells=sorted(kept))
    result.color_map = {c: c - (c > i) for c in range(1, sub.n + 1) if c != i}
    return result


def contract_letter(sub: FineMixedSubdivision, a: int) -> FineMixedSubdivision:
    """Restrict to the facet avoiding letter a and drop a from the alphabet.

    The pieces of the facet subdivision are the faces of cells whose
    summands all survive removing a; only the full-dimensional ones are
    kept as cells.
    """
    if not 1 <= a <= sub.d:
        raise IndexOutOfRange(f"letter {a} outside 1..{sub.d}")
    if sub.d == 1:
        raise IndexOutOfRange("cannot contract the last letter")
    relabel = {b: b - (b > a) for b in range(1, sub.d + 1) if b != a}
    kept = set()
    for cell in sub.cells:
        face = []
        for summand in cell:
            rest = tuple(x for x in summand if x != a)
            if not rest:
                break
            face.append(rest)
        else:
            if sum(len(s) - 1 for s in face) == sub.d - 2:
                kept.add(tuple(tuple(relabel[x] for x in s) for s in face))
    result = FineMixedSubdivision(n=sub.n, d=sub.d - 1, cells=sorted(kept))
    result.letter_map = relabel
    return result


def relabel_colors(sub: FineMixedSubdivision, rho: Sequence[int]) -> FineMixedSubdivision:
    """Move summand i to slot rho[i-1] in every cell."""
    rho = perms.check_word(rho)
    if len(rho) != sub.n:
        raise BadBounds(f"relabeling size {len(rho)} != n={sub.n}")
    inv = perms.inverse(rho)
    cells = [
        tuple(cell[inv[k - 1] - 1] for k in range(1, sub.n + 1)) for cell in sub.cells
    ]
    return FineMixedSubdivision(n=sub.n, d=sub.d, cells=cells)


def relabel_letters(sub: FineMixedSubdivision, tau: Sequence[int]) -> FineMixedSubdivision:
    tau = perms.check_word(tau)
    if len(tau) != sub.d:
        raise BadBounds(f"relabeling size {len(tau)} != d={sub.d}")
    cells = [
        tuple(tuple(sorted(tau[x - 1] for x in s)) for s in cell) for cell in sub.cells
    ]
    return FineMixedSubdivision(n=sub.n, d=sub.d, cells=cells)


# ---------------------------------------------------------------------------
# Simplices and censuses
# ---------------------------------------------------------------------------

def simplices(sub: FineMixedSubdivision) -> Tuple[Tuple[int, ...], ...]:
    """Positions of the n unit simplex cells, ordered by the full summand's slot."""
    found: Dict[int, Tuple[int, ...]] = {}
    full = tuple(range(1, sub.d + 1))
    for cell in sub.cells:
        wide = [i for i, s in enumerate(cell, 1) if len(s) == sub.d]
        if not wide:
            continue
        if len(wide) > 1 or any(len(s) != 1 for i, s in enumerate(cell, 1) if i != wide[0]):
            continue
        i = wide[0]
        if cell[i - 1] != full:
            continue
        if i in found:
            raise SimplexCountMismatch(f"two simplex cells numbered {i}", color=i)
        pos = [0] * sub.d
        for j, s in enumerate(cell, 1):
            if j != i:
                pos[s[0] - 1] += 1
        found[i] = tuple(pos)
    if sorted(found) != list(range(1, sub.n + 1)):
        raise SimplexCountMismatch(
            f"found simplices for colors {sorted(found)}, expected 1..{sub.n}",
            colors=sorted(found),
        )
    return tuple(found[i] for i in range(1, sub.n + 1))


def dim_vector_census(sub: FineMixedSubdivision) -> Dict[Tuple[int, ...], int]:
    census: Dict[Tuple[int, ...], int] = {}
    for cell in sub.cells:
        key = cell_dim_vector(cell)
        census[key] = census.get(key, 0) + 1
    return census


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def multinomial_census_ok(sub: FineMixedSubdivision) -> bool:
    """Conjecture check: every dimension vector occurs exactly once.

    Summing the per-cell volumes over all compositions of d-1 into n parts
    is the multinomial expansion of n^(d-1), so a subdivision with one cell
    per composition automatically passes the volume census.
    """
    census = dim_vector_census(sub)
    return all(
        census.get(delta, 0) == 1 for delta in compositions(sub.d - 1, sub.n)
    )


# ---------------------------------------------------------------------------
# Cayley trick
# ---------------------------------------------------------------------------

def mixed_to_cayley(sub: FineMixedSubdivision) -> FrozenSet[FrozenSet[tuple]]:
    """Each cell B_1..B_n becomes the vertex set {(i, a) : a in B_i}."""
    return frozenset(
        frozenset((i, a) for i, s in enumerate(cell, 1) for a in s)
        for cell in sub.cells
    )


def cayley_to_mixed(
    simplices_: Sequence[FrozenSet[tuple]], n: int, d: int
) -> FineMixedSubdivision:
    """Inverse of mixed_to_cayley; validates the result as a subdivision."""
    cells = []
    for verts in simplices_:
        summands: List[List[int]] = [[] for _ in range(n)]
        for item in verts:
            try:
                i, a = item
            except (TypeError, ValueError):
                raise NotATriangulation(f"bad Cayley vertex {item!r}")
            if not (1 <= i <= n and 1 <= a <= d):
                raise NotATriangulation(f"Cayley vertex {item!r} out of range")
            summands[i - 1].append(a)
        if any(not s for s in summands):
            raise NotATriangulation("a simplex misses some color entirely")
        if sum(len(s) for s in summands) != n + d - 1:
            raise NotATriangulation("a simplex has the wrong vertex count")
        cell = make_cell(summands)
        if not cell_is_fine(cell, d):
            raise NotATriangulation("a simplex is not a spanning tree")
        cells.append(cell)
    sub = FineMixedSubdivision(n=n, d=d, cells=cells)
    try:
        validate(sub)
    except (NotFine, VolumeMismatch, BadIntersection) as exc:
        raise NotATriangulation(f"not a triangulation: {exc}") from exc
    return sub


def chain_subdivision(n: int, d: int) -> FineMixedSubdivision:
    """The staircase subdivision; for n = 2 every subdivision is isomorphic to it.

    Cells are chains of letter intervals glued at shared endpoints: one cell
    {w_c..w_d} + {w_1..w_c} per cut c when n = 2, and in general one cell
    per weakly decreasing cut sequence d >= c_1 >= ... >= c_{n-1} >= 1.
    """
    cells = []
    for cuts in combinations_with_replacement(range(1, d + 1), n - 1):
        c = tuple(reversed(cuts)) + (1,)
        cell = [tuple(range(c[0], d + 1))]
        for i in range(1, n):
            cell.append(tuple(range(c[i], c[i - 1] + 1)))
        cells.append(tuple(cell))
    return FineMixedSubdivision(n=n, d=d, cells=cells)
