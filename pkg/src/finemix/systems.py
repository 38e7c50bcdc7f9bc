"""Systems of permutations on the edges of a dilated simplex.

A system assigns a permutation sigma_ab of the colors {1..n} to every
ordered edge (a, b) of the letter simplex on {1..d}, with sigma_ba the
reverse of sigma_ab.  Only the orientation a < b is stored; reads for
(b, a) reverse on the fly, so the reversal invariant holds by
construction.

For each color pair (i, j) the tournament G_ij on the letters directs
a -> b exactly when i precedes j in sigma_ab.  The system is acyclic when
every G_ij is acyclic; checking directed triangles suffices because the
graphs are complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, Iterator, Optional, Sequence, Tuple

from . import perms
from .errors import BadBounds, IndexOutOfRange, NotAcyclic
from .perms import Tournament, Word

Pair = Tuple[int, int]


@dataclass(frozen=True)
class SystemOfPermutations:
    """One permutation of {1..n} per unordered edge {a,b} of {1..d}."""

    n: int
    d: int
    perms: Dict[Pair, Word] = field(compare=False)
    _key: Tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 0 or self.d < 1:
            raise BadBounds(f"need n >= 0 and d >= 1, got n={self.n} d={self.d}")
        cleaned = {}
        for (a, b), word in self.perms.items():
            if not (1 <= a <= self.d and 1 <= b <= self.d and a != b):
                raise IndexOutOfRange(f"edge ({a},{b}) outside letters 1..{self.d}")
            word = perms.check_word(word)
            if len(word) != self.n:
                raise BadBounds(f"edge ({a},{b}) carries a word of length {len(word)}")
            lo, hi = (a, b) if a < b else (b, a)
            stored = word if a < b else perms.reverse(word)
            if (lo, hi) in cleaned and cleaned[(lo, hi)] != stored:
                raise BadBounds(f"inconsistent words for edge {{{lo},{hi}}}")
            cleaned[(lo, hi)] = stored
        expected = {(a, b) for a, b in combinations(range(1, self.d + 1), 2)}
        if set(cleaned) != expected:
            missing = sorted(expected - set(cleaned))
            raise BadBounds(f"missing edges {missing}")
        object.__setattr__(self, "perms", cleaned)
        object.__setattr__(
            self, "_key", (self.n, self.d, tuple(sorted(cleaned.items())))
        )

    def sigma(self, a: int, b: int) -> Word:
        """The permutation of the ordered edge (a, b)."""
        if not (1 <= a <= self.d and 1 <= b <= self.d) or a == b:
            raise IndexOutOfRange(f"edge ({a},{b}) outside letters 1..{self.d}")
        if a < b:
            return self.perms[(a, b)]
        return perms.reverse(self.perms[(b, a)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SystemOfPermutations) and self._key == other._key
        )

    def __hash__(self) -> int:
        return hash(self._key)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "perms": {f"{a},{b}": list(w) for (a, b), w in sorted(self.perms.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "SystemOfPermutations":
        raw = {}
        for key, word in data["perms"].items():
            a, b = (int(x) for x in key.split(","))
            raw[(a, b)] = tuple(word)
        return cls(n=int(data["n"]), d=int(data["d"]), perms=raw)


def system_from_triangle(u: Sequence[int], v: Sequence[int], w: Sequence[int]) -> SystemOfPermutations:
    """Build a d=3 system from the clockwise edge words (u, v, w).

    With letter 1 at the top corner, 2 at the lower left and 3 at the lower
    right, u is read up the left edge (2 -> 1), v down the right edge
    (1 -> 3) and w along the bottom from right to left (3 -> 2).
    """
    u, v, w = perms.check_word(u), perms.check_word(v), perms.check_word(w)
    return SystemOfPermutations(
        n=len(u), d=3, perms={(2, 1): u, (1, 3): v, (3, 2): w}
    )


def triangle_words(system: SystemOfPermutations) -> Tuple[Word, Word, Word]:
    """The clockwise reading (u, v, w) of a d=3 system."""
    if system.d != 3:
        raise IndexOutOfRange(f"triangle reading needs d=3, got d={system.d}")
    return system.sigma(2, 1), system.sigma(1, 3), system.sigma(3, 2)


# ---------------------------------------------------------------------------
# Tournaments and acyclicity
# ---------------------------------------------------------------------------

def g_graph(system: SystemOfPermutations, i: int, j: int) -> Tournament:
    """The tournament on letters: a -> b iff color i precedes j in sigma_ab."""
    if not (1 <= i <= system.n and 1 <= j <= system.n) or i == j:
        raise IndexOutOfRange(f"colors ({i},{j}) outside 1..{system.n}")
    bits = 0
    for (a, b), word in system.perms.items():
        # a < b here, so sigma_ab is the stored word
        if word.index(i) < word.index(j):
            bits |= 1 << perms._pair_index(a, b)
    return Tournament(system.d, bits)


def acyclicity_witness(system: SystemOfPermutations) -> Optional[tuple]:
    """None when acyclic, else (i, j, (a, b, c)) with a directed triangle."""
    for i, j in combinations(range(1, system.n + 1), 2):
        cycle = g_graph(system, i, j).find_three_cycle()
        if cycle is not None:
            return (i, j, cycle)
    return None


def is_acyclic(system: SystemOfPermutations) -> bool:
    return acyclicity_witness(system) is None


def require_acyclic(system: SystemOfPermutations) -> None:
    witness = acyclicity_witness(system)
    if witness is not None:
        i, j, cycle = witness
        raise NotAcyclic(
            f"G_{i}{j} contains the directed triangle {cycle}",
            colors=[i, j],
            cycle=list(cycle),
        )


# ---------------------------------------------------------------------------
# Duality
# ---------------------------------------------------------------------------

def dual(system: SystemOfPermutations) -> SystemOfPermutations:
    """The dual system on the edges of d Delta_{n-1}.

    sigma*_ij lists the letters by decreasing out-degree in G_ij; the roles
    of colors and letters swap, and dual(dual(s)) == s.
    """
    require_acyclic(system)
    new_perms = {}
    for i, j in combinations(range(1, system.n + 1), 2):
        new_perms[(i, j)] = g_graph(system, i, j).to_permutation()
    return SystemOfPermutations(n=system.d, d=system.n, perms=new_perms)


# ---------------------------------------------------------------------------
# Relabeling, deletion, contraction
# ---------------------------------------------------------------------------

def relabel_colors(system: SystemOfPermutations, rho: Sequence[int]) -> SystemOfPermutations:
    """Rename color c to rho[c-1] in every permutation."""
    rho = perms.check_word(rho)
    if len(rho) != system.n:
        raise BadBounds(f"relabeling size {len(rho)} != n={system.n}")
    return SystemOfPermutations(
        n=system.n,
        d=system.d,
        perms={e: tuple(rho[c - 1] for c in w) for e, w in system.perms.items()},
    )


def relabel_letters(system: SystemOfPermutations, tau: Sequence[int]) -> SystemOfPermutations:
    """Rename letter a to tau[a-1], moving each edge word accordingly."""
    tau = perms.check_word(tau)
    if len(tau) != system.d:
        raise BadBounds(f"relabeling size {len(tau)} != d={system.d}")
    return SystemOfPermutations(
        n=system.n,
        d=system.d,
        perms={(tau[a - 1], tau[b - 1]): w for (a, b), w in system.perms.items()},
    )


def delete_color(system: SystemOfPermutations, i: int) -> SystemOfPermutations:
    """Drop color i from every permutation.

    Surviving colors are reindexed to the contiguous range 1..n-1; the
    result carries ``color_map`` mapping old labels to new ones.
    """
    if not 1 <= i <= system.n:
        raise IndexOutOfRange(f"color {i} outside 1..{system.n}")
    relabel = {c: c - (c > i) for c in range(1, system.n + 1) if c != i}
    new_perms = {
        e: tuple(relabel[c] for c in w if c != i) for e, w in system.perms.items()
    }
    result = SystemOfPermutations(n=system.n - 1, d=system.d, perms=new_perms)
    object.__setattr__(result, "color_map", relabel)
    return result


def contract_letter(system: SystemOfPermutations, a: int) -> SystemOfPermutations:
    """Restrict to the edges avoiding letter a.

    Surviving letters are reindexed to 1..d-1; the result carries
    ``letter_map`` mapping old labels to new ones.
    """
    if not 1 <= a <= system.d:
        raise IndexOutOfRange(f"letter {a} outside 1..{system.d}")
    if system.d == 1:
        raise IndexOutOfRange("cannot contract the last letter")
    relabel = {b: b - (b > a) for b in range(1, system.d + 1) if b != a}
    new_perms = {
        (relabel[x], relabel[y]): w
        for (x, y), w in system.perms.items()
        if a not in (x, y)
    }
    result = SystemOfPermutations(n=system.n, d=system.d - 1, perms=new_perms)
    object.__setattr__(result, "letter_map", relabel)
    return result


# ---------------------------------------------------------------------------
# Simplex positions, table of positions, H-graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableOfPositions:
    """Row i holds the Minkowski summands of simplex i (diagonal = full set)."""

    n: int
    d: int
    rows: Tuple[Tuple[frozenset, ...], ...]

    def position(self, i: int) -> Tuple[int, ...]:
        """Letter counts of the singleton summands in row i."""
        counts = [0] * self.d
        for j, cell in enumerate(self.rows[i - 1], start=1):
            if j != i:
                (a,) = cell
                counts[a - 1] += 1
        return tuple(counts)


def table_of_positions(system: SystemOfPermutations) -> TableOfPositions:
    """Simplex decompositions: entry (i, j) is the source of G_ij for j != i."""
    require_acyclic(system)
    full = frozenset(range(1, system.d + 1))
    rows = []
    for i in range(1, system.n + 1):
        row = []
        for j in range(1, system.n + 1):
            if i == j:
                row.append(full)
            else:
                source = g_graph(system, i, j).to_permutation()[0]
                row.append(frozenset([source]))
        rows.append(tuple(row))
    return TableOfPositions(n=system.n, d=system.d, rows=tuple(rows))


def simplex_positions(system: SystemOfPermutations) -> Tuple[Tuple[int, ...], ...]:
    """Lattice positions of the n unit simplices, ordered by color.

    x^i_a counts the colors j != i whose tournament G_ij has unique
    source a; each position sums to n - 1.
    """
    table = table_of_positions(system)
    return tuple(table.position(i) for i in range(1, system.n + 1))


def h_graph(table: TableOfPositions, a: int, b: int) -> frozenset:
    """Directed edges i -> j where letter a in row i shares a column with b in row j."""
    if not (1 <= a <= table.d and 1 <= b <= table.d) or a == b:
        raise IndexOutOfRange(f"letters ({a},{b}) outside 1..{table.d}")
    edges = set()
    for i, j in product(range(1, table.n + 1), repeat=2):
        if i == j:
            continue
        for col in range(1, table.n + 1):
            if a in table.rows[i - 1][col - 1] and b in table.rows[j - 1][col - 1]:
                edges.add((i, j))
                break
    return frozenset(edges)


# ---------------------------------------------------------------------------
# Spread-out test
# ---------------------------------------------------------------------------

def _threshold_vectors(total: int, d: int) -> Iterator[Tuple[int, ...]]:
    """All nonnegative integer d-vectors with the given coordinate sum."""
    if d == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _threshold_vectors(total - first, d - 1):
            yield (first,) + rest


def spread_out_witness(
    positions: Sequence[Sequence[int]], n: Optional[int] = None
) -> Optional[tuple]:
    """None when spread out, else (k, m) naming an overfull subsimplex.

    A subsimplex of size k is the set of lattice points dominating a
    threshold vector m with sum(m) = n - k; spread out means no such
    subsimplex holds more than k of the positions.
    """
    positions = [tuple(x) for x in positions]
    if n is None:
        n = len(positions)
    if not positions:
        return None
    d = len(positions[0])
    for k in range(1, n):
        for m in _threshold_vectors(n - k, d):
            hits = sum(
                1 for x in positions if all(xa >= ma for xa, ma in zip(x, m))
            )
            if hits > k:
                return (k, m)
    return None


def is_spread_out(positions: Sequence[Sequence[int]], n: Optional[int] = None) -> bool:
    return spread_out_witness(positions, n) is None


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def enumerate_acyclic_systems(n: int, d: int) -> Iterator[SystemOfPermutations]:
    """All acyclic systems on n Delta_{d-1}, backtracking edge by edge.

    Edges are filled in lexicographic order; after each assignment every
    color-pair tournament is checked for directed triangles among the
    letters assigned so far.
    """
    if n < 1 or d < 1:
        raise BadBounds(f"need n, d >= 1, got n={n} d={d}")
    edges = list(combinations(range(1, d + 1), 2))
    if not edges:
        yield SystemOfPermutations(n=n, d=d, perms={})
        return
    pairs = list(combinations(range(1, n + 1), 2))
    words = list(perms.all_words(n))
    positions = {w: perms.inverse(w) for w in words}
    # direction[(i, j)] is a dict edge -> bool (i precedes j)
    chosen: Dict[Pair, Word] = {}

    def triangles_ok(upto: int) -> bool:
        a, b = edges[upto]
        for c in range(1, d + 1):
            if c in (a, b):
                continue
            e1 = (min(a, c), max(a, c))
            e2 = (min(b, c), max(b, c))
            if e1 not in chosen or e2 not in chosen:
                continue
            for i, j in pairs:
                # orientation of each triangle side for the pair (i, j)
                ab = positions[chosen[(a, b)]][i - 1] < positions[chosen[(a, b)]][j - 1]
                ac = positions[chosen[e1]][i - 1] < positions[chosen[e1]][j - 1]
                if e1 != (a, c):
                    ac = not ac
                bc = positions[chosen[e2]][i - 1] < positions[chosen[e2]][j - 1]
                if e2 != (b, c):
                    bc = not bc
                # directions a->b, a->c, b->c as booleans; cyclic iff the
                # triangle is a->b->c->a or its reverse
                if ab and bc and not ac:
                    return False
                if not ab and not bc and ac:
                    return False
        return True

    def extend(k: int) -> Iterator[SystemOfPermutations]:
        if k == len(edges):
            yield SystemOfPermutations(n=n, d=d, perms=dict(chosen))
            return
        for word in words:
            chosen[edges[k]] = word
            if triangles_ok(k):
                yield from extend(k + 1)
        del chosen[edges[k]]

    yield from extend(0)
