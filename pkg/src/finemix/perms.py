"""Permutations of {1..n} as words, and tournaments on {1..d}.

A permutation is a tuple ``w`` of the integers 1..n where ``w[k-1]`` is the
image of ``k``.  Composition is right-to-left: ``compose(f, g)`` applies
``g`` first.

Two canonical cycle factorizations are provided.  Writing ``(i..p)`` for
the increasing cycle (i, i+1, ..., p) and ``(i..q)`` for the decreasing
cycle (i, i-1, ..., q):

    ascending   u = (n..p_n) o ... o (2..p_2) o (1..p_1),   i <= p_i <= n
    descending  v = (1..q_1) o ... o (n-1..q_{n-1}) o (n..q_n),  1 <= q_i <= i

Both factorizations exist and are unique; the rightmost factor acts first.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

from .errors import BadBounds, CyclicTournament

Word = tuple  # tuple[int, ...], a permutation in one-line notation


def check_word(w: Sequence[int]) -> Word:
    """Validate that w is a permutation word of {1..n} and return it as a tuple."""
    word = tuple(int(x) for x in w)
    n = len(word)
    if sorted(word) != list(range(1, n + 1)):
        raise BadBounds(f"not a permutation word of 1..{n}: {word}", word=list(word))
    return word


def identity(n: int) -> Word:
    return tuple(range(1, n + 1))


def reverse(w: Sequence[int]) -> Word:
    return tuple(reversed(w))


def inverse(w: Sequence[int]) -> Word:
    inv = [0] * len(w)
    for k, image in enumerate(w, start=1):
        inv[image - 1] = k
    return tuple(inv)


def compose(f: Sequence[int], g: Sequence[int]) -> Word:
    """Composition f o g (g acts first)."""
    return tuple(f[x - 1] for x in g)


def apply_cycle(word: list, cycle: Sequence[int]) -> None:
    """In place, replace word by word o c where c maps cycle[k] -> cycle[k+1]."""
    if len(cycle) < 2:
        return
    # (w o c)(cycle[k]) = w(cycle[k+1]); cycle[-1] maps back to cycle[0].
    first = word[cycle[0] - 1]
    for k in range(len(cycle) - 1):
        word[cycle[k] - 1] = word[cycle[k + 1] - 1]
    word[cycle[-1] - 1] = first


def compose_cycles(cycles: Iterable[Sequence[int]], n: int) -> Word:
    """Compose cycles on {1..n} listed in composition order.

    ``compose_cycles([c0, c1, c2], n)`` is c0 o c1 o c2, the last listed
    cycle acting first.
    """
    word = list(identity(n))
    for cycle in cycles:
        apply_cycle(word, cycle)
    return tuple(word)


# ---------------------------------------------------------------------------
# The two canonical factorizations
# ---------------------------------------------------------------------------

def compose_from_factors(p: Sequence[int]) -> Word:
    """Build u = (n..p_n) o ... o (1..p_1) from an ascending factorization."""
    n = len(p)
    for i, pi in enumerate(p, start=1):
        if not i <= pi <= n:
            raise BadBounds(f"ascending factor p_{i}={pi} outside {i}..{n}", p=list(p))
    return compose_cycles([tuple(range(i, p[i - 1] + 1)) for i in range(n, 0, -1)], n)


def compose_from_factors_desc(q: Sequence[int]) -> Word:
    """Build v = (1..q_1) o ... o (n..q_n) from a descending factorization."""
    n = len(q)
    for i, qi in enumerate(q, start=1):
        if not 1 <= qi <= i:
            raise BadBounds(f"descending factor q_{i}={qi} outside 1..{i}", q=list(q))
    return compose_cycles(
        [tuple(range(i, q[i - 1] - 1, -1)) for i in range(1, n + 1)], n
    )


def factor_ascending(u: Sequence[int]) -> Word:
    """The unique p with i <= p_i <= n and u = (n..p_n) o ... o (1..p_1).

    Peels factors off: p_i is forced to be the current preimage of i, and
    cancelling the cycle (i..p_i) fixes i, shrinking the problem.
    """
    w = list(check_word(u))
    n = len(w)
    p = []
    for i in range(1, n + 1):
        pi = w.index(i) + 1
        p.append(pi)
        if pi > i:
            seg = w[i - 1 : pi]
            w[i - 1 : pi] = [seg[-1]] + seg[:-1]
    return tuple(p)


def factor_descending(v: Sequence[int]) -> Word:
    """The unique q with 1 <= q_i <= i and v = (1..q_1) o ... o (n..q_n)."""
    w = list(check_word(v))
    n = len(w)
    q = [0] * n
    for k in range(n, 0, -1):
        qk = w.index(k) + 1
        q[k - 1] = qk
        if qk < k:
            seg = w[qk - 1 : k]
            w[qk - 1 : k] = seg[1:] + [seg[0]]
    return tuple(q)


def factors_from_inversions(u: Sequence[int], v: Sequence[int]) -> tuple:
    """Both factorizations at once, by counting inversions.

    p_k = k + #{l > k : u^-1(l) < u^-1(k)}
    q_k = k - #{l < k : v^-1(l) > v^-1(k)}
    """
    u = check_word(u)
    v = check_word(v)
    ui = inverse(u)
    vi = inverse(v)
    n = len(u)
    p = tuple(
        k + sum(1 for l in range(k + 1, n + 1) if ui[l - 1] < ui[k - 1])
        for k in range(1, n + 1)
    )
    q = tuple(
        k - sum(1 for l in range(1, k) if vi[l - 1] > vi[k - 1])
        for k in range(1, n + 1)
    )
    return p, q


def ascending_suffix_words(p: Sequence[int]) -> list:
    """The partial products pi_k = (p_k..k) o ... o (p_n..n), k = n down to 1.

    pi_k is a permutation of {k..n}; it is returned as the word
    (pi_k(k), ..., pi_k(n)).  The list is ordered pi_n, pi_{n-1}, ..., pi_1.
    """
    n = len(p)
    out = []
    pi = {}  # current pi_{k+1} as a map on {k+1..n}
    for k in range(n, 0, -1):
        pk = p[k - 1]
        if not k <= pk <= n:
            raise BadBounds(f"ascending factor p_{k}={pk} outside {k}..{n}", p=list(p))
        cyc = {x: x - 1 for x in range(k + 1, pk + 1)}
        cyc[k] = pk
        pi = {x: cyc.get(pi.get(x, x), pi.get(x, x)) for x in range(k, n + 1)}
        out.append(tuple(pi[x] for x in range(k, n + 1)))
    return out


def all_words(n: int) -> Iterator[Word]:
    """All permutation words of {1..n} in lexicographic order."""
    from itertools import permutations

    return permutations(range(1, n + 1))


# ---------------------------------------------------------------------------
# Tournaments on {1..d}
# ---------------------------------------------------------------------------

def _pair_index(a: int, b: int) -> int:
    # index of the unordered pair {a,b}, a < b, in colex order
    return (b - 1) * (b - 2) // 2 + (a - 1)


class Tournament:
    """An orientation of the complete graph on {1..d}.

    Stored as a bitmask over unordered pairs: bit set means the pair
    {a,b} with a < b is directed a -> b.
    """

    __slots__ = ("d", "bits")

    def __init__(self, d: int, bits: int = 0):
        self.d = d
        self.bits = bits

    @classmethod
    def from_edges(cls, d: int, edges: Iterable[tuple]) -> "Tournament":
        """Build from an iterable of directed pairs covering every pair once."""
        seen = set()
        bits = 0
        for a, b in edges:
            lo, hi = min(a, b), max(a, b)
            if not (1 <= lo < hi <= d):
                raise BadBounds(f"edge ({a},{b}) outside 1..{d}")
            if (lo, hi) in seen:
                raise BadBounds(f"pair {{{lo},{hi}}} oriented twice")
            seen.add((lo, hi))
            if a < b:
                bits |= 1 << _pair_index(lo, hi)
        if len(seen) != d * (d - 1) // 2:
            raise BadBounds("not every pair is oriented")
        return cls(d, bits)

    @classmethod
    def from_order(cls, word: Sequence[int]) -> "Tournament":
        """The transitive tournament with a -> b iff a precedes b in word."""
        word = check_word(word)
        pos = inverse(word)
        d = len(word)
        bits = 0
        for b in range(2, d + 1):
            for a in range(1, b):
                if pos[a - 1] < pos[b - 1]:
                    bits |= 1 << _pair_index(a, b)
        return cls(d, bits)

    def points_to(self, a: int, b: int) -> bool:
        """True iff the pair {a,b} is directed a -> b."""
        if a == b or not (1 <= a <= self.d and 1 <= b <= self.d):
            raise BadBounds(f"bad pair ({a},{b}) for d={self.d}")
        if a < b:
            return bool(self.bits >> _pair_index(a, b) & 1)
        return not bool(self.bits >> _pair_index(b, a) & 1)

    def out_degrees(self) -> list:
        degs = [0] * self.d
        for b in range(2, self.d + 1):
            for a in range(1, b):
                if self.bits >> _pair_index(a, b) & 1:
                    degs[a - 1] += 1
                else:
                    degs[b - 1] += 1
        return degs

    def is_acyclic(self) -> bool:
        """Acyclic iff the out-degrees are 0, 1, ..., d-1 in some order."""
        return sorted(self.out_degrees()) == list(range(self.d))

    def find_three_cycle(self) -> Optional[tuple]:
        """A directed triangle (a, b, c) with a->b->c->a, or None."""
        for a in range(1, self.d + 1):
            for b in range(1, self.d + 1):
                if b == a or not self.points_to(a, b):
                    continue
                for c in range(1, self.d + 1):
                    if c in (a, b):
                        continue
                    if self.points_to(b, c) and self.points_to(c, a):
                        return (a, b, c)
        return None

    def is_acyclic_by_triangles(self) -> bool:
        """Complete graphs are acyclic iff every triangle is."""
        return self.find_three_cycle() is None

    def to_permutation(self) -> Word:
        """The word listing vertices by decreasing out-degree.

        Position a holds the vertex of out-degree d - a; the source comes
        first and the sink last.
        """
        degs = self.out_degrees()
        if sorted(degs) != list(range(self.d)):
            raise CyclicTournament(
                "tournament has a directed cycle",
                cycle=list(self.find_three_cycle() or ()),
            )
        word = [0] * self.d
        for v, deg in enumerate(degs, start=1):
            word[self.d - 1 - deg] = v
        return tuple(word)

    def reversed_(self) -> "Tournament":
        full = (1 << (self.d * (self.d - 1) // 2)) - 1
        return Tournament(self.d, self.bits ^ full)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tournament)
            and self.d == other.d
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.d, self.bits))

    def __repr__(self) -> str:
        edges = []
        for b in range(2, self.d + 1):
            for a in range(1, b):
                edges.append(f"{a}->{b}" if self.points_to(a, b) else f"{b}->{a}")
        return f"Tournament(d={self.d}, {' '.join(edges)})"


def all_tournaments(d: int) -> Iterator[Tournament]:
    for bits in range(1 << (d * (d - 1) // 2)):
        yield Tournament(d, bits)
