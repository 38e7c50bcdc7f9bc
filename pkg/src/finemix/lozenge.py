"""Lozenge tilings of the triangle n Delta_2 and their permutation systems.

Grid conventions
----------------
Letters name the corners: 1 = A (top), 2 = B (lower left), 3 = C (lower
right).  Upward unit triangles sit at nodes x = (x1, x2, x3) with
x1+x2+x3 = n-1; U(x) has vertices x+e1, x+e2, x+e3 (vertex triples sum
to n).  Downward triangles D(y), y summing to n-2, have vertices
y+e1+e2, y+e1+e3, y+e2+e3.

A tiling covers every up node with either a colored triangle tile or a
rhombus; a rhombus of orientation a at anchor x is U(x) together with
D(x - e_a).  Orientation 1 is the vertical rhombus (D directly below U);
orientation 2 glues D across U's right edge, orientation 3 across its
left edge:

        *              *---*          *---*
       / \            / \ /            \ / \
      *---*      2:  *---*        3:    *---*
  1:  \   /          (leans NE)        (leans NW)
       \ /
        *

Routings: node (p, q) = (x1+x3+1, x3+1); the route graph has edges
(p,q) -> (p-1,q) and (p,q) -> (p,q+1), the bottom row is p = q, and a
tiling corresponds to n vertex-disjoint down-paths ending at (i, i): a
rhombus over each path edge, a vertical rhombus over each isolated node,
a triangle over each path top.

Each color c traces three rays from its triangle: down to edge BC
(taking summand {2,3} in every rhombus crossed), west to edge AB
(summand {1,2}), and east to edge CA (summand {1,3}).  Ray endpoints
read off the system of permutations; the regions between rays give the
singleton summands of every other cell.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from . import perms, subdivision, systems
from .errors import (
    BadBounds,
    InternalInvariantViolation,
    MalformedRouting,
    MalformedTiling,
    NoRoutingFound,
    UnsupportedDimension,
)
from .subdivision import FineMixedSubdivision
from .systems import SystemOfPermutations

Coord = Tuple[int, int, int]

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def _add(a: Coord, b: Coord) -> Coord:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _sub(a: Coord, b: Coord) -> Coord:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def up_nodes(n: int) -> Iterator[Coord]:
    for x1 in range(n):
        for x2 in range(n - x1):
            yield (x1, x2, n - 1 - x1 - x2)


def down_nodes(n: int) -> Iterator[Coord]:
    for y1 in range(n - 1):
        for y2 in range(n - 1 - y1):
            yield (y1, y2, n - 2 - y1 - y2)


def node_pq(x: Coord) -> Tuple[int, int]:
    return (x[0] + x[2] + 1, x[2] + 1)


def pq_node(p: int, q: int, n: int) -> Coord:
    return (p - q, n - p, q - 1)


# ---------------------------------------------------------------------------
# Tilings
# ---------------------------------------------------------------------------

_UNIT = {1: E1, 2: E2, 3: E3}


class LozengeTiling:
    """A tiling of n Delta_2 with triangles colored 1..n."""

    __slots__ = ("n", "triangles", "rhombi", "cover")

    def __init__(
        self,
        n: int,
        triangles: Sequence[Coord],
        rhombi: Sequence[Tuple[Coord, int]],
    ):
        self.n = n
        self.triangles = tuple(tuple(t) for t in triangles)
        self.rhombi = tuple(sorted((tuple(x), int(a)) for x, a in rhombi))
        cover: Dict[Coord, tuple] = {}
        down_cover: Set[Coord] = set()
        if len(self.triangles) != n:
            raise MalformedTiling(f"{len(self.triangles)} triangles, expected {n}")
        for color, x in enumerate(self.triangles, 1):
            if sum(x) != n - 1 or min(x) < 0:
                raise MalformedTiling(f"triangle {color} at bad node {x}")
            if x in cover:
                raise MalformedTiling(f"node {x} covered twice")
            cover[x] = ("t", color)
        for x, a in self.rhombi:
            if sum(x) != n - 1 or min(x) < 0 or a not in (1, 2, 3):
                raise MalformedTiling(f"bad rhombus ({x}, {a})")
            if x in cover:
                raise MalformedTiling(f"node {x} covered twice")
            cover[x] = ("r", a)
            y = _sub(x, _UNIT[a])
            if min(y) < 0:
                raise MalformedTiling(f"rhombus ({x}, {a}) leaves the triangle")
            if y in down_cover:
                raise MalformedTiling(f"down triangle {y} covered twice")
            down_cover.add(y)
        if len(cover) != n * (n + 1) // 2:
            raise MalformedTiling("not every up triangle is covered")
        if len(down_cover) != n * (n - 1) // 2:
            raise MalformedTiling("not every down triangle is covered")
        self.cover = cover

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LozengeTiling)
            and (self.n, self.triangles, self.rhombi)
            == (other.n, other.triangles, other.rhombi)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.triangles, self.rhombi))

    def __repr__(self) -> str:
        return f"LozengeTiling(n={self.n}, triangles={self.triangles})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "triangles": [list(t) for t in self.triangles],
            "rhombi": [[list(x), a] for x, a in self.rhombi],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LozengeTiling":
        return cls(
            int(data["n"]),
            [tuple(t) for t in data["triangles"]],
            [(tuple(x), int(a)) for x, a in data["rhombi"]],
        )


def relabel(tiling: LozengeTiling, rho: Sequence[int]) -> LozengeTiling:
    """Rename color c to rho[c-1]."""
    rho = perms.check_word(rho)
    if len(rho) != tiling.n:
        raise BadBounds(f"relabeling size {len(rho)} != n={tiling.n}")
    triangles = [None] * tiling.n
    for c, x in enumerate(tiling.triangles, 1):
        triangles[rho[c - 1] - 1] = x
    return LozengeTiling(tiling.n, triangles, tiling.rhombi)


# ---------------------------------------------------------------------------
# Routings
# ---------------------------------------------------------------------------

class Routing:
    """Vertex-disjoint down-paths in (p, q) coordinates; path i ends at (i, i)."""

    __slots__ = ("n", "paths")

    def __init__(self, n: int, paths: Sequence[Sequence[Tuple[int, int]]]):
        self.n = n
        self.paths = tuple(tuple(tuple(v) for v in path) for path in paths)
        if len(self.paths) != n:
            raise MalformedRouting(f"{len(self.paths)} paths, expected {n}")
        used: Set[Tuple[int, int]] = set()
        for i, path in enumerate(self.paths, 1):
            if not path or path[-1] != (i, i):
                raise MalformedRouting(f"path {i} does not end at ({i},{i})")
            for p, q in path:
                if not 1 <= q <= p <= n:
                    raise MalformedRouting(f"node ({p},{q}) outside the grid")
            for a, b in zip(path, path[1:]):
                if b not in ((a[0] - 1, a[1]), (a[0], a[1] + 1)):
                    raise MalformedRouting(f"bad step {a} -> {b} in path {i}")
            if used & set(path):
                raise MalformedRouting(f"path {i} meets an earlier path")
            used |= set(path)

    def apexes(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(path[0] for path in self.paths)

    def __eq__(self, other) -> bool:
        return isinstance(other, Routing) and (self.n, self.paths) == (
            other.n,
            other.paths,
        )

    def __hash__(self) -> int:
        return hash((self.n, self.paths))


def routing_to_tiling(routing: Routing) -> LozengeTiling:
    """Rhombus over each path edge, vertical rhombus over isolated nodes."""
    n = routing.n
    triangles = []
    rhombi = []
    on_path: Set[Coord] = set()
    for path in routing.paths:
        nodes = [pq_node(p, q, n) for p, q in path]
        on_path |= set(nodes)
        triangles.append(nodes[0])
        for prev, cur in zip(nodes, nodes[1:]):
            step = _sub(cur, prev)
            if step == (-1, 1, 0):
                rhombi.append((cur, 2))
            elif step == (-1, 0, 1):
                rhombi.append((cur, 3))
            else:
                raise MalformedRouting(f"bad step {prev} -> {cur}")
    for x in up_nodes(n):
        if x not in on_path:
            rhombi.append((x, 1))
    return LozengeTiling(n, triangles, rhombi)


def _walk_down(tiling: LozengeTiling, start: Coord) -> List[Coord]:
    """Follow the rhombi below a triangle down to the bottom row."""
    path = [start]
    x = start
    while x[0] > 0:
        below_left = _add(_sub(x, E1), E2)
        below_right = _add(_sub(x, E1), E3)
        if tiling.cover.get(below_left) == ("r", 2):
            x = below_left
        elif tiling.cover.get(below_right) == ("r", 3):
            x = below_right
        else:
            raise MalformedTiling(f"down ray stuck below {x}")
        path.append(x)
    return path


def color_paths(tiling: LozengeTiling) -> Dict[int, List[Coord]]:
    """The down-path of each color, in node coordinates."""
    return {
        c: _walk_down(tiling, x) for c, x in enumerate(tiling.triangles, 1)
    }


def tiling_to_routing(tiling: LozengeTiling) -> Routing:
    """Inverse of routing_to_tiling; requires the routing color convention."""
    paths = [None] * tiling.n
    for c, path in color_paths(tiling).items():
        pq_path = [node_pq(x) for x in path]
        end = pq_path[-1]
        if end != (c, c):
            raise MalformedRouting(
                f"triangle {c} routes to {end}, not ({c},{c}); relabel first"
            )
        paths[c - 1] = pq_path
    return Routing(tiling.n, paths)


def canonicalize_colors(tiling: LozengeTiling) -> Tuple[LozengeTiling, perms.Word]:
    """Relabel so that triangle i routes to (i, i); returns (tiling, rho)."""
    rho = [0] * tiling.n
    for c, path in color_paths(tiling).items():
        rho[c - 1] = node_pq(path[-1])[0]
    rho = tuple(rho)
    return relabel(tiling, rho), rho


def enumerate_routings(n: int) -> Iterator[Routing]:
    """All routings, path 1 first, each path explored apex-upward."""

    def paths_ending(i: int, used: frozenset) -> Iterator[tuple]:
        # reversed walks from (i, i); predecessors of (p,q) are (p+1,q), (p,q-1)
        def extend(path: tuple) -> Iterator[tuple]:
            yield tuple(reversed(path))
            p, q = path[-1]
            for pred in ((p + 1, q), (p, q - 1)):
                if 1 <= pred[1] <= pred[0] <= n and pred not in used:
                    yield from extend(path + (pred,))

        yield from extend(((i, i),))

    def assign(i: int, used: frozenset, acc: list) -> Iterator[Routing]:
        if i > n:
            yield Routing(n, list(acc))
            return
        if (i, i) in used:
            return
        for path in paths_ending(i, used):
            acc.append(path)
            yield from assign(i + 1, used | set(path), acc)
            acc.pop()

    yield from assign(1, frozenset(), [])


def enumerate_tilings(n: int) -> Iterator[LozengeTiling]:
    """Every tiling exactly once, colored by the routing convention."""
    for routing in enumerate_routings(n):
        yield routing_to_tiling(routing)


# ---------------------------------------------------------------------------
# Rays and extraction
# ---------------------------------------------------------------------------

def _walk_west(tiling: LozengeTiling, start: Coord) -> List[Coord]:
    path = [start]
    z = start
    while z[2] > 0:
        via_one = _add(_sub(z, E3), E1)
        via_two = _add(_sub(z, E3), E2)
        if tiling.cover.get(via_one) == ("r", 1):
            z = via_one
        elif tiling.cover.get(via_two) == ("r", 2):
            z = via_two
        else:
            raise MalformedTiling(f"west ray stuck at {z}")
        path.append(z)
    return path


def _walk_east(tiling: LozengeTiling, start: Coord) -> List[Coord]:
    path = [start]
    z = start
    while z[1] > 0:
        via_one = _add(_sub(z, E2), E1)
        via_three = _add(_sub(z, E2), E3)
        if tiling.cover.get(via_one) == ("r", 1):
            z = via_one
        elif tiling.cover.get(via_three) == ("r", 3):
            z = via_three
        else:
            raise MalformedTiling(f"east ray stuck at {z}")
        path.append(z)
    return path


def extract_system(tiling: LozengeTiling) -> SystemOfPermutations:
    """The system of permutations read off the three families of rays."""
    n = tiling.n
    s12: List[Optional[int]] = [None] * n
    s23: List[Optional[int]] = [None] * n
    s31: List[Optional[int]] = [None] * n
    for c, x in enumerate(tiling.triangles, 1):
        down = _walk_down(tiling, x)[-1]
        west = _walk_west(tiling, x)[-1]
        east = _walk_east(tiling, x)[-1]
        s23[down[2]] = c  # slot x3+1 from corner B
        s12[n - west[0] - 1] = c  # slot n-z1 from corner A
        s31[n - east[2] - 1] = c  # slot n-z3 from corner C
    for word in (s12, s23, s31):
        if any(v is None for v in word):
            raise MalformedTiling("ray endpoints do not fill an edge")
    return SystemOfPermutations(
        n=n,
        d=3,
        perms={(1, 2): tuple(s12), (2, 3): tuple(s23), (3, 1): tuple(s31)},
    )


def _tile_boundary_edges(x: Coord, kind: tuple) -> List[FrozenSet[Coord]]:
    """The unit grid edges bounding the tile anchored at up node x."""
    v1, v2, v3 = _add(x, E1), _add(x, E2), _add(x, E3)
    up_edges = {
        1: frozenset((v2, v3)),
        2: frozenset((v1, v3)),
        3: frozenset((v1, v2)),
    }
    if kind[0] == "t":
        return list(up_edges.values())
    a = kind[1]
    y = _sub(x, _UNIT[a])
    w1, w2, w3 = (
        _add(_add(y, E1), E2),
        _add(_add(y, E1), E3),
        _add(_add(y, E2), E3),
    )
    down_edges = {
        1: frozenset((w2, w3)),
        2: frozenset((w1, w3)),
        3: frozenset((w1, w2)),
    }
    # the shared edge of U(x) and D(y) is opposite letter a in both
    shared = up_edges[a]
    edges = [e for k, e in up_edges.items() if k != a]
    edges += [e for e in down_edges.values() if e != shared]
    return edges


def tiling_edges(tiling: LozengeTiling) -> Set[FrozenSet[Coord]]:
    """All unit edges lying on tile boundaries (including the outer boundary)."""
    edges: Set[FrozenSet[Coord]] = set()
    for x, kind in tiling.cover.items():
        edges.update(_tile_boundary_edges(x, kind))
    return edges


# ---------------------------------------------------------------------------
# Conversion to a fine mixed subdivision
# ---------------------------------------------------------------------------

_DOWN_SUMMAND = (2, 3)
_WEST_SUMMAND = (1, 2)
_EAST_SUMMAND = (1, 3)


def _down_tile_of(tiling: LozengeTiling, y: Coord) -> Coord:
    """Anchor of the rhombus covering the down triangle D(y)."""
    for a in (1, 2, 3):
        x = _add(y, _UNIT[a])
        if tiling.cover.get(x) == ("r", a):
            return x
    raise MalformedTiling(f"down triangle {y} is uncovered")


class _RayData:
    """Crossing structure of one color: tiles crossed, edges crossed, seeds."""

    __slots__ = ("crossed_tiles", "crossed_edges", "seeds")

    def __init__(self):
        self.crossed_tiles: Dict[Coord, tuple] = {}
        self.crossed_edges: Set[FrozenSet[Coord]] = set()
        self.seeds: List[Tuple[FrozenSet[Coord], Coord, int]] = []


def _trace_color(tiling: LozengeTiling, c: int) -> _RayData:
    data = _RayData()
    x0 = tiling.triangles[c - 1]
    data.crossed_tiles[x0] = ("t", c)

    down = _walk_down(tiling, x0)
    for z in down:
        v1, v2, v3 = _add(z, E1), _add(z, E2), _add(z, E3)
        data.crossed_edges.add(frozenset((v2, v3)))
    for z in down[1:]:
        a = tiling.cover[z][1]
        data.crossed_tiles[z] = ("r", _DOWN_SUMMAND)
        v1, v2, v3 = _add(z, E1), _add(z, E2), _add(z, E3)
        y = _sub(z, _UNIT[a])
        if a == 2:
            far = _add(_add(y, E1), E3)
            data.seeds.append((frozenset((v1, v2)), z, 2))
            data.seeds.append((frozenset((v3, far)), z, 3))
        else:  # a == 3
            far = _add(_add(y, E1), E2)
            data.seeds.append((frozenset((v1, v3)), z, 3))
            data.seeds.append((frozenset((v2, far)), z, 2))

    west = _walk_west(tiling, x0)
    for z in west:
        v1, v2 = _add(z, E1), _add(z, E2)
        data.crossed_edges.add(frozenset((v1, v2)))
    for z in west[1:]:
        a = tiling.cover[z][1]
        if z in data.crossed_tiles:
            raise InternalInvariantViolation(f"color {c} crosses {z} twice")
        data.crossed_tiles[z] = ("r", _WEST_SUMMAND)
        v1, v2, v3 = _add(z, E1), _add(z, E2), _add(z, E3)
        y = _sub(z, _UNIT[a])
        if a == 1:
            far = _add(_add(y, E2), E3)
            data.seeds.append((frozenset((v1, v3)), z, 1))
            data.seeds.append((frozenset((v2, far)), z, 2))
        else:  # a == 2
            far = _add(_add(y, E1), E3)
            data.seeds.append((frozenset((v1, far)), z, 1))
            data.seeds.append((frozenset((v2, v3)), z, 2))

    east = _walk_east(tiling, x0)
    for z in east:
        v1, v3 = _add(z, E1), _add(z, E3)
        data.crossed_edges.add(frozenset((v1, v3)))
    for z in east[1:]:
        a = tiling.cover[z][1]
        if z in data.crossed_tiles:
            raise InternalInvariantViolation(f"color {c} crosses {z} twice")
        data.crossed_tiles[z] = ("r", _EAST_SUMMAND)
        v1, v2, v3 = _add(z, E1), _add(z, E2), _add(z, E3)
        y = _sub(z, _UNIT[a])
        if a == 1:
            far = _add(_add(y, E2), E3)
            data.seeds.append((frozenset((v1, v2)), z, 1))
            data.seeds.append((frozenset((v3, far)), z, 3))
        else:  # a == 3
            far = _add(_add(y, E1), E2)
            data.seeds.append((frozenset((v1, far)), z, 1))
            data.seeds.append((frozenset((v2, v3)), z, 3))

    return data


def to_subdivision(tiling: LozengeTiling) -> FineMixedSubdivision:
    """The fine mixed subdivision with d=3 carried by the tiling.

    Crossing rays give every rhombus its two long summands; the singleton
    summand of each remaining color is constant on the regions cut out by
    that color's rays and is propagated from the ray flanks.
    """
    n = tiling.n
    anchors = list(tiling.cover)
    index = {x: k for k, x in enumerate(anchors)}
    edge_tiles: Dict[FrozenSet[Coord], List[Coord]] = {}
    for x, kind in tiling.cover.items():
        for edge in _tile_boundary_edges(x, kind):
            edge_tiles.setdefault(edge, []).append(x)

    rays = {c: _trace_color(tiling, c) for c in range(1, n + 1)}
    cells: Dict[Coord, list] = {x: [None] * n for x in anchors}
    for c, data in rays.items():
        for x, (kind, payload) in data.crossed_tiles.items():
            cells[x][c - 1] = (1, 2, 3) if kind == "t" else payload

    for c, data in rays.items():
        parent = list(range(len(anchors)))

        def find(k: int) -> int:
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        for edge, tiles in edge_tiles.items():
            if (
                len(tiles) == 2
                and tiles[0] not in data.crossed_tiles
                and tiles[1] not in data.crossed_tiles
            ):
                ra, rb = find(index[tiles[0]]), find(index[tiles[1]])
                if ra != rb:
                    parent[ra] = rb
        letters: Dict[int, int] = {}
        for edge, tile, letter in data.seeds:
            others = [t for t in edge_tiles.get(edge, []) if t != tile]
            if not others or others[0] in data.crossed_tiles:
                continue  # boundary flank, or two rays of c touching
            root = find(index[others[0]])
            if letters.setdefault(root, letter) != letter:
                raise InternalInvariantViolation(
                    f"color {c} region seeded with two letters"
                )
        for x in anchors:
            if x in data.crossed_tiles:
                continue
            root = find(index[x])
            if root not in letters:
                raise InternalInvariantViolation(
                    f"color {c} region of {x} never touches a ray"
                )
            cells[x][c - 1] = (letters[root],)

    return FineMixedSubdivision(
        n=n, d=3, cells=[tuple(cells[x]) for x in anchors]
    )


# ---------------------------------------------------------------------------
# Positions and the routing realizer
# ---------------------------------------------------------------------------

def uv_from_positions(p: Sequence[int], q: Sequence[int]) -> tuple:
    """(u, v, w) determined by triangle positions (p_i, q_i), with w = n..1."""
    n = len(p)
    if len(q) != n:
        raise BadBounds("position lists differ in length")
    for i in range(1, n + 1):
        if not 1 <= q[i - 1] <= i <= p[i - 1] <= n:
            raise BadBounds(
                f"position {i} violates q_i <= i <= p_i: ({p[i-1]},{q[i-1]})"
            )
    u = perms.compose_from_factors(tuple(p))
    v = perms.compose_from_factors_desc(tuple(q))
    w = tuple(range(n, 0, -1))
    return u, v, w


def _normalizer(system: SystemOfPermutations) -> perms.Word:
    """The relabeling rho sending the bottom edge word to n..1."""
    w = system.sigma(3, 2)
    n = system.n
    rho = [0] * n
    for k, c in enumerate(w, 1):
        rho[c - 1] = n + 1 - k
    return tuple(rho)


def positions_from_system(system: SystemOfPermutations) -> Tuple[Tuple[int, int], ...]:
    """Numbered triangle positions (p_c, q_c) of an acyclic d=3 system."""
    if system.d != 3:
        raise UnsupportedDimension("triangle positions need d=3")
    systems.require_acyclic(system)
    rho = _normalizer(system)
    u = tuple(rho[c - 1] for c in system.sigma(2, 1))
    v = tuple(rho[c - 1] for c in system.sigma(1, 3))
    p, q = perms.factors_from_inversions(u, v)
    return tuple((p[rho[c - 1] - 1], q[rho[c - 1] - 1]) for c in range(1, system.n + 1))


def _search_routing(
    n: int, apexes: Tuple[Tuple[int, int], ...]
) -> Optional[Routing]:
    """First routing (canonical order) with path i from apexes[i-1] to (i, i)."""

    def routes(i: int, used: frozenset) -> Iterator[tuple]:
        def extend(path: tuple) -> Iterator[tuple]:
            p, q = path[-1]
            if (p, q) == (i, i):
                yield path
                return
            for nxt in ((p - 1, q), (p, q + 1)):
                if (
                    nxt[1] <= nxt[0]
                    and nxt[0] >= i >= nxt[1]
                    and nxt not in used
                ):
                    yield from extend(path + (nxt,))

        if apexes[i - 1] in used:
            return
        yield from extend((apexes[i - 1],))

    found: List[tuple] = []

    def assign(i: int, used: frozenset) -> bool:
        if i > n:
            return True
        for path in routes(i, used):
            found.append(path)
            if assign(i + 1, used | set(path)):
                return True
            found.pop()
        return False

    if assign(1, frozenset()):
        return Routing(n, found)
    return None


_routing_cache: Dict[tuple, Optional[Routing]] = {}


def realize_via_routing(system: SystemOfPermutations) -> LozengeTiling:
    """Realize an acyclic d=3 system from its forced triangle positions.

    Any vertex-disjoint routing whose path i starts at the computed
    position (p_i, q_i) yields a tiling with the wanted system, so a
    backtracking search over routings is a complete realizer.
    """
    positions = positions_from_system(system)  # checks d and acyclicity
    n = system.n
    rho = _normalizer(system)
    apexes = tuple(positions[perms.inverse(rho)[i - 1] - 1] for i in range(1, n + 1))
    key = (n, apexes)
    if key not in _routing_cache:
        _routing_cache[key] = _search_routing(n, apexes)
    routing = _routing_cache[key]
    if routing is None:
        raise NoRoutingFound(
            "no vertex-disjoint routing fits the computed positions",
            positions=[list(x) for x in apexes],
        )
    tiling = relabel(routing_to_tiling(routing), perms.inverse(rho))
    if extract_system(tiling) != system:
        raise InternalInvariantViolation("routing realizer produced a wrong system")
    return tiling


# ---------------------------------------------------------------------------
# The inductive realizer
# ---------------------------------------------------------------------------

#: instances where the pq-improvement loop gave up and the routing realizer
#: was used instead; kept for analysis
REALIZE_FALLBACKS: List[tuple] = []

_realize_cache: Dict[tuple, LozengeTiling] = {}
_REALIZE_CACHE_MAX_N = 4


def realize(system: SystemOfPermutations) -> LozengeTiling:
    """Build a tiling with the given acyclic system, color by color.

    Colors are inserted in increasing order following the inductive
    construction: realize the system without the last color, locate the
    insertion points on the three edges, and either cut-and-glue a seam
    of rhombi through a meeting point or improve the current tiling by a
    system-preserving rerouting that lengthens the segment PQ.

    Pure function; the per-process memo of small sub-realizations is only
    an accelerator (concurrent callers may at worst recompute an entry).
    """
    if system.d != 3:
        raise UnsupportedDimension("realize needs d=3")
    systems.require_acyclic(system)
    return _realize_words(systems.triangle_words(system))


def _realize_words(uvw: tuple) -> LozengeTiling:
    u, v, w = uvw
    n = len(u)
    if n == 1:
        return LozengeTiling(1, [(0, 0, 0)], [])
    if uvw in _realize_cache:
        return _realize_cache[uvw]
    child = _realize_words(
        tuple(tuple(c for c in word if c != n) for word in uvw)
    )
    tiling = _insert_color(child, u, v, w)
    if n <= _REALIZE_CACHE_MAX_N:
        _realize_cache[uvw] = tiling
    return tiling


def _gb_gc(
    edges: Set[FrozenSet[Coord]], start: Coord, target: Coord, deltas: tuple
) -> Tuple[Set[FrozenSet[Coord]], Set[Coord]]:
    """Union of all paths start -> target using steps from deltas."""

    def reach(src: Coord, dirs: tuple) -> Dict[Coord, List[Coord]]:
        out: Dict[Coord, List[Coord]] = {src: []}
        stack = [src]
        while stack:
            z = stack.pop()
            for delta in dirs:
                nxt = _add(z, delta)
                if min(nxt) < 0:
                    continue
                if frozenset((z, nxt)) in edges:
                    out.setdefault(nxt, []).append(z)
                    if len(out[nxt]) == 1:
                        stack.append(nxt)
        return out

    forward = reach(start, deltas)
    backward = reach(target, tuple(tuple(-c for c in d) for d in deltas))
    nodes = set(forward) & set(backward)
    kept = {
        frozenset((z, _add(z, delta)))
        for z in nodes
        for delta in deltas
        if _add(z, delta) in nodes and frozenset((z, _add(z, delta))) in edges
    }
    return kept, nodes


_SW = (-1, 1, 0)
_SE = (-1, 0, 1)
_WEST = (0, 1, -1)
_EAST = (0, -1, 1)
_NE = (1, -1, 0)
_NW = (1, 0, -1)


def _south_path(
    edges: Set[FrozenSet[Coord]], start: Coord, prefer: Coord, fallback: Coord
) -> Coord:
    z = start
    while z[0] > 0:
        first, second = _add(z, prefer), _add(z, fallback)
        if min(first) >= 0 and frozenset((z, first)) in edges:
            z = first
        elif min(second) >= 0 and frozenset((z, second)) in edges:
            z = second
        else:
            raise InternalInvariantViolation(f"no south step at {z}")
    return z


def _pq_segment(
    tiling: LozengeTiling, E: Coord, F: Coord
) -> Optional[tuple]:
    """(edges, P, Q, R, S, |PQ|) for the current tiling, or None when broken."""
    edges = tiling_edges(tiling)
    np_ = tiling.n
    B = (0, np_, 0)
    C = (0, 0, np_)
    gb_edges, gb_nodes = _gb_gc(edges, E, B, (_SW, _WEST))
    gc_edges, gc_nodes = _gb_gc(edges, F, C, (_SE, _EAST))
    common = sorted(gb_nodes & gc_nodes, key=lambda z: z[2])
    if not common:
        return None
    levels = {z[0] for z in common}
    if len(levels) != 1 or any(
        b[2] != a[2] + 1 for a, b in zip(common, common[1:])
    ):
        raise InternalInvariantViolation("PQ is not a horizontal segment")
    P, Q = common[0], common[-1]
    R = _south_path(edges, P, _SW, _SE)
    S = _south_path(edges, Q, _SE, _SW)
    return edges, gb_edges, gc_edges, P, Q, R, S, len(common) - 1


def _north_path_to(
    edges: Set[FrozenSet[Coord]], start: Coord, targets: Set[Coord]
) -> Optional[List[Coord]]:
    """A northeast/northwest path from start to any target, leftmost first."""
    seen = {start}
    stack = [[start]]
    while stack:
        path = stack.pop()
        z = path[-1]
        if z in targets:
            return path
        for delta in (_NE, _NW):
            nxt = _add(z, delta)
            if min(nxt) < 0 or nxt in seen:
                continue
            if frozenset((z, nxt)) in edges:
                seen.add(nxt)
                stack.append(path + [nxt])
    return None


def _walk_back(
    graph_edges: Set[FrozenSet[Coord]], start: Coord, target: Coord, deltas: tuple
) -> List[Coord]:
    """Follow graph edges backward from start (on it) to its source."""
    path = [start]
    z = start
    while z != target:
        for delta in deltas:
            nxt = _add(z, delta)
            if min(nxt) >= 0 and frozenset((z, nxt)) in graph_edges:
                z = nxt
                path.append(z)
                break
        else:
            raise InternalInvariantViolation(f"backward walk stuck at {z}")
    return path


def _emb(z: Coord) -> Tuple[int, int]:
    # planar embedding preserving sidedness: east coordinate, height
    return (z[2] - z[1], z[0])


def _edge_flanks(z: Coord, znext: Coord) -> List[Tuple[Coord, str, int]]:
    """Tiles flanking the oriented edge (z -> znext) with their side sign.

    Yields (unit triangle key, 'u'/'d', side) where side > 0 means left of
    the direction of travel.
    """
    delta = _sub(znext, z)
    i = delta.index(1) + 1
    j = delta.index(-1) + 1
    k = ({1, 2, 3} - {i, j}).pop()
    out = []
    up = _sub(z, _UNIT[j])
    if min(up) >= 0:
        third = _add(z, _sub(_UNIT[k], _UNIT[j]))
        out.append((up, "u", _side(z, znext, third)))
    down = _sub(_sub(z, _UNIT[j]), _UNIT[k])
    if min(down) >= 0:
        third = _add(z, _sub(_UNIT[i], _UNIT[k]))
        out.append((down, "d", _side(z, znext, third)))
    return out


def _side(a: Coord, b: Coord, point: Coord) -> int:
    ax, ay = _emb(a)
    bx, by = _emb(b)
    px, py = _emb(point)
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    return (cross > 0) - (cross < 0)


def _tile_of_unit(tiling: LozengeTiling, key: Coord, kind: str) -> Coord:
    if kind == "u":
        return key
    return _down_tile_of(tiling, key)


def _insert_color(child: LozengeTiling, u: perms.Word, v: perms.Word, w: perms.Word) -> LozengeTiling:
    n = len(u)
    np_ = n - 1
    k_u, k_v, k_w = u.index(n) + 1, v.index(n) + 1, w.index(n) + 1
    F = (k_u - 1, np_ - k_u + 1, 0)
    E = (np_ - k_v + 1, 0, k_v - 1)
    D = (0, k_w - 1, np_ - k_w + 1)

    tiling = child
    try:
        for _ in range(n * n):
            data = _pq_segment(tiling, E, F)
            if data is None:
                break
            edges, gb_edges, gc_edges, P, Q, R, S, pq_len = data
            if R[2] <= D[2] <= S[2]:
                result = _cut_and_glue(
                    tiling, E, F, D, edges, gb_edges, gc_edges, P, Q
                )
                if result is not None:
                    return result
                break
            improved = _improve_pq(tiling, E, F, pq_len)
            if improved is None:
                break
            tiling = improved
    except InternalInvariantViolation:
        pass
    REALIZE_FALLBACKS.append((n, u, v, w))
    return realize_via_routing(
        SystemOfPermutations(n=n, d=3, perms={(2, 1): u, (1, 3): v, (3, 2): w})
    )


def _cut_and_glue(
    tiling: LozengeTiling,
    E: Coord,
    F: Coord,
    D: Coord,
    edges: Set[FrozenSet[Coord]],
    gb_edges: Set[FrozenSet[Coord]],
    gc_edges: Set[FrozenSet[Coord]],
    P: Coord,
    Q: Coord,
) -> Optional[LozengeTiling]:
    n = tiling.n + 1
    pq_nodes = {
        (P[0], P[1] - t, P[2] + t) for t in range(Q[2] - P[2] + 1)
    }
    north = _north_path_to(edges, D, pq_nodes)
    if north is None:
        return None
    M = north[-1]
    md = list(reversed(north))  # oriented M -> D
    me = _walk_back(gb_edges, M, E, (_NE, _EAST))  # M -> E along G_B reversed
    mf = _walk_back(gc_edges, M, F, (_NW, _WEST))  # M -> F along G_C reversed

    cut_edges: Set[FrozenSet[Coord]] = set()
    for path in (md, me, mf):
        for a, b in zip(path, path[1:]):
            cut_edges.add(frozenset((a, b)))

    # flood fill tiles into the three pieces, seeded from the cut flanks
    anchors = list(tiling.cover)
    index = {x: k for k, x in enumerate(anchors)}
    edge_tiles: Dict[FrozenSet[Coord], List[Coord]] = {}
    for x, kind in tiling.cover.items():
        for edge in _tile_boundary_edges(x, kind):
            edge_tiles.setdefault(edge, []).append(x)
    parent = list(range(len(anchors)))

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for edge, tiles in edge_tiles.items():
        if len(tiles) == 2 and edge not in cut_edges:
            ra, rb = find(index[tiles[0]]), find(index[tiles[1]])
            if ra != rb:
                parent[ra] = rb

    piece: Dict[int, int] = {}  # root -> letter of the translation

    def seed(path: List[Coord], left: int, right: int) -> None:
        for a, b in zip(path, path[1:]):
            for key, kind, side in _edge_flanks(a, b):
                tile = _tile_of_unit(tiling, key, kind)
                letter = left if side > 0 else right
                root = find(index[tile])
                if piece.setdefault(root, letter) != letter:
                    raise InternalInvariantViolation("cut pieces overlap")

    seed(md, 3, 2)  # east of the south seam is the C piece
    seed(me, 1, 3)
    seed(mf, 2, 1)

    corners = {
        1: (tiling.n - 1, 0, 0),
        2: (0, tiling.n - 1, 0),
        3: (0, 0, tiling.n - 1),
    }
    for letter, node in corners.items():
        piece.setdefault(find(index[node]), letter)

    triangles: List[Optional[Coord]] = [None] * n
    rhombi: List[Tuple[Coord, int]] = []
    for x, kind in tiling.cover.items():
        root = find(index[x])
        if root not in piece:
            raise InternalInvariantViolation("piece without a label")
        moved = _add(x, _UNIT[piece[root]])
        if kind[0] == "t":
            triangles[kind[1] - 1] = moved
        else:
            rhombi.append((moved, kind[1]))

    triangles[n - 1] = M
    seam_type = {
        ("md", _SW): 2,
        ("md", _SE): 3,
        ("me", _NE): 1,
        ("me", _EAST): 3,
        ("mf", _NW): 1,
        ("mf", _WEST): 2,
    }
    for name, path in (("md", md), ("me", me), ("mf", mf)):
        for a, b in zip(path, path[1:]):
            rhombi.append((b, seam_type[(name, _sub(b, a))]))

    return LozengeTiling(n, triangles, rhombi)


def _improve_pq(
    tiling: LozengeTiling, E: Coord, F: Coord, pq_len: int
) -> Optional[LozengeTiling]:
    """A system-preserving rerouting with a strictly longer PQ, if any.

    Rerouting any color's down-path between its fixed apex and bottom node
    keeps every triangle position and therefore the whole system; trying
    single paths first mirrors the move that shifts one color's seam
    sideways through a block of vertical rhombi.
    """
    n = tiling.n
    paths = color_paths(tiling)

    def rebuilt(new_paths: Dict[int, List[Coord]]) -> LozengeTiling:
        triangles = [None] * n
        rhombi = []
        on_path = set()
        for c in range(1, n + 1):
            nodes = new_paths[c]
            triangles[c - 1] = nodes[0]
            on_path.update(nodes)
            for prev, cur in zip(nodes, nodes[1:]):
                rhombi.append((cur, 2 if _sub(cur, prev) == _SW else 3))
        for x in up_nodes(n):
            if x not in on_path:
                rhombi.append((x, 1))
        return LozengeTiling(n, triangles, rhombi)

    # single-path reroutings, colors in order
    for c in range(1, n + 1):
        used: Set[Coord] = set()
        for other, nodes in paths.items():
            if other != c:
                used.update(nodes)
        start, end = paths[c][0], paths[c][-1]

        def extend(path: List[Coord]) -> Iterator[List[Coord]]:
            z = path[-1]
            if z == end:
                yield list(path)
                return
            if z[0] == 0:
                return
            for delta in (_SW, _SE):
                nxt = _add(z, delta)
                if min(nxt) < 0 or nxt in used:
                    continue
                if nxt[1] > end[1] or nxt[2] > end[2]:
                    continue  # both coordinates only grow along a down-path
                path.append(nxt)
                yield from extend(path)
                path.pop()

        for candidate in extend([start]):
            if candidate == paths[c]:
                continue
            new_paths = dict(paths)
            new_paths[c] = candidate
            trial = rebuilt(new_paths)
            data = _pq_segment(trial, E, F)
            if data is not None and data[-1] > pq_len:
                return trial
    return None
