"""Navigation in the Farey graph.

The boundary circle carries the orientation of the usual picture: 0 on the
right, infinity on the left, 1 on top and -1 at the bottom.  Moving
counterclockwise therefore means increasing the slope, wrapping from +inf
back through -inf.  All comparisons are ordinal on exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import EqualSlopes
from .exact_arith import INF, Slope, is_farey_neighbor, mobius_apply

__all__ = [
    "Direction",
    "Side",
    "Arc",
    "FareyPath",
    "arc_contains",
    "bypass_attach",
    "shortest_farey_path",
    "block_decompose",
]


class Direction(str, Enum):
    CLOCKWISE = "clockwise"
    COUNTERCLOCKWISE = "counterclockwise"

    @classmethod
    def of(cls, value) -> "Direction":
        if isinstance(value, Direction):
            return value
        v = str(value).lower()
        if v in ("cw", "clockwise"):
            return cls.CLOCKWISE
        if v in ("ccw", "counterclockwise"):
            return cls.COUNTERCLOCKWISE
        raise ValueError(f"unknown direction {value!r}")


class Side(str, Enum):
    """Which side a bypass is attached from.

    A front bypass walks the arc from r to s counterclockwise; a back bypass
    walks it clockwise.
    """

    FRONT = "front"
    BACK = "back"

    @classmethod
    def of(cls, value) -> "Side":
        if isinstance(value, Side):
            return value
        return cls(str(value).lower())

    @property
    def direction(self) -> Direction:
        return Direction.COUNTERCLOCKWISE if self is Side.FRONT else Direction.CLOCKWISE


def _key(x: Slope) -> Tuple[int, Fraction]:
    # infinity sits at the start of the cut circle, before every rational
    if x.is_infinite:
        return (0, Fraction(0))
    return (1, x.to_fraction())


def _key_from(a: Slope, x: Slope):
    """Position of x on the circle read counterclockwise starting at a."""
    kx, ka = _key(x), _key(a)
    return (0 if kx >= ka else 1, kx)


@dataclass(frozen=True)
class Arc:
    """Closed arc of the boundary circle traced from ``start`` to ``end``."""

    start: Slope
    end: Slope
    direction: Direction = Direction.COUNTERCLOCKWISE

    def __post_init__(self) -> None:
        if self.start == self.end:
            raise EqualSlopes("an arc needs distinct endpoints")
        object.__setattr__(self, "direction", Direction.of(self.direction))

    def contains(self, x: Slope) -> bool:
        return arc_contains(self, x)


def arc_contains(arc: Arc, x: Slope) -> bool:
    if arc.direction is Direction.COUNTERCLOCKWISE:
        a, b = arc.start, arc.end
    else:
        a, b = arc.end, arc.start
    return _key_from(a, x) <= _key_from(a, b)


@dataclass(frozen=True)
class FareyPath:
    nodes: Tuple[Slope, ...]

    def __post_init__(self) -> None:
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(set(nodes)) != len(nodes):
            raise ValueError("a Farey path may not repeat a vertex")
        for u, v in zip(nodes, nodes[1:]):
            if not is_farey_neighbor(u, v):
                raise ValueError(f"{u} and {v} are not Farey neighbors")

    def __len__(self) -> int:
        """Number of edges."""
        return len(self.nodes) - 1

    def __iter__(self):
        return iter(self.nodes)

    def __str__(self) -> str:
        return " -> ".join(str(s) for s in self.nodes)


def _to_infinity(s: Slope):
    """An orientation-preserving unimodular g with g(s) = inf, and its inverse."""
    if s.is_infinite:
        return [[1, 0], [0, 1]], [[1, 0], [0, 1]]
    p, q = s.num, s.den
    # u*p + v*q = 1
    u, v = _bezout(p, q)
    g = [[u, v], [-q, p]]
    g_inv = [[p, -v], [q, u]]
    return g, g_inv


def _bezout(a: int, b: int) -> Tuple[int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        x0, y0 = -x0, -y0
    return x0, y0


def bypass_attach(s: Slope, r: Slope, side="front") -> Slope:
    """New dividing slope after attaching a bypass along a ruling of slope r.

    The result is the Farey neighbor of s on the arc from r to s (walked in
    the direction fixed by ``side``) that is closest to r.
    """
    side = Side.of(side)
    if r == s:
        raise EqualSlopes("the ruling slope must differ from the dividing slope")
    g, g_inv = _to_infinity(s)
    x = mobius_apply(g, r).to_fraction()
    # after moving s to infinity its neighbors are the integers
    if side.direction is Direction.COUNTERCLOCKWISE:
        n = -((-x.numerator) // x.denominator)
    else:
        n = x.numerator // x.denominator
    return mobius_apply(g_inv, Slope(n, 1))


def _parent_step(x: Slope, direction: Direction) -> Slope:
    """One greedy step toward infinity inside the arc from x to infinity."""
    p, q = x.num, x.den
    if q == 1:
        return INF
    # Stern-Brocot parents: a*q - b*p = +1 (right) or -1 (left), 0 < b < q
    target = 1 if direction is Direction.COUNTERCLOCKWISE else -1
    # solve a*q = target + b*p with b = target' * p^{-1} mod q
    b = (-target * pow(p, -1, q)) % q
    a = (target + b * p) // q
    return Slope(a, b) if b else INF


def _directed_path(a: Slope, b: Slope, direction: Direction) -> List[Slope]:
    g, g_inv = _to_infinity(b)
    x = mobius_apply(g, a)
    nodes = [x]
    while not x.is_infinite:
        x = _parent_step(x, direction)
        nodes.append(x)
    return [mobius_apply(g_inv, y) for y in nodes]


def _geodesic_to_infinity(x: Slope) -> List[Slope]:
    """A shortest path from x to infinity.

    Every geodesic from x to infinity stays among x and its Stern-Brocot
    ancestors (the ladder of x), so a breadth-first search there is exact.
    Among equal-length steps the counterclockwise parent wins.
    """
    ladder = [x]
    seen = {x}
    i = 0
    while i < len(ladder):
        y = ladder[i]
        i += 1
        if y.is_infinite:
            continue
        for d in (Direction.COUNTERCLOCKWISE, Direction.CLOCKWISE):
            z = _parent_step(y, d)
            if z not in seen:
                seen.add(z)
                ladder.append(z)
    dist = {INF: 0}
    frontier = [INF]
    while frontier:
        nxt = []
        for u in frontier:
            for v in ladder:
                if v not in dist and is_farey_neighbor(u, v):
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    path = [x]
    while not path[-1].is_infinite:
        y = path[-1]
        steps = [_parent_step(y, Direction.COUNTERCLOCKWISE), _parent_step(y, Direction.CLOCKWISE)]
        steps += sorted((v for v in ladder if v != y and is_farey_neighbor(y, v)), key=lambda v: (v.den, v.num))
        path.append(next(v for v in steps if dist.get(v) == dist[y] - 1))
    return path


def shortest_farey_path(a: Slope, b: Slope, direction: Optional[str] = "counterclockwise") -> FareyPath:
    """Minimal edge path from a to b.

    By default the path stays inside the counterclockwise arc from a to b,
    which is how the basic-slice factorizations walk from -1/t to infinity.
    ``direction=None`` takes a globally shortest path, which may leave both
    arcs.
    """
    if a == b:
        raise EqualSlopes("path endpoints coincide")
    if direction is None:
        g, g_inv = _to_infinity(b)
        return FareyPath(tuple(mobius_apply(g_inv, y) for y in _geodesic_to_infinity(mobius_apply(g, a))))
    return FareyPath(tuple(_directed_path(a, b, Direction.of(direction))))


def block_decompose(path: FareyPath) -> List[Tuple[int, int]]:
    """Split the edges of a path into continued fraction blocks.

    Returns half-open edge index ranges.  Two consecutive edges lie in one
    block when the middle vertex v satisfies prev + next = +-2 v for a
    consistent lift of the vertices to primitive vectors.
    """
    nodes = path.nodes
    n_edges = len(nodes) - 1
    if n_edges <= 0:
        return []
    vecs = [(nodes[0].num, nodes[0].den)]
    vecs.append((nodes[1].num, nodes[1].den))
    det0 = vecs[0][0] * vecs[1][1] - vecs[0][1] * vecs[1][0]
    for node in nodes[2:]:
        u = vecs[-1]
        w = (node.num, node.den)
        d = u[0] * w[1] - u[1] * w[0]
        if d != det0:
            w = (-w[0], -w[1])
        vecs.append(w)
    blocks = []
    start = 0
    for i in range(1, n_edges):
        prev, mid, nxt = vecs[i - 1], vecs[i], vecs[i + 1]
        s = (prev[0] + nxt[0], prev[1] + nxt[1])
        # s = k * mid for an integer k
        k = s[0] // mid[0] if mid[0] else s[1] // mid[1]
        if abs(k) != 2:
            blocks.append((start, i))
            start = i
    blocks.append((start, n_edges))
    return blocks
