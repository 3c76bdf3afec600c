from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from a3links.errors import EqualSlopes
from a3links.exact_arith import INF, Slope, is_farey_neighbor, reduce
from a3links.farey_graph import (
    Arc,
    Direction,
    FareyPath,
    arc_contains,
    block_decompose,
    bypass_attach,
    shortest_farey_path,
)
from a3links.tight_enum import leg_block_sizes


# -- oracle: exact position on the boundary circle ----------------------------
# x -> ((1 - x^2)/(1 + x^2), 2x/(1 + x^2)) puts 0 on the right, 1 on top, inf on
# the left and -1 at the bottom.  The "diamond angle" below is a monotone exact
# stand-in for the polar angle, so arcs can be compared without trigonometry.

def _point(s: Slope):
    if s.is_infinite:
        return Fraction(-1), Fraction(0)
    x = s.to_fraction()
    return (1 - x * x) / (1 + x * x), 2 * x / (1 + x * x)


def _diamond(s: Slope) -> Fraction:
    X, Y = _point(s)
    if Y >= 0:
        return Y / (X + Y) if X >= 0 else 1 + (-X) / (-X + Y)
    return 2 + (-Y) / (-X - Y) if X < 0 else 3 + X / (X - Y)


def _ccw_offset(a: Slope, x: Slope) -> Fraction:
    return (_diamond(x) - _diamond(a)) % 4


def oracle_arc_contains(start: Slope, end: Slope, direction: str, x: Slope) -> bool:
    if direction == "clockwise":
        start, end = end, start
    return _ccw_offset(start, x) <= _ccw_offset(start, end)


@st.composite
def slopes(draw, max_den=30):
    if draw(st.integers(0, 15)) == 0:
        return INF
    q = draw(st.integers(1, max_den))
    return reduce(draw(st.integers(-4 * q, 4 * q)), q)


def test_oracle_orientation_matches_picture():
    order = [Slope(0, 1), Slope(1, 1), INF, Slope(-1, 1)]
    assert [_diamond(s) for s in order] == [0, 1, 2, 3]


@pytest.mark.parametrize(
    "start,end,direction,x,expected",
    [
        (INF, Slope(-1, 3), "clockwise", Slope(0, 1), True),
        (INF, Slope(-1, 3), "clockwise", Slope(-1, 2), False),
        (INF, Slope(-1, 3), "counterclockwise", Slope(-1, 2), True),
        (Slope(2, 1), Slope(5, 1), "counterclockwise", Slope(2, 1), True),
        (Slope(2, 1), Slope(5, 1), "counterclockwise", Slope(5, 1), True),
    ],
)
def test_arc_examples(start, end, direction, x, expected):
    assert arc_contains(Arc(start, end, Direction.of(direction)), x) is expected
    assert oracle_arc_contains(start, end, direction, x) is expected


@given(slopes(), slopes(), slopes(), st.sampled_from(["clockwise", "counterclockwise"]))
def test_arc_matches_angle_oracle(a, b, x, direction):
    if a == b:
        return
    assert arc_contains(Arc(a, b, Direction.of(direction)), x) == oracle_arc_contains(a, b, direction, x)


# -- bypass attachment ----------------------------------------------------------

def _candidates(s: Slope, r: Slope):
    """All Farey neighbors of s that could lie on either arc between r and s."""
    bound = 2 + max(abs(x.to_fraction()) for x in (s, r) if not x.is_infinite) if not (
        s.is_infinite and r.is_infinite) else 2
    n = 2 * max(s.den, r.den, 1)
    out = [INF] if s.den == 1 else []
    for qq in range(1, n + 1):
        lim = int(np.ceil(float(bound) * qq)) + 1
        p = np.arange(-lim, lim + 1, dtype=np.int64)
        mask = np.abs(p * s.den - qq * s.num) == 1
        for pp in p[mask]:
            if gcd(int(pp), qq) == 1:
                out.append(Slope(int(pp), qq))
    return out


def oracle_bypass(s: Slope, r: Slope, side: str) -> Slope:
    direction = "counterclockwise" if side == "front" else "clockwise"
    sign = 1 if direction == "counterclockwise" else -1

    def dist(x):
        return (sign * (_diamond(x) - _diamond(r))) % 4

    limit = dist(s)
    cands = [x for x in _candidates(s, r) if x != s and dist(x) <= limit]
    return min(cands, key=dist)


@pytest.mark.parametrize(
    "s,r,side,expected",
    [
        (Slope(-1, 3), INF, "back", Slope(0, 1)),
        (Slope(-1, 3), INF, "front", Slope(-1, 2)),
        (Slope(0, 1), INF, "back", INF),
        (Slope(-1, 2), INF, "back", Slope(0, 1)),
    ],
)
def test_bypass_examples(s, r, side, expected):
    assert bypass_attach(s, r, side) == expected
    assert oracle_bypass(s, r, side) == expected


def test_bypass_equal_slopes():
    with pytest.raises(EqualSlopes):
        bypass_attach(Slope(1, 2), Slope(1, 2))


def test_bypass_matches_brute_force_on_random_inputs():
    rng = random.Random(20261016)
    checked = 0
    while checked < 1000:
        def rnd():
            if rng.random() < 0.05:
                return INF
            q = rng.randint(1, 50)
            return reduce(rng.randint(-3 * q, 3 * q), q)

        s, r = rnd(), rnd()
        if s == r:
            continue
        side = rng.choice(["front", "back"])
        got = bypass_attach(s, r, side)
        assert got == oracle_bypass(s, r, side), (s, r, side)
        checked += 1


@given(slopes(), slopes(), st.sampled_from(["front", "back"]))
def test_bypass_is_neighbor_on_arc(s, r, side):
    if s == r:
        return
    x = bypass_attach(s, r, side)
    assert is_farey_neighbor(x, s)
    direction = "counterclockwise" if side == "front" else "clockwise"
    assert oracle_arc_contains(r, s, direction, x)


# -- paths and blocks -------------------------------------------------------------

@pytest.mark.parametrize(
    "a,nodes",
    [(Slope(-1, 3), ["-1/3", "0/1", "inf"]), (Slope(-1, 2), ["-1/2", "0/1", "inf"]),
     (Slope(2, 1), ["2/1", "inf"])],
)
def test_path_examples(a, nodes):
    assert [str(x) for x in shortest_farey_path(a, INF)] == nodes


@pytest.mark.parametrize("t", [t for t in range(-12, 13) if t])
def test_leg_path_lengths(t):
    n = len(shortest_farey_path(reduce(-1, t), INF))
    assert n == (1 if t == 1 else 2 if t >= 2 else -t)


def test_path_rejects_equal_endpoints():
    with pytest.raises(EqualSlopes):
        shortest_farey_path(INF, INF)


def _bfs_length(a: Slope, b: Slope) -> int:
    # vertices with denominator up to the larger endpoint's contain a geodesic
    d = max(a.den, b.den, 1)
    m = 2 + max([abs(x.to_fraction()) for x in (a, b) if not x.is_infinite] or [0])
    verts = [INF] + [Slope(p, q) for q in range(1, d + 1)
                     for p in range(-int(m * q) - 1, int(m * q) + 2) if gcd(p, q) == 1]
    dist = {a: 0}
    dq = deque([a])
    while dq:
        x = dq.popleft()
        for y in verts:
            if y not in dist and is_farey_neighbor(x, y):
                dist[y] = dist[x] + 1
                dq.append(y)
    return dist[b]


@given(slopes(max_den=7), slopes(max_den=7))
def test_global_path_matches_bfs(a, b):
    if a == b:
        return
    path = shortest_farey_path(a, b, direction=None)
    assert path.nodes[0] == a and path.nodes[-1] == b
    assert len(path) == _bfs_length(a, b)


@given(slopes(), slopes(), st.sampled_from(["clockwise", "counterclockwise"]))
def test_directed_path_stays_on_arc(a, b, direction):
    if a == b:
        return
    path = shortest_farey_path(a, b, direction)
    assert all(oracle_arc_contains(a, b, direction, x) for x in path)


def test_farey_path_validation():
    with pytest.raises(ValueError):
        FareyPath((Slope(0, 1), Slope(2, 1)))
    with pytest.raises(ValueError):
        FareyPath((Slope(0, 1), INF, Slope(0, 1)))


@pytest.mark.parametrize(
    "t,sizes",
    [(1, (1,)), (2, (2,)), (3, (1, 1)), (7, (1, 1)), (-1, (1,)), (-4, (4,))],
)
def test_leg_blocks(t, sizes):
    path = shortest_farey_path(reduce(-1, t), INF)
    blocks = block_decompose(path)
    assert sum(hi - lo for lo, hi in blocks) == len(path)
    assert tuple(sorted(hi - lo for lo, hi in blocks)) == tuple(sorted(sizes))
    assert leg_block_sizes(t) == sizes


@pytest.mark.parametrize("t", [t for t in range(-10, 11) if t])
def test_leg_structure_counts(t):
    choices = 1
    for m in leg_block_sizes(t):
        choices *= m + 1
    assert choices == (2 if t == 1 else 3 if t == 2 else 4 if t >= 3 else 1 - t)
