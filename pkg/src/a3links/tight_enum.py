"""Decorations of tight structures on the pair-of-pants bundle and their counts.

A decoration records the sign of the central basic slice and the signs of
the two leg factorizations.  Each leg is the slice sequence of the
counterclockwise Farey path from -1/t to infinity, grouped into continued
fraction blocks and listed innermost block first (the block touching the
slope-infinity torus comes first).  Signs inside a block may be shuffled, so
the canonical form sorts them with '-' before '+'.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import List, Optional, Tuple

from .errors import RegionMismatch
from .exact_arith import INF, ceil_term, reduce
from .farey_graph import block_decompose, shortest_farey_path

__all__ = [
    "Decoration",
    "CountCase",
    "NonTwistingLabel",
    "leg_block_sizes",
    "twisting_sum",
    "count_strongly_exceptional",
    "enumerate_zero_twisting",
    "enumerate_non_twisting",
    "canonicalize_decoration",
    "is_discarded",
    "flip",
]

Block = Tuple[int, ...]
Leg = Tuple[Block, ...]


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


@dataclass(frozen=True)
class Decoration:
    sigma0: int
    leg1: Leg
    leg2: Leg
    twisting: str = field(default="zero_twisting", compare=False)

    def __post_init__(self) -> None:
        if self.sigma0 not in (1, -1):
            raise ValueError("sigma0 must be +1 or -1")
        for leg in (self.leg1, self.leg2):
            for block in leg:
                if not block or any(s not in (1, -1) for s in block):
                    raise ValueError("blocks are non-empty tuples of +1/-1")

    @property
    def legs(self) -> Tuple[Leg, Leg]:
        return (self.leg1, self.leg2)

    def leg_signs(self, i: int) -> Tuple[int, ...]:
        leg = self.legs[i - 1]
        return tuple(s for block in leg for s in block)

    def sorted(self) -> "Decoration":
        def srt(leg: Leg) -> Leg:
            return tuple(tuple(sorted(b)) for b in leg)

        return Decoration(self.sigma0, srt(self.leg1), srt(self.leg2), self.twisting)

    def mirror(self) -> "Decoration":
        """Exchange the two legs (the K1 <-> K2 symmetry)."""
        return Decoration(self.sigma0, self.leg2, self.leg1, self.twisting)

    def __str__(self) -> str:
        def leg_str(leg: Leg) -> str:
            if len(leg) == 1:
                return "(" + "".join(map(_sign_char, leg[0])) + ")"
            return "(" + "".join("(" + "".join(map(_sign_char, b)) + ")" for b in leg) + ")"

        return "(" + _sign_char(self.sigma0) + ")" + leg_str(self.leg1) + leg_str(self.leg2)

    @classmethod
    def parse(cls, text: str) -> "Decoration":
        """Inverse of ``str``: "(+)((-)(+))(-)", "(+)(--)(--)", "(+)()(-)"."""
        groups = _parse_groups(text.replace("−", "-").replace(" ", ""))
        if len(groups) != 3 or not all(isinstance(g, list) for g in groups):
            raise ValueError(f"expected three bracket groups in {text!r}")
        head = groups[0]
        if len(head) != 1 or not isinstance(head[0], str) or len(head[0]) != 1:
            raise ValueError(f"the central slice carries exactly one sign in {text!r}")
        legs = []
        for g in groups[1:]:
            if not g:
                legs.append(())
            elif len(g) == 1 and isinstance(g[0], str):
                legs.append((tuple(_sign(c) for c in g[0]),))
            elif all(isinstance(b, list) and len(b) == 1 and isinstance(b[0], str) for b in g):
                legs.append(tuple(tuple(_sign(c) for c in b[0]) for b in g))
            else:
                raise ValueError(f"malformed leg in {text!r}")
        return cls(_sign(head[0]), legs[0], legs[1])


def _sign(c: str) -> int:
    if c == "+":
        return 1
    if c == "-":
        return -1
    raise ValueError(f"bad sign character {c!r}")


def _parse_groups(text: str) -> list:
    """Nested parentheses as nested lists; runs of signs become strings."""
    stack: list = [[]]
    i = 0
    while i < len(text):
        c = text[i]
        if c == "(":
            stack.append([])
        elif c == ")":
            if len(stack) == 1:
                raise ValueError(f"unbalanced ')' in {text!r}")
            group = stack.pop()
            stack[-1].append(group)
        elif c in "+-":
            j = i
            while j < len(text) and text[j] in "+-":
                j += 1
            stack[-1].append(text[i:j])
            i = j
            continue
        else:
            raise ValueError(f"unexpected {c!r} in {text!r}")
        i += 1
    if len(stack) != 1:
        raise ValueError(f"unbalanced '(' in {text!r}")
    return stack[0]


def flip(d: Decoration) -> Decoration:
    """Global sign flip."""
    neg = lambda leg: tuple(tuple(-s for s in b) for b in leg)  # noqa: E731
    return Decoration(-d.sigma0, neg(d.leg1), neg(d.leg2), d.twisting)


@lru_cache(maxsize=None)
def leg_block_sizes(t: int) -> Tuple[int, ...]:
    """Block sizes of the leg with parameter t, innermost first."""
    if t == 0:
        return ()
    path = shortest_farey_path(reduce(-1, t), INF)
    sizes = [hi - lo for lo, hi in block_decompose(path)]
    return tuple(reversed(sizes))


def twisting_sum(t0: int, t1: int, t2: int) -> Optional[int]:
    """t0 + ceil(-1/t1) + ceil(-1/t2), or None when a leg is absent."""
    if t1 == 0 or t2 == 0:
        return None
    return t0 + ceil_term(t1) + ceil_term(t2)


def _check_shape(d: Decoration, t1: int, t2: int) -> None:
    for leg, t in ((d.leg1, t1), (d.leg2, t2)):
        if tuple(len(b) for b in leg) != leg_block_sizes(t):
            raise ValueError(f"decoration {d} does not fit leg parameter {t}")


def _same_sign(d: Decoration) -> bool:
    s = d.sigma0
    return all(leg and s in leg[0] for leg in d.legs)


def _flip_one(block: Block, s: int) -> Block:
    lst = list(block)
    lst[lst.index(s)] = -s
    return tuple(sorted(lst))


def _flip3(d: Decoration) -> Decoration:
    s = d.sigma0
    legs = [(_flip_one(leg[0], s),) + leg[1:] for leg in d.legs]
    return Decoration(-s, legs[0], legs[1], d.twisting)


def _special_partner(d: Decoration, t0: int, t1: int, t2: int) -> Optional[Decoration]:
    """Identifications beyond the generic rule, stated for (t0, t1, t2) and its mirror."""
    if (t0, t2, t1) in ((3, 3, 1),) or (t0 == 1 and t1 == 3 and t2 < 0):
        partner = _special_partner(d.mirror(), t0, t2, t1)
        return partner.mirror() if partner else None
    if (t0, t1, t2) == (3, 3, 1):
        a = Decoration.parse("(+)((-)(+))(+)")
        b = Decoration.parse("(-)((+)(-))(-)")
        if d == a:
            return b
        if d == b:
            return a
        return None
    if t0 == 1 and t1 < 0 and t2 == 3:
        n = -t1
        plus = d.leg1[0].count(1)
        minus = n - plus
        if d.sigma0 == 1 and d.leg2 == ((-1,), (1,)) and plus >= 1:
            return Decoration(-1, (tuple(sorted([-1] * (minus + 1) + [1] * (plus - 1))),), ((1,), (-1,)))
        if d.sigma0 == -1 and d.leg2 == ((1,), (-1,)) and minus >= 1:
            return Decoration(1, (tuple(sorted([1] * (plus + 1) + [-1] * (minus - 1))),), ((-1,), (1,)))
    return None


def _partner(d: Decoration, t0: int, t1: int, t2: int) -> Optional[Decoration]:
    S = twisting_sum(t0, t1, t2)
    if S == 3 and _same_sign(d):
        return _flip3(d)
    return _special_partner(d, t0, t1, t2)


def canonicalize_decoration(d: Decoration, t0: int, t1: int, t2: int) -> Decoration:
    """Representative of d modulo shuffles and the stated identifications.

    Of an identified pair the member with a positive central sign is kept.
    """
    d = d.sorted()
    _check_shape(d, t1, t2)
    other = _partner(d, t0, t1, t2)
    if other is not None and d.sigma0 < 0:
        return other
    return d


def is_discarded(d: Decoration, t0: int, t1: int, t2: int) -> bool:
    """True when the decoration cannot give an appropriate tight structure."""
    S = twisting_sum(t0, t1, t2)
    if S is None:
        return False
    if S <= 1:
        return True
    if S == 2:
        return _same_sign(d.sorted())
    return False


def _all_decorations(t1: int, t2: int) -> List[Decoration]:
    def legs(t: int):
        choices = []
        for m in leg_block_sizes(t):
            choices.append([tuple([-1] * (m - p) + [1] * p) for p in range(m + 1)])
        return [tuple(c) for c in product(*choices)]

    out = []
    for s0 in (1, -1):
        for l1 in legs(t1):
            for l2 in legs(t2):
                out.append(Decoration(s0, l1, l2))
    return out


def enumerate_zero_twisting(t0: int, t1: int, t2: int) -> List[Decoration]:
    seen = []
    have = set()
    for d in _all_decorations(t1, t2):
        if is_discarded(d, t0, t1, t2):
            continue
        c = canonicalize_decoration(d, t0, t1, t2)
        if c not in have:
            have.add(c)
            seen.append(c)
    return seen


@dataclass(frozen=True, order=True)
class NonTwistingLabel:
    """Opaque index of a structure without a zero-twisting vertical circle."""

    i: int
    j: int
    k: int

    def __str__(self) -> str:
        return f"N({self.i},{self.j},{self.k})"


def _leg_count_non_twisting(t: int) -> int:
    if t < 0:
        return -t
    return 1 if t == 1 else 2


def enumerate_non_twisting(t0: int, t1: int, t2: int) -> List[NonTwistingLabel]:
    S = twisting_sum(t0, t1, t2)
    if S is None or S > 1:
        raise RegionMismatch(
            f"no non-twisting structures at ({t0}, {t1}, {t2}): "
            "both legs must be present and t0 + ceil(-1/t1) + ceil(-1/t2) <= 1"
        )
    return [
        NonTwistingLabel(i, j, k)
        for i in range(2 - S)
        for j in range(_leg_count_non_twisting(t1))
        for k in range(_leg_count_non_twisting(t2))
    ]


@dataclass(frozen=True)
class CountCase:
    t0: int
    t1: int
    t2: int
    branch: str
    formula_value: int

    def __post_init__(self) -> None:
        if self.formula_value < 0:
            raise ValueError("negative count")


def _count_reduced(t0: int, t1: int, t2: int) -> Tuple[str, int]:
    if t1 < 0 and t2 < 0:
        if t0 >= 2:
            return "t1<0,t2<0,t0>=2", 2 * t1 * t2 - 2 * t1 - 2 * t2 + 2
        if t0 == 1:
            return "t1<0,t2<0,t0=1", t1 * t2 - 2 * t1 - 2 * t2 + 2
        if t0 == 0:
            return "t1<0,t2<0,t0=0", -2 * t1 - 2 * t2 + 2
        return "t1<0,t2<0,t0<=-1", -t0 * t1 * t2
    if t1 == 1 and t2 == 1:
        if t0 >= 6:
            return "t1=t2=1,t0>=6", 8
        if t0 == 5:
            return "t1=t2=1,t0=5", 7
        if t0 == 4:
            return "t1=t2=1,t0=4", 6
        return "t1=t2=1,t0<=3", 4 - t0
    if t1 > 1 and t2 == 1:
        if t0 <= 2:
            return "t1>1,t2=1,t0<=2", 6 - 2 * t0
        if t1 == 2:
            return {5: ("t1=2,t2=1,t0>=5", 12), 4: ("t1=2,t2=1,t0=4", 10), 3: ("t1=2,t2=1,t0=3", 8)}[min(t0, 5)]
        if t0 >= 5:
            return "t1>=3,t2=1,t0>=5", 16
        if t0 == 4:
            return "t1>=3,t2=1,t0=4", 14
        if t1 == 3:
            return "t1=3,t2=1,t0=3", 11
        return "t1>=4,t2=1,t0=3", 12
    if t1 > 1 and t2 > 1:
        if t0 <= 1:
            return "t1>1,t2>1,t0<=1", 8 - 4 * t0
        lo, hi = sorted((t1, t2))
        base = {(2, 2): 18, (2, 3): 24, (3, 3): 32}[(min(lo, 3), min(hi, 3))]
        tag = {18: "t1=t2=2", 24: "min(t1,t2)=2,max(t1,t2)>=3", 32: "t1>=3,t2>=3"}[base]
        if t0 >= 4:
            return f"{tag},t0>=4", base
        return f"{tag},t0={t0}", base - 4 * (4 - t0)
    if t1 < 0 and t2 == 1:
        if t0 >= 4:
            return "t1<0,t2=1,t0>=4", 4 - 4 * t1
        if t0 == 3:
            return "t1<0,t2=1,t0=3", 4 - 3 * t1
        if t0 == 2:
            return "t1<0,t2=1,t0=2", 4 - 2 * t1
        return "t1<0,t2=1,t0<=1", t0 * t1 - 2 * t1
    if t1 < 0 and t2 > 1:
        if t0 <= 0:
            return "t1<0,t2>1,t0<=0", 2 * t0 * t1 - 2 * t1
        if t2 == 2:
            if t0 >= 3:
                return "t1<0,t2=2,t0>=3", 6 - 6 * t1
            if t0 == 2:
                return "t1<0,t2=2,t0=2", 6 - 4 * t1
            return "t1<0,t2=2,t0=1", 6 - 2 * t1
        if t0 >= 3:
            return "t1<0,t2>=3,t0>=3", 8 - 8 * t1
        if t0 == 2:
            return "t1<0,t2>=3,t0=2", 8 - 6 * t1
        if t2 == 3:
            return "t1<0,t2=3,t0=1", 8 - 3 * t1
        return "t1<0,t2>=4,t0=1", 8 - 4 * t1
    if t1 == 0:
        if t2 <= 0:
            return "t1=0,t2<=0", 2 - 2 * t2
        return {1: ("t1=0,t2=1", 4), 2: ("t1=0,t2=2", 6)}.get(t2, ("t1=0,t2>=3", 8))
    raise AssertionError("unreduced parameters")  # pragma: no cover


def _needs_swap(t1: int, t2: int) -> bool:
    return (t2 == 0 and t1 != 0) or (t1 > 0 and t2 < 0) or (t1 == 1 and t2 > 1)


def count_strongly_exceptional(t0: int, t1: int, t2: int) -> CountCase:
    """Closed-form number of strongly exceptional links with these tb values."""
    if _needs_swap(t1, t2):
        branch, value = _count_reduced(t0, t2, t1)
        branch = branch.replace("t1", "T").replace("t2", "t1").replace("T", "t2")
    else:
        branch, value = _count_reduced(t0, t1, t2)
    return CountCase(t0, t1, t2, branch, value)
