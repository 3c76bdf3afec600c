"""Rotation numbers of the link components.

Two independent routes:

* ``rotation_table`` reads the transcribed tables (the normative source).
* ``euler_path_sum`` evaluates the relative Euler class as a signed sum over
  basic slices, using the raw fraction calculus.  It only handles the
  decorations whose sums are worked out in full: every leg slice carries the
  sign opposite to the central slice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import UnsupportedDecoration
from .exact_arith import RawFraction, bullet, ominus
from .rotation_data import find_record
from .tight_enum import Decoration, leg_block_sizes

__all__ = ["RotationTriple", "TableRow", "rotation_table", "euler_path_sum"]

TIGHT = "tight"
OVERTWISTED = "overtwisted"


@dataclass(frozen=True, order=True)
class RotationTriple:
    r0: int
    r1: int
    r2: int

    def __iter__(self):
        return iter((self.r0, self.r1, self.r2))

    def __neg__(self) -> "RotationTriple":
        return RotationTriple(-self.r0, -self.r1, -self.r2)

    def satisfies_parity(self, t0: int, t1: int, t2: int) -> bool:
        return all((r - t - 1) % 2 == 0 for r, t in zip(self, (t0, t1, t2)))

    def __str__(self) -> str:
        return f"({self.r0}, {self.r1}, {self.r2})"


@dataclass(frozen=True)
class TableRow:
    r: RotationTriple
    d3: Fraction
    ambient: str
    record: str
    entry: Tuple[str, str, str]


def rotation_table(t0: int, t1: int, t2: int, path: Optional[str] = None) -> List[TableRow]:
    record, swapped = find_record(t0, t1, t2, path)
    t = (t0, t2, t1) if swapped else (t0, t1, t2)
    rows = []
    for entry in record.entries:
        for a, b, c in entry.instances(t):
            triple = RotationTriple(a, c, b) if swapped else RotationTriple(a, b, c)
            src = (entry.source[0], entry.source[2], entry.source[1]) if swapped else entry.source
            rows.append(TableRow(triple, entry.d3, record.ambient, record.id, src))
    return rows


# -- path sums ---------------------------------------------------------------

def _rf(p: int, q: int) -> RawFraction:
    return RawFraction(p, q)


_ZERO = _rf(0, 1)
_INF = _rf(1, 0)


def _central_terms(t0: int):
    """Contribution of the central slice to (r0, r_i)."""
    return (
        bullet(ominus(_INF, _rf(t0, 1)), _ZERO),
        bullet(ominus(_rf(-t0, 1), _rf(-1, 0)), _INF),
    )


def _leg_terms(t: int):
    """Per-slice contributions of a leg to r0 and to its own r_i."""
    if t < 0:
        n = -t
        to_r0 = [bullet(ominus(_rf(-1, m), _rf(-1, m - 1)), _ZERO) for m in range(n, 0, -1)]
        to_ri = [bullet(ominus(_rf(1, k), _rf(1, k + 1)), _INF) for k in range(n)]
        return to_r0, to_ri
    if t >= 1:
        to_r0 = [
            bullet(ominus(_rf(1, t), _ZERO), _ZERO),
            bullet(ominus(_ZERO, _rf(-1, 0)), _ZERO),
        ]
        to_ri = [
            bullet(ominus(_INF, _ZERO), _INF),
            bullet(ominus(_ZERO, _rf(-1, t)), _INF),
        ]
        return to_r0, to_ri
    return [], []


def _pattern_ok(d: Decoration, t1: int, t2: int) -> bool:
    s = d.sigma0
    legs_opposite = all(x == -s for i in (1, 2) for x in d.leg_signs(i))
    if not legs_opposite:
        return False
    if t1 < 0 and t2 < 0:
        return True
    if t1 >= 2 and t2 >= 2:
        return True
    if t1 == 0 and t2 >= 1:
        return True
    return False


def euler_path_sum(d: Decoration, t0: int, t1: int, t2: int) -> RotationTriple:
    """Rotation numbers from the relative Euler class of a decoration."""
    if t2 == 0 and t1 != 0:
        r = euler_path_sum(d.mirror(), t0, t2, t1)
        return RotationTriple(r.r0, r.r2, r.r1)
    for leg, t in ((d.leg1, t1), (d.leg2, t2)):
        if tuple(len(b) for b in leg) != leg_block_sizes(t):
            raise UnsupportedDecoration(f"{d} does not fit the legs of ({t0}, {t1}, {t2})")
    if not _pattern_ok(d, t1, t2):
        raise UnsupportedDecoration(
            f"{d} at ({t0}, {t1}, {t2}): only decorations whose leg slices all carry the "
            "sign opposite to the central slice are supported"
        )
    s = d.sigma0
    c0, ci = _central_terms(t0)
    r0 = s * c0
    rs = []
    for t in (t1, t2):
        to_r0, to_ri = _leg_terms(t)
        r0 += -s * sum(to_r0)
        rs.append(s * ci + -s * sum(to_ri))
    return RotationTriple(r0, rs[0], rs[1])
