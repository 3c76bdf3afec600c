"""Classification of strongly exceptional Legendrian A3 links.

``classify`` joins the closed-form count with the rotation tables and refuses
to answer when they disagree.  Classes are cross-labelled with the
decoration whose path sum reproduces them, and with the explicit surgery
diagram where one is available.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import ConsistencyFailure, DomainError, UnsupportedDecoration
from .euler_class import TIGHT, RotationTriple, euler_path_sum, rotation_table
from .surgery_calculus import build_surgery_family, d3 as diagram_d3, rot_after
from .tight_enum import (
    count_strongly_exceptional,
    enumerate_non_twisting,
    enumerate_zero_twisting,
    twisting_sum,
)

__all__ = [
    "D3_VALUES",
    "LegendrianClass",
    "classify",
    "VerifyRow",
    "VerifyReport",
    "verify_counts",
    "can_destabilize_K0",
    "MountainNode",
    "MountainEdge",
    "MountainGraph",
    "mountain_range",
    "mountain_range_k2",
]

D3_VALUES = frozenset(Fraction(n, 2) for n in (-3, -1, 1, 3, 5))


def is_tight_region(t0: int, t1: int, t2: int) -> bool:
    return t0 < 0 and t1 < 0 and t2 < 0


@dataclass(frozen=True)
class LegendrianClass:
    t: Tuple[int, int, int]
    r: RotationTriple
    d3: Fraction
    ambient: str
    provenance: str

    def __post_init__(self) -> None:
        if not self.r.satisfies_parity(*self.t):
            raise ConsistencyFailure(f"rotation {self.r} violates parity at tb {self.t}")
        tight = self.ambient == TIGHT
        if tight != (self.d3 == Fraction(-1, 2) and is_tight_region(*self.t)):
            raise ConsistencyFailure(f"ambient flag inconsistent for {self.t} {self.r}")

    def to_record(self) -> Dict[str, object]:
        return {
            "t0": self.t[0],
            "t1": self.t[1],
            "t2": self.t[2],
            "r0": self.r.r0,
            "r1": self.r.r1,
            "r2": self.r.r2,
            "d3": str(self.d3),
            "ambient": self.ambient,
            "provenance": self.provenance,
        }

    @classmethod
    def from_record(cls, rec: Dict[str, object]) -> "LegendrianClass":
        return cls(
            (int(rec["t0"]), int(rec["t1"]), int(rec["t2"])),
            RotationTriple(int(rec["r0"]), int(rec["r1"]), int(rec["r2"])),
            Fraction(str(rec["d3"])),
            str(rec["ambient"]),
            str(rec["provenance"]),
        )


def _path_sum_labels(t0: int, t1: int, t2: int) -> Dict[RotationTriple, str]:
    labels = {}
    if twisting_sum(t0, t1, t2) is not None and twisting_sum(t0, t1, t2) <= 1:
        return labels
    for d in enumerate_zero_twisting(t0, t1, t2):
        try:
            r = euler_path_sum(d, t0, t1, t2)
        except UnsupportedDecoration:
            continue
        labels[r] = f"decoration:{d}"
    return labels


def _surgery_labels(t0: int, t1: int, t2: int) -> Dict[Tuple[RotationTriple, Fraction], str]:
    if not (t1 == t2 == 2 and t0 >= 4):
        return {}
    dgm = build_surgery_family(t0)
    r = RotationTriple(*(int(rot_after(dgm, k)) for k in ("K0", "K1", "K2")))
    return {(r, diagram_d3(dgm)): f"surgery-diagram:family-t0={t0}"}


def classify(t0: int, t1: int, t2: int, table_path: Optional[str] = None) -> List[LegendrianClass]:
    count = count_strongly_exceptional(t0, t1, t2)
    rows = rotation_table(t0, t1, t2, table_path)
    if len(rows) != count.formula_value:
        raise ConsistencyFailure(
            f"({t0}, {t1}, {t2}): tables give {len(rows)} classes, "
            f"count formula [{count.branch}] gives {count.formula_value}"
        )
    seen = set()
    for row in rows:
        key = (row.r, row.d3)
        if key in seen:
            raise ConsistencyFailure(f"({t0}, {t1}, {t2}): duplicate class {row.r} d3={row.d3}")
        seen.add(key)
    by_triple: Dict[RotationTriple, int] = {}
    for row in rows:
        by_triple[row.r] = by_triple.get(row.r, 0) + 1
    sums = _path_sum_labels(t0, t1, t2)
    surgery = _surgery_labels(t0, t1, t2)
    out = []
    for row in rows:
        label = surgery.get((row.r, row.d3))
        if label is None and row.r in sums and by_triple[row.r] == 1:
            label = sums[row.r]
        if label is None:
            label = f"table:{row.record}"
        out.append(LegendrianClass((t0, t1, t2), row.r, row.d3, row.ambient, label))
    return out


# -- grid verification ---------------------------------------------------------

@dataclass(frozen=True)
class VerifyRow:
    t: Tuple[int, int, int]
    branch: str
    formula: int
    classes: Optional[int]
    enumerated: int
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.classes == self.formula == self.enumerated


@dataclass
class VerifyReport:
    rows: List[VerifyRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def failures(self) -> List[VerifyRow]:
        return [r for r in self.rows if not r.ok]

    def __len__(self) -> int:
        return len(self.rows)


def _verify_one(t: Tuple[int, int, int], table_path: Optional[str] = None) -> VerifyRow:
    t0, t1, t2 = t
    case = count_strongly_exceptional(t0, t1, t2)
    enumerated = len(enumerate_zero_twisting(t0, t1, t2))
    S = twisting_sum(t0, t1, t2)
    if S is not None and S <= 1:
        enumerated += len(enumerate_non_twisting(t0, t1, t2))
    try:
        classes = classify(t0, t1, t2, table_path)
    except DomainError as exc:
        return VerifyRow(t, case.branch, case.formula_value, None, enumerated, str(exc))
    err = None
    for c in classes:
        if c.ambient != TIGHT and c.d3 not in D3_VALUES:
            err = f"d3 {c.d3} outside the admissible set"
    return VerifyRow(t, case.branch, case.formula_value, len(classes), enumerated, err)


def verify_counts(
    t0_range: Iterable[int],
    t1_range: Iterable[int],
    t2_range: Iterable[int],
    jobs: int = 1,
    table_path: Optional[str] = None,
) -> VerifyReport:
    """Check table size, formula and enumeration agree on every grid triple."""
    triples = list(product(list(t0_range), list(t1_range), list(t2_range)))
    if jobs > 1 and len(triples) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_verify_one, triples, [table_path] * len(triples), chunksize=64))
    else:
        rows = [_verify_one(t, table_path) for t in triples]
    rows.sort(key=lambda r: r.t)
    return VerifyReport(rows)


def can_destabilize_K0(t0: int, t1: int, t2: int) -> bool:
    if t1 == 0 or t2 == 0:
        return True
    return twisting_sum(t0, t1, t2) >= 2


# -- mountain ranges -----------------------------------------------------------

@dataclass(frozen=True, order=True)
class MountainNode:
    tb: int
    rot: int
    d3: Fraction
    family: Tuple[int, int]

    @property
    def label(self) -> str:
        return f"tb={self.tb} rot={self.rot} d3={self.d3}"


@dataclass(frozen=True)
class MountainEdge:
    parent: MountainNode
    child: MountainNode
    status: str  # "described" or "inferred"

    def __post_init__(self) -> None:
        if self.child.tb != self.parent.tb - 1 or abs(self.child.rot - self.parent.rot) != 1:
            raise ValueError("a stabilization lowers tb by one and moves rot by one")


@dataclass
class MountainGraph:
    axis: str
    fixed: Dict[str, int]
    nodes: List[MountainNode] = field(default_factory=list)
    edges: List[MountainEdge] = field(default_factory=list)

    def to_dot(self) -> str:
        fixed = ", ".join(f"{k}={v}" for k, v in self.fixed.items())
        lines = ['digraph mountain {', f'  label="stabilizations of {self.axis} ({fixed})";']
        lines.append("  rankdir=TB;")
        ids = {n: f"n{i}" for i, n in enumerate(self.nodes)}
        for n, nid in ids.items():
            lines.append(
                f'  {nid} [label="tb={n.tb}\\nrot={n.rot}\\nd3={n.d3}", '
                f'family="{n.family[0]},{n.family[1]}"];'
            )
        for e in self.edges:
            style = "solid" if e.status == "described" else "dashed"
            lines.append(f'  {ids[e.parent]} -> {ids[e.child]} [status="{e.status}", style={style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _k0_described(t0: int, t1: int, t2: int, fam: Tuple[int, int], d3: Fraction) -> bool:
    S = twisting_sum(t0, t1, t2)
    if S is not None and S <= 1:
        return True
    half = Fraction(1, 2)
    if t1 == t2 == 1:
        return fam == (0, 0) and d3 == 5 * half
    if t1 >= 3 and t2 >= 3:
        if d3 == 5 * half:
            return fam in {(t1 - 1, 1 - t2), (1 - t1, t2 - 1), (1 - t1, 1 - t2), (t1 - 1, t2 - 1)}
        if d3 == half:
            return fam in {(1 - t1, t2 + 1), (t1 - 1, -t2 - 1)}
    return False


def _build(axis: str, fixed: Dict[str, int], layers: Dict[int, List[Tuple[int, Tuple[int, int], Fraction]]],
           described) -> MountainGraph:
    g = MountainGraph(axis, fixed)
    index = {}
    for tb in sorted(layers):
        for rot, fam, d3 in layers[tb]:
            node = MountainNode(tb, rot, d3, fam)
            g.nodes.append(node)
            index[(tb, rot, fam, d3)] = node
    for node in g.nodes:
        for step in (-1, 1):
            child = index.get((node.tb - 1, node.rot + step, node.family, node.d3))
            if child is not None:
                status = "described" if described(node) else "inferred"
                g.edges.append(MountainEdge(node, child, status))
    return g


def mountain_range(t1: int, t2: int, t0_values: Iterable[int]) -> MountainGraph:
    """Stabilization graph of K0 with t1, t2 fixed."""
    layers = {}
    for t0 in t0_values:
        layers[t0] = [(c.r.r0, (c.r.r1, c.r.r2), c.d3) for c in classify(t0, t1, t2)]

    def described(node: MountainNode) -> bool:
        return _k0_described(node.tb, t1, t2, node.family, node.d3)

    return _build("K0", {"t1": t1, "t2": t2}, layers, described)


def mountain_range_k2(t0: int, t1: int, t2_values: Iterable[int]) -> MountainGraph:
    """Stabilization graph of K2 with t0 and t1 fixed; described for t1 = 0."""
    layers = {}
    for t2 in t2_values:
        layers[t2] = [(c.r.r2, (c.r.r0, c.r.r1), c.d3) for c in classify(t0, t1, t2)]
    return _build("K2", {"t0": t0, "t1": t1}, layers, lambda node: t1 == 0)
