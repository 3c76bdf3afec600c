"""tb, rot and d3 from contact (+-1)-surgery diagrams.

A diagram is pure linking data: surgery knots with their Legendrian
invariants and coefficients, the pairwise linking numbers, and any tracked
Legendrian components sitting in the complement.  All arithmetic is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Sequence, Tuple, Union

import jsonschema
import yaml

from .errors import DomainError, ParameterOutOfRange, SingularMatrix

__all__ = [
    "SurgeryKnot",
    "TrackedComponent",
    "SurgeryDiagram",
    "linking_matrix",
    "det_exact",
    "signature_exact",
    "solve_exact",
    "c_squared",
    "d3",
    "bordered_det",
    "tb_after",
    "rot_after",
    "build_surgery_family",
    "build_section6_family",
    "load_diagram",
    "diagram_from_dict",
]

Matrix = List[List[int]]


@dataclass(frozen=True)
class SurgeryKnot:
    tb0: int
    rot0: int
    coeff: int

    def __post_init__(self) -> None:
        if self.tb0 == 0:
            raise DomainError("surgery knots must have non-zero tb")
        if self.coeff not in (1, -1):
            raise DomainError("contact surgery coefficient must be +1 or -1")


@dataclass(frozen=True)
class TrackedComponent:
    name: str
    tb0: int
    rot0: int
    lk: Tuple[int, ...]


@dataclass(frozen=True)
class SurgeryDiagram:
    knots: Tuple[SurgeryKnot, ...]
    linking: Tuple[Tuple[int, ...], ...]
    components: Tuple[TrackedComponent, ...] = field(default=())

    def __post_init__(self) -> None:
        n = len(self.knots)
        object.__setattr__(self, "knots", tuple(self.knots))
        object.__setattr__(self, "linking", tuple(tuple(r) for r in self.linking))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.linking) != n or any(len(r) != n for r in self.linking):
            raise DomainError(f"linking matrix must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if self.linking[i][j] != self.linking[j][i]:
                    raise DomainError(f"linking matrix is not symmetric at ({i}, {j})")
        for c in self.components:
            if len(c.lk) != n:
                raise DomainError(f"component {c.name} needs {n} linking numbers")

    def component(self, which: Union[str, int]) -> TrackedComponent:
        if isinstance(which, int):
            return self.components[which]
        for c in self.components:
            if c.name == which:
                return c
        raise DomainError(f"no component named {which!r}")

    def to_dict(self) -> dict:
        return {
            "surgery_knots": [{"tb": k.tb0, "rot": k.rot0, "coefficient": k.coeff} for k in self.knots],
            "linking": [list(r) for r in self.linking],
            "components": [
                {"name": c.name, "tb": c.tb0, "rot": c.rot0, "lk": list(c.lk)} for c in self.components
            ],
        }


# -- exact linear algebra ----------------------------------------------------

def det_exact(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def signature_exact(m: Sequence[Sequence[int]]) -> int:
    """Signature of a symmetric matrix by congruence over the rationals."""
    a = [[Fraction(x) for x in r] for r in m]
    sig = 0
    while a:
        n = len(a)
        piv = next((i for i in range(n) if a[i][i] != 0), None)
        if piv is not None:
            p = a[piv][piv]
            sig += 1 if p > 0 else -1
            rest = [i for i in range(n) if i != piv]
            a = [[a[i][j] - a[i][piv] * a[piv][j] / p for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
        if pair is None:
            break  # the remaining form is zero
        i, j = pair
        h = a[i][j]
        # [[0, h], [h, 0]] is hyperbolic: one positive and one negative square
        rest = [k for k in range(n) if k not in (i, j)]
        a = [[a[p][q] - (a[p][i] * a[j][q] + a[p][j] * a[i][q]) / h for q in rest] for p in rest]
    return sig


def solve_exact(m: Sequence[Sequence[int]], v: Sequence[int]) -> List[Fraction]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(m, v)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise SingularMatrix("linking matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _dot(u, v) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(u, v)), Fraction(0))


# -- invariants ----------------------------------------------------------------

def linking_matrix(d: SurgeryDiagram) -> Matrix:
    """Off-diagonal linking numbers; diagonal tb + coefficient (the topological framing)."""
    n = len(d.knots)
    return [
        [d.knots[i].tb0 + d.knots[i].coeff if i == j else d.linking[i][j] for j in range(n)]
        for i in range(n)
    ]


def _nonsingular(d: SurgeryDiagram) -> Matrix:
    m = linking_matrix(d)
    if det_exact(m) == 0:
        raise SingularMatrix("linking matrix is singular")
    return m


def _rot_vector(d: SurgeryDiagram) -> List[int]:
    return [k.rot0 for k in d.knots]


def c_squared(d: SurgeryDiagram) -> Fraction:
    """rot^T M^{-1} rot, the square of the class Poincare dual to c1."""
    if not d.knots:
        return Fraction(0)
    m = _nonsingular(d)
    x = solve_exact(m, _rot_vector(d))
    return _dot(x, _rot_vector(d))


def d3(d: SurgeryDiagram) -> Fraction:
    if d.knots:
        _nonsingular(d)
    sigma = signature_exact(linking_matrix(d))
    chi = 1 + len(d.knots)
    q = sum(1 for k in d.knots if k.coeff == 1)
    return (c_squared(d) - 3 * sigma - 2 * chi) / 4 + q


def bordered_det(d: SurgeryDiagram, which: Union[str, int]) -> int:
    """Determinant of the linking matrix extended by the component, lk with itself 0."""
    c = d.component(which)
    m = linking_matrix(d)
    ext = [[0] + list(c.lk)] + [[c.lk[i]] + m[i] for i in range(len(m))]
    return det_exact(ext)


def tb_after(d: SurgeryDiagram, which: Union[str, int]) -> Fraction:
    c = d.component(which)
    if not d.knots:
        return Fraction(c.tb0)
    det_m = det_exact(_nonsingular(d))
    return c.tb0 + Fraction(bordered_det(d, which), det_m)


def rot_after(d: SurgeryDiagram, which: Union[str, int]) -> Fraction:
    c = d.component(which)
    if not d.knots:
        return Fraction(c.rot0)
    m = _nonsingular(d)
    return c.rot0 - _dot(_rot_vector(d), solve_exact(m, c.lk))


# -- the explicit family -------------------------------------------------------

def build_surgery_family(t0: int) -> SurgeryDiagram:
    """Surgery presentation of an A3 link with tb = (t0, 2, 2), t0 >= 4.

    t0 - 1 surgery knots: two with tb -3 and rot +-2, a chain of tb -1
    unknots with contact (-1)-surgery, and a final tb -2, rot 1 knot.  All
    (+1)-surgeries are on the first two and the last knot.
    """
    if not isinstance(t0, int) or t0 < 4:
        raise ParameterOutOfRange(f"the family is defined for t0 >= 4, got {t0}")
    n = t0 - 1
    link = [[0] * n for _ in range(n)]
    for i in range(3):
        for j in range(3):
            if i != j:
                link[i][j] = -1
    for i in range(2, n - 1):
        link[i][i + 1] = link[i + 1][i] = -1
    knots = [SurgeryKnot(-3, 2, 1), SurgeryKnot(-3, -2, 1)]
    knots += [SurgeryKnot(-1, 0, -1) for _ in range(n - 3)]
    knots.append(SurgeryKnot(-2, 1, 1))

    if t0 == 4:
        lk0 = (-1, -1, -2)
    else:
        lk0 = tuple([0] * (n - 2) + [-1, -2])
    e = (-1) ** t0
    lk1 = tuple(e * x for x in [1, 3, 1] + [0] * (n - 3))
    lk2 = tuple(e * x for x in [3, 1, 1] + [0] * (n - 3))
    comps = (
        TrackedComponent("K0", -2, 1, lk0),
        TrackedComponent("K1", -3, 2 * e, lk1),
        TrackedComponent("K2", -3, -2 * e, lk2),
    )
    return SurgeryDiagram(tuple(knots), tuple(map(tuple, link)), comps)


build_section6_family = build_surgery_family


# -- file format ---------------------------------------------------------------

def _schema() -> dict:
    return json.loads(resources.files("a3links").joinpath("data/diagram.schema.json").read_text())


def diagram_from_dict(raw: dict) -> SurgeryDiagram:
    try:
        jsonschema.validate(raw, _schema())
    except jsonschema.ValidationError as exc:
        raise DomainError(f"invalid diagram: {exc.message}") from exc
    knots = tuple(SurgeryKnot(k["tb"], k["rot"], k["coefficient"]) for k in raw["surgery_knots"])
    n = len(knots)
    link = raw.get("linking") or [[0] * n for _ in range(n)]
    # the diagonal carries no information and is ignored
    link = [[0 if i == j else link[i][j] for j in range(len(link[i]))] for i in range(len(link))]
    comps = tuple(
        TrackedComponent(c["name"], c["tb"], c["rot"], tuple(c["lk"])) for c in raw.get("components", [])
    )
    return SurgeryDiagram(knots, tuple(map(tuple, link)), comps)


def load_diagram(path: str) -> SurgeryDiagram:
    """Read a diagram from a YAML or JSON file."""
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise DomainError(f"{path}: expected a mapping at top level")
    return diagram_from_dict(raw)


def invariants_report(d: SurgeryDiagram) -> Dict[str, object]:
    """Everything the CLI prints for a diagram."""
    m = linking_matrix(d)
    out: Dict[str, object] = {
        "knots": len(d.knots),
        "det": det_exact(m),
        "signature": signature_exact(m),
        "c2": c_squared(d),
        "d3": d3(d),
        "components": [],
    }
    for c in d.components:
        out["components"].append(
            {
                "name": c.name,
                "tb": tb_after(d, c.name),
                "rot": rot_after(d, c.name),
                "bordered_det": bordered_det(d, c.name),
            }
        )
    return out
