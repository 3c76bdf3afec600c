"""Loader and evaluator for the bundled rotation-table data file.

The file format is described at the top of ``data/rotation_tables.yaml``.
Set ``A3LINKS_ROTATION_TABLES`` to use a different file.
"""

from __future__ import annotations

import ast
import json
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import List, Optional, Tuple

import jsonschema
import yaml

from .errors import TableDataError

ENV_VAR = "A3LINKS_ROTATION_TABLES"

_COND = re.compile(r"^(==|>=|<=|<|>)\s*(-?\d+)$")
_RANGE = re.compile(r"^\{(.+)\.\.(.+)\}$")
_OPS = {
    "==": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
}
_VARS = ("t0", "t1", "t2")


class Affine:
    """An integer affine expression in t0, t1, t2, parsed with ``ast``."""

    def __init__(self, text: str):
        self.text = text
        try:
            tree = ast.parse(text.replace("−", "-"), mode="eval")
        except SyntaxError as exc:
            raise TableDataError(f"cannot parse expression {text!r}") from exc
        self.const, self.coeffs = self._walk(tree.body)

    def _walk(self, node) -> Tuple[int, Tuple[int, int, int]]:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value, (0, 0, 0)
        if isinstance(node, ast.Name) and node.id in _VARS:
            c = [0, 0, 0]
            c[_VARS.index(node.id)] = 1
            return 0, tuple(c)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            k, c = self._walk(node.operand)
            if isinstance(node.op, ast.USub):
                return -k, tuple(-x for x in c)
            return k, c
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub)):
            k1, c1 = self._walk(node.left)
            k2, c2 = self._walk(node.right)
            sgn = 1 if isinstance(node.op, ast.Add) else -1
            return k1 + sgn * k2, tuple(a + sgn * b for a, b in zip(c1, c2))
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Mult):
            k1, c1 = self._walk(node.left)
            k2, c2 = self._walk(node.right)
            if any(c1) and any(c2):
                raise TableDataError(f"{self.text!r} is not affine")
            if any(c1):
                return k1 * k2, tuple(k2 * x for x in c1)
            return k1 * k2, tuple(k1 * x for x in c2)
        raise TableDataError(f"unsupported syntax in expression {self.text!r}")

    def __call__(self, t: Tuple[int, int, int]) -> int:
        return self.const + sum(c * x for c, x in zip(self.coeffs, t))


@dataclass(frozen=True)
class Part:
    sign: int  # 0 unmarked, +1 for "±", -1 for "∓"
    lo: Affine
    hi: Optional[Affine]  # None for a single value

    def values(self, t, instance: int) -> List[int]:
        factor = self.sign * instance if self.sign else 1
        if self.hi is None:
            return [factor * self.lo(t)]
        a, b = self.lo(t), self.hi(t)
        if (b - a) % 2:
            raise TableDataError(f"range endpoints {a}, {b} differ by an odd amount")
        return [factor * x for x in range(a, b + 1, 2)]

    @property
    def t0_slope(self) -> Optional[int]:
        """d r / d t0 in the top instance, for single-valued parts."""
        if self.hi is not None:
            return None
        return (self.sign or 1) * self.lo.coeffs[0]


def _parse_part(text: str) -> Part:
    s = text.strip()
    sign = 0
    if s[:1] == "±":
        sign, s = 1, s[1:].strip()
    elif s[:1] == "∓":
        sign, s = -1, s[1:].strip()
    m = _RANGE.match(s)
    if m:
        return Part(sign, Affine(m.group(1)), Affine(m.group(2)))
    return Part(sign, Affine(s), None)


@dataclass(frozen=True)
class Entry:
    coords: Tuple[Tuple[Part, ...], Tuple[Part, ...], Tuple[Part, ...]]
    d3: Fraction
    source: Tuple[str, str, str]

    def instances(self, t) -> List[Tuple[int, int, int]]:
        """Union of the top and bottom instances, first-seen order."""
        out: List[Tuple[int, int, int]] = []
        seen = set()
        for inst in (1, -1):
            axes = []
            for parts in self.coords:
                vals: List[int] = []
                for p in parts:
                    for v in p.values(t, inst):
                        if v not in vals:
                            vals.append(v)
                axes.append(vals)
            for triple in product(*axes):
                if triple not in seen:
                    seen.add(triple)
                    out.append(triple)
        return out


@dataclass(frozen=True)
class Record:
    id: str
    guard: Tuple[str, str, str]
    ambient: str
    entries: Tuple[Entry, ...]

    def matches(self, t) -> bool:
        for cond, x in zip(self.guard, t):
            if cond == "any":
                continue
            m = _COND.match(cond)
            if not _OPS[m.group(1)](x, int(m.group(2))):
                return False
        return True


def _schema() -> dict:
    text = resources.files("a3links").joinpath("data/rotation_tables.schema.json").read_text()
    return json.loads(text)


def default_path() -> str:
    return str(resources.files("a3links").joinpath("data/rotation_tables.yaml"))


def table_path() -> str:
    return os.environ.get(ENV_VAR) or default_path()


@lru_cache(maxsize=8)
def load_records(path: str) -> Tuple[Record, ...]:
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    try:
        jsonschema.validate(raw, _schema())
    except jsonschema.ValidationError as exc:
        raise TableDataError(f"{path}: {exc.message}") from exc
    records = []
    ids = set()
    for rec in raw["records"]:
        if rec["id"] in ids:
            raise TableDataError(f"duplicate record id {rec['id']}")
        ids.add(rec["id"])
        entries = []
        for ent in rec["entries"]:
            d3 = ent.get("d3", rec.get("d3"))
            if d3 is None:
                raise TableDataError(f"record {rec['id']}: entry {ent['r']} has no d3")
            coords = tuple(tuple(_parse_part(p) for p in c.split("|")) for c in ent["r"])
            entries.append(Entry(coords, Fraction(d3), tuple(ent["r"])))
        guard = tuple(rec["guard"][k].replace(" ", "") for k in _VARS)
        records.append(Record(rec["id"], guard, rec["ambient"], tuple(entries)))
    return tuple(records)


def find_record(t0: int, t1: int, t2: int, path: Optional[str] = None) -> Tuple[Record, bool]:
    """The record governing (t0, t1, t2) and whether K1, K2 were swapped to reach it."""
    records = load_records(path or table_path())
    for swapped, t in ((False, (t0, t1, t2)), (True, (t0, t2, t1))):
        hits = [r for r in records if r.matches(t)]
        if len(hits) > 1:
            raise TableDataError(f"overlapping records {[r.id for r in hits]} at {t}")
        if hits:
            return hits[0], swapped
    raise TableDataError(f"no record covers ({t0}, {t1}, {t2})")
