from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction

import pytest
import yaml
from hypothesis import given, strategies as st

from a3links.errors import TableDataError, UnsupportedDecoration
from a3links.euler_class import RotationTriple, euler_path_sum, rotation_table
from a3links.rotation_data import ENV_VAR, default_path, find_record, load_records
from a3links.tight_enum import Decoration, count_strongly_exceptional, enumerate_zero_twisting, flip

H = Fraction(1, 2)


def multiset(rows):
    return Counter((tuple(r.r), r.d3) for r in rows)


def test_table_five_one_one():
    want = Counter({
        ((4, 0, 2), H): 1, ((-4, 0, -2), H): 1, ((0, 0, 0), 5 * H): 1, ((4, 2, 0), H): 1,
        ((-4, -2, 0), H): 1, ((8, 2, 2), -3 * H): 1, ((-8, -2, -2), -3 * H): 1,
    })
    assert multiset(rotation_table(5, 1, 1)) == want


def test_table_tight_corner():
    rows = rotation_table(-1, -1, -1)
    assert multiset(rows) == Counter({((0, 0, 0), -H): 1})
    assert rows[0].ambient == "tight"


def test_table_four_two_one():
    rows = rotation_table(4, 2, 1)
    assert len(rows) == 10
    ms = multiset(rows)
    assert ms[((7, 3, 2), -3 * H)] == 1 and ms[((-7, -3, -2), -3 * H)] == 1


def test_table_swaps_legs():
    a = multiset(rotation_table(4, 2, 1))
    b = multiset(rotation_table(4, 1, 2))
    assert b == Counter({((r0, r2, r1), d): n for ((r0, r1, r2), d), n in a.items()})


@pytest.mark.parametrize("t0", [2, 3, 6])
def test_table_negative_legs_header(t0):
    rows = rotation_table(t0, -2, -3)
    assert {r.r.r0 for r in rows} == {t0 - 1, 1 - t0}
    for t, got in ((-2, {r.r.r1 for r in rows}), (-3, {r.r.r2 for r in rows})):
        header = set(range(t + 1, -t + 2, 2))
        assert got == header | {-x for x in header}


def test_grid_sizes_and_parity():
    for t0 in range(-5, 9):
        for t1 in range(-5, 7):
            for t2 in range(-5, 7):
                rows = rotation_table(t0, t1, t2)
                assert len(rows) == count_strongly_exceptional(t0, t1, t2).formula_value
                for row in rows:
                    assert row.r.satisfies_parity(t0, t1, t2)
                    if row.ambient == "tight":
                        assert row.d3 == -H and min(t0, t1, t2) < 0 and max(t0, t1, t2) < 0
                    else:
                        assert row.d3 in {-3 * H, -H, H, 3 * H, 5 * H}


def test_d3_stable_across_t0():
    for t1 in range(-5, 7):
        for t2 in range(-5, 7):
            prev = None
            for t0 in range(-5, 9):
                cur = defaultdict(set)
                for row in rotation_table(t0, t1, t2):
                    cur[row.r].add(row.d3)
                if prev is not None:
                    for r, d in cur.items():
                        if r in prev:
                            assert d == prev[r], (t0, t1, t2, r)
                prev = cur


# -- path sums ---------------------------------------------------------------------

@pytest.mark.parametrize(
    "dec,t,expected",
    [
        ("(+)(--)(--)", (2, -2, -2), (-1, -3, -3)),
        ("(+)(--)(--)", (5, 2, 2), (-8, -3, -3)),
        ("(+)()(-)", (4, 0, 1), (-5, -1, -2)),
        ("(+)()((-)(-))", (4, 0, 5), (-5, -1, -6)),
        ("(-)(+)()", (4, 1, 0), (5, 2, 1)),
    ],
)
def test_path_sum_examples(dec, t, expected):
    assert tuple(euler_path_sum(Decoration.parse(dec), *t)) == expected


def test_path_sum_unsupported():
    with pytest.raises(UnsupportedDecoration):
        euler_path_sum(Decoration.parse("(+)(-+)(--)"), 5, 2, 2)
    with pytest.raises(UnsupportedDecoration):
        euler_path_sum(Decoration.parse("(+)(-)(-)"), 5, 1, 1)
    with pytest.raises(UnsupportedDecoration):
        euler_path_sum(Decoration.parse("(+)(-)(-)"), 5, 2, 2)


def _legs(t, sign):
    if t == 0:
        return "()"
    if t < 0:
        return "(" + sign * -t + ")"
    if t == 1:
        return "(" + sign + ")"
    if t == 2:
        return "(" + sign * 2 + ")"
    return f"(({sign})({sign}))"


def _dec(s, t1, t2):
    o = "-" if s == "+" else "+"
    return Decoration.parse(f"({s}){_legs(t1, o)}{_legs(t2, o)}")


patterns = st.one_of(
    st.tuples(st.just("A"), st.integers(-6, 12), st.integers(-6, -1), st.integers(-6, -1)),
    st.tuples(st.just("B"), st.integers(-6, 12), st.integers(2, 7), st.integers(2, 7)),
    st.tuples(st.just("C"), st.integers(-6, 12), st.just(0), st.integers(1, 7)),
)


@given(patterns)
def test_path_sum_closed_forms(case):
    kind, t0, t1, t2 = case
    r = euler_path_sum(_dec("+", t1, t2), t0, t1, t2)
    expected = {
        "A": (1 - t0, t1 - 1, t2 - 1),
        "B": (-t0 - 3, -t1 - 1, -t2 - 1),
        "C": (-(t0 + 1), -1, -(t2 + 1)),
    }[kind]
    assert tuple(r) == expected
    assert euler_path_sum(flip(_dec("+", t1, t2)), t0, t1, t2) == -r


@given(patterns)
def test_path_sum_found_in_table(case):
    kind, t0, t1, t2 = case
    d3 = {"A": H, "B": -3 * H, "C": -H}[kind]
    rows = rotation_table(t0, t1, t2)
    if rows[0].ambient == "tight":
        return  # path sums describe the overtwisted complements only
    d = _dec("+", t1, t2)
    if d not in enumerate_zero_twisting(t0, t1, t2) and flip(d) not in enumerate_zero_twisting(t0, t1, t2):
        return
    r = euler_path_sum(d, t0, t1, t2)
    ms = multiset(rows)
    assert ms[(tuple(r), d3)] >= 1 or ms[(tuple(-r), d3)] >= 1


def test_path_sum_mirror_for_missing_second_leg():
    r = euler_path_sum(Decoration.parse("(+)(-)()"), 4, 1, 0)
    assert tuple(r) == (-5, -2, -1)


def test_rotation_triple_parity():
    assert RotationTriple(0, 0, 0).satisfies_parity(-1, -1, -1)
    assert not RotationTriple(1, 0, 0).satisfies_parity(-1, -1, -1)
    assert tuple(-RotationTriple(1, -2, 3)) == (-1, 2, -3)


# -- data file -----------------------------------------------------------------------

def _write(tmp_path, data):
    p = tmp_path / "tables.yaml"
    p.write_text(yaml.safe_dump(data))
    return str(p)


def _raw():
    with open(default_path(), encoding="utf-8") as fh:
        return yaml.safe_load(fh)


def test_bundled_tables_validate():
    recs = load_records(default_path())
    assert len({r.id for r in recs}) == len(recs)


def test_schema_rejects_bad_guard(tmp_path):
    data = _raw()
    data["records"][0]["guard"]["t0"] = "t0 >= 2"
    with pytest.raises(TableDataError):
        load_records(_write(tmp_path, data))


def test_duplicate_ids_rejected(tmp_path):
    data = _raw()
    data["records"].append(data["records"][0])
    with pytest.raises(TableDataError):
        load_records(_write(tmp_path, data))


def test_missing_coverage_reported(tmp_path):
    data = _raw()
    data["records"] = [r for r in data["records"] if r["id"] != "t0eq5-t1eq1-t2eq1"]
    path = _write(tmp_path, data)
    with pytest.raises(TableDataError):
        find_record(5, 1, 1, path)


def test_env_override(tmp_path, monkeypatch):
    data = _raw()
    for rec in data["records"]:
        if rec["id"] == "t0eq5-t1eq1-t2eq1":
            rec["entries"] = rec["entries"][:1]
    monkeypatch.setenv(ENV_VAR, _write(tmp_path, data))
    assert len(rotation_table(5, 1, 1)) < 7
    monkeypatch.delenv(ENV_VAR)
    assert len(rotation_table(5, 1, 1)) == 7
