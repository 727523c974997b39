from fractions import Fraction

import pytest

from eschenburg.classify import Relation
from eschenburg.errors import TableMismatch
from eschenburg.exact_arith import qmodz
from eschenburg.invariants import full_record
from eschenburg.spaces import ParamPair
from eschenburg.tables import TABLE_IDS, load_toml_data, reproduce_table, tables_all


def test_all_tables_load():
    assert set(TABLE_IDS) == {
        "eschenburg-homotopy",
        "eschenburg-homeo",
        "eschenburg-diffeo",
        "sasakian-homotopy",
        "sasakian-homeo",
        "sasakian-diffeo",
    }
    assert all(len(pair["rows"]) == 2 for table in tables_all.values() for pair in table["pairs"])


@pytest.mark.parametrize(
    "table_id, radii",
    [
        ("eschenburg-homotopy", [43, 101, 137, 181, 181]),
        ("sasakian-homotopy", [1267, 1277, 1557, 1595, 1619]),
        ("eschenburg-homeo", [4001, 8099, 8671, 9889, 11011]),
        ("eschenburg-diffeo", [13361, 26973, 35749, 42319]),
        ("sasakian-homeo", [28379, 129503, 273581, 382025, 442179]),
        ("sasakian-diffeo", [5143925]),
    ],
)
def test_reproduce_table(table_id, radii):
    report = reproduce_table(table_id)
    assert [row.computed["r"] for row in report.rows[::2]] == radii
    expected = Relation.from_label(tables_all[table_id]["relation"])
    assert all(v.relation is expected for v in report.verdicts)
    assert report.caption in report.render()


def test_homotopy_table_columns_include_cohomogeneity():
    report = reproduce_table("eschenburg-homotopy")
    assert [row.computed["cohom"] for row in report.rows] == ["1", "4", "1", "4", "1", "4", "2+", "2-", "2-", "4"]


def test_unknown_table():
    with pytest.raises(TableMismatch):
        reproduce_table("eschenburg-isometric")


def test_mismatch_reports_a_diff(tmp_path, monkeypatch):
    (tmp_path / "broken.toml").write_text(
        """
[broken]
caption = "broken"
family = "eschenburg"
relation = "homotopy"
columns = ["s", "p1"]

[[broken.pairs]]
rows = [
    { r = 43, k = [21, 21, -2], l = [20, 20, 0], s = 21, p1 = 27 },
    { r = 43, k = [8, 7, -5], l = [6, 4, 0], s = 21, p1 = 13 },
]
""",
        encoding="utf-8",
    )
    broken = load_toml_data(tmp_path)
    assert "broken" in broken
    monkeypatch.setitem(tables_all, "broken", broken["broken"])
    with pytest.raises(TableMismatch, match="p1: printed 27, computed 26"):
        reproduce_table("broken")


@pytest.mark.parametrize(
    "k, l, printed",
    [
        ((21, 21, -2), (20, 20, 0), Fraction(-1, 6)),
        ((30, 26, -6), (25, 25, 0), Fraction(1, 6)),
        ((1, 1, -2), (0, 0, 0), Fraction(1, 6)),
    ],
)
def test_s22_column_uses_signed_r(k, l, printed):
    record = full_record(ParamPair(k, l))
    assert record.basic.r_signed < 0
    assert record.s22_signed == qmodz(printed)
    assert record.ks.s22 == -record.s22_signed


def test_homotopy_table_s22_matches_printed_rows():
    report = reproduce_table("eschenburg-homotopy")
    for row in report.rows:
        assert not row.flipped
        assert row.computed["s22"] == qmodz(Fraction(row.expected["s22"]))
