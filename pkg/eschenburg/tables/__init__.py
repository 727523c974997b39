"""Printed pair tables and their reproduction from scratch.

Each ``*.toml`` file here holds one table under a key equal to the file stem.
A table id is the stem with ``-`` instead of ``_`` (``eschenburg-homotopy``).
"""

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Tuple

import toml
from loguru import logger

from ..classify import PairVerdict, Relation, compare
from ..errors import TableMismatch
from ..exact_arith import qmodz
from ..invariants import InvariantRecord, full_record
from ..spaces import ParamPair

_RATIONAL_COLUMNS = ("s1", "s2", "s22")


def load_toml_data(folder: Path = Path(__file__).resolve().parent) -> Dict[str, Dict]:
    """加载文件夹下所有 .toml 表格数据"""
    all_data: Dict[str, Dict] = {}
    for file_path in sorted(folder.glob("*.toml")):
        variable_name = file_path.stem
        try:
            with file_path.open("r", encoding="utf-8") as f:
                data = toml.load(f)
        except toml.TomlDecodeError as e:
            logger.error(f"{file_path.name} is not valid TOML: {e}")
            continue
        if variable_name not in data:
            logger.warning(f"key '{variable_name}' missing in {file_path.name}, skipped")
            continue
        all_data[variable_name.replace("_", "-")] = data[variable_name]
    return all_data


tables_all = load_toml_data()
TABLE_IDS = tuple(tables_all)
TABLE_ALIASES = {t["alias"]: table_id for table_id, t in tables_all.items() if "alias" in t}


def resolve_table_id(name: str) -> str:
    """Accept a descriptive id or its numeric alias (`4.1`)."""
    return TABLE_ALIASES.get(name, name)


@dataclass(frozen=True)
class RowCheck:
    expected: Dict[str, Any]
    computed: Dict[str, Any]
    flipped: bool


@dataclass(frozen=True)
class TableReport:
    table_id: str
    caption: str
    columns: Tuple[str, ...]
    rows: List[RowCheck]
    verdicts: List[PairVerdict]

    def render(self) -> str:
        header = ["r", "[k | l]", *self.columns, "orientation"]
        lines = [self.caption, " | ".join(header)]
        for i, row in enumerate(self.rows):
            if i and i % 2 == 0:
                lines.append("")
            c = row.computed
            cells = [str(c["r"]), f"[{c['params']}]", *(str(c[col]) for col in self.columns)]
            cells.append("flipped" if row.flipped else "as printed")
            lines.append(" | ".join(cells))
        lines.append("")
        for verdict in self.verdicts:
            lines.append(f"{verdict.relation.label} ({verdict.orientation.value})")
        return "\n".join(lines)


def _computed(record: InvariantRecord) -> Dict[str, Any]:
    values: Dict[str, Any] = {
        "r": record.basic.r_abs,
        "params": str(record.params).strip("()"),
        "s": record.basic.s.value,
        "p1": record.basic.p1,
        "cohom": record.cohomogeneity.value,
    }
    if record.ks is not None:
        values.update(s1=record.ks.s1, s2=record.ks.s2, s22=record.s22_signed)
    return values


def _matches(expected: Dict[str, Any], computed: Dict[str, Any], sign: int) -> bool:
    if expected["r"] != computed["r"]:
        return False
    for column, printed in expected.items():
        if column in ("r", "k", "l"):
            continue
        if column not in computed:
            return False
        value = computed[column]
        if column in _RATIONAL_COLUMNS:
            if qmodz(Fraction(printed)) != (value if sign == 1 else -value):
                return False
        elif column == "s":
            if (printed - sign * value) % computed["r"]:
                return False
        elif printed != value:
            return False
    return True


def _diff(expected: Dict[str, Any], computed: Dict[str, Any]) -> str:
    parts = []
    for column, printed in expected.items():
        if column in ("k", "l"):
            continue
        got = computed.get(column)
        if str(got) != str(printed):
            parts.append(f"{column}: printed {printed}, computed {got}")
    return "; ".join(parts)


def _check_row(row: Dict[str, Any]) -> Tuple[InvariantRecord, RowCheck]:
    record = full_record(ParamPair(tuple(row["k"]), tuple(row["l"])))  # type: ignore[arg-type]
    computed = _computed(record)
    if _matches(row, computed, 1):
        return record, RowCheck(row, computed, flipped=False)
    if _matches(row, computed, -1):
        return record, RowCheck(row, computed, flipped=True)
    raise TableMismatch(f"row {row['k']} | {row['l']} does not match: {_diff(row, computed)}")


def reproduce_table(table_id: str) -> TableReport:
    """Recompute every space of a printed table and check rows and pair verdicts."""
    table_id = resolve_table_id(table_id)
    if table_id not in tables_all:
        raise TableMismatch(f"unknown table {table_id!r}; known: {', '.join(TABLE_IDS)}")
    table = tables_all[table_id]
    expected_relation = Relation.from_label(table["relation"])

    rows: List[RowCheck] = []
    verdicts: List[PairVerdict] = []
    for pair in table["pairs"]:
        first, second = pair["rows"]
        rec_a, check_a = _check_row(first)
        rec_b, check_b = _check_row(second)
        verdict = compare(rec_a, rec_b)
        if verdict.relation is not expected_relation:
            raise TableMismatch(
                f"{rec_a.params} / {rec_b.params}: expected {expected_relation.label}, "
                f"got {verdict.relation.label}"
            )
        rows.extend((check_a, check_b))
        verdicts.append(verdict)
        logger.debug(f"{table_id}: r={rec_a.basic.r_abs} {verdict.relation.label} ok")

    return TableReport(table_id, table["caption"], tuple(table["columns"]), rows, verdicts)
