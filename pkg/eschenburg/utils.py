import csv
import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from .config import settings
from .errors import InvalidParameters
from .exact_arith import Triple
from .invariants import InvariantRecord
from .spaces import ParamPair

CSV_HEADER = [
    "r", "k1", "k2", "k3", "l1", "l2", "l3",
    "s", "p1", "cohom", "condC", "s1", "s2", "s3", "s22",
]


def setup_logging(level: Optional[str] = None) -> None:
    """替换 loguru 默认输出，只保留一个 stderr sink"""
    logger.remove()
    logger.add(
        sys.stderr,
        level=(level or settings.logging.level).upper(),
        format=settings.logging.format,
    )


def parse_ints(text: str, count: int, what: str) -> Tuple[int, ...]:
    """解析 "a,b,c" 形式的整数列表"""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise InvalidParameters(f"{what} needs {count} comma separated integers, got {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise InvalidParameters(f"malformed {what}: {text!r}")


def parse_triple(text: str) -> Triple:
    return parse_ints(text, 3, "triple")  # type: ignore[return-value]


def record_row(record: InvariantRecord) -> List[str]:
    """One CSV row; KS columns stay empty when condition (C) fails."""
    b = record.basic
    ks = record.ks
    ks_cols = [str(v) for v in ks.values()] if ks is not None else ["", "", "", ""]
    return [
        str(b.r_abs),
        *map(str, record.params.k),
        *map(str, record.params.l),
        str(b.s),
        str(b.p1),
        record.cohomogeneity.value,
        record.condition_label,
        *ks_cols,
    ]


def record_json(record: InvariantRecord) -> Dict[str, Any]:
    b = record.basic
    data: Dict[str, Any] = {
        "r": b.r_abs,
        "k": list(record.params.k),
        "l": list(record.params.l),
        "s": b.s.value,
        "p1": b.p1,
        "linking": str(b.linking),
        "cohom": record.cohomogeneity.value,
        "condC": record.condition_label,
    }
    if record.ks is not None:
        data.update(
            s1=str(record.ks.s1),
            s2=str(record.ks.s2),
            s3=str(record.ks.s3),
            s22=str(record.ks.s22),
        )
    return data


def params_from_row(row: Dict[str, str]) -> ParamPair:
    try:
        k = tuple(int(row[c]) for c in ("k1", "k2", "k3"))
        l = tuple(int(row[c]) for c in ("l1", "l2", "l3"))
    except (KeyError, ValueError) as e:
        raise InvalidParameters(f"bad parameter columns in row {row}: {e}")
    return ParamPair(k, l)  # type: ignore[arg-type]


def _replace_atomically(path: Path, write) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    try:
        with tmp.open("w", encoding="utf-8", newline="") as f:
            write(f)
        os.replace(tmp, path)
    except OSError as e:
        raise OSError(e.errno, f"cannot write {path}: {e.strerror}") from e


def write_csv(path: Path, rows: Iterable[Sequence[str]]) -> None:
    def _write(f):
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)

    _replace_atomically(path, _write)


def read_csv(path: Path) -> List[Dict[str, str]]:
    try:
        with path.open("r", encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f))
    except OSError as e:
        raise OSError(e.errno, f"cannot read {path}: {e.strerror}") from e


def write_json(path: Path, data: Any) -> None:
    def _write(f):
        json.dump(data, f, ensure_ascii=False, indent=2)
        f.write("\n")

    _replace_atomically(path, _write)


def render_rows(rows: Iterable[Sequence[str]]) -> str:
    """Plain CSV text, header included, for stdout."""
    lines = [",".join(CSV_HEADER)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"
