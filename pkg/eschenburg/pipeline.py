"""Two-stage pair search over a range of r.

Stage 1 computes the basic invariants of every enumerated space and buckets
them per r; stage 2 computes Kreck-Stolz invariants only for spaces sharing a
bucket and compares every pair inside it. Work is split into contiguous blocks
of odd r, processed independently and merged in r order, so the output does not
depend on the number of worker processes.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import json
from pathlib import Path
from typing import Any, Dict, Iterator, List, Literal, NamedTuple, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from .classify import PairOrientation, PairVerdict, Relation, bucket_records, candidate_pairs, compare
from .config import settings
from .enumeration import EnumerationRequest, Family, enum_positively_curved, enum_range, enum_sasakian
from .errors import InvariantViolation
from .invariants import InvariantRecord, full_record
from .spaces import NormalizedSpace, ParamPair, condition_c, sasakian_to_params
from . import utils

RELATION_CHOICES = {
    "basic": Relation.NONE,
    "homotopy": Relation.HOMOTOPY_EQUIVALENT,
    "homeo": Relation.HOMEOMORPHIC,
    "diffeo": Relation.DIFFEOMORPHIC,
}


class SearchConfig(BaseModel):
    """一次搜索的全部参数"""

    model_config = ConfigDict(frozen=True)

    family: Family = Family.GENERAL
    r_min: int = 1
    r_max: int
    relation: Relation = Relation.NONE
    threads: int = Field(default_factory=lambda: settings.search.threads, ge=1)
    block_size: int = Field(default_factory=lambda: settings.search.block_size, ge=1)
    checkpoint_dir: Optional[Path] = None
    out: Optional[Path] = None
    fmt: Literal["csv", "json"] = Field(default_factory=lambda: settings.search.output_format)
    progress: bool = Field(default_factory=lambda: settings.search.progress)

    @property
    def request(self) -> EnumerationRequest:
        return EnumerationRequest(self.family, self.r_min, self.r_max)

    @property
    def bucket_with_p1(self) -> bool:
        # p1 is not a homotopy invariant
        return self.relation is not Relation.HOMOTOPY_EQUIVALENT

    def blocks(self) -> List[Tuple[int, int]]:
        rs = list(self.request.r_values())
        return [
            (rs[i], rs[min(i + self.block_size, len(rs)) - 1])
            for i in range(0, len(rs), self.block_size)
        ]


@dataclass(frozen=True)
class PairReport:
    r: int
    a: InvariantRecord
    b: InvariantRecord
    verdict: PairVerdict

    @property
    def relation(self) -> Relation:
        return self.verdict.relation

    def sort_key(self) -> Tuple[int, ParamPair, ParamPair]:
        return self.r, self.a.params, self.b.params

    def to_json(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "spaceA": str(self.a.params),
            "spaceB": str(self.b.params),
            "relation": self.verdict.relation.label,
            "orientation": self.verdict.orientation.value,
            "invariantsA": utils.record_json(self.a),
            "invariantsB": utils.record_json(self.b),
        }


@dataclass
class SearchStats:
    spaces: int = 0
    buckets: int = 0
    candidate_pairs: int = 0
    unclassifiable: int = 0
    pairs: Dict[str, int] = field(
        default_factory=lambda: {r.label: 0 for r in Relation if r is not Relation.NONE}
    )

    def add(self, other: "SearchStats") -> None:
        self.spaces += other.spaces
        self.buckets += other.buckets
        self.candidate_pairs += other.candidate_pairs
        self.unclassifiable += other.unclassifiable
        for label, n in other.pairs.items():
            self.pairs[label] = self.pairs.get(label, 0) + n

    def count(self, relation: Relation) -> None:
        for level in Relation:
            if level is not Relation.NONE and relation >= level:
                self.pairs[level.label] += 1

    def as_dict(self) -> Dict[str, Any]:
        return {
            "spaces": self.spaces,
            "buckets": self.buckets,
            "candidate_pairs": self.candidate_pairs,
            "unclassifiable": self.unclassifiable,
            "pairs": dict(self.pairs),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SearchStats":
        return cls(
            spaces=data["spaces"],
            buckets=data["buckets"],
            candidate_pairs=data["candidate_pairs"],
            unclassifiable=data["unclassifiable"],
            pairs=dict(data["pairs"]),
        )


@dataclass
class SearchResult:
    reports: List[PairReport]
    stats: SearchStats


def _basic_records(family: Family, r: int) -> List[InvariantRecord]:
    if family is Family.SASAKIAN:
        return [full_record(sasakian_to_params(t), with_ks=False) for t in enum_sasakian(r)]
    return [full_record(ns.params, ns, with_ks=False) for ns in enum_positively_curved(r)]


def _check_monotone(verdict: PairVerdict) -> None:
    for orientation, p in verdict.predicates.items():
        if (p.diffeomorphic and not p.homeomorphic) or (p.homeomorphic and not p.homotopy):
            raise InvariantViolation(f"non-monotone predicates for {orientation.value}: {p}")


def _judge(
    a: InvariantRecord, b: InvariantRecord, relation: Relation, stats: SearchStats
) -> Optional[PairReport]:
    verdict = compare(a, b)
    _check_monotone(verdict)
    stats.candidate_pairs += 1
    if not (a.classifiable and b.classifiable):
        stats.unclassifiable += 1
        logger.warning(f"r={a.basic.r_abs}: {a.params} / {b.params} {verdict.note}")
    else:
        stats.count(verdict.relation)
    if verdict.relation >= relation:
        return PairReport(a.basic.r_abs, a, b, verdict)
    return None


def search_r(family: Family, r: int, relation: Relation, with_p1: bool = True) -> SearchResult:
    """Both stages for a single value of r."""
    stats = SearchStats()
    records = _basic_records(family, r)
    stats.spaces = len(records)
    shared = [group for group in bucket_records(records, with_p1).values() if len(group) > 1]
    stats.buckets = len(shared)

    upgraded = [
        full_record(rec.params, rec.normal_form, with_ks=True)
        for group in shared
        for rec in group
    ]
    reports = []
    for a, b in candidate_pairs(upgraded, with_p1):
        report = _judge(a, b, relation, stats)
        if report is not None:
            reports.append(report)
    return SearchResult(reports, stats)


def _search_block(args: Tuple[Family, int, int, Relation, bool]) -> SearchResult:
    family, lo, hi, relation, with_p1 = args
    result = SearchResult([], SearchStats())
    for r in range(lo, hi + 1, 2):
        part = search_r(family, r, relation, with_p1)
        result.reports.extend(part.reports)
        result.stats.add(part.stats)
    return result


def _shard_paths(cfg: SearchConfig, lo: int, hi: int) -> Tuple[Path, Path]:
    assert cfg.checkpoint_dir is not None
    stem = f"{cfg.family.value}_{cfg.relation.label}_{lo:09d}_{hi:09d}"
    return cfg.checkpoint_dir / f"{stem}.csv", cfg.checkpoint_dir / f"{stem}.stats.json"


def _write_shard(cfg: SearchConfig, lo: int, hi: int, result: SearchResult) -> None:
    csv_path, stats_path = _shard_paths(cfg, lo, hi)
    # the csv is the completion marker, so it goes last
    utils.write_json(stats_path, result.stats.as_dict())
    utils.write_csv(csv_path, report_rows(result.reports))


def _load_shard(cfg: SearchConfig, lo: int, hi: int) -> Optional[SearchResult]:
    csv_path, stats_path = _shard_paths(cfg, lo, hi)
    if not (csv_path.exists() and stats_path.exists()):
        return None
    try:
        stats = SearchStats.from_dict(json.loads(stats_path.read_text(encoding="utf-8")))
    except (OSError, ValueError, KeyError) as e:
        logger.warning(f"ignoring unreadable checkpoint {stats_path}: {e}")
        return None

    rows = utils.read_csv(csv_path)
    if len(rows) % 2:
        logger.warning(f"ignoring truncated checkpoint {csv_path}")
        return None
    reports = []
    for row_a, row_b in zip(rows[::2], rows[1::2]):
        a = full_record(utils.params_from_row(row_a))
        b = full_record(utils.params_from_row(row_b))
        reports.append(PairReport(a.basic.r_abs, a, b, compare(a, b)))
    logger.warning(f"resumed r in [{lo}, {hi}] from {csv_path} ({len(reports)} pairs)")
    return SearchResult(reports, stats)


def report_rows(reports: List[PairReport]) -> Iterator[List[str]]:
    for report in reports:
        yield utils.record_row(report.a)
        yield utils.record_row(report.b)


def _block_results(cfg: SearchConfig) -> Iterator[SearchResult]:
    blocks = cfg.blocks()
    done: Dict[Tuple[int, int], SearchResult] = {}
    if cfg.checkpoint_dir is not None:
        for lo, hi in blocks:
            loaded = _load_shard(cfg, lo, hi)
            if loaded is not None:
                done[(lo, hi)] = loaded

    pending = [b for b in blocks if b not in done]
    jobs = [(cfg.family, lo, hi, cfg.relation, cfg.bucket_with_p1) for lo, hi in pending]
    bar = tqdm(total=len(blocks), initial=len(done), unit="block", disable=not cfg.progress)

    def _finish(block: Tuple[int, int], result: SearchResult) -> None:
        if cfg.checkpoint_dir is not None:
            _write_shard(cfg, block[0], block[1], result)
        done[block] = result
        bar.update(1)

    try:
        if cfg.threads <= 1 or len(jobs) <= 1:
            for block, job in zip(pending, jobs):
                _finish(block, _search_block(job))
        else:
            with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
                for block, result in zip(pending, pool.map(_search_block, jobs)):
                    _finish(block, result)
    finally:
        bar.close()

    for block in blocks:
        yield done[block]


def run_search(cfg: SearchConfig) -> SearchResult:
    request = cfg.request
    logger.info(
        f"searching {request.family.value} spaces, r in [{request.r_min}, {request.r_max}], "
        f"threshold {cfg.relation.label}, {cfg.threads} worker(s)"
    )
    stats = SearchStats()
    reports: List[PairReport] = []
    for result in _block_results(cfg):
        reports.extend(result.reports)
        stats.add(result.stats)
    reports.sort(key=PairReport.sort_key)

    logger.info(
        f"{stats.spaces} spaces, {stats.buckets} shared buckets, "
        f"{stats.candidate_pairs} candidate pairs, {stats.unclassifiable} unclassifiable"
    )
    for label, n in stats.pairs.items():
        logger.info(f"  {label}: {n} pairs")

    if cfg.out is not None:
        write_reports(reports, cfg.out, cfg.fmt)
        utils.write_json(Path(f"{cfg.out}.summary.json"), stats.as_dict())
    return SearchResult(reports, stats)


def search_pairs(cfg: SearchConfig) -> List[PairReport]:
    return run_search(cfg).reports


def write_reports(reports: List[PairReport], out: Path, fmt: str) -> None:
    if fmt == "json":
        utils.write_json(out, [report.to_json() for report in reports])
    else:
        utils.write_csv(out, report_rows(reports))
    logger.info(f"wrote {len(reports)} pairs to {out}")


def condition_c_failures(r_min: int, r_max: int, threads: int = 1) -> List[NormalizedSpace]:
    """Positively curved spaces in the range with no pairwise coprime row or column."""
    req = EnumerationRequest(Family.GENERAL, r_min, r_max)
    failures = []
    for _, spaces in enum_range(req, threads):
        failures.extend(ns for ns in spaces if not condition_c(ns.params).holds)  # type: ignore[union-attr]
    return failures


class SasakianSumReport(NamedTuple):
    homeomorphic: int
    same_sum: int
    preserving: int
    same_sum_and_preserving: int
    candidates: int
    candidates_same_sum_and_s: int


def sasakian_sum_report(reports: List[PairReport]) -> SasakianSumReport:
    """How often homeomorphic 3-Sasakian pairs share a+b+c and are orientation preserving.

    Purely observational; nothing in the search filters on it.
    """
    homeo = same_sum = preserving = both = 0
    candidates_filtered = 0
    for report in reports:
        equal_sum = sum(report.a.params.k) == sum(report.b.params.k)
        if equal_sum and report.a.basic.s.congruent(report.b.basic.s):
            candidates_filtered += 1
        if report.relation < Relation.HOMEOMORPHIC:
            continue
        homeo += 1
        is_preserving = report.verdict.orientation is PairOrientation.PRESERVING
        same_sum += equal_sum
        preserving += is_preserving
        both += equal_sum and is_preserving
    return SasakianSumReport(homeo, same_sum, preserving, both, len(reports), candidates_filtered)
