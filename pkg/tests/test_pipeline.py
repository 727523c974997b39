import json

import pytest

from eschenburg.classify import PairOrientation, Relation, compare
from eschenburg.enumeration import Family
from eschenburg.errors import InvalidParameters
from eschenburg.invariants import full_record
from eschenburg.pipeline import (
    PairReport,
    SearchConfig,
    condition_c_failures,
    run_search,
    sasakian_sum_report,
    search_pairs,
    search_r,
)
from eschenburg.spaces import ParamPair, condition_c
from eschenburg.utils import CSV_HEADER


def _params(report: PairReport):
    return {report.a.params, report.b.params}


def test_homotopy_pair_at_43():
    reports = search_pairs(
        SearchConfig(r_min=43, r_max=43, relation=Relation.HOMOTOPY_EQUIVALENT, progress=False)
    )
    assert {ParamPair((21, 21, -2), (20, 20, 0)), ParamPair((8, 7, -5), (6, 4, 0))} in [
        _params(rep) for rep in reports
    ]
    assert all(rep.relation >= Relation.HOMOTOPY_EQUIVALENT for rep in reports)


def test_basic_search_keeps_p1_in_the_key():
    result = search_r(Family.GENERAL, 43, Relation.NONE, with_p1=True)
    for rep in result.reports:
        assert rep.a.basic.key() == rep.b.basic.key()
    assert result.stats.candidate_pairs == len(result.reports)


def test_reports_are_sorted_and_thread_independent(tmp_path):
    kwargs = dict(r_min=41, r_max=61, relation=Relation.HOMOTOPY_EQUIVALENT, block_size=3, progress=False)
    serial = run_search(SearchConfig(threads=1, out=tmp_path / "serial.csv", **kwargs))
    parallel = run_search(SearchConfig(threads=2, out=tmp_path / "parallel.csv", **kwargs))
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "parallel.csv").read_bytes()
    keys = [rep.sort_key() for rep in serial.reports]
    assert keys == sorted(keys)
    assert serial.stats.as_dict() == parallel.stats.as_dict()


def test_csv_and_summary_files(tmp_path):
    out = tmp_path / "pairs.csv"
    result = run_search(
        SearchConfig(r_min=43, r_max=43, relation=Relation.HOMOTOPY_EQUIVALENT, out=out, progress=False)
    )
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + 2 * len(result.reports)
    summary = json.loads((tmp_path / "pairs.csv.summary.json").read_text(encoding="utf-8"))
    assert summary["pairs"]["homotopy"] >= 1
    assert summary["spaces"] == result.stats.spaces


def test_json_reports(tmp_path):
    out = tmp_path / "pairs.json"
    run_search(
        SearchConfig(
            r_min=43, r_max=43, relation=Relation.HOMOTOPY_EQUIVALENT, out=out, fmt="json", progress=False
        )
    )
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data
    entry = data[0]
    assert set(entry) == {"r", "spaceA", "spaceB", "relation", "orientation", "invariantsA", "invariantsB"}
    assert entry["r"] == 43
    assert "/" in entry["invariantsA"]["s22"]


def test_checkpoint_resume_gives_identical_output(tmp_path):
    ckpt = tmp_path / "ckpt"
    kwargs = dict(
        r_min=41, r_max=47, relation=Relation.HOMOTOPY_EQUIVALENT, block_size=1, checkpoint_dir=ckpt, progress=False
    )
    run_search(SearchConfig(out=tmp_path / "first.csv", **kwargs))
    shards = sorted(ckpt.glob("*.csv"))
    assert len(shards) == 4
    # drop the last block as if interrupted there
    shards[-1].unlink()
    run_search(SearchConfig(out=tmp_path / "second.csv", **kwargs))
    assert (tmp_path / "first.csv").read_bytes() == (tmp_path / "second.csv").read_bytes()
    assert (tmp_path / "first.csv.summary.json").read_text() == (tmp_path / "second.csv.summary.json").read_text()


def test_invalid_range():
    with pytest.raises(InvalidParameters):
        search_pairs(SearchConfig(r_min=4, r_max=10, progress=False))


def test_condition_c_failures_small():
    failures = condition_c_failures(1, 1299)
    assert failures
    assert all(not condition_c(ns.params).holds for ns in failures)
    assert ParamPair((35, 21, -34), (12, 10, 0)) in {ns.params for ns in failures}


@pytest.mark.slow
def test_condition_c_failures_below_5000():
    assert len(condition_c_failures(1, 4999, threads=2)) == 54


@pytest.mark.slow
def test_homotopy_pairs_below_1000():
    result = run_search(
        SearchConfig(r_min=1, r_max=999, relation=Relation.HOMOTOPY_EQUIVALENT, threads=2, progress=False)
    )
    assert len(result.reports) == 192
    assert result.stats.pairs["homotopy"] == 192


@pytest.mark.slow
def test_unique_homeomorphic_not_diffeomorphic_pair_up_to_4001():
    result = run_search(
        SearchConfig(r_min=1, r_max=4001, relation=Relation.HOMEOMORPHIC, threads=2, progress=False)
    )
    strict = [rep for rep in result.reports if rep.relation is Relation.HOMEOMORPHIC]
    assert len(strict) == 1
    assert strict[0].r == 4001
    assert strict[0].verdict.orientation is PairOrientation.REVERSING


def test_r_4001_bucket():
    result = search_r(Family.GENERAL, 4001, Relation.HOMEOMORPHIC)
    pairs = [_params(rep) for rep in result.reports]
    assert {ParamPair((79, 49, -50), (46, 32, 0)), ParamPair((75, 54, -51), (46, 32, 0))} in pairs
    homeo = [rep for rep in result.reports if rep.relation is Relation.HOMEOMORPHIC]
    assert len(homeo) == 1
    assert homeo[0].verdict.orientation is PairOrientation.REVERSING


def test_sasakian_sum_report():
    a = full_record(ParamPair((171, 164, 1), (336, 0, 0)))
    b = full_record(ParamPair((223, 60, 53), (336, 0, 0)))
    report = PairReport(a.basic.r_abs, a, b, compare(a, b))
    summary = sasakian_sum_report([report])
    assert summary.homeomorphic == 1
    assert summary.same_sum == 1
    assert summary.candidates == 1
