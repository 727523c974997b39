import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from . import utils
from .config import settings
from .enumeration import EnumerationRequest, Family, enum_flat
from .errors import ConditionCFailure, ConfigError, EschenburgError, InvalidParameters
from .exact_arith import format_fraction
from .invariants import InvariantRecord, full_record
from .lens_sums import LensSpace, lens_s1, lens_s2, lens_s3, oracle_trig_sums, trig_sums
from .pipeline import (
    RELATION_CHOICES,
    SearchConfig,
    condition_c_failures,
    report_rows,
    run_search,
    sasakian_sum_report,
)
from .spaces import NormalizedSpace, ParamPair, sasakian_to_params
from .tables import TABLE_ALIASES, TABLE_IDS, reproduce_table, resolve_table_id

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_CONDITION_C = 3


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--out", type=Path, default=None, help="Write results here instead of stdout.")
    parent.add_argument("--format", choices=["csv", "json"], default=settings.search.output_format)
    parent.add_argument("--threads", type=int, default=settings.search.threads, help="Worker processes (ESCH_THREADS).")
    parent.add_argument(
        "--checkpoint-dir",
        type=Path,
        default=Path(settings.search.checkpoint_dir) if settings.search.checkpoint_dir else None,
    )
    parent.add_argument("--log-level", default=settings.logging.level)
    parent.add_argument("--no-progress", action="store_true")
    return parent


def _range_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r-min", type=int, default=1)
    p.add_argument("--r-max", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(
        prog="eschenburg",
        description="Invariants and classification of positively curved Eschenburg spaces.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="List spaces with their invariants.")
    p.add_argument("--family", choices=[f.value for f in Family], default=Family.GENERAL.value)
    _range_args(p)
    p.add_argument("--basic-only", action="store_true", help="Skip the Kreck-Stolz invariants.")

    p = sub.add_parser("invariants", parents=[common], help="Invariants of one space E_{k,l}.")
    p.add_argument("--k", required=True, help="a,b,c (use --k=-1,2,3 when the first entry is negative)")
    p.add_argument("--l", required=True, help="d,e,f")
    p.add_argument("--basic-only", action="store_true")

    p = sub.add_parser("pairs", parents=[common], help="Search for related pairs.")
    p.add_argument("--family", choices=[f.value for f in Family], default=Family.GENERAL.value)
    p.add_argument("--relation", choices=list(RELATION_CHOICES), default="basic")
    _range_args(p)
    p.add_argument("--block-size", type=int, default=settings.search.block_size)

    p = sub.add_parser("table", parents=[common], help="Reproduce a printed table.")
    p.add_argument("table_id", choices=[*TABLE_IDS, *sorted(TABLE_ALIASES), "all"])

    p = sub.add_parser("verify-lens", parents=[common], help="Certified sums of one lens space.")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--params", required=True, help="a,b,c,d")
    p.add_argument("--oracle", action="store_true", help="Also print the double precision sums.")

    p = sub.add_parser("condc", parents=[common], help="Spaces failing condition (C).")
    _range_args(p)
    return ap


def _emit_records(args: argparse.Namespace, records: List[InvariantRecord]) -> None:
    if args.format == "json":
        payload = [utils.record_json(rec) for rec in records]
        if args.out is not None:
            utils.write_json(args.out, payload)
        else:
            print(json.dumps(payload, ensure_ascii=False, indent=2))
        return
    rows = [utils.record_row(rec) for rec in records]
    if args.out is not None:
        utils.write_csv(args.out, rows)
    else:
        sys.stdout.write(utils.render_rows(rows))


def _cmd_enumerate(args: argparse.Namespace) -> int:
    req = EnumerationRequest(Family(args.family), args.r_min, args.r_max)
    records = []
    for item in enum_flat(req, args.threads):
        if isinstance(item, NormalizedSpace):
            records.append(full_record(item.params, item, with_ks=not args.basic_only))
        else:
            records.append(full_record(sasakian_to_params(item), with_ks=not args.basic_only))
    logger.info(f"{len(records)} spaces with r in [{args.r_min}, {args.r_max}]")
    _emit_records(args, records)
    return EXIT_OK


def _cmd_invariants(args: argparse.Namespace) -> int:
    pp = ParamPair(utils.parse_triple(args.k), utils.parse_triple(args.l))
    record = full_record(pp, with_ks=False)
    b = record.basic
    nf = record.normal_form
    print(f"space   {pp}")
    if nf.params != pp:
        print(f"normal  {nf} (orientation {nf.orientation.name.lower()})")
    print(f"r={b.r_abs} s={b.s} p1={b.p1} linking={b.linking}")
    print(f"cohom={record.cohomogeneity.value} condC={record.condition_label}")
    if args.basic_only:
        return EXIT_OK
    if not record.condition.holds:
        raise ConditionCFailure(f"condition (C) fails for {pp}")
    record = full_record(pp, nf)
    ks = record.ks
    assert ks is not None
    print(f"s1={ks.s1} s2={ks.s2} s3={ks.s3} s22={ks.s22}")
    if args.out is not None:
        _emit_records(args, [record])
    return EXIT_OK


def _cmd_pairs(args: argparse.Namespace) -> int:
    cfg = SearchConfig(
        family=Family(args.family),
        r_min=args.r_min,
        r_max=args.r_max,
        relation=RELATION_CHOICES[args.relation],
        threads=max(1, args.threads),
        block_size=args.block_size,
        checkpoint_dir=args.checkpoint_dir,
        out=args.out,
        fmt=args.format,
        progress=not args.no_progress,
    )
    result = run_search(cfg)
    if args.out is None:
        if args.format == "json":
            print(json.dumps([r.to_json() for r in result.reports], ensure_ascii=False, indent=2))
        else:
            sys.stdout.write(utils.render_rows(report_rows(result.reports)))
    if cfg.family is Family.SASAKIAN:
        summary = sasakian_sum_report(result.reports)
        logger.info(
            f"homeomorphic pairs: {summary.homeomorphic}, same a+b+c: {summary.same_sum}, "
            f"orientation preserving: {summary.preserving}, both: {summary.same_sum_and_preserving}"
        )
    return EXIT_OK


def _cmd_table(args: argparse.Namespace) -> int:
    ids = TABLE_IDS if args.table_id == "all" else (resolve_table_id(args.table_id),)
    for table_id in ids:
        report = reproduce_table(table_id)
        print(report.render())
        print(f"{table_id}: {len(report.verdicts)} pairs PASS\n")
    return EXIT_OK


def _cmd_verify_lens(args: argparse.Namespace) -> int:
    lens = LensSpace(args.p, utils.parse_ints(args.params, 4, "lens parameters"))  # type: ignore[arg-type]
    sums = trig_sums(lens)
    print(" ".join(f"{name}={format_fraction(v)}" for name, v in zip("TSRU", sums.as_tuple())))
    line = f"s1={lens_s1(lens)}"
    if lens.even:
        line += f" s2={lens_s2(lens)} s3={lens_s3(lens)}"
    print(line)
    if args.oracle:
        print("oracle " + " ".join(f"{n}={v:.12g}" for n, v in zip("TSRU", oracle_trig_sums(lens))))
    return EXIT_OK


def _cmd_condc(args: argparse.Namespace) -> int:
    failures = condition_c_failures(args.r_min, args.r_max, args.threads)
    lines = [f"{ns.r_abs},{ns.params}" for ns in failures]
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    logger.info(f"{len(failures)} positively curved spaces fail condition (C)")
    return EXIT_OK


_COMMANDS = {
    "enumerate": _cmd_enumerate,
    "invariants": _cmd_invariants,
    "pairs": _cmd_pairs,
    "table": _cmd_table,
    "verify-lens": _cmd_verify_lens,
    "condc": _cmd_condc,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    utils.setup_logging(args.log_level)
    try:
        return _COMMANDS[args.command](args)
    except ConditionCFailure as e:
        logger.error(str(e))
        return EXIT_CONDITION_C
    except (InvalidParameters, ConfigError, ValidationError) as e:
        logger.error(str(e))
        return EXIT_INVALID
    except (EschenburgError, OSError) as e:
        logger.error(str(e))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
