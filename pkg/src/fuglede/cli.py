"""Command-line interface for the Fuglede Z_2^d verification toolkit."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .config import Config
from .database import Database
from .enumeration import CaseSpec, count_enumeration, enumerate_tuples, parse_slice
from .errors import FugledeError, InvalidCaseError
from .gf2 import SignMatrix
from .hadamard_io import CatalogFetcher, CatalogSource, parse_sign_matrices
from .spectile import SubsetZ2d, check_equivalence
from .verify import ShardRecord, VerificationRunner, write_report

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2


def _join(points) -> str:
    return ",".join(str(x) for x in points)


class CLI:
    """Command-line interface for catalog ranks and spectral/tile verification."""

    def __init__(self, cache_dir: Optional[Path] = None, fixtures_dir: Optional[Path] = None):
        self.cache_dir = cache_dir
        self.fixtures_dir = fixtures_dir

    def _fetcher(self) -> CatalogFetcher:
        return CatalogFetcher(cache_dir=self.cache_dir, fixtures_dir=self.fixtures_dir)

    def fetch_command(self, order: int, vendor: bool = False, validate: Optional[bool] = None) -> int:
        """Download (or reuse) every catalog file of an order."""
        entries = self._fetcher().fetch_order(order, validate=validate, vendor=vendor)
        if all(e.source == CatalogSource.LOCAL_FILE for e in entries):
            print(f"✅ cache hit: {len(entries)} matrices of order {order}")
        else:
            vendored = sum(e.source == CatalogSource.VENDORED for e in entries)
            print(f"📥 {len(entries)} matrices cached (order {order})")
            if vendored:
                print(f"   {vendored} read from vendored fixtures")
        expected = Config.CATALOG_CLASS_COUNTS.get(order)
        if expected is not None and expected != len(entries):
            print(f"⚠️  expected {expected} equivalence classes of order {order}, got {len(entries)}")
        return EXIT_OK

    def rank_command(
        self,
        orders: Sequence[int],
        files: Sequence[Path],
        output_format: str = "table",
        dimension: int = Config.MIN_DEPHASED_RANK,
        validate: Optional[bool] = None,
    ) -> int:
        """Report dephased GF(2) ranks and check that each exceeds the dimension."""
        # imported here so the graph is only compiled when ranks are requested
        from .rank_pipeline import rank_report

        matrices: List[Tuple[str, SignMatrix]] = []
        for order in orders:
            for entry in self._fetcher().fetch_order(order, validate=False):
                matrices.append((entry.class_label, entry.matrix))
        for path in files:
            parsed = parse_sign_matrices(Path(path).read_text(encoding="utf-8"))
            if len(parsed) == 1:
                matrices.append((str(path), parsed[0]))
            else:
                matrices.extend((f"{path}:{i}", m) for i, m in enumerate(parsed, 1))

        if not matrices:
            print("❌ nothing to rank: pass --order or catalog files")
            return EXIT_INPUT_ERROR

        report = rank_report(matrices, validate=validate, min_rank=dimension)

        if output_format == "jsonl":
            for record in report.records:
                print(json.dumps({
                    "source_id": record.source_id,
                    "order": record.order,
                    "dephased_rank": record.dephased_rank,
                }))
        else:
            width = max(len(r.source_id) for r in report.records)
            print(f"\n📊 Dephased GF(2) ranks ({len(report.records)} matrices)")
            print("=" * (width + 20))
            for record in report.records:
                print(f"{record.source_id:<{width}}  order {record.order:>3}  rank {record.dephased_rank:>3}")
            print()

        for order, ranks in report.distinct_ranks.items():
            print(f"order {order}: distinct ranks {_join(ranks)}", file=sys.stderr)
        for order in report.non_uniform_orders:
            print(f"⚠️  ranks differ within order {order}", file=sys.stderr)

        verdict = "PASS" if report.all_above_min else "FAIL"
        print(f"all ranks > {dimension}: {verdict}", file=sys.stderr)
        return EXIT_OK if report.all_above_min else EXIT_VIOLATION

    def check_command(self, points: str, dimension: int) -> int:
        """Decide spectrality and tiling of one set."""
        try:
            words = [int(p) for p in points.split(",") if p.strip()]
        except ValueError:
            print(f"❌ points must be comma-separated integers: {points}")
            return EXIT_INPUT_ERROR
        subset = SubsetZ2d.of(words, dimension)
        result = check_equivalence(subset)

        def line(name: str, holds: bool, witness: Optional[SubsetZ2d]) -> str:
            if holds and witness is not None:
                return f"{name}: yes (witness {_join(witness.points)})"
            return f"{name}: no"

        print(f"set {_join(subset.points)} in Z_2^{dimension}")
        print(line("spectral", result.spectral, result.spectrum))
        print(line("tile", result.tile, result.tiling))
        print("agree" if result.agree else "❌ DISAGREE: spectral and tile differ")
        return EXIT_OK if result.agree else EXIT_VIOLATION

    def verify_command(
        self,
        dimension: int,
        set_size: int,
        heuristics: Optional[bool] = None,
        jobs: int = 1,
        checkpoint: Optional[Path] = None,
        sample: Optional[int] = None,
        seed: int = 0,
        full: bool = False,
        report_path: Optional[str] = None,
        stop_after: Optional[int] = None,
    ) -> int:
        """Check spectral iff tile over an enumeration case."""
        if (dimension, set_size) not in Config.VERIFY_CASES:
            raise InvalidCaseError(
                f"unsupported case d={dimension}, size={set_size}; choose one of {list(Config.VERIFY_CASES)}"
            )
        spec = CaseSpec(dimension, set_size, heuristics)
        runner = VerificationRunner(
            spec, sample=sample, seed=seed, jobs=jobs, checkpoint_path=checkpoint, full=full
        )
        if stop_after is not None and checkpoint is None:
            print("⚠️  --stop-after without --checkpoint: the partial run cannot be resumed")

        def progress(record: ShardRecord):
            logging.getLogger(__name__).info("shard %s done (%d sets)", record.shard, record.examined)

        report = runner.run(stop_after=stop_after, on_shard=progress)

        if report_path == "-":
            write_report(report, sys.stdout)
        elif report_path:
            with open(report_path, "w", encoding="utf-8") as f:
                write_report(report, f)

        print(f"\n🔍 Verification {report.case['label']}")
        print("=" * 50)
        print(f"Sets examined:      {report.tuples_examined}")
        print(f"Spectral:           {report.spectral_count}")
        print(f"Tiles:              {report.tile_count}")
        print(f"Agree:              {report.agree_count}")
        print(f"Failures:           {len(report.failures)}")
        print(f"Median per set:     {report.median_us:.1f} µs")
        print(f"Last shard:         {report.checkpoint}")
        if not report.complete:
            print("⏸️  stopped before the last shard; rerun with the same checkpoint to resume")

        for failure in report.failures:
            print(f"❌ counterexample candidate {failure['tuple']}: spectral={failure['spectral']} tile={failure['tile']}")
        if report.failures:
            return EXIT_VIOLATION
        print("✅ spectral iff tile for every examined set")
        return EXIT_OK

    def enumerate_command(
        self,
        dimension: int,
        set_size: int,
        heuristics: Optional[bool] = None,
        count_only: bool = False,
        slice_text: Optional[str] = None,
    ) -> int:
        """Count or stream the free tuples of a case."""
        spec = CaseSpec(dimension, set_size, heuristics)
        x1_slice = parse_slice(spec, slice_text) if slice_text else None
        if count_only:
            print(count_enumeration(spec, x1_slice))
            return EXIT_OK
        starts = [()] if x1_slice is None else [(x1,) for x1 in spec.pool if x1 in x1_slice]
        for start in starts:
            for t in enumerate_tuples(spec, start):
                print(_join(t.points))
        return EXIT_OK

    def stats_command(self, checkpoint: Optional[Path] = None) -> int:
        """Show cache and checkpoint statistics."""
        cache = Database(Path(self.cache_dir or Config.CACHE_DIR) / "manifest.db").get_stats()
        runs = Database(checkpoint).get_stats()

        print("\n📊 Database Statistics")
        print("=" * 50)
        print(f"Cached catalog files: {cache['catalog_files']}")
        print(f"Cached orders:        {cache['catalog_orders']}")
        print(f"Verification runs:    {runs['verify_runs']}")
        print(f"Completed shards:     {runs['completed_shards']}")
        print()
        return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser."""
    parser = argparse.ArgumentParser(
        prog="fuglede",
        description="Verify Fuglede's conjecture in Z_2^5 and Z_2^6.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--cache-dir", type=Path, default=None, help="catalog cache (FUGLEDE_CACHE_DIR)")
    parser.add_argument("--fixtures-dir", type=Path, default=None, help="vendored catalog (FUGLEDE_FIXTURES_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    fetch = sub.add_parser("fetch", help="download and cache a catalog order")
    fetch.add_argument("--order", type=int, required=True)
    fetch.add_argument("--vendor", action="store_true", help="also copy downloaded files into the fixtures dir")
    fetch.add_argument("--no-validate", dest="validate", action="store_false", default=None)

    rank = sub.add_parser("rank", help="dephased GF(2) ranks of catalog matrices")
    rank.add_argument("files", nargs="*", type=Path, help="catalog files")
    rank.add_argument("--order", type=int, action="append", default=[], help="cached catalog order (repeatable)")
    rank.add_argument("--format", dest="output_format", choices=("table", "jsonl"), default="table")
    rank.add_argument("--dimension", type=int, default=Config.MIN_DEPHASED_RANK,
                      help="ranks must exceed this (target group Z_2^d)")
    rank.add_argument("--no-validate", dest="validate", action="store_false", default=None)

    check = sub.add_parser("check", help="spectral and tile decision for one set")
    check.add_argument("-d", "--dimension", type=int, required=True)
    check.add_argument("points", help="comma-separated words, e.g. 0,1,2,4")

    def add_case(p: argparse.ArgumentParser):
        p.add_argument("-d", "--dimension", type=int, required=True)
        p.add_argument("-s", "--size", dest="set_size", type=int, required=True)
        p.add_argument("--heuristics", action=argparse.BooleanOptionalAction, default=None,
                       help="coordinate-symmetry pruning (default: on only for d=6, size 16)")

    verify = sub.add_parser("verify", help="check spectral iff tile over a case")
    add_case(verify)
    verify.add_argument("-j", "--jobs", type=int, default=Config.JOBS, help="worker processes")
    verify.add_argument("--checkpoint", type=Path, default=None, help="sqlite checkpoint file")
    verify.add_argument("--sample", type=int, default=None, help="check this many random tuples")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--full", action="store_true", help="run the complete size-16 enumeration")
    verify.add_argument("--report", dest="report_path", default=None, help="JSON-lines report file, '-' for stdout")
    verify.add_argument("--stop-after", type=int, default=None, help="stop after this many new shards")

    enum = sub.add_parser("enumerate", help="count or stream candidate tuples")
    add_case(enum)
    enum.add_argument("--count-only", action="store_true")
    enum.add_argument("--slice", dest="slice_text", default=None, help="x1=first, x1=V or x1=LO:HI")

    stats = sub.add_parser("stats", help="cache and checkpoint statistics")
    stats.add_argument("--checkpoint", type=Path, default=None)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else Config.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    Config.setup_directories()
    cli = CLI(cache_dir=args.cache_dir, fixtures_dir=args.fixtures_dir)

    try:
        if args.command == "fetch":
            return cli.fetch_command(args.order, vendor=args.vendor, validate=args.validate)
        if args.command == "rank":
            return cli.rank_command(
                args.order, args.files, args.output_format, args.dimension, args.validate
            )
        if args.command == "check":
            return cli.check_command(args.points, args.dimension)
        if args.command == "verify":
            return cli.verify_command(
                args.dimension,
                args.set_size,
                heuristics=args.heuristics,
                jobs=args.jobs,
                checkpoint=args.checkpoint,
                sample=args.sample,
                seed=args.seed,
                full=args.full,
                report_path=args.report_path,
                stop_after=args.stop_after,
            )
        if args.command == "enumerate":
            return cli.enumerate_command(
                args.dimension, args.set_size, args.heuristics, args.count_only, args.slice_text
            )
        if args.command == "stats":
            return cli.stats_command(args.checkpoint)
    except FugledeError as e:
        print(f"❌ Error: {e}")
        return EXIT_INPUT_ERROR
    except (OSError, ValueError) as e:
        print(f"❌ Error: {e}")
        return EXIT_INPUT_ERROR
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
