"""Store/load experiments over the table designs, and the ``bench`` command."""
from __future__ import annotations

import argparse
import csv
import gc
import io
import json
import logging
import statistics
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .stats import DEFAULT_WORD_BYTES, MemoryReport, oracle_counts, snapshot
from .table_space import DESIGNS, TableSpace
from .terms import standardize
from .workloads import Workload, WorkloadSpec

log = logging.getLogger(__name__)

LOAD_MODES = ("bottomup", "compiled", "both")

CSV_FIELDS = (
    "design",
    "workload",
    "n",
    "runs",
    "nodes_subgoal",
    "nodes_answer",
    "nodes_gt",
    "hash_buckets",
    "bytes_total",
    "answers_total",
    "store_ms",
    "load_bottomup_ms",
    "load_compiled_ms",
    "oracle_verified",
)


class OracleMismatch(AssertionError):
    pass


class LoaderMismatch(AssertionError):
    pass


@dataclass
class RunReport:
    design: str
    workload: str
    n: int
    runs: int
    memory: MemoryReport
    answers_total: int
    store_ms: float
    load_bottomup_ms: float | None = None
    load_compiled_ms: float | None = None
    oracle_verified: bool = False
    mean_ms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "design": self.design,
            "workload": self.workload,
            "n": self.n,
            "runs": self.runs,
            "nodes": self.memory.nodes_dict(),
            "bytes_total": self.memory.bytes_total,
            "answers_total": self.answers_total,
            "times_ms": {
                "store": self.store_ms,
                "load_bottomup": self.load_bottomup_ms,
                "load_compiled": self.load_compiled_ms,
            },
            "oracle_verified": self.oracle_verified,
        }

    def csv_row(self) -> dict:
        m = self.memory
        return {
            "design": self.design,
            "workload": self.workload,
            "n": self.n,
            "runs": self.runs,
            "nodes_subgoal": m.nodes_subgoal,
            "nodes_answer": m.nodes_answer,
            "nodes_gt": m.nodes_gt,
            "hash_buckets": m.hash_buckets,
            "bytes_total": m.bytes_total,
            "answers_total": self.answers_total,
            "store_ms": self.store_ms,
            "load_bottomup_ms": self.load_bottomup_ms,
            "load_compiled_ms": self.load_compiled_ms,
            "oracle_verified": self.oracle_verified,
        }


def store_workload(space: TableSpace, workload: Workload) -> None:
    for q in workload.queries:
        sf, _ = space.call(q.predicate, *q.args)
        for subs in q.answers:
            space.answer_check_insert(sf, subs)


def expected_answers(space: TableSpace, workload: Workload) -> dict:
    """Per frame, the distinct standardized answers in first-insertion order."""
    out: dict = {}
    for q in workload.queries:
        sf, _ = space.call(q.predicate, *q.args)
        seen = out.setdefault(sf, {})
        for subs in q.answers:
            seen.setdefault(standardize(tuple(subs))[0], None)
    return {sf: list(answers) for sf, answers in out.items()}


def check_loaders(space: TableSpace, expected: dict) -> None:
    for sf, want in expected.items():
        got = list(space.load_answers_bottom_up(sf))
        if got != want:
            raise LoaderMismatch(f"{sf.call}: bottom-up loader returned {len(got)} answers, "
                                 f"expected {len(want)} in insertion order")
        space.compile_answer_trie(sf)
        compiled = list(space.load_answers_compiled(sf))
        if len(compiled) != len(want) or set(compiled) != set(want):
            raise LoaderMismatch(f"{sf.call}: compiled loader disagrees with stored answers")


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def _consume(it) -> int:
    n = 0
    for _ in it:
        n += 1
    return n


def run(
    design: str,
    workload: Workload,
    runs: int = 1,
    load_mode: str = "both",
    word_bytes: int = DEFAULT_WORD_BYTES,
    verify_oracle: bool = False,
    check: bool = True,
) -> RunReport:
    """Store the workload ``runs`` times and time the load passes.

    Counts come from the first run.  With ``check`` the loaders are
    validated against the inserted answers; with ``verify_oracle`` the
    node counts must equal the independent expected counts.
    """
    if design not in DESIGNS:
        raise ValueError(f"unknown design {design!r}")
    if load_mode not in LOAD_MODES:
        raise ValueError(f"unknown load mode {load_mode!r}")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        return _run(design, workload, runs, load_mode, word_bytes, verify_oracle, check)
    finally:
        if gc_was_enabled:
            gc.enable()


def _run(design, workload, runs, load_mode, word_bytes, verify_oracle, check) -> RunReport:
    store_t, bu_t, cmp_t = [], [], []
    memory = None
    answers_total = 0
    for r in range(runs):
        space = TableSpace(design)
        t0 = time.perf_counter()
        store_workload(space, workload)
        store_t.append(_ms(t0))
        if r == 0:
            memory = snapshot(space, word_bytes)
            answers_total = sum(len(sf) for sf in space.frames())
        frames = list(space.frames())
        if load_mode in ("bottomup", "both"):
            t0 = time.perf_counter()
            for sf in frames:
                _consume(space.load_answers_bottom_up(sf))
            bu_t.append(_ms(t0))
        if load_mode in ("compiled", "both"):
            for sf in frames:
                space.compile_answer_trie(sf)
            t0 = time.perf_counter()
            for sf in frames:
                _consume(space.load_answers_compiled(sf))
            cmp_t.append(_ms(t0))
        if r == 0 and check:
            check_loaders(space, expected_answers(space, workload))

    verified = False
    if verify_oracle:
        want = oracle_counts(workload.queries, design)
        diff = want.mismatches(memory)
        if diff:
            lines = ", ".join(f"{k}: expected {e}, got {g}" for k, (e, g) in diff.items())
            raise OracleMismatch(f"{design} {workload.name}: {lines}")
        verified = True

    med = lambda xs: statistics.median(xs) if xs else None  # noqa: E731
    return RunReport(
        design=design,
        workload=workload.name,
        n=workload.n,
        runs=runs,
        memory=memory,
        answers_total=answers_total,
        store_ms=med(store_t),
        load_bottomup_ms=med(bu_t),
        load_compiled_ms=med(cmp_t),
        oracle_verified=verified,
        mean_ms={
            "store": statistics.fmean(store_t),
            "load_bottomup": statistics.fmean(bu_t) if bu_t else None,
            "load_compiled": statistics.fmean(cmp_t) if cmp_t else None,
        },
    )


# -- reports --------------------------------------------------------------------

def format_report(report: RunReport, fmt: str = "json", header: bool = True) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        if header:
            w.writeheader()
        w.writerow(report.csv_row())
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(report: RunReport, fmt: str = "json", out: str | Path | None = None) -> str:
    """Write the report to ``out`` (stdout when None).

    A CSV row is appended to an existing CSV file without repeating the header.
    """
    if out is None:
        text = format_report(report, fmt)
        sys.stdout.write(text)
        return text
    path = Path(out)
    if fmt == "csv" and path.exists() and path.stat().st_size > 0:
        text = format_report(report, fmt, header=False)
        with path.open("a", encoding="utf-8") as fh:
            fh.write(text)
        return text
    text = format_report(report, fmt)
    path.write_text(text, encoding="utf-8")
    return text


def load_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def compare_reports(base: dict, other: dict) -> dict:
    """Ratios ``other / base`` of node counts, bytes and times."""

    def r(a, b):
        return None if a in (None, 0) or b is None else b / a

    bn, on = base["nodes"], other["nodes"]
    btot = bn["subgoal"] + bn["answer"] + bn["gt"]
    otot = on["subgoal"] + on["answer"] + on["gt"]
    row = {
        "workload": other["workload"],
        "design": f"{other['design']}/{base['design']}",
        "nodes_total": r(btot, otot),
        "nodes_gt": r(bn["gt"], on["gt"]),
        "bytes_total": r(base["bytes_total"], other["bytes_total"]),
    }
    for k in ("store", "load_bottomup", "load_compiled"):
        row[f"{k}_ms"] = r(base["times_ms"][k], other["times_ms"][k])
    return row


# -- command line ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description="Table-space store/load benchmark.")
    p.add_argument("--design", choices=DESIGNS, required=True)
    p.add_argument(
        "--workload",
        required=True,
        help="table1:<kind> | table2:f<a>.g<b> | factfile:<path> | random:<seed>",
    )
    p.add_argument("--n", type=int, default=None, help="term count (default 100 for table1, 50000 for table2)")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--load", choices=LOAD_MODES, default="both")
    p.add_argument("--word-bytes", type=int, default=DEFAULT_WORD_BYTES)
    p.add_argument("--out", default=None, help="report file (stdout if omitted)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--all-pairs", action="store_true", help="table1: all two-variable position pairs")
    p.add_argument("--verify-oracle", action="store_true", help="fail unless counts equal the expected counts")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        spec = WorkloadSpec.parse(args.workload)
        workload = spec.generate(args.n, all_pairs=args.all_pairs)
    except (ValueError, OSError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 2
    log.info("workload %s: %d queries", workload.name, len(workload.queries))
    try:
        report = run(
            args.design,
            workload,
            runs=args.runs,
            load_mode=args.load,
            word_bytes=args.word_bytes,
            verify_oracle=args.verify_oracle,
        )
    except (OracleMismatch, LoaderMismatch) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1
    try:
        emit_report(report, args.format, args.out)
    except OSError as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 2
    return 0


def compare_main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(prog="bench-compare", description="Ratio table of JSON reports over a base report.")
    p.add_argument("base")
    p.add_argument("others", nargs="+")
    args = p.parse_args(argv)
    base = load_report(args.base)
    rows = [compare_reports(base, load_report(o)) for o in args.others]
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (f"{v:.2f}" if isinstance(v, float) else v) for k, v in row.items()})
    return 0


if __name__ == "__main__":
    sys.exit(main())
