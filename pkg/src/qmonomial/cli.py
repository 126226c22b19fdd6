"""Command-line entry point.

Exit codes: 0 success (the answer is in the report), 2 usage errors,
3 input-format errors, 4 budget or cap errors.  With ``--exit-status`` a
"no" answer exits 3 instead of 0.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import AlgElem, make_field
from .apps import (
    ZeroPolynomial, build_kpath_circuit, build_setpack_circuit, kpath_oracle, load_graph,
    load_set_system, p2_to_sets, p2pack_oracle, setpack_oracle,
)
from .circuit import Circuit, circuit_stats, expand, load_circuit, q_monomial_oracle
from .derand import dtm_test
from .errors import (
    BudgetError, CircuitFormatError, InputFormatError, ParameterError, QMonomialError,
    StructureError,
)
from .rtm import DEFAULT_TRIALS, TestParams, TestReport, rtm_test

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3, 4
MODES = ("randomized", "deterministic", "oracle")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    path: str | None
    q: int
    k: int
    m: int | None = None
    mode: str = "randomized"
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    output: str = "human"
    workers: int | None = None
    timings: bool = True
    strict: bool = False


class UsageError(QMonomialError):
    pass


def report_schema() -> dict:
    """The JSON schema every structured report validates against."""
    return json.loads(resources.files("qmonomial").joinpath("schemas/report.schema.json").read_text())


def _oracle_report(q: int, k: int, answer: bool, stats=None, extra=None, elapsed=None) -> TestReport:
    return TestReport(
        answer="yes" if answer else "no", mode="oracle", q=q, k=k, d=None,
        trials_run=0, successes=0, seed=None,
        s=stats.s if stats else None, t=stats.t if stats else None,
        tree_like=stats.tree_like if stats else None,
        elapsed_ms=elapsed or {}, extra=extra or {},
    )


def _zero_report(cfg: RunConfig, k: int, extra: dict) -> TestReport:
    return TestReport(answer="no", mode=cfg.mode, q=cfg.q, k=k, d=None, trials_run=0,
                      successes=0, seed=cfg.seed if cfg.mode == "randomized" else None,
                      extra={**extra, "zero_polynomial": True})


def _test(cfg: RunConfig, c: Circuit, k: int, extra: dict, oracle=None) -> TestReport:
    if cfg.mode == "randomized":
        report = rtm_test(c, TestParams(cfg.q, k, cfg.trials, cfg.seed), workers=cfg.workers)
    elif cfg.mode == "deterministic":
        if not circuit_stats(c).tree_like:
            raise UsageError("deterministic mode requires a tree-like circuit")
        report = dtm_test(c, cfg.q, k, workers=cfg.workers)
    else:
        start = time.perf_counter()
        answer = oracle() if oracle else q_monomial_oracle(expand(c), cfg.q, k)
        elapsed = {"total": round((time.perf_counter() - start) * 1000.0, 3)}
        report = _oracle_report(cfg.q, k, answer, circuit_stats(c), elapsed=elapsed)
    report.extra.update(extra)
    return report


def run(cfg: RunConfig) -> TestReport:
    if cfg.q < 2 or cfg.k < 1:
        raise UsageError("need --q >= 2 and --k >= 1")
    if cfg.subcommand == "test-circuit":
        return _test(cfg, load_circuit(cfg.path), cfg.k, {"problem": "circuit"})
    if cfg.subcommand == "kpath":
        if cfg.mode == "deterministic":
            raise UsageError("kpath supports randomized and oracle modes only")
        g = load_graph(cfg.path)
        extra = {"problem": "kpath", "n": g.n}
        try:
            c = build_kpath_circuit(g, cfg.k)
        except ZeroPolynomial:
            return _zero_report(cfg, cfg.k, extra)
        return _test(cfg, c, cfg.k, extra, oracle=lambda: kpath_oracle(g, cfg.k, cfg.q))
    if cfg.subcommand in ("setpack", "p2pack"):
        if cfg.subcommand == "setpack":
            if cfg.m is None:
                raise UsageError("setpack needs --m")
            system = load_set_system(cfg.path, cfg.m, cfg.strict)
            oracle = lambda: setpack_oracle(system, cfg.k, cfg.q)  # noqa: E731
        else:
            g = load_graph(cfg.path)
            system = p2_to_sets(g)
            oracle = lambda: p2pack_oracle(g, cfg.k, cfg.q)  # noqa: E731
        extra = {"problem": cfg.subcommand, "members": len(system.members),
                 "m": system.m, "packing_k": cfg.k}
        degree = system.m * cfg.k
        try:
            c = build_setpack_circuit(system, cfg.k)
        except ZeroPolynomial:
            return _zero_report(cfg, degree, extra)
        return _test(cfg, c, degree, extra, oracle=oracle)
    raise UsageError(f"unknown subcommand {cfg.subcommand!r}")


def render(report: TestReport, output: str, timings: bool = True) -> str:
    doc = report.to_dict(timings=timings)
    if output == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = [f"answer: {report.answer}", f"mode: {report.mode}",
             f"q={report.q} k={report.k} d={report.d}"]
    if report.s is not None:
        lines.append(f"circuit: s={report.s} t={report.t} tree_like={report.tree_like}")
    if report.mode != "oracle":
        lines.append(f"trials: {report.trials_run} run, {report.successes} nonzero, seed={report.seed}")
    for key, val in sorted(report.extra.items()):
        lines.append(f"{key}: {val}")
    if timings and report.elapsed_ms:
        lines.append("elapsed_ms: " + ", ".join(f"{k}={v}" for k, v in report.elapsed_ms.items()))
    return "\n".join(lines) + "\n"


# -- bench ------------------------------------------------------------------


def _time(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best * 1000.0


def bench(max_k: int, seed: int) -> dict:
    from .apps import Graph, SetSystem

    rng = np.random.default_rng(seed)
    field = make_field(16)
    algebra_rows = []
    for k in range(2, max_k + 1):
        u = AlgElem(field, k, rng.integers(0, field.order, 1 << k))
        w = AlgElem(field, k, rng.integers(0, field.order, 1 << k))
        y = AlgElem.shifted_basis(field, k, 1)
        algebra_rows.append({"k": k, "dense_ms": round(_time(lambda: u * w), 3),
                             "sparse_ms": round(_time(lambda: y * w), 3)})
    e2e_rows = []
    for k in range(2, max_k + 1, 2):
        n = k + 2
        g = Graph.from_pairs(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                                 if rng.random() < 0.5])
        try:
            c = build_kpath_circuit(g, k)
        except ZeroPolynomial:
            continue
        r = rtm_test(c, TestParams(2, k, 8, seed))
        e2e_rows.append({"problem": f"kpath n={n}", "k": k, "s": r.s, "trials": 8,
                         "ms_per_trial": round(r.elapsed_ms["trials"] / 8, 3), "answer": r.answer})
    for mk in range(1, max(2, max_k // 3) + 1):
        items = [str(i) for i in range(1, 10)]
        members = sorted({tuple(sorted(rng.choice(items, 3, replace=False).tolist())) for _ in range(6)})
        c = build_setpack_circuit(SetSystem(tuple(members), 3), mk)
        r = dtm_test(c, 2, 3 * mk)
        e2e_rows.append({"problem": f"setpack dtm |S|={len(members)}", "k": 3 * mk, "s": r.s,
                         "trials": r.trials_run,
                         "ms_per_trial": round(r.elapsed_ms["identity_tests"] / r.trials_run, 3),
                         "answer": r.answer})
    return {"algebra": algebra_rows, "end_to_end": e2e_rows}


def format_table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    cols = list(rows[0])
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    head = "  ".join(c.rjust(widths[c]) for c in cols)
    body = ["  ".join(str(r[c]).rjust(widths[c]) for c in cols) for r in rows]
    return "\n".join([head, "-" * len(head), *body]) + "\n"


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmonomial", description="q-monomial testing for arithmetic circuits")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, modes=MODES):
        sp.add_argument("path")
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--mode", choices=modes, default="randomized")
        sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", dest="output", choices=("human", "json"), default="human")
        sp.add_argument("--threads", dest="workers", type=int, default=None,
                        help="worker threads (default: $MONOMIAL_THREADS or 1)")
        sp.add_argument("--no-timings", dest="timings", action="store_false",
                        help="omit elapsed_ms so identical runs give identical bytes")
        sp.add_argument("--exit-status", action="store_true", help="exit 0 on yes, 3 on no")

    common(sub.add_parser("test-circuit", help="test a circuit file"))
    common(sub.add_parser("kpath", help="non-simple k-path on a graph file"))
    sp = sub.add_parser("setpack", help="generalized m-set k-packing on a set-system file")
    common(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--strict", action="store_true", help="require m >= 3")
    common(sub.add_parser("p2pack", help="generalized P2-packing on a graph file"))

    bp = sub.add_parser("bench", help="algebra and end-to-end timing tables")
    bp.add_argument("--max-k", type=int, default=10)
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--json", dest="json_out", default=None, help="also write the tables to this file")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "bench":
        if not 2 <= args.max_k <= 12:
            parser.error("--max-k must be in [2, 12]")
        tables = bench(args.max_k, args.seed)
        sys.stdout.write("group-algebra multiplication (GF(2^16))\n" + format_table(tables["algebra"]))
        sys.stdout.write("\nend to end\n" + format_table(tables["end_to_end"]))
        if args.json_out:
            Path(args.json_out).write_text(json.dumps(tables, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    cfg = RunConfig(
        subcommand=args.subcommand, path=args.path, q=args.q, k=args.k,
        m=getattr(args, "m", None), mode=args.mode, trials=args.trials, seed=args.seed,
        output=args.output, workers=args.workers, timings=args.timings,
        strict=getattr(args, "strict", False),
    )
    try:
        report = run(cfg)
    except (UsageError, ParameterError, StructureError) as exc:
        print(f"qmonomial: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CircuitFormatError, InputFormatError, OSError) as exc:
        print(f"qmonomial: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"qmonomial: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    sys.stdout.write(render(report, cfg.output, cfg.timings))
    if args.exit_status:
        return EXIT_OK if report.yes else EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
