"""
Command line entry point.

    python -m src.cli.main <command> [options]

Exit codes: 0 success, 1 input or usage error, 2 broken engine invariant.
Results go to stdout, logs to stderr.
"""
import argparse
import logging
import sys
from typing import IO, List, Optional, Sequence

from src.api.schemas.closure import AuditOut, AuditSuiteOut, ClosureOut, PercolatesOut
from src.api.schemas.experiments import EstimateOut, ScalingOut, ThresholdOut
from src.api.schemas.patterns import BalancednessOut, BoundRowOut, BoundsOut, LemmaSuiteOut
from src.api.schemas.common import frac
from src.cli.output import (
    BOUNDS_CSV_HEADER, SWEEP_CSV_HEADER, number, write_csv, write_estimates_csv, write_json,
    write_lines, yes_no,
)
from src.config import settings
from src.errors import EXIT_INVARIANT, EXIT_OK, BootstrapError, InputError, exit_code_for
from src.models.graph import GnpSpec, Graph, sample_gnp
from src.models.pattern import Pattern
from src.parser.edge_list import read_edge_list, write_edge_list
from src.services.closure_engine import closure, percolates
from src.services.experiment_service import (
    ThresholdSearch, TrialBatch, estimate_probability, find_threshold, sweep_scaling,
)
from src.services.lemma_oracles import mean_dense_subgraph_counts, verify_all
from src.services.pattern_math import (
    bound_curves, in_proven_range, is_balanced_brute_force, is_balanced_closed_form, lower_bound_p,
)
from src.services.witness_tracker import audit_closure
from src.utils.seeds import derive_seed

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors become InputError so they share exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


def _open_session():
    from src.database import SessionLocal, init_db
    init_db()
    return SessionLocal()


def _read_graph(args) -> Graph:
    try:
        return read_edge_list(args.input if args.input else sys.stdin)
    except OSError as e:
        raise InputError(f"cannot read {args.input}: {e.strerror}") from e


def _copy_text(copy) -> str:
    return f"{' '.join(map(str, copy.side_a))} | {' '.join(map(str, copy.side_b))}"


def cmd_closure(args, out: IO[str]) -> int:
    pattern = Pattern(*args.pattern)
    graph = _read_graph(args)
    result = closure(graph, pattern, track_witnesses=args.witness)
    audit = audit_closure(graph, pattern, result=result) if args.witness else None
    if args.output:
        write_edge_list(result.final, args.output)
    if args.json:
        write_json(ClosureOut.from_domain(result, audit), args.argv, out)
        return EXIT_OK

    lines = [
        f"pattern: {pattern}",
        f"n: {graph.n}",
        f"percolated: {yes_no(result.percolated)}",
        f"infections: {result.infection_count}",
    ]
    lines += [f"t={step.t} edge={step.edge} copy={_copy_text(step.copy)}" for step in result.trace]
    if audit is not None:
        lines.append(f"audit: {audit.status}, {len(audit.violations)} violations")
        lines += [f"  {v.check} ({v.edge}): {v.detail}" for v in audit.violations]
    write_lines(lines, out)
    return EXIT_OK


def cmd_percolates(args, out: IO[str]) -> int:
    pattern = Pattern(*args.pattern)
    graph = _read_graph(args)
    verdict = percolates(graph, pattern)
    if args.json:
        write_json(PercolatesOut(pattern=[pattern.r, pattern.s], n=graph.n, percolated=verdict), args.argv, out)
    else:
        write_lines([f"percolated: {yes_no(verdict)}"], out)
    return EXIT_OK


def cmd_estimate(args, out: IO[str]) -> int:
    batch = TrialBatch(n=args.n, pattern=Pattern(*args.pattern), p=args.p,
                       trials=args.trials, base_seed=args.seed)
    estimate = estimate_probability(batch, workers=args.workers)
    if args.store:
        from src.services.results_store import ResultsStore
        with _open_session() as db:
            run = ResultsStore(db).save_estimate(estimate)
            logger.info("stored run %s", run.id)

    payload = EstimateOut.from_domain(estimate)
    if args.json:
        write_json(payload, args.argv, out)
    elif args.csv:
        write_estimates_csv([payload], out)
    else:
        write_lines([
            f"pattern: {batch.pattern}",
            f"n: {batch.n}",
            f"p: {number(batch.p)}",
            f"trials: {batch.trials}",
            f"percolated_fraction: {number(payload.percolated_fraction)}",
            f"ci95: [{number(payload.ci_lo)}, {number(payload.ci_hi)}]",
            f"seed: {batch.base_seed}",
        ], out)
    return EXIT_OK


def _bracket(args):
    if args.lo is None and args.hi is None:
        return None
    if args.lo is None or args.hi is None:
        raise InputError("--lo and --hi must be given together")
    return args.lo, args.hi


def cmd_find_threshold(args, out: IO[str]) -> int:
    search = ThresholdSearch(
        n=args.n, pattern=Pattern(*args.pattern), trials_per_probe=args.trials,
        bracket=_bracket(args), rel_tol=args.rel_tol, base_seed=args.seed,
    )
    result = find_threshold(search, workers=args.workers)
    payload = ThresholdOut.from_domain(result)
    if args.store:
        from src.services.results_store import ResultsStore
        with _open_session() as db:
            store = ResultsStore(db)
            payload.baseline = store.baseline_status(result)
            run = store.save_threshold(result)
            logger.info("stored run %s", run.id)

    if args.json:
        write_json(payload, args.argv, out)
    elif args.csv:
        write_estimates_csv(payload.probes, out)
    else:
        lines = [
            f"pattern: {search.pattern}",
            f"n: {search.n}",
            f"p_hat: {number(result.p_hat)}",
            f"bracket: [{number(result.lo)}, {number(result.hi)}]",
            f"half_width: {number(result.half_width)}",
            f"probes: {len(result.probes)} ({result.expansions} expansions)",
        ]
        lines += [
            f"  #{p.index} {p.kind} p={number(p.p)} fraction={number(p.estimate.fraction)}"
            for p in result.probes
        ]
        if payload.baseline is not None:
            lines.append(f"baseline: {payload.baseline}")
        write_lines(lines, out)
    return EXIT_OK


def cmd_sweep(args, out: IO[str]) -> int:
    pattern = Pattern(*args.pattern)
    result = sweep_scaling(pattern, args.n_list, trials_per_probe=args.trials,
                           rel_tol=args.rel_tol, base_seed=args.seed, workers=args.workers)
    payload = ScalingOut.from_domain(result)
    if args.json:
        write_json(payload, args.argv, out)
    elif args.csv:
        write_csv(SWEEP_CSV_HEADER, [
            [row.n, pattern.r, pattern.s, row.p_hat, row.half_width, row.trials, row.status,
             row.seed, row.lower_curve, row.upper_curve]
            for row in payload.rows
        ], out)
    else:
        lines = [f"pattern: {pattern}"]
        for row in payload.rows:
            if row.status == "ok":
                lines.append(f"n={row.n} p_hat={number(row.p_hat)} +/- {number(row.half_width)}")
            else:
                lines.append(f"n={row.n} failed: {row.error}")
        lines.append(f"theory exponent: {payload.theory_exponent} ({number(payload.theory_exponent_value)})")
        fitted = number(payload.fitted_exponent) if payload.fitted_exponent is not None else "n/a"
        lines.append(f"fitted exponent: {fitted}")
        write_lines(lines, out)
    return EXIT_OK


def _overlap_line(name: str, report) -> str:
    verdict = "pass" if report.passed else "FAIL"
    line = f"{name}: {verdict} over {report.instances} instances"
    if report.worst is not None:
        pq = ", ".join(f"({p},{q})" for p, q in zip(report.worst.P, report.worst.Q))
        label = "failure witness" if not report.passed else "tightest"
        line += f"; {label} (P,Q)={pq} value {frac(report.worst_slack)}"
    return line


def cmd_verify_lemmas(args, out: IO[str]) -> int:
    """A failing lemma is a finding: the exit code stays 0."""
    pattern = Pattern(args.r, args.s)
    report = verify_all(pattern, args.m_max)
    if args.dense_samples > 0:
        dense_p = args.dense_p
        if dense_p is None:
            dense_p = lower_bound_p(pattern, args.dense_n)
        report.dense = mean_dense_subgraph_counts(
            pattern, args.dense_n, dense_p, args.dense_samples,
            range(1, pattern.edge_count + 1), seed=args.seed,
        )

    if args.json:
        write_json(LemmaSuiteOut.from_domain(report), args.argv, out)
        return EXIT_OK

    lines = [
        f"pattern: {pattern}",
        f"lambda: {pattern.lam}",
        f"in proven range: {yes_no(report.in_proven_range)}",
        _overlap_line("single overlap", report.single),
        _overlap_line("multi overlap", report.multi),
        _overlap_line("case III boundary", report.case3),
    ]
    for c in report.case3.chain:
        lines.append(f"  m={c.m}: lambda(r+s-2m)+m = {c.rhs} vs rs-m = {c.target} "
                     f"({'holds' if c.holds else 'does not hold'}, recorded only)")
    if report.dense is not None:
        lines.append(f"mean Y_m over {report.dense.samples} samples of G({report.dense.n}, {number(report.dense.p)}):")
        lines += [f"  m={m}: {number(v)}" for m, v in sorted(report.dense.means.items())]
    write_lines(lines, out)
    return EXIT_OK


def cmd_balanced(args, out: IO[str]) -> int:
    pattern = Pattern(args.r, args.s)
    report = is_balanced_brute_force(pattern)
    closed_form = is_balanced_closed_form(pattern)
    if args.json:
        write_json(BalancednessOut.from_domain(report, closed_form), args.argv, out)
        return EXIT_OK
    p, q = report.worst_subgraph
    write_lines([
        f"pattern: {pattern}",
        f"balanced: {yes_no(report.balanced)}",
        f"lambda: {report.lam}",
        f"closed form: {yes_no(closed_form)}",
        f"density condition: {yes_no(report.density_condition_holds)}",
        f"worst subgraph: K_{p},{q}{' minus an edge' if report.worst_is_edge_deleted else ''} ratio {report.worst_ratio}",
        f"in proven range: {yes_no(in_proven_range(pattern))}",
    ], out)
    return EXIT_OK


def cmd_bounds(args, out: IO[str]) -> int:
    pattern = Pattern(*args.pattern)
    rows = bound_curves(pattern, args.n, c=args.c, C=args.C)
    payload = BoundsOut(pattern=[pattern.r, pattern.s], lam=frac(pattern.lam), c=args.c, C=args.C,
                        rows=[BoundRowOut.from_domain(row) for row in rows])
    if args.json:
        write_json(payload, args.argv, out)
    elif args.csv:
        write_csv(BOUNDS_CSV_HEADER, [
            [row.n, row.lower, row.theorem_lower, row.general_lower, row.upper,
             yes_no(row.upper_proven), row.known_reference]
            for row in rows
        ], out)
    else:
        lines = [f"pattern: {pattern}", f"lambda: {pattern.lam}"]
        for row in rows:
            parts = [f"n={row.n}", f"theorem_lower={number(row.theorem_lower)}"]
            if row.lower is not None:
                parts.append(f"lower={number(row.lower)}")
                parts.append(f"general_lower={number(row.general_lower)} (K_{row.general_pattern[0]},{row.general_pattern[1]})")
            if row.upper is not None:
                parts.append(f"upper={number(row.upper)}{'' if row.upper_proven else ' (unproven)'}")
            if row.known_reference is not None:
                parts.append(f"known={number(row.known_reference)}")
            lines.append(" ".join(parts))
        write_lines(lines, out)
    return EXIT_OK


def cmd_audit(args, out: IO[str]) -> int:
    """Structural checks on seeded G(n, p) runs; any violation exits with 2."""
    pattern = Pattern(*args.pattern)
    if args.runs < 1:
        raise InputError(f"--runs must be at least 1, got {args.runs}")
    audits = []
    for i in range(args.runs):
        seed = derive_seed(args.seed, i)
        graph = sample_gnp(GnpSpec(n=args.n, p=args.p, seed=seed))
        audits.append(audit_closure(graph, pattern, seed=seed, sandwich_L=args.L))
    total = sum(len(a.violations) for a in audits)

    if args.json:
        write_json(AuditSuiteOut(
            pattern=[pattern.r, pattern.s], n=args.n, p=args.p, seed=args.seed,
            runs=[AuditOut.from_domain(a) for a in audits],
            percolated_runs=sum(a.percolated for a in audits),
            total_violations=total,
        ), args.argv, out)
    else:
        lines = [f"pattern: {pattern}", f"status: {audits[0].status}"]
        for a in audits:
            sandwich = a.sandwich.status if a.sandwich else "n/a"
            lines.append(f"seed={a.seed} percolated={yes_no(a.percolated)} infections={a.infections} "
                         f"sandwich={sandwich} violations={len(a.violations)}")
            lines += [f"  {v.check} ({v.edge}): {v.detail}" for v in a.violations]
        lines.append(f"total violations: {total}")
        write_lines(lines, out)
    return EXIT_INVARIANT if total else EXIT_OK


def cmd_init_db(args, out: IO[str]) -> int:
    """Creates the results tables and reports what is already stored."""
    from src.database import SessionLocal, init_db
    from src.services.results_store import ResultsStore
    tables = init_db()
    with SessionLocal() as db:
        counts = ResultsStore(db).count_runs()
    lines = [f"tables: {', '.join(tables)}"]
    lines += [f"stored {kind} runs: {count}" for kind, count in counts.items()]
    write_lines(lines, out)
    return EXIT_OK


def _pattern_arg(parser):
    parser.add_argument("--pattern", type=int, nargs=2, metavar=("R", "S"), required=True)


def _format_args(parser, csv: bool = True):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="JSON document on stdout")
    if csv:
        group.add_argument("--csv", action="store_true", help="CSV rows on stdout")


def _monte_carlo_args(parser):
    parser.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes (default BOOTSTRAP_WORKERS); never changes results")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="bootstrap", description="K_{r,s} graph bootstrap percolation engine")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = commands.add_parser("closure", help="closure of an edge list with its infection trace")
    _pattern_arg(p)
    p.add_argument("--input", help="edge-list file (default stdin)")
    p.add_argument("--output", help="write the closure as an edge list")
    p.add_argument("--witness", action="store_true", help="run the structural checks on every infected edge")
    _format_args(p, csv=False)
    p.set_defaults(handler=cmd_closure)

    p = commands.add_parser("percolates", help="whether the closure is complete")
    _pattern_arg(p)
    p.add_argument("--input", help="edge-list file (default stdin)")
    _format_args(p, csv=False)
    p.set_defaults(handler=cmd_percolates)

    p = commands.add_parser("estimate-prob", help="percolation probability on G(n, p)")
    p.add_argument("--n", type=int, required=True)
    _pattern_arg(p)
    p.add_argument("--p", type=float, required=True)
    _monte_carlo_args(p)
    p.add_argument("--store", action="store_true", help="save the result in the results database")
    _format_args(p)
    p.set_defaults(handler=cmd_estimate)

    p = commands.add_parser("find-threshold", help="bisection for the empirical threshold")
    p.add_argument("--n", type=int, required=True)
    _pattern_arg(p)
    _monte_carlo_args(p)
    p.add_argument("--rel-tol", type=float, default=settings.DEFAULT_REL_TOL)
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--store", action="store_true", help="save and compare with the stored baseline")
    _format_args(p)
    p.set_defaults(handler=cmd_find_threshold)

    p = commands.add_parser("sweep", help="thresholds over several n and the fitted exponent")
    _pattern_arg(p)
    p.add_argument("--n-list", type=int, nargs="+", required=True)
    _monte_carlo_args(p)
    p.add_argument("--rel-tol", type=float, default=settings.DEFAULT_REL_TOL)
    _format_args(p)
    p.set_defaults(handler=cmd_sweep)

    p = commands.add_parser("verify-lemmas", help="exhaustive overlap inequality checks")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--dense-samples", type=int, default=0, help="G(n, p) samples for the mean Y_m diagnostic")
    p.add_argument("--dense-n", type=int, default=8)
    p.add_argument("--dense-p", type=float, default=None, help="default: the lower bound curve at --dense-n")
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    _format_args(p, csv=False)
    p.set_defaults(handler=cmd_verify_lemmas)

    p = commands.add_parser("balanced", help="balancedness of K_{r,s}")
    p.add_argument("r", type=int)
    p.add_argument("s", type=int)
    _format_args(p, csv=False)
    p.set_defaults(handler=cmd_balanced)

    p = commands.add_parser("bounds", help="threshold bound curves")
    _pattern_arg(p)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--C", type=float, default=1.0)
    _format_args(p)
    p.set_defaults(handler=cmd_bounds)

    p = commands.add_parser("audit", help="structural lemma checks on seeded G(n, p) runs")
    p.add_argument("--n", type=int, required=True)
    _pattern_arg(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--L", type=int, default=2, help="size sandwich parameter")
    _format_args(p, csv=False)
    p.set_defaults(handler=cmd_audit)

    p = commands.add_parser("init-db", help="create the results tables")
    p.set_defaults(handler=cmd_init_db)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=settings.LOG_LEVEL)
    argv: List[str] = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.argv = argv
        return args.handler(args, sys.stdout)
    except BootstrapError as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
