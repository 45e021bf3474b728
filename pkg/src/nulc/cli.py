"""Command-line front end: solve, verify, oracle, gen, bench, aux."""
from __future__ import annotations

import argparse
import csv
import io
import logging
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, astuple
from typing import Optional, Sequence

from . import generators as gen
from .auxgraph import export_aux
from .instance import (
    Instance,
    ParseError,
    parse_instance,
    parse_solution,
    serialize_instance,
    serialize_solution,
    verify_solution,
)
from .oracle import SizeLimitError, brute_force
from .solver import MeasureError, solve

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_SELFCHECK = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class BenchRecord:
    name: str
    n: int
    m: int
    s: int
    k: int
    decision: str
    nodes_expanded: int
    max_depth: int
    wall_time_ms: float


BENCH_HEADER = [f.name for f in fields(BenchRecord)]


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _load(path: str) -> Instance:
    try:
        return parse_instance(_read(path))
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from exc


def _csv_rows(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def node_limit(s: int, k: int) -> int:
    return max(s + 1, 5) ** ((s + 1) * k)


# -- subcommands ------------------------------------------------------------


def cmd_solve(args) -> int:
    inst = _load(args.path)
    try:
        sol, stats = solve(inst, assert_measure=args.assert_measure)
    except MeasureError as exc:
        print(f"measure check failed: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK
    if args.check and sol.decision:
        verdict = verify_solution(inst, sol)
        if not verdict:
            print(f"self-check failed: {verdict.describe()}", file=sys.stderr)
            return EXIT_SELFCHECK
    if args.assert_measure:
        depth_cap = (inst.s + 1) * inst.k + 1
        if stats.max_depth > depth_cap:
            print(f"warning: depth {stats.max_depth} exceeds (s+1)k+1 = {depth_cap}", file=sys.stderr)
    sys.stdout.write(serialize_solution(sol, inst.n))
    if args.stats:
        rec = BenchRecord(
            args.path, inst.n, inst.graph.m, inst.s, inst.k, "YES" if sol.decision else "NO",
            stats.nodes_expanded, stats.max_depth, round(stats.wall_time * 1000, 3),
        )
        sys.stderr.write(_csv_rows([BENCH_HEADER, astuple(rec)]))
    return EXIT_YES if sol.decision else EXIT_NO


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    try:
        sol = parse_solution(_read(args.solution))
    except ParseError as exc:
        raise InputError(f"{args.solution}:{exc}") from exc
    if not sol.decision:
        print("solution file says NO; nothing to verify", file=sys.stderr)
        return EXIT_NO
    verdict = verify_solution(inst, sol)
    if verdict:
        print("OK")
        return EXIT_YES
    print(verdict.describe())
    return EXIT_NO


def cmd_oracle(args) -> int:
    inst = _load(args.path)
    try:
        sol = brute_force(inst)
    except SizeLimitError as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(serialize_solution(sol, inst.n))
    return EXIT_YES if sol.decision else EXIT_NO


def _graph_arg(args) -> tuple[int, list[tuple[int, int]]]:
    import random

    if args.cycle is not None:
        return args.cycle, gen.cycle(args.cycle)
    if args.petersen:
        return 10, gen.petersen()
    if args.complete is not None:
        return args.complete, gen.complete(args.complete)
    if args.star is not None:
        return args.star + 1, gen.star(args.star)
    if args.n is not None:
        return args.n, gen.gnp(args.n, args.p, random.Random(args.seed))
    raise InputError("choose a graph: --cycle N, --petersen, --complete N, --star L or --n N --p P")


def _terminals(spec: str, n: int) -> list[int]:
    if "," in spec or not spec.isdigit():
        ids = [int(x) - 1 for x in spec.split(",") if x]
    else:
        r = int(spec)
        ids = list(range(n - r, n))
    if any(not 0 <= t < n for t in ids):
        raise InputError(f"terminal out of range 1..{n}")
    return ids


def cmd_gen(args) -> int:
    fam = args.family
    echo = ["nulc " + " ".join(args.argv)]
    try:
        if fam == "random":
            if args.n is None:
                raise InputError("gen random needs --n")
            spec = gen.GenSpec(
                "random", args.n, args.p, args.sigma, args.k, args.seed,
                planted=args.planted, p_full=args.p_full, p_undeletable=args.p_undeletable,
            )
            inst = gen.gen_random(spec)
        elif fam == "oct":
            if args.planted:
                if args.n is None:
                    raise InputError("gen oct --planted needs --n")
                inst = gen.gen_planted_oct(args.n, args.m or 2 * args.n, args.k, args.seed)
            else:
                n, edges = _graph_arg(args)
                inst = gen.gen_oct(n, edges, args.k)
        elif fam == "group-fvs":
            import random

            n, edges = _graph_arg(args)
            if args.labels:
                gs = [int(x) for x in args.labels.split(",")]
                if len(gs) != len(edges):
                    raise InputError(f"--labels needs {len(edges)} entries, got {len(gs)}")
            else:
                rng = random.Random(args.seed ^ 0x5EED)
                gs = [rng.randrange(args.sigma) for _ in edges]
            inst = gen.gen_group_fvs(n, [(u, v, g % args.sigma) for (u, v), g in zip(edges, gs)], args.sigma, args.k)
        elif fam == "multiway":
            n, edges = _graph_arg(args)
            if not args.terminals:
                raise InputError("gen multiway needs --terminals")
            terms = _terminals(args.terminals, n)
            inst = gen.gen_multiway_cut(n, edges, terms, args.k, s=args.sigma if args.sigma_set else None)
        else:  # pragma: no cover - argparse restricts choices
            raise InputError(f"unknown family {fam}")
    except (gen.GeneratorError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(serialize_instance(inst, comments=echo))
    return 0


LADDER_FAMILIES = ("padded", "independent")


def _bench_one(task: tuple[str, str, int, int, int, int]) -> BenchRecord:
    name, family, n, m, k, seed = task
    if family == "padded":
        inst = gen.gen_padded_oct(n, k, seed, density=m / n)
    else:
        inst = gen.gen_planted_oct(n, m, k, seed)
    sol, stats = solve(inst)
    if stats.nodes_expanded > node_limit(inst.s, inst.k):
        raise AssertionError(f"{name}: {stats.nodes_expanded} nodes exceed the branching bound")
    return BenchRecord(
        name, n, inst.graph.m, inst.s, inst.k, "YES" if sol.decision else "NO",
        stats.nodes_expanded, stats.max_depth, round(stats.wall_time * 1000, 3),
    )


def bench_ladder(
    sizes: Sequence[int], k: int, repeats: int, seed: int, jobs: int = 1, density: float = 2.0, family: str = "padded"
) -> list[BenchRecord]:
    """Planted OCT runs, ``repeats`` per size.

    ``padded``: repeat ``r`` uses one core at every size, so the search tree
    stays the same while the graph grows.  ``independent``: a fresh planted
    instance per run, so tree size varies from run to run.
    """
    if family not in LADDER_FAMILIES:
        raise ValueError(f"unknown ladder family {family}")
    tasks = []
    for n in sizes:
        for r in range(repeats):
            run_seed = seed + 1000 * r if family == "padded" else seed + 1000 * r + n
            tasks.append((f"oct-{family}-n{n}-r{r}", family, n, int(density * n), k, run_seed))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_bench_one, tasks))
    return [_bench_one(t) for t in tasks]


def fit_report(records: Sequence[BenchRecord]) -> tuple[float, list[float]]:
    """Least-squares slope of time (ms) against m + n, and consecutive median-time ratios."""
    xs = [r.n + r.m for r in records]
    ys = [r.wall_time_ms for r in records]
    mx, my = statistics.fmean(xs), statistics.fmean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx if sxx else 0.0
    by_n: dict[int, list[float]] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r.wall_time_ms)
    meds = [statistics.median(by_n[n]) for n in sorted(by_n)]
    ratios = [b / a for a, b in zip(meds, meds[1:])]
    return slope, ratios


def cmd_bench(args) -> int:
    if args.sigma != 2:
        raise InputError("the bench ladder uses planted OCT instances, which fix sigma = 2")
    try:
        lo, hi = (int(x) for x in args.ladder.split(":"))
    except ValueError as exc:
        raise InputError("--ladder expects LO:HI exponents, e.g. 10:14") from exc
    if not 4 <= lo <= hi:
        raise InputError("--ladder needs 4 <= LO <= HI")
    sizes = [2**e for e in range(lo, hi + 1)]
    if args.family == "padded" and lo < 6:
        raise InputError("the padded ladder needs n >= 64 (LO >= 6)")
    recs = bench_ladder(sizes, args.k, args.repeats, args.seed, args.jobs, family=args.family)
    sys.stdout.write(_csv_rows([BENCH_HEADER, *map(astuple, recs)]))
    if args.fit:
        slope, ratios = fit_report(recs)
        print(f"slope_ms_per_unit={slope:.6g}", file=sys.stderr)
        print("median_ratios=" + ",".join(f"{r:.3f}" for r in ratios), file=sys.stderr)
    return 0


def cmd_aux(args) -> int:
    sys.stdout.write(export_aux(_load(args.path)))
    return 0


# -- parser -----------------------------------------------------------------


class _SigmaAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.sigma_set = True


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nulc", description="Node Unique Label Cover solver")
    p.add_argument("-v", "--verbose", action="count", default=0, help="trace branching and separator chains")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve an instance file")
    sp.add_argument("path")
    sp.add_argument("--stats", action="store_true", help="CSV statistics row on stderr")
    sp.add_argument("--check", action="store_true", help="verify own answer before printing (exit 3 on failure)")
    sp.add_argument("--assert-measure", action="store_true", help="check that every child lowers the measure")
    sp.add_argument("-v", "--verbose", action="count", default=0, dest="verbose_sub")
    sp.set_defaults(func=cmd_solve)

    vp = sub.add_parser("verify", help="check a solution against an instance")
    vp.add_argument("instance")
    vp.add_argument("solution")
    vp.set_defaults(func=cmd_verify)

    op = sub.add_parser("oracle", help="exhaustive solver for tiny instances")
    op.add_argument("path")
    op.set_defaults(func=cmd_oracle)

    gp = sub.add_parser("gen", help="generate an instance")
    gp.add_argument("family", choices=["oct", "group-fvs", "multiway", "random"])
    gp.add_argument("--k", type=int, default=0)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--sigma", type=int, default=2, action=_SigmaAction)
    gp.add_argument("--cycle", type=int)
    gp.add_argument("--petersen", action="store_true")
    gp.add_argument("--complete", type=int)
    gp.add_argument("--star", type=int, help="star with this many leaves; the centre is vertex 1")
    gp.add_argument("--n", type=int)
    gp.add_argument("--m", type=int, help="edge target for planted OCT (default 2n)")
    gp.add_argument("--p", type=float, default=0.3)
    gp.add_argument("--planted", action="store_true")
    gp.add_argument("--p-full", type=float, default=0.5)
    gp.add_argument("--p-undeletable", type=float, default=0.0)
    gp.add_argument("--labels", help="group-fvs: comma list of group elements, one per edge")
    gp.add_argument("--terminals", help="multiway: comma list of 1-based ids, or a count r (last r vertices)")
    gp.set_defaults(func=cmd_gen, sigma_set=False)

    bp = sub.add_parser("bench", help="time the solver on a planted OCT size ladder")
    bp.add_argument("--ladder", default="10:14", help="LO:HI, sizes n = 2^LO .. 2^HI")
    bp.add_argument("--sigma", type=int, default=2)
    bp.add_argument("--k", type=int, default=2)
    bp.add_argument("--repeats", type=int, default=3)
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--jobs", type=int, default=1)
    bp.add_argument("--fit", action="store_true")
    bp.add_argument("--family", choices=LADDER_FAMILIES, default="padded", help="shared-core ladder or independent instances")
    bp.set_defaults(func=cmd_bench)

    ap = sub.add_parser("aux", help="export the expanded graph as an edge list")
    ap.add_argument("path")
    ap.set_defaults(func=cmd_aux)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    args.argv = list(sys.argv[1:] if argv is None else argv)
    verbose = args.verbose + getattr(args, "verbose_sub", 0)
    args.verbose = verbose
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format="%(name)s: %(message)s", stream=sys.stderr)
    start = time.perf_counter()
    try:
        code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    logging.getLogger(__name__).debug("%s finished in %.3fs", args.command, time.perf_counter() - start)
    return code


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
