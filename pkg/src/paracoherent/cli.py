"""Command-line entry point.

Exit codes: 0 solved, 10 no (paracoherent) model, 20 timeout, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .algorithms import (
    AlgorithmKind, NoParacoherentModel, enumerate_all, random_choice, run_algorithm, split,
)
from .bench import (
    BenchConfig, GeneratorConfig, format_size_table, generate_instances, report_transform_sizes,
    run_bench, size_ratio, write_report,
)
from .engine import (
    EnumerationState, SolveStats, SolveTimeout, optimum_answer_set, violated_weak,
)
from .oracle import oracle_answer_sets, oracle_view
from .program import ParseError, Program, format_program, parse
from .transform import TransformError, TransformKind, transform

EXIT_OK, EXIT_USAGE, EXIT_NO_MODEL, EXIT_TIMEOUT = 0, 2, 10, 20
SEMANTICS = {"sst": TransformKind.KAPPA, "seq": TransformKind.HT}


def _read_program(path: str) -> Program:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse(text)


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps({"version": __version__, **payload}, indent=2))
    elif text:
        print(text)


def _timeout(args) -> float | None:
    return None if args.timeout_ms is None else args.timeout_ms / 1000.0


def cmd_transform(args) -> int:
    program = _read_program(args.file)
    tp = transform(program, args.kind, with_gap=args.with_gap)
    text = format_program(tp.program)
    _emit(args, {"schema": "paracoherent.transform/1", "kind": tp.kind.value,
                 "atoms": len(tp.program.atoms), "rules": len(tp.program.rules),
                 "program": text.splitlines()}, text)
    return EXIT_OK


def cmd_solve(args) -> int:
    program = _read_program(args.file)
    timeout = _timeout(args)
    deadline = None if timeout is None else time.monotonic() + timeout
    stats = SolveStats()
    started = time.perf_counter()
    if program.weak:
        best = optimum_answer_set(program, seed=args.seed, deadline=deadline, stats=stats)
        models = [] if best is None else [best]
        extra = {} if best is None else {"cost": violated_weak(program, best)}
    else:
        state = EnumerationState(program, seed=args.seed, deadline=deadline, stats=stats)
        limit = None if args.all else args.limit
        models = []
        while limit is None or len(models) < limit:
            m = state.next()
            if m is None:
                break
            models.append(m)
        extra = {}
    stats.elapsed = time.perf_counter() - started
    named = [sorted(program.names(m)) for m in models]
    text = "\n".join(f"Answer {i}: {' '.join(m)}" for i, m in enumerate(named, 1)) or "INCOHERENT"
    _emit(args, {"schema": "paracoherent.solve/1", "models": named, "stats": stats.as_dict(), **extra},
          text)
    return EXIT_OK if models else EXIT_NO_MODEL


def _result_payload(result, tp) -> dict:
    return {"model": sorted(result.names(tp)), "gap": sorted(result.gap_names(tp))}


def cmd_paracoherent(args) -> int:
    program = _read_program(args.file)
    tp = transform(program, SEMANTICS[args.semantics])
    timeout = _timeout(args)
    base = {"schema": "paracoherent.result/1", "semantics": args.semantics}
    if args.all:
        results = enumerate_all(tp, seed=args.seed, timeout=timeout)
        if not results:
            _emit(args, {**base, "models": []}, "NO PARACOHERENT MODEL")
            return EXIT_NO_MODEL
        payload = [_result_payload(r, tp) for r in results]
        text = "\n".join(f"Model {i}: {' '.join(p['model'])}" for i, p in enumerate(payload, 1))
        _emit(args, {**base, "models": payload, "stats": results[0].stats.as_dict()}, text)
        return EXIT_OK
    kwargs = {"seed": args.seed, "timeout": timeout}
    algorithm = AlgorithmKind(args.algorithm)
    if algorithm is AlgorithmKind.SPLIT and args.oneof == "random":
        result = split(tp, one_of=random_choice(args.seed), **kwargs)
    else:
        result = run_algorithm(tp, algorithm, **kwargs)
    payload = _result_payload(result, tp)
    text = f"Model: {' '.join(payload['model'])}\nGap: {' '.join(payload['gap']) or '-'}"
    _emit(args, {**base, "algorithm": algorithm.value, **payload, "stats": result.stats.as_dict()}, text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    program = _read_program(args.file)
    if args.semantics is None:
        found = sorted(sorted(program.names(m)) for m in oracle_answer_sets(program))
    else:
        found = sorted(sorted(m) for m in oracle_view(program, SEMANTICS[args.semantics]).paracoherent())
    text = "\n".join(" ".join(m) for m in found) or "NONE"
    _emit(args, {"schema": "paracoherent.oracle/1", "models": found}, text)
    return EXIT_OK if found else EXIT_NO_MODEL


def _generator(args) -> GeneratorConfig:
    return GeneratorConfig(count=args.generate, atoms=args.atoms, rules=args.rules,
                           max_head=args.max_head, max_body=args.max_body, neg_prob=args.neg_prob,
                           incoherent_only=not args.include_coherent)


def cmd_bench(args) -> int:
    cfg = BenchConfig(
        algorithms=args.algorithms,
        semantics=SEMANTICS[args.semantics],
        timeout=(args.timeout_ms or 10_000) / 1000.0,
        seed=args.seed or 0,
        files=[Path(f) for f in args.instances],
        generator=_generator(args) if args.generate or not args.instances else None,
        workers=args.workers,
    )
    report = run_bench(cfg)
    write_report(report, Path(args.out), cfg.scatter)
    _emit(args, report.to_dict(), report.summary() + f"\nwrote {args.out}/report.json")
    return EXIT_OK


def cmd_sizes(args) -> int:
    instances = [(Path(f).stem, _read_program(f)) for f in args.instances]
    if args.generate or not args.instances:
        instances += generate_instances(_generator(args), args.seed or 0)
    rows = report_transform_sizes(instances)
    _emit(args, {"schema": "paracoherent.sizes/1", "rows": [r.__dict__ for r in rows],
                 "ht_kappa_rule_ratio": size_ratio(rows)}, format_size_table(rows))
    return EXIT_OK


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--timeout-ms", type=int, default=argparse.SUPPRESS)
    return common


def _generator_flags(p: argparse.ArgumentParser, count: int):
    p.add_argument("--generate", type=int, default=count, help="number of random instances")
    p.add_argument("--atoms", type=int, default=8)
    p.add_argument("--rules", type=int, default=12)
    p.add_argument("--max-head", type=int, default=2)
    p.add_argument("--max-body", type=int, default=3)
    p.add_argument("--neg-prob", type=float, default=0.5)
    p.add_argument("--include-coherent", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="paracoherent", parents=[common],
                                     description="Semi-stable and semi-equilibrium models of ground programs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{transform,solve,paracoherent,bench,sizes}")

    p = sub.add_parser("transform", parents=[common], help="print an epistemic transformation")
    p.add_argument("file")
    p.add_argument("--kind", choices=["kappa", "ht"], default="kappa")
    p.add_argument("--with-gap", dest="with_gap", action="store_true", default=True)
    p.add_argument("--no-gap", dest="with_gap", action="store_false")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("solve", parents=[common], help="answer sets (optimum ones with weak constraints)")
    p.add_argument("file")
    p.add_argument("--all", action="store_true")
    p.add_argument("--limit", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("paracoherent", parents=[common], help="paracoherent answer sets")
    p.add_argument("file")
    p.add_argument("--semantics", choices=sorted(SEMANTICS), default="sst")
    p.add_argument("--algorithm", choices=[a.value for a in AlgorithmKind], default="split")
    p.add_argument("--all", action="store_true")
    p.add_argument("--oneof", choices=["lowest", "random"], default="lowest")
    p.set_defaults(func=cmd_paracoherent)

    p = sub.add_parser("oracle", parents=[common])  # development aid, left out of --help
    p.add_argument("file")
    p.add_argument("--semantics", choices=sorted(SEMANTICS), default=None)
    p.set_defaults(func=cmd_oracle)
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]

    p = sub.add_parser("bench", parents=[common], help="compare the algorithms on a set of instances")
    p.add_argument("instances", nargs="*")
    p.add_argument("--algorithms", nargs="+", choices=[a.value for a in AlgorithmKind],
                   default=[a.value for a in AlgorithmKind])
    p.add_argument("--semantics", choices=sorted(SEMANTICS), default="sst")
    p.add_argument("--out", default="bench-out")
    p.add_argument("--workers", type=int, default=1)
    _generator_flags(p, 0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sizes", parents=[common], help="program sizes before and after the transformations")
    p.add_argument("instances", nargs="*")
    _generator_flags(p, 0)
    p.set_defaults(func=cmd_sizes)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for name, default in (("format", "text"), ("seed", None), ("timeout_ms", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except SolveTimeout:
        print("TIMEOUT", file=sys.stderr)
        return EXIT_TIMEOUT
    except NoParacoherentModel:
        print("NO PARACOHERENT MODEL", file=sys.stderr)
        return EXIT_NO_MODEL
    except (ParseError, TransformError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
