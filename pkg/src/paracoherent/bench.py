"""Desk-scale benchmark harness: every algorithm on every instance, plus size reports."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import mean

from .algorithms import AlgorithmKind, NoParacoherentModel, is_paracoherent, run_algorithm
from .engine import SolveTimeout, first_answer_set
from .oracle import RandomParams, random_program
from .program import Program, parse
from .transform import TransformKind, transform

SCHEMA = "paracoherent.bench/1"
SOLVED, TIMEOUT, NO_MODEL = "solved", "timeout", "no-model"


@dataclass(frozen=True)
class GeneratorConfig:
    count: int = 20
    atoms: int = 8
    rules: int = 12
    max_head: int = 2
    max_body: int = 3
    neg_prob: float = 0.5
    incoherent_only: bool = True
    max_tries: int = 10_000


@dataclass
class BenchConfig:
    algorithms: list[AlgorithmKind] = field(default_factory=lambda: list(AlgorithmKind))
    semantics: TransformKind = TransformKind.KAPPA
    timeout: float = 10.0  # seconds per cell
    seed: int = 0
    files: list[Path] = field(default_factory=list)
    generator: GeneratorConfig | None = None
    scatter: tuple[AlgorithmKind, AlgorithmKind] = (AlgorithmKind.MINIMIZE, AlgorithmKind.SPLIT)
    workers: int = 1

    def __post_init__(self):
        self.algorithms = [AlgorithmKind(a) for a in self.algorithms]
        self.semantics = TransformKind(self.semantics)
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not self.files and self.generator is None:
            self.generator = GeneratorConfig()


@dataclass
class Cell:
    instance: str
    algorithm: str
    outcome: str
    elapsed: float
    stats: dict | None = None
    model: list[str] | None = None
    gap: list[str] | None = None
    audited: bool | None = None  # post-hoc paracoherence check of a solved cell


@dataclass
class BenchReport:
    semantics: str
    instances: list[str]
    algorithms: list[str]
    timeout: float
    cells: list[Cell]

    @property
    def solved(self) -> dict[str, int]:
        counts = {a: 0 for a in self.algorithms}
        for c in self.cells:
            if c.outcome == SOLVED:
                counts[c.algorithm] += 1
        return counts

    def cell(self, instance: str, algorithm: str) -> Cell:
        return next(c for c in self.cells if c.instance == instance and c.algorithm == algorithm)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "semantics": self.semantics,
            "timeout": self.timeout,
            "instances": self.instances,
            "algorithms": self.algorithms,
            "solved": self.solved,
            "cells": [asdict(c) for c in self.cells],
        }

    def scatter_rows(self, x: AlgorithmKind | str, y: AlgorithmKind | str) -> list[tuple[str, float, float]]:
        """(instance, x time, y time); unsolved cells are charged the timeout."""
        x, y = AlgorithmKind(x).value, AlgorithmKind(y).value

        def charged(c: Cell) -> float:
            return c.elapsed if c.outcome == SOLVED else self.timeout

        return [(i, charged(self.cell(i, x)), charged(self.cell(i, y))) for i in self.instances]

    def scatter_csv(self, x: AlgorithmKind | str, y: AlgorithmKind | str) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["instance", AlgorithmKind(x).value, AlgorithmKind(y).value])
        for row in self.scatter_rows(x, y):
            writer.writerow([row[0], f"{row[1]:.6f}", f"{row[2]:.6f}"])
        return out.getvalue()

    def summary(self) -> str:
        width = max(len(a) for a in self.algorithms)
        lines = [f"{len(self.instances)} instances, semantics={self.semantics}, timeout={self.timeout}s"]
        for algorithm, n in self.solved.items():
            lines.append(f"  {algorithm:<{width}}  solved {n}")
        return "\n".join(lines)


def generate_instances(gen: GeneratorConfig, seed: int) -> list[tuple[str, Program]]:
    instances = []
    for k in range(gen.max_tries):
        if len(instances) == gen.count:
            break
        params = RandomParams(gen.atoms, gen.rules, gen.max_head, gen.max_body, gen.neg_prob,
                              seed=seed * 1_000_003 + k)
        program = random_program(params)
        if gen.incoherent_only and first_answer_set(program) is not None:
            continue
        instances.append((f"gen-{seed}-{k}", program))
    return instances


def load_instances(cfg: BenchConfig) -> list[tuple[str, Program]]:
    instances = []
    for path in cfg.files:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ValueError(f"cannot read instance {path}: {exc}") from exc
        instances.append((path.stem, parse(text)))
    if cfg.generator is not None:
        instances += generate_instances(cfg.generator, cfg.seed)
    return instances


def _run_cell(args) -> Cell:
    name, text, semantics, algorithm, timeout, seed = args
    tp = transform(parse(text), semantics)
    started = time.perf_counter()
    try:
        result = run_algorithm(tp, algorithm, seed=seed, timeout=timeout)
    except SolveTimeout:
        return Cell(name, algorithm, TIMEOUT, time.perf_counter() - started)
    except NoParacoherentModel:
        return Cell(name, algorithm, NO_MODEL, time.perf_counter() - started)
    elapsed = time.perf_counter() - started
    return Cell(
        name, algorithm, SOLVED, elapsed,
        stats=result.stats.as_dict(),
        model=sorted(result.names(tp)),
        gap=sorted(result.gap_names(tp)),
        audited=is_paracoherent(tp, result.answer_set),
    )


def run_bench(cfg: BenchConfig) -> BenchReport:
    instances = load_instances(cfg)
    jobs = [
        (name, str(program), cfg.semantics.value, algorithm.value, cfg.timeout, None)
        for name, program in instances
        for algorithm in cfg.algorithms
    ]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            cells = list(pool.map(_run_cell, jobs))
    else:
        cells = [_run_cell(job) for job in jobs]
    return BenchReport(
        semantics=cfg.semantics.value,
        instances=[name for name, _ in instances],
        algorithms=[a.value for a in cfg.algorithms],
        timeout=cfg.timeout,
        cells=cells,
    )


def write_report(report: BenchReport, out_dir: Path, scatter: tuple = (AlgorithmKind.MINIMIZE, AlgorithmKind.SPLIT)):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(json.dumps(report.to_dict(), indent=2), encoding="utf-8")
    x, y = scatter
    if {AlgorithmKind(x).value, AlgorithmKind(y).value} <= set(report.algorithms):
        (out_dir / "scatter.csv").write_text(report.scatter_csv(x, y), encoding="utf-8")


# --------------------------------------------------------------------------- transformation sizes

@dataclass(frozen=True)
class SizeRow:
    instance: str
    atoms: int
    rules: int
    kappa_atoms: int
    kappa_rules: int
    ht_atoms: int
    ht_rules: int


def report_transform_sizes(instances: list[tuple[str, Program]]) -> list[SizeRow]:
    rows = []
    for name, program in instances:
        kappa = transform(program, TransformKind.KAPPA).program
        ht = transform(program, TransformKind.HT).program
        rows.append(SizeRow(name, len(program.atoms), len(program.rules),
                            len(kappa.atoms), len(kappa.rules), len(ht.atoms), len(ht.rules)))
    return rows


def size_ratio(rows: list[SizeRow]) -> float | None:
    """mean(HT rules) / mean(kappa rules), both counted with the gap rules."""
    if not rows:
        return None
    return mean(r.ht_rules for r in rows) / mean(r.kappa_rules for r in rows)


def format_size_table(rows: list[SizeRow]) -> str:
    header = ("instance", "P atoms", "P rules", "Pk+Pg atoms", "Pk+Pg rules", "Pht+Pg atoms", "Pht+Pg rules")
    body = [(r.instance, r.atoms, r.rules, r.kappa_atoms, r.kappa_rules, r.ht_atoms, r.ht_rules) for r in rows]
    if rows:
        body.append(("avg",) + tuple(f"{mean(col):.1f}" for col in list(zip(*body))[1:]))
    widths = [max(len(str(x)) for x in col) for col in zip(header, *body)]
    lines = ["  ".join(str(x).rjust(w) for x, w in zip(row, widths)) for row in [header, *body]]
    ratio = size_ratio(rows)
    if ratio is not None:
        lines.append(f"HT/kappa rule ratio: {ratio:.2f}")
    return "\n".join(lines)
