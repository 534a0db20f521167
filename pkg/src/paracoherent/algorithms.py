"""Computing paracoherent answer sets (semi-stable / semi-equilibrium models).

Every algorithm takes ``tp`` (a transformed program ``Pi = P^chi + P_g``) and
returns one answer set of ``Pi`` whose gap is subset-minimal, projected onto
the base and K atoms.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .engine import (
    EnumerationState, SolveStats, first_answer_set, optimum_answer_set,
)
from .program import Program, Rule
from .transform import (
    TransformedProgram, TransformKind, pi_m, project_paracoherent, transform,
    weak_gap_constraints,
)


class NoParacoherentModel(RuntimeError):
    """Pi has no answer set, i.e. the input program has no classical model."""


class AlgorithmKind(str, enum.Enum):
    FILTERING = "filtering"
    GUESS_CHECK = "gc"
    MINIMIZE = "minimize"
    SPLIT = "split"
    WEAK = "weak"


@dataclass
class ParacoherentResult:
    model: frozenset[int]  # base and K atoms only
    gap: frozenset[int]  # gap-marker atoms of the answer set
    semantics: TransformKind
    algorithm: AlgorithmKind | None
    stats: SolveStats
    answer_set: frozenset[int]  # the unprojected answer set of Pi
    details: dict = field(default_factory=dict)

    def names(self, tp: TransformedProgram) -> frozenset[str]:
        return tp.signature.names(self.model)

    def gap_names(self, tp: TransformedProgram) -> frozenset[str]:
        return tp.signature.names(self.gap)


class _Run:
    """Solver-call bookkeeping shared by the algorithms."""

    def __init__(self, tp: TransformedProgram, seed: int | None, timeout: float | None):
        self.tp = tp
        self.seed = seed
        self.started = time.perf_counter()
        self.deadline = None if timeout is None else time.monotonic() + timeout
        self.stats = SolveStats()

    def solve(self, program: Program) -> frozenset[int] | None:
        m = first_answer_set(program, seed=self.seed, deadline=self.deadline, stats=self.stats)
        if m is not None:
            self.stats.models_enumerated += 1
        return m

    def enumeration(self) -> EnumerationState:
        return EnumerationState(self.tp.program, seed=self.seed, deadline=self.deadline,
                                stats=self.stats)

    def result(self, m: frozenset[int] | None, algorithm: AlgorithmKind, **details) -> ParacoherentResult:
        self.stats.elapsed = time.perf_counter() - self.started
        if m is None:
            raise NoParacoherentModel("the transformed program has no answer set")
        return ParacoherentResult(
            model=project_paracoherent(m, self.tp),
            gap=self.tp.gap_of(m),
            semantics=self.tp.kind,
            algorithm=algorithm,
            stats=self.stats,
            answer_set=m,
            details=details,
        )


def is_paracoherent(tp: TransformedProgram, m: frozenset[int], *,
                    stats: SolveStats | None = None, seed: int | None = None,
                    deadline: float | None = None) -> bool:
    """One solver call: ``m`` is paracoherent iff Pi plus Pi_M is incoherent.

    An empty gap needs no call. Pi_M then carries the empty-body constraint,
    which ``pi_m`` leaves out, so the check is incoherent by construction.
    """
    if not tp.gap_of(m):
        return True
    check = tp.program.extend(pi_m(tp, m))
    return first_answer_set(check, seed=seed, deadline=deadline, stats=stats) is None


def filtering(tp: TransformedProgram, *, seed: int | None = None,
              timeout: float | None = None) -> ParacoherentResult:
    run = _Run(tp, seed, timeout)
    state = run.enumeration()
    best = state.next()
    if best is not None:
        best_gap = tp.gap_of(best)
        for m in state:
            gap = tp.gap_of(m)
            if gap < best_gap:
                best, best_gap = m, gap
    return run.result(best, AlgorithmKind.FILTERING)


def guess_check(tp: TransformedProgram, *, seed: int | None = None,
                timeout: float | None = None) -> ParacoherentResult:
    run = _Run(tp, seed, timeout)
    state = run.enumeration()
    guesses = checks = 0
    for m in state:
        guesses += 1
        checks += 1
        if is_paracoherent(tp, m, stats=run.stats, seed=seed, deadline=run.deadline):
            return run.result(m, AlgorithmKind.GUESS_CHECK, guesses=guesses, checks=checks)
    return run.result(None, AlgorithmKind.GUESS_CHECK)


def minimize(tp: TransformedProgram, *, seed: int | None = None,
             timeout: float | None = None) -> ParacoherentResult:
    run = _Run(tp, seed, timeout)
    program = tp.program
    m = run.solve(program)
    iterations = 0
    while m is not None:
        iterations += 1
        if not tp.gap_of(m):
            break
        program = program.extend(pi_m(tp, m))
        smaller = run.solve(program)
        if smaller is None:
            break
        m = smaller
    return run.result(m, AlgorithmKind.MINIMIZE, iterations=iterations)


def lowest_id(candidates: frozenset[int]) -> int:
    return min(candidates)


def random_choice(seed: int | None) -> Callable[[frozenset[int]], int]:
    rng = random.Random(seed)
    return lambda candidates: rng.choice(sorted(candidates))


def split(tp: TransformedProgram, *, seed: int | None = None, timeout: float | None = None,
          one_of: Callable[[frozenset[int]], int] = lowest_id) -> ParacoherentResult:
    run = _Run(tp, seed, timeout)
    program = tp.program
    m = run.solve(program)
    if m is None:
        return run.result(None, AlgorithmKind.SPLIT)
    candidates = tp.gap_of(m)
    asserted: list[int] = []
    improvements = 0
    restricted_for = None
    while candidates:
        if restricted_for is not m:
            program = program.extend(pi_m(tp, m))
            restricted_for = m
        a = one_of(candidates)
        smaller = run.solve(program.extend([Rule(frozenset(), frozenset([a]))]))
        if smaller is None:
            program = program.extend([Rule(frozenset(), frozenset(), frozenset([a]))])
            asserted.append(a)
            candidates = candidates - {a}
        else:
            improvements += 1
            m = smaller
            candidates = tp.gap_of(m)
    return run.result(m, AlgorithmKind.SPLIT, asserted=tuple(asserted), improvements=improvements)


def weak_method(tp: TransformedProgram, *, seed: int | None = None,
                timeout: float | None = None) -> ParacoherentResult:
    run = _Run(tp, seed, timeout)
    program = tp.program.extend(weak=weak_gap_constraints(tp))
    m = optimum_answer_set(program, seed=seed, deadline=run.deadline, stats=run.stats)
    result = run.result(m, AlgorithmKind.WEAK)
    result.details["cost"] = len(result.gap)
    return result


ALGORITHMS: dict[AlgorithmKind, Callable[..., ParacoherentResult]] = {
    AlgorithmKind.FILTERING: filtering,
    AlgorithmKind.GUESS_CHECK: guess_check,
    AlgorithmKind.MINIMIZE: minimize,
    AlgorithmKind.SPLIT: split,
    AlgorithmKind.WEAK: weak_method,
}


def run_algorithm(tp: TransformedProgram, algorithm: AlgorithmKind | str, **kwargs) -> ParacoherentResult:
    return ALGORITHMS[AlgorithmKind(algorithm)](tp, **kwargs)


def enumerate_all(tp: TransformedProgram, *, seed: int | None = None,
                  timeout: float | None = None) -> list[ParacoherentResult]:
    """Every paracoherent answer set: answer sets of Pi with a subset-minimal gap, projected.

    Results are deduplicated on the projected model and sorted by atom ids.
    """
    run = _Run(tp, seed, timeout)
    found = list(run.enumeration())
    run.stats.elapsed = time.perf_counter() - run.started
    gaps = [tp.gap_of(m) for m in found]
    results: dict[frozenset[int], ParacoherentResult] = {}
    for m, gap in zip(found, gaps):
        if any(other < gap for other in gaps):
            continue
        model = project_paracoherent(m, tp)
        if model not in results:
            results[model] = ParacoherentResult(model, gap, tp.kind, None, run.stats, m)
    return [results[k] for k in sorted(results, key=sorted)]


def paracoherent_models(program: Program, semantics: TransformKind | str = TransformKind.KAPPA,
                        **kwargs) -> set[frozenset[str]]:
    """SST (kappa) or SEQ (ht) of ``program`` as sets of atom names."""
    tp = transform(program, semantics)
    return {r.names(tp) for r in enumerate_all(tp, **kwargs)}
