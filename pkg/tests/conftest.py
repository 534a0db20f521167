import random
import time
from dataclasses import dataclass, field

import pytest

from paracoherent.algorithms import ALGORITHMS, NoParacoherentModel, enumerate_all, is_paracoherent
from paracoherent.engine import EnumerationState
from paracoherent.oracle import OracleView, RandomParams, oracle_answer_sets, random_program
from paracoherent.program import Program, parse
from paracoherent.transform import TransformKind, TransformedProgram, transform

ODD_CYCLE = """
b :- not a.
c :- not b.
a :- c.
d :- not d.
"""

# incoherent, with semi-equilibrium models {b, Kd} and {Ka, Kc}
UNEVEN_GAPS = """
b :- not a.
c :- a.
d :- b, not d.
"""


@pytest.fixture
def odd_cycle() -> Program:
    return parse(ODD_CYCLE)


@pytest.fixture
def uneven_gaps() -> Program:
    return parse(UNEVEN_GAPS)


@pytest.fixture
def pi_odd() -> TransformedProgram:
    return transform(parse(ODD_CYCLE), TransformKind.KAPPA)


def named(tp, models):
    return {frozenset(tp.signature.names(m)) for m in models}


# --------------------------------------------------------------------------- random suite

SUITE_INCOHERENT = 250
SUITE_COHERENT = 250


def suite_params(k: int) -> RandomParams:
    rng = random.Random(k)
    return RandomParams(
        atoms=rng.randint(2, 6),
        rules=rng.randint(1, 10),
        max_head=rng.choice([1, 2, 2, 3]),
        max_body=3,
        neg_prob=rng.choice([0.2, 0.5, 0.8]),
        constraint_prob=0.1,
        seed=k,
    )


def suite_programs(incoherent: int = SUITE_INCOHERENT, coherent: int = SUITE_COHERENT):
    """(seed, program, oracle AS(P)) with the requested number of each kind."""
    out, need = [], {False: incoherent, True: coherent}
    k = 0
    while need[False] or need[True]:
        program = random_program(suite_params(k))
        answer_sets = oracle_answer_sets(program)
        if need[bool(answer_sets)]:
            need[bool(answer_sets)] -= 1
            out.append((k, program, answer_sets))
        k += 1
    return out


@dataclass
class SemanticsRun:
    tp: TransformedProgram
    oracle: OracleView
    engine: set
    enumerated: list
    results: dict  # algorithm -> ParacoherentResult | None
    checks: dict = field(default_factory=dict)  # answer set -> is_paracoherent


@dataclass
class SuiteCase:
    seed: int
    program: Program
    answer_sets: set  # oracle AS(P)
    runs: dict  # TransformKind -> SemanticsRun


def run_case(seed, program, answer_sets) -> SuiteCase:
    runs = {}
    for kind in TransformKind:
        tp = transform(program, kind)
        view = OracleView(tp, oracle_answer_sets(tp.program))
        results = {}
        for algorithm, fn in ALGORITHMS.items():
            try:
                results[algorithm] = fn(tp)
            except NoParacoherentModel:
                results[algorithm] = None
        run = SemanticsRun(tp, view, set(EnumerationState(tp.program)), enumerate_all(tp), results)
        run.checks = {m: is_paracoherent(tp, m) for m in view.answer_sets}
        runs[kind] = run
    return SuiteCase(seed, program, answer_sets, runs)


@dataclass
class Suite:
    cases: list
    elapsed: float


@pytest.fixture(scope="session")
def suite() -> Suite:
    started = time.perf_counter()
    cases = [run_case(*item) for item in suite_programs()]
    return Suite(cases, time.perf_counter() - started)


# --------------------------------------------------------------------------- acceptance summary

def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")
    config._criteria = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    failed = call.excinfo is not None and call.when in ("setup", "call")
    criteria = item.config._criteria
    if call.when == "setup" or n not in criteria:
        criteria.setdefault(n, [title, True])
    if failed:
        criteria[n][1] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    criteria = getattr(config, "_criteria", {})
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(criteria):
        title, ok = criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
