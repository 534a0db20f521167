"""Print small incoherent programs: transformations, answer sets, gaps and every algorithm's result."""

from pathlib import Path

from paracoherent.algorithms import AlgorithmKind, enumerate_all, is_paracoherent, run_algorithm
from paracoherent.engine import EnumerationState
from paracoherent.program import format_program, parse
from paracoherent.transform import TransformKind, transform

DATA = Path(__file__).resolve().parent.parent / "data"


def show(tp, m):
    return "{" + ", ".join(sorted(tp.signature.names(m))) + "}"


def report(path: Path, kind: TransformKind):
    tp = transform(parse(path.read_text()), kind)
    print(f"== {path.name} ({kind.value})")
    print(format_program(tp.program))
    print("answer sets:")
    for m in EnumerationState(tp.program):
        print(f"  {show(tp, m)}  paracoherent={is_paracoherent(tp, m)}")
    print("paracoherent models:", ", ".join(show(tp, r.model) for r in enumerate_all(tp)))
    for algorithm in AlgorithmKind:
        r = run_algorithm(tp, algorithm)
        print(f"  {algorithm.value:<9} {show(tp, r.model)}  gap={show(tp, r.gap)}  "
              f"calls={r.stats.solver_calls}")
    print()


if __name__ == "__main__":
    report(DATA / "odd_cycle.lp", TransformKind.KAPPA)
    report(DATA / "odd_cycle.lp", TransformKind.HT)
    report(DATA / "uneven_gaps.lp", TransformKind.HT)
