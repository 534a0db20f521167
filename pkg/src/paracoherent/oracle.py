"""Reference computations used to certify the search engine.

Nothing here shares code with :mod:`paracoherent.engine`. Three routes:

* exhaustive: every interpretation over At(P) is checked (numpy bit masks),
  minimality of the reduct by checking every proper subset;
* sat: minimal models enumerated with a SAT solver (pysat), then filtered by a
  SAT-checked reduct minimality test. Used when At(P) is too large for the
  exhaustive route;
* ht: semi-equilibrium models straight from here-and-there models of the
  source program, without going through any program transformation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from pysat.solvers import Solver

from .program import Program, parse
from .transform import K_PREFIX, TransformKind, transform


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_atoms: int = 16  # exhaustive route
    max_interpretations: int = 1 << 16
    sat_max_atoms: int = 512
    max_models: int = 200_000

    def exhaustive_ok(self, n_atoms: int) -> bool:
        return n_atoms <= self.max_atoms and (1 << n_atoms) <= self.max_interpretations


DEFAULT_BUDGET = OracleBudget()


# --------------------------------------------------------------------------- exhaustive route

def _masks(program: Program, index: dict[int, int]):
    def mask(atoms):
        m = 0
        for a in atoms:
            m |= 1 << index[a]
        return m

    return [(mask(r.head), mask(r.positive_body), mask(r.negative_body)) for r in program.rules]


def _submasks(m: int) -> np.ndarray:
    subs = np.zeros(1, dtype=np.int64)
    bit = 0
    while m >> bit:
        if (m >> bit) & 1:
            subs = np.concatenate([subs, subs | (1 << bit)])
        bit += 1
    return subs


def _satisfied(space: np.ndarray, rules) -> np.ndarray:
    ok = np.ones(space.shape, dtype=bool)
    for head, pos, neg in rules:
        fired = ((space & pos) == pos) & ((space & neg) == 0)
        ok &= ~fired | ((space & head) != 0)
    return ok


def _minimal(is_model: np.ndarray, n: int) -> np.ndarray:
    """Mask of interpretations that are models with no model among their proper subsets."""
    below = is_model.copy()  # below[m]: some subset of m (m included) is a model
    space = np.arange(1 << n, dtype=np.int64)
    for bit in range(n):
        has = (space >> bit) & 1 == 1
        below[has] |= below[space[has] ^ (1 << bit)]
    proper = np.zeros_like(is_model)
    for bit in range(n):
        has = (space >> bit) & 1 == 1
        proper[has] |= below[space[has] ^ (1 << bit)]
    return is_model & ~proper


def _exhaustive_answer_sets(program: Program) -> set[frozenset[int]]:
    atoms = sorted(program.atoms)
    index = {a: i for i, a in enumerate(atoms)}
    rules = _masks(program, index)
    space = np.arange(1 << len(atoms), dtype=np.int64)
    found = set()
    # answer sets are minimal models of the program itself, so only those are checked
    for m in space[_minimal(_satisfied(space, rules), len(atoms))].tolist():
        reduct = [(h, p, 0) for h, p, n in rules if not (n & m)]
        subs = _submasks(m)
        subs = subs[subs != m]
        if subs.size and _satisfied(subs, reduct).any():
            continue
        found.add(frozenset(a for a in atoms if (m >> index[a]) & 1))
    return found


def _exhaustive_models(program: Program) -> set[frozenset[int]]:
    atoms = sorted(program.atoms)
    index = {a: i for i, a in enumerate(atoms)}
    space = np.arange(1 << len(atoms), dtype=np.int64)
    hits = space[_satisfied(space, _masks(program, index))].tolist()
    return {frozenset(a for a in atoms if (m >> index[a]) & 1) for m in hits}


# --------------------------------------------------------------------------- sat route

def _clauses(rules, var):
    return [[var(h) for h in r.head] + [-var(b) for b in r.positive_body] + [var(b) for b in r.negative_body]
            for r in rules]


def _sat_answer_sets(program: Program, budget: OracleBudget) -> set[frozenset[int]]:
    atoms = sorted(program.atoms)
    var = {a: i + 1 for i, a in enumerate(atoms)}.__getitem__
    clauses = _clauses(program.rules, var)
    fresh = len(atoms)
    found = set()
    n_minimal = 0
    with Solver(name="m22", bootstrap_with=clauses) as solver:
        while solver.solve():
            true = {v for v in solver.get_model() if v > 0}
            model = frozenset(a for a in atoms if var(a) in true)
            while model:
                fresh += 1
                solver.add_clause([-fresh] + [-var(a) for a in model])
                outside = [-var(a) for a in atoms if a not in model]
                if not solver.solve(assumptions=[fresh] + outside):
                    solver.add_clause([-fresh])
                    break
                true = {v for v in solver.get_model() if v > 0}
                solver.add_clause([-fresh])
                model = frozenset(a for a in atoms if var(a) in true)
            n_minimal += 1
            if n_minimal > budget.max_models:
                raise BudgetExceeded(f"more than {budget.max_models} minimal models")
            if _stable_sat(program, model, atoms, var):
                found.add(model)
            if not model:
                break
            solver.add_clause([-var(a) for a in model])
    return found


def _stable_sat(program: Program, model: frozenset[int], atoms, var) -> bool:
    """Whether ``model`` is a minimal model of its reduct."""
    if not model:
        return True
    reduct = [r for r in program.rules if not (r.negative_body & model)]
    clauses = [[var(h) for h in r.head] + [-var(b) for b in r.positive_body] for r in reduct]
    clauses.append([-var(a) for a in model])
    with Solver(name="m22", bootstrap_with=clauses) as solver:
        return not solver.solve(assumptions=[-var(a) for a in atoms if a not in model])


# --------------------------------------------------------------------------- public oracle

def oracle_answer_sets(program: Program, budget: OracleBudget = DEFAULT_BUDGET, *,
                       method: str = "auto") -> set[frozenset[int]]:
    """AS(P) as sets of atom ids. ``method`` is "exhaustive", "sat" or "auto"."""
    n = len(program.atoms)
    if method == "auto":
        method = "exhaustive" if budget.exhaustive_ok(n) else "sat"
    if method == "exhaustive":
        if not budget.exhaustive_ok(n):
            raise BudgetExceeded(f"{n} atoms exceed the exhaustive budget of {budget.max_atoms}")
        return _exhaustive_answer_sets(program)
    if method == "sat":
        if n > budget.sat_max_atoms:
            raise BudgetExceeded(f"{n} atoms exceed the sat budget of {budget.sat_max_atoms}")
        return _sat_answer_sets(program, budget)
    raise ValueError(f"unknown oracle method {method!r}")


def oracle_models(program: Program, budget: OracleBudget = DEFAULT_BUDGET) -> set[frozenset[int]]:
    n = len(program.atoms)
    if not budget.exhaustive_ok(n):
        raise BudgetExceeded(f"{n} atoms exceed the exhaustive budget of {budget.max_atoms}")
    return _exhaustive_models(program)


def oracle_has_classical_model(program: Program, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    return bool(oracle_models(program, budget))


def oracle_is_coherent(program: Program, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    return bool(oracle_answer_sets(program, budget))


def minimal_gap_sets(gaps) -> set[frozenset[int]]:
    gaps = set(gaps)
    return {g for g in gaps if not any(o < g for o in gaps)}


@dataclass
class OracleView:
    """Oracle answer sets of a transformed program with their gap lattice."""

    tp: object
    answer_sets: set[frozenset[int]]

    def gap(self, m) -> frozenset[int]:
        return self.tp.gap_of(m)

    @property
    def gap_sets(self) -> set[frozenset[int]]:
        return {self.gap(m) for m in self.answer_sets}

    @property
    def minimal_gaps(self) -> set[frozenset[int]]:
        return minimal_gap_sets(self.gap_sets)

    def is_gap_minimal(self, m) -> bool:
        g = self.gap(m)
        return not any(o < g for o in self.gap_sets)

    def paracoherent(self) -> set[frozenset[str]]:
        keep = self.minimal_gaps
        sig = self.tp.signature
        return {
            sig.names(a for a in m if sig[a].kind in ("base", "k-marker"))
            for m in self.answer_sets if self.gap(m) in keep
        }

    @property
    def min_gap_size(self) -> int | None:
        return min((len(g) for g in self.gap_sets), default=None)


def oracle_view(program: Program, semantics: TransformKind | str,
                budget: OracleBudget = DEFAULT_BUDGET) -> OracleView:
    tp = transform(program, semantics)
    return OracleView(tp, oracle_answer_sets(tp.program, budget))


def oracle_sst(program: Program, budget: OracleBudget = DEFAULT_BUDGET) -> set[frozenset[str]]:
    return oracle_view(program, TransformKind.KAPPA, budget).paracoherent()


def oracle_seq(program: Program, budget: OracleBudget = DEFAULT_BUDGET) -> set[frozenset[str]]:
    return oracle_view(program, TransformKind.HT, budget).paracoherent()


def oracle_seq_ht(program: Program, budget: OracleBudget = DEFAULT_BUDGET) -> set[frozenset[str]]:
    """Semi-equilibrium models from h-minimal here-and-there models of ``program``.

    (X, Y) with X <= Y is an HT-model when Y is a model of P and X a model of
    the reduct P^Y; it is h-minimal when no X' < X gives an HT-model with the
    same Y. The answer is X + {K a | a in Y} for the h-minimal HT-models whose
    gap Y - X is subset-minimal.
    """
    atoms = sorted(program.atoms)
    if not budget.exhaustive_ok(len(atoms)):
        raise BudgetExceeded(f"{len(atoms)} atoms exceed the exhaustive budget")

    def satisfies(rules, i):
        return all((r.head & i) or not (r.positive_body <= i) or (r.negative_body & i) for r in rules)

    def subsets(items):
        for k in range(len(items) + 1):
            yield from (frozenset(c) for c in combinations(items, k))

    pairs = []
    for y in subsets(atoms):
        if not satisfies(program.rules, y):
            continue
        reduct = [r for r in program.rules if not (r.negative_body & y)]
        xs = [x for x in subsets(sorted(y))
              if all((r.head & x) or not (r.positive_body <= x) for r in reduct)]
        pairs += [(x, y) for x in xs if not any(o < x for o in xs)]
    gaps = minimal_gap_sets(y - x for x, y in pairs)
    name = program.signature.name
    return {
        frozenset(name(a) for a in x) | frozenset(K_PREFIX + name(a) for a in y)
        for x, y in pairs if y - x in gaps
    }


# --------------------------------------------------------------------------- random programs

@dataclass(frozen=True)
class RandomParams:
    atoms: int = 5
    rules: int = 8
    max_head: int = 2
    max_body: int = 2
    neg_prob: float = 0.5
    constraint_prob: float = 0.1
    seed: int = 0


def random_program(params: RandomParams) -> Program:
    """Deterministic random ground program; coherence is not guaranteed."""
    rng = random.Random(params.seed)
    names = [f"p{i}" for i in range(1, params.atoms + 1)]
    lines = []
    for _ in range(params.rules):
        if params.max_head == 0 or rng.random() < params.constraint_prob:
            head = []
        else:
            head = rng.sample(names, rng.randint(1, min(params.max_head, len(names))))
        size = rng.randint(0 if head else 1, min(params.max_body, len(names)))
        body = [("not " if rng.random() < params.neg_prob else "") + a for a in rng.sample(names, size)]
        text = " | ".join(head)
        if body:
            text += " :- " + ", ".join(body)
        lines.append(text.strip() + ".")
    return parse("\n".join(lines))
