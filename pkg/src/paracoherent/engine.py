"""Answer-set search for ground disjunctive programs.

The search is chronological backtracking over atoms in a fixed order (positive
branch first). Two propagators run at every node:

* clause propagation: each rule read as the clause ``H | -B+ | B-``;
* support propagation: a true atom needs a rule with a true body whose only
  true head atom it is; an atom without any such candidate rule is false.

Complete assignments that survive are models in which every true atom is
supported. They become answer sets after the reduct minimality check.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator

from .program import Program, Rule

_CHECK_EVERY = 256


class SolveTimeout(RuntimeError):
    pass


@dataclass
class SolveStats:
    solver_calls: int = 0
    models_enumerated: int = 0
    elapsed: float = 0.0
    peak_program_size: int = 0
    decisions: int = 0
    backtracks: int = 0

    def note_program(self, size: int):
        self.peak_program_size = max(self.peak_program_size, size)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Reduct:
    rules: tuple[Rule, ...]


def gl_reduct(program: Program, interpretation: Iterable[int]) -> Reduct:
    i = frozenset(interpretation)
    return Reduct(tuple(
        Rule(r.head, r.positive_body) for r in program.rules if not (r.negative_body & i)
    ))


def _rules(p: Program | Reduct | Iterable[Rule]) -> Iterable[Rule]:
    if isinstance(p, (Program, Reduct)):
        return p.rules
    return p


def is_model(p: Program | Reduct | Iterable[Rule], interpretation: Iterable[int]) -> bool:
    i = frozenset(interpretation)
    return all(
        (r.head & i) or not (r.positive_body <= i) or (r.negative_body & i)
        for r in _rules(p)
    )


def _has_smaller_model(rules: Iterable[Rule], m: frozenset[int]) -> bool:
    """True iff some proper subset of ``m`` is a model of the positive ``rules``.

    Atoms outside ``m`` are fixed false; constraints are dropped because any
    subset of a model of a positive constraint satisfies it too.
    """
    if not m:
        return False
    clauses = []
    for r in rules:
        if not r.head or not (r.positive_body <= m):
            continue
        head = r.head & m
        clauses.append([(h, 1) for h in sorted(head)] + [(b, 0) for b in sorted(r.positive_body)])
    clauses.append([(x, 0) for x in sorted(m)])
    return _dpll(clauses, sorted(m), {})


def _dpll(clauses: list, variables: list[int], assignment: dict[int, int]) -> bool:
    assignment = dict(assignment)
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            free = None
            n_free = 0
            for atom, want in clause:
                v = assignment.get(atom)
                if v is None:
                    n_free += 1
                    free = (atom, want)
                elif v == want:
                    break
            else:
                if n_free == 0:
                    return False
                if n_free == 1:
                    assignment[free[0]] = free[1]
                    changed = True
    for x in variables:
        if x not in assignment:
            # smallest id first, tried as removed (false) before kept
            assignment[x] = 0
            if _dpll(clauses, variables, assignment):
                return True
            assignment[x] = 1
            return _dpll(clauses, variables, assignment)
    return True


def is_minimal_model(p: Program | Reduct | Iterable[Rule], interpretation: Iterable[int]) -> bool:
    rules = list(_rules(p))
    if any(r.negative_body for r in rules):
        raise ValueError("minimality check needs a positive program")
    m = frozenset(interpretation)
    if not is_model(rules, m):
        raise ValueError("interpretation is not a model")
    return not _has_smaller_model(rules, m)


def is_answer_set(program: Program, interpretation: Iterable[int]) -> bool:
    m = frozenset(interpretation)
    if not is_model(program, m):
        return False
    return not _has_smaller_model(gl_reduct(program, m).rules, m)


def violated_weak(program: Program, interpretation: Iterable[int]) -> int:
    i = frozenset(interpretation)
    return sum(w.violated_by(i) for w in program.weak)


def branching_order(n: int, seed: int | None) -> list[int]:
    order = list(range(n))
    if seed is not None:
        random.Random(seed).shuffle(order)
    return order


class _Search:
    """Compiled program plus the DFS. Rules may be appended between runs."""

    def __init__(self, program: Program, order: list[int], *, stable: bool = True,
                 deadline: float | None = None, stats: SolveStats | None = None):
        self.n = len(program.signature)
        self.order = order
        self.stable = stable
        self.deadline = deadline
        self.stats = stats if stats is not None else SolveStats()
        self.heads: list[tuple[int, ...]] = []
        self.pos: list[tuple[int, ...]] = []
        self.neg: list[tuple[int, ...]] = []
        self.source: list[Rule] = []
        self.occ: list[list[int]] = [[] for _ in range(self.n)]
        self.sup: list[list[int]] = [[] for _ in range(self.n)]
        for rule in program.rules:
            self.add_rule(rule)
        self.weak = [(tuple(w.positive_body), tuple(w.negative_body)) for w in program.weak]

    def add_rule(self, rule: Rule):
        r = len(self.heads)
        self.heads.append(tuple(sorted(rule.head)))
        self.pos.append(tuple(sorted(rule.positive_body)))
        self.neg.append(tuple(sorted(rule.negative_body)))
        self.source.append(rule)
        for a in rule.atoms:
            self.occ[a].append(r)
        for a in rule.head:
            self.sup[a].append(r)

    # ------------------------------------------------------------------ propagation

    def _propagate(self, val: list[int], trail: list[int], queue: list[int]) -> bool:
        heads, pos, neg, occ, sup = self.heads, self.pos, self.neg, self.occ, self.sup
        stable = self.stable

        def assign(atom: int, value: int) -> bool:
            v = val[atom]
            if v == -1:
                val[atom] = value
                trail.append(atom)
                queue.append(atom)
                return True
            return v == value

        def check_support(h: int) -> bool:
            cand = -1
            count = 0
            for s in sup[h]:
                blocked = False
                for b in pos[s]:
                    if val[b] == 0:
                        blocked = True
                        break
                if blocked:
                    continue
                for b in neg[s]:
                    if val[b] == 1:
                        blocked = True
                        break
                if blocked:
                    continue
                for o in heads[s]:
                    if o != h and val[o] == 1:
                        blocked = True
                        break
                if blocked:
                    continue
                count += 1
                cand = s
                if count > 1:
                    return True
            if count == 0:
                return assign(h, 0)
            if val[h] == 1:
                for b in pos[cand]:
                    if not assign(b, 1):
                        return False
                for b in neg[cand]:
                    if not assign(b, 0):
                        return False
                for o in heads[cand]:
                    if o != h and not assign(o, 0):
                        return False
            return True

        def check_rule(r: int) -> bool:
            n_free = 0
            free_atom = free_val = -1
            for a in heads[r]:
                v = val[a]
                if v == 1:
                    return True
                if v == -1:
                    n_free += 1
                    free_atom, free_val = a, 1
            for a in pos[r]:
                v = val[a]
                if v == 0:
                    return True
                if v == -1:
                    n_free += 1
                    free_atom, free_val = a, 0
            for a in neg[r]:
                v = val[a]
                if v == 1:
                    return True
                if v == -1:
                    n_free += 1
                    free_atom, free_val = a, 1
            if n_free == 0:
                return False
            if n_free == 1:
                return assign(free_atom, free_val)
            return True

        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            for r in occ[x]:
                if not check_rule(r):
                    return False
                if stable:
                    for h in heads[r]:
                        if val[h] != 0 and not check_support(h):
                            return False
            if stable and val[x] == 1 and not check_support(x):
                return False
        queue.clear()
        return True

    def _initial(self, val: list[int], trail: list[int]) -> bool:
        # every rule and every atom's support gets scanned once
        return self._propagate(val, trail, list(range(self.n)))

    def _cost(self, val: list[int]) -> int:
        cost = 0
        for pos, neg in self.weak:
            if all(val[a] == 1 for a in pos) and all(val[a] == 0 for a in neg):
                cost += 1
        return cost

    def _is_stable(self, m: frozenset[int]) -> bool:
        reduct = [
            r for r, neg in zip(self.source, self.neg) if not any(a in m for a in neg)
        ]
        return not _has_smaller_model(reduct, m)

    # ------------------------------------------------------------------ search

    def models(self, bound: int | None = None) -> Iterator[frozenset[int]]:
        """Answer sets (classical models when ``stable`` is off) in DFS order.

        With ``bound`` set, only models violating fewer weak constraints are produced.
        """
        stats = self.stats
        val = [-1] * self.n
        trail: list[int] = []
        decisions: list[tuple[int, int, bool]] = []
        nodes = 0
        ok = self._initial(val, trail)
        order = self.order
        queue: list[int] = []
        while True:
            nodes += 1
            if self.deadline is not None and nodes % _CHECK_EVERY == 0 \
                    and time.monotonic() > self.deadline:
                raise SolveTimeout("deadline reached during search")
            if ok and bound is not None and self.weak and self._cost(val) >= bound:
                ok = False
            if ok:
                x = next((a for a in order if val[a] == -1), None)
                if x is None:
                    m = frozenset(a for a in range(self.n) if val[a] == 1)
                    if not self.stable or self._is_stable(m):
                        yield m
                    ok = False
                else:
                    stats.decisions += 1
                    decisions.append((len(trail), x, False))
                    val[x] = 1
                    trail.append(x)
                    queue.append(x)
                    ok = self._propagate(val, trail, queue)
                    continue
            # backtrack to the latest decision with an untried branch
            queue.clear()
            while decisions and decisions[-1][2]:
                decisions.pop()
            if not decisions:
                return
            stats.backtracks += 1
            mark, x, _ = decisions.pop()
            for a in trail[mark:]:
                val[a] = -1
            del trail[mark:]
            decisions.append((mark, x, True))
            val[x] = 0
            trail.append(x)
            queue.append(x)
            ok = self._propagate(val, trail, queue)


def _deadline_from(timeout: float | None) -> float | None:
    return None if timeout is None else time.monotonic() + timeout


def first_answer_set(program: Program, *, seed: int | None = None, deadline: float | None = None,
                     stats: SolveStats | None = None) -> frozenset[int] | None:
    """One solver call: the first answer set in search order, or None."""
    search = _Search(program, branching_order(len(program.signature), seed),
                     deadline=deadline, stats=stats)
    if stats is not None:
        stats.solver_calls += 1
        stats.note_program(len(program.rules))
    return next(search.models(), None)


def answer_sets(program: Program, *, seed: int | None = None,
                deadline: float | None = None) -> Iterator[frozenset[int]]:
    """All answer sets in one DFS pass (no blocking constraints)."""
    search = _Search(program, branching_order(len(program.signature), seed), deadline=deadline)
    yield from search.models()


def has_classical_model(program: Program) -> bool:
    search = _Search(program, list(range(len(program.signature))), stable=False)
    return next(search.models(), None) is not None


def blocking_constraint(program: Program, m: Iterable[int]) -> Rule:
    """Constraint whose body is the complete literal description of ``m`` over At(program)."""
    m = frozenset(m)
    atoms = program.atoms
    return Rule(frozenset(), atoms & m, atoms - m)


@dataclass
class EnumerationState:
    """Stateful ``nextAnswerSet``: every emitted model is blocked before the next call.

    Each call is one solver call over the base program plus the accumulated
    blocking constraints, so the emission order is determined by the program,
    the seed and the number of previous calls.
    """

    program: Program
    seed: int | None = None
    deadline: float | None = None
    stats: SolveStats = field(default_factory=SolveStats)
    blocks: list[Rule] = field(default_factory=list)
    exhausted: bool = False

    def __post_init__(self):
        self._search = _Search(self.program, branching_order(len(self.program.signature), self.seed),
                               deadline=self.deadline, stats=self.stats)

    def blocked_program(self) -> Program:
        return self.program.extend(self.blocks)

    def next(self) -> frozenset[int] | None:
        if self.exhausted:
            return None
        self.stats.solver_calls += 1
        self.stats.note_program(len(self.program.rules) + len(self.blocks))
        m = next(self._search.models(), None)
        if m is None:
            self.exhausted = True
            return None
        block = blocking_constraint(self.program, m)
        self.blocks.append(block)
        self._search.add_rule(block)
        self.stats.models_enumerated += 1
        return m

    def __iter__(self) -> Iterator[frozenset[int]]:
        while (m := self.next()) is not None:
            yield m


def next_answer_set(state: EnumerationState) -> frozenset[int] | None:
    return state.next()


def optimum_answer_set(program: Program, *, seed: int | None = None, deadline: float | None = None,
                       stats: SolveStats | None = None) -> frozenset[int] | None:
    """Answer set minimising the number of violated weak constraints.

    Iterative bound tightening: each round is one solver call that prunes any
    branch whose already-violated count reaches the best cost so far.
    """
    search = _Search(program.without_weak(), branching_order(len(program.signature), seed),
                     deadline=deadline, stats=stats)
    search.weak = [(tuple(w.positive_body), tuple(w.negative_body)) for w in program.weak]
    best = None
    bound = None
    while True:
        if stats is not None:
            stats.solver_calls += 1
            stats.note_program(len(program.rules) + len(program.weak))
        m = next(search.models(bound), None)
        if m is None:
            return best
        best = m
        if stats is not None:
            stats.models_enumerated += 1
        bound = violated_weak(program, m)
        if bound == 0:
            return best

