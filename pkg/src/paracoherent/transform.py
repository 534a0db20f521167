"""Epistemic program transformations and the gap machinery built on top of them.

``kappa_transform`` and ``ht_transform`` return the program ``Pi = P^chi + P_g``
that every paracoherent algorithm consumes. Generated atoms use reserved names:
``k_<a>`` for belief atoms, ``gap_k_<a>`` for gap markers and
``lam_<rule>_<head>`` (1-based) for the fresh disjunction atoms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .program import (
    BASE, GAP_MARKER, K_MARKER, LAMBDA, Program, Rule, Signature, WeakConstraint,
)

K_PREFIX = "k_"
GAP_PREFIX = "gap_k_"
LAMBDA_PREFIX = "lam_"
RESERVED_PREFIXES = (K_PREFIX, GAP_PREFIX, LAMBDA_PREFIX)


class TransformError(ValueError):
    pass


class TransformKind(str, enum.Enum):
    KAPPA = "kappa"
    HT = "ht"


@dataclass(frozen=True, eq=False)
class TransformedProgram:
    program: Program  # P^chi followed by the gap rules
    kind: TransformKind
    source: Program
    base_atoms: frozenset[int]
    k_atom: dict[int, int]  # base id -> K id
    gap_atom: dict[int, int]  # base id -> gap id
    origin: tuple[int | None, ...]  # per rule of ``program``: source rule index, None if generated per atom
    n_epistemic: int  # rules[:n_epistemic] is P^chi

    @property
    def signature(self) -> Signature:
        return self.program.signature

    @property
    def gap_atoms(self) -> frozenset[int]:
        return frozenset(self.gap_atom.values())

    @property
    def lambda_atoms(self) -> frozenset[int]:
        return frozenset(a.id for a in self.signature if a.kind == LAMBDA)

    @property
    def epistemic_program(self) -> Program:
        return Program(self.signature, self.program.rules[: self.n_epistemic])

    def gap_of(self, interpretation: Iterable[int]) -> frozenset[int]:
        """gap(I): the gap-marker atoms contained in I."""
        gaps = self.gap_atoms
        return frozenset(a for a in interpretation if a in gaps)

    def belief_gap(self, interpretation: Iterable[int]) -> frozenset[int]:
        """The K-atoms Ka of I with a not in I."""
        interpretation = frozenset(interpretation)
        return frozenset(
            k for a, k in self.k_atom.items() if k in interpretation and a not in interpretation
        )


class _Builder:
    def __init__(self, program: Program):
        for atom in program.signature:
            if atom.name.startswith(RESERVED_PREFIXES):
                raise TransformError(f"atom name {atom.name!r} uses a reserved prefix")
            if atom.kind != BASE:
                raise TransformError(f"input atom {atom.name!r} is not a base atom")
        if program.weak:
            raise TransformError("weak constraints are not allowed in the input program")
        self.source = program
        self.signature = program.signature.copy()
        self.rules: list[Rule] = []
        self.origin: list[int | None] = []
        self.k_atom: dict[int, int] = {}
        self.gap_atom: dict[int, int] = {}

    def k(self, a: int) -> int:
        if a not in self.k_atom:
            self.k_atom[a] = _marker(self.signature, a, K_PREFIX, K_MARKER)
        return self.k_atom[a]

    def emit(self, origin: int | None, head=(), pos=(), neg=()):
        self.rules.append(Rule(frozenset(head), frozenset(pos), frozenset(neg)))
        self.origin.append(origin)

    def kappa(self):
        for index, rule in enumerate(self.source.rules):
            if not rule.negative_body:
                self.emit(index, rule.head, rule.positive_body)
                continue
            heads = sorted(rule.head)
            lams = [
                self.signature.add(f"{LAMBDA_PREFIX}{index + 1}_{pos + 1}", LAMBDA,
                                   provenance=(index, pos))
                for pos in range(len(heads))
            ]
            negs = sorted(rule.negative_body)
            # lam_1 | ... | lam_l | K b_{m+1} | ... | K b_n :- b_1, ..., b_m.
            self.emit(index, lams + [self.k(b) for b in negs], rule.positive_body)
            for a, lam in zip(heads, lams):
                self.emit(index, [a], [lam])
            for lam in lams:
                for b in negs:
                    self.emit(index, (), [lam, b])
            # i == k kept on purpose: l*l rules of this shape per rule
            for a, lam in zip(heads, lams):
                for other in lams:
                    self.emit(index, [lam], [a, other])

    def ht_extra(self):
        for a in sorted(self.source.atoms):
            self.emit(None, [self.k(a)], [a])
        for index, rule in enumerate(self.source.rules):
            head = [self.k(a) for a in rule.head] + [self.k(b) for b in rule.negative_body]
            self.emit(index, head, [self.k(b) for b in rule.positive_body])

    def gaps(self):
        self.rules.extend(gap_rules(self.source.atoms, self.signature))
        self.origin.extend([None] * len(self.source.atoms))
        for a in self.source.atoms:
            self.k_atom[a] = self.signature.id_of(K_PREFIX + self.signature.name(a))
            self.gap_atom[a] = self.signature.id_of(GAP_PREFIX + self.signature.name(a))

    def build(self, kind: TransformKind, with_gap: bool) -> TransformedProgram:
        self.kappa()
        if kind is TransformKind.HT:
            self.ht_extra()
        n_epistemic = len(self.rules)
        if with_gap:
            self.gaps()
        return TransformedProgram(
            program=Program(self.signature, self.rules),
            kind=kind,
            source=self.source,
            base_atoms=self.source.atoms,
            k_atom=dict(self.k_atom),
            gap_atom=dict(self.gap_atom),
            origin=tuple(self.origin),
            n_epistemic=n_epistemic,
        )


def _marker(signature: Signature, a: int, prefix: str, kind: str) -> int:
    name = prefix + signature.name(a)
    found = signature.get(name)
    return found if found is not None else signature.add(name, kind, base=a)


def gap_rules(base_atoms: Iterable[int], signature: Signature) -> list[Rule]:
    """``gap_k_a :- k_a, not a.`` per base atom; missing marker atoms are added to ``signature``."""
    rules = []
    for a in sorted(base_atoms):
        k = _marker(signature, a, K_PREFIX, K_MARKER)
        g = _marker(signature, a, GAP_PREFIX, GAP_MARKER)
        rules.append(Rule(frozenset([g]), frozenset([k]), frozenset([a])))
    return rules


def transform(program: Program, kind: TransformKind | str = TransformKind.KAPPA, *,
              with_gap: bool = True) -> TransformedProgram:
    return _Builder(program).build(TransformKind(kind), with_gap)


def kappa_transform(program: Program) -> TransformedProgram:
    return transform(program, TransformKind.KAPPA)


def ht_transform(program: Program) -> TransformedProgram:
    return transform(program, TransformKind.HT)


def pi_m(tp: TransformedProgram, m: Iterable[int]) -> list[Rule]:
    """Constraints admitting only answer sets whose gap is a strict subset of gap(m)."""
    m = frozenset(m)
    gap = tp.gap_of(m)
    rules = [Rule(frozenset(), gap)] if gap else []
    rules += [Rule(frozenset(), frozenset([g])) for g in sorted(tp.gap_atoms - m)]
    return rules


def weak_gap_constraints(tp: TransformedProgram) -> list[WeakConstraint]:
    return [WeakConstraint(frozenset([tp.gap_atom[a]])) for a in sorted(tp.base_atoms)]


def project_paracoherent(m: Iterable[int], tp: TransformedProgram) -> frozenset[int]:
    """Restrict an answer set of Pi to the base and K atoms."""
    sig = tp.signature
    return frozenset(a for a in m if sig[a].kind in (BASE, K_MARKER))
