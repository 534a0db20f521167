"""Ground disjunctive programs: atoms, rules, weak constraints, parser and printer.

Concrete syntax (one statement per ``.``)::

    a | b :- c, not d.      % disjunctive rule
    a.                      % fact
    :- a, not b.            % constraint
    :~ a, not b.            % unweighted weak constraint

Atom names match ``[a-z][A-Za-z0-9_]*``; ``not`` is a keyword.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

Interpretation = frozenset  # frozenset[int] of atom ids

BASE = "base"
K_MARKER = "k-marker"
LAMBDA = "lambda"
GAP_MARKER = "gap-marker"
ATOM_KINDS = (BASE, K_MARKER, LAMBDA, GAP_MARKER)

NAME_RE = re.compile(r"[a-z][A-Za-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Atom:
    id: int
    name: str
    kind: str = BASE
    base: int | None = None  # annotated base atom, for k-marker and gap-marker atoms
    provenance: tuple[int, int] | None = None  # (rule index, head position) for lambda atoms


class Signature:
    """Dense id <-> name table. Append-only; ids never change once issued."""

    def __init__(self, atoms: Iterable[Atom] = ()):
        self._atoms: list[Atom] = []
        self._by_name: dict[str, int] = {}
        for atom in atoms:
            self.add(atom.name, atom.kind, base=atom.base, provenance=atom.provenance)

    def add(self, name: str, kind: str = BASE, *, base: int | None = None,
            provenance: tuple[int, int] | None = None) -> int:
        if name in self._by_name:
            raise ValueError(f"duplicate atom name {name!r}")
        if kind not in ATOM_KINDS:
            raise ValueError(f"unknown atom kind {kind!r}")
        atom = Atom(len(self._atoms), name, kind, base, provenance)
        self._atoms.append(atom)
        self._by_name[name] = atom.id
        return atom.id

    def intern(self, name: str) -> int:
        """Id of ``name``, adding it as a base atom if unseen."""
        found = self._by_name.get(name)
        if found is not None:
            return found
        return self.add(name)

    def id_of(self, name: str) -> int:
        return self._by_name[name]

    def get(self, name: str) -> int | None:
        return self._by_name.get(name)

    def __getitem__(self, atom_id: int) -> Atom:
        return self._atoms[atom_id]

    def __len__(self) -> int:
        return len(self._atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self._atoms)

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def name(self, atom_id: int) -> str:
        return self._atoms[atom_id].name

    def names(self, atoms: Iterable[int]) -> frozenset[str]:
        return frozenset(self._atoms[a].name for a in atoms)

    def ids(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self._by_name[n] for n in names)

    def copy(self) -> Signature:
        return Signature(self._atoms)


@dataclass(frozen=True)
class Rule:
    head: frozenset[int] = frozenset()
    positive_body: frozenset[int] = frozenset()
    negative_body: frozenset[int] = frozenset()

    def __post_init__(self):
        # normalise any iterable input to frozensets
        for name in ("head", "positive_body", "negative_body"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))
        if not (self.head or self.positive_body or self.negative_body):
            raise ValueError("a rule needs a head or a body")

    @property
    def atoms(self) -> frozenset[int]:
        return self.head | self.positive_body | self.negative_body

    @property
    def is_fact(self) -> bool:
        return not self.positive_body and not self.negative_body

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_normal(self) -> bool:
        return len(self.head) <= 1

    @property
    def is_positive(self) -> bool:
        return not self.negative_body

    @property
    def is_tautology(self) -> bool:
        return bool(self.head & self.positive_body) or bool(self.positive_body & self.negative_body)


@dataclass(frozen=True)
class WeakConstraint:
    positive_body: frozenset[int] = frozenset()
    negative_body: frozenset[int] = frozenset()

    def __post_init__(self):
        for name in ("positive_body", "negative_body"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))

    @property
    def atoms(self) -> frozenset[int]:
        return self.positive_body | self.negative_body

    def violated_by(self, interpretation: frozenset[int]) -> bool:
        return self.positive_body <= interpretation and not (self.negative_body & interpretation)


@dataclass(frozen=True, eq=False)
class Program:
    """A finite list of rules plus unweighted weak constraints over a signature.

    Treated as immutable. ``extend`` returns a new program sharing the signature,
    which is how constraint sets are conjoined during the search algorithms.
    """

    signature: Signature
    rules: tuple[Rule, ...] = ()
    weak: tuple[WeakConstraint, ...] = ()
    _atoms: frozenset[int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "weak", tuple(self.weak))
        atoms: set[int] = set()
        for item in self.rules + self.weak:
            atoms |= item.atoms
        if atoms and max(atoms) >= len(self.signature):
            raise ValueError("rule references an atom id outside the signature")
        object.__setattr__(self, "_atoms", frozenset(atoms))

    @property
    def atoms(self) -> frozenset[int]:
        return self._atoms

    def extend(self, rules: Iterable[Rule] = (), weak: Iterable[WeakConstraint] = ()) -> Program:
        return Program(self.signature, self.rules + tuple(rules), self.weak + tuple(weak))

    def without_weak(self) -> Program:
        return Program(self.signature, self.rules)

    def names(self, interpretation: Iterable[int]) -> frozenset[str]:
        return self.signature.names(interpretation)

    def structurally_equal(self, other: Program) -> bool:
        """Equality of rule and weak-constraint lists, compared by atom name."""
        return _named(self) == _named(other)

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return format_program(self)


def _named(program: Program):
    name = program.signature.name

    def conv(atoms):
        return frozenset(name(a) for a in atoms)

    return (
        [(conv(r.head), conv(r.positive_body), conv(r.negative_body)) for r in program.rules],
        [(conv(w.positive_body), conv(w.negative_body)) for w in program.weak],
    )


def atoms_of(program: Program) -> frozenset[int]:
    return program.atoms


# --------------------------------------------------------------------------- parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<weak>:~)
  | (?P<bar>\|)
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<weight>\[)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "weight":
            raise ParseError("weight annotations on weak constraints are not supported", line, column)
        if kind not in ("ws", "comment"):
            if kind == "ident":
                if chunk == "not":
                    kind = "not"
                elif not NAME_RE.fullmatch(chunk):
                    raise ParseError(f"invalid atom name {chunk!r}", line, column)
            tokens.append(_Token(kind, chunk, line, column))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.signature = Signature()
        self.rules: list[Rule] = []
        self.weak: list[WeakConstraint] = []

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {kind}, found {shown!r}", tok.line, tok.column)
        self.i += 1
        return tok

    def parse(self) -> Program:
        while self.peek().kind != "eof":
            self.statement()
        return Program(self.signature, self.rules, self.weak)

    def statement(self):
        start = self.peek()
        if start.kind == "weak":
            self.i += 1
            pos, neg = self.body()
            self.take("dot")
            if not (pos & neg):
                self.weak.append(WeakConstraint(pos, neg))
            return
        head: set[int] = set()
        if start.kind == "ident":
            head.add(self.atom())
            while self.peek().kind == "bar":
                self.i += 1
                head.add(self.atom())
        pos: frozenset[int] = frozenset()
        neg: frozenset[int] = frozenset()
        if self.peek().kind == "if":
            self.i += 1
            pos, neg = self.body()
        if not head and not pos and not neg:
            raise ParseError("empty rule", start.line, start.column)
        self.take("dot")
        self.rules.append(Rule(frozenset(head), pos, neg))

    def body(self) -> tuple[frozenset[int], frozenset[int]]:
        pos: set[int] = set()
        neg: set[int] = set()
        while True:
            if self.peek().kind == "not":
                self.i += 1
                neg.add(self.atom())
            else:
                pos.add(self.atom())
            if self.peek().kind != "comma":
                break
            self.i += 1
        return frozenset(pos), frozenset(neg)

    def atom(self) -> int:
        return self.signature.intern(self.take("ident").text)


def parse(text: str) -> Program:
    """Parse ground program text. Atom ids follow first occurrence."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------- printer

def _body_text(signature: Signature, pos: frozenset[int], neg: frozenset[int]) -> str:
    lits = sorted([(a, 0) for a in pos] + [(a, 1) for a in neg])
    return ", ".join(("not " if negated else "") + signature.name(a) for a, negated in lits)


def format_rule(rule: Rule, signature: Signature) -> str:
    head = " | ".join(signature.name(a) for a in sorted(rule.head))
    if rule.is_fact:
        return f"{head}."
    body = _body_text(signature, rule.positive_body, rule.negative_body)
    return f"{head} :- {body}." if head else f":- {body}."


def format_weak(weak: WeakConstraint, signature: Signature) -> str:
    return f":~ {_body_text(signature, weak.positive_body, weak.negative_body)}."


def format_program(program: Program) -> str:
    lines = [format_rule(r, program.signature) for r in program.rules]
    lines += [format_weak(w, program.signature) for w in program.weak]
    return "\n".join(lines)


# --------------------------------------------------------------------------- classification

@dataclass(frozen=True)
class Classification:
    normal: bool
    positive: bool
    has_constraints: bool
    head_cycle_free: bool


def _positive_reach(program: Program) -> dict[int, set[int]]:
    edges: dict[int, set[int]] = {}
    for r in program.rules:
        for b in r.positive_body:
            edges.setdefault(b, set()).update(r.head)
    reach = {}
    for start in edges:
        seen, stack = set(), [start]
        while stack:
            for nxt in edges.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        reach[start] = seen
    return reach


def classify(program: Program) -> Classification:
    reach = _positive_reach(program)

    def same_cycle(a: int, b: int) -> bool:
        return b in reach.get(a, ()) and a in reach.get(b, ())

    hcf = not any(
        same_cycle(a, b)
        for r in program.rules if len(r.head) > 1
        for a in r.head for b in r.head if a < b
    )
    return Classification(
        normal=all(r.is_normal for r in program.rules),
        positive=all(r.is_positive for r in program.rules),
        has_constraints=any(r.is_constraint for r in program.rules),
        head_cycle_free=hcf,
    )
