"""Ground normal rules, programs, update problems and the MKNF translation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .formula import Atom, Formula, Implies, Know, Naf, atoms_of, conj
from .model import Signature


@dataclass(frozen=True, order=True)
class Rule:
    head: Atom
    pos_body: tuple[Atom, ...] = ()
    neg_body: tuple[Atom, ...] = ()

    @property
    def is_definite(self) -> bool:
        return not self.neg_body

    @property
    def is_fact(self) -> bool:
        return not self.pos_body and not self.neg_body

    def atoms(self) -> frozenset[Atom]:
        return frozenset((self.head, *self.pos_body, *self.neg_body))

    def stripped(self) -> Rule:
        return Rule(self.head, self.pos_body)

    def __str__(self) -> str:
        body = [str(a) for a in self.pos_body] + [f"not {a}" for a in self.neg_body]
        if not body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(body)}."


@dataclass(frozen=True)
class GroundProgram:
    """A finite set of ground rules, kept in first-seen order."""

    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(dict.fromkeys(self.rules)))

    @classmethod
    def of(cls, rules: Iterable[Rule]) -> GroundProgram:
        return cls(tuple(rules))

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    @property
    def is_definite(self) -> bool:
        return all(r.is_definite for r in self.rules)

    def atoms(self) -> frozenset[Atom]:
        return frozenset(a for r in self.rules for a in r.atoms())

    def __str__(self) -> str:
        return "\n".join(map(str, self.rules))


@dataclass(frozen=True)
class UpdateProblem:
    """A program updated by a sequence of ABoxes in the context of a static TBox."""

    program: GroundProgram
    tbox: tuple[Formula, ...]
    updates: tuple[Formula, ...]
    signature: Signature = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "tbox", tuple(dict.fromkeys(self.tbox)))
        object.__setattr__(self, "updates", tuple(self.updates))
        mentioned = set(self.program.atoms())
        for f in (*self.tbox, *self.updates):
            mentioned |= atoms_of(f)
        if self.signature is None:
            object.__setattr__(self, "signature", Signature.covering(mentioned))
        else:
            # raises SignatureMismatch on a foreign atom
            self.signature.mask(mentioned)

    def with_updates(self, updates: Iterable[Formula]) -> UpdateProblem:
        return UpdateProblem(self.program, self.tbox, tuple(updates), self.signature)


def translate_rule(rule: Rule) -> Formula:
    body = conj(*(Know(q) for q in rule.pos_body), *(Naf(s) for s in rule.neg_body))
    return Implies(body, Know(rule.head))


def translate_kb(ontology: Iterable[Formula], program: GroundProgram) -> frozenset[Formula]:
    """pi(<O, P>): K phi for each ontology axiom and K h <- K q.. & not s.. per rule."""
    return frozenset(Know(f) for f in ontology) | frozenset(
        translate_rule(r) for r in program.rules
    )
