"""Ground first-order and MKNF formulas.

Formulas are immutable trees. :class:`Atom` doubles as the leaf node, so a
ground atom can be used wherever a formula is expected. Disjunction,
implication, biconditional and the two constants are kept as nodes for
faithful printing, but every evaluator treats them as the usual shorthands
over negation and conjunction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True, order=True)
class Atom:
    predicate: str
    args: tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(self.args)})"


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Neg:
    arg: Formula

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class And:
    args: tuple[Formula, ...]

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    args: tuple[Formula, ...]

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Iff:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Know:
    """Modal K: true iff the argument holds in every world of the K-set."""

    arg: Formula

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Naf:
    """Modal not: true iff the argument fails in some world of the not-set."""

    arg: Formula

    def __str__(self) -> str:
        return format_formula(self)


Formula = Union[Atom, Top, Bottom, Neg, And, Or, Implies, Iff, Know, Naf]

TRUE = Top()
FALSE = Bottom()


def conj(*args: Formula) -> Formula:
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return And(tuple(args))


def disj(*args: Formula) -> Formula:
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return Or(tuple(args))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Neg, Know, Naf)):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    return ()


def iter_atoms(f: Formula) -> Iterator[Atom]:
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            yield node
        else:
            stack.extend(children(node))


def atoms_of(f: Formula) -> frozenset[Atom]:
    return frozenset(iter_atoms(f))


def is_first_order(f: Formula) -> bool:
    if isinstance(f, (Know, Naf)):
        return False
    return all(is_first_order(c) for c in children(f))


_UNARY = (Atom, Top, Bottom, Neg, Know, Naf)


def format_formula(f: Formula) -> str:
    """Render in the query/update surface syntax (``! & | -> <-> K not``).

    Compound operands of binary connectives are always parenthesised, so the
    output parses back to the same tree.
    """

    def sub(g: Formula) -> str:
        text = format_formula(g)
        return text if isinstance(g, _UNARY) else f"({text})"

    if isinstance(f, (Atom, Top, Bottom)):
        return str(f)
    if isinstance(f, Neg):
        return "!" + sub(f.arg)
    if isinstance(f, Know):
        return "K " + sub(f.arg)
    if isinstance(f, Naf):
        return "not " + sub(f.arg)
    if isinstance(f, And):
        return " & ".join(sub(a) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(sub(a) for a in f.args)
    if isinstance(f, Implies):
        return f"{sub(f.left)} -> {sub(f.right)}"
    if isinstance(f, Iff):
        return f"{sub(f.left)} <-> {sub(f.right)}"
    raise TypeError(f"not a formula: {f!r}")
