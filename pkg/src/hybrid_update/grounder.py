"""Surface knowledge-base language: parsing, printing and grounding.

A KB file has optional sections ``%constants``, ``%tbox``, ``%rules`` and
``%updates`` (any order, ``#`` comments)::

    %constants c d
    %tbox
    A == B | C.
    D == ~A & exists inv(P) . A.
    %rules
    NegA(X) :- not A(X).
    %updates
    A(c).
    !E(c) & !P(c,d).

Everything is grounded over the declared constants only.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import KbSyntaxError, NonGroundFormula, UndeclaredIndividual
from .formula import (
    FALSE, TRUE, And, Atom, Bottom, Formula, Iff, Implies, Know, Naf, Neg, Or, Top,
    children, conj, disj, iter_atoms,
)
from .model import Signature
from .program import GroundProgram, Rule, UpdateProblem

# -- concept language -------------------------------------------------------


@dataclass(frozen=True)
class ConceptName:
    name: str


@dataclass(frozen=True)
class TopConcept:
    pass


@dataclass(frozen=True)
class BottomConcept:
    pass


@dataclass(frozen=True)
class NotConcept:
    arg: Concept


@dataclass(frozen=True)
class AndConcept:
    args: tuple[Concept, ...]


@dataclass(frozen=True)
class OrConcept:
    args: tuple[Concept, ...]


@dataclass(frozen=True)
class Role:
    name: str
    inverse: bool = False


@dataclass(frozen=True)
class Exists:
    role: Role
    arg: Concept


@dataclass(frozen=True)
class Forall:
    role: Role
    arg: Concept


Concept = Union[ConceptName, TopConcept, BottomConcept, NotConcept, AndConcept, OrConcept, Exists, Forall]


@dataclass(frozen=True)
class TboxAxiom:
    kind: str  # "subsumption" | "equivalence"
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class ConceptAssertion:
    """C(a) for a complex concept C; plain names are parsed as atoms instead."""

    concept: Concept
    individual: str


@dataclass(frozen=True)
class RuleTemplate:
    head: Atom
    pos_body: tuple[Atom, ...] = ()
    neg_body: tuple[Atom, ...] = ()

    def variables(self) -> tuple[str, ...]:
        seen = dict.fromkeys(
            t for a in (self.head, *self.pos_body, *self.neg_body) for t in a.args if is_variable(t)
        )
        return tuple(seen)


@dataclass(frozen=True)
class SurfaceKb:
    constants: tuple[str, ...] = ()
    tbox: tuple[TboxAxiom, ...] = ()
    rules: tuple[RuleTemplate, ...] = ()
    updates: tuple[Formula, ...] = ()
    """Update expressions: formula trees whose leaves may be ConceptAssertions."""


def is_variable(term: str) -> bool:
    return term[:1].isupper()


# -- tokenizer --------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<section>%[A-Za-z]+)
  | (?P<op>:-|\[=|==|<->|->|[().,~&|!])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # op | ident | section | eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise KbSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind in ("op", "ident", "section"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser -----------------------------------------------------------------

_CONCEPT_WORDS = {"top", "bot", "exists", "forall", "inv"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def fail(self, message: str, *expected: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise KbSyntaxError(f"{message}, found {found}", t.line, t.column, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.fail("syntax error", repr(text))

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            self.fail("syntax error", what)
        text = self.tok.text
        self.pos += 1
        return text

    # concepts

    def concept(self) -> Concept:
        args = [self.concept_and()]
        while self.accept("|"):
            args.append(self.concept_and())
        return args[0] if len(args) == 1 else OrConcept(tuple(args))

    def concept_and(self) -> Concept:
        args = [self.concept_unary()]
        while self.accept("&"):
            args.append(self.concept_unary())
        return args[0] if len(args) == 1 else AndConcept(tuple(args))

    def concept_unary(self) -> Concept:
        if self.accept("~"):
            return NotConcept(self.concept_unary())
        for word, node in (("exists", Exists), ("forall", Forall)):
            if self.accept(word):
                role = self.role()
                self.expect(".")
                return node(role, self.concept_unary())
        if self.accept("top"):
            return TopConcept()
        if self.accept("bot"):
            return BottomConcept()
        if self.accept("("):
            c = self.concept()
            self.expect(")")
            return c
        if self.tok.kind == "ident" and self.tok.text not in _CONCEPT_WORDS:
            return ConceptName(self.ident())
        self.fail("expected a concept", "concept name", "top", "bot", "~", "exists", "forall", "'('")

    def role(self) -> Role:
        if self.accept("inv"):
            self.expect("(")
            name = self.ident("role name")
            self.expect(")")
            return Role(name, True)
        return Role(self.ident("role name"))

    def axiom(self) -> TboxAxiom:
        lhs = self.concept()
        if self.accept("[="):
            kind = "subsumption"
        elif self.accept("=="):
            kind = "equivalence"
        else:
            self.fail("syntax error", "'[='", "'=='")
        rhs = self.concept()
        self.expect(".")
        return TboxAxiom(kind, lhs, rhs)

    # rules

    def atom(self) -> Atom:
        name = self.ident("atom")
        args = ()
        if self.accept("("):
            args = [self.ident("term")]
            while self.accept(","):
                args.append(self.ident("term"))
            self.expect(")")
        return Atom(name, tuple(args))

    def rule(self) -> RuleTemplate:
        head = self.atom()
        pos, neg = [], []
        if self.accept(":-"):
            while True:
                if self.accept("not"):
                    neg.append(self.atom())
                else:
                    pos.append(self.atom())
                if not self.accept(","):
                    break
        self.expect(".")
        return RuleTemplate(head, tuple(pos), tuple(neg))

    # formulas

    def formula(self, modal: bool) -> Formula:
        left = self.implication(modal)
        if self.accept("<->"):
            return Iff(left, self.implication(modal))
        return left

    def implication(self, modal: bool) -> Formula:
        left = self.disjunction(modal)
        if self.accept("->"):
            return Implies(left, self.implication(modal))
        return left

    def disjunction(self, modal: bool) -> Formula:
        args = [self.conjunction(modal)]
        while self.accept("|"):
            args.append(self.conjunction(modal))
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self, modal: bool) -> Formula:
        args = [self.unary(modal)]
        while self.accept("&"):
            args.append(self.unary(modal))
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self, modal: bool) -> Formula:
        if self.accept("!"):
            return Neg(self.unary(modal))
        if modal and self.accept("K"):
            return Know(self.unary(modal))
        if modal and self.accept("not"):
            return Naf(self.unary(modal))
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.at("("):
            assertion = self.try_concept_assertion()
            if assertion is not None:
                return assertion
            self.expect("(")
            f = self.formula(modal)
            self.expect(")")
            return f
        if self.tok.kind == "ident":
            return self.atom()
        expected = ["atom", "'!'", "'('", "true", "false"]
        if modal:
            expected[1:1] = ["K", "not"]
        self.fail("expected a formula", *expected)

    def try_concept_assertion(self) -> ConceptAssertion | None:
        start = self.pos
        try:
            self.expect("(")
            c = self.concept()
            self.expect(")")
            self.expect("(")
            individual = self.ident("individual")
            self.expect(")")
            return ConceptAssertion(c, individual)
        except KbSyntaxError:
            self.pos = start
            return None

    # file

    def kb(self) -> SurfaceKb:
        constants, tbox, rules, updates = [], [], [], []
        while self.tok.kind != "eof":
            if self.tok.kind != "section":
                self.fail("expected a section header", "%constants", "%tbox", "%rules", "%updates")
            section = self.tok.text
            self.pos += 1
            while self.tok.kind not in ("section", "eof"):
                if section == "%constants":
                    constants.append(self.ident("constant"))
                elif section == "%tbox":
                    tbox.append(self.axiom())
                elif section == "%rules":
                    rules.append(self.rule())
                elif section == "%updates":
                    updates.append(self.formula(modal=False))
                    self.expect(".")
                else:
                    self.pos -= 1
                    self.fail("unknown section", "%constants", "%tbox", "%rules", "%updates")
        return SurfaceKb(tuple(constants), tuple(tbox), tuple(rules), tuple(updates))


def parse_kb(text: str) -> SurfaceKb:
    kb = _Parser(text).kb()
    declared = set(kb.constants)
    for rule in kb.rules:
        for a in (rule.head, *rule.pos_body, *rule.neg_body):
            for t in a.args:
                if not is_variable(t) and t not in declared:
                    raise UndeclaredIndividual(f"constant {t!r} in rule {format_rule(rule)} is not declared")
    for u in kb.updates:
        check_individuals(u, kb.constants)
    return kb


def parse_formula(text: str, modal: bool = False) -> Formula:
    """Parse one update (``modal=False``) or query (``modal=True``) formula.

    A single trailing ``.`` is allowed.
    """
    p = _Parser(text)
    f = p.formula(modal)
    p.accept(".")
    if p.tok.kind != "eof":
        p.fail("trailing input", "end of input")
    return f


def parse_concept(text: str) -> Concept:
    p = _Parser(text)
    c = p.concept()
    if p.tok.kind != "eof":
        p.fail("trailing input", "end of input")
    return c


# -- printer ----------------------------------------------------------------

_CONCEPT_ATOMIC = (ConceptName, TopConcept, BottomConcept, NotConcept, Exists, Forall)


def format_role(r: Role) -> str:
    return f"inv({r.name})" if r.inverse else r.name


def format_concept(c: Concept) -> str:
    def sub(d: Concept) -> str:
        text = format_concept(d)
        return text if isinstance(d, _CONCEPT_ATOMIC) else f"({text})"

    if isinstance(c, ConceptName):
        return c.name
    if isinstance(c, TopConcept):
        return "top"
    if isinstance(c, BottomConcept):
        return "bot"
    if isinstance(c, NotConcept):
        return "~" + sub(c.arg)
    if isinstance(c, AndConcept):
        return " & ".join(sub(a) for a in c.args)
    if isinstance(c, OrConcept):
        return " | ".join(sub(a) for a in c.args)
    if isinstance(c, Exists):
        return f"exists {format_role(c.role)} . {sub(c.arg)}"
    if isinstance(c, Forall):
        return f"forall {format_role(c.role)} . {sub(c.arg)}"
    raise TypeError(f"not a concept: {c!r}")


def format_axiom(ax: TboxAxiom) -> str:
    op = "[=" if ax.kind == "subsumption" else "=="
    return f"{format_concept(ax.lhs)} {op} {format_concept(ax.rhs)}."


def format_rule(r: RuleTemplate | Rule) -> str:
    body = [str(a) for a in r.pos_body] + [f"not {a}" for a in r.neg_body]
    return f"{r.head} :- {', '.join(body)}." if body else f"{r.head}."


_FORMULA_ATOMIC = (Atom, Top, Bottom, Neg, Know, Naf, ConceptAssertion)


def format_update(f: Formula) -> str:
    """Like :func:`formula.format_formula`, but also prints concept assertions."""

    def sub(g) -> str:
        text = format_update(g)
        return text if isinstance(g, _FORMULA_ATOMIC) else f"({text})"

    if isinstance(f, ConceptAssertion):
        return f"({format_concept(f.concept)})({f.individual})"
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


def format_kb(kb: SurfaceKb) -> str:
    lines = ["%constants"]
    if kb.constants:
        lines.append(" ".join(kb.constants))
    lines.append("%tbox")
    lines.extend(format_axiom(ax) for ax in kb.tbox)
    lines.append("%rules")
    lines.extend(format_rule(r) for r in kb.rules)
    lines.append("%updates")
    lines.extend(format_update(u) + "." for u in kb.updates)
    return "\n".join(lines) + "\n"


# -- grounding --------------------------------------------------------------


def _role_atom(role: Role, a: str, b: str) -> Atom:
    return Atom(role.name, (b, a) if role.inverse else (a, b))


def ground_concept(c: Concept, a: str, dom: Iterable[str]) -> Formula:
    """Propositional expansion of C(a) over the finite domain."""
    dom = tuple(dom)
    if isinstance(c, ConceptName):
        return Atom(c.name, (a,))
    if isinstance(c, TopConcept):
        return TRUE
    if isinstance(c, BottomConcept):
        return FALSE
    if isinstance(c, NotConcept):
        return Neg(ground_concept(c.arg, a, dom))
    if isinstance(c, AndConcept):
        return conj(*(ground_concept(d, a, dom) for d in c.args))
    if isinstance(c, OrConcept):
        return disj(*(ground_concept(d, a, dom) for d in c.args))
    if isinstance(c, Exists):
        return disj(*(conj(_role_atom(c.role, a, b), ground_concept(c.arg, b, dom)) for b in dom))
    if isinstance(c, Forall):
        return conj(*(Implies(_role_atom(c.role, a, b), ground_concept(c.arg, b, dom)) for b in dom))
    raise TypeError(f"not a concept: {c!r}")


def ground_tbox(axioms: Iterable[TboxAxiom], dom: Iterable[str]) -> tuple[Formula, ...]:
    dom = tuple(dom)
    out = []
    for ax in axioms:
        node = Implies if ax.kind == "subsumption" else Iff
        for a in dom:
            out.append(node(ground_concept(ax.lhs, a, dom), ground_concept(ax.rhs, a, dom)))
    return tuple(dict.fromkeys(out))


def ground_rules(templates: Iterable[RuleTemplate], dom: Iterable[str]) -> GroundProgram:
    """All substitutions of rule variables by domain constants, deduplicated and sorted."""
    dom = tuple(dom)
    rules = set()
    for t in templates:
        variables = t.variables()
        for values in itertools.product(dom, repeat=len(variables)):
            theta = dict(zip(variables, values))

            def subst(a: Atom) -> Atom:
                return Atom(a.predicate, tuple(theta.get(x, x) for x in a.args))

            rules.add(Rule(subst(t.head), tuple(map(subst, t.pos_body)), tuple(map(subst, t.neg_body))))
    return GroundProgram(tuple(sorted(rules)))


def _check_term(term: str, dom: tuple[str, ...]) -> None:
    if term in dom:
        return
    if is_variable(term):
        raise NonGroundFormula(f"variable {term} in a ground formula")
    raise UndeclaredIndividual(f"individual {term!r} is not declared")


def check_individuals(expr: Formula, dom: tuple[str, ...]) -> None:
    if isinstance(expr, ConceptAssertion):
        _check_term(expr.individual, dom)
    elif isinstance(expr, Atom):
        for t in expr.args:
            _check_term(t, dom)
    else:
        for c in children(expr):
            check_individuals(c, dom)


def ground_abox(expr: Formula, dom: Iterable[str]) -> Formula:
    """Ground an update or query expression: concept assertions are expanded."""
    dom = tuple(dom)
    check_individuals(expr, dom)
    return _ground_expr(expr, dom)


def _ground_expr(expr: Formula, dom: tuple[str, ...]) -> Formula:
    if isinstance(expr, ConceptAssertion):
        return ground_concept(expr.concept, expr.individual, dom)
    if isinstance(expr, (Atom, Top, Bottom)):
        return expr
    if isinstance(expr, (Neg, Know, Naf)):
        return type(expr)(_ground_expr(expr.arg, dom))
    if isinstance(expr, (And, Or)):
        return type(expr)(tuple(_ground_expr(a, dom) for a in expr.args))
    if isinstance(expr, (Implies, Iff)):
        return type(expr)(_ground_expr(expr.left, dom), _ground_expr(expr.right, dom))
    raise TypeError(f"not a formula: {expr!r}")


def _concept_predicates(c: Concept) -> Iterator[tuple[str, int]]:
    if isinstance(c, ConceptName):
        yield c.name, 1
    elif isinstance(c, (NotConcept, Exists, Forall)):
        if isinstance(c, (Exists, Forall)):
            yield c.role.name, 2
        yield from _concept_predicates(c.arg)
    elif isinstance(c, (AndConcept, OrConcept)):
        for d in c.args:
            yield from _concept_predicates(d)


def _expr_predicates(expr: Formula) -> Iterator[tuple[str, int]]:
    if isinstance(expr, ConceptAssertion):
        yield from _concept_predicates(expr.concept)
    elif isinstance(expr, Atom):
        yield expr.predicate, expr.arity
    else:
        for c in children(expr):
            yield from _expr_predicates(c)


def signature_of(kb: SurfaceKb) -> Signature:
    """Every concept (arity 1), role (arity 2) and rule/update predicate of the KB."""
    preds: list[tuple[str, int]] = []
    for ax in kb.tbox:
        preds += _concept_predicates(ax.lhs)
        preds += _concept_predicates(ax.rhs)
    for r in kb.rules:
        preds += [(a.predicate, a.arity) for a in (r.head, *r.pos_body, *r.neg_body)]
    for u in kb.updates:
        preds += _expr_predicates(u)
    return Signature(tuple(dict.fromkeys(preds)), kb.constants)


def ground_kb(kb: SurfaceKb) -> UpdateProblem:
    sig = signature_of(kb)
    dom = sig.constants
    return UpdateProblem(
        ground_rules(kb.rules, dom),
        ground_tbox(kb.tbox, dom),
        tuple(ground_abox(u, dom) for u in kb.updates),
        sig,
    )


def parse_query(text: str, kb: SurfaceKb) -> Formula:
    """Parse and ground a query (K / not allowed); its atoms must be in the KB's signature."""
    query = ground_abox(parse_formula(text, modal=True), kb.constants)
    signature_of(kb).mask(iter_atoms(query))
    return query
