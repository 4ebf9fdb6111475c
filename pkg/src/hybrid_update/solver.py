"""Minimal change dynamic stable models, plus the static and classical oracles.

A definite program is updated by iterating the updating consequence operator
from the set of all worlds down to its least fixed point. Normal programs go
through the reduct: the reduct depends on a candidate model only through
which negative bodies it satisfies, so enumerating subsets of the rules with
negative bodies and checking each fixpoint for consistency with its own
choice is complete.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence

from .errors import AtomBudgetExceeded, ContractViolation
from .formula import Atom, Formula
from .model import DEFAULT_MAX_ATOMS, InterpretationSet, Signature, holds_in, models_array
from .pma import Updater
from .program import GroundProgram, Rule, UpdateProblem

Mode = Literal["skeptical", "credulous"]


@dataclass(frozen=True)
class CandidateTrace:
    kept: tuple[int, ...]
    """Indices (into the program) of the negative-body rules assumed kept."""
    fixpoint_size: int
    verdict: str  # accepted | empty fixpoint | reduct mismatch


@dataclass(frozen=True)
class SolveResult:
    models: tuple[InterpretationSet, ...]
    diagnostics: tuple[CandidateTrace, ...] = ()

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self):
        return iter(self.models)

    def world_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(m.worlds for m in self.models)


@dataclass(frozen=True)
class Entailment:
    entailed: bool
    model_count: int
    mode: str

    def __bool__(self) -> bool:
        return self.entailed


@dataclass(frozen=True)
class AtomStatus:
    size: int
    known_true: tuple[Atom, ...]
    known_false: tuple[Atom, ...]
    unknown: tuple[Atom, ...]


# compiled rule: (head bit, positive-body mask, negative-body mask)
_Compiled = tuple[int, int, int]


def _compile(rules: Iterable[Rule], sig: Signature) -> list[_Compiled]:
    return [
        (sig.bit(r.head), sig.mask(r.pos_body), sig.mask(r.neg_body)) for r in rules
    ]


def _known(worlds: frozenset[int], sig: Signature) -> int:
    acc = sig.full_mask
    for w in worlds:
        acc &= w
    return acc


def _fired(rules: list[_Compiled], known: int) -> int:
    heads = 0
    for head, pos, _ in rules:
        if pos & ~known == 0:
            heads |= head
    return heads


def _iterate(
    rules: list[_Compiled],
    image: Callable[[int], frozenset[int]],
    sig: Signature,
    trace: list | None = None,
) -> frozenset[int]:
    """Kleene iteration from the set of all worlds.

    ``image`` maps the mask of derived heads to the resulting world set. The
    operator depends on its argument only through the derived heads, so the
    iteration has converged once the head set repeats.
    """
    known = 0 if len(sig) else sig.full_mask
    heads = _fired(rules, known)
    current = image(heads)
    if trace is not None:
        trace.append(current)
    while True:
        nxt_heads = _fired(rules, _known(current, sig))
        if nxt_heads == heads:
            return current
        heads = nxt_heads
        current = image(heads)
        if trace is not None:
            trace.append(current)


def _require_definite(defprog: GroundProgram) -> None:
    bad = [r for r in defprog.rules if not r.is_definite]
    if bad:
        raise ContractViolation(f"definite program required, got {bad[0]}")


def _signature_for(prog: GroundProgram, formulas: Iterable[Formula], sig: Signature | None) -> Signature:
    if sig is not None:
        return sig
    return UpdateProblem(prog, tuple(formulas), ()).signature


def step_operator(
    defprog: GroundProgram,
    tbox: Iterable[Formula],
    seq: Sequence[Formula],
    m: InterpretationSet,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> InterpretationSet:
    """One application of the updating immediate consequence operator."""
    _require_definite(defprog)
    sig = m.sig
    up = Updater(sig, tbox, seq, max_atoms)
    heads = _fired(_compile(defprog.rules, sig), m.known_mask)
    return InterpretationSet(sig, up.update_atoms(heads))


def lfp_trace(
    defprog: GroundProgram,
    tbox: Iterable[Formula],
    seq: Sequence[Formula],
    sig: Signature | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> list[InterpretationSet]:
    """The Kleene chain T(I), T(T(I)), ... ending at the least fixed point."""
    _require_definite(defprog)
    tbox, seq = tuple(tbox), tuple(seq)
    sig = _signature_for(defprog, tbox + seq, sig)
    up = Updater(sig, tbox, seq, max_atoms)
    chain: list[frozenset[int]] = []
    _iterate(_compile(defprog.rules, sig), up.update_atoms, sig, chain)
    return [InterpretationSet(sig, w) for w in chain]


def lfp(
    defprog: GroundProgram,
    tbox: Iterable[Formula],
    seq: Sequence[Formula],
    sig: Signature | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> InterpretationSet:
    """Least fixed point (w.r.t. superset) of the updating consequence operator; may be empty."""
    return lfp_trace(defprog, tbox, seq, sig, max_atoms)[-1]


def reduct(prog: GroundProgram, m: InterpretationSet) -> GroundProgram:
    """Keep rules whose negative body M satisfies (each s false somewhere in M), minus that body."""
    known = m.known_mask
    kept = []
    for r in prog.rules:
        if not m.worlds or not r.neg_body or m.sig.mask(r.neg_body) & known == 0:
            kept.append(r.stripped())
    return GroundProgram(tuple(kept))


def _solve(
    prog: GroundProgram,
    sig: Signature,
    image: Callable[[int], frozenset[int]],
) -> SolveResult:
    compiled = _compile(prog.rules, sig)
    definite = [c for c in compiled if not c[2]]
    negative = [k for k, c in enumerate(compiled) if c[2]]
    found: dict[frozenset[int], InterpretationSet] = {}
    traces = []
    for choice in itertools.product((False, True), repeat=len(negative)):
        kept = tuple(k for k, keep in zip(negative, choice) if keep)
        rules = definite + [(compiled[k][0], compiled[k][1], 0) for k in kept]
        worlds = _iterate(rules, image, sig)
        if not worlds:
            traces.append(CandidateTrace(kept, 0, "empty fixpoint"))
            continue
        known = _known(worlds, sig)
        consistent = all(
            (compiled[k][2] & known == 0) == keep for k, keep in zip(negative, choice)
        )
        if not consistent:
            traces.append(CandidateTrace(kept, len(worlds), "reduct mismatch"))
            continue
        traces.append(CandidateTrace(kept, len(worlds), "accepted"))
        found.setdefault(worlds, InterpretationSet(sig, worlds))
    models = tuple(sorted(found.values(), key=InterpretationSet.sort_key))
    return SolveResult(models, tuple(traces))


def dynamic_stable_models(
    prog: GroundProgram,
    tbox: Iterable[Formula],
    seq: Sequence[Formula],
    sig: Signature | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> SolveResult:
    """All minimal change dynamic stable models of prog updated by seq under tbox."""
    tbox, seq = tuple(tbox), tuple(seq)
    sig = _signature_for(prog, tbox + seq, sig)
    up = Updater(sig, tbox, seq, max_atoms)
    return _solve(prog, sig, up.update_atoms)


def solve(problem: UpdateProblem, max_atoms: int = DEFAULT_MAX_ATOMS) -> SolveResult:
    return dynamic_stable_models(
        problem.program, problem.tbox, problem.updates, problem.signature, max_atoms
    )


def is_dynamic_stable_model(
    prog: GroundProgram,
    tbox: Iterable[Formula],
    seq: Sequence[Formula],
    m: InterpretationSet,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> bool:
    """Direct check of the definition for a given M, independent of the candidate search."""
    if not m.worlds:
        return False
    fixed = lfp(reduct(prog, m), tbox, seq, m.sig, max_atoms)
    return fixed.worlds == m.worlds


def entails(
    prog: GroundProgram,
    tbox: Iterable[Formula],
    seq: Sequence[Formula],
    f: Formula,
    mode: Mode = "skeptical",
    sig: Signature | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    result: SolveResult | None = None,
) -> Entailment:
    """Skeptical (all models) or credulous (some model) consequence.

    With no models, skeptical entailment is vacuously true; the model count is
    returned so callers can tell.
    """
    if result is None:
        result = dynamic_stable_models(prog, tbox, seq, sig, max_atoms)
    return entailment_in(result, f, mode)


def entailment_in(result: SolveResult, f: Formula, mode: Mode = "skeptical") -> Entailment:
    verdicts = [holds_in(m, f) for m in result.models]
    if mode == "skeptical":
        ok = all(verdicts)
    elif mode == "credulous":
        ok = any(verdicts)
    else:
        raise ValueError(f"unknown entailment mode {mode!r}")
    return Entailment(ok, len(result.models), mode)


# -- static Hybrid MKNF -----------------------------------------------------


class _StaticImage:
    """Heads mask -> mod(O u heads); the static hybrid consequence operator's image."""

    def __init__(self, ontology: Iterable[Formula], sig: Signature, max_atoms: int):
        self.base = models_array(ontology, sig, max_atoms)
        self._memo: dict[int, frozenset[int]] = {}

    def __call__(self, heads: int) -> frozenset[int]:
        hit = self._memo.get(heads)
        if hit is None:
            hit = self._memo[heads] = frozenset(
                self.base[(self.base & heads) == heads].tolist()
            )
        return hit


def static_step_operator(
    ontology: Iterable[Formula],
    defprog: GroundProgram,
    m: InterpretationSet,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> InterpretationSet:
    _require_definite(defprog)
    sig = m.sig
    heads = _fired(_compile(defprog.rules, sig), m.known_mask)
    return InterpretationSet(sig, _StaticImage(ontology, sig, max_atoms)(heads))


def static_mknf_models(
    ontology: Iterable[Formula],
    prog: GroundProgram,
    sig: Signature | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> SolveResult:
    """MKNF models of <O, P> via the fixpoint characterisation M = lfp of T_<O, P^M>."""
    ontology = tuple(ontology)
    sig = _signature_for(prog, ontology, sig)
    return _solve(prog, sig, _StaticImage(ontology, sig, max_atoms))


# -- classical stable models ------------------------------------------------


def _least_model(rules: list[tuple[Atom, frozenset[Atom]]]) -> frozenset[Atom]:
    derived: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for head, body in rules:
            if head not in derived and body <= derived:
                derived.add(head)
                changed = True
    return frozenset(derived)


def classical_stable_models_oracle(
    prog: GroundProgram,
    atoms: Iterable[Atom] | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> set[frozenset[Atom]]:
    """Textbook guess-and-check: S is stable iff S is the least model of prog^S."""
    universe = sorted(prog.atoms() if atoms is None else set(atoms))
    if len(universe) > max_atoms:
        raise AtomBudgetExceeded(len(universe), max_atoms)
    stable = set()
    for size in range(len(universe) + 1):
        for guess in itertools.combinations(universe, size):
            s = frozenset(guess)
            gl = [
                (r.head, frozenset(r.pos_body))
                for r in prog.rules
                if not s.intersection(r.neg_body)
            ]
            if _least_model(gl) == s:
                stable.add(s)
    return stable


def atom_status_report(m: InterpretationSet) -> AtomStatus:
    if not m.worlds:
        raise ContractViolation("atom status is undefined for the empty set of worlds")
    known, possible = m.known_mask, m.possible_mask
    sig = m.sig
    true, false, unknown = [], [], []
    for k, a in enumerate(sig.atoms):
        if known >> k & 1:
            true.append(a)
        elif not possible >> k & 1:
            false.append(a)
        else:
            unknown.append(a)
    return AtomStatus(len(m), tuple(true), tuple(false), tuple(unknown))


__all__ = [
    "AtomStatus", "CandidateTrace", "Entailment", "SolveResult", "atom_status_report",
    "classical_stable_models_oracle", "dynamic_stable_models", "entailment_in", "entails",
    "is_dynamic_stable_model", "lfp", "lfp_trace", "reduct", "solve", "static_mknf_models",
    "static_step_operator", "step_operator",
]
