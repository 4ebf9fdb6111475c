"""Signatures, interpretations, satisfaction and exhaustive model enumeration.

An interpretation over a signature is encoded as an ``int`` whose bit ``k`` is
set iff the ``k``-th atom of the canonical Herbrand base is true. Sets of
interpretations are frozensets of such ints; bulk evaluation goes through
numpy arrays of the same encoding.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import ArityConflict, AtomBudgetExceeded, ContractViolation, SignatureMismatch
from .formula import (
    And, Atom, Bottom, Formula, Iff, Implies, Know, Naf, Neg, Or, Top, is_first_order,
)

DEFAULT_MAX_ATOMS = 20
# numpy int64 encoding; enumeration is impractical long before this anyway
_HARD_LIMIT = 62


@dataclass(frozen=True)
class Signature:
    """Predicates with arities plus a finite constant set; induces the Herbrand base."""

    predicates: tuple[tuple[str, int], ...]
    constants: tuple[str, ...] = ()
    atoms: tuple[Atom, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arities: dict[str, int] = {}
        for name, arity in self.predicates:
            if arities.setdefault(name, arity) != arity:
                raise ArityConflict(
                    f"{name!r} used with arity {arities[name]} and arity {arity}"
                )
        constants = tuple(dict.fromkeys(self.constants))
        object.__setattr__(self, "predicates", tuple(sorted(arities.items())))
        object.__setattr__(self, "constants", constants)
        atoms = sorted(
            Atom(name, args)
            for name, arity in self.predicates
            for args in itertools.product(constants, repeat=arity)
        )
        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "_index", {a: k for k, a in enumerate(atoms)})

    @classmethod
    def propositional(cls, names: Iterable[str]) -> Signature:
        return cls(tuple((n, 0) for n in names))

    @classmethod
    def covering(cls, atoms: Iterable[Atom], constants: Iterable[str] = ()) -> Signature:
        """Smallest signature whose predicates include those of ``atoms``."""
        atoms = list(atoms)
        consts = list(constants) + [c for a in atoms for c in a.args]
        return cls(tuple({(a.predicate, a.arity) for a in atoms}), tuple(consts))

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, atom: Atom) -> bool:
        return atom in self._index

    def index(self, atom: Atom) -> int:
        try:
            return self._index[atom]
        except KeyError:
            raise SignatureMismatch(f"atom {atom} is not in the signature") from None

    def bit(self, atom: Atom) -> int:
        return 1 << self.index(atom)

    def mask(self, atoms: Iterable[Atom]) -> int:
        bits = 0
        for a in atoms:
            bits |= 1 << self.index(a)
        return bits

    def atoms_in(self, bits: int) -> tuple[Atom, ...]:
        return tuple(a for k, a in enumerate(self.atoms) if bits >> k & 1)

    def arity(self, predicate: str) -> int:
        for name, arity in self.predicates:
            if name == predicate:
                return arity
        raise SignatureMismatch(f"unknown predicate {predicate!r}")

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    @property
    def world_count(self) -> int:
        return 1 << len(self.atoms)


def check_budget(sig: Signature, max_atoms: int = DEFAULT_MAX_ATOMS) -> None:
    n = len(sig)
    if n > min(max_atoms, _HARD_LIMIT):
        raise AtomBudgetExceeded(n, min(max_atoms, _HARD_LIMIT))


@dataclass(frozen=True)
class Interpretation:
    sig: Signature
    bits: int

    @classmethod
    def of(cls, sig: Signature, true_atoms: Iterable[Atom]) -> Interpretation:
        return cls(sig, sig.mask(true_atoms))

    @property
    def true_atoms(self) -> frozenset[Atom]:
        return frozenset(self.sig.atoms_in(self.bits))

    def __contains__(self, atom: Atom) -> bool:
        return bool(self.bits >> self.sig.index(atom) & 1)

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.sig.atoms_in(self.bits))) + "}"


@dataclass(frozen=True)
class InterpretationSet:
    """A set of worlds; nonempty sets are MKNF interpretations."""

    sig: Signature
    worlds: frozenset[int]

    @classmethod
    def of(cls, sig: Signature, members: Iterable[Interpretation | Iterable[Atom]]) -> InterpretationSet:
        bits = set()
        for m in members:
            if isinstance(m, Interpretation):
                _same_sig(sig, m.sig)
                bits.add(m.bits)
            else:
                bits.add(sig.mask(m))
        return cls(sig, frozenset(bits))

    @classmethod
    def from_array(cls, sig: Signature, arr: np.ndarray) -> InterpretationSet:
        return cls(sig, frozenset(arr.tolist()))

    @classmethod
    def everything(cls, sig: Signature, max_atoms: int = DEFAULT_MAX_ATOMS) -> InterpretationSet:
        check_budget(sig, max_atoms)
        return cls(sig, frozenset(range(sig.world_count)))

    def __len__(self) -> int:
        return len(self.worlds)

    def __iter__(self):
        for bits in self.ordered:
            yield Interpretation(self.sig, bits)

    def __contains__(self, item: Interpretation) -> bool:
        return item.bits in self.worlds

    def __le__(self, other: InterpretationSet) -> bool:
        return self.worlds <= other.worlds

    def __ge__(self, other: InterpretationSet) -> bool:
        return self.worlds >= other.worlds

    @cached_property
    def ordered(self) -> tuple[int, ...]:
        return tuple(sorted(self.worlds))

    @cached_property
    def array(self) -> np.ndarray:
        return np.fromiter(self.ordered, dtype=np.int64, count=len(self.worlds))

    @cached_property
    def known_mask(self) -> int:
        """Atoms true in every member (all atoms when empty)."""
        acc = self.sig.full_mask
        for w in self.worlds:
            acc &= w
        return acc

    @cached_property
    def possible_mask(self) -> int:
        """Atoms true in some member."""
        acc = 0
        for w in self.worlds:
            acc |= w
        return acc

    def sort_key(self) -> tuple:
        return (len(self.worlds), self.ordered)

    def __str__(self) -> str:
        return "{" + ", ".join(str(i) for i in self) + "}"


def _same_sig(a: Signature, b: Signature) -> None:
    if a is not b and a != b:
        raise SignatureMismatch("arguments are over different signatures")


# -- satisfaction -----------------------------------------------------------


def _eval_world(bits: int, f: Formula, sig: Signature, m, n) -> bool:
    if isinstance(f, Atom):
        return bool(bits >> sig.index(f) & 1)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Neg):
        return not _eval_world(bits, f.arg, sig, m, n)
    if isinstance(f, And):
        return all(_eval_world(bits, a, sig, m, n) for a in f.args)
    if isinstance(f, Or):
        return any(_eval_world(bits, a, sig, m, n) for a in f.args)
    if isinstance(f, Implies):
        return not _eval_world(bits, f.left, sig, m, n) or _eval_world(bits, f.right, sig, m, n)
    if isinstance(f, Iff):
        return _eval_world(bits, f.left, sig, m, n) == _eval_world(bits, f.right, sig, m, n)
    if isinstance(f, Know):
        if m is None:
            raise ContractViolation(f"modal formula {f} given where a first-order one is required")
        return all(_eval_world(j, f.arg, sig, m, n) for j in m)
    if isinstance(f, Naf):
        if n is None:
            raise ContractViolation(f"modal formula {f} given where a first-order one is required")
        return any(not _eval_world(j, f.arg, sig, m, n) for j in n)
    raise TypeError(f"not a formula: {f!r}")


def eval_first_order(i: Interpretation, f: Formula) -> bool:
    """Classical truth of a ground modal-free formula in one world."""
    return _eval_world(i.bits, f, i.sig, None, None)


def eval_mknf(i: Interpretation, m: InterpretationSet, n: InterpretationSet, f: Formula) -> bool:
    """Truth in the MKNF structure (i, m, n); m and n may be empty."""
    _same_sig(i.sig, m.sig)
    _same_sig(i.sig, n.sig)
    return _eval_world(i.bits, f, i.sig, m.ordered, n.ordered)


def evaluate_many(
    f: Formula,
    sig: Signature,
    worlds: np.ndarray,
    m: np.ndarray | None = None,
    n: np.ndarray | None = None,
):
    """Vectorised satisfaction over an array of worlds.

    Returns a boolean array aligned with ``worlds``, or a plain bool for
    subformulas that do not depend on the world (modal atoms, constants).
    """
    if isinstance(f, Atom):
        return ((worlds >> sig.index(f)) & 1).astype(bool)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Neg):
        return np.logical_not(evaluate_many(f.arg, sig, worlds, m, n))
    if isinstance(f, And):
        acc = True
        for a in f.args:
            acc = np.logical_and(acc, evaluate_many(a, sig, worlds, m, n))
        return acc
    if isinstance(f, Or):
        acc = False
        for a in f.args:
            acc = np.logical_or(acc, evaluate_many(a, sig, worlds, m, n))
        return acc
    if isinstance(f, Implies):
        return np.logical_or(
            np.logical_not(evaluate_many(f.left, sig, worlds, m, n)),
            evaluate_many(f.right, sig, worlds, m, n),
        )
    if isinstance(f, Iff):
        return np.equal(
            evaluate_many(f.left, sig, worlds, m, n), evaluate_many(f.right, sig, worlds, m, n)
        )
    if isinstance(f, Know):
        if m is None:
            raise ContractViolation(f"modal formula {f} given where a first-order one is required")
        # an empty m makes K vacuous even when the argument is world-independent
        return len(m) == 0 or bool(np.all(evaluate_many(f.arg, sig, m, m, n)))
    if isinstance(f, Naf):
        if n is None:
            raise ContractViolation(f"modal formula {f} given where a first-order one is required")
        return len(n) > 0 and not np.all(evaluate_many(f.arg, sig, n, m, n))
    raise TypeError(f"not a formula: {f!r}")


def satisfying(f: Formula, sig: Signature, worlds: np.ndarray) -> np.ndarray:
    """The sub-array of ``worlds`` classically satisfying first-order ``f``."""
    keep = evaluate_many(f, sig, worlds)
    if isinstance(keep, (bool, np.bool_)):
        return worlds if keep else worlds[:0]
    return worlds[keep]


def holds_in(m: InterpretationSet, f: Formula) -> bool:
    """M |= f: f true in (I, M, M) for every I in M; vacuously true for M = {}."""
    if not m.worlds:
        # still reject foreign atoms
        evaluate_many(f, m.sig, np.zeros(1, dtype=np.int64), m.array, m.array)
        return True
    arr = m.array
    return bool(np.all(evaluate_many(f, m.sig, arr, arr, arr)))


def all_worlds_array(sig: Signature, max_atoms: int = DEFAULT_MAX_ATOMS) -> np.ndarray:
    check_budget(sig, max_atoms)
    return np.arange(sig.world_count, dtype=np.int64)


def models_array(
    theory: Iterable[Formula], sig: Signature, max_atoms: int = DEFAULT_MAX_ATOMS,
    base: np.ndarray | None = None,
) -> np.ndarray:
    worlds = all_worlds_array(sig, max_atoms) if base is None else base
    for f in theory:
        if not is_first_order(f):
            raise ContractViolation(f"mod() is undefined for the modal formula {f}")
        worlds = satisfying(f, sig, worlds)
    return worlds


def models_of(
    theory: Iterable[Formula], sig: Signature, max_atoms: int = DEFAULT_MAX_ATOMS
) -> InterpretationSet:
    """All worlds satisfying every formula of a first-order theory (the greatest S5 model)."""
    return InterpretationSet.from_array(sig, models_array(theory, sig, max_atoms))
