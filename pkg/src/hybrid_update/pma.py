"""Winslett's minimal change (possible models) update under a static TBox.

Every world of the old model set is moved to the worlds of mod(T u A) that
differ from it on an inclusion-minimal set of atoms. The per-predicate
closeness order of the definition coincides with inclusion of atom-level
symmetric differences because the Herbrand base is partitioned by predicate;
the fast path relies on that and the tests check it against :func:`closer_eq`.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .formula import Formula
from .model import (
    DEFAULT_MAX_ATOMS, Interpretation, InterpretationSet, Signature, _same_sig,
    models_array, satisfying,
)


def diff(predicate: str, i: Interpretation, j: Interpretation) -> frozenset[tuple[str, ...]]:
    """Argument tuples on which ``predicate`` is interpreted differently in i and j."""
    _same_sig(i.sig, j.sig)
    sig = i.sig
    sig.arity(predicate)  # unknown predicate -> SignatureMismatch
    delta = i.bits ^ j.bits
    return frozenset(
        a.args for k, a in enumerate(sig.atoms) if a.predicate == predicate and delta >> k & 1
    )


def closer_eq(i: Interpretation, j: Interpretation, j2: Interpretation) -> bool:
    """j <=_i j2: for every predicate, diff(P, i, j) is a subset of diff(P, i, j2)."""
    _same_sig(i.sig, j2.sig)
    return all(diff(p, i, j) <= diff(p, i, j2) for p, _ in i.sig.predicates)


def strictly_closer(i: Interpretation, j: Interpretation, j2: Interpretation) -> bool:
    return closer_eq(i, j, j2) and not closer_eq(i, j2, j)


def minimal_frontier(origin: int, candidates: np.ndarray) -> np.ndarray:
    """Candidates whose difference from ``origin`` is inclusion-minimal, sorted.

    Candidates are processed in order of difference size; a difference can only
    be dominated by a strictly smaller one, and if it is dominated at all it is
    dominated by a minimal one, so comparing against the frontier found so far
    suffices.
    """
    if candidates.size == 0:
        return candidates
    delta = candidates ^ origin
    if np.any(delta == 0):
        return np.array([origin], dtype=np.int64)
    sizes = np.bitwise_count(delta)
    order = np.argsort(sizes, kind="stable")
    delta, sizes = delta[order], sizes[order]
    bounds = np.flatnonzero(np.diff(sizes)) + 1
    frontier = np.empty(0, dtype=np.int64)
    for group in np.split(delta, bounds):
        if frontier.size:
            dominated = ((frontier[None, :] & ~group[:, None]) == 0).any(axis=1)
            group = group[~dominated]
        frontier = np.concatenate((frontier, group))
    return np.sort(frontier ^ origin)


class Updater:
    """Incorporates a fixed ABox sequence under a fixed TBox, with memoisation.

    The candidate sets mod(T u A_k) are computed once, and the frontier of each
    (step, world) pair is cached, since the solver pushes many overlapping
    model sets through the same sequence.
    """

    def __init__(
        self,
        sig: Signature,
        tbox: Iterable[Formula],
        seq: Sequence[Formula],
        max_atoms: int = DEFAULT_MAX_ATOMS,
    ):
        self.sig = sig
        self.tbox = tuple(tbox)
        self.seq = tuple(seq)
        self.tbox_models = models_array(self.tbox, sig, max_atoms)
        self.candidates = [satisfying(a, sig, self.tbox_models) for a in self.seq]
        self._frontiers: list[dict[int, tuple[int, ...]]] = [{} for _ in self.seq]
        self._by_heads: dict[int, frozenset[int]] = {}

    def incorporate(self, step: int, worlds: Iterable[int]) -> frozenset[int]:
        memo = self._frontiers[step]
        cands = self.candidates[step]
        out: set[int] = set()
        for w in worlds:
            hit = memo.get(w)
            if hit is None:
                hit = memo[w] = tuple(minimal_frontier(w, cands).tolist())
            out.update(hit)
        return frozenset(out)

    def run(self, worlds: Iterable[int]) -> frozenset[int]:
        current = frozenset(worlds)
        for step in range(len(self.seq)):
            if not current:
                break
            current = self.incorporate(step, current)
        return current

    def update_theory(self, theory: Iterable[Formula]) -> frozenset[int]:
        """mod(theory (+)^T seq)."""
        start = models_array(theory, self.sig, base=self.tbox_models)
        return self.run(start.tolist())

    def update_atoms(self, mask: int) -> frozenset[int]:
        """mod(S (+)^T seq) for a set S of atoms given as a bit mask."""
        hit = self._by_heads.get(mask)
        if hit is None:
            start = self.tbox_models[(self.tbox_models & mask) == mask]
            hit = self._by_heads[mask] = self.run(start.tolist())
        return hit


def incorporate_one(
    tbox: Iterable[Formula], abox: Formula, i: Interpretation, max_atoms: int = DEFAULT_MAX_ATOMS
) -> InterpretationSet:
    up = Updater(i.sig, tbox, (abox,), max_atoms)
    return InterpretationSet(i.sig, up.incorporate(0, (i.bits,)))


def incorporate_set(
    tbox: Iterable[Formula], abox: Formula, m: InterpretationSet, max_atoms: int = DEFAULT_MAX_ATOMS
) -> InterpretationSet:
    if not m.worlds:
        return m
    up = Updater(m.sig, tbox, (abox,), max_atoms)
    return InterpretationSet(m.sig, up.incorporate(0, m.ordered))


def incorporate_seq(
    tbox: Iterable[Formula],
    seq: Sequence[Formula],
    m: InterpretationSet,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> InterpretationSet:
    """Left fold of :func:`incorporate_set`; the empty sequence is the identity."""
    if not seq:
        return m
    up = Updater(m.sig, tbox, seq, max_atoms)
    return InterpretationSet(m.sig, up.run(m.ordered))


def update_models(
    tbox: Iterable[Formula],
    theory: Iterable[Formula],
    seq: Sequence[Formula],
    sig: Signature,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> InterpretationSet:
    """mod(theory (+)^T seq) = incorporate(seq, mod(T u theory))."""
    up = Updater(sig, tbox, seq, max_atoms)
    return InterpretationSet(sig, up.update_theory(theory))
