"""Slow reference implementations, written straight from the definitions.

None of these touch the frontier search, the Updater cache, vectorised
evaluation or the candidate enumeration of the solver. The naive updater
uses a dense all-pairs dominance matrix so the two-constant closed-world KB stays affordable.
"""
from __future__ import annotations

from itertools import product

import numpy as np

from hybrid_update.formula import Atom, Formula
from hybrid_update.model import Interpretation, InterpretationSet, Signature, eval_first_order
from hybrid_update.pma import closer_eq


def worlds(sig: Signature):
    return [Interpretation(sig, w) for w in range(sig.world_count)]


def naive_models(theory, sig: Signature) -> frozenset[int]:
    return frozenset(i.bits for i in worlds(sig) if all(eval_first_order(i, f) for f in theory))


def naive_incorporate_one(tbox, abox, i: Interpretation, strict_closeness=True) -> frozenset[int]:
    """incorporate^T(A, I) with the per-predicate closeness relation."""
    sig = i.sig
    cands = [Interpretation(sig, w) for w in sorted(naive_models((*tbox, abox), sig))]
    out = set()
    for j in cands:
        beaten = any(
            closer_eq(i, k, j) and not closer_eq(i, j, k) for k in cands
        ) if strict_closeness else any(
            (i.bits ^ k.bits) != (i.bits ^ j.bits) and (i.bits ^ k.bits) & ~(i.bits ^ j.bits) == 0
            for k in cands
        )
        if not beaten:
            out.add(j.bits)
    return frozenset(out)


class NaiveUpdater:
    """mod(S (+)^T seq) by brute force, memoised on (step, world)."""

    def __init__(self, sig, tbox, seq):
        self.sig, self.tbox, self.seq = sig, tuple(tbox), tuple(seq)
        self.cands = [
            np.array(sorted(naive_models((*self.tbox, a), sig)), dtype=np.int64) for a in self.seq
        ]
        self.memo = {}

    def _one(self, k, w):
        key = (k, w)
        if key not in self.memo:
            d = self.cands[k] ^ w
            # below[j, c]: diff of c is a proper subset of diff of j
            below = ((d[None, :] & ~d[:, None]) == 0) & (d[None, :] != d[:, None])
            self.memo[key] = self.cands[k][~below.any(axis=1)].tolist()
        return self.memo[key]

    def update(self, theory) -> frozenset[int]:
        current = naive_models((*self.tbox, *theory), self.sig)
        for k in range(len(self.seq)):
            current = frozenset(j for w in current for j in self._one(k, w))
        return current


def knows(sig: Signature, worlds_: frozenset[int], atom: Atom) -> bool:
    k = sig.index(atom)
    return all(w >> k & 1 for w in worlds_)


def naive_lfp(defprog, updater: NaiveUpdater) -> frozenset[int]:
    sig = updater.sig
    current = frozenset(range(sig.world_count))
    while True:
        heads = [
            r.head for r in defprog if all(knows(sig, current, q) for q in r.pos_body)
        ]
        nxt = updater.update(heads)
        if nxt == current:
            return current
        current = nxt


def naive_reduct(prog, sig, worlds_: frozenset[int]):
    return [
        r.stripped() for r in prog
        if all(not knows(sig, worlds_, s) for s in r.neg_body)
    ]


def naive_is_dynamic_model(prog, tbox, seq, m: InterpretationSet, updater=None) -> bool:
    if not m.worlds:
        return False
    updater = updater or NaiveUpdater(m.sig, tbox, seq)
    return naive_lfp(naive_reduct(prog, m.sig, m.worlds), updater) == m.worlds


def naive_dynamic_models(prog, tbox, seq, sig) -> set[frozenset[int]]:
    """Guess M directly among all nonempty S5 candidates reachable as lfp of some reduct."""
    updater = NaiveUpdater(sig, tbox, seq)
    neg_rules = [r for r in prog if r.neg_body]
    found = set()
    for choice in product((False, True), repeat=len(neg_rules)):
        kept = [r.stripped() for r, c in zip(neg_rules, choice) if c]
        definite = [r for r in prog if not r.neg_body] + kept
        m = naive_lfp(definite, updater)
        if m and naive_lfp(naive_reduct(prog, sig, m), updater) == m:
            found.add(m)
    return found


# -- a tiny description-logic evaluator over explicit relational structures --


def dl_extension(concept, interp: Interpretation, dom) -> set[str]:
    """Set-semantics extension of a concept in the structure read off ``interp``."""
    from hybrid_update import grounder as g

    def holds(atom: Atom) -> bool:
        return atom in interp.sig and atom in interp

    def role_pairs(role):
        pairs = {(a, b) for a in dom for b in dom if holds(Atom(role.name, (a, b)))}
        return {(b, a) for a, b in pairs} if role.inverse else pairs

    c = concept
    if isinstance(c, g.ConceptName):
        return {a for a in dom if holds(Atom(c.name, (a,)))}
    if isinstance(c, g.TopConcept):
        return set(dom)
    if isinstance(c, g.BottomConcept):
        return set()
    if isinstance(c, g.NotConcept):
        return set(dom) - dl_extension(c.arg, interp, dom)
    if isinstance(c, g.AndConcept):
        out = set(dom)
        for d in c.args:
            out &= dl_extension(d, interp, dom)
        return out
    if isinstance(c, g.OrConcept):
        out = set()
        for d in c.args:
            out |= dl_extension(d, interp, dom)
        return out
    if isinstance(c, (g.Exists, g.Forall)):
        inner = dl_extension(c.arg, interp, dom)
        pairs = role_pairs(c.role)
        if isinstance(c, g.Exists):
            return {a for a in dom if any((a, b) in pairs and b in inner for b in dom)}
        return {a for a in dom if all((a, b) not in pairs or b in inner for b in dom)}
    raise TypeError(c)


def classical_models_of_formula(f: Formula, sig: Signature) -> frozenset[int]:
    return naive_models((f,), sig)
