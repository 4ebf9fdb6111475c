"""Randomised checks of the semantics' structural properties.

Every check is a pure function of ``(seed, config)``: the seed fixes both the
generated instance and any extra randomness the check uses, so a failing seed
replays exactly. Failures are shrunk greedily by deleting rules, TBox
formulas and updates while the check keeps failing.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

from .formula import FALSE, TRUE, And, Atom, Formula, Implies, Neg, Or, disj
from .model import (
    DEFAULT_MAX_ATOMS, Interpretation, Signature, eval_first_order, models_of,
)
from .pma import closer_eq, incorporate_one, update_models
from .program import GroundProgram, Rule, UpdateProblem
from .solver import (
    classical_stable_models_oracle, dynamic_stable_models, is_dynamic_stable_model,
    lfp_trace, reduct, static_mknf_models, step_operator,
)


@dataclass(frozen=True)
class InstanceConfig:
    atoms: int = 5
    rules: int = 6
    neg_prob: float = 0.4
    tbox_clauses: int = 2
    updates: int = 2
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.atoms <= DEFAULT_MAX_ATOMS:
            raise ValueError(f"atom bound must be in 1..{DEFAULT_MAX_ATOMS}, got {self.atoms}")
        if min(self.rules, self.tbox_clauses, self.updates) < 0:
            raise ValueError("bounds must be non-negative")


@dataclass(frozen=True)
class Failure:
    seed: int
    description: str


@dataclass
class PropertyReport:
    name: str
    instances: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "property": self.name,
            "instances": self.instances,
            "failure_count": len(self.failures),
            "failures": [asdict(f) for f in self.failures],
        }

    def format_text(self) -> str:
        lines = [f"{self.name}: {self.instances} instances, {len(self.failures)} failures"]
        for f in self.failures:
            lines.append(f"  seed {f.seed}:")
            lines.extend("    " + line for line in f.description.splitlines())
        return "\n".join(lines)


# -- generation -------------------------------------------------------------


def _literal(rng: random.Random, atoms) -> Formula:
    a = rng.choice(atoms)
    return a if rng.random() < 0.5 else Neg(a)


def random_clause(rng: random.Random, atoms) -> Formula:
    return disj(*(_literal(rng, atoms) for _ in range(rng.randint(1, min(3, len(atoms))))))


def random_abox(rng: random.Random, atoms) -> Formula:
    if rng.random() < 0.15:
        return TRUE
    clauses = [random_clause(rng, atoms) for _ in range(rng.randint(1, 2))]
    return clauses[0] if len(clauses) == 1 else And(tuple(clauses))


def random_rule(rng: random.Random, atoms, heads, neg_prob: float) -> Rule:
    pos = tuple(rng.sample(atoms, min(rng.choice((0, 0, 1, 2)), len(atoms))))
    neg = ()
    if rng.random() < neg_prob:
        neg = tuple(rng.sample(atoms, min(rng.choice((1, 1, 2)), len(atoms))))
    return Rule(rng.choice(heads), pos, neg)


def _atoms(n: int) -> tuple[Signature, list[Atom]]:
    sig = Signature.propositional(f"p{k}" for k in range(n))
    return sig, list(sig.atoms)


def random_instance(cfg: InstanceConfig) -> UpdateProblem:
    """A propositional normal program, clause TBox and ABox sequence, fixed by ``cfg.seed``."""
    rng = random.Random(cfg.seed)
    sig, atoms = _atoms(rng.randint(1, cfg.atoms))
    rules = [random_rule(rng, atoms, atoms, cfg.neg_prob) for _ in range(rng.randint(0, cfg.rules))]
    tbox = [random_clause(rng, atoms) for _ in range(rng.randint(0, cfg.tbox_clauses))]
    updates = [random_abox(rng, atoms) for _ in range(rng.randint(0, cfg.updates))]
    return UpdateProblem(GroundProgram(tuple(rules)), tuple(tbox), tuple(updates), sig)


def _facts_only(cfg: InstanceConfig) -> UpdateProblem:
    p = random_instance(replace(cfg, updates=min(cfg.updates, 3)))
    facts = tuple(Rule(r.head) for r in p.program.rules)
    return UpdateProblem(GroundProgram(facts), p.tbox, p.updates, p.signature)


def _with_update(cfg: InstanceConfig) -> UpdateProblem:
    p = random_instance(cfg)
    if p.updates:
        return p
    rng = random.Random(cfg.seed ^ 0x5EED)
    return p.with_updates((random_abox(rng, list(p.signature.atoms)),))


def _disjoint_heads(cfg: InstanceConfig) -> UpdateProblem:
    """Head atoms and ontology atoms drawn from disjoint halves of the signature."""
    rng = random.Random(cfg.seed)
    sig, atoms = _atoms(rng.randint(2, max(2, cfg.atoms)))
    split = rng.randint(1, len(atoms) - 1)
    heads, onto = atoms[:split], atoms[split:]
    rules = [random_rule(rng, atoms, heads, cfg.neg_prob) for _ in range(rng.randint(0, cfg.rules))]
    tbox = [random_clause(rng, onto) for _ in range(rng.randint(0, cfg.tbox_clauses))]
    return UpdateProblem(GroundProgram(tuple(rules)), tuple(tbox), (random_abox(rng, onto),), sig)


def _static_only(cfg: InstanceConfig) -> UpdateProblem:
    p = random_instance(cfg)
    return UpdateProblem(p.program, (), (), p.signature)


def _empty_program(cfg: InstanceConfig) -> UpdateProblem:
    p = _with_update(cfg)
    return UpdateProblem(GroundProgram(), p.tbox, p.updates[-1:], p.signature)


# -- reformulation ----------------------------------------------------------


def reformulate(f: Formula, rng: random.Random) -> Formula:
    """A random formula with exactly the same models as ``f``."""
    choice = rng.randrange(6)
    if choice == 0:
        return Neg(Neg(f))
    if choice == 1:
        return And((f, TRUE)) if rng.random() < 0.5 else Or((FALSE, f))
    if choice == 2 and isinstance(f, (And, Or)):
        return type(f)(tuple(reversed(f.args)))
    if choice == 3 and isinstance(f, And):
        return Neg(Or(tuple(Neg(a) for a in f.args)))
    if choice == 4 and isinstance(f, Or) and len(f.args) >= 2:
        return Implies(Neg(f.args[0]), disj(*f.args[1:]))
    if choice == 5:
        return Or((And((f, TRUE)), And((f, FALSE))))
    return Neg(Neg(f))


def reformulate_theory(theory: tuple[Formula, ...], atoms, rng: random.Random) -> tuple[Formula, ...]:
    out = [reformulate(f, rng) for f in theory]
    rng.shuffle(out)
    if out and rng.random() < 0.3:
        out = [And(tuple(out))] if len(out) > 1 else out
    if rng.random() < 0.3:
        a = rng.choice(atoms)
        out.append(Or((a, Neg(a))))
    if out and rng.random() < 0.3:
        out.append(rng.choice(out))
    return tuple(out)


# -- checks -----------------------------------------------------------------

Check = Callable[[UpdateProblem, random.Random], "str | None"]


def _solve(p: UpdateProblem, seq=None):
    return dynamic_stable_models(p.program, p.tbox, p.updates if seq is None else seq, p.signature)


def _describe(p: UpdateProblem) -> str:
    parts = ["program:"]
    parts += [f"  {r}" for r in p.program.rules] or ["  (empty)"]
    parts.append("tbox: " + ("; ".join(map(str, p.tbox)) or "(empty)"))
    parts.append("updates: " + (" ; ".join(map(str, p.updates)) or "(none)"))
    return "\n".join(parts)


def _sets(result) -> list[str]:
    return [str(m) for m in result.models]


def check_primacy(p, rng):
    last = p.updates[-1]
    for m in _solve(p).models:
        if not all(eval_first_order(i, last) for i in m):
            return f"model {m} violates the last update {last}"


def check_syntax_independence(p, rng):
    atoms = list(p.signature.atoms)
    tbox = reformulate_theory(p.tbox, atoms, rng)
    seq = tuple(reformulate(a, rng) for a in p.updates)
    a = dynamic_stable_models(p.program, p.tbox, p.updates, p.signature)
    b = dynamic_stable_models(p.program, tbox, seq, p.signature)
    if a.world_sets() != b.world_sets():
        return (
            f"reformulated tbox {'; '.join(map(str, tbox))} and updates "
            f"{' ; '.join(map(str, seq))} give {_sets(b)} instead of {_sets(a)}"
        )


def check_mknf_agreement(p, rng):
    dyn = dynamic_stable_models(p.program, p.tbox, p.updates, p.signature)
    static = static_mknf_models(p.tbox + p.updates, p.program, p.signature)
    if dyn.world_sets() != static.world_sets():
        return f"dynamic {_sets(dyn)} vs static {_sets(static)}"


def check_stable_generalisation(p, rng):
    res = dynamic_stable_models(p.program, (), (), p.signature)
    oracle = classical_stable_models_oracle(p.program, p.signature.atoms)
    got = {}
    for m in res.models:
        s = frozenset(p.signature.atoms_in(m.known_mask))
        got[s] = m
        if m != models_of(s, p.signature):
            return f"model {m} is not mod({sorted(map(str, s))})"
    if len(res.models) != len(oracle) or set(got) != oracle:
        fmt = lambda ss: sorted(sorted(map(str, s)) for s in ss)
        return f"solver known-true sets {fmt(got)} vs stable models {fmt(oracle)}"


def check_winslett_generalisation(p, rng):
    facts = [r.head for r in p.program.rules]
    expected = update_models(p.tbox, facts, p.updates, p.signature)
    res = _solve(p)
    want = {expected.worlds} if expected.worlds else set()
    if res.world_sets() != want:
        return f"solver {_sets(res)} vs minimal change update {expected}"


def check_empty_update(p, rng):
    pos = rng.randint(0, len(p.updates))
    seq = p.updates[:pos] + (TRUE,) + p.updates[pos:]
    a, b = _solve(p), _solve(p, seq)
    if a.world_sets() != b.world_sets():
        return f"inserting true at position {pos} changes {_sets(a)} into {_sets(b)}"


def check_empty_program(p, rng):
    expected = models_of(p.tbox + p.updates, p.signature)
    res = _solve(p)
    want = {expected.worlds} if expected.worlds else set()
    if res.world_sets() != want:
        return f"solver {_sets(res)} vs mod(T u A) = {expected}"


def _relational_signature(rng: random.Random) -> Signature:
    preds = [("A", 1), ("B", 1), ("R", 2), ("p", 0)]
    chosen = rng.sample(preds, rng.randint(1, len(preds)))
    return Signature(tuple(chosen), ("c", "d")[: rng.randint(1, 2)])


def check_closeness_equivalence(p, rng):
    for sig in (p.signature, _relational_signature(rng)):
        if not len(sig):
            continue
        i, j, j2 = (Interpretation(sig, rng.getrandbits(len(sig))) for _ in range(3))
        atom_level = (i.bits ^ j.bits) & ~(i.bits ^ j2.bits) == 0
        if closer_eq(i, j, j2) != atom_level:
            return f"closer_eq({i}, {j}, {j2}) disagrees with symmetric-difference inclusion"


def naive_incorporate(tbox, abox, i: Interpretation) -> frozenset[int]:
    """All-pairs minimality filter over the full candidate list."""
    sig = i.sig
    cands = [
        w for w in range(sig.world_count)
        if all(eval_first_order(Interpretation(sig, w), f) for f in (*tbox, abox))
    ]
    keep = set()
    for j in cands:
        dj = i.bits ^ j
        if not any((i.bits ^ k) != dj and (i.bits ^ k) & ~dj == 0 for k in cands):
            keep.add(j)
    return frozenset(keep)


def check_incorporate_oracle(p, rng):
    sig = p.signature
    abox = p.updates[0] if p.updates else random_abox(rng, list(sig.atoms))
    i = Interpretation(sig, rng.getrandbits(len(sig)))
    fast = incorporate_one(p.tbox, abox, i).worlds
    slow = naive_incorporate(p.tbox, abox, i)
    if fast != slow:
        show = lambda ws: sorted(str(Interpretation(sig, w)) for w in ws)
        return f"incorporate({abox}, {i}): {show(fast)} vs naive {show(slow)}"


def check_descent(p, rng):
    definite = GroundProgram(tuple(r.stripped() for r in p.program.rules if rng.random() < 0.7))
    chain = lfp_trace(definite, p.tbox, p.updates, p.signature)
    if len(chain) > p.signature.world_count + 1:
        return f"iteration took {len(chain)} steps"
    for k in range(1, len(chain)):
        if not chain[k] <= chain[k - 1]:
            return f"step {k} grew: {chain[k - 1]} -> {chain[k]} for {definite}"
    last = chain[-1]
    if step_operator(definite, p.tbox, p.updates, last) != last:
        return f"final iterate {last} is not a fixed point for {definite}"


def check_fixpoint_certificate(p, rng):
    for m in _solve(p).models:
        if not is_dynamic_stable_model(p.program, p.tbox, p.updates, m):
            return f"accepted model {m} fails the direct definition check"
        if step_operator(reduct(p.program, m), p.tbox, p.updates, m) != m:
            return f"accepted model {m} is not a fixed point of its reduct's operator"


# -- KM postulate fixtures --------------------------------------------------


def km_fixtures() -> list[tuple[str, Callable[[], bool]]]:
    p, q, r = Atom("p"), Atom("q"), Atom("r")
    sig = Signature.propositional("pqr")
    cumul = GroundProgram((
        Rule(p, (), (q,)), Rule(q, (), (p,)), Rule(r, (q,), (r,)), Rule(r, (p,)),
    ))
    pr, qr = models_of([p, r], sig).worlds, models_of([q, r], sig).worlds

    def models(prog, seq, s=sig):
        return dynamic_stable_models(prog, (), seq, s).world_sets()

    sig2 = Signature.propositional("pq")
    p1 = GroundProgram((Rule(p), Rule(q)))
    p2 = GroundProgram((Rule(p), Rule(q, (p,))))
    return [
        ("the cumulativity program alone has the single model mod({p, r})",
         lambda: models(cumul, ()) == {pr}),
        ("KM2 fails: the cumulativity program updated by r gains mod({q, r})",
         lambda: models(cumul, (r,)) == {pr, qr}),
        ("KM3 fails: {p <- q, not p} updated by q has no model",
         lambda: models(GroundProgram((Rule(p, (q,), (p,)),)), (q,), sig2) == set()),
        ("KM4 program half fails: {p. q.} and {p. q <- p.} differ after !p",
         lambda: models(p1, (Neg(p),), sig2) == {models_of([Neg(p), q], sig2).worlds}
         and models(p2, (Neg(p),), sig2) == {models_of([Neg(p)], sig2).worlds}),
        ("KM6 fails: updating by p | q leaves only mod({p, r})",
         lambda: models(cumul, (Or((p, q)),)) == {pr}),
    ]


def run_km_regressions() -> PropertyReport:
    report = PropertyReport("km-regressions")
    for k, (label, check) in enumerate(km_fixtures()):
        report.instances += 1
        if not check():
            report.failures.append(Failure(k, f"fixture did not reproduce: {label}"))
    return report


# -- driver -----------------------------------------------------------------

PROPERTIES: dict[str, tuple[Callable[[InstanceConfig], UpdateProblem], Check]] = {
    "primacy": (_with_update, check_primacy),
    "syntax-independence": (random_instance, check_syntax_independence),
    "mknf-agreement": (_disjoint_heads, check_mknf_agreement),
    "stable-generalisation": (_static_only, check_stable_generalisation),
    "winslett-generalisation": (_facts_only, check_winslett_generalisation),
    "empty-update": (random_instance, check_empty_update),
    "empty-program": (_empty_program, check_empty_program),
    "closeness-equivalence": (random_instance, check_closeness_equivalence),
    "descent": (random_instance, check_descent),
    "incorporate-oracle": (random_instance, check_incorporate_oracle),
    "fixpoint-certificate": (random_instance, check_fixpoint_certificate),
}

PROPERTY_NAMES = tuple(PROPERTIES) + ("km-regressions",)


def trial_seed(base: int, trial: int) -> int:
    return base * 1_000_003 + trial


def shrink(p: UpdateProblem, check: Check, seed: int) -> UpdateProblem:
    """Greedy deletion of rules, TBox formulas and updates, keeping the failure."""

    def fails(cand: UpdateProblem) -> bool:
        return check(cand, random.Random(seed)) is not None

    changed = True
    while changed:
        changed = False
        for field_name in ("rules", "tbox", "updates"):
            items = p.program.rules if field_name == "rules" else getattr(p, field_name)
            k = 0
            while k < len(items):
                rest = items[:k] + items[k + 1:]
                if field_name == "rules":
                    cand = UpdateProblem(GroundProgram(rest), p.tbox, p.updates, p.signature)
                elif field_name == "tbox":
                    cand = UpdateProblem(p.program, rest, p.updates, p.signature)
                else:
                    cand = UpdateProblem(p.program, p.tbox, rest, p.signature)
                try:
                    still = fails(cand)
                except (IndexError, ValueError):
                    still = False
                if still:
                    p, items, changed = cand, rest, True
                else:
                    k += 1
    return p


def check_property(name: str, cfg: InstanceConfig, trials: int) -> PropertyReport:
    if name == "km-regressions":
        return run_km_regressions()
    try:
        generate, check = PROPERTIES[name]
    except KeyError:
        raise ValueError(
            f"unknown property {name!r}; choose from {', '.join(PROPERTY_NAMES)}"
        ) from None
    report = PropertyReport(name)
    for t in range(trials):
        seed = trial_seed(cfg.seed, t)
        problem = generate(replace(cfg, seed=seed))
        report.instances += 1
        message = check(problem, random.Random(seed))
        if message is not None:
            small = shrink(problem, check, seed)
            detail = check(small, random.Random(seed)) or message
            report.failures.append(Failure(seed, f"{detail}\n{_describe(small)}"))
    return report
