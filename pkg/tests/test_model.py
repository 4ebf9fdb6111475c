import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_update.errors import (
    ArityConflict, AtomBudgetExceeded, ContractViolation, SignatureMismatch,
)
from hybrid_update.formula import (
    FALSE, TRUE, And, Atom, Implies, Know, Naf, Neg, Or, format_formula,
)
from hybrid_update.model import (
    Interpretation, InterpretationSet, Signature, check_budget, eval_first_order, eval_mknf,
    evaluate_many, holds_in, models_of,
)
from hybrid_update.program import GroundProgram, Rule, UpdateProblem, translate_kb, translate_rule

from oracles import naive_models
from strategies import formulas, interpretation_sets, signatures

a, b, c, p, q, r = (Atom(x) for x in "abcpqr")
ABC = Signature.propositional("abc")
PQR = Signature.propositional("pqr")


def world_sets(m):
    return {i.true_atoms for i in m}


# -- signatures ----------------------------------------------------------


def test_herbrand_base_is_sorted_by_predicate_then_args():
    sig = Signature((("P", 2), ("A", 1)), ("d", "c"))
    assert [str(x) for x in sig.atoms] == [
        "A(c)", "A(d)", "P(c,c)", "P(c,d)", "P(d,c)", "P(d,d)",
    ]
    # constants keep declaration order, atoms are sorted
    assert sig.constants == ("d", "c")
    assert sig.atoms[0] == Atom("A", ("c",))


def test_arity_conflict():
    with pytest.raises(ArityConflict):
        Signature((("A", 1), ("A", 2)), ("c",))


def test_foreign_atom_is_a_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        ABC.index(p)
    with pytest.raises(SignatureMismatch):
        eval_first_order(Interpretation(ABC, 0), p)


def test_budget():
    sig = Signature.propositional(f"x{k}" for k in range(30))
    with pytest.raises(AtomBudgetExceeded) as e:
        check_budget(sig)
    assert "30" in str(e.value)
    check_budget(sig, max_atoms=30)
    with pytest.raises(AtomBudgetExceeded):
        models_of((), sig)


# -- satisfaction --------------------------------------------------------


def test_eval_first_order_examples():
    i = Interpretation.of(ABC, [a])
    assert eval_first_order(i, Implies(b, a))
    assert not eval_first_order(i, And((a, b)))
    assert eval_first_order(i, Or((b, Neg(c), FALSE)))
    assert eval_first_order(i, TRUE) and not eval_first_order(i, FALSE)


def test_modal_formula_rejected_by_first_order_evaluation():
    with pytest.raises(ContractViolation):
        eval_first_order(Interpretation(ABC, 0), Know(a))


def test_eval_mknf_modal_atoms():
    m = models_of((p, r), PQR)
    i = next(iter(m))
    assert eval_mknf(i, m, m, Know(p))
    assert not eval_mknf(i, m, m, Know(q))
    assert eval_mknf(i, m, m, Naf(q))
    assert not eval_mknf(i, m, m, Naf(p))


def test_empty_set_conventions():
    empty = InterpretationSet(PQR, frozenset())
    i = Interpretation(PQR, 0)
    # K over nothing is vacuous, not over nothing is never witnessed
    assert eval_mknf(i, empty, empty, Know(FALSE))
    assert not eval_mknf(i, empty, empty, Naf(FALSE))
    assert holds_in(empty, FALSE)
    assert empty.known_mask == PQR.full_mask and empty.possible_mask == 0


def test_holds_in_examples():
    m = models_of((p, r), PQR)
    assert holds_in(m, Naf(q))
    assert holds_in(m, Know(And((p, r))))
    assert not holds_in(m, q)
    assert holds_in(m, Or((q, Neg(q))))


def test_models_of_example():
    m = models_of((Implies(b, a),), ABC)
    assert world_sets(m) == {
        frozenset(), frozenset({a}), frozenset({c}), frozenset({a, b}),
        frozenset({a, c}), frozenset({a, b, c}),
    }


def test_models_of_unsat_and_empty():
    assert len(models_of((a, Neg(a)), ABC)) == 0
    assert models_of((), ABC) == InterpretationSet.everything(ABC)
    with pytest.raises(ContractViolation):
        models_of((Know(a),), ABC)


def test_string_forms():
    assert format_formula(Implies(And((p, q)), Neg(r))) == "(p & q) -> !r"
    assert str(models_of((p, q, r), PQR)) == "{{p, q, r}}"


# -- invariants ----------------------------------------------------------


@st.composite
def sig_and_formulas(draw, modal=False, count=2):
    sig = draw(signatures(max_atoms=5))
    fs = draw(st.lists(formulas(sig, modal=modal), min_size=1, max_size=count))
    return sig, fs


@given(sig_and_formulas(count=3))
def test_models_of_matches_scalar_enumeration(data):
    sig, fs = data
    assert models_of(fs, sig).worlds == naive_models(fs, sig)


@given(sig_and_formulas(count=1))
def test_models_of_satisfies_its_theory(data):
    sig, (f,) = data
    m = models_of((f,), sig)
    assert holds_in(m, f)
    assert all(eval_first_order(i, f) for i in m)


@given(sig_and_formulas(count=2))
def test_models_of_union_is_intersection(data):
    sig, (f, *rest) = data
    g = rest[0] if rest else TRUE
    assert models_of((f, g), sig).worlds == models_of((f,), sig).worlds & models_of((g,), sig).worlds


@settings(max_examples=60)
@given(st.data())
def test_vectorised_matches_scalar_mknf(data):
    sig = data.draw(signatures(max_atoms=4))
    f = data.draw(formulas(sig, modal=True))
    m = data.draw(interpretation_sets(sig))
    n = data.draw(interpretation_sets(sig))
    worlds = np.arange(sig.world_count, dtype=np.int64)
    fast = np.broadcast_to(evaluate_many(f, sig, worlds, m.array, n.array), worlds.shape)
    slow = [eval_mknf(Interpretation(sig, int(w)), m, n, f) for w in worlds]
    assert fast.tolist() == slow


@given(st.data())
def test_knowledge_is_antitone(data):
    # fewer worlds, more knowledge
    sig = data.draw(signatures(max_atoms=4))
    f = data.draw(formulas(sig))
    big = data.draw(interpretation_sets(sig))
    small = InterpretationSet(sig, frozenset(w for w in big.worlds if data.draw(st.booleans())))
    if holds_in(big, Know(f)):
        assert holds_in(small, Know(f))


@given(st.data())
def test_modal_free_formulas_ignore_m_and_n(data):
    sig = data.draw(signatures(max_atoms=4))
    f = data.draw(formulas(sig))
    w = data.draw(st.integers(0, sig.world_count - 1))
    m = data.draw(interpretation_sets(sig))
    n = data.draw(interpretation_sets(sig))
    i = Interpretation(sig, w)
    assert eval_mknf(i, m, n, f) == eval_first_order(i, f)


# -- programs and the translation ---------------------------------------


def test_rule_text_and_translation():
    rule = Rule(p, (q,), (r,))
    assert str(rule) == "p :- q, not r."
    assert translate_rule(rule) == Implies(And((Know(q), Naf(r))), Know(p))
    assert translate_rule(Rule(p)) == Implies(TRUE, Know(p))
    assert str(Rule(p)) == "p."


def test_translate_kb_mixes_ontology_and_rules():
    prog = GroundProgram.of([Rule(p, (), (q,))])
    kb = translate_kb((Implies(p, r),), prog)
    assert kb == frozenset({Know(Implies(p, r)), Implies(Naf(q), Know(p))})


def test_translated_rule_semantics():
    # {p, r} as common knowledge: q is unknown, so not q fires p; K p does not give K q
    m = models_of((p, r), PQR)
    assert holds_in(m, translate_rule(Rule(p, (), (q,))))
    assert not holds_in(m, translate_rule(Rule(q, (p,))))


def test_program_dedups_preserving_order():
    prog = GroundProgram.of([Rule(p), Rule(q, (p,)), Rule(p)])
    assert prog.rules == (Rule(p), Rule(q, (p,)))
    assert prog.atoms() == {p, q}


def test_update_problem_signature_and_validation():
    prob = UpdateProblem(GroundProgram.of([Rule(p, (q,))]), (Implies(q, r),), (r,))
    assert {str(x) for x in prob.signature.atoms} == {"p", "q", "r"}
    with pytest.raises(SignatureMismatch):
        UpdateProblem(GroundProgram.of([Rule(p)]), (), (q,), signature=Signature.propositional("p"))
