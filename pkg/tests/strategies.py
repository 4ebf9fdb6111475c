"""Hypothesis strategies for signatures, formulas, programs and concepts."""
from hypothesis import strategies as st

from hybrid_update import grounder as g
from hybrid_update.formula import FALSE, TRUE, And, Atom, Iff, Implies, Know, Naf, Neg, Or
from hybrid_update.model import Interpretation, InterpretationSet, Signature
from hybrid_update.program import GroundProgram, Rule


@st.composite
def signatures(draw, min_atoms=1, max_atoms=6):
    n = draw(st.integers(min_atoms, max_atoms))
    return Signature.propositional(f"p{k}" for k in range(n))


def formulas(sig: Signature, modal=False, max_leaves=8):
    leaves = st.sampled_from(sig.atoms) | st.just(TRUE) | st.just(FALSE)

    def extend(inner):
        options = [
            inner.map(Neg),
            st.lists(inner, min_size=2, max_size=3).map(lambda a: And(tuple(a))),
            st.lists(inner, min_size=2, max_size=3).map(lambda a: Or(tuple(a))),
            st.tuples(inner, inner).map(lambda t: Implies(*t)),
            st.tuples(inner, inner).map(lambda t: Iff(*t)),
        ]
        if modal:
            options += [inner.map(Know), inner.map(Naf)]
        return st.one_of(options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def interpretations(sig: Signature):
    return st.integers(0, sig.world_count - 1).map(lambda b: Interpretation(sig, b))


def interpretation_sets(sig: Signature, min_size=0):
    return st.frozensets(st.integers(0, sig.world_count - 1), min_size=min_size).map(
        lambda ws: InterpretationSet(sig, ws)
    )


@st.composite
def programs(draw, sig: Signature, max_rules=6, definite=False):
    atoms = st.sampled_from(sig.atoms)
    rules = draw(
        st.lists(
            st.builds(
                Rule,
                atoms,
                st.lists(atoms, max_size=2).map(tuple),
                st.just(()) if definite else st.lists(atoms, max_size=2).map(tuple),
            ),
            max_size=max_rules,
        )
    )
    return GroundProgram(tuple(rules))


# -- surface syntax --

concept_names = st.sampled_from(["A", "B", "C"])
role_names = st.sampled_from(["R", "S"])
roles = st.builds(g.Role, role_names, st.booleans())


def concepts(max_leaves=6):
    leaves = st.one_of(
        concept_names.map(g.ConceptName), st.just(g.TopConcept()), st.just(g.BottomConcept())
    )

    def extend(inner):
        return st.one_of(
            inner.map(g.NotConcept),
            st.lists(inner, min_size=2, max_size=3).map(lambda a: g.AndConcept(tuple(a))),
            st.lists(inner, min_size=2, max_size=3).map(lambda a: g.OrConcept(tuple(a))),
            st.builds(g.Exists, roles, inner),
            st.builds(g.Forall, roles, inner),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


individuals = st.sampled_from(["c", "d"])
variables = st.sampled_from(["X", "Y"])
surface_atoms = st.one_of(
    st.sampled_from(["p", "q"]).map(Atom),
    st.builds(lambda n, a: Atom(n, (a,)), concept_names, individuals),
    st.builds(lambda n, a, b: Atom(n, (a, b)), role_names, individuals, individuals),
)


def update_exprs(max_leaves=6):
    leaves = st.one_of(
        surface_atoms,
        st.builds(g.ConceptAssertion, concepts(3), individuals),
        st.just(TRUE),
        st.just(FALSE),
    )

    def extend(inner):
        return st.one_of(
            inner.map(Neg),
            st.lists(inner, min_size=2, max_size=3).map(lambda a: And(tuple(a))),
            st.lists(inner, min_size=2, max_size=3).map(lambda a: Or(tuple(a))),
            st.tuples(inner, inner).map(lambda t: Implies(*t)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


template_atoms = st.one_of(
    st.sampled_from(["p", "q"]).map(Atom),
    st.builds(lambda n, a: Atom(n, (a,)), concept_names, individuals | variables),
    st.builds(lambda n, a, b: Atom(n, (a, b)), role_names, individuals | variables, individuals | variables),
)

rule_templates = st.builds(
    g.RuleTemplate,
    template_atoms,
    st.lists(template_atoms, max_size=2).map(tuple),
    st.lists(template_atoms, max_size=2).map(tuple),
)

surface_kbs = st.builds(
    g.SurfaceKb,
    st.just(("c", "d")),
    st.lists(
        st.builds(g.TboxAxiom, st.sampled_from(["subsumption", "equivalence"]), concepts(4), concepts(4)),
        max_size=3,
    ).map(tuple),
    st.lists(rule_templates, max_size=3).map(tuple),
    st.lists(update_exprs(4), max_size=3).map(tuple),
)
