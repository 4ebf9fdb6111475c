import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybrid_update import harness as h
from hybrid_update.model import models_of

from strategies import formulas, signatures


@pytest.mark.parametrize("name", sorted(h.PROPERTIES))
def test_property_holds_on_a_small_batch(name):
    report = h.check_property(name, h.InstanceConfig(seed=7), trials=40)
    assert report.instances == 40
    assert report.ok, report.format_text()


def test_km_regressions_reproduce():
    report = h.check_property("km-regressions", h.InstanceConfig(), trials=1)
    assert report.instances == len(h.km_fixtures()) and report.ok, report.format_text()


def test_unknown_property():
    with pytest.raises(ValueError, match="unknown property"):
        h.check_property("nonsense", h.InstanceConfig(), 1)


def test_config_validation():
    with pytest.raises(ValueError):
        h.InstanceConfig(atoms=0)
    with pytest.raises(ValueError):
        h.InstanceConfig(atoms=30)
    with pytest.raises(ValueError):
        h.InstanceConfig(rules=-1)


def test_generation_is_deterministic_and_bounded():
    cfg = h.InstanceConfig(atoms=4, rules=5, tbox_clauses=2, updates=3, seed=11)
    assert h.random_instance(cfg) == h.random_instance(cfg)
    for t in range(50):
        p = h.random_instance(h.InstanceConfig(atoms=4, rules=5, tbox_clauses=2, updates=3, seed=t))
        assert 1 <= len(p.signature.atoms) <= 4
        assert len(p.program.rules) <= 5 and len(p.tbox) <= 2 and len(p.updates) <= 3


def test_reports_replay_exactly():
    cfg = h.InstanceConfig(seed=3)
    a = h.check_property("descent", cfg, 20).to_dict()
    b = h.check_property("descent", cfg, 20).to_dict()
    assert a == b == {"property": "descent", "instances": 20, "failure_count": 0, "failures": []}


def test_shrink_isolates_a_planted_failure():
    def no_negation(p, rng):
        bad = [r for r in p.program.rules if r.neg_body]
        return f"negative rule {bad[0]}" if bad else None

    for t in range(30):
        p = h.random_instance(h.InstanceConfig(rules=8, neg_prob=0.5, seed=t))
        if no_negation(p, None) and len(p.program.rules) > 1:
            break
    small = h.shrink(p, no_negation, seed=0)
    assert len(small.program.rules) == 1 and small.program.rules[0].neg_body
    assert small.tbox == () and small.updates == ()


@given(st.data())
def test_reformulation_preserves_models(data):
    sig = data.draw(signatures(max_atoms=4))
    theory = tuple(data.draw(st.lists(formulas(sig, max_leaves=4), max_size=3)))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    assert models_of(h.reformulate_theory(theory, sig.atoms, rng), sig) == models_of(theory, sig)
