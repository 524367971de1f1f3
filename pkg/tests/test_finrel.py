import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from relkit import finrel as F
from relkit.finrel import FinSetObj, Relation, compose, converse, identity_rel, tensor


A = FinSetObj("A", ("1", "2"))
B = FinSetObj("B", ("a",))
C = FinSetObj("C", ("p", "q"))


def brute_compose(r, s):
    return {(x, z) for (x, y) in r.pairs for (y2, z) in s.pairs if y == y2}


@st.composite
def relations(draw, max_size=4, src=None, tgt=None):
    if src is None:
        src = F.range_set(draw(st.integers(0, max_size)))
    if tgt is None:
        tgt = F.range_set(draw(st.integers(0, max_size)))
    pairs = draw(st.sets(st.tuples(st.sampled_from(src.elements or ("_",)), st.sampled_from(tgt.elements or ("_",)))))
    if not src.elements or not tgt.elements:
        pairs = set()
    return Relation(src, tgt, pairs)


def test_compose_example():
    r = Relation(A, B, [("1", "a")])
    s = Relation(B, C, [("a", "p")])
    assert compose(r, s).pairs == {("1", "p")}
    assert compose(r, s).pairs == brute_compose(r, s)


def test_compose_type_mismatch_names_boundary():
    r = Relation(A, B)
    with pytest.raises(F.CompositionError, match="B"):
        compose(r, r)


def test_compose_empty_absorbs():
    s = Relation(B, C, [("a", "p"), ("a", "q")])
    assert compose(Relation(A, B), s).is_empty()


@settings(max_examples=20)
@given(relations())
def test_identity_neutral_random(r):
    assert compose(r, identity_rel(r.tgt)) == r
    assert compose(identity_rel(r.src), r) == r


def test_identity_neutral_exhaustive():
    for a, b in itertools.product(F.universe(3), repeat=2):
        for r in F.all_relations(a, b):
            assert compose(r, identity_rel(b)) == r == compose(identity_rel(a), r)


def test_identity_examples():
    ab = FinSetObj("S", ("a", "b"))
    assert identity_rel(ab).pairs == {("a", "a"), ("b", "b")}
    assert identity_rel(F.range_set(0)).is_empty()


@settings(max_examples=200)
@given(relations(), st.data())
def test_compose_matches_brute_force(r, data):
    s = data.draw(relations(src=r.tgt))
    assert compose(r, s).pairs == brute_compose(r, s)


def test_converse_examples():
    r = Relation(A, B, [("1", "a")])
    assert converse(r).pairs == {("a", "1")}
    for a, b in itertools.product(F.universe(3), repeat=2):
        for r in F.all_relations(a, b):
            assert converse(converse(r)) == r


def test_local_products():
    r = Relation(A, B, [("1", "a")])
    s = Relation(A, B, [("1", "a"), ("2", "a")])
    meet, top = F.local_products(r, s)
    assert meet.pairs == {("1", "a")}
    assert top == F.top_rel(A, B)
    with pytest.raises(F.CompositionError):
        F.local_products(r, converse(s))


def test_meet_with_top_is_identity_operation():
    for a, b in itertools.product(F.universe(3), repeat=2):
        top = F.top_rel(a, b)
        for r in F.all_relations(a, b):
            assert (r & top) == r


def test_meet_formula_random_pairs():
    rng = random.Random(7)
    for _ in range(100):
        a, b = F.range_set(rng.randint(0, 4)), F.range_set(rng.randint(0, 4))
        r, s = F.random_relation(a, b, rng), F.random_relation(a, b, rng)
        assert F.meet_via_tensor(r, s).pairs == r.pairs & s.pairs


def test_tensor_units_and_absorption():
    for a, b in itertools.product(F.universe(3), repeat=2):
        assert tensor(identity_rel(a), identity_rel(b)) == identity_rel(F.product(a, b))
    r = Relation(A, C, [("1", "p")])
    assert tensor(r, Relation(B, B)).is_empty()


def test_tensor_pointwise():
    r = Relation(A, C, [("1", "p"), ("2", "q")])
    s = Relation(B, A, [("a", "2")])
    t = tensor(r, s)
    expect = {(F.pair(x, x2), F.pair(y, y2)) for x, y in r.pairs for x2, y2 in s.pairs}
    assert t.pairs == expect


def test_tensor_functoriality_small():
    n, w = F.tensor_functoriality_bruteforce(2)
    assert w is None and n > 0


def test_map_check():
    f = F.Fn.from_mapping(A, C, {"1": "p", "2": "p"})
    assert F.map_check(f.graph()).is_map
    res = F.map_check(Relation(A, C, [("1", "p"), ("1", "q"), ("2", "p")]))
    assert not res.is_map and res.witness == "1" and res.reason == "not single-valued"
    res = F.map_check(Relation(A, C, [("1", "p")]))
    assert not res.is_map and res.witness == "2"


def test_map_check_matches_function_enumeration():
    for a, b in itertools.product(F.universe(3), repeat=2):
        graphs = {f.graph() for f in F.all_functions(a, b)}
        for r in F.all_relations(a, b):
            assert F.map_check(r).is_map == (r in graphs)


def test_tabulate_top_is_product():
    span = F.tabulate(F.top_rel(A, C))
    assert span.apex.elements == F.product(A, C).elements
    assert span.left.table == F.proj1(A, C).table
    assert span.right.table == F.proj2(A, C).table


def test_tabulate_identity_has_equal_legs():
    span = F.tabulate(identity_rel(A))
    assert [span.left(p) for p in span.apex] == [span.right(p) for p in span.apex]
    assert len(span.apex) == len(A)


def test_tabulation_equations_random():
    rng = random.Random(3)
    for _ in range(100):
        r = F.random_relation(F.range_set(rng.randint(0, 4)), F.range_set(rng.randint(0, 4)), rng)
        span = F.tabulate(r)
        assert span.relation() == r and span.jointly_monic()


def test_relation_json_roundtrip():
    r = Relation(A, C, [("1", "p"), ("2", "q")])
    assert Relation.from_json(r.to_json()) == r


def test_modular_law_with_top():
    rng = random.Random(0)
    for _ in range(20):
        a, b, c = (F.range_set(rng.randint(0, 3)) for _ in range(3))
        r, s, t = F.top_rel(a, b), F.top_rel(b, c), F.random_relation(a, c, rng)
        lhs = compose(r, s) & t
        assert lhs <= compose(r, s & compose(converse(r), t))


def test_equality_cases_for_converse_of_map():
    for a, b, c in itertools.product(F.universe(2), repeat=3):
        for f in F.all_functions(b, a):
            r = converse(f.graph())
            for s in F.all_relations(b, c):
                for t in F.all_relations(a, c):
                    assert compose(r, s) & t == compose(r, s & compose(converse(r), t))


def test_sweep_detects_a_false_law():
    # the equality form of the modular law without its hypothesis is false
    r = F.top_rel(F.range_set(2), F.range_set(1))
    s = F.top_rel(F.range_set(1), F.range_set(1))
    t = Relation(F.range_set(2), F.range_set(1), [("0", "0")])
    assert compose(r, s) & t != compose(r, s & compose(converse(r), t))
    assert not F.is_injective(r)


def test_exhaustive_allegory_suite():
    rep = F.validate_allegory(3)
    assert rep.ok, rep.text()


def test_random_allegory_suite():
    rep = F.random_allegory_laws(2000, 5, seed=1)
    assert rep.ok, rep.text()
