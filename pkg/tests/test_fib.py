import json
import random

import pytest

from relkit import fib as B
from relkit import finrel as R
from relkit.finrel import FinSetObj, Fn


S4 = B.SubFibration(4)
S3 = B.SubFibration(3)
X12 = FinSetObj("X", ("1", "2"))
Ya = FinSetObj("Y", ("a",))
Yab = FinSetObj("Y", ("a", "b"))


def rand_fn(rng, bound=4):
    x, y = R.range_set(rng.randint(0, bound)), R.range_set(rng.randint(1, bound))
    return R.random_function(x, y, rng)


def rand_subset(rng, x):
    return frozenset(e for e in x if rng.random() < 0.5)


def test_reindex_examples():
    f = Fn.from_mapping(X12, Ya, {"1": "a", "2": "a"})
    assert B.reindex(S4, f, frozenset({"a"})) == frozenset({"1", "2"})
    p = frozenset({"1"})
    assert B.reindex(S4, Fn.identity(X12), p) == p
    with pytest.raises(B.FiberError):
        B.reindex(S4, f, frozenset({"zz"}))


def test_reindex_pointwise_oracle():
    rng = random.Random(1)
    for _ in range(100):
        f = rand_fn(rng)
        q = rand_subset(rng, f.tgt)
        want = {x for x in f.src if f.as_dict()[x] in q}
        assert B.reindex(S4, f, q) == want


def test_exists_examples_and_adjunction():
    f = Fn.from_mapping(X12, Yab, {"1": "a", "2": "a"})
    assert B.exists_along(S4, f, frozenset({"1"})) == {"a"}
    assert B.exists_along(S4, Fn.identity(X12), frozenset({"2"})) == {"2"}
    rng = random.Random(2)
    for _ in range(100):
        f = rand_fn(rng)
        p, q = rand_subset(rng, f.src), rand_subset(rng, f.tgt)
        assert (B.exists_along(S4, f, p) <= q) == (p <= B.reindex(S4, f, q))


def test_image_examples():
    onto = Fn.from_mapping(X12, Ya, {"1": "a", "2": "a"})
    assert B.image_of(S4, onto) == S4.top(Ya)
    one = FinSetObj("O", ("1",))
    t = Fn.from_mapping(one, Yab, {"1": "a"})
    assert B.image_of(S4, t) == {"a"}
    assert B.image_of(S4, Fn.identity(Yab)) == S4.top(Yab)


def test_square_generation_examples():
    base = S4.base
    sq = B.square_B(base, Ya)
    assert sq.kind == "B" and sq.u == Fn.identity(Ya) and sq.t == R.diag_fn(Ya)
    sqa = B.square_A(base, Fn.identity(Ya))
    assert sqa.commutes(base) and all(len(o) == 1 for o in sqa.objects())
    t, tp = rand_fn(random.Random(0), 2), rand_fn(random.Random(5), 2)
    squares = [sq for sq in B.gen_product_absolute_squares(S4, 2, bound_products=False)
               if sq.kind == "C" and sq.u == S4.base.times(Fn.identity(tp.src), t)
               and sq.v == S4.base.times(tp, Fn.identity(t.src))]
    assert len(squares) == 1


def test_beck_chevalley_examples():
    for x in R.universe(4):
        assert B.beck_chevalley_holds(S4, B.square_B(S4.base, x))[0]
    i = Fn.identity(X12)
    assert B.beck_chevalley_holds(S4, B.PASquare("id", X12, X12, X12, X12, i, i, i, i))[0]
    # both legs collapse onto a point; the corner only covers one pair
    one = R.range_set(1)
    c = Fn(X12, one, [0, 0])
    p = Fn(one, X12, [0])
    sq = B.PASquare("any", one, X12, X12, one, p, p, c, c)
    assert sq.commutes(S4.base)
    ok, w = B.beck_chevalley_holds(S4, sq)
    assert not ok and w["mate"]
    assert not B.is_set_pullback(sq)


def test_frobenius_examples():
    rng = random.Random(3)
    for _ in range(200):
        f = rand_fn(rng)
        a, b = rand_subset(rng, f.src), rand_subset(rng, f.tgt)
        want = {f(x) for x in a if f(x) in b}
        assert B.frobenius_check(S4, f, a, b)
        assert B.exists_along(S4, f, a & B.reindex(S4, f, b)) == want
        assert B.frobenius_check(S4, f, a, S4.top(f.tgt))
        assert B.exists_along(S4, f, B.reindex(S4, f, b)) == B.image_of(S4, f) & b


def test_comprehension_examples():
    assert B.comprehend(S4, X12, S4.top(X12)).table == (0, 1)
    i = B.comprehend(S4, X12, frozenset({"1"}))
    assert i.src.elements == ("1",) and i("1") == "1"
    for y in R.universe(3):
        for t in R.all_functions(y, X12):
            facts = B.factorizations(S4.base, t, i)
            assert len(facts) == (1 if t.image() <= {"1"} else 0)


def test_comprehension_capability_error():
    data = B.sub_as_json([R.range_set(0), R.range_set(1)])
    tab = B.TabulatedFibration.from_json(data)
    with pytest.raises(B.CapabilityError):
        B.comprehend(tab, "[1]", "[1]{0}")


def test_injections():
    inj = Fn.from_mapping(X12, FinSetObj("Z", ("p", "q", "r")), {"1": "p", "2": "r"})
    assert B.injection_test(S4, inj)
    assert not B.injection_test(S4, Fn.from_mapping(X12, Ya, {"1": "a", "2": "a"}))
    assert B.injection_test(S4, Fn.identity(X12))
    assert B.injection_test(S4, R.diag_fn(Yab))


def test_extensionality():
    ok, info = B.extensionality_test(S3)
    assert ok and info["extensional"] and info["diagonals_injective"]
    ok, _ = B.extensionality_test(B.SubFibration(1))
    assert ok


def test_sub_full_validation():
    rep = B.validate(S4)
    assert rep.ok, rep.text()


def test_sub_extras():
    rep = B.validate_sub_extras(B.SubFibration(4))
    assert rep.ok, rep.text()


def test_slice_equivalence_all_subsets_up_to_4():
    for x in R.universe(4):
        for p in S4.fiber(x):
            assert B.slice_equivalence(S4, x, p)[0]


def test_pullback_agreement_and_counterexample():
    rep = B.pullback_agreement(3)
    assert rep.ok, rep.text()
    sq = rep.info["non-pullback square satisfying beck-chevalley"]
    assert sq is not None and B.is_weak_pullback(sq) and not B.is_set_pullback(sq)


def test_tabulated_instance_roundtrip():
    data = json.loads(json.dumps(B.sub_as_json([R.range_set(0), R.range_set(1)])))
    tab = B.TabulatedFibration.from_json(data)
    rep = B.validate(tab)
    assert rep.ok, rep.text()


def test_tabulated_instance_with_broken_existential_fails():
    data = B.sub_as_json([R.range_set(0), R.range_set(1)])
    # send every predicate over [1] along the identity to the empty predicate
    ident = data["base"]["identity"]["[1]"]
    data["exists"][ident] = [[p, "[1]{}"] for p, _ in data["exists"][ident]]
    tab = B.TabulatedFibration.from_json(data)
    rep = B.validate(tab)
    assert "adjunction" in [c.law for c in rep.failures()]
