import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from relkit import complete as C
from relkit import fib as B
from relkit import finrel as R
from relkit.finrel import FinSetObj, Relation

AB = FinSetObj("S", ("a", "b"))
S3 = B.SubFibration(3)


def endo(pairs, x=AB):
    return Relation(x, x, pairs)


def test_classify_endo_examples():
    assert C.classify_endo(R.identity_rel(AB)).flags() == dict.fromkeys(
        ["reflexive", "transitive", "symmetric", "coreflexive", "idempotent"], True)
    top = C.classify_endo(R.top_rel(AB, AB))
    assert top.equivalence and not top.coreflexive
    # a single off-diagonal pair composes to nothing, so it is vacuously transitive
    c = C.classify_endo(endo([("a", "b")]))
    assert c.flags() == {"reflexive": False, "transitive": True, "symmetric": False,
                         "coreflexive": False, "idempotent": False}
    assert C.classify_endo(endo([("a", "a")])).coreflexive


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 3).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2 ** (n * n) - 1))))
def test_classify_endo_pointwise(arg):
    n, code = arg
    x = R.range_set(n)
    r = Relation.from_code(x, x, code)
    p = r.pairs
    c = C.classify_endo(r)
    assert c.reflexive == all((a, a) in p for a in x)
    assert c.symmetric == all((b, a) in p for a, b in p)
    assert c.transitive == all((a, d) in p for a, b in p for b2, d in p if b == b2)
    assert c.coreflexive == all(a == b for a, b in p)


def test_endo_implications_exhaustive():
    rep = C.endo_implications(4)
    assert rep.ok, rep.text()


def test_equivalences_on_two_points_split_through_quotients():
    sc = C.split_class(C.RelAmbient(2), "eqv", 2)
    on_ab = [a for a in sc.objects if a.carrier == R.range_set(2)]
    assert len(on_ab) == 2
    for a in on_ab:
        sp = C.concrete_splitting(a.idem)
        assert len(sp.apex) == len(C.quotient_classes(a.idem))
        assert all(C.splitting_replay(a.idem).values())


def test_splitting_of_a_per_drops_outside_support():
    x = R.range_set(3)
    e = endo([("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")], x)
    sp = C.concrete_splitting(e)
    assert len(sp.apex) == 1
    assert all(C.splitting_replay(e).values())
    assert not R.map_check(sp.s_prime)


def test_splitting_suite():
    rep = C.splitting_suite(3)
    assert rep.ok, rep.text()


def test_split_class_rejects_unknown():
    with pytest.raises(ValueError):
        C.split_class(C.RelAmbient(1), "lax")


def test_split_homs_match_oracle():
    sc = C.split_class(C.RelAmbient(2), "sym", 2)
    for a in sc.objects:
        for b in sc.objects:
            want = [m for m in R.all_relations(a.carrier, b.carrier)
                    if R.compose(a.idem, m) == m == R.compose(m, b.idem)]
            assert sc.hom(a, b) == want


def test_maps_of_relations_are_functions():
    ok, fn = C.maps_are_functions(3)
    assert ok and C.certify_equivalence(fn).ok


def test_exact_completion_of_finite_sets():
    cert, ex = C.exact_completion_certificate(3)
    assert cert.ok
    assert C.exact_completion_hom_counts(ex)[0]
    # every object is isomorphic to its quotient
    assert len(ex.objects) == 9


def test_crf_splitting_is_tabular():
    rep = C.crf_tabular(3)
    assert rep.ok, rep.text()


def _per_oracle(x, r, y, s, f):
    strict = all((a, a) in r and (b, b) in s for a, b in f)
    relational = all((a2, b2) in f for a, b in f for a1, a2 in r if a1 == a for b1, b2 in s if b1 == b)
    single = all((b, b2) in s for a, b in f for a1, b2 in f if a1 == a)
    total = all(any((a, b) in f for b in y) for a in x if (a, a) in r)
    return {"strict": strict, "relational": relational, "single-valued": single, "total": total}


def _as_pairs(p):
    return {tuple(e[1:-1].split(",")) for e in p}


def _pers(x):
    out = []
    for r in R.all_relations(x, x):
        c = C.classify_endo(r)
        if c.per:
            out.append(r)
    return out


def test_per_axioms_pointwise():
    ctx = C._Ctx(S3.base)
    rng = random.Random(4)
    xs = R.universe(2)
    for _ in range(300):
        x, y = rng.choice(xs), rng.choice(xs)
        r, s = rng.choice(_pers(x)), rng.choice(_pers(y))
        f = R.random_relation(x, y, rng)
        pr = frozenset(R.pair(a, b) for a, b in r.pairs)
        ps = frozenset(R.pair(a, b) for a, b in s.pairs)
        pf = frozenset(R.pair(a, b) for a, b in f.pairs)
        got = C.per_axioms(S3, ctx, C.PerObj(x, pr), C.PerObj(y, ps), pf)
        assert got == _per_oracle(x, r.pairs, y, s.pairs, f.pairs)


def test_per_category_counts():
    pers = C.per_category(S3, 3)
    assert len(pers.objects) == sum(len(_pers(x)) for x in R.universe(3))

    def classes(o):
        return len(C.quotient_classes(Relation(o.carrier, o.carrier, _as_pairs(o.rel))))

    for a in pers.objects:
        assert pers.identity[a] == (a, a, a.rel)
        for b in pers.objects:
            assert len(pers.hom(a, b)) == classes(b) ** classes(a)


def test_per_equivalence():
    cert, pers, maps = C.per_equivalence(S3, 3)
    assert cert.ok, cert.to_json()
    assert len(pers.arrows) == len(maps.arrows)


def test_span_prime_small_is_relations():
    rep = C.span_rel_agreement(C.span_prime(2, 4))
    assert rep.ok, rep.text()


def test_span_prime_bound_three():
    sp = C.span_prime(3)
    rep = C.span_rel_agreement(sp)
    assert rep.ok, rep.text()
    x = R.range_set(3)
    assert len(sp.hom(x, x)) == sum(1 for r in R.all_relations(x, x) if len(r.pairs) <= 3)


def test_span_order_needs_a_morphism():
    sp = C.span_prime(2, 3)
    x = R.range_set(2)
    doubled = C.SpanArrow(x, x, ((0, 0), (0, 0)))
    single = C.SpanArrow(x, x, ((0, 0),))
    other = C.SpanArrow(x, x, ((1, 0),))
    assert sp.leq(doubled, single) and sp.leq(single, doubled)
    assert not sp.leq(single, other)
    assert sp.canon(doubled) == single
    assert sp.morphism(doubled, single) == {0: 0, 1: 0}


def test_span_composition_is_pullback():
    sp = C.span_prime(2, 4)
    rng = random.Random(8)
    for _ in range(100):
        x, y, z = (R.range_set(rng.randint(0, 2)) for _ in range(3))
        s = rng.choice(sp.spans(x, y))
        t = rng.choice(sp.spans(y, z))
        want = len([(a, b) for a, b in itertools.product(s.legs, t.legs) if a[1] == b[0]])
        st_ = sp.comp(s, t)
        assert len(st_.legs) == want
        assert sp.image(st_) == R.compose(sp.image(s), sp.image(t))


def test_regular_completion_of_finite_sets():
    cert, maps = C.regular_completion_certificate(C.span_prime(3), 3)
    assert cert.ok, cert.to_json()
    assert len(maps.objects) == 15


def test_maps_of_singleton_universe_is_terminal():
    m = C.maps_of(C.RelAmbient(0), 0)
    assert len(m.objects) == 1 and len(m.arrows) == 1


def test_per_examples():
    pers = C.per_category(B.SubFibration(2), 2)
    x1, x2 = R.range_set(1), R.range_set(2)
    full = C.PerObj(x2, frozenset(R.pair(a, b) for a in x2 for b in x2))
    one = C.PerObj(x1, frozenset({R.pair("0", "0")}))
    isos = [f for f in pers.hom(full, one) if pers.is_iso(f)]
    assert isos
    empty = C.PerObj(x2, frozenset())
    assert all(len(pers.hom(empty, c)) == 1 for c in pers.objects)
    ident = C.PerObj(x2, frozenset(R.pair(a, a) for a in x2))
    for y in R.universe(2):
        idy = C.PerObj(y, frozenset(R.pair(a, a) for a in y))
        assert len(pers.hom(ident, idy)) == len(list(R.all_functions(x2, y)))


def test_spans_over_points_with_nonempty_apex_are_equivalent():
    sp = C.span_prime(1, 3)
    one = R.range_set(1)
    spans = [s for s in sp.spans(one, one) if s.legs]
    assert len(spans) == 3
    assert all(sp.leq(s, t) for s in spans for t in spans)
    assert len(sp.hom(one, one)) == 2
