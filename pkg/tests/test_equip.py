import random

import pytest

from relkit import equip as E
from relkit import fib as B
from relkit import finrel as R
from relkit.equip import Cell, Pro
from relkit.finrel import FinSetObj, Fn


S3 = B.SubFibration(3)
M = E.matr(S3)
X = FinSetObj("X", ("1", "2"))
Y = FinSetObj("Y", ("a", "b", "c"))


def rel(x, y, pairs):
    return E.from_relation(R.Relation(x, y, pairs))


def test_hom_posets_are_powersets():
    for x in R.universe(3):
        for y in R.universe(3):
            assert len(M.hom(x, y)) == 2 ** (len(x) * len(y))


def test_matr_matches_relations_exhaustively():
    rep = E.matr_relation_agreement(M, 3)
    assert rep.ok, rep.text()


def test_companion_is_graph():
    f = Fn.from_mapping(X, Y, {"1": "a", "2": "c"})
    assert E.to_relation(M.companion(f)) == f.graph()
    assert E.to_relation(M.conjoint(f)) == R.converse(f.graph())


def test_composition_type_error():
    with pytest.raises(R.CompositionError):
        M.comp(M.ident(X), M.ident(Y))


def test_pred_fibers_are_powersets():
    P = E.pred(M)
    for x in R.universe(3):
        fiber = P.fiber(x)
        # X x 1 is X via the first projection
        subsets = {frozenset(e[1:].rsplit(",", 1)[0] for e in p.value) for p in fiber}
        assert subsets == set(S3.fiber(x))
    f = Fn.identity(X)
    for p in P.fiber(X):
        assert P.reindex(f, p) == p
    for x in R.universe(2):
        for y in R.universe(2):
            for f in R.all_functions(x, y):
                assert B.adjunction_holds(P, f)[0]


def test_mates_of_identity_cells():
    m = rel(X, Y, [("1", "a"), ("2", "b")])
    c = Cell(Fn.identity(X), Fn.identity(Y), m, m)
    for side in ("left", "right"):
        lhs, rhs = E.mate_of_cell(M, c, side)
        assert lhs == m and rhs == m
    assert E.exact_cell(M, c)


def test_mate_forms_random():
    rep = E.mate_forms_agree(M, 100, 3, seed=5)
    assert rep.ok, rep.text()


def test_exact_cells_examples():
    base = S3.base
    for x in R.universe(3):
        assert E.square_exact(M, B.square_B(base, x)) == (True, True)
        assert E.square_exact(M, E.coassociativity_square(base, x)) == (True, True)
    one = R.range_set(1)
    c = Fn(X, one, [0, 0])
    p = Fn(one, X, [0])
    sq = B.PASquare("collapse", one, X, X, one, p, p, c, c)
    assert E.square_exact(M, sq) == (False, False)


def test_pullback_squares_give_exact_cells():
    n = 0
    for sq in B.commuting_squares(2):
        exact = E.square_exact(M, sq)
        assert exact[0] == exact[1] == B.is_weak_pullback(sq)
        if B.is_set_pullback(sq):
            n += 1
            assert exact == (True, True)
    assert n > 0


def test_tabulate_top_and_identity():
    top = M.top(X, Y)
    tab = E.tabulate_proarrow(M, top)
    assert len(tab.apex) == 6
    assert [tab.left(z) for z in tab.apex] == [R.proj1(X, Y)(tab.inclusion(z)) for z in tab.apex]
    assert E.to_relation(top) == R.Relation(X, Y, [(tab.left(z), tab.right(z)) for z in tab.apex])
    tab = E.tabulate_proarrow(M, M.ident(X))
    assert len(tab.apex) == 2
    assert all(tab.left(z) == tab.right(z) for z in tab.apex)


def test_tabulation_needs_comprehension():
    data = B.sub_as_json([R.range_set(0), R.range_set(1)])
    tab = E.matr(B.TabulatedFibration.from_json(data))
    x = "[1]"
    with pytest.raises(B.CapabilityError):
        E.tabulate_proarrow(tab, tab.top(x, x))


def test_tabulation_universal_small():
    for x in R.universe(2):
        for y in R.universe(2):
            for m in M.hom(x, y):
                ok, _ = E.tabulation_universal(M, E.tabulate_proarrow(M, m), 2)
                assert ok


def test_comonad_of_proarrow():
    m = M.ident(X)
    g = E.comonad_of_proarrow(M, m)
    diag = {R.pair(R.pair(a, a), R.pair(a, a)) for a in X}
    assert g.G.value == diag
    empty = Pro(X, Y, frozenset())
    assert E.comonad_of_proarrow(M, empty).G.value == frozenset()
    rng = random.Random(2)
    for _ in range(50):
        x, y = R.range_set(rng.randint(0, 2)), R.range_set(rng.randint(0, 2))
        r = E.from_relation(R.random_relation(x, y, rng))
        c = E.comonad_of_proarrow(M, r)
        assert all(E.comonad_laws(M, c).values())
        # G_R is the coreflexive on the pairs of R
        xy = R.product(x, y)
        assert c.G.value == {R.pair(p, p) for p in xy if p in r.value}


def test_em_objects():
    for c in E.all_comonads(M, Y):
        em = E.em_object(M, c)
        support = [a for a in Y if R.pair(a, a) in c.G.value]
        assert len(em.apex) == len(support)
        assert {em.leg(z) for z in em.apex} == set(support)
    ident = E.em_object(M, E.ComonadPro(X, M.ident(X)))
    assert len(ident.apex) == 2 and ident.leg.is_injective()


def test_em_suite():
    rep = E.em_suite(M, 3)
    assert rep.ok, rep.text()


def test_tabulation_correspondence():
    rep = E.tabulation_correspondence(M, 3)
    assert rep.ok, rep.text()


def test_validate_cartesian_regular():
    rep = E.validate_cartesian_regular(M, 3)
    assert rep.ok, rep.text()


def test_validate_equipment_laws():
    rep = E.validate_equipment(M, 3, triple_bound=1)
    assert rep.ok, rep.text()


def test_degenerate_one_object_equipment():
    data = B.sub_as_json([R.range_set(1)])
    eq = E.matr(B.TabulatedFibration.from_json(data))
    assert E.validate_cartesian_regular(eq).ok
    assert E.validate_equipment(eq).ok


def test_roundtrip_isomorphism():
    back = E.matr(E.pred(M))
    iso, rep = E.roundtrip_iso(M, back, 2)
    assert rep.ok, rep.text()
    m = rel(R.range_set(2), R.range_set(1), [("0", "0")])
    assert iso(m).value.value == {R.pair(R.pair("0", "0"), "0")}


def test_pred_needs_terminal():
    class Bare(E.Equipment):
        terminal = None
    with pytest.raises(B.CapabilityError):
        E.pred(Bare())
