import random

import pytest

from relkit import fincat as FC
from relkit import prof as P
from relkit.fincat import FunctorRep

C2, C3 = FC.chain(2), FC.chain(3)
D2 = FC.discrete(["x", "y"])
VEE = FC.poset(["a", "b", "c"], lambda p, q: p == q or (p == "a" and q != "a"))
WEDGE = FC.poset(["a", "b", "c"], lambda p, q: p == q or (q == "a" and p != "a"))
POSETS = [FC.chain(1), C2, C3, D2, FC.discrete(["p", "q", "r"]), VEE, WEDGE]


def zigzag_classes(g, h, m, k):
    """Classical coend of G(m,-) x H(-,k): pairs quotiented by zig-zags."""
    L = h.cod
    triples = [(l, x, y) for l in L.objects for x in g.elems(m, l) for y in h.elems(l, k)]
    parent = {t: t for t in triples}

    def find(t):
        while parent[t] != t:
            t = parent[t]
        return t

    for u, (l, l2) in L.arrows.items():
        for x in g.elems(m, l):
            for y in h.elems(l2, k):
                a, b = find((l2, g.ract(m, u, x), y)), find((l, x, h.lact(u, k, y)))
                if a != b:
                    parent[a] = b
    out = {}
    for t in triples:
        out.setdefault(find(t), set()).add(t)
    return {frozenset(c) for c in out.values()}


def partition(comp, m, k):
    out = {}
    for t, rep in comp.meta["classes"][(m, k)].items():
        out.setdefault(rep, set()).add(t)
    return {frozenset(c) for c in out.values()}


def random_instance(rng):
    k, l, m, n = (rng.choice(POSETS) for _ in range(4))
    return (P.random_discrete_prof(k, l, rng, rng.randint(1, 3), rng.randint(0, 2)),
            P.random_discrete_prof(l, m, rng, rng.randint(1, 3), rng.randint(0, 2)),
            P.random_discrete_prof(m, n, rng, rng.randint(1, 3), rng.randint(0, 2)))


def test_hom_profunctor_valid():
    for c in POSETS:
        assert P.validate_prof(P.hom_prof(c)).ok


def test_random_profunctors_valid():
    rng = random.Random(1)
    for _ in range(30):
        k, l = rng.choice(POSETS), rng.choice(POSETS)
        assert P.validate_prof(P.random_discrete_prof(k, l, rng, 3, 3)).ok


def test_broken_action_detected():
    h = P.hom_prof(C2)
    fn = h.right[(0, (0, 1))]
    fn.obj_map[(0, 0)] = (0, 0)
    assert "actions are functors" in [c.law for c in P.validate_prof(h).failures()]


def test_coend_single_object_is_the_value():
    one = FC.terminal_cat()
    o = one.objects[0]
    t = P.Profunctor(one, one, {(o, o): C3}, {(one.id(o), o): P._identity_on(C3)},
                     {(o, one.id(o)): P._identity_on(C3)})
    assert P.validate_prof(t).ok
    c = FC.to_fincat(P.coend(t), 4)
    assert c is not None and FC.find_isomorphism(c, C3) is not None


def test_coend_co_yoneda():
    K = C2
    T = P.discrete_prof(K, K, {(a, b): [(x, y) for x in K.hom(0, b) for y in K.hom(a, 1)]
                               for a in K.objects for b in K.objects},
                        lambda u, b, xy: (xy[0], K.comp(u, xy[1])), lambda a, f, xy: (K.comp(xy[0], f), xy[1]))
    assert P.validate_prof(T).ok
    assert len(P.coend_classes(T)) == len(K.hom(0, 1)) == 1


def test_coend_empty():
    T = P.discrete_prof(C3, C3, {(a, b): [] for a in C3.objects for b in C3.objects},
                        lambda *a: None, lambda *a: None)
    assert P.coend(T).objects == ()


def test_coend_non_discrete_naturality():
    # K = 2-chain acting on values that are arrows 0 -> 1
    K = C2
    vals = {(a, b): C2 for a in K.objects for b in K.objects}
    left = {(u, b): P._identity_on(C2) for u in K.arrows for b in K.objects}
    right = {(a, f): P._identity_on(C2) for a in K.objects for f in K.arrows}
    t = P.Profunctor(K, K, vals, left, right)
    assert P.validate_prof(t).ok
    p = P.coend(t)
    assert len(FC.isomorphism_classes(p)) == 2
    c = FC.to_fincat(p, 6)
    assert c is not None and FC.validate_category(c).ok


def test_compose_matches_zigzag_oracle():
    rng = random.Random(2)
    for _ in range(25):
        h, g, _ = random_instance(rng)
        comp = P.compose_prof(g, h)
        assert P.validate_prof(comp).ok
        for m in g.cod.objects:
            for k in h.dom.objects:
                assert partition(comp, m, k) == zigzag_classes(g, h, m, k)


def test_compose_with_empty():
    e1 = P.discrete_prof(C2, C2, {(a, b): [] for a in C2.objects for b in C2.objects}, None, None)
    comp = P.compose_prof(e1, e1)
    assert comp.size() == 0


def test_compose_boundary_mismatch():
    with pytest.raises(P.ProfError):
        P.compose_prof(P.hom_prof(C2), P.hom_prof(C3))


def test_unitors_and_associator():
    rng = random.Random(3)
    for _ in range(15):
        h, g, f = random_instance(rng)
        for unitor in (P.left_unitor, P.right_unitor):
            comp, comps = unitor(h)
            assert P.check_transformation(comp, h, comps, iso=True)[0]
        a, b, comps = P.associator(f, g, h)
        assert P.check_transformation(a, b, comps, iso=True)[0]


def test_representables():
    ident = FC.identity_functor(C3)
    hom = P.hom_prof(C3)
    co = P.representable_prof(ident, "co")
    assert co.values == hom.values and all(co.lact(*k, x) == hom.lact(*k, x)
                                           for k in hom.left for x in hom.values[(hom.cod.tgt(k[0]), k[1])].objects)
    const = FunctorRep(C2, FC.terminal_cat(), {0: "*", 1: "*"}, {a: ("id", "*") for a in C2.arrows})
    assert all(len(v.objects) == 1 for v in P.representable_prof(const).values.values())
    with pytest.raises(ValueError):
        P.representable_prof(ident, "sideways")


F_DC = FunctorRep(D2, C2, {"x": 0, "y": 1}, {("id", "x"): (0, 0), ("id", "y"): (1, 1)})
F_CC = FunctorRep(C2, C3, {0: 0, 1: 2}, {(0, 0): (0, 0), (1, 1): (2, 2), (0, 1): (0, 2)})
F_COLLAPSE = FunctorRep(D2, FC.terminal_cat(), {"x": "*", "y": "*"}, {("id", "x"): ("id", "*"), ("id", "y"): ("id", "*")})


def test_adjunction_of_representables():
    for f in (F_DC, F_CC, F_COLLAPSE):
        assert all(P.adjunction_units(f).values())


def test_representable_of_composite():
    whole, target, comps = P.representable_composite_iso(F_DC, F_CC)
    assert P.check_transformation(whole, target, comps, iso=True)[0]


def test_restriction_identity():
    rng = random.Random(4)
    for _ in range(5):
        h = P.random_discrete_prof(C2, C3, rng, 4, 2)
        whole, target, comps = P.restriction_iso(h, F_CC, F_DC)
        assert P.check_transformation(whole, target, comps, iso=True)[0]


def test_kleisli_of_hom_monad():
    for c in POSETS:
        kt, ft = P.kleisli_object(P.hom_monad(c))
        iso = FC.find_isomorphism(c, kt)
        assert iso is not None and ft.validate().ok and FC.certify_equivalence(ft).ok


def test_kleisli_terminal_profunctor_is_indiscrete():
    kt, _ = P.kleisli_object(P.singleton_monad(D2))
    assert FC.find_isomorphism(kt, FC.indiscrete(["x", "y"])) is not None


def test_kleisli_z2_is_group():
    kt, ft = P.kleisli_object(P.group_monad(["e", "g"], lambda a, b: "e" if a == b else "g", "e"))
    assert len(kt.objects) == 1 and len(kt.arrows) == 2
    assert all(kt.is_iso(a) for a in kt.arrows)
    o = kt.objects[0]
    table = {(a[2], b[2]): kt.comp(a, b)[2] for a in kt.arrows for b in kt.arrows}
    assert table == {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"}
    assert kt.id(o)[2] == "e"


def test_kleisli_rejects_bad_monads():
    with pytest.raises(P.MonadLawError) as e:
        P.kleisli_object(P.group_monad(["e", "g"], lambda a, b: "g", "e"))
    assert e.value.law in ("left unit", "right unit")
    # Z/3 table with a non-associative twist
    elems = ["0", "1", "2"]

    def op(a, b):
        if a == "0":
            return b
        if b == "0":
            return a
        return "1" if (a, b) == ("1", "2") else "0" if a != b else "2"
    with pytest.raises(P.MonadLawError) as e:
        P.kleisli_object(P.group_monad(elems, op, "0"))
    assert e.value.law == "associativity"


def test_full_image_examples():
    fi = P.full_image(F_COLLAPSE)
    assert FC.find_isomorphism(fi, FC.indiscrete(["x", "y"])) is not None
    ff = FunctorRep(C2, C3, {0: 0, 1: 1}, {(0, 0): (0, 0), (1, 1): (1, 1), (0, 1): (0, 1)})
    assert FC.find_isomorphism(P.full_image(ff), C2) is not None


def test_kleisli_reproduces_full_images():
    for f in (F_DC, F_CC, F_COLLAPSE):
        assert P.kleisli_matches_full_image(f)


def test_monad_json_roundtrip():
    import json
    m = P.group_monad(["e", "g"], lambda a, b: "e" if a == b else "g", "e")
    back = P.ProfMonad.from_json(json.loads(json.dumps(m.to_json())))
    assert P.kleisli_object(back)[0] == P.kleisli_object(m)[0]
    m = P.full_image_monad(F_CC)
    back = P.ProfMonad.from_json(json.loads(json.dumps(m.to_json())))
    assert P.kleisli_object(back)[0] == P.kleisli_object(m)[0]


def test_composition_suite():
    rep = P.composition_suite(60, seed=0)
    assert rep.ok, rep.text()


def test_kleisli_suite():
    rep = P.kleisli_suite()
    assert rep.ok, rep.text()
    assert P.co_yoneda_instance() == (1, 1)
