import json

import pytest
from hypothesis import given, settings, strategies as st

from relkit import reglog as L
from relkit.finrel import FinSetObj


def model(sig, sorts, funs=None, preds=None):
    return L.Interpretation.from_json(sig, {"sorts": sorts, "funs": funs or {}, "preds": preds or {}})


def test_parse_simple_theory():
    sig, th = L.parse_theory("sort S; pred P : S; axiom P(x) |- x = x;")
    assert sig.sorts == ["S"] and sig.preds == {"P": ("S",)}
    (ax,) = th.axioms
    assert ax.context == (("x", "S"),)
    assert ax.antecedents == (L.Atom("P", (L.Var("x"),)),)
    assert ax.consequent == L.Eq(L.Var("x"), L.Var("x"))


def test_unicode_and_comments():
    text = """# a comment
    sort S;  fun f : S → S;
    pred R : S, S;
    axiom [x:S] ⊤ ⊢ ∃y:S. R(x, y) ∧ f(y) = x;
    """
    _, th = L.parse_theory(text)
    ax = th.axioms[0]
    assert isinstance(ax.consequent, L.Exists) and ax.antecedents == (L.Top(),)


def test_unknown_sort_reports_position():
    with pytest.raises(L.LogicError) as e:
        L.parse_theory("sort S;\npred P : Q;")
    assert e.value.pos == (2, 10) and e.value.kind == "type"


@pytest.mark.parametrize("text, kind", [
    ("sort S; pred P : S; axiom P(x) |- ;", "syntax"),
    ("sort S; pred P : S; axiom P(x, x) |- T;", "type"),
    ("sort S; sort S;", "type"),
    ("sort S; pred P : S; axiom [y:S] P(x) |- T;", "scope"),
    ("sort S; pred P : S; axiom P(x) |- exists x:S. P(x);", "scope"),
    ("sort S; axiom x = y |- T;", "type"),
    ("sort S; $", "lexical"),
    ("sort S; sort U; pred P : S; pred Q : U; axiom P(x), Q(x) |- T;", "type"),
])
def test_errors(text, kind):
    with pytest.raises(L.LogicError) as e:
        L.parse_theory(text)
    assert e.value.kind == kind and e.value.pos is not None


def test_inference_through_equations():
    sig, th = L.parse_theory("sort S; fun f : S -> S; axiom x = f(y) |- y = x;")
    assert th.axioms[0].context == (("x", "S"), ("y", "S"))


def test_tuples_concatenate():
    sig, th = L.parse_theory("sort A; sort B; pred R : A, B; fun p : A, B -> A; axiom R(<x, y>) |- p(<x, y>) = x;")
    assert th.axioms[0].context == (("x", "A"), ("y", "B"))


def test_reflexive_theory_rejects_irreflexive_model():
    sig, th = L.parse_theory("sort S; pred R : S, S; axiom T |- R(x, x);")
    i = model(sig, {"S": ["a", "b"]}, preds={"R": [["a", "b"], ["b", "a"]]})
    rep = L.check_theory(th, i)
    assert not rep.ok and rep.checks[0].witness == {"x": "a"}
    i = model(sig, {"S": ["a", "b"]}, preds={"R": [["a", "a"], ["b", "b"]]})
    assert L.check_theory(th, i).ok


def test_exists_in_empty_context():
    sig, _ = L.parse_theory("sort S; pred P : S;")
    i = model(sig, {"S": ["1", "2"]}, preds={"P": [["1"]]})
    f = L.parse_formula("exists x:S. P(x)", sig)
    assert L.eval_formula(f, i, ()) == {()}
    j = model(sig, {"S": ["1", "2"]})
    assert L.eval_formula(f, j, ()) == frozenset()


def test_empty_sort():
    sig, th = L.parse_theory("sort S; pred P : S; axiom T |- P(x);")
    i = model(sig, {"S": []})
    assert L.check_theory(th, i).ok


def test_model_validation():
    sig, _ = L.parse_theory("sort S; fun f : S -> S;")
    with pytest.raises(L.LogicError):
        model(sig, {"S": ["a", "b"]}, funs={"f": [[["a"], "a"]]})
    with pytest.raises(L.LogicError):
        L.load_model(sig, "{not json")
    i = model(sig, {"S": ["a", "b"]}, funs={"f": [[["a"], "b"], [["b"], "a"]]})
    assert json.loads(json.dumps(i.to_json())) == i.to_json()


def test_substitution_avoids_capture():
    sig, _ = L.parse_theory("sort S; pred R : S, S;")
    f = L.parse_formula("exists y:S. R(x, y)", sig)
    g = L.substitute(f, {"x": L.Var("y")})
    assert g.var != "y" and L.free_vars(g) == ["y"]
    i = model(sig, {"S": ["a", "b"]}, preds={"R": [["a", "b"]]})
    assert L.eval_formula(g, i, (("y", "S"),)) == {("a",)}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_denotation_matches_oracle(seed):
    import random
    rng = random.Random(seed)
    sig = L.random_signature(rng)
    i = L.random_model(sig, rng)
    ctx = [(f"x{k}", rng.choice(sig.sorts)) for k in range(rng.randint(0, 2))]
    f = L.random_formula(sig, rng, ctx)
    den = L.eval_formula(f, i, ctx)
    for g in L.assignments(i, ctx):
        assert (g in den) == L.holds(f, i, dict(zip([v for v, _ in ctx], g)))


def test_logic_suite():
    rep = L.logic_suite(1000, seed=1)
    assert rep.ok, rep.text()


def test_pullback_sequents_small():
    rep = L.pullback_sequent_agreement(2)
    assert rep.ok, rep.text()
    sq, which = rep.info["non-pullback counterexample"]
    assert which in ("existence", "uniqueness")


def test_pullback_sequents_on_a_product():
    x = FinSetObj("X", ("a", "b"))
    one = FinSetObj("1", ("*",))
    p = FinSetObj("P", ("aa", "ab", "ba", "bb"))
    i = L.Interpretation({"P": p, "X": x, "Xp": x, "Y": one},
                         {"u": {(e,): e[0] for e in p.elements}, "v": {(e,): e[1] for e in p.elements},
                          "t": {("a",): "*", ("b",): "*"}, "s": {("a",): "*", ("b",): "*"}}, {})
    assert all(L.satisfies_sequent(s, i)[0] for s in L.pullback_sequents())
    # drop a point: existence fails with a witness
    i.sorts["P"] = FinSetObj("P", ("aa", "ab", "ba"))
    for f in ("u", "v"):
        i.funs[f].pop(("bb",))
    ok, w = L.satisfies_sequent(L.pullback_sequents()[0], i)
    assert not ok and w == {"m": "b", "m'": "b"}
