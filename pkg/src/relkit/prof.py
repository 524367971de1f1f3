"""Cat-valued profunctors between finite categories.

A profunctor H: K -|-> L has values H(l, k), contravariant in l and
covariant in k.  ``left[(u, k)]`` is the action of u: l' -> l in L, a
functor H(l, k) -> H(l', k); ``right[(l, f)]`` is the action of f: k -> k'
in K, a functor H(l, k) -> H(l, k').  Composition, representables and
Kleisli objects work with discrete (set-valued) values; coends accept any
finite values and return a presentation.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable

from .fincat import (FinCat, FunctorRep, PresentedCat, Word, discrete, find_isomorphism,
                     isomorphism_classes, localize, validate_category, _listify, _tuplify)
from .report import Report


class ProfError(ValueError):
    pass


class MonadLawError(ProfError):
    def __init__(self, law: str, witness: Any):
        super().__init__(f"monad law {law!r} fails at {witness!r}")
        self.law = law
        self.witness = witness


def _key(x: Any) -> str:
    return repr(x)


@dataclass
class Profunctor:
    dom: FinCat
    cod: FinCat
    values: dict                      # (l, k) -> FinCat
    left: dict                        # (u, k) -> FunctorRep
    right: dict                       # (l, f) -> FunctorRep
    meta: dict = field(default_factory=dict)

    # -- discrete access
    def elems(self, l, k) -> tuple:
        return self.values[(l, k)].objects

    def lact(self, u, k, x):
        return self.left[(u, k)].obj_map[x]

    def ract(self, l, f, x):
        return self.right[(l, f)].obj_map[x]

    def is_discrete(self) -> bool:
        return all(len(v.arrows) == len(v.objects) for v in self.values.values())

    def size(self) -> int:
        return sum(len(v.objects) for v in self.values.values())


def _discrete_map(src: FinCat, tgt: FinCat, fn: dict) -> FunctorRep:
    return FunctorRep(src, tgt, dict(fn), {src.id(x): tgt.id(fn[x]) for x in src.objects})


def discrete_prof(dom: FinCat, cod: FinCat, sets: dict, lact: Callable, ract: Callable, **meta) -> Profunctor:
    """Set-valued profunctor from element lists and action functions
    ``lact(u, k, x)`` and ``ract(l, f, x)``."""
    values = {(l, k): discrete(sets[(l, k)]) for l in cod.objects for k in dom.objects}
    left, right = {}, {}
    for u, (l2, l) in cod.arrows.items():
        for k in dom.objects:
            left[(u, k)] = _discrete_map(values[(l, k)], values[(l2, k)],
                                         {x: lact(u, k, x) for x in values[(l, k)].objects})
    for f, (k, k2) in dom.arrows.items():
        for l in cod.objects:
            right[(l, f)] = _discrete_map(values[(l, k)], values[(l, k2)],
                                          {x: ract(l, f, x) for x in values[(l, k)].objects})
    return Profunctor(dom, cod, values, left, right, dict(meta))


def _same_functor(a: FunctorRep, b: FunctorRep) -> bool:
    return a.obj_map == b.obj_map and a.arr_map == b.arr_map


def _identity_on(c: FinCat) -> FunctorRep:
    return FunctorRep(c, c, {x: x for x in c.objects}, {f: f for f in c.arrows})


def validate_prof(t: Profunctor) -> Report:
    """Each action is a functor; actions are functorial and commute."""
    rep = Report("profunctor")
    K, L = t.dom, t.cod
    bad = [key for key, fn in list(t.left.items()) + list(t.right.items()) if not fn.validate().ok]
    rep.add("actions are functors", "each action is a functor between values", not bad, bad[:3] or None,
            len(t.left) + len(t.right))
    if bad:
        return rep
    bad, n = [], 0
    for l in L.objects:
        for k in K.objects:
            n += 1
            ident = _identity_on(t.values[(l, k)])
            if not _same_functor(t.left[(L.id(l), k)], ident) or not _same_functor(t.right[(l, K.id(k))], ident):
                bad.append((l, k))
    rep.add("identity actions", "identities act trivially", not bad, bad[:3] or None, n)
    bad, n = [], 0
    for (u, v), w in L.table.items():       # w = u;v : l'' -> l
        for k in K.objects:
            n += 1
            if not _same_functor(t.left[(v, k)].then(t.left[(u, k)]), t.left[(w, k)]):
                bad.append(("left", u, v, k))
    for (f, g), h in K.table.items():
        for l in L.objects:
            n += 1
            if not _same_functor(t.right[(l, f)].then(t.right[(l, g)]), t.right[(l, h)]):
                bad.append(("right", f, g, l))
    rep.add("actions functorial", "composites act as composites", not bad, bad[:3] or None, n)
    bad, n = [], 0
    for u, (l2, l) in L.arrows.items():
        for f, (k, k2) in K.arrows.items():
            n += 1
            a = t.left[(u, k)].then(t.right[(l2, f)])
            b = t.right[(l, f)].then(t.left[(u, k2)])
            if not _same_functor(a, b):
                bad.append((u, f))
    rep.add("actions commute", "left and right actions commute", not bad, bad[:3] or None, n)
    return rep


# ------------------------------------------------------------------ representables


def hom_prof(k: FinCat) -> Profunctor:
    return discrete_prof(k, k, {(a, b): k.hom(a, b) for a in k.objects for b in k.objects},
                         lambda u, b, x: k.comp(u, x), lambda a, f, x: k.comp(x, f))


def representable_prof(f: FunctorRep, side: str = "co") -> Profunctor:
    """side "co": L(1,F): K -|-> L with values L(l, Fk); side "contra":
    L(F,1): L -|-> K with values L(Fk, l)."""
    K, L = f.dom, f.cod
    F = f.obj_map
    if side == "co":
        return discrete_prof(K, L, {(l, k): L.hom(l, F[k]) for l in L.objects for k in K.objects},
                             lambda u, k, x: L.comp(u, x), lambda l, g, x: L.comp(x, f(g)))
    if side == "contra":
        return discrete_prof(L, K, {(k, l): L.hom(F[k], l) for k in K.objects for l in L.objects},
                             lambda g, l, x: L.comp(f(g), x), lambda k, v, x: L.comp(x, v))
    raise ValueError(f"side must be 'co' or 'contra', not {side!r}")


def restrict(h: Profunctor, g: FunctorRep, f: FunctorRep) -> Profunctor:
    """H(G, F): K -|-> J for H: L -|-> M, F: K -> L and G: J -> M."""
    if f.cod != h.dom or g.cod != h.cod:
        raise ProfError("restriction functors do not land in the profunctor's boundary")
    K, J = f.dom, g.dom
    return discrete_prof(K, J, {(j, k): h.elems(g.obj_map[j], f.obj_map[k]) for j in J.objects for k in K.objects},
                         lambda u, k, x: h.lact(g(u), f.obj_map[k], x),
                         lambda j, a, x: h.ract(g.obj_map[j], f(a), x))


# ------------------------------------------------------------------ coends


def coend(t: Profunctor) -> PresentedCat:
    """Two-sided elements of t: objects (k, x) for x in T(k,k), fiber arrows
    and action arrows a(f, z): (k, f.z) -> (k', z.f) for f: k -> k' and z in
    T(k', k), with the action arrows inverted."""
    K = t.dom
    if t.cod != K:
        raise ProfError("coend needs an endo-profunctor")
    objs = [(k, x) for k in K.objects for x in t.values[(k, k)].objects]
    gens: dict = {}
    rels: list = []
    nonid = [f for f in K.arrows if not K.is_identity(f)]

    def fib_letters(k, alpha) -> tuple:
        v = t.values[(k, k)]
        return () if v.is_identity(alpha) else (("fib", k, alpha),)

    for k in K.objects:
        v = t.values[(k, k)]
        for a, (s, e) in v.arrows.items():
            if not v.is_identity(a):
                gens[("fib", k, a)] = ((k, s), (k, e))
    for f in nonid:
        k, k2 = K.arrows[f]
        for z in t.values[(k2, k)].objects:
            gens[("act", f, z)] = ((k, t.lact(f, k, z)), (k2, t.ract(k2, f, z)))

    def word(letters, obj) -> Word:
        if not letters:
            return Word(obj, obj, ())
        return Word(gens[letters[0]][0], gens[letters[-1]][1], tuple(letters))

    for k in K.objects:
        v = t.values[(k, k)]
        for (a, b), c in v.table.items():
            if v.is_identity(a) or v.is_identity(b):
                continue
            s = (k, v.src(a))
            rels.append((word(fib_letters(k, a) + fib_letters(k, b), s), word(fib_letters(k, c), s)))
    for f in nonid:
        k, k2 = K.arrows[f]
        for g in nonid:
            if K.src(g) != k2:
                continue
            k3 = K.tgt(g)
            fg = K.comp(f, g)
            for z in t.values[(k3, k)].objects:
                gz = t.lact(g, k, z)
                zf = t.ract(k3, f, z)
                lhs = word((("act", f, gz), ("act", g, zf)), None)
                rhs_letters = () if K.is_identity(fg) else (("act", fg, z),)
                rels.append((lhs, word(rhs_letters, lhs.src)))
        val = t.values[(k2, k)]
        for alpha, (z, z2) in val.arrows.items():
            if val.is_identity(alpha):
                continue
            fa = t.left[(f, k)].arr_map[alpha]
            af = t.right[(k2, f)].arr_map[alpha]
            lhs = fib_letters(k, fa) + (("act", f, z2),)
            rhs = (("act", f, z),) + fib_letters(k2, af)
            rels.append((word(lhs, None), word(rhs, None)))
    p = PresentedCat(tuple(objs), gens, rels)
    return localize(p, [g for g in gens if g[0] == "act"])


def coend_classes(t: Profunctor) -> list[list]:
    """Isomorphism classes of the coend, each sorted, in canonical order."""
    classes = [sorted(c, key=_key) for c in isomorphism_classes(coend(t))]
    return sorted(classes, key=lambda c: _key(c[0]))


# ------------------------------------------------------------------ composition


def _need_discrete(*ts: Profunctor) -> None:
    for t in ts:
        if not t.is_discrete():
            raise ProfError("composition is implemented for set-valued profunctors")


def compose_prof(g: Profunctor, h: Profunctor) -> Profunctor:
    """G o H for H: K -|-> L and G: L -|-> M; the value at (m, k) is the set
    of isomorphism classes of the coend over l of G(m, l) x H(l, k).  Each
    class is named by its least representative (l, x, y)."""
    if h.cod != g.dom:
        raise ProfError("boundary mismatch: codomain of the first profunctor is not the domain of the second")
    _need_discrete(g, h)
    K, L, M = h.dom, h.cod, g.cod
    sets, classes = {}, {}
    for m in M.objects:
        for k in K.objects:
            prod = discrete_prof(
                L, L, {(a, b): [(x, y) for x in g.elems(m, b) for y in h.elems(a, k)]
                       for a in L.objects for b in L.objects},
                lambda u, b, xy: (xy[0], h.lact(u, k, xy[1])),
                lambda a, f, xy: (g.ract(m, f, xy[0]), xy[1]))
            cls = {}
            reps = []
            for block in coend_classes(prod):
                rep = min(((l, x, y) for l, (x, y) in block), key=_key)
                reps.append(rep)
                for l, (x, y) in block:
                    cls[(l, x, y)] = rep
            sets[(m, k)] = reps
            classes[(m, k)] = cls

    def lact(u, k, c):
        l, x, y = c
        return classes[(M.src(u), k)][(l, g.lact(u, l, x), y)]

    def ract(m, f, c):
        l, x, y = c
        return classes[(m, K.tgt(f))][(l, x, h.ract(l, f, y))]

    return discrete_prof(K, M, sets, lact, ract, classes=classes)


def class_of(t: Profunctor, m, k, triple):
    return t.meta["classes"][(m, k)][triple]


def check_transformation(p: Profunctor, q: Profunctor, comps: dict, iso: bool = False) -> tuple[bool, Any]:
    """comps[(l, k)] maps elements of P(l, k) to Q(l, k); checks totality,
    typing, naturality in both variables and (optionally) bijectivity."""
    K, L = p.dom, p.cod
    for l in L.objects:
        for k in K.objects:
            c = comps.get((l, k), {})
            src, tgt = set(p.elems(l, k)), set(q.elems(l, k))
            if set(c) != src or not set(c.values()) <= tgt:
                return False, ("typing", l, k)
            if iso and (len(set(c.values())) != len(c) or set(c.values()) != tgt):
                return False, ("not bijective", l, k)
    for u, (l2, l) in L.arrows.items():
        for k in K.objects:
            for x in p.elems(l, k):
                if comps[(l2, k)][p.lact(u, k, x)] != q.lact(u, k, comps[(l, k)][x]):
                    return False, ("left naturality", u, k, x)
    for f, (k, k2) in K.arrows.items():
        for l in L.objects:
            for x in p.elems(l, k):
                if comps[(l, k2)][p.ract(l, f, x)] != q.ract(l, f, comps[(l, k)][x]):
                    return False, ("right naturality", l, f, x)
    return True, None


def left_unitor(h: Profunctor) -> tuple[Profunctor, dict]:
    """hom_L o H -> H, (l', u, y) |-> u.y."""
    comp = compose_prof(hom_prof(h.cod), h)
    comps = {(l, k): {c: h.lact(c[1], k, c[2]) for c in comp.elems(l, k)}
             for l in h.cod.objects for k in h.dom.objects}
    return comp, comps


def right_unitor(h: Profunctor) -> tuple[Profunctor, dict]:
    """H o hom_K -> H, (k', y, f) |-> y.f."""
    comp = compose_prof(h, hom_prof(h.dom))
    comps = {(l, k): {c: h.ract(l, c[2], c[1]) for c in comp.elems(l, k)}
             for l in h.cod.objects for k in h.dom.objects}
    return comp, comps


def associator(f: Profunctor, g: Profunctor, h: Profunctor) -> tuple[Profunctor, Profunctor, dict]:
    """(F o G) o H -> F o (G o H) on representatives:
    (l, [m', x, y], z) |-> (m', x, [l, y, z])."""
    fg_h = compose_prof(compose_prof(f, g), h)
    gh = compose_prof(g, h)
    f_gh = compose_prof(f, gh)
    comps = {}
    for n in f.cod.objects:
        for k in h.dom.objects:
            c = {}
            for l, fg_el, z in fg_h.elems(n, k):
                m2, x, y = fg_el
                c[(l, fg_el, z)] = class_of(f_gh, n, k, (m2, x, class_of(gh, m2, k, (l, y, z))))
            comps[(n, k)] = c
    return fg_h, f_gh, comps


def restriction_iso(h: Profunctor, g: FunctorRep, f: FunctorRep) -> tuple[Profunctor, Profunctor, dict]:
    """M(G,1) o (H o L(1,F)) -> H(G, F), (m, x, [l, y, u]) |-> x.y.u."""
    mg = representable_prof(g, "contra")
    lf = representable_prof(f, "co")
    inner = compose_prof(h, lf)
    whole = compose_prof(mg, inner)
    target = restrict(h, g, f)
    comps = {}
    for j in g.dom.objects:
        for k in f.dom.objects:
            c = {}
            for m, x, cls in whole.elems(j, k):
                l, y, u = cls
                c[(m, x, cls)] = h.lact(x, f.obj_map[k], h.ract(m, u, y))
            comps[(j, k)] = c
    return whole, target, comps


def representable_composite_iso(f: FunctorRep, g: FunctorRep) -> tuple[Profunctor, Profunctor, dict]:
    """M(1,G) o L(1,F) -> M(1,GF), (l, x, y) |-> x;G(y)."""
    whole = compose_prof(representable_prof(g, "co"), representable_prof(f, "co"))
    target = representable_prof(f.then(g), "co")
    comps = {(m, k): {c: g.cod.comp(c[1], g(c[2])) for c in whole.elems(m, k)}
             for m in g.cod.objects for k in f.dom.objects}
    return whole, target, comps


# ------------------------------------------------------------------ adjunction of representables


def adjunction_units(f: FunctorRep) -> dict:
    """Unit hom_K -> L(F,1) o L(1,F) and counit L(1,F) o L(F,1) -> hom_L,
    each checked for naturality, plus both triangle composites."""
    K, L = f.dom, f.cod
    H = representable_prof(f, "co")
    G = representable_prof(f, "contra")
    GH = compose_prof(G, H)
    HG = compose_prof(H, G)
    hk, hl = hom_prof(K), hom_prof(L)
    F = f.obj_map
    eta = {(k2, k): {a: class_of(GH, k2, k, (F[k], f(a), L.id(F[k]))) for a in K.hom(k2, k)}
           for k2 in K.objects for k in K.objects}
    eps = {(l, l2): {c: L.comp(c[1], c[2]) for c in HG.elems(l, l2)} for l in L.objects for l2 in L.objects}
    out = {"unit natural": check_transformation(hk, GH, eta)[0],
           "counit natural": check_transformation(HG, hl, eps)[0]}
    # counit is well defined on every representative, not only the chosen one
    out["counit well defined"] = all(L.comp(x, y) == eps[(l, l2)][rep]
                                     for (l, l2), cl in HG.meta["classes"].items()
                                     for (_, x, y), rep in cl.items())
    # Triangles, read through the unitors and the associator on representatives.
    # With eta(1_k) = [m, g, h]: for x in H(l, k), [k, x, [m, g, h]] reassociates
    # to [m, [k, x, g], h], the counit sends the inner class to x;g and the left
    # unitor returns x;g;h.  Dually y in G(k, l) goes to g;h;y.
    tri_h = tri_g = True
    for k in K.objects:
        m, g_el, h_el = eta[(k, k)][K.id(k)]
        for l in L.objects:
            for x in H.elems(l, k):
                inner = class_of(HG, l, m, (k, x, g_el))
                tri_h = tri_h and L.comp(eps[(l, m)][inner], h_el) == x
            for y in G.elems(k, l):
                inner = class_of(HG, m, l, (k, h_el, y))
                tri_g = tri_g and L.comp(g_el, eps[(m, l)][inner]) == y
    out["triangle (left)"] = tri_h
    out["triangle (right)"] = tri_g
    return out


# ------------------------------------------------------------------ monads and Kleisli objects


@dataclass
class ProfMonad:
    """A monad on K in set-valued profunctors: unit[(j, k)][f] in T(j, k)
    for f: j -> k, mult[(j, l, k)][(x, y)] in T(j, k) for x in T(j, l) and
    y in T(l, k) (first x then y)."""
    carrier: FinCat
    T: Profunctor
    unit: dict
    mult: dict

    def to_json(self) -> dict:
        K, T = self.carrier, self.T
        return {
            "carrier": K.to_json(),
            "values": [{"src": _listify(j), "tgt": _listify(k), "elements": [_listify(x) for x in T.elems(j, k)]}
                       for j in K.objects for k in K.objects],
            "left": [{"arrow": _listify(u), "at": _listify(k),
                      "map": [[_listify(x), _listify(y)] for x, y in fn.obj_map.items()]}
                     for (u, k), fn in T.left.items() if not K.is_identity(u)],
            "right": [{"at": _listify(j), "arrow": _listify(f),
                       "map": [[_listify(x), _listify(y)] for x, y in fn.obj_map.items()]}
                      for (j, f), fn in T.right.items() if not K.is_identity(f)],
            "unit": [{"arrow": _listify(a), "value": _listify(x)} for c in self.unit.values() for a, x in c.items()],
            "mult": [{"src": _listify(j), "via": _listify(l), "tgt": _listify(k), "left": _listify(x),
                      "right": _listify(y), "value": _listify(z)}
                     for (j, l, k), c in self.mult.items() for (x, y), z in c.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ProfMonad":
        K = FinCat.from_json(data["carrier"])
        sets = {(j, k): [] for j in K.objects for k in K.objects}
        for v in data["values"]:
            sets[(_tuplify(v["src"]), _tuplify(v["tgt"]))] = [_tuplify(x) for x in v["elements"]]
        lmap = {(_tuplify(e["arrow"]), _tuplify(e["at"])): {_tuplify(x): _tuplify(y) for x, y in e["map"]}
                for e in data.get("left", [])}
        rmap = {(_tuplify(e["at"]), _tuplify(e["arrow"])): {_tuplify(x): _tuplify(y) for x, y in e["map"]}
                for e in data.get("right", [])}

        def lact(u, k, x):
            return x if K.is_identity(u) else lmap[(u, k)][x]

        def ract(j, f, x):
            return x if K.is_identity(f) else rmap[(j, f)][x]

        try:
            T = discrete_prof(K, K, sets, lact, ract)
        except KeyError as e:
            raise ProfError(f"missing action entry {e}") from None
        unit = {(j, k): {} for j in K.objects for k in K.objects}
        for e in data["unit"]:
            a = _tuplify(e["arrow"])
            unit[K.arrows[a]][a] = _tuplify(e["value"])
        mult: dict = {}
        for e in data["mult"]:
            key = (_tuplify(e["src"]), _tuplify(e["via"]), _tuplify(e["tgt"]))
            mult.setdefault(key, {})[(_tuplify(e["left"]), _tuplify(e["right"]))] = _tuplify(e["value"])
        return cls(K, T, unit, mult)


def check_monad(t: ProfMonad) -> None:
    """Raise MonadLawError naming the first failing law and component."""
    K, T = t.carrier, t.T
    rep = validate_prof(T)
    if not rep.ok:
        f = rep.failures()[0]
        raise MonadLawError(f.law, f.witness)
    objs = K.objects

    def mu(j, l, k, x, y):
        try:
            return t.mult[(j, l, k)][(x, y)]
        except KeyError:
            raise MonadLawError("multiplication defined", (j, l, k, x, y)) from None

    for j in objs:
        for k in objs:
            for a in K.hom(j, k):
                if t.unit.get((j, k), {}).get(a) not in T.elems(j, k):
                    raise MonadLawError("unit defined", (j, k, a))
    for j in objs:
        for l in objs:
            for k in objs:
                for x in T.elems(j, l):
                    for y in T.elems(l, k):
                        if mu(j, l, k, x, y) not in T.elems(j, k):
                            raise MonadLawError("multiplication typed", (j, l, k, x, y))
    for a, (j, k) in K.arrows.items():
        for u in K.arrows:
            j2, j1 = K.arrows[u]
            if j1 == j and t.unit[(j2, k)][K.comp(u, a)] != T.lact(u, k, t.unit[(j, k)][a]):
                raise MonadLawError("unit natural (left)", (u, a))
            if K.src(u) == k and t.unit[(j, K.tgt(u))][K.comp(a, u)] != T.ract(j, u, t.unit[(j, k)][a]):
                raise MonadLawError("unit natural (right)", (a, u))
    for f, (l, l2) in K.arrows.items():
        for j in objs:
            for k in objs:
                for x in T.elems(j, l):
                    for y in T.elems(l2, k):
                        if mu(j, l2, k, T.ract(j, f, x), y) != mu(j, l, k, x, T.lact(f, k, y)):
                            raise MonadLawError("multiplication balanced", (f, x, y))
    for u, (j2, j) in K.arrows.items():
        for l in objs:
            for k in objs:
                for x in T.elems(j, l):
                    for y in T.elems(l, k):
                        if mu(j2, l, k, T.lact(u, l, x), y) != T.lact(u, k, mu(j, l, k, x, y)):
                            raise MonadLawError("multiplication natural (left)", (u, x, y))
                        for v, (k1, k2) in K.arrows.items():
                            if k1 == k and mu(j, l, k2, x, T.ract(l, v, y)) != T.ract(j, v, mu(j, l, k, x, y)):
                                raise MonadLawError("multiplication natural (right)", (x, y, v))
    for j in objs:
        for k in objs:
            for x in T.elems(j, k):
                if mu(j, j, k, t.unit[(j, j)][K.id(j)], x) != x:
                    raise MonadLawError("left unit", (j, k, x))
                if mu(j, k, k, x, t.unit[(k, k)][K.id(k)]) != x:
                    raise MonadLawError("right unit", (j, k, x))
    for a in objs:
        for b in objs:
            for c in objs:
                for d in objs:
                    for x in T.elems(a, b):
                        for y in T.elems(b, c):
                            xy = mu(a, b, c, x, y)
                            for z in T.elems(c, d):
                                if mu(a, c, d, xy, z) != mu(a, b, d, x, mu(b, c, d, y, z)):
                                    raise MonadLawError("associativity", (x, y, z))


def kleisli_object(t: ProfMonad) -> tuple[FinCat, FunctorRep]:
    """K_T: objects of K, hom(j, k) = T(j, k), identities from the unit and
    composition from the multiplication; F_T sends f to unit(f)."""
    check_monad(t)
    K, T = t.carrier, t.T
    arrows = [((j, k, x), j, k) for j in K.objects for k in K.objects for x in T.elems(j, k)]
    identity = {j: (j, j, t.unit[(j, j)][K.id(j)]) for j in K.objects}
    table = {}
    for (j, l, k), c in t.mult.items():
        for (x, y), z in c.items():
            table[((j, l, x), (l, k, y))] = (j, k, z)
    kt = FinCat(K.objects, arrows, identity, table, name="Kleisli")
    rep = validate_category(kt)
    if not rep.ok:  # pragma: no cover - check_monad covers the category laws
        raise MonadLawError(rep.failures()[0].law, rep.failures()[0].witness)
    ft = FunctorRep(K, kt, {j: j for j in K.objects},
                    {a: (j, k, t.unit[(j, k)][a]) for a, (j, k) in K.arrows.items()})
    return kt, ft


def hom_monad(k: FinCat) -> ProfMonad:
    objs = k.objects
    return ProfMonad(k, hom_prof(k), {(a, b): {f: f for f in k.hom(a, b)} for a in objs for b in objs},
                     {(a, b, c): {(f, g): k.comp(f, g) for f in k.hom(a, b) for g in k.hom(b, c)}
                      for a in objs for b in objs for c in objs})


def full_image_monad(f: FunctorRep) -> ProfMonad:
    """L(F, F) with unit F on arrows and multiplication by composition in L."""
    K, L = f.dom, f.cod
    F = f.obj_map
    T = discrete_prof(K, K, {(j, k): L.hom(F[j], F[k]) for j in K.objects for k in K.objects},
                      lambda u, k, x: L.comp(f(u), x), lambda j, a, x: L.comp(x, f(a)))
    objs = K.objects
    unit = {(j, k): {a: f(a) for a in K.hom(j, k)} for j in objs for k in objs}
    mult = {(a, b, c): {(x, y): L.comp(x, y) for x in T.elems(a, b) for y in T.elems(b, c)}
            for a in objs for b in objs for c in objs}
    return ProfMonad(K, T, unit, mult)


def full_image(f: FunctorRep) -> FinCat:
    """Objects of K; hom(j, k) = L(Fj, Fk)."""
    K, L = f.dom, f.cod
    F = f.obj_map
    arrows = [((j, k, u), j, k) for j in K.objects for k in K.objects for u in L.hom(F[j], F[k])]
    identity = {j: (j, j, L.id(F[j])) for j in K.objects}
    table = {}
    for (x, j, l) in arrows:
        for (y, l2, k) in arrows:
            if l == l2:
                table[(x, y)] = (j, k, L.comp(x[2], y[2]))
    return FinCat(K.objects, arrows, identity, table, name="full image")


def singleton_monad(k: FinCat) -> ProfMonad:
    """The terminal profunctor with its unique monad structure."""
    objs = k.objects
    T = discrete_prof(k, k, {(a, b): ["*"] for a in objs for b in objs}, lambda u, b, x: "*", lambda a, f, x: "*")
    return ProfMonad(k, T, {(a, b): {f: "*" for f in k.hom(a, b)} for a in objs for b in objs},
                     {(a, b, c): {("*", "*"): "*"} for a in objs for b in objs for c in objs})


def group_monad(elements: list, mult: Callable, unit) -> ProfMonad:
    """A group (or monoid) as a monad on the terminal category."""
    from .fincat import terminal_cat
    one = terminal_cat()
    o = one.objects[0]
    T = discrete_prof(one, one, {(o, o): list(elements)}, lambda u, b, x: x, lambda a, f, x: x)
    return ProfMonad(one, T, {(o, o): {one.id(o): unit}},
                     {(o, o, o): {(x, y): mult(x, y) for x in elements for y in elements}})


def kleisli_matches_full_image(f: FunctorRep) -> bool:
    kt, ft = kleisli_object(full_image_monad(f))
    fi = full_image(f)
    return kt == fi and find_isomorphism(kt, fi) is not None and ft.validate().ok


# ------------------------------------------------------------------ random set-valued profunctors


def random_discrete_prof(k: FinCat, l: FinCat, rng: random.Random, generators: int = 3, merges: int = 2) -> Profunctor:
    """A quotient of a free profunctor: free on a few generators at random
    components, then random identifications closed under the actions."""
    gens = [(rng.choice(l.objects), rng.choice(k.objects)) for _ in range(generators)]
    elems = {(a, b): [] for a in l.objects for b in k.objects}
    for i, (l0, k0) in enumerate(gens):
        for b in k.objects:
            for f in k.hom(k0, b):
                for a in l.objects:
                    for u in l.hom(a, l0):
                        elems[(a, b)].append((i, u, f))
    parent = {x: x for xs in elems.values() for x in xs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y) -> bool:
        a, b = find(x), find(y)
        if a == b:
            return False
        lo, hi = sorted((a, b), key=_key)
        parent[hi] = lo
        return True

    comps = [c for c, xs in elems.items() if len(xs) > 1]
    for _ in range(merges if comps else 0):
        c = rng.choice(comps)
        x, y = rng.sample(elems[c], 2)
        union(x, y)

    def lfree(u, x):
        i, v, f = x
        return (i, l.comp(u, v), f)

    def rfree(g, x):
        i, v, f = x
        return (i, v, k.comp(f, g))

    changed = True
    while changed:
        changed = False
        for (a, b), xs in elems.items():
            for x in xs:
                for y in xs:
                    if x < y and find(x) == find(y):
                        for u in l.arrows:
                            if l.tgt(u) == a and union(lfree(u, x), lfree(u, y)):
                                changed = True
                        for g in k.arrows:
                            if k.src(g) == b and union(rfree(g, x), rfree(g, y)):
                                changed = True
    names = {x: f"g{find(x)[0]}:{find(x)[1]}:{find(x)[2]}" for x in parent}
    sets = {c: sorted({names[x] for x in xs}) for c, xs in elems.items()}
    back = {}
    for x in parent:
        back.setdefault(names[x], x)
    return discrete_prof(k, l, sets, lambda u, b, n: names[lfree(u, back[n])],
                         lambda a, g, n: names[rfree(g, back[n])])


# ------------------------------------------------------------------ suites


def zigzag_partition(g: Profunctor, h: Profunctor, m, k) -> set:
    """Classical set-profunctor composite at (m, k): triples (l, x, y)
    identified along (l', x.u, y) ~ (l, x, u.y), by union-find."""
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
    out: dict = {}
    for t in triples:
        out.setdefault(find(t), set()).add(t)
    return {frozenset(c) for c in out.values()}


def small_posets() -> list[FinCat]:
    from .fincat import chain, poset
    return [chain(1), chain(2), chain(3), discrete(["x", "y"]), discrete(["p", "q", "r"]),
            poset(["a", "b", "c"], lambda p, q: p == q or (p == "a" and q != "a"), name="vee"),
            poset(["a", "b", "c"], lambda p, q: p == q or (q == "a" and p != "a"), name="wedge")]


def composition_suite(count: int = 40, seed: int = 0) -> Report:
    """Random set-valued profunctors over posets with at most 3 objects:
    composites against the zig-zag oracle, unitors and associators as
    natural isomorphisms."""
    rep = Report("profunctor composition")
    rng = random.Random(seed)
    posets = small_posets()
    bad = {"oracle": None, "unit": None, "assoc": None}
    for i in range(count):
        k, l, m, n = (rng.choice(posets) for _ in range(4))
        h = random_discrete_prof(k, l, rng, rng.randint(1, 4), rng.randint(0, 3))
        g = random_discrete_prof(l, m, rng, rng.randint(1, 4), rng.randint(0, 3))
        f = random_discrete_prof(m, n, rng, rng.randint(1, 3), rng.randint(0, 2))
        gh = compose_prof(g, h)
        for a in m.objects:
            for b in k.objects:
                got: dict = {}
                for t, r in gh.meta["classes"][(a, b)].items():
                    got.setdefault(r, set()).add(t)
                if {frozenset(c) for c in got.values()} != zigzag_partition(g, h, a, b):
                    bad["oracle"] = bad["oracle"] or {"instance": i, "component": (a, b)}
        for unitor in (left_unitor, right_unitor):
            comp, comps = unitor(h)
            ok, w = check_transformation(comp, h, comps, iso=True)
            if not ok:
                bad["unit"] = bad["unit"] or {"instance": i, "where": w}
        x, y, comps = associator(f, g, h)
        ok, w = check_transformation(x, y, comps, iso=True)
        if not ok:
            bad["assoc"] = bad["assoc"] or {"instance": i, "where": w}
    rep.add("composite vs zig-zag oracle", "coend of G(m,-) x H(-,k)", bad["oracle"] is None, bad["oracle"], count)
    rep.add("unitality", "hom o H = H = H o hom", bad["unit"] is None, bad["unit"], count)
    rep.add("associativity", "(F o G) o H = F o (G o H)", bad["assoc"] is None, bad["assoc"], count)
    return rep


def kleisli_suite() -> Report:
    from .fincat import indiscrete, terminal_cat, chain
    rep = Report("kleisli")
    posets = small_posets()
    ok = all(find_isomorphism(c, kleisli_object(hom_monad(c))[0]) is not None for c in posets)
    rep.add("hom monad", "K_T = K for T = hom", ok, None, len(posets))
    two = discrete(["x", "y"])
    kt, _ = kleisli_object(singleton_monad(two))
    rep.add("terminal monad", "singleton values give the indiscrete category",
            find_isomorphism(kt, indiscrete(["x", "y"])) is not None, None, 1)
    kt, _ = kleisli_object(group_monad(["e", "g"], lambda a, b: "e" if a == b else "g", "e"))
    z2 = len(kt.objects) == 1 and len(kt.arrows) == 2 and all(kt.is_iso(a) for a in kt.arrows) and \
        validate_category(kt).ok
    rep.add("Z/2", "one-object groupoid with two arrows", z2, None, 1)
    c2, c3 = chain(2), chain(3)
    examples = [
        FunctorRep(two, c2, {"x": 0, "y": 1}, {("id", "x"): (0, 0), ("id", "y"): (1, 1)}),
        FunctorRep(c2, c3, {0: 0, 1: 2}, {(0, 0): (0, 0), (1, 1): (2, 2), (0, 1): (0, 2)}),
        FunctorRep(two, terminal_cat(), {"x": "*", "y": "*"}, {("id", "x"): ("id", "*"), ("id", "y"): ("id", "*")}),
    ]
    bad = [i for i, f in enumerate(examples) if not kleisli_matches_full_image(f)]
    rep.add("full image", "Kleisli object of L(F,F) is the full image", not bad, bad or None, len(examples))
    bad = [i for i, f in enumerate(examples) if not all(adjunction_units(f).values())]
    rep.add("representable adjunction", "L(1,F) -| L(F,1): unit, counit, triangles", not bad, bad or None,
            len(examples))
    return rep


def co_yoneda_instance() -> tuple[int, int]:
    """Coend over the 2-chain of K(0,k') x K(k,1): (classes, |K(0,1)|)."""
    from .fincat import chain
    K = chain(2)
    T = discrete_prof(K, K, {(a, b): [(x, y) for x in K.hom(0, b) for y in K.hom(a, 1)]
                             for a in K.objects for b in K.objects},
                      lambda u, b, xy: (xy[0], K.comp(u, xy[1])), lambda a, f, xy: (K.comp(xy[0], f), xy[1]))
    return len(coend_classes(T)), len(K.hom(0, 1))
