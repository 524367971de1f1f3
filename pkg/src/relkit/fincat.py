"""Finite categories, functors, presentations and localization.

Composition is diagrammatic: ``c.comp(f, g)`` is "first f, then g", and the
composition table stores triples ``(f, g, h)`` with ``h = f;g``.  Object and
arrow ids are arbitrary hashable values; JSON lists are read back as tuples.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .report import Report

Id = Hashable


class CategoryError(ValueError):
    pass


def _tuplify(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


def _listify(x: Any) -> Any:
    if isinstance(x, tuple):
        return [_listify(v) for v in x]
    return x


# ------------------------------------------------------------------ FinCat


class FinCat:
    """A finite category given by a full composition table."""

    def __init__(self, objects: Iterable[Id], arrows: Iterable[tuple[Id, Id, Id]],
                 identity: Mapping[Id, Id], compose: Mapping[tuple[Id, Id], Id] | Iterable[tuple[Id, Id, Id]],
                 name: str = ""):
        self.name = name
        self.objects: tuple[Id, ...] = tuple(objects)
        self.arrows: dict[Id, tuple[Id, Id]] = {}
        for a, s, t in arrows:
            if a in self.arrows:
                raise CategoryError(f"duplicate arrow id {a!r}")
            self.arrows[a] = (s, t)
        self.identity: dict[Id, Id] = dict(identity)
        if isinstance(compose, Mapping):
            self.table: dict[tuple[Id, Id], Id] = dict(compose)
        else:
            self.table = {(f, g): h for f, g, h in compose}
        self._homs: dict[tuple[Id, Id], list[Id]] = {}
        for a, (s, t) in self.arrows.items():
            self._homs.setdefault((s, t), []).append(a)

    # -- access
    def src(self, f: Id) -> Id:
        return self.arrows[f][0]

    def tgt(self, f: Id) -> Id:
        return self.arrows[f][1]

    def hom(self, a: Id, b: Id) -> list[Id]:
        return self._homs.get((a, b), [])

    def comp(self, f: Id, g: Id) -> Id:
        if self.tgt(f) != self.src(g):
            raise CategoryError(f"not composable: {f!r} then {g!r}")
        try:
            return self.table[(f, g)]
        except KeyError:
            raise CategoryError(f"missing composite of {f!r} then {g!r}") from None

    def comp_path(self, arrows: Sequence[Id], obj: Id | None = None) -> Id:
        if not arrows:
            return self.identity[obj]
        out = arrows[0]
        for g in arrows[1:]:
            out = self.comp(out, g)
        return out

    def id(self, a: Id) -> Id:
        return self.identity[a]

    def is_identity(self, f: Id) -> bool:
        return self.identity.get(self.src(f)) == f

    def inverse(self, f: Id) -> Id | None:
        for g in self.hom(self.tgt(f), self.src(f)):
            if self.table.get((f, g)) == self.id(self.src(f)) and self.table.get((g, f)) == self.id(self.tgt(f)):
                return g
        return None

    def is_iso(self, f: Id) -> bool:
        return self.inverse(f) is not None

    def composable_pairs(self) -> Iterator[tuple[Id, Id]]:
        for f, (_, t) in self.arrows.items():
            for b in self.objects:
                for g in self.hom(t, b):
                    yield f, g

    def n_arrows(self) -> int:
        return len(self.arrows)

    def __repr__(self) -> str:
        return f"FinCat({self.name or '?'}: {len(self.objects)} objects, {len(self.arrows)} arrows)"

    # -- equality is structural (same ids, same table)
    def _key(self):
        return (self.objects, tuple(sorted(self.arrows.items(), key=repr)),
                tuple(sorted(self.identity.items(), key=repr)), tuple(sorted(self.table.items(), key=repr)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinCat) and set(self.objects) == set(other.objects) and \
            self.arrows == other.arrows and self.identity == other.identity and self.table == other.table

    def __hash__(self) -> int:
        return hash((frozenset(self.objects), frozenset(self.arrows.items())))

    # -- serialization
    def to_json(self) -> dict:
        return {
            "objects": [_listify(o) for o in self.objects],
            "arrows": [{"id": _listify(a), "src": _listify(s), "tgt": _listify(t)} for a, (s, t) in self.arrows.items()],
            "identity": [[_listify(o), _listify(a)] for o, a in self.identity.items()],
            "compose": [[_listify(f), _listify(g), _listify(h)] for (f, g), h in self.table.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinCat":
        objects = [_tuplify(o) for o in data["objects"]]
        arrows = [(_tuplify(a["id"]), _tuplify(a["src"]), _tuplify(a["tgt"])) for a in data["arrows"]]
        table = {(_tuplify(f), _tuplify(g)): _tuplify(h) for f, g, h in data.get("compose", [])}
        if "identity" in data:
            ident = data["identity"]
            items = ident.items() if isinstance(ident, dict) else ident
            identity = {_tuplify(o): _tuplify(a) for o, a in items}
        else:
            identity = _infer_identities(objects, arrows, table)
        return cls(objects, arrows, identity, table, name=data.get("name", ""))


def _infer_identities(objects, arrows, table) -> dict:
    ident = {}
    by_hom: dict = {}
    for a, s, t in arrows:
        by_hom.setdefault((s, t), []).append(a)
    for o in objects:
        for cand in by_hom.get((o, o), []):
            ok = all(table.get((cand, a)) == a for a, s, _ in arrows if s == o) and \
                all(table.get((a, cand)) == a for a, _, t in arrows if t == o)
            if ok:
                ident[o] = cand
                break
        else:
            raise CategoryError(f"no identity found for object {o!r}")
    return ident


# ------------------------------------------------------------------ builders


def discrete(objects: Iterable[Id], name: str = "") -> FinCat:
    objs = list(objects)
    arrows = [(("id", o), o, o) for o in objs]
    return FinCat(objs, arrows, {o: ("id", o) for o in objs},
                  {(("id", o), ("id", o)): ("id", o) for o in objs}, name=name or "discrete")


def poset(objects: Sequence[Id], leq: Callable[[Id, Id], bool], name: str = "") -> FinCat:
    """Thin category: one arrow (a, b) whenever a <= b."""
    objs = list(objects)
    arrows = [((a, b), a, b) for a in objs for b in objs if leq(a, b)]
    present = {a for a, _, _ in arrows}
    table = {}
    for (f, a, b) in arrows:
        for (g, b2, c) in arrows:
            if b == b2:
                if (a, c) not in present:
                    raise CategoryError("order relation is not transitive")
                table[(f, g)] = (a, c)
    ident = {}
    for a in objs:
        if (a, a) not in present:
            raise CategoryError("order relation is not reflexive")
        ident[a] = (a, a)
    return FinCat(objs, arrows, ident, table, name=name or "poset")


def chain(n: int) -> FinCat:
    """The ordinal 0 <= 1 <= ... <= n-1."""
    return poset(list(range(n)), lambda a, b: a <= b, name=f"chain{n}")


def indiscrete(objects: Sequence[Id]) -> FinCat:
    return poset(list(objects), lambda a, b: True, name="indiscrete")


def terminal_cat() -> FinCat:
    return discrete(["*"], name="1")


def empty_cat() -> FinCat:
    return FinCat([], [], {}, {}, name="0")


def monoid_cat(elements: Sequence[Id], mult: Callable[[Id, Id], Id], unit: Id, obj: Id = "*") -> FinCat:
    """One-object category; ``mult(x, y)`` is "first x then y"."""
    arrows = [(e, obj, obj) for e in elements]
    table = {(x, y): mult(x, y) for x in elements for y in elements}
    return FinCat([obj], arrows, {obj: unit}, table, name="monoid")


def product_cat(c: FinCat, d: FinCat) -> FinCat:
    objects = [(a, b) for a in c.objects for b in d.objects]
    arrows = [((f, g), (c.src(f), d.src(g)), (c.tgt(f), d.tgt(g))) for f in c.arrows for g in d.arrows]
    identity = {(a, b): (c.id(a), d.id(b)) for a in c.objects for b in d.objects}
    table = {}
    for f1, f2 in c.composable_pairs():
        for g1, g2 in d.composable_pairs():
            table[((f1, g1), (f2, g2))] = (c.table[(f1, f2)], d.table[(g1, g2)])
    return FinCat(objects, arrows, identity, table, name=f"{c.name}x{d.name}")


def opposite(c: FinCat) -> FinCat:
    table = {(g, f): h for (f, g), h in c.table.items()}
    return FinCat(c.objects, [(a, t, s) for a, (s, t) in c.arrows.items()], c.identity, table, name=f"{c.name}^op")


# ------------------------------------------------------------------ validation


def validate_category(c: FinCat, max_witnesses: int = 5) -> Report:
    """Every typing, closure, identity and associativity failure, with witnesses."""
    rep = Report("category")
    objs = set(c.objects)

    def record(law: str, anchor: str, bad: list, cases: int) -> None:
        rep.add(law, anchor, not bad, bad[:max_witnesses] or None, cases)

    bad = [a for a, (s, t) in c.arrows.items() if s not in objs or t not in objs]
    record("arrow typing", "every arrow's endpoints are listed objects", bad, len(c.arrows))
    bad = []
    for o in c.objects:
        i = c.identity.get(o)
        if i is None or c.arrows.get(i) != (o, o):
            bad.append(o)
    record("identity typing", "each object has an endo identity arrow", bad, len(c.objects))
    missing, mistyped, extra = [], [], []
    pairs = list(c.composable_pairs()) if not rep.failures() else []
    for f, g in pairs:
        h = c.table.get((f, g))
        if h is None:
            missing.append((f, g))
        elif c.arrows.get(h) != (c.src(f), c.tgt(g)):
            mistyped.append((f, g, h))
    composable = set(pairs)
    extra = [k for k in c.table if k not in composable]
    record("missing composite", "composition defined on all composable pairs", missing, len(pairs))
    record("composite typing", "composite runs from src(f) to tgt(g)", mistyped, len(pairs))
    record("spurious composite", "composition only on composable pairs", extra, len(c.table))
    bad = []
    if not rep.failures():
        for f, (s, t) in c.arrows.items():
            if c.table[(c.id(s), f)] != f or c.table[(f, c.id(t))] != f:
                bad.append(f)
    record("identity law", "identities are left and right neutral", bad, len(c.arrows))
    bad = []
    n = 0
    if not rep.failures():
        for f, g in pairs:
            fg = c.table[(f, g)]
            for h in (h for b in c.objects for h in c.hom(c.tgt(g), b)):
                n += 1
                if c.table[(fg, h)] != c.table[(f, c.table[(g, h)])]:
                    bad.append((f, g, h))
                    if len(bad) >= max_witnesses:
                        break
    record("associativity", "composition is associative", bad, n)
    return rep


# ------------------------------------------------------------------ functors


@dataclass
class FunctorRep:
    dom: FinCat
    cod: FinCat
    obj_map: dict
    arr_map: dict

    def __call__(self, f: Id) -> Id:
        return self.arr_map[f]

    def on_obj(self, a: Id) -> Id:
        return self.obj_map[a]

    def validate(self, max_witnesses: int = 5) -> Report:
        rep = Report("functor")
        bad = [a for a in self.dom.objects if self.obj_map.get(a) not in set(self.cod.objects)]
        rep.add("object map", "objects go to objects", not bad, bad[:max_witnesses] or None, len(self.dom.objects))
        bad = []
        for f in self.dom.arrows:
            g = self.arr_map.get(f)
            if g not in self.cod.arrows or self.cod.arrows[g] != (self.obj_map.get(self.dom.src(f)), self.obj_map.get(self.dom.tgt(f))):
                bad.append(f)
        rep.add("arrow typing", "src and tgt preserved", not bad, bad[:max_witnesses] or None, len(self.dom.arrows))
        if rep.ok:
            bad = [a for a in self.dom.objects if self.arr_map[self.dom.id(a)] != self.cod.id(self.obj_map[a])]
            rep.add("identities", "identities preserved", not bad, bad[:max_witnesses] or None, len(self.dom.objects))
            bad = []
            n = 0
            for (f, g), h in self.dom.table.items():
                n += 1
                if self.cod.table.get((self.arr_map[f], self.arr_map[g])) != self.arr_map[h]:
                    bad.append((f, g))
            rep.add("composition", "composites preserved", not bad, bad[:max_witnesses] or None, n)
        return rep

    def then(self, other: "FunctorRep") -> "FunctorRep":
        return FunctorRep(self.dom, other.cod, {a: other.obj_map[b] for a, b in self.obj_map.items()},
                          {f: other.arr_map[g] for f, g in self.arr_map.items()})

    def is_fully_faithful(self) -> tuple[bool, Any]:
        for a in self.dom.objects:
            for b in self.dom.objects:
                image = [self.arr_map[f] for f in self.dom.hom(a, b)]
                target = self.cod.hom(self.obj_map[a], self.obj_map[b])
                if len(set(image)) != len(image):
                    return False, ("not faithful", a, b)
                if set(image) != set(target):
                    return False, ("not full", a, b)
        return True, None

    def essential_surjectivity(self) -> tuple[bool, dict]:
        """For each object of the codomain, an isomorphism from some image object."""
        witness = {}
        images = {self.obj_map[a]: a for a in self.dom.objects}
        for b in self.cod.objects:
            found = None
            for fb, a in images.items():
                for f in self.cod.hom(fb, b):
                    if self.cod.is_iso(f):
                        found = (a, f)
                        break
                if found:
                    break
            if found is None:
                return False, {"missing": b}
            witness[b] = found
        return True, witness


def identity_functor(c: FinCat) -> FunctorRep:
    return FunctorRep(c, c, {a: a for a in c.objects}, {f: f for f in c.arrows})


@dataclass
class EquivalenceCertificate:
    functor: FunctorRep
    fully_faithful: bool
    essentially_surjective: bool
    witness: Any = None

    @property
    def ok(self) -> bool:
        return self.fully_faithful and self.essentially_surjective and self.functor.validate().ok

    def to_json(self) -> dict:
        return {"fully_faithful": self.fully_faithful, "essentially_surjective": self.essentially_surjective,
                "domain": {"objects": len(self.functor.dom.objects), "arrows": len(self.functor.dom.arrows)},
                "codomain": {"objects": len(self.functor.cod.objects), "arrows": len(self.functor.cod.arrows)},
                "witness": repr(self.witness) if self.witness is not None else None}


def certify_equivalence(f: FunctorRep) -> EquivalenceCertificate:
    ff, w1 = f.is_fully_faithful()
    es, w2 = f.essential_surjectivity()
    return EquivalenceCertificate(f, ff, es, w1 if not ff else (None if es else w2))


def iso_classes(c: FinCat) -> list[list[Id]]:
    parent = {o: o for o in c.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f, (s, t) in c.arrows.items():
        if s != t and c.is_iso(f):
            parent[find(s)] = find(t)
    classes: dict = {}
    for o in c.objects:
        classes.setdefault(find(o), []).append(o)
    return list(classes.values())


def find_isomorphism(c: FinCat, d: FinCat) -> FunctorRep | None:
    """An isomorphism of categories c -> d, by backtracking search."""
    if len(c.objects) != len(d.objects) or len(c.arrows) != len(d.arrows):
        return None

    def profile(cat: FinCat, a: Id) -> tuple:
        return (len(cat.hom(a, a)), sorted(len(cat.hom(a, b)) for b in cat.objects),
                sorted(len(cat.hom(b, a)) for b in cat.objects))

    cobjs = list(c.objects)
    dprof: dict = {}
    for b in d.objects:
        dprof.setdefault(repr(profile(d, b)), []).append(b)

    def object_maps(i: int, used: set, acc: dict) -> Iterator[dict]:
        if i == len(cobjs):
            yield dict(acc)
            return
        a = cobjs[i]
        for b in dprof.get(repr(profile(c, a)), []):
            if b in used:
                continue
            if any(len(c.hom(a, a2)) != len(d.hom(b, acc[a2])) or len(c.hom(a2, a)) != len(d.hom(acc[a2], b))
                   for a2 in cobjs[:i]):
                continue
            acc[a] = b
            used.add(b)
            yield from object_maps(i + 1, used, acc)
            used.discard(b)
            del acc[a]

    carrows = sorted(c.arrows, key=lambda f: (not c.is_identity(f), repr(f)))
    for om in object_maps(0, set(), {}):
        amap: dict = {}
        if _extend_arrows(c, d, om, carrows, 0, amap, set()):
            return FunctorRep(c, d, om, amap)
    return None


def _extend_arrows(c, d, om, carrows, i, amap, used) -> bool:
    if i == len(carrows):
        return True
    f = carrows[i]
    s, t = c.arrows[f]
    if c.is_identity(f):
        cands = [d.id(om[s])]
    else:
        cands = [g for g in d.hom(om[s], om[t]) if g not in used and not d.is_identity(g)]
    for g in cands:
        if g in used:
            continue
        amap[f] = g
        used.add(g)
        ok = True
        for (x, y), z in c.table.items():
            if f in (x, y, z) and x in amap and y in amap and z in amap:
                if d.table.get((amap[x], amap[y])) != amap[z]:
                    ok = False
                    break
        if ok and _extend_arrows(c, d, om, carrows, i + 1, amap, used):
            return True
        used.discard(g)
        del amap[f]
    return False


# ------------------------------------------------------------------ diagrams


@dataclass
class Diagram:
    """A strict functor J -> FinCat: a category per object and a functor per arrow."""
    index: FinCat
    values: dict
    actions: dict

    def validate(self) -> Report:
        rep = Report("diagram")
        J = self.index
        bad = [j for j in J.objects if j not in self.values]
        rep.add("values", "a category for each index object", not bad, bad or None, len(J.objects))
        bad = []
        for m, (s, t) in J.arrows.items():
            F = self.actions.get(m)
            if F is None or F.dom is not self.values[s] and F.dom != self.values[s] or \
                    F.cod is not self.values[t] and F.cod != self.values[t] or not F.validate().ok:
                bad.append(m)
        rep.add("actions", "each index arrow acts by a functor between the right values", not bad, bad or None,
                len(J.arrows))
        if not rep.ok:
            return rep
        bad = []
        for j in J.objects:
            F = self.actions[J.id(j)]
            C = self.values[j]
            if any(F.obj_map[a] != a for a in C.objects) or any(F.arr_map[f] != f for f in C.arrows):
                bad.append(j)
        rep.add("identities", "identity arrows act as identity functors", not bad, bad or None, len(J.objects))
        bad = []
        for (m, n), k in J.table.items():
            G = self.actions[m].then(self.actions[n])
            H = self.actions[k]
            if G.obj_map != H.obj_map or G.arr_map != H.arr_map:
                bad.append((m, n))
        rep.add("composition", "the action of a composite is the composite action", not bad, bad or None,
                len(J.table))
        return rep


def set_diagram(index: FinCat, sets: Mapping[Id, Sequence[Id]], maps: Mapping[Id, Mapping[Id, Id]]) -> Diagram:
    """Diagram of discrete categories from sets and functions (identities filled in)."""
    values = {j: discrete(sets[j], name=f"D{j}") for j in index.objects}
    actions = {}
    for m, (s, t) in index.arrows.items():
        if index.is_identity(m) and m not in maps:
            fn = {x: x for x in sets[s]}
        else:
            fn = maps[m]
        actions[m] = FunctorRep(values[s], values[t], dict(fn), {("id", x): ("id", fn[x]) for x in sets[s]})
    return Diagram(index, values, actions)


def constant_diagram(index: FinCat, value: FinCat) -> Diagram:
    f = identity_functor(value)
    return Diagram(index, {j: value for j in index.objects}, {m: f for m in index.arrows})


@dataclass
class ElementsCat:
    cat: FinCat
    marked: frozenset
    projection: FunctorRep


def elements_cat(d: Diagram) -> ElementsCat:
    """Objects (j, x); arrows (j, x, m, f) with m: j -> i and f: m_*x -> y in D(i)."""
    rep = d.validate()
    if not rep.ok:
        raise CategoryError(f"ill-formed diagram: {rep.failures()[0].law} {rep.failures()[0].witness!r}")
    J = d.index
    objects = [(j, x) for j in J.objects for x in d.values[j].objects]
    arrows = []
    marked = set()
    for j in J.objects:
        for x in d.values[j].objects:
            for m in (m for i in J.objects for m in J.hom(j, i)):
                i = J.tgt(m)
                Di = d.values[i]
                mx = d.actions[m].obj_map[x]
                for y in Di.objects:
                    for f in Di.hom(mx, y):
                        aid = (j, x, m, f)
                        arrows.append((aid, (j, x), (i, y)))
                        if Di.is_iso(f):
                            marked.add(aid)
    identity = {(j, x): (j, x, J.id(j), d.values[j].id(x)) for j, x in objects}
    table = {}
    out_of: dict = {}
    for aid, s, t in arrows:
        out_of.setdefault(s, []).append((aid, t))
    for aid, s, t in arrows:
        j, x, m, f = aid
        for bid, u in out_of.get(t, []):
            _, y, n, g = bid
            k = J.comp(m, n)
            nf = d.actions[n].arr_map[f]
            table[(aid, bid)] = (j, x, k, d.values[J.tgt(n)].comp(nf, g))
    cat = FinCat(objects, arrows, identity, table, name="elements")
    proj = FunctorRep(cat, J, {(j, x): j for j, x in objects}, {a[0]: a[0][2] for a in arrows})
    return ElementsCat(cat, frozenset(marked), proj)


# ------------------------------------------------------------------ presentations


@dataclass(frozen=True)
class Word:
    """A composable string of generators, read left to right."""
    src: Id
    tgt: Id
    letters: tuple = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        if self.tgt != other.src:
            raise CategoryError(f"words do not compose: {self!r} then {other!r}")
        return Word(self.src, other.tgt, self.letters + other.letters)

    def __repr__(self) -> str:
        if not self.letters:
            return f"id[{self.src!r}]"
        return ".".join(_letter_str(x) for x in self.letters)

    def to_json(self):
        return {"src": _listify(self.src), "tgt": _listify(self.tgt), "letters": [_listify(x) for x in self.letters]}


def _letter_str(x: Id) -> str:
    return x if isinstance(x, str) else repr(x)


def inverse_name(g: Id) -> Id:
    return f"{g}^-1" if isinstance(g, str) else ("inv", g)


@dataclass
class PresentedCat:
    objects: tuple
    generators: dict            # id -> (src, tgt)
    relations: list             # list of (Word, Word)
    inverse_of: dict = field(default_factory=dict)   # formal inverse id -> original generator

    def gen_src(self, g: Id) -> Id:
        return self.generators[g][0]

    def gen_tgt(self, g: Id) -> Id:
        return self.generators[g][1]

    def word(self, letters: Sequence[Id], obj: Id | None = None) -> Word:
        letters = tuple(letters)
        if not letters:
            if obj is None:
                raise CategoryError("identity word needs its object")
            return Word(obj, obj, ())
        for a, b in zip(letters, letters[1:]):
            if self.gen_tgt(a) != self.gen_src(b):
                raise CategoryError(f"ill-typed word at {a!r} then {b!r}")
        return Word(self.gen_src(letters[0]), self.gen_tgt(letters[-1]), letters)

    def is_formal_inverse(self, g: Id) -> bool:
        return g in self.inverse_of

    def check(self) -> Report:
        rep = Report("presentation")
        bad = []
        for l, r in self.relations:
            try:
                if l.letters:
                    self.word(l.letters)
                if r.letters:
                    self.word(r.letters)
                if (l.src, l.tgt) != (r.src, r.tgt):
                    bad.append((l, r))
            except (CategoryError, KeyError):
                bad.append((l, r))
        rep.add("relations parallel", "every relation is a parallel pair of words", not bad, bad or None,
                len(self.relations))
        return rep

    def to_json(self) -> dict:
        return {
            "objects": [_listify(o) for o in self.objects],
            "generators": [{"id": _listify(g), "src": _listify(s), "tgt": _listify(t),
                            "inverse": g in self.inverse_of} for g, (s, t) in self.generators.items()],
            "relations": [[l.to_json(), r.to_json()] for l, r in self.relations],
        }


def presentation(c: FinCat) -> PresentedCat:
    """Generators are the non-identity arrows; relations record the table."""
    gens = {f: st for f, st in c.arrows.items() if not c.is_identity(f)}
    rels = []
    for (f, g), h in c.table.items():
        if f in gens and g in gens:
            s, t = c.src(f), c.tgt(g)
            rhs = Word(s, t, () if c.is_identity(h) else (h,))
            rels.append((Word(s, t, (f, g)), rhs))
    return PresentedCat(tuple(c.objects), gens, rels)


def localize(p: PresentedCat, s: Iterable[Id]) -> PresentedCat:
    gens = dict(p.generators)
    rels = list(p.relations)
    inv = dict(p.inverse_of)
    for g in s:
        if g not in p.generators:
            raise CategoryError(f"{g!r} is not a generator")
        a, b = p.generators[g]
        gi = inverse_name(g)
        gens[gi] = (b, a)
        inv[gi] = g
        rels.append((Word(a, a, (g, gi)), Word(a, a, ())))
        rels.append((Word(b, b, (gi, g)), Word(b, b, ())))
    return PresentedCat(p.objects, gens, rels, inv)


class WordAnswer(str):
    """'yes', 'no' or 'undecided'; ``certified`` marks a 'no' whose component
    closed without hitting the length bound (so the words are truly distinct)."""
    certified: bool = False
    explored: int = 0

    def __new__(cls, verdict: str, certified: bool = False, explored: int = 0):
        obj = super().__new__(cls, verdict)
        obj.certified = certified
        obj.explored = explored
        return obj


def _objects_along(p: PresentedCat, w: Word) -> list:
    objs = [w.src]
    for g in w.letters:
        objs.append(p.gen_tgt(g))
    return objs


def _rules(p: PresentedCat) -> list[tuple[Word, Word]]:
    rules = []
    for l, r in p.relations:
        rules.append((l, r))
        rules.append((r, l))
    return rules


def rewrite_neighbours(p: PresentedCat, w: Word, bound: int, rules=None) -> tuple[list[Word], bool]:
    """Single-step rewrites of w by any relation (either direction); the flag
    says whether some rewrite was dropped for exceeding the bound."""
    rules = _rules(p) if rules is None else rules
    out = []
    truncated = False
    letters = w.letters
    objs = None
    for l, r in rules:
        k = len(l.letters)
        if k == 0:
            if objs is None:
                objs = _objects_along(p, w)
            for i, o in enumerate(objs):
                if o == l.src:
                    new = letters[:i] + r.letters + letters[i:]
                    if len(new) > bound:
                        truncated = True
                    else:
                        out.append(Word(w.src, w.tgt, new))
            continue
        for i in range(len(letters) - k + 1):
            if letters[i:i + k] == l.letters:
                new = letters[:i] + r.letters + letters[i + k:]
                if len(new) > bound:
                    truncated = True
                else:
                    out.append(Word(w.src, w.tgt, new))
    return out, truncated


def _component(p: PresentedCat, start: Word, bound: int, budget: int, rules, stop: Word | None):
    seen = {start}
    queue = deque([start])
    truncated = False
    while queue:
        w = queue.popleft()
        if stop is not None and w == stop:
            return seen, truncated, True, False
        nbrs, t = rewrite_neighbours(p, w, bound, rules)
        truncated |= t
        for v in nbrs:
            if v not in seen:
                if len(seen) >= budget:
                    return seen, truncated, False, True
                seen.add(v)
                queue.append(v)
    return seen, truncated, stop in seen if stop is not None else False, False


def word_equal(p: PresentedCat, w1: Word, w2: Word, bound: int = 8, budget: int = 200_000) -> WordAnswer:
    if (w1.src, w1.tgt) != (w2.src, w2.tgt):
        raise CategoryError(f"words are not parallel: {w1!r} vs {w2!r}")
    if w1 == w2:
        return WordAnswer("yes", explored=1)
    bound = max(bound, len(w1), len(w2))
    rules = _rules(p)
    seen1, trunc1, met, over = _component(p, w1, bound, budget, rules, w2)
    if met:
        return WordAnswer("yes", explored=len(seen1))
    if over:
        return WordAnswer("undecided", explored=len(seen1))
    seen2, trunc2, met2, over2 = _component(p, w2, bound, budget, rules, w1)
    if over2:
        return WordAnswer("undecided", explored=len(seen1) + len(seen2))
    return WordAnswer("no", certified=not trunc1 or not trunc2, explored=len(seen1) + len(seen2))


def all_words(p: PresentedCat, bound: int) -> list[Word]:
    words = [Word(o, o, ()) for o in p.objects]
    frontier = list(words)
    out_of: dict = {}
    for g, (s, _) in p.generators.items():
        out_of.setdefault(s, []).append(g)
    for _ in range(bound):
        nxt = []
        for w in frontier:
            for g in out_of.get(w.tgt, []):
                nxt.append(Word(w.src, p.gen_tgt(g), w.letters + (g,)))
        words.extend(nxt)
        frontier = nxt
    return words


def _wkey(w: Word):
    return (len(w.letters), repr(w))


def normal_forms(p: PresentedCat, bound: int = 8) -> list[list[Word]]:
    """Classes of words of length <= bound under rewriting within the bound;
    each class sorted with its shortest word first."""
    words = all_words(p, bound)
    index = {w: i for i, w in enumerate(words)}
    parent = list(range(len(words)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rules = _rules(p)
    for w in words:
        nbrs, _ = rewrite_neighbours(p, w, bound, rules)
        for v in nbrs:
            a, b = find(index[w]), find(index[v])
            if a != b:
                parent[a] = b
    classes: dict = {}
    for w in words:
        classes.setdefault(find(index[w]), []).append(w)
    out = [sorted(ws, key=_wkey) for ws in classes.values()]
    return sorted(out, key=lambda ws: _wkey(ws[0]))


def to_fincat(p: PresentedCat, bound: int = 8) -> FinCat | None:
    """The presented category as a FinCat when normal forms below the bound are
    closed under composition of representatives; None otherwise."""
    classes = normal_forms(p, bound)
    rep_of: dict = {}
    for ws in classes:
        for w in ws:
            rep_of[w] = ws[0]
    reps = [ws[0] for ws in classes]
    table = {}
    for a in reps:
        for b in reps:
            if a.tgt != b.src:
                continue
            ab = a + b
            if ab not in rep_of:
                return None
            table[(a, b)] = rep_of[ab]
    identity = {o: rep_of[Word(o, o, ())] for o in p.objects}
    c = FinCat(p.objects, [(w, w.src, w.tgt) for w in reps], identity, table, name="presented")
    return c if validate_category(c).ok else None


def pi0_classes(p: PresentedCat) -> list[list[Id]]:
    """Connected components of the underlying graph of generators."""
    parent = {o: o for o in p.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in p.generators.values():
        parent[find(s)] = find(t)
    out: dict = {}
    for o in p.objects:
        out.setdefault(find(o), []).append(o)
    return list(out.values())


def isomorphism_classes(p: PresentedCat) -> list[list[Id]]:
    """Objects joined by a formally inverted generator (hence isomorphic)."""
    parent = {o: o for o in p.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gi, g in p.inverse_of.items():
        s, t = p.generators[g]
        parent[find(s)] = find(t)
    out: dict = {}
    for o in p.objects:
        out.setdefault(find(o), []).append(o)
    return list(out.values())


def colimit_cat(d: Diagram) -> PresentedCat:
    """Pseudo-colimit: the category of elements with its opcartesian arrows inverted."""
    el = elements_cat(d)
    p = presentation(el.cat)
    return localize(p, sorted((a for a in el.marked if a in p.generators), key=repr))


def set_colimit(index: FinCat, sets: Mapping[Id, Sequence[Id]], maps: Mapping[Id, Mapping[Id, Id]]) -> list[set]:
    """Colimit of a diagram of sets: disjoint union modulo x ~ m(x)."""
    parent = {(j, x): (j, x) for j in index.objects for x in sets[j]}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for m, (s, t) in index.arrows.items():
        fn = maps.get(m)
        if fn is None:
            continue
        for x in sets[s]:
            parent[find((s, x))] = find((t, fn[x]))
    out: dict = {}
    for v in parent:
        out.setdefault(find(v), set()).add(v)
    return list(out.values())


def random_set_diagram(rng) -> tuple[FinCat, dict, dict]:
    """Two-layer diagram of sets; arrows only run from the lower layer to
    the upper one, so there are no composites to keep strict."""
    lower = [f"s{k}" for k in range(rng.randint(1, 3))]
    upper = [f"t{k}" for k in range(rng.randint(1, 3))]
    edges = [(a, b) for a in lower for b in upper if rng.random() < 0.5]
    index = poset(lower + upper, lambda a, b: a == b or (a, b) in edges)
    sets = {j: [f"e{k}" for k in range(rng.randint(0 if j in lower else 1, 3))] for j in index.objects}
    maps = {(a, b): {x: rng.choice(sets[b]) for x in sets[a]} for a, b in edges}
    return index, sets, maps


def colimit_suite(count: int = 50, seed: int = 0, word_bound: int = 6) -> Report:
    import random
    rng = random.Random(seed)
    rep = Report("colimits", info={"word_bound": word_bound})
    bad = None
    for _ in range(count):
        index, sets, maps = random_set_diagram(rng)
        col = colimit_cat(set_diagram(index, sets, maps))
        got = sorted(sorted(map(repr, c)) for c in isomorphism_classes(col))
        want = sorted(sorted(map(repr, c)) for c in set_colimit(index, sets, maps))
        if got != want:
            bad = bad or {"sets": sets, "maps": {repr(k): v for k, v in maps.items()}, "got": got, "want": want}
    rep.add("discrete colimits", "iso classes of the localized elements match the set colimit", bad is None, bad,
            count)
    interval = localize(presentation(chain(2)), [(0, 1)])
    nf = normal_forms(interval, 8)
    rep.add("interval localization", "inverting 0 -> 1 leaves four normal forms", len(nf) == 4, len(nf), 1)
    loop = localize(PresentedCat(("*",), {"g": ("*", "*")}, []), ["g"])
    bad = None
    n = 0
    for a, b in itertools.permutations(range(4), 2):
        n += 1
        ans = word_equal(loop, loop.word(["g"] * a, obj="*"), loop.word(["g"] * b, obj="*"), bound=word_bound)
        if ans != "no":
            bad = bad or {"n": a, "m": b, "answer": str(ans)}
    rep.add("loop localization", "g^n and g^m differ for n != m <= 3", bad is None, bad, n)
    return rep
