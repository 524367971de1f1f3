"""Ordered regular fibrations over finite-product bases.

The reference instance is ``SubFibration``: the base is finite sets and
functions, the fiber over X is the powerset of X, reindexing is preimage and
the existential is direct image.  Other instances can be loaded from JSON as
``TabulatedFibration``.  Squares are written with P top-left, ``u: P -> X``
along the top, ``v: P -> X'`` down the left, ``t: X -> Y`` down the right and
``s: X' -> Y`` along the bottom, commuting as ``u;t = v;s``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Hashable, Iterable, Iterator, Sequence

import numpy as np

from . import finrel as R
from .fincat import FinCat
from .finrel import FinSetObj, Fn
from .report import Report


class FiberError(ValueError):
    pass


class CapabilityError(TypeError):
    pass


# ------------------------------------------------------------------ bases


class FinSetBase:
    """Finite sets and functions; the bound only limits enumeration."""

    def __init__(self, bound: int):
        self.bound = bound
        self.terminal = R.ONE

    def objects(self) -> list[FinSetObj]:
        return R.universe(self.bound)

    def within(self, x: FinSetObj, bound: int | None = None) -> bool:
        return len(x) <= (self.bound if bound is None else bound)

    def hom(self, x: FinSetObj, y: FinSetObj) -> Iterator[Fn]:
        return R.all_functions(x, y)

    def src(self, f: Fn) -> FinSetObj:
        return f.src

    def tgt(self, f: Fn) -> FinSetObj:
        return f.tgt

    def compose(self, f: Fn, g: Fn) -> Fn:
        return f.then(g)

    def identity(self, x: FinSetObj) -> Fn:
        return Fn.identity(x)

    def product(self, x: FinSetObj, y: FinSetObj) -> FinSetObj:
        return R.product(x, y)

    def proj1(self, x, y) -> Fn:
        return R.proj1(x, y)

    def proj2(self, x, y) -> Fn:
        return R.proj2(x, y)

    def pairing(self, f: Fn, g: Fn) -> Fn:
        return R.pairing(f, g)

    def bang(self, x) -> Fn:
        return R.bang(x)

    def times(self, f: Fn, g: Fn) -> Fn:
        return R.fn_product(f, g)

    def diag(self, x) -> Fn:
        return R.diag_fn(x)

    def is_iso(self, f: Fn) -> bool:
        return f.is_injective() and f.is_surjective()

    def arrows(self) -> Iterator[Fn]:
        for x in self.objects():
            for y in self.objects():
                yield from self.hom(x, y)


class FinCatBase:
    """A finite category with chosen binary products and terminal object."""

    def __init__(self, cat: FinCat, terminal: Hashable, products: dict):
        self.cat = cat
        self.terminal = terminal
        self.products = products  # (X, Y) -> (P, p1, p2)

    def objects(self) -> list:
        return list(self.cat.objects)

    def within(self, x, bound=None) -> bool:
        return True

    def hom(self, x, y):
        return iter(self.cat.hom(x, y))

    def src(self, f):
        return self.cat.src(f)

    def tgt(self, f):
        return self.cat.tgt(f)

    def compose(self, f, g):
        return self.cat.comp(f, g)

    def identity(self, x):
        return self.cat.id(x)

    def product(self, x, y):
        return self.products[(x, y)][0]

    def proj1(self, x, y):
        return self.products[(x, y)][1]

    def proj2(self, x, y):
        return self.products[(x, y)][2]

    def pairing(self, f, g):
        x = self.src(f)
        p, p1, p2 = self.products[(self.tgt(f), self.tgt(g))]
        hits = [h for h in self.cat.hom(x, p) if self.cat.comp(h, p1) == f and self.cat.comp(h, p2) == g]
        if len(hits) != 1:
            raise CapabilityError(f"chosen product {p!r} is not a product for the pair {f!r}, {g!r}")
        return hits[0]

    def bang(self, x):
        hits = self.cat.hom(x, self.terminal)
        if len(hits) != 1:
            raise CapabilityError(f"{self.terminal!r} is not terminal")
        return hits[0]

    def times(self, f, g):
        a, b = self.src(f), self.src(g)
        return self.pairing(self.compose(self.proj1(a, b), f), self.compose(self.proj2(a, b), g))

    def diag(self, x):
        return self.pairing(self.identity(x), self.identity(x))

    def is_iso(self, f) -> bool:
        return self.cat.is_iso(f)

    def arrows(self):
        return iter(self.cat.arrows)


# ------------------------------------------------------------------ fibrations


class RegFibration:
    """Interface of an ordered regular fibration with finite fibers."""

    base: Any
    has_comprehension = False

    def fiber(self, x) -> list:
        raise NotImplementedError

    def leq(self, x, p, q) -> bool:
        raise NotImplementedError

    def meet(self, x, p, q):
        raise NotImplementedError

    def top(self, x):
        raise NotImplementedError

    def reindex(self, f, p):
        raise NotImplementedError

    def exists(self, f, p):
        raise NotImplementedError

    def in_fiber(self, x, p) -> bool:
        return p in self.fiber(x)

    def eq_pred(self, x, p, q) -> bool:
        return self.leq(x, p, q) and self.leq(x, q, p)


class SubFibration(RegFibration):
    """Subsets of finite sets; f* is preimage and the existential is image."""

    has_comprehension = True

    def __init__(self, bound: int = 3):
        self.base = FinSetBase(bound)
        self.bound = bound

    def fiber(self, x: FinSetObj) -> list[frozenset]:
        return [frozenset(c) for n in range(len(x) + 1) for c in itertools.combinations(x.elements, n)]

    def in_fiber(self, x: FinSetObj, p) -> bool:
        return isinstance(p, frozenset) and all(e in x for e in p)

    def leq(self, x, p, q) -> bool:
        return p <= q

    def meet(self, x, p, q):
        return p & q

    def top(self, x: FinSetObj) -> frozenset:
        return frozenset(x.elements)

    def _check(self, x, p):
        if not self.in_fiber(x, p):
            raise FiberError(f"{sorted(p)!r} is not a predicate over {x.name}")

    def reindex(self, f: Fn, p: frozenset) -> frozenset:
        self._check(f.tgt, p)
        ys = f.tgt.elements
        return frozenset(x for x, i in zip(f.src.elements, f.table) if ys[i] in p)

    def exists(self, f: Fn, p: frozenset) -> frozenset:
        self._check(f.src, p)
        ys = f.tgt.elements
        return frozenset(ys[f.table[f.src.index(x)]] for x in p)

    # -- comprehension
    def comprehend(self, x: FinSetObj, p: frozenset) -> Fn:
        self._check(x, p)
        sub = x.subset(p, name=f"{{{x.name}|{','.join(e for e in x if e in p)}}}")
        return Fn(sub, x, [x.index(e) for e in sub])

    # -- mask tables for vectorised sweeps
    @staticmethod
    @lru_cache(maxsize=None)
    def tables(f: Fn) -> tuple[np.ndarray, np.ndarray]:
        """(preimage table over masks of tgt, image table over masks of src)."""
        table = np.array(f.table, dtype=np.int64)
        nx, ny = len(f.src), len(f.tgt)
        qs = np.arange(1 << ny, dtype=np.int64)
        pre = np.zeros(1 << ny, dtype=np.int64)
        for i in range(nx):
            pre |= ((qs >> table[i]) & 1) << i
        ps = np.arange(1 << nx, dtype=np.int64)
        img = np.zeros(1 << nx, dtype=np.int64)
        for i in range(nx):
            img |= ((ps >> i) & 1) << table[i]
        pre.setflags(write=False)
        img.setflags(write=False)
        return pre, img

    @staticmethod
    def to_mask(x: FinSetObj, p: Iterable[str]) -> int:
        return sum(1 << x.index(e) for e in p)

    @staticmethod
    def from_mask(x: FinSetObj, m: int) -> frozenset:
        return frozenset(e for i, e in enumerate(x.elements) if m >> i & 1)


class TabulatedFibration(RegFibration):
    """A fibration given by explicit tables over a finite base."""

    def __init__(self, base: FinCatBase, fibers: dict, order: dict, reindex: dict, exists: dict):
        self.base = base
        self._fibers = fibers          # X -> list of predicate ids
        self._order = order            # X -> set of (p, q) with p <= q
        self._reindex = reindex        # f -> {q: p}
        self._exists = exists          # f -> {p: q}

    def fiber(self, x):
        return list(self._fibers[x])

    def leq(self, x, p, q):
        return (p, q) in self._order[x]

    def _glb(self, x, cands):
        for m in cands:
            if all(self.leq(x, c, m) for c in cands):
                return m
        raise FiberError(f"fiber over {x!r} lacks a greatest lower bound")

    def meet(self, x, p, q):
        lower = [r for r in self.fiber(x) if self.leq(x, r, p) and self.leq(x, r, q)]
        return self._glb(x, lower)

    def top(self, x):
        ups = [r for r in self.fiber(x) if all(self.leq(x, s, r) for s in self.fiber(x))]
        if not ups:
            raise FiberError(f"fiber over {x!r} has no top")
        return ups[0]

    def reindex(self, f, p):
        try:
            return self._reindex[f][p]
        except KeyError:
            raise FiberError(f"{p!r} is not over the target of {f!r}") from None

    def exists(self, f, p):
        try:
            return self._exists[f][p]
        except KeyError:
            raise FiberError(f"{p!r} is not over the source of {f!r}") from None

    @classmethod
    def from_json(cls, data: dict) -> "TabulatedFibration":
        from .fincat import _tuplify
        cat = FinCat.from_json(data["base"])
        products = {}
        for pr in data["products"]:
            products[(_tuplify(pr["left"]), _tuplify(pr["right"]))] = (
                _tuplify(pr["product"]), _tuplify(pr["p1"]), _tuplify(pr["p2"]))
        base = FinCatBase(cat, _tuplify(data["terminal"]), products)
        fibers, order = {}, {}
        for x, entry in _items(data["fibers"]):
            x = _tuplify(x)
            fibers[x] = [_tuplify(p) for p in entry["elements"]]
            order[x] = {(_tuplify(a), _tuplify(b)) for a, b in entry["leq"]}
        rein = {_tuplify(f): {_tuplify(a): _tuplify(b) for a, b in _items(m)} for f, m in _items(data["reindex"])}
        ex = {_tuplify(f): {_tuplify(a): _tuplify(b) for a, b in _items(m)} for f, m in _items(data["exists"])}
        return cls(base, fibers, order, rein, ex)


def _items(m):
    return m.items() if isinstance(m, dict) else m


def sub_as_json(sets: Sequence[FinSetObj]) -> dict:
    """Export Sub restricted to a product-closed family of sets as a table."""
    sub = SubFibration(max(len(x) for x in sets))
    by_size = {len(x): x for x in sets}
    objs = [x.name for x in sets]

    def closed(x: FinSetObj) -> FinSetObj:
        return by_size[len(x)]

    arrows, compose, ident = [], [], {}
    fn_id: dict = {}
    for x in sets:
        for y in sets:
            for f in R.all_functions(x, y):
                aid = f"{x.name}>{y.name}:{''.join(map(str, f.table))}"
                fn_id[(x.name, y.name, f.table)] = aid
                arrows.append({"id": aid, "src": x.name, "tgt": y.name})
    for x in sets:
        ident[x.name] = fn_id[(x.name, x.name, tuple(range(len(x))))]
        for y in sets:
            for z in sets:
                for f in R.all_functions(x, y):
                    for g in R.all_functions(y, z):
                        compose.append([fn_id[(x.name, y.name, f.table)], fn_id[(y.name, z.name, g.table)],
                                        fn_id[(x.name, z.name, f.then(g).table)]])
    products = []
    for x in sets:
        for y in sets:
            p = closed(R.product(x, y))
            # identify the closed representative with x*y via the element order
            p1 = tuple(i // len(y) for i in range(len(x) * len(y)))
            p2 = tuple(i % len(y) for i in range(len(x) * len(y)))
            products.append({"left": x.name, "right": y.name, "product": p.name,
                             "p1": fn_id[(p.name, x.name, p1)], "p2": fn_id[(p.name, y.name, p2)]})
    terminal = by_size[1].name

    def pid(x, s):
        return f"{x.name}{{{','.join(e for e in x if e in s)}}}"

    fibers = {}
    for x in sets:
        preds = sub.fiber(x)
        fibers[x.name] = {"elements": [pid(x, p) for p in preds],
                          "leq": [[pid(x, p), pid(x, q)] for p in preds for q in preds if p <= q]}
    rein, ex = {}, {}
    for x in sets:
        for y in sets:
            for f in R.all_functions(x, y):
                aid = fn_id[(x.name, y.name, f.table)]
                rein[aid] = [[pid(y, q), pid(x, sub.reindex(f, q))] for q in sub.fiber(y)]
                ex[aid] = [[pid(x, p), pid(y, sub.exists(f, p))] for p in sub.fiber(x)]
    return {"base": {"objects": objs, "arrows": arrows, "compose": compose, "identity": ident},
            "terminal": terminal, "products": products, "fibers": fibers, "reindex": rein, "exists": ex}


# ------------------------------------------------------------------ operations


def reindex(fib: RegFibration, f, p):
    return fib.reindex(f, p)


def exists_along(fib: RegFibration, f, p):
    return fib.exists(f, p)


def image_of(fib: RegFibration, t):
    return fib.exists(t, fib.top(fib.base.src(t)))


def adjunction_holds(fib: RegFibration, f) -> tuple[bool, Any]:
    b = fib.base
    x, y = b.src(f), b.tgt(f)
    for p in fib.fiber(x):
        ep = fib.exists(f, p)
        for q in fib.fiber(y):
            if fib.leq(y, ep, q) != fib.leq(x, p, fib.reindex(f, q)):
                return False, {"f": f, "p": p, "q": q}
    return True, None


def frobenius_check(fib: RegFibration, f, a, b) -> bool:
    x, y = fib.base.src(f), fib.base.tgt(f)
    lhs = fib.exists(f, fib.meet(x, a, fib.reindex(f, b)))
    rhs = fib.meet(y, fib.exists(f, a), b)
    return fib.eq_pred(y, lhs, rhs)


@dataclass(frozen=True)
class PASquare:
    kind: str
    P: Any
    X: Any
    Xp: Any
    Y: Any
    u: Any
    v: Any
    t: Any
    s: Any

    def objects(self) -> tuple:
        return (self.P, self.X, self.Xp, self.Y)

    def commutes(self, base) -> bool:
        return base.compose(self.u, self.t) == base.compose(self.v, self.s)

    def to_json(self) -> dict:
        from .report import jsonable
        return {"kind": self.kind, "u": jsonable(self.u), "v": jsonable(self.v),
                "t": jsonable(self.t), "s": jsonable(self.s)}


def square(base, kind: str, u, v, t, s) -> PASquare:
    return PASquare(kind, base.src(u), base.tgt(u), base.tgt(v), base.tgt(t), u, v, t, s)


def square_A(base, t) -> PASquare:
    x, y = base.src(t), base.tgt(t)
    return square(base, "A", base.pairing(base.identity(x), t), t, base.times(t, base.identity(y)), base.diag(y))


def square_B(base, x) -> PASquare:
    one = base.identity(x)
    return square(base, "B", one, one, base.diag(x), base.diag(x))


def square_C(base, t, tp) -> PASquare:
    x, y = base.src(t), base.tgt(t)
    xp, yp = base.src(tp), base.tgt(tp)
    return square(base, "C", base.times(base.identity(xp), t), base.times(tp, base.identity(x)),
                  base.times(tp, base.identity(y)), base.times(base.identity(yp), t))


def square_D(base, sq: PASquare, z, side: str = "right") -> PASquare:
    iz = base.identity(z)
    if side == "right":
        f = lambda a: base.times(a, iz)
    else:
        f = lambda a: base.times(iz, a)
    return square(base, f"D({sq.kind},{side})", f(sq.u), f(sq.v), f(sq.t), f(sq.s))


def gen_product_absolute_squares(fib: RegFibration, bound: int | None = None,
                                  bound_products: bool = True) -> list[PASquare]:
    """Squares of kinds A, B, C, and D applied to the A/B/C stock.  The arrows
    and objects the templates are built from range over the base within the
    bound; with ``bound_products`` the squares must also have all four corner
    objects within the bound, otherwise products may exceed it."""
    base = fib.base
    objs = [x for x in base.objects() if base.within(x, bound)]

    def fits(*xs):
        return not bound_products or all(base.within(o, bound) for o in xs)

    stock = []
    arrows = [f for x in objs for y in objs for f in base.hom(x, y)]
    for t in arrows:
        x, y = base.src(t), base.tgt(t)
        if fits(base.product(x, y), base.product(y, y)):
            stock.append(square_A(base, t))
    for x in objs:
        if fits(base.product(x, x)):
            stock.append(square_B(base, x))
    for t in arrows:
        for tp in arrows:
            if fits(base.product(base.src(tp), base.src(t)), base.product(base.src(tp), base.tgt(t)),
                    base.product(base.tgt(tp), base.src(t)), base.product(base.tgt(tp), base.tgt(t))):
                stock.append(square_C(base, t, tp))
    stock = [sq for sq in stock if fits(*sq.objects())]
    out = list(stock)
    for sq in stock:
        for z in objs:
            for side in ("right", "left"):
                prods = [base.product(o, z) if side == "right" else base.product(z, o) for o in sq.objects()]
                if fits(*prods):
                    out.append(square_D(base, sq, z, side))
    return out


def beck_chevalley_holds(fib: RegFibration, sq: PASquare) -> tuple[bool, Any]:
    """Both mates are identities: exists_u . v* = t* . exists_s on the fiber
    over X', and exists_v . u* = s* . exists_t on the fiber over X."""
    if isinstance(fib, SubFibration):
        return _bc_sub(sq)
    for p in fib.fiber(sq.Xp):
        a = fib.exists(sq.u, fib.reindex(sq.v, p))
        b = fib.reindex(sq.t, fib.exists(sq.s, p))
        if not fib.eq_pred(sq.X, a, b):
            return False, {"mate": "exists_u v* = t* exists_s", "predicate": p, "lhs": a, "rhs": b}
    for p in fib.fiber(sq.X):
        a = fib.exists(sq.v, fib.reindex(sq.u, p))
        b = fib.reindex(sq.s, fib.exists(sq.t, p))
        if not fib.eq_pred(sq.Xp, a, b):
            return False, {"mate": "exists_v u* = s* exists_t", "predicate": p, "lhs": a, "rhs": b}
    return True, None


def _bc_sub(sq: PASquare) -> tuple[bool, Any]:
    tab = SubFibration.tables
    pre_u, img_u = tab(sq.u)
    pre_v, img_v = tab(sq.v)
    pre_t, img_t = tab(sq.t)
    pre_s, img_s = tab(sq.s)
    lhs = img_u[pre_v]
    rhs = pre_t[img_s]
    if not np.array_equal(lhs, rhs):
        m = int(np.argmax(lhs != rhs))
        return False, {"mate": "exists_u v* = t* exists_s", "predicate": sorted(SubFibration.from_mask(sq.Xp, m)),
                       "lhs": sorted(SubFibration.from_mask(sq.X, int(lhs[m]))),
                       "rhs": sorted(SubFibration.from_mask(sq.X, int(rhs[m])))}
    lhs = img_v[pre_u]
    rhs = pre_s[img_t]
    if not np.array_equal(lhs, rhs):
        m = int(np.argmax(lhs != rhs))
        return False, {"mate": "exists_v u* = s* exists_t", "predicate": sorted(SubFibration.from_mask(sq.X, m)),
                       "lhs": sorted(SubFibration.from_mask(sq.Xp, int(lhs[m]))),
                       "rhs": sorted(SubFibration.from_mask(sq.Xp, int(rhs[m])))}
    return True, None


def kernel_square(base, sq: PASquare) -> PASquare:
    """The square witnessing that the comparison <u, v> is monic: identities
    on the top and left, the comparison on the right and bottom."""
    m = base.pairing(sq.u, sq.v)
    one = base.identity(sq.P)
    return square(base, "kernel", one, one, m, m)


def comprehend(fib: RegFibration, x, p):
    if not getattr(fib, "has_comprehension", False):
        raise CapabilityError("this fibration does not declare comprehension")
    return fib.comprehend(x, p)


def factorizations(base, t, i) -> list:
    """All h with h;i = t."""
    return [h for h in base.hom(base.src(t), base.src(i)) if base.compose(h, i) == t]


def comprehension_universal(fib: RegFibration, t, x, p) -> tuple[bool, Any]:
    """Factorizations of t through i_p are in bijection with top <= t*(p)
    (at most one of each in the ordered case)."""
    i = comprehend(fib, x, p)
    n = len(factorizations(fib.base, t, i))
    y = fib.base.src(t)
    expected = 1 if fib.leq(y, fib.top(y), fib.reindex(t, p)) else 0
    return n == expected, {"t": t, "p": p, "factorizations": n, "expected": expected}


def comprehension_full(fib: RegFibration, x, p, q) -> bool:
    """q <= p iff i_q factors through i_p (extension is fully faithful)."""
    iq, ip = comprehend(fib, x, q), comprehend(fib, x, p)
    n = len(factorizations(fib.base, iq, ip))
    return n <= 1 and (n == 1) == fib.leq(x, q, p)


def unit_of_image(fib: RegFibration, t):
    """e_t: Y -> {img t}, the factorization of t through the extension of its image."""
    y, x = fib.base.src(t), fib.base.tgt(t)
    i = comprehend(fib, x, image_of(fib, t))
    hs = factorizations(fib.base, t, i)
    if len(hs) != 1:
        raise FiberError("image does not factor uniquely")
    return hs[0]


def injection_test(fib: RegFibration, t) -> bool:
    return fib.base.is_iso(unit_of_image(fib, t))


def extensionality_test(fib: RegFibration, bound: int | None = None) -> tuple[bool, dict]:
    """Extensional equality checked on all parallel pairs, and every diagonal
    being an injection; the two verdicts must agree."""
    base = fib.base
    objs = [x for x in base.objects() if base.within(x, bound)]
    ext = True
    witness = None
    for x in objs:
        d = base.diag(x)
        eq = fib.exists(d, fib.top(x))
        for y in objs:
            fs = list(base.hom(y, x))
            for f in fs:
                for g in fs:
                    holds = fib.leq(y, fib.top(y), fib.reindex(base.pairing(f, g), eq))
                    if holds and f != g:
                        ext = False
                        witness = witness or {"f": f, "g": g}
    diags = all(injection_test(fib, base.diag(x)) for x in objs)
    return ext and diags and ext == diags, {"extensional": ext, "diagonals_injective": diags, "witness": witness}


def slice_equivalence(fib: SubFibration, x: FinSetObj, p: frozenset) -> tuple[bool, Any]:
    """The fiber over {p} is order-isomorphic to the downset of p over X,
    via the existential along the extension."""
    i = fib.comprehend(x, p)
    sub = i.src
    src = fib.fiber(sub)
    down = [q for q in fib.fiber(x) if fib.leq(x, q, p)]
    image = [fib.exists(i, q) for q in src]
    if sorted(map(sorted, image)) != sorted(map(sorted, down)):
        return False, {"p": p, "reason": "not a bijection onto the downset"}
    for a in src:
        for b in src:
            if fib.leq(sub, a, b) != fib.leq(x, fib.exists(i, a), fib.exists(i, b)):
                return False, {"p": p, "a": a, "b": b}
    return True, None


# ------------------------------------------------------------------ set-level oracles


def comparison(base: FinSetBase, sq: PASquare) -> tuple[bool, bool]:
    """(surjective onto the set pullback, injective) for the map P -> X x_Y X'."""
    pb = {(a, b) for a in sq.X for b in sq.Xp if sq.t(a) == sq.s(b)}
    images = [(sq.u(p), sq.v(p)) for p in sq.P]
    return set(images) == pb, len(set(images)) == len(images)


def is_set_pullback(sq: PASquare) -> bool:
    sur, inj = comparison(None, sq)
    return sur and inj


def is_weak_pullback(sq: PASquare) -> bool:
    return comparison(None, sq)[0]


def commuting_squares(bound: int) -> Iterator[PASquare]:
    """Every commuting square of functions whose objects have size <= bound."""
    sets = R.universe(bound)
    for y in sets:
        for x in sets:
            ts = list(R.all_functions(x, y))
            for xp in sets:
                ss = list(R.all_functions(xp, y))
                for p in sets:
                    us = list(R.all_functions(p, x))
                    vs = list(R.all_functions(p, xp))
                    for t in ts:
                        by_key: dict = {}
                        for u in us:
                            by_key.setdefault(tuple(t.table[i] for i in u.table), []).append(u)
                        for s in ss:
                            for v in vs:
                                key = tuple(s.table[i] for i in v.table)
                                for u in by_key.get(key, ()):
                                    yield PASquare("any", p, x, xp, y, u, v, t, s)


# ------------------------------------------------------------------ validation


def validate(fib: RegFibration, bound: int | None = None) -> Report:
    base = fib.base
    rep = Report("regular-fibration")
    objs = [x for x in base.objects() if base.within(x, bound)]
    arrows = [f for x in objs for y in objs for f in base.hom(x, y)]
    rep.info["objects"] = len(objs)
    rep.info["arrows"] = len(arrows)

    # fibers: meets and top
    bad = None
    n = 0
    for x in objs:
        fx = fib.fiber(x)
        top = fib.top(x)
        for p in fx:
            if not fib.leq(x, p, top):
                bad = bad or {"object": x, "p": p}
            for q in fx:
                n += 1
                m = fib.meet(x, p, q)
                if not (fib.leq(x, m, p) and fib.leq(x, m, q)):
                    bad = bad or {"object": x, "p": p, "q": q}
                for r in fx:
                    if fib.leq(x, r, p) and fib.leq(x, r, q) and not fib.leq(x, r, m):
                        bad = bad or {"object": x, "p": p, "q": q, "r": r}
    rep.add("fiber meets and top", "each fiber has finite meets", bad is None, bad, n)

    bad = None
    for f in arrows:
        ok, w = adjunction_holds(fib, f)
        if not ok:
            bad = w
            break
    rep.add("adjunction", "exists_f is left adjoint to f*", bad is None, bad, len(arrows))

    bad_mono = bad_pres = bad_frob = None
    n_pres = n_frob = 0
    for f in arrows:
        x, y = base.src(f), base.tgt(f)
        fy = fib.fiber(y)
        fx = fib.fiber(x)
        if not fib.eq_pred(x, fib.reindex(f, fib.top(y)), fib.top(x)):
            bad_pres = bad_pres or {"f": f, "law": "top"}
        for a in fy:
            for b in fy:
                n_pres += 1
                if fib.leq(y, a, b) and not fib.leq(x, fib.reindex(f, a), fib.reindex(f, b)):
                    bad_mono = bad_mono or {"f": f, "a": a, "b": b}
                if not fib.eq_pred(x, fib.reindex(f, fib.meet(y, a, b)), fib.meet(x, fib.reindex(f, a), fib.reindex(f, b))):
                    bad_pres = bad_pres or {"f": f, "a": a, "b": b}
        for a in fx:
            for b in fy:
                n_frob += 1
                if not frobenius_check(fib, f, a, b):
                    bad_frob = bad_frob or {"f": f, "a": a, "b": b}
    rep.add("reindexing monotone", "f* is monotone", bad_mono is None, bad_mono, n_pres)
    rep.add("reindexing preserves meets", "fibred finite products", bad_pres is None, bad_pres, n_pres)
    rep.add("frobenius reciprocity", "exists_f(a meet f*b) = exists_f(a) meet b", bad_frob is None, bad_frob, n_frob)

    bad = None
    n = 0
    small = [x for x in objs if base.within(x, 3)]
    for x in small:
        for y in small:
            for f in base.hom(x, y):
                for z in small:
                    for g in base.hom(y, z):
                        fg = base.compose(f, g)
                        for c in fib.fiber(z):
                            n += 1
                            if not fib.eq_pred(x, fib.reindex(fg, c), fib.reindex(f, fib.reindex(g, c))):
                                bad = bad or {"f": f, "g": g, "c": c}
        for p in fib.fiber(x):
            if not fib.eq_pred(x, fib.reindex(base.identity(x), p), p):
                bad = bad or {"identity": x, "p": p}
    rep.add("reindexing functorial", "(f;g)* = f* g* and 1* = 1 (composable pairs on sets <= 3)", bad is None, bad, n)

    _bc_by_kind(rep, fib, gen_product_absolute_squares(fib, bound), "")
    if isinstance(fib, SubFibration):
        # templates over sets <= 2 whose products may exceed the bound
        _bc_by_kind(rep, fib, gen_product_absolute_squares(fib, min(2, fib.bound), bound_products=False),
                    ", unbounded products")
    bad = None
    for x in objs:
        d = base.diag(x)
        eq = fib.exists(d, fib.top(x))
        xx = base.product(x, x)
        if not fib.eq_pred(xx, fib.meet(xx, eq, eq), eq):
            bad = bad or x
        if not fib.eq_pred(x, fib.reindex(d, eq), fib.top(x)):
            bad = bad or x
    rep.add("equality subterminal", "d_!T meet d_!T = d_!T and d*d_!T = T", bad is None, bad, len(objs))
    return rep


def _bc_by_kind(rep: Report, fib: RegFibration, squares: list, suffix: str) -> None:
    base = fib.base
    by_kind: dict = {}
    for sq in squares:
        k = sq.kind[0]
        acc = by_kind.setdefault(k, [0, None])
        acc[0] += 1
        if not sq.commutes(base):
            acc[1] = acc[1] or {"square": sq, "reason": "does not commute"}
            continue
        ok, w = beck_chevalley_holds(fib, sq)
        if not ok and acc[1] is None:
            acc[1] = {"square": sq, **w}
    for k in "ABCD":
        n, w = by_kind.get(k, (0, None))
        rep.add(f"beck-chevalley ({k}{suffix})", f"both mates invertible on product-absolute squares of kind {k}",
                w is None, w, n)


def validate_sub_extras(fib: SubFibration, bound: int | None = None) -> Report:
    """Comprehension, injections, extensionality and the slice equivalence."""
    bound = fib.bound if bound is None else bound
    rep = Report("sub-comprehension")
    sets = R.universe(bound)
    bad = None
    n = 0
    for x in sets:
        for p in fib.fiber(x):
            for y in sets:
                for t in R.all_functions(y, x):
                    n += 1
                    ok, w = comprehension_universal(fib, t, x, p)
                    if not ok:
                        bad = bad or w
    rep.add("comprehension universal", "factorizations through i_P match T <= t*P", bad is None, bad, n)
    bad = None
    n = 0
    for x in sets:
        for p in fib.fiber(x):
            for q in fib.fiber(x):
                n += 1
                if not comprehension_full(fib, x, p, q):
                    bad = bad or {"x": x, "p": p, "q": q}
    rep.add("comprehension full", "extension is fully faithful", bad is None, bad, n)
    bad = None
    n = 0
    for x in sets:
        for y in sets:
            for t in R.all_functions(y, x):
                n += 1
                if injection_test(fib, t) != t.is_injective():
                    bad = bad or t
    rep.add("injections", "e_t invertible iff t is injective", bad is None, bad, n)
    ok, info = extensionality_test(fib, bound)
    rep.add("extensional equality", "parallel maps equal when provably equal; diagonals are injections", ok, info,
            len(sets))
    bad = None
    n = 0
    for x in sets:
        for p in fib.fiber(x):
            n += 1
            ok, w = slice_equivalence(fib, x, p)
            if not ok:
                bad = bad or w
    rep.add("slice equivalence", "predicates over {P} are the predicates below P", bad is None, bad, n)
    return rep


def pullback_agreement(bound: int = 3) -> Report:
    """On every commuting square: Beck-Chevalley against the set oracles.
    In Sub, the mates are invertible exactly for weak pullbacks; adding the
    kernel square of the comparison map gives exactly the pullbacks."""
    rep = Report("pullback-agreement")
    base = FinSetBase(bound)
    n = 0
    w_weak = w_full = None
    counter = None
    for sq in commuting_squares(bound):
        n += 1
        bc, _ = _bc_sub(sq)
        if bc != is_weak_pullback(sq):
            w_weak = w_weak or sq
        kernel_ok, _ = _bc_sub(kernel_square(base, sq))
        if (bc and kernel_ok) != is_set_pullback(sq):
            w_full = w_full or sq
        if counter is None and bc and not is_set_pullback(sq):
            counter = sq
    rep.add("beck-chevalley iff weak pullback", "mates of a commuting square vs the set pullback", w_weak is None,
            w_weak, n)
    rep.add("beck-chevalley with kernel square iff pullback", "mates plus monicity of the comparison", w_full is None,
            w_full, n)
    rep.info["non-pullback square satisfying beck-chevalley"] = counter
    return rep
