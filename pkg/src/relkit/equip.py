"""Locally ordered equipments: matrices over a regular fibration, predicates
of an equipment, mates, exact cells, tabulation and comonads.

Composition is written diagrammatically throughout: ``comp(m, n)`` is
``m`` followed by ``n``.  A cell with boundary

    X --M--> Y
    f|       |g
    X'--N--> Y'

asserts ``M ; g_* <= f_* ; N`` where ``f_*`` is the companion of ``f``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Any

from . import finrel as R
from .fib import CapabilityError, FiberError, RegFibration
from .fib import comprehend
from .finrel import Fn, Relation
from .report import Report


@dataclass(frozen=True)
class Pro:
    """A proarrow src -|-> tgt carrying a predicate over src x tgt."""
    src: Any
    tgt: Any
    value: Any

    def __repr__(self) -> str:
        v = sorted(self.value) if isinstance(self.value, frozenset) else self.value
        return f"Pro[{_name(self.src)}->{_name(self.tgt)}]({v})"


def _name(x) -> str:
    return getattr(x, "name", repr(x))


@dataclass(frozen=True)
class Cell:
    f: Any
    g: Any
    top: Pro
    bottom: Pro


@dataclass(frozen=True)
class ComonadPro:
    carrier: Any
    G: Pro


# ------------------------------------------------------------------ equipments


class Equipment:
    """Interface: tight arrows come from ``base``; proarrows form posets."""

    base: Any
    terminal: Any = None

    def objects(self, bound: int | None = None) -> list:
        return [x for x in self.base.objects() if self.base.within(x, bound)]

    def hom(self, x, y) -> list[Pro]:
        raise NotImplementedError

    def leq(self, m: Pro, n: Pro) -> bool:
        raise NotImplementedError

    def meet(self, m: Pro, n: Pro) -> Pro:
        raise NotImplementedError

    def top(self, x, y) -> Pro:
        raise NotImplementedError

    def comp(self, m: Pro, n: Pro) -> Pro:
        raise NotImplementedError

    def ident(self, x) -> Pro:
        raise NotImplementedError

    def companion(self, f) -> Pro:
        raise NotImplementedError

    def conjoint(self, f) -> Pro:
        raise NotImplementedError

    def tensor(self, m: Pro, n: Pro) -> Pro:
        raise NotImplementedError

    def comp_all(self, first: Pro, *rest: Pro) -> Pro:
        out = first
        for m in rest:
            out = self.comp(out, m)
        return out

    def eq(self, m: Pro, n: Pro) -> bool:
        return self.leq(m, n) and self.leq(n, m)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        from .finrel import CompositionError
        raise CompositionError(msg)


class Matr(Equipment):
    """Matrices in a regular fibration: hom(X, Y) is the fiber over X x Y."""

    def __init__(self, fib: RegFibration):
        self.fib = fib
        self.base = fib.base
        self.terminal = getattr(fib.base, "terminal", None)
        self._cache: dict = {}

    # -- structure maps of the base, cached
    def _memo(self, key, make):
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = make()
            return val

    def _triple(self, x, y, z):
        """(X x Y) x Z with the projections to X x Y, Y x Z and X x Z."""
        def make():
            b = self.base
            xy = b.product(x, y)
            t = b.product(xy, z)
            p_xy = b.proj1(xy, z)
            p_z = b.proj2(xy, z)
            p_x = b.compose(p_xy, b.proj1(x, y))
            p_y = b.compose(p_xy, b.proj2(x, y))
            return t, p_xy, b.pairing(p_y, p_z), b.pairing(p_x, p_z)
        return self._memo(("triple", x, y, z), make)

    def _over(self, x, y):
        return self._memo(("prod", x, y), lambda: self.base.product(x, y))

    def hom(self, x, y) -> list[Pro]:
        return [Pro(x, y, p) for p in self.fib.fiber(self._over(x, y))]

    def leq(self, m: Pro, n: Pro) -> bool:
        _need((m.src, m.tgt) == (n.src, n.tgt), "comparing proarrows of different types")
        return self.fib.leq(self._over(m.src, m.tgt), m.value, n.value)

    def meet(self, m: Pro, n: Pro) -> Pro:
        _need((m.src, m.tgt) == (n.src, n.tgt), "meet of proarrows of different types")
        return Pro(m.src, m.tgt, self.fib.meet(self._over(m.src, m.tgt), m.value, n.value))

    def top(self, x, y) -> Pro:
        return Pro(x, y, self.fib.top(self._over(x, y)))

    def comp(self, m: Pro, n: Pro) -> Pro:
        _need(m.tgt == n.src, f"cannot compose a proarrow into {_name(m.tgt)} with one out of {_name(n.src)}")
        x, y, z = m.src, m.tgt, n.tgt
        t, p_xy, p_yz, p_xz = self._triple(x, y, z)
        fib = self.fib
        both = fib.meet(t, fib.reindex(p_xy, m.value), fib.reindex(p_yz, n.value))
        return Pro(x, z, fib.exists(p_xz, both))

    def ident(self, x) -> Pro:
        return self._memo(("id", x), lambda: Pro(x, x, self.fib.exists(self.base.diag(x), self.fib.top(x))))

    def companion(self, f) -> Pro:
        def make():
            b = self.base
            x, y = b.src(f), b.tgt(f)
            return Pro(x, y, self.fib.reindex(b.times(f, b.identity(y)), self.ident(y).value))
        return self._memo(("comp", f), make)

    def conjoint(self, f) -> Pro:
        def make():
            b = self.base
            x, y = b.src(f), b.tgt(f)
            return Pro(y, x, self.fib.reindex(b.times(b.identity(y), f), self.ident(y).value))
        return self._memo(("conj", f), make)

    def _tensor_maps(self, x, xp, y, yp):
        def make():
            b = self.base
            a, c = b.product(x, xp), b.product(y, yp)
            over = b.product(a, c)
            p1, p2 = b.proj1(a, c), b.proj2(a, c)
            q_xy = b.pairing(b.compose(p1, b.proj1(x, xp)), b.compose(p2, b.proj1(y, yp)))
            q_xpyp = b.pairing(b.compose(p1, b.proj2(x, xp)), b.compose(p2, b.proj2(y, yp)))
            return a, c, over, q_xy, q_xpyp
        return self._memo(("tensor", x, xp, y, yp), make)

    def tensor(self, m: Pro, n: Pro) -> Pro:
        a, c, over, q, qp = self._tensor_maps(m.src, n.src, m.tgt, n.tgt)
        return Pro(a, c, self.fib.meet(over, self.fib.reindex(q, m.value), self.fib.reindex(qp, n.value)))

    def converse(self, m: Pro) -> Pro:
        b = self.base
        sw = b.pairing(b.proj2(m.tgt, m.src), b.proj1(m.tgt, m.src))
        return Pro(m.tgt, m.src, self.fib.reindex(sw, m.value))


def matr(fib: RegFibration, validate_first: bool = False, bound: int | None = None) -> Matr:
    if validate_first:
        from .fib import validate
        rep = validate(fib, bound)
        if not rep.ok:
            raise FiberError(f"not a regular fibration: {rep.failures()[0].law}")
    return Matr(fib)


# -- identification of matr(Sub) with relations


def to_relation(m: Pro) -> Relation:
    x, y = m.src, m.tgt
    return Relation(x, y, [(a, b) for a in x for b in y if R.pair(a, b) in m.value])


def from_relation(r: Relation) -> Pro:
    return Pro(r.src, r.tgt, frozenset(R.pair(a, b) for a, b in r.pairs))


# ------------------------------------------------------------------ predicates of an equipment


class PredFibration(RegFibration):
    """Predicates over X are proarrows X -|-> 1; reindexing precomposes the
    companion and the existential precomposes the conjoint."""

    def __init__(self, eq: Equipment):
        if eq.terminal is None:
            raise CapabilityError("pred needs a terminal object")
        self.eq = eq
        self.base = eq.base
        self.one = eq.terminal
        self.reindex = lru_cache(maxsize=None)(self._reindex)
        self.exists = lru_cache(maxsize=None)(self._exists)

    def fiber(self, x) -> list:
        return self.eq.hom(x, self.one)

    def in_fiber(self, x, p) -> bool:
        return isinstance(p, Pro) and p.src == x and p.tgt == self.one

    def leq(self, x, p, q) -> bool:
        return self.eq.leq(p, q)

    def meet(self, x, p, q):
        return self.eq.meet(p, q)

    def top(self, x):
        return self.eq.top(x, self.one)

    def _reindex(self, f, p):
        if p.src != self.base.tgt(f):
            raise FiberError(f"{p!r} is not over the target of {f!r}")
        return self.eq.comp(self.eq.companion(f), p)

    def _exists(self, f, p):
        if p.src != self.base.src(f):
            raise FiberError(f"{p!r} is not over the source of {f!r}")
        return self.eq.comp(self.eq.conjoint(f), p)


def pred(eq: Equipment) -> PredFibration:
    return PredFibration(eq)


# ------------------------------------------------------------------ cells and mates


def cell_holds(eq: Equipment, c: Cell) -> bool:
    return eq.leq(eq.comp(c.top, eq.companion(c.g)), eq.comp(eq.companion(c.f), c.bottom))


def mate_of_cell(eq: Equipment, c: Cell, side: str = "left") -> tuple[Pro, Pro]:
    """The mate as a pair (lhs, rhs) with lhs <= rhs.  ``left`` gives
    f^* ; M ; g_* <= N, ``right`` gives M <= f_* ; N ; g^*."""
    if side == "left":
        return eq.comp_all(eq.conjoint(c.f), c.top, eq.companion(c.g)), c.bottom
    if side == "right":
        return c.top, eq.comp_all(eq.companion(c.f), c.bottom, eq.conjoint(c.g))
    raise ValueError(f"unknown side {side!r}")


def mate_forms_matr(eq: Matr, c: Cell) -> tuple[bool, bool, bool]:
    """The three equivalent forms of a cell in matrices, by reindexing and
    existentials along products of tight maps."""
    b, fib = eq.base, eq.fib
    f, g, m, n = c.f, c.g, c.top, c.bottom
    x, y = m.src, m.tgt
    xp, yp = n.src, n.tgt
    one = fib.reindex(b.times(f, g), n.value)
    a = fib.leq(b.product(x, y), m.value, one)
    lhs = fib.exists(b.times(b.identity(x), g), m.value)
    rhs = fib.reindex(b.times(f, b.identity(yp)), n.value)
    bb = fib.leq(b.product(x, yp), lhs, rhs)
    cc = fib.leq(b.product(xp, yp), fib.exists(b.times(f, g), m.value), n.value)
    return a, bb, cc


def exact_cell(eq: Equipment, c: Cell) -> bool:
    """The left mate holds as an equality."""
    lhs, rhs = mate_of_cell(eq, c, "left")
    return eq.eq(lhs, rhs)


def square_cells(eq: Equipment, sq) -> tuple[Cell, Cell]:
    """The two cells of a commuting tight square u;t = v;s, read in the two
    directions.  Their left mates are v^* ; u_* = s_* ; t^* and
    u^* ; v_* = t_* ; s^*."""
    one = eq.ident(sq.P)
    c1 = Cell(sq.v, sq.u, one, eq.comp(eq.companion(sq.s), eq.conjoint(sq.t)))
    c2 = Cell(sq.u, sq.v, one, eq.comp(eq.companion(sq.t), eq.conjoint(sq.s)))
    return c1, c2


def square_exact(eq: Equipment, sq) -> tuple[bool, bool]:
    c1, c2 = square_cells(eq, sq)
    return exact_cell(eq, c1), exact_cell(eq, c2)


def coassociativity_square(base, x):
    """x --d--> x*x over (x*x)*x, the square behind the Frobenius equation."""
    from .fib import square
    d = base.diag(x)
    xx = base.product(x, x)
    t = base.compose(base.times(base.identity(x), d), _assoc(base, x, x, x))
    s = base.times(d, base.identity(x))
    return square(base, "coassociativity", d, d, t, s)


def _assoc(base, x, y, z):
    """x*(y*z) -> (x*y)*z from the product structure."""
    yz = base.product(y, z)
    p1, p2 = base.proj1(x, yz), base.proj2(x, yz)
    a = base.pairing(p1, base.compose(p2, base.proj1(y, z)))
    return base.pairing(a, base.compose(p2, base.proj2(y, z)))


# ------------------------------------------------------------------ tabulation


@dataclass
class Tabulation:
    apex: Any
    inclusion: Any   # apex -> X x Y
    left: Any        # apex -> X
    right: Any       # apex -> Y
    cell: Cell

    def to_json(self) -> dict:
        from .report import jsonable
        return {"apex": jsonable(self.apex), "left": jsonable(self.left), "right": jsonable(self.right)}


def tabulate_proarrow(eq: Equipment, m: Pro) -> Tabulation:
    if not isinstance(eq, Matr) or not getattr(eq.fib, "has_comprehension", False):
        raise CapabilityError("tabulation needs matrices over a fibration with comprehension")
    b = eq.base
    over = b.product(m.src, m.tgt)
    i = comprehend(eq.fib, over, m.value)
    left = b.compose(i, b.proj1(m.src, m.tgt))
    right = b.compose(i, b.proj2(m.src, m.tgt))
    z = b.src(i)
    return Tabulation(z, i, left, right, Cell(left, right, eq.ident(z), m))


def _count_factorizations(t: Fn, i: Fn) -> int:
    """Number of h with h;i = t, for functions."""
    fibre = {}
    for k in i.table:
        fibre[k] = fibre.get(k, 0) + 1
    return prod(fibre.get(k, 0) for k in t.table)


def tabulation_universal(eq: Matr, tab: Tabulation, bound: int) -> tuple[bool, Any]:
    """Every cell (1_W; f, g) into the proarrow factors through the
    tabulation by exactly one tight map; cells are checked in the
    equipment, factorizations counted among all functions."""
    b = eq.base
    m = tab.cell.bottom
    n = 0
    for w in eq.objects(bound):
        iw = eq.ident(w)
        for f in b.hom(w, m.src):
            for g in b.hom(w, m.tgt):
                n += 1
                is_cell = cell_holds(eq, Cell(f, g, iw, m))
                k = _count_factorizations(b.pairing(f, g), tab.inclusion)
                if k != (1 if is_cell else 0):
                    return False, {"W": w, "f": f, "g": g, "cell": is_cell, "factorizations": k}
    return True, n


def tabulation_full(eq: Equipment, tab: Tabulation) -> bool:
    """The mate of the tabulating cell, left^* ; right_*, is the proarrow."""
    lhs, rhs = mate_of_cell(eq, tab.cell, "left")
    return eq.eq(lhs, rhs)


# ------------------------------------------------------------------ comonads and EM objects


def comonad_of_proarrow(eq: Equipment, m: Pro) -> ComonadPro:
    """G_R on X x Y: (d_X x 1_Y)_* ; (1_X (x) R (x) 1_Y) ; (1_X x d_Y)^*."""
    b = eq.base
    x, y = m.src, m.tgt
    ix, iy = eq.ident(x), eq.ident(y)
    first = eq.companion(b.times(b.diag(x), b.identity(y)))         # x*y -|-> (x*x)*y
    mid = eq.tensor(eq.tensor(ix, m), iy)                            # (x*x)*y -|-> (x*y)*y
    last = eq.conjoint(b.compose(b.times(b.identity(x), b.diag(y)), _assoc(b, x, y, y)))  # (x*y)*y -|-> x*y
    return ComonadPro(b.product(x, y), eq.comp_all(first, mid, last))


def comonad_laws(eq: Equipment, c: ComonadPro) -> dict[str, bool]:
    g = c.G
    return {"counit": eq.leq(g, eq.ident(c.carrier)), "comultiplication": eq.leq(g, eq.comp(g, g))}


def all_comonads(eq: Equipment, x) -> list[ComonadPro]:
    out = []
    for g in eq.hom(x, x):
        c = ComonadPro(x, g)
        if all(comonad_laws(eq, c).values()):
            out.append(c)
    return out


@dataclass
class EMObject:
    apex: Any
    leg: Any            # the comodule map apex -> X
    tabulation: Tabulation


def em_object(eq: Equipment, c: ComonadPro) -> EMObject:
    """The tabulation of G; both legs agree and give the comodule."""
    tab = tabulate_proarrow(eq, c.G)
    return EMObject(tab.apex, tab.left, tab)


def tight_comodules(eq: Equipment, c: ComonadPro, w) -> list:
    """Tight f: W -> X with f_* <= f_* ; G (the comodule structure is unique)."""
    return [f for f in eq.base.hom(w, c.carrier) if eq.leq(eq.companion(f), eq.comp(eq.companion(f), c.G))]


def em_universal_tight(eq: Matr, c: ComonadPro, em: EMObject, bound: int) -> tuple[bool, Any]:
    """Tight comodules W -> X correspond to tight maps W -> X^G by
    composing with the leg; uniqueness is replayed as
    g_* <= f_* ; G forcing f = g."""
    b = eq.base
    n = 0
    for w in eq.objects(bound):
        comods = set(tight_comodules(eq, c, w))
        hits: dict = {}
        for h in b.hom(w, em.apex):
            hits.setdefault(b.compose(h, em.leg), []).append(h)
        if set(hits) != comods or any(len(v) != 1 for v in hits.values()):
            return False, {"W": w, "reason": "comodules are not the maps through the leg"}
        fs = list(b.hom(w, c.carrier))
        for f in fs:
            fg = eq.comp(eq.companion(f), c.G)
            for g in fs:
                n += 1
                if eq.leq(eq.companion(g), fg) and f != g:
                    return False, {"W": w, "f": f, "g": g, "reason": "cell between distinct tight maps"}
    return True, n


def left_comodules(eq: Equipment, c: ComonadPro, z) -> list[Pro]:
    """M: Z -|-> X with M <= M ; G."""
    return [m for m in eq.hom(z, c.carrier) if eq.leq(m, eq.comp(m, c.G))]


def slice_description(eq: Equipment, c: ComonadPro, z) -> list[Pro]:
    """The proarrows Z -|-> X below top ; G."""
    gt = eq.comp(eq.top(z, c.carrier), c.G)
    return [m for m in eq.hom(z, c.carrier) if eq.leq(m, gt)]


def em_genuine(eq: Equipment, c: ComonadPro, em: EMObject, bound: int) -> tuple[bool, Any]:
    """Composition with the leg's companion is an order isomorphism from all
    proarrows Z -|-> X^G onto the left comodules, which in turn are the
    slice below top ; G."""
    leg = eq.companion(em.leg)
    for z in eq.objects(bound):
        comods = left_comodules(eq, c, z)
        if set(comods) != set(slice_description(eq, c, z)):
            return False, {"Z": z, "reason": "comodules differ from the slice description"}
        src = eq.hom(z, em.apex)
        image = {m: eq.comp(m, leg) for m in src}
        if set(image.values()) != set(comods) or len(set(image.values())) != len(src):
            return False, {"Z": z, "reason": "not a bijection onto comodules"}
        for a in src:
            for b2 in src:
                if eq.leq(a, b2) != eq.leq(image[a], image[b2]):
                    return False, {"Z": z, "a": a, "b": b2, "reason": "order not reflected"}
    return True, None


# ------------------------------------------------------------------ validation


def _pairs(eq: Equipment, x, y, limit: int, rng: random.Random):
    hom = eq.hom(x, y)
    if len(hom) ** 2 <= limit:
        return [(a, b) for a in hom for b in hom], True
    return [(rng.choice(hom), rng.choice(hom)) for _ in range(limit)], False


def validate_cartesian_regular(eq: Equipment, bound: int | None = None, pair_limit: int = 4096,
                               seed: int = 0) -> Report:
    """Local meets and top from the tensor and diagonals, companion
    adjunctions, separability and Frobenius exactness, type-(A) and (B)
    exactness, the terminal axiom, and Frobenius reciprocity for predicates.
    Pairs of proarrows are exhaustive when a hom has at most
    sqrt(pair_limit) elements and sampled otherwise."""
    rep = Report("cartesian-regular-equipment")
    b = eq.base
    rng = random.Random(seed)
    objs = eq.objects(bound)
    arrows = [f for x in objs for y in objs for f in b.hom(x, y)]
    one = eq.terminal

    bad, n, full = None, 0, True
    for x in objs:
        dx = eq.companion(b.diag(x))
        for y in objs:
            dy = eq.conjoint(b.diag(y))
            pairs, exhaustive = _pairs(eq, x, y, pair_limit, rng)
            full &= exhaustive
            for m, k in pairs:
                n += 1
                if not eq.eq(eq.meet(m, k), eq.comp_all(dx, eq.tensor(m, k), dy)):
                    bad = bad or {"m": m, "n": k}
    rep.add("local meet", "meet is d_* ; (m (x) n) ; d^*", bad is None, bad, n)
    rep.info["local meet exhaustive"] = full

    bad, n = None, 0
    if one is not None:
        for x in objs:
            for y in objs:
                n += 1
                formula = eq.comp_all(eq.companion(b.bang(x)), eq.ident(one), eq.conjoint(b.bang(y)))
                if not eq.eq(eq.top(x, y), formula):
                    bad = bad or {"X": x, "Y": y}
    rep.add("terminal axiom", "top is e_* ; 1_1 ; e^*", bad is None, bad, n)

    bad, n = None, 0
    for f in arrows:
        n += 1
        x, y = b.src(f), b.tgt(f)
        unit = eq.leq(eq.ident(x), eq.comp(eq.companion(f), eq.conjoint(f)))
        counit = eq.leq(eq.comp(eq.conjoint(f), eq.companion(f)), eq.ident(y))
        if not (unit and counit):
            bad = bad or {"f": f, "unit": unit, "counit": counit}
    rep.add("companion adjunction", "f_* -| f^*: unit and counit", bad is None, bad, n)

    from .fib import square_A, square_B
    bad, n = None, 0
    for x in objs:
        n += 1
        if not all(square_exact(eq, square_B(b, x))):
            bad = bad or {"X": x}
    rep.add("separability", "diagonal square exact", bad is None, bad, n)

    bad, n = None, 0
    for x in objs:
        n += 1
        if not all(square_exact(eq, coassociativity_square(b, x))):
            bad = bad or {"X": x}
    rep.add("frobenius exactness", "coassociativity square exact both ways", bad is None, bad, n)

    bad, n = None, 0
    for t in arrows:
        n += 1
        if not all(square_exact(eq, square_A(b, t))):
            bad = bad or {"t": t}
    rep.add("type-A exactness", "graph squares exact", bad is None, bad, n)

    bad, n = None, 0
    if one is not None:
        pf = pred(eq)
        for f in arrows:
            x, y = b.src(f), b.tgt(f)
            for a in pf.fiber(x):
                for c in pf.fiber(y):
                    n += 1
                    lhs = pf.exists(f, pf.meet(x, a, pf.reindex(f, c)))
                    rhs = pf.meet(y, pf.exists(f, a), c)
                    if not eq.eq(lhs, rhs):
                        bad = bad or {"f": f, "a": a, "b": c}
    rep.add("frobenius reciprocity", "predicates: exists_f(a & f*b) = exists_f a & b", bad is None, bad, n)
    return rep


def validate_equipment(eq: Equipment, bound: int | None = None, triple_bound: int = 2,
                       samples: int = 300, seed: int = 0) -> Report:
    """Associativity and unitality of proarrow composition (exhaustive on
    objects within ``triple_bound``, sampled up to ``bound``) and
    functoriality of companions."""
    rep = Report("equipment")
    b = eq.base
    rng = random.Random(seed)
    objs = eq.objects(bound)
    small = eq.objects(triple_bound)
    bad, n = None, 0
    for x in small:
        for y in small:
            for z in small:
                for w in small:
                    for m in eq.hom(x, y):
                        for k in eq.hom(y, z):
                            mk = eq.comp(m, k)
                            for l in eq.hom(z, w):
                                n += 1
                                if not eq.eq(eq.comp(mk, l), eq.comp(m, eq.comp(k, l))):
                                    bad = bad or {"m": m, "n": k, "p": l}
    for _ in range(samples):
        x, y, z, w = (rng.choice(objs) for _ in range(4))
        m, k, l = rng.choice(eq.hom(x, y)), rng.choice(eq.hom(y, z)), rng.choice(eq.hom(z, w))
        n += 1
        if not eq.eq(eq.comp(eq.comp(m, k), l), eq.comp(m, eq.comp(k, l))):
            bad = bad or {"m": m, "n": k, "p": l}
    rep.add("associativity", "proarrow composition associative", bad is None, bad, n)

    bad, n = None, 0
    for x in objs:
        for y in objs:
            hom = eq.hom(x, y)
            for m in hom if len(hom) <= 512 else rng.sample(hom, 512):
                n += 1
                if not (eq.eq(eq.comp(eq.ident(x), m), m) and eq.eq(eq.comp(m, eq.ident(y)), m)):
                    bad = bad or {"m": m}
    rep.add("unitality", "identity proarrows are neutral", bad is None, bad, n)

    bad, n = None, 0
    for x in small:
        for y in small:
            for f in b.hom(x, y):
                if not eq.eq(eq.companion(b.identity(x)), eq.ident(x)):
                    bad = bad or {"X": x}
                for z in small:
                    for g in b.hom(y, z):
                        n += 1
                        if not eq.eq(eq.companion(b.compose(f, g)), eq.comp(eq.companion(f), eq.companion(g))):
                            bad = bad or {"f": f, "g": g}
    rep.add("companion functoriality", "(f;g)_* = f_* ; g_*", bad is None, bad, n)
    return rep


# ------------------------------------------------------------------ matrices vs relations; round trip


def matr_relation_agreement(eq: Matr, bound: int) -> Report:
    """Hom-posets, composition, identities and companions of matr(Sub)
    against relations."""
    rep = Report("matr-vs-relations")
    objs = eq.objects(bound)
    bad, n = None, 0
    for x in objs:
        for y in objs:
            hom = eq.hom(x, y)
            rels = {to_relation(m) for m in hom}
            n += 1
            if rels != set(R.all_relations(x, y)) or len(rels) != len(hom):
                bad = bad or {"X": x, "Y": y}
    rep.add("hom-posets are powersets", "fiber over X x Y vs all relations", bad is None, bad, n)

    bad, n = None, 0
    for x in objs:
        for y in objs:
            hom = eq.hom(x, y)
            for m in hom:
                for k in hom:
                    n += 1
                    if eq.leq(m, k) != (to_relation(m) <= to_relation(k)):
                        bad = bad or {"m": m, "n": k}
    rep.add("order", "fiber order is inclusion", bad is None, bad, n)

    bad, n = None, 0
    for y in objs:
        for x in objs:
            left = [(m, to_relation(m)) for m in eq.hom(x, y)]
            for z in objs:
                right = [(k, to_relation(k)) for k in eq.hom(y, z)]
                for m, rm in left:
                    for k, rk in right:
                        n += 1
                        if to_relation(eq.comp(m, k)) != R.compose(rm, rk):
                            bad = bad or {"m": m, "n": k}
    rep.add("composition", "relational composition", bad is None, bad, n)

    bad, n = None, 0
    for x in objs:
        n += 1
        if to_relation(eq.ident(x)) != R.identity_rel(x):
            bad = bad or {"X": x}
        for y in objs:
            for f in eq.base.hom(x, y):
                n += 1
                if to_relation(eq.companion(f)) != f.graph() or to_relation(eq.conjoint(f)) != R.converse(f.graph()):
                    bad = bad or {"f": f}
    rep.add("identities and companions", "diagonal and graphs", bad is None, bad, n)
    return rep


def bend(eq: Equipment, m: Pro) -> Pro:
    """X -|-> Y as a predicate over X x Y: ((p_X)_* ; m) & (p_Y)_*, then
    into the terminal along Y."""
    b = eq.base
    x, y = m.src, m.tgt
    px, py = b.proj1(x, y), b.proj2(x, y)
    return eq.comp(eq.meet(eq.comp(eq.companion(px), m), eq.companion(py)), eq.companion(b.bang(y)))


@dataclass
class EquipmentIso:
    forward: dict    # (X, Y) -> {proarrow: proarrow}

    def __call__(self, m: Pro) -> Pro:
        return self.forward[(m.src, m.tgt)][m]


def roundtrip_iso(eq: Equipment, back: Matr, bound: int) -> tuple[EquipmentIso | None, Report]:
    """The explicit isomorphism eq -> matr(pred(eq)), identity on objects
    and tight arrows, built by bending proarrows; checked to be an order
    isomorphism on every hom and to commute with composition, identities,
    companions and conjoints."""
    rep = Report("matr-pred-roundtrip")
    objs = eq.objects(bound)
    fwd: dict = {}
    bad, n = None, 0
    for x in objs:
        for y in objs:
            hom = eq.hom(x, y)
            target = back.hom(x, y)
            table = {m: Pro(x, y, bend(eq, m)) for m in hom}
            fwd[(x, y)] = table
            n += 1
            if set(table.values()) != set(target) or len(set(table.values())) != len(hom):
                bad = bad or {"X": x, "Y": y, "reason": "not a bijection"}
                continue
            for m in hom:
                for k in hom:
                    if eq.leq(m, k) != back.leq(table[m], table[k]):
                        bad = bad or {"m": m, "n": k, "reason": "order"}
    rep.add("hom order isomorphism", "bending is a bijection preserving and reflecting order", bad is None, bad, n)
    if bad is not None:
        return None, rep
    iso = EquipmentIso(fwd)

    bad, n = None, 0
    for x in objs:
        n += 1
        if iso(eq.ident(x)) != back.ident(x):
            bad = bad or {"X": x}
        for y in objs:
            for f in eq.base.hom(x, y):
                n += 1
                if iso(eq.companion(f)) != back.companion(f) or iso(eq.conjoint(f)) != back.conjoint(f):
                    bad = bad or {"f": f}
    rep.add("identities and companions", "iso commutes with 1, f_* and f^*", bad is None, bad, n)

    bad, n = None, 0
    for y in objs:
        for x in objs:
            left = eq.hom(x, y)
            for z in objs:
                right = eq.hom(y, z)
                for m in left:
                    im = iso(m)
                    for k in right:
                        n += 1
                        if iso(eq.comp(m, k)) != back.comp(im, iso(k)):
                            bad = bad or {"m": m, "n": k}
    rep.add("composition", "iso commutes with composition", bad is None, bad, n)
    rep.info["tight"] = "identity on the shared base"
    return iso, rep


# ------------------------------------------------------------------ suites over matr(Sub)


def tabulation_correspondence(eq: Matr, bound: int, universal_bound: int = 2) -> Report:
    """For every proarrow over objects within the bound: the tabulation's
    apex and inclusion are the comprehension of the predicate over X x Y,
    its legs present the same relation as the jointly monic tabulating span,
    the cell holds, the fullness mate is an equality, and the universal
    property holds against every cell from objects within
    ``universal_bound``."""
    rep = Report("tabulation-comprehension")
    fib = eq.fib
    objs = eq.objects(bound)
    agree = cell_ok = full_ok = uni_ok = None
    n = uni_cases = 0
    for x in objs:
        for y in objs:
            over = eq.base.product(x, y)
            for m in eq.hom(x, y):
                n += 1
                tab = tabulate_proarrow(eq, m)
                i = fib.comprehend(over, m.value)
                span = R.tabulate(to_relation(m)) if isinstance(m.value, frozenset) else None
                same = tab.apex == i.src and tab.inclusion == i
                if span is not None:
                    legs = Relation(x, y, [(tab.left(z), tab.right(z)) for z in tab.apex])
                    same = same and legs == span.relation() and len(tab.apex) == len(span.apex)
                if not same:
                    agree = agree or {"m": m}
                if not cell_holds(eq, tab.cell):
                    cell_ok = cell_ok or {"m": m}
                if not tabulation_full(eq, tab):
                    full_ok = full_ok or {"m": m}
                ok, w = tabulation_universal(eq, tab, universal_bound)
                if not ok:
                    uni_ok = uni_ok or w
                else:
                    uni_cases += w
    rep.add("apex is the comprehension", "tabulation object and inclusion vs comprehension", agree is None, agree, n)
    rep.add("tabulating cell", "1 ; right_* <= left_* ; R", cell_ok is None, cell_ok, n)
    rep.add("fullness", "left^* ; right_* = R", full_ok is None, full_ok, n)
    rep.add("universal property", "unique factorization of every cell", uni_ok is None, uni_ok, uni_cases)
    return rep


def em_suite(eq: Matr, bound: int) -> Report:
    """Every comonad over objects within the bound: it is a coreflexive, its
    EM object is its tabulation (of the size of the subset it cuts out),
    tight comodules factor uniquely through the leg, and the genuine EM
    property (via the slice description of comodules) holds exactly when
    the tabulation is full."""
    rep = Report("eilenberg-moore")
    objs = eq.objects(bound)
    classify = em_tab = tight = genuine = None
    n = tight_cases = 0
    for x in objs:
        coreflexives = {m for m in eq.hom(x, x) if eq.leq(m, eq.ident(x))}
        comonads = all_comonads(eq, x)
        if {c.G for c in comonads} != coreflexives:
            classify = classify or {"X": x}
        for c in comonads:
            n += 1
            em = em_object(eq, c)
            tab = tabulate_proarrow(eq, c.G)
            support = [a for a in x if R.pair(a, a) in c.G.value] if isinstance(c.G.value, frozenset) else None
            if em.apex != tab.apex or (support is not None and len(em.apex) != len(support)):
                em_tab = em_tab or {"G": c.G}
            if em.leg != tab.right:
                em_tab = em_tab or {"G": c.G, "reason": "legs differ"}
            ok, w = em_universal_tight(eq, c, em, bound)
            if not ok:
                tight = tight or w
            else:
                tight_cases += w
            ok, w = em_genuine(eq, c, em, bound)
            if ok != tabulation_full(eq, tab) or not ok:
                genuine = genuine or (w or {"G": c.G})
    rep.add("comonads are coreflexives", "G <= 1 and G <= G;G exactly for G <= 1", classify is None, classify, len(objs))
    rep.add("EM object is the tabulation", "apex and leg of the tabulation of G", em_tab is None, em_tab, n)
    rep.add("tight universality", "comodules factor uniquely; cells between tight maps are identities",
            tight is None, tight, tight_cases)
    rep.add("genuine EM", "comodules = slice below top;G = proarrows into the EM object, and tabulation full",
            genuine is None, genuine, n)
    return rep


def mate_forms_agree(eq: Matr, count: int, bound: int, seed: int = 0) -> Report:
    """On random cells, the three matrix forms of a cell and the two
    equipment mates all give the same verdict."""
    rep = Report("mates")
    rng = random.Random(seed)
    b = eq.base
    objs = eq.objects(bound)
    bad = None
    for _ in range(count):
        x, y, xp, yp = (rng.choice(objs) for _ in range(4))
        if (len(x) and not len(xp)) or (len(y) and not len(yp)):
            continue
        f = rng.choice(list(b.hom(x, xp)))
        g = rng.choice(list(b.hom(y, yp)))
        m, n = rng.choice(eq.hom(x, y)), rng.choice(eq.hom(xp, yp))
        if rng.random() < 0.5:
            # bias towards valid cells: enlarge n to contain the pushforward of m
            n = Pro(xp, yp, eq.fib.exists(b.times(f, g), m.value) | n.value)
        c = Cell(f, g, m, n)
        verdicts = list(mate_forms_matr(eq, c))
        for side in ("left", "right"):
            lhs, rhs = mate_of_cell(eq, c, side)
            verdicts.append(eq.leq(lhs, rhs))
        verdicts.append(cell_holds(eq, c))
        if len(set(verdicts)) != 1:
            bad = bad or {"cell": c, "verdicts": verdicts}
    rep.add("mate forms agree", "R <= (f x g)*S, (1 x g)_!R <= (f x 1)*S, (f x g)_!R <= S and both mates",
            bad is None, bad, count)
    return rep
