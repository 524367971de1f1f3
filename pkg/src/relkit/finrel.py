"""Finite sets and binary relations: the reference allegory.

Composition is written diagrammatically throughout: ``compose(r, s)`` is
"first r, then s".  Relations are backed by read-only boolean matrices indexed
by the element order of their source and target sets.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _bits
from .report import Report


class CompositionError(TypeError):
    """Raised when two relations or functions do not share a boundary."""


# ---------------------------------------------------------------- finite sets


@dataclass(frozen=True)
class FinSetObj:
    name: str
    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        elems = tuple(str(e) for e in self.elements)
        object.__setattr__(self, "elements", elems)
        if len(set(elems)) != len(elems):
            raise ValueError(f"duplicate elements in {self.name}")

    @cached_property
    def _index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def index(self, element: str) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise KeyError(f"{element!r} is not an element of {self.name}") from None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, element: object) -> bool:
        return element in self._index

    def __repr__(self) -> str:
        return f"{self.name}{{{','.join(self.elements)}}}"

    def subset(self, members: Iterable[str], name: str | None = None) -> "FinSetObj":
        keep = set(members)
        return FinSetObj(name or f"{self.name}|", tuple(e for e in self.elements if e in keep))

    def to_json(self) -> dict:
        return {"name": self.name, "elements": list(self.elements)}

    @classmethod
    def from_json(cls, data) -> "FinSetObj":
        if isinstance(data, list):
            return cls("".join(["{", ",".join(map(str, data)), "}"]), tuple(data))
        return cls(data["name"], tuple(data["elements"]))


@lru_cache(maxsize=None)
def range_set(n: int) -> FinSetObj:
    """The canonical n-element set {0, ..., n-1}."""
    return FinSetObj(f"[{n}]", tuple(str(i) for i in range(n)))


ONE = range_set(1)


def pair(x: str, y: str) -> str:
    return f"({x},{y})"


@lru_cache(maxsize=None)
def product(x: FinSetObj, y: FinSetObj) -> FinSetObj:
    """Cartesian product with pair-encoded elements, ordered x-major."""
    return FinSetObj(f"({x.name}*{y.name})", tuple(pair(a, b) for a in x for b in y))


def universe(max_size: int) -> list[FinSetObj]:
    return [range_set(n) for n in range(max_size + 1)]


# ------------------------------------------------------------------ functions


class Fn:
    """A total function between finite sets, stored as an index table."""

    __slots__ = ("src", "tgt", "table")

    def __init__(self, src: FinSetObj, tgt: FinSetObj, table: Sequence[int]):
        table = tuple(int(i) for i in table)
        if len(table) != len(src) or any(not 0 <= i < len(tgt) for i in table):
            raise ValueError(f"not a function {src.name} -> {tgt.name}")
        self.src, self.tgt, self.table = src, tgt, table

    @classmethod
    def from_mapping(cls, src: FinSetObj, tgt: FinSetObj, mapping: Mapping[str, str]) -> "Fn":
        return cls(src, tgt, [tgt.index(mapping[x]) for x in src])

    @classmethod
    def identity(cls, x: FinSetObj) -> "Fn":
        return cls(x, x, range(len(x)))

    def __call__(self, element: str) -> str:
        return self.tgt.elements[self.table[self.src.index(element)]]

    def then(self, g: "Fn") -> "Fn":
        if self.tgt != g.src:
            raise CompositionError(f"cannot compose {self.src.name}->{self.tgt.name} with {g.src.name}->{g.tgt.name}")
        return Fn(self.src, g.tgt, [g.table[i] for i in self.table])

    def as_dict(self) -> dict[str, str]:
        return {x: self.tgt.elements[i] for x, i in zip(self.src, self.table)}

    def graph(self) -> "Relation":
        m = np.zeros((len(self.src), len(self.tgt)), dtype=bool)
        m[np.arange(len(self.src)), list(self.table)] = True
        return Relation.from_matrix(self.src, self.tgt, m)

    def image(self) -> frozenset[str]:
        return frozenset(self.tgt.elements[i] for i in self.table)

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == len(self.tgt)

    def _key(self):
        return (self.src, self.tgt, self.table)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Fn) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        body = ",".join(f"{x}:{y}" for x, y in self.as_dict().items())
        return f"Fn[{self.src.name}->{self.tgt.name}]({body})"

    def to_json(self) -> dict:
        return {"src": self.src.name, "tgt": self.tgt.name, "map": self.as_dict()}


def all_functions(x: FinSetObj, y: FinSetObj) -> Iterator[Fn]:
    for table in itertools.product(range(len(y)), repeat=len(x)):
        yield Fn(x, y, table)


def pairing(f: Fn, g: Fn) -> Fn:
    """The function <f, g> into the product of the codomains."""
    if f.src != g.src:
        raise CompositionError("pairing needs a common domain")
    n = len(g.tgt)
    return Fn(f.src, product(f.tgt, g.tgt), [a * n + b for a, b in zip(f.table, g.table)])


def fn_product(f: Fn, g: Fn) -> Fn:
    """f x g between products."""
    n = len(g.tgt)
    m = len(g.src)
    table = [f.table[i // m] * n + g.table[i % m] for i in range(len(f.src) * m)]
    return Fn(product(f.src, g.src), product(f.tgt, g.tgt), table)


def proj1(x: FinSetObj, y: FinSetObj) -> Fn:
    return Fn(product(x, y), x, [i // len(y) for i in range(len(x) * len(y))])


def proj2(x: FinSetObj, y: FinSetObj) -> Fn:
    return Fn(product(x, y), y, [i % len(y) for i in range(len(x) * len(y))])


def diag_fn(x: FinSetObj) -> Fn:
    return Fn(x, product(x, x), [i * len(x) + i for i in range(len(x))])


def bang(x: FinSetObj) -> Fn:
    return Fn(x, ONE, [0] * len(x))


def assoc_fn(x: FinSetObj, y: FinSetObj, z: FinSetObj) -> Fn:
    """x*(y*z) -> (x*y)*z."""
    ny, nz = len(y), len(z)
    table = []
    for i in range(len(x)):
        for j in range(ny):
            for k in range(nz):
                table.append((i * ny + j) * nz + k)
    return Fn(product(x, product(y, z)), product(product(x, y), z), table)


def swap_fn(x: FinSetObj, y: FinSetObj) -> Fn:
    nx, ny = len(x), len(y)
    return Fn(product(x, y), product(y, x), [(i % ny) * nx + i // ny for i in range(nx * ny)])


# ------------------------------------------------------------------ relations


class Relation:
    """A binary relation between two finite sets."""

    __slots__ = ("src", "tgt", "_m", "_hash")

    def __init__(self, src: FinSetObj, tgt: FinSetObj, pairs: Iterable[tuple[str, str]] = ()):
        m = np.zeros((len(src), len(tgt)), dtype=bool)
        for x, y in pairs:
            m[src.index(x), tgt.index(y)] = True
        self._set(src, tgt, m)

    def _set(self, src: FinSetObj, tgt: FinSetObj, m: np.ndarray) -> None:
        m.setflags(write=False)
        self.src, self.tgt, self._m = src, tgt, m
        self._hash = None

    @classmethod
    def from_matrix(cls, src: FinSetObj, tgt: FinSetObj, m: np.ndarray) -> "Relation":
        m = np.array(m, dtype=bool, copy=True)
        if m.shape != (len(src), len(tgt)):
            raise ValueError(f"matrix shape {m.shape} does not fit {src.name} x {tgt.name}")
        r = cls.__new__(cls)
        r._set(src, tgt, m)
        return r

    @classmethod
    def from_code(cls, src: FinSetObj, tgt: FinSetObj, code: int) -> "Relation":
        return cls.from_matrix(src, tgt, _bits.decode_all(len(src), len(tgt))[code])

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def code(self) -> int:
        return _bits.encode(self._m)

    @property
    def pairs(self) -> frozenset[tuple[str, str]]:
        xs, ys = np.nonzero(self._m)
        return frozenset((self.src.elements[i], self.tgt.elements[j]) for i, j in zip(xs, ys))

    def sorted_pairs(self) -> list[tuple[str, str]]:
        xs, ys = np.nonzero(self._m)
        return [(self.src.elements[i], self.tgt.elements[j]) for i, j in zip(xs, ys)]

    def __contains__(self, xy: tuple[str, str]) -> bool:
        x, y = xy
        return bool(self._m[self.src.index(x), self.tgt.index(y)])

    def __len__(self) -> int:
        return int(self._m.sum())

    def parallel(self, other: "Relation") -> bool:
        return self.src == other.src and self.tgt == other.tgt

    def __le__(self, other: "Relation") -> bool:
        _need_parallel(self, other)
        return not bool((self._m & ~other._m).any())

    def __ge__(self, other: "Relation") -> bool:
        return other <= self

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Relation) and self.parallel(other) and bool(np.array_equal(self._m, other._m))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.src, self.tgt, self._m.tobytes()))
        return self._hash

    def __and__(self, other: "Relation") -> "Relation":
        _need_parallel(self, other)
        return Relation.from_matrix(self.src, self.tgt, self._m & other._m)

    def __or__(self, other: "Relation") -> "Relation":
        _need_parallel(self, other)
        return Relation.from_matrix(self.src, self.tgt, self._m | other._m)

    def is_empty(self) -> bool:
        return not bool(self._m.any())

    def __repr__(self) -> str:
        body = ",".join(f"({x},{y})" for x, y in self.sorted_pairs())
        return f"Rel[{self.src.name}->{self.tgt.name}]{{{body}}}"

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "tgt": self.tgt.to_json(), "pairs": [list(p) for p in self.sorted_pairs()]}

    @classmethod
    def from_json(cls, data: dict) -> "Relation":
        return cls(FinSetObj.from_json(data["src"]), FinSetObj.from_json(data["tgt"]),
                   [tuple(map(str, p)) for p in data["pairs"]])


def _need_parallel(r: Relation, s: Relation) -> None:
    if not r.parallel(s):
        raise CompositionError(
            f"relations are not parallel: {r.src.name}->{r.tgt.name} vs {s.src.name}->{s.tgt.name}")


def compose(r: Relation, s: Relation) -> Relation:
    """First r, then s: the pairs (x, z) with some y such that x r y and y s z."""
    if r.tgt != s.src:
        raise CompositionError(f"cannot compose: {r.tgt.name} (target of r) is not {s.src.name} (source of s)")
    return Relation.from_matrix(r.src, s.tgt, r.matrix @ s.matrix)


def compose_all(first: Relation, *rest: Relation) -> Relation:
    out = first
    for r in rest:
        out = compose(out, r)
    return out


def identity_rel(x: FinSetObj) -> Relation:
    return Relation.from_matrix(x, x, np.eye(len(x), dtype=bool))


def converse(r: Relation) -> Relation:
    return Relation.from_matrix(r.tgt, r.src, r.matrix.T)


def top_rel(x: FinSetObj, y: FinSetObj) -> Relation:
    return Relation.from_matrix(x, y, np.ones((len(x), len(y)), dtype=bool))


def bottom_rel(x: FinSetObj, y: FinSetObj) -> Relation:
    return Relation.from_matrix(x, y, np.zeros((len(x), len(y)), dtype=bool))


def tensor(r: Relation, s: Relation) -> Relation:
    """(x, x') relates to (y, y') iff x r y and x' s y'."""
    return Relation.from_matrix(product(r.src, s.src), product(r.tgt, s.tgt), np.kron(r.matrix, s.matrix))


def diagonal(x: FinSetObj) -> Relation:
    return diag_fn(x).graph()


def counit(x: FinSetObj) -> Relation:
    """The graph of the unique function to the one-element set."""
    return bang(x).graph()


def tensor_via_projections(r: Relation, s: Relation) -> Relation:
    """Tensor rebuilt from projections: p1;r;p1' meet p2;s;p2' (primes are converses)."""
    p1 = proj1(r.src, s.src).graph()
    p2 = proj2(r.src, s.src).graph()
    q1 = proj1(r.tgt, s.tgt).graph()
    q2 = proj2(r.tgt, s.tgt).graph()
    return compose_all(p1, r, converse(q1)) & compose_all(p2, s, converse(q2))


def meet_via_tensor(r: Relation, s: Relation) -> Relation:
    """Meet recovered from cartesian structure: diagonal, tensor, codiagonal."""
    return compose_all(diagonal(r.src), tensor(r, s), converse(diagonal(r.tgt)))


def top_via_counits(x: FinSetObj, y: FinSetObj) -> Relation:
    return compose(counit(x), converse(counit(y)))


def converse_via_compact(r: Relation) -> Relation:
    """Converse obtained from the self-duality of objects (unit and counit built
    from diagonals and counits), with no direct transposition."""
    x, y = r.src, r.tgt
    eta_x = compose(converse(counit(x)), diagonal(x))        # 1 -> X*X
    zeta_y = compose(converse(diagonal(y)), counit(y))       # Y*Y -> 1
    # Y ~ Y*1 -> Y*(X*X) ~ (Y*X)*X -> (Y*Y)*X -> 1*X ~ X
    unit_r = Fn(product(y, ONE), y, range(len(y))).graph()
    step1 = compose(converse(unit_r), tensor(identity_rel(y), eta_x))
    step2 = compose(step1, assoc_fn(y, x, x).graph())
    step3 = compose(step2, tensor(tensor(identity_rel(y), r), identity_rel(x)))
    step4 = compose(step3, tensor(zeta_y, identity_rel(x)))
    unit_l = Fn(product(ONE, x), x, range(len(x))).graph()
    return compose(step4, unit_l)


def local_products(r: Relation, s: Relation) -> tuple[Relation, Relation]:
    """Meet and top of a parallel pair; the meet is cross-checked against the
    diagonal/tensor formula before returning."""
    _need_parallel(r, s)
    meet = r & s
    if meet_via_tensor(r, s) != meet:  # pragma: no cover - would signal a bug
        raise AssertionError("meet via tensor disagrees with intersection")
    return meet, top_rel(r.src, r.tgt)


# ------------------------------------------------------------------ maps


@dataclass(frozen=True)
class MapCheck:
    is_map: bool
    witness: str | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.is_map


def map_check(r: Relation) -> MapCheck:
    """Map iff entire (1 <= r;r') and single-valued (r';r <= 1)."""
    counts = r.matrix.sum(axis=1)
    for i, c in enumerate(counts):
        if c > 1:
            return MapCheck(False, r.src.elements[i], "not single-valued")
        if c == 0:
            return MapCheck(False, r.src.elements[i], "not total")
    return MapCheck(True)


def as_function(r: Relation) -> Fn:
    if not map_check(r):
        raise ValueError(f"{r!r} is not a map")
    return Fn(r.src, r.tgt, r.matrix.argmax(axis=1))


def is_entire(r: Relation) -> bool:
    return identity_rel(r.src) <= compose(r, converse(r))


def is_single_valued(r: Relation) -> bool:
    return compose(converse(r), r) <= identity_rel(r.tgt)


def is_injective(r: Relation) -> bool:
    return compose(r, converse(r)) <= identity_rel(r.src)


# ------------------------------------------------------------------ tabulation


@dataclass(frozen=True)
class SpanRep:
    apex: FinSetObj
    left: Fn
    right: Fn

    def relation(self) -> Relation:
        return compose(converse(self.left.graph()), self.right.graph())

    def jointly_monic(self) -> bool:
        f, g = self.left.graph(), self.right.graph()
        return (compose(f, converse(f)) & compose(g, converse(g))) == identity_rel(self.apex)


def tabulate(r: Relation) -> SpanRep:
    """Tabulating span: apex is the set of related pairs, legs the projections."""
    pairs = r.sorted_pairs()
    apex = FinSetObj(f"|{r.src.name}~{r.tgt.name}|", tuple(pair(x, y) for x, y in pairs))
    left = Fn(apex, r.src, [r.src.index(x) for x, _ in pairs])
    right = Fn(apex, r.tgt, [r.tgt.index(y) for _, y in pairs])
    span = SpanRep(apex, left, right)
    if span.relation() != r or not span.jointly_monic():  # pragma: no cover
        raise AssertionError("tabulation equations failed")
    return span


# ------------------------------------------------------------------ enumeration


def all_relations(x: FinSetObj, y: FinSetObj) -> Iterator[Relation]:
    n = len(x) * len(y)
    if n <= _bits.MAX_BITS:
        mats = _bits.decode_all(len(x), len(y))
        for m in mats:
            yield Relation.from_matrix(x, y, m)
        return
    for bits in itertools.product((False, True), repeat=n):
        yield Relation.from_matrix(x, y, np.array(bits, dtype=bool).reshape(len(x), len(y)))


def random_relation(x: FinSetObj, y: FinSetObj, rng: random.Random, density: float | None = None) -> Relation:
    p = rng.random() if density is None else density
    m = np.array([[rng.random() < p for _ in y] for _ in x], dtype=bool).reshape(len(x), len(y))
    return Relation.from_matrix(x, y, m)


def random_function(x: FinSetObj, y: FinSetObj, rng: random.Random) -> Fn:
    return Fn(x, y, [rng.randrange(len(y)) for _ in x])


# ------------------------------------------------------------------ law sweeps


def _law_witness(law: str, codes: tuple, sizes: tuple) -> dict:
    return {"law": law, "sizes": sizes, "codes": codes}


def _sweep_triple(a: int, b: int, c: int) -> dict[str, tuple[int, object]]:
    """Modular laws, their equality cases, distributivity and involution on all
    r: a->b, s: b->c, t: a->c (and the matching shapes for distributivity)."""
    C_abc = _bits.compose_table(a, b, c)
    C_bac = _bits.compose_table(b, a, c)
    C_acb = _bits.compose_table(a, c, b)
    conv_ab = _bits.converse_table(a, b)
    conv_bc = _bits.converse_table(b, c)
    conv_ac = _bits.converse_table(a, c)
    C_cba = _bits.compose_table(c, b, a)
    NR, NS, NT = _bits.n_codes(a, b), _bits.n_codes(b, c), _bits.n_codes(a, c)
    R = np.arange(NR)[:, None]
    S = np.arange(NS)[None, :]
    rs = C_abc  # (NR, NS)
    rr = _bits.compose_table(a, b, a)[np.arange(NR), conv_ab]
    r_injective = (rr & ~_bits.identity_code(a)) == 0  # r;r' <= 1
    ss = _bits.compose_table(c, b, c)[conv_bc, np.arange(NS)]
    s_single = (ss & ~_bits.identity_code(c)) == 0  # s';s <= 1
    eq_mask_mod = np.broadcast_to(r_injective[:, None], (NR, NS))
    eq_mask_dual = np.broadcast_to(s_single[None, :], (NR, NS))
    results: dict[str, tuple[int, object]] = {}
    fails = {k: None for k in ("modular", "modular-dual", "modular-equality", "modular-dual-equality")}
    for t in range(NT):
        lhs = rs & t
        u = C_bac[conv_ab, t]                      # r';t for each r, shape (NR,)
        rhs = C_abc[R, S & u[:, None]]
        v = C_acb[t, conv_bc]                      # t;s' for each s, shape (NS,)
        rhs2 = C_abc[R & v[None, :], S]
        for name, bad in (
            ("modular", (lhs & ~rhs) != 0),
            ("modular-dual", (lhs & ~rhs2) != 0),
            ("modular-equality", eq_mask_mod & (lhs != rhs)),
            ("modular-dual-equality", eq_mask_dual & (lhs != rhs2)),
        ):
            if fails[name] is None and bad.any():
                i, j = np.argwhere(bad)[0]
                fails[name] = _law_witness(name, (int(i), int(j), t), (a, b, c))
    n = NR * NS * NT
    for name, w in fails.items():
        results[name] = (n, w)
    # involution: (r;s)' = s';r'
    lhs = conv_ac[rs]
    rhs = C_cba[conv_bc[None, :].repeat(NR, 0), conv_ab[:, None].repeat(NS, 1)]
    bad = lhs != rhs
    w = None
    if bad.any():
        i, j = np.argwhere(bad)[0]
        w = _law_witness("involution", (int(i), int(j)), (a, b, c))
    results["involution"] = (NR * NS, w)
    return results


def _sweep_distributive(a: int, b: int, c: int) -> dict[str, tuple[int, object]]:
    """t;(r meet s) <= t;r meet t;s for t: a->b, r,s: b->c, equality when t is
    single-valued; (r meet s);t <= r;t meet s;t for r,s: a->b, t: b->c, equality
    when t is injective."""
    out: dict[str, tuple[int, object]] = {}
    C = _bits.compose_table(a, b, c)
    NT, NR = _bits.n_codes(a, b), _bits.n_codes(b, c)
    R = np.arange(NR)[:, None]
    S = np.arange(NR)[None, :]
    conv_ab = _bits.converse_table(a, b)
    tt = _bits.compose_table(b, a, b)[conv_ab, np.arange(NT)]
    t_single = (tt & ~_bits.identity_code(b)) == 0
    w1 = w2 = None
    for t in range(NT):
        lhs = C[t, R & S]
        rhs = C[t, R] & C[t, S]
        if w1 is None and ((lhs & ~rhs) != 0).any():
            w1 = _law_witness("distributive-left", (t,) + tuple(map(int, np.argwhere((lhs & ~rhs) != 0)[0])), (a, b, c))
        if w2 is None and t_single[t] and (lhs != rhs).any():
            w2 = _law_witness("distributive-left-equality", (t,) + tuple(map(int, np.argwhere(lhs != rhs)[0])), (a, b, c))
    out["distributive-left"] = (NT * NR * NR, w1)
    out["distributive-left-equality"] = (NT * NR * NR, w2)
    # right-hand version: r,s: a->b, t: b->c
    NRs, NTt = _bits.n_codes(a, b), _bits.n_codes(b, c)
    R = np.arange(NRs)[:, None]
    S = np.arange(NRs)[None, :]
    conv_bc = _bits.converse_table(b, c)
    tt = _bits.compose_table(b, c, b)[np.arange(NTt), conv_bc]
    t_inj = (tt & ~_bits.identity_code(b)) == 0
    w1 = w2 = None
    for t in range(NTt):
        lhs = C[R & S, t]
        rhs = C[R, t] & C[S, t]
        if w1 is None and ((lhs & ~rhs) != 0).any():
            w1 = _law_witness("distributive-right", tuple(map(int, np.argwhere((lhs & ~rhs) != 0)[0])) + (t,), (a, b, c))
        if w2 is None and t_inj[t] and (lhs != rhs).any():
            w2 = _law_witness("distributive-right-equality", tuple(map(int, np.argwhere(lhs != rhs)[0])) + (t,), (a, b, c))
    out["distributive-right"] = (NTt * NRs * NRs, w1)
    out["distributive-right-equality"] = (NTt * NRs * NRs, w2)
    return out


ANCHORS = {
    "modular": "modular law",
    "modular-dual": "dual modular law",
    "modular-equality": "modular law is an identity when r;r' <= 1",
    "modular-dual-equality": "dual modular law is an identity when s';s <= 1",
    "involution": "converse is a contravariant involution",
    "distributive-left": "composition distributes over meets (left)",
    "distributive-left-equality": "left distributivity is exact for single-valued t",
    "distributive-right": "composition distributes over meets (right)",
    "distributive-right-equality": "right distributivity is exact for injective t",
}


def _tabulable(*sizes: int) -> bool:
    return all(x * y <= _bits.MAX_BITS for x, y in itertools.combinations(sizes, 2)) and \
        all(x * x <= _bits.MAX_BITS for x in sizes)


def exhaustive_allegory_laws(sizes: Sequence[int]) -> Report:
    """Every law family on every combination of the given set sizes."""
    rep = Report("allegory-laws")
    totals: dict[str, list] = {}
    for a, b, c in itertools.product(sorted(set(sizes)), repeat=3):
        if not _tabulable(a, b, c):
            continue
        for name, (n, w) in itertools.chain(_sweep_triple(a, b, c).items(), _sweep_distributive(a, b, c).items()):
            acc = totals.setdefault(name, [0, None])
            acc[0] += n
            if acc[1] is None and w is not None:
                acc[1] = w
    for name in ANCHORS:
        n, w = totals.get(name, (0, None))
        rep.add(name, ANCHORS[name], w is None, w, n)
    return rep


def _pointwise_modular(r: Relation, s: Relation, t: Relation) -> dict[str, bool]:
    rs = compose(r, s)
    lhs = rs & t
    rhs = compose(r, s & compose(converse(r), t))
    rhs2 = compose(r & compose(t, converse(s)), s)
    out = {
        "modular": lhs <= rhs,
        "modular-dual": lhs <= rhs2,
        "involution": converse(rs) == compose(converse(s), converse(r)),
    }
    if is_injective(r):
        out["modular-equality"] = lhs == rhs
    if is_single_valued(s):
        out["modular-dual-equality"] = lhs == rhs2
    return out


def random_allegory_laws(count: int, max_size: int, seed: int) -> Report:
    """Laws on ``count`` random relation triples over sets of size <= max_size,
    evaluated pointwise with matrix arithmetic (independent of the bit tables)."""
    rng = random.Random(seed)
    rep = Report("allegory-random")
    counts: dict[str, int] = {}
    witness: dict[str, object] = {}
    sets = universe(max_size)
    for _ in range(count):
        a, b, c = (rng.choice(sets) for _ in range(3))
        r, s, t = random_relation(a, b, rng), random_relation(b, c, rng), random_relation(a, c, rng)
        results = _pointwise_modular(r, s, t)
        # distributivity, with t playing the outer role on each side
        s2 = random_relation(a, b, rng)
        tt = random_relation(b, c, rng)
        lhs = compose(r & s2, tt)
        rhs = compose(r, tt) & compose(s2, tt)
        results["distributive-right"] = lhs <= rhs
        if is_injective(tt):
            results["distributive-right-equality"] = lhs == rhs
        u = random_relation(c, a, rng)
        lhs = compose(u, r & s2)
        rhs = compose(u, r) & compose(u, s2)
        results["distributive-left"] = lhs <= rhs
        if is_single_valued(u):
            results["distributive-left-equality"] = lhs == rhs
        for name, ok in results.items():
            counts[name] = counts.get(name, 0) + 1
            if not ok and name not in witness:
                witness[name] = {"r": r, "s": s, "t": t}
    for name in ANCHORS:
        rep.add(name, ANCHORS[name], name not in witness, witness.get(name), counts.get(name, 0))
    return rep


# ------------------------------------------------- bicategory-of-relations laws


def frobenius_holds(x: FinSetObj) -> bool:
    """d';d equals (1 x d);assoc;(d' x 1) on X*X."""
    d = diagonal(x)
    lhs = compose(converse(d), d)
    rhs = compose_all(tensor(identity_rel(x), d), assoc_fn(x, x, x).graph(), tensor(converse(d), identity_rel(x)))
    return lhs == rhs


def separable(x: FinSetObj) -> bool:
    d = diagonal(x)
    return compose(d, converse(d)) == identity_rel(x)


def unit_axioms(x: FinSetObj) -> dict[str, bool]:
    e = counit(x)
    return {
        "unit-top": identity_rel(ONE) == top_rel(ONE, ONE),
        "counit-is-map": bool(map_check(e)),
        "top-factors-through-unit": all(top_rel(x, y) == compose(e, converse(counit(y))) for y in universe(len(x))),
        "top-tabulates": tabulate(top_rel(x, x)).relation() == top_rel(x, x)
        and tabulate(top_rel(x, x)).apex.elements == product(x, x).elements,
    }


def diagonal_modular_laws(r: Relation) -> dict[str, bool]:
    x, y = r.src, r.tgt
    rc = converse(r)
    lhs_d = compose(diagonal(x), tensor(r, identity_rel(x)))
    rhs_d = compose_all(r, diagonal(y), tensor(identity_rel(y), rc))
    lhs_c = compose(tensor(r, identity_rel(y)), converse(diagonal(y)))
    rhs_c = compose_all(tensor(identity_rel(x), rc), converse(diagonal(x)), r)
    out = {"diagonal-modular": lhs_d <= rhs_d, "codiagonal-modular": lhs_c <= rhs_c}
    if is_injective(r):
        out["diagonal-modular-equality"] = lhs_d == rhs_d
    if is_single_valued(r):
        out["codiagonal-modular-equality"] = lhs_c == rhs_c
    return out


def _functoriality_on(a: int, b: int, c: int, a2: int, b2: int, c2: int) -> tuple[int, object]:
    """(r x r');(s x s') = (r;s) x (r';s') for every r: a->b, s: b->c,
    r': a2->b2, s': b2->c2, vectorised over the whole quadruple space."""
    u8 = np.uint8
    R, S = _bits.decode_all(a, b).astype(u8), _bits.decode_all(b, c).astype(u8)
    R2, S2 = _bits.decode_all(a2, b2).astype(u8), _bits.decode_all(b2, c2).astype(u8)
    KR = np.einsum("rij,pkl->rpikjl", R, R2).reshape(len(R) * len(R2), a * a2, b * b2)
    KS = np.einsum("sij,qkl->sqikjl", S, S2).reshape(len(S) * len(S2), b * b2, c * c2)
    lhs = np.einsum("xij,yjk->xyik", KR, KS) > 0
    RS = (np.einsum("rij,sjk->rsik", R, S) > 0).astype(u8)
    RS2 = (np.einsum("pij,qjk->pqik", R2, S2) > 0).astype(u8)
    rhs = np.einsum("rsij,pqkl->rpsqikjl", RS, RS2).reshape(lhs.shape) > 0
    n = lhs.shape[0] * lhs.shape[1]
    if np.array_equal(lhs, rhs):
        return n, None
    x, y = np.argwhere((lhs != rhs).any(axis=(2, 3)))[0]
    return n, {"sizes": (a, b, c, a2, b2, c2), "pair-codes": (int(x), int(y))}


def tensor_functoriality_bruteforce(max_size: int) -> tuple[int, object]:
    """Every quadruple of relations on sets of size <= max_size."""
    n = 0
    for sizes in itertools.product(range(max_size + 1), repeat=6):
        k, w = _functoriality_on(*sizes)
        n += k
        if w is not None:
            return n, w
    return n, None


def tensor_functoriality_entrywise(max_size: int) -> tuple[int, object]:
    """Exhaustive check of functoriality for sets of size <= max_size, reduced
    to entries.  The entry of (r x r');(s x s') at ((x,x'),(z,z')) depends only
    on the row r[x,:], the column s[:,z], the row r'[x',:] and the column
    s'[:,z'], and every quadruple of such vectors occurs.  Rows and columns are
    relations out of and into the one-element set, so running the full sweep
    with one-element outer sets covers every quadruple of relations."""
    n = 0
    for b, b2 in itertools.product(range(max_size + 1), repeat=2):
        k, w = _functoriality_on(1, b, 1, 1, b2, 1)
        n += k
        if w is not None:
            return n, w
    return n, None


def bicategory_laws(max_size: int) -> Report:
    rep = Report("bicategory-of-relations")
    sets = universe(max_size)
    rep.add("frobenius", "Frobenius equation for the diagonal", all(frobenius_holds(x) for x in sets),
            next((x for x in sets if not frobenius_holds(x)), None), len(sets))
    rep.add("separability", "diagonal is separable (d;d' = 1)", all(separable(x) for x in sets),
            next((x for x in sets if not separable(x)), None), len(sets))
    unit_fail = None
    for x in sets:
        for name, ok in unit_axioms(x).items():
            if not ok and unit_fail is None:
                unit_fail = {"object": x, "axiom": name}
    rep.add("unit-axioms", "one-element set is a unit; top = e;e'", unit_fail is None, unit_fail, len(sets))
    one_fail = next(((x, y) for x in sets for y in sets
                     if tensor(identity_rel(x), identity_rel(y)) != identity_rel(product(x, y))), None)
    rep.add("tensor-identities", "1 x 1 = 1", one_fail is None, one_fail, len(sets) ** 2)
    n, w = tensor_functoriality_bruteforce(min(max_size, 2))
    rep.add("tensor-functoriality-bruteforce", "tensor is functorial (all quadruples, sets <= 2)", w is None, w, n)
    n, w = tensor_functoriality_entrywise(max_size)
    rep.add("tensor-functoriality", "tensor is functorial (entrywise exhaustive)", w is None, w, n)
    proj_fail = None
    cases = 0
    for a, b in itertools.product(universe(min(max_size, 2)), repeat=2):
        for r in all_relations(a, b):
            for s in all_relations(b, a):
                cases += 1
                if tensor(r, s) != tensor_via_projections(r, s) and proj_fail is None:
                    proj_fail = (r, s)
    rep.add("tensor-via-projections", "tensor = p1;r;p1' meet p2;s;p2'", proj_fail is None, proj_fail, cases)
    eq_fail: dict[str, object] = {}
    eq_cases: dict[str, int] = {}
    for a, b in itertools.product(sets, repeat=2):
        for r in all_relations(a, b):
            for name, ok in diagonal_modular_laws(r).items():
                eq_cases[name] = eq_cases.get(name, 0) + 1
                if not ok:
                    eq_fail.setdefault(name, r)
    for name, anchor in (("diagonal-modular", "diagonal modular law d;(r x 1) <= r;d;(1 x r')"),
                         ("codiagonal-modular", "codiagonal modular law (r x 1);d' <= (1 x r');d';r"),
                         ("diagonal-modular-equality", "first form exact when r;r' <= 1"),
                         ("codiagonal-modular-equality", "second form exact when r';r <= 1")):
        rep.add(name, anchor, name not in eq_fail, eq_fail.get(name), eq_cases.get(name, 0))
    return rep


def derived_structure_consistency(max_size: int) -> Report:
    """Meet, top and converse rebuilt from the cartesian structure agree with
    the direct definitions."""
    rep = Report("derived-structure")
    sets = universe(max_size)
    meet_fail = top_fail = conv_fail = None
    n_meet = n_conv = 0
    for a, b in itertools.product(sets, repeat=2):
        rels = list(all_relations(a, b))
        d_a, d_b = diagonal(a).matrix.astype(np.uint8), diagonal(b).matrix.astype(np.uint8)
        stack = np.stack([r.matrix for r in rels]).astype(np.uint8) if rels else np.zeros((0, len(a), len(b)), np.uint8)
        # all pairs at once: kron over the pair, then sandwich with diagonals
        kr = np.einsum("rij,skl->rsikjl", stack, stack).reshape(len(rels), len(rels), len(a) ** 2, len(b) ** 2)
        via = np.einsum("ip,rspq,jq->rsij", d_a, kr, d_b) > 0
        direct = stack[:, None, :, :] & stack[None, :, :, :]
        n_meet += len(rels) ** 2
        if not np.array_equal(via, direct.astype(bool)) and meet_fail is None:
            i, j = np.argwhere((via != direct.astype(bool)).any(axis=(2, 3)))[0]
            meet_fail = (rels[i], rels[j])
        if top_via_counits(a, b) != top_rel(a, b) and top_fail is None:
            top_fail = (a, b)
        for r in rels:
            n_conv += 1
            if converse_via_compact(r) != converse(r) and conv_fail is None:
                conv_fail = r
        # spot-check the Relation-level function on a few pairs for agreement
        for r in rels[:3]:
            for s in rels[-3:]:
                local_products(r, s)
    rep.add("meet-via-tensor", "meet = d;(r x s);d'", meet_fail is None, meet_fail, n_meet)
    rep.add("top-via-counits", "top = e;e'", top_fail is None, top_fail, len(sets) ** 2)
    rep.add("converse-via-compact-closure", "converse from the self-duality of objects", conv_fail is None, conv_fail, n_conv)
    return rep


def maps_are_discrete(max_size: int) -> tuple[int, object]:
    n = 0
    for a, b in itertools.product(universe(max_size), repeat=2):
        maps = [f.graph() for f in all_functions(a, b)]
        for f in maps:
            for g in maps:
                n += 1
                if f <= g and f != g:
                    return n, (f, g)
    return n, None


def associativity_unitality(n: int) -> Report:
    """Associativity and unit laws on all endo-relations of an n-element set."""
    rep = Report("composition")
    C = _bits.compose_table(n, n, n)
    N = _bits.n_codes(n, n)
    R = np.arange(N)[:, None]
    S = np.arange(N)[None, :]
    w = None
    for t in range(N):
        bad = C[C[R, S], t] != C[R, C[S, t]]
        if bad.any():
            i, j = np.argwhere(bad)[0]
            w = (int(i), int(j), t)
            break
    rep.add("associativity", "composition is associative", w is None, w, N ** 3)
    e = _bits.identity_code(n)
    codes = np.arange(N)
    ok = np.array_equal(C[codes, e], codes) and np.array_equal(C[e, codes], codes)
    rep.add("unitality", "identity is neutral", ok, None if ok else n, 2 * N)
    return rep


def validate_allegory(sets: Sequence[FinSetObj] | int, size_bound: int | None = None,
                      random_count: int = 0, seed: int = 0) -> Report:
    """Exhaustive allegory and bicategory-of-relations checks over all sets of
    size up to the bound (sizes are what matter; element names do not)."""
    if isinstance(sets, int):
        bound = sets
    else:
        bound = max((len(x) for x in sets), default=0)
    if size_bound is not None:
        bound = min(bound, size_bound)
    sizes = list(range(bound + 1))
    rep = Report("allegory", info={"max_size": bound})
    rep.extend(exhaustive_allegory_laws(sizes))
    if bound > 3:
        rep.info["note"] = "bit-table sweeps cover the size combinations with at most 9 pairs"
    rep.extend(associativity_unitality(min(bound, 3)))
    n, w = maps_are_discrete(min(bound, 3))
    rep.add("maps-discrete", "maps ordered discretely", w is None, w, n)
    rep.extend(bicategory_laws(min(bound, 3)))
    rep.extend(derived_structure_consistency(min(bound, 3)))
    if random_count:
        sub = random_allegory_laws(random_count, max(bound, 5), seed)
        rep.extend(sub, prefix="random/")
    return rep
