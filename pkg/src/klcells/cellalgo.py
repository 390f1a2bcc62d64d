"""Cell partition of an affine Weyl group from its proper parabolic subgroups.

Inputs are the closed-form cell tables of the dihedral groups and the
factor sets Z(w) = {u in a finite standard parabolic : w = x u y with
lengths adding}.  The construction, by downward induction on a:

1. glue the two-sided cells of all proper parabolics into blocks b_k of
   the set C (the union of the proper parabolics), each with a value a_C;
2. grow each block to b~_k = {w : Z(w) meets b_k}, minus the b~_l of
   earlier blocks with strictly larger a_C;
3. join blocks whose grown sets intersect (relation ~C);
4. grow the joined classes c_k the same way to get the c~_k.

The c~_k are the candidate two-sided cells and their left-connected
components the candidate left cells.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .cells import CellPartition, components, default_trusted
from .coxeter import INF, CoxeterGroup, get_group, preset
from .weights import WeightFunction

__all__ = [
    "DihedralCell",
    "DihedralCellTable",
    "dihedral_cells",
    "FrakCPartition",
    "frak_c_partition",
    "FactorData",
    "factor_data",
    "Z_factorizations",
    "a_prime",
    "TildePartition",
    "LeftComponent",
    "tilde_partition",
    "LowestCell",
    "lowest_cell",
    "components",
    "MinimalElementTie",
    "claim_violations",
    "upward_closure",
]


# ---------------------------------------------------------------------------
# dihedral closed forms


def _alt(k: int, first: int) -> tuple[int, ...]:
    return tuple((first + i) % 2 for i in range(k))


@dataclass
class DihedralCell:
    """Two-sided cell of I2(m) given by membership predicates on words.

    Words are alternating tuples over {0, 1} (0 = s1, 1 = s2); for finite m
    the longest element is written starting with 0.
    """

    name: str
    a: int
    left_cells: list[tuple[str, Callable[[tuple[int, ...]], bool]]]

    def contains(self, word: tuple[int, ...]) -> bool:
        return any(p(word) for _, p in self.left_cells)


@dataclass
class DihedralCellTable:
    m: int  # INF for the infinite dihedral group
    a: int
    b: int
    cells: list[DihedralCell]
    swapped: bool = False  # generator roles exchanged to reach a >= b

    def words(self, max_len: int | None = None) -> list[tuple[int, ...]]:
        top = self.m if self.m != INF else max_len
        if top is None:
            raise ValueError("the infinite dihedral group needs a length bound")
        out = [()]
        for k in range(1, top + 1):
            if self.m != INF and k == self.m:
                out.append(_alt(k, 0))
            else:
                out += [_alt(k, 0), _alt(k, 1)]
        return out

    def cell_of(self, word: tuple[int, ...]) -> DihedralCell:
        for c in self.cells:
            if c.contains(word):
                return c
        raise KeyError(word)

    def left_cell_of(self, word: tuple[int, ...]) -> str:
        for c in self.cells:
            for name, p in c.left_cells:
                if p(word):
                    return name
        raise KeyError(word)

    def explicit(self, max_len: int | None = None) -> list[tuple[str, int, list[tuple[str, list[tuple[int, ...]]]]]]:
        """[(cell name, a, [(left cell name, words)])] over words up to max_len."""
        ws = self.words(max_len)
        out = []
        for c in self.cells:
            lcs = [(n, [w for w in ws if p(w)]) for n, p in c.left_cells]
            lcs = [(n, w) for n, w in lcs if w]
            if lcs:
                out.append((c.name, c.a, lcs))
        return out


def dihedral_cells(m: int, a: int, b: int) -> DihedralCellTable:
    """Closed-form cells of I2(m) (m = INF for A1~) with L(s1) = a, L(s2) = b.

    For a < b with m even (or infinite) the table for (b, a) is used with
    the generators exchanged.
    """
    if a < 1 or b < 1:
        raise ValueError("dihedral cell tables need positive weights")
    if m != INF and m % 2 == 1 and m > 1 and a != b:
        raise ValueError(f"I2({m}) has conjugate generators, so a must equal b")
    swapped = a < b
    A, B = (b, a) if swapped else (a, b)
    # in the swapped frame, local generator 0 is the heavier one
    sw = (lambda w: tuple(1 - x for x in w)) if swapped else (lambda w: w)

    def P(pred):
        return lambda w: pred(_normal(sw(w), m))

    last = lambda w: w[-1] if w else None
    k = len
    e = ("1_0", P(lambda w: k(w) == 0))
    if m == INF:
        if A == B:
            cells = [
                DihedralCell("{1_0}", 0, [e]),
                DihedralCell("W-{1_0}", A, [
                    ("{1_1,2_2,...}", P(lambda w: k(w) > 0 and last(w) == 0)),
                    ("{2_1,1_2,...}", P(lambda w: k(w) > 0 and last(w) == 1)),
                ]),
            ]
        else:
            cells = [
                DihedralCell("{1_0}", 0, [e]),
                DihedralCell("{2_1}", B, [("{2_1}", P(lambda w: w == (1,)))]),
                DihedralCell("W-{1_0,2_1}", A, [
                    ("{1_1,2_2,...}", P(lambda w: k(w) > 0 and last(w) == 0)),
                    ("{1_2,2_3,...}", P(lambda w: k(w) > 1 and last(w) == 1)),
                ]),
            ]
    elif m == 2:
        cells = [
            DihedralCell("{1_0}", 0, [e]),
            DihedralCell("{2_1}", B, [("{2_1}", P(lambda w: w == (1,)))]),
            DihedralCell("{1_1}", A, [("{1_1}", P(lambda w: w == (0,)))]),
            DihedralCell("{1_2}", A + B, [("{1_2}", P(lambda w: k(w) == 2))]),
        ]
    elif A == B:
        cells = [
            DihedralCell("{1_0}", 0, [e]),
            DihedralCell("W-{1_0,1_m}", A, [
                ("{1_1,2_2,...}", P(lambda w: 0 < k(w) < m and last(w) == 0)),
                ("{2_1,1_2,...}", P(lambda w: 0 < k(w) < m and last(w) == 1)),
            ]),
            DihedralCell("{1_m}", m * A, [("{1_m}", P(lambda w: k(w) == m))]),
        ]
    else:
        h = m // 2
        top = _alt(m - 1, 0)
        cells = [
            DihedralCell("{1_0}", 0, [e]),
            DihedralCell("{2_1}", B, [("{2_1}", P(lambda w: w == (1,)))]),
            DihedralCell("W-{1_0,2_1,1_m-1,1_m}", A, [
                ("{1_2,...,2_m-1}", P(lambda w: 1 < k(w) < m and last(w) == 1)),
                ("{1_1,...,2_m-2}", P(lambda w: 0 < k(w) < m and last(w) == 0 and w != top)),
            ]),
            DihedralCell("{1_m-1}", h * A - h * B + B, [("{1_m-1}", P(lambda w: w == top))]),
            DihedralCell("{1_m}", h * (A + B), [("{1_m}", P(lambda w: k(w) == m))]),
        ]
    return DihedralCellTable(m, a, b, cells, swapped)


def _normal(word: tuple[int, ...], m: int) -> tuple[int, ...]:
    if m != INF and len(word) == m:
        return _alt(m, 0)
    return word


# ---------------------------------------------------------------------------
# factors and the set C


class FactorData:
    """Factor sets restricted to the union C of the finite proper parabolics."""

    def __init__(self, group: CoxeterGroup):
        self.group = group
        self._suf: dict[int, frozenset[int]] = {}
        self._Z: dict[int, frozenset[int]] = {}
        self.parabolics = self._proper_parabolics()
        self._frak_c = frozenset().union(*(set(group.parabolic_elements(I)) for I in self.parabolics)) if self.parabolics else frozenset({0})

    def _proper_parabolics(self) -> list[tuple[int, ...]]:
        """Maximal subsets I of S with W_I finite and I != S (for a finite
        group, the maximal proper ones as well)."""
        g = self.group
        n = g.rank
        subs = [I for I in itertools.combinations(g.S, n - 1) if g.parabolic_is_finite(I)]
        return subs

    @property
    def frak_c(self) -> frozenset[int]:
        return self._frak_c

    def in_frak_c(self, u: int) -> bool:
        return u in self._frak_c

    def suffixes_in_c(self, w: int) -> frozenset[int]:
        got = self._suf.get(w)
        if got is not None:
            return got
        g = self.group
        out = {w} if w in self._frak_c else set()
        for s in g.left_descents(w):
            out |= self.suffixes_in_c(g.lmul(s, w))
        got = self._suf[w] = frozenset(out)
        return got

    def Z(self, w: int) -> frozenset[int]:
        """All u in C with w = x u y and l(w) = l(x) + l(u) + l(y)."""
        got = self._Z.get(w)
        if got is not None:
            return got
        g = self.group
        out = set(self.suffixes_in_c(w))
        for t in g.right_descents(w):
            out |= self.Z(g.rmul(w, t))
        got = self._Z[w] = frozenset(out)
        return got


_FACTORS: dict[str, FactorData] = {}


def factor_data(group: CoxeterGroup) -> FactorData:
    f = _FACTORS.get(group.preset.name)
    if f is None:
        f = _FACTORS[group.preset.name] = FactorData(group)
    return f


def Z_factorizations(w) -> frozenset:
    """Z(w) as a set of table indices (accepts a GroupElement too)."""
    if hasattr(w, "group"):
        return factor_data(w.group).Z(w.index)
    raise TypeError("pass a GroupElement")


def upward_closure(group: CoxeterGroup, seeds: Iterable[int], R: int) -> set[int]:
    """{x u y : u in seeds, lengths adding} inside ball(R), by length-raising steps."""
    out = set(seeds)
    stack = list(out)
    while stack:
        w = stack.pop()
        lw = group.length_of(w)
        if lw >= R:
            continue
        for s in group.S:
            for x in (group.lmul(s, w), group.rmul(w, s)):
                if group.length_of(x) > lw and x not in out:
                    out.add(x)
                    stack.append(x)
    return out


# ---------------------------------------------------------------------------
# step 1


@dataclass
class FrakCPartition:
    group: CoxeterGroup
    L: WeightFunction
    blocks: list[frozenset[int]]  # numbered by a desc, then min element word
    a_values: list[int]

    def a_of(self, u: int) -> int:
        for b, a in zip(self.blocks, self.a_values):
            if u in b:
                return a
        raise KeyError(self.group.name(u))

    def block_index(self, u: int) -> int:
        for i, b in enumerate(self.blocks):
            if u in b:
                return i
        raise KeyError(self.group.name(u))

    def named(self) -> list[tuple[list[str], int]]:
        g = self.group
        return [
            (sorted((g.name(u) for u in b), key=lambda s: (len(s), s)), a)
            for b, a in zip(self.blocks, self.a_values)
        ]


def _parabolic_table(group: CoxeterGroup, L: WeightFunction, I: Sequence[int]):
    """(cells as element sets, a-values) of the finite parabolic W_I."""
    I = tuple(sorted(I))
    if len(I) == 0:
        return [(frozenset({0}), 0)]
    if len(I) == 1:
        s = I[0]
        return [(frozenset({0}), 0), (frozenset({group.rmul(0, s)}), L[s])]
    i, j = I
    m = group.preset.m_ij(i, j)
    tab = dihedral_cells(m, L[i], L[j])
    out = []
    for c in tab.cells:
        elems = set()
        for word in tab.words():
            if c.contains(word):
                elems.add(group.index_of_word([i if x == 0 else j for x in word]))
        if elems:
            out.append((frozenset(elems), c.a))
    return out


def _union_find(items):
    parent = {x: x for x in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    return find, union


def _block_key(group: CoxeterGroup, block, a):
    m = min(block, key=lambda w: (group.length_of(w), group.word_of(w)))
    return (-a, group.length_of(m), group.word_of(m))


def frak_c_partition(group: CoxeterGroup | str, L: WeightFunction) -> FrakCPartition:
    """Two-sided cells of C glued from the proper parabolic cell tables."""
    g = group if isinstance(group, CoxeterGroup) else get_group(group)
    if not L.positive:
        raise ValueError("the parabolic construction needs positive weights")
    fd = factor_data(g)
    find, union = _union_find(fd.frak_c)
    a_of: dict[int, int] = {}
    for I in fd.parabolics:
        for cell, a in _parabolic_table(g, L, I):
            first = next(iter(cell))
            for u in cell:
                union(first, u)
                if a_of.setdefault(u, a) != a:
                    raise ArithmeticError(
                        f"parabolic a-values disagree at {g.name(u)}: {a_of[u]} vs {a}"
                    )
    groups: dict[int, set[int]] = {}
    for u in fd.frak_c:
        groups.setdefault(find(u), set()).add(u)
    blocks = []
    for b in groups.values():
        vals = {a_of[u] for u in b}
        if len(vals) != 1:
            raise ArithmeticError(f"a_C not constant on block {sorted(g.name(u) for u in b)}")
        blocks.append((frozenset(b), vals.pop()))
    blocks.sort(key=lambda ba: _block_key(g, ba[0], ba[1]))
    return FrakCPartition(g, L, [b for b, _ in blocks], [a for _, a in blocks])


def a_prime(w, L: WeightFunction, fc: FrakCPartition | None = None) -> int:
    """max a_C(u) over u in Z(w)."""
    g = L.group
    w = w.index if hasattr(w, "index") else w
    fc = fc or frak_c_partition(g, L)
    return max(fc.a_of(u) for u in factor_data(g).Z(w))


# ---------------------------------------------------------------------------
# steps 2-4


class MinimalElementTie(ValueError):
    """A left-connected component has two elements of minimal length."""


@dataclass
class LeftComponent:
    block: int
    index: int
    u: int  # unique element of minimal length
    elements: frozenset[int]

    def X(self, group: CoxeterGroup, R: int) -> frozenset[int]:
        """{w : w u in the component} materialised inside ball(R)."""
        uinv = group.inv(self.u)
        out = set()
        for z in self.elements:
            w = group.mul(z, uinv)
            if group.length_of(w) <= R:
                out.add(w)
        return frozenset(out)


@dataclass
class TildePartition:
    group: CoxeterGroup
    L: WeightFunction
    radius: int
    trusted: int
    frak_c: FrakCPartition
    b_order: list[int]  # numbering of the C-blocks used in step 2
    b_tilde: list[frozenset[int]]  # ball parts, indexed like frak_c.blocks
    classes: list[list[int]]  # ~C classes as lists of C-block indices, step-4 order
    class_a: list[int]
    blocks: list[frozenset[int]]  # c~_k inside ball(radius)
    connected: list[list[frozenset[int]]] = field(default_factory=list)
    left_components: list[list[LeftComponent]] = field(default_factory=list)

    # -- views ------------------------------------------------------------
    def block_of(self, w: int) -> int:
        for k, b in enumerate(self.blocks):
            if w in b:
                return k
        raise KeyError(self.group.name(w))

    def two_sided(self, trusted: int | None = None) -> CellPartition:
        t = self.trusted if trusted is None else trusted
        inner = set(range(self.group.ball_size(t)))
        blocks = [b & inner for b in self.blocks]
        keep = [(k, b) for k, b in enumerate(blocks) if b]
        return CellPartition(
            self.group, "two-sided", self.radius, t,
            [b for _, b in keep], set(),
            [self.class_a[k] for k, _ in keep], None,
            [f"c{k}" for k, _ in keep],
        )

    def left(self, trusted: int | None = None) -> CellPartition:
        t = self.trusted if trusted is None else trusted
        inner = set(range(self.group.ball_size(t)))
        out, labels, avals = [], [], []
        for k, comps in enumerate(self.left_components):
            for c in comps:
                b = c.elements & inner
                if b:
                    out.append(b)
                    labels.append(f"c{k}^{c.index + 1}")
                    avals.append(self.class_a[k])
        return CellPartition(self.group, "left", self.radius, t, out, set(), avals, None, labels)

    def all_left_components(self) -> list[LeftComponent]:
        return [c for comps in self.left_components for c in comps]

    def class_table(self) -> list[dict]:
        """The ~C classes with member blocks and a-values, in step-4 order."""
        g = self.group
        rows = []
        for k, cls in enumerate(self.classes):
            rows.append(
                {
                    "class": k,
                    "a": self.class_a[k],
                    "blocks": [
                        {
                            "index": i,
                            "a": self.frak_c.a_values[i],
                            "elements": sorted((g.name(u) for u in self.frak_c.blocks[i]), key=lambda s: (len(s), s)),
                        }
                        for i in cls
                    ],
                }
            )
        return rows

    def to_dict(self) -> dict:
        g = self.group
        inner = set(range(g.ball_size(self.trusted)))
        blocks = []
        for k, b in enumerate(self.blocks):
            blocks.append(
                {
                    "label": f"c{k}",
                    "a": self.class_a[k],
                    "elements": sorted((g.name(w) for w in b & inner), key=lambda s: (len(s), s)),
                    "left_components": [
                        {
                            "label": f"c{k}^{c.index + 1}",
                            "u": g.name(c.u),
                            "elements": sorted((g.name(w) for w in c.elements & inner), key=lambda s: (len(s), s)),
                        }
                        for c in self.left_components[k]
                    ],
                }
            )
        return {
            "kind": "tilde",
            "radius": self.radius,
            "trusted": self.trusted,
            "a_sequence": list(self.class_a),
            "classes": self.class_table(),
            "blocks": blocks,
        }


def _grow(group: CoxeterGroup, fd: FactorData, seeds: frozenset[int], ball: range) -> set[int]:
    return {w for w in ball if fd.Z(w) & seeds}


def _number(group, sets_with_a, order: Sequence[int] | None):
    idx = list(range(len(sets_with_a)))
    if order is not None:
        if sorted(order) != idx:
            raise ValueError("order must be a permutation of the block indices")
        a = [sets_with_a[i][1] for i in order]
        if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
            raise ValueError("block numbering must have weakly decreasing a-values")
        return list(order)
    return sorted(idx, key=lambda i: _block_key(group, sets_with_a[i][0], sets_with_a[i][1]))


def _tilde_sets(group, fd, sets_with_a, numbering, ball):
    """Grown sets with earlier strictly-larger-a sets subtracted, in numbering order."""
    out: dict[int, set[int]] = {}
    done: list[int] = []
    for k in numbering:
        seeds, a = sets_with_a[k]
        t = _grow(group, fd, frozenset(seeds), ball)
        for l in done:
            if sets_with_a[l][1] > a:
                t -= out[l]
        out[k] = t
        done.append(k)
    return out


def tilde_partition(
    group: CoxeterGroup | str,
    L: WeightFunction,
    R: int,
    trusted: int | None = None,
    *,
    b_order: Sequence[int] | None = None,
    c_order: Sequence[int] | None = None,
) -> TildePartition:
    """Run steps 2-4 on ball(R) and split the c~_k into components.

    ``b_order`` / ``c_order`` override the tie-breaking among blocks of equal
    a-value (they must list block indices with weakly decreasing a).
    """
    g = group if isinstance(group, CoxeterGroup) else get_group(group)
    g.ensure_radius(R)
    if trusted is None:
        trusted = default_trusted(R, g.radius == float("inf") and g.ball_size(R) == g.size())
    ball = range(g.ball_size(R))
    fd = factor_data(g)
    fc = frak_c_partition(g, L)
    bsets = list(zip(fc.blocks, fc.a_values))
    bnum = _number(g, bsets, b_order)
    bt = _tilde_sets(g, fd, bsets, bnum, ball)

    # step 3
    find, union = _union_find(range(len(bsets)))
    for i, j in itertools.combinations(range(len(bsets)), 2):
        if bt[i] & bt[j]:
            union(i, j)
    cls: dict[int, list[int]] = {}
    for i in range(len(bsets)):
        cls.setdefault(find(i), []).append(i)
    csets = []
    for members in cls.values():
        avals = {fc.a_values[i] for i in members}
        if len(avals) != 1:
            raise ArithmeticError("a_C is not constant on a ~C class")
        csets.append((frozenset().union(*(fc.blocks[i] for i in members)), avals.pop(), sorted(members)))
    # step 4
    cnum = _number(g, [(s, a) for s, a, _ in csets], c_order)
    ct = _tilde_sets(g, fd, [(s, a) for s, a, _ in csets], cnum, ball)
    classes = [csets[k][2] for k in cnum]
    class_a = [csets[k][1] for k in cnum]
    blocks = [frozenset(ct[k]) for k in cnum]
    covered = set().union(*blocks) if blocks else set()
    if covered != set(ball):
        missing = sorted(set(ball) - covered)[:5]
        raise ArithmeticError(f"tilde sets miss {[g.name(w) for w in missing]}")

    tp = TildePartition(
        g, L, R, trusted, fc, bnum, [frozenset(bt[i]) for i in range(len(bsets))],
        classes, class_a, blocks,
    )
    for k, b in enumerate(blocks):
        tp.connected.append(components(g, b, "connected"))
        comps = []
        for j, c in enumerate(sorted(components(g, b, "left_connected"),
                                     key=lambda c: _min_key(g, c))):
            comps.append(LeftComponent(k, j, _unique_min(g, c), c))
        tp.left_components.append(comps)
    return tp


def _min_key(g, c):
    m = min(c, key=lambda w: (g.length_of(w), g.word_of(w)))
    return (g.length_of(m), g.word_of(m))


def _unique_min(g: CoxeterGroup, comp: frozenset[int]) -> int:
    lmin = min(g.length_of(w) for w in comp)
    mins = [w for w in comp if g.length_of(w) == lmin]
    if len(mins) > 1:
        raise MinimalElementTie(
            f"component has several elements of minimal length: {[g.name(w) for w in mins]}"
        )
    return mins[0]


def claim_violations(tp: TildePartition) -> list[str]:
    """The c~_k should be exactly the connected components of the level sets
    B_i = {w : a'_C(w) = i}; checked on the trusted ball, where components
    are computed in the full ball."""
    g = tp.group
    fd = factor_data(g)
    fc = tp.frak_c
    a_of = {u: a for b, a in zip(fc.blocks, fc.a_values) for u in b}
    ball = range(g.ball_size(tp.radius))
    levels: dict[int, set[int]] = {}
    for w in ball:
        levels.setdefault(max(a_of[u] for u in fd.Z(w)), set()).add(w)
    comps = set()
    for i, B in levels.items():
        comps.update(components(g, B, "connected"))
    inner = set(range(g.ball_size(tp.trusted)))
    want = {c & inner for c in comps} - {frozenset()}
    got = {b & inner for b in tp.blocks} - {frozenset()}
    bad = []
    for b in got - want:
        bad.append(f"c~ block containing {g.name(min(b))} is not a component of its level set")
    for k, b in enumerate(tp.blocks):
        for w in b:
            if max(a_of[u] for u in fd.Z(w)) != tp.class_a[k]:
                bad.append(f"a'({g.name(w)}) differs from the a-value of c{k}")
                break
    return bad


# ---------------------------------------------------------------------------
# lowest two-sided cell


@dataclass
class LowestCell:
    group: CoxeterGroup
    nu: int
    c0: frozenset[int]  # the longest elements w_I with L(w_I) = nu

    def contains(self, w: int) -> bool:
        return bool(factor_data(self.group).Z(w) & self.c0)


def lowest_cell(group: CoxeterGroup | str, L: WeightFunction) -> LowestCell:
    g = group if isinstance(group, CoxeterGroup) else get_group(group)
    fd = factor_data(g)
    subsets = [I for k in range(g.rank) for I in itertools.combinations(g.S, k) if g.parabolic_is_finite(I)]
    vals = {I: L.of_index(g.longest_element(I)) for I in subsets}
    nu = max(vals.values())
    return LowestCell(g, nu, frozenset(g.longest_element(I) for I, v in vals.items() if v == nu))
