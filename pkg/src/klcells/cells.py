"""Left, right and two-sided cells of a ball, by brute force.

The left link graph has an edge y -> z whenever C_z occurs in C_s C_y for
some generator s, so z <=_L y exactly when z is reachable from y.  Cells are
the strongly connected components.  Elements of maximal length have unknown
out-edges; a block that reaches one is flagged ``uncertain`` (a missing
edge back into it could merge it with another block), and only the trusted
sub-ball of radius R' < R is reported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Literal

import networkx as nx

from .coxeter import CoxeterGroup
from .klbasis import KLTable, kl_table
from .laurent import LaurentPoly, ZERO
from .weights import WeightFunction

__all__ = [
    "diff_partitions",
    "default_trusted",
    "LinkData",
    "CellPartition",
    "link_data",
    "left_link_graph",
    "right_link_graph",
    "cells_of_kind",
    "a_estimates",
    "a_estimate",
    "components",
    "check_duality",
    "check_p4",
    "check_left_connected",
    "check_inverse_closed",
    "check_refines",
]

Kind = Literal["left", "right", "two-sided"]


class LinkData:
    """Left products C_s C_y for all y of length < R, and the link graphs."""

    def __init__(self, L: WeightFunction, R: int, table: KLTable | None = None):
        self.L = L
        self.R = R
        self.table = table if table is not None and table.R >= R else kl_table(L, R)
        self.group: CoxeterGroup = self.table.group
        self.n = self.group.ball_size(R)
        g = self.group
        self.left: list[list[dict[int, LaurentPoly]]] = [[] for _ in g.S]
        for y in range(self.n):
            for s in g.S:
                if self.known(y):
                    self.left[s].append(self.table.left_product(s, y).coeffs)
                else:
                    self.left[s].append(None)

    def known(self, y: int) -> bool:
        return self.table.complete or self.group.length_of(y) < self.R

    def left_targets(self, y: int) -> set[int]:
        out: set[int] = set()
        for s in self.group.S:
            d = self.left[s][y]
            if d is not None:
                out.update(d)
        return out

    def right_targets(self, y: int) -> set[int]:
        g = self.group
        return {g.inv(z) for z in self.left_targets(g.inv(y))}

    def graph(self, kind: Kind) -> nx.DiGraph:
        G = nx.DiGraph()
        G.add_nodes_from(range(self.n))
        for y in range(self.n):
            if not self.known(y):
                continue
            if kind in ("left", "two-sided"):
                G.add_edges_from((y, z) for z in self.left_targets(y) if z != y)
            if kind in ("right", "two-sided"):
                G.add_edges_from((y, z) for z in self.right_targets(y) if z != y)
        return G

    # -- h_{x,y,z} through left products -----------------------------------
    def products_with(self, y: int, max_len: int) -> dict[int, dict[int, LaurentPoly]]:
        """{x: C_x C_y in the C-basis} for l(x) <= max_len, l(x) + l(y) <= R.

        Uses C_x = C_s C_{sx} - sum_z m_z C_z, where the m_z are the lower
        terms of the left product, so only left products are needed.
        """
        g = self.group
        top = max_len if self.table.complete else min(max_len, self.R - g.length_of(y))
        out: dict[int, dict[int, LaurentPoly]] = {0: {y: LaurentPoly({0: 1})}}
        for x in range(1, min(g.ball_size(top), self.n)):
            s = g.word_of(x)[0]
            x1 = g.lmul(s, x)
            acc: dict[int, LaurentPoly] = {}
            for z, c in out[x1].items():
                for z2, c2 in self.left[s][z].items():
                    acc[z2] = acc.get(z2, ZERO) + c * c2
            for z, m in self.left[s][x1].items():
                if z == x:
                    continue
                for z2, c2 in out[z].items():
                    acc[z2] = acc.get(z2, ZERO) - m * c2
            out[x] = {z: c for z, c in acc.items() if c}
        return out


_LINKS: dict[tuple, LinkData] = {}


def link_data(L: WeightFunction, R: int) -> LinkData:
    key = (L.key(), R)
    d = _LINKS.get(key)
    if d is None:
        d = _LINKS[key] = LinkData(L, R)
    return d


def left_link_graph(R: int, L: WeightFunction) -> nx.DiGraph:
    return link_data(L, R).graph("left")


def right_link_graph(R: int, L: WeightFunction) -> nx.DiGraph:
    return link_data(L, R).graph("right")


def a_estimates(L: WeightFunction, R: int, pair_radius: int | None = None) -> dict[int, int]:
    """max deg h_{x,y,z} over pairs with l(x) + l(y) <= pair_radius (default R).

    A lower bound for a(z); z not covered by any pair is absent.
    """
    key = (L.key(), R, pair_radius)
    got = _A_CACHE.get(key)
    if got is not None:
        return got
    d = link_data(L, R)
    g = d.group
    if d.table.complete:
        top = max(g.length_of(w) for w in range(d.n))
        pr = 2 * top if pair_radius is None else pair_radius
    else:
        pr = R if pair_radius is None else min(pair_radius, R)
    best: dict[int, int] = {}
    for y in range(min(g.ball_size(pr), d.n)):
        prods = d.products_with(y, pr - g.length_of(y))
        for x, h in prods.items():
            for z, c in h.items():
                deg = c.degree
                if deg is not None and deg > best.get(z, -1):
                    best[z] = deg
    _A_CACHE[key] = best
    return best


_A_CACHE: dict[tuple, dict[int, int]] = {}


def a_estimate(z, R: int, L: WeightFunction, pair_radius: int | None = None) -> int:
    z = z.index if hasattr(z, "index") else z
    return a_estimates(L, R, pair_radius).get(z, 0)


@dataclass
class CellPartition:
    """Blocks of a partition of a finite element set, with a preorder on blocks.

    ``order`` holds pairs (i, j) with block i strictly below block j
    (i <= j in the preorder, i != j).
    """

    group: CoxeterGroup
    kind: str
    radius: int
    trusted: int
    blocks: list[frozenset[int]]
    order: set[tuple[int, int]] = field(default_factory=set)
    a_values: list[int | None] | None = None
    uncertain: list[bool] | None = None
    labels: list[str] | None = None

    def __post_init__(self):
        if self.labels is None:
            self.labels = [f"{self.kind[0]}{i}" for i in range(len(self.blocks))]
        self._block_of = {w: i for i, b in enumerate(self.blocks) for w in b}

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(self._block_of)

    def block_of(self, w: int) -> int:
        return self._block_of[w]

    def as_sets(self) -> set[frozenset[int]]:
        return set(self.blocks)

    def leq(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.order

    def named(self) -> list[list[str]]:
        g = self.group
        return [sorted((g.name(w) for w in b), key=lambda s: (len(s), s)) for b in self.blocks]

    def restricted(self, ground: Iterable[int]) -> "CellPartition":
        ground = set(ground)
        keep = [(i, b & ground) for i, b in enumerate(self.blocks) if b & ground]
        idx = {i: k for k, (i, _) in enumerate(keep)}
        return CellPartition(
            self.group, self.kind, self.radius, self.trusted,
            [b for _, b in keep],
            {(idx[i], idx[j]) for i, j in self.order if i in idx and j in idx},
            [self.a_values[i] for i, _ in keep] if self.a_values else None,
            [self.uncertain[i] for i, _ in keep] if self.uncertain else None,
            [self.labels[i] for i, _ in keep],
        )

    def to_dict(self) -> dict:
        g = self.group
        blocks = []
        for i, b in enumerate(self.blocks):
            blocks.append(
                {
                    "label": self.labels[i],
                    "a": None if not self.a_values else self.a_values[i],
                    "elements": sorted((g.name(w) for w in b), key=lambda s: (len(s), s)),
                    "uncertain": bool(self.uncertain[i]) if self.uncertain else False,
                }
            )
        return {
            "kind": self.kind,
            "radius": self.radius,
            "trusted": self.trusted,
            "blocks": blocks,
            "order": sorted([self.labels[i], self.labels[j]] for i, j in self.order),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def _canonical_blocks(group, blocks, a_of=None):
    def key(b):
        m = min(b, key=lambda w: (group.length_of(w), group.word_of(w)))
        a = a_of(b) if a_of else None
        return (-(a if a is not None else 0), group.length_of(m), group.word_of(m))

    return sorted(blocks, key=key)


LINK_STEP = 1
SAFETY_MARGIN = 2


def default_trusted(R: int, complete: bool = False) -> int:
    """R minus one link step minus the safety margin; all of ball(R) when
    the ball already covers a finite group."""
    return R if complete else max(R - LINK_STEP - SAFETY_MARGIN, 0)


def cells_of_kind(
    kind: Kind,
    R: int,
    L: WeightFunction,
    trusted: int | None = None,
    *,
    with_a: bool = False,
    pair_radius: int | None = None,
) -> CellPartition:
    """SCCs of the link graph on ball(R), restricted to ball(trusted)."""
    d = link_data(L, R)
    g = d.group
    if trusted is None:
        trusted = default_trusted(R, d.table.complete)
    if trusted >= R and not d.table.complete:
        raise ValueError("trusted radius must be below the computation radius")
    G = d.graph(kind)
    comps = [frozenset(c) for c in nx.strongly_connected_components(G)]
    inner = set(range(g.ball_size(trusted)))
    unknown = [w for w in range(d.n) if not d.known(w)]
    # link targets z always have sz < z, so the identity is never a target
    reaches_boundary = set(unknown)
    stack = list(unknown)
    while stack:
        for y in G.predecessors(stack.pop()):
            if y not in reaches_boundary:
                reaches_boundary.add(y)
                stack.append(y)
    reaches_boundary.discard(0)
    a_map = a_estimates(L, R, pair_radius) if with_a else None

    def a_of(b):
        if a_map is None:
            return None
        vals = [a_map[w] for w in b if w in a_map]
        return max(vals) if vals else None

    kept = [(c & inner, c) for c in comps if c & inner]
    kept_sorted = _canonical_blocks(g, [k for k, _ in kept], a_of)
    full_of = {k: c for k, c in kept}
    blocks = kept_sorted
    # block order from reachability in the condensation
    C = nx.condensation(G, scc=[set(c) for c in comps])
    comp_id = {}
    for node, data in C.nodes(data=True):
        for w in data["members"]:
            comp_id[w] = node
    ids = [comp_id[next(iter(b))] for b in blocks]
    where = {cid: i for i, cid in enumerate(ids)}
    order = set()
    for i, cid in enumerate(ids):
        for desc in nx.descendants(C, cid):
            j = where.get(desc)
            if j is not None:
                order.add((j, i))  # block j reachable from block i: j below i
    prefix = {"left": "L", "right": "R", "two-sided": "c"}[kind]
    return CellPartition(
        g, kind, R, trusted, blocks, order,
        [a_of(b) for b in blocks] if with_a else None,
        [bool(full_of[b] & reaches_boundary) for b in blocks],
        [f"{prefix}{i}" for i in range(len(blocks))],
    )


# -- connectivity -----------------------------------------------------------


def components(group: CoxeterGroup, block: Iterable[int], mode: str = "connected") -> list[frozenset[int]]:
    """Components of a finite element set under generator steps inside it.

    ``left_connected`` uses w -> s w, ``right_connected`` w -> w s and
    ``connected`` both.
    """
    block = set(block)
    seen: set[int] = set()
    out = []
    for start in sorted(block):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            w = stack.pop()
            for s in group.S:
                nbrs = []
                if mode in ("connected", "left_connected", "left"):
                    nbrs.append(group.lmul(s, w))
                if mode in ("connected", "right_connected", "right"):
                    nbrs.append(group.rmul(w, s))
                for x in nbrs:
                    if x in block and x not in comp:
                        comp.add(x)
                        stack.append(x)
        seen |= comp
        out.append(frozenset(comp))
    return out


# -- property checks (each returns a list of violations) --------------------


def check_duality(left: CellPartition, right: CellPartition) -> list[str]:
    g = left.group
    inv_left = {frozenset(g.inv(w) for w in b) for b in left.blocks}
    bad = inv_left ^ right.as_sets()
    return [f"block {sorted(g.name(w) for w in b)} breaks left/right duality" for b in bad]


def check_p4(L: WeightFunction, R: int, partition: CellPartition, a_map: dict[int, int]) -> list[str]:
    """z' <=_LR z  implies  a(z') >= a(z), along every computed link inside the ball."""
    d = link_data(L, R)
    g = d.group
    ground = partition.ground
    bad = []
    for y in sorted(ground):
        if y not in a_map or not d.known(y):
            continue
        for z in d.left_targets(y) | d.right_targets(y):
            if z in ground and z in a_map and a_map[z] < a_map[y]:
                bad.append(f"a({g.name(z)})={a_map[z]} < a({g.name(y)})={a_map[y]}")
    return bad


def check_left_connected(partition: CellPartition) -> list[str]:
    g = partition.group
    bad = []
    for b in partition.blocks:
        comps = components(g, b, "left_connected")
        if len(comps) > 1:
            bad.append(f"left cell containing {g.name(min(b))} has {len(comps)} pieces")
    return bad


def check_inverse_closed(partition: CellPartition) -> list[str]:
    g = partition.group
    bad = []
    for b in partition.blocks:
        inv = frozenset(g.inv(w) for w in b)
        if inv & partition.ground != b:
            bad.append(f"block containing {g.name(min(b))} is not closed under inversion")
    return bad


def check_refines(fine: CellPartition, coarse: CellPartition) -> list[str]:
    """Every block of ``fine`` sits inside one block of ``coarse`` (on the common ground)."""
    g = fine.group
    common = fine.ground & coarse.ground
    bad = []
    for b in fine.blocks:
        hit = {coarse.block_of(w) for w in b & common}
        if len(hit) > 1:
            bad.append(f"block containing {g.name(min(b))} is split")
    return bad


def diff_partitions(a: CellPartition, b: CellPartition) -> list[str]:
    """Blocks present in one partition and not the other, on the common ground."""
    g = a.group
    common = a.ground & b.ground
    sa = {blk & common for blk in a.blocks if blk & common}
    sb = {blk & common for blk in b.blocks if blk & common}

    def show(blk):
        names = sorted((g.name(w) for w in blk), key=lambda s: (len(s), s))
        return "{" + ", ".join(names[:8]) + (", ..." if len(names) > 8 else "") + "}"

    out = [f"only in first: {show(blk)}" for blk in sorted(sa - sb, key=min)]
    out += [f"only in second: {show(blk)}" for blk in sorted(sb - sa, key=min)]
    return out
