"""Generalized induction of left cells, checked on a finite ball.

A datum is a finite set U of elements with sets X_u such that

    I1  e lies in X_u,
    I2  l(xu) = l(x) + l(u) for x in X_u,
    I3  the sets X_u u are pairwise disjoint,
    I4  the span M of the T_x C_u (x in X_u) is a left ideal of H.

When the X_u u cover W, the T_x C_u form a basis B of H: T_x C_u equals
T_{xu} plus terms of smaller length, so any T-expansion can be rewritten in
B by peeling leaders of maximal length.  The preorder u <= v on U is
generated by "T_x C_u occurs in the B-expansion of some T_y C_v", and I5
asks that

    T_y C_v = T_{yv} + sum a T_x C_u   mod H_{<0}

with every xu on the right strictly below yv in the Bruhat order and u <= v.
The checks below only see a ball of radius R and report each verdict as
verified, violated (with a witness) or inconclusive.

The standard datum comes from the algorithm in ``cellalgo``: U holds the
minimal elements u of the left-connected components and X_u = {x : xu in
the component of u}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .cellalgo import TildePartition, tilde_partition
from .cells import LinkData, link_data
from .coxeter import CoxeterGroup, iter_bits
from .hecke import algebra_for
from .klbasis import TruncationError, kl_table
from .laurent import ZERO, LaurentPoly
from .weights import WeightFunction

__all__ = [
    "InductionDatum",
    "ConditionReport",
    "Expansion",
    "Expander",
    "I5Report",
    "Preorder",
    "datum_from_tilde",
    "induction_datum",
    "check_I1_I3",
    "expand_in_B",
    "check_I5",
    "preorder_on_U",
    "check_dagger",
    "check_ideals",
    "check_itsc",
    "labels_from_points",
]


@dataclass
class InductionDatum:
    """U with materialized X_u inside ball(radius).

    ``X[k]`` belongs to ``U[k]``; ``level[k]`` is the index i of the
    candidate two-sided cell c~_i containing U[k] (larger i means smaller a).
    """

    group: CoxeterGroup
    L: WeightFunction
    radius: int
    U: list[int]
    X: list[frozenset[int]]
    labels: list[str]
    level: list[int]
    owner: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.owner:
            g = self.group
            for k, (u, X) in enumerate(zip(self.U, self.X)):
                for x in X:
                    z = g.mul(x, u)
                    if g.length_of(z) <= self.radius:
                        self.owner.setdefault(z, k)

    def name(self, k: int) -> str:
        return self.labels[k]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def member(self, k: int, x: int) -> bool:
        """x in X_{U[k]}, decided by the owner of xu (intensional form)."""
        g = self.group
        z = g.mul(x, self.U[k])
        return self.owner.get(z) == k and g.length_of(z) == g.length_of(x) + g.length_of(self.U[k])

    def split(self, z: int) -> tuple[int, int]:
        """(k, x) with z = x U[k]; raises TruncationError outside the ball."""
        k = self.owner.get(z)
        if k is None:
            raise TruncationError(f"{self.group.name(z)} is not covered at radius {self.radius}")
        return k, self.group.mul(z, self.group.inv(self.U[k]))


def datum_from_tilde(tp: TildePartition, radius: int) -> InductionDatum:
    """The standard datum of a tilde partition, materialized in ball(radius).

    ``tp`` should be computed on a larger ball than ``radius`` so that the
    left-connected components are not cut by the boundary.
    """
    g = tp.group
    if radius > tp.radius:
        raise ValueError("materialization radius exceeds the tilde partition radius")
    inner = set(range(g.ball_size(radius)))
    U, X, labels, level = [], [], [], []
    for i, comps in enumerate(tp.left_components):
        for c in comps:
            U.append(c.u)
            uinv = g.inv(c.u)
            X.append(frozenset(g.mul(z, uinv) for z in c.elements & inner))
            labels.append(f"c{i}^{c.index + 1}")
            level.append(i)
    return InductionDatum(g, tp.L, radius, U, X, labels, level)


def induction_datum(L: WeightFunction, R: int, extra: int = 6) -> InductionDatum:
    """Standard datum on ball(R) from the algorithm run on ball(R + extra)."""
    tp = tilde_partition(L.group, L, R + extra, R + extra)
    return datum_from_tilde(tp, R)


def labels_from_points(d: InductionDatum, points: Mapping[str, tuple[float, float]]) -> dict[int, str]:
    """Rename U through named points of a cell picture: {U index: name}."""
    g = d.group
    out: dict[int, str] = {}
    for name, (fx, fy) in points.items():
        z = g.element_at_picture_point(fx, fy)
        k = d.owner.get(z)
        if k is None:
            raise TruncationError(f"picture point {name} lies outside radius {d.radius}")
        if k in out:
            raise ValueError(f"points {out[k]} and {name} fall in the same component")
        out[k] = name
    return out


# -- I1 to I3 -----------------------------------------------------------------


@dataclass
class ConditionReport:
    name: str
    ok: bool
    witnesses: list[str] = field(default_factory=list)

    def __str__(self):
        tail = "" if self.ok else ": " + "; ".join(self.witnesses[:5])
        return f"{self.name} {'pass' if self.ok else 'fail'}{tail}"


def check_I1_I3(d: InductionDatum) -> list[ConditionReport]:
    g = d.group
    i1 = [d.name(k) for k, X in enumerate(d.X) if 0 not in X]
    i2 = [
        f"{d.name(k)}: x={g.name(x)}"
        for k, (u, X) in enumerate(zip(d.U, d.X))
        for x in sorted(X)
        if g.length_of(g.mul(x, u)) != g.length_of(x) + g.length_of(u)
    ]
    seen: dict[int, int] = {}
    i3 = []
    for k, (u, X) in enumerate(zip(d.U, d.X)):
        for x in sorted(X):
            z = g.mul(x, u)
            if z in seen and seen[z] != k:
                i3.append(f"{g.name(z)} in X_u u for {d.name(seen[z])} and {d.name(k)}")
            seen.setdefault(z, k)
    return [
        ConditionReport("I1", not i1, [f"e not in X_u for {n}" for n in i1]),
        ConditionReport("I2", not i2, i2),
        ConditionReport("I3", not i3, i3),
    ]


# -- expansions in the basis B ----------------------------------------------------


@dataclass
class Expansion:
    """T_y C_v = sum over z of coeffs[z] T_x C_u with z = x u."""

    y: int
    v: int
    coeffs: dict[int, LaurentPoly]

    def owners(self, d: InductionDatum) -> set[int]:
        return {d.owner[z] for z in self.coeffs}


class Expander:
    """T-expansions of T_x C_u, memoized by z = x u, and B-expansions."""

    def __init__(self, d: InductionDatum):
        self.d = d
        self.table = kl_table(d.L, d.radius)
        self.algebra = algebra_for(d.L)
        self._tc: dict[int, dict[int, LaurentPoly]] = {}

    def tc(self, z: int) -> dict[int, LaurentPoly]:
        """T_x C_u in the T-basis for z = x u (do not mutate)."""
        hit = self._tc.get(z)
        if hit is not None:
            return hit
        g = self.d.group
        k, x = self.d.split(z)
        if x == 0:
            out = self.table.column(self.d.U[k])
        else:
            s = g.word_of(x)[0]
            out = self.algebra._ts_left(s, self.tc(g.lmul(s, z)))
        self._tc[z] = out
        return out

    def ty_cv(self, y: int, v: int) -> dict[int, LaurentPoly]:
        g = self.d.group
        if g.length_of(y) + g.length_of(v) > self.d.radius:
            raise TruncationError("T_y C_v leaves the ball")
        c = self.table.column(v)
        for s in reversed(g.word_of(y)):
            c = self.algebra._ts_left(s, c)
        return c

    def peel(self, coeffs: Mapping[int, LaurentPoly]) -> dict[int, LaurentPoly]:
        """Rewrite a T-expansion in the basis B."""
        g = self.d.group
        c = {z: p for z, p in coeffs.items() if p}
        out: dict[int, LaurentPoly] = {}
        while c:
            top = max(g.length_of(z) for z in c)
            for z in sorted(z for z in c if g.length_of(z) == top):
                p = c.pop(z)
                out[z] = p
                for w, q in self.tc(z).items():
                    if w == z:
                        continue
                    nv = c.get(w, ZERO) - p * q
                    if nv:
                        c[w] = nv
                    else:
                        c.pop(w, None)
        return out


def expand_in_B(y: int, v: int, d: InductionDatum, expander: Expander | None = None) -> Expansion:
    """Coefficients of T_y C_v in the basis {T_x C_u}.

    ``v`` is an index into ``d.U``.  Raises TruncationError when the support
    leaves the ball.
    """
    ex = expander or Expander(d)
    return Expansion(y, v, ex.peel(ex.ty_cv(y, d.U[v])))


# -- the preorder on U --------------------------------------------------------------


@dataclass
class Preorder:
    d: InductionDatum
    direct: dict[int, set[int]]  # v -> {u : T_x C_u occurs in some T_y C_v}
    closure: nx.DiGraph  # edge v -> u for u <= v, u != v
    inconclusive: list[tuple[int, int]] = field(default_factory=list)

    def leq(self, u: int, v: int) -> bool:
        return u == v or self.closure.has_edge(v, u)

    def below(self, v: int) -> set[int]:
        return {v} | set(self.closure.successors(v))

    def hasse(self) -> set[tuple[int, int]]:
        """Covering pairs (v, u): u < v with nothing strictly between."""
        cond = nx.condensation(self.closure)
        red = nx.transitive_reduction(cond)
        members = nx.get_node_attributes(cond, "members")
        return {
            (a, b)
            for p, q in red.edges
            for a in members[p]
            for b in members[q]
        }

    def named_hasse(self, names: Mapping[int, str] | None = None) -> set[tuple[str, str]]:
        nm = names or dict(enumerate(self.d.labels))
        return {(nm[a], nm[b]) for a, b in self.hasse()}

    def to_dot(self, names: Mapping[int, str] | None = None) -> str:
        nm = names or dict(enumerate(self.d.labels))
        lines = ["digraph preorder {", "  rankdir=TB;"]
        for k in range(len(self.d.U)):
            lines.append(f'  "{nm[k]}";')
        for a, b in sorted(self.hasse()):
            lines.append(f'  "{nm[a]}" -> "{nm[b]}";')
        lines.append("}")
        return "\n".join(lines)

    def to_dict(self, names: Mapping[int, str] | None = None) -> dict:
        g = self.d.group
        nm = names or dict(enumerate(self.d.labels))
        return {
            "nodes": [{"name": nm[k], "u": g.name(u)} for k, u in enumerate(self.d.U)],
            "hasse": sorted([nm[a], nm[b]] for a, b in self.hasse()),
            "inconclusive": len(self.inconclusive),
        }


def preorder_on_U(d: InductionDatum, expander: Expander | None = None) -> Preorder:
    """Occurrence relation over all y with l(y) + l(v) <= radius, closed up."""
    g = d.group
    ex = expander or Expander(d)
    direct: dict[int, set[int]] = {k: set() for k in range(len(d.U))}
    inconclusive = []
    for k, v in enumerate(d.U):
        room = d.radius - g.length_of(v)
        for y in range(g.ball_size(room)):
            try:
                e = ex.peel(ex.ty_cv(y, v))
            except TruncationError:
                inconclusive.append((y, k))
                continue
            direct[k].update(d.owner[z] for z in e)
    G = nx.DiGraph()
    G.add_nodes_from(range(len(d.U)))
    G.add_edges_from((v, u) for v, us in direct.items() for u in us if u != v)
    closure = nx.transitive_closure(G, reflexive=False)
    closure.remove_edges_from([(n, n) for n in closure.nodes if closure.has_edge(n, n)])
    return Preorder(d, direct, closure, inconclusive)


def check_dagger(order: Preorder) -> ConditionReport:
    """u <= v with u != v forces u into a cell of strictly smaller index."""
    d = order.d
    bad = [
        f"{d.name(u)} <= {d.name(v)}"
        for v in range(len(d.U))
        for u in order.below(v)
        if u != v and d.level[u] >= d.level[v]
    ]
    return ConditionReport("dagger", not bad, bad)


# -- I5 -----------------------------------------------------------------------------


@dataclass
class I5Report:
    verified: int = 0
    violated: list[str] = field(default_factory=list)
    inconclusive: list[str] = field(default_factory=list)
    # (v, y) -> [(z, a)] for the lower terms x u with nonzero a
    corrections: dict[tuple[int, int], list[tuple[int, LaurentPoly]]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violated

    def __str__(self):
        return (f"I5 verified={self.verified} violated={len(self.violated)} "
                f"inconclusive={len(self.inconclusive)}")


def i5_certificate(d: InductionDatum, ex: Expander, order: Preorder, k: int, y: int):
    """Greedy certificate for one (v, y): returns (corrections, witness or None).

    Leaders of nonnegative degree are peeled off by decreasing length, each
    by the nonnegative part of its coefficient times T_x C_u.
    """
    g = d.group
    v = d.U[k]
    yv = g.mul(y, v)
    c = dict(ex.tc(yv))
    c[yv] = c[yv] - LaurentPoly({0: 1})
    if not c[yv]:
        del c[yv]
    corrections: list[tuple[int, LaurentPoly]] = []
    done: set[int] = set()
    while True:
        live = [z for z, p in c.items() if z not in done and not p.in_strictly_negative()]
        if not live:
            return corrections, None
        top = max(g.length_of(z) for z in live)
        for z in sorted(z for z in live if g.length_of(z) == top):
            done.add(z)
            u = d.owner.get(z)
            if u is None:
                raise TruncationError(f"{g.name(z)} is not covered")
            if z == yv or not order.leq(u, k) or not g.bruhat_leq(z, yv):
                return corrections, f"T_{g.name(z)} with coefficient {c[z]} in T_{g.name(y)} C_{g.name(v)}"
            a = c[z].nonnegative_part()
            corrections.append((z, a))
            for w, q in ex.tc(z).items():
                nv = c.get(w, ZERO) - a * q
                if nv:
                    c[w] = nv
                else:
                    c.pop(w, None)


def check_I5(d: InductionDatum, order: Preorder | None = None, expander: Expander | None = None) -> I5Report:
    """Check I5 for every v in U and y in X_v with y v inside the ball."""
    g = d.group
    ex = expander or Expander(d)
    order = order or preorder_on_U(d, ex)
    rep = I5Report()
    for k, (v, X) in enumerate(zip(d.U, d.X)):
        for y in sorted(X):
            if g.length_of(y) + g.length_of(v) > d.radius:
                continue
            try:
                corr, witness = i5_certificate(d, ex, order, k, y)
            except TruncationError as err:
                rep.inconclusive.append(f"{d.name(k)} y={g.name(y)}: {err}")
                continue
            if witness is not None:
                rep.violated.append(f"{d.name(k)} y={g.name(y)}: {witness}")
                continue
            rep.verified += 1
            if corr:
                rep.corrections[(k, y)] = corr
    return rep


# -- consequences ----------------------------------------------------------------------


def check_ideals(d: InductionDatum, order: Preorder, trusted: int, links: LinkData | None = None) -> ConditionReport:
    """Every principal down-set of U spans a set closed under left links.

    Unions of left ideals are left ideals, so principal down-sets cover
    every downward-closed subset of U.
    """
    g = d.group
    links = links or link_data(d.L, d.radius)
    inner = g.ball_size(trusted)
    bad = []
    for k in range(len(d.U)):
        below = order.below(k)
        for w in range(inner):
            if d.owner.get(w) not in below:
                continue
            for z in links.left_targets(w):
                if z < inner and d.owner.get(z) not in below:
                    bad.append(f"{g.name(z)} <=_L {g.name(w)} leaves the ideal of {d.name(k)}")
                    break
    return ConditionReport("ideal", not bad, bad)


def check_itsc(tp: TildePartition, trusted: int) -> tuple[ConditionReport, list[str]]:
    """T_i^-1 meets T_j for all left components T_i, T_j of each c~_k.

    Returns the report and the list of pairs left open by the ball (a pair
    without a witness in the ball is inconclusive, not a violation).
    """
    g = tp.group
    inner = set(range(g.ball_size(trusted)))
    open_pairs = []
    for k, comps in enumerate(tp.left_components):
        parts = [c.elements & inner for c in comps]
        inv = [{g.inv(w) for w in p} for p in parts]
        for i in range(len(parts)):
            for j in range(len(parts)):
                if not inv[i] & parts[j]:
                    open_pairs.append(f"c{k}^{comps[i].index + 1} / c{k}^{comps[j].index + 1}")
    return ConditionReport("itsc", not open_pairs, []), open_pairs
