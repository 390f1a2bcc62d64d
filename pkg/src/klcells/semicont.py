"""Semicontinuity of cells in the parameters, checked on a finite ball.

Three checks on computed partitions:

* constancy: every sample point of a facet gives the same partition;
* prediction: the partition on a facet F is the finest common coarsening
  of the partitions on the chambers around F whose blocks are unions of
  W_F-orbits (W_F generated by the s with L(s) = 0 on F);
* essential hyperplanes: a candidate hyperplane is essential when chambers
  on its two sides carry different partitions, or when the prediction on a
  facet inside it differs from the adjacent chamber.

Weights with negative entries give the same cells as their absolute values,
so a hyperplane is examined through every sign flip that brings part of it
into the open positive orthant.  All evidence is restricted to a trusted
ball: "differ" means differ there, and "equal" only means equal at that
radius.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

from .cellalgo import tilde_partition
from .cells import cells_of_kind
from .coxeter import CoxeterGroup, get_group
from .weights import (
    Facet,
    Hyperplane,
    WeightFunction,
    default_box,
    enumerate_facets,
    parabolic_of_facet,
)

__all__ = [
    "Partitions",
    "partitions_at",
    "check_constancy",
    "ConstancyVerdict",
    "join_partitions",
    "orbit_closure",
    "predict_facet_partition",
    "FacetReport",
    "EssentialReport",
    "essential_report",
    "essential_hyperplanes",
    "flip",
]

Method = Literal["cells", "algorithm"]
Blocks = frozenset  # frozenset[frozenset[int]]


@dataclass(frozen=True)
class Partitions:
    """Left and two-sided partitions of ball(trusted) at one weight."""

    params: tuple[int, ...]
    trusted: int
    left: Blocks
    two_sided: Blocks

    def differs(self, other: "Partitions") -> str | None:
        if self.two_sided != other.two_sided:
            return "two-sided"
        if self.left != other.left:
            return "left"
        return None


_CACHE: dict[tuple, Partitions] = {}


def partitions_at(
    group: str | CoxeterGroup,
    params: Sequence[int],
    R: int,
    trusted: int,
    method: Method = "cells",
) -> Partitions:
    """Partitions of ball(trusted) from brute-force cells on ball(R), or from
    the algorithm when ``method="algorithm"``."""
    g = group if isinstance(group, CoxeterGroup) else get_group(group)
    params = tuple(int(x) for x in params)
    key = (g.preset.name, params, R, trusted, method)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    L = WeightFunction.from_params(g, params)
    if not L.positive:
        raise ValueError("partitions need positive weights; normalize signs first")
    if method == "cells":
        left = cells_of_kind("left", R, L, trusted).as_sets()
        two = cells_of_kind("two-sided", R, L, trusted).as_sets()
    elif method == "algorithm":
        tp = tilde_partition(g, L, R, trusted)
        left = tp.left(trusted).as_sets()
        two = tp.two_sided(trusted).as_sets()
    else:
        raise ValueError(f"unknown method {method!r}")
    out = _CACHE[key] = Partitions(params, trusted, frozenset(left), frozenset(two))
    return out


# -- constancy ---------------------------------------------------------------------------


@dataclass
class ConstancyVerdict:
    facet: str
    samples: list[tuple[int, ...]]
    equal: bool
    witness: str = ""

    def __str__(self):
        if self.equal:
            return f"{self.facet}: equal at the trusted radius on {self.samples}"
        return f"{self.facet}: differ ({self.witness})"


def _first_difference(g: CoxeterGroup, a: Partitions, b: Partitions) -> str:
    kind = a.differs(b)
    if kind is None:
        return ""
    pa = a.two_sided if kind == "two-sided" else a.left
    pb = b.two_sided if kind == "two-sided" else b.left
    blk = min(pa - pb, key=lambda s: (min(g.length_of(w) for w in s), sorted(s)))
    names = sorted((g.name(w) for w in blk), key=lambda s: (len(s), s))[:6]
    return f"{kind} block {{{', '.join(names)}{', ...' if len(blk) > 6 else ''}}} at {a.params} not at {b.params}"


def check_constancy(
    F: Facet,
    group: str | CoxeterGroup,
    R: int,
    trusted: int,
    method: Method = "cells",
    samples: Sequence[Sequence[int]] | None = None,
) -> ConstancyVerdict:
    g = group if isinstance(group, CoxeterGroup) else get_group(group)
    pts = [tuple(p) for p in (samples if samples is not None else F.sample_points)]
    pts = [p for p in pts if all(x > 0 for x in p)]
    if len(pts) < 2:
        raise ValueError(f"facet {F.label()} needs two positive sample points")
    parts = [partitions_at(g, p, R, trusted, method) for p in pts]
    for p in parts[1:]:
        if parts[0].differs(p):
            return ConstancyVerdict(F.label(), pts, False, _first_difference(g, parts[0], p))
    return ConstancyVerdict(F.label(), pts, True)


# -- prediction on a facet ---------------------------------------------------------------


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def blocks(self) -> frozenset:
        out: dict[int, set[int]] = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return frozenset(frozenset(b) for b in out.values())


def join_partitions(parts: Sequence[Blocks], shuffle_seed: int | None = None) -> Blocks:
    """Finest common coarsening; ``shuffle_seed`` permutes the merge order."""
    ground = set().union(*(set().union(*p) for p in parts)) if parts else set()
    uf = _UnionFind(sorted(ground))
    seq = [(i, b) for i, p in enumerate(parts) for b in sorted(p, key=min)]
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(seq)
    for _, b in seq:
        it = iter(b)
        first = next(it)
        for x in it:
            uf.union(first, x)
    return uf.blocks()


def orbit_closure(
    g: CoxeterGroup,
    blocks: Blocks,
    WF: frozenset[int],
    kind: Literal["left", "two-sided"],
    shuffle_seed: int | None = None,
) -> Blocks:
    """Merge w with s w (and w s for two-sided) for s in W_F, inside the ground set."""
    ground = set().union(*blocks) if blocks else set()
    uf = _UnionFind(sorted(ground))
    for b in blocks:
        it = iter(b)
        first = next(it)
        for x in it:
            uf.union(first, x)
    pairs = []
    for w in sorted(ground):
        for s in sorted(WF):
            for z in ([g.lmul(s, w)] + ([g.rmul(w, s)] if kind == "two-sided" else [])):
                if z in ground:
                    pairs.append((w, z))
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(pairs)
    for a, b in pairs:
        uf.union(a, b)
    return uf.blocks()


def predict_facet_partition(
    F: Facet,
    group: str | CoxeterGroup,
    R: int,
    trusted: int,
    method: Method = "cells",
) -> Partitions:
    """The coarsest-needed prediction on F from its adjacent chambers."""
    g = group if isinstance(group, CoxeterGroup) else get_group(group)
    if F.is_chamber:
        return partitions_at(g, F.sample_points[0], R, trusted, method)
    chambers = [C for C in F.adjacent_chambers if C.positive]
    if not chambers:
        raise ValueError(f"facet {F.label()} has no adjacent positive chamber")
    parts = [partitions_at(g, C.sample_points[0], R, trusted, method) for C in chambers]
    WF = parabolic_of_facet(F, g)
    left = orbit_closure(g, join_partitions([p.left for p in parts]), WF, "left")
    two = orbit_closure(g, join_partitions([p.two_sided for p in parts]), WF, "two-sided")
    return Partitions(F.sample_points[0], trusted, left, two)


# -- essential hyperplanes ---------------------------------------------------------------


def flip(h: Hyperplane, eps: Sequence[int]) -> Hyperplane:
    return Hyperplane(tuple(n * e for n, e in zip(h.normal, eps)))


def _meets_positive_orthant(h: Hyperplane) -> bool:
    return any(x > 0 for x in h.normal) and any(x < 0 for x in h.normal)


@dataclass
class FacetReport:
    facet: str
    samples: list[tuple[int, ...]]
    constancy: ConstancyVerdict | None
    adjacent: list[str]
    prediction_matches: bool | None = None

    def to_dict(self) -> dict:
        return {
            "facet": self.facet,
            "samples": [list(p) for p in self.samples],
            "constant": None if self.constancy is None else self.constancy.equal,
            "witness": "" if self.constancy is None else self.constancy.witness,
            "adjacent_chambers": self.adjacent,
            "prediction_matches": self.prediction_matches,
        }


@dataclass
class EssentialReport:
    group: str
    radius: int
    trusted: int
    candidates: list[Hyperplane]
    essential: list[Hyperplane] = field(default_factory=list)
    evidence: dict[Hyperplane, str] = field(default_factory=dict)
    unexamined: list[Hyperplane] = field(default_factory=list)
    facets: list[FacetReport] = field(default_factory=list)
    constancy_failures: list[str] = field(default_factory=list)

    @property
    def non_essential(self) -> list[Hyperplane]:
        return [h for h in self.candidates if h not in self.essential and h not in self.unexamined]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "group": self.group,
            "radius": self.radius,
            "trusted": self.trusted,
            "essential": [str(h) for h in self.essential],
            "non_essential": [str(h) for h in self.non_essential],
            "unexamined": [str(h) for h in self.unexamined],
            "evidence": {str(h): e for h, e in sorted(self.evidence.items())},
            "constancy_failures": self.constancy_failures,
            "facets": [f.to_dict() for f in self.facets],
            "note": "ball evidence can refute but never confirm; equal means equal at the trusted radius",
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def to_markdown(self) -> str:
        lines = [
            f"# Semicontinuity report: {self.group}, R={self.radius}, trusted={self.trusted}",
            "",
            "Ball evidence can refute but never confirm; \"equal\" means equal at the trusted radius.",
            "",
            "| hyperplane | verdict | evidence |",
            "|---|---|---|",
        ]
        for h in self.candidates:
            if h in self.essential:
                verdict = "essential"
            elif h in self.unexamined:
                verdict = "not examined"
            else:
                verdict = "not essential"
            lines.append(f"| {h} | {verdict} | {self.evidence.get(h, '')} |")
        if self.constancy_failures:
            lines += ["", "## Constancy failures", ""] + [f"- {c}" for c in self.constancy_failures]
        return "\n".join(lines) + "\n"


def essential_report(
    candidates: Sequence[Hyperplane],
    group: str | CoxeterGroup,
    R: int,
    trusted: int,
    *,
    box: int | None = None,
    method: Method = "cells",
) -> EssentialReport:
    g = group if isinstance(group, CoxeterGroup) else get_group(group)
    cand = sorted(set(candidates))
    rep = EssentialReport(g.preset.name, R, trusted, cand)
    if not cand:
        return rep
    dim = len(cand[0].normal)
    box = box or default_box(dim)
    coords = [Hyperplane(tuple(1 if j == i else 0 for j in range(dim))) for i in range(dim)]
    examined: set[Hyperplane] = set()
    checked_chambers: set[tuple] = set()
    # flips up to a global sign
    flips = [e for e in itertools.product((1, -1), repeat=dim) if e[0] == 1]
    for eps in flips:
        image = {flip(h, eps): h for h in cand}
        arr = sorted(set(image) | set(coords))
        facets = enumerate_facets(arr, box)
        chambers = [C for C in facets if C.is_chamber and C.positive]
        # constancy on every chamber before comparing chambers
        for C in chambers:
            key = tuple(C.sample_points)
            if key in checked_chambers:
                continue
            checked_chambers.add(key)
            v = check_constancy(C, g, R, trusted, method)
            rep.facets.append(FacetReport(C.label(), list(C.sample_points), v, []))
            if not v.equal:
                rep.constancy_failures.append(str(v))
        for F in facets:
            if F.is_chamber or F.dimension != dim - 1:
                continue
            (hz,) = [h for h in F.zero_set]
            orig = image.get(hz)
            if orig is None:
                continue
            adj = [C for C in F.adjacent_chambers if C.positive]
            if hz.is_coordinate:
                if len(adj) != 1:
                    continue
                examined.add(orig)
                C = adj[0]
                pc = partitions_at(g, C.sample_points[0], R, trusted, method)
                pred = predict_facet_partition(F, g, R, trusted, method)
                same = pc.differs(pred) is None
                rep.facets.append(FacetReport(F.label() or str(hz), list(F.sample_points), None,
                                              [C.label()], same))
                if not same and orig not in rep.evidence:
                    rep.evidence[orig] = f"prediction on {hz}=0 next to {C.sample_points[0]} is coarser"
                continue
            if not F.positive or len(adj) != 2 or not _meets_positive_orthant(hz):
                continue
            examined.add(orig)
            p1 = partitions_at(g, adj[0].sample_points[0], R, trusted, method)
            p2 = partitions_at(g, adj[1].sample_points[0], R, trusted, method)
            if p1.differs(p2) and orig not in rep.evidence:
                rep.evidence[orig] = _first_difference(g, p1, p2) + (
                    f" (through sign flip {eps})" if any(e < 0 for e in eps) else ""
                )
    rep.essential = [h for h in cand if h in rep.evidence]
    rep.unexamined = [h for h in cand if h not in examined]
    return rep


def essential_hyperplanes(
    candidates: Sequence[Hyperplane],
    group: str | CoxeterGroup,
    R: int,
    trusted: int,
    *,
    box: int | None = None,
    method: Method = "cells",
) -> list[Hyperplane]:
    """Candidates separating chambers with different partitions on the ball."""
    return essential_report(candidates, group, R, trusted, box=box, method=method).essential
