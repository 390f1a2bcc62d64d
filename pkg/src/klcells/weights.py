"""Weight functions on Coxeter generators, and rational hyperplane
arrangements in the space of class parameters.

A weight function is given by one integer per conjugacy class of
generators.  For G2~ the classes are {s1}, {s2, s3}; for B2~ they are {s1},
{s2}, {s3}; for I2(m) with m even (and A1~) {s1}, {s2}; for m odd there is a
single class.  Parameter vectors are indexed by those classes.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .coxeter import CoxeterGroup, get_group

__all__ = [
    "WeightFunction",
    "weight_of_element",
    "normalize_signs",
    "Hyperplane",
    "Signature",
    "Facet",
    "UndersampledFacets",
    "classify_point",
    "enumerate_facets",
    "parabolic_of_facet",
    "builtin_arrangement",
    "load_arrangement",
    "BUILTIN_ARRANGEMENTS",
]


@dataclass(frozen=True)
class WeightFunction:
    """Integer weight per generator, constant on generator classes."""

    group_name: str
    values: tuple[int, ...]
    flipped: tuple[int, ...] = ()  # class indices whose sign was flipped

    def __post_init__(self):
        g = self.group
        if len(self.values) != g.rank:
            raise ValueError(f"need {g.rank} generator weights, got {len(self.values)}")
        for cls in g.preset.conjugacy_classes:
            if len({self.values[s] for s in cls}) != 1:
                raise ValueError(
                    f"weights {self.values} not constant on class "
                    f"{[s + 1 for s in cls]}"
                )

    @classmethod
    def from_params(cls, group: str | CoxeterGroup, params: Sequence[int]) -> "WeightFunction":
        """Build from one value per generator class (e.g. (a, b) for G2~)."""
        g = group if isinstance(group, CoxeterGroup) else get_group(group)
        classes = g.preset.conjugacy_classes
        if len(params) == g.rank and len(classes) != g.rank:
            # a full per-generator vector was given
            return cls(g.preset.name, tuple(int(x) for x in params))
        if len(params) != len(classes):
            raise ValueError(
                f"{g.preset.name} has {len(classes)} generator classes, got {len(params)} parameters"
            )
        vals = [0] * g.rank
        for p, c in zip(params, classes):
            for s in c:
                vals[s] = int(p)
        return cls(g.preset.name, tuple(vals))

    @property
    def group(self) -> CoxeterGroup:
        return get_group(self.group_name)

    @property
    def params(self) -> tuple[int, ...]:
        return tuple(self.values[c[0]] for c in self.group.preset.conjugacy_classes)

    @property
    def positive(self) -> bool:
        return all(x > 0 for x in self.values)

    def __getitem__(self, s: int) -> int:
        return self.values[s]

    def of_index(self, w: int) -> int:
        return sum(self.values[s] for s in self.group.word_of(w))

    def N(self) -> int:
        """max L(w_I) over finite standard parabolic subgroups."""
        g = self.group
        best = 0
        for k in range(1, g.rank + 1):
            for I in itertools.combinations(g.S, k):
                if g.parabolic_is_finite(I):
                    best = max(best, self.of_index(g.longest_element(I)))
        return best

    def key(self) -> tuple:
        return (self.group_name, self.values)

    def __str__(self):
        return f"{self.group_name}{self.params}"


def weight_of_element(L: WeightFunction, g) -> int:
    """L(g), summed over the canonical reduced word."""
    return L.of_index(g.index if hasattr(g, "index") else g)


def normalize_signs(L: WeightFunction) -> WeightFunction:
    """Replace each class value by its absolute value, remembering flips."""
    classes = L.group.preset.conjugacy_classes
    flipped = set(L.flipped)
    params = []
    for i, c in enumerate(classes):
        x = L.values[c[0]]
        if x < 0:
            flipped.add(i)
        params.append(abs(x))
    out = WeightFunction.from_params(L.group, params)
    return WeightFunction(out.group_name, out.values, tuple(sorted(flipped)))


# ---------------------------------------------------------------------------
# hyperplane arrangements


@dataclass(frozen=True, order=True)
class Hyperplane:
    """{x : <normal, x> = 0}, normal gcd-reduced with first nonzero entry > 0."""

    normal: tuple[int, ...]

    def __post_init__(self):
        n = tuple(int(x) for x in self.normal)
        if not any(n):
            raise ValueError("hyperplane normal must be nonzero")
        g = math.gcd(*n)
        first = next(x for x in n if x)
        sgn = 1 if first > 0 else -1
        object.__setattr__(self, "normal", tuple(sgn * x // g for x in n))

    def side(self, p: Sequence[int]) -> int:
        d = sum(a * b for a, b in zip(self.normal, p))
        return (d > 0) - (d < 0)

    @property
    def is_coordinate(self) -> bool:
        return sum(1 for x in self.normal if x) == 1

    def __str__(self):
        return "H(" + ",".join(str(x) for x in self.normal) + ")"


@dataclass(frozen=True)
class Signature:
    signs: tuple[int, ...]

    def zero_set(self, arr: Sequence[Hyperplane]) -> frozenset[Hyperplane]:
        return frozenset(h for h, s in zip(arr, self.signs) if s == 0)

    @property
    def is_chamber(self) -> bool:
        return all(self.signs)

    def in_closure_of(self, other: "Signature") -> bool:
        """Every strict sign of self is shared by other."""
        return all(a == 0 or a == b for a, b in zip(self.signs, other.signs))


@dataclass
class Facet:
    arrangement: tuple[Hyperplane, ...]
    signature: Signature
    dimension: int
    points: list[tuple[int, ...]] = field(repr=False)
    sample_points: list[tuple[int, ...]]
    adjacent_chambers: list["Facet"] = field(default_factory=list, repr=False)

    @property
    def zero_set(self) -> frozenset[Hyperplane]:
        return self.signature.zero_set(self.arrangement)

    @property
    def side_signs(self) -> dict[Hyperplane, int]:
        return {h: s for h, s in zip(self.arrangement, self.signature.signs) if s}

    @property
    def is_chamber(self) -> bool:
        return self.signature.is_chamber

    @property
    def undersampled(self) -> bool:
        return self.dimension >= 1 and len(self.sample_points) < 2

    @property
    def positive(self) -> bool:
        """True when the facet lies in the open positive orthant."""
        return all(x > 0 for x in self.points[0])

    def label(self) -> str:
        parts = []
        for h, s in zip(self.arrangement, self.signature.signs):
            if not h.is_coordinate:
                parts.append(f"{h}{'=' if s == 0 else ('>' if s > 0 else '<')}0")
        return " ".join(parts) or "all"


class UndersampledFacets(ValueError):
    """Raised when a facet in the box has fewer than two sample points."""

    def __init__(self, facets):
        self.facets = facets
        super().__init__(
            "box too small to sample facets: "
            + "; ".join(f"{f.label()} ({len(f.points)} point)" for f in facets)
        )


def classify_point(arr: Sequence[Hyperplane], p: Sequence[int]) -> Signature:
    return Signature(tuple(h.side(p) for h in arr))


def is_complete(arr: Sequence[Hyperplane], dim: int) -> bool:
    normals = {h.normal for h in arr}
    return all(tuple(1 if j == i else 0 for j in range(dim)) in normals for i in range(dim))


def _pick_samples(points: list[tuple[int, ...]], k: int = 2) -> list[tuple[int, ...]]:
    # prefer primitive vectors with small entries
    def score(p):
        g = math.gcd(*p) if any(p) else 0
        return (g != 1, max(p), sum(p), p)

    prim = sorted(points, key=score)
    out: list[tuple[int, ...]] = []
    for p in prim:
        if len(out) == k:
            break
        # avoid scalar multiples of an already chosen point
        if any(_proportional(p, q) for q in out):
            continue
        out.append(p)
    if len(out) < k:
        for p in prim:
            if p not in out and len(out) < k:
                out.append(p)
    return out


def _proportional(p, q) -> bool:
    return all(p[i] * q[j] == p[j] * q[i] for i in range(len(p)) for j in range(len(p)))


def enumerate_facets(
    arr: Sequence[Hyperplane],
    box_radius: int,
    *,
    samples: int = 2,
    strict: bool = False,
) -> list[Facet]:
    """Facets meeting the closed positive orthant, found by scanning [0, R]^m.

    Each facet records up to ``samples`` integer sample points.  With
    ``strict`` an ``UndersampledFacets`` error lists the facets of positive
    dimension that have a single lattice point in the box.
    """
    arr = tuple(arr)
    dim = len(arr[0].normal)
    if not is_complete(arr, dim):
        raise ValueError("arrangement must contain every coordinate hyperplane")
    groups: dict[Signature, list[tuple[int, ...]]] = {}
    for p in itertools.product(range(box_radius + 1), repeat=dim):
        groups.setdefault(classify_point(arr, p), []).append(p)
    facets = []
    for sig, pts in groups.items():
        d = int(np.linalg.matrix_rank(np.array(pts, dtype=float))) if any(map(any, pts)) else 0
        facets.append(Facet(arr, sig, d, pts, _pick_samples(pts, samples)))
    facets.sort(key=lambda f: (-f.dimension, f.signature.signs))
    chambers = [f for f in facets if f.is_chamber]
    for f in facets:
        f.adjacent_chambers = [c for c in chambers if f.signature.in_closure_of(c.signature)]
    bad = [f for f in facets if f.undersampled]
    if strict and bad:
        raise UndersampledFacets(bad)
    return facets


def parabolic_of_facet(F: Facet, group: str | CoxeterGroup) -> frozenset[int]:
    """Generators s with L(s) = 0 on the whole facet (0-based indices)."""
    g = group if isinstance(group, CoxeterGroup) else get_group(group)
    classes = g.preset.conjugacy_classes
    zero = {i for i in range(len(classes)) if all(p[i] == 0 for p in F.points)}
    return frozenset(s for i in zero for s in classes[i])


def _with_signs(*patterns: tuple[int, ...]) -> list[Hyperplane]:
    out = set()
    for pat in patterns:
        nz = [i for i, x in enumerate(pat) if x]
        for signs in itertools.product((1, -1), repeat=len(nz)):
            n = list(pat)
            for i, s in zip(nz, signs):
                n[i] *= s
            out.add(Hyperplane(tuple(n)))
    return sorted(out)


BUILTIN_ARRANGEMENTS = {
    "g2-essential": ("g2", _with_signs((1, 0), (0, 1), (1, 1), (2, 3), (1, 2))),
    "b2-essential": (
        "b2",
        _with_signs(
            (1, 0, 0), (0, 1, 0), (0, 0, 1),
            (1, 1, 0), (0, 1, 1), (1, 0, 1),
            (1, 1, 1), (1, 2, 1),
        ),
    ),
}


def builtin_arrangement(name: str) -> list[Hyperplane]:
    try:
        return list(BUILTIN_ARRANGEMENTS[name][1])
    except KeyError:
        raise ValueError(f"unknown arrangement {name!r}; have {sorted(BUILTIN_ARRANGEMENTS)}")


def load_arrangement(path_or_name: str) -> list[Hyperplane]:
    """A built-in name, or a JSON file holding a list of integer normals
    (optionally under the key "hyperplanes")."""
    if path_or_name in BUILTIN_ARRANGEMENTS:
        return builtin_arrangement(path_or_name)
    data = json.loads(Path(path_or_name).read_text())
    if isinstance(data, dict):
        data = data["hyperplanes"]
    return sorted({Hyperplane(tuple(n)) for n in data})


def default_box(dim: int) -> int:
    return 30 if dim <= 2 else 12
