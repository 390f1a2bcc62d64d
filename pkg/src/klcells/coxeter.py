"""Rank-2 Coxeter groups: finite dihedral I2(m), and the affine groups
A1~ (= I2(infinity)), B2~ and G2~.

Elements live in a per-group table that grows by breadth-first search, one
length stratum at a time.  Each element has a ShortLex-minimal reduced word
and an exact key: the canonical word for dihedral groups, and the integer
affine matrix (acting on coroot coordinates of the plane) for B2~ and G2~.
Internally everything is addressed by table index; ``GroupElement`` is the
thin public wrapper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "CoxeterPreset",
    "CoxeterGroup",
    "GroupElement",
    "preset",
    "get_group",
    "INF",
]

INF = 0  # coxeter matrix entry meaning m = infinity


@dataclass(frozen=True)
class CoxeterPreset:
    name: str
    kind: str  # "dihedral" | "affine"
    generators: tuple[str, ...]
    coxeter_matrix: tuple[tuple[int, ...], ...]
    m: int | None = None  # dihedral order parameter (INF for A1~)
    # affine data: simple root Gram matrix of the finite part (integer)
    root_gram: tuple[tuple[int, ...], ...] | None = None
    # figure frame: coordinates of the alcove vertex opposite each wall
    figure_vertices: tuple[tuple[float, float], ...] | None = None

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Generator classes under the odd-bond rule."""
        n = self.rank
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                mij = self.coxeter_matrix[i][j]
                if mij != INF and mij % 2 == 1:
                    parent[find(i)] = find(j)
        classes: dict[int, list[int]] = {}
        for i in range(n):
            classes.setdefault(find(i), []).append(i)
        return tuple(tuple(c) for c in sorted(classes.values()))

    def m_ij(self, i: int, j: int) -> int:
        return self.coxeter_matrix[i][j]


def _dihedral_preset(m: int) -> CoxeterPreset:
    name = "a1" if m == INF else f"i2({m})"
    return CoxeterPreset(
        name=name,
        kind="dihedral",
        generators=("s1", "s2"),
        coxeter_matrix=((1, m), (m, 1)),
        m=m,
    )


_G2 = CoxeterPreset(
    name="g2",
    kind="affine",
    generators=("s1", "s2", "s3"),
    coxeter_matrix=((1, 6, 2), (6, 1, 3), (2, 3, 1)),
    # s1 short, s2 long; s3 is the affine reflection
    root_gram=((2, -3), (-3, 6)),
    figure_vertices=((0.0, 1.0), (math.sqrt(3) / 4, 0.75), (0.0, 0.0)),
)

_B2 = CoxeterPreset(
    name="b2",
    kind="affine",
    generators=("s1", "s2", "s3"),
    coxeter_matrix=((1, 4, 2), (4, 1, 4), (2, 4, 1)),
    # s1 long, s2 short; s3 is the affine reflection
    root_gram=((2, -1), (-1, 1)),
    figure_vertices=((0.0, 1.0), (0.5, 0.5), (0.0, 0.0)),
)


def preset(name: str) -> CoxeterPreset:
    """Look up a preset: ``g2``, ``b2``, ``a1``, ``i2(m)`` (also ``i2:m``)."""
    key = name.strip().lower().replace(" ", "")
    if key in ("g2", "g2~", "affineg2"):
        return _G2
    if key in ("b2", "b2~", "c2", "affineb2"):
        return _B2
    if key in ("a1", "a1~", "affinea1", "i2(inf)", "i2(oo)", "i2:inf"):
        return _dihedral_preset(INF)
    for prefix in ("i2(", "i2:", "dihedral(", "dihedral:"):
        if key.startswith(prefix):
            body = key[len(prefix):].rstrip(")")
            if body in ("inf", "oo", "infinity"):
                return _dihedral_preset(INF)
            m = int(body)
            if m < 2:
                raise ValueError("dihedral order m must be >= 2")
            return _dihedral_preset(m)
    raise ValueError(f"unknown Coxeter group {name!r}")


# ---------------------------------------------------------------------------
# affine root data


@dataclass
class _AffineData:
    positive_roots: list[tuple[int, ...]]  # simple-root coordinates
    forms: list[tuple[int, ...]]  # <alpha, x> as integer row vector on coroot coords
    gens: list[tuple[tuple[int, ...], ...]]  # 3x3 affine matrices (top two rows)
    vertices: list[tuple[Fraction, Fraction]]  # alcove vertex opposite wall i
    centroid: tuple[Fraction, Fraction]


def _affine_data(p: CoxeterPreset) -> _AffineData:
    gram = p.root_gram
    n = len(gram)
    cartan = [[Fraction(2 * gram[i][j], gram[j][j]) for j in range(n)] for i in range(n)]
    # cartan[i][j] = <alpha_i, alpha_j^vee>

    def refl_root(i, c):
        # s_i(alpha) = alpha - <alpha, alpha_i^vee> alpha_i
        pair = sum(c[j] * cartan[j][i] for j in range(n))
        out = list(c)
        out[i] -= int(pair)
        return tuple(out)

    roots = {tuple(1 if j == i else 0 for j in range(n)) for i in range(n)}
    frontier = list(roots)
    while frontier:
        nxt = []
        for c in frontier:
            for i in range(n):
                r = refl_root(i, c)
                if all(x >= 0 for x in r) and any(r) and r not in roots:
                    roots.add(r)
                    nxt.append(r)
        frontier = nxt
    pos = sorted(roots, key=lambda c: (sum(c), c))

    def sqlen(c):
        return sum(c[i] * c[j] * gram[i][j] for i in range(n) for j in range(n))

    def form(c):
        # <alpha, sum x_i alpha_i^vee> = sum_i x_i <alpha, alpha_i^vee>
        return tuple(int(sum(c[j] * cartan[j][i] for j in range(n))) for i in range(n))

    def coroot(c):
        L = sqlen(c)
        out = []
        for j in range(n):
            q = Fraction(c[j] * gram[j][j], L)
            assert q.denominator == 1
            out.append(int(q))
        return tuple(out)

    def reflection(c, k):
        f = form(c)
        d = coroot(c)
        rows = []
        for i in range(n):
            row = [(1 if i == j else 0) - d[i] * f[j] for j in range(n)]
            row.append(k * d[i])
            rows.append(tuple(row))
        return tuple(rows)

    theta = pos[-1]
    gens = [reflection(tuple(1 if j == i else 0 for j in range(n)), 0) for i in range(n)]
    gens.append(reflection(theta, 1))

    walls = [(form(tuple(1 if j == i else 0 for j in range(n))), 0) for i in range(n)]
    walls.append((form(theta), 1))
    vertices = []
    for i in range(3):
        (f1, k1), (f2, k2) = [walls[j] for j in range(3) if j != i]
        det = f1[0] * f2[1] - f1[1] * f2[0]
        x = Fraction(k1 * f2[1] - k2 * f1[1], det)
        y = Fraction(f1[0] * k2 - f2[0] * k1, det)
        vertices.append((x, y))
    cen = (sum(v[0] for v in vertices) / 3, sum(v[1] for v in vertices) / 3)
    return _AffineData(pos, [form(c) for c in pos], gens, vertices, cen)


def _affine_mul(a, b):
    # 3x3 affine matrices stored as their top two rows
    return tuple(
        tuple(
            a[i][0] * b[0][j] + a[i][1] * b[1][j] + (a[i][2] if j == 2 else 0)
            for j in range(3)
        )
        for i in range(2)
    )


_AFFINE_ID = ((1, 0, 0), (0, 1, 0))


def _affine_apply(m, p):
    x, y = p
    return (m[0][0] * x + m[0][1] * y + m[0][2], m[1][0] * x + m[1][1] * y + m[1][2])


# ---------------------------------------------------------------------------
# group table


class CoxeterGroup:
    """Element table of one Coxeter group, extended on demand."""

    def __init__(self, p: CoxeterPreset):
        self.preset = p
        self.rank = p.rank
        self.S = tuple(range(p.rank))
        self._affine = _affine_data(p) if p.kind == "affine" else None
        self._keys: list = []
        self._index: dict = {}
        self._words: list[tuple[int, ...]] = []
        self._length: list[int] = []
        self._rmul: list[list[int]] = [[] for _ in self.S]
        self._lmul: list[list[int]] = [[] for _ in self.S]
        self._level_start: list[int] = []
        self._radius = -1
        self._complete = False
        self._inv: list[int] = []
        self._below: dict[int, int] = {}
        self._add_level([(self._identity_key(), ())])
        self._radius = 0

    # -- keys ---------------------------------------------------------------
    def _identity_key(self):
        return _AFFINE_ID if self._affine else ()

    def _key_right(self, key, s):
        if self._affine:
            return _affine_mul(key, self._affine.gens[s])
        return self._dihedral_mul(key, s, right=True)

    def _key_left(self, s, key):
        if self._affine:
            return _affine_mul(self._affine.gens[s], key)
        return self._dihedral_mul(key, s, right=False)

    def _dihedral_mul(self, word, s, right):
        m = self.preset.m
        k = len(word)
        if m != INF and k == m:
            # longest element: choose the reduced word ending (starting) with s
            if right:
                first = s if m % 2 == 1 else 1 - s
            else:
                first = s
            word = tuple((first + i) % 2 for i in range(m))
        if right:
            if k and word[-1] == s:
                return word[:-1]
            new = word + (s,)
        else:
            if k and word[0] == s:
                return word[1:]
            new = (s,) + word
        if m != INF and len(new) == m:
            new = tuple(i % 2 for i in range(m))
        return new

    # -- BFS ------------------------------------------------------------------
    def _add_level(self, entries):
        self._level_start.append(len(self._keys))
        level = len(self._level_start) - 1
        for key, word in sorted(entries, key=lambda kv: kv[1]):
            idx = len(self._keys)
            self._keys.append(key)
            self._index[key] = idx
            self._words.append(word)
            self._length.append(level)
            for s in self.S:
                self._rmul[s].append(-1)
                self._lmul[s].append(-1)
            self._inv.append(-1)

    def ensure_radius(self, R: int) -> None:
        """Enumerate every element of length <= R."""
        while self._radius < R and not self._complete:
            lo = self._level_start[self._radius]
            hi = len(self._keys)
            found: dict = {}
            for w in range(lo, hi):
                key = self._keys[w]
                for s in self.S:
                    k2 = self._key_right(key, s)
                    j = self._index.get(k2)
                    if j is not None:
                        self._rmul[s][w] = j
                        continue
                    word = self._words[w] + (s,)
                    if k2 not in found or word < found[k2]:
                        found[k2] = word
            if not found:
                self._complete = True
                self._fill_left(lo, hi)
                break
            self._add_level(list(found.items()))
            self._radius += 1
            for w in range(lo, hi):
                key = self._keys[w]
                for s in self.S:
                    if self._rmul[s][w] < 0:
                        j = self._index[self._key_right(key, s)]
                        self._rmul[s][w] = j
                        self._rmul[s][j] = w
            self._fill_left(lo, hi)
            if self.is_finite and self._radius == self.preset.m:
                # the longest element has been reached; its neighbours are all known
                self._complete = True
        self._fill_inverses()

    def _fill_left(self, lo, hi):
        for w in range(lo, hi):
            key = self._keys[w]
            for s in self.S:
                j = self._index[self._key_left(s, key)]
                self._lmul[s][w] = j
                self._lmul[s][j] = w

    def _fill_inverses(self):
        for w in range(len(self._keys)):
            if self._inv[w] < 0:
                x = 0
                for s in reversed(self._words[w]):
                    x = self._rmul[s][x]
                self._inv[w] = x
                self._inv[x] = w

    @property
    def radius(self) -> int:
        """Largest R such that ball(R) is fully enumerated."""
        return math.inf if self._complete else self._radius

    @property
    def is_finite(self) -> bool:
        return self.preset.kind == "dihedral" and self.preset.m != INF

    def size(self) -> int:
        return len(self._keys)

    def ball_size(self, R: int) -> int:
        self.ensure_radius(R)
        if R + 1 < len(self._level_start):
            return self._level_start[R + 1]
        return len(self._keys)

    # -- index level API ----------------------------------------------------
    def length_of(self, w: int) -> int:
        return self._length[w]

    def word_of(self, w: int) -> tuple[int, ...]:
        return self._words[w]

    def key_of(self, w: int):
        return self._keys[w]

    def rmul(self, w: int, s: int) -> int:
        j = self._rmul[s][w]
        if j < 0:
            self.ensure_radius(self._length[w] + 1)
            j = self._rmul[s][w]
        return j

    def lmul(self, s: int, w: int) -> int:
        j = self._lmul[s][w]
        if j < 0:
            self.ensure_radius(self._length[w] + 1)
            j = self._lmul[s][w]
        return j

    def inv(self, w: int) -> int:
        return self._inv[w]

    def mul(self, x: int, y: int) -> int:
        for s in self._words[y]:
            x = self.rmul(x, s)
        return x

    def index_of_word(self, word: Iterable[int]) -> int:
        x = 0
        for s in word:
            x = self.rmul(x, s)
        return x

    def parse(self, text: str) -> int:
        """Index of the element named by a string of 1-based generator digits."""
        text = text.strip()
        if text in ("", "e", "1_0"):
            return 0
        word = []
        for ch in text:
            i = int(ch) - 1
            if not 0 <= i < self.rank:
                raise ValueError(f"bad generator {ch!r} in {text!r}")
            word.append(i)
        return self.index_of_word(word)

    def name(self, w: int) -> str:
        return "".join(str(s + 1) for s in self._words[w]) or "e"

    def right_descents(self, w: int) -> frozenset[int]:
        lw = self._length[w]
        return frozenset(s for s in self.S if self._length[self.rmul(w, s)] < lw)

    def left_descents(self, w: int) -> frozenset[int]:
        lw = self._length[w]
        return frozenset(s for s in self.S if self._length[self.lmul(s, w)] < lw)

    def ball_indices(self, R: int) -> range:
        return range(self.ball_size(R))

    # -- Bruhat order ---------------------------------------------------------
    def bruhat_leq(self, y: int, w: int) -> bool:
        """Subword test: some reduced word of w contains a reduced word of y."""
        return self._subword(y, w)

    @lru_cache(maxsize=None)
    def _subword(self, y: int, w: int) -> bool:
        ly, lw = self._length[y], self._length[w]
        if ly > lw:
            return False
        if ly == 0:
            return True
        if ly == lw:
            return y == w
        s = self._words[w][0]
        w1 = self.lmul(s, w)  # drop first letter
        if self._subword(y, w1):
            return True
        sy = self.lmul(s, y)
        return self._length[sy] < ly and self._subword(sy, w1)

    def lower_interval(self, w: int) -> int:
        """Bitset of {y : y <= w} (bit y set), via y <= w iff min(y, sy) <= sw."""
        b = self._below.get(w)
        if b is not None:
            return b
        if w == 0:
            b = 1
        else:
            s = self._words[w][0]
            sw = self.lmul(s, w)
            base = self.lower_interval(sw)
            b = base
            lm = self._lmul[s]
            for y in iter_bits(base):
                b |= 1 << lm[y]
        self._below[w] = b
        return b

    # -- parabolic subgroups ------------------------------------------------
    def parabolic_is_finite(self, I: Iterable[int]) -> bool:
        I = sorted(set(I))
        if len(I) <= 1:
            return True
        if self.preset.kind == "affine":
            return len(I) < self.rank
        return self.preset.m != INF

    def longest_element(self, I: Iterable[int]) -> int:
        I = sorted(set(I))
        if not self.parabolic_is_finite(I):
            raise ValueError(f"W_I is infinite for I={[i + 1 for i in I]}")
        w = 0
        while True:
            for s in I:
                ws = self.rmul(w, s)
                if self._length[ws] > self._length[w]:
                    w = ws
                    break
            else:
                return w

    def parabolic_elements(self, I: Iterable[int]) -> list[int]:
        """All elements of a finite W_I, BFS order."""
        I = sorted(set(I))
        if not self.parabolic_is_finite(I):
            raise ValueError("W_I is infinite")
        seen = {0}
        order = [0]
        frontier = [0]
        while frontier:
            nxt = []
            for w in frontier:
                for s in I:
                    x = self.rmul(w, s)
                    if x not in seen:
                        seen.add(x)
                        order.append(x)
                        nxt.append(x)
            frontier = nxt
        return sorted(order, key=lambda x: (self._length[x], self._words[x]))

    def parabolic_decompose(self, g: int, I: Iterable[int], side: str = "right") -> tuple[int, int]:
        """g = x*u (side='right', u in W_I, x minimal) or g = u*x (side='left')."""
        I = sorted(set(I))
        if not self.parabolic_is_finite(I):
            raise ValueError("parabolic decomposition needs W_I finite")
        x, u = g, 0
        changed = True
        while changed:
            changed = False
            for s in I:
                if side == "right":
                    xs = self.rmul(x, s)
                    if self._length[xs] < self._length[x]:
                        x, u = xs, self.lmul(s, u)
                        changed = True
                else:
                    sx = self.lmul(s, x)
                    if self._length[sx] < self._length[x]:
                        x, u = sx, self.rmul(u, s)
                        changed = True
        if side == "right":
            return x, u
        return u, x

    # -- geometry -------------------------------------------------------------
    def matrix(self, w: int):
        """Exact integer affine matrix (3x3, last row 0 0 1) of an affine element."""
        if not self._affine:
            raise ValueError("matrices are only kept for affine presets")
        top = self._keys[w]
        return (tuple(top[0]), tuple(top[1]), (0, 0, 1))

    def generator_matrix(self, s: int):
        top = self._affine.gens[s]
        return (tuple(top[0]), tuple(top[1]), (0, 0, 1))

    def alcove_vertices(self, w: int) -> list[tuple[Fraction, Fraction]]:
        """Vertices of w(A0) in coroot coordinates, in the order of the
        generator whose wall they are opposite to."""
        if not self._affine:
            raise ValueError("alcoves are drawn for the planar affine presets only")
        m = self._keys[w]
        return [_affine_apply(m, v) for v in self._affine.vertices]

    def alcove_polygon(self, w: int) -> list[tuple[Fraction, Fraction]]:
        """Exact vertices of w(A0); shares a wall with the alcove of ws."""
        return self.alcove_vertices(w)

    def hyperplanes_separating(self, w: int) -> int:
        """Count affine root hyperplanes between A0 and w(A0)."""
        c = _affine_apply(self._keys[w], self._affine.centroid)
        total = 0
        for f in self._affine.forms:
            val = f[0] * c[0] + f[1] * c[1]
            total += abs(math.floor(val))
        return total

    def figure_transform(self):
        """Affine map (as a function) from coroot coordinates to figure coordinates."""
        src = self._affine.vertices
        dst = self.preset.figure_vertices
        (x0, y0), (x1, y1), (x2, y2) = [(float(a), float(b)) for a, b in src]
        det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)

        def bary(px, py):
            l1 = ((px - x0) * (y2 - y0) - (x2 - x0) * (py - y0)) / det
            l2 = ((x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)) / det
            return 1 - l1 - l2, l1, l2

        def to_fig(p):
            b = bary(float(p[0]), float(p[1]))
            return (
                sum(bi * d[0] for bi, d in zip(b, dst)),
                sum(bi * d[1] for bi, d in zip(b, dst)),
            )

        return to_fig

    def element_at_figure_point(self, fx: float, fy: float, max_steps: int = 500) -> int:
        """Element whose alcove contains the given figure-coordinate point."""
        (X0, Y0), (X1, Y1), (X2, Y2) = self.preset.figure_vertices
        det = (X1 - X0) * (Y2 - Y0) - (X2 - X0) * (Y1 - Y0)
        l1 = ((fx - X0) * (Y2 - Y0) - (X2 - X0) * (fy - Y0)) / det
        l2 = ((X1 - X0) * (fy - Y0) - (fx - X0) * (Y1 - Y0)) / det
        src = [(float(a), float(b)) for a, b in self._affine.vertices]
        p = (
            (1 - l1 - l2) * src[0][0] + l1 * src[1][0] + l2 * src[2][0],
            (1 - l1 - l2) * src[0][1] + l1 * src[1][1] + l2 * src[2][1],
        )
        w = 0
        for _ in range(max_steps):
            verts = [(float(a), float(b)) for a, b in self.alcove_vertices(w)]
            bc = _barycentric(p, verts)
            worst = min(range(3), key=lambda i: bc[i])
            if bc[worst] >= -1e-12:
                return w
            # the wall opposite vertex `worst` belongs to generator `worst`
            w = self.rmul(w, worst)
        raise RuntimeError("point location did not converge")

    # Cell pictures draw w as the alcove of w^-1, so that left multiplication
    # by a generator moves to a neighbouring alcove and left cells are
    # connected regions.
    def picture_polygon(self, w: int) -> list[tuple[float, float]]:
        """Figure coordinates of the alcove that represents w in a cell picture."""
        f = self.figure_transform()
        return [f(p) for p in self.alcove_vertices(self.inv(w))]

    def element_at_picture_point(self, fx: float, fy: float) -> int:
        """Element drawn at a figure point of a cell picture."""
        return self.inv(self.element_at_figure_point(fx, fy))

    # -- wrappers -------------------------------------------------------------
    def element(self, w: int | str | Sequence[int]) -> "GroupElement":
        if isinstance(w, str):
            w = self.parse(w)
        elif not isinstance(w, int):
            w = self.index_of_word(w)
        return GroupElement(self, w)

    @property
    def identity(self) -> "GroupElement":
        return GroupElement(self, 0)

    def generator(self, s: int) -> "GroupElement":
        return GroupElement(self, self.rmul(0, s))

    def ball(self, R: int) -> list["GroupElement"]:
        return [GroupElement(self, w) for w in self.ball_indices(R)]

    def __repr__(self):
        return f"CoxeterGroup({self.preset.name})"


def _barycentric(p, verts):
    (x0, y0), (x1, y1), (x2, y2) = verts
    det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    l1 = ((p[0] - x0) * (y2 - y0) - (x2 - x0) * (p[1] - y0)) / det
    l2 = ((x1 - x0) * (p[1] - y0) - (p[0] - x0) * (y1 - y0)) / det
    return (1 - l1 - l2, l1, l2)


def iter_bits(b: int):
    """Indices of set bits, ascending."""
    while b:
        low = b & -b
        yield low.bit_length() - 1
        b ^= low


_GROUPS: dict[str, CoxeterGroup] = {}


def get_group(name: str | CoxeterPreset) -> CoxeterGroup:
    """Shared group table per preset name."""
    p = name if isinstance(name, CoxeterPreset) else preset(name)
    g = _GROUPS.get(p.name)
    if g is None:
        g = _GROUPS[p.name] = CoxeterGroup(p)
    return g


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of a ``CoxeterGroup``; compares by group and table index."""

    group: CoxeterGroup = field(repr=False)
    index: int

    @property
    def word(self) -> tuple[int, ...]:
        return self.group.word_of(self.index)

    @property
    def length(self) -> int:
        return self.group.length_of(self.index)

    @property
    def matrix(self):
        return self.group.matrix(self.index)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.group is not self.group:
            raise ValueError("cannot multiply elements of different groups")
        g = self.group
        g.ensure_radius(self.length + other.length)
        return GroupElement(g, g.mul(self.index, other.index))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inv(self.index))

    def left_descents(self) -> frozenset[int]:
        return self.group.left_descents(self.index)

    def right_descents(self) -> frozenset[int]:
        return self.group.right_descents(self.index)

    def __le__(self, other: "GroupElement") -> bool:
        return self.group.bruhat_leq(self.index, other.index)

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and other.group is self.group
            and other.index == self.index
        )

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __str__(self):
        return self.group.name(self.index)

    def __repr__(self):
        return f"<{self.group.preset.name}:{self}>"
