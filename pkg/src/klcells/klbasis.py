"""Kazhdan-Lusztig basis C_w = T_w + sum_{y<w} P_{y,w} T_y on a ball of radius R.

``KLTable`` solves for the P_{y,w} column by column from the expansion of
bar(T_y): bar-invariance of C_w gives

    P_{x,w} - bar(P_{x,w}) = sum_{x < y <= w} bar(P_{y,w}) r_{x,y}

and P_{x,w} in v^-1 Z[v^-1] makes it the negative part of the right side.
``mu_recursion_table`` rebuilds the same basis from C_s C_{sw} by peeling off
bar-invariant corrections; it shares no code with the solver and serves as
the cross-check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernel
from .coxeter import iter_bits
from .hecke import HeckeAlgebra, HeckeElement, algebra_for
from .laurent import ONE, ZERO, LaurentPoly, mono
from .weights import WeightFunction

__all__ = [
    "KLTable",
    "ProductResult",
    "TruncationError",
    "kl_table",
    "mu_recursion_table",
    "compute_C",
    "structure_constant_left",
    "structure_constant_right",
    "h_full",
]


class TruncationError(ValueError):
    """A computation needed elements beyond the table radius."""


@dataclass
class ProductResult:
    """C-basis expansion of a product; ``complete`` is False when the
    T-support left the ball and the coefficients are only partial."""

    coeffs: dict[int, LaurentPoly]
    complete: bool = True

    def support(self) -> list[int]:
        return sorted(self.coeffs)


def _bar_symmetric_completion(p: LaurentPoly) -> LaurentPoly:
    """The bar-invariant polynomial agreeing with p in degrees >= 0."""
    nn = p.nonnegative_part()
    return nn + nn.bar() - mono(0, p[0])


class KLTable:
    """KL polynomials P_{y,w} for every w of length <= R."""

    def __init__(self, L: WeightFunction, R: int, backend: str | None = None):
        self.L = L
        self.R = R
        self.algebra: HeckeAlgebra = algebra_for(L)
        self.group = self.algebra.group
        self.group.ensure_radius(R)
        self.n = self.group.ball_size(R)
        # a finite group fully inside the ball has no truncation at all
        self.complete = self.n == self.group.size() and self.group.radius == float("inf")
        self.backend = backend or kernel.BACKEND
        self._cols: list[dict[int, LaurentPoly]] = []
        self._build()

    # -- construction -----------------------------------------------------
    def _r_arrays(self):
        col_ptr = [0]
        ent_x, ent_ptr, t_exp, t_coef = [], [0], [], []
        for y in range(self.n):
            col = self.algebra.bar_T(y)
            for x in sorted(col):
                ent_x.append(x)
                for e, c in col[x].items():
                    t_exp.append(e)
                    t_coef.append(c)
                ent_ptr.append(len(t_exp))
            col_ptr.append(len(ent_x))
        as64 = lambda a: np.asarray(a, dtype=np.int64)
        return as64(col_ptr), as64(ent_x), as64(ent_ptr), as64(t_exp), as64(t_coef)

    def _build(self):
        g = self.group
        col_ptr, ent_x, ent_ptr, t_exp, t_coef = self._r_arrays()
        if self.backend == "cython":
            if kernel.compiled_solve_column is None:
                raise RuntimeError("compiled kernel not available")
            scratch = np.zeros(self.n, dtype=np.int64)
            for w in range(self.n):
                interval = np.fromiter(iter_bits(g.lower_interval(w)), dtype=np.int64)
                span = max(self.L.of_index(w), 1)
                out = kernel.compiled_solve_column(
                    w, interval, col_ptr, ent_x, ent_ptr, t_exp, t_coef, span, scratch
                )
                self._store(w, out)
        else:
            lists = [a.tolist() for a in (col_ptr, ent_x, ent_ptr, t_exp, t_coef)]
            for w in range(self.n):
                interval = list(iter_bits(g.lower_interval(w)))
                out = kernel.python_solve_column(w, interval, *lists)
                self._store(w, out)

    def _store(self, w, out):
        col = {x: LaurentPoly(c) for x, c in out}
        col[w] = ONE
        self._cols.append(col)

    # -- access -------------------------------------------------------------
    def _check(self, w: int):
        if not 0 <= w < self.n:
            raise TruncationError(
                f"{self.group.name(w)} has length {self.group.length_of(w)} > radius {self.R}"
            )

    def P(self, y: int, w: int) -> LaurentPoly:
        """P_{y,w}; equals 1 for y = w."""
        self._check(w)
        return self._cols[w].get(y, ZERO)

    def column(self, w: int) -> dict[int, LaurentPoly]:
        """{y: P_{y,w}} including y = w (do not mutate)."""
        self._check(w)
        return self._cols[w]

    def C(self, w: int) -> HeckeElement:
        return HeckeElement(self.algebra, self.column(w))

    def mu(self, y: int, w: int) -> int:
        """Coefficient of v^-1 in P_{y,w}."""
        return self.P(y, w)[-1]

    # -- C-basis ------------------------------------------------------------
    def expand_in_C(self, coeffs: Mapping[int, LaurentPoly], *, check_bar: bool = True) -> dict[int, LaurentPoly]:
        """Rewrite a T-basis expansion in the C-basis by stripping leaders of
        maximal length.  With ``check_bar`` every leader must be bar-invariant."""
        g = self.group
        c = {z: p for z, p in coeffs.items() if p}
        out: dict[int, LaurentPoly] = {}
        by_len: dict[int, set[int]] = {}
        for z in c:
            by_len.setdefault(g.length_of(z), set()).add(z)
        for ell in range(max(by_len, default=-1), -1, -1):
            for z in sorted(by_len.get(ell, ())):
                p = c.pop(z, None)
                if not p:
                    continue
                if z >= self.n:
                    raise TruncationError(f"C_{g.name(z)} is outside the radius {self.R} table")
                if check_bar and not p.is_bar_invariant():
                    raise ArithmeticError(f"leading coefficient {p} at {g.name(z)} is not bar-invariant")
                out[z] = p
                for x, q in self._cols[z].items():
                    if x == z:
                        continue
                    nv = c.get(x, ZERO) - p * q
                    if nv:
                        if x not in c:
                            by_len.setdefault(g.length_of(x), set()).add(x)
                        c[x] = nv
                    else:
                        c.pop(x, None)
        return out

    def left_product(self, s: int, y: int) -> ProductResult:
        """C_s C_y in the C-basis."""
        g = self.group
        if g.length_of(y) >= self.R and not self.complete:
            return ProductResult({}, complete=False)
        col = self.column(y)
        t = self.algebra._ts_left(s, col)
        vinv = mono(-self.L[s])
        for x, p in col.items():
            t[x] = t.get(x, ZERO) + vinv * p
        return ProductResult(self.expand_in_C(t))

    def right_product(self, y: int, s: int) -> ProductResult:
        """C_y C_s, read off C_s C_{y^-1} through the anti-automorphism T_w -> T_{w^-1}."""
        g = self.group
        res = self.left_product(s, g.inv(y))
        return ProductResult({g.inv(z): c for z, c in res.coeffs.items()}, res.complete)

    def right_product_direct(self, y: int, s: int) -> ProductResult:
        """C_y C_s computed with right multiplication in the T-basis."""
        g = self.group
        if g.length_of(y) >= self.R and not self.complete:
            return ProductResult({}, complete=False)
        col = self.column(y)
        t = self.algebra._ts_right(col, s)
        vinv = mono(-self.L[s])
        for x, p in col.items():
            t[x] = t.get(x, ZERO) + vinv * p
        return ProductResult(self.expand_in_C(t))

    def product(self, x: int, y: int) -> ProductResult:
        """C_x C_y in the C-basis (h_{x,y,z})."""
        g = self.group
        if g.length_of(x) + g.length_of(y) > self.R and not self.complete:
            return ProductResult({}, complete=False)
        colx = self.column(x)
        coly = self.column(y)
        total: dict[int, LaurentPoly] = {}
        for u, pu in colx.items():
            c = coly
            for s in reversed(g.word_of(u)):
                c = self.algebra._ts_left(s, c)
            for z, q in c.items():
                total[z] = total.get(z, ZERO) + pu * q
        return ProductResult(self.expand_in_C(total))

    # -- export -------------------------------------------------------------
    def to_json(self) -> list[dict]:
        g = self.group
        rows = []
        for w in range(self.n):
            col = self._cols[w]
            rows.append(
                {
                    "w": g.name(w),
                    "P": [
                        {"y": g.name(y), "poly": str(col[y])}
                        for y in sorted(col)
                        if y != w
                    ],
                }
            )
        return rows

    def dumps(self) -> str:
        return json.dumps({"schema": 1, "group": self.group.preset.name,
                           "weights": list(self.L.params), "radius": self.R,
                           "table": self.to_json()}, indent=1)


_TABLES: dict[tuple, KLTable] = {}


def kl_table(L: WeightFunction, R: int) -> KLTable:
    """Shared table per (weights, radius); a larger cached table is reused."""
    best = None
    for (key, r), t in _TABLES.items():
        if key == L.key() and r >= R and (best is None or r < best.R):
            best = t
    if best is None:
        best = _TABLES[(L.key(), R)] = KLTable(L, R)
    return best


def mu_recursion_table(L: WeightFunction, R: int) -> list[dict[int, LaurentPoly]]:
    """KL basis on ball(R) from C_s C_{sw} minus bar-invariant corrections.

    Returns columns {y: P_{y,w}} indexed by w.  Independent of ``KLTable``:
    it multiplies in the T-basis and peels corrections of maximal length.
    """
    A = algebra_for(L)
    g = A.group
    g.ensure_radius(R)
    n = g.ball_size(R)
    cols: list[dict[int, LaurentPoly]] = [{0: ONE}]
    for w in range(1, n):
        s = g.word_of(w)[0]
        w1 = g.lmul(s, w)
        prev = cols[w1]
        c = A._ts_left(s, prev)
        vinv = mono(-L[s])
        for x, p in prev.items():
            c[x] = c.get(x, ZERO) + vinv * p
        # strip nonnegative-degree parts below w, longest first
        pending = sorted((x for x in c if x != w), key=lambda x: (-g.length_of(x), x))
        seen = set(pending)
        i = 0
        while i < len(pending):
            z = pending[i]
            i += 1
            p = c.get(z, ZERO)
            if not p or p.in_strictly_negative():
                continue
            mu = _bar_symmetric_completion(p)
            for x, q in cols[z].items():
                nv = c.get(x, ZERO) - mu * q
                if nv:
                    c[x] = nv
                else:
                    c.pop(x, None)
                if x not in seen:
                    seen.add(x)
                    pending.append(x)
            pending[i:] = sorted(pending[i:], key=lambda x: (-g.length_of(x), x))
        cols.append(c)
    return cols


# -- module level conveniences ----------------------------------------------


def compute_C(L: WeightFunction, w, R: int | None = None) -> HeckeElement:
    g = L.group
    w = w.index if hasattr(w, "index") else w
    R = g.length_of(w) if R is None else R
    return kl_table(L, R).C(w)


def structure_constant_left(L: WeightFunction, s: int, y, R: int) -> ProductResult:
    y = y.index if hasattr(y, "index") else y
    return kl_table(L, R).left_product(s, y)


def structure_constant_right(L: WeightFunction, y, s: int, R: int) -> ProductResult:
    y = y.index if hasattr(y, "index") else y
    return kl_table(L, R).right_product(y, s)


def h_full(L: WeightFunction, x, y, R: int) -> ProductResult:
    x = x.index if hasattr(x, "index") else x
    y = y.index if hasattr(y, "index") else y
    return kl_table(L, R).product(x, y)
