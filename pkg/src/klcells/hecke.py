"""Iwahori-Hecke algebra with unequal parameters, in the standard basis T_w.

With v_s = v^{L(s)} the defining rule is

    T_s T_w = T_{sw}                          if sw > w
    T_s T_w = T_{sw} + (v_s - v_s^-1) T_w     if sw < w

and the bar involution sends v to v^-1 and T_w to T_{w^-1}^-1, where
T_s^-1 = T_s - (v_s - v_s^-1).
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .coxeter import CoxeterGroup
from .laurent import ONE, ZERO, LaurentPoly, mono
from .weights import WeightFunction

__all__ = ["HeckeAlgebra", "HeckeElement", "mul_Ts_left", "mul", "bar", "algebra_for"]


class HeckeElement:
    """Finite sum of coefficient * T_w (or C_w, see ``basis``); zero terms are dropped."""

    __slots__ = ("algebra", "_c", "basis")

    def __init__(self, algebra: "HeckeAlgebra", coeffs: Mapping[int, LaurentPoly] = (), basis: str = "T"):
        self.algebra = algebra
        self.basis = basis
        self._c = {w: c for w, c in dict(coeffs).items() if c}

    # -- access ---------------------------------------------------------------
    def items(self):
        return self._c.items()

    def support(self) -> list[int]:
        return sorted(self._c)

    def coeff(self, w: int) -> LaurentPoly:
        return self._c.get(w, ZERO)

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def as_dict(self) -> dict[int, LaurentPoly]:
        return dict(self._c)

    def max_length(self) -> int:
        g = self.algebra.group
        return max((g.length_of(w) for w in self._c), default=-1)

    # -- linear structure -----------------------------------------------------
    def _check(self, other: "HeckeElement"):
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different Hecke algebras")
        if other.basis != self.basis:
            raise ValueError("cannot mix T-basis and C-basis expansions")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        c = dict(self._c)
        for w, k in other._c.items():
            c[w] = c.get(w, ZERO) + k
        return HeckeElement(self.algebra, c, self.basis)

    def __neg__(self):
        return HeckeElement(self.algebra, {w: -k for w, k in self._c.items()}, self.basis)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: LaurentPoly | int) -> "HeckeElement":
        if isinstance(k, int):
            k = LaurentPoly({0: k})
        return HeckeElement(self.algebra, {w: k * c for w, c in self._c.items()}, self.basis)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return other.algebra is self.algebra and other.basis == self.basis and other._c == self._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def to_json(self) -> dict[str, str]:
        g = self.algebra.group
        return {g.name(w): str(c) for w, c in sorted(self._c.items(), key=lambda kv: (g.length_of(kv[0]), g.word_of(kv[0])))}

    def __str__(self):
        if not self._c:
            return "0"
        g = self.algebra.group
        parts = []
        for w in sorted(self._c, key=lambda x: (-g.length_of(x), g.word_of(x))):
            parts.append(f"({self._c[w]}){self.basis}_{g.name(w)}")
        return " + ".join(parts)

    __repr__ = __str__


class HeckeAlgebra:
    """One (group, weight function) pair with its caches."""

    def __init__(self, L: WeightFunction):
        if not L.positive:
            raise ValueError(f"weight function must be positive, got {L.values}")
        self.L = L
        self.group: CoxeterGroup = L.group
        self._q = [mono(k) - mono(-k) for k in L.values]  # v_s - v_s^-1
        self._bar_cache: dict[int, dict[int, LaurentPoly]] = {0: {0: ONE}}

    def T(self, w: int | str, coeff: LaurentPoly | int = 1) -> HeckeElement:
        if isinstance(w, str):
            w = self.group.parse(w)
        if isinstance(coeff, int):
            coeff = LaurentPoly({0: coeff})
        return HeckeElement(self, {w: coeff})

    def one(self) -> HeckeElement:
        return self.T(0)

    def q(self, s: int) -> LaurentPoly:
        return self._q[s]

    # -- products ---------------------------------------------------------
    def _ts_left(self, s: int, c: Mapping[int, LaurentPoly]) -> dict[int, LaurentPoly]:
        g = self.group
        out: dict[int, LaurentPoly] = {}
        qs = self._q[s]
        for w, k in c.items():
            sw = g.lmul(s, w)
            out[sw] = out.get(sw, ZERO) + k
            if g.length_of(sw) < g.length_of(w):
                out[w] = out.get(w, ZERO) + qs * k
        return {w: k for w, k in out.items() if k}

    def _ts_right(self, c: Mapping[int, LaurentPoly], s: int) -> dict[int, LaurentPoly]:
        g = self.group
        out: dict[int, LaurentPoly] = {}
        qs = self._q[s]
        for w, k in c.items():
            ws = g.rmul(w, s)
            out[ws] = out.get(ws, ZERO) + k
            if g.length_of(ws) < g.length_of(w):
                out[w] = out.get(w, ZERO) + qs * k
        return {w: k for w, k in out.items() if k}

    def mul_Ts_left(self, s: int, h: HeckeElement) -> HeckeElement:
        return HeckeElement(self, self._ts_left(s, h._c))

    def mul_Ts_right(self, h: HeckeElement, s: int) -> HeckeElement:
        return HeckeElement(self, self._ts_right(h._c, s))

    def mul_Tx_left(self, x: int, h: HeckeElement) -> HeckeElement:
        """T_x * h, peeling the reduced word of x from the right."""
        c = h._c
        for s in reversed(self.group.word_of(x)):
            c = self._ts_left(s, c)
        return HeckeElement(self, c)

    def mul(self, h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
        if h1.algebra is not self or h2.algebra is not self:
            raise ValueError("elements belong to different Hecke algebras")
        if h1.basis != "T" or h2.basis != "T":
            raise ValueError("products are computed in the T-basis")
        total: dict[int, LaurentPoly] = {}
        for x, a in h1._c.items():
            c = h2._c
            for s in reversed(self.group.word_of(x)):
                c = self._ts_left(s, c)
            for w, k in c.items():
                total[w] = total.get(w, ZERO) + a * k
        return HeckeElement(self, total)

    def mul_right_oracle(self, h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
        """Same product computed by right multiplication with generators."""
        total: dict[int, LaurentPoly] = {}
        for y, b in h2._c.items():
            c = h1._c
            for s in self.group.word_of(y):
                c = self._ts_right(c, s)
            for w, k in c.items():
                total[w] = total.get(w, ZERO) + k * b
        return HeckeElement(self, total)

    # -- bar involution ---------------------------------------------------
    def bar_T(self, w: int) -> dict[int, LaurentPoly]:
        """bar(T_w) in the T-basis (memoized; do not mutate)."""
        got = self._bar_cache.get(w)
        if got is not None:
            return got
        g = self.group
        s = g.word_of(w)[0]
        rest = self.bar_T(g.lmul(s, w))
        # T_s^-1 * X = T_s X - (v_s - v_s^-1) X
        c = self._ts_left(s, rest)
        qs = self._q[s]
        for y, k in rest.items():
            c[y] = c.get(y, ZERO) - qs * k
        c = {y: k for y, k in c.items() if k}
        self._bar_cache[w] = c
        return c

    def bar(self, h: HeckeElement) -> HeckeElement:
        if h.basis != "T":
            raise ValueError("bar is applied in the T-basis")
        total: dict[int, LaurentPoly] = {}
        for w, a in h._c.items():
            ab = a.bar()
            for y, k in self.bar_T(w).items():
                total[y] = total.get(y, ZERO) + ab * k
        return HeckeElement(self, total)

    def Ts_inverse(self, s: int) -> HeckeElement:
        return HeckeElement(self, {self.group.rmul(0, s): ONE, 0: -self._q[s]})

    def __repr__(self):
        return f"HeckeAlgebra({self.L})"


_ALGEBRAS: dict[tuple, HeckeAlgebra] = {}


def algebra_for(L: WeightFunction) -> HeckeAlgebra:
    """Shared algebra (and caches) per weight function."""
    a = _ALGEBRAS.get(L.key())
    if a is None:
        a = _ALGEBRAS[L.key()] = HeckeAlgebra(L)
    return a


def mul_Ts_left(s: int, h: HeckeElement) -> HeckeElement:
    return h.algebra.mul_Ts_left(s, h)


def mul(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    return h1.algebra.mul(h1, h2)


def bar(h: HeckeElement) -> HeckeElement:
    return h.algebra.bar(h)
