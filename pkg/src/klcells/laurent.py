"""Exact Laurent polynomials in one variable ``v`` over the integers.

Coefficients are Python ints, so arithmetic never overflows.  Values are
immutable and hashable.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

__all__ = ["LaurentPoly", "ZERO", "ONE", "V", "mono"]

_TERM = re.compile(r"^(\d*)(v(\^(-?\d+))?)?$")


class LaurentPoly:
    """Sparse element of Z[v, v^-1] stored as ``{exponent: coefficient}``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for e, k in items:
            if k:
                c[int(e)] = c.get(int(e), 0) + int(k)
        self._c = {e: k for e, k in sorted(c.items()) if k}
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPoly":
        # c must already be canonical (no zero entries)
        p = object.__new__(cls)
        p._c = c
        p._hash = None
        return p

    # -- access -----------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, e: int) -> int:
        return self._c.get(e, 0)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int | None:
        """Largest exponent, ``None`` for the zero polynomial."""
        return max(self._c) if self._c else None

    @property
    def valuation(self) -> int | None:
        """Smallest exponent, ``None`` for the zero polynomial."""
        return min(self._c) if self._c else None

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, k in other._c.items():
            s = c.get(e, 0) + k
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -k for e, k in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for e1, k1 in self._c.items():
            for e2, k2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + k1 * k2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers only exist for monomials")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v**k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^-1."""
        return LaurentPoly._raw({-e: k for e, k in sorted(self._c.items(), reverse=True)})

    # -- filtration -------------------------------------------------------
    def in_strictly_negative(self) -> bool:
        """Membership in v^-1 Z[v^-1]."""
        return all(e <= -1 for e in self._c)

    def in_nonpositive(self) -> bool:
        """Membership in Z[v^-1]."""
        return all(e <= 0 for e in self._c)

    def negative_part(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: k for e, k in self._c.items() if e < 0})

    def nonnegative_part(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: k for e, k in self._c.items() if e >= 0})

    def is_bar_invariant(self) -> bool:
        return all(self._c.get(-e, 0) == k for e, k in self._c.items())

    # -- comparison / hashing ------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._c.items())))
        return self._hash

    # -- text ---------------------------------------------------------------
    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, k in sorted(self._c.items(), reverse=True):
            mag = abs(k)
            if e == 0:
                body = str(mag)
            else:
                var = "v" if e == 1 else f"v^{e}"
                body = var if mag == 1 else f"{mag}{var}"
            parts.append(("-" if k < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse forms like ``"3v^2 - v^-4 + 1"`` (also accepts ``*`` and ``**``)."""
        s = text.replace(" ", "").replace("**", "^").replace("*", "")
        if s in ("", "0"):
            return ZERO
        if s[0] not in "+-":
            s = "+" + s
        s = s.replace("^-", "^~")
        c: dict[int, int] = {}
        for sign, term in re.findall(r"([+-])([^+-]+)", s):
            m = _TERM.match(term.replace("~", "-"))
            if not m or (not m.group(1) and not m.group(2)):
                raise ValueError(f"cannot parse Laurent term {term!r} in {text!r}")
            k = int(m.group(1)) if m.group(1) else 1
            if m.group(2):
                e = int(m.group(4)) if m.group(4) is not None else 1
            else:
                e = 0
            c[e] = c.get(e, 0) + (k if sign == "+" else -k)
        return cls(c)


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly._raw({0: x} if x else {})
    return NotImplemented


def mono(e: int, k: int = 1) -> LaurentPoly:
    """The monomial ``k * v**e``."""
    return LaurentPoly._raw({e: k} if k else {})


ZERO = LaurentPoly()
ONE = mono(0)
V = mono(1)
