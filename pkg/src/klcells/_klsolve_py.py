"""Pure-Python column solver for KL polynomials (fallback for ``_klsolve``).

Both implementations share one data layout.  The coefficients r_{x,y} of
bar(T_y) = sum_x r_{x,y} T_x are stored column by column:

    entries of column y:   k in [col_ptr[y], col_ptr[y+1])
    row element:           ent_x[k]
    terms of r_{x,y}:      j in [ent_ptr[k], ent_ptr[k+1]), v^t_exp[j] * t_coef[j]

For one w, ``interval`` lists {x : x <= w} in increasing table order (so
increasing length, with w last).  The solver walks it backwards.  At slot y
the accumulated sum S_y = sum_{y < z <= w} bar(P_{z,w}) r_{y,z} equals
P_{y,w} - bar(P_{y,w}); P_{y,w} is its strictly negative part.
"""

from __future__ import annotations


class AntisymmetryError(ArithmeticError):
    """S_y failed to be bar-antisymmetric, so no solution exists."""


def solve_column(w, interval, col_ptr, ent_x, ent_ptr, t_exp, t_coef):
    """Return [(x, {exp: coeff}), ...] for the nonzero P_{x,w}, x < w."""
    interval = [int(x) for x in interval]
    slot = {x: i for i, x in enumerate(interval)}
    acc: list[dict[int, int]] = [dict() for _ in interval]
    out = []
    col_ptr = list(col_ptr)
    ent_x = list(ent_x)
    ent_ptr = list(ent_ptr)
    t_exp = list(t_exp)
    t_coef = list(t_coef)
    for i in range(len(interval) - 1, -1, -1):
        y = interval[i]
        if y == w:
            pbar = [(0, 1)]
        else:
            s = acc[i]
            if s.get(0, 0):
                raise AntisymmetryError(f"constant term in S at slot {y} of column {w}")
            neg = []
            for e, c in s.items():
                if c and s.get(-e, 0) != -c:
                    raise AntisymmetryError(f"S not antisymmetric at slot {y} of column {w}")
                if e < 0 and c:
                    neg.append((e, c))
            acc[i] = None
            if not neg:
                continue
            neg.sort()
            out.append((y, dict(neg)))
            pbar = [(-e, c) for e, c in neg]
        for k in range(col_ptr[y], col_ptr[y + 1]):
            x = ent_x[k]
            if x == y:
                continue
            a = acc[slot[x]]
            for j in range(ent_ptr[k], ent_ptr[k + 1]):
                e2 = t_exp[j]
                c2 = t_coef[j]
                for e1, c1 in pbar:
                    e = e1 + e2
                    a[e] = a.get(e, 0) + c1 * c2
    out.reverse()
    return out
