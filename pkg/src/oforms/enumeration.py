"""Short-vector enumeration for positive definite quadratic forms over Q.

Exact rational Lagrange decomposition plus depth-first search with exact
integer range bounds; no floating point, deterministic output order.
"""

from __future__ import annotations

from typing import Sequence

from .errors import BudgetExceeded, SingularMinor
from .exact import QQ, ceil_sub_sqrt, floor_add_sqrt


def rational_lagrange(q: Sequence[Sequence[QQ]]) -> tuple[list[QQ], list[list[QQ]]]:
    """Outer coefficients h and inner coefficients u with q = U^t diag(h) U.

    Requires all leading principal minors nonzero (true for definite forms).
    """
    n = len(q)
    a = [[QQ(x) for x in row] for row in q]
    h: list[QQ] = []
    u = [[QQ(0)] * n for _ in range(n)]
    for i in range(n):
        u[i][i] = QQ(1)
    for i in range(n):
        piv = a[i][i]
        if piv == 0:
            raise SingularMinor(f"zero pivot at index {i}")
        h.append(piv)
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / piv
        for k in range(i + 1, n):
            for l in range(k, n):
                a[k][l] -= piv * u[i][k] * u[i][l]
                a[l][k] = a[k][l]
    return h, u


def enumerate_below(q: Sequence[Sequence[QQ]], bound: QQ,
                    budget: int = 1_000_000) -> list[tuple[int, ...]]:
    """All nonzero integer vectors with x^T q x <= bound, one per +-pair.

    q must be positive definite. Vectors come out in a fixed depth-first
    order (outermost coordinate last, ascending at every level).
    """
    n = len(q)
    bound = QQ(bound)
    if bound < 0:
        return []
    h, u = rational_lagrange(q)
    if any(v <= 0 for v in h):
        raise SingularMinor("form is not positive definite")
    out: list[tuple[int, ...]] = []
    x = [0] * n
    nodes = 0

    def descend(i: int, remaining: QQ, zero_prefix: bool):
        nonlocal nodes
        if i < 0:
            if not zero_prefix:
                out.append(tuple(x))
            return
        c = sum((u[i][j] * x[j] for j in range(i + 1, n)), QQ(0))
        r = remaining / h[i]
        lo = ceil_sub_sqrt(-c, r)
        hi = floor_add_sqrt(-c, r)
        if zero_prefix:
            lo = max(lo, 0)
        for xi in range(lo, hi + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
            x[i] = xi
            t = xi + c
            descend(i - 1, remaining - h[i] * t * t, zero_prefix and xi == 0)
        x[i] = 0

    descend(n - 1, bound, True)
    return out


def eval_form(q: Sequence[Sequence[QQ]], x: Sequence[int]) -> QQ:
    n = len(q)
    return sum(q[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
