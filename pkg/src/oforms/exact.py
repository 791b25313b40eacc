"""Exact arithmetic building blocks.

Rational intervals with outward rounding, integer k-th roots, Sturm root
counting for rational polynomials, characteristic polynomials of rational
matrices, and the quadratic ring Q + Q*sqrt(D) used for box radii.

No floating point anywhere; every bound is certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

QQ = Fraction


def frac_floor(x: QQ) -> int:
    return x.numerator // x.denominator


def frac_ceil(x: QQ) -> int:
    return -((-x.numerator) // x.denominator)


def introot_floor(n: int, k: int) -> int:
    """Largest r >= 0 with r**k <= n, for n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if k == 1 or n in (0, 1):
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def introot_ceil(n: int, k: int) -> int:
    r = introot_floor(n, k)
    return r if r ** k == n else r + 1


def root_lower(q: QQ, k: int, bits: int = 64) -> QQ:
    """Rational r with r <= q**(1/k), within 2**-bits."""
    if q < 0:
        raise ValueError("negative radicand")
    s = 1 << bits
    m = (q.numerator * s ** k) // q.denominator
    return QQ(introot_floor(m, k), s)


def root_upper(q: QQ, k: int, bits: int = 64) -> QQ:
    if q < 0:
        raise ValueError("negative radicand")
    s = 1 << bits
    m = -((-q.numerator * s ** k) // q.denominator)
    return QQ(introot_ceil(m, k), s)


def floor_add_sqrt(c: QQ, q: QQ) -> int:
    """floor(c + sqrt(q)) for q >= 0, exact."""
    k = frac_floor(c + root_lower(q, 2, 32))
    while True:
        t = k + 1 - c
        if t <= 0 or t * t <= q:
            k += 1
        else:
            return k


def ceil_sub_sqrt(c: QQ, q: QQ) -> int:
    """ceil(c - sqrt(q)) for q >= 0, exact."""
    return -floor_add_sqrt(-c, q)


# ---------------------------------------------------------------------------
# rational intervals

@dataclass(frozen=True)
class Iv:
    """Closed interval with exact rational endpoints."""

    lo: QQ
    hi: QQ

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "Iv":
        x = QQ(x)
        return Iv(x, x)

    def width(self) -> QQ:
        return self.hi - self.lo

    def mid(self) -> QQ:
        return (self.lo + self.hi) / 2

    def __add__(self, other):
        if isinstance(other, Iv):
            return Iv(self.lo + other.lo, self.hi + other.hi)
        other = QQ(other)
        return Iv(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return Iv(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Iv) else Iv.point(-QQ(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Iv):
            other = Iv.point(QQ(other))
        vals = (self.lo * other.lo, self.lo * other.hi,
                self.hi * other.lo, self.hi * other.hi)
        return Iv(min(vals), max(vals))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Iv):
            other = Iv.point(QQ(other))
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval denominator straddles zero")
        vals = (self.lo / other.lo, self.lo / other.hi,
                self.hi / other.lo, self.hi / other.hi)
        return Iv(min(vals), max(vals))

    def contains(self, x) -> bool:
        x = QQ(x)
        return self.lo <= x <= self.hi

    def strict_sign(self):
        """+1 or -1 when the whole interval is on one side of 0, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def abs(self) -> "Iv":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Iv(QQ(0), max(-self.lo, self.hi))

    def sqrt(self, bits: int = 64) -> "Iv":
        if self.lo < 0:
            raise ValueError("sqrt of interval reaching below 0")
        return Iv(root_lower(self.lo, 2, bits), root_upper(self.hi, 2, bits))

    def hull(self, other: "Iv") -> "Iv":
        return Iv(min(self.lo, other.lo), max(self.hi, other.hi))


# ---------------------------------------------------------------------------
# polynomials over QQ, coefficients listed low degree first

def pstrip(p: Sequence[QQ]) -> list[QQ]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def pdegree(p: Sequence[QQ]) -> int:
    return len(pstrip(p)) - 1


def peval(p: Sequence[QQ], x: QQ) -> QQ:
    acc = QQ(0)
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def pderiv(p: Sequence[QQ]) -> list[QQ]:
    return [i * c for i, c in enumerate(p)][1:]


def pmod(a: Sequence[QQ], b: Sequence[QQ]) -> list[QQ]:
    a, b = pstrip(a), pstrip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = pstrip(a)
        if not a:
            break
    return a


def pgcd(a: Sequence[QQ], b: Sequence[QQ]) -> list[QQ]:
    a, b = pstrip(a), pstrip(b)
    while b:
        a, b = b, pmod(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def squarefree_part(p: Sequence[QQ]) -> list[QQ]:
    p = pstrip(p)
    if len(p) <= 2:
        return p
    g = pgcd(p, pderiv(p))
    if len(g) == 1:
        return p
    # exact division p / g
    q: list[QQ] = []
    rem = list(p)
    while len(rem) >= len(g):
        f = rem[-1] / g[-1]
        shift = len(rem) - len(g)
        q.insert(0, f)
        for i, c in enumerate(g):
            rem[i + shift] -= f * c
        rem = pstrip(rem) or [QQ(0)]
        if rem == [QQ(0)]:
            rem = []
    return pstrip(q)


def _sign_changes(vals) -> int:
    signs = [1 if v > 0 else -1 for v in vals if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_chain(p: Sequence[QQ]) -> list[list[QQ]]:
    p = squarefree_part(p)
    chain = [p, pderiv(p)]
    while pstrip(chain[-1]):
        nxt = [-c for c in pmod(chain[-2], chain[-1])]
        if not pstrip(nxt):
            break
        chain.append(nxt)
    return [c for c in chain if pstrip(c)]


def sturm_count(chain: Sequence[Sequence[QQ]], a: QQ, b: QQ) -> int:
    """Number of distinct real roots in (a, b] for the squarefree polynomial."""
    va = _sign_changes([peval(c, a) for c in chain])
    vb = _sign_changes([peval(c, b) for c in chain])
    return va - vb


def cauchy_bound(p: Sequence[QQ]) -> QQ:
    p = pstrip(p)
    lead = abs(p[-1])
    if len(p) == 1:
        return QQ(1)
    return 1 + max(abs(c) for c in p[:-1]) / lead


def count_roots_le_zero(p: Sequence[QQ]) -> int:
    """Distinct real roots of p in (-inf, 0], ignoring roots at 0 elided by x-factors."""
    p = pstrip(p)
    while p and p[0] == 0:
        p = p[1:]  # strip x | p; a root exactly at 0 is handled by the caller
    if len(p) <= 1:
        return 0
    chain = sturm_chain(p)
    bound = cauchy_bound(chain[0])
    return sturm_count(chain, -bound - 1, QQ(0))


def count_roots_gt(p: Sequence[QQ], a: QQ) -> int:
    p = pstrip(p)
    if len(p) <= 1:
        return 0
    chain = sturm_chain(p)
    bound = cauchy_bound(chain[0])
    hi = max(bound + 1, a + 1)
    return sturm_count(chain, a, hi)


def refine_root(p: Sequence[QQ], lo: QQ, hi: QQ, max_width: QQ) -> Iv:
    """Shrink an isolating interval of a squarefree polynomial by bisection.

    Requires that [lo, hi] isolates exactly one real root. Endpoints hitting
    the root exactly collapse the interval to a point.
    """
    slo = peval(p, lo)
    if slo == 0:
        return Iv(lo, lo)
    shi = peval(p, hi)
    if shi == 0:
        return Iv(hi, hi)
    if (slo > 0) == (shi > 0):
        raise ValueError("interval does not straddle a root")
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        sm = peval(p, mid)
        if sm == 0:
            return Iv(mid, mid)
        if (sm > 0) == (slo > 0):
            lo, slo = mid, sm
        else:
            hi, shi = mid, sm
    return Iv(lo, hi)


def charpoly(mat: Sequence[Sequence[QQ]]) -> list[QQ]:
    """Monic characteristic polynomial of a rational matrix (low degree first).

    Faddeev-LeVerrier; exact, no pivoting needed.
    """
    d = len(mat)
    coeffs = [QQ(0)] * (d + 1)
    coeffs[d] = QQ(1)
    m = [[QQ(0)] * d for _ in range(d)]
    for i in range(d):
        m[i][i] = QQ(1)
    mk = m
    for k in range(1, d + 1):
        am = [[sum(mat[i][t] * mk[t][j] for t in range(d)) for j in range(d)]
              for i in range(d)]
        ck = -sum(am[i][i] for i in range(d)) / k
        coeffs[d - k] = ck
        mk = [row[:] for row in am]
        for i in range(d):
            mk[i][i] += ck
    return coeffs


def mat_det(mat: Sequence[Sequence[QQ]]) -> QQ:
    """Determinant by fraction-free-ish Gaussian elimination over QQ."""
    n = len(mat)
    a = [list(map(QQ, row)) for row in mat]
    det = QQ(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return QQ(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def mat_solve(mat: Sequence[Sequence[QQ]], rhs: Sequence[QQ]) -> list[QQ]:
    """Solve mat * x = rhs exactly; raises ZeroDivisionError if singular."""
    n = len(mat)
    a = [list(map(QQ, mat[i])) + [QQ(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# values a + b*sqrt(D) with a, b rational and D a fixed nonnegative integer

@dataclass(frozen=True)
class SqrtVal:
    """Exact element of Q(sqrt(D)); supports total order via exact signs."""

    a: QQ
    b: QQ
    disc: int

    @staticmethod
    def of(a, b, disc: int) -> "SqrtVal":
        return SqrtVal(QQ(a), QQ(b), disc)

    @staticmethod
    def rational(a, disc: int) -> "SqrtVal":
        return SqrtVal(QQ(a), QQ(0), disc)

    def _coerce(self, other) -> "SqrtVal":
        if isinstance(other, SqrtVal):
            if other.disc != self.disc:
                raise ValueError("mixed radicands")
            return other
        return SqrtVal(QQ(other), QQ(0), self.disc)

    def __add__(self, other):
        o = self._coerce(other)
        return SqrtVal(self.a + o.a, self.b + o.b, self.disc)

    __radd__ = __add__

    def __neg__(self):
        return SqrtVal(-self.a, -self.b, self.disc)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return SqrtVal(self.a * o.a + self.b * o.b * self.disc,
                       self.a * o.b + self.b * o.a, self.disc)

    __rmul__ = __mul__

    def inverse(self) -> "SqrtVal":
        den = self.a * self.a - self.b * self.b * self.disc
        if den == 0:
            raise ZeroDivisionError("sqrt(D) value with zero norm")
        return SqrtVal(self.a / den, -self.b / den, self.disc)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = SqrtVal(QQ(1), QQ(0), self.disc)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def sign(self) -> int:
        a, b, d = self.a, self.b, self.disc
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0) if d > 0 else (a > 0) - (a < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        lhs, rhs = a * a, b * b * d
        if lhs == rhs:
            return 0
        # a and b have opposite signs; the larger square wins
        big_is_a = lhs > rhs
        return (1 if a > 0 else -1) if big_is_a else (1 if b > 0 else -1)

    def is_rational(self) -> bool:
        return self.b == 0 or self.disc == 0 or introot_floor(self.disc, 2) ** 2 == self.disc

    def to_fraction(self) -> QQ:
        if self.b == 0:
            return self.a
        r = introot_floor(self.disc, 2)
        if r * r != self.disc:
            raise ValueError("not rational")
        return self.a + self.b * r
    def interval(self, bits: int = 64) -> Iv:
        root = Iv(root_lower(QQ(self.disc), 2, bits), root_upper(QQ(self.disc), 2, bits))
        return Iv.point(self.a) + root * Iv.point(self.b)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def upper_fraction(self, bits: int = 64) -> QQ:
        return self.interval(bits).hi

    def lower_fraction(self, bits: int = 64) -> QQ:
        return self.interval(bits).lo

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.disc})"


# ---------------------------------------------------------------------------
# deterministic decimal rendering

def _dec_render(n: int, neg: bool, digits: int) -> str:
    body = str(n).rjust(digits + 1, "0")
    out = f"{body[:-digits]}.{body[-digits:]}" if digits else body
    return "-" + out if neg and n else out


def dec_floor(x: QQ, digits: int) -> str:
    """Decimal string <= x with the given number of fractional digits."""
    scaled = x * 10 ** digits
    n = scaled.numerator // scaled.denominator  # floor
    return _dec_render(abs(n), n < 0, digits)


def dec_ceil(x: QQ, digits: int) -> str:
    """Decimal string >= x with the given number of fractional digits."""
    scaled = x * 10 ** digits
    n = -((-scaled.numerator) // scaled.denominator)  # ceil
    return _dec_render(abs(n), n < 0, digits)


def iv_str(iv: Iv, digits: int = 12) -> str:
    return f"[{dec_floor(iv.lo, digits)}, {dec_ceil(iv.hi, digits)}]"


def frac_str(x: QQ) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> QQ:
    return QQ(s.strip())
