"""Certified rational enclosures of transcendental quantities.

Thin wrapper over mpmath interval arithmetic; inputs enter exactly (as
integers), outputs leave as exact dyadic endpoints, so every returned Iv
is a true outward-rounded enclosure.
"""

from __future__ import annotations

import mpmath
from mpmath import ctx_iv, libmp

from .exact import Iv, QQ


def _ctx(bits: int):
    ctx = ctx_iv.MPIntervalContext()
    ctx.prec = bits + 16
    return ctx


def _iv(ctx, x: Iv):
    lo = libmp.from_rational(x.lo.numerator, x.lo.denominator,
                             ctx.prec, libmp.round_floor)
    hi = libmp.from_rational(x.hi.numerator, x.hi.denominator,
                             ctx.prec, libmp.round_ceiling)
    return ctx.mpf([mpmath.mp.make_mpf(lo), mpmath.mp.make_mpf(hi)])


def _out(u) -> Iv:
    lo, hi = u._mpi_
    pl, ql = libmp.to_rational(lo)
    ph, qh = libmp.to_rational(hi)
    return Iv(QQ(int(pl), int(ql)), QQ(int(ph), int(qh)))


def pi_iv(bits: int = 96) -> Iv:
    ctx = _ctx(bits)
    return _out(+ctx.pi)


def exp_iv(x: Iv, bits: int = 96) -> Iv:
    ctx = _ctx(bits)
    return _out(ctx.exp(_iv(ctx, x)))


def log_iv(x: Iv, bits: int = 96) -> Iv:
    if x.lo <= 0:
        raise ValueError("log of interval reaching below 0")
    ctx = _ctx(bits)
    return _out(ctx.log(_iv(ctx, x)))


def pow_iv(x: Iv, e: QQ, bits: int = 96) -> Iv:
    """x**e, outward rounded; x must be positive unless e is a whole number."""
    e = QQ(e)
    if e == 0:
        return Iv.point(QQ(1))
    if e.denominator == 1:
        k = int(e)
        acc = Iv.point(QQ(1))
        base = x if k > 0 else Iv.point(QQ(1)) / x
        for _ in range(abs(k)):
            acc = acc * base
        return acc
    if x.lo <= 0:
        raise ValueError("power base must be positive")
    le = log_iv(x, bits)
    return exp_iv(le * Iv.point(e), bits)
