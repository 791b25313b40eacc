"""Exact norm-minimum of a positive definite form over the ring of integers.

The norm of the form value is not a quadratic form over Q, so the search
runs over the rational trace form Tr(Q(x)) instead: every value of small
norm has a unit multiple whose embeddings are balanced, and the balanced
multiple lands inside an explicit trace ball. Enumerating that ball and
evaluating norms exactly yields the true minimum with a witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import enumeration
from .errors import UnsupportedField, ViolationDetected
from .exact import Iv, QQ, frac_str, introot_ceil, root_upper
from .forms import GramForm, is_positive_definite, lagrange_expand
from .numberfield import Field, FieldElement


@dataclass(frozen=True)
class TraceFormData:
    """Integer-coefficient form q(x) = Tr(Q(sum x_ki w_i e_k)) on Z^{dn}."""

    field: Field
    n: int
    matrix: tuple  # dn x dn rationals

    def vector_to_elements(self, x) -> tuple[FieldElement, ...]:
        d = self.field.degree
        return tuple(self.field.element(x[k * d:(k + 1) * d]) for k in range(self.n))

    def eval(self, x) -> QQ:
        m = self.matrix
        dn = len(m)
        return sum(m[i][j] * x[i] * x[j] for i in range(dn) for j in range(dn))


@dataclass(frozen=True)
class ShortVectorReport:
    minimum: QQ
    witness: tuple[FieldElement, ...]
    search_bound: QQ
    candidates: int

    def to_text(self, field: Field) -> str:
        w = ", ".join(field.format_element(e) for e in self.witness)
        return (f"min = {frac_str(self.minimum)}\n"
                f"witness = {w}\n"
                f"search_bound = {frac_str(self.search_bound)}\n"
                f"candidates = {self.candidates}\n")


def trace_form(q: GramForm) -> TraceFormData:
    f = q.field
    d, n = f.degree, q.n
    dn = d * n
    m = [[QQ(0)] * dn for _ in range(dn)]
    basis = [f.basis_element(i) for i in range(d)]
    for k in range(n):
        for l in range(n):
            e = q.entries[k][l]
            for i in range(d):
                for j in range(d):
                    m[k * d + i][l * d + j] += (e * basis[i] * basis[j]).trace()
    return TraceFormData(f, n, tuple(tuple(r) for r in m))


def enumerate_below(tf: TraceFormData, bound: QQ,
                    budget: int = 1_000_000) -> list[tuple[int, ...]]:
    """All x != 0 (one per +-pair) with Tr(Q(x)) <= bound."""
    return enumeration.enumerate_below(tf.matrix, bound, budget)


def _ceil_kth_root(t: QQ, k: int) -> QQ:
    """Rational r >= t**(1/k)."""
    num = t.numerator * t.denominator ** (k - 1)
    return QQ(introot_ceil(num, k), t.denominator)


def canonical_witness(field: Field, vec, kmax: int = 8):
    return field.canonical_orbit_rep(tuple(vec), kmax)


def minimum(q: GramForm, budget: int = 2_000_000, kmax: int = 8) -> ShortVectorReport:
    """Exact min of N(Q(x)) over nonzero integral vectors, with a witness.

    Requires class number 1 (minimal vectors are then unimodular and the
    reduction pipeline may extend them to bases).
    """
    f = q.field
    if f.class_number != 1:
        raise UnsupportedField("minimum requires class number 1")
    if not is_positive_definite(q):
        raise ValueError("minimum needs a positive definite form")
    d, n = f.degree, q.n
    n_ub = min(abs(q.entries[i][i].norm()) for i in range(n))
    lam = f.lambda_effective()
    radius = d * _ceil_kth_root(lam ** (d - 1) * n_ub, d)
    tf = trace_form(q)
    cands = enumerate_below(tf, radius, budget)
    best: QQ | None = None
    argmins: list[tuple[int, ...]] = []
    for c in cands:
        val = abs(q.evaluate(tf.vector_to_elements(c)).norm())
        if best is None or val < best:
            best, argmins = val, [c]
        elif val == best:
            argmins.append(c)
    if best is None:
        raise ViolationDetected("trace ball missed every vector; bad radius")
    reps = [canonical_witness(f, tf.vector_to_elements(c), kmax) for c in argmins]
    wit = reps[0]
    for r in reps[1:]:
        if f.lex_cmp_embedding(r, wit) > 0:
            wit = r
    return ShortVectorReport(best, tuple(wit), radius, len(cands))


@dataclass(frozen=True)
class HermiteReport:
    minimum: QQ
    det_norm: QQ
    sigma_pi_power: int
    ratio_enclosure: Iv
    ok: bool

    def to_text(self) -> str:
        from .exact import iv_str
        return (f"min = {frac_str(self.minimum)}\n"
                f"d(Q) = {frac_str(self.det_norm)}\n"
                f"ratio = {iv_str(self.ratio_enclosure)} (<= 1 required)\n"
                f"ok = {self.ok}\n")


def hermite_check(q: GramForm, rep: ShortVectorReport | None = None) -> HermiteReport:
    """Certify min(Q) <= sigma_n * d(Q)^(1/n); violation means a bug."""
    from . import constants
    from . import trans
    f = q.field
    n = q.n
    if rep is None:
        rep = minimum(q)
    det_norm = abs(lagrange_det_norm(q))
    s_rat, s_pik = constants.sigma_power_exact(f, n)
    # min^n <= sigma_n^n d(Q)  <=>  min^n * pi^m <= s_rat * d(Q)
    lhs_rat = rep.minimum ** n
    rhs_rat = s_rat * det_norm
    ok = None
    if s_pik == 0:
        ok = lhs_rat <= rhs_rat
    else:
        bits = 96
        while ok is None:
            piv = trans.pow_iv(trans.pi_iv(bits), QQ(s_pik), bits)
            lhs = piv * lhs_rat
            if lhs.hi <= rhs_rat:
                ok = True
            elif lhs.lo > rhs_rat:
                ok = False
            else:
                bits *= 2
                if bits > 1 << 14:
                    raise ViolationDetected("Hermite ratio exactly at the bound?")
    sig_iv = constants.sigma_iv(f, n)
    det_root = trans.pow_iv(Iv.point(det_norm), QQ(1, n), 128)
    ratio = Iv.point(rep.minimum) / (sig_iv * det_root)
    if not ok:
        raise ViolationDetected(
            f"Hermite inequality failed: min = {rep.minimum}, d(Q) = {det_norm}")
    return HermiteReport(rep.minimum, det_norm, s_pik, ratio, ok)


def lagrange_det_norm(q: GramForm) -> QQ:
    det = q.field.one
    for h in lagrange_expand(q).outer:
        det = det * h
    return det.norm()
