"""Totally real number fields with exact arithmetic.

A Field is built from an integral basis and its multiplication table; every
element is a vector of exact rationals over that basis. Real embeddings are
kept as shrinkable isolating intervals backed by the basis elements'
characteristic polynomials, so every sign decision can be made exact.

Also provides the lattice-flavoured field operations: rounding a real target
into the ring within the covering box, trace minimization, balancing by
units, the effective balancing constant, and gcds in the principal-ideal
setting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import trans
from .enumeration import enumerate_below
from .errors import (EmbeddingMismatch, EnumerationBudget, InvalidTable,
                     NotTotallyReal, PrecisionExhausted, UnsupportedField,
                     ViolationDetected)
from .exact import (Iv, QQ, charpoly, count_roots_le_zero, frac_ceil,
                    frac_floor, frac_str, mat_det, mat_solve, peval,
                    refine_root, root_lower, root_upper, squarefree_part,
                    sturm_chain, sturm_count)

SIGN_CAP_BITS = 1 << 14


@dataclass(frozen=True)
class FieldSpec:
    """Raw field data as read from a field file; validated by Field()."""

    name: str
    degree: int
    basis_names: tuple[str, ...]
    mult_table: tuple  # [i][j] -> coordinate tuple of basis_i * basis_j
    discriminant: int
    embeddings: tuple  # [nu][j] -> Iv enclosing basis_j under embedding nu
    fundamental_units: tuple  # coordinate tuples, one per unit
    class_number: int
    tp_basis: tuple  # coordinate tuples of a totally positive integral basis


@dataclass(frozen=True)
class EmbeddingBox:
    intervals: tuple[Iv, ...]
    bits: int


class FieldElement:
    """Element of K as exact rational coordinates over the integral basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: "Field", coords: Sequence[QQ]):
        self.field = field
        self.coords = tuple(QQ(c) for c in coords)

    def __eq__(self, other):
        return (isinstance(other, FieldElement) and other.field is self.field
                and other.coords == self.coords)

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def __bool__(self):
        return any(self.coords)

    def __add__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field, self.field.mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.field.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        m = self.field.regular_matrix(self.coords)
        one = [QQ(1)] + [QQ(0)] * (self.field.degree - 1)
        return FieldElement(self.field, mat_solve(m, self.field.one.coords))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> QQ:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def norm(self) -> QQ:
        return mat_det(self.field.regular_matrix(self.coords))

    def trace(self) -> QQ:
        return sum(c * t for c, t in zip(self.coords, self.field.basis_traces))

    def charpoly(self) -> list[QQ]:
        return charpoly(self.field.regular_matrix(self.coords))

    def __repr__(self):
        return f"<{self.field.format_element(self)}>"


class Field:
    """Validated totally real number field handle; immutable after load."""

    def __init__(self, spec: FieldSpec, *, allow_class_number_gt1: bool = False):
        self.spec = spec
        self.name = spec.name
        self.degree = int(spec.degree)
        self.discriminant = int(spec.discriminant)
        self.class_number = int(spec.class_number)
        d = self.degree
        if d < 1:
            raise InvalidTable("degree must be positive")
        if self.discriminant == 0:
            raise InvalidTable("discriminant must be nonzero")
        self.basis_names = tuple(spec.basis_names)
        if len(self.basis_names) != d:
            raise InvalidTable("basis name count != degree")
        self.mult_table = tuple(tuple(tuple(QQ(c) for c in cell)
                                      for cell in row) for row in spec.mult_table)
        if len(self.mult_table) != d or any(len(r) != d for r in self.mult_table):
            raise InvalidTable("multiplication table must be d x d")
        self._check_ring_axioms()
        self.basis_traces = tuple(
            sum(self.mult_table[j][i][i] for i in range(d)) for j in range(d))
        self.one = FieldElement(self, self._find_unity())
        if self.one.coords != tuple([QQ(1)] + [QQ(0)] * (d - 1)):
            raise InvalidTable("first basis element must be the unity")
        self.zero = FieldElement(self, [QQ(0)] * d)

        # isolating intervals per (embedding, basis element), refined on demand
        self._sqfree = [squarefree_part(charpoly(self.regular_matrix(
            tuple(QQ(1) if t == j else QQ(0) for t in range(d))))) for j in range(d)]
        self._emb: dict[tuple[int, int], Iv] = {}
        self._isolate_embeddings(spec.embeddings)
        self._check_embedding_consistency()
        self._check_discriminant()

        self.fundamental_units = tuple(FieldElement(self, u)
                                       for u in spec.fundamental_units)
        if len(self.fundamental_units) != d - 1:
            raise InvalidTable("expected degree-1 fundamental units")
        for u in self.fundamental_units:
            if not u.is_integral() or abs(u.norm()) != 1:
                raise InvalidTable(f"fundamental unit {u!r} has norm != +-1")
        self.tp_basis = tuple(FieldElement(self, t) for t in spec.tp_basis)
        self._check_tp_basis()

        if self.class_number != 1 and not allow_class_number_gt1:
            raise UnsupportedField(
                "reduction pipeline requires class number 1; "
                "load with allow_class_number_gt1=True for constants-only use")
        self.constants_only = self.class_number != 1

        self._round_window = self._compute_round_window()
        self._lambda_cache: QQ | None = None
        self._d3_cache: QQ | None = None

    # -- construction helpers ------------------------------------------------

    def _check_ring_axioms(self):
        d = self.degree
        t = self.mult_table
        for i in range(d):
            for j in range(d):
                if t[i][j] != t[j][i]:
                    raise InvalidTable(f"table not commutative at ({i},{j})")
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    left = self.mul_coords(t[i][j],
                                           tuple(QQ(1) if s == k else QQ(0) for s in range(d)))
                    right = self.mul_coords(tuple(QQ(1) if s == i else QQ(0) for s in range(d)),
                                            t[j][k])
                    if left != right:
                        raise InvalidTable(f"table not associative at ({i},{j},{k})")

    def _find_unity(self):
        d = self.degree
        rows, rhs = [], []
        for j in range(d):
            for i in range(d):
                rows.append([self.mult_table[k][j][i] for k in range(d)])
                rhs.append(QQ(1) if i == j else QQ(0))
        # overdetermined but consistent for a unital table; solve a square
        # subsystem then verify everything
        import itertools as _it
        for combo in _it.combinations(range(len(rows)), d):
            sub = [rows[i] for i in combo]
            if mat_det(sub) != 0:
                e = mat_solve(sub, [rhs[i] for i in combo])
                if all(sum(r[k] * e[k] for k in range(d)) == v
                       for r, v in zip(rows, rhs)):
                    return tuple(e)
                break
        raise InvalidTable("no unity element for this table")

    def _isolate_embeddings(self, embeddings):
        d = self.degree
        if len(embeddings) != d or any(len(r) != d for r in embeddings):
            raise EmbeddingMismatch("embedding matrix must be d x d")
        for nu in range(d):
            for j in range(d):
                iv = embeddings[nu][j]
                p = self._sqfree[j]
                at_lo, at_hi = peval(p, iv.lo), peval(p, iv.hi)
                inside = sturm_count(sturm_chain(p), iv.lo, iv.hi)
                if at_lo == 0:
                    if inside != 0:
                        raise EmbeddingMismatch(
                            f"enclosure for basis {j} at embedding {nu} is ambiguous")
                    self._emb[(nu, j)] = Iv(iv.lo, iv.lo)
                    continue
                if inside == 0:
                    raise NotTotallyReal(
                        f"no real conjugate of basis {j} inside enclosure at embedding {nu}")
                if inside > 1:
                    raise EmbeddingMismatch(
                        f"enclosure for basis {j} at embedding {nu} holds {inside} conjugates")
                if at_hi == 0:
                    self._emb[(nu, j)] = Iv(iv.hi, iv.hi)
                else:
                    self._emb[(nu, j)] = iv

    def _basis_iv(self, nu: int, j: int, max_width: QQ) -> Iv:
        iv = self._emb[(nu, j)]
        if iv.width() > max_width:
            iv = refine_root(self._sqfree[j], iv.lo, iv.hi, max_width)
            self._emb[(nu, j)] = iv
        return iv

    def _check_embedding_consistency(self):
        d = self.degree
        w = QQ(1, 1 << 48)
        for nu in range(d):
            for i in range(d):
                for j in range(i, d):
                    prod = self._basis_iv(nu, i, w) * self._basis_iv(nu, j, w)
                    tgt = Iv.point(QQ(0))
                    for k, c in enumerate(self.mult_table[i][j]):
                        tgt = tgt + self._basis_iv(nu, k, w) * c
                    if prod.hi < tgt.lo or tgt.hi < prod.lo:
                        raise EmbeddingMismatch(
                            f"embedding {nu} is not multiplicative on basis ({i},{j})")

    def _iv_det(self, rows: list[list[Iv]]) -> Iv:
        if len(rows) == 1:
            return rows[0][0]
        acc = Iv.point(QQ(0))
        for j, head in enumerate(rows[0]):
            minor = [[r[c] for c in range(len(rows)) if c != j] for r in rows[1:]]
            term = head * self._iv_det(minor)
            acc = acc + (term if j % 2 == 0 else -term)
        return acc

    def _check_discriminant(self):
        d = self.degree
        w = QQ(1, 1 << 60)
        rows = [[self._basis_iv(nu, j, w) for j in range(d)] for nu in range(d)]
        det2 = self._iv_det(rows)
        det2 = det2 * det2
        if not det2.contains(abs(self.discriminant)):
            raise EmbeddingMismatch(
                f"|det embeddings|^2 enclosure {det2} excludes |disc| = {abs(self.discriminant)}")

    def _check_tp_basis(self):
        d = self.degree
        if len(self.tp_basis) != d:
            raise InvalidTable("tp_basis must have d elements")
        m = [[self.tp_basis[j].coords[i] for j in range(d)] for i in range(d)]
        det = mat_det(m)
        if abs(det) != 1 or any(c.denominator != 1 for t in self.tp_basis for c in t.coords):
            raise InvalidTable("tp_basis is not an integral basis change of determinant +-1")
        for t in self.tp_basis:
            if not self.is_totally_positive(t):
                raise InvalidTable(f"tp_basis element {t!r} is not totally positive")

    def _compute_round_window(self) -> int:
        d = self.degree
        w = QQ(1, 1 << 40)
        rows = [[self._basis_iv(nu, j, w) for j in range(d)] for nu in range(d)]
        inv = _iv_matrix_inverse(rows)
        beta_hi = root_upper(QQ(abs(self.discriminant)), 2, 48) / 2
        worst = max(sum(r.abs().hi for r in row) for row in inv)
        return frac_ceil(worst * beta_hi + QQ(1, 2)) + 1

    # -- basic element plumbing ----------------------------------------------

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise ValueError("element from a different field")
            return x
        x = QQ(x)
        return FieldElement(self, [x] + [QQ(0)] * (self.degree - 1))

    def element(self, coords: Sequence) -> FieldElement:
        if len(coords) != self.degree:
            raise ValueError("coordinate count != degree")
        return FieldElement(self, [QQ(c) for c in coords])

    def basis_element(self, j: int) -> FieldElement:
        return FieldElement(self, [QQ(1) if i == j else QQ(0)
                                   for i in range(self.degree)])

    def mul_coords(self, a: Sequence[QQ], b: Sequence[QQ]) -> tuple[QQ, ...]:
        d = self.degree
        out = [QQ(0)] * d
        for i in range(d):
            ai = a[i]
            if not ai:
                continue
            for j in range(d):
                bj = b[j]
                if not bj:
                    continue
                f = ai * bj
                cell = self.mult_table[i][j]
                for k in range(d):
                    if cell[k]:
                        out[k] += f * cell[k]
        return tuple(out)

    def regular_matrix(self, coords: Sequence[QQ]) -> list[list[QQ]]:
        """Matrix of multiplication by the element, columns = images of basis."""
        d = self.degree
        m = [[QQ(0)] * d for _ in range(d)]
        for j in range(d):
            col = self.mul_coords(coords, tuple(QQ(1) if t == j else QQ(0)
                                                for t in range(d)))
            for i in range(d):
                m[i][j] = col[i]
        return m

    def norm_trace(self, a: FieldElement) -> tuple[QQ, QQ]:
        return a.norm(), a.trace()

    # -- embeddings and signs --------------------------------------------------

    def embed(self, a: FieldElement, bits: int = 64) -> EmbeddingBox:
        a = self.coerce(a)
        d = self.degree
        target = QQ(1, 1 << bits)
        out = []
        for nu in range(d):
            acc = Iv.point(QQ(0))
            for j, c in enumerate(a.coords):
                if not c:
                    continue
                per = target / (d * max(abs(c), QQ(1)) * 2)
                acc = acc + self._basis_iv(nu, j, per) * c
            out.append(acc)
        return EmbeddingBox(tuple(out), bits)

    def embed_iv(self, a: FieldElement, nu: int, bits: int = 64) -> Iv:
        return self.embed(a, bits).intervals[nu]

    def sign_at(self, a: FieldElement, nu: int) -> int:
        a = self.coerce(a)
        if not a:
            return 0
        bits = 48
        while bits <= SIGN_CAP_BITS:
            s = self.embed_iv(a, nu, bits).strict_sign()
            if s is not None:
                return s
            bits *= 2
        raise PrecisionExhausted(f"sign of {a!r} at embedding {nu}")

    def is_totally_positive(self, a: FieldElement) -> bool:
        a = self.coerce(a)
        if not a:
            return False
        box = self.embed(a, 48)
        signs = [iv.strict_sign() for iv in box.intervals]
        if all(s == 1 for s in signs):
            return True
        if any(s == -1 for s in signs):
            return False
        # exact fallback: no conjugate of a nonzero element may be <= 0
        return count_roots_le_zero(squarefree_part(a.charpoly())) == 0

    def is_totally_nonneg(self, a: FieldElement) -> bool:
        # a nonzero element has no zero conjugates, so nonneg == positive
        a = self.coerce(a)
        return (not a) or self.is_totally_positive(a)

    def succ(self, a, b) -> bool:
        """a strictly totally greater than b."""
        return self.is_totally_positive(self.coerce(a) - self.coerce(b))

    def conj(self, a: FieldElement) -> FieldElement:
        """The nontrivial automorphism image, available for degree <= 2."""
        a = self.coerce(a)
        if self.degree == 1:
            return a
        if self.degree == 2:
            return self.coerce(a.trace()) - a
        raise UnsupportedField("exact conjugation needs degree <= 2")

    def cmp_at(self, a: FieldElement, nu: int, b: FieldElement, mu: int) -> int:
        """Exact sign of a^(nu) - b^(mu); cross-embedding needs degree <= 2."""
        if nu == mu:
            return self.sign_at(self.coerce(a) - self.coerce(b), nu)
        if self.degree == 2:
            return self.sign_at(self.coerce(a) - self.conj(b), nu)
        bits = 64
        while bits <= SIGN_CAP_BITS:
            da = self.embed_iv(a, nu, bits)
            db = self.embed_iv(b, mu, bits)
            if da.lo > db.hi:
                return 1
            if da.hi < db.lo:
                return -1
            bits *= 2
        raise PrecisionExhausted("cross-embedding comparison did not resolve")

    def sup_abs_le(self, a: FieldElement, bound: QQ) -> bool:
        """Exact test max_nu |a|_nu <= bound for rational bound >= 0."""
        a = self.coerce(a)
        return self.is_totally_nonneg(self.coerce(bound * bound) - a * a)

    def ceil_sup_abs(self, a: FieldElement) -> int:
        """Smallest integer g with |a|_nu <= g for all nu."""
        hi = max(iv.abs().hi for iv in self.embed(a, 48).intervals)
        g = frac_ceil(hi)
        while g > 0 and self.sup_abs_le(a, QQ(g - 1)):
            g -= 1
        return g

    # -- covering box rounding -------------------------------------------------

    @property
    def beta_sq(self) -> QQ:
        """beta^2 for the implemented covering radius (sqrt|disc|/2)."""
        return QQ(abs(self.discriminant), 4)

    def beta_upper(self, bits: int = 64) -> QQ:
        return root_upper(self.beta_sq, 2, bits)

    def beta_lower(self, bits: int = 64) -> QQ:
        return root_lower(self.beta_sq, 2, bits)

    def _offset_order(self) -> list[tuple[int, ...]]:
        L = self._round_window
        offs = list(itertools.product(range(-L, L + 1), repeat=self.degree))
        offs.sort(key=lambda t: (max(abs(v) for v in t) if t else 0, t))
        return offs

    def round_to_ring(self, target: FieldElement) -> FieldElement:
        """Nearest-style ring element with target - a in the covering box.

        Exact: the box membership |target - a|_nu <= beta is decided with no
        floating point. Deterministic candidate order.
        """
        target = self.coerce(target)
        base = [frac_floor(c + QQ(1, 2)) for c in target.coords]
        for off in self._offset_order():
            cand = self.element([b + o for b, o in zip(base, off)])
            r = target - cand
            if self.is_totally_nonneg(self.coerce(self.beta_sq) - r * r):
                return cand
        raise ViolationDetected("covering box search window exhausted")

    def round_to_ring_box(self, targets: Sequence[Iv]) -> FieldElement:
        """Ring element within the covering box of a real target vector.

        Raises PrecisionExhausted when the enclosures are too wide to certify;
        the caller should refine the targets and retry.
        """
        d = self.degree
        if len(targets) != d:
            raise ValueError("need one target interval per embedding")
        w = QQ(1, 1 << 52)
        rows = [[self._basis_iv(nu, j, w) for j in range(d)] for nu in range(d)]
        inv = _iv_matrix_inverse(rows)
        coords = [sum((inv[i][nu] * targets[nu] for nu in range(d)), Iv.point(QQ(0)))
                  for i in range(d)]
        base = [frac_floor(c.mid() + QQ(1, 2)) for c in coords]
        cap = self.beta_sq
        for off in self._offset_order():
            cand = self.element([b + o for b, o in zip(base, off)])
            box = self.embed(cand, 80)
            ok = True
            for nu in range(d):
                resid = targets[nu] - box.intervals[nu]
                if (resid.abs() * resid.abs()).hi > cap:
                    ok = False
                    break
            if ok:
                return cand
        raise PrecisionExhausted("no candidate certified inside the covering box")

    # -- embedding-key comparison and canonical representatives -----------------

    def lex_cmp_embedding(self, xs: Sequence[FieldElement],
                          ys: Sequence[FieldElement]) -> int:
        """Lexicographic order on concatenated embedding vectors, exact."""
        for x, y in zip(xs, ys):
            if x == y:
                continue
            for nu in range(self.degree):
                s = self.sign_at(x - y, nu)
                if s:
                    return s
        return 0

    def unit_candidates(self, kmax: int) -> list[FieldElement]:
        """Units eps^k over exponent boxes |k_j| <= kmax, small exponents first."""
        r = len(self.fundamental_units)
        if r == 0:
            return [self.one]
        out = []
        expos = sorted(itertools.product(range(-kmax, kmax + 1), repeat=r),
                       key=lambda t: (max(abs(v) for v in t), t))
        for expo in expos:
            u = self.one
            for e, fu in zip(expo, self.fundamental_units):
                u = u * fu ** e
            out.append(u)
        return out

    def canonical_orbit_rep(self, vec: Sequence[FieldElement],
                            kmax: int = 8) -> tuple[FieldElement, ...]:
        """Deterministic representative of {+-eps^k v} by embedding-lex order."""
        best = None
        for u in self.unit_candidates(kmax):
            for s in (1, -1):
                cand = tuple(self.coerce(s) * u * x for x in vec)
                if best is None or self.lex_cmp_embedding(cand, best) > 0:
                    best = cand
        return best

    # -- trace pairing, trace minimization ---------------------------------------

    def trace_pairing(self, h: FieldElement) -> list[list[QQ]]:
        d = self.degree
        h = self.coerce(h)
        m = [[QQ(0)] * d for _ in range(d)]
        for i in range(d):
            for j in range(i, d):
                v = (h * self.basis_element(i) * self.basis_element(j)).trace()
                m[i][j] = m[j][i] = v
        return m

    def trace_minimizer(self, h: FieldElement, budget: int = 1_000_000) -> FieldElement:
        """Nonzero ring element minimizing Tr(h z^2); h must be totally positive."""
        h = self.coerce(h)
        if not self.is_totally_positive(h):
            raise ValueError("trace minimizer needs a totally positive weight")
        t = self.trace_pairing(h)
        bound = min(t[i][i] for i in range(self.degree))
        cands = enumerate_below(t, bound, budget)
        best_val, best = None, []
        for c in cands:
            val = sum(t[i][j] * c[i] * c[j]
                      for i in range(self.degree) for j in range(self.degree))
            if best_val is None or val < best_val:
                best_val, best = val, [c]
            elif val == best_val:
                best.append(c)
        reps = []
        for c in best:
            z = self.element(c)
            zn = -z
            reps.append(z if self.lex_cmp_embedding([z], [zn]) >= 0 else zn)
        out = reps[0]
        for z in reps[1:]:
            if self.lex_cmp_embedding([z], [out]) > 0:
                out = z
        return out

    # -- unit balancing ----------------------------------------------------------

    def _log_embeddings(self, a: FieldElement, bits: int = 96) -> list[QQ]:
        out = []
        for nu in range(self.degree):
            iv = self.embed_iv(a, nu, bits).abs()
            if iv.lo <= 0:
                iv = self.embed_iv(a, nu, bits * 2).abs()
            out.append(trans.log_iv(iv, bits).mid())
        return out

    def _maxratio_cmp(self, w1: FieldElement, w2: FieldElement) -> int:
        """Exact sign of maxratio(w1) - maxratio(w2) for totally positive w."""
        if self.degree == 1:
            return 0
        if self.degree == 2:
            a1 = 0 if self.sign_at(w1 - self.conj(w1), 0) >= 0 else 1
            a2 = 0 if self.sign_at(w2 - self.conj(w2), 0) >= 0 else 1
            # ratio_i = w_i^(a_i) / w_i^(1 - a_i); compare by cross products
            def at(w, idx):
                return w if idx == 0 else self.conj(w)
            lhs = at(w1, a1) * at(w2, 1 - a2)
            rhs = at(w2, a2) * at(w1, 1 - a1)
            return self.sign_at(lhs - rhs, 0)
        bits = 64
        while bits <= SIGN_CAP_BITS:
            r1 = self._maxratio_iv(w1, bits)
            r2 = self._maxratio_iv(w2, bits)
            if r1.hi < r2.lo:
                return -1
            if r2.hi < r1.lo:
                return 1
            bits *= 2
        return 0  # undecided at cap: treated as a tie

    def _maxratio_iv(self, w: FieldElement, bits: int) -> Iv:
        box = [iv.abs() for iv in self.embed(w, bits).intervals]
        lo_min, hi_min = min(b.lo for b in box), min(b.hi for b in box)
        lo_max, hi_max = max(b.lo for b in box), max(b.hi for b in box)
        if lo_min <= 0:
            raise PrecisionExhausted("ratio denominator not separated from zero")
        return Iv(max(QQ(1), lo_max / hi_min), hi_max / lo_min)

    def balance_unit(self, h: FieldElement) -> FieldElement:
        """Unit eps minimizing the largest embedding ratio of eps^2 h."""
        h = self.coerce(h)
        if not self.is_totally_positive(h):
            raise ValueError("balance_unit needs a totally positive element")
        r = len(self.fundamental_units)
        if r == 0:
            return self.one
        logs_h = self._log_embeddings(h)
        unit_logs = [self._log_embeddings(u) for u in self.fundamental_units]
        # least squares for log h + 2 sum k_j log eps_j ~ constant vector
        d = self.degree
        def centered(v):
            m = sum(v) / d
            return [x - m for x in v]
        y = centered(logs_h)
        g = [centered(ul) for ul in unit_logs]
        gram = [[sum(QQ(4) * g[a][nu] * g[b][nu] for nu in range(d)) for b in range(r)]
                for a in range(r)]
        rhs = [sum(QQ(-2) * g[a][nu] * y[nu] for nu in range(d)) for a in range(r)]
        try:
            kstar = mat_solve(gram, rhs)
        except ZeroDivisionError:
            kstar = [QQ(0)] * r
        base = [frac_floor(k + QQ(1, 2)) for k in kstar]
        best_eps, best_w, best_expo = None, None, None
        window = 2
        for off in sorted(itertools.product(range(-window, window + 1), repeat=r)):
            expo = tuple(b + o for b, o in zip(base, off))
            eps = self.one
            for e, fu in zip(expo, self.fundamental_units):
                eps = eps * fu ** e
            w = eps * eps * h
            if best_w is None:
                best_eps, best_w, best_expo = eps, w, expo
                continue
            c = self._maxratio_cmp(w, best_w)
            if c < 0 or (c == 0 and expo < best_expo):
                best_eps, best_w, best_expo = eps, w, expo
        if self.sign_at(best_eps, 0) < 0:
            best_eps = -best_eps
        return best_eps

    # -- effective constants tied to the unit group ------------------------------

    def d3_upper(self) -> QQ:
        """Certified rational upper bound for the trace-minimizer constant."""
        if self._d3_cache is not None:
            return self._d3_cache
        d = self.degree
        sqrt_disc = Iv(root_lower(QQ(abs(self.discriminant)), 2, 96),
                       root_upper(QQ(abs(self.discriminant)), 2, 96))
        rat, pik = _omega_ball_exact(d)
        om = trans.pow_iv(trans.pi_iv(160), QQ(pik), 160) * rat if pik else Iv.point(rat)
        val = trans.pow_iv((sqrt_disc * (1 << d)) / om, QQ(2, d), 160)
        self._d3_cache = val.hi
        return self._d3_cache

    def _unit_log_spread_upper(self) -> QQ:
        s = QQ(0)
        for u in self.fundamental_units:
            sup = QQ(0)
            for nu in range(self.degree):
                iv = self.embed_iv(u, nu, 96).abs()
                l = trans.log_iv(iv, 96)
                sup = max(sup, max(abs(l.lo), abs(l.hi)))
            s += 2 * sup
        return s

    def bounded_norm_orbit_bound(self, nbound: QQ) -> QQ:
        """Rational T with: every x of |norm| <= nbound has an associate
        with Tr(x^2) <= T."""
        d = self.degree
        s = self._unit_log_spread_upper()
        growth = trans.exp_iv(Iv.point(s), 96).hi
        base = trans.pow_iv(Iv.point(QQ(max(nbound, 1))), QQ(2, d), 96).hi
        return d * base * growth

    def lambda_effective(self, budget: int = 2_000_000) -> QQ:
        """Effective balancing ratio bound, >= 1, valid for balance_unit output."""
        if self._lambda_cache is not None:
            return self._lambda_cache
        if self.degree == 1:
            self._lambda_cache = QQ(1)
            return self._lambda_cache
        d = self.degree
        # units large at exactly one embedding
        cup = QQ(0)
        for mu in range(d):
            best_term = None
            for u in self.unit_candidates(3):
                if not u.is_integral() or abs(u.norm()) != 1:
                    continue
                box = self.embed(u, 96)
                a = box.intervals[mu].abs()
                if a.lo <= 1:
                    continue
                if not all(box.intervals[s].abs().hi < 1 for s in range(d) if s != mu):
                    continue
                num2 = a * a - 1
                term = QQ(0)
                for nuo in range(d):
                    if nuo == mu:
                        continue
                    den = box.intervals[nuo].abs()
                    den2 = 1 - den * den
                    if den2.lo <= 0:
                        raise PrecisionExhausted("unit embedding too close to 1")
                    term = max(term, (num2 / den2).hi)
                if best_term is None or term < best_term:
                    best_term = term
            if best_term is None:
                raise EnumerationBudget(f"no dominant unit found for embedding {mu}")
            cup = max(cup, best_term)
        # representatives of bounded-norm elements up to associates
        nbound_iv = trans.pow_iv(Iv.point(self.d3_upper()), QQ(d, 2), 96)
        nbound = frac_floor(nbound_iv.hi)
        tb = self.bounded_norm_orbit_bound(QQ(nbound))
        t1 = self.trace_pairing(self.one)
        cands = enumerate_below(t1, tb, budget)
        ratio_up = QQ(1)
        seen: list[FieldElement] = []
        for c in cands:
            y = self.element(c)
            n = abs(y.norm())
            if n == 0 or n > nbound:
                continue
            if any(self._is_associate(y, z) for z in seen):
                continue
            seen.append(y)
            r = self._abs_maxratio_upper(y)
            ratio_up = max(ratio_up, r)
        lam = cup * ratio_up * ratio_up
        self._lambda_cache = max(QQ(1), lam)
        return self._lambda_cache

    def _is_associate(self, a: FieldElement, b: FieldElement) -> bool:
        if not b:
            return not a
        q = a / b
        return q.is_integral() and abs(q.norm()) == 1

    def _abs_maxratio_upper(self, y: FieldElement) -> QQ:
        """Upper bound for max |y|_nu / min |y|_nu over the best associate."""
        best = None
        for u in self.unit_candidates(2):
            cand = u * y
            box = [iv.abs() for iv in self.embed(cand, 96).intervals]
            lo = min(b.lo for b in box)
            if lo <= 0:
                continue
            up = max(b.hi for b in box) / lo
            if best is None or up < best:
                best = up
        if best is None:
            raise PrecisionExhausted("associate ratios not separated from zero")
        return max(QQ(1), best)

    # -- gcd machinery (class number 1) -------------------------------------------

    def _coord_round_quotient(self, a: FieldElement, b: FieldElement) -> FieldElement:
        q = a / b
        return self.element([frac_floor(c + QQ(1, 2)) for c in q.coords])

    def bezout_gcd(self, a: FieldElement, b: FieldElement,
                   budget: int = 2_000_000) -> tuple[FieldElement, FieldElement, FieldElement]:
        """g, u, v with u*a + v*b = g and (a, b) = (g); requires class number 1."""
        a, b = self.coerce(a), self.coerce(b)
        if not a.is_integral() or not b.is_integral():
            raise ValueError("gcd needs integral inputs")
        if not a and not b:
            return self.zero, self.one, self.zero
        r0, r1 = a, b
        s0, s1 = self.one, self.zero
        t0, t1 = self.zero, self.one
        for _ in range(256):
            if not r1:
                g, u, v = r0, s0, t0
                return self._canonical_gcd(a, b, g, u, v)
            q = self._coord_round_quotient(r0, r1)
            r2 = r0 - q * r1
            if r2 and abs(r2.norm()) >= abs(r1.norm()):
                break  # rounding failed to reduce; use the search fallback
            r0, r1 = r1, r2
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        return self._search_gcd(a, b, budget)

    def _canonical_gcd(self, a, b, g, u, v):
        eta = self._canonical_associate_unit(g)
        g, u, v = eta * g, eta * u, eta * v
        if (u * a + v * b) != g:
            raise ViolationDetected("Bezout identity lost under canonicalization")
        return g, u, v

    def _canonical_associate_unit(self, g: FieldElement, kmax: int = 8) -> FieldElement:
        """Unit eta making eta*g the canonical associate (trace-minimal, lex)."""
        if not g:
            return self.one
        best_u, best_key = None, None
        for u in self.unit_candidates(kmax):
            for s in (1, -1):
                uu = self.coerce(s) * u
                cand = uu * g
                key = (cand * cand).trace()
                if best_key is None or key < best_key or (
                        key == best_key and
                        self.lex_cmp_embedding([cand], [best_u * g]) > 0):
                    best_u, best_key = uu, key
        return best_u

    def _ideal_z_basis(self, a: FieldElement, b: FieldElement) -> list[FieldElement]:
        d = self.degree
        cols = []
        for gen in (a, b):
            for j in range(d):
                cols.append([int(c) for c in (gen * self.basis_element(j)).coords])
        h = _zz_column_hnf([[cols[j][i] for j in range(len(cols))] for i in range(d)])
        basis = []
        for j in range(len(h[0])):
            col = [h[i][j] for i in range(d)]
            if any(col):
                basis.append(self.element(col))
        if len(basis) != d:
            raise ViolationDetected("ideal lattice is not full rank")
        return basis

    def _search_gcd(self, a, b, budget):
        nbound = min(x for x in (abs(a.norm()), abs(b.norm())) if x > 0)
        basis = self._ideal_z_basis(a, b)
        d = self.degree
        q = [[QQ(0)] * d for _ in range(d)]
        for i in range(d):
            for j in range(i, d):
                q[i][j] = q[j][i] = (basis[i] * basis[j]).trace()
        tb = self.bounded_norm_orbit_bound(nbound)
        best, best_n = None, None
        for c in enumerate_below(q, tb, budget):
            x = self.zero
            for ci, bi in zip(c, basis):
                x = x + self.coerce(ci) * bi
            n = abs(x.norm())
            if n == 0:
                continue
            if best_n is None or n < best_n:
                best, best_n = x, n
        if best is None or (a / best) is None:
            raise ViolationDetected("ideal has no small generator; not a PID input?")
        g = best
        for gen in (a, b):
            if not (gen / g).is_integral():
                raise ViolationDetected("minimal-norm ideal element fails to divide")
        u, v = self._solve_bezout(a, b, g)
        return self._canonical_gcd(a, b, g, u, v)

    def _solve_bezout(self, a, b, g):
        d = self.degree
        cols = []
        for gen in (a, b):
            for j in range(d):
                cols.append([int(c) for c in (gen * self.basis_element(j)).coords])
        m = [[cols[j][i] for j in range(2 * d)] for i in range(d)]
        z = _zz_solve(m, [int(c) for c in g.coords])
        if z is None:
            raise ViolationDetected("gcd candidate is not in the ideal")
        u = self.element(z[:d])
        v = self.element(z[d:])
        return u, v

    def format_element(self, a: FieldElement) -> str:
        parts = []
        for c, nm in zip(a.coords, self.basis_names):
            if not c:
                continue
            parts.append(frac_str(c) if nm == self.basis_names[0]
                         else f"{frac_str(c)}*{nm}")
        return " + ".join(parts) if parts else "0"

    def parse_element(self, text: str) -> FieldElement:
        from .errors import FormFileError
        coords = [QQ(0)] * self.degree
        text = text.strip()
        if text == "0":
            return self.zero
        for tok in text.split(" + "):
            tok = tok.strip()
            if not tok:
                raise FormFileError("empty term in element literal")
            if "*" in tok:
                c, nm = tok.split("*", 1)
                if nm not in self.basis_names:
                    raise FormFileError(f"unknown basis name {nm!r}")
                coords[self.basis_names.index(nm)] += QQ(c)
            else:
                coords[0] += QQ(tok)
        return self.element(coords)

    def __repr__(self):
        return f"Field({self.name}, degree={self.degree}, disc={self.discriminant})"


# ---------------------------------------------------------------------------
# small helpers shared above

def _omega_ball_exact(n: int) -> tuple[QQ, int]:
    """Unit-ball volume as (rational factor, power of pi)."""
    import math as _m
    if n % 2 == 0:
        return QQ(1, _m.factorial(n // 2)), n // 2
    k = (n + 1) // 2
    return QQ(2 ** (n + 1) * _m.factorial(k), _m.factorial(n + 1)), (n - 1) // 2


def _iv_matrix_inverse(rows: list[list[Iv]]) -> list[list[Iv]]:
    n = len(rows)
    a = [row[:] + [Iv.point(QQ(1)) if i == j else Iv.point(QQ(0))
                   for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n)
                    if a[r][col].strict_sign() is not None), None)
        if piv is None:
            raise PrecisionExhausted("interval matrix inverse: pivot straddles zero")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _zz_column_hnf(m: list[list[int]]) -> list[list[int]]:
    """Column echelon form over the integers (rows x cols, cols reduced)."""
    rows = len(m)
    a = [row[:] for row in m]
    cols = len(a[0])
    piv_col = 0
    for i in range(rows):
        if piv_col >= cols:
            break
        while True:
            nz = [j for j in range(piv_col, cols) if a[i][j] != 0]
            if not nz:
                break
            if len(nz) == 1:
                j = nz[0]
                if j != piv_col:
                    for r in range(rows):
                        a[r][j], a[r][piv_col] = a[r][piv_col], a[r][j]
                break
            nz.sort(key=lambda j: abs(a[i][j]))
            j0, j1 = nz[0], nz[1]
            qf = a[i][j1] // a[i][j0]
            for r in range(rows):
                a[r][j1] -= qf * a[r][j0]
        if a[i][piv_col] != 0:
            if a[i][piv_col] < 0:
                for r in range(rows):
                    a[r][piv_col] = -a[r][piv_col]
            piv_col += 1
    return a


def _zz_solve(m: list[list[int]], rhs: list[int]) -> list[int] | None:
    """One integer solution of m z = rhs, or None (m: d x k, k >= d)."""
    rows, cols = len(m), len(m[0])
    a = [row[:] for row in m]
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    piv_col = 0
    pivots = []
    for i in range(rows):
        if piv_col >= cols:
            break
        while True:
            nz = [j for j in range(piv_col, cols) if a[i][j] != 0]
            if not nz:
                break
            if len(nz) == 1:
                j = nz[0]
                if j != piv_col:
                    for r in range(rows):
                        a[r][j], a[r][piv_col] = a[r][piv_col], a[r][j]
                    for r in range(cols):
                        u[r][j], u[r][piv_col] = u[r][piv_col], u[r][j]
                break
            nz.sort(key=lambda j: abs(a[i][j]))
            j0, j1 = nz[0], nz[1]
            qf = a[i][j1] // a[i][j0]
            for r in range(rows):
                a[r][j1] -= qf * a[r][j0]
            for r in range(cols):
                u[r][j1] -= qf * u[r][j0]
        if piv_col < cols and a[i][piv_col] != 0:
            pivots.append((i, piv_col))
            piv_col += 1
    y = [0] * cols
    resid = rhs[:]
    for i, j in pivots:
        # lower-triangular structure in pivot order: solve forward
        val = resid[i]
        if val % a[i][j] != 0:
            return None
        y[j] = val // a[i][j]
        for r in range(rows):
            resid[r] -= a[r][j] * y[j]
    if any(resid):
        return None
    return [sum(u[r][j] * y[j] for j in range(cols)) for r in range(cols)]
