"""Quadratic forms over a number field as exact Gram matrices.

Lagrange expansion (completion of squares), determinants and norms, duals,
positivity certification, file round-tripping, and a seeded generator for
test corpora. Also the small exact matrix toolkit over K that the reduction
and decomposition pipelines share.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import FormFileError, Singular, SingularMinor
from .exact import Iv, QQ
from .numberfield import Field, FieldElement

KMatrix = tuple  # tuple of row tuples of FieldElement


# -- exact matrices over K ----------------------------------------------------

def kmat(field: Field, rows: Sequence[Sequence]) -> KMatrix:
    return tuple(tuple(field.coerce(x) for x in row) for row in rows)


def kmat_identity(field: Field, n: int) -> KMatrix:
    return tuple(tuple(field.one if i == j else field.zero for j in range(n))
                 for i in range(n))


def kmat_mul(a: KMatrix, b: KMatrix) -> KMatrix:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(m)),
                           a[0][0].field.zero) for j in range(p))
                 for i in range(n))


def kmat_transpose(a: KMatrix) -> KMatrix:
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def kmat_det(field: Field, a: KMatrix) -> FieldElement:
    n = len(a)
    rows = [list(r) for r in a]
    det = field.one
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return field.zero
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det = det * rows[col][col]
        inv = rows[col][col].inverse()
        for r in range(col + 1, n):
            if rows[r][col]:
                f = rows[r][col] * inv
                for c in range(col, n):
                    rows[r][c] = rows[r][c] - f * rows[col][c]
    return det


def kmat_inverse(field: Field, a: KMatrix) -> KMatrix:
    n = len(a)
    rows = [list(r) + [field.one if i == j else field.zero for j in range(n)]
            for i, r in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise Singular("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return tuple(tuple(r[n:]) for r in rows)


# -- Gram forms ---------------------------------------------------------------

@dataclass(frozen=True)
class GramForm:
    field: Field
    entries: KMatrix

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("Gram matrix must be symmetric")

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> FieldElement:
        return self.entries[i][j]

    def is_integral(self) -> bool:
        return all(e.is_integral() for row in self.entries for e in row)

    def apply(self, t: KMatrix) -> "GramForm":
        """Change of variables Q[T] = T^t Q T."""
        tt = kmat_transpose(t)
        return GramForm(self.field, kmat_mul(kmat_mul(tt, self.entries), t))

    def evaluate(self, x: Sequence) -> FieldElement:
        xs = [self.field.coerce(v) for v in x]
        acc = self.field.zero
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                acc = acc + e * xs[i] * xs[j]
        return acc

    def principal_block(self, k: int) -> "GramForm":
        return GramForm(self.field,
                        tuple(tuple(self.entries[i][j] for j in range(k))
                              for i in range(k)))

    def __eq__(self, other):
        return (isinstance(other, GramForm) and other.field is self.field
                and other.entries == self.entries)

    def __hash__(self):
        return hash((id(self.field), self.entries))

    @staticmethod
    def identity(field: Field, n: int) -> "GramForm":
        return GramForm(field, kmat_identity(field, n))

    @staticmethod
    def diagonal(field: Field, diag: Sequence) -> "GramForm":
        els = [field.coerce(x) for x in diag]
        return GramForm(field, tuple(tuple(els[i] if i == j else field.zero
                                           for j in range(len(els)))
                                     for i in range(len(els))))


@dataclass(frozen=True)
class LagrangeData:
    """Completion of squares Q = U^t H U, H = diag(outer), U unipotent."""

    field: Field
    outer: tuple[FieldElement, ...]
    u_rows: KMatrix

    @property
    def n(self) -> int:
        return len(self.outer)

    def inner(self, i: int, j: int) -> FieldElement:
        return self.u_rows[i][j]

    def h_matrix(self) -> KMatrix:
        f = self.field
        n = self.n
        return tuple(tuple(self.outer[i] if i == j else f.zero for j in range(n))
                     for i in range(n))

    def assemble(self) -> GramForm:
        ut = kmat_transpose(self.u_rows)
        return GramForm(self.field,
                        kmat_mul(kmat_mul(ut, self.h_matrix()), self.u_rows))


def lagrange_expand(q: GramForm) -> LagrangeData:
    """Exact outer/inner coefficients; SingularMinor on a vanishing pivot."""
    f = q.field
    n = q.n
    a = [list(row) for row in q.entries]
    outer: list[FieldElement] = []
    u = [[f.one if i == j else f.zero for j in range(n)] for i in range(n)]
    for i in range(n):
        piv = a[i][i]
        if not piv:
            raise SingularMinor(f"leading principal minor {i + 1} vanishes")
        outer.append(piv)
        inv = piv.inverse()
        for j in range(i + 1, n):
            u[i][j] = a[i][j] * inv
        for k in range(i + 1, n):
            for l in range(k, n):
                a[k][l] = a[k][l] - piv * u[i][k] * u[i][l]
                a[l][k] = a[k][l]
    return LagrangeData(f, tuple(outer), tuple(tuple(r) for r in u))


def assemble(lag: LagrangeData) -> GramForm:
    return lag.assemble()


def determinant_data(q: GramForm) -> tuple[FieldElement, QQ]:
    """(det Q over K, norm of det Q)."""
    det = kmat_det(q.field, q.entries)
    return det, det.norm()


def dual_form(q: GramForm) -> GramForm:
    """Exact inverse Gram matrix; entries in K, not usually integral."""
    return GramForm(q.field, kmat_inverse(q.field, q.entries))


def is_positive_definite(q: GramForm) -> bool:
    """True iff every leading principal minor is totally positive (exact)."""
    f = q.field
    try:
        lag = lagrange_expand(q)
    except SingularMinor:
        return False
    return all(f.is_totally_positive(h) for h in lag.outer)


def random_pd_form(field: Field, n: int, seed: int, entry_bound: int = 2,
                   diag_bound: int = 3) -> GramForm:
    """Deterministic positive definite integral form: M^t M + positive diagonal."""
    rng = random.Random(seed)
    d = field.degree
    m = kmat(field, [[field.element([rng.randint(-entry_bound, entry_bound)
                                     for _ in range(d)])
                      for _ in range(n)] for _ in range(n)])
    core = kmat_mul(kmat_transpose(m), m)
    rows = [list(r) for r in core]
    for i in range(n):
        rows[i][i] = rows[i][i] + field.coerce(1 + rng.randint(0, diag_bound))
    q = GramForm(field, tuple(tuple(r) for r in rows))
    if not is_positive_definite(q):
        raise AssertionError("generator produced a non-definite form")
    return q


# -- Humbert (per-embedding real) matrices ------------------------------------

@dataclass(frozen=True)
class HumbertMatrix:
    """One real interval matrix per embedding; the embedded image of a form."""

    components: tuple  # [nu] -> tuple of row tuples of Iv

    @property
    def d(self) -> int:
        return len(self.components)

    @staticmethod
    def from_form(q: GramForm, bits: int = 96) -> "HumbertMatrix":
        f = q.field
        n = q.n
        boxes = [[f.embed(q.entries[i][j], bits) for j in range(n)] for i in range(n)]
        comps = []
        for nu in range(f.degree):
            comps.append(tuple(tuple(boxes[i][j].intervals[nu] for j in range(n))
                               for i in range(n)))
        return HumbertMatrix(tuple(comps))


# -- form files ----------------------------------------------------------------

def form_to_text(q: GramForm) -> str:
    lines = [f"# quadratic form over {q.field.name}, n = {q.n}"]
    for row in q.entries:
        lines.append(" , ".join(q.field.format_element(e) for e in row))
    return "\n".join(lines) + "\n"


def form_from_text(field: Field, text: str) -> GramForm:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append([field.parse_element(tok) for tok in line.split(" , ")])
    if not rows:
        raise FormFileError("empty form file")
    try:
        return GramForm(field, tuple(tuple(r) for r in rows))
    except ValueError as e:
        raise FormFileError(str(e)) from e


def matrix_to_text(field: Field, m: KMatrix, title: str) -> str:
    lines = [f"# {title}"]
    for row in m:
        lines.append(" , ".join(field.format_element(e) for e in row))
    return "\n".join(lines) + "\n"


def matrix_from_text(field: Field, text: str) -> KMatrix:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append(tuple(field.parse_element(tok) for tok in line.split(" , ")))
    if not rows:
        raise FormFileError("empty matrix file")
    return tuple(rows)
