"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always normalized, positive
denominator).  Vectors are tuples of Fractions, matrices are tuples of row
tuples.  Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple
RatMatrix = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction.

    Floats are refused: they would silently smuggle rounding into exact data.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip().replace("−", "-")
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            p, q = int(num), int(den)
        except ValueError:
            raise ValueError(f"not a rational: {text!r}") from None
        if q == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return Fraction(p, q)
    try:
        return Fraction(int(s))
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_matrix(rows: Iterable[Iterable]) -> RatMatrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def zeros(rows: int, cols: int) -> RatMatrix:
    return tuple((ZERO,) * cols for _ in range(rows))


def identity(n: int) -> RatMatrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def unit(n: int, i: int) -> Vector:
    """The i-th standard basis vector (0-based position)."""
    return tuple(ONE if k == i else ZERO for k in range(n))


def shape(M: RatMatrix) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: RatMatrix) -> RatMatrix:
    return tuple(zip(*M)) if M else ()


def matmul(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    if shape(A)[1] != len(B):
        raise ValueError(f"shape mismatch: {shape(A)} @ {shape(B)}")
    Bt = transpose(B)
    return tuple(
        tuple(sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in Bt)
        for row in A
    )


def matvec(M: RatMatrix, v: Sequence) -> Vector:
    if M and len(M[0]) != len(v):
        raise ValueError("shape mismatch in matvec")
    return tuple(sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in M)


def mat_add(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(c, A: RatMatrix) -> RatMatrix:
    c = Fraction(c)
    return tuple(tuple(c * a for a in row) for row in A)


def is_zero_matrix(M: RatMatrix) -> bool:
    return all(not x for row in M for x in row)


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Sequence) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def inner(g: RatMatrix, u: Sequence, v: Sequence) -> Fraction:
    """Bilinear form ``u^T g v``."""
    return dot(u, matvec(g, v))


def is_zero_vector(v: Sequence) -> bool:
    return not any(v)


def rref(rows: Sequence[Sequence]) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form.  Zero rows are dropped.

    Returns the nonzero rows and their pivot columns.
    """
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(M: RatMatrix) -> int:
    return len(rref(M)[0])


def determinant(M: RatMatrix) -> Fraction:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    m = [list(row) for row in M]
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        p = m[c][c]
        det *= p
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def inverse(M: RatMatrix) -> RatMatrix:
    n = len(M)
    aug = [list(row) + list(e) for row, e in zip(M, identity(n))]
    red, piv = rref(aug)
    if tuple(piv[:n]) != tuple(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def solve(M: RatMatrix, b: Sequence) -> Vector | None:
    """One solution of ``M x = b`` (free variables zero), or None."""
    rows, cols = shape(M)
    aug = [list(M[i]) + [Fraction(b[i])] for i in range(rows)]
    red, piv = rref(aug)
    if piv and piv[-1] == cols:
        return None
    x = [ZERO] * cols
    for row, p in zip(red, piv):
        x[p] = row[cols]
    return tuple(x)


def is_symmetric(M: RatMatrix) -> bool:
    return all(M[i][j] == M[j][i] for i in range(len(M)) for j in range(i))


def is_positive_definite(M: RatMatrix) -> bool:
    """Sylvester's criterion with exact leading principal minors."""
    n, m = shape(M)
    if n != m:
        raise ValueError("positive definiteness needs a square matrix")
    if not is_symmetric(M):
        raise ValueError("positive definiteness needs a symmetric matrix")
    return all(determinant(tuple(row[:k] for row in M[:k])) > 0 for k in range(1, n + 1))


class Subspace:
    """A linear subspace of Q^n held as a canonical RREF basis.

    Two subspaces are equal iff their representations are equal.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [tuple(Fraction(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError(
                    f"vector of length {len(v)} in ambient dimension {ambient_dim}"
                )
        self.ambient_dim = ambient_dim
        self.basis, self.pivots = rref(vecs) if vecs else ((), ())

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, identity(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        """Span of e_i for the given 1-based indices."""
        return cls(n, [unit(n, i - 1) for i in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(format_rational(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(dim={self.dim}/{self.ambient_dim}, [{rows}])"

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        # RREF makes membership a direct reconstruction from pivot entries.
        rebuilt = [ZERO] * self.ambient_dim
        for row, p in zip(self.basis, self.pivots):
            c = Fraction(v[p])
            if c:
                for k, x in enumerate(row):
                    if x:
                        rebuilt[k] += c * x
        return all(Fraction(a) == b for a, b in zip(v, rebuilt))

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of v in ``self.basis`` (v must lie in the subspace)."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return tuple(Fraction(v[p]) for p in self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("dimension mismatch")
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("dimension mismatch")
        if not self.dim or not other.dim:
            return Subspace.zero(self.ambient_dim)
        # a.B1 = b.B2  <=>  (a, -b) in ker [B1; -B2]^T
        stacked = transpose(self.basis + tuple(vec_scale(-1, r) for r in other.basis))
        ker = kernel(stacked)
        vecs = []
        for coeffs in ker.basis:
            a = coeffs[: self.dim]
            vecs.append(
                tuple(
                    sum((c * row[k] for c, row in zip(a, self.basis) if c), ZERO)
                    for k in range(self.ambient_dim)
                )
            )
        return Subspace(self.ambient_dim, vecs)

    def image(self, M: RatMatrix) -> "Subspace":
        """Image of the subspace under the linear map with matrix M."""
        return Subspace(len(M), [matvec(M, v) for v in self.basis])

    def is_invariant(self, M: RatMatrix) -> bool:
        return all(self.contains(matvec(M, v)) for v in self.basis)


def kernel(M: RatMatrix) -> Subspace:
    """Null space of M as a canonical Subspace."""
    rows, cols = shape(M)
    if rows == 0:
        return Subspace.whole(cols)
    red, piv = rref(M)
    free = [c for c in range(cols) if c not in piv]
    vecs = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for row, p in zip(red, piv):
            v[p] = -row[f]
        vecs.append(v)
    return Subspace(cols, vecs)


def orth_complement(S: Subspace, g: RatMatrix) -> Subspace:
    """``{x : g(x, s) = 0 for all s in S}``."""
    n = len(g)
    if S.ambient_dim != n:
        raise ValueError(
            f"subspace lives in dimension {S.ambient_dim}, metric in dimension {n}"
        )
    if not S.dim:
        return Subspace.whole(n)
    return kernel(tuple(matvec(g, s) for s in S.basis))


def gram(vectors: Sequence[Sequence], g: RatMatrix) -> RatMatrix:
    gv = [matvec(g, v) for v in vectors]
    return tuple(tuple(dot(u, w) for w in gv) for u in vectors)


def orthogonal_projection(S: Subspace, g: RatMatrix, v: Sequence) -> Vector:
    """g-orthogonal projection of v onto S."""
    if not S.dim:
        return (ZERO,) * S.ambient_dim
    G = gram(S.basis, g)
    rhs = tuple(inner(g, b, v) for b in S.basis)
    coeffs = matvec(inverse(G), rhs)
    out = [ZERO] * S.ambient_dim
    for c, b in zip(coeffs, S.basis):
        if c:
            for k, x in enumerate(b):
                out[k] += c * x
    return tuple(out)
