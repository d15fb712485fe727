"""Lie algebras given by exact structure constants.

Basis labels are 1-based, ``[e_i, e_j] = sum_k c^k_ij e_k`` with only
``i < j`` stored.  A printed ``de^k = -e^{ij}`` therefore reads as
``[e_i, e_j] = e_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exactnum import (
    ZERO,
    RatMatrix,
    Subspace,
    Vector,
    inverse,
    kernel,
    transpose,
    unit,
)


@dataclass(frozen=True)
class JacobiViolation:
    triple: tuple[int, int, int]
    defect: Vector

    def __str__(self):
        i, j, k = self.triple
        return f"Jacobi fails at (e{i}, e{j}, e{k}): cyclic sum = {list(map(str, self.defect))}"


class LieAlgebra:
    """Finite-dimensional algebra with antisymmetric bracket.

    ``brackets`` maps ``(i, j)`` with ``1 <= i < j <= dim`` to ``{k: coeff}``.
    Construction does not check Jacobi; call :meth:`jacobi_check` (the file
    parser and :class:`~sktnil.hermitian.HermitianTriple` always do).
    """

    def __init__(self, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]] | None = None):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        self.dim = dim
        clean: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), targets in (brackets or {}).items():
            if not (1 <= i < j <= dim):
                raise ValueError(f"bracket key ({i}, {j}) must satisfy 1 <= i < j <= {dim}")
            row = {}
            for k, c in targets.items():
                if not 1 <= k <= dim:
                    raise ValueError(f"bracket target e{k} out of range 1..{dim}")
                c = Fraction(c)
                if c:
                    row[k] = c
            if row:
                clean[(i, j)] = dict(sorted(row.items()))
        self.brackets = dict(sorted(clean.items()))
        # 0-based dense table of sparse results, antisymmetry filled in
        self._table: list[list[dict[int, Fraction]]] = [[{} for _ in range(dim)] for _ in range(dim)]
        for (i, j), row in self.brackets.items():
            self._table[i - 1][j - 1] = {k - 1: c for k, c in row.items()}
            self._table[j - 1][i - 1] = {k - 1: -c for k, c in row.items()}

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.brackets == other.brackets

    def __hash__(self):
        return hash((self.dim, tuple((k, tuple(v.items())) for k, v in self.brackets.items())))

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, {len(self.brackets)} nonzero brackets)"

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls(dim, {})

    @classmethod
    def from_function(cls, dim: int, br) -> "LieAlgebra":
        """Build from a callable ``br(i, j) -> vector`` on 0-based basis positions."""
        out = {}
        for i, j in combinations(range(dim), 2):
            v = br(i, j)
            row = {k + 1: c for k, c in enumerate(v) if c}
            if row:
                out[(i + 1, j + 1)] = row
        return cls(dim, out)

    def basis_bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """Sparse ``[e_i, e_j]`` on 0-based positions (shared; do not mutate)."""
        return self._table[i][j]

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError(f"vectors must have length {self.dim}")
        out = [ZERO] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            row = self._table[a]
            for b, yb in enumerate(y):
                if not yb or a == b:
                    continue
                for k, c in row[b].items():
                    out[k] += xa * yb * c
        return tuple(Fraction(v) for v in out)

    def sparse_bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Bracket of sparse vectors ``{position: coeff}``, result sparse."""
        out: dict[int, Fraction] = {}
        for a, xa in x.items():
            row = self._table[a]
            for b, yb in y.items():
                for k, c in row[b].items():
                    out[k] = out.get(k, ZERO) + xa * yb * c
        return {k: v for k, v in out.items() if v}

    def ad(self, x: Sequence) -> RatMatrix:
        """Matrix of ``ad(x)`` (columns are images of basis vectors)."""
        cols = [self.bracket(x, unit(self.dim, b)) for b in range(self.dim)]
        return transpose(cols) if cols else ()

    def jacobi_check(self) -> list[JacobiViolation]:
        """Every triple i<j<k (1-based) where the cyclic sum is nonzero; empty means ok."""
        bad = []
        for i, j, k in combinations(range(self.dim), 3):
            total: dict[int, Fraction] = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                inner = self._table[a][b]
                for p, cp in inner.items():
                    for q, cq in self._table[p][c].items():
                        total[q] = total.get(q, ZERO) + cp * cq
            if any(total.values()):
                defect = tuple(total.get(q, ZERO) for q in range(self.dim))
                bad.append(JacobiViolation((i + 1, j + 1, k + 1), defect))
        return bad

    def is_lie(self) -> bool:
        return not self.jacobi_check()

    def bracket_space(self, S: Subspace, T: Subspace) -> Subspace:
        """Span of ``[s, t]`` over basis vectors of S and T."""
        vecs = [self.bracket(s, t) for s in S.basis for t in T.basis]
        return Subspace(self.dim, [v for v in vecs if any(v)])

    def derived(self) -> Subspace:
        vecs = []
        for row in self.brackets.values():
            v = [ZERO] * self.dim
            for k, c in row.items():
                v[k - 1] = c
            vecs.append(v)
        return Subspace(self.dim, vecs)

    def central_series(self) -> list[Subspace]:
        """``g_0 = g, g_i = [g, g_{i-1}]`` until the terms stop changing."""
        whole = Subspace.whole(self.dim)
        series = [whole]
        while True:
            nxt = self.bracket_space(whole, series[-1])
            if nxt == series[-1]:
                return series
            series.append(nxt)
            if not nxt.dim:
                return series

    def nilpotency_step(self) -> int | None:
        """Least k with ``g_k = 0``; None if the algebra is not nilpotent."""
        series = self.central_series()
        if series[-1].dim:
            return None
        return len(series) - 1

    def is_nilpotent(self) -> bool:
        return self.nilpotency_step() is not None

    def center(self) -> Subspace:
        # z . c^k_{ij} summed over i must vanish for every (j, k)
        rows = []
        for j in range(self.dim):
            for k in range(self.dim):
                row = [self._table[i][j].get(k, ZERO) for i in range(self.dim)]
                if any(row):
                    rows.append(row)
        if not rows:
            return Subspace.whole(self.dim)
        return kernel(tuple(rows))

    def is_ideal(self, S: Subspace) -> bool:
        if S.ambient_dim != self.dim:
            raise ValueError(f"subspace in dimension {S.ambient_dim}, algebra in dimension {self.dim}")
        return all(
            S.contains(self.bracket(unit(self.dim, a), s)) for a in range(self.dim) for s in S.basis
        )

    def change_basis(self, P: RatMatrix) -> "LieAlgebra":
        """Structure constants in the basis whose vectors are the columns of P."""
        n = self.dim
        Pinv = inverse(P)
        cols = transpose(P)

        def br(i, j):
            v = self.bracket(cols[i], cols[j])
            return tuple(sum((Pinv[r][k] * v[k] for k in range(n) if v[k]), ZERO) for r in range(n))

        return LieAlgebra.from_function(n, br)

    def permuted(self, order: Sequence[int]) -> "LieAlgebra":
        """Relabel: new basis vector number ``p+1`` is old ``e_{order[p]}`` (1-based)."""
        if sorted(order) != list(range(1, self.dim + 1)):
            raise ValueError("order must be a permutation of 1..dim")
        new_of = {old: new for new, old in enumerate(order, start=1)}
        out: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in self.brackets.items():
            a, b = new_of[i], new_of[j]
            sign = 1
            if a > b:
                a, b, sign = b, a, -1
            out[(a, b)] = {new_of[k]: sign * c for k, c in row.items()}
        return LieAlgebra(self.dim, out)


def direct_sum(*algebras: LieAlgebra) -> LieAlgebra:
    out = {}
    offset = 0
    for L in algebras:
        for (i, j), row in L.brackets.items():
            out[(i + offset, j + offset)] = {k + offset: c for k, c in row.items()}
        offset += L.dim
    return LieAlgebra(offset, out)
