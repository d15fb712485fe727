"""Complex structures, compatible metrics and Hermitian triples."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import ValidationError
from .exactnum import (
    ZERO,
    RatMatrix,
    Subspace,
    determinant,
    identity,
    is_positive_definite,
    is_symmetric,
    mat_scale,
    matmul,
    matvec,
    shape,
    to_matrix,
    transpose,
    unit,
    vec_add,
)
from .forms import AlternatingForm
from .liealg import LieAlgebra


class ComplexStructure:
    """Endomorphism J, stored as a matrix whose columns are ``J e_i``."""

    def __init__(self, matrix):
        self.matrix: RatMatrix = to_matrix(matrix)
        n, m = shape(self.matrix)
        if n != m:
            raise ValueError("J must be square")
        self.dim = n
        self.pairs: tuple[tuple[int, int], ...] | None = None

    @classmethod
    def from_pairs(cls, dim: int, pairs: Sequence[tuple[int, int]]) -> "ComplexStructure":
        """``J e_a = e_b`` and ``J e_b = -e_a`` for each 1-based pair (a, b)."""
        seen = [i for p in pairs for i in p]
        if sorted(seen) != list(range(1, dim + 1)):
            raise ValidationError(
                "pairs_cover",
                f"J pairs must cover each index 1..{dim} exactly once, got {list(pairs)}",
                witness=sorted(seen),
            )
        cols = [[ZERO] * dim for _ in range(dim)]
        for a, b in pairs:
            cols[a - 1][b - 1] = Fraction(1)
            cols[b - 1][a - 1] = Fraction(-1)
        J = cls(transpose(to_matrix(cols)))
        J.pairs = tuple((int(a), int(b)) for a, b in pairs)
        return J

    def __eq__(self, other):
        return isinstance(other, ComplexStructure) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        if self.pairs is not None:
            return f"ComplexStructure(pairs={list(self.pairs)})"
        return f"ComplexStructure(dim={self.dim})"

    def apply(self, v: Sequence) -> tuple:
        return matvec(self.matrix, v)

    def column(self, i: int) -> dict[int, Fraction]:
        """``J e_i`` as a sparse vector (0-based)."""
        return {k: self.matrix[k][i] for k in range(self.dim) if self.matrix[k][i]}

    def apply_sparse(self, v: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, c in v.items():
            for k in range(self.dim):
                x = self.matrix[k][i]
                if x:
                    out[k] = out.get(k, ZERO) + c * x
        return {k: x for k, x in out.items() if x}

    def detect_pairs(self) -> tuple[tuple[int, int], ...] | None:
        """Recover the pairs shorthand if J is of that shape."""
        n = self.dim
        pairs = []
        used = set()
        for a in range(n):
            if a in used:
                continue
            col = self.column(a)
            if len(col) != 1:
                return None
            (b, c), = col.items()
            if c != 1 or b in used or b == a or self.column(b) != {a: Fraction(-1)}:
                return None
            pairs.append((a + 1, b + 1))
            used.update((a, b))
        return tuple(pairs)


class Metric:
    """Symmetric positive-definite bilinear form (positivity checked on validation)."""

    def __init__(self, matrix):
        self.matrix: RatMatrix = to_matrix(matrix)
        n, m = shape(self.matrix)
        if n != m:
            raise ValueError("metric must be square")
        self.dim = n

    @classmethod
    def identity(cls, dim: int) -> "Metric":
        return cls(identity(dim))

    def scaled(self, lam) -> "Metric":
        return Metric(mat_scale(lam, self.matrix))

    def is_identity(self) -> bool:
        return self.matrix == identity(self.dim)

    def __eq__(self, other):
        return isinstance(other, Metric) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return "Metric(identity)" if self.is_identity() else f"Metric(dim={self.dim})"

    def __call__(self, u, v) -> Fraction:
        return sum((u[i] * self.matrix[i][j] * v[j] for i in range(self.dim) if u[i]
                    for j in range(self.dim) if v[j]), ZERO)


def check_almost_complex(J: ComplexStructure) -> None:
    """Raise :class:`ValidationError` unless ``J @ J == -Id`` exactly."""
    if J.dim % 2:
        raise ValueError(f"a complex structure needs even dimension, got {J.dim}")
    sq = matmul(J.matrix, J.matrix)
    for i in range(J.dim):
        for j in range(J.dim):
            want = -1 if i == j else 0
            if sq[i][j] != want:
                raise ValidationError(
                    "J_square",
                    f"(J^2)[{i + 1},{j + 1}] = {sq[i][j]}, expected {want}",
                    witness=(i + 1, j + 1),
                )


def nijenhuis(L: LieAlgebra, J: ComplexStructure, i: int, j: int) -> tuple:
    """``[Je_i,Je_j] - [e_i,e_j] - J[Je_i,e_j] - J[e_i,Je_j]`` for 0-based i, j."""
    n = L.dim
    ei, ej = unit(n, i), unit(n, j)
    Jei, Jej = J.apply(ei), J.apply(ej)
    out = L.bracket(Jei, Jej)
    out = tuple(a - b for a, b in zip(out, L.bracket(ei, ej)))
    out = tuple(a - b for a, b in zip(out, J.apply(L.bracket(Jei, ej))))
    out = tuple(a - b for a, b in zip(out, J.apply(L.bracket(ei, Jej))))
    return out


def nijenhuis_check(L: LieAlgebra, J: ComplexStructure) -> list[tuple[tuple[int, int], tuple]]:
    """All 1-based basis pairs i<j with nonzero Nijenhuis value; empty means integrable."""
    if L.dim != J.dim:
        raise ValueError(f"algebra has dimension {L.dim}, J has dimension {J.dim}")
    bad = []
    for i, j in combinations(range(L.dim), 2):
        v = nijenhuis(L, J, i, j)
        if any(v):
            bad.append(((i + 1, j + 1), v))
    return bad


def check_compatibility(J: ComplexStructure, g: Metric) -> None:
    """Raise unless ``J^T g J == g``."""
    if J.dim != g.dim:
        raise ValueError(f"J has dimension {J.dim}, metric has dimension {g.dim}")
    lhs = matmul(matmul(transpose(J.matrix), g.matrix), J.matrix)
    for i in range(g.dim):
        for j in range(g.dim):
            if lhs[i][j] != g.matrix[i][j]:
                raise ValidationError(
                    "compatibility",
                    f"g(Je{i + 1}, Je{j + 1}) = {lhs[i][j]} but g(e{i + 1}, e{j + 1}) = {g.matrix[i][j]}",
                    witness=(i + 1, j + 1),
                )


def is_compatible(J: ComplexStructure, g: Metric) -> bool:
    try:
        check_compatibility(J, g)
    except ValidationError:
        return False
    return True


def fundamental_form(J: ComplexStructure, g: Metric) -> AlternatingForm:
    """``omega(x, y) = g(Jx, y)``."""
    check_compatibility(J, g)
    # omega(e_i, e_j) = (J e_i)^T g e_j = (J^T g)[i][j]
    Jtg = matmul(transpose(J.matrix), g.matrix)
    return AlternatingForm.from_values(g.dim, 2, lambda t: Jtg[t[0]][t[1]])


def is_abelian_J(L: LieAlgebra, J: ComplexStructure) -> tuple[bool, tuple[int, int] | None]:
    """Whether ``[Jx, Jy] = [x, y]`` on all basis pairs; else the first failing 1-based pair."""
    n = L.dim
    for i, j in combinations(range(n), 2):
        ei, ej = unit(n, i), unit(n, j)
        if L.bracket(J.apply(ei), J.apply(ej)) != L.bracket(ei, ej):
            return False, (i + 1, j + 1)
    return True, None


@dataclass
class HermitianTriple:
    """A Lie algebra with complex structure and compatible metric.

    Construction runs every validity check and raises
    :class:`~sktnil.errors.ValidationError` naming the first violated axiom.
    Pass ``validate=False`` only for data already known to be valid.
    """

    L: LieAlgebra
    J: ComplexStructure
    g: Metric
    name: str | None = None
    provenance: dict = field(default_factory=dict)
    validate: bool = field(default=True, repr=False, compare=False)
    validated: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not (self.L.dim == self.J.dim == self.g.dim):
            raise ValueError(
                f"dimension mismatch: algebra {self.L.dim}, J {self.J.dim}, metric {self.g.dim}"
            )
        if self.validate:
            self.run_checks()

    def __eq__(self, other):
        if not isinstance(other, HermitianTriple):
            return NotImplemented
        return (self.L, self.J, self.g) == (other.L, other.J, other.g)

    def __hash__(self):
        return hash((self.L, self.J, self.g))

    @property
    def dim(self) -> int:
        return self.L.dim

    def run_checks(self) -> dict:
        flags = {"jacobi": False, "j_square": False, "integrable": False, "compatible": False}
        self.validated = flags
        bad = self.L.jacobi_check()
        if bad:
            v = bad[0]
            raise ValidationError("jacobi", str(v), witness=v.triple)
        flags["jacobi"] = True
        check_almost_complex(self.J)
        flags["j_square"] = True
        bad_n = nijenhuis_check(self.L, self.J)
        if bad_n:
            pair, val = bad_n[0]
            raise ValidationError(
                "nijenhuis",
                f"N(e{pair[0]}, e{pair[1]}) = {[str(x) for x in val]}",
                witness=pair,
            )
        flags["integrable"] = True
        G = self.g.matrix
        if not is_symmetric(G):
            i, j = next((i, j) for i in range(len(G)) for j in range(i) if G[i][j] != G[j][i])
            raise ValidationError(
                "metric_symmetric", f"g[{i + 1}][{j + 1}] != g[{j + 1}][{i + 1}]", witness=(i + 1, j + 1)
            )
        if not is_positive_definite(G):
            k = next(k for k in range(1, len(G) + 1) if determinant(tuple(row[:k] for row in G[:k])) <= 0)
            raise ValidationError(
                "metric_positive_definite",
                f"leading principal minor of order {k} is not positive",
                witness=("leading_minor", k),
            )
        check_compatibility(self.J, self.g)
        flags["compatible"] = True
        return flags

    @property
    def is_valid(self) -> bool:
        return bool(self.validated) and all(self.validated.values())

    def with_metric(self, g: Metric) -> "HermitianTriple":
        return HermitianTriple(self.L, self.J, g, name=self.name, provenance=dict(self.provenance))

    def fundamental_form(self) -> AlternatingForm:
        return fundamental_form(self.J, self.g)

    def is_abelian_J(self) -> bool:
        return is_abelian_J(self.L, self.J)[0]


def center_is_J_invariant(T: HermitianTriple) -> bool:
    return T.L.center().is_invariant(T.J.matrix)


def lemma_3_4_sample(n: int) -> list[tuple]:
    """Basis vectors and all pairwise sums ``e_i + e_j``."""
    vecs = [unit(n, i) for i in range(n)]
    vecs += [vec_add(unit(n, i), unit(n, j)) for i, j in combinations(range(n), 2)]
    return vecs


def center_bracket_equivalence(T: HermitianTriple) -> list[tuple]:
    """Sampled vectors Y where ``Y in center`` and ``[Y, JY] = 0`` disagree.

    For an SKT triple with 2-step (or abelian) algebra the list is empty.
    """
    z = T.L.center()
    bad = []
    for y in lemma_3_4_sample(T.dim):
        central = z.contains(y)
        flat = not any(T.L.bracket(y, T.J.apply(y)))
        if central != flat:
            bad.append(y)
    return bad


def restrict_to_subspace(T: HermitianTriple, S: Subspace, name: str | None = None) -> HermitianTriple:
    """The triple induced on a J-invariant subalgebra S, in S's canonical basis."""
    L, J, g = T.L, T.J, T.g
    if S.ambient_dim != T.dim:
        raise ValueError("subspace dimension mismatch")
    if not S.is_invariant(J.matrix):
        raise ValidationError("J_invariant", "subspace is not J-invariant", witness=S.basis)
    basis = S.basis
    m = len(basis)

    def br(i, j):
        v = L.bracket(basis[i], basis[j])
        if not S.contains(v):
            raise ValidationError(
                "subalgebra", f"bracket of basis vectors {i + 1},{j + 1} leaves the subspace", witness=(i + 1, j + 1)
            )
        return S.coordinates(v)

    Ln = LieAlgebra.from_function(m, br)
    Jcols = [S.coordinates(J.apply(b)) for b in basis]
    Jn = ComplexStructure(transpose(Jcols))
    Jn.pairs = Jn.detect_pairs()
    gn = Metric(tuple(tuple(g(u, v) for v in basis) for u in basis))
    return HermitianTriple(Ln, Jn, gn, name=name)
