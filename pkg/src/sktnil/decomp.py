"""Codimension-2 analysis: an ideal n with a J-invariant complement plane.

Writing ``g = span{e1, e2} + n`` with ``J e1 = e2``, the bracket of g is
fixed by ``A = ad(e1)|n``, ``B = ad(e2)|n``, ``X = [e1, e2]`` and the
bracket of n.  The adapted basis is only ever checked, never constructed:
callers name the complement pair.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .bismut import ce_differential, is_skt, theta_action
from .errors import PreconditionError, report_falsification
from .exactnum import (
    ZERO,
    RatMatrix,
    Subspace,
    inverse,
    mat_sub,
    matmul,
    orth_complement,
    orthogonal_projection,
    transpose,
    unit,
)
from .forms import AlternatingForm, basis_form
from .hermitian import HermitianTriple, restrict_to_subspace
from .liealg import LieAlgebra

log = logging.getLogger(__name__)


def adapted_triangular_check(L: LieAlgebra) -> bool:
    """Every nonzero ``c^k_ij`` (i < j) has ``j < k``."""
    return all(k > j for (i, j), row in L.brackets.items() for k in row)


@dataclass
class Codim2Data:
    complement: tuple[int, int]
    e1: tuple
    e2: tuple
    embedding: tuple  # n-basis vectors in ambient coordinates
    n: LieAlgebra
    A: RatMatrix
    B: RatMatrix
    X: tuple
    triple_n: HermitianTriple = field(repr=False)

    @property
    def ambient_dim(self) -> int:
        return len(self.e1)


@dataclass
class VZSplit:
    v: Subspace
    z: Subspace


def _plane(T: HermitianTriple, complement) -> tuple[tuple, tuple]:
    i, j = complement
    n = T.dim
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise PreconditionError("complement_indices", f"bad complement pair {complement} for dimension {n}")
    e1 = unit(n, i - 1)
    e2 = T.J.apply(e1)
    ej = unit(n, j - 1)
    if e2 != ej and e2 != tuple(-x for x in ej):
        raise PreconditionError(
            "complement_not_J_invariant",
            f"J e{i} is not +/- e{j}, so span{{e{i}, e{j}}} is not a J-invariant plane",
        )
    return e1, e2


def split_codim2(T: HermitianTriple, complement: tuple[int, int]) -> Codim2Data:
    """Extract ``(A, B, X, [.,.]_n)`` for the g-orthogonal complement n of a J-plane."""
    e1, e2 = _plane(T, complement)
    plane = Subspace(T.dim, [e1, e2])
    nsub = orth_complement(plane, T.g.matrix)
    if not nsub.is_invariant(T.J.matrix):
        raise PreconditionError("n_not_J_invariant", "orthogonal complement of the plane is not J-invariant")
    if not T.L.is_ideal(nsub):
        raise PreconditionError("n_not_ideal", f"complement of span{{e{complement[0]}, e{complement[1]}}} is not an ideal")
    Tn = restrict_to_subspace(T, nsub)
    basis = nsub.basis
    A_cols = [nsub.coordinates(T.L.bracket(e1, b)) for b in basis]
    B_cols = [nsub.coordinates(T.L.bracket(e2, b)) for b in basis]
    X_amb = orthogonal_projection(nsub, T.g.matrix, T.L.bracket(e1, e2))
    m = len(basis)
    return Codim2Data(
        complement=tuple(complement),
        e1=e1,
        e2=e2,
        embedding=basis,
        n=Tn.L,
        A=transpose(A_cols) if m else (),
        B=transpose(B_cols) if m else (),
        X=nsub.coordinates(X_amb),
        triple_n=Tn,
    )


def adapted_algebra(D: Codim2Data) -> LieAlgebra:
    """The algebra in the basis ``(e1, e2, n-basis...)`` built from (A, B, X, bracket_n)."""
    m = D.n.dim
    N = m + 2
    out: dict[tuple[int, int], dict[int, Fraction]] = {}
    if any(D.X):
        out[(1, 2)] = {k + 3: c for k, c in enumerate(D.X) if c}
    for c in range(m):
        a_col = {r + 3: D.A[r][c] for r in range(m) if D.A[r][c]}
        b_col = {r + 3: D.B[r][c] for r in range(m) if D.B[r][c]}
        if a_col:
            out[(1, c + 3)] = a_col
        if b_col:
            out[(2, c + 3)] = b_col
    for (i, j), row in D.n.brackets.items():
        out[(i + 2, j + 2)] = {k + 2: v for k, v in row.items()}
    return LieAlgebra(N, out)


def _adapted_change(D: Codim2Data) -> RatMatrix:
    """Columns are e1, e2, n-basis in ambient coordinates."""
    return transpose((D.e1, D.e2) + tuple(D.embedding))


def reassemble(D: Codim2Data) -> LieAlgebra:
    """Ambient algebra recovered from (A, B, X, bracket_n) alone."""
    P = _adapted_change(D)
    return adapted_algebra(D).change_basis(inverse(P))


def restrict_hermitian(T: HermitianTriple, n: Subspace, name: str | None = None) -> HermitianTriple:
    """Induced triple on a J-invariant ideal; checks SKT inheritance when T is SKT."""
    if not n.is_invariant(T.J.matrix):
        raise PreconditionError("n_not_J_invariant", "subspace is not J-invariant")
    if not T.L.is_ideal(n):
        raise PreconditionError("n_not_ideal", "subspace is not an ideal")
    Tn = restrict_to_subspace(T, n, name=name)
    if is_skt(T).is_skt and not is_skt(Tn).is_skt:
        codim = T.dim - n.dim
        if codim == 2:
            report_falsification(
                "SKT restricts to J-invariant codimension-2 ideals",
                "restriction is not SKT",
                name=T.name,
                ideal=n.basis,
            )
        else:
            log.warning("restriction to a codimension-%d J-invariant ideal is not SKT (%s)", codim, T.name)
    return Tn


def vz_split(Tn: HermitianTriple) -> VZSplit:
    """``z`` = center, ``v`` = its metric complement."""
    z = Tn.L.center()
    v = orth_complement(z, Tn.g.matrix)
    if is_skt(Tn).is_skt:
        J = Tn.J.matrix
        if not z.is_invariant(J) or not v.is_invariant(J):
            report_falsification(
                "the center of a nilpotent SKT algebra is J-invariant",
                "center or its complement is not J-invariant",
                name=Tn.name,
                center=z.basis,
            )
    return VZSplit(v=v, z=z)


def _block_vanishes(M: RatMatrix, S: Subspace, g: RatMatrix) -> bool:
    """Whether the projection of ``M|_S`` onto S is zero."""
    for s in S.basis:
        Ms = tuple(sum((M[r][c] * s[c] for c in range(len(s)) if s[c]), ZERO) for r in range(len(M)))
        if any(orthogonal_projection(S, g, Ms)):
            return False
    return True


def proof_invariants(D: Codim2Data, T: HermitianTriple) -> dict:
    """Check the structural consequences of SKT on the codimension-2 data.

    Report keys: ``integrability_relation``, ``A_z_zero``, ``B_z_zero``,
    ``A_v_zero``, ``B_v_zero``, ``X_in_z``; every failure is also logged
    as a falsification event.
    """
    if not is_skt(T).is_skt:
        raise PreconditionError("not_skt", "proof invariants need an SKT triple")
    step = D.n.nilpotency_step()
    if step is None or step > 2:
        raise PreconditionError("n_step", f"ideal n must be at most 2-step, got step {step}")
    Jn = D.triple_n.J.matrix
    gn = D.triple_n.g.matrix
    A, B = D.A, D.B
    m = D.n.dim
    report = {"complement": list(D.complement), "dim_n": m}
    if m:
        # [J, A] = J [B, J]
        lhs = mat_sub(matmul(Jn, A), matmul(A, Jn))
        rhs = matmul(Jn, mat_sub(matmul(B, Jn), matmul(Jn, B)))
        report["integrability_relation"] = lhs == rhs
    else:
        report["integrability_relation"] = True
    split = vz_split(D.triple_n)
    z, v = split.z, split.v
    report["A_z_zero"] = _block_vanishes(A, z, gn) if m else True
    report["B_z_zero"] = _block_vanishes(B, z, gn) if m else True
    report["A_v_zero"] = _block_vanishes(A, v, gn) if m else True
    report["B_v_zero"] = _block_vanishes(B, v, gn) if m else True
    report["X_in_z"] = z.contains(D.X) if m else True
    report["dim_z"] = z.dim
    report["dim_v"] = v.dim
    statements = {
        "integrability_relation": "integrability gives [J,A] = J[B,J]",
        "A_z_zero": "SKT forces A_z = 0",
        "B_z_zero": "SKT forces B_z = 0",
        "A_v_zero": "SKT forces A_v = 0",
        "B_v_zero": "SKT forces B_v = 0",
        "X_in_z": "SKT forces X in z",
    }
    for key, statement in statements.items():
        if not report[key]:
            report_falsification(statement, f"{key} failed", name=T.name, complement=D.complement)
    report["ok"] = all(report[k] for k in statements)
    return report


def derivation_defects(D: Codim2Data) -> list[tuple[str, int, int]]:
    """Basis pairs where A or B fails ``M[x,y] = [Mx,y] + [x,My]`` on n."""
    n = D.n
    m = n.dim
    bad = []
    for name, M in (("A", D.A), ("B", D.B)):
        if not m:
            continue
        cols = transpose(M)
        for a in range(m):
            for b in range(a + 1, m):
                xa, xb = unit(m, a), unit(m, b)
                br = n.bracket(xa, xb)
                lhs = tuple(sum((M[r][c] * br[c] for c in range(m) if br[c]), ZERO) for r in range(m))
                rhs = tuple(p + q for p, q in zip(n.bracket(cols[a], xb), n.bracket(xa, cols[b])))
                if lhs != rhs:
                    bad.append((name, a + 1, b + 1))
    return bad


def decomposition_identity_defects(D: Codim2Data) -> list[int]:
    """n-basis indices where ``d alpha = e1^theta(A)alpha + e2^theta(B)alpha - alpha(X)e^12 + d_n alpha`` fails.

    Everything is evaluated in the adapted basis ``(e1, e2, n-basis)``.
    """
    m = D.n.dim
    N = m + 2
    La = adapted_algebra(D)
    e_1 = basis_form(N, 1)
    e_2 = basis_form(N, 2)
    e_12 = basis_form(N, 1, 2)

    def embed(form: AlternatingForm) -> AlternatingForm:
        return AlternatingForm(N, form.degree, {tuple(i + 2 for i in k): c for k, c in form.items()})

    bad = []
    for a in range(1, m + 1):
        alpha_n = basis_form(m, a)
        lhs = ce_differential(La, embed(alpha_n))
        rhs = (
            e_1.wedge(embed(theta_action(D.A, alpha_n)))
            + e_2.wedge(embed(theta_action(D.B, alpha_n)))
            - e_12 * D.X[a - 1]
            + embed(ce_differential(D.n, alpha_n))
        )
        if lhs != rhs:
            bad.append(a)
    return bad


def coordinate_codim2_ideals(T: HermitianTriple) -> list[tuple[int, int]]:
    """Complement pairs (a, b) with ``J e_a = e_b`` whose metric complement is a J-invariant ideal."""
    out = []
    for a in range(1, T.dim + 1):
        col = T.J.column(a - 1)
        if len(col) != 1:
            continue
        (b0, c), = col.items()
        if c != 1:
            continue
        try:
            e1, e2 = _plane(T, (a, b0 + 1))
        except PreconditionError:
            continue
        nsub = orth_complement(Subspace(T.dim, [e1, e2]), T.g.matrix)
        if nsub.is_invariant(T.J.matrix) and T.L.is_ideal(nsub):
            out.append((a, b0 + 1))
    return out
