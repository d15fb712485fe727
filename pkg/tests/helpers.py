"""Builders shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from sktnil import catalog
from sktnil.compose import CompositionSpec, compose
from sktnil.exactnum import identity, inverse, matmul, transpose
from sktnil.hermitian import ComplexStructure, HermitianTriple, Metric
from sktnil.liealg import LieAlgebra

F = Fraction


def cat(name: str) -> HermitianTriple:
    return catalog.get(name).triple


def three_step_control() -> HermitianTriple:
    """6-dim 3-step algebra with an integrable J: [e1,e2]=e3, [e1,e3]=e5, [e1,e4]=e6."""
    L = LieAlgebra(6, {(1, 2): {3: F(1)}, (1, 3): {5: F(1)}, (1, 4): {6: F(1)}})
    J = ComplexStructure.from_pairs(6, [(1, 2), (3, 4), (5, 6)])
    return HermitianTriple(L, J, Metric.identity(6), name="three_step_control")


def perturbed_n6(key: tuple[int, int], validate: bool = True) -> HermitianTriple:
    """The n6_abelian triple with the sign of one bracket flipped."""
    T = cat("n6_abelian")
    b = {k: dict(v) for k, v in T.L.brackets.items()}
    b[key] = {k: -c for k, c in b[key].items()}
    return HermitianTriple(LieAlgebra(6, b), T.J, T.g, name=f"n6_flip{key}", validate=validate)


def composed_12() -> HermitianTriple:
    return compose(CompositionSpec(cat("n4_abelian"), cat("n6_abelian")))


def composed_14() -> HermitianTriple:
    return compose(CompositionSpec(cat("n4_abelian"), cat("n8_nonabelian")))


def rand_rational(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 3) -> Fraction:
    return F(rng.randint(lo, hi), rng.randint(1, den))


def random_compatible_metric(J: ComplexStructure, rng: random.Random) -> Metric:
    """``h + J^T h J`` with ``h = A^T A + I``: positive definite and J-compatible."""
    n = J.dim
    A = tuple(tuple(rand_rational(rng) for _ in range(n)) for _ in range(n))
    h = matmul(transpose(A), A)
    h = tuple(tuple(h[i][j] + (1 if i == j else 0) for j in range(n)) for i in range(n))
    JhJ = matmul(matmul(transpose(J.matrix), h), J.matrix)
    return Metric([[h[i][j] + JhJ[i][j] for j in range(n)] for i in range(n)])


def random_commuting_matrix(J: ComplexStructure, rng: random.Random):
    """Invertible rational P with PJ = JP (P = X - J X J averaged onto the commutant)."""
    n = J.dim
    while True:
        X = tuple(tuple(rand_rational(rng) for _ in range(n)) for _ in range(n))
        JXJ = matmul(matmul(J.matrix, X), J.matrix)
        P = tuple(
            tuple((X[i][j] - JXJ[i][j]) / 2 + (1 if i == j else 0) for j in range(n)) for i in range(n)
        )
        try:
            inverse(P)
        except (ValueError, ZeroDivisionError):
            continue
        return P


def random_abelian_two_step(rng: random.Random, half_v: int, half_z: int) -> HermitianTriple:
    """Brackets v x v -> z of type (1,1) for consecutive-pair J, hence J abelian and integrable."""
    nv, nz = 2 * half_v, 2 * half_z
    n = nv + nz
    J = ComplexStructure.from_pairs(n, [(2 * k + 1, 2 * k + 2) for k in range(n // 2)])
    Jm = J.matrix
    raw = {}
    for i in range(nv):
        for j in range(i + 1, nv):
            raw[(i, j)] = [rand_rational(rng, -2, 2, 2) if rng.random() < 0.5 else F(0) for _ in range(nz)]

    def beta(x, y, k):
        if x == y:
            return F(0)
        if x < y:
            return raw[(x, y)][k]
        return -raw[(y, x)][k]

    def Jidx(i):
        col = [(r, Jm[r][i]) for r in range(n) if Jm[r][i]]
        return col[0]

    br = {}
    for i in range(nv):
        for j in range(i + 1, nv):
            (a, sa), (b, sb) = Jidx(i), Jidx(j)
            row = {}
            for k in range(nz):
                c = beta(i, j, k) + sa * sb * beta(a, b, k)
                if c:
                    row[nv + k + 1] = c
            if row:
                br[(i + 1, j + 1)] = row
    L = LieAlgebra(n, br)
    return HermitianTriple(L, J, random_compatible_metric(J, rng), name="random_abelian")


def random_catalog_conjugate(rng: random.Random, names=("n4_abelian", "n6_abelian", "n8_nonabelian", "n6_nonabelian")):
    """A catalog algebra in a random J-commuting basis, with a random compatible metric."""
    T = cat(rng.choice(names))
    P = random_commuting_matrix(T.J, rng)
    L = T.L.change_basis(P)
    return HermitianTriple(L, T.J, random_compatible_metric(T.J, rng), name=f"{T.name}_conj")


def random_triples(count: int, seed: int = 2024) -> list[HermitianTriple]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        if k % 2:
            out.append(random_catalog_conjugate(rng))
        else:
            out.append(random_abelian_two_step(rng, rng.choice([1, 2, 2, 3]), rng.choice([1, 1, 2])))
    return out


def identity_matrix(n):
    return identity(n)
