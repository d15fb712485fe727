"""Fusing two SKT 2-step triples into a larger SKT triple.

Given SKT triples on n1 and n2 with ``dim z_i > dim [n_i, n_i]``, the new
algebra is ``n1 + n2 + span{Z, W}`` with ``[Z, W] = r x + s y`` where
``x in z1 ∩ [n1,n1]^perp`` and ``y in z2 ∩ [n2,n2]^perp``, ``J Z = W`` and
the orthogonal product metric.  The result is again SKT, 2-step, and again
satisfies the center/derived inequality, so the construction iterates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bismut import is_skt
from .errors import PreconditionError, SKTError
from .exactnum import ZERO, Subspace, format_rational, orth_complement, unit
from .hermitian import ComplexStructure, HermitianTriple, Metric, is_abelian_J, restrict_to_subspace
from .liealg import LieAlgebra, direct_sum


def admissible_directions(T: HermitianTriple) -> Subspace:
    """``z ∩ [n, n]^perp``, where x/y choices must live."""
    z = T.L.center()
    return z.intersection(orth_complement(T.L.derived(), T.g.matrix))


def default_choice(T: HermitianTriple) -> tuple:
    """Last vector of the canonical basis of ``z ∩ [n,n]^perp``."""
    S = admissible_directions(T)
    if not S.dim:
        raise PreconditionError("empty_intersection", f"{T.name or 'factor'} has z ∩ [n,n]^perp = 0")
    return S.basis[-1]


def _factor_problems(T: HermitianTriple, label: str) -> None:
    if not is_skt(T).is_skt:
        raise PreconditionError("factor_not_skt", f"{label} factor is not SKT")
    step = T.L.nilpotency_step()
    if step is None or step > 2:
        raise PreconditionError("factor_not_2step", f"{label} factor has nilpotency step {step}, need <= 2")
    dz, dd = T.L.center().dim, T.L.derived().dim
    if not dz > dd:
        raise PreconditionError(
            "center_vs_derived",
            f"{label} factor has dim center = {dz} and dim derived = {dd}; need dim center > dim derived",
        )


@dataclass
class CompositionSpec:
    left: HermitianTriple
    right: HermitianTriple
    x_choice: tuple | None = None
    y_choice: tuple | None = None
    r: Fraction = Fraction(1)
    s: Fraction = Fraction(1)

    def __post_init__(self):
        self.r = Fraction(self.r)
        self.s = Fraction(self.s)
        if self.x_choice is not None:
            self.x_choice = tuple(Fraction(v) for v in self.x_choice)
        if self.y_choice is not None:
            self.y_choice = tuple(Fraction(v) for v in self.y_choice)

    @classmethod
    def from_indices(cls, left, right, x_index=None, y_index=None, r=1, s=1) -> "CompositionSpec":
        """Pick x = e_K / y = e_K (1-based) instead of the default choice."""
        x = unit(left.dim, x_index - 1) if x_index else None
        y = unit(right.dim, y_index - 1) if y_index else None
        return cls(left, right, x, y, r, s)

    def check(self) -> None:
        """Raise :class:`PreconditionError` naming the first violated hypothesis."""
        if not self.r or not self.s:
            raise PreconditionError("zero_scale", f"r and s must be nonzero, got r={self.r}, s={self.s}")
        _factor_problems(self.left, "left")
        _factor_problems(self.right, "right")
        # defaults resolved only once the factors are known to qualify
        if self.x_choice is None:
            self.x_choice = default_choice(self.left)
        if self.y_choice is None:
            self.y_choice = default_choice(self.right)
        for label, T, v in (("x", self.left, self.x_choice), ("y", self.right, self.y_choice)):
            if len(v) != T.dim:
                raise PreconditionError("choice_dimension", f"{label} choice has length {len(v)}, factor dim {T.dim}")
            if not any(v):
                raise PreconditionError("choice_zero", f"{label} choice is zero")
            if not admissible_directions(T).contains(v):
                raise PreconditionError(
                    "choice_outside_intersection",
                    f"{label} choice is not in z ∩ [n,n]^perp of its factor",
                )

    def provenance(self) -> dict:
        def vec(v):
            return [format_rational(x) for x in v]

        return {
            "construction": "compose",
            "left": self.left.name or "left",
            "right": self.right.name or "right",
            "x_choice": vec(self.x_choice),
            "y_choice": vec(self.y_choice),
            "r": format_rational(self.r),
            "s": format_rational(self.s),
        }


def compose(spec: CompositionSpec, name: str | None = None, verify: bool = True) -> HermitianTriple:
    """The composed triple, basis order: left, right, Z, W."""
    spec.check()
    T1, T2 = spec.left, spec.right
    n1, n2 = T1.dim, T2.dim
    N = n1 + n2 + 2
    base = direct_sum(T1.L, T2.L)
    brackets = {k: dict(v) for k, v in base.brackets.items()}
    zw = {}
    for k, c in enumerate(spec.x_choice):
        if c:
            zw[k + 1] = spec.r * c
    for k, c in enumerate(spec.y_choice):
        if c:
            zw[n1 + k + 1] = spec.s * c
    brackets[(N - 1, N)] = zw
    L = LieAlgebra(N, brackets)

    Jm = [[ZERO] * N for _ in range(N)]
    gm = [[ZERO] * N for _ in range(N)]
    for off, T in ((0, T1), (n1, T2)):
        for a in range(T.dim):
            for b in range(T.dim):
                Jm[off + a][off + b] = T.J.matrix[a][b]
                gm[off + a][off + b] = T.g.matrix[a][b]
    Jm[N - 1][N - 2] = Fraction(1)   # J Z = W
    Jm[N - 2][N - 1] = Fraction(-1)  # J W = -Z
    gm[N - 2][N - 2] = gm[N - 1][N - 1] = Fraction(1)
    J = ComplexStructure(Jm)
    if T1.J.pairs is not None and T2.J.pairs is not None:
        J.pairs = tuple(T1.J.pairs) + tuple((a + n1, b + n1) for a, b in T2.J.pairs) + ((N - 1, N),)
    prov = spec.provenance()
    out = HermitianTriple(L, J, Metric(gm), name=name or f"compose({prov['left']},{prov['right']})", provenance=prov)
    if verify:
        verdict = is_skt(out)
        if not verdict.is_skt:
            raise SKTError(f"composed triple is not SKT: dc = {verdict.dc}")
        step = out.L.nilpotency_step()
        if step != 2:
            raise SKTError(f"composed algebra has step {step}, expected 2")
        if not out.L.center().dim > out.L.derived().dim:
            raise SKTError("composed algebra violates dim center > dim derived")
    return out


@dataclass
class IrreducibilityCertificate:
    status: str  # "certified" | "decomposable" | "inconclusive"
    evidence: dict = field(default_factory=dict)
    factor_irreducible_flags: tuple[bool, bool] = (False, False)


def certify_irreducible(composed: HermitianTriple, spec: CompositionSpec,
                        factor_flags: tuple[bool, bool] = (True, True)) -> IrreducibilityCertificate:
    """Irreducibility certificate following the case analysis of the construction.

    Reads ``[Z, JZ]`` off the composed algebra and projects it onto both
    factor blocks.  Both projections nonzero plus both factors irreducible
    rules out any orthogonal J-invariant ideal splitting.  A zero projection
    exhibits one (the other factor absorbs Z, W).
    """
    n1, n2 = spec.left.dim, spec.right.dim
    N = n1 + n2 + 2
    if composed.dim != N:
        raise ValueError(f"composed triple has dimension {composed.dim}, spec implies {N}")
    for off, T in ((0, spec.left), (n1, spec.right)):
        idx = list(range(off + 1, off + T.dim + 1))
        block = Subspace.coordinate(N, idx)
        sub = restrict_to_subspace(composed, block)
        if sub.L != T.L or sub.J != T.J or sub.g != T.g:
            raise ValueError("composed triple does not restrict to the spec's factors")
    Z = unit(N, N - 2)
    bracket = composed.L.bracket(Z, composed.J.apply(Z))
    p1, p2 = bracket[:n1], bracket[n1:n1 + n2]
    evidence = {
        "Z_JZ": [format_rational(x) for x in bracket],
        "left_projection": [format_rational(x) for x in p1],
        "right_projection": [format_rational(x) for x in p2],
    }
    flags = (bool(factor_flags[0]), bool(factor_flags[1]))
    if not any(p1) or not any(p2):
        status = "decomposable"
    elif not all(flags):
        status = "inconclusive"
    else:
        status = "certified"
    return IrreducibilityCertificate(status, evidence, flags)


def abelian_J_propagation(spec: CompositionSpec) -> bool:
    """Predicted abelian-ness of the composed J: both factors abelian."""
    return is_abelian_J(spec.left.L, spec.left.J)[0] and is_abelian_J(spec.right.L, spec.right.J)[0]


def reachable_dims(seed_dims: Sequence[int], limit: int) -> set[int]:
    """Dimensions reachable by ``acc -> acc + seed + 2`` from some seed, up to limit."""
    reach = set(d for d in seed_dims if d <= limit)
    frontier = sorted(reach)
    while frontier:
        nxt = []
        for d in frontier:
            for s in seed_dims:
                e = d + s + 2
                if e <= limit and e not in reach:
                    reach.add(e)
                    nxt.append(e)
        frontier = nxt
    return reach


def _gap_fillable(gap: int, seed_dims: Sequence[int]) -> bool:
    """Whether gap is a sum of terms ``seed + 2``."""
    ok = [False] * (gap + 1)
    ok[0] = True
    steps = [s + 2 for s in seed_dims]
    for v in range(1, gap + 1):
        ok[v] = any(v >= st and ok[v - st] for st in steps)
    return ok[gap]


def composition_plan(seed_dims: Sequence[int], target_dim: int) -> tuple[int, list[int]]:
    """(start seed index, seed indices to compose onto the accumulator, in order).

    Greedy: at each step the largest seed that does not overshoot and keeps
    the target reachable; ties go to the earlier seed.
    """
    for start, d0 in enumerate(seed_dims):
        if d0 > target_dim or not _gap_fillable(target_dim - d0, seed_dims):
            continue
        acc, plan = d0, []
        while acc < target_dim:
            best = None
            for idx, s in enumerate(seed_dims):
                nxt = acc + s + 2
                if nxt <= target_dim and _gap_fillable(target_dim - nxt, seed_dims):
                    if best is None or s > seed_dims[best]:
                        best = idx
            plan.append(best)
            acc += seed_dims[best] + 2
        return start, plan
    raise PreconditionError(
        "unreachable_dimension",
        f"dimension {target_dim} is not reachable; reachable up to it: "
        f"{sorted(reachable_dims(seed_dims, target_dim))}",
    )


def iterate_compose(seeds: Sequence[HermitianTriple], target_dim: int) -> HermitianTriple:
    """An SKT triple of exactly ``target_dim`` built by repeated composition."""
    if not seeds:
        raise PreconditionError("no_seeds", "need at least one seed")
    for T in seeds:
        _factor_problems(T, T.name or "seed")
    start, plan = composition_plan([T.dim for T in seeds], target_dim)
    acc = seeds[start]
    for idx in plan:
        acc = compose(CompositionSpec(acc, seeds[idx]))
    return acc
