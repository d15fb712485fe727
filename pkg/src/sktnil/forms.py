"""Alternating multilinear forms with exact coefficients.

A k-form on an n-dimensional space is stored by its values on strictly
increasing 1-based index tuples, so ``{(1, 2, 3): -1}`` is ``-e^{123}``.
``e^{i1...ik}`` evaluates to 1 on ``(e_i1, ..., e_ik)``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .exactnum import ZERO, RatMatrix, format_rational


def sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort, counting swaps
    for a in range(1, len(idx)):
        b = a
        while b > 0 and idx[b - 1] > idx[b]:
            idx[b - 1], idx[b] = idx[b], idx[b - 1]
            sign = -sign
            b -= 1
    return sign, tuple(idx)


class AlternatingForm:
    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[tuple, object] | None = None):
        self.dim = dim
        self.degree = degree
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, c in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"index tuple {key} does not have length {degree}")
            if any(not 1 <= i <= dim for i in key):
                raise ValueError(f"index tuple {key} out of range 1..{dim}")
            sign, skey = sort_sign(key)
            c = Fraction(c)
            if not sign or not c:
                continue
            clean[skey] = clean.get(skey, ZERO) + sign * c
        self.coeffs = {k: v for k, v in sorted(clean.items()) if v}

    @classmethod
    def zero(cls, dim: int, degree: int) -> "AlternatingForm":
        return cls(dim, degree)

    @classmethod
    def from_values(cls, dim: int, degree: int, value) -> "AlternatingForm":
        """Tabulate ``value(t)`` over all increasing 0-based position tuples t."""
        out = {}
        for t in combinations(range(dim), degree):
            v = value(t)
            if v:
                out[tuple(i + 1 for i in t)] = v
        return cls(dim, degree, out)

    def __eq__(self, other):
        if not isinstance(other, AlternatingForm):
            return NotImplemented
        return (self.dim, self.degree, self.coeffs) == (other.dim, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_same(self, other):
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise ValueError(
                f"cannot combine a {self.degree}-form on R^{self.dim} with a {other.degree}-form on R^{other.dim}"
            )

    def __add__(self, other):
        self._check_same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return AlternatingForm(self.dim, self.degree, out)

    def __neg__(self):
        return AlternatingForm(self.dim, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        s = Fraction(scalar)
        return AlternatingForm(self.dim, self.degree, {k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"AlternatingForm({self.dim}, {self.degree}, {self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for key, c in self.coeffs.items():
            label = "e^{" + ",".join(map(str, key)) + "}"
            if c == 1:
                parts.append(f"+{label}")
            elif c == -1:
                parts.append(f"-{label}")
            else:
                s = format_rational(c)
                parts.append(f"{'+' if c > 0 else ''}{s}{label}")
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    def at(self, positions: Sequence[int]) -> Fraction:
        """Value on basis vectors given by 0-based positions, any order."""
        sign, key = sort_sign(positions)
        if not sign:
            return ZERO
        return sign * self.coeffs.get(tuple(i + 1 for i in key), ZERO)

    def eval_sparse_first(self, first: Mapping[int, Fraction], rest: Sequence[int]) -> Fraction:
        """Value with a sparse vector in the first slot and basis vectors after."""
        total = ZERO
        for m, cm in first.items():
            v = self.at((m, *rest))
            if v:
                total += cm * v
        return total

    def evaluate(self, vectors: Sequence[Sequence]) -> Fraction:
        """Value on arbitrary vectors (multilinear expansion over coefficients)."""
        if len(vectors) != self.degree:
            raise ValueError(f"need {self.degree} vectors")
        total = ZERO
        for key, c in self.coeffs.items():
            pos = [i - 1 for i in key]
            # determinant of the k x k minor
            for perm in permutations(range(self.degree)):
                sign, _ = sort_sign(perm)
                prod = Fraction(sign)
                for slot, p in enumerate(perm):
                    x = vectors[slot][pos[p]]
                    if not x:
                        prod = ZERO
                        break
                    prod *= x
                if prod:
                    total += c * prod
        return total

    def wedge(self, other: "AlternatingForm") -> "AlternatingForm":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch in wedge product")
        out: dict[tuple[int, ...], Fraction] = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                sign, key = sort_sign(a + b)
                if sign:
                    out[key] = out.get(key, ZERO) + sign * ca * cb
        return AlternatingForm(self.dim, self.degree + other.degree, out)

    def norm_squared(self) -> Fraction:
        """Sum of squared coefficients over increasing tuples (basis-dependent)."""
        return sum((c * c for c in self.coeffs.values()), ZERO)

    def pullback(self, P: RatMatrix) -> "AlternatingForm":
        """``phi(P x1, ..., P xk)`` in the coordinates where P's columns are the new basis."""
        cols = list(zip(*P))
        n = len(cols)
        return AlternatingForm.from_values(
            n, self.degree, lambda t: self.evaluate([cols[i] for i in t])
        )

    def restrict_positions(self, positions: Sequence[int]) -> "AlternatingForm":
        """Restriction to the coordinate subspace spanned by the given 1-based indices."""
        new_of = {old: new for new, old in enumerate(positions, start=1)}
        out = {}
        for key, c in self.coeffs.items():
            if all(i in new_of for i in key):
                out[tuple(new_of[i] for i in key)] = c
        return AlternatingForm(len(positions), self.degree, out)

    def items(self) -> Iterable[tuple[tuple[int, ...], Fraction]]:
        return self.coeffs.items()


def basis_form(dim: int, *indices: int, coeff=1) -> AlternatingForm:
    """``coeff * e^{i1 ... ik}``."""
    return AlternatingForm(dim, len(indices), {tuple(indices): coeff})


def parse_form(dim: int, degree: int, terms: Mapping[str, object]) -> AlternatingForm:
    """Build a form from ``{"1,2,3": "-1"}``-style keys (as stored in data files)."""
    from .exactnum import parse_rational

    return AlternatingForm(
        dim,
        degree,
        {tuple(int(x) for x in key.split(",")): parse_rational(v) for key, v in terms.items()},
    )
