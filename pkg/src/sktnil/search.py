"""Numerical search for SKT metrics compatible with a fixed complex structure.

Metrics are parameterised as ``g = S^T g0 S`` with S in the commutant of J,
so every iterate is J-compatible by construction.  The objective is the
squared ``dc`` of the trace-normalised metric, evaluated in the fixed input
basis.  Because ``dc`` is linear in g it reduces to ``|M vec(g)|^2 / tau^2``
for a constant matrix M, and each start is a damped Gauss-Newton
(Levenberg-Marquardt) run on that least-squares problem.

The search is confined to metrics whose trace-normalised eigenvalues lie in
``[1/eigenvalue_band, eigenvalue_band]``, enforced by a penalty.
Without such a bound the question is vacuous: rescaling basis directions
degenerates a nilpotent bracket towards simpler ones, so the normalised
residual can have infimum 0 over the open cone of metrics even when no SKT
metric exists.  Since dc is linear in g, the SKT metrics form a convex cone
and the admissible set is convex on the trace slice, so local minima found
here are global for the banded problem.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from sklearn.base import BaseEstimator

from .errors import ValidationError, report_falsification
from .exactnum import kernel, matmul, transpose
from .hermitian import ComplexStructure, HermitianTriple, Metric, nijenhuis_check
from .liealg import LieAlgebra

log = logging.getLogger(__name__)


def structure_tensor(L: LieAlgebra) -> np.ndarray:
    """``C[a, b, k]`` with ``[e_a, e_b] = sum_k C[a, b, k] e_k`` (0-based)."""
    n = L.dim
    C = np.zeros((n, n, n))
    for (i, j), row in L.brackets.items():
        for k, c in row.items():
            C[i - 1, j - 1, k - 1] = float(c)
            C[j - 1, i - 1, k - 1] = -float(c)
    return C


def dc_tensor(C: np.ndarray, J: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Full antisymmetric array of ``dc`` for bracket C, complex structure J, metric g."""
    Cjj = np.einsum("pa,qb,pqk->abk", J, J, C)
    T = np.einsum("abk,kc->abc", Cjj, g)
    c = -(T + T.transpose(1, 2, 0) + T.transpose(2, 0, 1))
    D = np.einsum("abk,kcd->abcd", C, c)
    # alternating sum over the six pairs (i<j) of slots
    return (
        -D
        + D.transpose(0, 2, 1, 3)
        - D.transpose(0, 2, 3, 1)
        - D.transpose(2, 0, 1, 3)
        + D.transpose(2, 0, 3, 1)
        - D.transpose(2, 3, 0, 1)
    )


def _quads(n: int) -> np.ndarray:
    q = np.array(list(combinations(range(n), 4)), dtype=int)
    return q.reshape(-1, 4)


def dc_operator(C: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Matrix M with ``dc(g)[W<U<Y<Z] = M @ g.ravel()``."""
    n = C.shape[0]
    q = _quads(n)
    M = np.zeros((len(q), n * n))
    E = np.zeros((n, n))
    for p in range(n):
        for r in range(n):
            E[p, r] = 1.0
            d = dc_tensor(C, J, E)
            M[:, p * n + r] = d[q[:, 0], q[:, 1], q[:, 2], q[:, 3]]
            E[p, r] = 0.0
    return M


def skt_residual(L: LieAlgebra, J: ComplexStructure, g, atol: float = 1e-12) -> float:
    """Sum of squared ``dc`` values over increasing basis 4-tuples (floating point)."""
    g = np.asarray(g, dtype=float)
    Jm = np.array(J.matrix, dtype=float)
    if g.shape != (L.dim, L.dim):
        raise ValueError(f"metric must be {L.dim}x{L.dim}")
    if not np.allclose(g, g.T, atol=atol):
        raise ValueError("metric is not symmetric")
    if L.dim and np.linalg.eigvalsh(g).min() <= 0:
        raise ValueError("metric is not positive definite")
    if not np.allclose(Jm.T @ g @ Jm, g, atol=max(atol, 1e-12 * np.abs(g).max(initial=1.0))):
        raise ValueError("metric is not J-compatible")
    if L.dim < 4:
        return 0.0
    d = dc_tensor(structure_tensor(L), Jm, g)
    q = _quads(L.dim)
    vals = d[q[:, 0], q[:, 1], q[:, 2], q[:, 3]]
    return float(vals @ vals)


def commutant_basis(J: ComplexStructure) -> np.ndarray:
    """Exact basis of ``{S : SJ = JS}``, returned as a float array (k, n, n)."""
    n = J.dim
    Jm = J.matrix
    rows = []
    # (SJ - JS)[i][j] = sum_k S[i][k] J[k][j] - J[i][k] S[k][j]; unknowns S[a][b] at a*n+b
    for i in range(n):
        for j in range(n):
            row = [Fraction(0)] * (n * n)
            for k in range(n):
                if Jm[k][j]:
                    row[i * n + k] += Jm[k][j]
                if Jm[i][k]:
                    row[k * n + j] -= Jm[i][k]
            rows.append(row)
    ker = kernel(tuple(tuple(r) for r in rows))
    return np.array([[float(x) for x in v] for v in ker.basis]).reshape(-1, n, n)


class MetricProblem:
    """The search objective over commutant coordinates p, with ``g(p) = S^T g0 S``.

    Two residual vectors are exposed: the raw one ``M vec(g)`` whose squared
    norm is :func:`skt_residual`, and the trace-normalised one
    ``M vec(g) / tau`` with ``tau = tr(g) / n`` that the optimiser minimises.
    """

    def __init__(self, L: LieAlgebra, J: ComplexStructure, g0=None):
        self.n = n = L.dim
        if J.dim != n:
            raise ValueError("J and the algebra have different dimensions")
        self.J = np.array(J.matrix, dtype=float)
        self.g0 = np.eye(n) if g0 is None else np.array(getattr(g0, "matrix", g0), dtype=float)
        self.basis = commutant_basis(J)
        self.M = dc_operator(structure_tensor(L), self.J) if n >= 4 else np.zeros((0, n * n))

    @property
    def n_params(self) -> int:
        return len(self.basis)

    def S(self, p: np.ndarray) -> np.ndarray:
        return np.tensordot(p, self.basis, 1)

    def params_of(self, S: np.ndarray) -> np.ndarray:
        """Least-squares coordinates of S in the commutant basis (projection)."""
        B = self.basis.reshape(len(self.basis), -1)
        return np.linalg.lstsq(B.T, S.ravel(), rcond=None)[0]

    def metric(self, p: np.ndarray) -> np.ndarray:
        S = self.S(p)
        return S.T @ self.g0 @ S

    def normalised_metric(self, p: np.ndarray) -> np.ndarray:
        g = self.metric(p)
        return g * (self.n / np.trace(g))

    def condition(self, p: np.ndarray) -> float:
        """Condition number of g(p); ``inf`` off the positive-definite cone."""
        w = np.linalg.eigvalsh(self.metric(p))
        if w[0] <= 0:
            return np.inf
        return float(w[-1] / w[0])

    def _dG(self, S: np.ndarray) -> np.ndarray:
        # dg/dp_k = B_k^T g0 S + S^T g0 B_k
        left = np.einsum("kba,bc,cd->kad", self.basis, self.g0, S)
        return left + left.transpose(0, 2, 1)

    def raw_residual_vector(self, p: np.ndarray) -> np.ndarray:
        return self.M @ self.metric(p).ravel()

    def raw_gradient(self, p: np.ndarray) -> np.ndarray:
        r = self.raw_residual_vector(p)
        dG = self._dG(self.S(p))
        return 2.0 * (self.M @ dG.reshape(len(dG), -1).T).T @ r

    def residual_vector(self, p: np.ndarray) -> np.ndarray:
        g = self.metric(p)
        return self.M @ g.ravel() / (np.trace(g) / self.n)

    def objective(self, p: np.ndarray) -> float:
        r = self.residual_vector(p)
        return float(r @ r)

    def jacobian(self, p: np.ndarray) -> np.ndarray:
        S = self.S(p)
        g = S.T @ self.g0 @ S
        tau = np.trace(g) / self.n
        dG = self._dG(S)
        dtau = np.einsum("kaa->k", dG) / self.n
        r_raw = self.M @ g.ravel()
        return (self.M @ dG.reshape(len(dG), -1).T) / tau - np.outer(r_raw, dtau) / tau**2

    def gradient(self, p: np.ndarray) -> np.ndarray:
        return 2.0 * self.jacobian(p).T @ self.residual_vector(p)

    def penalty(self, p: np.ndarray, band: float, weight: float) -> tuple[np.ndarray, np.ndarray]:
        """Residual entries keeping the eigenvalues of ``g / tau`` in ``[1/band, band]``.

        Entry ``weight * max(0, mu - band)`` or ``weight * max(0, 1/band - mu)``
        per eigenvalue mu, with its Jacobian.  All entries vanish exactly on
        the admissible set, which is convex on the trace slice, so the
        penalty adds no spurious minima; as a spectral function it stays C^1
        through the eigenvalue collisions that J-compatibility forces.
        """
        S = self.S(p)
        g = S.T @ self.g0 @ S
        tau = np.trace(g) / self.n
        w, V = np.linalg.eigh(g)
        mu = w / tau
        hi = mu - band
        lo = 1.0 / band - mu
        active = [(i, +1.0, hi[i]) for i in range(self.n) if hi[i] > 0]
        active += [(i, -1.0, lo[i]) for i in range(self.n) if lo[i] > 0]
        if not active:
            return np.zeros(0), np.zeros((0, self.n_params))
        dG = self._dG(S)
        dtau = np.einsum("kaa->k", dG) / self.n
        vals = np.array([weight * v for _, _, v in active])
        rows = []
        for i, sign, _ in active:
            dw = np.einsum("a,kab,b->k", V[:, i], dG, V[:, i])
            rows.append(sign * weight * (dw / tau - w[i] * dtau / tau**2))
        return vals, np.array(rows)


def residual_gradient(L: LieAlgebra, J: ComplexStructure, params, g0=None) -> np.ndarray:
    """Gradient of ``skt_residual(L, J, S^T g0 S)`` in the commutant coordinates of S.

    Coordinates refer to the basis returned by :func:`commutant_basis`.
    """
    prob = MetricProblem(L, J, g0)
    p = np.asarray(params, dtype=float)
    if p.shape != (prob.n_params,):
        raise ValueError(f"expected {prob.n_params} parameters, got shape {p.shape}")
    if not np.isfinite(prob.condition(p)):
        raise ValueError("parameters give a degenerate metric")
    return prob.raw_gradient(p)


@dataclass
class SearchConfig:
    starts: int = 20
    max_iters: int = 5000
    tol: float = 1e-10
    eigenvalue_band: float = 10.0
    perturbation: float = 0.3
    damping: float = 1e-3
    penalty_weight: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.eigenvalue_band > 1:
            raise ValueError("eigenvalue_band must exceed 1")


@dataclass
class StartResult:
    seed: int
    residual: float
    iterations: int
    condition: float
    converged: bool


@dataclass
class SearchResult:
    best_metric: np.ndarray
    best_residual: float
    converged: bool
    per_start: list[StartResult] = field(default_factory=list)
    config: SearchConfig | None = None
    exact_check: dict | None = None

    def to_report(self) -> dict:
        return {
            "converged": self.converged,
            "best_residual": self.best_residual,
            "best_metric": [[float(x) for x in row] for row in self.best_metric],
            "per_start": [
                {
                    "seed": s.seed,
                    "residual": s.residual,
                    "iterations": s.iterations,
                    "condition": s.condition,
                    "converged": s.converged,
                }
                for s in self.per_start
            ],
            "residual_histogram": residual_histogram([s.residual for s in self.per_start]),
            "config": vars(self.config) if self.config else None,
            "exact_check": self.exact_check,
            "interpretation": (
                "residual below tol: numerical SKT metric found"
                if self.converged
                else "no start reached tol inside the admissible metric set; "
                "this is evidence, not a proof, that no SKT metric exists"
            ),
        }


def residual_histogram(values) -> dict:
    """Counts per decade of the residual (log10 floor), zeros under "zero"."""
    out: dict[str, int] = {}
    for v in values:
        key = "zero" if v <= 0 else str(int(np.floor(np.log10(v))))
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


def _initial_params(prob: MetricProblem, seed: int, scale: float) -> np.ndarray:
    rng = np.random.default_rng(seed)
    S = np.eye(prob.n) + scale * rng.standard_normal((prob.n, prob.n))
    return prob.params_of(S)


def _run_start(prob: MetricProblem, seed: int, cfg: SearchConfig) -> tuple[StartResult, np.ndarray]:
    """Levenberg-Marquardt on the residual vector stacked with the band penalty."""
    band, w = cfg.eigenvalue_band, cfg.penalty_weight
    p = _initial_params(prob, seed, cfg.perturbation)

    def evaluate(q):
        r = prob.residual_vector(q)
        pen, _ = prob.penalty(q, band, w)
        return r, pen, float(r @ r) + float(pen @ pen)

    r, pen, F = evaluate(p)
    lam = cfg.damping
    it = 0
    while it < cfg.max_iters and not (float(r @ r) < cfg.tol and not pen.size):
        it += 1
        Jr = prob.jacobian(p)
        _, Jp = prob.penalty(p, band, w)
        A = Jr.T @ Jr + Jp.T @ Jp
        grad = Jr.T @ r + Jp.T @ pen
        diag = np.diag(A).copy() + 1e-12
        accepted = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(A + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                lam *= 4
                continue
            cand = p + step
            # backtrack on non-positive-definite excursions as well as on no decrease
            if np.isfinite(prob.condition(cand)):
                rn, pn, Fn = evaluate(cand)
                if Fn < F:
                    p, r, pen, F = cand, rn, pn, Fn
                    lam = max(lam / 3, 1e-12)
                    accepted = True
                    break
            lam *= 4
        if not accepted:
            break
    f = float(r @ r)
    res = StartResult(seed, f, it, prob.condition(p), f < cfg.tol)
    return res, p


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SKT_THREADS", "1")))
    except ValueError:
        return 1


def _rationalise(J: ComplexStructure, g: np.ndarray, max_den: int = 10**6) -> Metric:
    """Exact J-compatible rational metric close to g."""
    n = len(g)
    G = [[Fraction(float(g[i, j])).limit_denominator(max_den) for j in range(n)] for i in range(n)]
    G = [[(G[i][j] + G[j][i]) / 2 for j in range(n)] for i in range(n)]
    JtGJ = matmul(matmul(transpose(J.matrix), tuple(map(tuple, G))), J.matrix)
    return Metric([[(G[i][j] + JtGJ[i][j]) / 2 for j in range(n)] for i in range(n)])


def search_metric(L: LieAlgebra, J: ComplexStructure, config: SearchConfig | None = None,
                  g0=None, name: str | None = None) -> SearchResult:
    """Multi-start search; deterministic for a fixed config.

    ``g0`` (default identity) is the base metric of the parameterisation;
    rescaling it leaves every reported quantity unchanged.
    """
    cfg = config or SearchConfig()
    bad = nijenhuis_check(L, J)
    if bad:
        raise ValidationError("nijenhuis", "J is not integrable; no Hermitian structure to search", witness=bad[0][0])
    prob = MetricProblem(L, J, g0)
    if not np.allclose(prob.J.T @ prob.g0 @ prob.J, prob.g0) or np.linalg.eigvalsh(prob.g0)[0] <= 0:
        raise ValidationError(
            "compatibility", "g0 must be positive definite and J-compatible", witness="g0"
        )
    seeds = [cfg.rng_seed + k for k in range(cfg.starts)]
    workers = min(_threads(), cfg.starts)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            runs = list(pool.map(lambda s: _run_start(prob, s, cfg), seeds))
    else:
        runs = [_run_start(prob, s, cfg) for s in seeds]
    runs.sort(key=lambda sr: (sr[0].residual, sr[0].seed))
    best, best_p = runs[0]
    result = SearchResult(
        best_metric=prob.normalised_metric(best_p),
        best_residual=best.residual,
        converged=best.converged,
        per_start=[sr[0] for sr in runs],
        config=cfg,
    )
    step = L.nilpotency_step()
    if result.converged and step is not None and step >= 3:
        from .bismut import is_skt

        gq = _rationalise(J, result.best_metric)
        verdict = is_skt(HermitianTriple(L, J, gq, name=name))
        result.exact_check = {"rational_metric_skt": verdict.is_skt, "exact_residual": str(verdict.residual)}
        if verdict.is_skt:
            report_falsification(
                "nilpotent SKT algebras are at most 2-step",
                f"exact SKT metric recovered by search on a {step}-step algebra",
                name=name,
            )
    return result


class SKTMetricSearch(BaseEstimator):
    """Estimator wrapper around :func:`search_metric`.

    ``fit`` takes a :class:`HermitianTriple` (its metric is the reference g0)
    and sets ``best_metric_``, ``best_residual_``, ``converged_``,
    ``per_start_`` and ``result_``.
    """

    def __init__(self, starts=20, max_iters=5000, tol=1e-10, eigenvalue_band=10.0,
                 perturbation=0.3, damping=1e-3, penalty_weight=1.0, rng_seed=0):
        self.starts = starts
        self.max_iters = max_iters
        self.tol = tol
        self.eigenvalue_band = eigenvalue_band
        self.perturbation = perturbation
        self.damping = damping
        self.penalty_weight = penalty_weight
        self.rng_seed = rng_seed

    def _config(self) -> SearchConfig:
        return SearchConfig(**self.get_params())

    def fit(self, X: HermitianTriple, y=None):
        if not isinstance(X, HermitianTriple):
            raise TypeError(f"expected a HermitianTriple, got {type(X).__name__}")
        res = search_metric(X.L, X.J, self._config(), g0=X.g, name=X.name)
        self.result_ = res
        self.best_metric_ = res.best_metric
        self.best_residual_ = res.best_residual
        self.converged_ = res.converged
        self.per_start_ = res.per_start
        return self

    def predict(self, X: HermitianTriple) -> bool:
        """Whether a numerical SKT metric was found for X (refits)."""
        return self.fit(X).converged_

    def score(self, X: HermitianTriple, y=None) -> float:
        """Negative best residual, so larger is better."""
        return -self.fit(X).best_residual_
