"""Box-constrained simplex dual solver for spherical data descriptions.

Maximizes  L(alpha) = sum_i alpha_i G_ii - alpha' G alpha  subject to
sum(alpha) = 1 and 0 <= alpha_i <= C, for an arbitrary symmetric Gram
matrix G of working-space inner products. Solved with SMO-style pairwise
updates: the most-violating pair exchanges mass in closed form, which keeps
both the simplex and the box constraints exact. Every N updates the cached
gradient is recomputed from scratch and a full sweep over the indices is
used as a fallback for the max-pair heuristic.

In gradient terms (f = alpha' G alpha - g' alpha, g = diag(G)) the KKT
violation equals the spread of squared center distances, so the stopping
threshold `tol` is applied relative to max|G|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import AsymmetricGramError, BudgetExhaustedError, InfeasibleTradeoffError

# alpha closer to 0 (or C) than SV_RTOL * C counts as zero (or at-bound).
SV_RTOL = 1e-7


@dataclass(frozen=True)
class SvddSolution:
    """Solution of the dual: coefficients, SV index sets, radius, objective.

    The center is never materialized; it lives in the working space as
    sum_i alpha_i * (sample i), so `alpha` doubles as `center_coeffs`.
    """

    alpha: np.ndarray
    C: float
    objective: float
    boundary_sv: np.ndarray   # indices with 0 < alpha_i < C (within SV_RTOL*C)
    bound_sv: np.ndarray      # indices with alpha_i = C
    radius_sq: float

    @property
    def center_coeffs(self) -> np.ndarray:
        return self.alpha


@njit(cache=True)
def _exchange(G, alpha, grad, i, j, violation, C):  # pragma: no cover - jitted
    # Move mass from donor i to receiver j; exact zeros/bounds at the caps so
    # the box never drifts past its edges.
    n = G.shape[0]
    a = G[i, i] + G[j, j] - 2.0 * G[i, j]
    if a > 1e-300:
        delta = violation / (2.0 * a)
    else:
        delta = np.inf
    cap_i = alpha[i]
    cap_j = C - alpha[j]
    if cap_i < delta:
        delta = cap_i
    if cap_j < delta:
        delta = cap_j
    new_i = alpha[i] - delta
    new_j = alpha[j] + delta
    if delta == cap_i:
        new_i = 0.0
    if delta == cap_j:
        new_j = C
    alpha[i] = new_i
    alpha[j] = new_j
    for t in range(n):
        grad[t] += 2.0 * delta * (G[t, j] - G[t, i])


@njit(cache=True)
def _smo(G, g, C, stop_tol, max_updates):  # pragma: no cover - jitted
    n = G.shape[0]
    alpha = np.full(n, 1.0 / n)
    grad = 2.0 * (G @ alpha) - g

    updates = 0
    while updates < max_updates:
        # Most-violating pair: donor i (alpha_i > 0) with the largest
        # gradient, receiver j (alpha_j < C) with the smallest.
        i = -1
        j = -1
        up = -np.inf
        lo = np.inf
        for t in range(n):
            if alpha[t] > 0.0 and grad[t] > up:
                up = grad[t]
                i = t
            if alpha[t] < C and grad[t] < lo:
                lo = grad[t]
                j = t
        violation = up - lo
        if j == -1 or violation <= stop_tol:
            return alpha, violation, updates

        _exchange(G, alpha, grad, i, j, violation, C)
        updates += 1

        if updates % n == 0:
            # Drift control + fallback: exact gradient, then one sweep giving
            # every donor index a closed-form exchange with the current
            # extreme receiver.
            grad = 2.0 * (G @ alpha) - g
            order = np.argsort(-grad)
            for oi in range(n):
                i = order[oi]
                if alpha[i] <= 0.0:
                    continue
                j = -1
                lo = np.inf
                for t in range(n):
                    if alpha[t] < C and grad[t] < lo:
                        lo = grad[t]
                        j = t
                if j == -1 or grad[i] - lo <= stop_tol:
                    break
                _exchange(G, alpha, grad, i, j, grad[i] - lo, C)
                updates += 1
                if updates >= max_updates:
                    break

    grad = 2.0 * (G @ alpha) - g
    up = -np.inf
    lo = np.inf
    for t in range(n):
        if alpha[t] > 0.0 and grad[t] > up:
            up = grad[t]
        if alpha[t] < C and grad[t] < lo:
            lo = grad[t]
    violation = up - lo if lo < np.inf else -np.inf
    return alpha, violation, updates


def _gram_scale(G: np.ndarray) -> float:
    m = float(np.max(np.abs(G))) if G.size else 0.0
    return m if m > 0.0 else 1.0


def validate_gram(G: np.ndarray) -> np.ndarray:
    """Check symmetry/finiteness of a Gram matrix and return it as float64."""
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise AsymmetricGramError(f"Gram matrix must be square, got {G.shape}")
    if not np.all(np.isfinite(G)):
        raise AsymmetricGramError("Gram matrix has non-finite entries")
    skew = float(np.max(np.abs(G - G.T))) if G.size else 0.0
    if skew > 1e-10 * max(1.0, _gram_scale(G)):
        raise AsymmetricGramError(f"Gram matrix is not symmetric (max skew {skew:.3e})")
    return G


def solve_svdd(G: np.ndarray, C: float, tol: float = 1e-6,
               max_passes: int = 500) -> SvddSolution:
    """Solve the data-description dual for Gram matrix G at trade-off C.

    `tol` is the KKT tolerance relative to max|G|; `max_passes` bounds the
    number of pair updates at max_passes * N. Raises
    InfeasibleTradeoffError when C < 1/N and BudgetExhaustedError (carrying
    the best iterate and its violation) when the budget runs out.
    """
    G = validate_gram(G)
    n = G.shape[0]
    if n == 0:
        raise ValueError("empty Gram matrix")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if C < 1.0 / n:
        raise InfeasibleTradeoffError(C, n)

    g = np.ascontiguousarray(np.diag(G))
    stop_tol = tol * _gram_scale(G)
    alpha, violation, updates = _smo(
        np.ascontiguousarray(G), g, float(C), stop_tol, int(max_passes) * n
    )
    if violation > stop_tol:
        raise BudgetExhaustedError(alpha, violation, updates)
    return _package(G, g, alpha, float(C))


def _package(G, g, alpha, C) -> SvddSolution:
    tau_sv = SV_RTOL * C
    boundary = np.flatnonzero((alpha > tau_sv) & (alpha < C - tau_sv))
    bound = np.flatnonzero(alpha >= C - tau_sv)
    objective = float(g @ alpha - alpha @ G @ alpha)

    radius_idx = boundary if boundary.size else np.flatnonzero(alpha > tau_sv)
    assert radius_idx.size, "sum(alpha)=1 guarantees a positive coefficient"
    dists = distances_sq(G, alpha)
    return SvddSolution(
        alpha=alpha,
        C=C,
        objective=objective,
        boundary_sv=boundary,
        bound_sv=bound,
        radius_sq=float(np.mean(dists[radius_idx])),
    )


def distance_sq(G: np.ndarray, alpha: np.ndarray, i: int) -> float:
    """Squared working-space distance of sample i to the alpha-center:
    G_ii - 2 sum_j alpha_j G_ij + alpha' G alpha, clamped at zero."""
    value = float(G[i, i] - 2.0 * (G[i] @ alpha) + alpha @ G @ alpha)
    return max(value, 0.0)


def distances_sq(G: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Vectorized distance_sq over all samples."""
    quad = float(alpha @ G @ alpha)
    return np.maximum(np.diag(G) - 2.0 * (G @ alpha) + quad, 0.0)


def radius_sq(G: np.ndarray, solution: SvddSolution) -> float:
    """Mean squared boundary distance; falls back to all positive alpha."""
    idx = solution.boundary_sv
    if not idx.size:
        idx = np.flatnonzero(solution.alpha > SV_RTOL * solution.C)
    assert idx.size, "sum(alpha)=1 guarantees a positive coefficient"
    return float(np.mean(distances_sq(G, solution.alpha)[idx]))
