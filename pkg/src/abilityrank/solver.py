"""Least-squares fit of log-abilities on the coauthor incidence matrix.

The objective is ``R(x) = sum_over_papers (log_q - F x)**2`` where ``F`` is
the binary incidence matrix and ``x`` the per-author log-ability vector.
Constrained mode minimizes R subject to ``x >= 0`` by projected gradient
descent with an Armijo backtracking line search; unconstrained mode solves
the plain least-squares problem directly, returning the minimum-norm
solution when F is rank deficient.

R is a convex quadratic, so any KKT point of the constrained problem is a
global minimum; the reported KKT violation certifies optimality regardless
of the iteration path taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import NumericError
from .model import CONSTRAINED, UNCONSTRAINED, AbilityVector, AuthorshipMatrix, Dataset

INIT_FRACTIONAL = "fractional_citations"
INIT_ONES = "ones"

STOP_GRADIENT = "gradient_tolerance"
STOP_OBJECTIVE = "objective_tolerance"
STOP_MAX_ITERATIONS = "max_iterations"
STOP_DIRECT = "direct"

_ARMIJO_C = 1e-4


@dataclass(frozen=True)
class SolveConfig:
    """Options controlling a solve.

    Parameters
    ----------
    mode : str
        ``"constrained"`` enforces log-abilities >= 0; ``"unconstrained"``
        allows authors with ability below one.
    max_iterations : int
        Iteration cap for the projected-gradient loop.
    gradient_tolerance : float
        Convergence threshold on the infinity norm of the projected
        gradient (the KKT violation).
    objective_tolerance : float
        Stop when the relative decrease of the objective falls below this.
    initialization : str or array
        ``"fractional_citations"``, ``"ones"``, or an explicit start vector
        over the matrix's author columns.
    """

    mode: str = CONSTRAINED
    max_iterations: int = 10000
    gradient_tolerance: float = 1e-8
    objective_tolerance: float = 1e-12
    initialization: Union[str, Sequence[float], np.ndarray] = INIT_FRACTIONAL

    def __post_init__(self):
        if self.mode not in (CONSTRAINED, UNCONSTRAINED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.gradient_tolerance <= 0 or self.objective_tolerance <= 0:
            raise ValueError("tolerances must be > 0")
        if isinstance(self.initialization, str) and self.initialization not in (
            INIT_FRACTIONAL,
            INIT_ONES,
        ):
            raise ValueError(f"unknown initialization {self.initialization!r}")


@dataclass(frozen=True)
class SolveDiagnostics:
    """Per-solve audit trail.

    ``objective_trace`` holds the objective at the start point and after
    every accepted iterate and is non-increasing. ``active_constraints``
    lists the authors pinned at zero log-ability (constrained mode).
    ``kkt_violation`` is the projected-gradient infinity norm at the
    returned point and ``stop_reason`` names the rule that ended iteration.
    """

    objective_trace: tuple[float, ...]
    active_constraints: frozenset[str]
    kkt_violation: float
    stop_reason: str


def _check_dimensions(matrix: AuthorshipMatrix, log_q, x=None):
    log_q = np.asarray(log_q, dtype=float)
    if log_q.shape != (matrix.n_papers,):
        raise ValueError(
            f"log_q has shape {log_q.shape}, expected ({matrix.n_papers},)"
        )
    if x is None:
        return log_q
    x = np.asarray(x, dtype=float)
    if x.shape != (matrix.n_authors,):
        raise ValueError(f"x has shape {x.shape}, expected ({matrix.n_authors},)")
    return log_q, x


def objective(matrix: AuthorshipMatrix, log_q, x) -> float:
    """Sum of squared residuals R(x) between observed and modeled log-quality.

    Parameters
    ----------
    matrix : AuthorshipMatrix
        Incidence matrix with one row per paper.
    log_q : array, shape (n_papers,)
        Observed log-quality per paper, finite.
    x : array, shape (n_authors,)
        Log-ability per author column.
    """
    log_q, x = _check_dimensions(matrix, log_q, x)
    r = log_q - matrix.to_dense() @ x
    return float(r @ r)


def gradient(matrix: AuthorshipMatrix, log_q, x) -> np.ndarray:
    """Gradient of R: ``dR/dx_i = -2 * sum_over_papers_of_i (residual)``."""
    log_q, x = _check_dimensions(matrix, log_q, x)
    dense = matrix.to_dense()
    r = log_q - dense @ x
    return -2.0 * (dense.T @ r)


def _fractional_init(matrix: AuthorshipMatrix, q: np.ndarray) -> np.ndarray:
    """Start vector ln(max(1, mean fractional citations per paper))."""
    row_counts = np.zeros(matrix.n_papers)
    for r, _ in matrix.entries:
        row_counts[r] += 1.0
    x0 = np.zeros(matrix.n_authors)
    for c, rows in enumerate(matrix.column_rows):
        if not rows:
            continue
        idx = sorted(rows)
        frac = sum(q[r] / row_counts[r] for r in idx) / len(idx)
        x0[c] = np.log(max(1.0, frac))
    return x0


def initialize(
    dataset: Dataset, matrix: AuthorshipMatrix, strategy: str = INIT_FRACTIONAL
) -> np.ndarray:
    """Build the start vector for the iterative solve.

    The fractional strategy assigns each author the log of their average
    fractional citation count per paper, clamped below at ability one so the
    start point is feasible for the constrained fit. The ones strategy
    starts every ability at one (x = 0).
    """
    if strategy == INIT_ONES:
        return np.zeros(matrix.n_authors)
    if strategy != INIT_FRACTIONAL:
        raise ValueError(f"unknown initialization strategy {strategy!r}")
    by_id = dataset.paper_by_id
    q = np.array([by_id[p].citation_count for p in matrix.paper_ids], dtype=float)
    return _fractional_init(matrix, q)


def _projected_gradient_norm(x: np.ndarray, g: np.ndarray) -> float:
    """Infinity norm of the projected gradient for the bound x >= 0.

    Free coordinates contribute |g_i|; coordinates at the bound contribute
    only a negative gradient (pushing into the feasible region), so a value
    of zero is exactly the KKT condition.
    """
    pg = np.where(x > 0.0, g, np.minimum(g, 0.0))
    return float(np.max(np.abs(pg))) if pg.size else 0.0


def _solve_unconstrained(dense, log_q):
    x, _, _, _ = np.linalg.lstsq(dense, log_q, rcond=None)
    r = log_q - dense @ x
    res = float(r @ r)
    kkt = float(np.max(np.abs(-2.0 * (dense.T @ r)))) if x.size else 0.0
    return x, res, kkt


def _solve_constrained(dense, log_q, x0, config):
    # 1/L step with L = 2 * ||F^T F||_inf; the max row sum bounds the largest
    # eigenvalue, so this step already satisfies sufficient decrease and the
    # backtracking below is a numerical safeguard.
    lipschitz = 2.0 * float(np.max(dense.T @ dense.sum(axis=1)))
    t0 = 1.0 / lipschitz

    x = np.maximum(x0, 0.0)
    r = log_q - dense @ x
    obj = float(r @ r)
    if not np.isfinite(obj):
        raise NumericError("objective is not finite at the start point")
    trace = [obj]
    iterations = 0
    stop = STOP_MAX_ITERATIONS

    for _ in range(config.max_iterations):
        g = -2.0 * (dense.T @ r)
        if _projected_gradient_norm(x, g) <= config.gradient_tolerance:
            stop = STOP_GRADIENT
            break

        t = t0
        while True:
            x_new = np.maximum(x - t * g, 0.0)
            r_new = log_q - dense @ x_new
            obj_new = float(r_new @ r_new)
            if not np.isfinite(obj_new):
                raise NumericError("objective became non-finite during the solve")
            if obj_new <= obj + _ARMIJO_C * float(g @ (x_new - x)):
                break
            t *= 0.5
            if t < 1e-20 * t0:
                x_new, r_new, obj_new = x, r, obj
                break

        iterations += 1
        decrease = obj - obj_new
        x, r = x_new, r_new
        trace.append(obj_new)
        if decrease <= config.objective_tolerance * max(1.0, obj):
            obj = obj_new
            stop = STOP_OBJECTIVE
            break
        obj = obj_new

    # Active-set polish: once the projected iteration has identified which
    # coordinates sit at the bound, one exact least-squares solve on the free
    # block removes the slow terminal crawl of first-order steps. The
    # candidate is accepted only if it keeps feasibility and does not
    # increase the objective, so the descent and feasibility guarantees are
    # unaffected.
    free = x > 0.0
    if np.any(free):
        z, _, _, _ = np.linalg.lstsq(dense[:, free], log_q, rcond=None)
        if np.all(z >= 0.0):
            candidate = np.zeros_like(x)
            candidate[free] = z
            r_cand = log_q - dense @ candidate
            obj_cand = float(r_cand @ r_cand)
            if obj_cand <= obj:
                x, r, obj = candidate, r_cand, obj_cand
                trace.append(obj)

    kkt = _projected_gradient_norm(x, -2.0 * (dense.T @ r))
    return x, obj, kkt, iterations, trace, stop


def solve(
    matrix: AuthorshipMatrix, log_q, config: SolveConfig | None = None
) -> tuple[AbilityVector, SolveDiagnostics]:
    """Fit per-author log-abilities to per-paper log-quality.

    Parameters
    ----------
    matrix : AuthorshipMatrix
        Incidence matrix; rows must match ``log_q``.
    log_q : array, shape (n_papers,)
        Log-quality (log citation count) per paper; all entries finite.
    config : SolveConfig, optional
        Mode, tolerances and initialization. Defaults to a constrained solve.

    Returns
    -------
    abilities : AbilityVector
        Fitted log-abilities keyed by author id, with the final objective
        value, iteration count, and convergence flag. ``converged`` is True
        exactly when the KKT violation is within the gradient tolerance, so
        a reported convergence is always a certified optimum.
    diagnostics : SolveDiagnostics
        Objective trace, active set, KKT violation, and stop reason.

    Notes
    -----
    Exceeding ``max_iterations`` is reported through ``converged=False``,
    not an exception; a non-finite objective raises ``NumericError``.
    Duplicate matrix columns make the minimizer non-unique although the
    optimal objective stays unique; see ``find_inseparable_groups``.
    """
    config = config or SolveConfig()
    log_q = _check_dimensions(matrix, log_q)
    if not np.all(np.isfinite(log_q)):
        raise NumericError("log_q contains non-finite entries")

    dense = matrix.to_dense()

    if isinstance(config.initialization, str):
        if config.initialization == INIT_ONES:
            x0 = np.zeros(matrix.n_authors)
        else:
            x0 = _fractional_init(matrix, np.exp(log_q))
    else:
        _, x0 = _check_dimensions(matrix, log_q, config.initialization)
        if not np.all(np.isfinite(x0)):
            raise NumericError("explicit start vector contains non-finite entries")

    if config.mode == UNCONSTRAINED:
        x, res, kkt = _solve_unconstrained(dense, log_q)
        iterations, trace, stop = 0, [res], STOP_DIRECT
        converged = True
        active: frozenset[str] = frozenset()
    else:
        x, res, kkt, iterations, trace, stop = _solve_constrained(
            dense, log_q, x0, config
        )
        converged = kkt <= config.gradient_tolerance
        active = frozenset(
            matrix.author_ids[i] for i in np.flatnonzero(x == 0.0)
        )

    abilities = AbilityVector(
        log_abilities={a: float(v) for a, v in zip(matrix.author_ids, x)},
        residual=res,
        iterations=iterations,
        converged=converged,
        mode=config.mode,
    )
    diagnostics = SolveDiagnostics(
        objective_trace=tuple(trace),
        active_constraints=active,
        kkt_violation=kkt,
        stop_reason=stop,
    )
    return abilities, diagnostics
