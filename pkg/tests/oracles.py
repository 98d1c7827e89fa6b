"""Independent reference implementations the tests check the package against.

Everything here is deliberately naive (explicit loops, exhaustive
enumeration) and shares no code with the package internals, so agreement is
meaningful.
"""

import itertools

import numpy as np


def naive_objective(dense, log_q, x):
    """Sum of squared residuals by an explicit double loop."""
    total = 0.0
    for row in range(dense.shape[0]):
        predicted = 0.0
        for col in range(dense.shape[1]):
            predicted += dense[row, col] * x[col]
        total += (log_q[row] - predicted) ** 2
    return total


def central_difference_gradient(func, x, step=1e-6):
    """Central finite differences of a scalar function."""
    grad = np.zeros(len(x))
    for i in range(len(x)):
        up = np.array(x, dtype=float)
        down = np.array(x, dtype=float)
        up[i] += step
        down[i] -= step
        grad[i] = (func(up) - func(down)) / (2.0 * step)
    return grad


def enumerate_active_sets(dense, log_q, feas_tol=1e-10, kkt_tol=1e-7):
    """Global minimum of ||log_q - F x||^2 over x >= 0 by enumeration.

    For every subset of coordinates fixed at zero, solve the reduced
    least-squares problem on the remaining columns, keep candidates that are
    feasible and whose gradient is non-negative on the fixed coordinates,
    and return the best objective and point. Exponential in the number of
    columns; intended for instances with at most ~12 columns.
    """
    n = dense.shape[1]
    best_obj, best_x = None, None
    for mask in itertools.product((False, True), repeat=n):
        free = np.array(mask, dtype=bool)
        x = np.zeros(n)
        if free.any():
            z, _, _, _ = np.linalg.lstsq(dense[:, free], np.asarray(log_q), rcond=None)
            if np.any(z < -feas_tol):
                continue
            x[free] = np.maximum(z, 0.0)
        residual = log_q - dense @ x
        grad = -2.0 * (dense.T @ residual)
        if np.any(grad[~free] < -kkt_tol):
            continue
        obj = float(residual @ residual)
        if best_obj is None or obj < best_obj:
            best_obj, best_x = obj, x
    if best_obj is None:
        raise AssertionError("enumeration found no KKT point; degenerate instance")
    return best_obj, best_x


def naive_pearson(xs, ys):
    """Two-pass product-moment formula with plain Python arithmetic."""
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    num = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    den_x = sum((x - mean_x) ** 2 for x in xs)
    den_y = sum((y - mean_y) ** 2 for y in ys)
    return num / (den_x * den_y) ** 0.5


def naive_average_ranks(values):
    """1-based ranks with ties averaged, by quadratic counting."""
    ranks = []
    for v in values:
        less = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        ranks.append(less + (equal + 1) / 2.0)
    return ranks


def naive_spearman(xs, ys):
    return naive_pearson(naive_average_ranks(xs), naive_average_ranks(ys))


def duplicate_column_pairs(dense):
    """All unordered pairs of identical columns, by direct comparison."""
    pairs = []
    n = dense.shape[1]
    for i in range(n):
        for j in range(i + 1, n):
            if np.array_equal(dense[:, i], dense[:, j]):
                pairs.append((i, j))
    return pairs
