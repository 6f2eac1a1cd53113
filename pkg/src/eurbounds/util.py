"""Shared numerical helpers: domain errors, seeded RNG streams, simplex samplers."""

from __future__ import annotations

import math

import numpy as np

#: log2 of e, used to convert natural logs to bits.
LOG2E = 1.0 / math.log(2.0)


class DomainError(ValueError):
    """An argument violates a documented precondition."""


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its budget.

    Carries ``best`` (the best value found so far) when available.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


def rng_from(seed) -> np.random.Generator:
    """Return a Generator from a seed, passing Generators through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def child_rng(seed: int, index: int) -> np.random.Generator:
    """Deterministic per-worker stream derived from (seed, index)."""
    return np.random.default_rng([int(seed), int(index)])


def xlog2x(p: np.ndarray) -> np.ndarray:
    """Elementwise p*log2(p) with the 0*log(0) = 0 convention."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def simplex_point_with_ic(length: int, ic: float, rng: np.random.Generator,
                          start: np.ndarray | None = None) -> np.ndarray:
    """Random point of the probability simplex with a prescribed sum of squares.

    Draws a flat Dirichlet sample (or takes ``start``) and moves it radially
    (within simplex faces) until sum(p**2) equals ``ic``.  Deflation toward
    the uniform point handles samples that start too concentrated; inflation
    walks outward, dropping coordinates that hit zero, so arbitrarily high
    values of ``ic`` up to 1 are reachable.  The output is exact to floating
    precision, not uniform on the constraint set.
    """
    if not 1.0 / length - 1e-12 <= ic <= 1.0 + 1e-12:
        raise DomainError(f"ic={ic} outside [1/{length}, 1]")
    ic = min(max(ic, 1.0 / length), 1.0)
    if length == 1:
        return np.ones(1)

    x = rng.dirichlet(np.ones(length)) if start is None else np.asarray(start, dtype=float)
    cur = float(x @ x)
    u = np.full(length, 1.0 / length)

    if cur >= ic:
        if cur - 1.0 / length < 1e-30:
            return u
        t = math.sqrt((ic - 1.0 / length) / (cur - 1.0 / length))
        return u + t * (x - u)

    # inflate toward the boundary, restricting to the current support
    support = np.ones(length, dtype=bool)
    while True:
        m = int(support.sum())
        w = np.where(support, x - x[support].sum() / m, 0.0)
        if np.linalg.norm(w) < 1e-14:
            # degenerate start (uniform on support): pick a random direction
            w = np.where(support, rng.normal(size=length), 0.0)
            w[support] -= w[support].mean()
        a = float(x @ w)
        if a < 0:
            w = -w
            a = -a
        b = float(w @ w)
        cur = float(x @ x)
        t_target = (-a + math.sqrt(max(a * a + b * (ic - cur), 0.0))) / b
        neg = w < -1e-15
        t_edge = np.min(-x[neg] / w[neg]) if neg.any() else math.inf
        if t_target <= t_edge:
            x = x + t_target * w
            break
        x = x + t_edge * w
        x[x < 1e-14] = 0.0
        support = x > 0
        if support.sum() <= 1:
            x = np.zeros(length)
            x[int(np.argmax(support))] = 1.0
            break

    x = np.clip(x, 0.0, None)
    return x / x.sum()
