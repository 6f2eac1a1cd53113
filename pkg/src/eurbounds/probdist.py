"""Probability distributions at fixed index of coincidence.

Provides Renyi entropies, the two closed-form extremal distributions that
bound the entropy of any distribution with a given index of coincidence, the
general two-level family they belong to, and a brute-force optimizer that
recovers the same extremes by constrained search (used as an independent
check at desk scale).

Conventions: entropies are in bits, probability vectors are kept in canonical
form (descending, zeros stripped), and ``order`` may be any positive float,
``1`` (Shannon) or ``math.inf`` (min-entropy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .util import (
    LOG2E,
    ConvergenceError,
    DomainError,
    rng_from,
    simplex_point_with_ic,
    xlog2x,
)

#: Alias for entropy orders; plain floats with math.inf for min-entropy.
EntropyOrder = float

INF = math.inf

_SUM_TOL = 1e-12
_STRIP_TOL = 1e-15
_EDGE_TOL = 1e-12


class ProbDist:
    """A finite probability distribution in canonical form.

    Entries are sorted descending, entries below 1e-15 are stripped, and the
    vector is validated to sum to one within 1e-12 (then renormalized so that
    downstream arithmetic sees an exact unit sum).  Optional ``labels`` ride
    along through canonicalization, which lets a caller recover which raw
    outcome each retained probability belongs to.
    """

    __slots__ = ("_probs", "_labels")

    def __init__(self, probs, labels=None):
        p = np.asarray(probs, dtype=float).ravel()
        if p.size == 0:
            raise DomainError("empty probability vector")
        if not np.all(np.isfinite(p)):
            raise DomainError("non-finite probability entries")
        if p.min() < -1e-12:
            raise DomainError(f"negative probability {p.min()}")
        s = p.sum()
        if abs(s - 1.0) > _SUM_TOL:
            raise DomainError(f"probabilities sum to {s}, not 1")
        p = np.clip(p, 0.0, None) / s
        order = np.argsort(-p, kind="stable")
        p = p[order]
        keep = p >= _STRIP_TOL
        if labels is not None:
            labels = [labels[i] for i in order]
            labels = tuple(lab for lab, k in zip(labels, keep) if k)
        self._probs = p[keep]
        self._labels = labels

    @property
    def probs(self) -> np.ndarray:
        return self._probs.copy()

    @property
    def labels(self):
        return self._labels

    def __len__(self) -> int:
        return int(self._probs.size)

    def __iter__(self):
        return iter(self._probs)

    def __repr__(self) -> str:
        body = ", ".join(f"{x:.6g}" for x in self._probs[:8])
        if len(self) > 8:
            body += ", ..."
        return f"ProbDist([{body}])"

    def padded(self, length: int) -> np.ndarray:
        """Probabilities padded with zeros to ``length`` (descending order)."""
        if length < len(self):
            raise DomainError(f"cannot pad {len(self)} outcomes into length {length}")
        out = np.zeros(length)
        out[: len(self)] = self._probs
        return out

    def allclose(self, other, atol: float = 1e-10) -> bool:
        if len(self) != len(other):
            return False
        return bool(np.allclose(self._probs, np.asarray(other.probs), atol=atol))


def uniform(n: int) -> ProbDist:
    """Uniform distribution over n outcomes."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return ProbDist(np.full(n, 1.0 / n))


def _validate_order(order: float) -> float:
    order = float(order)
    if math.isnan(order) or order <= 0:
        raise DomainError(f"entropy order must be positive, got {order}")
    return order


def renyi_entropy(dist: ProbDist, order: EntropyOrder) -> float:
    """Renyi entropy of ``dist`` in bits.

    order=1 and order=inf use the dedicated Shannon / min-entropy forms rather
    than numerical limits.
    """
    order = _validate_order(order)
    p = dist._probs if isinstance(dist, ProbDist) else ProbDist(dist)._probs
    if math.isinf(order):
        h = -math.log2(p[0])
    elif order == 1.0:
        h = float(-xlog2x(p).sum())
    else:
        h = math.log2(float(np.sum(p**order))) / (1.0 - order)
    if not math.isfinite(h):
        raise DomainError("non-finite entropy; corrupted distribution")
    return max(h, 0.0)


def index_of_coincidence(dist: ProbDist) -> float:
    """Sum of squared probabilities, in [1/L, 1]."""
    p = dist._probs if isinstance(dist, ProbDist) else ProbDist(dist)._probs
    return float(p @ p)


@dataclass(frozen=True)
class TwoLevelParams:
    """Parameters of a distribution with at most two distinct positive values.

    ``n_outcomes`` positive entries, ``n_large`` of them equal to the larger
    value, and index of coincidence ``ic``.  Feasibility requires
    1/n_outcomes <= ic <= 1/n_large.
    """

    ic: float
    n_outcomes: int
    n_large: int

    def __post_init__(self):
        n, na = self.n_outcomes, self.n_large
        if not (1 <= na <= n):
            raise DomainError(f"need 1 <= n_large <= n_outcomes, got {na}, {n}")
        if not (1.0 / n - _EDGE_TOL <= self.ic <= 1.0 / na + _EDGE_TOL):
            raise DomainError(f"ic={self.ic} outside [1/{n}, 1/{na}]")
        if na == n and abs(self.ic - 1.0 / n) > _EDGE_TOL:
            raise DomainError("n_large == n_outcomes forces the uniform distribution ic = 1/n")

    @property
    def theta(self) -> float:
        """Angle parametrization 2*arccos(sqrt(n_large/n_outcomes))."""
        return 2.0 * math.acos(math.sqrt(self.n_large / self.n_outcomes))

    @property
    def p_large(self) -> float:
        return _two_level_values(self.ic, self.n_outcomes, self.n_large)[0]

    @property
    def p_small(self) -> float:
        return _two_level_values(self.ic, self.n_outcomes, self.n_large)[1]


def _two_level_values(c: float, n: int, na: int) -> tuple[float, float]:
    if na == n:
        return 1.0 / n, 0.0
    root = max(n * c - 1.0, 0.0)
    pa = (1.0 + math.sqrt(root * (n - na) / na)) / n
    pb = (1.0 - math.sqrt(root * na / (n - na))) / n
    return pa, max(pb, 0.0)


def two_level_dist(params: TwoLevelParams) -> ProbDist:
    """Distribution with n_large entries at p_large and the rest at p_small."""
    n, na = params.n_outcomes, params.n_large
    pa, pb = _two_level_values(params.ic, n, na)
    vec = np.concatenate([np.full(na, pa), np.full(n - na, pb)])
    return ProbDist(vec / vec.sum())


def _check_ic_domain(length: int, c: float) -> float:
    if length < 2:
        raise DomainError("length must be >= 2")
    if not (1.0 / length - _EDGE_TOL <= c <= 1.0 + _EDGE_TOL):
        raise DomainError(f"index of coincidence {c} outside [1/{length}, 1]")
    return min(max(c, 1.0 / length), 1.0)


def extremal_x(length: int, c: float) -> ProbDist:
    """One large probability, the rest equal, with index of coincidence c.

    This is the entropy maximizer among length-``length`` distributions with
    sum of squares c for orders below 2 (and the minimizer above 2).
    """
    c = _check_ic_domain(length, c)
    if c >= 1.0:
        return ProbDist([1.0])
    return two_level_dist(TwoLevelParams(c, length, 1))


def _segment_count(c: float) -> int:
    # ceil with a slack so c sitting exactly on 1/k selects the k-segment
    return int(math.ceil(1.0 / c - 1e-12))


def extremal_y(length: int, c: float) -> ProbDist:
    """All-but-one probabilities equal and large, with index of coincidence c.

    The number of positive entries is ceil(1/c); the distribution is the
    entropy minimizer below order 2 and the maximizer above.  Continuous in c
    across the segment boundaries c = 1/k.
    """
    c = _check_ic_domain(length, c)
    n = _segment_count(c)
    if n <= 1:
        return ProbDist([1.0])
    return two_level_dist(TwoLevelParams(c, n, n - 1))


def extremal_x_padded(length: int, c: float) -> np.ndarray:
    """extremal_x as a full length-``length`` vector including zeros."""
    return extremal_x(length, c).padded(length)


def extremal_y_padded(length: int, c: float) -> np.ndarray:
    """extremal_y as a full length-``length`` vector including zeros."""
    return extremal_y(length, c).padded(length)


def theorem1_bounds(length: int, c: float, order: EntropyOrder) -> tuple[float, float]:
    """(lower, upper) entropy bounds at fixed index of coincidence.

    For orders in (0, 2] the minimum is attained by extremal_y and the maximum
    by extremal_x; for orders in [2, inf] the roles swap.  At order 2 both
    collapse to -log2(c).
    """
    order = _validate_order(order)
    c = _check_ic_domain(length, c)
    if order == 2.0:
        h2 = -math.log2(c)
        return h2, h2
    hx = renyi_entropy(extremal_x(length, c), order)
    hy = renyi_entropy(extremal_y(length, c), order)
    if order < 2.0:
        return hy, hx
    return hx, hy


# --------------------------------------------------------------------------
# vectorized extremal entropies (used by the bound sweeps)
# --------------------------------------------------------------------------

def _two_level_entropy_vec(c: np.ndarray, n: np.ndarray, na: np.ndarray, order: float) -> np.ndarray:
    """H_order of the two-level family, vectorized over c/n/na arrays."""
    c = np.asarray(c, dtype=float)
    n = np.asarray(n, dtype=float)
    na = np.asarray(na, dtype=float)
    nb = n - na
    root = np.clip(n * c - 1.0, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        pa = (1.0 + np.sqrt(np.where(nb > 0, root * nb / np.where(na > 0, na, 1), 0.0))) / n
        pb = np.where(nb > 0, (1.0 - np.sqrt(root * na / np.where(nb > 0, nb, 1))) / n, 0.0)
    pa = np.clip(pa, 1e-300, 1.0)
    pb = np.clip(pb, 0.0, 1.0)
    if math.isinf(order):
        return -np.log2(pa)
    if order == 1.0:
        return -(na * xlog2x(pa) + nb * xlog2x(pb))
    s = na * pa**order + np.where(pb > 0, nb * pb**order, 0.0)
    return np.log2(s) / (1.0 - order)


def extremal_x_entropy(length: int, c, order: EntropyOrder) -> np.ndarray:
    """Vectorized H_order(extremal_x(length, c)) over an array of c values."""
    order = _validate_order(order)
    c = np.clip(np.asarray(c, dtype=float), 1.0 / length, 1.0)
    n = np.full_like(c, float(length))
    return _two_level_entropy_vec(c, n, np.ones_like(c), order)


def extremal_y_entropy(length: int, c, order: EntropyOrder) -> np.ndarray:
    """Vectorized H_order(extremal_y(length, c)) over an array of c values."""
    order = _validate_order(order)
    c = np.clip(np.asarray(c, dtype=float), 1.0 / length, 1.0)
    n = np.ceil(1.0 / c - 1e-12)
    return _two_level_entropy_vec(c, n, n - 1.0, order)


# --------------------------------------------------------------------------
# brute-force oracle
# --------------------------------------------------------------------------

_ORACLE_MAX_LENGTH = 6


@dataclass
class OracleResult:
    value: float
    arg: ProbDist
    n_converged: int


def _renyi_objective(order: float, sign: float):
    """Smooth objective over square-root coordinates z (p = z**2).

    Returns (fun, jac) with ``sign`` +1 to minimize entropy, -1 to maximize
    it; the monotone map between sum(p**order) and the entropy fixes the
    internal orientation.  Working in z keeps the gradient bounded at the
    simplex boundary, where p**order is singular for orders below one.
    """
    if order == 1.0:
        def fun(z):
            q = np.clip(z * z, 1e-300, None)
            return sign * float(-(q * np.log2(q)).sum())

        def jac(z):
            q = np.clip(z * z, 1e-300, None)
            return sign * (-2.0 * z * (np.log2(q) + LOG2E))

        return fun, jac

    # minimizing H for order<1 means minimizing sum(p**order); for order>1 it
    # means maximizing it, i.e. the wrapped sign flips with (1-order).
    inner = sign * (1.0 if order < 1.0 else -1.0)
    exponent = 2.0 * order

    def fun(z):
        return inner * float(np.sum(np.abs(z) ** exponent))

    def jac(z):
        zz = np.clip(np.abs(z), 1e-9, None)
        return inner * exponent * zz ** (exponent - 1.0)

    return fun, jac


def _face_optimize(k: int, c: float, order: float, direction: str,
                   inits, tol: float) -> list[tuple[float, np.ndarray]]:
    """Constrained optimization of H_order on the k-outcome face.

    Finite orders run in square-root coordinates (unit sphere with a quartic
    coincidence constraint); the min-entropy cases use linear / epigraph
    objectives directly in probability coordinates.  Returns a list of
    (entropy, vector) for converged feasible runs.
    """
    results = []

    def record(vec):
        vec = np.clip(vec, 0.0, None)
        s = vec.sum()
        if s <= 0:
            return
        vec = vec / s
        if abs(vec @ vec - c) > 1e-7:
            return
        h = renyi_entropy(ProbDist(vec), order)
        results.append((h, vec))

    bounds = [(0.0, 1.0)] * k
    if math.isinf(order):
        cons = [
            {"type": "eq", "fun": lambda p: p.sum() - 1.0,
             "jac": lambda p: np.ones_like(p)},
            {"type": "eq", "fun": lambda p: p @ p - c, "jac": lambda p: 2.0 * p},
        ]
        if direction == "min":
            # minimize H_inf == maximize the largest coordinate; the objective
            # is linear per coordinate, so try each in turn
            for j in range(k):
                e = np.zeros(k)
                e[j] = -1.0
                for x0 in inits:
                    res = minimize(lambda p: e @ p, x0, jac=lambda p: e, method="SLSQP",
                                   bounds=bounds, constraints=cons,
                                   options={"maxiter": 200, "ftol": tol})
                    if res.success:
                        record(res.x)
        else:
            # maximize H_inf == minimax of the coordinates via an epigraph variable
            def fun(z):
                return z[-1]

            def jac(z):
                g = np.zeros(k + 1)
                g[-1] = 1.0
                return g

            cons_t = [
                {"type": "eq", "fun": lambda z: z[:-1].sum() - 1.0,
                 "jac": lambda z: np.append(np.ones(k), 0.0)},
                {"type": "eq", "fun": lambda z: z[:-1] @ z[:-1] - c,
                 "jac": lambda z: np.append(2.0 * z[:-1], 0.0)},
                {"type": "ineq", "fun": lambda z: z[-1] - z[:-1],
                 "jac": lambda z: np.hstack([-np.eye(k), np.ones((k, 1))])},
            ]
            for x0 in inits:
                z0 = np.append(x0, x0.max())
                res = minimize(fun, z0, jac=jac, method="SLSQP",
                               bounds=bounds + [(1.0 / k, 1.0)], constraints=cons_t,
                               options={"maxiter": 300, "ftol": tol})
                if res.success:
                    record(res.x[:-1])
        return results

    cons = [
        {"type": "eq", "fun": lambda z: z @ z - 1.0, "jac": lambda z: 2.0 * z},
        {"type": "eq", "fun": lambda z: np.sum(z**4) - c, "jac": lambda z: 4.0 * z**3},
    ]
    fun, jac = _renyi_objective(order, 1.0 if direction == "min" else -1.0)
    for x0 in inits:
        res = minimize(fun, np.sqrt(np.clip(x0, 0.0, None)), jac=jac, method="SLSQP",
                       bounds=bounds, constraints=cons,
                       options={"maxiter": 300, "ftol": tol})
        if res.success:
            record(res.x**2)
    return results


def oracle_extremal(length: int, c: float, order: EntropyOrder, direction: str,
                    restarts: int = 200, seed: int = 7, tol: float = 1e-10) -> OracleResult:
    """Brute-force extremum of H_order over {sum p = 1, sum p**2 = c, p >= 0}.

    Explores every support size compatible with c, running a constrained local
    search (SLSQP) from randomized feasible starts on each face.  Desk-scale
    only: ``length`` must be at most 6.

    Raises ConvergenceError (carrying the best value found) if no restart
    converges to a feasible point.
    """
    if direction not in ("min", "max"):
        raise DomainError("direction must be 'min' or 'max'")
    if length > _ORACLE_MAX_LENGTH:
        raise DomainError(f"oracle supports length <= {_ORACLE_MAX_LENGTH}")
    order = _validate_order(order)
    c = _check_ic_domain(length, c)
    rng = rng_from(seed)

    if c >= 1.0 - 1e-14:
        return OracleResult(0.0, ProbDist([1.0]), 1)
    if c - 1.0 / length < 1e-12:
        # the feasible set degenerates to the single uniform point
        return OracleResult(math.log2(length), uniform(length), 1)

    k_min = max(2, _segment_count(c))
    faces = list(range(k_min, length + 1))
    per_face = max(4, restarts // len(faces))

    def better(h, ref):
        return ref is None or (h < ref if direction == "min" else h > ref)

    best: tuple[float, np.ndarray] | None = None
    n_conv = 0
    for k in faces:
        # mix flat, sparse, and vertex-leaning starting points so both
        # interior and near-boundary optima are seen on every face
        inits = [np.full(k, 1.0 / k)]
        for j in range(k):
            vertex = np.full(k, 1e-9)
            vertex[j] = 1.0 - (k - 1) * 1e-9
            inits.append(simplex_point_with_ic(k, c, rng, start=vertex))
        for i in range(max(per_face - 1 - k, 2)):
            alpha = 1.0 if i % 2 == 0 else 0.35
            raw = rng.dirichlet(np.full(k, alpha))
            if raw @ raw > 1.0 - 1e-9:
                raw = np.full(k, 1.0 / k)
            inits.append(simplex_point_with_ic(k, c, rng, start=raw))
        found = _face_optimize(k, c, order, direction, inits, tol)
        face_best = None
        for h, vec in found:
            n_conv += 1
            if better(h, face_best[0] if face_best else None):
                face_best = (h, vec)
            if better(h, best[0] if best else None):
                best = (h, vec)
        if face_best is not None:
            # polish: re-run from the face winner to squeeze out SLSQP slack
            polished = _face_optimize(k, c, order, direction, [face_best[1]], tol * 0.01)
            for h, vec in polished:
                if better(h, best[0] if best else None):
                    best = (h, vec)

    if best is None:
        raise ConvergenceError(
            f"oracle failed to converge for length={length}, c={c}, order={order}", best=None)
    return OracleResult(best[0], ProbDist(best[1]), n_conv)


def oracle_min_shannon_sum(length: int, n_dists: int, ic_total: float,
                           restarts: int = 40, seed: int = 11) -> tuple[float, list[ProbDist]]:
    """Brute-force minimum of a sum of Shannon entropies at fixed total IC.

    Minimizes sum_m H(P_m) over ``n_dists`` distributions of ``length``
    outcomes subject to sum_m IC(P_m) = ic_total.  Independent cross-check for
    the closed-form lower bound on entropy sums of unbiased measurements.
    """
    if not n_dists / length - 1e-9 <= ic_total <= n_dists + 1e-9:
        raise DomainError(f"ic_total={ic_total} outside [{n_dists}/{length}, {n_dists}]")
    rng = rng_from(seed)
    m, L = n_dists, length

    def fun(z):
        q = np.clip(z, 1e-300, None)
        return float(-(q * np.log2(q)).sum())

    def jac(z):
        q = np.clip(z, 1e-300, None)
        return -(np.log2(q) + 1.0 / math.log(2.0))

    cons = [
        {"type": "eq", "fun": lambda z: z @ z - ic_total, "jac": lambda z: 2.0 * z},
    ]
    for i in range(m):
        cons.append({
            "type": "eq",
            "fun": (lambda i: lambda z: z[i * L:(i + 1) * L].sum() - 1.0)(i),
            "jac": (lambda i: lambda z: np.concatenate(
                [np.zeros(i * L), np.ones(L), np.zeros((m - i - 1) * L)]))(i),
        })

    def structured_inits():
        # products of near-uniform blocks plus sharply concentrated blocks
        outs = []
        for sharp in range(m):
            z = []
            for i in range(m):
                if i < sharp:
                    v = np.zeros(L)
                    v[0] = 1.0
                    v = 0.98 * v + 0.02 / L
                else:
                    v = np.full(L, 1.0 / L)
                z.append(v)
            outs.append(np.concatenate(z))
        return outs

    best = None
    n_conv = 0
    inits = structured_inits()
    while len(inits) < restarts:
        target = rng.uniform(max(1.0 / L, ic_total - (m - 1)), min(1.0, ic_total - (m - 1) / L))
        blocks = [simplex_point_with_ic(L, target, rng)]
        remaining = ic_total - target
        for i in range(m - 1):
            lo = max(1.0 / L, remaining - (m - 2 - i))
            hi = min(1.0, remaining - (m - 2 - i) / L)
            t = rng.uniform(lo, hi) if hi > lo else lo
            blocks.append(simplex_point_with_ic(L, t, rng))
            remaining -= t
        inits.append(np.concatenate(blocks))

    for x0 in inits:
        res = minimize(fun, x0, jac=jac, method="SLSQP", bounds=[(0.0, 1.0)] * (m * L),
                       constraints=cons, options={"maxiter": 500, "ftol": 1e-12})
        if not res.success:
            continue
        z = np.clip(res.x, 0.0, None)
        if abs(z @ z - ic_total) > 1e-6:
            continue
        dists = []
        ok = True
        for i in range(m):
            block = z[i * L:(i + 1) * L]
            if abs(block.sum() - 1.0) > 1e-7:
                ok = False
                break
            dists.append(ProbDist(block / block.sum()))
        if not ok:
            continue
        n_conv += 1
        val = sum(renyi_entropy(p, 1.0) for p in dists)
        if best is None or val < best[0]:
            best = (val, dists)

    if best is None:
        raise ConvergenceError("entropy-sum oracle failed to converge", best=None)
    return best
