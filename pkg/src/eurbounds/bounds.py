"""Closed-form entropy bounds for symmetric measurement sets.

Each bound is returned as a BoundResult carrying the formula tag and the
intermediate quantities (index-of-coincidence budget C, segment indices n and
k, the residual coincidence c, the two-level probabilities) so tests can
assert on them directly.

Index-of-coincidence identities used throughout (purity = Tr(rho^2)):

* rank-1 SIC:       I = (1 + purity) / (d (d+1))
* general SIC:      I = ((a d^3 - 1) purity + d (1 - a d)) / (d (d^2 - 1))
* MUB set:          I <= purity + (M - 1)/d          (equality when complete)
* MUM set:          I <= M/d + (kappa d - 1)/(d (d-1)) (d purity - 1)
                    (equality when complete)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .probdist import (
    ProbDist,
    extremal_x,
    extremal_x_entropy,
    extremal_x_padded,
    extremal_y,
    extremal_y_entropy,
    extremal_y_padded,
    renyi_entropy,
    uniform,
)
from .quantum import DensityMatrix, MeasurementSet
from .util import DomainError

_TOL = 1e-12

FORMULA_IDS = (
    "THM1_UPPER", "THM1_LOWER", "GSIC_MINENT", "THM2", "THM2_REDUCED", "WYM",
    "THM3", "RAS1", "RAS2", "CONJ_SIC3", "CONJ_MUB3", "BERTA_FORM",
    "APPROX_PURE", "APPROX_MIXED",
)


@dataclass
class BoundResult:
    """A bound value in bits plus its provenance and intermediates."""

    value: float
    formula_id: str
    params: dict = field(default_factory=dict)
    is_upper: bool = False
    tight: bool | None = None
    conjecture: bool = False
    clamped: bool = False

    def __post_init__(self):
        if self.formula_id not in FORMULA_IDS:
            raise DomainError(f"unknown formula id {self.formula_id}")
        if not math.isfinite(self.value):
            raise DomainError(f"non-finite bound value for {self.formula_id}")


def _check_purity(d: int, purity: float) -> float:
    if not 1.0 / d - _TOL <= purity <= 1.0 + _TOL:
        raise DomainError(f"purity {purity} outside [1/{d}, 1]")
    return min(max(purity, 1.0 / d), 1.0)


def _check_order(order: float) -> float:
    order = float(order)
    if math.isnan(order) or order <= 0:
        raise DomainError(f"entropy order must be positive, got {order}")
    return order


# --------------------------------------------------------------------------
# index-of-coincidence identities
# --------------------------------------------------------------------------

def gsic_index(d: int, a: float, purity: float) -> float:
    """Index of coincidence of a general SIC outcome distribution."""
    if not 1.0 / d**3 < a <= 1.0 / d**2 + _TOL:
        raise DomainError(f"need 1/d^3 < a <= 1/d^2, got a={a}")
    purity = _check_purity(d, purity)
    return ((a * d**3 - 1.0) * purity + d * (1.0 - a * d)) / (d * (d * d - 1.0))


def sic_index(d: int, purity: float) -> float:
    """Index of coincidence of a rank-1 SIC outcome distribution."""
    purity = _check_purity(d, purity)
    return (1.0 + purity) / (d * (d + 1.0))


def mub_ic_bound(d: int, n_bases: int, purity: float) -> float:
    """Upper bound on the IC sum for MUBs; exact for complete sets."""
    purity = _check_purity(d, purity)
    return purity + (n_bases - 1.0) / d


def mum_index_max(d: int, n_meas: int, kappa: float, purity: float) -> float:
    """Upper bound on the IC sum for MUMs; exact for complete sets."""
    if n_meas < 1:
        raise DomainError("need at least one measurement")
    if not 1.0 / d < kappa <= 1.0 + _TOL:
        raise DomainError(f"efficiency must lie in (1/{d}, 1], got {kappa}")
    purity = _check_purity(d, purity)
    return n_meas / d + (kappa * d - 1.0) / (d * (d - 1.0)) * (d * purity - 1.0)


# --------------------------------------------------------------------------
# general SIC bounds
# --------------------------------------------------------------------------

def gsic_tight_ranges(d: int, a: float) -> tuple[float, float]:
    """Purity ceilings below which the x-side / y-side bounds are attained."""
    return d * d * a, (d - 2.0 + a * d * d) / (d - 1.0) ** 2


def gsic_entropy_bound(d: int, a: float, purity: float, order: float,
                       side: str) -> BoundResult:
    """Entropy bound for a general SIC-POVM from its coincidence index.

    ``side`` selects the upper or lower bound on H_order; which extremal
    distribution realizes it depends on whether the order is below or above 2.
    The ``tight`` flag reports whether the bound is attained by an explicit
    state (see :func:`tightness_state`).
    """
    if side not in ("upper", "lower"):
        raise DomainError("side must be 'upper' or 'lower'")
    order = _check_order(order)
    ic = gsic_index(d, a, purity)
    L = d * d
    x_tight_max, y_tight_max = gsic_tight_ranges(d, a)

    hx = renyi_entropy(extremal_x(L, ic), order)
    hy = renyi_entropy(extremal_y(L, ic), order)
    if order == 2.0:
        value, extremal = -math.log2(ic), "xy"
        tight = purity <= max(x_tight_max, y_tight_max) + _TOL
    elif (order < 2.0) == (side == "upper"):
        value, extremal = hx, "x"
        tight = purity <= x_tight_max + _TOL
    else:
        value, extremal = hy, "y"
        tight = purity <= y_tight_max + _TOL

    return BoundResult(
        value, "THM1_UPPER" if side == "upper" else "THM1_LOWER",
        params={"ic": ic, "a": a, "purity": purity, "extremal": extremal,
                "x_tight_max": x_tight_max, "y_tight_max": y_tight_max},
        is_upper=(side == "upper"), tight=tight)


def gsic_min_entropy_bound(d: int, a: float, purity: float) -> BoundResult:
    """Closed-form min-entropy lower bound for a general SIC-POVM.

    2 log2 d - log2(1 + sqrt(a d^3 - 1) sqrt(purity d - 1)); coincides with
    the order-infinity case of the coincidence-based lower bound.
    """
    if not 1.0 / d**3 < a <= 1.0 / d**2 + _TOL:
        raise DomainError(f"need 1/d^3 < a <= 1/d^2, got a={a}")
    purity = _check_purity(d, purity)
    arg = 1.0 + math.sqrt(max(a * d**3 - 1.0, 0.0)) * math.sqrt(max(purity * d - 1.0, 0.0))
    return BoundResult(2.0 * math.log2(d) - math.log2(arg), "GSIC_MINENT",
                       params={"a": a, "purity": purity})


def tightness_state(mset: MeasurementSet, purity: float, extremal: str) -> DensityMatrix:
    """Explicit state achieving the general-SIC bound on its flagged range.

    Solves Tr(rho S_i) = p_i for rho = sum_i x_i S_i with p the requested
    extremal distribution at the set's coincidence index, via
    x_i = (d (d a - 1) + d (d^2 - 1) p_i) / (d^3 a - 1).  Raises DomainError
    (through DensityMatrix validation) if the resulting matrix is not PSD.
    """
    if mset.kind not in ("gsic", "sic"):
        raise DomainError("tightness states exist for general SIC sets only")
    if extremal not in ("x", "y"):
        raise DomainError("extremal must be 'x' or 'y'")
    d = mset.d
    a = mset.params["a"]
    ic = gsic_index(d, a, purity)
    p = extremal_x_padded(d * d, ic) if extremal == "x" else extremal_y_padded(d * d, ic)
    x = (d * (d * a - 1.0) + d * (d * d - 1.0) * p) / (d**3 * a - 1.0)
    rho = sum(xi * e for xi, e in zip(x, mset.povms[0].elements))
    return DensityMatrix(rho)


# --------------------------------------------------------------------------
# MUM bounds, Shannon side
# --------------------------------------------------------------------------

def _thm2_pieces(d: int, n_meas: int, c_budget: float) -> tuple[int, int, float]:
    """Segment indices (n, k) and residual coincidence c for the entropy-sum
    minimizer at total coincidence ``c_budget``.

    Floors carry a 1e-12 slack so exact-boundary budgets stay in the segment
    where the bound is continuous; k is capped at n_meas - 1 (at the lower
    boundary the literal floor would count every distribution as upgraded).
    """
    m = n_meas
    n = int(math.floor(m / c_budget + 1e-12))
    n = max(1, min(n, d))
    k = int(math.floor((c_budget - m / (n + 1.0)) * (n + 1.0) * n + 1e-12))
    k = max(0, min(k, m - 1))
    c = c_budget - k / n - (m - k - 1.0) / (n + 1.0)
    c = min(max(c, 1.0 / (n + 1.0) - 1e-12), 1.0 / n + 1e-12)
    c = min(max(c, 1.0 / d), 1.0)
    return n, k, c


def mum_reduced_threshold(d: int, kappa: float) -> float:
    """Purity ceiling for the single-segment (reduced) form of the bound."""
    return (d + kappa - 2.0) / (d - 1.0) ** 2


def mum_shannon_lower(d: int, n_meas: int, kappa: float,
                      purity: float) -> tuple[BoundResult, BoundResult | None]:
    """Lower bound on the Shannon entropy sum of a set of MUMs.

    Returns the general piecewise bound and, when the purity lies below the
    single-segment threshold, the reduced form as a second result.
    """
    c_budget = mum_index_max(d, n_meas, kappa, purity)
    n, k, c = _thm2_pieces(d, n_meas, c_budget)
    value = (renyi_entropy(extremal_y(d, c), 1.0)
             + k * math.log2(n) + (n_meas - k - 1.0) * math.log2(n + 1.0))
    main = BoundResult(value, "THM2",
                       params={"C": c_budget, "n": n, "k": k, "c": c,
                               "kappa": kappa, "purity": purity})
    reduced = None
    if purity <= mum_reduced_threshold(d, kappa) + _TOL:
        reduced = mum_reduced_lower(d, n_meas, kappa, purity, 1.0)
    return main, reduced


def mum_reduced_lower(d: int, n_meas: int, kappa: float, purity: float,
                      order: float = 1.0) -> BoundResult:
    """Single-segment lower bound, valid for orders in (0, 1].

    (M-1) log2 d + H_order(extremal_y(d, C - (M-1)/d)) on the purity range
    where the minimizer keeps M-1 distributions uniform.
    """
    order = _check_order(order)
    if order > 1.0:
        raise DomainError("the reduced bound holds for orders in (0, 1] only")
    if purity > mum_reduced_threshold(d, kappa) + _TOL:
        raise DomainError(
            f"purity {purity} above the reduced-form threshold "
            f"{mum_reduced_threshold(d, kappa):.6f}")
    c_budget = mum_index_max(d, n_meas, kappa, purity)
    c = min(max(c_budget - (n_meas - 1.0) / d, 1.0 / d), 1.0)
    value = (n_meas - 1.0) * math.log2(d) + renyi_entropy(extremal_y(d, c), order)
    return BoundResult(value, "THM2_REDUCED",
                       params={"C": c_budget, "c": c, "order": order,
                               "kappa": kappa, "purity": purity})


def theorem2_witness(d: int, n_meas: int, kappa: float, purity: float) -> list[ProbDist]:
    """The minimizing tuple of distributions behind the Shannon bound.

    k distributions uniform over n outcomes, M - k - 1 uniform over n + 1,
    and one extremal_y(d, c); their coincidence indices sum to the budget and
    their entropies sum to the bound value.
    """
    c_budget = mum_index_max(d, n_meas, kappa, purity)
    n, k, c = _thm2_pieces(d, n_meas, c_budget)
    out = [uniform(n) for _ in range(k)]
    out.extend(uniform(n + 1) for _ in range(n_meas - k - 1))
    out.append(extremal_y(d, c))
    return out


def wym_bound(d: int, n_bases: int, purity: float) -> BoundResult:
    """Linearized Shannon lower bound for MUBs.

    [M - nC](n+1) log2(n+1) - [M - (n+1)C] n log2 n with C the coincidence
    budget; dominated by the piecewise bound except at c = 1/n, 1/(n+1).
    """
    c_budget = mub_ic_bound(d, n_bases, purity)
    m = n_bases
    n = int(math.floor(m / c_budget + 1e-12))
    n = max(1, min(n, d))
    value = ((m - n * c_budget) * (n + 1.0) * math.log2(n + 1.0)
             - (m - (n + 1.0) * c_budget) * n * math.log2(n))
    return BoundResult(value, "WYM", params={"C": c_budget, "n": n, "purity": purity})


# --------------------------------------------------------------------------
# MUM bounds, order >= 2
# --------------------------------------------------------------------------

def mum_renyi_lower(d: int, n_meas: int, kappa: float, purity: float,
                    order: float) -> BoundResult:
    """Lower bound on the Renyi entropy sum of MUMs for orders >= 2."""
    order = _check_order(order)
    if order < 2.0:
        raise DomainError("this bound requires order >= 2")
    c_budget = mum_index_max(d, n_meas, kappa, purity)
    c = min(max(c_budget / n_meas, 1.0 / d), 1.0)
    pa = (1.0 + math.sqrt((d - 1.0) * max(d * c - 1.0, 0.0))) / d
    pb = (1.0 - math.sqrt(max(d * c - 1.0, 0.0) / (d - 1.0))) / d
    if math.isinf(order):
        per = -math.log2(pa)
    elif order == 2.0:
        per = -math.log2(c)
    else:
        g = (d - 1.0) ** (2.0 / order)
        per = (order / (1.0 - order) * math.log2(pa)
               + math.log2(d) / ((1.0 - order) * math.log1p(g))
               * math.log1p(g * pb * pb / (pa * pa)))
    return BoundResult(n_meas * per, "THM3",
                       params={"C": c_budget, "c": c, "p_a": pa, "p_b": pb,
                               "kappa": kappa, "purity": purity})


def rastegin_bounds(d: int, c: float, order: float) -> tuple[BoundResult, BoundResult]:
    """Earlier per-measurement lower bounds at coincidence c, orders >= 2."""
    order = _check_order(order)
    if order < 2.0:
        raise DomainError("these bounds require order >= 2")
    if not 1.0 / d - _TOL <= c <= 1.0 + _TOL:
        raise DomainError(f"c={c} outside [1/{d}, 1]")
    c = min(max(c, 1.0 / d), 1.0)
    pa = (1.0 + math.sqrt(max(d * c - 1.0, 0.0) * (d - 1.0))) / d
    if math.isinf(order):
        v1 = -0.5 * math.log2(c)
        v2 = -math.log2(pa)
    else:
        v1 = order / (2.0 * (1.0 - order)) * math.log2(c)
        v2 = ((order - 2.0) / (1.0 - order) * math.log2(pa)
              + 1.0 / (1.0 - order) * math.log2(c))
    params = {"c": c, "p_a": pa}
    return (BoundResult(v1, "RAS1", params=dict(params)),
            BoundResult(v2, "RAS2", params=dict(params)))


# --------------------------------------------------------------------------
# conjectured / diagnostic bounds
# --------------------------------------------------------------------------

def conjectured_bounds(d: int, kind: str, purity: float,
                       n_meas: int | None = None) -> BoundResult:
    """Empirically observed tight lower bounds (flagged as conjectures).

    kind "SIC3": Shannon bound for the d=3 rank-1 SIC; the coincidence
    argument 2I falls below its feasible interval for purity < 1/2, in which
    case the value is clamped and flagged.  kind "MUB3": complete MUBs in
    dimension 3.  kind "BERTA": the entropy-of-the-spectrum form for complete
    MUBs at purity <= 1/(d-1).
    """
    purity = _check_purity(d, purity)
    if kind == "SIC3":
        if d != 3:
            raise DomainError("SIC3 conjecture is specific to d=3")
        carg = 2.0 * sic_index(3, purity)
        clamped = carg < 0.25 - _TOL
        carg = min(max(carg, 0.25), 1.0)
        value = renyi_entropy(extremal_y(4, carg), 1.0) + 1.0
        return BoundResult(value, "CONJ_SIC3", params={"c": carg, "purity": purity},
                           conjecture=True, clamped=clamped)
    if kind == "MUB3":
        if d != 3:
            raise DomainError("MUB3 conjecture is specific to d=3")
        carg = (1.0 + purity) / 3.0
        value = 1.0 + 3.0 * renyi_entropy(extremal_y(3, carg), 1.0)
        return BoundResult(value, "CONJ_MUB3", params={"c": carg, "purity": purity},
                           conjecture=True)
    if kind == "BERTA":
        m = d + 1 if n_meas is None else n_meas
        spectrum_entropy = renyi_entropy(extremal_y(d, purity), 1.0)
        out_of_range = purity > 1.0 / (d - 1.0) + _TOL
        return BoundResult((m - 1.0) * math.log2(d) + spectrum_entropy, "BERTA_FORM",
                           params={"purity": purity, "M": m},
                           conjecture=True, clamped=out_of_range)
    raise DomainError(f"unknown conjecture kind {kind}")


def mub_upper_approx(d: int, purity: float, regime: str) -> BoundResult:
    """Unproved upper approximations for complete MUB sets (diagnostic only)."""
    purity = _check_purity(d, purity)
    ic = mub_ic_bound(d, d + 1, purity)
    if regime == "pure":
        carg = ic / (d + 1.0)
        clamped = not (1.0 / d - _TOL <= carg <= 1.0 + _TOL)
        carg = min(max(carg, 1.0 / d), 1.0)
        value = (d + 1.0) * renyi_entropy(extremal_x(d, carg), 1.0)
        fid = "APPROX_PURE"
    elif regime == "mixed":
        carg = ic - 1.0
        clamped = not (1.0 / d - _TOL <= carg <= 1.0 + _TOL)
        carg = min(max(carg, 1.0 / d), 1.0)
        value = d * math.log2(d) + renyi_entropy(extremal_x(d, carg), 1.0)
        fid = "APPROX_MIXED"
    else:
        raise DomainError("regime must be 'pure' or 'mixed'")
    return BoundResult(value, fid, params={"c": carg, "purity": purity},
                       is_upper=True, conjecture=True, clamped=clamped)


# --------------------------------------------------------------------------
# applicability dispatch (CLI, diagrams, soundness sweeps)
# --------------------------------------------------------------------------

def applicable_bounds(kind: str, d: int, purity: float, order: float,
                      n_meas: int | None = None, kappa: float | None = None,
                      a: float | None = None,
                      complete: bool = True) -> list[BoundResult]:
    """Every bound that applies to a measurement set at the given order.

    Proven bounds come first, conjectured/diagnostic ones after (check the
    ``conjecture`` flag).  For general SIC kinds ``a`` is required; for MUM
    kinds ``kappa``; MUB kinds assume kappa = 1.
    """
    order = _check_order(order)
    out: list[BoundResult] = []
    if kind in ("gsic", "sic"):
        aa = 1.0 / d**2 if (a is None and kind == "sic") else a
        if aa is None:
            raise DomainError("general SIC bounds need the self-overlap a")
        out.append(gsic_entropy_bound(d, aa, purity, order, "lower"))
        out.append(gsic_entropy_bound(d, aa, purity, order, "upper"))
        if math.isinf(order):
            out.append(gsic_min_entropy_bound(d, aa, purity))
        if kind == "sic" and d == 3 and order == 1.0:
            out.append(conjectured_bounds(3, "SIC3", purity))
        return out

    if kind in ("mub", "mum"):
        kap = 1.0 if kind == "mub" else kappa
        if kap is None:
            raise DomainError("MUM bounds need the efficiency kappa")
        m = (d + 1 if complete else None) if n_meas is None else n_meas
        if m is None:
            raise DomainError("number of measurements required")
        if order == 1.0:
            main, reduced = mum_shannon_lower(d, m, kap, purity)
            out.append(main)
            if reduced is not None:
                out.append(reduced)
            if kind == "mub":
                out.append(wym_bound(d, m, purity))
        elif order < 1.0 and purity <= mum_reduced_threshold(d, kap) + _TOL:
            out.append(mum_reduced_lower(d, m, kap, purity, order))
        if order >= 2.0:
            out.append(mum_renyi_lower(d, m, kap, purity, order))
            c = min(max(mum_index_max(d, m, kap, purity) / m, 1.0 / d), 1.0)
            r1, r2 = rastegin_bounds(d, c, order)
            r1.value *= m
            r2.value *= m
            r1.params["M"] = r2.params["M"] = m
            out.append(r1)
            out.append(r2)
        if kind == "mub" and order == 1.0:
            if d == 3 and complete:
                out.append(conjectured_bounds(3, "MUB3", purity))
            if complete and purity <= 1.0 / (d - 1.0) + _TOL:
                out.append(conjectured_bounds(d, "BERTA", purity, m))
            if complete:
                out.append(mub_upper_approx(d, purity, "pure"))
                out.append(mub_upper_approx(d, purity, "mixed"))
        return out

    raise DomainError(f"no bounds for measurement kind {kind}")


# --------------------------------------------------------------------------
# vectorized bound kernels (Monte-Carlo sweeps)
# --------------------------------------------------------------------------

def thm2_values(d: int, n_meas: int, kappa: float, purity: np.ndarray) -> np.ndarray:
    """Vectorized Shannon lower bound over an array of purities."""
    purity = np.clip(np.asarray(purity, dtype=float), 1.0 / d, 1.0)
    m = float(n_meas)
    cb = m / d + (kappa * d - 1.0) / (d * (d - 1.0)) * (d * purity - 1.0)
    n = np.clip(np.floor(m / cb + 1e-12), 1, d)
    k = np.clip(np.floor((cb - m / (n + 1.0)) * (n + 1.0) * n + 1e-12), 0, m - 1)
    c = cb - k / n - (m - k - 1.0) / (n + 1.0)
    c = np.clip(c, 1.0 / (n + 1.0) - 1e-12, 1.0 / n + 1e-12)
    c = np.clip(c, 1.0 / d, 1.0)
    return extremal_y_entropy(d, c, 1.0) + k * np.log2(n) + (m - k - 1.0) * np.log2(n + 1.0)


def thm3_values(d: int, n_meas: int, kappa: float, purity: np.ndarray,
                order: float) -> np.ndarray:
    """Vectorized order->=2 lower bound over an array of purities."""
    order = _check_order(order)
    if order < 2.0:
        raise DomainError("this bound requires order >= 2")
    purity = np.clip(np.asarray(purity, dtype=float), 1.0 / d, 1.0)
    m = float(n_meas)
    cb = m / d + (kappa * d - 1.0) / (d * (d - 1.0)) * (d * purity - 1.0)
    c = np.clip(cb / m, 1.0 / d, 1.0)
    root = np.clip(d * c - 1.0, 0.0, None)
    pa = (1.0 + np.sqrt((d - 1.0) * root)) / d
    pb = (1.0 - np.sqrt(root / (d - 1.0))) / d
    if math.isinf(order):
        per = -np.log2(pa)
    elif order == 2.0:
        per = -np.log2(c)
    else:
        g = (d - 1.0) ** (2.0 / order)
        per = (order / (1.0 - order) * np.log2(pa)
               + np.log2(d) / ((1.0 - order) * np.log1p(g))
               * np.log1p(g * pb * pb / (pa * pa)))
    return m * per


def gsic_bound_values(d: int, a: float, purity: np.ndarray,
                      order: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (lower, upper) general-SIC bounds over purities."""
    order = _check_order(order)
    purity = np.clip(np.asarray(purity, dtype=float), 1.0 / d, 1.0)
    ic = ((a * d**3 - 1.0) * purity + d * (1.0 - a * d)) / (d * (d * d - 1.0))
    L = d * d
    if order == 2.0:
        h = -np.log2(ic)
        return h, h
    hx = extremal_x_entropy(L, ic, order)
    hy = extremal_y_entropy(L, ic, order)
    return (hy, hx) if order < 2.0 else (hx, hy)
