"""Monte-Carlo information diagrams, entropy regions, and gap reports.

Maps sampled density matrices to (purity, entropy-sum) points for a fixed
measurement set, compares the attained region against the closed-form bounds,
and writes delimited output (with optional rendered figures) for offline
inspection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds as _bounds
from .probdist import ProbDist, renyi_entropy
from .quantum import (
    DensityMatrix,
    MeasurementSet,
    conjecture_spectrum_state,
    maximally_mixed,
    outcome_probabilities,
    random_density_fixed_purity,
    random_density_hs,
)
from .util import ConvergenceError, DomainError, child_rng

STRATEGIES = ("hs", "stratified", "conjecture", "rank_sweep")

#: purity bins used by the stratified sampler
DEFAULT_STRATA = 50


@dataclass
class DiagramPoint:
    x: float            # purity of the sampled state
    y: float            # entropy sum in bits
    sampler: str
    rank: int
    sample_index: int

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("non-finite diagram point")
        if self.y < -1e-12:
            raise DomainError("negative entropy sum")


@dataclass
class EntropyVector:
    components: tuple
    sampler: str
    sample_index: int


def _stacked_elements(mset: MeasurementSet) -> tuple[np.ndarray, list[int]]:
    """All POVM elements flattened for batched Born-rule evaluation."""
    mats = []
    sizes = []
    for povm in mset.povms:
        for e in povm.elements:
            mats.append(e.conj().ravel())
        sizes.append(len(povm))
    return np.asarray(mats), sizes


def entropy_sums_batch(mset: MeasurementSet, states: list[DensityMatrix],
                       order: float) -> np.ndarray:
    """Entropy sum for each state, evaluated with one matrix product."""
    flats, sizes = _stacked_elements(mset)
    svecs = np.asarray([s.matrix.ravel() for s in states])
    probs = (flats @ svecs.T).real.T          # (n_states, total_outcomes)
    probs = np.clip(probs, 0.0, None)
    out = np.zeros(len(states))
    start = 0
    for size in sizes:
        block = probs[:, start:start + size]
        block = block / block.sum(axis=1, keepdims=True)
        if math.isinf(order):
            out += -np.log2(block.max(axis=1))
        elif order == 1.0:
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = np.where(block > 0, block * np.log2(np.where(block > 0, block, 1.0)), 0.0)
            out += -terms.sum(axis=1)
        else:
            out += np.log2((block**order).sum(axis=1)) / (1.0 - order)
        start += size
    return np.clip(out, 0.0, None)


def _sample_states(d: int, n_samples: int, strategy: str, seed: int) -> list[tuple[DensityMatrix, str, int]]:
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    out = []
    if strategy == "hs":
        for i in range(n_samples):
            out.append((random_density_hs(d, d, child_rng(seed, i)), "hs", d))
    elif strategy == "rank_sweep":
        for i in range(n_samples):
            rank = 1 + i % d
            out.append((random_density_hs(d, rank, child_rng(seed, i)), "rank_sweep", rank))
    elif strategy == "stratified":
        edges = np.linspace(1.0 / d, 1.0, DEFAULT_STRATA + 1)
        for i in range(n_samples):
            b = i % DEFAULT_STRATA
            rng = child_rng(seed, i)
            purity = rng.uniform(edges[b], edges[b + 1])
            out.append((random_density_fixed_purity(d, purity, rng), "stratified", d))
    else:  # conjecture
        edges = np.linspace(1.0 / d, 1.0, DEFAULT_STRATA + 1)
        for i in range(n_samples):
            b = i % DEFAULT_STRATA
            rng = child_rng(seed, i)
            purity = rng.uniform(edges[b], edges[b + 1])
            out.append((conjecture_spectrum_state(d, purity, rng), "conjecture", d))
    return [(s, tag, rank) for (s, tag, rank) in out]


def info_diagram(mset: MeasurementSet, order: float, n_samples: int,
                 strategy: str = "stratified", seed: int = 0) -> list[DiagramPoint]:
    """Sampled (purity, entropy sum) points for a measurement set.

    The maximally mixed state is always included (sampler tag "maxmixed",
    index -1) so every diagram contains its anchor point (1/d, M log2 d).
    Points come back sorted by x with ties broken by sample index.
    """
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    d = mset.d
    sampled = _sample_states(d, n_samples, strategy, seed)
    states = [maximally_mixed(d)] + [s for s, _, _ in sampled]
    tags = [("maxmixed", d, -1)] + [(tag, rank, i) for i, (_, tag, rank) in enumerate(sampled)]
    ys = entropy_sums_batch(mset, states, order)
    pts = [DiagramPoint(states[i].purity, float(ys[i]), tags[i][0], tags[i][1], tags[i][2])
           for i in range(len(states))]
    pts.sort(key=lambda p: (p.x, p.sample_index))
    return pts


def entropy_region_mub(d: int, n_samples: int, seed: int = 0) -> list[EntropyVector]:
    """Per-measurement Shannon entropy vectors for three unbiased bases."""
    if d not in (2, 3):
        raise DomainError("entropy regions are generated for d in {2, 3}")
    from .quantum import mub_set

    mset = mub_set(d)
    povms = mset.povms[:3]
    out = []
    for i in range(n_samples):
        rho = random_density_hs(d, d, child_rng(seed, i))
        comps = tuple(
            renyi_entropy(ProbDist(outcome_probabilities(p, rho)), 1.0) for p in povms
        )
        out.append(EntropyVector(comps, "hs", i))
    return out


def entropy_region_constrained(d: int, n_samples: int, seed: int = 0,
                               budget_factor: int = 100) -> list[EntropyVector]:
    """Entropy vectors of distribution triples with a bounded coincidence sum.

    Triples are drawn from a flat Dirichlet on each simplex and accepted when
    3/d <= sum of their coincidence indices <= 1 + 2/d, the range attainable
    by three unbiased bases.  Raises ConvergenceError if the rejection budget
    (budget_factor * n_samples draws) is exhausted.
    """
    if d < 2:
        raise DomainError("d must be >= 2")
    lo, hi = 3.0 / d, 1.0 + 2.0 / d
    out = []
    budget = budget_factor * n_samples
    draws = 0
    idx = 0
    while len(out) < n_samples:
        if draws >= budget:
            raise ConvergenceError(
                f"rejection budget exhausted after {draws} draws "
                f"({len(out)}/{n_samples} accepted)")
        rng = child_rng(seed, draws)
        draws += 1
        trip = [rng.dirichlet(np.ones(d)) for _ in range(3)]
        total = sum(float(p @ p) for p in trip)
        if lo - 1e-12 <= total <= hi + 1e-12:
            comps = tuple(renyi_entropy(ProbDist(p), 1.0) for p in trip)
            out.append(EntropyVector(comps, "dirichlet", idx))
            idx += 1
    return out


# --------------------------------------------------------------------------
# gap report
# --------------------------------------------------------------------------

def _set_bound_kwargs(mset: MeasurementSet) -> dict:
    kw = {"kind": mset.kind, "d": mset.d}
    if mset.kind in ("mub", "mum"):
        kw["n_meas"] = mset.n_measurements
        kw["complete"] = mset.n_measurements == mset.d + 1
        if mset.kind == "mum":
            kw["kappa"] = mset.params["kappa"]
    else:
        kw["a"] = mset.params["a"]
    return kw


def gap_report(mset: MeasurementSet, order: float, strata: int = 10,
               seed: int = 0, samples_per_stratum: int = 200) -> list[dict]:
    """Per-purity-stratum comparison of sampled entropy sums against bounds.

    Each row contains the stratum edges, the empirical min/max entropy sum
    over mixed sampling strategies (fixed-purity, spectrum-extremal, and for
    general SIC sets the explicit bound-attaining states), and the value and
    gap of every applicable bound at the stratum midpoint.  Raw report; no
    row is asserted here.
    """
    d = mset.d
    edges = np.linspace(1.0 / d, 1.0, strata + 1)
    kwargs = _set_bound_kwargs(mset)
    rows = []
    for b in range(strata):
        lo, hi = float(edges[b]), float(edges[b + 1])
        mid = 0.5 * (lo + hi)
        states = []
        for i in range(samples_per_stratum):
            rng = child_rng(seed, b * samples_per_stratum + i)
            purity = rng.uniform(lo, hi)
            if i % 3 == 0:
                states.append(conjecture_spectrum_state(d, purity, rng))
            else:
                states.append(random_density_fixed_purity(d, purity, rng))
        if mset.kind in ("gsic", "sic"):
            for extremal in ("x", "y"):
                try:
                    states.append(_bounds.tightness_state(mset, mid, extremal))
                except DomainError:
                    pass
        ys = entropy_sums_batch(mset, states, order)
        row = {
            "purity_lo": lo, "purity_hi": hi, "purity_mid": mid,
            "empirical_min": float(ys.min()), "empirical_max": float(ys.max()),
            "n_states": len(states),
        }
        for br in _bounds.applicable_bounds(purity=mid, order=order, **kwargs):
            key = br.formula_id.lower()
            row[key] = br.value
            if br.is_upper:
                row[f"{key}_gap"] = br.value - row["empirical_max"]
            else:
                row[f"{key}_gap"] = row["empirical_min"] - br.value
        rows.append(row)
    return rows


# --------------------------------------------------------------------------
# delimited output and figures
# --------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_diagram_csv(points: list[DiagramPoint], path) -> None:
    with open(path, "w") as fh:
        fh.write("x,y,sampler,rank,sample_index\n")
        for p in points:
            fh.write(f"{_fmt(p.x)},{_fmt(p.y)},{p.sampler},{p.rank},{p.sample_index}\n")


def write_region_csv(vectors: list[EntropyVector], path) -> None:
    with open(path, "w") as fh:
        fh.write("h1,h2,h3,sampler,sample_index\n")
        for v in vectors:
            h1, h2, h3 = v.components
            fh.write(f"{_fmt(h1)},{_fmt(h2)},{_fmt(h3)},{v.sampler},{v.sample_index}\n")


def write_gap_csv(rows: list[dict], path) -> None:
    if not rows:
        raise DomainError("empty gap report")
    cols = list(rows[0].keys())
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(
                _fmt(row[c]) if isinstance(row[c], float) else str(row[c])
                for c in cols) + "\n")


def bound_curves(mset: MeasurementSet, order: float,
                 n_points: int = 200) -> dict[str, np.ndarray]:
    """Applicable bound values on a purity grid, keyed by formula id."""
    d = mset.d
    grid = np.linspace(1.0 / d, 1.0, n_points)
    kwargs = _set_bound_kwargs(mset)
    curves: dict[str, list] = {}
    for purity in grid:
        for br in _bounds.applicable_bounds(purity=float(purity), order=order, **kwargs):
            curves.setdefault(br.formula_id, []).append(br.value)
    out = {"purity": grid}
    for key, vals in curves.items():
        if len(vals) == n_points:
            out[key] = np.asarray(vals)
    return out


def render_diagram_png(points: list[DiagramPoint], mset: MeasurementSet,
                       order: float, path) -> None:
    """Scatter the sampled diagram with bound overlays to a PNG file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    by_sampler: dict[str, list[DiagramPoint]] = {}
    for p in points:
        by_sampler.setdefault(p.sampler, []).append(p)
    for tag, pts in sorted(by_sampler.items()):
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        if tag == "maxmixed":
            ax.scatter(xs, ys, s=60, marker="*", color="k", zorder=5, label=tag)
        else:
            ax.scatter(xs, ys, s=4, alpha=0.35, label=tag)
    curves = bound_curves(mset, order)
    grid = curves.pop("purity")
    for key, vals in sorted(curves.items()):
        ax.plot(grid, vals, lw=1.2, label=key.lower())
    label = "inf" if math.isinf(order) else f"{order:g}"
    ax.set_xlabel(r"purity $\mathrm{Tr}(\rho^2)$")
    ax.set_ylabel(f"entropy sum (bits), order {label}")
    ax.set_title(f"{mset.kind} d={mset.d}, {mset.n_measurements} measurement(s)")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_region_png(vectors: list[EntropyVector], path, title: str = "") -> None:
    """Project entropy-vector samples onto coordinate pairs, to a PNG file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    pairs = [(0, 1), (0, 2), (1, 2)]
    for ax, (i, j) in zip(axes, pairs):
        ax.scatter([v.components[i] for v in vectors],
                   [v.components[j] for v in vectors], s=3, alpha=0.3)
        ax.set_xlabel(f"H{i + 1} (bits)")
        ax.set_ylabel(f"H{j + 1} (bits)")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
