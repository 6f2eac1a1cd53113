"""Separability criterion from entropy sums and the Werner-state threshold.

The criterion compares the entropy sum of jointly measured observable pairs
against the larger of the two marginal entropy sums; separable states always
satisfy it, so a violation witnesses entanglement.  For the Werner family the
scan uses joint measurements refined toward the maximally entangled state,
which is what makes the violation visible at finite mixing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .probdist import ProbDist, renyi_entropy
from .quantum import DensityMatrix, Povm, outcome_probabilities
from .util import DomainError

_MARGINAL_TOL = 1e-10


class BipartiteState:
    """Density matrix on a tensor-product space with cached marginals."""

    __slots__ = ("_state", "dA", "dB", "_rhoA", "_rhoB")

    def __init__(self, matrix, dA: int, dB: int):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (dA * dB, dA * dB):
            raise DomainError(f"expected shape {(dA * dB,) * 2}, got {m.shape}")
        self._state = DensityMatrix(m)
        self.dA = dA
        self.dB = dB
        t = self._state.matrix.reshape(dA, dB, dA, dB)
        self._rhoA = DensityMatrix(np.einsum("ikjk->ij", t))
        self._rhoB = DensityMatrix(np.einsum("kikj->ij", t))

    @property
    def matrix(self) -> np.ndarray:
        return self._state.matrix

    @property
    def purity(self) -> float:
        return self._state.purity

    @property
    def marginal_a(self) -> DensityMatrix:
        return self._rhoA

    @property
    def marginal_b(self) -> DensityMatrix:
        return self._rhoB


def max_entangled_vector(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_k |kk>."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / math.sqrt(d)
    return v


def werner(d: int, p: float) -> BipartiteState:
    """Isotropic mixture (1-p)/d^2 * identity + p |psi><psi|.

    |psi> is the maximally entangled state; both marginals are maximally
    mixed for every p.  Entangled exactly when p > 1/(d+1).
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"mixing parameter p={p} outside [0, 1]")
    psi = max_entangled_vector(d)
    m = (1.0 - p) / d**2 * np.eye(d * d) + p * np.outer(psi, psi.conj())
    return BipartiteState(m, d, d)


def product_state(rho_a: DensityMatrix, rho_b: DensityMatrix) -> BipartiteState:
    return BipartiteState(np.kron(rho_a.matrix, rho_b.matrix), rho_a.d, rho_b.d)


def joint_dist(basis_a: Povm, basis_b: Povm, state: BipartiteState) -> ProbDist:
    """Joint outcome distribution p(i,j) = Tr[(A_i x B_j) rho].

    The returned distribution carries (i, j) labels through
    canonicalization; its marginals coincide with measuring the reduced
    states directly.
    """
    if basis_a.d != state.dA or basis_b.d != state.dB:
        raise DomainError("dimension mismatch between measurement pair and state")
    m = state.matrix
    probs = []
    labels = []
    for i, a in enumerate(basis_a.elements):
        for j, b in enumerate(basis_b.elements):
            probs.append(np.trace(np.kron(a, b) @ m).real)
            labels.append((i, j))
    p = np.clip(np.asarray(probs), 0.0, None)
    return ProbDist(p / p.sum(), labels=labels)


def correlation_adapted_povm(basis_a: Povm, basis_b: Povm) -> Povm:
    """Joint rank-1 measurement refined toward the maximally entangled state.

    Product outcomes |a_i b_j> are grouped into the classes s = (i + j) mod d
    (the eigenspaces of the product of the two clock-like basis observables);
    inside each class the first measurement vector is the normalized
    projection of the maximally entangled state, completed to an orthonormal
    class basis.  Falls back to the plain product basis within classes that
    do not overlap the entangled state.
    """
    d = basis_a.d
    if basis_b.d != d or len(basis_a) != d or len(basis_b) != d:
        raise DomainError("adapted measurements need two d-outcome bases on equal dimensions")
    phi = max_entangled_vector(d)

    def rank1_vector(e: np.ndarray) -> np.ndarray:
        vals, vecs = np.linalg.eigh(e)
        if vals[-1] < 1.0 - 1e-8 or abs(np.trace(e).real - 1.0) > 1e-8:
            raise DomainError("adapted measurements need rank-1 projective bases")
        return vecs[:, -1]

    avecs = [rank1_vector(e) for e in basis_a.elements]
    bvecs = [rank1_vector(e) for e in basis_b.elements]

    vectors = []
    labels = []
    for s in range(d):
        prods = [(i, j, np.kron(avecs[i], bvecs[j]))
                 for i in range(d) for j in range(d) if (i + j) % d == s]
        cls: list[np.ndarray] = []
        w = sum(np.vdot(v, phi) * v for _, _, v in prods)
        nrm = np.linalg.norm(w)
        if nrm > 1e-10:
            cls.append(w / nrm)
            labels.append((s, "phi"))
        for i, j, v in prods:
            q = v.astype(complex)
            for u in cls:
                q = q - np.vdot(u, q) * u
            n2 = np.linalg.norm(q)
            if n2 > 1e-8:
                cls.append(q / n2)
                labels.append((s, (i, j)))
        if len(cls) != d:
            raise DomainError("class completion failed; bases are degenerate")
        vectors.extend(cls)
    return Povm([np.outer(v, v.conj()) for v in vectors], labels=labels)


@dataclass
class CriterionResult:
    lhs: float
    rhs: float
    violated: bool
    marginal_a_sum: float
    marginal_b_sum: float


def eur_criterion(pairs, state: BipartiteState, order: float,
                  adapted: bool = False) -> CriterionResult:
    """Evaluate the separability criterion for a list of measurement pairs.

    lhs is the entropy sum of the joint distributions; rhs is the larger of
    the two marginal entropy sums.  With ``adapted=True`` the joint
    distributions are measured in the correlation-refined bases instead of
    the plain product bases (the marginal side is unchanged).  A violation
    (lhs < rhs - 1e-9) certifies entanglement; separable states never
    violate.
    """
    lhs = 0.0
    da = 0.0
    db = 0.0
    for basis_a, basis_b in pairs:
        if adapted:
            joint = correlation_adapted_povm(basis_a, basis_b)
            probs = outcome_probabilities(joint, DensityMatrix(state.matrix))
            lhs += renyi_entropy(ProbDist(probs), order)
        else:
            lhs += renyi_entropy(joint_dist(basis_a, basis_b, state), order)
        da += renyi_entropy(
            ProbDist(outcome_probabilities(basis_a, state.marginal_a)), order)
        db += renyi_entropy(
            ProbDist(outcome_probabilities(basis_b, state.marginal_b)), order)
    rhs = max(da, db)
    return CriterionResult(lhs, rhs, lhs < rhs - 1e-9, da, db)


# --------------------------------------------------------------------------
# Werner threshold scan
# --------------------------------------------------------------------------

def _clock_and_fourier_bases(d: int) -> list[np.ndarray]:
    """The computational basis and its Fourier transform (always unbiased)."""
    w = np.exp(2j * np.pi / d)
    fourier = np.array([[w ** (b * k) for k in range(d)] for b in range(d)]) / math.sqrt(d)
    return [np.eye(d, dtype=complex), fourier]


def witness_measurements(d: int) -> list[Povm]:
    """Correlation-adapted joint measurements for the Werner scan.

    One adapted measurement per complementary observable (computational and
    Fourier bases, paired with themselves on the two factors).
    """
    out = []
    for b in _clock_and_fourier_bases(d):
        povm = Povm.from_basis(b)
        out.append(correlation_adapted_povm(povm, povm))
    return out


@dataclass
class ThresholdResult:
    d: int
    order: float
    threshold: float
    found: bool
    rhs: float
    scan: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "d": self.d,
            "alpha": "inf" if math.isinf(self.order) else self.order,
            "threshold": self.threshold,
            "found": self.found,
            "rhs": self.rhs,
            "scan_points": self.scan,
        }, indent=2)


def werner_threshold(d: int, order: float = math.inf,
                     resolution: float = 1e-4) -> ThresholdResult:
    """Smallest Werner mixing p whose adapted entropy sum violates the bound.

    The right-hand side is the state-independent marginal value M log2 d
    (Werner marginals are maximally mixed at every p, so each of the M
    complementary observables contributes log2 d regardless of the state).
    The entropy sum is non-increasing in p, so a coarse scan at step 0.01
    followed by bisection to ``resolution`` locates the crossing.  When no p
    in [0, 1] violates, the threshold reports 1.0 with found=False.
    """
    if d not in (2, 3):
        raise DomainError("the Werner scan supports d in {2, 3}")
    if not 0 < resolution <= 1e-3:
        raise DomainError("resolution must be in (0, 1e-3]")
    order = float(order)
    if order <= 0:
        raise DomainError("entropy order must be positive")
    joints = witness_measurements(d)
    rhs = len(joints) * math.log2(d)

    def lhs(p: float) -> float:
        state = werner(d, p)
        rho = DensityMatrix(state.matrix)
        total = 0.0
        for joint in joints:
            total += renyi_entropy(ProbDist(outcome_probabilities(joint, rho)), order)
        return total

    scan = []
    first_bad = None
    grid = np.arange(0.0, 1.0 + 1e-12, 0.01)
    for p in grid:
        val = lhs(float(p))
        scan.append({"p": round(float(p), 6), "lhs": val, "rhs": rhs})
        if first_bad is None and val < rhs - 1e-9:
            first_bad = float(p)
    if first_bad is None:
        return ThresholdResult(d, order, 1.0, False, rhs, scan)

    lo = max(first_bad - 0.01, 0.0)
    hi = first_bad
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if lhs(mid) < rhs - 1e-9:
            hi = mid
        else:
            lo = mid
    return ThresholdResult(d, order, 0.5 * (lo + hi), True, rhs, scan)
