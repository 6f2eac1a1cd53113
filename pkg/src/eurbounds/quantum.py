"""Density matrices, random-state samplers, and symmetric measurement sets.

Measurement constructors are validated against their defining trace
relations; those relations, not any particular parametrization, are the
contract.  All samplers take explicit seeds and are deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .probdist import ProbDist, extremal_y
from .util import DomainError, rng_from

_HERM_TOL = 1e-12
_TRACE_TOL = 1e-12
_PSD_TOL = 1e-10


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


class DensityMatrix:
    """d x d complex Hermitian PSD matrix with unit trace.

    The spectrum (descending) and purity Tr(rho^2) are computed once at
    construction and cached.  Instances are immutable.
    """

    __slots__ = ("_mat", "_spectrum", "_purity")

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > _HERM_TOL:
            raise DomainError("matrix is not Hermitian within 1e-12")
        m = _hermitize(m)
        tr = np.trace(m).real
        if abs(tr - 1.0) > _TRACE_TOL:
            raise DomainError(f"trace is {tr}, not 1")
        eig = np.linalg.eigvalsh(m)
        if eig.min() < -_PSD_TOL:
            raise DomainError(f"negative eigenvalue {eig.min()}")
        self._mat = m
        self._mat.setflags(write=False)
        self._spectrum = np.sort(np.clip(eig, 0.0, None))[::-1]
        self._purity = float(np.sum(np.abs(m) ** 2).real)

    @property
    def d(self) -> int:
        return self._mat.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._mat

    @property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues, descending, clipped at zero."""
        return self._spectrum.copy()

    @property
    def purity(self) -> float:
        return self._purity

    def __repr__(self) -> str:
        return f"DensityMatrix(d={self.d}, purity={self.purity:.6f})"

    def to_json(self) -> str:
        """Row-major [[re, im], ...] encoding."""
        flat = self._mat.ravel()
        return json.dumps([[float(z.real), float(z.imag)] for z in flat])

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        pairs = json.loads(text)
        n = len(pairs)
        d = round(math.isqrt(n))
        if d * d != n:
            raise DomainError(f"JSON entry count {n} is not a perfect square")
        flat = np.array([complex(re, im) for re, im in pairs])
        return cls(flat.reshape(d, d))


def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix(np.eye(d) / d)


def pure_state(vec) -> DensityMatrix:
    v = np.asarray(vec, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))


class Povm:
    """A positive operator-valued measure: PSD elements summing to identity."""

    __slots__ = ("_elements", "labels")

    def __init__(self, elements, labels=None, validate: bool = True):
        elems = [np.asarray(e, dtype=complex) for e in elements]
        d = elems[0].shape[0]
        if validate:
            total = np.zeros((d, d), dtype=complex)
            for e in elems:
                if e.shape != (d, d):
                    raise DomainError("inconsistent element shapes")
                if np.abs(e - e.conj().T).max() > 1e-10:
                    raise DomainError("POVM element not Hermitian")
                if np.linalg.eigvalsh(_hermitize(e)).min() < -_PSD_TOL:
                    raise DomainError("POVM element not PSD within 1e-10")
                total += e
            if np.abs(total - np.eye(d)).max() > _PSD_TOL:
                raise DomainError("POVM elements do not sum to identity within 1e-10")
        self._elements = [_hermitize(e) for e in elems]
        self.labels = labels if labels is not None else list(range(len(elems)))

    @property
    def elements(self) -> list[np.ndarray]:
        return [e.copy() for e in self._elements]

    @property
    def d(self) -> int:
        return self._elements[0].shape[0]

    def __len__(self) -> int:
        return len(self._elements)

    @classmethod
    def from_basis(cls, vectors) -> "Povm":
        """Rank-1 projective measurement from an orthonormal basis (rows)."""
        vecs = np.asarray(vectors, dtype=complex)
        return cls([np.outer(v, v.conj()) for v in vecs])


@dataclass
class MeasurementSet:
    """Ordered list of POVMs with a kind tag.

    kind is one of "mub", "mum", "gsic", "sic", "custom"; ``params`` carries
    realized constructor parameters (efficiency for MUMs, the self-overlap for
    general SICs, raw strength t).
    """

    povms: list[Povm]
    kind: str
    d: int
    params: dict = field(default_factory=dict)

    @property
    def n_measurements(self) -> int:
        return len(self.povms)

    def subset(self, count: int) -> "MeasurementSet":
        if not 1 <= count <= len(self.povms):
            raise DomainError("invalid subset size")
        return MeasurementSet(self.povms[:count], self.kind, self.d, dict(self.params))


def outcome_probabilities(povm: Povm, rho: DensityMatrix) -> np.ndarray:
    """Outcome probabilities in element order (not canonicalized)."""
    if povm.d != rho.d:
        raise DomainError(f"dimension mismatch: POVM d={povm.d}, state d={rho.d}")
    m = rho.matrix
    probs = np.array([np.trace(e @ m) for e in povm._elements])
    if np.abs(probs.imag).max() > 1e-12:
        raise DomainError("complex outcome probability; invalid POVM/state pair")
    p = np.clip(probs.real, 0.0, None)
    return p / p.sum()


def measure(povm: Povm, rho: DensityMatrix) -> ProbDist:
    """Born-rule distribution Tr(P_i rho) in canonical form."""
    return ProbDist(outcome_probabilities(povm, rho), labels=list(povm.labels))


def entropy_sum(mset: MeasurementSet, rho: DensityMatrix, order: float) -> float:
    """Sum of Renyi entropies over every POVM in the set."""
    from .probdist import renyi_entropy

    return float(sum(renyi_entropy(measure(p, rho), order) for p in mset.povms))


def ic_sum(mset: MeasurementSet, rho: DensityMatrix) -> float:
    """Sum of indexes of coincidence over every POVM in the set."""
    total = 0.0
    for p in mset.povms:
        probs = outcome_probabilities(p, rho)
        total += float(probs @ probs)
    return total


# --------------------------------------------------------------------------
# random states
# --------------------------------------------------------------------------

def haar_unitary(d: int, rng) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    rng = rng_from(rng)
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phase = np.diag(r) / np.abs(np.diag(r))
    return q * phase.conj()


def random_density_hs(d: int, rank: int | None = None, seed=0) -> DensityMatrix:
    """Random state from the Hilbert-Schmidt-induced measure at given rank.

    Normalized square of a d x rank complex Gaussian factor; rank=d gives the
    Hilbert-Schmidt ensemble proper.
    """
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise DomainError(f"rank must be in [1, {d}]")
    rng = rng_from(seed)
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_density_fixed_purity(d: int, purity: float, seed=0) -> DensityMatrix:
    """Random state with Tr(rho^2) equal to ``purity`` (to ~1e-12).

    The spectrum is drawn on the intersection of the simplex with the sphere
    of radius sqrt(purity), then conjugated by a Haar-random unitary.
    """
    if not 1.0 / d - 1e-12 <= purity <= 1.0 + 1e-12:
        raise DomainError(f"purity {purity} infeasible for d={d}")
    from .util import simplex_point_with_ic

    rng = rng_from(seed)
    spec = simplex_point_with_ic(d, min(max(purity, 1.0 / d), 1.0), rng)
    u = haar_unitary(d, rng)
    return DensityMatrix(u @ np.diag(spec) @ u.conj().T)


def conjecture_spectrum_state(d: int, purity: float, seed=0) -> DensityMatrix:
    """State whose spectrum is the minimizing extremal distribution.

    Eigenvalues are extremal_y(d, purity) padded with zeros, in a Haar-random
    eigenbasis.  These states trace the conjectured lower envelope of the
    information diagrams for complete measurement sets.
    """
    if not 1.0 / d - 1e-12 <= purity <= 1.0 + 1e-12:
        raise DomainError(f"purity {purity} infeasible for d={d}")
    spec = extremal_y(d, min(max(purity, 1.0 / d), 1.0)).padded(d)
    rng = rng_from(seed)
    u = haar_unitary(d, rng)
    return DensityMatrix(u @ np.diag(spec) @ u.conj().T)


# --------------------------------------------------------------------------
# operator basis
# --------------------------------------------------------------------------

def gell_mann_basis(d: int) -> list[np.ndarray]:
    """Generalized Gell-Mann matrices, orthonormal under Tr(AB) and traceless.

    Returns d^2 - 1 Hermitian matrices: symmetric and antisymmetric
    off-diagonal families followed by the diagonal family.
    """
    out = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1.0 / math.sqrt(2.0)
            out.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / math.sqrt(2.0)
            m[k, j] = 1j / math.sqrt(2.0)
            out.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out.append(np.diag(diag).astype(complex) / math.sqrt(l * (l + 1)))
    return out


# --------------------------------------------------------------------------
# mutually unbiased bases
# --------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(math.isqrt(n)) + 1):
        if n % p == 0:
            return False
    return True


# Five pairwise unbiased bases of C^4, entries in {0, ±1, ±i}/2.  Joint
# eigenbases of the five commuting two-qubit Pauli triples, verified against
# the unbiasedness relations in the test suite.
_MUB4_TABLE = [
    [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]],
    [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]],
    [[1, 1j, 1j, -1], [1, -1j, 1j, 1], [1, 1j, -1j, 1], [1, -1j, -1j, -1]],
    [[1, -1, 1j, 1j], [1, 1, -1j, 1j], [1, 1, 1j, -1j], [1, -1, -1j, -1j]],
    [[1, 1j, -1, 1j], [1, -1j, 1, 1j], [1, 1j, 1, -1j], [1, -1j, -1, -1j]],
]


def mub_vectors(d: int) -> list[np.ndarray]:
    """Orthonormal bases (one (d, d) array each, rows are vectors).

    d=2 gives the three Pauli eigenbases, odd primes use the quadratic
    Gauss-sum construction, d=4 a built-in verified table.  Other dimensions
    raise: no construction is available here (none is known for d=6).
    """
    if d == 2:
        s = 1.0 / math.sqrt(2.0)
        return [
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, 1j * s], [s, -1j * s]], dtype=complex),
        ]
    if d == 4:
        return [np.asarray(b, dtype=complex) / 2.0 for b in _MUB4_TABLE]
    if _is_prime(d):
        w = np.exp(2j * np.pi / d)
        bases = [np.eye(d, dtype=complex)]
        for a in range(d):
            rows = [[w ** ((a * k * k + b * k) % d) for k in range(d)] for b in range(d)]
            bases.append(np.asarray(rows, dtype=complex) / math.sqrt(d))
        return bases
    raise DomainError(
        f"construction unavailable for d={d}: complete sets are built in for "
        "primes and d=4 only")


def mub_set(d: int) -> MeasurementSet:
    """Complete set of d+1 mutually unbiased bases as projective POVMs."""
    povms = [Povm.from_basis(b) for b in mub_vectors(d)]
    return MeasurementSet(povms, "mub", d)


# --------------------------------------------------------------------------
# mutually unbiased measurements
# --------------------------------------------------------------------------

def _mum_block_operators(d: int) -> list[list[np.ndarray]]:
    """d+1 blocks of d traceless operators built from the Gell-Mann basis.

    Within a block the operators sum to zero and have the fixed overlap
    pattern Tr(F_i F_j) = (sqrt(d)+1)^2 * ((d-1) delta_ij - (1-delta_ij));
    distinct blocks are trace-orthogonal.
    """
    basis = gell_mann_basis(d)
    blocks = []
    for m in range(d + 1):
        group = basis[m * (d - 1):(m + 1) * (d - 1)]
        f_total = sum(group)
        ops = [f_total - (d + math.sqrt(d)) * f for f in group]
        ops.append((math.sqrt(d) + 1.0) * f_total)
        blocks.append(ops)
    return blocks


def mum_kappa(d: int, t: float) -> float:
    """Efficiency realized by strength t: 1/d + t^2 (d-1)(sqrt(d)+1)^2."""
    return 1.0 / d + t * t * (d - 1.0) * (math.sqrt(d) + 1.0) ** 2


def mum_strength_for_kappa(d: int, kappa: float) -> float:
    """Invert the (monotone in |t|) efficiency map; positive root."""
    if not 1.0 / d < kappa <= 1.0:
        raise DomainError(f"efficiency must lie in (1/{d}, 1], got {kappa}")
    return math.sqrt((kappa - 1.0 / d) / ((d - 1.0) * (math.sqrt(d) + 1.0) ** 2))


def mum_set(d: int, t: float) -> MeasurementSet:
    """d+1 mutually unbiased measurements at strength t.

    Elements are P = 1/d + t*F with F from the block construction above; the
    realized efficiency is reported in ``params["kappa"]``.  Strengths outside
    the positivity range (any element eigenvalue below -1e-10) raise.
    """
    if t == 0:
        raise DomainError("t=0 gives efficiency 1/d, outside (1/d, 1]")
    eye = np.eye(d) / d
    povms = []
    for ops in _mum_block_operators(d):
        elems = [eye + t * f for f in ops]
        for e in elems:
            if np.linalg.eigvalsh(_hermitize(e)).min() < -_PSD_TOL:
                raise DomainError(
                    f"t={t} outside the positivity range for d={d} "
                    f"(range {mum_positivity_range(d)})")
        povms.append(Povm(elems))
    return MeasurementSet(povms, "mum", d, {"kappa": mum_kappa(d, t), "t": t})


def _positivity_edge(build_ok, hi_start: float) -> float:
    """Largest positive t accepted by ``build_ok`` via bisection."""
    lo, hi = 0.0, hi_start
    while build_ok(hi):
        hi *= 2.0
        if hi > 1e3:
            return math.inf
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if build_ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def mum_positivity_range(d: int) -> tuple[float, float]:
    """Empirical (t_min, t_max) for which all MUM elements are PSD."""
    def ok(t):
        if t == 0:
            return True
        eye = np.eye(d) / d
        for ops in _mum_block_operators(d):
            for f in ops:
                if np.linalg.eigvalsh(_hermitize(eye + t * f)).min() < -_PSD_TOL:
                    return False
        return True

    t_max = _positivity_edge(ok, 0.05)
    t_min = -_positivity_edge(lambda t: ok(-t), 0.05)
    return t_min, t_max


# --------------------------------------------------------------------------
# general symmetric informationally complete POVMs
# --------------------------------------------------------------------------

def _gsic_operators(d: int) -> list[np.ndarray]:
    """d^2 traceless operators forming a regular simplex in operator space.

    Tr(G_a G_b) = (d+1)^2 ((d^2-1) delta_ab - (1-delta_ab)) and sum_a G_a = 0.
    """
    basis = gell_mann_basis(d)
    f_total = sum(basis)
    ops = [f_total - (d * d + d) * f for f in basis]
    ops.append((d + 1.0) * f_total)
    return ops


def gsic_a(d: int, t: float) -> float:
    """Self-overlap realized by strength t: 1/d^3 + t^2 (d^2-1)(d+1)^2."""
    return 1.0 / d**3 + t * t * (d * d - 1.0) * (d + 1.0) ** 2


def gsic_strength_for_a(d: int, a: float) -> float:
    """Invert the self-overlap map; positive root."""
    if not 1.0 / d**3 < a <= 1.0 / d**2:
        raise DomainError(f"need 1/d^3 < a <= 1/d^2, got a={a} for d={d}")
    return math.sqrt((a - 1.0 / d**3) / ((d * d - 1.0) * (d + 1.0) ** 2))


def gsic(d: int, t: float) -> MeasurementSet:
    """General symmetric informationally complete POVM at strength t.

    d^2 elements S = 1/d^2 + t*G; the realized self-overlap a(t) is reported
    in ``params["a"]`` and tends to 1/d^3 as t -> 0.
    """
    if t == 0:
        raise DomainError("t=0 degenerates to identical elements (a=1/d^3 boundary)")
    eye = np.eye(d) / (d * d)
    elems = [eye + t * g for g in _gsic_operators(d)]
    for e in elems:
        if np.linalg.eigvalsh(_hermitize(e)).min() < -_PSD_TOL:
            raise DomainError(
                f"t={t} outside the positivity range for d={d} "
                f"(range {gsic_positivity_range(d)})")
    povm = Povm(elems)
    return MeasurementSet([povm], "gsic", d, {"a": gsic_a(d, t), "t": t})


def gsic_positivity_range(d: int) -> tuple[float, float]:
    """Empirical (t_min, t_max) for which all GSIC elements are PSD."""
    ops = _gsic_operators(d)
    eye = np.eye(d) / (d * d)

    def ok(t):
        return all(np.linalg.eigvalsh(_hermitize(eye + t * g)).min() >= -_PSD_TOL for g in ops)

    t_max = _positivity_edge(ok, 0.01)
    t_min = -_positivity_edge(lambda t: ok(-t), 0.01)
    return t_min, t_max


# --------------------------------------------------------------------------
# rank-1 SIC POVMs
# --------------------------------------------------------------------------

def _sic_fiducial_orbit(d: int, fiducial: np.ndarray) -> list[np.ndarray]:
    """Weyl-Heisenberg orbit X^j Z^k |f> of a fiducial vector."""
    w = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag([w**k for k in range(d)])
    vecs = []
    for j in range(d):
        for k in range(d):
            vecs.append(np.linalg.matrix_power(shift, j) @ np.linalg.matrix_power(clock, k) @ fiducial)
    return vecs


def _builtin_sic_vectors(d: int) -> list[np.ndarray]:
    if d == 2:
        w = np.exp(2j * np.pi / 3)
        return [np.array([1.0, 0.0], dtype=complex)] + [
            np.array([1.0, math.sqrt(2.0) * w**k], dtype=complex) / math.sqrt(3.0)
            for k in range(3)
        ]
    if d == 3:
        fid = np.array([0.0, 1.0, -1.0], dtype=complex) / math.sqrt(2.0)
        return _sic_fiducial_orbit(3, fid)
    raise DomainError(f"no built-in SIC fiducial for d={d}; supply a fiducial file")


def check_equiangular(vectors, d: int, tol: float = 1e-9) -> None:
    """Raise unless |<v_i|v_j>|^2 = (d delta_ij + 1)/(d+1)."""
    n = len(vectors)
    if n != d * d:
        raise DomainError(f"expected d^2={d*d} vectors, got {n}")
    for i in range(n):
        for j in range(i, n):
            ov = abs(np.vdot(vectors[i], vectors[j])) ** 2
            target = 1.0 if i == j else 1.0 / (d + 1.0)
            if abs(ov - target) > tol:
                raise DomainError(
                    f"vectors {i},{j} have overlap {ov:.3e}, expected {target:.3e}")


def read_fiducial_file(path) -> list[np.ndarray]:
    """Read d^2 blocks of d lines, each line "re im"."""
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            re_s, im_s = line.split()
            values.append(complex(float(re_s), float(im_s)))
    n = len(values)
    d = round(n ** (1.0 / 3.0))
    while d**3 < n:
        d += 1
    if d**3 != n:
        raise DomainError(f"{n} amplitudes do not form d^2 blocks of d lines")
    arr = np.asarray(values).reshape(d * d, d)
    return [arr[i] for i in range(d * d)]


def sic_set(d: int, fiducial_file=None) -> MeasurementSet:
    """Rank-1 SIC POVM: d^2 elements |phi_i><phi_i| / d.

    Built-in vectors exist for d=2 (tetrahedron) and d=3 (orbit of the
    standard fiducial); other dimensions require a fiducial file.  Vectors are
    re-verified against the equiangularity relation either way.
    """
    if fiducial_file is not None:
        vecs = read_fiducial_file(fiducial_file)
        if len(vecs) != d * d or vecs[0].size != d:
            raise DomainError(f"fiducial file does not match d={d}")
    else:
        vecs = _builtin_sic_vectors(d)
    vecs = [v / np.linalg.norm(v) for v in vecs]
    check_equiangular(vecs, d)
    povm = Povm([np.outer(v, v.conj()) / d for v in vecs])
    return MeasurementSet([povm], "sic", d, {"a": 1.0 / d**2})


# --------------------------------------------------------------------------
# invariant checks
# --------------------------------------------------------------------------

def check_mub(mset: MeasurementSet, tol: float = 1e-9) -> None:
    """Verify rank-1 projectivity and pairwise unbiasedness."""
    d = mset.d
    for povm in mset.povms:
        for e in povm._elements:
            if abs(np.trace(e).real - 1.0) > tol or np.abs(e @ e - e).max() > tol:
                raise DomainError("MUB element is not a rank-1 projector")
    for m, pm in enumerate(mset.povms):
        for n_, pn in enumerate(mset.povms):
            if m >= n_:
                continue
            for a in pm._elements:
                for b in pn._elements:
                    ov = np.trace(a @ b).real
                    if abs(ov - 1.0 / d) > tol:
                        raise DomainError(f"overlap {ov} deviates from 1/d")


def check_mum(mset: MeasurementSet, tol: float = 1e-9) -> None:
    """Verify the defining MUM trace relations at the realized efficiency."""
    d = mset.d
    kappa = mset.params["kappa"]
    for povm in mset.povms:
        if len(povm) != d:
            raise DomainError("each MUM must have d outcomes")
        for e in povm._elements:
            if abs(np.trace(e).real - 1.0) > tol:
                raise DomainError("MUM element trace is not 1")
    for m, pm in enumerate(mset.povms):
        for n_, pn in enumerate(mset.povms):
            for i, a in enumerate(pm._elements):
                for j, b in enumerate(pn._elements):
                    got = np.trace(a @ b).real
                    if m == n_:
                        want = kappa if i == j else (1.0 - kappa) / (d - 1.0)
                    else:
                        want = 1.0 / d
                    if abs(got - want) > tol:
                        raise DomainError(
                            f"MUM trace relation violated at ({m},{i}),({n_},{j}): "
                            f"{got} vs {want}")


def check_gsic(mset: MeasurementSet, tol: float = 1e-9) -> None:
    """Verify Tr(S_i S_i) = a and the fixed pairwise overlap."""
    d = mset.d
    a = mset.params["a"]
    elems = mset.povms[0]._elements
    if len(elems) != d * d:
        raise DomainError("a general SIC must have d^2 elements")
    off = (1.0 - a * d) / (d * (d * d - 1.0))
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            got = np.trace(x @ y).real
            want = a if i == j else off
            if abs(got - want) > tol:
                raise DomainError(f"GSIC trace relation violated at ({i},{j}): {got} vs {want}")


def check_measurement_set(mset: MeasurementSet, tol: float = 1e-9) -> None:
    """Dispatch to the kind-conditional invariant check."""
    if mset.kind == "mub":
        check_mub(mset, tol)
    elif mset.kind == "mum":
        check_mum(mset, tol)
    elif mset.kind in ("gsic", "sic"):
        check_gsic(mset, tol)
    # "custom" sets only promise POVM validity, already enforced per element
