import math

import numpy as np
import pytest

from eurbounds import bounds as B
from eurbounds import probdist as P
from eurbounds import quantum as Q
from eurbounds.util import DomainError, child_rng


# ------------------------------------------------------------ density matrix

def test_density_matrix_validation():
    with pytest.raises(DomainError):
        Q.DensityMatrix(np.array([[0.5, 0.1], [0.3, 0.5]]))  # not Hermitian
    with pytest.raises(DomainError):
        Q.DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(DomainError):
        Q.DensityMatrix(np.diag([1.5, -0.5]))  # negative eigenvalue


def test_density_matrix_caches():
    rho = Q.DensityMatrix(np.diag([0.7, 0.2, 0.1]))
    assert np.allclose(rho.spectrum, [0.7, 0.2, 0.1])
    assert rho.purity == pytest.approx(0.49 + 0.04 + 0.01, abs=1e-12)
    assert rho.purity == pytest.approx(float(np.sum(rho.spectrum**2)), abs=1e-10)


def test_density_matrix_json_roundtrip():
    rho = Q.random_density_hs(3, 3, seed=5)
    again = Q.DensityMatrix.from_json(rho.to_json())
    assert np.allclose(rho.matrix, again.matrix, atol=1e-15)


def test_maximally_mixed_and_pure():
    assert Q.maximally_mixed(4).purity == pytest.approx(0.25, abs=1e-12)
    assert Q.pure_state([1, 1j]).purity == pytest.approx(1.0, abs=1e-12)


# -------------------------------------------------------------------- povms

def test_povm_validation():
    with pytest.raises(DomainError):
        Q.Povm([np.eye(2), np.eye(2)])  # sums to 2*identity
    with pytest.raises(DomainError):
        Q.Povm([np.diag([1.5, 0.0]), np.diag([-0.5, 1.0])])  # not PSD
    povm = Q.Povm([np.eye(2) * 0.5, np.eye(2) * 0.5])
    assert len(povm) == 2


def test_measure_maximally_mixed(mub3):
    rho = Q.maximally_mixed(3)
    for povm in mub3.povms:
        probs = Q.outcome_probabilities(povm, rho)
        want = [np.trace(e).real / 3 for e in povm.elements]
        assert np.allclose(probs, want, atol=1e-12)


def test_measure_own_basis_state(mub2):
    basis = mub2.povms[1]
    vec = np.linalg.eigh(basis.elements[0])[1][:, -1]
    dist = Q.measure(basis, Q.pure_state(vec))
    assert len(dist) == 1
    assert dist.probs[0] == pytest.approx(1.0, abs=1e-12)


def test_sic_on_basis_state_ic(sic2):
    dist = Q.measure(sic2.povms[0], Q.pure_state([1, 0]))
    assert P.index_of_coincidence(dist) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_measure_dimension_mismatch(sic2):
    with pytest.raises(DomainError):
        Q.measure(sic2.povms[0], Q.maximally_mixed(3))


# ------------------------------------------------------------------ samplers

def test_hs_rank_one_is_pure():
    rho = Q.random_density_hs(4, 1, seed=3)
    assert rho.purity == pytest.approx(1.0, abs=1e-10)


def test_hs_determinism():
    a = Q.random_density_hs(3, 3, seed=42)
    b = Q.random_density_hs(3, 3, seed=42)
    assert np.array_equal(a.matrix, b.matrix)


def test_hs_mean_purity_d3():
    # the induced measure at full rank has mean purity 2d/(d^2+1)
    n = 10_000
    total = 0.0
    for i in range(n):
        total += Q.random_density_hs(3, 3, child_rng(100, i)).purity
    assert total / n == pytest.approx(0.6, abs=0.01)


def test_fixed_purity_sampler():
    for purity in (1.0 / 3.0, 0.5, 0.77, 1.0):
        rho = Q.random_density_fixed_purity(3, purity, seed=8)
        assert rho.purity == pytest.approx(purity, abs=1e-9)
    with pytest.raises(DomainError):
        Q.random_density_fixed_purity(3, 0.2, seed=1)


def test_conjecture_spectrum_state():
    rho = Q.conjecture_spectrum_state(3, 0.5, seed=9)
    assert np.allclose(rho.spectrum, [0.5, 0.5, 0.0], atol=1e-10)
    rho = Q.conjecture_spectrum_state(4, 0.3, seed=10)
    want = P.extremal_y(4, 0.3).padded(4)
    assert np.allclose(rho.spectrum, want, atol=1e-10)
    mixed = Q.conjecture_spectrum_state(3, 1.0 / 3.0, seed=11)
    assert np.allclose(mixed.matrix, np.eye(3) / 3, atol=1e-12)


# ------------------------------------------------------------ operator basis

def test_gell_mann_basis():
    for d in (2, 3, 4, 5):
        basis = Q.gell_mann_basis(d)
        assert len(basis) == d * d - 1
        for i, a in enumerate(basis):
            assert abs(np.trace(a)) < 1e-14
            assert np.allclose(a, a.conj().T)
            for j, b in enumerate(basis):
                want = 1.0 if i == j else 0.0
                assert np.trace(a @ b).real == pytest.approx(want, abs=1e-12)


# -------------------------------------------------------------- constructors

def test_mub2_pairwise_overlaps(mub2):
    assert mub2.n_measurements == 3
    for m in range(3):
        for n in range(m + 1, 3):
            for a in mub2.povms[m].elements:
                for b in mub2.povms[n].elements:
                    assert np.trace(a @ b).real == pytest.approx(0.5, abs=1e-12)


def test_mub_invariants_strict(mub3, mub4):
    Q.check_mub(mub3, tol=1e-12)
    Q.check_mub(mub4, tol=1e-12)
    Q.check_mub(Q.mub_set(5), tol=1e-9)


def test_mub_unavailable_dimension():
    with pytest.raises(DomainError, match="unavailable"):
        Q.mub_set(6)


def test_mum_zero_strength_rejected():
    with pytest.raises(DomainError):
        Q.mum_set(3, 0.0)


def test_mum_trace_relations_small_t():
    mset = Q.mum_set(3, 0.01)
    Q.check_mum(mset, tol=1e-10)
    assert mset.params["kappa"] == pytest.approx(Q.mum_kappa(3, 0.01), abs=1e-15)


def test_mum_out_of_range_strength():
    _, tmax = Q.mum_positivity_range(3)
    with pytest.raises(DomainError, match="positivity"):
        Q.mum_set(3, 1.5 * tmax)


def test_mum_d2_max_strength_recovers_projective(mub2):
    _, tmax = Q.mum_positivity_range(2)
    mset = Q.mum_set(2, tmax)
    assert mset.params["kappa"] == pytest.approx(1.0, abs=1e-9)
    # same projector sets as the Pauli eigenbases, up to ordering
    ref_povms = [povm.elements for povm in mub2.povms]
    for povm in mset.povms:
        matched = None
        for idx, ref in enumerate(ref_povms):
            if all(any(np.abs(e - r).max() < 1e-7 for r in ref) for e in povm.elements):
                matched = idx
                break
        assert matched is not None, "MUM block does not match any Pauli eigenbasis"
        ref_povms.pop(matched)


def test_mum_kappa_inversion():
    for d in (2, 3, 5):
        for kappa in (1.0 / d + 0.05, 0.5 / d + 0.5):
            t = Q.mum_strength_for_kappa(d, kappa)
            assert Q.mum_kappa(d, t) == pytest.approx(kappa, abs=1e-12)
    with pytest.raises(DomainError):
        Q.mum_strength_for_kappa(3, 1.0 / 3.0)


def test_gsic_relations(gsic3):
    Q.check_gsic(gsic3, tol=1e-10)
    elems = gsic3.povms[0].elements
    a = gsic3.params["a"]
    off = (1 - a * 3) / (3 * 8)
    assert np.trace(elems[0] @ elems[1]).real == pytest.approx(off, abs=1e-10)


def test_gsic_small_t_limit():
    mset = Q.gsic(4, 1e-5)
    assert mset.params["a"] == pytest.approx(1.0 / 64.0, abs=1e-6)


def test_gsic_d2_max_strength_is_rank_one_sic():
    _, tmax = Q.gsic_positivity_range(2)
    mset = Q.gsic(2, tmax)
    assert mset.params["a"] == pytest.approx(0.25, abs=1e-9)
    for e in mset.povms[0].elements:
        spec = np.linalg.eigvalsh(e)
        assert spec[0] == pytest.approx(0.0, abs=1e-9)   # rank 1
        assert spec[1] == pytest.approx(0.5, abs=1e-9)
    for i, x in enumerate(mset.povms[0].elements):
        for j, y in enumerate(mset.povms[0].elements):
            if i != j:
                assert np.trace(x @ y).real == pytest.approx(1.0 / 12.0, abs=1e-9)


def test_gsic_strength_inversion():
    for d in (2, 3):
        _, tmax = Q.gsic_positivity_range(d)
        a_target = Q.gsic_a(d, 0.5 * tmax)
        assert Q.gsic_strength_for_a(d, a_target) == pytest.approx(0.5 * tmax, abs=1e-12)
    with pytest.raises(DomainError):
        Q.gsic_strength_for_a(3, 1.0 / 27.0)


def test_sic_tetrahedron_overlaps(sic2):
    elems = sic2.povms[0].elements
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            want = (2 * (i == j) + 1) / (4 * 3)
            assert np.trace(x @ y).real == pytest.approx(want, abs=1e-12)


def test_sic_d3_passes_invariant(sic3):
    Q.check_gsic(sic3, tol=1e-9)
    assert len(sic3.povms[0]) == 9


def test_sic_unsupported_dimension():
    with pytest.raises(DomainError, match="fiducial"):
        Q.sic_set(5)


def test_fiducial_file_roundtrip(tmp_path, sic2):
    path = tmp_path / "vecs.txt"
    with open(path, "w") as fh:
        fh.write("# tetrahedron vectors\n")
        for e in sic2.povms[0].elements:
            vals, vecs = np.linalg.eigh(e)
            v = vecs[:, -1] * math.sqrt(2 * vals[-1])
            v = v / np.linalg.norm(v)
            for z in v:
                fh.write(f"{z.real:.17g} {z.imag:.17g}\n")
    mset = Q.sic_set(2, fiducial_file=path)
    Q.check_gsic(mset, tol=1e-9)


def test_fiducial_file_rejects_non_equiangular(tmp_path):
    path = tmp_path / "bad.txt"
    rng = np.random.default_rng(0)
    with open(path, "w") as fh:
        for _ in range(4):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v = v / np.linalg.norm(v)
            for z in v:
                fh.write(f"{z.real} {z.imag}\n")
    with pytest.raises(DomainError):
        Q.sic_set(2, fiducial_file=path)


# -------------------------------------------------- coincidence identities

def test_sic_identity_spot(sic2, sic3):
    for mset in (sic2, sic3):
        d = mset.d
        for i in range(40):
            rho = Q.random_density_hs(d, d, child_rng(7, i))
            probs = Q.outcome_probabilities(mset.povms[0], rho)
            assert float(probs @ probs) == pytest.approx(
                (1 + rho.purity) / (d * (d + 1)), abs=1e-12)


def test_complete_mum_identity_spot(mum3):
    kappa = mum3.params["kappa"]
    for i in range(40):
        rho = Q.random_density_hs(3, 3, child_rng(8, i))
        got = Q.ic_sum(mum3, rho)
        want = B.mum_index_max(3, 4, kappa, rho.purity)
        assert got == pytest.approx(want, abs=1e-12)


def test_mub_identity_and_subset(mub3):
    for i in range(40):
        rho = Q.random_density_hs(3, 3, child_rng(9, i))
        got = Q.ic_sum(mub3, rho)
        assert got == pytest.approx(rho.purity + 1.0, abs=1e-12)
        sub = Q.ic_sum(mub3.subset(2), rho)
        assert sub <= B.mub_ic_bound(3, 2, rho.purity) + 1e-12
