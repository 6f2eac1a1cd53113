import math

import numpy as np
import pytest

from eurbounds import probdist as P
from eurbounds.util import DomainError, rng_from, simplex_point_with_ic

INF = math.inf
ORDERS = (0.3, 0.7, 1.0, 1.5, 2.0, 3.0, 5.0, INF)


# ---------------------------------------------------------------- ProbDist

def test_canonical_form_sorts_and_strips():
    d = P.ProbDist([0.1, 0.7, 0.2, 1e-16])
    assert len(d) == 3
    assert np.allclose(d.probs, [0.7, 0.2, 0.1])


def test_sum_validation():
    with pytest.raises(DomainError):
        P.ProbDist([0.5, 0.6])
    with pytest.raises(DomainError):
        P.ProbDist([0.5, -0.6, 1.1])
    P.ProbDist([0.5, 0.5 + 5e-13])  # inside tolerance


def test_labels_follow_canonicalization():
    d = P.ProbDist([0.1, 0.7, 0.2], labels=["a", "b", "c"])
    assert d.labels == ("b", "c", "a")


def test_padded():
    d = P.ProbDist([0.6, 0.4])
    assert np.allclose(d.padded(4), [0.6, 0.4, 0.0, 0.0])
    with pytest.raises(DomainError):
        d.padded(1)


# ----------------------------------------------------------------- entropy

def test_renyi_uniform_alpha2():
    assert P.renyi_entropy(P.uniform(4), 2.0) == pytest.approx(2.0, abs=1e-12)


def test_renyi_point_mass_any_order():
    for order in ORDERS:
        assert P.renyi_entropy(P.ProbDist([1.0]), order) == 0.0


def test_min_entropy_value():
    d = P.ProbDist([0.75, 0.25])
    assert P.renyi_entropy(d, INF) == pytest.approx(-math.log2(0.75), abs=1e-14)


def test_entropy_non_increasing_in_order():
    rng = rng_from(2)
    for _ in range(50):
        L = int(rng.integers(2, 7))
        d = P.ProbDist(rng.dirichlet(np.ones(L)))
        hs = [P.renyi_entropy(d, a) for a in ORDERS]
        assert all(hs[i] >= hs[i + 1] - 1e-12 for i in range(len(hs) - 1))


def test_entropy_range():
    rng = rng_from(3)
    for _ in range(30):
        L = int(rng.integers(2, 7))
        d = P.ProbDist(rng.dirichlet(np.ones(L)))
        for a in ORDERS:
            h = P.renyi_entropy(d, a)
            assert -1e-12 <= h <= math.log2(L) + 1e-12


def test_bad_order_rejected():
    with pytest.raises(DomainError):
        P.renyi_entropy(P.uniform(2), 0.0)
    with pytest.raises(DomainError):
        P.renyi_entropy(P.uniform(2), -1.0)


def test_index_of_coincidence():
    assert P.index_of_coincidence(P.uniform(4)) == pytest.approx(0.25, abs=1e-15)
    assert P.index_of_coincidence(P.ProbDist([1.0])) == 1.0
    assert P.index_of_coincidence(P.ProbDist([0.5, 0.3, 0.2])) == pytest.approx(0.38, abs=1e-15)


# ------------------------------------------------------ extremal families

def test_extremal_x_uniform_and_point_mass():
    assert np.allclose(P.extremal_x(4, 0.25).probs, [0.25] * 4)
    assert np.allclose(P.extremal_x(4, 1.0).probs, [1.0])


def test_extremal_x_values_and_ic():
    d = P.extremal_x(4, 0.5)
    big = (1.0 + math.sqrt(3.0)) / 4.0
    small = (1.0 - math.sqrt(1.0 / 3.0)) / 4.0
    assert np.allclose(d.probs, [big, small, small, small], atol=1e-14)
    assert P.index_of_coincidence(d) == pytest.approx(0.5, abs=1e-10)


def test_extremal_x_ic_roundtrip():
    for L in (2, 3, 4, 5, 6):
        for c in np.linspace(1.0 / L, 1.0, 17):
            d = P.extremal_x(L, float(c))
            assert P.index_of_coincidence(d) == pytest.approx(float(c), abs=1e-10)


def test_extremal_x_domain():
    with pytest.raises(DomainError):
        P.extremal_x(4, 0.24)
    with pytest.raises(DomainError):
        P.extremal_x(4, 1.01)
    with pytest.raises(DomainError):
        P.extremal_x(1, 1.0)


def test_extremal_y_boundary_segments():
    assert np.allclose(P.extremal_y(4, 1.0 / 3.0).probs, [1 / 3] * 3)
    assert np.allclose(P.extremal_y(4, 0.5).probs, [0.5, 0.5])


def test_extremal_y_interior_values():
    d = P.extremal_y(4, 0.3)
    assert len(d) == 4
    assert np.allclose(d.probs, [0.31454972243679028] * 3 + [0.05635083268962915],
                       atol=1e-10)
    assert d.probs.sum() == pytest.approx(1.0, abs=1e-14)
    assert P.index_of_coincidence(d) == pytest.approx(0.3, abs=1e-10)


def test_extremal_y_nonzero_count_matches_segment():
    for c, n in ((0.26, 4), (0.3, 4), (0.34, 3), (0.49, 3), (0.52, 2), (0.9, 2)):
        assert len(P.extremal_y(4, c)) == n


def test_extremal_y_continuity_across_segments():
    # one-sided values approach the boundary with a sqrt(eps) modulus (the
    # segment formulas depend on sqrt(N c - 1)), so the limits are compared
    # after extrapolating the sqrt term away: f0 = (10 f(eps/100) - f(eps))/9
    def extrapolate(L, c, order, side):
        # steps stay above the 1e-12 boundary guard inside extremal_y
        e1, e2 = 1e-9, 1e-11
        r = math.sqrt(e2 / e1)
        f1 = P.renyi_entropy(P.extremal_y(L, c + side * e1), order)
        f2 = P.renyi_entropy(P.extremal_y(L, c + side * e2), order)
        return (f2 - r * f1) / (1.0 - r)

    for L in (4, 5, 6):
        for k in range(2, L):
            c = 1.0 / k
            at = {order: P.renyi_entropy(P.extremal_y(L, c), order)
                  for order in (0.5, 1.0, 3.0, INF)}
            for order, boundary in at.items():
                left = extrapolate(L, c, order, -1.0)
                right = extrapolate(L, c, order, +1.0)
                assert abs(left - right) < 1e-8
                assert abs(left - boundary) < 1e-8


def test_two_level_reduces_to_extremals():
    p = P.two_level_dist(P.TwoLevelParams(0.5, 4, 1))
    assert p.allclose(P.extremal_x(4, 0.5))
    q = P.two_level_dist(P.TwoLevelParams(0.3, 4, 3))
    assert q.allclose(P.extremal_y(4, 0.3))


def test_two_level_uniform_case():
    for na in (1, 2, 4):
        p = P.two_level_dist(P.TwoLevelParams(0.25, 4, na))
        assert np.allclose(p.probs, [0.25] * 4)


def test_two_level_invalid_params():
    with pytest.raises(DomainError):
        P.TwoLevelParams(0.3, 4, 5)
    with pytest.raises(DomainError):
        P.TwoLevelParams(0.3, 4, 4)          # n_large == n forces ic = 1/4
    with pytest.raises(DomainError):
        P.TwoLevelParams(0.6, 4, 2)          # ic above 1/n_large


def test_two_level_entropy_decreasing_in_ic():
    for n, na in ((4, 1), (4, 3), (5, 2), (6, 5)):
        for order in (0.5, 1.0, 3.0, INF):
            cs = np.linspace(1.0 / n + 1e-9, 1.0 / na - 1e-9, 30)
            hs = [P.renyi_entropy(P.two_level_dist(P.TwoLevelParams(float(c), n, na)), order)
                  for c in cs]
            assert all(hs[i] > hs[i + 1] - 1e-12 for i in range(len(hs) - 1))


def test_two_level_curvature_in_ic():
    # second differences: concave for order <= 1, convex for order >= 2,
    # when at least half of the outcomes carry the larger probability
    for n, na in ((4, 2), (4, 3), (6, 3), (6, 5)):
        cs = np.linspace(1.0 / n + 1e-4, 1.0 / na - 1e-4, 41)
        h = float(cs[1] - cs[0])
        for order, sign in ((0.5, -1.0), (1.0, -1.0), (2.5, 1.0), (4.0, 1.0)):
            hs = np.array([
                P.renyi_entropy(P.two_level_dist(P.TwoLevelParams(float(c), n, na)), order)
                for c in cs])
            second = (hs[2:] - 2 * hs[1:-1] + hs[:-2]) / h**2
            assert np.all(sign * second >= -1e-7)


# ----------------------------------------------------------- theorem bounds

def test_bounds_uniform_point():
    lo, hi = P.theorem1_bounds(4, 0.25, 1.0)
    assert lo == pytest.approx(2.0, abs=1e-12)
    assert hi == pytest.approx(2.0, abs=1e-12)


def test_bounds_order_two_collapse():
    lo, hi = P.theorem1_bounds(4, 0.4, 2.0)
    assert lo == hi == pytest.approx(-math.log2(0.4), abs=1e-12)


def test_bounds_shannon_example():
    lo, hi = P.theorem1_bounds(4, 0.5, 1.0)
    assert lo == pytest.approx(1.0, abs=1e-12)
    assert hi == pytest.approx(P.renyi_entropy(P.extremal_x(4, 0.5), 1.0), abs=1e-14)


def test_bounds_role_swap_above_two():
    lo, hi = P.theorem1_bounds(4, 0.5, 5.0)
    assert lo == pytest.approx(P.renyi_entropy(P.extremal_x(4, 0.5), 5.0), abs=1e-14)
    assert hi == pytest.approx(P.renyi_entropy(P.extremal_y(4, 0.5), 5.0), abs=1e-14)


def test_sandwich_on_random_distributions():
    rng = rng_from(11)
    for _ in range(400):
        L = int(rng.integers(2, 7))
        vec = rng.dirichlet(np.ones(L) * rng.uniform(0.3, 3.0))
        dist = P.ProbDist(vec)
        c = P.index_of_coincidence(dist)
        hx = {a: P.renyi_entropy(P.extremal_x(L, c), a) for a in ORDERS}
        hy = {a: P.renyi_entropy(P.extremal_y(L, c), a) for a in ORDERS}
        for a in ORDERS:
            h = P.renyi_entropy(dist, a)
            sign = -1.0 if (a > 2.0 or math.isinf(a)) else (2.0 - a)
            assert sign * h <= sign * hx[a] + 1e-9
            assert sign * h >= sign * hy[a] - 1e-9


def test_vectorized_extremal_entropies_match_scalar():
    cs = np.linspace(0.2, 1.0, 23)
    for order in (0.5, 1.0, 2.0, 3.0, INF):
        vx = P.extremal_x_entropy(5, cs, order)
        vy = P.extremal_y_entropy(5, cs, order)
        for i, c in enumerate(cs):
            assert vx[i] == pytest.approx(
                P.renyi_entropy(P.extremal_x(5, float(c)), order), abs=1e-12)
            assert vy[i] == pytest.approx(
                P.renyi_entropy(P.extremal_y(5, float(c)), order), abs=1e-12)


# ------------------------------------------------------------------ oracle

def test_oracle_uniform_case():
    r = P.oracle_extremal(3, 1.0 / 3.0, 1.0, "min", restarts=8, seed=1)
    assert r.value == pytest.approx(math.log2(3), abs=1e-8)
    assert np.allclose(r.arg.probs, [1 / 3] * 3, atol=1e-6)


def test_oracle_min_shannon_at_half():
    r = P.oracle_extremal(4, 0.5, 1.0, "min", restarts=20, seed=2)
    assert r.value == pytest.approx(1.0, abs=1e-7)
    assert len(r.arg) == 2
    assert np.allclose(r.arg.probs, [0.5, 0.5], atol=1e-5)


def test_oracle_confirms_role_swap():
    r = P.oracle_extremal(4, 0.5, 5.0, "min", restarts=20, seed=3)
    want = P.renyi_entropy(P.extremal_x(4, 0.5), 5.0)
    assert r.value == pytest.approx(want, abs=1e-6)


def test_oracle_desk_scale_guard():
    with pytest.raises(DomainError):
        P.oracle_extremal(7, 0.5, 1.0, "min")
    with pytest.raises(DomainError):
        P.oracle_extremal(4, 0.5, 1.0, "sideways")


def test_oracle_point_mass():
    r = P.oracle_extremal(4, 1.0, 2.0, "max", restarts=4, seed=4)
    assert r.value == 0.0
    assert len(r.arg) == 1


def test_entropy_sum_search_hand_case():
    val, dists = P.oracle_min_shannon_sum(2, 3, 2.0, restarts=40, seed=11)
    assert val == pytest.approx(2.0, abs=1e-9)
    sizes = sorted(len(d) for d in dists)
    assert sizes == [1, 2, 2]


def test_entropy_sum_search_domain():
    with pytest.raises(DomainError):
        P.oracle_min_shannon_sum(2, 3, 3.5)


# -------------------------------------------------------------- ic sampler

def test_simplex_point_with_ic_hits_target():
    rng = rng_from(9)
    for L in (2, 3, 5, 8):
        for c in np.linspace(1.0 / L, 1.0, 9):
            x = simplex_point_with_ic(L, float(c), rng)
            assert x.sum() == pytest.approx(1.0, abs=1e-12)
            assert x.min() >= 0.0
            assert float(x @ x) == pytest.approx(float(c), abs=1e-9)
