import numpy as np
import pytest

from posstab import (
    CrossCheckConfig,
    approximate_positive_eigenvector,
    apply,
    check_resolvent_positivity,
    cone_constants,
    consensus_of,
    contains,
    cross_check,
    dense,
    diagonal,
    distance,
    dual_small_gain,
    interior_small_gain,
    lorentz,
    materialize,
    mbi_constant,
    orthant,
    quasi_compact_suite,
    rank_one_destabilizer,
    reverify_witness,
    robust_small_gain,
    shift,
    small_gain_certificate,
    spectral_radius,
    strict_decay_point,
    uniform_small_gain_margin,
    vec_norm,
)
from posstab.criteria import CriterionVerdict

UPPER2X2 = dense([[0.5, 1.0], [0.0, 0.5]])
CONE2 = orthant(2, "linf")


def grid_eta_oracle(T, cone, steps=101):
    """Brute-force min of dist((T-I)x, cone) over a 2-d unit-sphere grid."""
    a = materialize(T) - np.eye(2)
    best = np.inf
    for t in np.linspace(0.0, 1.0, steps):
        for x in (np.array([1.0, t]), np.array([t, 1.0])):
            best = min(best, distance(cone, a @ x))
    return best


# ------------------------------------------------- resolvent positivity

def test_resolvent_positivity_jordan():
    v = check_resolvent_positivity(UPPER2X2, CONE2)
    assert v.holds
    # oracle: hand inverse [[2, 4], [0, 2]] is entrywise nonnegative with min 0
    assert v.margin == pytest.approx(0.0, abs=1e-10)


def test_resolvent_positivity_scalar_failure():
    v = check_resolvent_positivity(diagonal([2.0]), orthant(1, "linf"))
    assert not v.holds
    # oracle: (1 - 2)^{-1} = -1
    np.testing.assert_allclose(v.witness.vector, [-1.0], atol=1e-10)


def test_resolvent_positivity_zero_operator():
    v = check_resolvent_positivity(dense(np.zeros((2, 2))), CONE2)
    assert v.holds and v.margin == pytest.approx(0.0, abs=1e-12)


def test_resolvent_positivity_spectral_proximity_flag():
    v = check_resolvent_positivity(diagonal([1.0]), orthant(1, "linf"))
    assert not v.holds
    assert v.witness.kind == "flag"
    assert "SPECTRAL_PROXIMITY" in v.witness.note


# ------------------------------------------------- MBI constant

@pytest.mark.parametrize(
    "T, cone, expected_c",
    [
        (diagonal([0.5]), orthant(1, "linf"), 2.0),
        (UPPER2X2, CONE2, 6.0),
        (dense(np.zeros((2, 2))), CONE2, 1.0),
    ],
)
def test_mbi_constant_values(T, cone, expected_c):
    c, v = mbi_constant(T, cone)
    assert v.holds
    assert c == pytest.approx(expected_c, abs=1e-9)


def test_mbi_propagates_resolvent_failure():
    c, v = mbi_constant(diagonal([2.0]), orthant(1, "linf"))
    assert not v.holds and not np.isfinite(c)


# ------------------------------------------------- uniform small gain

def test_uniform_small_gain_diagonal():
    T = diagonal([0.5, 0.9])
    eta, v = uniform_small_gain_margin(T, CONE2)
    # oracle: min_i (1 - d_i) attained at the second axis vector
    assert eta == pytest.approx(0.1, abs=1e-9)
    assert v.holds


def test_uniform_small_gain_identity_fails():
    eta, v = uniform_small_gain_margin(diagonal([1.0]), orthant(1, "linf"))
    assert eta == pytest.approx(0.0, abs=1e-12)
    assert not v.holds
    assert v.witness is not None


def test_uniform_small_gain_jordan_regression():
    # grid oracle pins the regression value; analytic minimum is 1/6 at (1, 1/3)
    eta, v = uniform_small_gain_margin(UPPER2X2, CONE2)
    oracle = grid_eta_oracle(UPPER2X2, CONE2)
    assert v.holds
    assert abs(eta - oracle) <= 5e-3  # grid resolution
    assert eta == pytest.approx(1.0 / 6.0, abs=1e-6)


def test_eta_chain_certified_below_empirical():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(2, 7))
        a = rng.uniform(0.0, 1.0, size=(n, n))
        a *= rng.choice([0.3, 0.7, 0.9]) / max(float(np.max(np.abs(np.linalg.eigvals(a)))), 1e-9)
        T = dense(a)
        cone = orthant(n, "linf")
        est = spectral_radius(T)
        eta_cert = small_gain_certificate(T, cone, estimate=est)
        eta_emp, _ = uniform_small_gain_margin(T, cone, estimate=est)
        assert eta_cert is not None
        assert eta_cert <= eta_emp + 1e-8


# ------------------------------------------------- robust small gain

def test_robust_small_gain_certified():
    v = robust_small_gain(diagonal([0.5]), orthant(1, "linf"), eps=0.2)
    assert v.holds  # eta = 0.5, eps <= 0.25


def test_robust_small_gain_identity_boundary_witness():
    v = robust_small_gain(diagonal([1.0]), orthant(1, "linf"), eps=0.1)
    assert not v.holds
    w = v.witness
    assert w.kind == "rank_one_perturbation"
    assert w.perturbation_norm == pytest.approx(0.0, abs=1e-12)  # P = 0 suffices
    np.testing.assert_allclose(w.vector, [1.0], atol=1e-12)


def test_shift_plus_half_identity_no_violation():
    # single perturbation P = id/2 never produces (T+P)x >= x for the shift
    n = 8
    sh = materialize(shift(n, 2.0))
    rng = np.random.default_rng(1)
    for _ in range(200):
        x = rng.uniform(0.0, 1.0, size=n)
        lead = rng.integers(0, n)
        x[:lead] = 0.0
        if not x.any():
            x[0] = 1.0
        y = sh @ x + 0.5 * x
        i = int(np.nonzero(x > 0)[0][0])
        assert y[i] < x[i]  # first nonzero coordinate argument


# ------------------------------------------------- approximate eigenvector

def test_approx_eigenvector_diagonal():
    T = diagonal([0.9, 0.5])
    seq = approximate_positive_eigenvector(T, CONE2, n_steps=10)
    assert len(seq) == 10
    x_last = seq[-1].x
    np.testing.assert_allclose(x_last, [1.0, 0.0], atol=1e-2)
    assert seq[-1].residual < seq[0].residual
    # oracle: exact eigenvector e1
    assert vec_norm(apply(T, x_last) - 0.9 * x_last, "linf") == pytest.approx(
        seq[-1].residual, abs=1e-12
    )


def test_approx_eigenvector_jordan_residual_decays():
    seq = approximate_positive_eigenvector(UPPER2X2, CONE2, n_steps=16)
    residuals = [s.residual for s in seq]
    assert residuals[-1] < 1e-3
    assert residuals[-1] <= residuals[0]
    # trend: second half no worse than first half
    mid = len(residuals) // 2
    assert np.median(residuals[mid:]) <= np.median(residuals[:mid]) + 1e-12


def test_approx_eigenvector_zero_operator():
    seq = approximate_positive_eigenvector(dense(np.zeros((2, 2))), CONE2, n_steps=6)
    for step in seq:
        np.testing.assert_allclose(step.x, [1.0, 1.0], atol=1e-12)
        assert step.residual == pytest.approx(0.0, abs=1e-12)


def test_approx_eigenvector_schedule_decreases_to_bracket():
    est = spectral_radius(UPPER2X2)
    seq = approximate_positive_eigenvector(UPPER2X2, CONE2, n_steps=12, estimate=est)
    rs = [s.r for s in seq]
    assert all(rs[i] > rs[i + 1] for i in range(len(rs) - 1))
    assert all(r > est.upper for r in rs)


# ------------------------------------------------- rank-one destabilizer

def test_destabilizer_exact_fixed_vector():
    cand = rank_one_destabilizer(diagonal([1.0, 0.5]), CONE2)
    assert cand.norm_p == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(cand.x, [1.0, 0.0], atol=1e-12)


def test_destabilizer_super_fixed_vector():
    cand = rank_one_destabilizer(diagonal([1.1, 0.5]), CONE2)
    assert cand.norm_p == pytest.approx(0.0, abs=1e-12)
    lhs = apply(diagonal([1.1, 0.5]), cand.x) + cand.matrix @ cand.x
    assert np.all(lhs >= cand.x - 1e-12)


def test_destabilizer_perron_pair():
    T = dense([[1.0, 1.0], [1.0, 1.0]])
    cand = rank_one_destabilizer(T, CONE2)
    assert cand.norm_p == pytest.approx(0.0, abs=1e-10)
    np.testing.assert_allclose(cand.x, [1.0, 1.0], atol=1e-8)


def test_destabilizer_none_when_stable():
    assert rank_one_destabilizer(diagonal([0.5]), orthant(1, "linf")) is None


def test_destabilizer_posted_bound():
    rng = np.random.default_rng(2)
    for _ in range(15):
        n = int(rng.integers(2, 6))
        a = rng.uniform(0.0, 1.0, size=(n, n))
        a *= rng.uniform(1.0, 1.2) / max(float(np.max(np.abs(np.linalg.eigvals(a)))), 1e-9)
        cone = orthant(n, "linf")
        cand = rank_one_destabilizer(dense(a), cone)
        assert cand is not None
        lhs = a @ cand.x + cand.matrix @ cand.x - cand.x
        assert lhs.min() >= -1e-10
        mprime = cone_constants(cone).dual_M_prime
        assert cand.norm_p <= mprime * vec_norm(cand.z, "linf") + 1e-12


# ------------------------------------------------- dual small gain

def test_dual_small_gain_jordan():
    assert dual_small_gain(UPPER2X2, CONE2).holds


def test_dual_small_gain_identity_witness():
    v = dual_small_gain(diagonal([1.0]), orthant(1, "linf"))
    assert not v.holds
    np.testing.assert_allclose(v.witness.functional, [1.0], atol=1e-12)


def test_dual_small_gain_symmetric_perron():
    v = dual_small_gain(dense([[1.0, 1.0], [1.0, 1.0]]), CONE2)
    assert not v.holds
    np.testing.assert_allclose(v.witness.functional, [0.5, 0.5], atol=1e-8)


# ------------------------------------------------- interior small gain

def test_interior_small_gain_scalar():
    eta, v = interior_small_gain(diagonal([0.5]), orthant(1, "linf"), np.ones(1))
    assert eta == pytest.approx(0.5, abs=1e-6)
    assert v.holds


def test_interior_small_gain_identity():
    eta, v = interior_small_gain(diagonal([1.0, 1.0]), CONE2, np.ones(2))
    assert eta == pytest.approx(0.0, abs=1e-9)
    assert not v.holds
    assert v.witness is not None


def test_interior_small_gain_jordan_grid_value():
    # brute-force threshold: eta* = 1/6 for z = (1, 1) under linf
    eta, v = interior_small_gain(UPPER2X2, CONE2, np.ones(2))
    assert v.holds
    assert eta == pytest.approx(1.0 / 6.0, abs=1e-6)


def test_interior_small_gain_requires_interior_z():
    with pytest.raises(ValueError):
        interior_small_gain(UPPER2X2, CONE2, np.array([1.0, 0.0]))


# ------------------------------------------------- strict decay

def test_strict_decay_jordan_hand_solve():
    # oracle: (0.75 I - T)^{-1} = 16 * [[0.25, 1], [0, 0.25]] applied to (1, 1)
    cert = strict_decay_point(UPPER2X2, CONE2, 0.75, np.ones(2))
    np.testing.assert_allclose(cert.z, [20.0, 4.0], atol=1e-8)
    tz = apply(UPPER2X2, cert.z)
    np.testing.assert_allclose(tz, [14.0, 2.0], atol=1e-8)
    assert np.all(tz <= 0.75 * cert.z + 1e-10)
    assert np.all(cert.z >= np.ones(2) / 0.75 - 1e-10)
    assert cert.realized_lambda == pytest.approx(0.7, abs=1e-9)


def test_strict_decay_scalar():
    cert = strict_decay_point(diagonal([0.5]), orthant(1, "linf"), 0.75, np.ones(1))
    np.testing.assert_allclose(cert.z, [4.0], atol=1e-10)
    assert cert.realized_lambda == pytest.approx(0.5, abs=1e-9)


def test_strict_decay_zero_operator():
    cert = strict_decay_point(dense(np.zeros((2, 2))), CONE2, 0.5, np.ones(2))
    np.testing.assert_allclose(cert.z, [2.0, 2.0], atol=1e-12)
    assert cert.interior_margin == pytest.approx(2.0)


def test_strict_decay_iterates():
    cert = strict_decay_point(UPPER2X2, CONE2, 0.75, np.ones(2))
    a = materialize(UPPER2X2)
    zk = cert.z.copy()
    for k in range(1, 21):
        zk = a @ zk
        assert np.all(zk <= cert.lam**k * cert.z + 1e-10)


def test_strict_decay_argument_errors():
    from posstab import SpectralProximityError

    with pytest.raises(ValueError):
        strict_decay_point(UPPER2X2, CONE2, 1.5, np.ones(2))
    with pytest.raises(SpectralProximityError):
        strict_decay_point(diagonal([0.9]), orthant(1, "linf"), 0.7, np.ones(1))
    with pytest.raises(ValueError):
        strict_decay_point(UPPER2X2, CONE2, 0.75, np.array([1.0, 0.0]))


def test_strict_decay_lorentz():
    T = dense(np.diag([0.8, 0.4, 0.4]))
    cone = lorentz(3)
    y = np.array([1.0, 0.0, 0.0])
    cert = strict_decay_point(T, cone, 0.9, y)
    assert cert.realized_lambda <= 0.9 + 1e-10
    assert contains(cone, cert.z - y / 0.9, 1e-10)


# ------------------------------------------------- quasi-compact suite

def test_quasi_suite_jordan_all_hold():
    verdicts = quasi_compact_suite(UPPER2X2, CONE2)
    assert [v.id for v in verdicts] == ["SIMPLE_SG", "SUBFIXED_POS", "STRONG_STAB", "WEAK_ATTR"]
    assert all(v.holds for v in verdicts)


def test_quasi_suite_identity_fails_with_witness():
    verdicts = quasi_compact_suite(diagonal([1.0]), orthant(1, "linf"))
    simple = verdicts[0]
    assert not simple.holds
    np.testing.assert_allclose(simple.witness.vector, [1.0], atol=1e-12)
    sub = verdicts[1]
    assert not sub.holds
    # witness -x satisfies T(-x) <= -x but is not positive
    assert reverify_witness(diagonal([1.0]), orthant(1, "linf"), sub)


def test_quasi_suite_multiplication_margin_shrinks():
    margins = []
    for n in (4, 6, 8):
        d = diagonal(1.0 - np.exp(-np.arange(n, dtype=float)))
        verdicts = quasi_compact_suite(d, orthant(n, "linf"))
        assert verdicts[0].holds
        margins.append(verdicts[0].margin)
    assert margins[0] > margins[1] > margins[2] > 0.0


# ------------------------------------------------- consensus / cross_check

def test_consensus_rules():
    t = CriterionVerdict("SPR", True, 0.5)
    f = CriterionVerdict("MBI", False, -0.5)
    assert consensus_of([t, t], 0.5) == "STABLE"
    assert consensus_of([f, f], 1.5) == "UNSTABLE"
    assert consensus_of([t, f], 1.5) == "INCONSISTENT"
    assert consensus_of([t, f], 1.001) == "BOUNDARY"
    assert consensus_of([t, t], 0.999) == "BOUNDARY"


def test_cross_check_jordan_stable():
    rep = cross_check(UPPER2X2, CONE2)
    assert rep.consensus == "STABLE"
    assert len(rep.criteria) == 13
    assert all(v.holds for v in rep.criteria)
    assert rep.lyapunov is not None and rep.iss is not None
    assert rep.lyapunov["stein_residual"] <= 1e-8


def test_cross_check_unstable_witnesses_reverify():
    T = diagonal([1.5, 0.5])
    rep = cross_check(T, CONE2)
    assert rep.consensus == "UNSTABLE"
    for v in rep.criteria:
        assert not v.holds
        assert reverify_witness(T, CONE2, v)


def test_random_unstable_witnesses_reverify():
    rng = np.random.default_rng(9)
    for i in range(5):
        n = int(rng.integers(2, 6))
        a = rng.uniform(0.0, 1.0, size=(n, n))
        a *= rng.choice([1.2, 2.0]) / max(float(np.max(np.abs(np.linalg.eigvals(a)))), 1e-9)
        T = dense(a)
        cone = orthant(n, "linf")
        rep = cross_check(T, cone, CrossCheckConfig(seed=i))
        assert rep.consensus == "UNSTABLE"
        for v in rep.criteria:
            assert v.witness is not None, v.id
            assert reverify_witness(T, cone, v), v.id


def test_cross_check_boundary_band():
    rep = cross_check(diagonal([0.999]), orthant(1, "linf"))
    assert rep.consensus == "BOUNDARY"


def test_cross_check_non_positive_operator_restricted():
    T = dense([[0.5, 0.0], [-0.1, 0.5]])
    rep = cross_check(T, CONE2)
    assert not rep.positive
    assert [v.id for v in rep.criteria] == ["SPR"]
    assert any("not positive" in note for note in rep.notes)
    assert rep.lyapunov is not None  # stable in spite of the sign pattern


def test_cross_check_lorentz_cone():
    from posstab import gallery_build

    entry = gallery_build("lorentz_demo")
    rep = cross_check(entry.operator, entry.cone)
    assert rep.consensus == "STABLE"


def _boost(t):
    # hyperbolic rotation: maps the 2-d Lorentz cone onto itself, with
    # negative entries for t < 0 (positive but not entrywise nonnegative)
    c, s = np.cosh(t), np.sinh(t)
    return np.array([[c, s], [s, c]])


@pytest.mark.parametrize("scale, expect", [(0.3, "STABLE"), (0.5, "UNSTABLE")])
def test_cross_check_lorentz_boost(scale, expect):
    from posstab import is_positive, lorentz

    a = scale * _boost(-1.0)
    cone = lorentz(2, "l2")
    assert a.min() < 0  # exercises the no-Perron-pair code paths
    ok, _ = is_positive(dense(a), cone)
    assert ok
    spr_true = scale * np.e  # dominant boost eigenvalue e^{|t|}
    rep = cross_check(dense(a), cone)
    assert rep.spectral.lower - 1e-6 <= spr_true <= rep.spectral.upper + 1e-6
    assert rep.consensus == expect
    for v in rep.criteria:
        assert v.holds == (expect == "STABLE"), (v.id, v.margin)
        if not v.holds:
            assert v.witness is not None, v.id


def test_uniform_small_gain_lorentz_scaled_identity():
    # dist((0.5 I - I)x, cone) = dist(-x/2, cone) = 1/2 for every unit cone x
    cone = lorentz(3, "l2")
    eta, verdict = uniform_small_gain_margin(dense(0.5 * np.eye(3)), cone)
    assert verdict.holds
    assert eta == pytest.approx(0.5, abs=1e-9)


def test_lorentz_consensus_fuzz():
    # boosts composed with spatial rotations: Lorentz-positive, usually with
    # negative entries, rescaled to both sides of the stability threshold
    from posstab import is_positive, lorentz

    rng = np.random.default_rng(12)
    for i in range(12):
        n = int(rng.integers(2, 5))
        t = rng.uniform(-1.5, 1.5)
        boost = np.eye(n)
        boost[0, 0] = np.cosh(t)
        boost[0, 1] = boost[1, 0] = np.sinh(t)
        boost[1, 1] = np.cosh(t)
        rot = np.eye(n)
        if n >= 3:
            th = rng.uniform(0, 2 * np.pi)
            rot[1, 1], rot[1, 2] = np.cos(th), -np.sin(th)
            rot[2, 1], rot[2, 2] = np.sin(th), np.cos(th)
        a = boost @ rot
        spr0 = float(np.max(np.abs(np.linalg.eigvals(a))))
        target = [0.5, 0.8, 1.3, 2.0][i % 4]
        a = a * (target / spr0)
        cone = lorentz(n, "l2")
        ok, _ = is_positive(dense(a), cone, rng=np.random.default_rng(i))
        assert ok
        rep = cross_check(dense(a), cone, CrossCheckConfig(seed=i))
        expect = target < 1.0
        assert rep.consensus != "INCONSISTENT"
        for v in rep.criteria:
            assert v.holds == expect, (i, target, v.id, v.margin)


def test_scale_invariance_of_norm_free_verdicts():
    rng = np.random.default_rng(3)
    free = ("SIMPLE_SG", "SUBFIXED_POS", "RESOLVENT_POS", "DUAL_SG")
    for _ in range(6):
        n = int(rng.integers(2, 5))
        a = rng.uniform(0.0, 1.0, size=(n, n))
        a *= rng.choice([0.7, 1.5]) / max(float(np.max(np.abs(np.linalg.eigvals(a)))), 1e-9)
        cone = orthant(n, "linf")
        base = cross_check(dense(a), cone)
        for scale in (0.5, 2.0):
            d = np.full(n, scale)
            d[0] = 1.0
            m = np.diag(d) @ a @ np.diag(1.0 / d)
            rep = cross_check(dense(m), cone)
            for cid in free:
                assert rep.verdict(cid).holds == base.verdict(cid).holds


def test_consensus_mini_sweep():
    rng = np.random.default_rng(4)
    targets = [0.3, 0.9, 1.1, 3.0]
    for i in range(24):
        n = int(rng.integers(2, 9))
        a = rng.uniform(0.0, 1.0, size=(n, n)) * (rng.random((n, n)) < 0.75)
        spr0 = float(np.max(np.abs(np.linalg.eigvals(a))))
        if spr0 < 1e-9:
            continue
        target = targets[i % len(targets)]
        a *= target / spr0
        rep = cross_check(dense(a), orthant(n, "linf"), CrossCheckConfig(seed=i))
        expect = target < 1.0
        assert rep.consensus == ("STABLE" if expect else "UNSTABLE")
        for v in rep.criteria:
            assert v.holds == expect, (v.id, target)


def test_cross_check_threaded_matches_sequential():
    rep1 = cross_check(UPPER2X2, CONE2, CrossCheckConfig(seed=5, threads=1))
    rep4 = cross_check(UPPER2X2, CONE2, CrossCheckConfig(seed=5, threads=4))
    assert rep1.to_dict() == rep4.to_dict()
