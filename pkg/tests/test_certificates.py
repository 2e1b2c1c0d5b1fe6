import math

import numpy as np
import pytest

from jsrkit.bounds import JsrConfig, JsrInterval, jsr_estimate, lower_bound
from jsrkit.certificates import (
    CombinationNotFoundError,
    HypothesisUnmetError,
    Verdict,
    check_bg_el,
    check_boca_new,
    check_polbd,
    convex_hull_bound_check,
    near_idempotent_search,
    residual_certificate,
    siegel_combination,
    trace_bound,
    trajectory_return_search,
)
from jsrkit.core import (
    SPECTRAL,
    BudgetExceededError,
    MatrixSet,
    NormSpec,
    eval_word,
    spectral_radius,
    vector_norm,
)

PHI = (1 + math.sqrt(5)) / 2
GOLDEN_ANGLE = math.pi * (3 - math.sqrt(5))


def elem(i, j, d):
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1
    return m


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def unipotent_pair(scale=1.0):
    a = np.array([[1, 1], [0, 1]]) * scale
    b = np.array([[1, 0], [1, 1]]) * scale
    return MatrixSet.from_arrays([a, b])


# --- residual certificates ---------------------------------------------------


def test_residual_certificate_exact_eigenpair():
    cert = residual_certificate(np.diag([1.0, 0.0]), [1, 0], 1.0)
    assert cert.residual == 0.0
    assert cert.eps == 0.0
    assert cert.bound == 1.0


def test_residual_certificate_clamps_to_zero():
    # residual 0.1 at d=2 gives eps = sqrt(0.1) > 1/4: vacuous but valid
    cert = residual_certificate(np.diag([0.9, 0.1]), [1, 0], 1.0)
    assert cert.residual == pytest.approx(0.1, rel=1e-12)
    assert cert.eps == pytest.approx(math.sqrt(0.1), rel=1e-12)
    assert cert.bound == 0.0


def test_residual_certificate_zero_lambda():
    cert = residual_certificate(elem(0, 1, 2), [0, 1], 0.0)
    assert cert.bound == 0.0


def test_residual_certificate_rejections_name_the_clause():
    with pytest.raises(ValueError, match="norm bound"):
        residual_certificate(2 * np.eye(2), [1, 0], 1.0)
    with pytest.raises(ValueError, match="unit vector"):
        residual_certificate(np.eye(2), [1, 1], 1.0)
    with pytest.raises(ValueError, match="lambda"):
        residual_certificate(np.eye(2), [1, 0], 3.0)


def test_residual_certificate_oracle_random_eigenpairs():
    # the certified bound never exceeds the true spectral radius
    rng = np.random.default_rng(7)
    for _ in range(300):
        d = int(rng.integers(2, 5))
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        a /= np.linalg.svd(a, compute_uv=False)[0] * (1 + 1e-12)
        vals, vecs = np.linalg.eig(a)
        k = int(rng.integers(d))
        x = vecs[:, k]
        x = x / np.linalg.norm(x)
        lam = vals[k] * (1 + 1e-4 * rng.standard_normal())
        cert = residual_certificate(a, x, lam)
        assert cert.bound <= spectral_radius(a) * (1 + 1e-9)


# --- integer combinations ----------------------------------------------------


def test_siegel_duplicate_vectors_collide():
    v = np.array([0.3, 0.4])
    c = siegel_combination([v, v], 1, 1e-9, enforce_hypothesis=False)
    assert sorted(c) == [-1, 1]


def test_siegel_close_pair():
    eps = 0.1
    xs = [np.array([0.9, 0.0]), np.array([0.9, 0.05])]
    c = siegel_combination(xs, 1, eps, enforce_hypothesis=False)
    assert any(ci != 0 for ci in c)
    assert max(abs(ci) for ci in c) <= 1
    assert vector_norm(c[0] * xs[0] + c[1] * xs[1], SPECTRAL) <= eps


def test_siegel_scalar_instance_reverifies():
    xs = [1.0, 0.5, 1.0 / 3.0]
    c = siegel_combination(xs, 2, 1.0 / 3.0, enforce_hypothesis=False)
    assert any(ci != 0 for ci in c)
    assert max(abs(ci) for ci in c) <= 2
    assert abs(sum(ci * xi for ci, xi in zip(c, xs))) <= 1.0 / 3.0
    # brute-force oracle: the instance does admit exact solutions
    exact = [
        (a, b, e)
        for a in range(-2, 3)
        for b in range(-2, 3)
        for e in range(-2, 3)
        if (a, b, e) != (0, 0, 0) and abs(a + b / 2 + e / 3) <= 1.0 / 3.0
    ]
    assert tuple(c) in exact


def test_siegel_hypothesis_gate():
    with pytest.raises(HypothesisUnmetError):
        siegel_combination([1.0, 0.5, 1.0 / 3.0], 2, 1.0 / 3.0)


def test_siegel_hypothesis_satisfied_succeeds():
    # (1+3)^8 = 65536 > (1 + 2*8*3/0.25)^1 = 193, so a combination must exist
    xs = [np.array([0.9 * math.cos(float(k))]) for k in range(8)]
    eps = 0.25
    c = siegel_combination(xs, 3, eps)
    assert any(ci != 0 for ci in c)
    assert max(abs(ci) for ci in c) <= 3
    assert abs(sum(ci * xi[0] for ci, xi in zip(c, xs))) <= eps


def test_siegel_complex_data_can_have_no_solution():
    # the real-grid count passes, but over C the pigeonhole needs the
    # squared cell count: the closest nonzero combination of (1, i) has
    # modulus 1 > 0.9
    t, eps = 3, 0.9
    assert (1 + t) ** 2 > (1 + 2 * 2 * t / eps) ** 1
    with pytest.raises(CombinationNotFoundError):
        siegel_combination([np.array([1.0 + 0j]), np.array([1j])], t, eps)


def test_siegel_budget():
    with pytest.raises(BudgetExceededError):
        siegel_combination([np.array([0.5])] * 20, 3, 0.5)


def test_siegel_rejects_oversized_vectors():
    with pytest.raises(ValueError, match="vector bound"):
        siegel_combination([np.array([2.0, 0.0])], 1, 0.5, enforce_hypothesis=False)


# --- trace and convex hull ----------------------------------------------------


def test_trace_bound_examples():
    assert trace_bound(elem(0, 1, 2)) == 0.0
    assert trace_bound(np.eye(2)) == pytest.approx(4.0)
    assert trace_bound(np.diag([1.0, -1.0])) == pytest.approx(2 * math.sqrt(2))


def test_trace_bound_oracle_random():
    rng = np.random.default_rng(11)
    for _ in range(300):
        d = int(rng.integers(2, 5))
        a = rng.uniform(-1, 1, (d, d)) + 1j * rng.uniform(-1, 1, (d, d))
        assert trace_bound(a) >= spectral_radius(a) * (1 - 1e-9)


def test_hull_check_zero_set():
    s = MatrixSet.from_arrays([np.zeros((2, 2))])
    r = convex_hull_bound_check(s, 1, samples=20)
    assert r.ok
    assert r.max_radius == 0.0
    assert r.max_ratio == 0.0


def test_hull_check_swap_pair():
    s = MatrixSet.from_arrays([elem(0, 1, 2), elem(1, 0, 2)])
    r = convex_hull_bound_check(s, 1, samples=100, seed=3)
    assert r.ok
    assert r.eps == pytest.approx(1.0)
    assert r.bound == pytest.approx(4.0)
    # antidiagonal combinations have eigenvalues +-sqrt(ab), modulus <= 1/...
    assert r.max_radius <= 1.0 + 1e-12


def test_hull_check_half_identity():
    s = MatrixSet.from_arrays([np.eye(2) / 2])
    r = convex_hull_bound_check(s, 1, samples=20)
    assert r.ok
    assert r.max_radius == pytest.approx(0.5)


def test_hull_check_rejects_expanding_set():
    s = MatrixSet.from_arrays([2 * np.eye(2)])
    with pytest.raises(ValueError, match="hypothesis"):
        convex_hull_bound_check(s, 1)


# --- trajectory returns -------------------------------------------------------


def test_trajectory_periodic_rotation():
    s = MatrixSet.from_arrays([rotation(2 * math.pi / 5)])
    word, cert, diag = trajectory_return_search(s, SPECTRAL, 40, x0=[1.0, 0.0])
    assert len(word) == 5
    assert cert.residual <= 1e-9
    assert cert.bound >= 1 - 1e-6
    assert diag["found_return"]


def test_trajectory_basis_cycle_d3():
    s = MatrixSet.from_arrays([elem(0, 1, 3), elem(1, 2, 3), elem(2, 0, 3)])
    word, cert, _ = trajectory_return_search(s, SPECTRAL, 30, x0=[1.0, 0, 0])
    assert len(word) == 3
    assert cert.bound >= 1 - 1e-9
    assert spectral_radius(eval_word(s, word)) == pytest.approx(1.0)


def test_trajectory_rescaled_unipotent_pair():
    s = unipotent_pair(1 / PHI)
    word, cert, _ = trajectory_return_search(s, SPECTRAL, 64, seed=0)
    assert cert.bound >= 0.8
    assert 1 <= len(word) <= 64


def test_trajectory_certificate_is_self_verifying():
    s = unipotent_pair(1 / PHI)
    _, cert, _ = trajectory_return_search(s, SPECTRAL, 64, seed=2)
    again = residual_certificate(cert.a, cert.x, cert.lam, cert.norm)
    assert again.residual == pytest.approx(cert.residual, rel=1e-9, abs=1e-15)
    assert again.bound == pytest.approx(cert.bound, rel=1e-9)


def test_trajectory_no_close_return_is_flagged():
    s = MatrixSet.from_arrays([rotation(GOLDEN_ANGLE)])
    word, cert, diag = trajectory_return_search(s, SPECTRAL, 2, x0=[1.0, 0.0])
    assert not diag["found_return"]
    assert cert.bound == 0.0


def test_trajectory_dies_on_zero_set():
    s = MatrixSet.from_arrays([np.zeros((2, 2))])
    with pytest.raises(ValueError, match="annihilated"):
        trajectory_return_search(s, SPECTRAL, 10, seed=0)


def test_trajectory_requires_two_steps():
    s = MatrixSet.from_arrays([np.eye(2)])
    with pytest.raises(ValueError):
        trajectory_return_search(s, SPECTRAL, 1)


# --- near idempotents ---------------------------------------------------------


def test_near_idempotent_member():
    s = MatrixSet.from_arrays([elem(0, 0, 2)])
    assert near_idempotent_search(s, 4, 1e-9) == ((0,), 0.0)


def test_near_idempotent_in_pair():
    s = MatrixSet.from_arrays([elem(0, 0, 2), elem(0, 1, 2)])
    word, defect = near_idempotent_search(s, 3, 1e-9)
    assert word == (0,)
    assert defect == 0.0


def test_near_idempotent_rotation_has_none():
    s = MatrixSet.from_arrays([rotation(GOLDEN_ANGLE)])
    assert near_idempotent_search(s, 50, 1e-3) is None


# --- theorem checkers ---------------------------------------------------------


def test_check_polbd_identity():
    s = MatrixSet.from_arrays([np.eye(2)])
    rep = check_polbd(s, jsr_estimate(s, JsrConfig(depth=4)))
    assert rep.verdict is Verdict.CONFIRMED
    assert rep.lhs == pytest.approx(1.0)
    assert not rep.budget["clamped"]


def test_check_polbd_swap_pair():
    s = MatrixSet.from_arrays([elem(0, 1, 2), elem(1, 0, 2)])
    rep = check_polbd(s, jsr_estimate(s, JsrConfig(depth=8)))
    assert rep.verdict is Verdict.CONFIRMED
    assert rep.budget["depth"] == 16
    assert rep.lhs == pytest.approx(1.0)
    # the witness word reproduces the reported peak
    w = rep.witnesses["word"]
    assert spectral_radius(eval_word(s, w)) ** (1 / len(w)) == pytest.approx(rep.lhs)


def test_check_polbd_clamped_never_refutes():
    s = MatrixSet.from_arrays([elem(0, 1, 2), elem(1, 0, 2)])
    rep = check_polbd(s, jsr_estimate(s, JsrConfig(depth=8)), word_cap=10)
    assert rep.budget["clamped"]
    assert rep.verdict is not Verdict.REFUTED


def test_check_polbd_inconclusive_on_loose_interval():
    s = MatrixSet.from_arrays([np.eye(2)])
    loose = JsrInterval(0.0, 1e9, (0,), 1)
    rep = check_polbd(s, loose)
    assert rep.verdict is Verdict.INCONCLUSIVE


def test_check_boca_identity():
    s = MatrixSet.from_arrays([np.eye(2)])
    rep = check_boca_new(s, SPECTRAL, jsr_estimate(s, JsrConfig(depth=4)))
    assert rep.verdict is Verdict.CONFIRMED
    assert rep.budget["n1"] == 8
    assert rep.lhs == pytest.approx(1.0)


def test_check_boca_nilpotent_singleton():
    s = MatrixSet.from_arrays([elem(0, 1, 2)])
    rep = check_boca_new(s, SPECTRAL, jsr_estimate(s, JsrConfig(depth=4)))
    assert rep.verdict is Verdict.CONFIRMED
    assert rep.lhs == 0.0


def test_check_boca_unipotent_pair_reports_ratio():
    s = unipotent_pair()
    rep = check_boca_new(s, SPECTRAL, jsr_estimate(s, JsrConfig(depth=8)))
    assert rep.verdict is Verdict.CONFIRMED
    assert 0 < rep.witnesses["ratio"] < 1
    assert len(rep.witnesses["word"]) == 8


def test_check_boca_refutes_only_unclamped():
    # a deliberately wrong enclosure [0, 0] flips the inequality; the full
    # run refutes it, the clamped run must abstain
    s = MatrixSet.from_arrays([np.eye(2), np.eye(2) / 2])
    wrong = JsrInterval(0.0, 0.0, (0,), 1)
    assert check_boca_new(s, SPECTRAL, wrong).verdict is Verdict.REFUTED
    rep = check_boca_new(s, SPECTRAL, wrong, word_cap=8)
    assert rep.budget["clamped"]
    assert rep.verdict is Verdict.INCONCLUSIVE


def test_check_bg_el_scalar_one():
    s = MatrixSet.from_arrays([np.array([[1.0]])])
    rep = check_bg_el(s, 0.5, 10, interval=jsr_estimate(s, JsrConfig(depth=4)))
    assert rep.verdict is Verdict.CONFIRMED
    assert len(rep.witnesses["word"]) == 1
    assert rep.budget["required_length_honored"]
    assert rep.budget["maxlen"] == 24  # ceil(12 / 0.5), overriding the caller


def test_check_bg_el_rotation():
    s = MatrixSet.from_arrays([rotation(GOLDEN_ANGLE)])
    rep = check_bg_el(s, 0.25, 60, interval=jsr_estimate(s, JsrConfig(depth=4)))
    assert rep.verdict is Verdict.CONFIRMED
    assert not rep.budget["required_length_honored"]


def test_check_bg_el_unitary_with_contraction():
    u = rotation(1.0)
    s = MatrixSet.from_arrays([u, np.diag([0.5, 1 / 3]) @ u])
    rep = check_bg_el(s, 0.25, 40, interval=jsr_estimate(s, JsrConfig(depth=6)))
    assert rep.verdict is Verdict.CONFIRMED
    assert rep.lhs >= rep.rhs_at_lower


def test_check_bg_el_requires_unit_enclosure():
    s = MatrixSet.from_arrays([np.eye(2) / 2])
    with pytest.raises(ValueError, match="rescale"):
        check_bg_el(s, 0.5, 10, interval=jsr_estimate(s, JsrConfig(depth=4)))


def test_check_bg_el_never_refutes():
    for seed in range(3):
        s = unipotent_pair(1 / PHI)
        rep = check_bg_el(s, 0.3, 48, interval=jsr_estimate(s, JsrConfig(depth=8)), seed=seed)
        assert rep.verdict in (Verdict.CONFIRMED, Verdict.INCONCLUSIVE)
