"""Numerical realization search: objectives, charts, entry points."""

import numpy as np
import pytest

from niep.conditions import VerdictTag, verify_certificate
from niep.search import (
    SearchConfig,
    angles_from_orthogonal,
    coefficient_objective,
    curve_lift,
    find_realization,
    find_symmetric_realization,
    negativity_objective,
    objective_gradient,
    orthogonal_from_angles,
    _matrix_from_params,
)
from niep.spectra import make_spectrum


def _central_diff(f, x, h=1e-6):
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def test_coefficient_gradient_matches_differences() -> None:
    rng = np.random.default_rng(3)
    spec = make_spectrum([4, 3, -2, -2, -2])
    n = spec.n
    for slice_mode in (True, False):
        for _ in range(10):
            x = rng.uniform(-1.0, 1.0, n * n)
            _, g = coefficient_objective(x, spec, use_row_sum_slice=slice_mode)
            num = _central_diff(
                lambda z: coefficient_objective(z, spec, use_row_sum_slice=slice_mode)[0],
                x,
            )
            scale = max(1.0, float(np.linalg.norm(num)))
            assert np.linalg.norm(g - num) / scale <= 1e-5


def test_negativity_gradient_matches_differences() -> None:
    rng = np.random.default_rng(4)
    spec = make_spectrum([4, 3, -2, -2, -2])
    m = spec.n * (spec.n - 1) // 2
    for _ in range(10):
        x = rng.uniform(-np.pi, np.pi, m)
        _, g = negativity_objective(x, spec)
        num = _central_diff(lambda z: negativity_objective(z, spec)[0], x)
        scale = max(1.0, float(np.linalg.norm(num)))
        assert np.linalg.norm(g - num) / scale <= 1e-5


def test_objective_gradient_dispatch() -> None:
    spec = make_spectrum([3, -1, -1])
    x = np.full(9, 0.3)
    g = objective_gradient(x, spec, kind="coefficient")
    assert g.shape == (9,)
    a = np.full(3, 0.1)
    g2 = objective_gradient(a, spec, kind="negativity")
    assert g2.shape == (3,)
    with pytest.raises(ValueError):
        objective_gradient(x, spec, kind="spectral")


def test_givens_chart_round_trip() -> None:
    rng = np.random.default_rng(5)
    for n in (2, 3, 5, 7):
        m = n * (n - 1) // 2
        angles = rng.uniform(-np.pi / 2 + 0.05, np.pi / 2 - 0.05, m)
        Q = orthogonal_from_angles(angles, n)
        assert np.allclose(Q @ Q.T, np.eye(n), atol=1e-12)
        assert np.isclose(np.linalg.det(Q), 1.0, atol=1e-10)
        back = angles_from_orthogonal(Q)
        Q2 = orthogonal_from_angles(back, n)
        # the chart need not be injective but it must reproduce the frame
        assert np.allclose(np.abs(Q2.T @ Q), np.eye(n), atol=1e-9)


def test_row_sum_slice_is_exact() -> None:
    rng = np.random.default_rng(6)
    for _ in range(10):
        n = int(rng.integers(2, 7))
        rho = float(rng.uniform(0.5, 5.0))
        x = rng.uniform(-2.0, 2.0, n * n)
        A = _matrix_from_params(x, n, rho, "slice")
        assert float(np.min(A)) >= 0.0
        assert np.max(np.abs(A.sum(axis=1) - rho)) <= 1e-12


def test_plain_params_are_squares() -> None:
    x = np.array([1.0, -2.0, 3.0, -0.5])
    A = _matrix_from_params(x, 2, 1.0, "plain")
    assert np.allclose(A, [[1.0, 4.0], [9.0, 0.25]])


def test_find_realization_succeeds() -> None:
    spec = make_spectrum([4, 3, -2, -2, -2])
    res = find_realization(spec, SearchConfig(restarts=16, rng_seed=1))
    assert res.verdict.tag is VerdictTag.REALIZABLE
    cert = res.verdict.witness
    assert verify_certificate(cert)
    assert not cert.symmetric
    assert float(np.min(cert.matrix)) >= 0.0
    assert res.best_objective <= 1e-16


def test_find_realization_short_circuits_on_violation() -> None:
    res = find_realization(make_spectrum([1, 1, -3]))
    assert res.verdict.tag is VerdictTag.NOT_REALIZABLE
    assert res.restarts_used == 0
    assert res.verdict.proof is not None


def test_find_realization_deterministic() -> None:
    spec = make_spectrum([5, 1, -2, -3])
    cfg = SearchConfig(restarts=8, rng_seed=7)
    a = find_realization(spec, cfg)
    b = find_realization(spec, cfg)
    assert a.verdict.tag is VerdictTag.REALIZABLE
    assert np.array_equal(a.verdict.witness.matrix, b.verdict.witness.matrix)
    assert a.restarts_used == b.restarts_used


def test_trivial_spectra() -> None:
    one = find_realization(make_spectrum([2.5]))
    assert one.verdict.tag is VerdictTag.REALIZABLE
    zero = find_symmetric_realization(make_spectrum([0.0, 0.0, 0.0]))
    assert zero.verdict.tag is VerdictTag.REALIZABLE
    assert np.array_equal(zero.verdict.witness.matrix, np.zeros((3, 3)))


def test_symmetric_search_succeeds_on_boundary_spectrum() -> None:
    spec = make_spectrum([4, 3, -2, -2, -2])
    res = find_symmetric_realization(spec, SearchConfig(restarts=16, rng_seed=0))
    assert res.verdict.tag is VerdictTag.REALIZABLE
    cert = res.verdict.witness
    assert cert.symmetric
    assert verify_certificate(cert)
    A = cert.matrix
    assert np.array_equal(A, A.T)
    assert float(np.min(A)) >= 0.0


def test_symmetric_search_identity_shortcut() -> None:
    # nonnegative spectrum: the identity frame settles it on restart one
    res = find_symmetric_realization(make_spectrum([3, 2, 1]), SearchConfig(restarts=4))
    assert res.verdict.tag is VerdictTag.REALIZABLE
    assert res.restarts_used == 1
    assert np.allclose(res.verdict.witness.matrix, np.diag([3.0, 2.0, 1.0]))


def test_warm_start_reuses_solution() -> None:
    spec = make_spectrum([4, 3, -2, -2, -2])
    cfg = SearchConfig(restarts=16, rng_seed=0)
    first = find_symmetric_realization(spec, cfg)
    assert first.verdict.tag is VerdictTag.REALIZABLE
    near = make_spectrum([4.05, 3, -2, -2, -2])
    warmed = find_symmetric_realization(
        near, cfg, warm_start=(first.mode, first.parameters)
    )
    assert warmed.verdict.tag is VerdictTag.REALIZABLE
    assert warmed.restarts_used == 1


def test_search_config_validation() -> None:
    with pytest.raises(ValueError):
        SearchConfig(restarts=0).validate()
    with pytest.raises(ValueError):
        SearchConfig(max_iters=0).validate()
    with pytest.raises(ValueError):
        SearchConfig(clamp_tol=1e-3).validate()
    with pytest.raises(ValueError):
        SearchConfig(depth=0).validate()
    SearchConfig().validate()


def test_curve_lift_certifies_segment() -> None:
    # slide the lead from 5 down to 4.4, well inside realizable land
    samples = [
        make_spectrum([5 - 0.1 * i, 3, -2, -2, -2]) for i in range(7)
    ]
    cfg = SearchConfig(restarts=16, rng_seed=0)
    out = curve_lift(samples, cfg, symmetric=False, compare_cold=True)
    assert out.failed_index is None
    assert len(out.certificates) == 7
    assert all(verify_certificate(c) for c in out.certificates)
    assert out.cold_iterations is not None


def test_curve_lift_fails_soft_past_threshold() -> None:
    # crossing below the double-root point must stop the continuation
    samples = [
        make_spectrum([4 - 0.5 * i, 3, -2, -2, -2]) for i in range(4)
    ]
    cfg = SearchConfig(restarts=6, rng_seed=0, max_iters=400)
    out = curve_lift(samples, cfg, symmetric=False)
    assert out.failed_index is not None
    assert out.failed_index >= 1
    assert len(out.certificates) == out.failed_index


def test_curve_lift_validates_input() -> None:
    with pytest.raises(ValueError):
        curve_lift([])
    with pytest.raises(ValueError):
        curve_lift([make_spectrum([2, -1]), make_spectrum([2, -1, 0])])
    with pytest.raises(ValueError):
        curve_lift(
            [make_spectrum([3, -1]), make_spectrum([5, -1])],
            step_bound=1.0,
        )
