import math

import numpy as np
import pytest

from ricciflow import (
    Case,
    InvalidMetricError,
    MetricParams,
    adjoint_matrix,
    eigen_lambdas,
    gauge_reduce,
    lambda_min_block,
    metric_matrix,
    orthonormal_frame,
)
from ricciflow.verify import random_metric


def test_invalid_params_rejected():
    with pytest.raises(InvalidMetricError):
        MetricParams(Case.SO3R3, -1.0, 1.0, 1.0)
    with pytest.raises(InvalidMetricError):
        MetricParams(Case.SO3R3, 1.0, 1.0, 1.0, mu=1.0, nu=0.1)
    with pytest.raises(InvalidMetricError):
        MetricParams(Case.SL2C, 1.0, math.inf, 1.0)


def test_boundary_tau_rejected():
    # beta*gamma = tau exactly is degenerate
    with pytest.raises(InvalidMetricError):
        MetricParams(Case.SL2C, 1.0, 1.0, 1.0, mu=1.0, nu=0.0)


def test_metric_matrix_pattern():
    m = MetricParams(Case.SO3R3, 2.0, 3.0, 5.0, 0.5, -0.25)
    g = metric_matrix(m)
    assert np.array_equal(g, g.T)
    assert g[0, 0] == 2.0 and g[1, 1] == g[2, 2] == 3.0 and g[3, 3] == g[4, 4] == 5.0
    assert g[1, 3] == 0.5 and g[1, 4] == -0.25 and g[2, 3] == 0.25


def test_determinant_formula():
    rng = np.random.default_rng(0)
    for _ in range(50):
        m = random_metric(Case.SO3R3, rng)
        det = np.linalg.det(metric_matrix(m))
        expected = m.alpha * (m.beta * m.gamma - m.tau) ** 2
        assert det == pytest.approx(expected, rel=1e-10)


def test_eigen_lambdas_match_numpy():
    rng = np.random.default_rng(1)
    for _ in range(50):
        m = random_metric(Case.SL2C, rng)
        if m.tau == 0.0:
            continue
        lm, lp = eigen_lambdas(m)
        evs = np.sort(np.linalg.eigvalsh(metric_matrix(m)[1:, 1:]))
        assert lm == pytest.approx(evs[0], rel=1e-12, abs=1e-12)
        assert lp == pytest.approx(evs[3], rel=1e-12)
        # both are double eigenvalues
        assert evs[1] == pytest.approx(evs[0], rel=1e-9, abs=1e-12)
        assert evs[2] == pytest.approx(evs[3], rel=1e-9)


def test_eigen_lambdas_requires_tau():
    with pytest.raises(InvalidMetricError):
        eigen_lambdas(MetricParams(Case.SO3R3, 1.0, 2.0, 3.0))


def test_lambda_min_block_diagonal():
    m = MetricParams(Case.SO3R3, 1.0, 2.0, 3.0)
    assert lambda_min_block(m) == 2.0


def test_lambda_min_no_cancellation():
    # 4 tau << (beta - gamma)^2 regime: direct root formula would cancel
    m = MetricParams(Case.SO3R3, 1.0, 1.0, 100.0, mu=1e-3, nu=0.0)
    lam = lambda_min_block(m)
    assert lam == pytest.approx((m.beta * m.gamma - m.tau) / eigen_lambdas(m)[1], rel=1e-14)
    assert 0 < lam < 1.0


def test_frame_orthonormal_both_branches():
    for m in (
        MetricParams(Case.SO3R3, 2.0, 3.0, 5.0),
        MetricParams(Case.SO3R3, 2.0, 3.0, 5.0, 1.0, -0.5),
        MetricParams(Case.SL2C, 0.3, 7.0, 0.2, 0.1, 0.3),
    ):
        fr = orthonormal_frame(m)
        gram = fr.vectors @ metric_matrix(m) @ fr.vectors.T
        assert np.max(np.abs(gram - np.eye(5))) <= 1e-12


def test_gauge_reduce_so3r3():
    m = MetricParams(Case.SO3R3, 1.0, 2.0, 3.0, 0.7, 0.2)
    reduced, t = gauge_reduce(m)
    assert reduced.mu == 0.0
    assert t == pytest.approx(0.35)
    ad = adjoint_matrix(Case.SO3R3, t)
    assert np.allclose(ad.T @ metric_matrix(m) @ ad, metric_matrix(reduced), atol=1e-14)
    # the gauge motion preserves alpha, beta, nu and the product q
    assert (reduced.alpha, reduced.beta, reduced.nu) == (m.alpha, m.beta, m.nu)
    q = m.beta * m.gamma - m.tau
    assert reduced.beta * reduced.gamma - reduced.tau == pytest.approx(q, rel=1e-14)


def test_gauge_reduce_sl2c():
    m = MetricParams(Case.SL2C, 1.0, 2.0, 8.0, 0.5, -0.25)
    reduced, t = gauge_reduce(m)
    assert reduced.beta == reduced.gamma == pytest.approx(4.0)
    assert t == pytest.approx(math.log(4.0) / 8.0)
    ad = adjoint_matrix(Case.SL2C, t)
    assert np.allclose(ad.T @ metric_matrix(m) @ ad, metric_matrix(reduced), atol=1e-12)


def test_gauge_reduce_idempotent():
    rng = np.random.default_rng(2)
    for case in (Case.SO3R3, Case.SL2C):
        for _ in range(20):
            m = random_metric(case, rng)
            reduced, _ = gauge_reduce(m)
            twice, t2 = gauge_reduce(reduced)
            assert abs(t2) <= 1e-14
            assert np.allclose(twice.as_tuple(), reduced.as_tuple(), rtol=1e-14, atol=1e-14)


def test_replace_preserves_case():
    m = MetricParams(Case.SL2C, 1.0, 2.0, 3.0)
    m2 = m.replace(mu=0.5)
    assert m2.case is Case.SL2C and m2.mu == 0.5 and m2.beta == 2.0
