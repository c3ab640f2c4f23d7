import numpy as np

from ricciflow import Case, MetricParams, run_verification
from ricciflow.verify import random_metric, structural_checks


def test_structural_checks_pass():
    for check in structural_checks():
        assert check.passed, check.format()


def test_random_metric_valid_and_in_range():
    rng = np.random.default_rng(0)
    for case in (Case.SO3R3, Case.SL2C):
        for _ in range(200):
            m = random_metric(case, rng)
            assert isinstance(m, MetricParams)
            assert 0.1 <= m.alpha <= 10.0
            assert m.beta * m.gamma - m.tau > 0
            assert m.tau <= 0.9 * m.beta * m.gamma + 1e-12


def test_run_verification_small():
    rep = run_verification(samples=20, seed=3)
    assert rep.passed, rep.format()
    names = [c.name for c in rep.checks]
    assert len(names) == len(set(names))
    d = rep.to_dict()
    assert d["passed"] is True and len(d["checks"]) == len(rep.checks)


def test_run_verification_structural_only():
    rep = run_verification(samples=0)
    assert rep.passed
    assert len(rep.checks) == 6
