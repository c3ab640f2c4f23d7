"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with `pytest -s tests/test_acceptance.py` to see the verdict lines.
Criterion 6 includes a conservation statement for nu*sqrt(alpha) that the
structure-constant oracle contradicts; the check is implemented as stated
and is expected to fail (see the repository notes).
"""
import itertools
import math
import time

import numpy as np
import pytest

from ricciflow import (
    Case,
    IntegrateOptions,
    MetricParams,
    TerminationKind,
    build_sl2c,
    build_so3_r3,
    check_model,
    components_from_matrix,
    gauge_reduce,
    identity_residuals,
    integrate,
    is_unimodular,
    killing_form,
    metric_matrix,
    monitors,
    ricci_closed,
    ricci_oracle,
    scalar_curvature,
)
from ricciflow.verify import random_metric, scal_agreement

MODELS = {Case.SO3R3: build_so3_r3(), Case.SL2C: build_sl2c()}

KILLING_FULL = {
    Case.SO3R3: np.diag([-4.0, 0.0, 0.0, 0.0, -4.0, -4.0]),
    Case.SL2C: np.array(
        [
            [-16.0, 0, 0, 0, 0, 0],
            [0, 16.0, 0, 0, 0, 0],
            [0, 0, 0, 0, 8.0, 0],
            [0, 0, 0, 0, 0, 8.0],
            [0, 0, 8.0, 0, 0, 0],
            [0, 0, 0, 8.0, 0, 0],
        ]
    ),
}


def verdict(num: int, title: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    line = f"CRITERION {num} [{status}] {title}"
    if detail:
        line += f" ({detail})"
    print(line)
    return ok


def test_criterion_1_algebra_fidelity():
    ok = True
    worst = 0.0
    for case, model in MODELS.items():
        diag = check_model(model)
        worst = max(worst, diag.max_jacobi, diag.max_antisymmetry)
        ok &= diag.max_jacobi <= 1e-12 and diag.max_antisymmetry <= 1e-12
        ok &= is_unimodular(model)
        ok &= bool(np.array_equal(killing_form(model), KILLING_FULL[case]))
    assert verdict(1, "algebra fidelity", ok, f"worst residual {worst:.1e}")


def test_criterion_2_oracle_equivalence():
    rng = np.random.default_rng(42)
    ok = True
    worst = 0.0
    offender = None
    for case, model in MODELS.items():
        for _ in range(1000):
            m = random_metric(case, rng)
            oracle = ricci_oracle(model, m)
            closed = ricci_closed(m).matrix()
            rel = np.max(np.abs(oracle - closed)) / (1.0 + np.max(np.abs(oracle)))
            if rel > worst:
                worst, offender = rel, (case.value, m.as_tuple())
    ok = worst <= 1e-9
    detail = f"worst rel {worst:.1e} over 1000 samples/case"
    if not ok:
        detail += f", offender {offender}"
    assert verdict(2, "oracle equivalence", ok, detail)


def test_criterion_3_spot_values():
    m1 = MetricParams(Case.SO3R3, 1.0, 1.0, 1.0)
    c1 = components_from_matrix(m1.case, ricci_oracle(MODELS[m1.case], m1))
    s1 = scalar_curvature(MODELS[m1.case], m1)
    m2 = MetricParams(Case.SL2C, 1.0, 1.0, 1.0)
    c2 = components_from_matrix(m2.case, ricci_oracle(MODELS[m2.case], m2))
    s2 = scalar_curvature(MODELS[m2.case], m2)
    ok = (
        np.allclose(c1.as_tuple(), (0.0, 0.0, 1.0, 0.0, 0.0), atol=1e-12)
        and abs(s1 - 2.0) <= 1e-12
        and np.allclose(c2.as_tuple(), (-15.0, -0.5, -0.5, -4.0, 0.0), atol=1e-12)
        and abs(s2 + 17.0) <= 1e-12
    )
    assert verdict(3, "spot values", ok, f"scal = {s1:.12g}, {s2:.12g}")


def test_criterion_4_exact_solution_extinction():
    traj = integrate(MetricParams(Case.SO3R3, 1.0, 1.0, 1.0))
    t_ext = traj.extinction_time
    gamma_ok = all(abs(s.gamma - (1.0 - 2.0 * s.t)) <= 1e-8 for s in traj.samples)
    ok = (
        traj.termination.kind is TerminationKind.EXTINCT
        and t_ext is not None
        and abs(t_ext - 0.5) <= 1e-6
        and gamma_ok
    )
    assert verdict(4, "exact-solution extinction", ok, f"t_ext = {t_ext}")


def _grid_initials(case: Case):
    vals = np.linspace(0.5, 2.0, 3)
    eps0s = (0.0, 0.2, 0.35, 0.5)
    theta = math.pi / 6.0
    out = []
    for a, b, g, e0 in itertools.product(vals, vals, vals, eps0s):
        tau = e0 * b * g
        out.append(
            MetricParams(
                case, a, b, g,
                math.sqrt(tau) * math.cos(theta),
                math.sqrt(tau) * math.sin(theta),
            )
        )
    return out


def test_criterion_5_finite_time_extinction_grids():
    opts = IntegrateOptions(rtol=1e-7, atol=1e-10, sample_stride=0.05)
    start = time.time()
    ok = True
    non_extinct = []
    counts = {}
    for case in MODELS:
        initials = _grid_initials(case)
        assert len(initials) >= 100
        counts[case.value] = len(initials)
        for m0 in initials:
            traj = integrate(m0, opts)
            if traj.termination.kind is not TerminationKind.EXTINCT:
                ok = False
                non_extinct.append((case.value, m0.as_tuple()))
    elapsed = time.time() - start
    detail = f"{sum(counts.values())} runs in {elapsed:.1f}s"
    if non_extinct:
        detail += f", non-extinct: {non_extinct[:3]}"
    ok &= elapsed < 30.0
    assert verdict(5, "finite-time extinction grids", ok, detail)


def test_criterion_6_flow_invariants():
    parts = {}

    traj = integrate(MetricParams(Case.SO3R3, 1.0, 2.0, 3.0, 0.0, 0.4))
    rep = monitors(traj)
    parts["mu=0 preserved (case 1, 1e-10)"] = bool(rep.verdicts["mu_zero_preserved"].passed)
    parts["eps strictly decreasing (case 1, tau>0)"] = bool(rep.verdicts["eps_decreasing"].passed)

    traj = integrate(MetricParams(Case.SL2C, 1.0, 1.5, 1.5, 0.2, 0.1))
    rep = monitors(traj)
    parts["beta=gamma preserved (case 2, rel 1e-8)"] = bool(rep.verdicts["beta_gamma_locked"].passed)

    traj = integrate(MetricParams(Case.SL2C, 1.0, 1.0, 1.0, 0.0, 0.3))
    vals = [s.nu_sqrt_alpha for s in traj.accepted_samples()]
    drift = (max(vals) - min(vals)) / max(abs(v) for v in vals)
    parts[f"nu*sqrt(alpha) conserved (case 2, rel 1e-6; drift {drift:.2e})"] = drift <= 1e-6

    ok = all(parts.values())
    detail = "; ".join(f"{name}: {'ok' if good else 'FAILED'}" for name, good in parts.items())
    assert verdict(6, "flow invariants", ok, detail)


def test_criterion_7_identity_residuals():
    required = {}
    traj = integrate(MetricParams(Case.SO3R3, 1.0, 2.0, 3.0, 0.0, 0.5))
    ids = identity_residuals(traj)
    for name in ("gamma_over_beta_rate", "log_eps_rate", "x_rate", "log_tau_over_beta2_rate"):
        required[name] = ids.get(name)
    traj = integrate(MetricParams(Case.SL2C, 1.0, 1.0, 1.0))
    required["log_x_rate"] = identity_residuals(traj).get("log_x_rate")
    ok = all(r is not None and r <= 1e-4 for r in required.values())
    worst = max(r for r in required.values() if r is not None)
    assert verdict(7, "identity residuals", ok, f"worst rel {worst:.1e} over {len(required)} identities")


def test_criterion_8_gauge_program():
    ok = True
    worst_scal = 0.0
    worst_struct = 0.0
    rng = np.random.default_rng(8)
    for case, model in MODELS.items():
        for _ in range(50):
            m = random_metric(case, rng)
            reduced, t = gauge_reduce(m)
            twice, t2 = gauge_reduce(reduced)
            worst_struct = max(
                worst_struct,
                abs(t2),
                float(np.max(np.abs(np.array(twice.as_tuple()) - np.array(reduced.as_tuple())))),
            )
            from ricciflow import adjoint_matrix

            ad = adjoint_matrix(case, t)
            worst_struct = max(
                worst_struct,
                float(np.max(np.abs(ad.T @ metric_matrix(m) @ ad - metric_matrix(reduced))))
                / (1.0 + float(np.max(np.abs(metric_matrix(m))))),
            )
    ok &= worst_struct <= 1e-10
    for m0 in (
        MetricParams(Case.SO3R3, 1.0, 2.0, 3.0, 1.0, 0.5),
        MetricParams(Case.SL2C, 1.0, 1.0, 4.0, 0.2, 0.1),
    ):
        t1 = integrate(m0)
        t2 = integrate(gauge_reduce(m0)[0])
        worst_scal = max(worst_scal, scal_agreement(t1, t2))
    ok &= worst_scal <= 1e-6
    assert verdict(
        8, "gauge program", ok,
        f"structural worst {worst_struct:.1e}, scal-agreement worst {worst_scal:.1e}",
    )


def test_criterion_9_scal_threshold_hook():
    opts = IntegrateOptions(rtol=1e-7, atol=1e-10, sample_stride=0.02)
    rng = np.random.default_rng(99)
    ok = True
    t_gs = []
    missing = []
    for case in MODELS:
        for _ in range(20):
            a, b, g = rng.uniform(0.5, 2.0, size=3)
            e0 = rng.uniform(0.0, 0.5)
            tau = e0 * b * g
            th = rng.uniform(0.0, 2.0 * math.pi)
            m0 = MetricParams(case, a, b, g, math.sqrt(tau) * math.cos(th), math.sqrt(tau) * math.sin(th))
            traj = integrate(m0, opts, scal_threshold=1.0)
            t_ext = traj.extinction_time
            t_g = traj.t_scal_threshold
            if t_g is None or t_ext is None or not t_g < t_ext:
                ok = False
                missing.append((case.value, m0.as_tuple(), t_g, t_ext))
            else:
                t_gs.append(t_g)
    detail = f"40 sweep runs, t_g in [{min(t_gs):.4g}, {max(t_gs):.4g}]" if t_gs else "no crossings"
    if missing:
        detail += f"; missing crossing: {missing[:2]}"
    assert verdict(9, "scalar-curvature threshold hook", ok, detail)
