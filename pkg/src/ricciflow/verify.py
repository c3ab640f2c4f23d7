"""Bundled verification suites over randomized instances.

Runs every cross-check the library is built on: algebraic sanity of the
two structure-constant tables, equivalence of the closed-form Ricci
components with the structure-constant oracle, gauge equivariance, and
the flow invariants, each with an explicit tolerance and worst residual.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lie_algebra import (
    HomogeneousModel,
    build_sl2c,
    build_so3_r3,
    check_model,
    is_unimodular,
    killing_form_p,
)
from .metric import (
    Case,
    MetricParams,
    adjoint_matrix,
    gauge_reduce,
    metric_matrix,
    orthonormal_frame,
)
from .ricci import (
    ricci_closed,
    ricci_closed_sl2c_no_nu_coupling,
    ricci_oracle,
    scalar_curvature,
    scalar_curvature_closed,
)
from .flow import IntegrateOptions, Trajectory, flow_rhs, identity_residuals, integrate, monitors

KILLING_SO3R3 = np.diag([0.0, 0.0, 0.0, -4.0, -4.0])
KILLING_SL2C = np.array(
    [
        [16.0, 0, 0, 0, 0],
        [0, 0, 0, 8.0, 0],
        [0, 0, 0, 0, 8.0],
        [0, 8.0, 0, 0, 0],
        [0, 0, 8.0, 0, 0],
    ]
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    detail: str = ""

    def format(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status}  {self.name}: worst={self.worst:.3e} tol={self.tol:.1e}"
        if self.detail:
            line += f"  ({self.detail})"
        return line


@dataclass
class VerificationReport:
    samples: int
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def format(self) -> str:
        lines = [c.format() for c in self.checks]
        verdict = "ALL CHECKS PASSED" if self.passed else "VERIFICATION FAILED"
        lines.append(f"{verdict} ({len(self.checks)} checks, {self.samples} samples, seed {self.seed})")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": bool(c.passed),
                    "worst": float(c.worst),
                    "tol": float(c.tol),
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


def random_metric(case: Case, rng: np.random.Generator) -> MetricParams:
    """Log-uniform alpha, beta, gamma in [0.1, 10]; tau below 0.9 beta gamma."""
    a, b, g = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=3))
    tau = rng.uniform(0.0, 0.9) * b * g
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return MetricParams(case, a, b, g, math.sqrt(tau) * math.cos(theta), math.sqrt(tau) * math.sin(theta))


def _model(case: Case) -> HomogeneousModel:
    return build_so3_r3() if case is Case.SO3R3 else build_sl2c()


def structural_checks() -> list[CheckResult]:
    out = []
    for case, expected in ((Case.SO3R3, KILLING_SO3R3), (Case.SL2C, KILLING_SL2C)):
        model = _model(case)
        diag = check_model(model)
        worst = max(diag.max_antisymmetry, diag.max_jacobi, diag.max_isotropy_invariance)
        out.append(CheckResult(f"{case.value} structure residuals", worst <= 1e-12, worst, 1e-12))
        kerr = float(np.max(np.abs(killing_form_p(model) - expected)))
        out.append(CheckResult(f"{case.value} killing table", kerr == 0.0, kerr, 0.0))
        out.append(
            CheckResult(f"{case.value} unimodular", is_unimodular(model), 0.0, 1e-12)
        )
    return out


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / (1.0 + np.max(np.abs(a))))


def oracle_equivalence_check(case: Case, n: int, rng: np.random.Generator) -> list[CheckResult]:
    model = _model(case)
    worst = 0.0
    worst_params = None
    variant_worst = 0.0
    for _ in range(n):
        m = random_metric(case, rng)
        o = ricci_oracle(model, m)
        r = _rel(o, ricci_closed(m).matrix())
        if r > worst:
            worst, worst_params = r, m.as_tuple()
        if case is Case.SL2C:
            variant_worst = max(variant_worst, _rel(o, ricci_closed_sl2c_no_nu_coupling(m).matrix()))
    detail = f"worst at {worst_params}" if worst > 1e-9 else ""
    out = [CheckResult(f"{case.value} oracle vs closed form", worst <= 1e-9, worst, 1e-9, detail)]
    if case is Case.SL2C:
        out.append(
            CheckResult(
                "sl2c nu-coupling resolution",
                True,
                variant_worst,
                math.inf,
                "informational: residual of the no-nu-coupling variant against the oracle",
            )
        )
    return out


def frame_checks(case: Case, n: int, rng: np.random.Generator) -> list[CheckResult]:
    model = _model(case)
    gram_worst = 0.0
    eig_worst = 0.0
    rot_worst = 0.0
    for _ in range(n):
        m = random_metric(case, rng)
        g = metric_matrix(m)
        fr = orthonormal_frame(m)
        gram_worst = max(gram_worst, float(np.max(np.abs(fr.vectors @ g @ fr.vectors.T - np.eye(5)))))
        lm, lp = fr.lambda_minus, fr.lambda_plus
        eig_worst = max(
            eig_worst,
            abs((lm - m.beta) * (lm - m.gamma) - m.tau),
            abs((lp - m.beta) * (lp - m.gamma) - m.tau),
            abs(lm * lp - (m.beta * m.gamma - m.tau)),
        )
        q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
        rotated = q @ fr.vectors
        rot_worst = max(rot_worst, _rel(ricci_oracle(model, m), ricci_oracle(model, m, rotated)))
    return [
        CheckResult(f"{case.value} frame orthonormality", gram_worst <= 1e-10, gram_worst, 1e-10),
        CheckResult(f"{case.value} eigenvalue relations", eig_worst <= 1e-10, eig_worst, 1e-10),
        CheckResult(f"{case.value} frame-choice independence", rot_worst <= 1e-9, rot_worst, 1e-9),
    ]


def gauge_checks(case: Case, n: int, rng: np.random.Generator) -> list[CheckResult]:
    model = _model(case)
    pull_worst = 0.0
    idem_worst = 0.0
    ric_worst = 0.0
    scal_worst = 0.0
    for _ in range(n):
        m = random_metric(case, rng)
        reduced, t = gauge_reduce(m)
        ad = adjoint_matrix(case, t)
        pull_worst = max(pull_worst, _rel(ad.T @ metric_matrix(m) @ ad, metric_matrix(reduced)))
        twice, t2 = gauge_reduce(reduced)
        idem_worst = max(
            idem_worst,
            abs(t2),
            float(np.max(np.abs(np.array(twice.as_tuple()) - np.array(reduced.as_tuple()))))
            / (1.0 + max(abs(v) for v in reduced.as_tuple())),
        )
        ric_worst = max(
            ric_worst,
            _rel(ad.T @ ricci_oracle(model, m) @ ad, ricci_oracle(model, reduced)),
        )
        s1 = scalar_curvature(model, m)
        s2 = scalar_curvature(model, reduced)
        scal_worst = max(scal_worst, abs(s1 - s2) / (1.0 + abs(s1)))
    return [
        CheckResult(f"{case.value} gauge pullback consistency", pull_worst <= 1e-10, pull_worst, 1e-10),
        CheckResult(f"{case.value} gauge idempotence", idem_worst <= 1e-10, idem_worst, 1e-10),
        CheckResult(f"{case.value} ricci gauge equivariance", ric_worst <= 1e-9, ric_worst, 1e-9),
        CheckResult(f"{case.value} scalar curvature gauge invariance", scal_worst <= 1e-10, scal_worst, 1e-10),
    ]


def rhs_consistency_check(case: Case, n: int, rng: np.random.Generator) -> CheckResult:
    model = _model(case)
    worst = 0.0
    for _ in range(n):
        m = random_metric(case, rng)
        rhs = np.array(flow_rhs(m))
        o = ricci_oracle(model, m)
        oracle_rhs = -2.0 * np.array([o[0, 0], o[1, 1], o[3, 3], o[1, 3], o[1, 4]])
        worst = max(worst, float(np.max(np.abs(rhs - oracle_rhs)) / (1.0 + np.max(np.abs(rhs)))))
    return CheckResult(f"{case.value} flow rhs vs oracle", worst <= 1e-9, worst, 1e-9)


def scal_agreement(t1: Trajectory, t2: Trajectory) -> float:
    """Worst relative scalar-curvature gap on the shared sample grid, up to
    99% of the earlier extinction time."""
    ext1 = t1.extinction_time or t1.samples[-1].t
    ext2 = t2.extinction_time or t2.samples[-1].t
    cutoff = 0.99 * min(ext1, ext2)
    g1 = {k: s for k, s in t1.grid_samples() if s.t <= cutoff}
    g2 = {k: s for k, s in t2.grid_samples() if s.t <= cutoff}
    worst = 0.0
    for k in g1.keys() & g2.keys():
        a, b = g1[k].scal, g2[k].scal
        worst = max(worst, abs(a - b) / (1.0 + min(abs(a), abs(b))))
    return worst


def flow_checks() -> list[CheckResult]:
    out = []

    tr = integrate(MetricParams(Case.SO3R3, 1, 1, 1, 0, 0))
    err = abs((tr.extinction_time or math.inf) - 0.5)
    out.append(CheckResult("so3r3 exact-solution extinction at 0.5", err <= 1e-6, err, 1e-6))

    tr = integrate(MetricParams(Case.SO3R3, 1, 2, 3, 0, 0.5))
    rep = monitors(tr)
    v = rep.verdicts["mu_zero_preserved"]
    out.append(CheckResult("so3r3 mu=0 preserved", bool(v.passed), v.worst, 1e-10))
    v = rep.verdicts["eps_decreasing"]
    out.append(CheckResult("so3r3 eps decreasing", bool(v.passed), v.worst, 1e-14))
    ids = identity_residuals(tr)
    worst = max(r for r in ids.values() if r is not None)
    out.append(CheckResult("so3r3 derivative identities", worst <= 1e-4, worst, 1e-4))

    tr = integrate(MetricParams(Case.SL2C, 1, 1.5, 1.5, 0.2, 0))
    rep = monitors(tr)
    v = rep.verdicts["beta_gamma_locked"]
    out.append(CheckResult("sl2c beta=gamma preserved", bool(v.passed), v.worst, 1e-8))
    worst_nu = max(abs(s.nu) for s in tr.samples)
    out.append(CheckResult("sl2c nu=0 preserved", worst_nu <= 1e-12, worst_nu, 1e-12))
    v = rep.verdicts["mu_over_sqrt_tau_nondecreasing"]
    out.append(CheckResult("sl2c mu/sqrt(tau) nondecreasing", bool(v.passed), v.worst, 1e-10))
    ids = identity_residuals(integrate(MetricParams(Case.SL2C, 1, 1, 1, 0, 0)))
    w = ids.get("log_x_rate")
    out.append(CheckResult("sl2c log-x rate identity", w is not None and w <= 1e-4, w or math.inf, 1e-4))

    for case, start in (
        (Case.SO3R3, MetricParams(Case.SO3R3, 1, 2, 3, 1, 0.5)),
        (Case.SL2C, MetricParams(Case.SL2C, 1, 1, 4, 0.2, 0.1)),
    ):
        t1 = integrate(start)
        reduced, _ = gauge_reduce(start)
        t2 = integrate(reduced)
        worst = scal_agreement(t1, t2)
        out.append(CheckResult(f"{case.value} gauge commutation (scal)", worst <= 1e-6, worst, 1e-6))
    return out


def run_verification(samples: int = 1000, seed: int = 0) -> VerificationReport:
    report = VerificationReport(samples=samples, seed=seed)
    report.checks.extend(structural_checks())
    if samples > 0:
        rng = np.random.default_rng(seed)
        frame_n = min(samples, 100)
        gauge_n = min(samples, 200)
        for case in (Case.SO3R3, Case.SL2C):
            report.checks.extend(oracle_equivalence_check(case, samples, rng))
            report.checks.extend(frame_checks(case, frame_n, rng))
            report.checks.extend(gauge_checks(case, gauge_n, rng))
            report.checks.append(rhs_consistency_check(case, min(samples, 200), rng))
        report.checks.extend(flow_checks())
    return report
