"""The five-parameter family of invariant metrics and its eigenframe.

A metric is an inner product on the five-dimensional complement, written
in the basis (c3, c1, c2, F, G) resp. (A, B, C, D, E) as

    [[alpha, 0,    0,    0,    0  ],
     [0,     beta, 0,    mu,   nu ],
     [0,     0,    beta, -nu,  mu ],
     [0,     mu,   -nu,  gamma, 0 ],
     [0,     nu,   mu,   0, gamma ]]

with alpha, beta, gamma > 0 and beta*gamma > tau = mu^2 + nu^2.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

ORTHONORMALITY_TOL = 1e-10
# tau below this fraction of beta^2+gamma^2 routes to the diagonal frame
# to avoid catastrophic cancellation in lambda± - gamma.
DIAG_TAU_FACTOR = 1e-14


class Case(str, enum.Enum):
    SO3R3 = "so3r3"
    SL2C = "sl2c"


class InvalidMetricError(ValueError):
    pass


@dataclass(frozen=True)
class MetricParams:
    case: Case
    alpha: float
    beta: float
    gamma: float
    mu: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        for name in ("alpha", "beta", "gamma", "mu", "nu"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.alpha > 0 and self.beta > 0 and self.gamma > 0):
            raise InvalidMetricError(
                f"alpha, beta, gamma must be positive, got "
                f"({self.alpha}, {self.beta}, {self.gamma})"
            )
        if not (self.beta * self.gamma - self.tau > 0):
            raise InvalidMetricError(
                f"beta*gamma = {self.beta * self.gamma} must exceed "
                f"tau = {self.tau}"
            )
        if not all(
            math.isfinite(v) for v in (self.alpha, self.beta, self.gamma, self.mu, self.nu)
        ):
            raise InvalidMetricError("metric parameters must be finite")

    @property
    def tau(self) -> float:
        return self.mu**2 + self.nu**2

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.mu, self.nu)

    def replace(self, **kw) -> "MetricParams":
        fields = dict(
            case=self.case, alpha=self.alpha, beta=self.beta,
            gamma=self.gamma, mu=self.mu, nu=self.nu,
        )
        fields.update(kw)
        return MetricParams(**fields)


@dataclass(frozen=True)
class Frame:
    """g-orthonormal basis of the complement, rows of `vectors`.

    Row order: normalized alpha-direction, then H-/f-, B-/f-, H+/f+, B+/f+
    (or the diagonal frame when tau is negligible).
    """

    lambda_minus: float
    lambda_plus: float
    vectors: np.ndarray
    f_minus: float
    f_plus: float


def is_diagonal_tau(m: MetricParams) -> bool:
    return m.tau < DIAG_TAU_FACTOR * (m.beta**2 + m.gamma**2)


def metric_matrix(m: MetricParams) -> np.ndarray:
    a, b, g, mu, nu = m.as_tuple()
    return np.array(
        [
            [a, 0, 0, 0, 0],
            [0, b, 0, mu, nu],
            [0, 0, b, -nu, mu],
            [0, mu, -nu, g, 0],
            [0, nu, mu, 0, g],
        ]
    )


def eigen_lambdas(m: MetricParams) -> tuple[float, float]:
    """The double eigenvalues lambda± of the 4x4 block, roots of
    (lambda - beta)(lambda - gamma) = tau.  Requires tau > 0."""
    if is_diagonal_tau(m):
        raise InvalidMetricError("eigen_lambdas requires tau > 0; use the diagonal branch")
    return _lambdas(m.beta, m.gamma, m.tau)


def _lambdas(b: float, g: float, tau: float) -> tuple[float, float]:
    # larger root from the printed formula, smaller via the product
    # b*g - tau to avoid cancellation when 4*tau << (b - g)^2
    lam_plus = 0.5 * (b + g) + 0.5 * math.sqrt(4.0 * tau + (b - g) ** 2)
    lam_minus = (b * g - tau) / lam_plus
    return lam_minus, lam_plus


def lambda_min_block(m: MetricParams) -> float:
    """Smallest eigenvalue of the 4x4 block; min(beta, gamma) when tau = 0."""
    if is_diagonal_tau(m):
        return min(m.beta, m.gamma)
    return _lambdas(m.beta, m.gamma, m.tau)[0]


def orthonormal_frame(m: MetricParams) -> Frame:
    a, b, g, mu, nu = m.as_tuple()
    if is_diagonal_tau(m):
        lam_minus, lam_plus = min(b, g), max(b, g)
        vectors = np.diag(
            [1 / math.sqrt(a), 1 / math.sqrt(b), 1 / math.sqrt(b),
             1 / math.sqrt(g), 1 / math.sqrt(g)]
        )
        return Frame(
            lambda_minus=lam_minus,
            lambda_plus=lam_plus,
            vectors=vectors,
            f_minus=math.sqrt(b),
            f_plus=math.sqrt(g),
        )
    tau = m.tau
    lam_minus, lam_plus = _lambdas(b, g, tau)
    f_minus = math.sqrt(lam_minus * (tau + (lam_minus - g) ** 2))
    f_plus = math.sqrt(lam_plus * (tau + (lam_plus - g) ** 2))
    h_minus = np.array([0.0, lam_minus - g, 0.0, mu, nu]) / f_minus
    b_minus = np.array([0.0, 0.0, lam_minus - g, -nu, mu]) / f_minus
    h_plus = np.array([0.0, lam_plus - g, 0.0, mu, nu]) / f_plus
    b_plus = np.array([0.0, 0.0, lam_plus - g, -nu, mu]) / f_plus
    e0 = np.array([1 / math.sqrt(a), 0.0, 0.0, 0.0, 0.0])
    vectors = np.vstack([e0, h_minus, b_minus, h_plus, b_plus])
    return Frame(
        lambda_minus=lam_minus,
        lambda_plus=lam_plus,
        vectors=vectors,
        f_minus=f_minus,
        f_plus=f_plus,
    )


def gauge_reduce(m: MetricParams) -> tuple[MetricParams, float]:
    """Isometric representative with mu = 0 (case 1) or beta = gamma (case 2),
    together with the conjugation parameter t used to reach it."""
    if m.case is Case.SO3R3:
        t = m.mu / m.beta
        reduced = m.replace(
            gamma=m.gamma + t**2 * m.beta - 2.0 * t * m.mu, mu=0.0
        )
        return reduced, t
    t = math.log(m.gamma / m.beta) / 8.0
    s = math.sqrt(m.beta * m.gamma)
    return m.replace(beta=s, gamma=s), t


def adjoint_matrix(case: Case, t: float) -> np.ndarray:
    """Matrix of Ad(exp(t * c3)) resp. Ad(exp(t * A)) on the complement."""
    case = Case(case)
    if case is Case.SO3R3:
        ad = np.eye(5)
        ad[1, 3] = -t
        ad[2, 4] = -t
        return ad
    e2t = math.exp(2.0 * t)
    return np.diag([1.0, e2t, e2t, 1.0 / e2t, 1.0 / e2t])
