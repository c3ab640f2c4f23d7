"""Ricci curvature of the invariant metrics, computed two independent ways.

`ricci_oracle` evaluates the general unimodular three-sum formula

    Ric(X, Y) = -1/2 B(X, Y) - 1/2 sum_i g([X, X_i], [Y, X_i])
                + 1/4 sum_{i,j} g([X_i, X_j], X) g([X_i, X_j], Y)

directly from the structure constants and a g-orthonormal frame (X_i),
with brackets projected onto the complement.  The closed forms evaluate
the per-case component expressions.  The two routes are compared in the
test suite; on disagreement the oracle is authoritative.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie_algebra import HomogeneousModel, is_unimodular, killing_form_p
from .metric import Case, MetricParams, metric_matrix, orthonormal_frame

INVARIANCE_TOL = 1e-10


@dataclass(frozen=True)
class RicciComponents:
    """Ricci tensor in the metric-shaped five-component form."""

    case: Case
    r_a: float
    r_b: float
    r_c: float
    r_m: float
    r_n: float

    def matrix(self) -> np.ndarray:
        a, b, c, m, n = self.r_a, self.r_b, self.r_c, self.r_m, self.r_n
        return np.array(
            [
                [a, 0, 0, 0, 0],
                [0, b, 0, m, n],
                [0, 0, b, -n, m],
                [0, m, -n, c, 0],
                [0, n, m, 0, c],
            ]
        )

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.r_a, self.r_b, self.r_c, self.r_m, self.r_n)


def components_from_matrix(case: Case, ric: np.ndarray, tol: float = INVARIANCE_TOL) -> RicciComponents:
    """Extract the five components, checking the isotropy-invariance pattern."""
    comp = RicciComponents(
        case=Case(case),
        r_a=float(ric[0, 0]),
        r_b=float(ric[1, 1]),
        r_c=float(ric[3, 3]),
        r_m=float(ric[1, 3]),
        r_n=float(ric[1, 4]),
    )
    scale = 1.0 + float(np.max(np.abs(ric)))
    resid = float(np.max(np.abs(ric - comp.matrix())))
    if resid > tol * scale:
        raise ValueError(f"matrix does not have the invariant pattern (residual {resid})")
    return comp


def ricci_oracle(
    model: HomogeneousModel, m: MetricParams, frame_vectors: np.ndarray | None = None
) -> np.ndarray:
    """5x5 Ricci matrix on the complement from the structure constants.

    `frame_vectors` may supply an alternative g-orthonormal basis (rows);
    the result must not depend on the choice, which the test suite uses
    as a consistency check.
    """
    if not is_unimodular(model):
        raise ValueError("the unimodular Ricci formula requires a unimodular algebra")
    g = metric_matrix(m)
    if frame_vectors is None:
        frame_vectors = orthonormal_frame(m).vectors
    c = model.algebra.c
    p_idx = list(model.complement_indices)

    # frame vectors lifted to the full algebra, shape (5, 6)
    X = np.zeros((5, model.algebra.dim))
    X[:, p_idx] = frame_vectors

    # E[a] = p-basis vectors in the full algebra
    E = np.zeros((5, model.algebra.dim))
    for a, i in enumerate(p_idx):
        E[a, i] = 1.0

    # U[a, i, :] = proj_p [e_a, X_i]
    U = np.einsum("ap,iq,pqk->aik", E, X, c)[:, :, p_idx]
    # T[i, j, :] = proj_p [X_i, X_j]
    T = np.einsum("ip,jq,pqk->ijk", X, X, c)[:, :, p_idx]

    term1 = -0.5 * killing_form_p(model)
    term2 = -0.5 * np.einsum("aik,kl,bil->ab", U, g, U)
    gT = np.einsum("ak,ijk->ija", g, T)
    term3 = 0.25 * np.einsum("ija,ijb->ab", gT, gT)
    return term1 + term2 + term3


def ricci_closed_so3r3(m: MetricParams) -> RicciComponents:
    """Closed-form Ricci components for the SO(3) x| R^3 / SO(2) case."""
    if m.case is not Case.SO3R3:
        raise ValueError("metric is not in the so3r3 case")
    a, b, g, mu, nu = m.as_tuple()
    q = b * g - m.tau
    return RicciComponents(
        case=m.case,
        r_a=(a**2 - b**2) / q + 2.0 * a**2 * nu**2 / q**2,
        r_b=b / (2.0 * a) * (b**2 - a**2) / q,
        r_c=2.0 - b / a + g / (2.0 * a) * (b**2 - a**2) / q,
        r_m=mu / (2.0 * a * q) * (b**2 - a**2),
        r_n=nu / (2.0 * a * q) * (a**2 + b**2),
    )


def ricci_closed_sl2c(m: MetricParams) -> RicciComponents:
    """Closed-form Ricci components for the SL(2, C) / U(1) case.

    The nu-coupling terms (the nu^2 addition in the alpha slot and the
    +a^2 sign in the nu slot) follow the structure-constant oracle, which
    they match to machine precision; see also
    `ricci_closed_sl2c_no_nu_coupling` for the weaker variant without
    them.  Both agree whenever nu = 0.
    """
    if m.case is not Case.SL2C:
        raise ValueError("metric is not in the sl2c case")
    a, b, g, mu, nu = m.as_tuple()
    q = b * g - m.tau
    return RicciComponents(
        case=m.case,
        r_a=(a**2 - 16.0 * b * g) / q + 2.0 * a**2 * nu**2 / q**2,
        r_b=b * (16.0 * m.tau - a**2) / (2.0 * a * q),
        r_c=g * (16.0 * m.tau - a**2) / (2.0 * a * q),
        r_m=-4.0 + mu / (2.0 * a * q) * (16.0 * b * g - a**2),
        r_n=nu / (2.0 * a * q) * (16.0 * b * g + a**2),
    )


def ricci_closed_sl2c_no_nu_coupling(m: MetricParams) -> RicciComponents:
    """Variant of the sl2c closed forms without the nu-coupling terms.

    Kept as a diagnostic: the verify report compares both variants to the
    oracle and flags which one matches.  This variant does NOT match the
    oracle when nu != 0.
    """
    if m.case is not Case.SL2C:
        raise ValueError("metric is not in the sl2c case")
    a, b, g, mu, nu = m.as_tuple()
    q = b * g - m.tau
    return RicciComponents(
        case=m.case,
        r_a=(a**2 - 16.0 * b * g) / q,
        r_b=b * (16.0 * m.tau - a**2) / (2.0 * a * q),
        r_c=g * (16.0 * m.tau - a**2) / (2.0 * a * q),
        r_m=-4.0 + mu / (2.0 * a * q) * (16.0 * b * g - a**2),
        r_n=nu / (2.0 * a * q) * (16.0 * b * g - a**2),
    )


def ricci_closed(m: MetricParams) -> RicciComponents:
    if m.case is Case.SO3R3:
        return ricci_closed_so3r3(m)
    return ricci_closed_sl2c(m)


def scalar_curvature(model: HomogeneousModel, m: MetricParams) -> float:
    """trace(g^{-1} Ric) with Ric from the structure-constant oracle."""
    g = metric_matrix(m)
    ric = ricci_oracle(model, m)
    return float(np.trace(np.linalg.solve(g, ric)))


def scalar_curvature_closed(m: MetricParams) -> float:
    """Fast scalar curvature from the closed-form components.

    Uses the block structure: the 4x4 block is the real form of a 2x2
    complex hermitian matrix, so its inverse trace pairing reduces to
    2 (gamma r_b + beta r_c - 2 mu r_m - 2 nu r_n) / (beta gamma - tau).
    """
    r = ricci_closed(m)
    q = m.beta * m.gamma - m.tau
    return r.r_a / m.alpha + 2.0 * (
        m.gamma * r.r_b + m.beta * r.r_c - 2.0 * m.mu * r.r_m - 2.0 * m.nu * r.r_n
    ) / q
