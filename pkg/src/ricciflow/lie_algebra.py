"""Structure-constant encoding of the two six-dimensional Lie algebras.

Both algebras are stored as dense rank-3 tensors c[i,j,k] with
[e_i, e_j] = sum_k c[i,j,k] e_k.  The basis is ordered so that index 0 is
the isotropy generator and indices 1..5 are the reductive complement in
the order the invariant-metric matrix is written.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class StructureConstants:
    """A real Lie algebra given by its bracket table in a fixed basis."""

    labels: tuple[str, ...]
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        d = len(self.labels)
        if c.shape != (d, d, d):
            raise ValueError(f"structure tensor must be {d}x{d}x{d}, got {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def basis_vector(self, label: str) -> np.ndarray:
        v = np.zeros(self.dim)
        v[self.index(label)] = 1.0
        return v

    def ad(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ad(u): v -> [u, v]."""
        u = np.asarray(u, dtype=float)
        return np.einsum("i,ijk->kj", u, self.c)


@dataclass(frozen=True)
class HomogeneousModel:
    """A Lie algebra together with a reductive splitting h + p."""

    algebra: StructureConstants
    isotropy_indices: tuple[int, ...]
    complement_indices: tuple[int, ...]

    def __post_init__(self):
        d = self.algebra.dim
        if sorted(self.isotropy_indices + self.complement_indices) != list(range(d)):
            raise ValueError("isotropy and complement indices must partition the basis")

    @property
    def p_dim(self) -> int:
        return len(self.complement_indices)

    @property
    def p_labels(self) -> tuple[str, ...]:
        return tuple(self.algebra.labels[i] for i in self.complement_indices)

    def embed(self, v_p: np.ndarray) -> np.ndarray:
        """Lift a complement coefficient vector to the full algebra."""
        v = np.zeros(self.algebra.dim)
        v[list(self.complement_indices)] = v_p
        return v

    def project(self, v: np.ndarray) -> np.ndarray:
        """Component of a full-algebra vector along the complement."""
        return np.asarray(v, dtype=float)[list(self.complement_indices)]


@dataclass(frozen=True)
class ModelDiagnostics:
    max_antisymmetry: float
    max_jacobi: float
    max_isotropy_invariance: float
    unimodular: bool

    @property
    def valid(self) -> bool:
        return (
            self.max_antisymmetry <= RESIDUAL_TOL
            and self.max_jacobi <= RESIDUAL_TOL
            and self.max_isotropy_invariance <= RESIDUAL_TOL
            and self.unimodular
        )


def bracket(model: HomogeneousModel, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Bilinear bracket of two full-algebra coefficient vectors."""
    c = model.algebra.c
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (model.algebra.dim,) or v.shape != (model.algebra.dim,):
        raise ValueError("coefficient vectors must have the algebra dimension")
    return np.einsum("i,j,ijk->k", u, v, c)


def killing_form(model: HomogeneousModel) -> np.ndarray:
    """Killing matrix B[i,j] = trace(ad e_i . ad e_j) in the full basis."""
    c = model.algebra.c
    return np.einsum("iab,jba->ij", c, c)


def killing_form_p(model: HomogeneousModel) -> np.ndarray:
    """Killing form restricted to the complement, in the p-basis order."""
    B = killing_form(model)
    idx = list(model.complement_indices)
    return B[np.ix_(idx, idx)]


def is_unimodular(model: HomogeneousModel, tol: float = RESIDUAL_TOL) -> bool:
    """True iff trace(ad e_i) = 0 for every basis vector."""
    traces = np.einsum("ijj->i", model.algebra.c)
    return bool(np.max(np.abs(traces)) <= tol)


def jacobi_residual(sc: StructureConstants) -> float:
    """Max absolute residual of the cyclic Jacobi sum over all index triples."""
    c = sc.c
    t = np.einsum("ijm,mlk->ijlk", c, c)
    cyc = t + np.einsum("ijlk->jlik", t) + np.einsum("ijlk->lijk", t)
    return float(np.max(np.abs(cyc)))


def antisymmetry_residual(sc: StructureConstants) -> float:
    return float(np.max(np.abs(sc.c + np.einsum("ijk->jik", sc.c))))


def isotropy_invariance_residual(model: HomogeneousModel) -> float:
    """Max leakage of ad(h).p outside p over isotropy generators h."""
    worst = 0.0
    for h in model.isotropy_indices:
        for p in model.complement_indices:
            out = model.algebra.c[h, p, list(model.isotropy_indices)]
            worst = max(worst, float(np.max(np.abs(out))) if out.size else 0.0)
    return worst


def check_model(model: HomogeneousModel) -> ModelDiagnostics:
    """Diagnostic report on the algebraic sanity of a model."""
    return ModelDiagnostics(
        max_antisymmetry=antisymmetry_residual(model.algebra),
        max_jacobi=jacobi_residual(model.algebra),
        max_isotropy_invariance=isotropy_invariance_residual(model),
        unimodular=is_unimodular(model),
    )


def _tensor_from_table(labels, table) -> np.ndarray:
    """Build the antisymmetric tensor from {(left, right): {out: coeff}}."""
    d = len(labels)
    c = np.zeros((d, d, d))
    idx = {name: i for i, name in enumerate(labels)}
    for (a, b), out in table.items():
        for name, coeff in out.items():
            c[idx[a], idx[b], idx[name]] = coeff
            c[idx[b], idx[a], idx[name]] = -coeff
    return c


def build_so3_r3() -> HomogeneousModel:
    """so(3) acting on R^3 by its standard representation, isotropy so(2).

    Basis order (E, c3, c1, c2, F, G); the complement is (c3, c1, c2, F, G).
    """
    labels = ("E", "c3", "c1", "c2", "F", "G")
    table = {
        ("E", "c1"): {"c2": -1.0},
        ("E", "c2"): {"c1": 1.0},
        ("E", "F"): {"G": -1.0},
        ("E", "G"): {"F": 1.0},
        ("c3", "F"): {"c1": -1.0},
        ("c3", "G"): {"c2": -1.0},
        ("c1", "F"): {"c3": 1.0},
        ("c2", "G"): {"c3": 1.0},
        ("F", "G"): {"E": -1.0},
    }
    sc = StructureConstants(labels=labels, c=_tensor_from_table(labels, table))
    return HomogeneousModel(algebra=sc, isotropy_indices=(0,), complement_indices=(1, 2, 3, 4, 5))


def build_sl2c() -> HomogeneousModel:
    """sl(2, C) as a real algebra, isotropy u(1).

    Basis order (X, A, B, C, D, E); the complement is (A, B, C, D, E).
    """
    # Orientation convention: the E generator is chosen so that the
    # isotropy rotates the (B, C) and (D, E) planes the same way; this is
    # the convention under which the five-parameter metric ansatz is
    # isotropy-invariant and the Killing form has B(C, E) = +8.
    labels = ("X", "A", "B", "C", "D", "E")
    table = {
        ("X", "B"): {"C": 2.0},
        ("X", "C"): {"B": -2.0},
        ("X", "D"): {"E": 2.0},
        ("X", "E"): {"D": -2.0},
        ("A", "B"): {"B": 2.0},
        ("A", "C"): {"C": 2.0},
        ("A", "D"): {"D": -2.0},
        ("A", "E"): {"E": -2.0},
        ("B", "D"): {"A": 1.0},
        ("B", "E"): {"X": -1.0},
        ("C", "D"): {"X": 1.0},
        ("C", "E"): {"A": 1.0},
    }
    sc = StructureConstants(labels=labels, c=_tensor_from_table(labels, table))
    return HomogeneousModel(algebra=sc, isotropy_indices=(0,), complement_indices=(1, 2, 3, 4, 5))
