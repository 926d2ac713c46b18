"""Linear functionals on polynomials, realized as finite moment vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from . import errors
from .maps import MapModel, Regime, symmetric_data
from .operators import OperatorPair
from .poly import Poly, scalar_from_json, scalar_to_json

if TYPE_CHECKING:
    from .regularity import RecurrenceTable


@dataclass(frozen=True)
class MomentFunctional:
    """Moments mu_0..mu_M with mu_k = <u, x^k>."""

    moments: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(complex(m) for m in self.moments))

    @property
    def max_degree(self) -> int:
        return len(self.moments) - 1

    def array(self) -> np.ndarray:
        return np.array(self.moments, dtype=complex)

    def norm(self) -> float:
        return float(np.max(np.abs(self.array()))) if self.moments else 0.0

    def truncate(self, M: int) -> "MomentFunctional":
        return MomentFunctional(self.moments[: M + 1])

    def to_json(self) -> dict:
        return {"moments": [scalar_to_json(m) for m in self.moments]}

    @classmethod
    def from_json(cls, obj) -> "MomentFunctional":
        if isinstance(obj, dict):
            obj = obj["moments"]
        return cls(tuple(scalar_from_json(v) for v in obj))


@dataclass(frozen=True)
class DiscreteRep:
    """u(p) = sum_s w_s p(node_s)."""

    nodes: tuple[complex, ...]
    weights: tuple[complex, ...]

    def moments(self, M: int) -> MomentFunctional:
        x = np.array(self.nodes, dtype=complex)
        w = np.array(self.weights, dtype=complex)
        return MomentFunctional(tuple(np.sum(w * x ** k) for k in range(M + 1)))

    def pair(self, p: Poly) -> complex:
        return complex(sum(w * p(x) for x, w in zip(self.nodes, self.weights)))

    def to_json(self) -> dict:
        return {"nodes": [scalar_to_json(z) for z in self.nodes],
                "weights": [scalar_to_json(z) for z in self.weights]}


def pair(u: MomentFunctional, p: Poly) -> complex:
    if p.is_zero():
        return 0j
    if p.degree > u.max_degree:
        raise errors.DegreeOverflow(f"degree {p.degree} > max moment degree {u.max_degree}")
    return complex(np.dot(p.coeffs, u.array()[: len(p)]))


def pair_scale(u: MomentFunctional, p: Poly) -> float:
    """Sum |c_k| |mu_k|: the size of the terms that <u, p> adds up."""
    if p.is_zero():
        return 0.0
    return float(np.dot(np.abs(p.coeffs), np.abs(u.array()[: len(p)])))


def poly_modify(u: MomentFunctional, p0: Poly) -> MomentFunctional:
    """Moments of p0*u, defined up to degree M - deg p0."""
    if p0.is_zero():
        return MomentFunctional((0j,) * (u.max_degree + 1))
    d = p0.degree
    if d > u.max_degree:
        raise errors.DegreeOverflow(f"deg p0 = {d} > max moment degree {u.max_degree}")
    mu = u.array()
    c = p0.coeffs
    return MomentFunctional(tuple(np.dot(c, mu[k: k + d + 1]) for k in range(u.max_degree - d + 1)))


def transpose_D(u: MomentFunctional, ops: OperatorPair) -> MomentFunctional:
    """<Du, x^k> = -<u, D x^k>, for every k with deg D(x^k) <= M."""
    top = min(u.max_degree + 1, ops.cache_degree)
    mu = u.array()
    mat = ops.d_matrix[: u.max_degree + 1, : top + 1]
    return MomentFunctional(tuple(-(mu @ mat)))


def transpose_S(u: MomentFunctional, ops: OperatorPair) -> MomentFunctional:
    """<Su, x^k> = <u, S x^k>."""
    top = min(u.max_degree, ops.cache_degree)
    mu = u.array()
    mat = ops.s_matrix[: u.max_degree + 1, : top + 1]
    return MomentFunctional(tuple(mu @ mat))


def structural_residual(u: MomentFunctional, phi: Poly, psi: Poly, ops: OperatorPair,
                        up_to: int, with_scale: bool = False):
    """<D(phi u) - S(psi u), x^k> for k <= up_to.

    With ``with_scale`` also returns, per k, the size of the terms being
    cancelled, which is the right yardstick for a floating point zero.
    """
    if u.max_degree < up_to + 2:
        raise errors.DegreeOverflow(f"need moments to degree {up_to + 2}, have {u.max_degree}")
    res, scales = [], []
    for k in range(up_to + 1):
        t1 = phi * ops.D_mono(k)
        t2 = psi * ops.S_mono(k)
        res.append(-pair(u, t1) - pair(u, t2))
        scales.append(pair_scale(u, t1) + pair_scale(u, t2))
    return (res, scales) if with_scale else res


def moments_from_recurrence(table: "RecurrenceTable", mu0: complex = 1,
                            count: int | None = None) -> MomentFunctional:
    """mu_k = mu0 (J^k)_{00} with J tridiagonal (diag B, super 1, sub C).

    Exact for k <= 2K - 1 where K = len(B).
    """
    K = len(table.B)
    if K < 1 or len(table.C) < K:
        raise errors.InsufficientTable("need B_0..B_{K-1} and C_1..C_{K-1}")
    top = 2 * K - 1 if count is None else count
    if top > 2 * K - 1:
        raise errors.InsufficientTable(f"moments up to {top} need {top // 2 + 1} B values")
    J = np.zeros((K, K), dtype=complex)
    for i in range(K):
        J[i, i] = table.B[i]
        if i + 1 < K:
            J[i, i + 1] = 1
            J[i + 1, i] = table.C[i + 1]
    v = np.zeros(K, dtype=complex)
    v[0] = 1
    out = []
    for _ in range(top + 1):
        out.append(mu0 * v[0])
        v = v @ J  # row vector e0^T J^k
    return MomentFunctional(tuple(out))


def hankel_det(u: MomentFunctional, n: int) -> complex:
    """Determinant of the n x n Hankel matrix [mu_{i+j}]."""
    if 2 * n - 2 > u.max_degree:
        raise errors.DegreeOverflow("not enough moments for the Hankel matrix")
    if n == 0:
        return 1 + 0j
    mu = u.array()
    H = np.array([[mu[i + j] for j in range(n)] for i in range(n)])
    return complex(np.linalg.det(H))


def gram(u: MomentFunctional, polys: Sequence[Poly]) -> np.ndarray:
    n = len(polys)
    G = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            G[i, j] = G[j, i] = pair(u, polys[i] * polys[j])
    return G


def derived_functional(u: MomentFunctional, phi: Poly, psi: Poly, m: MapModel,
                       ops: OperatorPair, key: complex | None = None) -> MomentFunctional:
    """One step u -> D(w psi u) - S(phi u) on a q-exponential map.

    ``phi`` and ``psi`` are the pair at the current level and w = ((Y - Z)/2)^2
    written in X, i.e. (e1^2 - 4 e2)/4 = (alpha^2 - 1)((x - c)^2 - 4ab).
    """
    if m.regime is not Regime.QEXP:
        raise errors.RegimeUnsupported("derived functional is defined for q-exponential maps")
    if u.max_degree < 4:
        raise errors.DegreeOverflow("need moments to degree >= 4")
    e1, e2 = symmetric_data(m, key)
    weight = (e1 * e1 - e2 * 4) / 4 * psi
    left = transpose_D(poly_modify(u, weight), ops)
    right = transpose_S(poly_modify(u, phi), ops)
    M = min(left.max_degree, right.max_degree)
    return MomentFunctional(tuple(left.moments[k] - right.moments[k] for k in range(M + 1)))
