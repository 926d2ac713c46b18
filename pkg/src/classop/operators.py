"""Divided-difference operator D and averaging operator S on polynomials."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import errors
from .grids import HalfStepSet
from .maps import MapModel, Regime, symmetric_data
from .poly import DEFAULT_TOL, Poly, Tolerance

CACHE_DEGREE = 64


def gamma_n(q_half, n: int):
    """(q^{n/2} - q^{-n/2}) / (q^{1/2} - q^{-1/2}); works for any numeric type."""
    return (q_half ** n - q_half ** (-n)) / (q_half - 1 / q_half)


def alpha_n(q_half, n: int):
    return (q_half ** n + q_half ** (-n)) / 2


@dataclass(frozen=True)
class OperatorPair:
    """Basis images D(x^n), S(x^n) for n <= cache_degree, stored column-wise."""

    model: MapModel
    d_matrix: np.ndarray
    s_matrix: np.ndarray

    @property
    def cache_degree(self) -> int:
        return self.d_matrix.shape[1] - 1

    def _apply(self, mat: np.ndarray, p: Poly) -> Poly:
        if p.is_zero():
            return Poly()
        if p.degree > self.cache_degree:
            raise errors.DegreeOverflow(
                f"degree {p.degree} exceeds operator cache {self.cache_degree}")
        return Poly(mat[:, : len(p)] @ p.coeffs)

    def D(self, p: Poly) -> Poly:
        return self._apply(self.d_matrix, p)

    def S(self, p: Poly) -> Poly:
        return self._apply(self.s_matrix, p)

    def D_mono(self, n: int) -> Poly:
        return Poly(self.d_matrix[:, n])

    def S_mono(self, n: int) -> Poly:
        return Poly(self.s_matrix[:, n])


def _to_matrix(images: list[Poly], size: int) -> np.ndarray:
    mat = np.zeros((size, size), dtype=complex)
    for n, p in enumerate(images):
        mat[: len(p), n] = p.coeffs
    mat.setflags(write=False)
    return mat


def make_operators(m: MapModel, cache_degree: int = CACHE_DEGREE) -> OperatorPair:
    size = cache_degree + 1
    d_img: list[Poly] = [Poly()]
    s_img: list[Poly] = [Poly([1])]
    if m.regime is Regime.CONTINUOUS:
        for n in range(1, size):
            d_img.append(Poly.monomial(n - 1, n))
            s_img.append(Poly.monomial(n))
    elif m.regime is Regime.ALTERNATING:
        symmetric_data(m)  # rejects non-normalised maps
        # x^{2j} = a(-x^2) with a(t) = (-t)^j, x^{2j+1} = x b(-x^2) likewise
        for n in range(1, size):
            j, odd = divmod(n, 2)
            img = Poly.monomial(2 * j, (-1) ** j)
            d_img.append(img if odd else Poly())
            s_img.append(Poly() if odd else img)
    else:
        e1, e2 = symmetric_data(m)
        # D(x^{n+1}) = h_n with h_n = e1 h_{n-1} - e2 h_{n-2}, h_0 = 1, h_1 = e1
        # S(x^n) = s_n / 2 with s_n = e1 s_{n-1} - e2 s_{n-2}, s_0 = 2, s_1 = e1
        hd = [Poly([1]), e1]
        sd = [Poly([2]), e1]
        while len(hd) < size:
            hd.append(e1 * hd[-1] - e2 * hd[-2])
            sd.append(e1 * sd[-1] - e2 * sd[-2])
        d_img.extend(hd[: size - 1])
        s_img.extend(p / 2 for p in sd[1:size])
    return OperatorPair(m, _to_matrix(d_img, size), _to_matrix(s_img, size))


def leading_action(op: OperatorPair, n: int, tol: Tolerance = DEFAULT_TOL) -> tuple[complex, complex]:
    """(gamma_n, alpha_n): leading coefficients of D(x^n) and S(x^n)."""
    m = op.model
    if m.regime in (Regime.QUADRATIC, Regime.CONTINUOUS):
        g, a = complex(n), 1 + 0j
    elif m.regime is Regime.QEXP:
        g, a = complex(gamma_n(m.q_half, n)), complex(alpha_n(m.q_half, n))
    else:
        g = complex(op.d_matrix[n - 1, n]) if n >= 1 else 0j
        a = complex(op.s_matrix[n, n])
    if n <= op.cache_degree:
        cached_g = complex(op.d_matrix[n - 1, n]) if n >= 1 else 0j
        cached_a = complex(op.s_matrix[n, n])
        if not (tol.close(g, cached_g) and tol.close(a, cached_a)):
            raise AssertionError(f"leading action mismatch at n={n}")
    return g, a


def pointwise_nu_form(m: MapModel, grid: HalfStepSet, phi: Poly, psi: Poly, p: Poly,
                      s: complex, tol: Tolerance = DEFAULT_TOL) -> complex:
    """(Lp)(X(s)) through forward/backward differences of p o X at s."""
    h = grid.h
    for t in (s, s + h / 2, s - h / 2, s + h, s - h):
        if not grid.contains(t):
            raise ValueError(f"point {t} is not materialized in the grid")
    nb = m.neighbours(s)
    X, Y, Z, Y1, Z1 = nb["X"], nb["Y"], nb["Z"], nb["Y1"], nb["Z1"]
    for name, den in (("Y-Z", Y - Z), ("Y1-X", Y1 - X), ("X-Z1", X - Z1)):
        if tol.is_zero(den, max(abs(X), 1.0)):
            raise errors.ZeroDenominator(f"{name} vanishes at s={s}")
    fwd = (p(Y1) - p(X)) / (Y1 - X)  # the backward quotient taken at s + h
    bwd = (p(X) - p(Z1)) / (X - Z1)
    second = (fwd - bwd) / (Y - Z)
    return phi(X) * second + psi(X) / 2 * (fwd + bwd)
