"""Complex scalars with a tolerance policy and dense univariate polynomials."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DivideByZeroPoly, NoConvergence, NotMonic, PochhammerPole

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Tolerance:
    """Two-parameter zero test: ``|z| <= abs_eps + rel_eps * scale``."""

    abs_eps: float = 1e-10
    rel_eps: float = 1e-9

    def __post_init__(self):
        if self.abs_eps < 0 or self.rel_eps < 0:
            raise ValueError("tolerances must be non-negative")

    def bound(self, scale: float = 1.0) -> float:
        return self.abs_eps + self.rel_eps * abs(scale)

    def is_zero(self, z: complex, scale: float = 1.0) -> bool:
        return abs(z) <= self.bound(scale)

    def close(self, a: complex, b: complex, scale: float | None = None) -> bool:
        if scale is None:
            scale = max(abs(a), abs(b))
        return abs(a - b) <= self.bound(scale)

    @classmethod
    def from_env(cls) -> "Tolerance":
        base = cls()
        return cls(float(os.environ.get("COP_TOL_ABS", base.abs_eps)),
                   float(os.environ.get("COP_TOL_REL", base.rel_eps)))


DEFAULT_TOL = Tolerance()


def check_finite(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise FloatingPointError(f"non-finite scalar {z!r}")
    return z


def scalar_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def scalar_from_json(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"scalar must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", ""))
    return complex(v)


class Poly:
    """Dense polynomial with complex coefficients, ``coeffs[k]`` multiplies x^k.

    Exact trailing zeros are trimmed, so the zero polynomial has no
    coefficients and degree ``-inf``.  Instances are immutable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray = ()):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=complex).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        if not np.all(np.isfinite(c)):
            raise FloatingPointError("non-finite polynomial coefficient")
        c.setflags(write=False)
        self._c = c

    # construction helpers
    @classmethod
    def const(cls, z: complex) -> "Poly":
        return cls([z])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, n: int, coeff: complex = 1) -> "Poly":
        c = np.zeros(n + 1, dtype=complex)
        c[n] = coeff
        return cls(c)

    @classmethod
    def from_roots(cls, roots: Iterable[complex]) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # basic data
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> float | int:
        return len(self._c) - 1 if len(self._c) else NEG_INF

    def is_zero(self) -> bool:
        return len(self._c) == 0

    def coeff(self, k: int) -> complex:
        return complex(self._c[k]) if 0 <= k < len(self._c) else 0j

    @property
    def lead(self) -> complex:
        return complex(self._c[-1]) if len(self._c) else 0j

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._c))) if len(self._c) else 0.0

    def __len__(self) -> int:
        return len(self._c)

    # evaluation
    def __call__(self, z):
        """Horner evaluation; works for scalars and numpy arrays."""
        acc = 0j if np.isscalar(z) else np.zeros_like(np.asarray(z), dtype=complex)
        for c in self._c[::-1]:
            acc = acc * z + c
        return complex(acc) if np.isscalar(z) else acc

    def abs_eval(self, z: complex) -> float:
        """Sum of |c_k| |z|^k, the natural rounding scale for ``self(z)``."""
        return float(sum(abs(c) * abs(z) ** k for k, c in enumerate(self._c)))

    # arithmetic
    @staticmethod
    def _coerce(other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)._c
        n = max(len(self._c), len(o))
        out = np.zeros(n, dtype=complex)
        out[: len(self._c)] += self._c
        out[: len(o)] += o
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-self._c)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(self._c * complex(other))
        if self.is_zero() or other.is_zero():
            return Poly()
        return Poly(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def scale(self, z: complex) -> "Poly":
        return Poly(self._c * complex(z))

    def __truediv__(self, z) -> "Poly":
        if isinstance(z, Poly):
            raise TypeError("use divrem for polynomial division")
        return Poly(self._c / complex(z))

    def __pow__(self, n: int) -> "Poly":
        out = Poly([1])
        for _ in range(n):
            out = out * self
        return out

    def compose(self, inner: "Poly") -> "Poly":
        """Return ``self(inner(x))``."""
        out = Poly()
        for c in self._c[::-1]:
            out = out * inner + c
        return out

    def divrem(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        if divisor.is_zero():
            raise DivideByZeroPoly("division by the zero polynomial")
        num = self._c.copy()
        d = divisor._c
        m = len(d) - 1
        if len(num) - 1 < m:
            return Poly(), Poly(num)
        quot = np.zeros(len(num) - m, dtype=complex)
        for k in range(len(num) - 1 - m, -1, -1):
            coef = num[k + m] / d[-1]
            quot[k] = coef
            num[k: k + m + 1] -= coef * d
            num[k + m] = 0
        return Poly(quot), Poly(num[:m])

    def derivative(self) -> "Poly":
        if len(self._c) <= 1:
            return Poly()
        return Poly(self._c[1:] * np.arange(1, len(self._c)))

    def monic(self, tol: Tolerance = DEFAULT_TOL) -> "Poly":
        """Divide by the leading coefficient once; tiny leaders are an error."""
        if self.is_zero() or tol.is_zero(self.lead, self.max_abs()):
            raise NotMonic("leading coefficient is zero within tolerance")
        c = self._c / self.lead
        c[-1] = 1.0
        return Poly(c)

    def trim(self, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> "Poly":
        """Drop trailing coefficients that are zero within tolerance."""
        if scale is None:
            scale = self.max_abs()
        c = self._c
        k = len(c)
        while k and tol.is_zero(c[k - 1], scale):
            k -= 1
        return Poly(c[:k])

    def even_odd(self) -> tuple["Poly", "Poly"]:
        """Split p(x) = e(x^2) + x o(x^2) and return (e, o)."""
        return Poly(self._c[0::2]), Poly(self._c[1::2])

    def subs_square(self) -> "Poly":
        """Return p(x^2)."""
        if self.is_zero():
            return Poly()
        c = np.zeros(2 * len(self._c) - 1, dtype=complex)
        c[0::2] = self._c
        return Poly(c)

    def subs_neg(self) -> "Poly":
        """Return p(-x)."""
        return Poly(self._c * (-1.0) ** np.arange(len(self._c)))

    # comparison and IO
    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly([other])
        return len(self._c) == len(other._c) and bool(np.all(self._c == other._c))

    def __hash__(self) -> int:
        return hash(tuple(self._c.tolist()))

    def allclose(self, other: "Poly", tol: Tolerance = DEFAULT_TOL,
                 scale: float | None = None) -> bool:
        return self.max_diff(other) <= tol.bound(
            max(self.max_abs(), other.max_abs()) if scale is None else scale)

    def max_diff(self, other: "Poly") -> float:
        return (self - other).max_abs()

    def to_json(self) -> dict:
        return {"coeffs": [scalar_to_json(c) for c in self._c]}

    @classmethod
    def from_json(cls, obj) -> "Poly":
        if isinstance(obj, dict):
            obj = obj["coeffs"]
        return cls([scalar_from_json(v) for v in obj])

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self._c):
            if c == 0:
                continue
            cs = f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}j)"
            terms.append(cs if k == 0 else f"{cs}*x^{k}")
        return "Poly(" + " + ".join(terms) + ")"


X = Poly.x()
ONE = Poly.const(1)


def poly_eval(p: Poly, z: complex) -> complex:
    return p(z)


def poly_roots(p: Poly, max_iter: int = 1000) -> list[complex]:
    """All complex roots with multiplicity by Durand-Kerner iteration.

    Starting points sit on the circle of radius ``1 + max|c_k / c_n|`` and are
    rotated by successive powers of ``0.4 + 0.9i``.  Each returned root has
    ``|p(root)| <= 1e-9 * max|coeff|``; otherwise :class:`NoConvergence`.
    """
    n = p.degree
    if n < 1:
        raise ValueError("poly_roots needs degree >= 1")
    c = p.coeffs / p.lead
    if n == 1:
        return [complex(-c[0])]
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    seed = 0.4 + 0.9j
    z = radius * seed ** np.arange(n)
    monic = Poly(c)
    limit = 1e-9 * p.max_abs()

    def residual_ok(roots):
        return all(abs(p(r)) <= limit for r in roots)

    for _ in range(max_iter):
        vals = monic(z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = np.prod(diff, axis=1)
        if np.any(denom == 0):
            z = z + 1e-12 * radius * seed ** np.arange(n)
            continue
        step = vals / denom
        z = z - step
        if np.max(np.abs(step)) <= 4 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(z)))):
            break
    roots = [complex(r) for r in z]
    if not residual_ok(roots):
        raise NoConvergence(f"Durand-Kerner did not reach the residual bound after {max_iter} iterations")
    return roots


def pochhammer(a: complex, k: int) -> complex:
    out = 1 + 0j
    for j in range(k):
        out *= a + j
    return out


def terminating_hypergeometric(upper: Sequence[complex], lower: Sequence[complex],
                               n: int, tol: Tolerance = DEFAULT_TOL) -> Poly:
    """Polynomial sum_{k<=n} prod (upper)_k / prod (lower)_k  t^k / k!.

    The first upper parameter must equal ``-n`` so the series terminates.
    """
    if not upper or not tol.close(upper[0], -n, 1.0):
        raise ValueError(f"first upper parameter must be -{n}")
    for b in lower:
        for j in range(n):
            if tol.is_zero(b + j):
                raise PochhammerPole(f"lower parameter {b} hits a pole at k={j + 1}", index=j + 1)
    coeffs = [1 + 0j]
    term = 1 + 0j
    for k in range(n):
        num = 1 + 0j
        for a in upper:
            num *= a + k
        den = complex(k + 1)
        for b in lower:
            den *= b + k
        term = term * num / den
        coeffs.append(term)
    return Poly(coeffs)
