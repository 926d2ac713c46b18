"""Admissible maps: classification from full-step samples, closed forms,
and the symmetric data e1 = Y + Z, e2 = YZ written as polynomials in X.

Along each coset of (h/2)Z the map is stored by its closed form in the
half-step parameter t (so s = s0 + t*h with t in Z/2):

* quadratic      X = a t^2 + b t + c
* q-exponential  X = a q^t + b q^-t + c   (q^t taken through the fixed q^(1/2))
* alternating    X = a (-1)^t + b         ((-1)^(1/2) = i)

Integer t recovers the full-step progressions; the half-integer continuation
is what makes Y and Z expressible through e1 and e2.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from enum import Enum

from . import errors
from .grids import canonical_rep
from .poly import DEFAULT_TOL, Poly, Tolerance, scalar_from_json, scalar_to_json


class Regime(str, Enum):
    QUADRATIC = "quadratic"
    ALTERNATING = "alternating"
    QEXP = "qexponential"
    CONTINUOUS = "continuous"


@dataclass(frozen=True)
class Progression:
    a: complex
    b: complex
    c: complex = 0j


@dataclass(frozen=True)
class MapModel:
    regime: Regime
    h: complex = 1 + 0j
    A: complex = 0j
    B: complex = 0j
    q: complex | None = None
    q_half: complex | None = None
    progressions: tuple[tuple[complex, Progression], ...] = ()
    tol: Tolerance = DEFAULT_TOL

    # progression lookup
    def keys(self) -> list[complex]:
        return [k for k, _ in self.progressions]

    def _lookup(self, key: complex | None) -> tuple[complex, Progression]:
        if not self.progressions:
            raise errors.UnknownProgression("model has no registered progression")
        if key is None:
            return self.progressions[0]
        for k, p in self.progressions:
            if abs(k - key) <= self.tol.bound(abs(k)):
                return k, p
        raise errors.UnknownProgression(f"no progression registered at {key}")

    def progression(self, key: complex | None = None) -> Progression:
        return self._lookup(key)[1]

    def with_progression(self, key: complex, prog: Progression) -> "MapModel":
        key = canonical_rep(complex(key), self.h, self.tol)
        rest = tuple((k, p) for k, p in self.progressions
                     if abs(k - key) > self.tol.bound(abs(k)))
        return replace(self, progressions=rest + ((key, prog),))

    # evaluation
    def closed_form(self, prog: Progression, t: float) -> complex:
        twice = round(2 * t)
        if abs(2 * t - twice) > 1e-9:
            raise ValueError(f"t={t} is not a half-integer")
        if self.regime is Regime.QUADRATIC:
            return prog.a * t * t + prog.b * t + prog.c
        if self.regime is Regime.QEXP:
            qt = self.q_half ** twice
            return prog.a * qt + prog.b / qt + prog.c
        if self.regime is Regime.ALTERNATING:
            return prog.a * 1j ** (twice % 4) + prog.b
        raise errors.RegimeUnsupported("continuous regime has no closed form")

    def __call__(self, s: complex) -> complex:
        """X(s) for any point of a registered coset."""
        s = complex(s)
        key, prog = self._lookup(canonical_rep(s, self.h, self.tol))
        return self.closed_form(prog, ((s - key) / self.h).real)

    def neighbours(self, s: complex) -> dict[str, complex]:
        """X, Y, Z, Y1, Z1 at s."""
        h = self.h
        return {"X": self(s), "Y": self(s + h / 2), "Z": self(s - h / 2),
                "Y1": self(s + h), "Z1": self(s - h)}

    def to_json(self) -> dict:
        out = {"regime": self.regime.value, "h": scalar_to_json(self.h),
               "A": scalar_to_json(self.A), "B": scalar_to_json(self.B)}
        if self.q is not None:
            out["q"] = scalar_to_json(self.q)
            out["q_half"] = scalar_to_json(self.q_half)
        out["progressions"] = [
            {"key": scalar_to_json(k), "a": scalar_to_json(p.a), "b": scalar_to_json(p.b),
             "c": scalar_to_json(p.c)} for k, p in self.progressions]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "MapModel":
        regime = Regime(obj["regime"])
        if regime is Regime.CONTINUOUS:
            return continuous_model()
        get = lambda name: scalar_from_json(obj[name]) if name in obj else None
        progs = tuple((scalar_from_json(p.get("key", [0, 0])),
                       Progression(scalar_from_json(p["a"]), scalar_from_json(p["b"]),
                                   scalar_from_json(p.get("c", [0, 0]))))
                      for p in obj.get("progressions", []))
        return cls(regime, get("h") or 1 + 0j, get("A") or 0j, get("B") or 0j,
                   get("q"), get("q_half"), progs)


# constructors

def quadratic_model(a: complex, b: complex, c: complex, h: complex = 1, s0: complex = 0,
                    tol: Tolerance = DEFAULT_TOL) -> MapModel:
    m = MapModel(Regime.QUADRATIC, complex(h), 2 + 0j, 2 * complex(a), tol=tol)
    return m.with_progression(s0, Progression(complex(a), complex(b), complex(c)))


def qexp_model(q: complex, a: complex, b: complex, c: complex, h: complex = 1,
               s0: complex = 0, q_half: complex | None = None,
               tol: Tolerance = DEFAULT_TOL) -> MapModel:
    q = complex(q)
    if q_half is None:
        q_half = cmath.sqrt(q)
    elif abs(q_half * q_half - q) > tol.bound(abs(q)):
        raise ValueError("q_half does not square to q")
    A = q + 1 / q
    m = MapModel(Regime.QEXP, complex(h), A, complex(c) * (2 - A), q, complex(q_half), tol=tol)
    return m.with_progression(s0, Progression(complex(a), complex(b), complex(c)))


def alternating_model(a: complex, b: complex = 0, h: complex = 1, s0: complex = 0,
                      tol: Tolerance = DEFAULT_TOL) -> MapModel:
    m = MapModel(Regime.ALTERNATING, complex(h), -2 + 0j, 4 * complex(b), tol=tol)
    return m.with_progression(s0, Progression(complex(a), complex(b)))


def continuous_model() -> MapModel:
    return MapModel(Regime.CONTINUOUS, 0j)


def eval_closed_form(m: MapModel, s0_key: complex, k: float) -> complex:
    return m.closed_form(m.progression(s0_key), k)


# classification

def _choose_q(A: complex, tol: Tolerance) -> complex:
    disc = cmath.sqrt(A * A - 4)
    r1, r2 = (A + disc) / 2, (A - disc) / 2
    if abs(abs(r1) - abs(r2)) > tol.bound(1.0):
        return r1 if abs(r1) > abs(r2) else r2
    # unit circle: take the root with argument in (0, pi]
    for r in (r1, r2):
        arg = cmath.phase(r)
        if 0 < arg <= cmath.pi or abs(arg + cmath.pi) <= 1e-15:
            return r
    return r1


def classify_samples(x, h: complex = 1, s0: complex = 0,
                     tol: Tolerance = DEFAULT_TOL) -> MapModel:
    """Classify full-step samples ``x = [x_-1, x_0, x_1, x_2, ...]``.

    Solves x_{k+1} + x_{k-1} = A x_k + B from the first two instances, picks the
    regime from A and fits the closed form through x_0 and x_1.  Any further
    samples are checked against the fitted closed form.
    """
    if h == 0:
        return continuous_model()
    x = [complex(v) for v in x]
    if len(x) < 4:
        raise ValueError("need at least four consecutive samples")
    xm, x0, x1, x2 = x[:4]
    scale = max(abs(v) for v in x) or 1.0
    if tol.is_zero(x0 - x1, scale):
        raise errors.DegenerateSamples("x_0 = x_1, the (A, B) system is singular")
    A = (x1 + xm - x2 - x0) / (x0 - x1)
    B = x1 + xm - A * x0
    if tol.close(A, 2, 2.0):
        A = 2 + 0j
        model = quadratic_model(B / 2, x1 - x0 - B / 2, x0, h=h, s0=s0, tol=tol)
    elif tol.close(A, -2, 2.0):
        A = -2 + 0j
        if not tol.is_zero(x1 + x0 - B / 2, scale):
            raise errors.AlternatingViolation(
                f"A = -2 but Y1 + X - B/2 = {x1 + x0 - B / 2}", index=0)
        model = alternating_model(x0 - B / 4, B / 4, h=h, s0=s0, tol=tol)
    else:
        q = _choose_q(A, tol)
        c = B / (2 - A)
        qi = 1 / q
        a = (x1 - c - (x0 - c) * qi) / (q - qi)
        b = ((x0 - c) * q - x1 + c) / (q - qi)
        model = qexp_model(q, a, b, c, h=h, s0=s0, tol=tol)
    model = replace(model, A=A, B=B)
    key = model.keys()[0]
    for k, v in enumerate(x):
        fit = eval_closed_form(model, key, k - 1)
        if not tol.is_zero(fit - v, scale):
            raise errors.InconsistentSamples(
                f"sample k={k - 1} misses the closed form by {abs(fit - v):.3e}", index=k - 1)
    return model


# symmetric data

def symmetric_data(m: MapModel, key: complex | None = None) -> tuple[Poly, Poly]:
    """(e1, e2) with Y + Z = e1(X) and YZ = e2(X)."""
    if m.regime is Regime.CONTINUOUS:
        raise errors.RegimeUnsupported("no half-step neighbours when h = 0")
    p = m.progression(key)
    if m.regime is Regime.QUADRATIC:
        a, disc = p.a, p.b * p.b - 4 * p.a * p.c
        return Poly([a / 2, 2]), Poly([a * a / 16 - disc / 4, -a / 2, 1])
    if m.regime is Regime.QEXP:
        qh = m.q_half
        alpha = (qh + 1 / qh) / 2
        c, ab = p.c, p.a * p.b
        shift = Poly([-c, 1])
        e1 = shift * (2 * alpha) + 2 * c
        e2 = shift * shift + ab * (qh - 1 / qh) ** 2 + shift * (2 * alpha * c) + c * c
        return e1, e2
    # alternating: only the normalised form b = 0 carries the calculus
    if not m.tol.is_zero(p.b, abs(p.a)):
        raise errors.RegimeUnsupported("symmetric data needs the normalised alternating map (b = 0)")
    return Poly(), Poly([0, 0, 1])


@dataclass(frozen=True)
class MagnusConic:
    """u^2 + (2Bt x + 2Dt) u + Ct x^2 + 2Et x + Ft = 0."""

    Bt: complex
    Ct: complex
    Dt: complex
    Et: complex
    Ft: complex


def magnus_conic(m: MapModel, key: complex | None = None) -> MagnusConic:
    e1, e2 = symmetric_data(m, key)
    return MagnusConic(-e1.coeff(1) / 2, e2.coeff(2), -e1.coeff(0) / 2,
                       e2.coeff(1) / 2, e2.coeff(0))
