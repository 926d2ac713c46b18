"""Finite models of half-step-invariant sets.

A set is stored as a step ``h``, one representative per coset of
``(h/2)Z`` and a window ``K``; the materialized points are ``v + k*h/2`` for
``|k| <= K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .poly import DEFAULT_TOL, Tolerance, scalar_from_json, scalar_to_json


def _near_integer(r: complex, tol: Tolerance) -> bool:
    return abs(r - round(r.real)) <= tol.bound(abs(r))


def same_coset(s: complex, t: complex, h: complex, tol: Tolerance = DEFAULT_TOL) -> bool:
    if h == 0:
        raise ValueError("h must be non-zero")
    return _near_integer((s - t) / (h / 2), tol)


def canonical_rep(s: complex, grid: "HalfStepSet | complex",
                  tol: Tolerance = DEFAULT_TOL) -> complex:
    """Shift ``s`` by half-steps into the strip ``0 <= Re(s/h) < 1/2``."""
    h = grid.h if isinstance(grid, HalfStepSet) else complex(grid)
    t = 2 * (s / h).real
    k = math.floor(t)
    # a value a hair below the next integer is treated as that integer
    if abs(t - (k + 1)) <= tol.bound(abs(t)):
        k += 1
    return s - k * h / 2


@dataclass(frozen=True)
class HalfStepSet:
    h: complex
    reps: tuple[complex, ...]
    window: int = 2
    tol: Tolerance = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "h", complex(self.h))
        object.__setattr__(self, "reps", tuple(complex(v) for v in self.reps))
        if self.h == 0:
            raise ValueError("h must be non-zero")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        for i, u in enumerate(self.reps):
            for v in self.reps[i + 1:]:
                if same_coset(u, v, self.h, self.tol):
                    raise ValueError(f"representatives {u} and {v} share a coset")

    def points(self, k_min: int | None = None, k_max: int | None = None) -> list[complex]:
        lo = -self.window if k_min is None else k_min
        hi = self.window if k_max is None else k_max
        return [v + k * self.h / 2 for v in self.reps for k in range(lo, hi + 1)]

    def contains(self, s: complex) -> bool:
        return any(abs(s - p) <= self.tol.bound(abs(p)) for p in self.points())

    def to_json(self) -> dict:
        return {"h": scalar_to_json(self.h), "reps": [scalar_to_json(v) for v in self.reps],
                "window": self.window}

    @classmethod
    def from_json(cls, obj: dict) -> "HalfStepSet":
        return cls(scalar_from_json(obj["h"]), tuple(scalar_from_json(v) for v in obj["reps"]),
                   int(obj.get("window", 2)))


def dedup(values: Iterable[complex], tol: Tolerance = DEFAULT_TOL) -> list[complex]:
    """Sorted list of values with near-duplicates merged."""
    out: list[complex] = []
    for z in sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag)):
        if not any(tol.close(z, w) for w in out):
            out.append(z)
    return out


def image_set(X: Callable[[complex], complex], points: "HalfStepSet | Iterable[complex]",
              tol: Tolerance = DEFAULT_TOL, k_min: int | None = None,
              k_max: int | None = None) -> list[complex]:
    """Deduplicated X-values over a grid's materialized points (or any point list)."""
    if isinstance(points, HalfStepSet):
        points = points.points(k_min, k_max)
    return dedup((X(s) for s in points), tol)


def same_set(a: Iterable[complex], b: Iterable[complex], tol: Tolerance = DEFAULT_TOL) -> bool:
    a, b = list(a), list(b)
    return (all(any(tol.close(x, y) for y in b) for x in a)
            and all(any(tol.close(x, y) for y in a) for x in b))


# The para-Krawtchouk pair: W on {0..N} against X(s) = 2s on a two-coset grid.

def para_krawtchouk_W(gamma: float) -> Callable[[complex], complex]:
    def W(s):
        n = int(round(complex(s).real))
        return n + 0.5 * (gamma - 1) * (1 - (-1) ** n)
    return W


def para_krawtchouk_grid(N: int, gamma: float) -> tuple[HalfStepSet, int, int]:
    """Grid {0, g/2, 1, g/2+1, ..., (N-1)/2, g/2+(N-1)/2} with its k-range.

    Returned as (grid, k_min, k_max) with step h = 2, so half-steps are 1.
    """
    if N % 2 == 0:
        raise ValueError("N must be odd")
    grid = HalfStepSet(2.0, (0.0, gamma / 2), window=max(1, (N - 1) // 2))
    return grid, 0, (N - 1) // 2
