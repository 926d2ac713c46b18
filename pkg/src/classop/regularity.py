"""Regularity criteria and recurrence coefficients for classical functionals.

Given a map and a pair (phi, psi) with D(phi u) = S(psi u), the functions here
compute the certificates d_j and phi^[n](critical point), refuse when one of
them vanishes, and otherwise return the monic three-term recurrence
P_{n+1} = (x - B_n) P_n - C_n P_{n-1} together with the norms h_n.

The scalar cores only use + - * / and integer powers, so they also run on
mpmath numbers; the q -> 1 degeneration uses that to avoid the catastrophic
cancellation of its 1/eps^4 sized intermediates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import errors
from .functionals import moments_from_recurrence
from .maps import MapModel, Regime, qexp_model
from .poly import DEFAULT_TOL, Poly, Tolerance, poly_roots, scalar_to_json, scalar_from_json

WARN_FACTOR = 10.0


@dataclass(frozen=True)
class ClassicalData:
    phi: Poly
    psi: Poly
    model: MapModel
    key: complex | None = None

    def __post_init__(self):
        if self.phi.degree > 2 or self.psi.degree > 1:
            raise ValueError("need deg phi <= 2 and deg psi <= 1")
        if self.phi.is_zero() and self.psi.is_zero():
            raise ValueError("phi and psi cannot both vanish")

    @property
    def coeff_scale(self) -> float:
        return max(self.phi.max_abs(), self.psi.max_abs(), 1.0)


@dataclass(frozen=True)
class RecurrenceTable:
    """Monic recurrence data.

    ``C[0]`` is a placeholder (the C_0 P_{-1} term is void) so that ``C[n]``
    is C_n.  In a finite table ``terminal`` marks the last C as the terminal
    norm coefficient, which is never used to build a further polynomial.
    """

    B: tuple[complex, ...]
    C: tuple[complex, ...]
    h: tuple[complex, ...]
    d: tuple[complex, ...] = ()
    phi_crit: tuple[complex, ...] = ()
    terminal: bool = False
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("B", "C", "h", "d", "phi_crit"):
            object.__setattr__(self, name, tuple(complex(v) for v in getattr(self, name)))

    @classmethod
    def from_coefficients(cls, B, C, h0: complex = 1, terminal: bool = False) -> "RecurrenceTable":
        """Table from B_0.. and C_0.. (C_0 ignored) with h_n = C_n h_{n-1}."""
        C = [0j] + [complex(c) for c in list(C)[1:]]
        h = [complex(h0)]
        for c in C[1:]:
            h.append(h[-1] * c)
        return cls(tuple(B), tuple(C), tuple(h), terminal=terminal)

    def ops_count(self) -> int:
        """Highest n for which P_n is generated (P_0..P_n)."""
        return min(len(self.B), len(self.C))

    def to_json(self) -> dict:
        js = lambda seq: [scalar_to_json(v) for v in seq]
        return {"B": js(self.B), "C": js(self.C), "h": js(self.h),
                "diagnostics": {"d": js(self.d), "phi_crit": js(self.phi_crit),
                                "warnings": list(self.warnings)},
                "terminal": self.terminal}

    @classmethod
    def from_json(cls, obj: dict) -> "RecurrenceTable":
        get = lambda seq: tuple(scalar_from_json(v) for v in seq)
        diag = obj.get("diagnostics", {})
        return cls(get(obj["B"]), get(obj["C"]), get(obj["h"]), get(diag.get("d", [])),
                   get(diag.get("phi_crit", [])), bool(obj.get("terminal", False)),
                   tuple(diag.get("warnings", [])))


@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple[complex, ...]
    weights: tuple[complex, ...]
    exactness_residual: float = 0.0
    N: int = 0

    def apply(self, p: Poly) -> complex:
        return complex(sum(w * p(x) for x, w in zip(self.nodes, self.weights)))

    def to_json(self) -> dict:
        return {"nodes": [scalar_to_json(z) for z in self.nodes],
                "weights": [scalar_to_json(z) for z in self.weights],
                "exactness_residual": self.exactness_residual}


# index bookkeeping --------------------------------------------------------

def _index_sets(count: int | None, N: int | None) -> tuple[int, int]:
    """Return (number of B values, largest C index)."""
    if (count is None) == (N is None):
        raise ValueError("give exactly one of count (infinite case) or N (finite case)")
    if N is not None:
        if N < 0:
            raise ValueError("N must be >= 0")
        return N + 1, N + 1
    if count < 1:
        raise ValueError("count must be >= 1")
    return count, count - 1


@dataclass
class _Core:
    """Regime-specific scalar formulas; each returns (value, term magnitude)."""

    d: callable
    e: callable
    phin: callable
    crit: callable
    B0: callable
    Bn: callable
    Cn1: callable


def _qexp_core(phi2, phi1, phi0, psi1, psi0, qh, ab, c) -> _Core:
    qi = 1 / qh

    def gam(n):
        return (qh ** n - qi ** n) / (qh - qi)

    def al(n):
        return (qh ** n + qi ** n) / 2

    alpha = al(1)
    a2m1 = alpha * alpha - 1
    dphi_c = 2 * phi2 * c + phi1
    phi_c = (phi2 * c + phi1) * c + phi0
    psi_c = psi1 * c + psi0

    def d(n):
        return phi2 * gam(n) + psi1 * al(n), abs(phi2 * gam(n)) + abs(psi1 * al(n))

    def e(n):
        return dphi_c * gam(n) + psi_c * al(n)

    def phin(n, x):
        k2 = psi1 * a2m1 * gam(2 * n) + phi2 * al(2 * n)
        k1 = dphi_c * al(n) + psi_c * a2m1 * gam(n)
        y = x - c
        terms = (k2 * (y * y - 2 * ab), k1 * y, phi_c, 2 * phi2 * ab)
        mag = abs(k2) * (abs(y) ** 2 + 2 * abs(ab)) + abs(k1 * y) + abs(phi_c) + abs(2 * phi2 * ab)
        return sum(terms), mag

    def crit(n):
        return c - e(n) / d(2 * n)[0]

    def B0():
        return c - gam(1) * e(0) / d(0)[0]

    def Bn(n):
        return c + gam(n) * e(n - 1) / d(2 * n - 2)[0] - gam(n + 1) * e(n) / d(2 * n)[0]

    def Cn1(n, phin_val):
        dm1 = d(n - 1)[0] if n >= 1 else d(1)[0]  # n = 0: d_{-1} cancels
        lead = -gam(n + 1) * dm1 / (d(2 * n - 1)[0] * d(2 * n + 1)[0]) if n >= 1 else -gam(1) / d(1)[0]
        return lead * phin_val

    return _Core(d, e, phin, crit, B0, Bn, Cn1)


def _quadratic_core(phi2, phi1, phi0, psi1, psi0, a, disc) -> _Core:
    def phi(x):
        return (phi2 * x + phi1) * x + phi0

    def psi(x):
        return psi1 * x + psi0

    def d(n):
        return phi2 * n + psi1, abs(phi2 * n) + abs(psi1)

    def e(n):
        return phi1 * n + psi0 + a * psi1 * n * n / 2

    def phin(n, x):
        dn = d(n)[0]
        k1 = phi1 + 3 * a * n * dn / 2
        x0 = a * n * n / 4
        const = phi(x0) + a * n * psi(x0) / 2 + n * disc * dn / 4
        mag = abs(phi2) * abs(x) ** 2 + abs(k1 * x) + abs(phi(x0)) + abs(a * n * psi(x0) / 2) \
            + abs(n * disc * dn / 4)
        return phi2 * x * x + k1 * x + const, mag

    def crit(n):
        return -a * n * n / 4 - e(n) / d(2 * n)[0]

    def B0():
        return -e(0) / d(0)[0]

    def Bn(n):
        return n * e(n - 1) / d(2 * n - 2)[0] - (n + 1) * e(n) / d(2 * n)[0] - a * n * (n - 1) / 2

    def Cn1(n, phin_val):
        if n == 0:
            return -phin_val / d(1)[0]
        return -(n + 1) * d(n - 1)[0] / (d(2 * n - 1)[0] * d(2 * n + 1)[0]) * phin_val

    return _Core(d, e, phin, crit, B0, Bn, Cn1)


def _run_core(core: _Core, n_b: int, max_c: int, h0, coeff_scale: float,
              tol: Tolerance, to_out=complex, term_scale: bool = True) -> RecurrenceTable:
    warnings: list[str] = []
    j_top = max(2 * (n_b - 1), 2 * max_c - 1)
    d_vals = []
    for j in range(j_top + 1):
        val, mag = core.d(j)
        bound = tol.bound(max(coeff_scale, float(mag)) if term_scale else coeff_scale)
        if abs(val) <= bound:
            raise errors.RegularityViolation(f"d_{j} vanishes", index=j, which="d")
        if abs(val) <= WARN_FACTOR * bound:
            warnings.append(f"d_{j} is within {WARN_FACTOR:g}x of the zero band")
        d_vals.append(val)
    crit_vals = []
    for n in range(max_c):
        val, mag = core.phin(n, core.crit(n))
        bound = tol.bound(max(coeff_scale, float(mag)) if term_scale else coeff_scale)
        if abs(val) <= bound:
            raise errors.RegularityViolation(f"phi^[{n}] vanishes at its critical point",
                                             index=n, which="phi_crit")
        if abs(val) <= WARN_FACTOR * bound:
            warnings.append(f"phi^[{n}](critical) is within {WARN_FACTOR:g}x of the zero band")
        crit_vals.append(val)
    B = [core.B0()] + [core.Bn(n) for n in range(1, n_b)]
    C = [0] + [core.Cn1(n, crit_vals[n]) for n in range(max_c)]
    h = [h0]
    for cval in C[1:]:
        h.append(h[-1] * cval)
    conv = lambda seq: tuple(to_out(v) for v in seq)
    return RecurrenceTable(conv(B), conv(C), conv(h), conv(d_vals), conv(crit_vals),
                           terminal=False, warnings=tuple(warnings))


def _phi_psi(cd: ClassicalData, num=complex):
    return (num(cd.phi.coeff(2)), num(cd.phi.coeff(1)), num(cd.phi.coeff(0)),
            num(cd.psi.coeff(1)), num(cd.psi.coeff(0)))


def _root_of_unity_order(q: complex, up_to: int, tol: Tolerance) -> int | None:
    if abs(abs(q) - 1) > 1e-12:
        return None
    for m in range(1, up_to + 1):
        if abs(q ** m - 1) <= tol.bound(1.0):
            return m
    return None


def qexp_coefficients(cd: ClassicalData, count: int | None = None, N: int | None = None,
                      h0: complex = 1, tol: Tolerance = DEFAULT_TOL) -> RecurrenceTable:
    """q-exponential table; ``count`` B values (infinite case) or the finite case N."""
    m = cd.model
    if m.regime is not Regime.QEXP:
        raise errors.RegimeUnsupported("qexp_coefficients needs a q-exponential map")
    n_b, max_c = _index_sets(count, N)
    order = _root_of_unity_order(m.q, 2 * max(n_b, max_c) + 2, tol)
    if order is not None:
        raise errors.RegimeUnsupported(
            f"q is a root of unity of order {order}; use torsion_coefficients")
    prog = m.progression(cd.key)
    core = _qexp_core(*_phi_psi(cd), m.q_half, prog.a * prog.b, prog.c)
    table = _run_core(core, n_b, max_c, h0, cd.coeff_scale, tol)
    return replace(table, terminal=N is not None)


def quadratic_coefficients(cd: ClassicalData, count: int | None = None, N: int | None = None,
                           h0: complex = 1, tol: Tolerance = DEFAULT_TOL) -> RecurrenceTable:
    m = cd.model
    if m.regime is not Regime.QUADRATIC:
        raise errors.RegimeUnsupported("quadratic_coefficients needs a quadratic map")
    n_b, max_c = _index_sets(count, N)
    prog = m.progression(cd.key)
    core = _quadratic_core(*_phi_psi(cd), prog.a, prog.b * prog.b - 4 * prog.a * prog.c)
    table = _run_core(core, n_b, max_c, h0, cd.coeff_scale, tol)
    return replace(table, terminal=N is not None)


def torsion_coefficients(cd: ClassicalData, N: int, nu: int, h0: complex = 1,
                         tol: Tolerance = DEFAULT_TOL) -> RecurrenceTable:
    """Finite table for q a primitive nu-th root of unity, N + 1 < nu."""
    m = cd.model
    if m.regime is not Regime.QEXP:
        raise errors.RegimeUnsupported("torsion_coefficients needs a q-exponential map")
    if nu < 3:
        raise ValueError("nu must be >= 3")
    if _root_of_unity_order(m.q, nu, tol) != nu:
        raise ValueError(f"q is not a primitive {nu}-th root of unity")
    if N + 1 >= nu:
        raise errors.TorsionOverflow(f"N + 1 = {N + 1} must stay below nu = {nu}", index=N + 1)
    from .operators import alpha_n, gamma_n

    if tol.is_zero(alpha_n(m.q_half, 1)):
        raise errors.RegularityViolation("alpha vanishes", index=1, which="alpha")
    for k in range(1, N + 2):
        if tol.is_zero(gamma_n(m.q_half, k)):
            raise errors.RegularityViolation(f"gamma_{k} vanishes", index=k, which="gamma")
    prog = m.progression(cd.key)
    core = _qexp_core(*_phi_psi(cd), m.q_half, prog.a * prog.b, prog.c)
    n_b, max_c = _index_sets(None, N)
    return replace(_run_core(core, n_b, max_c, h0, cd.coeff_scale, tol), terminal=True)


def classical_table(cd: ClassicalData, count: int | None = None, N: int | None = None,
                    h0: complex = 1, tol: Tolerance = DEFAULT_TOL) -> RecurrenceTable:
    """Dispatch on the map's regime."""
    if cd.model.regime is Regime.QUADRATIC:
        return quadratic_coefficients(cd, count, N, h0, tol)
    if cd.model.regime is Regime.QEXP:
        order = _root_of_unity_order(cd.model.q, 64, tol)
        if order is not None and N is not None:
            return torsion_coefficients(cd, N, order, h0, tol)
        return qexp_coefficients(cd, count, N, h0, tol)
    raise errors.RegimeUnsupported(f"no recurrence engine for the {cd.model.regime.value} regime")


# polynomials and quadrature -------------------------------------------------

def generate_ops(table: RecurrenceTable, count: int) -> list[Poly]:
    """Monic P_0..P_count from the recurrence."""
    if count > table.ops_count() or count < 0:
        raise errors.InsufficientTable(f"table generates P_0..P_{table.ops_count()} only")
    x = Poly.x()
    out = [Poly([1])]
    prev = Poly()
    for n in range(count):
        nxt = (x - table.B[n]) * out[-1] - (table.C[n] * prev if n else Poly())
        prev = out[-1]
        out.append(nxt)
    return out


def christoffel_quadrature(table: RecurrenceTable, N: int,
                           tol: Tolerance = DEFAULT_TOL) -> QuadratureRule:
    """Nodes = zeros of P_{N+1}, weights h_N / (P_N(x_s) P'_{N+1}(x_s))."""
    P = generate_ops(table, N + 1)
    nodes = poly_roots(P[N + 1]) if N >= 0 else []
    scale = max([1.0] + [abs(z) for z in nodes])
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if abs(nodes[i] - nodes[j]) <= 1e-7 * scale:
                raise errors.MultipleZero(f"P_{N + 1} has a repeated zero near {nodes[i]}",
                                          index=N + 1)
    nodes = sorted(nodes, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    dP = P[N + 1].derivative()
    hN = table.h[N]
    weights = [hN / (P[N](z) * dP(z)) for z in nodes]
    mu = moments_from_recurrence(table, table.h[0], count=2 * N + 1)
    resid = 0.0
    for k in range(2 * N + 2):
        approx = sum(w * z ** k for z, w in zip(nodes, weights))
        resid = max(resid, abs(approx - mu.moments[k]) / max(1.0, abs(mu.moments[k])))
    return QuadratureRule(tuple(nodes), tuple(weights), resid, N)


# q -> 1 degeneration ---------------------------------------------------------

def degeneration_model(quadratic: MapModel, eps: float, key: complex | None = None) -> MapModel:
    """q-exponential surrogate with q = e^eps approaching a quadratic map."""
    p = quadratic.progression(key)
    a, b, c = p.a, p.b, p.c
    return qexp_model(cmath.exp(eps), a / eps ** 2 + b / (2 * eps), a / eps ** 2 - b / (2 * eps),
                      c - 2 * a / eps ** 2, h=quadratic.h, q_half=cmath.exp(eps / 2))


def q_to_1_degeneration(cd: ClassicalData, eps: float, count: int | None = None,
                        N: int | None = None, dps: int | None = 50,
                        tol: Tolerance = DEFAULT_TOL) -> RecurrenceTable:
    """q-exponential table of the degenerating surrogate of a quadratic problem.

    The surrogate's parameters grow like 1/eps^2, so the table is evaluated in
    ``dps``-digit arithmetic (mpmath) and rounded at the end; ``dps=None`` uses
    plain double precision.
    """
    if cd.model.regime is not Regime.QUADRATIC:
        raise errors.RegimeUnsupported("degeneration starts from quadratic data")
    n_b, max_c = _index_sets(count, N)
    p = cd.model.progression(cd.key)
    if dps is None:
        num = complex
        qh = cmath.exp(eps / 2)
    else:
        import mpmath

        ctx = mpmath.mp.clone()
        ctx.dps = dps
        num = ctx.mpc
        qh = ctx.exp(ctx.mpf(eps) / 2)
        eps = ctx.mpf(eps)
    a, b, c = num(p.a), num(p.b), num(p.c)
    a_e = a / eps ** 2 + b / (2 * eps)
    b_e = a / eps ** 2 - b / (2 * eps)
    c_e = c - 2 * a / eps ** 2
    core = _qexp_core(*_phi_psi(cd, num), qh, a_e * b_e, c_e)
    # with extended precision the cancellation is exact, so only the coefficient scale counts
    table = _run_core(core, n_b, max_c, num(1), cd.coeff_scale, tol, to_out=complex,
                      term_scale=dps is None)
    return replace(table, terminal=N is not None)


# compatibility between progressions -----------------------------------------

def compatibility_check(cd1: ClassicalData, cd2: ClassicalData,
                        tol: Tolerance = DEFAULT_TOL) -> dict:
    """Compare the per-progression invariant and C_2 of two parameter sets.

    The invariant is a*b (q-exponential) or b^2 - 4ac (quadratic).  C_2 is affine
    in it, with slope 4 gamma_2 d_0 (alpha^2 - 1) / d_3, resp. -d_0 / (2 d_3), so
    the report also predicts the C_2 gap from the invariant gap.
    """
    m = cd1.model
    if m.regime is Regime.QEXP:
        inv = [cd.model.progression(cd.key).a * cd.model.progression(cd.key).b for cd in (cd1, cd2)]
    elif m.regime is Regime.QUADRATIC:
        inv = []
        for cd in (cd1, cd2):
            p = cd.model.progression(cd.key)
            inv.append(p.b * p.b - 4 * p.a * p.c)
    else:
        raise errors.RegimeUnsupported("compatibility is defined for quadratic and q-exponential maps")
    t1 = classical_table(cd1, count=3, tol=tol)
    t2 = classical_table(cd2, count=3, tol=tol)
    if m.regime is Regime.QEXP:
        from .operators import alpha_n, gamma_n

        al = alpha_n(m.q_half, 1)
        slope = 4 * gamma_n(m.q_half, 2) * t1.d[0] * (al * al - 1) / t1.d[3]
    else:
        slope = -t1.d[0] / (2 * t1.d[3])
    gap = t1.C[2] - t2.C[2]
    compatible = tol.close(inv[0], inv[1])
    return {"compatible": bool(compatible), "invariant": inv, "C2": [t1.C[2], t2.C[2]],
            "C2_gap": gap, "predicted_gap": slope * (inv[0] - inv[1])}


def transformed_pair(cd: ClassicalData, n: int) -> tuple[Poly, Poly]:
    """(phi^[n], psi^[n]) as polynomials (q-exponential maps)."""
    m = cd.model
    if m.regime is not Regime.QEXP:
        raise errors.RegimeUnsupported("transformed pair is defined for q-exponential maps")
    prog = m.progression(cd.key)
    core = _qexp_core(*_phi_psi(cd), m.q_half, prog.a * prog.b, prog.c)
    # phi^[n] has degree <= 2: interpolate through three points
    xs = [prog.c + k for k in (-1.0, 0.0, 1.0)]
    ys = [core.phin(n, x)[0] for x in xs]
    V = np.array([[1, x, x * x] for x in xs], dtype=complex)
    phi_n = Poly(np.linalg.solve(V, np.array(ys, dtype=complex)))
    psi_n = Poly([core.e(n) - core.d(2 * n)[0] * prog.c, core.d(2 * n)[0]])
    return phi_n, psi_n
