"""Quadratic substitution, the alternating splitting p = a(x^2) + (x - tau) b(x^2),
and the reconstruction of a full OPS from a base family and tau."""

from __future__ import annotations

from dataclasses import dataclass

from . import errors
from .functionals import MomentFunctional, pair, pair_scale
from .poly import DEFAULT_TOL, Poly, Tolerance


@dataclass(frozen=True)
class AlternatingBuild:
    tau: complex
    R: tuple[Poly, ...]
    S: tuple[Poly, ...]
    P: tuple[Poly, ...]
    critical: tuple[complex, ...]
    terminal: bool = False

    def to_json(self) -> dict:
        from .poly import scalar_to_json

        return {"tau": scalar_to_json(self.tau),
                "R": [p.to_json()["coeffs"] for p in self.R],
                "S": [p.to_json()["coeffs"] for p in self.S],
                "P": [p.to_json()["coeffs"] for p in self.P],
                "critical": [scalar_to_json(v) for v in self.critical],
                "terminal": self.terminal}


def sigma_transpose(u: MomentFunctional) -> MomentFunctional:
    """<sigma u, t^k> = <u, x^(2k)>."""
    return MomentFunctional(u.moments[::2])


def j_tau_split(p: Poly, tau: complex) -> tuple[Poly, Poly]:
    even, odd = p.even_odd()
    return even + odd * tau, odd


def j_tau_pullback(v: MomentFunctional, tau: complex) -> MomentFunctional:
    """Moments of u with <u, p> = <v, a> where p = a(x^2) + (x - tau) b(x^2)."""
    out = []
    for nu in v.moments:
        out.extend((nu, tau * nu))
    return MomentFunctional(tuple(out))


def build_alternating_ops(R, tau: complex, terminal: bool = False,
                          tol: Tolerance = DEFAULT_TOL) -> AlternatingBuild:
    """P_{2n} = R_n(x^2), P_{2n+1} = (x - tau) S_n(x^2) from monic R_0..R_K.

    Produces P_0..P_{2K-1}; with ``terminal`` also P_{2K} = R_K(x^2).
    """
    R = [p if isinstance(p, Poly) else Poly(p) for p in R]
    if len(R) < 2:
        raise errors.InsufficientTable("need at least R_0 and R_1")
    for n, r in enumerate(R):
        if r.degree != n or not tol.close(r.lead, 1):
            raise errors.NotMonic(f"R_{n} must be monic of degree {n}", index=n)
    tau = complex(tau)
    t0 = tau * tau
    crit = []
    for n in range(len(R) - 1):
        val = R[n](t0)
        if tol.is_zero(val, max(R[n].abs_eval(t0), 1.0)):
            raise errors.CriticalZero(f"R_{n}(tau^2) vanishes", index=n)
        crit.append(val)
    lin = Poly([-t0, 1])
    S = []
    for n in range(len(R) - 1):
        num = R[n + 1] - R[n] * (R[n + 1](t0) / crit[n])
        quo, rem = num.divrem(lin)
        if not rem.is_zero() and not tol.is_zero(rem.coeff(0), max(num.abs_eval(t0), 1.0)):
            raise errors.NonzeroRemainder(f"division of S_{n} leaves {rem.coeff(0)}", index=n)
        S.append(quo)
    x_tau = Poly([-tau, 1])
    P = []
    for n in range(len(S)):
        P.append(R[n].subs_square())
        P.append(x_tau * S[n].subs_square())
    if terminal:
        P.append(R[-1].subs_square())
    return AlternatingBuild(tau, tuple(R), tuple(S), tuple(P), tuple(crit), terminal)


def alternating_structural_check(u: MomentFunctional, phi: Poly, psi: Poly, up_to: int) -> dict:
    """Residuals <u, phi(x) x^(2k)> and <u, psi(x) x^(2k)> for k <= up_to, with term scales."""
    if phi.degree > 2 or psi.degree > 1:
        raise ValueError("need deg phi <= 2 and deg psi <= 1")
    if phi.is_zero() and psi.is_zero():
        raise ValueError("phi and psi cannot both vanish")
    report = {"phi": [], "psi": [], "phi_scale": [], "psi_scale": []}
    for k in range(up_to + 1):
        mono = Poly.monomial(2 * k)
        for name, w in (("phi", phi), ("psi", psi)):
            p = w * mono
            report[name].append(pair(u, p))
            report[name + "_scale"].append(pair_scale(u, p))
    return report
