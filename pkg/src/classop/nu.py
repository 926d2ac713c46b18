"""The second-order operator L = phi D^2 + psi S D and its checks."""

from __future__ import annotations

from dataclasses import dataclass

from . import errors
from .functionals import MomentFunctional, pair, pair_scale
from .maps import Regime
from .operators import OperatorPair, leading_action
from .poly import DEFAULT_TOL, Poly, Tolerance
from .regularity import RecurrenceTable, generate_ops


@dataclass(frozen=True)
class NUOperator:
    phi: Poly
    psi: Poly
    ops: OperatorPair


def apply_L(L: NUOperator, p: Poly) -> Poly:
    dp = L.ops.D(p)
    return L.phi * L.ops.D(dp) + L.psi * L.ops.S(dp)


def eigenvalue(L: NUOperator, n: int) -> complex:
    """Coefficient of x^n in L(x^n)."""
    return apply_L(L, Poly.monomial(n)).coeff(n)


def formal_symmetry_residual(L: NUOperator, u: MomentFunctional, up_to: int,
                             with_scale: bool = False):
    """max_{i,j <= up_to} |<u, (L x^i) x^j> - <u, x^i (L x^j)>|."""
    if u.max_degree < 2 * up_to:
        raise errors.DegreeOverflow(f"need moments to degree {2 * up_to}, have {u.max_degree}")
    images = [apply_L(L, Poly.monomial(i)) for i in range(up_to + 1)]
    worst, scale = 0.0, 0.0
    for i in range(up_to + 1):
        for j in range(i + 1, up_to + 1):
            left = images[i] * Poly.monomial(j)
            right = images[j] * Poly.monomial(i)
            worst = max(worst, abs(pair(u, left) - pair(u, right)))
            scale = max(scale, pair_scale(u, left) + pair_scale(u, right))
    return (worst, scale) if with_scale else worst


def eigen_check(L: NUOperator, table: RecurrenceTable, count: int) -> list[tuple[complex, float]]:
    """(lambda_n, ||L P_n - lambda_n P_n||_inf) for n = 0..count."""
    out = []
    for n, p in enumerate(generate_ops(table, count)):
        lam = eigenvalue(L, n)
        out.append((lam, (apply_L(L, p) - p * lam).max_abs()))
    return out


def hahn_derived(table: RecurrenceTable, ops: OperatorPair, k: int, count: int,
                 tol: Tolerance = DEFAULT_TOL) -> list[Poly]:
    """Q_n^[k] = D^k P_{n+k} / prod_{j=1..k} gamma_{n+j} for n = 0..count."""
    P = generate_ops(table, count + k)
    out = []
    for n in range(count + 1):
        kappa = 1 + 0j
        for j in range(1, k + 1):
            g = leading_action(ops, n + j, tol)[0]
            if tol.is_zero(g):
                raise errors.TorsionNormalization(f"gamma_{n + j} vanishes", index=n + j)
            kappa *= g
        q = P[n + k]
        for _ in range(k):
            q = ops.D(q)
        out.append(q / kappa)
    return out


def alternating_nu_check(u: MomentFunctional, tau: complex, up_to: int) -> list[complex]:
    """<u, (x - tau) x^(2k)> for k <= up_to."""
    if u.max_degree < 2 * up_to + 1:
        raise errors.DegreeOverflow(f"need moments to degree {2 * up_to + 1}")
    lin = Poly([-tau, 1])
    return [pair(u, lin * Poly.monomial(2 * k)) for k in range(up_to + 1)]


def expected_eigenvalue(table: RecurrenceTable, ops: OperatorPair, n: int) -> complex:
    """gamma_n d_{n-1}, read from the table's certificate list (lambda_0 = 0)."""
    if n == 0:
        return 0j
    m = ops.model
    if m.regime not in (Regime.QUADRATIC, Regime.QEXP):
        raise errors.RegimeUnsupported("closed-form eigenvalues need a quadratic or q-exp map")
    if n - 1 >= len(table.d):
        raise errors.InsufficientTable(f"table lacks d_{n - 1}")
    return leading_action(ops, n)[0] * table.d[n - 1]
