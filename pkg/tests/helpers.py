"""Random generators and oracles shared by the test modules."""

import cmath

import numpy as np

from classop import errors
from classop.maps import Regime, alternating_model, qexp_model, quadratic_model
from classop.poly import Poly
from classop.regularity import ClassicalData, classical_table


def rand_complex(rng, radius=4.0):
    return complex(*rng.uniform(-radius, radius, 2))


def rand_q(rng, lo=0.3, hi=3.0, gap=0.1):
    while True:
        q = cmath.rect(rng.uniform(lo, hi), rng.uniform(-np.pi, np.pi))
        if abs(abs(q) - 1) >= gap:
            return q


def rand_model(rng, regime):
    z = lambda: rand_complex(rng)
    if regime is Regime.QUADRATIC:
        return quadratic_model(z(), z(), z())
    if regime is Regime.ALTERNATING:
        return alternating_model(z(), z())
    return qexp_model(rand_q(rng), z(), z(), z())


def rand_poly(rng, deg, radius=1.0):
    return Poly(rng.uniform(-radius, radius, deg + 1) + 1j * rng.uniform(-radius, radius, deg + 1))


def regular_tables(rng, regime, trials, count=11, q_range=(0.6, 1.6)):
    """(ClassicalData, table) pairs for random data that passes the engine's diagnostics.

    The q range is kept modest so that moments up to degree 2*count stay representable.
    """
    out = []
    while len(out) < trials:
        if regime is Regime.QEXP:
            m = qexp_model(rand_q(rng, *q_range), rand_complex(rng, 1), rand_complex(rng, 1),
                           rand_complex(rng, 1))
        else:
            m = quadratic_model(rand_complex(rng, 1), rand_complex(rng, 1), rand_complex(rng, 1))
        cd = ClassicalData(rand_poly(rng, 2), rand_poly(rng, 1), m)
        try:
            table = classical_table(cd, count=count)
        except errors.DomainError:
            continue
        if table.warnings:
            continue
        out.append((cd, table))
    return out


def gram_schmidt(moments, n):
    """Monic orthogonal P_0..P_n from raw moments, by solving the Hankel systems."""
    mu = np.asarray(moments, dtype=complex)
    out = [Poly([1])]
    for k in range(1, n + 1):
        H = np.array([[mu[i + j] for j in range(k)] for i in range(k)])
        rhs = -np.array([mu[i + k] for i in range(k)])
        c = np.linalg.solve(H, rhs)
        out.append(Poly(list(c) + [1]))
    return out


def moments_from_structural(phi, psi, ops, M, mu0=1.0):
    """Moments of the functional with D(phi u) = S(psi u), solved degree by degree.

    Pairing with x^k gives <u, phi D(x^k) + psi S(x^k)> = 0, whose top moment
    mu_{k+1} enters with coefficient d_k = phi_2 gamma_k + psi_1 alpha_k.
    """
    mu = [complex(mu0)]
    for k in range(M):
        p = phi * ops.D_mono(k) + psi * ops.S_mono(k)
        lead = p.coeff(k + 1)
        known = sum(p.coeff(j) * mu[j] for j in range(k + 1))
        mu.append(-known / lead)
    return mu


def recurrence_from_moments(mu, n):
    """(B_0..B_{n-1}, C_1..C_{n-1}) of the monic OPS of the moments, by Gram-Schmidt."""
    P = gram_schmidt(mu, n)
    pair = lambda p: sum(c * mu[k] for k, c in enumerate(p.coeffs))
    h = [pair(p * p) for p in P]
    x = Poly.x()
    B = [pair(x * P[k] * P[k]) / h[k] for k in range(n)]
    C = [h[k] / h[k - 1] for k in range(1, n)]
    return B, C
