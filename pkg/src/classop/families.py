"""Named families: Askey-Wilson (including the root-of-unity truncation),
complementary Bannai-Ito, even-N dual (-1)-Hahn, shifted Jacobi and Laguerre."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from . import errors
from .alternating import AlternatingBuild, build_alternating_ops, j_tau_split
from .functionals import MomentFunctional
from .maps import MapModel, qexp_model
from .poly import DEFAULT_TOL, Poly, Tolerance, pochhammer, scalar_to_json, terminating_hypergeometric
from .regularity import ClassicalData, RecurrenceTable, generate_ops

FAMILIES = ("askey_wilson", "cbi", "dual_m1_hahn_even", "jacobi_shifted", "laguerre")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}; expected one of {FAMILIES}")

    @classmethod
    def from_json(cls, obj: dict) -> "FamilySpec":
        from .poly import scalar_from_json

        params = {}
        for k, v in obj.get("params", {}).items():
            params[k] = scalar_from_json(v) if isinstance(v, list) else v
        return cls(obj["family"] if "family" in obj else obj["name"], params)


# Askey-Wilson -------------------------------------------------------------

@dataclass(frozen=True)
class AWParams:
    """X(s0 + kh) = A q^-k + B q^k + C with weight parameters a, b, c, d."""

    a: complex
    b: complex
    c: complex
    d: complex
    q: complex
    A: complex = 1
    B: complex = 1
    C: complex = 0
    q_half: complex | None = None
    sqrt_AB: complex | None = None

    @property
    def g(self) -> complex:
        return self.a * self.b * self.c * self.d

    @property
    def qh(self) -> complex:
        return cmath.sqrt(self.q) if self.q_half is None else complex(self.q_half)

    @property
    def s(self) -> complex:
        return cmath.sqrt(self.A * self.B) if self.sqrt_AB is None else complex(self.sqrt_AB)

    def pairs(self) -> list[complex]:
        a, b, c, d = self.a, self.b, self.c, self.d
        return [a * b, a * c, a * d, b * c, b * d, c * d]

    @classmethod
    def from_params(cls, p: dict) -> "AWParams":
        keys = ("a", "b", "c", "d", "q", "A", "B", "C", "q_half", "sqrt_AB")
        return cls(**{k: complex(p[k]) for k in keys if k in p and p[k] is not None})


def aw_model(p: AWParams) -> MapModel:
    # engine closed form a q^t + b q^-t + c
    return qexp_model(p.q, p.B, p.A, p.C, q_half=p.qh)


def aw_classical(p: AWParams) -> ClassicalData:
    a, b, c, d, g, s = p.a, p.b, p.c, p.d, p.g, p.s
    e1 = a + b + c + d
    e3 = a * b * c + a * b * d + a * c * d + b * c * d
    e2 = sum(p.pairs())
    y = Poly([-p.C, 1])
    phi = y * y * (2 * (1 + g)) - y * (2 * s * (e1 + e3)) + 4 * p.A * p.B * (e2 - g - 1)
    psi = (y * (g - 1) + s * (e1 - e3)) * (4 * p.qh / (p.q - 1))
    return ClassicalData(phi, psi, aw_model(p))


def _aw_check(p: AWParams, count: int, tol: Tolerance) -> None:
    if tol.is_zero(p.A * p.B):
        raise errors.GenericityViolation("AB must be non-zero")
    for k in range(-1, 2 * count + 2):
        if tol.is_zero(1 - p.g * p.q ** k):
            raise errors.GenericityViolation(f"g = q^{-k}", index=k, which="g")
    for k in range(count + 1):
        for xy in p.pairs():
            if tol.is_zero(1 - xy * p.q ** k):
                raise errors.GenericityViolation(f"a pair product equals q^{-k}", index=k,
                                                 which="pair")


def aw_C(p: AWParams, n1: int) -> complex:
    """C_{n1}, n1 >= 1, from the six-factor product."""
    n = n1 - 1
    q, g = p.q, p.g
    num = p.A * p.B * (1 - q ** (n + 1))
    for xy in p.pairs():
        num *= 1 - xy * q ** n
    den = (1 - g * q ** (2 * n)) ** 2 * (1 - g * q ** (2 * n + 1))
    if n == 0:
        return num / den  # (1 - g q^{-1}) cancels
    return num * (1 - g * q ** (n - 1)) / (den * (1 - g * q ** (2 * n - 1)))


def aw_B(p: AWParams, n: int) -> complex:
    # B_n is symmetric in (a, b, c, d); lead with the largest one so 1/a is safe
    a, b, c, d = sorted((p.a, p.b, p.c, p.d), key=abs, reverse=True)
    if a == 0:
        return complex(p.C)
    q, g = p.q, p.g
    if n == 0:
        An = (1 - a * b) * (1 - a * c) * (1 - a * d) / (a * (1 - g))
        Cn = 0
    else:
        An = ((1 - a * b * q ** n) * (1 - a * c * q ** n) * (1 - a * d * q ** n) * (1 - g * q ** (n - 1))
              / (a * (1 - g * q ** (2 * n - 1)) * (1 - g * q ** (2 * n))))
        Cn = (a * (1 - q ** n) * (1 - b * c * q ** (n - 1)) * (1 - b * d * q ** (n - 1))
              * (1 - c * d * q ** (n - 1)) / ((1 - g * q ** (2 * n - 1)) * (1 - g * q ** (2 * n - 2))))
    return p.C + p.s * (a + 1 / a - An - Cn)


def askey_wilson_table(p: AWParams, count: int, h0: complex = 1,
                       tol: Tolerance = DEFAULT_TOL) -> RecurrenceTable:
    """B_0..B_{count-1} and C_1..C_count (C_count is included for the truncation check)."""
    _aw_check(p, count, tol)
    B = [aw_B(p, n) for n in range(count)]
    C = [0j] + [aw_C(p, n) for n in range(1, count + 1)]
    return RecurrenceTable.from_coefficients(B, C, h0)


@dataclass(frozen=True)
class AWTruncation:
    nu: int
    E: complex
    r: complex
    nodes: tuple[complex, ...]
    weights: tuple[complex, ...]
    weights_christoffel: tuple[complex, ...]
    table: RecurrenceTable
    P_nu: Poly

    def to_json(self) -> dict:
        js = lambda seq: [scalar_to_json(z) for z in seq]
        return {"nu": self.nu, "E": scalar_to_json(self.E), "r": scalar_to_json(self.r),
                "nodes": js(self.nodes), "weights": js(self.weights),
                "weights_christoffel": js(self.weights_christoffel),
                "C_nu": scalar_to_json(self.table.C[self.nu])}


def aw_E(p: AWParams, nu: int) -> complex:
    a, b, c, d, g = p.a, p.b, p.c, p.d, p.g
    num = a ** nu + b ** nu + c ** nu + d ** nu
    num -= (a * b * c) ** nu + (a * b * d) ** nu + (a * c * d) ** nu + (b * c * d) ** nu
    return num / (1 - g ** nu)


def aw_P_nu_closed(p: AWParams, nu: int, t: complex) -> tuple[complex, complex]:
    """(x, P_nu(x)) at x = C + sqrt(AB)(t + 1/t)."""
    return p.C + p.s * (t + 1 / t), p.s ** nu * (t ** nu + t ** -nu - aw_E(p, nu))


def askey_wilson_truncation(p: AWParams, nu: int, mu0: complex = 1,
                            tol: Tolerance = DEFAULT_TOL) -> AWTruncation:
    """Nodes and weights of the finite orthogonality at a primitive nu-th root of unity q."""
    from .regularity import _root_of_unity_order

    if _root_of_unity_order(p.q, nu, tol) != nu:
        raise ValueError(f"q is not a primitive {nu}-th root of unity")
    for z in (p.a, p.b, p.c, p.d):
        if tol.is_zero(z):
            raise errors.GenericityViolation("a, b, c, d must be non-zero")
    table = askey_wilson_table(p, nu, mu0, tol)
    E = aw_E(p, nu)
    if tol.close(E, 2) or tol.close(E, -2):
        raise errors.DoubleZeroLocus(f"E_nu = {E} gives a double zero")
    r = (E / 2 + cmath.sqrt(E * E / 4 - 1)) ** (1 / nu)
    q, g, s = p.q, p.g, p.s
    nodes = [p.C + s * (r * q ** k + 1 / (r * q ** k)) for k in range(nu)]
    # ratio recursion, seeded by the total mass
    raw = [1 + 0j]
    for k in range(nu - 1):
        ratio = q / g * (1 - r * r * q ** (2 * k + 2)) / (1 - r * r * q ** (2 * k))
        for z in (p.a, p.b, p.c, p.d):
            ratio *= (1 - z * r * q ** k) / (1 - r * q ** (k + 1) / z)
        raw.append(raw[-1] * ratio)
    total = sum(raw)
    weights = [mu0 * w / total for w in raw]
    P = generate_ops(table, nu)
    christoffel = []
    for k, xi in enumerate(nodes):
        t = r * q ** k
        dP = nu * s ** (nu - 1) * (r ** nu - r ** -nu) / (t - 1 / t)
        christoffel.append(table.h[nu - 1] / (P[nu - 1](xi) * dP))
    return AWTruncation(nu, E, r, tuple(nodes), tuple(weights), tuple(christoffel), table, P[nu])


def aw_weight_closed_form(p: AWParams, r: complex, k: int) -> complex:
    """lambda_k / lambda_0 through the q-Pochhammer products."""
    q, g = p.q, p.g
    num = (q / g) ** k * (1 - r * r * q ** (2 * k))
    den = 1 - r * r
    for z in (p.a, p.b, p.c, p.d):
        for j in range(k):
            num *= 1 - z * r * q ** j
            den *= 1 - q * r / z * q ** j
    return num / den


# complementary Bannai-Ito --------------------------------------------------

@dataclass(frozen=True)
class CBIParams:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    @property
    def g(self) -> complex:
        return self.alpha + self.beta - self.gamma - self.delta


def cbi_a(p: CBIParams, n: int, tol: Tolerance = DEFAULT_TOL) -> complex:
    g = p.g
    den = (2 * n + g + 1) * (2 * n + g + 2)
    if tol.is_zero(den):
        raise errors.DenominatorZero(f"a_{n} has a zero denominator", index=n, which="a")
    return ((n + g + 1) * (n + p.alpha + p.beta + 1) * (n + p.beta - p.gamma + 0.5)
            * (n + p.beta - p.delta + 0.5) / den)


def cbi_c(p: CBIParams, n: int, tol: Tolerance = DEFAULT_TOL) -> complex:
    if n == 0:
        return 0j
    g = p.g
    den = (2 * n + g) * (2 * n + g + 1)
    if tol.is_zero(den):
        raise errors.DenominatorZero(f"c_{n} has a zero denominator", index=n, which="c")
    return -(n * (n - p.gamma - p.delta) * (n + p.alpha - p.gamma + 0.5)
             * (n + p.alpha - p.delta + 0.5) / den)


def cbi_base_table(p: CBIParams, count: int, tol: Tolerance = DEFAULT_TOL) -> RecurrenceTable:
    """Base recurrence: diagonal beta^2 - a_n + c_n, C_n = -a_{n-1} c_n."""
    a = [cbi_a(p, n, tol) for n in range(count)]
    c = [cbi_c(p, n, tol) for n in range(count)]
    B = [p.beta ** 2 - a[n] + c[n] for n in range(count)]
    C = [0j] + [-a[n - 1] * c[n] for n in range(1, count)]
    return RecurrenceTable.from_coefficients(B, C)


def cbi_interlaced_table(p: CBIParams, count: int, tol: Tolerance = DEFAULT_TOL) -> RecurrenceTable:
    """B_n = (-1)^n beta, C_n = tau_n with tau_{2n} = c_n, tau_{2n+1} = -a_n."""
    B = [(-1) ** n * p.beta for n in range(count)]
    C = [0j]
    for n in range(1, count):
        m, odd = divmod(n, 2)
        C.append(-cbi_a(p, m, tol) if odd else cbi_c(p, m, tol))
    return RecurrenceTable.from_coefficients(B, C)


@dataclass(frozen=True)
class CBIResult:
    base: RecurrenceTable
    build: AlternatingBuild
    interlaced: RecurrenceTable


def cbi_base_and_interlaced(p: CBIParams, N: int, tol: Tolerance = DEFAULT_TOL) -> CBIResult:
    """R_0..R_{N+1} from the base recurrence, P_0..P_{2N+1} through tau = beta."""
    base = cbi_base_table(p, N + 1, tol)
    R = generate_ops(base, N + 1)
    build = build_alternating_ops(R, p.beta, tol=tol)
    return CBIResult(base, build, cbi_interlaced_table(p, 2 * N + 2, tol))


# dual (-1)-Hahn, even N -----------------------------------------------------

@dataclass(frozen=True)
class DualHahnResult:
    N: int
    tau: complex
    u: tuple[complex, ...]
    b: tuple[complex, ...]
    R: tuple[Poly, ...]
    R_hat: tuple[Poly, ...]
    P: tuple[Poly, ...]
    Q: tuple[Poly, ...]
    split_residual: float  # relative to the coefficients involved
    christoffel_remainders: tuple[float, ...]  # |remainder| / sum of term magnitudes at tau^2


def dual_m1_hahn_u(alpha: complex, beta: complex, N: int, n: int) -> complex:
    if n % 2 == 0:
        return 4 * n * (alpha - n)
    return 4 * (N - n + 1) * (n + beta - N - 1)


def dual_m1_hahn_b(alpha: complex, beta: complex, N: int, n: int) -> complex:
    return 2 * N + 1 - alpha - beta if n % 2 == 0 else -2 * N - 3 + alpha + beta


def dual_m1_hahn_even(alpha: complex, beta: complex, N: int) -> DualHahnResult:
    if N % 2:
        raise errors.OddN(f"N = {N} is odd; only the even case is supported", index=N)
    if N < 2:
        raise ValueError("N must be >= 2")
    M = N // 2
    tau = 2 * N + 2 - alpha - beta
    u = [dual_m1_hahn_u(alpha, beta, N, n) for n in range(N)]
    b = [dual_m1_hahn_b(alpha, beta, N, n) for n in range(N)]
    R = generate_ops(RecurrenceTable.from_coefficients(b, u), N)
    R_hat = generate_ops(RecurrenceTable.from_coefficients([(-1) ** n * tau for n in range(N)], u), N)
    P, Q, resid = [], [], 0.0
    for n in range(M + 1):
        even, odd = R_hat[2 * n].even_odd()
        resid = max(resid, odd.max_abs() / R_hat[2 * n].max_abs())
        P.append(even)
        if n < M:
            a_part, b_part = j_tau_split(R_hat[2 * n + 1], tau)
            resid = max(resid, a_part.max_abs() / R_hat[2 * n + 1].max_abs())
            Q.append(b_part)
    lin = Poly([-tau * tau, 1])
    rems = []
    for n in range(M):
        num = P[n + 1] + P[n] * u[2 * n + 1]
        quo, rem = num.divrem(lin)
        rems.append(abs(rem.coeff(0)) / max(num.abs_eval(tau * tau), 1.0))
        resid = max(resid, (quo - Q[n]).max_abs() / max(Q[n].max_abs(), 1.0))
    return DualHahnResult(N, tau, tuple(u), tuple(b), tuple(R), tuple(R_hat), tuple(P), tuple(Q),
                          resid, tuple(rems))


# Jacobi and Laguerre --------------------------------------------------------

def _is_positive_integer(z: complex, tol: Tolerance) -> bool:
    z = complex(z)
    k = round(z.real)
    return k >= 1 and tol.close(z, k, 1.0)


def jacobi_shifted(alpha: complex, beta: complex, N: int,
                   tol: Tolerance = DEFAULT_TOL) -> list[Poly]:
    """Monic shifted Jacobi R_0..R_N."""
    for name, z in (("-alpha", -alpha), ("-beta", -beta), ("-(alpha+beta+1)", -(alpha + beta + 1))):
        if _is_positive_integer(z, tol):
            raise errors.ParameterPole(f"{name} is a positive integer", which=name)
    out = []
    for n in range(N + 1):
        F = terminating_hypergeometric([-n, n + alpha + beta + 1], [alpha + 1], n, tol)
        out.append(F * ((-1) ** n * pochhammer(alpha + 1, n) / pochhammer(n + alpha + beta + 1, n)))
    return out


def jacobi_moments(alpha: complex, beta: complex, M: int) -> MomentFunctional:
    """Beta-distribution moments (alpha+1)_k / (alpha+beta+2)_k."""
    return MomentFunctional(tuple(pochhammer(alpha + 1, k) / pochhammer(alpha + beta + 2, k)
                                  for k in range(M + 1)))


def jacobi_alternating_closed_form(alpha: complex, beta: complex, n: int,
                                   tol: Tolerance = DEFAULT_TOL) -> Poly:
    m, eps = divmod(n, 2)
    top = m + alpha + beta + 1 + eps
    F = terminating_hypergeometric([-m, top], [alpha + 1], m, tol).subs_square()
    lead = (-1) ** m * pochhammer(alpha + 1, m) / pochhammer(top, m)
    return F * lead * (Poly([-1, 1]) if eps else Poly([1]))


def laguerre(alpha: complex, N: int, tol: Tolerance = DEFAULT_TOL) -> list[Poly]:
    """Monic Laguerre R_0..R_N."""
    if _is_positive_integer(-alpha, tol):
        raise errors.ParameterPole("-alpha is a positive integer", which="-alpha")
    return [terminating_hypergeometric([-n], [alpha + 1], n, tol) * ((-1) ** n * pochhammer(alpha + 1, n))
            for n in range(N + 1)]


def laguerre_moments(alpha: complex, M: int) -> MomentFunctional:
    return MomentFunctional(tuple(pochhammer(alpha + 1, k) for k in range(M + 1)))


def hermite_alternating_closed_form(n: int, tol: Tolerance = DEFAULT_TOL) -> Poly:
    m, eps = divmod(n, 2)
    F = terminating_hypergeometric([-m], [0.5 + eps], m, tol).subs_square()
    return F * ((-1) ** m * pochhammer(0.5 + eps, m)) * (Poly([0, 1]) if eps else Poly([1]))
