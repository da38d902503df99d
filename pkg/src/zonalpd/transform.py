"""Coefficient transforms, certification, and the Poisson kernel.

The n-th coefficient of a zonal kernel F on X_{alpha,beta} is

    Fhat(n) = (m_n / P_n(1)^2) * int F(t) P_n(t) dmu(t),

with dmu the probability Jacobi measure.  Two independent integrators
compute the integral:

  * a double-exponential (tanh-sinh) rule in the angle u = kappa*theta,
    which tolerates endpoint singularities of any integrable strength and
    logarithms, and

  * Gauss-Jacobi rules that absorb the algebraic singularity (1-t)^{-sigma}
    into the weight.  Kernels whose envelope is analytic in t use the
    weight (alpha-sigma, beta) directly; kernels built on the geodesic
    angle have a square-root branch at t=-1, so they are integrated in the
    angle variable against the weight that the substitution induces there.

Certification runs both, folds the cross-method discrepancy into the error
bound, and escalates precision until every requested sign is decided or a
cap is reached.  Everything runs in mpmath arbitrary precision; the mpmath
context is process-global, so concurrent certifications must share one
precision setting (the scan drivers do).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath as mp
import numpy as np

from .jacobi import (
    dim_m_n,
    eigenvalue_lambda_n,
    gauss_jacobi_rule_mp,
    jacobi_eval_all,
    jacobi_value_at_one,
    pochhammer,
)
from .kernels import EvalEnv, ZonalKernel
from .spaces import Space, make_space

__all__ = [
    "CoefficientEntry",
    "CoefficientReport",
    "Hyp2F1Args",
    "coefficients_de",
    "coefficients_gj",
    "certify_coefficients",
    "synthesize",
    "hyp2f1",
    "poisson_kernel",
    "DEFAULT_DIGITS",
    "DEFAULT_N",
    "DE_MAX_LEVEL",
]

DEFAULT_DIGITS = 50
DEFAULT_N = 32
DE_MAX_LEVEL = 12

SIGN_POS = "+"
SIGN_NEG = "-"
SIGN_ZERO = "0"
SIGN_UNDECIDED = "undecided"


@dataclass(frozen=True)
class CoefficientEntry:
    n: int
    value: mp.mpf
    error: mp.mpf
    m_n: float
    lambda_n: float
    sign: str


@dataclass
class CoefficientReport:
    space: Space
    kernel: str
    N: int
    entries: list[CoefficientEntry]
    method: str
    levels: dict = field(default_factory=dict)

    def entry(self, n: int) -> CoefficientEntry:
        return self.entries[n]

    def signs(self) -> list[str]:
        return [e.sign for e in self.entries]

    def values_float(self) -> np.ndarray:
        return np.array([float(e.value) for e in self.entries])

    def digits(self) -> int:
        return int(self.levels.get("digits", DEFAULT_DIGITS))

    def to_json_dict(self) -> dict:
        d = self.digits()
        return {
            "space": self.space.descriptor(),
            "kernel": self.kernel,
            "N": self.N,
            "entries": [
                {
                    "n": e.n,
                    "value": mp.nstr(e.value, d, strip_zeros=False),
                    "error": mp.nstr(e.error, 8),
                    "m_n": e.m_n,
                    "lambda_n": e.lambda_n,
                    "sign": e.sign,
                }
                for e in self.entries
            ],
            "method": self.method,
            "levels": self.levels,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @staticmethod
    def from_json_dict(data: dict) -> "CoefficientReport":
        sp = data["space"]
        if str(sp["name"]).startswith("custom:"):
            space = make_space(sp["name"])
        else:
            space = make_space(sp["name"])
        if not (
            abs(space.alpha - sp["alpha"]) < 1e-12
            and abs(space.beta - sp["beta"]) < 1e-12
            and abs(space.kappa - sp["kappa"]) < 1e-12
        ):
            raise ValueError("space descriptor inconsistent with its name")
        entries = [
            CoefficientEntry(
                n=int(e["n"]),
                value=mp.mpf(e["value"]),
                error=mp.mpf(e["error"]),
                m_n=float(e["m_n"]),
                lambda_n=float(e["lambda_n"]),
                sign=str(e["sign"]),
            )
            for e in data["entries"]
        ]
        return CoefficientReport(
            space=space,
            kernel=str(data["kernel"]),
            N=int(data["N"]),
            entries=entries,
            method=str(data["method"]),
            levels=dict(data.get("levels", {})),
        )

    @staticmethod
    def from_json(text: str) -> "CoefficientReport":
        return CoefficientReport.from_json_dict(json.loads(text))


def _sign_for(
    value: mp.mpf, error: mp.mpf, n: int, kernel: Optional[ZonalKernel], space: Space
) -> str:
    deg = kernel.poly_degree if kernel is not None else None
    if deg is not None and n > deg:
        return SIGN_ZERO
    if value > error:
        return SIGN_POS
    if value < -error:
        return SIGN_NEG
    if deg is not None:
        # polynomial kernels have exactly computable coefficients: a value
        # below the rounding-level bound is an exact structural zero
        return SIGN_ZERO
    if kernel is not None and kernel.known_zero is not None and kernel.known_zero(space, n):
        return SIGN_ZERO
    return SIGN_UNDECIDED


def _prefactors_mp(space: Space, N: int) -> tuple[list, list]:
    """(m_n / P_n(1)^2) and P_n(1) as exact-as-possible mpf values."""
    a, b = mp.mpf(space.alpha), mp.mpf(space.beta)
    pref, p1s = [], []
    for n in range(N + 1):
        p1 = pochhammer(a + 1, n) / mp.factorial(n)
        if n == 0:
            mn = mp.mpf(1)
        else:
            mn = (
                (2 * n + a + b + 1)
                * pochhammer(a + b + 1, n)
                * pochhammer(a + 1, n)
                / ((a + b + 1) * mp.factorial(n) * pochhammer(b + 1, n))
            )
        pref.append(mn / (p1 * p1))
        p1s.append(p1)
    return pref, p1s


def _measure_const_mp(space: Space) -> mp.mpf:
    """C with dnu = C sin(u)^(2a+1) cos(u)^(2b+1) du a probability measure on
    (0, pi/2), u = kappa*theta."""
    a, b = mp.mpf(space.alpha), mp.mpf(space.beta)
    return 2 * mp.gamma(a + b + 2) / (mp.gamma(a + 1) * mp.gamma(b + 1))


def _pow(base: mp.mpf, expo: float) -> mp.mpf:
    if expo == int(expo):
        return base ** int(expo)
    return base ** mp.mpf(expo)


# ---------------------------------------------------------------------------
# double-exponential engine


def _de_node(tau: mp.mpf):
    """tanh-sinh node geometry at abscissa tau.

    Returns (u, comp, w) with u in (0, pi/2), comp = pi/2 - u computed
    without cancellation, and w = du/dtau.
    """
    half_pi = mp.pi / 2
    y = half_pi * mp.sinh(tau)
    # 1 -+ tanh(y) = 2/(1+exp(+-2y))
    one_plus_x = 2 / (1 + mp.exp(-2 * y))
    one_minus_x = 2 / (1 + mp.exp(2 * y))
    u = mp.pi / 4 * one_plus_x
    comp = mp.pi / 4 * one_minus_x
    w = (mp.pi / 4) * half_pi * mp.cosh(tau) / mp.cosh(y) ** 2
    return u, comp, w


def _de_sums(space: Space, kernel: ZonalKernel, N: int, max_level: int, dps: int):
    """Raw tanh-sinh accumulation of int F P_n dnu for n = 0..N.

    Returns (I, err, level_used) with I, err lists of mpf.  Levels are
    cumulative; the error per n is the last level-to-level difference plus
    a rounding floor.
    """
    a, b = space.alpha, space.beta
    kappa = mp.mpf(space.kappa)
    shift = kernel.gj_shift
    e_sin = 2 * a + 1 - 2 * shift
    e_cos = 2 * b + 1
    if 2 * a + 1 - 2 * kernel.sing_exponent <= -1:
        raise ValueError(
            f"kernel {kernel.descriptor} not integrable on {space.name}"
        )
    C = _measure_const_mp(space) * _pow(mp.mpf(2), -shift)
    ab = (mp.mpf(a), mp.mpf(b))
    pmax = float(jacobi_value_at_one((a, b), N)) if N else 1.0
    pmax = max(1.0, abs(pmax))
    floor = mp.mpf(10) ** (-(dps + 8))

    S = [mp.mpf(0) for _ in range(N + 1)]
    scale = mp.mpf(1)

    def add_node(tau: mp.mpf) -> mp.mpf:
        u, comp, w = _de_node(tau)
        sinu = mp.sin(u)
        cosu = mp.sin(comp)
        t = 1 - 2 * sinu * sinu
        env = EvalEnv(
            t=t,
            one_minus_t=2 * sinu * sinu,
            one_plus_t=2 * cosu * cosu,
            theta=u / kappa,
            kappa=kappa,
        )
        g = kernel.eval_g(env)
        f = C * _pow(sinu, e_sin) * _pow(cosu, e_cos) * w * g
        P = jacobi_eval_all(ab, N, t)
        for n in range(N + 1):
            S[n] += f * P[n]
        return abs(f)

    I_prev = None
    I_cur = None
    err = [mp.mpf("inf")] * (N + 1)
    level_used = 0
    for level in range(max_level + 1):
        h = mp.mpf(1) / (1 << level) if level else mp.mpf(1)
        if level == 0:
            add_node(mp.mpf(0))
            for direction in (1, -1):
                k, quiet = 1, 0
                while quiet < 3 and k < 200:
                    sz = add_node(mp.mpf(direction * k))
                    quiet = quiet + 1 if sz * pmax < floor * scale else 0
                    k += 1
        else:
            for direction in (1, -1):
                j, quiet = 0, 0
                while quiet < 3 and j < 200000:
                    tau = direction * (2 * j + 1) * h
                    sz = add_node(tau)
                    quiet = quiet + 1 if sz * pmax < floor * scale else 0
                    j += 1
        I_prev = I_cur
        I_cur = [h * s for s in S]
        scale = max(mp.mpf(1), abs(I_cur[0]))
        level_used = level
        if I_prev is not None:
            err = [
                abs(I_cur[n] - I_prev[n]) + floor * (1 + abs(I_cur[n]))
                for n in range(N + 1)
            ]
            tol = mp.mpf(10) ** (-(dps - 6))
            if all(err[n] <= tol * (1 + abs(I_cur[n])) for n in range(N + 1)):
                break
    return I_cur, err, level_used


def coefficients_de(
    space: Space,
    kernel: ZonalKernel,
    N: int = DEFAULT_N,
    level: int = DE_MAX_LEVEL,
    digits: int = DEFAULT_DIGITS,
) -> CoefficientReport:
    """Coefficients by tanh-sinh quadrature in the angle variable."""
    kernel.require_integrable(space)
    if N < 0:
        raise ValueError("N must be >= 0")
    with mp.workdps(digits + 10):
        I, raw_err, level_used = _de_sums(space, kernel, N, level, digits)
        pref, _ = _prefactors_mp(space, N)
        entries = []
        for n in range(N + 1):
            v = pref[n] * I[n]
            e = pref[n] * raw_err[n]
            entries.append(
                CoefficientEntry(
                    n=n,
                    value=v,
                    error=e,
                    m_n=float(dim_m_n(space, n)),
                    lambda_n=eigenvalue_lambda_n(space, n),
                    sign=_sign_for(v, e, n, kernel, space),
                )
            )
    return CoefficientReport(
        space=space,
        kernel=kernel.descriptor,
        N=N,
        entries=entries,
        method="de",
        levels={"digits": digits, "de_level": level_used, "de_max_level": level},
    )


# ---------------------------------------------------------------------------
# Gauss-Jacobi engine


def _gj_once_t(space: Space, kernel: ZonalKernel, N: int, m: int):
    """int G P_n (1-t)^(a-shift) (1+t)^b dt / Z(a,b) via an m-node rule."""
    a, b = space.alpha, space.beta
    sigma = kernel.gj_shift
    nodes, weights = gauss_jacobi_rule_mp((a - sigma, b), m)
    kappa = space.kappa
    Z = (
        mp.power(2, a + b + 1)
        * mp.gamma(mp.mpf(a) + 1)
        * mp.gamma(mp.mpf(b) + 1)
        / mp.gamma(mp.mpf(a) + b + 2)
    )
    S = [mp.mpf(0) for _ in range(N + 1)]
    ab = (mp.mpf(a), mp.mpf(b))
    for x, w in zip(nodes, weights):
        env = EvalEnv(
            t=x,
            one_minus_t=1 - x,
            one_plus_t=1 + x,
            theta=mp.acos(x) / (2 * kappa),
            kappa=mp.mpf(kappa),
        )
        f = w * kernel.eval_g(env)
        P = jacobi_eval_all(ab, N, x)
        for n in range(N + 1):
            S[n] += f * P[n]
    return [s / Z for s in S]


def _gj_once_u(space: Space, kernel: ZonalKernel, N: int, m: int):
    """Angle-variable Gauss rule for kernels with an arccos branch in t.

    With u = (pi/4)(1+v) the integral int F P_n dnu becomes a Jacobi-weight
    integral in v with weight (2b+1, 2a+1-2sigma); the residual factor uses
    sin(u)/u and sin(w)/w forms so nothing cancels at the endpoints.
    """
    a, b = space.alpha, space.beta
    sigma = kernel.gj_shift
    A = 2 * b + 1
    B = 2 * a + 1 - 2 * sigma
    nodes, weights = gauss_jacobi_rule_mp((A, B), m)
    kappa = mp.mpf(space.kappa)
    quarter_pi = mp.pi / 4
    e_sin = 2 * a + 1 - 2 * sigma
    e_cos = 2 * b + 1
    const = (
        _measure_const_mp(space)
        * _pow(mp.mpf(2), -sigma)
        * _pow(quarter_pi, e_sin + e_cos + 1)
    )
    S = [mp.mpf(0) for _ in range(N + 1)]
    ab = (mp.mpf(a), mp.mpf(b))
    for v, w in zip(nodes, weights):
        u = quarter_pi * (1 + v)
        comp = quarter_pi * (1 - v)
        sinu = mp.sin(u)
        cosu = mp.sin(comp)
        s1 = sinu / u
        s2 = cosu / comp
        t = 1 - 2 * sinu * sinu
        env = EvalEnv(
            t=t,
            one_minus_t=2 * sinu * sinu,
            one_plus_t=2 * cosu * cosu,
            theta=u / kappa,
            kappa=kappa,
        )
        g = kernel.eval_g(env)
        f = w * const * _pow(s1, e_sin) * _pow(s2, e_cos) * g
        P = jacobi_eval_all(ab, N, t)
        for n in range(N + 1):
            S[n] += f * P[n]
    return S


def coefficients_gj(
    space: Space,
    kernel: ZonalKernel,
    N: int = DEFAULT_N,
    m_nodes: Optional[int] = None,
    digits: int = DEFAULT_DIGITS,
) -> CoefficientReport:
    """Coefficients by singularity-absorbing Gauss-Jacobi quadrature.

    Logarithmic kernels are excluded (their singularity is not a power of
    1-t); use the tanh-sinh engine for those.  The error bound comes from
    comparing rules of order m and m + max(10, m/4).
    """
    kernel.require_integrable(space)
    if kernel.log_flag:
        raise ValueError("Gauss-Jacobi path cannot absorb a logarithmic singularity")
    if space.alpha - kernel.gj_shift <= -1:
        raise ValueError("alpha - sigma must exceed -1 for the split weight")
    if N < 0:
        raise ValueError("N must be >= 0")
    if m_nodes is None:
        # enough nodes for the analytic residual (geometric decay, rate set
        # by the sinc factors) plus the oscillation of P_N
        m_nodes = int(0.7 * digits) + int(0.8 * N) + 12
    m2 = m_nodes + max(10, m_nodes // 4)
    with mp.workdps(digits + 10):
        once = _gj_once_t if kernel.t_analytic else _gj_once_u
        I_lo = once(space, kernel, N, m_nodes)
        I_hi = once(space, kernel, N, m2)
        pref, _ = _prefactors_mp(space, N)
        floor = mp.mpf(10) ** (-(digits + 6))
        entries = []
        for n in range(N + 1):
            v = pref[n] * I_hi[n]
            e = pref[n] * abs(I_hi[n] - I_lo[n]) + floor * (1 + abs(v))
            entries.append(
                CoefficientEntry(
                    n=n,
                    value=v,
                    error=e,
                    m_n=float(dim_m_n(space, n)),
                    lambda_n=eigenvalue_lambda_n(space, n),
                    sign=_sign_for(v, e, n, kernel, space),
                )
            )
    return CoefficientReport(
        space=space,
        kernel=kernel.descriptor,
        N=N,
        entries=entries,
        method="gj",
        levels={"digits": digits, "gj_nodes": m_nodes, "gj_nodes_check": m2},
    )


# ---------------------------------------------------------------------------
# certification


def certify_coefficients(
    space: Space,
    kernel: ZonalKernel,
    N: int = DEFAULT_N,
    target_digits: int = DEFAULT_DIGITS,
) -> CoefficientReport:
    """Run both engines, fold their discrepancy into the error bound, and
    escalate precision until every sign is decided or the cap is reached.

    Deterministic for fixed inputs.  Undecided entries in the returned
    report mean the precision ladder was exhausted, never that a stage was
    skipped.
    """
    kernel.require_integrable(space)
    ladder = [target_digits, target_digits + 20, target_digits + 40]
    use_gj = not kernel.log_flag and space.alpha - kernel.gj_shift > -1
    report = None
    for digits in ladder:
        de = coefficients_de(space, kernel, N, level=DE_MAX_LEVEL, digits=digits)
        levels = {"digits": digits, "de_level": de.levels["de_level"]}
        if use_gj:
            gj = coefficients_gj(space, kernel, N, digits=digits)
            levels.update(
                gj_nodes=gj.levels["gj_nodes"], gj_nodes_check=gj.levels["gj_nodes_check"]
            )
        entries = []
        with mp.workdps(digits + 10):
            for n in range(N + 1):
                v = de.entries[n].value
                e = de.entries[n].error
                if use_gj:
                    e = e + gj.entries[n].error + abs(v - gj.entries[n].value)
                entries.append(
                    CoefficientEntry(
                        n=n,
                        value=v,
                        error=e,
                        m_n=de.entries[n].m_n,
                        lambda_n=de.entries[n].lambda_n,
                        sign=_sign_for(v, e, n, kernel, space),
                    )
                )
        report = CoefficientReport(
            space=space,
            kernel=kernel.descriptor,
            N=N,
            entries=entries,
            method="both" if use_gj else "de",
            levels=levels,
        )
        if all(e.sign != SIGN_UNDECIDED for e in entries):
            break
    return report


# ---------------------------------------------------------------------------
# synthesis and Poisson smoothing


def synthesize(report: CoefficientReport, t: float, r: float = 1.0) -> float:
    """Evaluate the (Poisson-damped) partial sum  sum_n Fhat(n) r^n P_n(t).

    r < 1 always converges.  At r = 1 the truncated tail is estimated by a
    ratio test on |Fhat(n)| P_n(1); a non-decaying tail raises instead of
    summing a series the report cannot support.
    """
    if not 0 <= r <= 1:
        raise ValueError("r must lie in [0,1]")
    space = report.space
    N = report.N
    a, b = space.alpha, space.beta
    if r == 1.0 and N >= 6:
        tail = [
            abs(float(e.value)) * float(jacobi_value_at_one((a, b), e.n))
            for e in report.entries[-5:]
        ]
        head = max(tail[:2])
        if head > 0 and tail[-1] > 0 and tail[-1] >= head and tail[-1] > 1e-12:
            raise ValueError("series tail shows no decay at r=1; refusing to sum")
    P = jacobi_eval_all((a, b), N, float(t))
    total = 0.0
    rn = 1.0
    for n in range(N + 1):
        total += float(report.entries[n].value) * rn * P[n]
        rn *= r
    return total


@dataclass(frozen=True)
class Hyp2F1Args:
    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        if self.c <= 0 and self.c == int(self.c):
            raise ValueError("c must not be a non-positive integer")
        if not 0 <= self.z < 1:
            raise ValueError("z must lie in [0,1)")


def hyp2f1(args: Hyp2F1Args, digits: int = 25) -> float:
    """Gauss hypergeometric 2F1(a,b;c;z) on [0,1).

    When c-a (or c-b) is a non-positive integer the Euler transformation
    (1-z)^(c-a-b) 2F1(c-a, c-b; c; z) terminates and is summed exactly.
    Otherwise the defining series is summed in elevated precision; for the
    parameter families used here all terms beyond the alternating head have
    one sign, so the only cost near z=1 is term count, monitored by a cap.
    """
    if not isinstance(args, Hyp2F1Args):
        args = Hyp2F1Args(*args)
    a, b, c, z = args.a, args.b, args.c, args.z
    if z == 0:
        return 1.0
    with mp.workdps(digits + 10):
        za = mp.mpf(z)
        ca, cb = c - a, c - b
        if ca == int(ca) and ca <= 0:
            return float(mp.power(1 - za, c - a - b) * _series_2f1(ca, cb, c, za, terminating=True))
        if cb == int(cb) and cb <= 0:
            return float(mp.power(1 - za, c - a - b) * _series_2f1(ca, cb, c, za, terminating=True))
        return float(_series_2f1(mp.mpf(a), mp.mpf(b), mp.mpf(c), za))


def _series_2f1(a, b, c, z, terminating: bool = False):
    a, b, c = mp.mpf(a), mp.mpf(b), mp.mpf(c)
    term = mp.mpf(1)
    total = mp.mpf(1)
    eps = mp.mpf(10) ** (-(mp.mp.dps + 2))
    cap = 2_000_000
    k = 0
    while True:
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        k += 1
        if term == 0:
            break
        if terminating and k > max(-float(a), -float(b)) + 2:
            break
        if not terminating and abs(term) < eps * abs(total) and k > 4:
            break
        if k >= cap:
            raise RuntimeError(f"hypergeometric series did not converge within {cap} terms")
    return total


def poisson_kernel(
    space_or_params,
    r: float,
    theta: float,
    method: str = "closed",
    digits: int = 30,
) -> float:
    """The Poisson kernel P_r at geodesic angle theta.

    Closed form: (1-r)/(1+r)^(a+b+2) * 2F1((a+b+2)/2, (a+b+3)/2; b+1; z)
    with z = 4 r cos^2(kappa theta)/(1+r)^2.  Series: the spectral sum
    sum_n (m_n / P_n(1)) r^n P_n(cos 2 kappa theta), which the closed form
    must match; both are exposed so they can police each other.
    """
    if isinstance(space_or_params, tuple):
        a, b = space_or_params
        kappa = 1.0
    else:
        a = space_or_params.alpha
        b = space_or_params.beta
        kappa = space_or_params.kappa
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0,1)")
    if r == 0:
        return 1.0
    if method == "closed":
        cz = math.cos(kappa * theta) ** 2
        z = 4 * r * cz / (1 + r) ** 2
        pref = (1 - r) / (1 + r) ** (a + b + 2)
        val = hyp2f1(Hyp2F1Args((a + b + 2) / 2, (a + b + 3) / 2, b + 1, z), digits=digits)
        return pref * val
    if method == "series":
        with mp.workdps(digits + 10):
            am, bm = mp.mpf(a), mp.mpf(b)
            t = mp.cos(2 * kappa * mp.mpf(theta))
            rm = mp.mpf(r)
            total = mp.mpf(1)
            eps = mp.mpf(10) ** (-(digits + 5))
            # incremental state: poch = (a+b+1)_n/(b+1)_n, p1 = P_n(1), r^n,
            # and the last two recurrence values
            poch = mp.mpf(1)
            p1 = mp.mpf(1)
            rn = mp.mpf(1)
            p_prev2 = None
            p_prev = mp.mpf(1)
            n = 0
            while n < 200000:
                n += 1
                poch *= (am + bm + n) / (bm + n)
                p1 *= (am + n) / n
                rn *= rm
                coef_n = (2 * n + am + bm + 1) / (am + bm + 1) * poch
                if n == 1:
                    p_cur = (am + 1) + (am + bm + 2) * (t - 1) / 2
                else:
                    c1 = 2 * n * (n + am + bm) * (2 * n + am + bm - 2)
                    c2 = (2 * n + am + bm - 1) * (am * am - bm * bm)
                    c3 = (2 * n + am + bm - 2) * (2 * n + am + bm - 1) * (2 * n + am + bm)
                    c4 = 2 * (n + am - 1) * (n + bm - 1) * (2 * n + am + bm)
                    p_cur = ((c2 + c3 * t) * p_prev - c4 * p_prev2) / c1
                p_prev2, p_prev = p_prev, p_cur
                total += coef_n * rn * p_cur
                # |P_n| <= P_n(1) on the geometric parameter range
                if coef_n * rn * p1 < eps * max(1, abs(total)):
                    break
            return float(total)
    raise ValueError(f"unknown poisson method {method!r}")
