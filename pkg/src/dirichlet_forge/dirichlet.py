"""Evaluation of (generalized) Dirichlet series and of zeta/L-functions.

Truncated sums carry a rigorous tail bound whenever beta(n) >= n^(1/D)
makes the tail summable; zeta, Hurwitz zeta and L(chi, s) are continued
with Euler-Maclaurin summation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .arith import CoefficientFunction, DirichletCharacter, character, coefficient_values
from .beurling import BeurlingSystem, classical_system
from .errors import InvalidArgument, PoleError, WindowError

EM_TERMS = 50
EM_CORRECTIONS = 6
_EPS = 2.0**-52


@dataclass(frozen=True)
class ComplexPoint:
    sigma: float
    t: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise InvalidArgument(f"non-finite point {self.sigma}+{self.t}i")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    def conjugate(self) -> "ComplexPoint":
        return ComplexPoint(self.sigma, -self.t)


def as_point(s) -> ComplexPoint:
    if isinstance(s, ComplexPoint):
        return s
    z = complex(s)
    return ComplexPoint(z.real, z.imag)


@dataclass(frozen=True)
class SeriesValue:
    """A computed value with its error bound.

    ``error_bound`` is ``None`` when no bound is available; ``rigorous`` is
    False when the bound is only an estimate.
    """

    value: complex
    error_bound: float | None
    terms_used: int
    rigorous: bool = True

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def to_record(self, op: str, params: dict) -> dict:
        return {
            "op": op,
            "params": params,
            "re": self.value.real,
            "im": self.value.imag,
            "error_bound": self.error_bound if self.rigorous else "heuristic",
            "terms_used": self.terms_used,
        }


@dataclass(frozen=True)
class EvaluationWindow:
    """sigma0: extension boundary, sigma1: abscissa, sigma2: safe summation."""

    sigma0: float
    sigma1: float
    sigma2: float

    def __post_init__(self):
        if not self.sigma0 < self.sigma1 <= self.sigma2:
            raise InvalidArgument(
                f"window needs sigma0 < sigma1 <= sigma2, got {self.sigma0}, {self.sigma1}, {self.sigma2}"
            )


def default_window(system: BeurlingSystem) -> EvaluationWindow:
    return EvaluationWindow(system.abscissa / 2, system.abscissa, system.degree_bound)


def tail_bound(sigma: float, degree: float, n: int) -> float | None:
    """Bound for sum_{k > n} k^(-sigma/D); None when it diverges."""
    x = sigma / degree
    if x <= 1:
        return None
    return n ** (1 - x) / (x - 1)


# --------------------------------------------------------------------------
# coefficient streams


@dataclass(frozen=True, eq=False)
class DirichletStream:
    """Coefficients d(1..n) of sum d(k) beta(k)^{-s} over a system.

    ``coeff_bound`` bounds |d(k)| and enters the tail estimate.
    """

    coeffs: np.ndarray
    system: BeurlingSystem
    coeff_bound: float = 1.0
    window: EvaluationWindow | None = None

    @property
    def length(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def evaluate(self, s) -> SeriesValue:
        p = as_point(s)
        n = self.length
        logb = self.system.log_beta_values(n)
        value = _kernels.dirichlet_sum(self.coeffs, logb, p.s, 1, n + 1)
        tb = tail_bound(p.sigma, self.system.degree_bound, n)
        if tb is None:
            return SeriesValue(value, None, n, rigorous=False)
        return SeriesValue(value, self.coeff_bound * tb, n)

    def real_function(self):
        """sigma -> sum d(k) beta(k)^{-sigma} as a plain float function."""
        return lambda sigma: self.evaluate(float(sigma)).value.real


def eval_dirichlet_truncated(a: CoefficientFunction, system: BeurlingSystem | None, s, n: int) -> SeriesValue:
    """sum_{k <= n} a(k) beta(k)^{-s} with the tail bound from beta(k) >= k^(1/D)."""
    if n < 1:
        raise InvalidArgument(f"need n >= 1, got {n}")
    system = system or classical_system()
    stream = DirichletStream(coefficient_values(a, n), system)
    return stream.evaluate(s)


def _stream_weights(system: BeurlingSystem, n: int) -> np.ndarray:
    # Lambda_beta(k) / log beta(k): 1/j at k = p^j, else 0
    lam = system.mangoldt_values(n)
    logb = system.log_beta_values(n)
    out = np.zeros(n + 1, dtype=np.float64)
    nz = lam > 0
    out[nz] = lam[nz] / logb[nz]
    return out


def log_coefficients(a: CoefficientFunction, system: BeurlingSystem | None, n: int) -> DirichletStream:
    """c(k) = a(k) Lambda_beta(k) / log beta(k) for k <= n; zero off prime powers."""
    if n < 2:
        raise InvalidArgument(f"need n >= 2, got {n}")
    system = system or classical_system()
    c = coefficient_values(a, n) * _stream_weights(system, n)
    c.setflags(write=False)
    return DirichletStream(c, system, 1.0, default_window(system))


def square_pair_coefficients(a: CoefficientFunction, system: BeurlingSystem | None, sign: str, n: int) -> DirichletStream:
    """d(k) = 2(1 +/- Re a(k)) Lambda_beta(k) / log beta(k), all >= 0."""
    if sign not in ("+", "-"):
        raise InvalidArgument(f"sign must be '+' or '-', got {sign!r}")
    system = system or classical_system()
    re = coefficient_values(a, n).real
    factor = 2.0 * (1.0 + re) if sign == "+" else 2.0 * (1.0 - re)
    d = (factor * _stream_weights(system, n)).astype(np.complex128)
    d.setflags(write=False)
    return DirichletStream(d, system, 4.0, default_window(system))


def exp_identity_residual(a: CoefficientFunction, system: BeurlingSystem | None, sigma: float, n: int) -> float:
    """|L_n(sigma) - exp(sum_{k<=n} c(k) beta(k)^{-sigma})|."""
    system = system or classical_system()
    if sigma <= max(1.0, system.degree_bound):
        raise WindowError(f"sigma={sigma} must exceed max(1, D={system.degree_bound})")
    lhs = eval_dirichlet_truncated(a, system, sigma, n).value
    rhs = cmath.exp(log_coefficients(a, system, n).evaluate(sigma).value)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class LimitProbeReport:
    sigmas: tuple[float, ...]
    ratios: tuple[float, ...]
    bound: float

    @property
    def nonincreasing(self) -> bool:
        return all(b <= a * (1 + 1e-9) for a, b in zip(self.ratios, self.ratios[1:]))

    @property
    def bounded(self) -> bool:
        return all(r <= self.bound for r in self.ratios)

    @property
    def passed(self) -> bool:
        return self.nonincreasing and self.bounded


def first_coefficient_limit_probe(a, system, sigmas, n: int = 10_000, bound: float = 3.0) -> LimitProbeReport:
    """r(sigma) = |F(sigma) - a(1)| * beta0^sigma along an ascending grid."""
    system = system or classical_system()
    sigmas = tuple(float(x) for x in sigmas)
    if list(sigmas) != sorted(sigmas):
        raise InvalidArgument("sigma list must be ascending")
    if min(sigmas) <= system.abscissa + 1:
        raise WindowError(f"sigmas must exceed abscissa + 1 = {system.abscissa + 1}")
    ratios = []
    for sg in sigmas:
        f = eval_dirichlet_truncated(a, system, sg, n).value
        ratios.append(abs(f - 1.0) * system.beta0**sg)
    return LimitProbeReport(sigmas, tuple(ratios), bound)


# --------------------------------------------------------------------------
# Euler-Maclaurin continuation


@lru_cache(maxsize=None)
def bernoulli_even(m: int) -> tuple[Fraction, ...]:
    """(B_2, B_4, ..., B_{2m}) as exact fractions."""
    b = [Fraction(1)]
    for k in range(1, 2 * m + 1):
        b.append(-sum(math.comb(k + 1, j) * b[j] for j in range(k)) / (k + 1))
    return tuple(b[2 * j] for j in range(1, m + 1))


def _expm1c(z: complex) -> complex:
    a, b = z.real, z.imag
    return complex(math.expm1(a) * math.cos(b) - 2 * math.sin(b / 2) ** 2, math.exp(a) * math.sin(b))


def _em_regular(s: complex, x: float, terms: int, m: int) -> tuple[complex, float]:
    """Regular part R(s) = H(s, x) - 1/(s-1) of the Hurwitz sum and a bound.

    H(s, x) = sum_{k<terms} (k+x)^{-s} + (A^{1-s})/(s-1) + A^{-s}/2
              + sum_j B_{2j}/(2j)! (s)_{2j-1} A^{-s-2j+1},   A = terms + x.
    """
    ks = np.arange(terms, dtype=np.float64) + x
    logs = np.log(ks)
    head = complex(np.sum(np.exp(-s * logs))) if terms else 0j
    head_abs = float(np.sum(np.exp(-s.real * logs))) if terms else 0.0
    big = terms + x
    lg = math.log(big)
    w = 1 - s
    # (A^{1-s} - 1)/(s-1) written without cancellation near s = 1
    shifted = -(_expm1c(w * lg) / w) if w != 0 else -lg
    apow = cmath.exp(-s * lg)
    total = head + shifted + apow / 2
    poch = s
    bern = bernoulli_even(m + 1)
    for j in range(1, m + 1):
        total += float(bern[j - 1]) / math.factorial(2 * j) * poch * cmath.exp((-s - 2 * j + 1) * lg)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    # |remainder| <= |first omitted term| * |s+2m+1| / (sigma+2m+1)
    sig = s.real
    denom = sig + 2 * m + 1
    if denom <= 0:
        raise InvalidArgument(f"Euler-Maclaurin with {m} corrections needs Re s > {-(2 * m + 1)}")
    omitted = abs(poch) * abs(float(bern[m])) / math.factorial(2 * m + 2) * big ** (-sig - 2 * m - 1)
    err = omitted * abs(s + 2 * m + 1) / denom
    # floating-point allowance for the head sum and the correction terms
    err += 16 * _EPS * (math.log2(terms + 2) + m) * (head_abs + abs(shifted) + 1.0)
    return total, err


def _em_checks(p: ComplexPoint, n: int, m: int):
    if n < 1 or m < 0:
        raise InvalidArgument("need N >= 1 and M >= 0")
    if p.sigma <= 1 - 2 * m:
        raise InvalidArgument(f"Re s must exceed {1 - 2 * m} for M={m}")


def zeta_euler_maclaurin(s, n: int = EM_TERMS, m: int = EM_CORRECTIONS) -> SeriesValue:
    p = as_point(s)
    _em_checks(p, n, m)
    if p.s == 1:
        raise PoleError("zeta has a pole at s = 1")
    reg, err = _em_regular(p.s, 1.0, n - 1, m)
    return SeriesValue(reg + 1 / (p.s - 1), err, n, rigorous=p.sigma >= 1)


def hurwitz_zeta(s, x: float, n: int = EM_TERMS, m: int = EM_CORRECTIONS) -> SeriesValue:
    p = as_point(s)
    _em_checks(p, n, m)
    if not 0 < x <= 1:
        raise InvalidArgument(f"x must lie in (0, 1], got {x}")
    if p.s == 1:
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    reg, err = _em_regular(p.s, x, n, m)
    return SeriesValue(reg + 1 / (p.s - 1), err, n, rigorous=p.sigma >= 1)


def l_function(chi, s, n: int = EM_TERMS, m: int = EM_CORRECTIONS) -> SeriesValue:
    """L(chi, s) = q^{-s} sum_r chi(r) zeta(s, r/q), pole terms cancelled exactly."""
    if isinstance(chi, CoefficientFunction):
        if chi.kind != "character":
            raise InvalidArgument("l_function needs a character")
        chi = character(*chi.params)
    if not isinstance(chi, DirichletCharacter):
        raise InvalidArgument("l_function needs a DirichletCharacter")
    p = as_point(s)
    _em_checks(p, n, m)
    q = chi.modulus
    if chi.principal and p.s == 1:
        raise PoleError("principal L-function has a pole at s = 1")
    total = 0j
    err = 0.0
    for r in range(1, q + 1):
        c = chi(r)
        if c == 0:
            continue
        reg, e = _em_regular(p.s, r / q, n, m)
        total += c * reg
        err += abs(c) * e
    if chi.principal:
        total += _phi_count(chi) / (p.s - 1)
    scale = cmath.exp(-p.s * math.log(q))
    return SeriesValue(scale * total, abs(scale) * err, n * q, rigorous=p.sigma >= 1)


def _phi_count(chi: DirichletCharacter) -> int:
    return int(np.count_nonzero(chi.values))


__all__ = [
    "ComplexPoint", "SeriesValue", "EvaluationWindow", "DirichletStream", "LimitProbeReport",
    "as_point", "tail_bound", "default_window", "eval_dirichlet_truncated", "zeta_euler_maclaurin",
    "hurwitz_zeta", "l_function", "log_coefficients", "exp_identity_residual",
    "square_pair_coefficients", "first_coefficient_limit_probe", "bernoulli_even",
]
