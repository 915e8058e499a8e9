"""Power series and monotonicity probes.

Truncated power series with exp/log/composition recurrences, a
Cauchy-Hadamard style radius estimator, Taylor re-expansion of Dirichlet
streams at real centers, and finite-difference probes for complete and
absolute monotonicity.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .dirichlet import DirichletStream
from .errors import DomainError, InsufficientData, InvalidArgument, PreconditionError, ShiftRequired, WindowError

BEYOND_WINDOW = "beyond window"
MIN_TAIL_COEFFS = 16


@dataclass(frozen=True, eq=False)
class PowerSeries:
    coefficients: np.ndarray
    center: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coefficients)
        if c.ndim != 1 or c.size == 0:
            raise InvalidArgument("power series needs a non-empty 1-d coefficient list")
        if not np.all(np.isfinite(c)):
            raise InvalidArgument("power series coefficients must be finite")
        dtype = np.complex128 if np.iscomplexobj(c) else np.float64
        c = np.array(c, dtype=dtype)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k):
        return self.coefficients[k]

    def __len__(self):
        return len(self.coefficients)

    def padded(self, order: int) -> "PowerSeries":
        if order <= self.order:
            return PowerSeries(self.coefficients[: order + 1], self.center)
        c = np.zeros(order + 1, dtype=self.coefficients.dtype)
        c[: len(self)] = self.coefficients
        return PowerSeries(c, self.center)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z - self.center, self.coefficients)

    @classmethod
    def from_function(cls, coeff: Callable[[int], float], order: int, center: float = 0.0):
        return cls(np.array([coeff(n) for n in range(order + 1)], dtype=np.float64), center)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "coefficient"])
            for i, c in enumerate(self.coefficients):
                w.writerow([i, repr(complex(c)) if np.iscomplexobj(self.coefficients) else repr(float(c))])

    @classmethod
    def from_csv(cls, path: str | Path, center: float = 0.0) -> "PowerSeries":
        rows = {}
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().lower() == "index":
                    continue
                if len(row) != 2:
                    raise InvalidArgument(f"{path}: expected 'index,coefficient', got {row}")
                try:
                    text = row[1].strip()
                    val = complex(text) if "j" in text else float(text)
                    rows[int(row[0])] = val
                except ValueError as exc:
                    raise InvalidArgument(f"{path}: {exc}") from None
        if not rows:
            raise InvalidArgument(f"{path}: no coefficients")
        order = max(rows)
        cplx = any(isinstance(v, complex) for v in rows.values())
        c = np.zeros(order + 1, dtype=np.complex128 if cplx else np.float64)
        for k, v in rows.items():
            if k < 0:
                raise InvalidArgument(f"{path}: negative index {k}")
            c[k] = v
        return cls(c, center)


def _mul_trunc(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(a, b)[: order + 1]


def exp_series(f: PowerSeries) -> PowerSeries:
    """Coefficients of exp(f): A_0 = e^{a_0}, n A_n = sum_k k a_k A_{n-k}."""
    a = f.coefficients
    n_max = f.order
    out = np.zeros(n_max + 1, dtype=a.dtype)
    out[0] = np.exp(a[0])
    ka = np.arange(n_max + 1) * a
    for n in range(1, n_max + 1):
        out[n] = np.dot(ka[1 : n + 1], out[n - 1 :: -1][:n]) / n
    return PowerSeries(out, f.center)


def log_series(F: PowerSeries) -> PowerSeries:
    """Inverse of ``exp_series``; needs a real positive constant term."""
    c = F.coefficients
    c0 = complex(c[0])
    if c0.imag != 0 or c0.real <= 0:
        raise DomainError(f"log_series needs c_0 > 0, got {c[0]}")
    n_max = F.order
    out = np.zeros(n_max + 1, dtype=c.dtype)
    out[0] = math.log(c0.real)
    for n in range(1, n_max + 1):
        k = np.arange(1, n)
        acc = np.dot(k * out[1:n], c[n - 1 : 0 : -1]) if n > 1 else 0.0
        out[n] = (c[n] - acc / n) / c0.real
    return PowerSeries(out, F.center)


def compose_series(E: PowerSeries, f: PowerSeries, order: int | None = None) -> PowerSeries:
    """Truncated coefficients of E(f(z)); f must vanish at the origin."""
    if f.coefficients[0] != 0:
        raise ShiftRequired(f"inner series must have c_0 = 0, got {f.coefficients[0]}")
    order = f.order if order is None else order
    inner = f.padded(order).coefficients
    dtype = np.result_type(E.coefficients, inner)
    acc = np.zeros(order + 1, dtype=dtype)
    # Horner: E_M, then acc*f + E_k; terms with k > order cannot contribute
    for k in range(min(E.order, order), -1, -1):
        acc = _mul_trunc(acc, inner, order)
        if len(acc) < order + 1:
            acc = np.pad(acc, (0, order + 1 - len(acc)))
        acc[0] += E.coefficients[k]
    return PowerSeries(acc, f.center)


def exp_truncation(order: int) -> PowerSeries:
    return PowerSeries(np.array([1.0 / math.factorial(k) for k in range(order + 1)]))


def taylor_from_dirichlet(
    stream: DirichletStream, center: float, order: int, tail_weight: float | None = None
) -> PowerSeries:
    """Taylor coefficients of z -> f(center - z) for f(s) = sum d(k) beta(k)^{-s}.

    c_n = (1/n!) sum_k d(k) (log beta(k))^n beta(k)^{-center}.

    Terms beyond the stream length carry most of the mass of high-order
    coefficients. With ``tail_weight`` w, that missing part is modelled as
    a prime-density integral, w * Gamma(n, (center-1) U) / (n! (center-1)^n)
    with U = log(length); w is the mean of d over primes.
    """
    window = stream.window
    sigma2 = window.sigma2 if window is not None else stream.system.degree_bound
    if center <= sigma2:
        raise WindowError(f"center {center} must exceed sigma2 = {sigma2}")
    if order < 0:
        raise InvalidArgument("order must be >= 0")
    n = stream.length
    logb = stream.system.log_beta_values(n)
    d = stream.coeffs
    nz = np.flatnonzero(d[1:] != 0) + 1
    dk = d[nz]
    lb = logb[nz]
    real = not np.iscomplexobj(dk) or np.all(np.imag(dk) == 0)
    if real:
        dk = np.real(dk)
    base = dk * np.exp(-center * lb)
    # (log beta)^m / m! in log space; beta(1) = 1 contributes to c_0 only
    pos = lb > 0
    loglb = np.log(lb, where=pos, out=np.zeros_like(lb))
    out = np.zeros(order + 1, dtype=np.float64 if real else np.complex128)
    out[0] = np.sum(base)
    for m in range(1, order + 1):
        w = np.where(pos, np.exp(m * loglb - math.lgamma(m + 1)), 0.0)
        out[m] = np.sum(base * w)
    if tail_weight:
        u = math.log(n) * (center - 1)
        out[0] += tail_weight * special.exp1(u)
        for m in range(1, order + 1):
            # Gamma(m, u)/m! = Q(m, u)/m
            out[m] += tail_weight * special.gammaincc(m, u) / (m * (center - 1) ** m)
    return PowerSeries(out, center)


# --------------------------------------------------------------------------
# radius of convergence


@dataclass(frozen=True)
class RadiusFit:
    radius: float | str
    slope: float
    curvature: float
    used: int


def _fit_radius(p: PowerSeries, scale: float) -> RadiusFit:
    c = np.abs(p.coefficients)
    n_max = p.order
    lo = n_max // 2
    idx = np.arange(lo, n_max + 1)
    tail = c[lo:]
    nz = tail > 0
    if not np.any(nz):
        if np.any(c[:lo] != 0):
            # polynomial: entire
            return RadiusFit(BEYOND_WINDOW, -math.inf, 0.0, 0)
        raise InsufficientData("zero series has no radius")
    if np.count_nonzero(nz) < MIN_TAIL_COEFFS:
        raise InsufficientData(
            f"need >= {MIN_TAIL_COEFFS} nonzero tail coefficients, got {np.count_nonzero(nz)}"
        )
    x = idx[nz].astype(np.float64)
    y = np.log(tail[nz])
    slope, _ = np.polyfit(x, y, 1)
    curv = np.polyfit(x, y, 2)[0]
    radius = math.exp(-slope)
    # super-geometric decay: log|c_n| bends down faster than any geometric rate
    if radius > 10 * scale or 2 * curv < -0.25 / n_max:
        return RadiusFit(BEYOND_WINDOW, slope, curv, len(x))
    return RadiusFit(radius, slope, curv, len(x))


def radius_estimate(p: PowerSeries, scale: float = 1.0) -> float | str:
    """1/limsup |c_n|^{1/n} from a log-linear fit over the tail half.

    Returns ``BEYOND_WINDOW`` for polynomials and super-geometric decay.
    """
    return _fit_radius(p, scale).radius


@dataclass(frozen=True)
class RadiusCheck:
    radius_f: float | str
    radius_exp_f: float | str
    passed: bool


def radius_equality_check(f: PowerSeries, tolerance: float = 0.15) -> RadiusCheck:
    c = f.coefficients
    if np.iscomplexobj(c) or np.any(c < 0):
        raise PreconditionError("radius equality needs real nonnegative coefficients")
    r1 = radius_estimate(f)
    r2 = radius_estimate(exp_series(f))
    if r1 == BEYOND_WINDOW or r2 == BEYOND_WINDOW:
        ok = r1 == r2
    else:
        ok = abs(r2 / r1 - 1) <= tolerance
    return RadiusCheck(r1, r2, ok)


def covering_center(s: complex, sigma0: float, sigma2: float, eps: float, j_max: int) -> float | None:
    """First center a = sigma2 + j*eps (j <= j_max) whose disk |z - a| < a - sigma0 holds s."""
    for j in range(1, j_max + 1):
        a = sigma2 + j * eps
        if abs(s - a) < a - sigma0:
            return a
    return None


# --------------------------------------------------------------------------
# finite-difference monotonicity probes


@dataclass(frozen=True)
class MonotoneReport:
    order_checked: int
    grid: tuple[float, ...]
    worst_violation: float
    tolerance: float
    failed_order: int | None
    per_order_min: tuple[float, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.worst_violation >= -self.tolerance


def _probe(f, x0, x1, h, k_max, alternating: bool) -> MonotoneReport:
    if h <= 0 or k_max < 0 or x1 <= x0:
        raise InvalidArgument("need h > 0, k_max >= 0 and x0 < x1")
    count = int(math.floor((x1 - x0) / h + 1e-9)) + 1
    if count < k_max + 1:
        raise InvalidArgument(f"interval too short for k_max={k_max} at step {h}")
    grid = x0 + h * np.arange(count)
    vals = np.array([float(f(x)) for x in grid])
    scale = max(1.0, abs(vals[0]))
    diff = vals.copy()
    worst_margin = math.inf
    worst = (0.0, 0.0)
    failed = None
    mins = []
    for k in range(k_max + 1):
        if k:
            diff = np.diff(diff)
        normed = diff / h**k
        signed = normed * (-1) ** k if alternating else normed
        tol = 1e-8 * scale * math.factorial(k) * h ** (-k)
        low = float(signed.min())
        mins.append(low)
        margin = (low + tol) / tol
        if margin < worst_margin:
            worst_margin = margin
            worst = (low, tol)
        if failed is None and low < -tol:
            failed = k
    return MonotoneReport(k_max, tuple(grid.tolist()), worst[0], worst[1], failed, tuple(mins))


def completely_monotone_probe(f, x0: float, x1: float, h: float, k_max: int) -> MonotoneReport:
    """(-1)^k Delta_h^k f / h^k >= -tol on the grid for every k <= k_max.

    tol = 1e-8 * max(1, |f(x0)|) * k! * h^{-k}. ``worst_violation`` is the
    normalized difference with the smallest margin to its tolerance.
    """
    return _probe(f, x0, x1, h, k_max, alternating=True)


def absolutely_monotone_probe(F, x0: float, x1: float, h: float, k_max: int) -> MonotoneReport:
    return _probe(F, x0, x1, h, k_max, alternating=False)


def corpus() -> dict[str, PowerSeries]:
    """Fixed series with known radii used by the acceptance checks."""
    n = 60
    idx = np.arange(n + 1, dtype=np.float64)
    safe = np.where(idx == 0, 1.0, idx)
    out = {
        "log1m": np.where(idx == 0, 0.0, 1.0 / safe),
        "dilog": np.where(idx == 0, 0.0, 1.0 / safe**2),
        "log1m_half": np.where(idx == 0, 0.0, 1.0 / (safe * 2.0**idx)),
        "z": np.eye(1, n + 1, 1).ravel(),
        "z_plus_half_z2": np.eye(1, n + 1, 1).ravel() + 0.5 * np.eye(1, n + 1, 2).ravel(),
    }
    return {k: PowerSeries(v) for k, v in out.items()}


__all__: Sequence[str] = [
    "PowerSeries", "MonotoneReport", "RadiusCheck", "BEYOND_WINDOW", "exp_series", "log_series",
    "compose_series", "exp_truncation", "taylor_from_dirichlet", "radius_estimate",
    "radius_equality_check", "covering_center", "completely_monotone_probe",
    "absolutely_monotone_probe", "corpus",
]
