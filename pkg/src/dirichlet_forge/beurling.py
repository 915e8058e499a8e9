"""Generalized (Beurling) prime systems.

A system assigns a real beta(p) > 1 to every rational prime and extends it
completely multiplicatively. The classical system is beta(n) = n; quadratic
fields give beta(n) = norm of the ideal attached to n through a fixed
bijection between rational primes and prime ideals.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .arith import factorize, table_for
from .errors import InvalidArgument, OutOfRange, WindowError

_REL_SLACK = 1e-12


class BeurlingSystem:
    """Completely multiplicative beta: N+ -> R with beta(p) >= beta0 > 1.

    ``prime_beta`` is ``None`` for the classical system, otherwise a dense
    float array with beta(p) at index p for every prime p <= ``max_prime``.
    Instances are immutable; derived tables are cached per instance.
    """

    def __init__(self, label, prime_beta, beta0, degree_bound, abscissa, max_prime=None):
        if not beta0 > 1:
            raise InvalidArgument(f"beta0 must exceed 1, got {beta0}")
        if degree_bound < 1:
            raise InvalidArgument(f"degree bound must be >= 1, got {degree_bound}")
        self._label = label
        self._prime_beta = prime_beta
        self._beta0 = float(beta0)
        self._degree = float(degree_bound)
        self._abscissa = float(abscissa)
        self._max_prime = max_prime
        self._cache = {}
        self._lock = threading.Lock()
        if prime_beta is not None:
            prime_beta.setflags(write=False)
            self._check_prime_values()

    label = property(lambda self: self._label)
    beta0 = property(lambda self: self._beta0)
    degree_bound = property(lambda self: self._degree)
    abscissa = property(lambda self: self._abscissa, doc="Abscissa sigma_1 (an upper bound for custom tables).")
    max_prime = property(lambda self: self._max_prime)

    @property
    def is_classical(self) -> bool:
        return self._prime_beta is None

    def __repr__(self):
        return f"BeurlingSystem({self._label!r}, beta0={self._beta0}, D={self._degree:g})"

    def _check_prime_values(self):
        table = table_for(self._max_prime)
        primes = table.primes[table.primes <= self._max_prime]
        vals = self._prime_beta[primes]
        floor = np.maximum(self._beta0, primes.astype(np.float64) ** (1.0 / self._degree))
        bad = np.flatnonzero(vals < floor * (1 - _REL_SLACK))
        if bad.size:
            p = int(primes[bad[0]])
            raise InvalidArgument(
                f"{self._label}: beta({p})={vals[bad[0]]} violates beta(p) >= max(beta0, p^(1/D))"
            )

    def prime_beta(self, p: int) -> float:
        if self._prime_beta is None:
            return float(p)
        if p > self._max_prime:
            raise OutOfRange(f"{self._label} defines beta only for primes <= {self._max_prime}")
        return float(self._prime_beta[p])

    def covers(self, n: int) -> bool:
        if self._max_prime is None:
            return True
        if n <= self._max_prime:
            return True
        table = table_for(n)
        return not np.any((table.primes > self._max_prime) & (table.primes <= n))

    def _require(self, n: int):
        if not self.covers(n):
            raise OutOfRange(f"{self._label} defines beta only for primes <= {self._max_prime}, need {n}")

    def _cached(self, key, build):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        out = build()
        out.setflags(write=False)
        with self._lock:
            # keep only the largest table of each kind
            old = [k for k in self._cache if k[0] == key[0]]
            for k in old:
                del self._cache[k]
            self._cache[key] = out
        return out

    def _lookup(self, kind, n):
        with self._lock:
            for (k, m), arr in self._cache.items():
                if k == kind and m >= n:
                    return arr[: n + 1]
        return None

    def log_prime_beta_array(self, n: int) -> np.ndarray:
        self._require(n)
        table = table_for(n)
        out = np.zeros(n + 1, dtype=np.float64)
        primes = table.primes[table.primes <= n]
        if self._prime_beta is None:
            out[primes] = np.log(primes.astype(np.float64))
        else:
            out[primes] = np.log(self._prime_beta[primes])
        return out

    def log_beta_values(self, n: int) -> np.ndarray:
        """log beta(k) for k = 0..n (entry 0 is 0)."""
        hit = self._lookup("logb", n)
        if hit is not None:
            return hit

        def build():
            table = table_for(n)
            return _kernels.extend_additive(table.smallest_factor, self.log_prime_beta_array(n), n)

        return self._cached(("logb", n), build)

    def beta_values(self, n: int) -> np.ndarray:
        """beta(k) for k = 0..n as a product of prime values (no logs)."""
        hit = self._lookup("beta", n)
        if hit is not None:
            return hit

        def build():
            self._require(n)
            table = table_for(n)
            primes = table.primes[table.primes <= n]
            pv = np.zeros(n + 1, dtype=np.complex128)
            pv[primes] = primes if self._prime_beta is None else self._prime_beta[primes]
            return _kernels.extend_multiplicative(table.smallest_factor, pv, n).real.copy()

        return self._cached(("beta", n), build)

    def mangoldt_values(self, n: int) -> np.ndarray:
        """Lambda_beta(k) for k = 0..n."""
        from .arith import prime_power_bases

        base = prime_power_bases(n)
        lp = self.log_prime_beta_array(n)
        return np.where(base > 0, lp[base], 0.0)


def classical_system() -> BeurlingSystem:
    return _CLASSICAL


_CLASSICAL = BeurlingSystem("classical", None, 2.0, 1.0, 1.0)


# --------------------------------------------------------------------------
# quadratic fields


def _is_squarefree(d: int) -> bool:
    return all(e == 1 for _, e in factorize(abs(d)).factors)


@dataclass(frozen=True)
class QuadraticFieldSpec:
    d: int
    norm_limit: int = 1_200_000

    def __post_init__(self):
        if self.d in (0, 1) or not _is_squarefree(self.d):
            raise InvalidArgument(f"d must be squarefree and not 0 or 1, got {self.d}")
        if self.norm_limit < 4:
            raise InvalidArgument("norm limit must be >= 4")

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d


def kronecker_symbol(disc: int, p: int) -> int:
    """(disc / p) for a rational prime p; decides the splitting of p."""
    if disc % p == 0:
        return 0
    if p == 2:
        return 1 if disc % 8 in (1, 7) else -1
    r = pow(disc % p, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def splitting_type(spec: QuadraticFieldSpec, p: int) -> str:
    k = kronecker_symbol(spec.discriminant, p)
    return {1: "split", -1: "inert", 0: "ramified"}[k]


def prime_ideal_norms(spec: QuadraticFieldSpec) -> np.ndarray:
    """Sorted multiset of prime-ideal norms <= spec.norm_limit."""
    x = spec.norm_limit
    table = table_for(x)
    disc = spec.discriminant
    norms = []
    for p in table.primes[table.primes <= x].tolist():
        k = kronecker_symbol(disc, p)
        if k == 1:
            norms += (p, p)
        elif k == 0:
            norms.append(p)
        elif p * p <= x:
            norms.append(p * p)
    # ties from split primes stay adjacent, after every smaller norm
    return np.sort(np.array(norms, dtype=np.int64), kind="stable")


def quadratic_field_system(spec: QuadraticFieldSpec) -> BeurlingSystem:
    """Assign the k-th smallest prime-ideal norm to the k-th rational prime."""
    norms = prime_ideal_norms(spec)
    table = table_for(spec.norm_limit)
    primes = table.primes
    count = min(len(norms), len(primes))
    if count == 0:
        raise OutOfRange("norm list exhausted before the first prime")
    max_prime = int(primes[count - 1])
    dense = np.zeros(max_prime + 1, dtype=np.float64)
    dense[primes[:count]] = norms[:count]
    return BeurlingSystem(
        f"quadratic:{spec.d}", dense, float(norms[0]), 2.0, 1.0, max_prime=max_prime
    )


def system_from_table(label, values, beta0, degree_bound, abscissa=None) -> BeurlingSystem:
    """Custom system from a mapping p -> beta(p) covering 2..max_prime."""
    if not values:
        raise InvalidArgument("empty prime table")
    top = max(values)
    table = table_for(top)
    primes = table.primes[table.primes <= top].tolist()
    max_prime = None
    for p in primes:
        if p not in values:
            break
        max_prime = p
    if max_prime is None:
        raise InvalidArgument("custom table must define beta(2)")
    for p in values:
        if p < 2 or factorize(p).factors != ((p, 1),):
            raise InvalidArgument(f"{p} is not prime")
    dense = np.zeros(max_prime + 1, dtype=np.float64)
    for p in primes:
        if p > max_prime:
            break
        dense[p] = float(values[p])
    return BeurlingSystem(
        label, dense, beta0, degree_bound,
        degree_bound if abscissa is None else abscissa, max_prime=max_prime,
    )


def load_system_file(path: str | Path) -> BeurlingSystem:
    """Read ``#beta0=<v> degree=<D>`` then ``p beta_p`` lines."""
    path = Path(path)
    lines = path.read_text().splitlines()
    header = None
    values: dict[int, float] = {}
    for lineno, raw in enumerate(lines, 1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if header is None and body.startswith("beta0"):
                try:
                    header = dict(tok.split("=", 1) for tok in body.split())
                    header = {k: float(v) for k, v in header.items()}
                except ValueError:
                    raise InvalidArgument(f"{path}:{lineno}: bad header {raw!r}") from None
            continue
        parts = stripped.split("#", 1)[0].split()
        if len(parts) != 2:
            raise InvalidArgument(f"{path}:{lineno}: expected 'p beta_p', got {raw!r}")
        try:
            values[int(parts[0])] = float(parts[1])
        except ValueError as exc:
            raise InvalidArgument(f"{path}:{lineno}: {exc}") from None
    if header is None or "beta0" not in header or "degree" not in header:
        raise InvalidArgument(f"{path}: missing '#beta0=<v> degree=<D>' header")
    return system_from_table(
        f"custom:{path}", values, header["beta0"], header["degree"], header.get("sigma1")
    )


def parse_system(text: str) -> BeurlingSystem:
    """``classical`` | ``quadratic:<d>`` | ``custom:<path>``."""
    if text == "classical":
        return classical_system()
    kind, _, arg = text.partition(":")
    if kind == "quadratic" and arg:
        return quadratic_field_system(QuadraticFieldSpec(int(arg)))
    if kind == "custom" and arg:
        return load_system_file(arg)
    raise InvalidArgument(f"unknown system {text!r}")


# --------------------------------------------------------------------------
# pointwise operations


def beta_value(system: BeurlingSystem, n: int) -> float:
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    out = 1.0
    for p, e in factorize(n).factors:
        out *= system.prime_beta(p) ** e
    return out


def beur_von_mangoldt(system: BeurlingSystem, n: int) -> float:
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    f = factorize(n).factors
    if len(f) == 1:
        return math.log(system.prime_beta(f[0][0]))
    return 0.0


def beur_mangoldt_identity_residual(system: BeurlingSystem, n: int) -> float:
    """|sum_{d | n} Lambda_beta(d) - log beta(n)| with explicit divisors."""
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    total = 0.0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += beur_von_mangoldt(system, d)
            if d * d != n:
                total += beur_von_mangoldt(system, n // d)
        d += 1
    return abs(total - math.log(beta_value(system, n)))


def beur_mangoldt_identity_residuals(system: BeurlingSystem, n: int) -> np.ndarray:
    sums = _kernels.divisor_sums(system.mangoldt_values(n), n)
    beta = system.beta_values(n).copy()
    beta[0] = 1.0
    out = np.abs(sums - np.log(beta))
    out[0] = 0.0
    return out


def zeta_system_eval(system: BeurlingSystem, s, n: int):
    """Truncated Z(s) = sum_{k <= n} beta(k)^{-s}."""
    from .arith import CoefficientFunction
    from .dirichlet import eval_dirichlet_truncated

    return eval_dirichlet_truncated(CoefficientFunction.unit(), system, s, n)


@dataclass(frozen=True)
class DivergenceProbe:
    sigmas: tuple[float, ...]
    values: tuple[float, ...]

    @property
    def strictly_increasing(self) -> bool:
        return all(b > a for a, b in zip(self.values, self.values[1:]))


def prime_sum(system: BeurlingSystem, sigma: float, n: int) -> float:
    """sum_{p <= n} beta(p)^{-sigma}."""
    lp = system.log_prime_beta_array(n)
    table = table_for(n)
    primes = table.primes[table.primes <= n]
    return math.fsum(np.exp(-sigma * lp[primes]).tolist())


def prime_sum_divergence_probe(system: BeurlingSystem, sigmas, n: int) -> DivergenceProbe:
    sigmas = tuple(float(s) for s in sigmas)
    for s in sigmas:
        if s <= system.abscissa:
            raise WindowError(f"sigma={s} not above the abscissa {system.abscissa}")
    return DivergenceProbe(sigmas, tuple(prime_sum(system, s, n) for s in sigmas))
