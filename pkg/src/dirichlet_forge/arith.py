"""Sieving, factorization, classical arithmetic functions, Dirichlet
characters and completely multiplicative coefficient functions."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Mapping

import numpy as np

from . import _kernels
from .errors import IncompleteDefinition, InvalidArgument, OutOfRange

DEFAULT_SIEVE_LIMIT = 10**6
MAX_CHARACTER_MODULUS = 10**6


@dataclass(frozen=True, eq=False)
class PrimeTable:
    limit: int
    primes: np.ndarray
    smallest_factor: np.ndarray

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise OutOfRange(f"{n} exceeds sieve limit {self.limit}")
        return n >= 2 and int(self.smallest_factor[n]) == n


def sieve_primes(limit: int) -> PrimeTable:
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    lpf = _kernels.lpf_sieve(int(limit))
    idx = np.arange(limit + 1)
    primes = idx[(lpf == idx) & (idx >= 2)].astype(np.int64)
    lpf.setflags(write=False)
    primes.setflags(write=False)
    return PrimeTable(int(limit), primes, lpf)


@lru_cache(maxsize=8)
def prime_table(limit: int = DEFAULT_SIEVE_LIMIT) -> PrimeTable:
    """Cached ``sieve_primes``; tables are read-only so sharing is safe."""
    return sieve_primes(limit)


def table_for(n: int) -> PrimeTable:
    """Smallest cached table covering ``n`` (at least the default limit)."""
    limit = DEFAULT_SIEVE_LIMIT
    while limit < n:
        limit *= 2
    return prime_table(limit)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)


def _trial_factor(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def factorize(n: int, table: PrimeTable | None = None) -> Factorization:
    """Prime factorization of ``n`` by repeated least-prime-factor division.

    Without a table, numbers up to the default sieve limit use the shared
    table and larger ones fall back to trial division.
    """
    n = int(n)
    if n < 1:
        raise InvalidArgument(f"factorize needs n >= 1, got {n}")
    if table is None:
        if n > DEFAULT_SIEVE_LIMIT:
            return Factorization(n, tuple(_trial_factor(n)))
        table = prime_table()
    if n > table.limit:
        raise OutOfRange(f"{n} exceeds sieve limit {table.limit}")
    lpf = table.smallest_factor
    out: list[tuple[int, int]] = []
    m = n
    while m > 1:
        p = int(lpf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return Factorization(n, tuple(out))


def von_mangoldt(n: int) -> float:
    if n < 1:
        raise InvalidArgument(f"von_mangoldt needs n >= 1, got {n}")
    f = factorize(n).factors
    if len(f) == 1:
        return math.log(f[0][0])
    return 0.0


def big_omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    return sum(e for _, e in factorize(n).factors)


def liouville(n: int) -> int:
    if n < 1:
        raise InvalidArgument(f"liouville needs n >= 1, got {n}")
    return -1 if big_omega(n) % 2 else 1


# --------------------------------------------------------------------------
# Dirichlet characters


def _phi(q: int) -> int:
    out = q
    for p, _ in factorize(q).factors:
        out = out // p * (p - 1)
    return out


def _primitive_root_prime_power(p: int, e: int) -> int:
    phi_p = p - 1
    qs = [r for r, _ in factorize(phi_p).factors] if phi_p > 1 else []
    g = 2 if p > 2 else 1
    while any(pow(g, phi_p // r, p) == 1 for r in qs):
        g += 1
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _UnitGroup:
    """Cyclic decomposition of (Z/qZ)^*: one row per cyclic factor."""

    modulus: int
    orders: tuple[int, ...]
    units: np.ndarray  # residues coprime to q, ascending
    logs: np.ndarray  # shape (len(units), len(orders)); discrete logs


def _cyclic_logs(m: int, g: int, order: int) -> dict[int, int]:
    table = {}
    x = 1
    for k in range(order):
        table[x] = k
        x = x * g % m
    return table


@lru_cache(maxsize=64)
def _unit_group(q: int) -> _UnitGroup:
    comps = []  # (prime-power modulus, kind, generator, order)
    for p, e in factorize(q).factors:
        m = p**e
        if p == 2:
            if e == 2:
                comps.append((m, "cyc", 3, 2))
            elif e >= 3:
                comps.append((m, "sign", m - 1, 2))
                comps.append((m, "five", 5, 2 ** (e - 2)))
        else:
            comps.append((m, "cyc", _primitive_root_prime_power(p, e), m // p * (p - 1)))
    units = np.array([r for r in range(1, q + 1) if math.gcd(r, q) == 1], dtype=np.int64) % q
    units.sort()
    logs = np.zeros((len(units), len(comps)), dtype=np.int64)
    tables = {}
    for j, (m, kind, g, order) in enumerate(comps):
        if kind in ("cyc", "five"):
            tables[j] = _cyclic_logs(m, g, order)
    for i, r in enumerate(units.tolist()):
        for j, (m, kind, g, order) in enumerate(comps):
            x = r % m
            if kind == "sign":
                logs[i, j] = 0 if x % 4 == 1 else 1
            elif kind == "five":
                if x % 4 == 3:
                    x = (m - x) % m
                logs[i, j] = tables[j][x]
            else:
                logs[i, j] = tables[j][x]
    units.setflags(write=False)
    logs.setflags(write=False)
    return _UnitGroup(q, tuple(c[3] for c in comps), units, logs)


@lru_cache(maxsize=64)
def _roots_of_unity(m: int) -> np.ndarray:
    """exp(2*pi*i*k/m) for k < m from exact rational angles."""
    out = np.empty(m, dtype=np.complex128)
    for k in range(m):
        f = Fraction(k, m)
        if 4 % f.denominator == 0:
            out[k] = (1, 1j, -1, -1j)[int(f * 4)]
        else:
            out[k] = cmath.exp(2j * math.pi * float(f))
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    modulus: int
    index: int
    exponents: tuple[int, ...]
    values: np.ndarray = field(repr=False)
    principal: bool

    def __call__(self, n: int) -> complex:
        return complex(self.values[int(n) % self.modulus])

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0))

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.exponents == other.exponents

    def __hash__(self):
        return hash((self.modulus, self.exponents))


def _build_character(group: _UnitGroup, index: int, exps: tuple[int, ...]) -> DirichletCharacter:
    q = group.modulus
    big = math.lcm(*group.orders) if group.orders else 1
    weights = np.array([k * (big // o) for k, o in zip(exps, group.orders)], dtype=np.int64)
    num = (group.logs @ weights) % big if group.orders else np.zeros(len(group.units), np.int64)
    values = np.zeros(q, dtype=np.complex128)
    values[group.units] = _roots_of_unity(big)[num]
    values.setflags(write=False)
    return DirichletCharacter(q, index, tuple(exps), values, not any(exps))


def _check_modulus(q: int) -> None:
    if q < 2:
        raise InvalidArgument(f"character modulus must be >= 2, got {q}")
    if q > MAX_CHARACTER_MODULUS:
        raise InvalidArgument(f"character modulus {q} exceeds {MAX_CHARACTER_MODULUS}")


def characters_mod(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, ordered lexicographically by exponent
    tuple over the cyclic decomposition; index 0 is principal."""
    _check_modulus(q)
    group = _unit_group(q)
    ranges = [range(o) for o in group.orders]
    return [_build_character(group, i, e) for i, e in enumerate(product(*ranges))]


@lru_cache(maxsize=128)
def character(q: int, index: int) -> DirichletCharacter:
    _check_modulus(q)
    group = _unit_group(q)
    total = math.prod(group.orders)
    if not 0 <= index < total:
        raise InvalidArgument(f"character index {index} out of range for modulus {q} ({total} characters)")
    exps = []
    rem = index
    for o in reversed(group.orders):
        exps.append(rem % o)
        rem //= o
    return _build_character(group, index, tuple(reversed(exps)))


# --------------------------------------------------------------------------
# completely multiplicative coefficient functions

_KINDS = ("unit", "liouville", "character", "twist", "custom")


@dataclass(frozen=True)
class CoefficientFunction:
    """Bounded completely multiplicative a(n), fixed by its prime values.

    ``params`` is kind-specific: ``(q, index)`` for characters, ``(t0,)`` for
    the vertical twist a(n) = n^{-i t0}, a sorted tuple of ``(p, value)``
    pairs for custom tables.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidArgument(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "custom":
            for p, v in self.params:
                if abs(v) > 1 + 1e-12:
                    raise InvalidArgument(f"prime value at {p} has modulus {abs(v)} > 1")

    @classmethod
    def unit(cls) -> "CoefficientFunction":
        return cls("unit")

    @classmethod
    def liouville(cls) -> "CoefficientFunction":
        return cls("liouville")

    @classmethod
    def character(cls, q: int, index: int) -> "CoefficientFunction":
        character(q, index)  # validates
        return cls("character", (int(q), int(index)))

    @classmethod
    def vertical_twist(cls, t0: float) -> "CoefficientFunction":
        return cls("twist", (float(t0),))

    @classmethod
    def custom(cls, values: Mapping[int, complex]) -> "CoefficientFunction":
        return cls("custom", tuple(sorted((int(p), complex(v)) for p, v in values.items())))

    @property
    def label(self) -> str:
        if self.kind == "character":
            return "character:{}:{}".format(*self.params)
        if self.kind == "twist":
            return f"twist:{self.params[0]!r}"
        return self.kind

    @property
    def is_real(self) -> bool:
        if self.kind in ("unit", "liouville"):
            return True
        if self.kind == "character":
            return character(*self.params).is_real
        if self.kind == "twist":
            return self.params[0] == 0.0
        return all(complex(v).imag == 0 for _, v in self.params)

    def prime_value(self, p: int) -> complex:
        if self.kind == "unit":
            return 1.0 + 0j
        if self.kind == "liouville":
            return -1.0 + 0j
        if self.kind == "character":
            return character(*self.params)(p)
        if self.kind == "twist":
            return cmath.exp(-1j * self.params[0] * math.log(p))
        table = dict(self.params)
        if p not in table:
            raise IncompleteDefinition(f"custom table has no value for prime {p}")
        return table[p]

    def __call__(self, n: int) -> complex:
        return extend_completely_multiplicative(self, n)

    def prime_value_array(self, table: PrimeTable, n: int) -> np.ndarray:
        """Dense array indexed by integers <= n holding a(p) at primes."""
        out = np.zeros(n + 1, dtype=np.complex128)
        primes = table.primes[table.primes <= n]
        if self.kind == "unit":
            out[primes] = 1.0
        elif self.kind == "liouville":
            out[primes] = -1.0
        elif self.kind == "character":
            chi = character(*self.params)
            out[primes] = chi.values[primes % chi.modulus]
        elif self.kind == "twist":
            out[primes] = np.exp(-1j * self.params[0] * np.log(primes.astype(np.float64)))
        else:
            tab = dict(self.params)
            missing = [int(p) for p in primes if int(p) not in tab]
            if missing:
                raise IncompleteDefinition(f"custom table has no value for prime {missing[0]}")
            out[primes] = [tab[int(p)] for p in primes]
        return out


def extend_completely_multiplicative(f: CoefficientFunction, n: int) -> complex:
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    out = 1.0 + 0j
    for p, e in factorize(n).factors:
        out *= f.prime_value(p) ** e
    return out


@lru_cache(maxsize=8)
def coefficient_values(f: CoefficientFunction, n: int) -> np.ndarray:
    """a(0..n) with a(0)=0, via the compiled multiplicative extension."""
    table = table_for(n)
    out = _kernels.extend_multiplicative(table.smallest_factor, f.prime_value_array(table, n), n)
    out.setflags(write=False)
    return out


def load_prime_values(path: str | Path) -> CoefficientFunction:
    """Read a custom prime-value table: lines ``p re im``, ``#`` comments."""
    values: dict[int, complex] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InvalidArgument(f"{path}:{lineno}: expected 'p re im', got {raw!r}")
        try:
            p = int(parts[0])
            v = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise InvalidArgument(f"{path}:{lineno}: {exc}") from None
        if p < 2 or factorize(p).factors != ((p, 1),):
            raise InvalidArgument(f"{path}:{lineno}: {p} is not prime")
        values[p] = v
    return CoefficientFunction.custom(values)


# --------------------------------------------------------------------------
# vectorized tables and the divisor identity


@lru_cache(maxsize=4)
def prime_power_bases(n: int) -> np.ndarray:
    """base[k] = p when k = p^j (j >= 1), else 0."""
    out = _kernels.prime_power_base(table_for(n).smallest_factor, n)
    out.setflags(write=False)
    return out


def mangoldt_values(n: int) -> np.ndarray:
    base = prime_power_bases(n)
    return np.where(base > 0, np.log(np.maximum(base, 1).astype(np.float64)), 0.0)


def liouville_values(n: int) -> np.ndarray:
    return coefficient_values(CoefficientFunction.liouville(), n).real.astype(np.int64)


def mangoldt_divisor_identity_residual(n: int) -> float:
    """|sum_{d | n} Lambda(d) - log n| by explicit divisor enumeration."""
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    total = 0.0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += von_mangoldt(d)
            if d * d != n:
                total += von_mangoldt(n // d)
        d += 1
    return abs(total - math.log(n))


def mangoldt_divisor_identity_residuals(n: int) -> np.ndarray:
    """Residuals for every k <= n at once (index 0 unused, set to 0)."""
    sums = _kernels.divisor_sums(mangoldt_values(n), n)
    k = np.arange(n + 1, dtype=np.float64)
    k[0] = 1.0
    out = np.abs(sums - np.log(k))
    out[0] = 0.0
    return out
