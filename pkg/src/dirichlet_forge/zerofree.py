"""Consequence checks for zero-free arguments.

The -9/8 inequality for Re w + Re w^2 on the unit disk, the per-prime 7/8
bound chain, the toy factorization zeta(s)^2 zeta(s+it0) zeta(s-it0), the
Liouville converse example and a finite midpoint-rule deduction engine for
two sets A, B of reals.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, replace
from typing import Iterable, Literal

import numpy as np

from .arith import CoefficientFunction, prime_table
from .beurling import BeurlingSystem, classical_system
from .dirichlet import eval_dirichlet_truncated, square_pair_coefficients, zeta_euler_maclaurin
from .errors import InvalidArgument, PreconditionError, WindowError

BOX_BOUND = -9.0 / 8.0
CHAIN_FACTOR = 7.0 / 8.0
DESCENT_ITERATIONS = 20
DESCENT_SHRINK = 0.5


def re_w_plus_w2(w: complex) -> float:
    return w.real + (w * w).real


def _polar_objective(r: float, theta: float) -> float:
    # Re(w) + Re(w^2) with w = r e^{i theta}
    return r * math.cos(theta) + r * r * math.cos(2 * theta)


def _descend(r: float, theta: float, dr: float, dtheta: float, fix_r: bool, fix_theta: bool):
    r, theta, dr, dtheta = float(r), float(theta), float(dr), float(dtheta)
    best = _polar_objective(r, theta)
    for _ in range(DESCENT_ITERATIONS):
        improved = True
        while improved:
            improved = False
            moves = []
            if not fix_r:
                moves += [(min(1.0, r + dr), theta), (max(0.0, r - dr), theta)]
            if not fix_theta:
                moves += [(r, theta + dtheta), (r, theta - dtheta)]
            for rr, tt in moves:
                val = _polar_objective(rr, tt)
                if val < best:
                    r, theta, best = rr, tt, val
                    improved = True
        dr *= DESCENT_SHRINK
        dtheta *= DESCENT_SHRINK
    return best, r, theta


@dataclass(frozen=True)
class Minimum:
    value: float
    argmins: tuple[complex, ...]


def min_re_w_plus_w2(grid_n: int = 2001, restrict: Literal["disk", "real", "circle"] = "disk") -> Minimum:
    """Minimize Re w + Re w^2 over |w| <= 1 (or the real segment, or the circle).

    A polar grid with ``grid_n`` radii and angles locates the basins; each
    half-plane's best point is then refined by coordinate-shrink descent.
    """
    if grid_n < 100:
        raise InvalidArgument(f"grid_n must be >= 100, got {grid_n}")
    if restrict == "real":
        xs = np.linspace(-1.0, 1.0, grid_n)
        vals = xs + xs * xs
        i = int(np.argmin(vals))
        # real axis in polar form: theta in {0, pi}, r = |x|
        theta0 = 0.0 if xs[i] >= 0 else math.pi
        val, r, th = _descend(abs(xs[i]), theta0, 2.0 / grid_n, 0.0, False, True)
        return Minimum(val, (complex(r * math.cos(th), 0.0),))
    if restrict not in ("disk", "circle"):
        raise InvalidArgument(f"unknown restriction {restrict!r}")
    thetas = np.linspace(-math.pi, math.pi, 2 * grid_n, endpoint=False)
    radii = np.array([1.0]) if restrict == "circle" else np.linspace(0.0, 1.0, grid_n)
    rr, tt = np.meshgrid(radii, thetas, indexing="ij")
    vals = rr * np.cos(tt) + rr * rr * np.cos(2 * tt)
    dtheta = thetas[1] - thetas[0]
    dr = 0.0 if restrict == "circle" else radii[1] - radii[0]
    candidates = []
    for mask in (tt > 0, tt < 0, (tt == 0) | np.isclose(np.abs(tt), math.pi)):
        if not np.any(mask):
            continue
        masked = np.where(mask, vals, np.inf)
        k = np.unravel_index(int(np.argmin(masked)), vals.shape)
        candidates.append(_descend(rr[k], tt[k], dr, dtheta, restrict == "circle", False))
    best = min(c[0] for c in candidates)
    args: list[complex] = []
    for val, r, th in sorted(candidates, key=lambda c: -math.sin(c[2])):
        if val <= best + 1e-9:
            w = cmath.rect(r, th)
            if all(abs(w - u) > 1e-6 for u in args):
                args.append(w)
    return Minimum(best, tuple(args))


@dataclass(frozen=True)
class ChainCheck:
    lhs: float
    mid: float
    rhs: float
    passed: bool


def per_prime_bound_check(a_p: complex, p: int, sigma: float, beta: float | None = None) -> ChainCheck:
    """Per-prime terms of the chain f >= sum_{m<=2} ... >= (7/8) beta^{-2 sigma}.

    ``beta`` replaces p as the base (generalized primes); defaults to p.
    """
    a_p = complex(a_p)
    if abs(a_p) > 1 + 1e-12:
        raise PreconditionError(f"|a_p| = {abs(a_p)} exceeds 1")
    if sigma <= 0:
        raise InvalidArgument("sigma must be > 0")
    base = float(p if beta is None else beta)
    x1 = base ** -sigma
    x2 = x1 * x1
    re1 = a_p.real
    re2 = (a_p * a_p).real
    lhs = 2 * (1 + re1) * x1 + (1 + re2) * x2
    mid = (2 + re1 + re2) * x2
    rhs = CHAIN_FACTOR * x2
    return ChainCheck(lhs, mid, rhs, lhs >= mid - 1e-12 and mid >= rhs - 1e-12)


def chain_bound_sum(a: CoefficientFunction, system: BeurlingSystem | None, sigma: float, n: int) -> ChainCheck:
    """The chain summed over primes p <= n with beta(p) as base."""
    system = system or classical_system()
    if not system.covers(n):
        raise InvalidArgument(f"system {system.label} does not cover n={n}")
    lhs = mid = rhs = 0.0
    ok = True
    for p in prime_table(max(n, 2)).primes:
        c = per_prime_bound_check(a.prime_value(int(p)), int(p), sigma, system.prime_beta(int(p)))
        lhs += c.lhs
        mid += c.mid
        rhs += c.rhs
        ok = ok and c.passed
    return ChainCheck(lhs, mid, rhs, ok)


@dataclass(frozen=True)
class FactorizationCheck:
    direct: float
    via_exp: float
    residual: float


def toy_factorization_check(t0: float, sigma: float, n: int) -> FactorizationCheck:
    """Relative gap between zeta(s)^2 |zeta(s+it0)|^2 and exp of its log series truncated at n."""
    if sigma <= 1:
        raise WindowError(f"sigma={sigma} must exceed 1")
    z = zeta_euler_maclaurin(sigma).value.real
    zt = zeta_euler_maclaurin(complex(sigma, t0)).value
    direct = z * z * abs(zt) ** 2
    f = square_pair_coefficients(CoefficientFunction.vertical_twist(t0), None, "+", n).evaluate(sigma).value.real
    via = math.exp(f)
    return FactorizationCheck(direct, via, abs(direct - via) / abs(direct))


@dataclass(frozen=True)
class LiouvilleCheck:
    target: float
    via_l: float
    via_exp: float
    residual: float


def liouville_converse_check(sigma: float, n: int) -> LiouvilleCheck:
    """Three routes to zeta(2 sigma)^2: the target, zeta^2 L_n^2 and exp f_n."""
    if sigma <= 1:
        raise WindowError(f"sigma={sigma} must exceed 1")
    lam = CoefficientFunction.liouville()
    target = zeta_euler_maclaurin(2 * sigma).value.real ** 2
    z = zeta_euler_maclaurin(sigma).value.real
    l_n = eval_dirichlet_truncated(lam, None, sigma, n).value.real
    via_l = (z * l_n) ** 2
    via_exp = math.exp(square_pair_coefficients(lam, None, "+", n).evaluate(sigma).value.real)
    res = max(abs(via_l - target), abs(via_exp - target)) / target
    return LiouvilleCheck(target, via_l, via_exp, res)


# --------------------------------------------------------------------------
# midpoint-rule deduction on a finite grid

Fact = tuple[str, int, bool]  # ("A" | "B", grid index, member?)


@dataclass(frozen=True)
class PingPongState:
    """Tri-state membership of k*g in A and B for |k| <= K.

    ``a[k + K]`` is True/False/None for known member, known non-member,
    unknown. ``contradiction`` holds the first clash found, if any.
    """

    generator: float
    size: int
    a: tuple[bool | None, ...]
    b: tuple[bool | None, ...]
    disjoint: bool = False
    contradiction: str | None = None
    applications: int = 0

    def __post_init__(self):
        if self.generator == 0:
            raise InvalidArgument("generator must be nonzero")
        if self.size < 1 or len(self.a) != 2 * self.size + 1 or len(self.b) != 2 * self.size + 1:
            raise InvalidArgument("membership tables must cover -K..K")

    @classmethod
    def seeded(cls, facts: Iterable[Fact] = (), generator: float = 1.0, size: int = 8, disjoint: bool = False):
        n = 2 * size + 1
        a: list[bool | None] = [None] * n
        b: list[bool | None] = [None] * n
        a[size] = True
        for which, k, member in facts:
            if abs(k) > size:
                raise InvalidArgument(f"grid index {k} outside -{size}..{size}")
            table = a if which == "A" else b
            if table[k + size] is not None and table[k + size] != member:
                raise InvalidArgument(f"seed clash at {which}[{k}]")
            table[k + size] = member
        return cls(generator, size, tuple(a), tuple(b), disjoint)

    def in_a(self, k: int) -> bool | None:
        return self.a[k + self.size]

    def in_b(self, k: int) -> bool | None:
        return self.b[k + self.size]

    def membership(self, k: int) -> str:
        if self.contradiction is not None:
            return "contradiction"
        ia, ib = self.in_a(k), self.in_b(k)
        if ia and ib:
            return "in-both"
        if ia:
            return "in-A"
        if ib:
            return "in-B"
        return "unknown"

    def members(self, which: str) -> tuple[int, ...]:
        table = self.a if which == "A" else self.b
        return tuple(k - self.size for k, v in enumerate(table) if v)

    def values(self, which: str) -> tuple[float, ...]:
        return tuple(k * self.generator for k in self.members(which))


def _grid_pairs(size: int):
    for x in range(-size, size + 1):
        for y in range(-size, size + 1):
            if x != y and (x + y) % 2 == 0:
                yield (x + y) // 2, x, y


def _close(a: list, b: list, size: int, disjoint: bool) -> tuple[str | None, int]:
    """Propagate to fixpoint in place; returns (contradiction, productive steps)."""
    steps = 0

    def assign(table, name, k, val):
        nonlocal steps
        cur = table[k + size]
        if cur is None:
            table[k + size] = val
            steps += 1
            return None
        if cur != val:
            return f"{name}[{k}] forced both ways"
        return None

    changed = True
    pairs = list(_grid_pairs(size))
    while changed:
        before = steps
        if disjoint:
            for k in range(-size, size + 1):
                if a[k + size] and b[k + size]:
                    return f"{k} in A and B", steps
                if a[k + size]:
                    err = assign(b, "B", k, False)
                elif b[k + size]:
                    err = assign(a, "A", k, False)
                else:
                    err = None
                if err:
                    return err, steps
        for m, x, y in pairs:
            am, ax, by = a[m + size], a[x + size], b[y + size]
            err = None
            if am:
                if ax is not None:
                    err = assign(b, "B", y, ax)
                elif by is not None:
                    err = assign(a, "A", x, by)
            elif ax is not None and by is not None and ax != by:
                err = assign(a, "A", m, False)
            if err:
                return err, steps
        changed = steps != before
    if disjoint:
        for k in range(-size, size + 1):
            if a[k + size] and b[k + size]:
                return f"{k} in A and B", steps
    return None, steps


def pingpong_derive(state: PingPongState) -> PingPongState:
    """Close ``state`` under: for x != y, (x+y)/2 in A implies (x in A iff y in B)."""
    if state.contradiction is not None:
        return state
    a, b = list(state.a), list(state.b)
    clash, steps = _close(a, b, state.size, state.disjoint)
    return replace(state, a=tuple(a), b=tuple(b), contradiction=clash, applications=state.applications + steps)


@dataclass(frozen=True)
class Resolution:
    contradiction: bool
    witness: str | None
    a: tuple[float, ...]
    b: tuple[float, ...]


def _forced_overlap(which: str, k: int, g: float) -> str | None:
    # closure at unit k*g: membership of index 1 forces index +-3 into both sets
    closed = pingpong_derive(PingPongState.seeded([(which, 1, True)], size=3))
    j = 3 if which == "B" else -3
    if closed.in_a(j) and closed.in_b(j):
        return f"{k * g:g} in {which} forces {j * k * g:g} into A and B"
    return None


def pingpong_disjoint_resolve(state: PingPongState) -> Resolution:
    """Resolve seeds under A and B disjoint.

    The midpoint rule is invariant under scaling, so a nonzero seed k is
    refuted by the closure on the grid with unit k*g; this covers seeds
    whose triple lies off the finite grid. Without nonzero seeds the only
    surviving model is A = {0}, B = empty.
    """
    if state.in_a(0) is not True:
        raise PreconditionError("0 must be in A")
    if state.in_b(0):
        return Resolution(True, "0 in A and B", (), ())
    for which in ("B", "A"):
        for k in state.members(which):
            witness = _forced_overlap(which, k, state.generator) if k else None
            if witness:
                return Resolution(True, witness, (), ())
    closed = pingpong_derive(replace(state, disjoint=True))
    if closed.contradiction is not None:
        return Resolution(True, closed.contradiction, (), ())
    return Resolution(False, None, (0.0,), ())


def model_is_valid(a: set[int], b: set[int], size: int) -> bool:
    """Brute-force check of the midpoint rule on every grid pair."""
    for m, x, y in _grid_pairs(size):
        if m in a and ((x in a) != (y in b)):
            return False
    return True


def random_model(rng: random.Random, size: int = 8, b_seed: int | None = None) -> tuple[set[int], set[int]] | None:
    """Random full model with 0 in A (and b_seed in B), or None on a dead end.

    Decisions are drawn at random and propagated; a dead end restarts the caller.
    """
    n = 2 * size + 1
    a: list[bool | None] = [None] * n
    b: list[bool | None] = [None] * n
    a[size] = True
    if b_seed is not None:
        b[b_seed + size] = True
    literals = [(t, k) for t in "AB" for k in range(-size, size + 1)]
    rng.shuffle(literals)
    bias = rng.random()
    if _close(a, b, size, False)[0]:
        return None
    for t, k in literals:
        table = a if t == "A" else b
        if table[k + size] is None:
            table[k + size] = rng.random() < bias
            if _close(a, b, size, False)[0]:
                return None
    return (
        {k - size for k in range(n) if a[k]},
        {k - size for k in range(n) if b[k]},
    )


def soundness_trial(models: int, seed: int = 0, size: int = 8) -> tuple[int, int]:
    """Sample valid models with 0 in A; count violations of the derived conclusions.

    Returns (models checked, counterexamples). For every b in B and nonzero
    a in A whose triple stays on the grid, 3b and -3a must lie in A and B.
    """
    rng = random.Random(seed)
    checked = bad = 0
    reach = size // 3
    while checked < models:
        b_seed = rng.choice([k for k in range(-reach, reach + 1) if k])
        model = random_model(rng, size, b_seed)
        if model is None:
            continue
        a, b = model
        if not model_is_valid(a, b, size):
            raise AssertionError("propagation produced an invalid model")
        checked += 1
        for x in b:
            if abs(3 * x) <= size and not (3 * x in a and 3 * x in b):
                bad += 1
        for x in a:
            if x and abs(3 * x) <= size and not (-3 * x in a and -3 * x in b):
                bad += 1
    return checked, bad


__all__ = [
    "BOX_BOUND", "Minimum", "min_re_w_plus_w2", "re_w_plus_w2", "ChainCheck", "per_prime_bound_check",
    "chain_bound_sum", "FactorizationCheck", "toy_factorization_check", "LiouvilleCheck",
    "liouville_converse_check", "PingPongState", "pingpong_derive", "Resolution",
    "pingpong_disjoint_resolve", "model_is_valid", "random_model", "soundness_trial",
]
