"""Invariant suite behind ``verify-all``.

Each check is a plain function of the size bound ``max_n`` returning a
flat record with a ``passed`` flag. Checks are independent and
deterministic, so running them on a thread pool and collecting results in
declaration order gives identical output for any thread count.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from . import arith, beurling, dirichlet, monotone, zerofree


def check_divisor_identity(max_n: int) -> dict:
    worst = float(arith.mangoldt_divisor_identity_residuals(max_n)[1:].max())
    return {"max_residual": worst, "passed": worst <= 1e-12}


def check_characters(max_n: int) -> dict:
    bad = 0
    top = min(30, max(3, max_n // 30))
    for q in range(2, top + 1):
        chars = arith.characters_mod(q)
        phi = sum(1 for r in range(q) if math.gcd(r, q) == 1)
        table = np.array([c.values for c in chars])
        gram = table @ table.conj().T
        if len(chars) != phi or not np.allclose(gram, phi * np.eye(phi), atol=1e-9):
            bad += 1
        if sum(c.principal for c in chars) != 1:
            bad += 1
    return {"moduli": top - 1, "failures": bad, "passed": bad == 0}


def check_exp_identity(max_n: int) -> dict:
    zeta3 = dirichlet.zeta_euler_maclaurin(3.0).value.real
    logs = dirichlet.log_coefficients(arith.CoefficientFunction.unit(), None, max_n)
    res_unit = abs(zeta3 - math.exp(logs.evaluate(3.0).value.real))
    lam = arith.CoefficientFunction.liouville()
    target = dirichlet.zeta_euler_maclaurin(6.0).value.real / zeta3
    res_lam = abs(target - math.exp(dirichlet.log_coefficients(lam, None, max_n).evaluate(3.0).value.real))
    return {"unit_residual": res_unit, "liouville_residual": res_lam,
            "passed": res_unit <= 1e-5 and res_lam <= 1e-5}


def check_box_inequality(max_n: int) -> dict:
    m = zerofree.min_re_w_plus_w2(201)
    return {"minimum": m.value,
            "passed": m.value >= zerofree.BOX_BOUND - 1e-9 and abs(m.value - zerofree.BOX_BOUND) <= 1e-6}


def check_prime_chain(max_n: int) -> dict:
    rng = random.Random(7)
    violations = 0
    samples = 2000
    for _ in range(samples):
        r = math.sqrt(rng.random())
        a = r * complex(math.cos(t := rng.uniform(-math.pi, math.pi)), math.sin(t))
        for p in (2, 3, 5, 7, 11):
            for sigma in (0.6, 1.0, 2.0):
                if not zerofree.per_prime_bound_check(a, p, sigma).passed:
                    violations += 1
    return {"samples": samples, "violations": violations, "passed": violations == 0}


def check_radius_corpus(max_n: int) -> dict:
    failed = [name for name, p in monotone.corpus().items() if not monotone.radius_equality_check(p).passed]
    return {"failed": ",".join(failed), "passed": not failed}


def check_log_zeta_monotone(max_n: int) -> dict:
    def log_zeta(s):
        return math.log(dirichlet.zeta_euler_maclaurin(s).value.real)

    good = monotone.completely_monotone_probe(log_zeta, 1.5, 5.0, 0.1, 6)
    linear = monotone.completely_monotone_probe(lambda x: x, 1.5, 5.0, 0.1, 6)
    return {"worst_violation": good.worst_violation, "linear_failed_order": linear.failed_order,
            "passed": good.passed and linear.failed_order == 1}


def check_beurling_identity(max_n: int) -> dict:
    n = min(max_n, 10**4)
    worst = 0.0
    for system in (beurling.classical_system(), beurling.quadratic_field_system(beurling.QuadraticFieldSpec(-1))):
        worst = max(worst, float(beurling.beur_mangoldt_identity_residuals(system, n)[1:].max()))
    return {"max_residual": worst, "passed": worst <= 1e-10}


def check_gaussian_factorization(max_n: int) -> dict:
    gauss = beurling.quadratic_field_system(beurling.QuadraticFieldSpec(-1))
    chi4 = arith.character(4, 1)
    worst = 0.0
    for s in (3.0, 4.0):
        z = beurling.zeta_system_eval(gauss, s, max_n).value.real
        ref = dirichlet.zeta_euler_maclaurin(s).value.real * dirichlet.l_function(chi4, s).value.real
        worst = max(worst, abs(z - ref))
    return {"max_gap": worst, "passed": worst <= 10 / math.sqrt(max_n)}


def check_divergence_probe(max_n: int) -> dict:
    ok = True
    for system in (beurling.classical_system(), beurling.quadratic_field_system(beurling.QuadraticFieldSpec(-1))):
        ok = ok and beurling.prime_sum_divergence_probe(system, (1.5, 1.2, 1.05), max_n).strictly_increasing
    return {"passed": ok}


def check_liouville_converse(max_n: int) -> dict:
    r = zerofree.liouville_converse_check(3.0, max_n)
    return {"residual": r.residual, "passed": r.residual <= 1e-4}


def check_pingpong(max_n: int) -> dict:
    d = zerofree.pingpong_derive(zerofree.PingPongState.seeded([("B", 1, True)]))
    forward = d.in_a(3) and d.in_b(3) and d.in_a(-3)
    resolved = zerofree.pingpong_disjoint_resolve(zerofree.PingPongState.seeded())
    clash = zerofree.pingpong_disjoint_resolve(zerofree.PingPongState.seeded([("A", 2, True)]))
    models, bad = zerofree.soundness_trial(200, seed=3)
    ok = bool(forward) and not resolved.contradiction and resolved.b == () and clash.contradiction and bad == 0
    return {"models": models, "counterexamples": bad, "passed": ok}


CHECKS: tuple[tuple[str, Callable[[int], dict]], ...] = (
    ("arith.divisor_identity", check_divisor_identity),
    ("arith.characters", check_characters),
    ("dirichlet.exp_identity", check_exp_identity),
    ("zerofree.box_inequality", check_box_inequality),
    ("zerofree.prime_chain", check_prime_chain),
    ("monotone.radius_corpus", check_radius_corpus),
    ("monotone.log_zeta", check_log_zeta_monotone),
    ("beurling.mangoldt_identity", check_beurling_identity),
    ("beurling.gaussian_factorization", check_gaussian_factorization),
    ("beurling.divergence_probe", check_divergence_probe),
    ("zerofree.liouville_converse", check_liouville_converse),
    ("zerofree.pingpong", check_pingpong),
)


def run_all(max_n: int = 10**4, threads: int = 1) -> list[dict]:
    def run(item):
        name, fn = item
        try:
            rec = fn(max_n)
        except Exception as exc:  # a crashing check is a failed check, not a crashed run
            rec = {"error": f"{type(exc).__name__}: {exc}", "passed": False}
        return {"check": name, **rec}

    if threads <= 1:
        return [run(c) for c in CHECKS]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, CHECKS))
