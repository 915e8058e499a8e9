import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirichlet_forge import arith, monotone
from dirichlet_forge.beurling import classical_system
from dirichlet_forge.dirichlet import DirichletStream, EvaluationWindow, log_coefficients, zeta_euler_maclaurin
from dirichlet_forge.errors import DomainError, InsufficientData, InvalidArgument, PreconditionError, ShiftRequired, WindowError
from dirichlet_forge.monotone import (
    BEYOND_WINDOW, PowerSeries, absolutely_monotone_probe, completely_monotone_probe, compose_series,
    exp_series, exp_truncation, log_series, radius_equality_check, radius_estimate, taylor_from_dirichlet,
)

FACT = np.array([1 / math.factorial(n) for n in range(31)])


def basis(k, order=30):
    c = np.zeros(order + 1)
    c[k] = 1.0
    return PowerSeries(c)


@pytest.fixture(scope="module")
def log_zeta_stream():
    return log_coefficients(arith.CoefficientFunction.unit(), classical_system(), 10**6)


class TestPowerSeries:
    def test_validation(self):
        with pytest.raises(InvalidArgument):
            PowerSeries(np.array([]))
        with pytest.raises(InvalidArgument):
            PowerSeries(np.array([1.0, np.nan]))

    def test_csv_roundtrip(self, tmp_path):
        p = PowerSeries(np.array([0.5, -1.25, 3e-17, 2.0]))
        p.to_csv(tmp_path / "s.csv")
        q = PowerSeries.from_csv(tmp_path / "s.csv")
        assert np.array_equal(p.coefficients, q.coefficients)
        assert (tmp_path / "s.csv").read_text().splitlines()[0] == "index,coefficient"

    def test_csv_complex_and_sparse(self, tmp_path):
        (tmp_path / "c.csv").write_text("index,coefficient\n0,1\n3,(1+2j)\n")
        q = PowerSeries.from_csv(tmp_path / "c.csv")
        assert q.coefficients.tolist() == [1, 0, 0, 1 + 2j]

    def test_evaluate(self):
        assert PowerSeries(np.array([1.0, 2.0, 3.0]), center=1.0)(2.0) == pytest.approx(6.0)


class TestExpLog:
    def test_exp_of_z(self):
        assert np.allclose(exp_series(basis(1)).coefficients, FACT)

    def test_exp_of_log_geometric(self):
        f = PowerSeries(np.array([0.0] + [1 / n for n in range(1, 31)]))
        assert np.allclose(exp_series(f).coefficients, 1.0, atol=1e-12)

    def test_exp_of_zero(self):
        assert exp_series(PowerSeries(np.zeros(10))).coefficients.tolist() == [1.0] + [0.0] * 9

    def test_exp_constant_term(self):
        f = PowerSeries(np.array([2.0, 1.0, 0.0, 0.0]))
        assert np.allclose(exp_series(f).coefficients, math.e**2 * FACT[:4])

    def test_log_inverse_examples(self):
        assert np.allclose(log_series(PowerSeries(np.ones(31))).coefficients,
                           [0.0] + [1 / n for n in range(1, 31)])
        assert np.allclose(log_series(PowerSeries(FACT)).coefficients, basis(1).coefficients, atol=1e-14)

    def test_log_domain(self):
        with pytest.raises(DomainError):
            log_series(PowerSeries(np.array([0.0, 1.0])))
        with pytest.raises(DomainError):
            log_series(PowerSeries(np.array([-1.0, 1.0])))

    @given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=21, max_size=21))
    @settings(max_examples=100, deadline=None)
    def test_roundtrip(self, coeffs):
        f = PowerSeries(np.array(coeffs))
        back = exp_series(log_series(exp_series(f)))
        assert np.allclose(back.coefficients, exp_series(f).coefficients, rtol=1e-10, atol=1e-10)

    @given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=30, max_size=30))
    @settings(max_examples=50, deadline=None)
    def test_exp_log_reproduces(self, tail):
        # a dominant constant term keeps F zero-free on the closed unit disk
        F = PowerSeries(np.array([1.0 + sum(abs(t) for t in tail)] + tail))
        assert np.all(np.abs(exp_series(log_series(F)).coefficients - F.coefficients) <= 1e-10 * F[0])


class TestCompose:
    def test_identity(self):
        f = PowerSeries(np.array([0.0, 0.3, -1.0, 2.0]))
        assert np.allclose(compose_series(basis(1, 3), f).coefficients, f.coefficients)

    def test_exp_of_z(self):
        assert np.allclose(compose_series(exp_truncation(20), basis(1, 20)).coefficients, FACT[:21])

    def test_exp_of_z_squared(self):
        got = compose_series(exp_truncation(20), basis(2, 20)).coefficients
        expect = [FACT[k // 2] if k % 2 == 0 else 0.0 for k in range(21)]
        assert np.allclose(got, expect)

    def test_matches_exp_series(self):
        f = PowerSeries(np.array([0.0] + [1 / n**2 for n in range(1, 26)]))
        assert np.allclose(compose_series(exp_truncation(25), f).coefficients, exp_series(f).coefficients)

    def test_shift_required(self):
        with pytest.raises(ShiftRequired):
            compose_series(exp_truncation(5), PowerSeries(np.array([1.0, 1.0])))


class TestRadius:
    def test_geometric(self):
        assert radius_estimate(PowerSeries(np.ones(61))) == pytest.approx(1.0, rel=0.05)
        assert radius_estimate(PowerSeries(0.5 ** np.arange(61))) == pytest.approx(2.0, rel=0.05)

    def test_entire(self):
        assert radius_estimate(exp_series(basis(1, 60))) == BEYOND_WINDOW
        assert radius_estimate(basis(1, 60)) == BEYOND_WINDOW

    def test_insufficient(self):
        with pytest.raises(InsufficientData):
            radius_estimate(PowerSeries(np.ones(10)))
        with pytest.raises(InsufficientData):
            radius_estimate(PowerSeries(np.zeros(40)))

    @pytest.mark.parametrize("name", ["log1m", "dilog", "log1m_half", "z", "z_plus_half_z2"])
    def test_corpus_equality(self, name):
        assert radius_equality_check(monotone.corpus()[name]).passed

    def test_log1m(self):
        rep = radius_equality_check(monotone.corpus()["log1m"])
        assert rep.radius_f == pytest.approx(1.0, rel=0.05)
        assert rep.radius_exp_f == pytest.approx(1.0, rel=0.05)

    def test_negative_coefficient(self):
        with pytest.raises(PreconditionError):
            radius_equality_check(PowerSeries(np.array([0.0, 1.0, -0.5] + [0.1] * 40)))


class TestTaylor:
    def test_coefficients(self, log_zeta_stream):
        p = taylor_from_dirichlet(log_zeta_stream, 2.0, 10, tail_weight=1.0)
        assert p[0] == pytest.approx(float(mpmath.log(mpmath.zeta(2))), abs=1e-7)
        # c_1 of z -> f(2 - z) is -f'(2) = -zeta'(2)/zeta(2)
        assert p[1] == pytest.approx(float(-mpmath.zeta(2, derivative=1) / mpmath.zeta(2)), abs=1e-6)
        assert np.all(p.coefficients >= 0)

    def test_untruncated_terms_match_direct_sum(self, log_zeta_stream):
        n = 1000
        stream = log_coefficients(arith.CoefficientFunction.unit(), classical_system(), n)
        p = taylor_from_dirichlet(stream, 3.0, 4)
        k = np.arange(2, n + 1)
        d = stream.coeffs[2:].real
        for m in range(5):
            assert p[m] == pytest.approx(np.sum(d * np.log(k) ** m * k ** -3.0) / math.factorial(m), rel=1e-12)

    def test_radius_near_one(self, log_zeta_stream):
        p = taylor_from_dirichlet(log_zeta_stream, 2.0, 60, tail_weight=1.0)
        assert radius_estimate(p) == pytest.approx(1.0, rel=0.10)

    def test_window(self, log_zeta_stream):
        with pytest.raises(WindowError):
            taylor_from_dirichlet(log_zeta_stream, 1.0, 5)

    def test_nonnegative_for_nonnegative_stream(self):
        rng = np.random.default_rng(0)
        d = np.concatenate([[0.0], rng.uniform(0, 1, 5000)]).astype(complex)
        stream = DirichletStream(d, classical_system(), 1.0, EvaluationWindow(0.5, 1.0, 1.0))
        assert np.all(taylor_from_dirichlet(stream, 2.5, 30).coefficients >= 0)


def log_zeta(s):
    return math.log(zeta_euler_maclaurin(s).value.real)


class TestProbes:
    def test_log_zeta(self):
        rep = completely_monotone_probe(log_zeta, 1.5, 5.0, 0.1, 6)
        assert rep.passed and rep.failed_order is None and rep.order_checked == 6
        assert rep.grid[0] == 1.5 and rep.grid[-1] == pytest.approx(5.0)

    def test_exp_neg(self):
        assert completely_monotone_probe(lambda x: math.exp(-x), 0.0, 3.0, 0.1, 12).passed

    def test_linear_fails_first_order(self):
        rep = completely_monotone_probe(lambda x: x, 1.5, 5.0, 0.1, 6)
        assert not rep.passed and rep.failed_order == 1
        assert rep.worst_violation < -rep.tolerance

    @pytest.mark.parametrize("fn, x1", [(math.exp, 1.0), (lambda x: 1 / (1 - x), 0.9)])
    def test_absolutely_monotone(self, fn, x1):
        assert absolutely_monotone_probe(fn, 0.0, x1, 0.1, 6).passed

    def test_sin_fails(self):
        assert not absolutely_monotone_probe(math.sin, 0.0, 3.0, 0.1, 6).passed

    def test_propagates_errors(self):
        def boom(x):
            raise ZeroDivisionError

        with pytest.raises(ZeroDivisionError):
            completely_monotone_probe(boom, 0.0, 1.0, 0.1, 2)

    def test_interval_too_short(self):
        with pytest.raises(InvalidArgument):
            completely_monotone_probe(math.exp, 0.0, 0.2, 0.1, 6)

    def test_covering_center(self):
        a = monotone.covering_center(1.2 + 3j, 0.5, 1.0, 0.25, 400)
        assert a is not None and abs((1.2 + 3j) - a) < a - 0.5
        assert monotone.covering_center(0.4, 0.5, 1.0, 0.25, 400) is None
