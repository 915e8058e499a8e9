import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirichlet_forge import arith
from dirichlet_forge.arith import CoefficientFunction
from dirichlet_forge.errors import IncompleteDefinition, InvalidArgument, OutOfRange

from conftest import trial_factor, trial_is_prime


class TestSieve:
    def test_small(self):
        assert arith.sieve_primes(10).primes.tolist() == [2, 3, 5, 7]
        assert arith.sieve_primes(2).primes.tolist() == [2]

    def test_thirty_against_trial_division(self):
        t = arith.sieve_primes(30)
        assert t.primes.tolist() == [n for n in range(31) if trial_is_prime(n)]
        assert len(t.primes) == 10 and t.primes[-1] == 29

    def test_invariants(self):
        t = arith.sieve_primes(3000)
        for p in t.primes:
            assert t.smallest_factor[p] == p
        for n in range(2, 3001):
            assert n % t.smallest_factor[n] == 0
        assert t.is_prime(2999) and not t.is_prime(3000)

    def test_rejects_small_limit(self):
        with pytest.raises(InvalidArgument):
            arith.sieve_primes(1)

    def test_table_is_read_only(self):
        with pytest.raises(ValueError):
            arith.sieve_primes(10).primes[0] = 4


class TestFactorize:
    @pytest.mark.parametrize("n, expect", [(360, [(2, 3), (3, 2), (5, 1)]), (1, []), (97, [(97, 1)])])
    def test_examples(self, n, expect):
        assert list(arith.factorize(n, arith.sieve_primes(400)).factors) == expect

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            arith.factorize(500, arith.sieve_primes(400))

    @given(st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=200, deadline=None)
    def test_matches_trial_division(self, n):
        f = arith.factorize(n)
        assert list(f.factors) == (trial_factor(n) if n > 1 else [])
        assert f.value() == n

    def test_large_without_table_uses_trial_division(self):
        n = 2**5 * 1_000_003
        assert list(arith.factorize(n).factors) == [(2, 5), (1_000_003, 1)]


class TestScalarFunctions:
    def test_von_mangoldt(self):
        assert arith.von_mangoldt(8) == pytest.approx(0.6931472, abs=1e-7)
        assert arith.von_mangoldt(6) == 0
        assert arith.von_mangoldt(1) == 0

    @pytest.mark.parametrize("n, lam, omega", [(1, 1, 0), (12, -1, 3), (36, 1, 4)])
    def test_liouville(self, n, lam, omega):
        assert arith.liouville(n) == lam
        assert arith.big_omega(n) == omega

    def test_liouville_table_completely_multiplicative(self):
        lam = arith.liouville_values(10**4)
        rng = np.random.default_rng(5)
        for m, n in rng.integers(1, 100, size=(500, 2)):
            assert lam[m * n] == lam[m] * lam[n]

    def test_mangoldt_table_matches_scalar(self):
        tab = arith.mangoldt_values(2000)
        for n in range(1, 2001):
            assert tab[n] == pytest.approx(arith.von_mangoldt(n), abs=1e-15)


class TestDivisorIdentity:
    @pytest.mark.parametrize("n", [12, 1, 97])
    def test_examples(self, n):
        assert arith.mangoldt_divisor_identity_residual(n) <= 1e-12

    def test_vectorized_agrees_with_enumeration(self):
        res = arith.mangoldt_divisor_identity_residuals(3000)
        for n in (1, 2, 360, 2048, 2999):
            assert res[n] == pytest.approx(arith.mangoldt_divisor_identity_residual(n), abs=1e-13)


def _phi(q):
    return sum(1 for r in range(1, q + 1) if math.gcd(r, q) == 1)


class TestCharacters:
    def test_mod4(self):
        chars = arith.characters_mod(4)
        assert len(chars) == 2 and chars[0].principal
        assert chars[1](3) == -1

    def test_mod3(self):
        chars = arith.characters_mod(3)
        assert len(chars) == 2 and chars[1](2) == -1

    def test_mod5_values_at_two(self):
        vals = {complex(np.round(c(2), 12)) for c in arith.characters_mod(5)}
        assert vals == {1, 1j, -1, -1j}

    @pytest.mark.parametrize("q", list(range(2, 101)))
    def test_invariants(self, q):
        chars = arith.characters_mod(q)
        phi = _phi(q)
        assert len(chars) == phi
        assert sum(c.principal for c in chars) == 1
        assert len({tuple(np.round(c.values, 9)) for c in chars}) == phi
        units = [r for r in range(q) if math.gcd(r, q) == 1]
        for c in chars[: min(len(chars), 8)]:
            v = c.values
            assert c(1) == 1
            for r in range(q):
                assert (v[r] == 0) == (math.gcd(r, q) > 1)
            assert np.allclose(np.abs(v[units]) , 1.0, atol=1e-12)
            assert np.allclose(v[units] ** phi, 1.0, atol=1e-9)
            for r in units[:6]:
                for s in units[:6]:
                    assert abs(v[(r * s) % q] - v[r] * v[s]) < 1e-12
        table = np.array([c.values for c in chars])
        assert np.allclose(table @ table.conj().T, phi * np.eye(phi), atol=1e-9)

    def test_real_characters_have_exact_signs(self):
        for c in arith.characters_mod(24):
            assert c.is_real
            assert set(np.unique(c.values.real)) <= {-1.0, 0.0, 1.0}

    def test_index_lookup(self):
        assert arith.character(12, 3) == arith.characters_mod(12)[3]
        with pytest.raises(InvalidArgument):
            arith.character(12, 4)


class TestCoefficientFunction:
    def test_examples(self):
        assert arith.extend_completely_multiplicative(CoefficientFunction.vertical_twist(0.0), 100) == 1
        assert arith.extend_completely_multiplicative(CoefficientFunction.liouville(), 12) == -1
        assert arith.extend_completely_multiplicative(CoefficientFunction.custom({2: 1j}), 8) == pytest.approx(-1j)

    def test_missing_prime(self):
        with pytest.raises(IncompleteDefinition):
            arith.extend_completely_multiplicative(CoefficientFunction.custom({2: 1j}), 6)

    def test_custom_rejects_large_values(self):
        with pytest.raises(InvalidArgument):
            CoefficientFunction.custom({2: 1.5})

    def test_twist_values(self):
        f = CoefficientFunction.vertical_twist(14.0)
        for n in (2, 9, 30, 97):
            assert f(n) == pytest.approx(n ** -14j, abs=1e-12)

    def test_character_coefficients_match_table(self):
        f = CoefficientFunction.character(7, 2)
        chi = arith.character(7, 2)
        vals = arith.coefficient_values(f, 300)
        for n in range(1, 301):
            assert vals[n] == pytest.approx(chi(n), abs=1e-12)

    @pytest.mark.parametrize("f", [CoefficientFunction.unit(), CoefficientFunction.liouville(),
                                   CoefficientFunction.character(12, 2), CoefficientFunction.character(5, 1),
                                   CoefficientFunction.vertical_twist(3.5)])
    def test_completely_multiplicative(self, f):
        vals = arith.coefficient_values(f, 10**4)
        rng = np.random.default_rng(11)
        assert vals[1] == 1
        for m, n in rng.integers(1, 100, size=(400, 2)):
            assert abs(vals[m * n] - vals[m] * vals[n]) <= 1e-12
        assert np.all(np.abs(vals[1:]) <= 1 + 1e-12)

    def test_load_prime_values(self, tmp_path):
        path = tmp_path / "vals.txt"
        path.write_text("# p re im\n2 0 1\n3 -1 0  # trailing\n\n5 0.6 0.8\n")
        f = arith.load_prime_values(path)
        assert f(8) == pytest.approx(-1j)
        assert f(15) == pytest.approx(-0.6 - 0.8j)

    def test_load_prime_values_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 0\n")
        with pytest.raises(InvalidArgument):
            arith.load_prime_values(path)

    @given(st.dictionaries(st.sampled_from([2, 3, 5, 7]),
                           st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
                           min_size=4, max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_custom_extension_bounded(self, values):
        f = CoefficientFunction.custom(values)
        for n in (1, 4, 30, 210, 2 ** 5 * 3 ** 3 * 7):
            assert abs(arith.extend_completely_multiplicative(f, n)) <= 1 + 1e-12
