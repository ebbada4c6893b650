"""Prime tables, symbols, CRT, and factorization against naive oracles."""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from igfields import arith


class TestSieve:
    def test_matches_trial_division(self):
        table = arith.sieve(10_000)
        assert table.primes.tolist() == oracles.trial_division_primes(10_000)

    def test_rejects_tiny_limit(self):
        with pytest.raises(ValueError):
            arith.sieve(1)

    def test_contains(self):
        table = arith.sieve(100)
        assert 97 in table
        assert 91 not in table
        assert 101 not in table  # beyond the sieving bound
        assert 1 not in table


class TestPrimeLookup:
    def test_nth_prime(self):
        ps = oracles.trial_division_primes(1000)
        for i in (1, 2, 10, 100, len(ps)):
            assert arith.nth_prime(i) == ps[i - 1]

    def test_nth_odd_prime(self):
        odd = oracles.trial_division_primes(1000)[1:]
        for i in (1, 2, 25, len(odd)):
            assert arith.nth_odd_prime(i) == odd[i - 1]
        assert arith.nth_odd_prime(1) == 3

    def test_first_odd_primes(self):
        got = arith.first_odd_primes(10).tolist()
        assert got == [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]

    def test_next_primes_after(self):
        assert arith.next_primes_after(3, 5).tolist() == [5, 7, 11, 13, 17]
        assert arith.next_primes_after(1, 3).tolist() == [2, 3, 5]

    def test_primes_upto(self):
        assert arith.primes_upto(30).tolist() == oracles.trial_division_primes(30)

    def test_shared_table_grows_concurrently(self):
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(arith.nth_prime, [5000 + i for i in range(64)]))
        assert results == sorted(results)
        assert arith.nth_prime(5000) == results[0]


class TestTheta:
    def test_small_values(self):
        assert math.isclose(arith.theta(10), math.log(2 * 3 * 5 * 7), rel_tol=1e-14)
        assert math.isclose(arith.theta(2), math.log(2), rel_tol=1e-15)

    def test_against_fsum_oracle(self):
        for x in (50, 97, 500, 1000):
            assert math.isclose(
                arith.theta(x), oracles.theta_fsum(x), rel_tol=1e-13
            )

    def test_below_first_prime(self):
        assert arith.theta(1) == 0.0


class TestIsPrime:
    def test_matches_trial_division(self):
        for n in range(0, 2000):
            assert arith.is_prime(n) == oracles.is_prime_trial(n), n

    def test_witness_bases_are_prime(self):
        # Regression: a Miller-Rabin base a ≡ 0 (mod n) must be skipped,
        # otherwise n = 41 (a witness base itself) is reported composite.
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
            assert arith.is_prime(a)

    def test_large_semiprime(self):
        p, q = 1_000_003, 1_000_033
        assert arith.is_prime(p) and arith.is_prime(q)
        assert not arith.is_prime(p * q)

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=300, deadline=None)
    def test_random_agreement(self, n):
        assert arith.is_prime(n) == oracles.is_prime_trial(n)


class TestKronecker:
    def test_legendre_cases(self):
        for p in (3, 5, 7, 11, 13, 23):
            for a in range(-2 * p, 2 * p + 1):
                assert arith.kronecker(a, p) == oracles.legendre_table(a, p)

    def test_even_and_negative_moduli(self):
        cases = [(3, 2), (5, 2), (7, 8), (-1, -3), (10, 4), (21, -10), (0, 5)]
        for a, n in cases:
            assert arith.kronecker(a, n) == oracles.kronecker_ref(a, n), (a, n)

    def test_zero_modulus_rejected(self):
        with pytest.raises(ValueError):
            arith.kronecker(3, 0)

    @given(
        st.integers(min_value=-10**6, max_value=10**6),
        st.integers(min_value=-10**4, max_value=10**4).filter(lambda n: n != 0),
    )
    @settings(max_examples=400, deadline=None)
    def test_random_agreement(self, a, n):
        assert arith.kronecker(a, n) == oracles.kronecker_ref(a, n)

    @given(
        st.integers(min_value=-500, max_value=500),
        st.integers(min_value=-500, max_value=500),
        st.integers(min_value=1, max_value=400),
    )
    @settings(max_examples=200, deadline=None)
    def test_multiplicative_in_top(self, a, b, n):
        lhs = arith.kronecker(a * b, n)
        rhs = arith.kronecker(a, n) * arith.kronecker(b, n)
        assert lhs == rhs


class TestCrt:
    def test_hand_case(self):
        assert arith.crt([(2, 3), (3, 5), (2, 7)]) == 23

    def test_against_scan(self):
        cases = [
            [(1, 2), (2, 3)],
            [(0, 5), (4, 9)],
            [(3, 4), (5, 7), (10, 11)],
        ]
        for residues in cases:
            assert arith.crt(residues) == oracles.crt_scan(residues)

    def test_non_coprime_rejected(self):
        with pytest.raises(ValueError):
            arith.crt([(1, 4), (3, 6)])

    @given(st.data())
    @settings(max_examples=150, deadline=None)
    def test_random_pairs(self, data):
        moduli = data.draw(
            st.lists(
                st.sampled_from([2, 3, 5, 7, 11, 13]),
                min_size=1, max_size=3, unique=True,
            )
        )
        residues = [
            (data.draw(st.integers(min_value=0, max_value=m - 1)), m)
            for m in moduli
        ]
        x = arith.crt(residues)
        modulus = math.prod(moduli)
        assert 0 <= x < modulus
        for r, m in residues:
            assert x % m == r


class TestFactorize:
    def test_examples(self):
        assert arith.factorize(360) == [(2, 3), (3, 2), (5, 1)]
        assert arith.factorize(97) == [(97, 1)]
        assert arith.factorize(1) == []

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            arith.factorize(0)

    @given(st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=300, deadline=None)
    def test_reconstructs_and_is_prime(self, n):
        factors = arith.factorize(n)
        prod = 1
        for p, e in factors:
            assert oracles.is_prime_trial(p)
            assert e >= 1
            prod *= p**e
        assert prod == n
        assert [p for p, _ in factors] == sorted({p for p, _ in factors})


class TestSquarefree:
    def test_examples(self):
        # 12 = 2²·3 → 3 and 360 = 2³·3²·5 → 10: repeated division by p²
        # keeps exactly the odd-exponent primes, so n/result is a square
        # (the property that keeps Legendre symbols fixed).
        assert arith.squarefree_reduce(12) == 3
        assert arith.squarefree_reduce(360) == 10
        assert arith.squarefree_reduce(1) == 1
        assert arith.squarefree_reduce(7) == 7

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            arith.squarefree_reduce(0)
        with pytest.raises(ValueError):
            arith.squarefree_reduce(-12)

    @given(st.integers(min_value=1, max_value=10**5))
    @settings(max_examples=300, deadline=None)
    def test_matches_oracle_and_quotient_is_square(self, n):
        part = arith.squarefree_reduce(n)
        assert part == oracles.squarefree_part(n)
        if part > 1:
            assert arith.is_squarefree(part)
        quotient = n // part
        assert part * quotient == n
        assert math.isqrt(quotient) ** 2 == quotient

    def test_is_squarefree(self):
        assert arith.is_squarefree(1)
        assert arith.is_squarefree(105)
        assert not arith.is_squarefree(12)
        assert not arith.is_squarefree(49)


def test_first_odd_primes_excludes_two():
    arr = arith.first_odd_primes(100)
    assert int(arr[0]) == 3
    assert np.all(arr % 2 == 1)
