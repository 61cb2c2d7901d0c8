"""Field arithmetic, Legendre valuations, and the epsilon table."""

from fractions import Fraction

import pytest

from crfactor.errors import (
    DivisionByZero,
    FieldTooLarge,
    NotPrime,
    ReduciblePolynomial,
)
from crfactor.gf import (
    digit_sum,
    epsilon_q,
    field_create,
    is_fermat_prime,
    is_prime,
    legendre_valuation,
    prime_factors,
    subfield_embedding,
    vp,
)


def brute_factorial_valuation(r, p):
    """Independent oracle: sum of floor(r / p**k)."""
    total = 0
    pk = p
    while pk <= r:
        total += r // pk
        pk *= p
    return total


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(50):
        assert is_prime(n) == (n in primes)


def test_prime_factors_roundtrip():
    for n in [1, 2, 12, 342, 360, 648, 161050, 2**20]:
        fac = prime_factors(n)
        prod = 1
        for p, e in fac.items():
            assert is_prime(p)
            prod *= p**e
        assert prod == n


def test_field_create_f4_default_modulus():
    F = field_create(2, 2)
    # x^2 + x + 1 is the unique irreducible quadratic over F_2
    assert F.modulus == (1, 1, 1)
    assert F.primitive_flag


def test_field_create_f3():
    F = field_create(3, 1)
    assert F.q == 3
    assert F.add(2, 2) == 1
    assert F.mul(2, 2) == 1


def test_field_create_rejects_reducible_modulus():
    # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(ReduciblePolynomial):
        field_create(2, 2, [1, 0, 1])


def test_field_create_rejects_nonprime():
    with pytest.raises(NotPrime):
        field_create(6, 1)


def test_field_size_limit():
    with pytest.raises(FieldTooLarge):
        field_create(2, 31)


def test_f4_multiplication_table():
    F = field_create(2, 2)
    # 2 encodes x, 3 encodes x + 1; x^2 = x + 1 mod x^2 + x + 1
    assert F.mul(2, 2) == 3
    assert F.mul(2, 3) == 1
    assert F.frobenius(2) == 3
    assert F.inv(1) == 1
    assert F.inv(2) == 3


@pytest.mark.parametrize("p,f", [(2, 1), (2, 2), (2, 4), (3, 1), (3, 3), (5, 2), (7, 3)])
def test_field_axioms(p, f):
    F = field_create(p, f)
    elems = list(F.elements())[: min(F.q, 32)]
    for a in elems:
        assert F.add(a, 0) == a
        assert F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a != 0:
            assert F.mul(a, F.inv(a)) == 1
    for a in elems[:8]:
        for b in elems[:8]:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            for c in elems[:4]:
                lhs = F.mul(a, F.add(b, c))
                rhs = F.add(F.mul(a, b), F.mul(a, c))
                assert lhs == rhs


@pytest.mark.parametrize("p,f", [(2, 3), (3, 2), (5, 2), (2, 6)])
def test_frobenius_automorphism(p, f):
    F = field_create(p, f)
    for a in list(F.elements())[: min(F.q, 64)]:
        for b in list(F.elements())[: min(F.q, 16)]:
            assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
    for c in range(p):
        assert F.frobenius(c) == c
    for a in list(F.elements())[: min(F.q, 64)]:
        x = a
        for _ in range(f):
            x = F.frobenius(x)
        assert x == a


def test_large_field_no_tables():
    F = field_create(7, 3)  # q = 343, has tables
    G = field_create(2, 17)  # q = 131072 > log-table limit
    assert F.mul(F.inv(5), 5) == 1
    a = 12345
    assert G.mul(G.inv(a), a) == 1
    assert G.add(a, a) == 0  # characteristic 2


def test_legendre_valuation_basics():
    for p in (2, 3, 5, 7):
        assert legendre_valuation(1, p).value == 0
        assert legendre_valuation(p, p).value == 1
    v = legendre_valuation(10, 2)
    assert v.value == 8  # 10! = 3628800 = 2^8 * 14175
    assert v.p_part == 256


def test_legendre_valuation_oracle_suite():
    for p in (2, 3, 5, 7, 17):
        for r in range(1, 2001):
            v = legendre_valuation(r, p)
            assert v.value == brute_factorial_valuation(r, p)
            assert v.p_part == p**v.value
            # both sides of the factorial-valuation inequalities
            assert v.value <= (r - 1) // (p - 1)
            assert v.value >= vp(r, p)


def test_digit_sum():
    assert digit_sum(10, 2) == 2
    assert digit_sum(26, 3) == 6  # 222_3
    assert digit_sum(0, 5) == 0


def test_is_fermat_prime():
    assert all(is_fermat_prime(p) for p in (3, 5, 17, 257, 65537))
    assert not any(is_fermat_prime(p) for p in (2, 7, 11, 13, 31, 9, 15))


def test_epsilon_q_table():
    assert epsilon_q(2, 2) == Fraction(4, 3)
    assert epsilon_q(2, 4) == Fraction(4, 3)
    assert epsilon_q(2, 1) == Fraction(1)
    assert epsilon_q(2, 3) == Fraction(1)
    assert epsilon_q(3, 1) == Fraction(3, 2)
    assert epsilon_q(3, 7) == Fraction(3, 2)
    assert epsilon_q(5, 2) == Fraction(5, 4)
    assert epsilon_q(17, 1) == Fraction(17, 16)
    assert epsilon_q(7, 5) == Fraction(1)
    assert epsilon_q(11, 1) == Fraction(1)


def test_epsilon_q_range_and_monotonicity():
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23]
    for p in primes:
        for f in range(1, 13):
            e = epsilon_q(p, f)
            assert Fraction(1) <= e <= Fraction(3, 2)
            for g in range(1, f + 1):
                if f % g == 0:
                    assert e >= epsilon_q(p, g)


def test_exact_rational_arithmetic():
    assert Fraction(4, 3) * 6 - 1 == 7
    assert (Fraction(3, 2) * 2 - 1) / 2 == 1
    assert Fraction(8, 6) == Fraction(4, 3)


def test_division_by_zero():
    F = field_create(3, 2)
    with pytest.raises(DivisionByZero):
        F.inv(0)


def test_subfield_embedding_f4_into_f16():
    F4 = field_create(2, 2)
    F16 = field_create(2, 4)
    emb = subfield_embedding(F4, F16)
    assert emb[0] == 0 and emb[1] == 1
    for a in range(4):
        for b in range(4):
            assert emb[F4.add(a, b)] == F16.add(emb[a], emb[b])
            assert emb[F4.mul(a, b)] == F16.mul(emb[a], emb[b])


def test_element_order():
    F = field_create(7, 3)
    # the default modulus is primitive, so x (encoded as 7) has full order
    assert F.element_order(7) == 342
    assert F.element_order(1) == 1
