"""Prime fields, extensions, and the trace machinery.

Frozen values below were computed by hand or by an independent scan before
the implementation existed: the F_4 modulus search order forces t^2+t+1,
F_9 forces t^2+1, F_8 forces t^3+t+1.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flipcert.errors import SingularTraceForm, UsageError
from flipcert.fields import (
    ExtField,
    PrimeField,
    dual_basis,
    element_from_coeffs,
    extract_coeffs,
    find_irreducible,
    format_field_spec,
    frobenius_trace,
    int_bitlength,
    is_prime,
    parse_field_spec,
    poly_is_irreducible,
    random_prime,
    trace_form_gram,
)


def test_is_prime_small():
    primes = [p for p in range(60) if is_prime(p)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]


def test_is_prime_carmichael():
    # 561 = 3*11*17 fools the Fermat test, not Miller-Rabin
    assert not is_prime(561)
    assert not is_prime(1729)
    assert is_prime((1 << 31) - 1)


def test_random_prime_is_prime_and_sized():
    rng = random.Random(1)
    for _ in range(20):
        p = random_prime(rng, 20)
        assert is_prime(p)
        assert p.bit_length() == 20


def test_random_prime_floor():
    with pytest.raises(UsageError):
        random_prime(random.Random(0), 8)


def test_int_bitlength():
    assert int_bitlength(0) == 1
    assert int_bitlength(1) == 1
    assert int_bitlength(-1) == 2
    assert int_bitlength(255) == 8
    assert int_bitlength(-255) == 9


def test_prime_field_arithmetic():
    F = PrimeField(7)
    a, b = F.element(3), F.element(5)
    assert (a + b).value == 1
    assert (a * b).value == 1
    assert (a - b).value == 5
    assert (a * b.inverse()).value == (3 * pow(5, -1, 7)) % 7
    assert (-a).value == 4
    assert a**6 == F.one


def test_prime_field_rejects_composite():
    with pytest.raises(UsageError):
        PrimeField(6)


def test_find_irreducible_frozen():
    # lowest monic irreducible in little-endian numeric order
    assert find_irreducible(2, 2) == (1, 1, 1)  # t^2 + t + 1
    assert find_irreducible(3, 2) == (1, 0, 1)  # t^2 + 1
    assert find_irreducible(2, 3) == (1, 1, 0, 1)  # t^3 + t + 1


def test_poly_is_irreducible_rejects_reducible():
    # t^2 + 1 = (t+1)^2 over F_2
    assert not poly_is_irreducible((1, 0, 1), 2)
    assert poly_is_irreducible((1, 1, 1), 2)


def test_ext_field_rejects_reducible_modulus():
    with pytest.raises(UsageError):
        ExtField(2, 2, (1, 0, 1))


def test_f4_structure():
    F = ExtField(2, 2, find_irreducible(2, 2))
    t = F.gen()
    assert (t * t).coeffs == (1, 1)  # t^2 = t + 1
    assert frobenius_trace(t).value == 1
    assert frobenius_trace(F.one).value == 0  # char 2: 1 + 1
    assert trace_form_gram(F) == [[0, 1], [1, 1]]


def test_f4_dual_basis_frozen():
    F = ExtField(2, 2, find_irreducible(2, 2))
    dual = dual_basis(F)
    assert [b.coeffs for b in dual] == [(1, 1), (1, 0)]


def test_f9_gram_frozen():
    F = ExtField(3, 2, find_irreducible(3, 2))
    assert trace_form_gram(F) == [[2, 0], [0, 1]]


@pytest.mark.parametrize("q,l", [(2, 2), (2, 3), (3, 2), (5, 2)])
def test_dual_basis_delta_property(q, l):
    F = ExtField(q, l, find_irreducible(q, l))
    basis = F.basis
    dual = dual_basis(F)
    for i, b in enumerate(basis):
        for j, d in enumerate(dual):
            assert frobenius_trace(b * d).value == (1 if i == j else 0)


@pytest.mark.parametrize("q,l", [(2, 2), (2, 3), (3, 2), (5, 2)])
def test_extract_roundtrip(q, l):
    F = ExtField(q, l, find_irreducible(q, l))
    rng = random.Random(derive := q * 100 + l)
    for _ in range(25):
        x = F.element(tuple(rng.randrange(q) for _ in range(l)))
        assert element_from_coeffs(F, extract_coeffs(x)) == x


def test_trace_is_additive_and_frobenius_invariant():
    F = ExtField(5, 2, find_irreducible(5, 2))
    rng = random.Random(9)
    for _ in range(30):
        x = F.element((rng.randrange(5), rng.randrange(5)))
        y = F.element((rng.randrange(5), rng.randrange(5)))
        assert frobenius_trace(x + y) == frobenius_trace(x) + frobenius_trace(y)
        assert frobenius_trace(x.frobenius()) == frobenius_trace(x)


def test_inverse_on_all_nonzero_f8():
    F = ExtField(2, 3, find_irreducible(2, 3))
    for x in F.elements():
        if x == F.zero:
            continue
        assert x * x.inverse() == F.one


def test_field_spec_roundtrip():
    F = ExtField(2, 3, find_irreducible(2, 3))
    line = format_field_spec(F)
    assert line == "2 3 1 1 0 1"
    G = parse_field_spec(line)
    assert G.q == F.q and G.l == F.l and G.modulus == F.modulus


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_f25_distributivity(a0, a1, b0, b1):
    F = ExtField(5, 2, find_irreducible(5, 2))
    x = F.element((a0, a1))
    y = F.element((b0, b1))
    z = F.gen() + F.one
    assert z * (x + y) == z * x + z * y
    assert (x + y) * (x - y) == x * x - y * y


def test_singular_trace_form_unused_basis():
    # designated-basis constructor refuses a singular basis matrix
    F = ExtField(2, 2, find_irreducible(2, 2))
    with pytest.raises((SingularTraceForm, UsageError)):
        ExtField(2, 2, find_irreducible(2, 2), basis_coords=(F.one.coeffs, F.one.coeffs))
