"""Circuit DAGs: parsing, evaluation, expansion, and polynomial helpers."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flipcert.circuits import (
    Add,
    Circuit,
    Const,
    Input,
    Mul,
    Sub,
    evaluate,
    evaluate_mod_random_prime,
    expand_to_polynomial,
    parse_circuit,
    poly_constant_ratio,
    poly_eval,
    poly_max_var_degree,
    poly_remap_vars,
    poly_row_add_subst,
    poly_scale_vars,
    poly_sub,
    poly_subst_consts,
    poly_total_degree,
    serialize_circuit,
    specialize,
)
from flipcert.errors import (
    BadArity,
    DagViolation,
    ParseError,
    TermBudgetExceeded,
)

XY_TEXT = """ninputs 2
g1 = input 0
g2 = input 1
g3 = mul g1 g2
g4 = const 3
g5 = add g3 g4
output g5
"""


def test_parse_and_evaluate():
    c = parse_circuit(XY_TEXT)
    assert c.num_inputs == 2
    assert c.size == 5
    assert evaluate(c, (4, 5)) == 23


def test_serialize_roundtrip_is_canonical():
    c = parse_circuit(XY_TEXT)
    text = serialize_circuit(c)
    assert parse_circuit(text) == c
    assert serialize_circuit(parse_circuit(text)) == text


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_circuit("g1 = input 0\noutput g1\n")  # missing ninputs
    with pytest.raises(DagViolation):
        parse_circuit("ninputs 1\ng1 = add g2 g2\noutput g1\n")  # forward ref
    with pytest.raises(BadArity):
        parse_circuit("ninputs 1\ng1 = input 0\ng2 = add g1\noutput g2\n")


def test_dag_violation_direct_construction():
    with pytest.raises(DagViolation):
        Circuit(1, (Input(0), Add(1, 1)), 1)  # self-reference


def test_bitsize_counts_constant_bits():
    small = parse_circuit("ninputs 1\ng1 = input 0\ng2 = const 1\ng3 = mul g1 g2\noutput g3\n")
    big = parse_circuit("ninputs 1\ng1 = input 0\ng2 = const 255\ng3 = mul g1 g2\noutput g3\n")
    assert small.size == big.size
    assert big.bitsize > small.bitsize


def test_expand_matches_evaluate():
    c = parse_circuit(XY_TEXT)
    poly = expand_to_polynomial(c)
    assert poly == {(1, 1): 1, (0, 0): 3}
    rng = random.Random(0)
    for _ in range(20):
        pt = tuple(rng.randrange(-9, 10) for _ in range(2))
        assert poly_eval(poly, pt) == evaluate(c, pt)


def test_expand_zero_polynomial_is_empty():
    c = parse_circuit("ninputs 1\ng1 = input 0\ng2 = sub g1 g1\noutput g2\n")
    assert expand_to_polynomial(c) == {}
    assert poly_total_degree({}) == -1


def test_expand_term_budget():
    # (x+1)^32 has 33 terms
    lines = ["ninputs 1", "g1 = input 0", "g2 = const 1", "g3 = add g1 g2"]
    prev = 3
    for i in range(5):
        lines.append(f"g{prev + 1} = mul g{prev} g{prev}")
        prev += 1
    lines.append(f"output g{prev}")
    c = parse_circuit("\n".join(lines) + "\n")
    with pytest.raises(TermBudgetExceeded):
        expand_to_polynomial(c, max_terms=10)
    assert len(expand_to_polynomial(c, max_terms=100)) == 33


def test_specialize():
    c = parse_circuit(XY_TEXT)
    s = specialize(c, {1: 5})
    assert s.num_inputs == 1
    assert evaluate(s, (4,)) == 23


def test_evaluate_mod_random_prime_consistent():
    c = parse_circuit(XY_TEXT)
    exact = evaluate(c, (1000, 2000))
    residue, prime = evaluate_mod_random_prime(c, (1000, 2000), seed=3)
    assert residue == exact % prime


def test_poly_helpers():
    poly = {(2, 0): 3, (0, 1): -1}
    assert poly_total_degree(poly) == 2
    assert poly_max_var_degree(poly) == 2
    assert poly_remap_vars(poly, (1, 0)) == {(0, 2): 3, (1, 0): -1}
    assert poly_scale_vars(poly, (2, 1)) == {(2, 0): 12, (0, 1): -1}
    assert poly_subst_consts(poly, {1: 5}) == {(2, 0): 3, (0, 0): -5}


def test_poly_row_add_subst_binomial():
    # x0^2 with x0 -> x0 + y*x1
    poly = {(2, 0): 1}
    out = poly_row_add_subst(poly, [(0, 1)], 3)
    assert out == {(2, 0): 1, (1, 1): 6, (0, 2): 9}


def test_poly_constant_ratio():
    p = {(1, 0): 2, (0, 1): 4}
    q = {(1, 0): 1, (0, 1): 2}
    assert poly_constant_ratio(p, q) == Fraction(2)
    assert poly_constant_ratio(q, p) == Fraction(1, 2)
    assert poly_constant_ratio(p, {(1, 0): 1}) is None
    assert poly_constant_ratio({}, {}) == 1
    assert poly_constant_ratio({}, q) == 0


def test_poly_sub():
    p = {(1,): 1}
    assert poly_sub(p, p) == {}
    assert poly_sub(p, {(1,): 3}) == {(1,): -2}


def _random_circuit(rng: random.Random, num_inputs: int, extra: int) -> Circuit:
    nodes = [Input(i) for i in range(num_inputs)]
    for _ in range(extra):
        kind = rng.randrange(4)
        if kind == 0:
            nodes.append(Const(rng.randrange(-4, 5)))
        else:
            a = rng.randrange(len(nodes))
            b = rng.randrange(len(nodes))
            nodes.append((Add, Sub, Mul)[kind - 1](a, b))
    return Circuit(num_inputs, tuple(nodes), len(nodes) - 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 6))
def test_expansion_agrees_with_evaluation_on_random_circuits(seed, ninp, extra):
    rng = random.Random(seed)
    c = _random_circuit(rng, ninp, extra)
    poly = expand_to_polynomial(c, max_terms=5000)
    for _ in range(5):
        pt = tuple(rng.randrange(-5, 6) for _ in range(ninp))
        assert poly_eval(poly, pt) == evaluate(c, pt)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_serialize_parse_identity_on_random_circuits(seed):
    rng = random.Random(seed)
    c = _random_circuit(rng, rng.randrange(1, 4), rng.randrange(1, 7))
    # serializer renumbers to consecutive ids; reparse must preserve meaning
    text = serialize_circuit(c)
    c2 = parse_circuit(text)
    pt = tuple(rng.randrange(-3, 4) for _ in range(c.num_inputs))
    assert evaluate(c, pt) == evaluate(c2, pt)
    assert serialize_circuit(c2) == text
