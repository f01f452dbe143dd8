"""Constructors for the reference circuits used throughout the tests.

All builders share input nodes (each matrix entry appears as one input node)
and lay out matrix entries row-major, matching MatrixAssignment.flatten().
"""

from __future__ import annotations

import itertools

from .circuits import Add, Circuit, Const, Input, Mul, Node, Sub
from .errors import UsageError


class _Builder:
    def __init__(self, num_inputs: int):
        self.num_inputs = num_inputs
        self.nodes: list[Node] = []
        self._input_at: dict[int, int] = {}

    def input(self, idx: int) -> int:
        if idx not in self._input_at:
            self.nodes.append(Input(idx))
            self._input_at[idx] = len(self.nodes) - 1
        return self._input_at[idx]

    def const(self, v: int) -> int:
        self.nodes.append(Const(v))
        return len(self.nodes) - 1

    def op(self, kind, a: int, b: int) -> int:
        self.nodes.append(kind(a, b))
        return len(self.nodes) - 1

    def chain(self, kind, terms: list[int]) -> int:
        acc = terms[0]
        for t in terms[1:]:
            acc = self.op(kind, acc, t)
        return acc

    def finish(self, output: int) -> Circuit:
        return Circuit(self.num_inputs, tuple(self.nodes), output)


def _product_term(b: _Builder, entries: list[int]) -> int:
    return b.chain(Mul, [b.input(e) for e in entries])


def perm_circuit(n: int) -> Circuit:
    """Permanent of an n x n matrix, sum over all permutation products."""
    if n < 1:
        raise UsageError("n must be >= 1")
    b = _Builder(n * n)
    terms = [
        _product_term(b, [i * n + s for i, s in enumerate(sigma)])
        for sigma in itertools.permutations(range(n))
    ]
    return b.finish(b.chain(Add, terms))


def det_circuit(n: int) -> Circuit:
    """Determinant via signed permutation expansion: evens minus odds."""
    if n < 1:
        raise UsageError("n must be >= 1")
    b = _Builder(n * n)
    evens, odds = [], []
    for sigma in itertools.permutations(range(n)):
        inv = sum(
            1 for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j]
        )
        term = _product_term(b, [i * n + s for i, s in enumerate(sigma)])
        (odds if inv % 2 else evens).append(term)
    pos = b.chain(Add, evens)
    if not odds:
        return b.finish(pos)
    neg = b.chain(Add, odds)
    return b.finish(b.op(Sub, pos, neg))


def _det_of_selection(b: _Builder, m: int, k: int, sigma: tuple[int, ...]) -> int:
    # determinant of the m x m submatrix picking choice sigma[i] at position i
    cols = [i * k + sigma[i] for i in range(m)]
    if m == 1:
        return b.input(cols[0])
    evens, odds = [], []
    for tau in itertools.permutations(range(m)):
        inv = sum(1 for i in range(m) for j in range(i + 1, m) if tau[i] > tau[j])
        term = _product_term(b, [r * (k * m) + cols[tau[r]] for r in range(m)])
        (odds if inv % 2 else evens).append(term)
    pos = b.chain(Add, evens)
    neg = b.chain(Add, odds)
    return b.op(Sub, pos, neg)


def efun_circuit(m: int, k: int) -> Circuit:
    """Product of all k^m selected-submatrix determinants of an m x (k*m)

    block matrix.  Inputs are the block entries, row-major."""
    if m < 1 or k < 1:
        raise UsageError("need m >= 1 and k >= 1")
    b = _Builder(m * k * m)
    factors = [
        _det_of_selection(b, m, k, sigma)
        for sigma in itertools.product(range(k), repeat=m)
    ]
    return b.finish(b.chain(Mul, factors))


def scale_circuit(c: Circuit, lam: int) -> Circuit:
    """lam * c, two extra nodes."""
    nodes = list(c.nodes)
    nodes.append(Const(lam))
    nodes.append(Mul(c.output, len(nodes) - 1))
    return Circuit(c.num_inputs, tuple(nodes), len(nodes) - 1)
