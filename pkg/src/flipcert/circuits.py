"""Arithmetic circuits: parsing, evaluation, specialization, expansion.

A circuit is a DAG of nodes (input, const, add, sub, mul) with one designated
output.  Size is the node count; bitsize additionally charges each constant
its bit length.  Evaluation is exact over Python integers by default and
works over any ring object exposing from_int/coerce (prime and extension
fields from .fields qualify).

The text format, one node per line:

    ninputs 2
    g0 = input 0
    g1 = input 1
    g2 = mul g0 g1
    output g2

Node ids must strictly increase, every reference must point backwards, and
exactly one output line closes the file.  '#' starts a comment.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    ArityMismatch,
    BadArity,
    DagViolation,
    IndexOutOfRange,
    ParseError,
    TermBudgetExceeded,
    UsageError,
)
from .fields import PrimeField, ZZ, int_bitlength, random_prime
from .util import derive_seed


@dataclass(frozen=True)
class Input:
    index: int


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Add:
    a: int
    b: int


@dataclass(frozen=True)
class Sub:
    a: int
    b: int


@dataclass(frozen=True)
class Mul:
    a: int
    b: int


Node = Input | Const | Add | Sub | Mul

_OP_NAMES = {Add: "add", Sub: "sub", Mul: "mul"}


@dataclass(frozen=True)
class Circuit:
    num_inputs: int
    nodes: tuple[Node, ...]
    output: int

    def __post_init__(self):
        if self.num_inputs < 0:
            raise UsageError("negative input count")
        if not self.nodes:
            raise UsageError("a circuit needs at least one node")
        for t, node in enumerate(self.nodes):
            if isinstance(node, Input):
                if not 0 <= node.index < self.num_inputs:
                    raise IndexOutOfRange(
                        f"node {t} reads input {node.index} of {self.num_inputs}"
                    )
            elif isinstance(node, (Add, Sub, Mul)):
                if not (0 <= node.a < t and 0 <= node.b < t):
                    raise DagViolation(f"node {t} references a non-earlier node")
            elif not isinstance(node, Const):
                raise UsageError(f"unknown node type {type(node).__name__}")
        if not 0 <= self.output < len(self.nodes):
            raise UsageError(f"output index {self.output} out of range")

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def bitsize(self) -> int:
        extra = sum(
            int_bitlength(n.value) for n in self.nodes if isinstance(n, Const)
        )
        return self.size + extra


def parse_circuit(text: str) -> Circuit:
    num_inputs = None
    ids: dict[str, int] = {}
    nodes: list[Node] = []
    output: int | None = None
    last_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if num_inputs is None:
            if toks[0] != "ninputs" or len(toks) != 2:
                raise ParseError(f"line {lineno}: expected 'ninputs <n>' first")
            num_inputs = _int_tok(toks[1], lineno)
            if num_inputs < 0:
                raise ParseError(f"line {lineno}: negative input count")
            continue
        if output is not None:
            raise ParseError(f"line {lineno}: content after the output line")
        if toks[0] == "output":
            if len(toks) != 2:
                raise BadArity(f"line {lineno}: output takes one node id")
            output = _ref(toks[1], ids, lineno)
            continue
        if len(toks) < 3 or toks[1] != "=" or not toks[0].startswith("g"):
            raise ParseError(f"line {lineno}: expected 'g<i> = <op> ...'")
        gid = toks[0]
        try:
            id_num = int(gid[1:])
        except ValueError:
            raise ParseError(f"line {lineno}: bad node id {gid!r}") from None
        if id_num <= last_id:
            raise ParseError(f"line {lineno}: node ids must strictly increase")
        last_id = id_num
        op, args = toks[2], toks[3:]
        if op == "input":
            if len(args) != 1:
                raise BadArity(f"line {lineno}: input takes one index")
            idx = _int_tok(args[0], lineno)
            node: Node = Input(idx)
        elif op == "const":
            if len(args) != 1:
                raise BadArity(f"line {lineno}: const takes one integer")
            node = Const(_int_tok(args[0], lineno))
        elif op in ("add", "sub", "mul"):
            if len(args) != 2:
                raise BadArity(f"line {lineno}: {op} takes two node ids")
            a, b = (_ref(t, ids, lineno) for t in args)
            node = {"add": Add, "sub": Sub, "mul": Mul}[op](a, b)
        else:
            raise ParseError(f"line {lineno}: unknown op {op!r}")
        ids[gid] = len(nodes)
        nodes.append(node)
    if num_inputs is None:
        raise ParseError("missing ninputs line")
    if output is None:
        raise ParseError("missing output line")
    return Circuit(num_inputs, tuple(nodes), output)


def _int_tok(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: expected an integer, got {tok!r}") from None


def _ref(tok: str, ids: Mapping[str, int], lineno: int) -> int:
    if tok in ids:
        return ids[tok]
    raise DagViolation(f"line {lineno}: reference to undeclared node {tok!r}")


def serialize_circuit(c: Circuit) -> str:
    """Canonical text: consecutive ids, single spaces, LF endings."""
    lines = [f"ninputs {c.num_inputs}"]
    for t, node in enumerate(c.nodes):
        if isinstance(node, Input):
            lines.append(f"g{t} = input {node.index}")
        elif isinstance(node, Const):
            lines.append(f"g{t} = const {node.value}")
        else:
            lines.append(f"g{t} = {_OP_NAMES[type(node)]} g{node.a} g{node.b}")
    lines.append(f"output g{c.output}")
    return "\n".join(lines) + "\n"


def evaluate(c: Circuit, point: Sequence, ring=ZZ):
    """Evaluate at `point` over `ring` (exact integers by default)."""
    if len(point) != c.num_inputs:
        raise ArityMismatch(
            f"circuit takes {c.num_inputs} inputs, point has {len(point)}"
        )
    if isinstance(ring, PrimeField):
        flat = [ring.coerce(x).value for x in point]
        return ring.element(_evaluate_mod(c, flat, ring.q))
    vals = [ring.coerce(x) for x in point]
    out: list = [None] * len(c.nodes)
    for t, node in enumerate(c.nodes):
        if isinstance(node, Input):
            out[t] = vals[node.index]
        elif isinstance(node, Const):
            out[t] = ring.from_int(node.value)
        elif isinstance(node, Add):
            out[t] = out[node.a] + out[node.b]
        elif isinstance(node, Sub):
            out[t] = out[node.a] - out[node.b]
        else:
            out[t] = out[node.a] * out[node.b]
    return out[c.output]


def _evaluate_mod(c: Circuit, point: Sequence[int], q: int) -> int:
    # Raw-int hot path; identical results to evaluate() over PrimeField(q).
    out = [0] * len(c.nodes)
    for t, node in enumerate(c.nodes):
        if isinstance(node, Input):
            out[t] = point[node.index] % q
        elif isinstance(node, Const):
            out[t] = node.value % q
        elif isinstance(node, Add):
            out[t] = (out[node.a] + out[node.b]) % q
        elif isinstance(node, Sub):
            out[t] = (out[node.a] - out[node.b]) % q
        else:
            out[t] = out[node.a] * out[node.b] % q
    return out[c.output]


def evaluate_mod_random_prime(
    c: Circuit, point: Sequence[int], seed: int, prime_bits: int = 31
) -> tuple[int, int]:
    """Evaluate modulo a fresh random prime; returns (residue, prime)."""
    rng = random.Random(derive_seed("modprime", seed, prime_bits))
    p = random_prime(rng, prime_bits)
    return _evaluate_mod(c, [x % p for x in point], p), p


def specialize(c: Circuit, bindings: Mapping[int, int]) -> Circuit:
    """Fix some inputs to constants; remaining inputs are renumbered densely,

    preserving their original order."""
    for idx in bindings:
        if not 0 <= idx < c.num_inputs:
            raise IndexOutOfRange(f"binding for input {idx} of {c.num_inputs}")
    free = [i for i in range(c.num_inputs) if i not in bindings]
    renum = {old: new for new, old in enumerate(free)}
    nodes: list[Node] = []
    for node in c.nodes:
        if isinstance(node, Input):
            if node.index in bindings:
                nodes.append(Const(bindings[node.index]))
            else:
                nodes.append(Input(renum[node.index]))
        else:
            nodes.append(node)
    return Circuit(len(free), tuple(nodes), c.output)


# ---------------------------------------------------------------------------
# Sparse polynomial expansion.  A polynomial in n variables is a dict mapping
# exponent tuples (length n) to nonzero integer coefficients; {} is zero.

Poly = dict


def expand_to_polynomial(c: Circuit, max_terms: int = 100_000) -> Poly:
    """Exact expansion of the output as a sparse integer polynomial.

    Raises TermBudgetExceeded as soon as any intermediate node's expansion
    holds more than max_terms monomials.
    """
    zero_exp = (0,) * c.num_inputs
    polys: list[Poly] = [None] * len(c.nodes)  # type: ignore[list-item]
    for t, node in enumerate(c.nodes):
        if isinstance(node, Input):
            exp = tuple(1 if i == node.index else 0 for i in range(c.num_inputs))
            p: Poly = {exp: 1}
        elif isinstance(node, Const):
            p = {zero_exp: node.value} if node.value else {}
        elif isinstance(node, (Add, Sub)):
            sign = 1 if isinstance(node, Add) else -1
            p = dict(polys[node.a])
            for exp, coeff in polys[node.b].items():
                nv = p.get(exp, 0) + sign * coeff
                if nv:
                    p[exp] = nv
                else:
                    p.pop(exp, None)
        else:
            p = {}
            pa, pb = polys[node.a], polys[node.b]
            for ea, ca in pa.items():
                for eb, cb in pb.items():
                    exp = tuple(x + y for x, y in zip(ea, eb))
                    nv = p.get(exp, 0) + ca * cb
                    if nv:
                        p[exp] = nv
                    else:
                        p.pop(exp, None)
                if len(p) > max_terms:
                    raise TermBudgetExceeded(
                        f"node {t} expansion passed {max_terms} terms"
                    )
        if len(p) > max_terms:
            raise TermBudgetExceeded(f"node {t} expansion passed {max_terms} terms")
        polys[t] = p
    return polys[c.output]


def poly_eval(p: Poly, point: Sequence[int]) -> int:
    acc = 0
    for exps, coeff in p.items():
        term = coeff
        for x, e in zip(point, exps):
            if e:
                term *= x**e
        acc += term
    return acc


def poly_total_degree(p: Poly) -> int:
    """Total degree; the zero polynomial reports -1."""
    return max((sum(e) for e in p), default=-1)


def poly_max_var_degree(p: Poly) -> int:
    """Largest exponent of any single variable; -1 for the zero polynomial."""
    return max((max(e, default=0) for e in p), default=-1)


def poly_constant_ratio(p: Poly, q: Poly) -> Fraction | None:
    """Fraction lam with p = lam * q, or None if no such constant exists.

    Zero p against nonzero q yields Fraction(0); both zero yields Fraction(1).
    """
    if not q:
        return Fraction(1) if not p else None
    if not p:
        return Fraction(0)
    if set(p) != set(q):
        return None
    items = iter(p.items())
    exp0, c0 = next(items)
    lam = Fraction(c0, q[exp0])
    for exp, c in items:
        if Fraction(c, q[exp]) != lam:
            return None
    return lam


def poly_to_text(p: Poly) -> str:
    """Stable rendering: monomials sorted by exponent tuple."""
    if not p:
        return "0"
    parts = []
    for exps in sorted(p):
        parts.append(f"{p[exps]}*x^{','.join(str(e) for e in exps)}")
    return " + ".join(parts)


# -- symbolic variable transforms (used by the exact identity checkers) ----


def poly_remap_vars(p: Poly, perm: Sequence[int]) -> Poly:
    """Substitute x_v -> x_{perm[v]}; perm must be a permutation."""
    out: Poly = {}
    for exps, coeff in p.items():
        ne = [0] * len(exps)
        for v, e in enumerate(exps):
            ne[perm[v]] = e
        out[tuple(ne)] = coeff
    return out


def poly_scale_vars(p: Poly, factors: Sequence[int]) -> Poly:
    """Substitute x_v -> factors[v] * x_v."""
    out: Poly = {}
    for exps, coeff in p.items():
        c = coeff
        for v, e in enumerate(exps):
            if e:
                c *= factors[v] ** e
        if c:
            out[exps] = out.get(exps, 0) + c
            if not out[exps]:
                del out[exps]
    return out


def poly_subst_consts(p: Poly, bindings: Mapping[int, int]) -> Poly:
    """Substitute x_v -> bindings[v] for the bound variables."""
    out: Poly = {}
    for exps, coeff in p.items():
        c = coeff
        ne = list(exps)
        for v, val in bindings.items():
            e = exps[v]
            if e:
                c *= val**e
            ne[v] = 0
        if c:
            key = tuple(ne)
            nv = out.get(key, 0) + c
            if nv:
                out[key] = nv
            else:
                del out[key]
    return out


def poly_row_add_subst(p: Poly, pairs: Sequence[tuple[int, int]], y: int) -> Poly:
    """Simultaneous substitution x_d -> x_d + y * x_s for each (d, s) pair.

    The pairs must have distinct d's, and no s may appear as a d (true for
    row operations on distinct rows, which is the only use)."""
    sub = dict(pairs)
    out: Poly = {}
    for exps, coeff in p.items():
        terms = [(list(exps), coeff)]
        for d, s in sub.items():
            e = exps[d]
            if not e:
                continue
            new_terms = []
            for te, tc in terms:
                for a in range(e + 1):
                    ne = list(te)
                    ne[d] = a
                    ne[s] += e - a
                    new_terms.append((ne, tc * math.comb(e, a) * y ** (e - a)))
            terms = new_terms
        for te, tc in terms:
            key = tuple(te)
            nv = out.get(key, 0) + tc
            if nv:
                out[key] = nv
            else:
                del out[key]
    return out


def polys_equal(p: Poly, q: Poly) -> bool:
    return p == q


def poly_scaled(p: Poly, factor: int) -> Poly:
    if factor == 0:
        return {}
    return {e: c * factor for e, c in p.items()}


def poly_sub(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        nv = out.get(e, 0) - c
        if nv:
            out[e] = nv
        else:
            out.pop(e, None)
    return out


def poly_add_many(ps: Iterable[Poly]) -> Poly:
    out: Poly = {}
    for p in ps:
        for e, c in p.items():
            nv = out.get(e, 0) + c
            if nv:
                out[e] = nv
            else:
                del out[e]
    return out
