"""Polynomial identity testing: randomized and hitting-set derandomized.

The randomized tester samples points from an integer box and reports either
a certain nonzero witness or a zero verdict with the standard degree/box
error bound (formal degree bound 2^size unless the caller asserts better).

The derandomized side works against finite circuit classes: either an
enumerated class (all canonical-form circuits up to a size or bitsize bound
over a constant alphabet) or an explicit list.  A hitting set is a point
list on which no nonzero member vanishes everywhere; the builder is greedy
set cover over a seeded candidate pool, the verifier is exhaustive and
returns the first violator.  Families built from disjoint coordinate bands
give pairwise disjoint hitting sets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .circuits import (
    Add,
    Circuit,
    Const,
    Input,
    Mul,
    Node,
    Sub,
    evaluate,
    expand_to_polynomial,
    serialize_circuit,
)
from .errors import BudgetExceeded, ParseError, PoolExhausted, UsageError
from .fields import int_bitlength
from .util import Stopwatch, derive_seed


@dataclass(frozen=True)
class EnumeratedClass:
    """All canonical circuits with at most `bound` nodes (size regime) or

    total bits (bitsize regime) over the given constant alphabet."""

    num_inputs: int
    bound: int
    alphabet: tuple[int, ...]
    regime: str = "size"

    def __post_init__(self):
        if self.regime not in ("size", "bitsize"):
            raise UsageError(f"unknown regime {self.regime!r}")
        if self.bound < 1:
            raise UsageError("bound must be >= 1")
        if tuple(sorted(set(self.alphabet))) != self.alphabet:
            raise UsageError("alphabet must be strictly increasing")

    def label(self) -> str:
        alpha = ",".join(str(a) for a in self.alphabet)
        return (
            f"enumerated n={self.num_inputs} bound={self.bound}"
            f" regime={self.regime} alphabet={alpha}"
        )

    def members(self, budget: int | None = None) -> Iterator[Circuit]:
        return enumerate_circuits(self, budget=budget)


@dataclass(frozen=True)
class ExplicitClass:
    circuits: tuple[Circuit, ...]

    @property
    def num_inputs(self) -> int:
        return self.circuits[0].num_inputs if self.circuits else 0

    def label(self) -> str:
        return f"explicit count={len(self.circuits)}"

    def members(self, budget: int | None = None) -> Iterator[Circuit]:
        if budget is not None and len(self.circuits) > budget:
            raise BudgetExceeded(
                f"{len(self.circuits)} explicit members over budget {budget}"
            )
        return iter(self.circuits)


CircuitClass = EnumeratedClass | ExplicitClass


def _node_cost(node: Node, regime: str) -> int:
    if regime == "bitsize" and isinstance(node, Const):
        return 1 + int_bitlength(node.value)
    return 1


def _node_key(node: Node) -> tuple[int, int, int]:
    if isinstance(node, Input):
        return (0, node.index, 0)
    if isinstance(node, Const):
        return (1, node.value, 0)
    rank = {Add: 2, Sub: 3, Mul: 4}[type(node)]
    return (rank, node.a, node.b)


def enumerate_circuits(
    cls: EnumeratedClass, budget: int | None = None
) -> Iterator[Circuit]:
    """Depth-first canonical enumeration.

    Canonical form: no two identical nodes; commutative operands sorted
    (Add/Mul with a <= b); the output is the last node and every other node
    is referenced somewhere later (no dead code); and the node sequence is
    locally sorted, meaning a node must exceed its predecessor in the
    (kind, operands) order unless it references that predecessor.  The
    local-sort rule collapses reorderings of the same DAG: any circuit
    keeps at least one admissible order (place the smallest available node
    first), so nothing is lost.  Candidate order is Input < Const < Add <
    Sub < Mul, ties by operand index, so the stream is deterministic.
    """
    yielded = 0
    nodes: list[Node] = []
    seen: set[Node] = set()
    refcount: list[int] = []

    def candidates(t: int) -> Iterator[Node]:
        for i in range(cls.num_inputs):
            yield Input(i)
        for v in cls.alphabet:
            yield Const(v)
        for a in range(t):
            for b in range(a, t):
                yield Add(a, b)
        for a in range(t):
            for b in range(t):
                yield Sub(a, b)
        for a in range(t):
            for b in range(a, t):
                yield Mul(a, b)

    def walk(cost: int):
        nonlocal yielded
        t = len(nodes)
        if t > 0:
            unused = sum(1 for r in refcount if r == 0)
            if unused == 1:
                yielded += 1
                if budget is not None and yielded > budget:
                    raise BudgetExceeded(
                        f"class enumeration passed the budget of {budget}"
                    )
                yield Circuit(cls.num_inputs, tuple(nodes), t - 1)
        else:
            unused = 0
        prev_key = _node_key(nodes[-1]) if nodes else None
        for node in candidates(t):
            if node in seen:
                continue
            is_op = isinstance(node, (Add, Sub, Mul))
            if prev_key is not None:
                refs_prev = is_op and (node.a == t - 1 or node.b == t - 1)
                if not refs_prev and _node_key(node) <= prev_key:
                    continue
            c = _node_cost(node, cls.regime)
            if cost + c > cls.bound:
                continue
            # each later node can lower the unused count by at most 1
            consumed = len({node.a, node.b}) if is_op else 0
            new_unused = unused - consumed + 1
            remaining = cls.bound - cost - c
            if new_unused - 1 > remaining:
                continue
            nodes.append(node)
            seen.add(node)
            refcount.append(0)
            if is_op:
                refcount[node.a] += 1
                refcount[node.b] += 1
            yield from walk(cost + c)
            if is_op:
                refcount[node.a] -= 1
                refcount[node.b] -= 1
            refcount.pop()
            seen.discard(node)
            nodes.pop()

    yield from walk(0)


def class_size(cls: CircuitClass, budget: int | None = None) -> int:
    n = 0
    for _ in cls.members(budget=budget):
        n += 1
    return n


@dataclass(frozen=True)
class PitResult:
    verdict: str  # "nonzero" | "zero"
    witness_point: tuple | None
    witness_value: int | None
    error_bound: float
    trials_run: int


def pit_error_bound(
    size: int, box: tuple[int, int], trials: int, degree_hint: int | None = None
) -> float:
    span = box[1] - box[0] + 1
    if degree_hint is not None:
        rho = min(1.0, degree_hint / span)
    elif size >= span.bit_length():
        rho = 1.0
    else:
        rho = min(1.0, 2.0 ** (size - (span.bit_length() - 1)))
    return rho**trials


def pit_random(
    c: Circuit,
    trials: int = 8,
    seed: int = 0,
    box: tuple[int, int] = (1, 1 << 62),
    degree_hint: int | None = None,
) -> PitResult:
    """Randomized identity test over exact integers.

    A nonzero verdict is certain (the witness is returned); a zero verdict
    carries the (degree/box)^trials false-zero bound.
    """
    if trials < 1:
        raise UsageError("need at least one trial")
    rng = random.Random(derive_seed("pit", seed, trials, box[0], box[1]))
    for t in range(trials):
        point = tuple(rng.randrange(box[0], box[1] + 1) for _ in range(c.num_inputs))
        v = evaluate(c, point)
        if v != 0:
            return PitResult("nonzero", point, v, 0.0, t + 1)
    return PitResult(
        "zero", None, None, pit_error_bound(c.size, box, trials, degree_hint), trials
    )


# ---------------------------------------------------------------------------
# hitting sets


@dataclass(frozen=True)
class HittingSet:
    points: tuple[tuple[int, ...], ...]
    cls: CircuitClass

    @property
    def total_bits(self) -> int:
        return sum(int_bitlength(v) for pt in self.points for v in pt)


@dataclass(frozen=True)
class HitReport:
    valid: bool
    violator: Circuit | None
    members_checked: int
    nonzero_members: int
    evaluations: int
    seconds: float


def nonzero_members(
    cls: CircuitClass, max_terms: int = 10_000, budget: int | None = None
) -> list[Circuit]:
    """Members whose expansion is not the zero polynomial, in canonical

    enumeration order."""
    out = []
    for c in cls.members(budget=budget):
        if expand_to_polynomial(c, max_terms=max_terms):
            out.append(c)
    return out


def verify_hitting_set(
    hs: HittingSet, max_terms: int = 10_000, budget: int | None = None
) -> HitReport:
    """Exhaustive check: every nonzero member must be nonzero somewhere on

    the point list.  Returns the first violator in enumeration order."""
    evals = 0
    checked = 0
    nonzero = 0
    violator = None
    with Stopwatch() as sw:
        for c in hs.cls.members(budget=budget):
            checked += 1
            if not expand_to_polynomial(c, max_terms=max_terms):
                continue
            nonzero += 1
            hit = False
            for pt in hs.points:
                evals += 1
                if evaluate(c, pt) != 0:
                    hit = True
                    break
            if not hit and violator is None:
                violator = c
    return HitReport(violator is None, violator, checked, nonzero, evals, sw.seconds)


def build_hitting_set_greedy(
    cls: CircuitClass,
    seed: int = 0,
    pool_size: int = 64,
    box: tuple[int, int] = (1, 1 << 16),
    max_terms: int = 10_000,
    budget: int | None = None,
) -> HittingSet:
    """Greedy set cover over a seeded candidate pool.

    Ties break toward the earliest pool index; PoolExhausted when no
    candidate hits any still-uncovered member.
    """
    members = nonzero_members(cls, max_terms=max_terms, budget=budget)
    if cls.num_inputs == 0:
        raise UsageError("hitting sets need at least one variable")
    rng = random.Random(derive_seed("pool", seed, cls.label(), box[0], box[1]))
    pool: list[tuple[int, ...]] = []
    taken = set()
    attempts = 0
    # a small box may hold fewer distinct points than requested
    while len(pool) < pool_size and attempts < 20 * pool_size:
        attempts += 1
        pt = tuple(
            rng.randrange(box[0], box[1] + 1) for _ in range(cls.num_inputs)
        )
        if pt not in taken:
            taken.add(pt)
            pool.append(pt)
    hits = []
    for pt in pool:
        mask = 0
        for mi, c in enumerate(members):
            if evaluate(c, pt) != 0:
                mask |= 1 << mi
        hits.append(mask)
    want = (1 << len(members)) - 1
    covered = 0
    chosen: list[tuple[int, ...]] = []
    while covered != want:
        best, best_gain = None, 0
        for j, mask in enumerate(hits):
            gain = bin(mask & ~covered).count("1")
            if gain > best_gain:
                best, best_gain = j, gain
        if best is None:
            raise PoolExhausted(
                f"pool of {pool_size} cannot cover {len(members)} members"
            )
        chosen.append(pool[best])
        covered |= hits[best]
    return HittingSet(tuple(chosen), cls)


def disjoint_hitting_families(
    cls: CircuitClass,
    count: int,
    seed: int = 0,
    band: int = 1 << 16,
    pool_size: int = 64,
    max_terms: int = 10_000,
) -> list[HittingSet]:
    """Up to `count` hitting sets with pairwise disjoint point sets, built

    from disjoint coordinate bands; stops early if a band's pool is too
    weak.  Band f draws every coordinate from [1 + f*band, (f+1)*band]."""
    families: list[HittingSet] = []
    for f in range(count):
        box = (1 + f * band, (f + 1) * band)
        try:
            hs = build_hitting_set_greedy(
                cls,
                seed=derive_seed("family", seed, f),
                pool_size=pool_size,
                box=box,
                max_terms=max_terms,
            )
        except PoolExhausted:
            break
        families.append(hs)
    all_points = [pt for hs in families for pt in hs.points]
    if len(set(all_points)) != len(all_points):
        raise AssertionError("banded families collided; banding bug")
    return families


def hitting_set_axioms_report(hs: HittingSet, max_terms: int = 10_000) -> dict:
    """The four desk-scale axioms: short, rich, easy to verify, easy to

    construct (construction time is reported by the builder's caller)."""
    rep = verify_hitting_set(hs, max_terms=max_terms)
    return {
        "points": len(hs.points),
        "total_bits": hs.total_bits,
        "rich": rep.valid,
        "nonzero_members": rep.nonzero_members,
        "members": rep.members_checked,
        "verify_evaluations": rep.evaluations,
        "verify_seconds": rep.seconds,
    }


# ---------------------------------------------------------------------------
# hitting set files


def serialize_hitting_set(hs: HittingSet) -> str:
    if not isinstance(hs.cls, EnumeratedClass):
        raise UsageError("only enumerated-class hitting sets have a file form")
    lines = [
        "hitting-set v1",
        "class " + hs.cls.label(),
        f"points {len(hs.points)}",
    ]
    for pt in hs.points:
        lines.append(" ".join(str(v) for v in pt))
    return "\n".join(lines) + "\n"


def parse_hitting_set(text: str) -> HittingSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "hitting-set v1":
        raise ParseError("missing hitting-set v1 header")
    if len(lines) < 3 or not lines[1].startswith("class enumerated "):
        raise ParseError("missing enumerated class line")
    fields = dict(
        tok.split("=", 1) for tok in lines[1][len("class enumerated ") :].split()
    )
    try:
        cls = EnumeratedClass(
            num_inputs=int(fields["n"]),
            bound=int(fields["bound"]),
            alphabet=tuple(int(v) for v in fields["alphabet"].split(",")),
            regime=fields["regime"],
        )
    except (KeyError, ValueError) as e:
        raise ParseError(f"bad class line: {e}") from None
    head = lines[2].split()
    if len(head) != 2 or head[0] != "points":
        raise ParseError("missing points count line")
    count = int(head[1])
    body = lines[3:]
    if len(body) != count:
        raise ParseError(f"expected {count} point lines, got {len(body)}")
    pts = []
    for ln in body:
        pt = tuple(int(tok) for tok in ln.split())
        if len(pt) != cls.num_inputs:
            raise ParseError(f"point arity {len(pt)} mismatches class {cls.num_inputs}")
        pts.append(pt)
    return HittingSet(tuple(pts), cls)


def circuits_digest(circuits: Sequence[Circuit]) -> str:
    """Stable hex digest of a circuit list (used in reports)."""
    import hashlib

    h = hashlib.sha256()
    for c in circuits:
        h.update(serialize_circuit(c).encode())
    return h.hexdigest()[:16]
