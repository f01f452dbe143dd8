"""Set-system designs: m' subsets of a size-l universe, each of size r,

pairwise intersecting in at most k_cap elements.

Rows are stored as bitmasks over the universe {0, ..., l-1}.  The binary
label format is a fixed header of four big-endian u16 fields (m', l, r,
k_cap) followed by the row-major incidence bitmatrix, MSB-first within each
byte, zero-padded to a byte boundary.  Decoding is strict: wrong length,
header values that violate the parameter constraints, or nonzero padding
all fail structurally; set-system violations (wrong cardinality, oversized
intersection) are the verifier's business, not the decoder's.
"""

from __future__ import annotations

import math
import random
import struct
from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceeded, ConstructionFailed, MalformedEncoding, UsageError
from .util import derive_seed


@dataclass(frozen=True)
class DesignParams:
    m_prime: int
    l: int
    r: int
    k_cap: int

    def __post_init__(self):
        # k_cap >= r is degenerate (no pair constraint binds) but legal.
        if self.m_prime < 1:
            raise UsageError("need at least one row")
        if not 1 <= self.r <= self.l:
            raise UsageError(f"need 1 <= r <= l, got r={self.r} l={self.l}")
        if self.k_cap < 0:
            raise UsageError(f"need k_cap >= 0, got {self.k_cap}")

    @staticmethod
    def from_provenance(m: int, c: int, a: int, b: int):
        """Parameters scaled from a base size m with exponents 0 < c < a < b:

        t = ceil(log2 m), m' = m^c, r = a*t, l = b*t, k_cap = c*t."""
        if not 0 < c < a < b:
            raise UsageError(f"need 0 < c < a < b, got ({c}, {a}, {b})")
        if m < 2:
            raise UsageError("base size m must be >= 2")
        t = max(1, math.ceil(math.log2(m)))
        return DesignParams(m_prime=m**c, l=b * t, r=a * t, k_cap=c * t)


@dataclass(frozen=True)
class Design:
    params: DesignParams
    rows: tuple[int, ...]

    def row_sets(self) -> tuple[frozenset[int], ...]:
        """Rows as subsets of the 1-indexed universe {1, ..., l}."""
        return tuple(
            frozenset(j + 1 for j in range(self.params.l) if row >> j & 1)
            for row in self.rows
        )


@dataclass(frozen=True)
class DesignViolation:
    kind: str  # "row-count" | "universe" | "cardinality" | "intersection"
    index: int | None = None
    pair: tuple[int, int] | None = None
    detail: str = ""


def verify_design(d: Design) -> DesignViolation | None:
    """First violation in canonical scan order, or None if valid."""
    p = d.params
    if len(d.rows) != p.m_prime:
        return DesignViolation(
            "row-count", detail=f"{len(d.rows)} rows, expected {p.m_prime}"
        )
    full = (1 << p.l) - 1
    for i, row in enumerate(d.rows):
        if row & ~full:
            return DesignViolation(
                "universe", index=i, detail="element outside the universe"
            )
        card = bin(row).count("1")
        if card != p.r:
            return DesignViolation(
                "cardinality", index=i, detail=f"|T_{i}| = {card}, expected {p.r}"
            )
    for i in range(len(d.rows)):
        for j in range(i + 1, len(d.rows)):
            inter = bin(d.rows[i] & d.rows[j]).count("1")
            if inter > p.k_cap:
                return DesignViolation(
                    "intersection",
                    pair=(i, j),
                    detail=f"|T_{i} & T_{j}| = {inter} > {p.k_cap}",
                )
    return None


def forced_intersection(params: DesignParams) -> int:
    """Any two r-subsets of an l-universe share at least 2r - l elements."""
    return max(0, 2 * params.r - params.l)


def build_design_greedy(
    params: DesignParams,
    seed: int = 0,
    restarts: int = 500,
    attempts: int = 8,
    exhaustive_cap: int = 200_000,
    backtrack_nodes: int = 500_000,
) -> Design:
    """Row-by-row randomized construction.

    Greedy choice can dead-end even when a design exists (it does for
    m'=4, l=6, r=3, k_cap=1), so the whole build is retried `attempts`
    times and, for universes small enough to enumerate, a deterministic
    backtracking search runs last.  ConstructionFailed carries the best
    row count achieved; the pigeonhole bound 2r - l > k_cap fails fast.
    """
    if params.m_prime >= 2 and forced_intersection(params) > params.k_cap:
        raise ConstructionFailed(
            f"2r - l = {2 * params.r - params.l} exceeds k_cap = {params.k_cap}",
            rows_achieved=0,
        )
    rng = random.Random(
        derive_seed("design", seed, params.m_prime, params.l, params.r, params.k_cap)
    )

    def admissible(cand: int, rows: list[int]) -> bool:
        return all(bin(cand & prev).count("1") <= params.k_cap for prev in rows)

    def finish(rows: list[int]) -> Design:
        d = Design(params, tuple(rows))
        v = verify_design(d)
        if v is not None:
            raise AssertionError(f"builder produced an invalid design: {v}")
        return d

    best = 0
    for _ in range(attempts):
        rows: list[int] = []
        for _ in range(params.m_prime):
            found: int | None = None
            for _ in range(restarts):
                cand = 0
                for j in rng.sample(range(params.l), params.r):
                    cand |= 1 << j
                if admissible(cand, rows):
                    found = cand
                    break
            if found is None:
                break
            rows.append(found)
        best = max(best, len(rows))
        if len(rows) == params.m_prime:
            return finish(rows)

    if math.comb(params.l, params.r) <= exhaustive_cap:
        all_rows = []
        for combo in combinations(range(params.l), params.r):
            mask = 0
            for j in combo:
                mask |= 1 << j
            all_rows.append(mask)
        visited = 0
        stack: list[int] = []

        def extend() -> bool:
            nonlocal visited, best
            best = max(best, len(stack))
            if len(stack) == params.m_prime:
                return True
            for cand in all_rows:
                if visited >= backtrack_nodes:
                    return False
                visited += 1
                if admissible(cand, stack):
                    stack.append(cand)
                    if extend():
                        return True
                    stack.pop()
            return False

        if extend():
            return finish(stack)
        raise ConstructionFailed(
            f"no design found (backtracking over {len(all_rows)} rows, "
            f"{visited} nodes, best {best} rows)",
            rows_achieved=best,
        )
    raise ConstructionFailed(
        f"stuck after {best} rows (randomized attempts exhausted)",
        rows_achieved=best,
    )


def count_designs_exhaustive(params: DesignParams, budget: int = 5_000_000) -> int:
    """Number of ordered row tuples forming a valid design, by backtracking.

    The crude upper estimate C(l, r)^m' is checked against the budget before
    any work happens.
    """
    est = math.comb(params.l, params.r) ** params.m_prime
    if est > budget:
        raise BudgetExceeded(
            f"estimated search space {est} exceeds budget {budget}"
        )
    all_rows = []
    for combo in combinations(range(params.l), params.r):
        mask = 0
        for j in combo:
            mask |= 1 << j
        all_rows.append(mask)

    count = 0

    def extend(chosen: list[int]):
        nonlocal count
        if len(chosen) == params.m_prime:
            count += 1
            return
        for cand in all_rows:
            if all(
                bin(cand & prev).count("1") <= params.k_cap for prev in chosen
            ):
                chosen.append(cand)
                extend(chosen)
                chosen.pop()

    extend([])
    return count


# ---------------------------------------------------------------------------
# binary labels

_HEADER = struct.Struct(">HHHH")


def encoded_length(params: DesignParams) -> int:
    return _HEADER.size + (params.m_prime * params.l + 7) // 8


def encode_design(d: Design) -> bytes:
    p = d.params
    for v in (p.m_prime, p.l, p.r, p.k_cap):
        if not 0 <= v <= 0xFFFF:
            raise UsageError(f"field {v} does not fit the u16 header")
    out = bytearray(_HEADER.pack(p.m_prime, p.l, p.r, p.k_cap))
    acc = 0
    nbits = 0
    for row in d.rows:
        for j in range(p.l):
            acc = (acc << 1) | (row >> j & 1)
            nbits += 1
            if nbits == 8:
                out.append(acc)
                acc = nbits = 0
    if nbits:
        out.append(acc << (8 - nbits))
    return bytes(out)


def decode_design(data: bytes) -> Design:
    if len(data) < _HEADER.size:
        raise MalformedEncoding("label shorter than the fixed header")
    m_prime, l, r, k_cap = _HEADER.unpack_from(data)
    try:
        params = DesignParams(m_prime, l, r, k_cap)
    except UsageError as e:
        raise MalformedEncoding(f"header violates parameter constraints: {e}") from None
    if len(data) != encoded_length(params):
        raise MalformedEncoding(
            f"label length {len(data)}, expected {encoded_length(params)}"
        )
    body = data[_HEADER.size :]
    rows = []
    bitpos = 0
    for _ in range(m_prime):
        row = 0
        for j in range(l):
            byte = body[bitpos // 8]
            bit = byte >> (7 - bitpos % 8) & 1
            row |= bit << j
            bitpos += 1
        rows.append(row)
    while bitpos < 8 * len(body):
        if body[bitpos // 8] >> (7 - bitpos % 8) & 1:
            raise MalformedEncoding("nonzero padding bits")
        bitpos += 1
    return Design(params, tuple(rows))
