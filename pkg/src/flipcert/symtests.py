"""Symmetry-characterization test suites for the permanent and the

E-function, plus the exact coefficient-space uniqueness computation.

A candidate circuit is interrogated with randomized identity queries built
from the characterizing symmetries:

  permanent suite   nonzero at a random point; invariance under adjacent
                    row/column transpositions; diagonal scaling law
                    C(mu X) = (prod mu) C(X) on both sides; optional
                    normalization C(I) = 1.
  self-reduction    first-row expansion C_i(Y) = sum_j y_1j C_{i-1}(Y_j),
                    kept as a reporting/contrast suite (its queries touch
                    i+1 points; the symmetry queries touch at most 2).
  E-function suite  nonzero; left action by m x m elementaries with the
                    det(A)^(k^m) factor (or det-1 elements only, in literal
                    mode); invariance under the column wreath generators;
                    vanishing on a singular primary submatrix; optional
                    normalization E(X0) = 1 at the all-unit-columns point.

Queries evaluate either over exact integers or modulo a few fresh random
primes.  Exhaustive mode replaces sampling with exact identity checks on
the circuit's sparse expansion, with diagonal test vectors anchored at
distinct primes; for this class of identities that makes the check sound,
not just probabilistic (multiplicative independence forces the degree
vectors exactly).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .circuits import (
    Circuit,
    evaluate,
    expand_to_polynomial,
    poly_eval,
    poly_remap_vars,
    poly_row_add_subst,
    poly_scale_vars,
    poly_scaled,
    poly_subst_consts,
)
from .errors import ArityMismatch, UsageError
from .fields import PrimeField, random_prime
from .matrices import BLOCK, SQUARE, MatrixAssignment
from .oracles import (
    Diagonal,
    ElementaryAdd,
    PermSwap,
    RowCycle,
    apply_group,
    column_permutation,
    k_generators,
)
from .util import Stopwatch, derive_seed

# query kinds
P_NONZERO = "PNonZero"
P_PERM_LEFT = "PPermLeft"
P_PERM_RIGHT = "PPermRight"
P_DIAG_LEFT = "PDiagLeft"
P_DIAG_RIGHT = "PDiagRight"
SELF_REDUCE = "SelfReduce"
SELF_REDUCE_BASE = "SelfReduceBase"
E_NONZERO = "ENonZero"
E_ELEM = "EElem"
E_KGEN = "EKGen"
E_PRIMARY_VANISH = "EPrimaryVanish"
NORMALIZE = "Normalize"

# relations between the evaluations v_0, v_1, ... of a query's points
REL_NONZERO = "nonzero"  # v0 != 0
REL_EQUAL = "equal"  # v1 == v0
REL_SCALED = "scaled"  # v1 == coeffs[0] * v0
REL_LINEAR = "linear"  # v0 == sum_i coeffs[i] * v_{i+1}
REL_CONST = "const"  # v0 == coeffs[0]


@dataclass(frozen=True)
class Query:
    kind: str
    params: tuple
    relation: str
    coeffs: tuple
    points: tuple[MatrixAssignment, ...]


@dataclass(frozen=True)
class Verdict:
    index: int
    kind: str
    passed: bool
    witness: tuple = ()


@dataclass(frozen=True)
class RunReport:
    accept: bool
    verdicts: tuple[Verdict, ...]
    mode: str
    primes: tuple[int, ...] = ()


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    rounds: int = 2
    nonzero_count: int = 3
    sample_width: int = 62
    normalize: bool = True
    mode: str = "sampled"  # "sampled" | "exhaustive"
    ring: str = "exact"  # "exact" | "modular"
    prime_bits: int = 31
    prime_count: int = 3
    det_factor_mode: str = "det-corrected"  # "det-corrected" | "literal"
    degree_hint: int | None = None
    max_terms: int = 200_000
    extra_diag_samples: int = 2

    def box(self) -> tuple[int, int]:
        return (1, 1 << self.sample_width)


@dataclass(frozen=True)
class VerifyResult:
    accept: bool
    target: str
    mode: str
    dims: tuple
    queries: tuple[Query, ...]
    verdicts: tuple[Verdict, ...]
    error_bound: float
    seconds: float
    notes: tuple[str, ...] = ()

    def transcript(self) -> str:
        lines = []
        for v in self.verdicts:
            word = "pass" if v.passed else "fail"
            extra = ""
            if v.witness:
                extra = " " + " ".join(str(w) for w in v.witness)
            lines.append(f"QUERY {v.index} {v.kind} {word}{extra}")
        lines.append("ACCEPT" if self.accept else "REJECT")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# query construction


def _rand_entry(rng: random.Random, box: tuple[int, int]) -> int:
    return rng.randrange(box[0], box[1] + 1)


def _rand_square(rng, n, box) -> MatrixAssignment:
    return MatrixAssignment.square(
        [[_rand_entry(rng, box) for _ in range(n)] for _ in range(n)]
    )


def _rand_block(rng, m, k, box) -> MatrixAssignment:
    return MatrixAssignment.block(
        m, k, [[_rand_entry(rng, box) for _ in range(k * m)] for _ in range(m)]
    )


def identity_point(n: int) -> MatrixAssignment:
    return MatrixAssignment.square(
        [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    )


def unit_columns_point(m: int, k: int) -> MatrixAssignment:
    """Every choice column at position i is the i-th unit vector; E = 1."""
    return MatrixAssignment.block(
        m,
        k,
        [[1 if r == c // k else 0 for c in range(k * m)] for r in range(m)],
    )


def embed_principal(Y: Sequence[Sequence[int]], n: int) -> MatrixAssignment:
    """Embed an i x i matrix into the lower-right corner of an n x n matrix

    with ones on the leading diagonal and zeros elsewhere."""
    i = len(Y)
    if i > n:
        raise UsageError(f"cannot embed {i}x{i} into {n}x{n}")
    off = n - i
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            if r >= off and c >= off:
                row.append(Y[r - off][c - off])
            else:
                row.append(1 if r == c else 0)
        rows.append(row)
    return MatrixAssignment.square(rows)


def _first_row_minor(Y: Sequence[Sequence[int]], j: int) -> list[list[int]]:
    return [
        [Y[r][c] for c in range(len(Y)) if c != j] for r in range(1, len(Y))
    ]


def _query_sort_key(q: Query):
    flat = tuple(v for P in q.points for v in P.flatten())
    return (q.kind, tuple(str(p) for p in q.params), q.relation, flat)


def canonicalize_queries(queries: Sequence[Query]) -> tuple[Query, ...]:
    """Stable canonical order with exact duplicates removed."""
    out: list[Query] = []
    for q in sorted(queries, key=_query_sort_key):
        if not out or out[-1] != q:
            out.append(q)
    return tuple(out)


def serialize_query(q: Query) -> str:
    def render(vals):
        return ",".join(str(v) for v in vals) if vals else "-"

    pts = []
    for P in q.points:
        tag = (
            f"s{P.shape[1]}"
            if P.shape[0] == SQUARE
            else f"b{P.shape[1]}x{P.shape[2]}"
        )
        pts.append(tag + ":" + ",".join(str(v) for v in P.flatten()))
    return (
        f"Q kind={q.kind} rel={q.relation} coeffs={render(q.coeffs)}"
        f" params={render(q.params)} points={'|'.join(pts)}"
    )


def gen_queries_perm(
    n: int,
    seed: int,
    rounds: int = 2,
    box: tuple[int, int] = (1, 1 << 62),
    nonzero_count: int = 3,
    normalize: bool = True,
) -> tuple[Query, ...]:
    """The permanent symmetry suite; deterministic in (n, seed, config)."""
    queries: list[Query] = []
    for r in range(rounds):
        rng = random.Random(derive_seed("P", n, seed, r))
        X = _rand_square(rng, n, box)
        for i in range(1, n):
            g = PermSwap(i)
            queries.append(
                Query(
                    P_PERM_LEFT,
                    (i, r),
                    REL_EQUAL,
                    (),
                    (X, apply_group(g, X, "left")),
                )
            )
            queries.append(
                Query(
                    P_PERM_RIGHT,
                    (i, r),
                    REL_EQUAL,
                    (),
                    (X, apply_group(g, X, "right")),
                )
            )
        mu = tuple(_rand_entry(rng, box) for _ in range(n))
        prod_mu = 1
        for v in mu:
            prod_mu *= v
        queries.append(
            Query(
                P_DIAG_LEFT,
                (r,) + mu,
                REL_SCALED,
                (prod_mu,),
                (X, apply_group(Diagonal(mu), X, "left")),
            )
        )
        nu = tuple(_rand_entry(rng, box) for _ in range(n))
        prod_nu = 1
        for v in nu:
            prod_nu *= v
        queries.append(
            Query(
                P_DIAG_RIGHT,
                (r,) + nu,
                REL_SCALED,
                (prod_nu,),
                (X, apply_group(Diagonal(nu), X, "right")),
            )
        )
    for t in range(nonzero_count):
        rng = random.Random(derive_seed("Pnz", n, seed, t))
        queries.append(
            Query(P_NONZERO, (t,), REL_NONZERO, (), (_rand_square(rng, n, box),))
        )
    if normalize:
        queries.append(Query(NORMALIZE, (), REL_CONST, (1,), (identity_point(n),)))
    return canonicalize_queries(queries)


def gen_queries_selfreduce(
    n: int,
    seed: int,
    rounds: int = 1,
    box: tuple[int, int] = (1, 1 << 62),
) -> tuple[Query, ...]:
    """Downward self-reduction suite.  Reporting/contrast only: each order-i

    query carries i+1 points, against the symmetry suite's 2."""
    queries: list[Query] = []
    for r in range(rounds):
        rng = random.Random(derive_seed("SR", n, seed, r))
        for i in range(2, n + 1):
            Y = [[_rand_entry(rng, box) for _ in range(i)] for _ in range(i)]
            points = [embed_principal(Y, n)]
            for j in range(i):
                points.append(embed_principal(_first_row_minor(Y, j), n))
            queries.append(
                Query(SELF_REDUCE, (i, r), REL_LINEAR, tuple(Y[0]), tuple(points))
            )
        y = _rand_entry(rng, box)
        queries.append(
            Query(
                SELF_REDUCE_BASE,
                (r,),
                REL_CONST,
                (y,),
                (embed_principal([[y]], n),),
            )
        )
    return canonicalize_queries(queries)


def _literal_diag_entries(rng: random.Random, m: int) -> tuple[int, ...]:
    # +-1 entries with an even number of -1, so the determinant is 1
    entries = [rng.choice((1, -1)) for _ in range(m)]
    if entries.count(-1) % 2 == 1:
        entries[rng.randrange(m)] *= -1
    return tuple(entries)


def gen_queries_efun(
    m: int,
    k: int,
    seed: int,
    rounds: int = 2,
    box: tuple[int, int] = (1, 1 << 62),
    nonzero_count: int = 3,
    normalize: bool = True,
    det_factor_mode: str = "det-corrected",
) -> tuple[Query, ...]:
    """The E-function suite; deterministic in (m, k, seed, config)."""
    if det_factor_mode not in ("det-corrected", "literal"):
        raise UsageError(f"unknown det_factor_mode {det_factor_mode!r}")
    corrected = det_factor_mode == "det-corrected"
    e = k**m
    queries: list[Query] = []
    for r in range(rounds):
        rng = random.Random(derive_seed("E", m, k, seed, r))
        X = _rand_block(rng, m, k, box)
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                if i == j:
                    continue
                y = _rand_entry(rng, box)
                g = ElementaryAdd(i, j, y)
                queries.append(
                    Query(
                        E_ELEM,
                        ("add", i, j, y, r),
                        REL_EQUAL,
                        (),
                        (X, apply_group(g, X, "left")),
                    )
                )
        if corrected:
            mu = tuple(_rand_entry(rng, box) for _ in range(m))
            det = 1
            for v in mu:
                det *= v
            queries.append(
                Query(
                    E_ELEM,
                    ("diag", r) + mu,
                    REL_SCALED,
                    (det**e,),
                    (X, apply_group(Diagonal(mu), X, "left")),
                )
            )
            for i in range(1, m):
                queries.append(
                    Query(
                        E_ELEM,
                        ("swap", i, r),
                        REL_SCALED,
                        ((-1) ** e,),
                        (X, apply_group(PermSwap(i), X, "left")),
                    )
                )
        else:
            if m >= 1:
                mu = _literal_diag_entries(rng, m)
                queries.append(
                    Query(
                        E_ELEM,
                        ("diag1", r) + mu,
                        REL_EQUAL,
                        (),
                        (X, apply_group(Diagonal(mu), X, "left")),
                    )
                )
            for j in range(3, m + 1):
                queries.append(
                    Query(
                        E_ELEM,
                        ("cycle", 1, 2, j, r),
                        REL_EQUAL,
                        (),
                        (X, apply_group(RowCycle(1, 2, j), X, "left")),
                    )
                )
        for g in k_generators(m, k):
            name = type(g).__name__
            args = tuple(getattr(g, f) for f in g.__dataclass_fields__)
            queries.append(
                Query(
                    E_KGEN,
                    (name,) + args + (r,),
                    REL_EQUAL,
                    (),
                    (X, apply_group(g, X, "right")),
                )
            )
        queries.append(
            Query(
                E_PRIMARY_VANISH,
                (r,),
                REL_CONST,
                (0,),
                (_primary_vanish_point(rng, m, k, box),),
            )
        )
    for t in range(nonzero_count):
        rng = random.Random(derive_seed("Enz", m, k, seed, t))
        queries.append(
            Query(E_NONZERO, (t,), REL_NONZERO, (), (_rand_block(rng, m, k, box),))
        )
    if normalize:
        queries.append(
            Query(NORMALIZE, (), REL_CONST, (1,), (unit_columns_point(m, k),))
        )
    return canonicalize_queries(queries)


def _primary_vanish_point(rng, m, k, box) -> MatrixAssignment:
    """Random block point whose primary submatrix is visibly singular:

    choice-1 columns at positions below m are unit vectors, and the m-th
    entry of the choice-1 column at position m is zero."""
    rows = [[_rand_entry(rng, box) for _ in range(k * m)] for _ in range(m)]
    for pos in range(m - 1):
        for r in range(m):
            rows[r][pos * k] = 1 if r == pos else 0
    rows[m - 1][(m - 1) * k] = 0
    return MatrixAssignment.block(m, k, rows)


# ---------------------------------------------------------------------------
# query execution


def _relation_holds(q: Query, vals: Sequence[int]) -> bool:
    if q.relation == REL_NONZERO:
        return bool(vals[0])
    if q.relation == REL_EQUAL:
        return vals[1] == vals[0]
    if q.relation == REL_SCALED:
        return vals[1] == q.coeffs[0] * vals[0]
    if q.relation == REL_LINEAR:
        acc = 0
        for c, v in zip(q.coeffs, vals[1:]):
            acc += c * v
        return vals[0] == acc
    if q.relation == REL_CONST:
        return vals[0] == q.coeffs[0]
    raise UsageError(f"unknown relation {q.relation!r}")


def _relation_holds_mod(q: Query, vals: Sequence[int], p: int) -> bool:
    if q.relation == REL_NONZERO:
        return vals[0] % p != 0
    if q.relation == REL_EQUAL:
        return (vals[1] - vals[0]) % p == 0
    if q.relation == REL_SCALED:
        return (vals[1] - q.coeffs[0] * vals[0]) % p == 0
    if q.relation == REL_LINEAR:
        acc = 0
        for c, v in zip(q.coeffs, vals[1:]):
            acc += c * v
        return (vals[0] - acc) % p == 0
    if q.relation == REL_CONST:
        return (vals[0] - q.coeffs[0]) % p == 0
    raise UsageError(f"unknown relation {q.relation!r}")


def run_queries(
    c: Circuit,
    queries: Sequence[Query],
    ring: str = "exact",
    prime_bits: int = 31,
    prime_count: int = 3,
    seed: int = 0,
) -> RunReport:
    """Evaluate a query list against a circuit.

    Exact mode compares BigInt values.  Modular mode draws prime_count fresh
    random primes; equality-style relations must hold at every prime, the
    nonzero relation is satisfied by a nonzero residue at any prime.
    """
    if ring not in ("exact", "modular"):
        raise UsageError(f"unknown ring mode {ring!r}")
    primes: tuple[int, ...] = ()
    if ring == "modular":
        rng = random.Random(derive_seed("queryprimes", seed, prime_bits))
        primes = tuple(random_prime(rng, prime_bits) for _ in range(prime_count))
    verdicts: list[Verdict] = []
    accept = True
    for idx, q in enumerate(queries):
        flats = [P.flatten() for P in q.points]
        for f in flats:
            if len(f) != c.num_inputs:
                raise ArityMismatch(
                    f"query point has {len(f)} entries, circuit takes {c.num_inputs}"
                )
        if ring == "exact":
            vals = [evaluate(c, f) for f in flats]
            ok = _relation_holds(q, vals)
        else:
            if q.relation == REL_NONZERO:
                ok = False
                for p in primes:
                    F = PrimeField(p)
                    vals = [evaluate(c, f, ring=F).value for f in flats]
                    if _relation_holds_mod(q, vals, p):
                        ok = True
                        break
            else:
                ok = True
                for p in primes:
                    F = PrimeField(p)
                    vals = [evaluate(c, f, ring=F).value for f in flats]
                    if not _relation_holds_mod(q, vals, p):
                        ok = False
                        break
        witness: tuple = ()
        if not ok:
            witness = tuple(vals)
            accept = False
        verdicts.append(Verdict(idx, q.kind, ok, witness))
    return RunReport(accept, tuple(verdicts), ring, primes)


def sampled_error_bound(
    size: int, box: tuple[int, int], rounds: int, degree_hint: int | None = None
) -> float:
    """Per-identity miss probability bound: (deg / |S|)^rounds, capped at 1.

    The formal degree bound for a size-s circuit is 2^s; degree_hint
    substitutes a caller-asserted tighter degree."""
    span = box[1] - box[0] + 1
    if degree_hint is not None:
        rho = min(1.0, degree_hint / span)
    elif size >= span.bit_length():
        rho = 1.0
    else:
        rho = min(1.0, 2.0 ** (size - (span.bit_length() - 1)))
    return rho**rounds


# ---------------------------------------------------------------------------
# exhaustive (symbolic) identity checks


def _record(verdicts: list[Verdict], kind: str, ok: bool, note=()):
    verdicts.append(Verdict(len(verdicts), kind, ok, tuple(note)))


def _prime_tuple(n: int) -> tuple[int, ...]:
    out, cand = [], 2
    while len(out) < n:
        for p in out:
            if cand % p == 0:
                break
        else:
            out.append(cand)
        cand += 1
    return tuple(out)


def _exhaustive_perm(c: Circuit, n: int, cfg: VerifyConfig) -> tuple[list[Verdict], tuple[str, ...]]:
    poly = expand_to_polynomial(c, max_terms=cfg.max_terms)
    verdicts: list[Verdict] = []
    notes = (f"expansion terms={len(poly)}",)

    def var(r, col):
        return r * n + col

    _record(verdicts, P_NONZERO, bool(poly))
    for i in range(n - 1):
        rowp = list(range(n * n))
        colp = list(range(n * n))
        for col in range(n):
            rowp[var(i, col)], rowp[var(i + 1, col)] = var(i + 1, col), var(i, col)
        for r in range(n):
            colp[var(r, i)], colp[var(r, i + 1)] = var(r, i + 1), var(r, i)
        _record(verdicts, P_PERM_LEFT, poly_remap_vars(poly, rowp) == poly)
        _record(verdicts, P_PERM_RIGHT, poly_remap_vars(poly, colp) == poly)
    diags = [_prime_tuple(n)]
    rng = random.Random(derive_seed("Pexh", n, cfg.seed))
    for _ in range(cfg.extra_diag_samples):
        diags.append(tuple(_rand_entry(rng, cfg.box()) for _ in range(n)))
    for mu in diags:
        prod = 1
        for v in mu:
            prod *= v
        left = [mu[v // n] for v in range(n * n)]
        right = [mu[v % n] for v in range(n * n)]
        _record(
            verdicts,
            P_DIAG_LEFT,
            poly_scale_vars(poly, left) == poly_scaled(poly, prod),
        )
        _record(
            verdicts,
            P_DIAG_RIGHT,
            poly_scale_vars(poly, right) == poly_scaled(poly, prod),
        )
    if cfg.normalize:
        ident = identity_point(n).flatten()
        _record(verdicts, NORMALIZE, poly_eval(poly, ident) == 1)
    return verdicts, notes


def _exhaustive_efun(
    c: Circuit, m: int, k: int, cfg: VerifyConfig
) -> tuple[list[Verdict], tuple[str, ...]]:
    poly = expand_to_polynomial(c, max_terms=cfg.max_terms)
    verdicts: list[Verdict] = []
    notes = (f"expansion terms={len(poly)}",)
    e = k**m
    w = k * m

    def var(r, col):
        return r * w + col

    corrected = cfg.det_factor_mode == "det-corrected"
    rng = random.Random(derive_seed("Eexh", m, k, cfg.seed))

    _record(verdicts, E_NONZERO, bool(poly))
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for y in (1, _rand_entry(rng, cfg.box())):
                pairs = [(var(i, col), var(j, col)) for col in range(w)]
                _record(
                    verdicts,
                    E_ELEM,
                    poly_row_add_subst(poly, pairs, y) == poly,
                    (f"add {i + 1},{j + 1} y={y}",),
                )
    diags = [_prime_tuple(m)]
    for _ in range(cfg.extra_diag_samples):
        diags.append(tuple(_rand_entry(rng, cfg.box()) for _ in range(m)))
    if corrected:
        for mu in diags:
            det = 1
            for v in mu:
                det *= v
            factors = [mu[v // w] for v in range(m * w)]
            _record(
                verdicts,
                E_ELEM,
                poly_scale_vars(poly, factors) == poly_scaled(poly, det**e),
                (f"diag {mu}",),
            )
        for i in range(1, m):
            perm = list(range(m * w))
            for col in range(w):
                perm[var(i - 1, col)], perm[var(i, col)] = (
                    var(i, col),
                    var(i - 1, col),
                )
            _record(
                verdicts,
                E_ELEM,
                poly_remap_vars(poly, perm) == poly_scaled(poly, (-1) ** e),
                (f"swap {i}",),
            )
    else:
        if m >= 2:
            entries = [-1, -1] + [1] * (m - 2)
            factors = [entries[v // w] for v in range(m * w)]
            _record(
                verdicts,
                E_ELEM,
                poly_scale_vars(poly, factors) == poly,
                ("diag1 -1,-1",),
            )
        for j in range(3, m + 1):
            perm = list(range(m * w))
            dest = list(range(m))
            dest[0], dest[1], dest[j - 1] = 1, j - 1, 0
            for r in range(m):
                for col in range(w):
                    perm[var(r, col)] = var(dest[r], col)
            _record(
                verdicts,
                E_ELEM,
                poly_remap_vars(poly, perm) == poly,
                (f"cycle 1,2,{j}",),
            )
    for g in k_generators(m, k):
        dest = column_permutation(g, m, k)
        perm = [var(v // w, dest[v % w]) for v in range(m * w)]
        _record(
            verdicts,
            E_KGEN,
            poly_remap_vars(poly, perm) == poly,
            (type(g).__name__,),
        )
    bindings: dict[int, int] = {}
    for pos in range(m - 1):
        for r in range(m):
            bindings[var(r, pos * k)] = 1 if r == pos else 0
    bindings[var(m - 1, (m - 1) * k)] = 0
    _record(verdicts, E_PRIMARY_VANISH, poly_subst_consts(poly, bindings) == {})
    if cfg.normalize:
        _record(
            verdicts,
            NORMALIZE,
            poly_eval(poly, unit_columns_point(m, k).flatten()) == 1,
        )
    return verdicts, notes


# ---------------------------------------------------------------------------
# top-level verifiers


def verify_claims_perm(c: Circuit, n: int, cfg: VerifyConfig | None = None) -> VerifyResult:
    """Decide whether c plausibly computes the n x n permanent.

    Sampled mode runs the randomized symmetry suite and reports a
    per-identity error bound.  Exhaustive mode checks the identities
    exactly on the expansion (sound for this class: accept iff c is the
    permanent, assuming the expansion fits the term budget).
    """
    cfg = cfg or VerifyConfig()
    if c.num_inputs != n * n:
        raise ArityMismatch(f"circuit takes {c.num_inputs} inputs, want {n * n}")
    with Stopwatch() as sw:
        if cfg.mode == "exhaustive":
            verdicts, notes = _exhaustive_perm(c, n, cfg)
            accept = all(v.passed for v in verdicts)
            return VerifyResult(
                accept, "perm", "exhaustive", (n,), (), tuple(verdicts), 0.0, sw.seconds, notes
            )
        if cfg.mode != "sampled":
            raise UsageError(f"unknown mode {cfg.mode!r}")
        queries = gen_queries_perm(
            n,
            cfg.seed,
            rounds=cfg.rounds,
            box=cfg.box(),
            nonzero_count=cfg.nonzero_count,
            normalize=cfg.normalize,
        )
        report = run_queries(
            c,
            queries,
            ring=cfg.ring,
            prime_bits=cfg.prime_bits,
            prime_count=cfg.prime_count,
            seed=cfg.seed,
        )
    bound = sampled_error_bound(c.size, cfg.box(), cfg.rounds, cfg.degree_hint)
    return VerifyResult(
        report.accept,
        "perm",
        "sampled",
        (n,),
        queries,
        report.verdicts,
        bound,
        sw.seconds,
        (f"ring={report.mode}",),
    )


def verify_claims_efun(
    c: Circuit, m: int, k: int, cfg: VerifyConfig | None = None
) -> VerifyResult:
    """Decide whether c plausibly computes the (m, k) E-function."""
    cfg = cfg or VerifyConfig()
    if c.num_inputs != m * k * m:
        raise ArityMismatch(
            f"circuit takes {c.num_inputs} inputs, want {m * k * m}"
        )
    notes: tuple[str, ...] = ()
    if k < 3:
        notes = ("sub-threshold k (characterization converse needs k >= 3)",)
    with Stopwatch() as sw:
        if cfg.mode == "exhaustive":
            verdicts, xnotes = _exhaustive_efun(c, m, k, cfg)
            accept = all(v.passed for v in verdicts)
            return VerifyResult(
                accept,
                "efun",
                "exhaustive",
                (m, k),
                (),
                tuple(verdicts),
                0.0,
                sw.seconds,
                notes + xnotes,
            )
        if cfg.mode != "sampled":
            raise UsageError(f"unknown mode {cfg.mode!r}")
        queries = gen_queries_efun(
            m,
            k,
            cfg.seed,
            rounds=cfg.rounds,
            box=cfg.box(),
            nonzero_count=cfg.nonzero_count,
            normalize=cfg.normalize,
            det_factor_mode=cfg.det_factor_mode,
        )
        report = run_queries(
            c,
            queries,
            ring=cfg.ring,
            prime_bits=cfg.prime_bits,
            prime_count=cfg.prime_count,
            seed=cfg.seed,
        )
    bound = sampled_error_bound(c.size, cfg.box(), cfg.rounds, cfg.degree_hint)
    return VerifyResult(
        report.accept,
        "efun",
        "sampled",
        (m, k),
        queries,
        report.verdicts,
        bound,
        sw.seconds,
        notes + (f"ring={report.mode}",),
    )


def selfreduce_contrast(n: int, seed: int = 0) -> dict:
    """Point-count contrast between the two query styles, for reports."""
    sym = gen_queries_perm(n, seed)
    red = gen_queries_selfreduce(n, seed)
    return {
        "symmetry_max_points": max(len(q.points) for q in sym),
        "selfreduce_max_points": max(len(q.points) for q in red),
        "selfreduce_order_points": {
            q.params[0]: len(q.points) for q in red if q.kind == SELF_REDUCE
        },
    }


# ---------------------------------------------------------------------------
# coefficient-space uniqueness


@dataclass
class NullspaceResult:
    dim: int
    monomials: list[tuple[int, ...]]
    basis: list[dict]
    forced_zero: int = 0


def _monomials_up_to(nvars: int, degree: int):
    # exponent tuples with total degree <= degree, lexicographic
    def rec(prefix, remaining, left):
        if left == 0:
            yield tuple(prefix)
            return
        for e in range(remaining + 1):
            yield from rec(prefix + [e], remaining - e, left - 1)

    yield from rec([], degree, nvars)


def perm_symmetry_nullspace(
    n: int, extra_diag_samples: int = 2, seed: int = 0
) -> NullspaceResult:
    """Solution space of the symmetry constraints on coefficient vectors of

    polynomials of total degree <= n in the n x n matrix entries.

    Constraints: invariance under adjacent row and column transpositions,
    and the two diagonal scaling laws instantiated at the first n primes
    (exact, by multiplicative independence) plus sampled diagonals.  All
    elimination is exact; the expected outcome is a one-dimensional space
    spanned by the permanent's coefficient vector.
    """
    nvars = n * n
    monomials = list(_monomials_up_to(nvars, n))
    index = {mono: i for i, mono in enumerate(monomials)}

    def row_degrees(mono):
        degs = [0] * n
        for v, e in enumerate(mono):
            degs[v // n] += e
        return degs

    def col_degrees(mono):
        degs = [0] * n
        for v, e in enumerate(mono):
            degs[v % n] += e
        return degs

    # unit rows: diagonal scaling at primes and sampled points
    rng = random.Random(derive_seed("nullspace", n, seed))
    diags = [_prime_tuple(n)] + [
        tuple(rng.randrange(2, 1 << 30) for _ in range(n))
        for _ in range(extra_diag_samples)
    ]
    killed = [False] * len(monomials)
    for mu in diags:
        prod = 1
        for v in mu:
            prod *= v
        for i, mono in enumerate(monomials):
            for degs in (row_degrees(mono), col_degrees(mono)):
                scale = 1
                for r, d in enumerate(degs):
                    scale *= mu[r] ** d
                if scale != prod:
                    killed[i] = True

    # pair rows: swap invariance, c_mono = c_swapped
    pair_rows: list[tuple[int, int]] = []
    for i in range(n - 1):
        rowp = list(range(nvars))
        colp = list(range(nvars))
        for c in range(n):
            rowp[(i) * n + c], rowp[(i + 1) * n + c] = (i + 1) * n + c, i * n + c
        for r in range(n):
            colp[r * n + i], colp[r * n + i + 1] = r * n + i + 1, r * n + i
        for perm in (rowp, colp):
            for mi, mono in enumerate(monomials):
                img = [0] * nvars
                for v, e in enumerate(mono):
                    img[perm[v]] = e
                mj = index[tuple(img)]
                if mi < mj:
                    pair_rows.append((mi, mj))

    # propagate forced zeros through the pair constraints
    changed = True
    while changed:
        changed = False
        for a, b in pair_rows:
            if killed[a] != killed[b]:
                killed[a] = killed[b] = True
                changed = True

    survivors = [i for i in range(len(monomials)) if not killed[i]]
    sub_index = {mono_i: j for j, mono_i in enumerate(survivors)}
    rows = []
    for a, b in pair_rows:
        if not killed[a] and not killed[b] and a != b:
            r = [Fraction(0)] * len(survivors)
            r[sub_index[a]] = Fraction(1)
            r[sub_index[b]] = Fraction(-1)
            rows.append(r)

    # exact rational elimination (Gauss-Jordan) on the surviving system
    ncols = len(survivors)
    pivots: dict[int, list[Fraction]] = {}
    for r in rows:
        r = r[:]
        for col, prow in pivots.items():
            if r[col]:
                f = r[col]
                r = [a - f * b for a, b in zip(r, prow)]
        lead = next((i for i, v in enumerate(r) if v), None)
        if lead is None:
            continue
        inv = r[lead]
        r = [v / inv for v in r]
        for col, prow in pivots.items():
            if prow[lead]:
                f = prow[lead]
                pivots[col] = [a - f * b for a, b in zip(prow, r)]
        pivots[lead] = r
    free_cols = [i for i in range(ncols) if i not in pivots]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for col, prow in pivots.items():
            vec[col] = -prow[fc]
        coeffs = {
            monomials[survivors[i]]: vec[i] for i in range(ncols) if vec[i]
        }
        basis.append(coeffs)
    return NullspaceResult(
        dim=len(free_cols),
        monomials=monomials,
        basis=basis,
        forced_zero=len(monomials) - len(survivors),
    )
