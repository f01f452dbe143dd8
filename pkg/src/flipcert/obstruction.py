"""Obstruction certificates: derivation, decoding, and the F-property harness.

A certificate is a design label plus a generator config.  The stand-in
generator commits to a random truth table T on r bits; seed bits occupy the
low positions of the universe and each design row reads off r of them, so
tape bit i is T evaluated on the seed restricted to row i.  Each distinct
tape drives one deterministic run of the symmetry-query generator; the
certificate's query list is the canonical union over the whole seed space
and its point set is the union of all query points.  Everything downstream
of (design, config) is recomputable, which is what makes staleness of a
serialized certificate detectable.

This generator is explicitly a combinatorial stand-in: it reuses seed bits
through the design the way a hardness-based construction would, but the
table is random, not derived from a hard function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from itertools import product

from .circuits import (
    Circuit,
    evaluate,
    expand_to_polynomial,
    poly_eval,
    poly_max_var_degree,
    poly_sub,
)
from .builders import efun_circuit, perm_circuit
from .config import config_hash, format_config, parse_bool, parse_config
from .designs import (
    Design,
    build_design_greedy,
    decode_design,
    encode_design,
    verify_design,
)
from .errors import (
    InvalidDesign,
    MalformedEncoding,
    NoFailingQuery,
    StaleCertificate,
    TargetComputable,
    UsageError,
)
from .matrices import MatrixAssignment
from .oracles import permanent
from .symtests import (
    Query,
    canonicalize_queries,
    gen_queries_efun,
    gen_queries_perm,
    run_queries,
    serialize_query,
)
from .util import Stopwatch, derive_seed


@dataclass(frozen=True)
class CertConfig:
    """Everything besides the design label that derivation depends on."""

    target: str  # "perm" | "efun"
    n: int = 0
    m: int = 0
    k: int = 0
    regime: str = "size"
    bound: int = 3
    seed_bits: int = 4
    rounds_per_tape: int = 1
    nonzero_count: int = 1
    sample_width: int = 62
    band: int = 0
    normalize: bool = True
    det_factor_mode: str = "det-corrected"
    truth_table: tuple[int, ...] = ()
    f0_budget_bits: int = 4096
    f1a_budget_seconds: float = 60.0
    f3_budget_seconds: float = 10.0
    f4_budget_seconds: float = 10.0

    def __post_init__(self):
        if self.target == "perm":
            if self.n < 1 or self.m or self.k:
                raise UsageError("perm target needs n >= 1 and no (m, k)")
        elif self.target == "efun":
            if self.m < 1 or self.k < 2 or self.n:
                raise UsageError("efun target needs m >= 1, k >= 2 and no n")
        else:
            raise UsageError(f"unknown target {self.target!r}")
        if self.regime not in ("size", "bitsize"):
            raise UsageError(f"unknown regime {self.regime!r}")
        if self.bound < 1:
            raise UsageError("class bound must be >= 1")
        if not 0 <= self.seed_bits <= 20:
            raise UsageError("seed_bits outside [0, 20]")
        if self.rounds_per_tape < 1 or self.nonzero_count < 0:
            raise UsageError("bad query counts")
        if self.sample_width < 1 or self.band < 0:
            raise UsageError("bad sample box")
        if self.det_factor_mode not in ("det-corrected", "literal"):
            raise UsageError(f"unknown det_factor_mode {self.det_factor_mode!r}")
        if any(b not in (0, 1) for b in self.truth_table):
            raise UsageError("truth table entries must be bits")

    def target_label(self) -> str:
        if self.target == "perm":
            return f"perm({self.n})"
        return f"efun({self.m},{self.k})"

    def num_vars(self) -> int:
        return self.n * self.n if self.target == "perm" else self.m * self.m * self.k

    def box(self) -> tuple[int, int]:
        width = 1 << self.sample_width
        lo = 1 + self.band * width
        return (lo, lo + width - 1)

    def pairs(self) -> dict[str, object]:
        return {
            "target": self.target,
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "regime": self.regime,
            "bound": self.bound,
            "seed_bits": self.seed_bits,
            "rounds_per_tape": self.rounds_per_tape,
            "nonzero_count": self.nonzero_count,
            "sample_width": self.sample_width,
            "band": self.band,
            "normalize": self.normalize,
            "det_factor_mode": self.det_factor_mode,
            "truth_table": "".join(str(b) for b in self.truth_table),
            "f0_budget_bits": self.f0_budget_bits,
            "f1a_budget_seconds": self.f1a_budget_seconds,
            "f3_budget_seconds": self.f3_budget_seconds,
            "f4_budget_seconds": self.f4_budget_seconds,
        }

    @staticmethod
    def from_pairs(pairs: dict[str, str]) -> "CertConfig":
        want = CertConfig(target="perm", n=1).pairs().keys()
        missing = set(want) - set(pairs)
        extra = set(pairs) - set(want)
        if missing or extra:
            raise MalformedEncoding(
                f"config keys off: missing {sorted(missing)}, extra {sorted(extra)}"
            )
        try:
            table = tuple(int(ch) for ch in pairs["truth_table"])
            return CertConfig(
                target=pairs["target"],
                n=int(pairs["n"]),
                m=int(pairs["m"]),
                k=int(pairs["k"]),
                regime=pairs["regime"],
                bound=int(pairs["bound"]),
                seed_bits=int(pairs["seed_bits"]),
                rounds_per_tape=int(pairs["rounds_per_tape"]),
                nonzero_count=int(pairs["nonzero_count"]),
                sample_width=int(pairs["sample_width"]),
                band=int(pairs["band"]),
                normalize=parse_bool(pairs["normalize"]),
                det_factor_mode=pairs["det_factor_mode"],
                truth_table=table,
                f0_budget_bits=int(pairs["f0_budget_bits"]),
                f1a_budget_seconds=float(pairs["f1a_budget_seconds"]),
                f3_budget_seconds=float(pairs["f3_budget_seconds"]),
                f4_budget_seconds=float(pairs["f4_budget_seconds"]),
            )
        except (ValueError, UsageError) as e:
            raise MalformedEncoding(f"bad config value: {e}") from None


def random_truth_table(r: int, seed: int = 0) -> tuple[int, ...]:
    if not 0 <= r <= 20:
        raise UsageError("table arity outside [0, 20]")
    rng = random.Random(derive_seed("truth-table", r, seed))
    return tuple(rng.getrandbits(1) for _ in range(1 << r))


@dataclass(frozen=True)
class ObstructionCertificate:
    design: Design
    config: CertConfig
    queries: tuple[Query, ...]
    points: tuple[MatrixAssignment, ...]
    derive_seconds: float = field(compare=False, default=0.0)

    def label(self) -> bytes:
        return encode_design(self.design)

    def label_bits(self) -> int:
        return 8 * len(self.label())


def _expand_tape(
    design: Design, table: tuple[int, ...], seed_val: int, seed_bits: int
) -> tuple[int, ...]:
    """Seed occupies universe positions 0..seed_bits-1, the rest are 0;

    tape bit i indexes the table by the seed restricted to row i."""
    p = design.params
    bits = [(seed_val >> pos) & 1 if pos < seed_bits else 0 for pos in range(p.l)]
    tape = []
    for row in design.rows:
        positions = [pos for pos in range(p.l) if row >> pos & 1]
        idx = 0
        for j, pos in enumerate(positions):
            idx |= bits[pos] << j
        tape.append(table[idx])
    return tuple(tape)


def derive_certificate(design: Design, config: CertConfig) -> ObstructionCertificate:
    """Expand the whole seed space through the design and take the canonical

    union of the per-tape query suites.  Deterministic in (design, config)."""
    violation = verify_design(design)
    if violation is not None:
        raise InvalidDesign(str(violation))
    p = design.params
    if config.seed_bits > p.l:
        raise UsageError(f"seed_bits {config.seed_bits} exceeds universe size {p.l}")
    if len(config.truth_table) != 1 << p.r:
        raise UsageError(
            f"truth table has {len(config.truth_table)} entries, needs {1 << p.r}"
        )
    with Stopwatch() as sw:
        collected: list[Query] = []
        per_tape_max = 0
        for seed_val in range(1 << config.seed_bits):
            tape = _expand_tape(design, config.truth_table, seed_val, config.seed_bits)
            tape_int = sum(b << i for i, b in enumerate(tape))
            gseed = derive_seed("tape", tape_int)
            if config.target == "perm":
                qs = gen_queries_perm(
                    config.n,
                    seed=gseed,
                    rounds=config.rounds_per_tape,
                    box=config.box(),
                    nonzero_count=config.nonzero_count,
                    normalize=config.normalize,
                )
            else:
                qs = gen_queries_efun(
                    config.m,
                    config.k,
                    seed=gseed,
                    rounds=config.rounds_per_tape,
                    box=config.box(),
                    nonzero_count=config.nonzero_count,
                    normalize=config.normalize,
                    det_factor_mode=config.det_factor_mode,
                )
            per_tape_max = max(per_tape_max, len(qs))
            collected.extend(qs)
        queries = canonicalize_queries(collected)
        points = tuple(
            sorted(
                {P for q in queries for P in q.points},
                key=lambda P: (P.shape, P.flatten()),
            )
        )
    nseeds = 1 << config.seed_bits
    assert len(queries) <= nseeds * per_tape_max
    assert len(points) <= nseeds * per_tape_max * 2
    return ObstructionCertificate(design, config, queries, points, sw.seconds)


# ---------------------------------------------------------------------------
# certificate files

_CERT_HEADER = "flipcert-obstruction v1"


def serialize_certificate(cert: ObstructionCertificate) -> str:
    """Versioned text form.  The query and point sections are materialized

    copies of what (design, config) derives; readers recompute and compare.
    Wall-clock fields are deliberately absent."""
    pairs = cert.config.pairs()
    out = [
        _CERT_HEADER,
        f"config-hash {config_hash(pairs)}",
        f"design {encode_design(cert.design).hex()}",
        "config {",
        format_config(pairs).rstrip("\n"),
        "}",
        f"queries {len(cert.queries)}",
    ]
    out.extend(serialize_query(q) for q in cert.queries)
    out.append(f"points {len(cert.points)}")
    for P in cert.points:
        tag = (
            f"s{P.shape[1]}"
            if P.shape[0] == "square"
            else f"b{P.shape[1]}x{P.shape[2]}"
        )
        out.append(tag + ":" + ",".join(str(v) for v in P.flatten()))
    out.append("end")
    return "".join(line + "\n" for line in out)


def parse_certificate(text: str) -> ObstructionCertificate:
    """Rebuild a certificate from its file form.

    The derived sections are never trusted: the certificate is re-derived
    from (design, config) and any materialized section that disagrees raises
    StaleCertificate.  Structural problems raise MalformedEncoding.
    """
    lines = text.splitlines()
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(lines):
            raise MalformedEncoding("truncated certificate")
        line = lines[pos]
        pos += 1
        return line

    if take() != _CERT_HEADER:
        raise MalformedEncoding("bad header or unsupported version")
    hash_line = take()
    if not hash_line.startswith("config-hash "):
        raise MalformedEncoding("missing config-hash")
    stated_hash = hash_line.split(" ", 1)[1]
    design_line = take()
    if not design_line.startswith("design "):
        raise MalformedEncoding("missing design block")
    try:
        design = decode_design(bytes.fromhex(design_line.split(" ", 1)[1]))
    except ValueError:
        raise MalformedEncoding("design block is not hex") from None
    if take() != "config {":
        raise MalformedEncoding("missing config block")
    cfg_lines = []
    while True:
        line = take()
        if line == "}":
            break
        cfg_lines.append(line)
    config = CertConfig.from_pairs(parse_config("\n".join(cfg_lines)))
    if config_hash(config.pairs()) != stated_hash:
        raise MalformedEncoding("config hash mismatch")

    cert = derive_certificate(design, config)

    # Optional materialized sections: recompute-and-compare, never parse-and-trust.
    if pos < len(lines) and lines[pos].startswith("queries "):
        fresh = serialize_certificate(cert).splitlines()
        # config lines always contain '=', so the bare "}" is the block closer
        if lines[pos:] != fresh[fresh.index("}") + 1 :]:
            raise StaleCertificate(
                "materialized sections disagree with fresh derivation"
            )
    return cert


# ---------------------------------------------------------------------------
# decoding

@dataclass(frozen=True)
class DecodeResult:
    query_index: int
    query: Query
    points: tuple[MatrixAssignment, ...]
    # perm targets only: per-point exact check c(X) != perm(X)
    direct_disagreement: tuple[bool, ...] | None


def _class_membership(config: CertConfig, c: Circuit) -> None:
    measure = c.size if config.regime == "size" else c.bitsize
    if measure > config.bound:
        raise UsageError(
            f"circuit {config.regime} {measure} exceeds class bound {config.bound}"
        )
    if c.num_inputs != config.num_vars():
        raise UsageError(
            f"circuit reads {c.num_inputs} inputs, target has {config.num_vars()}"
        )


def decode_counterexample(cert: ObstructionCertificate, c: Circuit) -> DecodeResult:
    """First failing query in canonical order; its point set has size <= 2.

    Raises NoFailingQuery when every query passes, which at desk scale means
    the certificate does not obstruct this circuit.
    """
    _class_membership(cert.config, c)
    for idx, q in enumerate(cert.queries):
        report = run_queries(c, (q,))
        if report.accept:
            continue
        direct = None
        if cert.config.target == "perm":
            direct = tuple(
                evaluate(c, P.flatten()) != permanent([list(row) for row in P.entries])
                for P in q.points
            )
        return DecodeResult(idx, q, q.points, direct)
    raise NoFailingQuery(f"certificate does not obstruct this circuit ({c.size} nodes)")


# ---------------------------------------------------------------------------
# the F harness

@dataclass(frozen=True)
class PropertyReport:
    name: str
    passed: bool
    seconds: float
    detail: str


@dataclass(frozen=True)
class FReport:
    properties: tuple[PropertyReport, ...]
    all_pass: bool  # F0, F1a, F1b, F3, F4 (F2 is an empirical count, not a gate)
    class_label: str
    class_size: int
    point_count: int
    trivial_rows: int
    label_bits: int
    aborted: bool = False

    def text(self) -> str:
        lines = [
            f"target class: {self.class_label}",
        ]
        for p in self.properties:
            state = "pass" if p.passed else "FAIL"
            lines.append(f"{p.name:4s} {state}  {p.seconds:8.3f}s  {p.detail}")
        if self.aborted:
            lines.append("aborted: downstream properties not evaluated")
        lines.append(
            f"compression contrast: |S| = {self.point_count} points vs "
            f"{self.trivial_rows} trivial table rows "
            f"(label {self.label_bits} bits, class size {self.class_size})"
        )
        lines.append("overall: " + ("pass" if self.all_pass else "FAIL"))
        return "\n".join(lines)


def _target_polynomial(config: CertConfig, max_terms: int) -> dict:
    if config.target == "perm":
        return expand_to_polynomial(perm_circuit(config.n), max_terms)
    return expand_to_polynomial(efun_circuit(config.m, config.k), max_terms)


def harness_F(
    cert: ObstructionCertificate,
    cls,
    f2_samples: int = 32,
    f2_min_disjoint: int = 2,
    seed: int = 0,
    enum_budget: int | None = None,
    max_terms: int = 200_000,
) -> FReport:
    """Check F0 through F4 against an enumerable circuit class.

    F3 runs first: a label that is not a valid design aborts the rest.  The
    hardness premise behind F1(b) is discharged by enumeration: a class
    member whose expansion equals the target raises TargetComputable.  F2 is
    reported as an empirical disjointness count, never an asymptotic claim.
    """
    cfg = cert.config

    with Stopwatch() as sw:
        violation = verify_design(cert.design)
    f3 = PropertyReport(
        "F3",
        violation is None and sw.seconds <= cfg.f3_budget_seconds,
        sw.seconds,
        "design valid" if violation is None else f"invalid design: {violation}",
    )
    if violation is not None:
        return FReport(
            properties=(f3,),
            all_pass=False,
            class_label=cls.label(),
            class_size=0,
            point_count=len(cert.points),
            trivial_rows=0,
            label_bits=cert.label_bits(),
            aborted=True,
        )

    bits = cert.label_bits()
    f0 = PropertyReport(
        "F0",
        bits <= cfg.f0_budget_bits,
        0.0,
        f"label {bits} bits vs budget {cfg.f0_budget_bits}",
    )

    with Stopwatch() as sw:
        again = derive_certificate(cert.design, cfg)
        identical = serialize_certificate(again) == serialize_certificate(cert)
    f1a = PropertyReport(
        "F1a",
        identical and sw.seconds <= cfg.f1a_budget_seconds,
        sw.seconds,
        f"re-derivation {'byte-identical' if identical else 'DIVERGED'}, "
        f"{len(cert.queries)} queries, {len(cert.points)} points",
    )

    with Stopwatch() as sw:
        members = list(cls.members(enum_budget))
        target_poly = _target_polynomial(cfg, max_terms)
        for c in members:
            if expand_to_polynomial(c, max_terms) == target_poly:
                raise TargetComputable(
                    "a class member computes the target exactly", circuit=c
                )
        failures = 0
        max_set = 0
        for c in members:
            try:
                dec = decode_counterexample(cert, c)
            except NoFailingQuery:
                failures += 1
                continue
            max_set = max(max_set, len(dec.points))
    f1b = PropertyReport(
        "F1b",
        failures == 0 and max_set <= 2,
        sw.seconds,
        f"decoded {len(members) - failures}/{len(members)} members, "
        f"max counterexample set {max_set}",
    )

    with Stopwatch() as sw:
        point_sets = []
        for f in range(f2_samples):
            d_f = build_design_greedy(
                cert.design.params, seed=derive_seed("f2-design", seed, f)
            )
            cfg_f = replace(
                cfg,
                band=f,
                normalize=False,
                truth_table=random_truth_table(
                    cert.design.params.r, derive_seed("f2-table", seed, f)
                ),
            )
            point_sets.append(frozenset(derive_certificate(d_f, cfg_f).points))
        disjoint_pairs = sum(
            1
            for i in range(len(point_sets))
            for j in range(i + 1, len(point_sets))
            if not point_sets[i] & point_sets[j]
        )
        family: list[frozenset] = []
        for s in point_sets:
            if all(not (s & t) for t in family):
                family.append(s)
    f2 = PropertyReport(
        "F2",
        len(family) >= f2_min_disjoint,
        sw.seconds,
        f"{len(family)} mutually point-disjoint certificates among "
        f"{f2_samples} sampled labels ({disjoint_pairs} disjoint pairs); "
        "empirical count only",
    )

    with Stopwatch() as sw:
        built = build_design_greedy(cert.design.params, seed=derive_seed("f4", seed))
        ok4 = verify_design(built) is None
    f4 = PropertyReport(
        "F4",
        ok4 and sw.seconds <= cfg.f4_budget_seconds,
        sw.seconds,
        f"greedy rebuild {'valid' if ok4 else 'INVALID'}",
    )

    gates = (f0, f1a, f1b, f3, f4)
    return FReport(
        properties=(f0, f1a, f1b, f2, f3, f4),
        all_pass=all(p.passed for p in gates),
        class_label=cls.label(),
        class_size=len(members),
        point_count=len(cert.points),
        trivial_rows=len(members),
        label_bits=bits,
        aborted=False,
    )


# ---------------------------------------------------------------------------
# the trivial obstruction table

@dataclass(frozen=True)
class TableRow:
    index: int
    circuit: Circuit
    point: tuple[int, ...]
    circuit_value: int
    target_value: int


@dataclass(frozen=True)
class TrivialTable:
    target_label: str
    rows: tuple[TableRow, ...]

    def row_count(self) -> int:
        return len(self.rows)


def trivial_obstruction_table(
    cls,
    config: CertConfig,
    enum_budget: int | None = None,
    max_terms: int = 200_000,
) -> TrivialTable:
    """One counterexample row per class circuit, found by grid scan.

    The difference polynomial has some per-variable degree d, so the grid
    {0..d}^vars must contain a nonzero point of it; the first one in lex
    order becomes the row.  A member with zero difference means the class
    computes the target: TargetComputable, no table exists.
    """
    target_poly = _target_polynomial(config, max_terms)
    nvars = config.num_vars()
    rows = []
    for idx, c in enumerate(cls.members(enum_budget)):
        if c.num_inputs != nvars:
            raise UsageError(
                f"class member reads {c.num_inputs} inputs, target has {nvars}"
            )
        diff = poly_sub(expand_to_polynomial(c, max_terms), target_poly)
        if not diff:
            raise TargetComputable(
                "a class member computes the target exactly", circuit=c
            )
        d = poly_max_var_degree(diff)
        found = None
        for pt in product(range(d + 1), repeat=nvars):
            if poly_eval(diff, pt) != 0:
                found = pt
                break
        assert found is not None  # nonzero poly with per-var degree <= d
        rows.append(
            TableRow(
                index=idx,
                circuit=c,
                point=found,
                circuit_value=evaluate(c, found),
                target_value=poly_eval(target_poly, found),
            )
        )
    return TrivialTable(config.target_label(), tuple(rows))
