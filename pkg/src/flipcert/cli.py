"""Command-line front end.

Exit codes: 0 accept/valid, 1 reject/invalid (witness on stdout),
2 usage or malformed input, 3 budget or infeasibility.  Reports go to
stdout; machine-readable artifacts are written only via --out paths.
All randomness is seeded, so identical argv yields identical output.
"""

from __future__ import annotations

import argparse
import sys

from .circuits import evaluate, parse_circuit
from .designs import (
    DesignParams,
    build_design_greedy,
    count_designs_exhaustive,
    decode_design,
    encode_design,
    verify_design,
)
from .errors import (
    BudgetError,
    ConstructionFailed,
    FlipcertError,
    NoFailingQuery,
    PoolExhausted,
    TargetComputable,
    UsageError,
)
from .fields import (
    ExtField,
    dual_basis,
    extract_coeffs,
    find_irreducible,
    format_field_spec,
    frobenius_trace,
    trace_form_gram,
)
from .matrices import matrix_from_text
from .obstruction import (
    CertConfig,
    decode_counterexample,
    derive_certificate,
    harness_F,
    parse_certificate,
    random_truth_table,
    serialize_certificate,
    trivial_obstruction_table,
)
from .oracles import efun, permanent
from .pit import (
    EnumeratedClass,
    build_hitting_set_greedy,
    hitting_set_axioms_report,
    parse_hitting_set,
    pit_random,
    serialize_hitting_set,
    verify_hitting_set,
)
from .symtests import VerifyConfig, verify_claims_efun, verify_claims_perm


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None


def _write(path: str, data) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    try:
        with open(path, mode) as fh:
            fh.write(data)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _load_circuit(path: str):
    return parse_circuit(_read(path))


def _read_label(path: str) -> bytes:
    try:
        return bytes.fromhex(_read(path).strip())
    except ValueError:
        raise UsageError(f"{path} is not a hex design label") from None


def _verify_config(args) -> VerifyConfig:
    return VerifyConfig(
        seed=args.seed,
        rounds=args.rounds,
        nonzero_count=args.nonzero,
        sample_width=args.width,
        normalize=not args.no_normalize,
        mode=args.mode,
        ring=args.ring,
        prime_bits=args.prime_bits,
        prime_count=args.prime_count,
        det_factor_mode=getattr(args, "det_mode", "det-corrected"),
    )


def _print_verify(res) -> int:
    print(res.transcript())
    if res.mode == "sampled":
        print(f"false-accept bound {res.error_bound:.3g}")
    for note in res.notes:
        print(f"note: {note}")
    return 0 if res.accept else 1


def _enumerated_class(args) -> EnumeratedClass:
    return EnumeratedClass(
        num_inputs=args.ninputs,
        bound=args.bound,
        alphabet=_ints(args.alphabet),
        regime=args.regime,
    )


def _cert_config_from_file(path: str | None, args, design_r: int) -> CertConfig:
    """CLI-side config assembly: file pairs override dataclass defaults,

    flags override the file, and a missing truth table is committed from
    --table-seed.  Artifact files embedded in certificates stay strict."""
    from .config import parse_bool, parse_config

    pairs = parse_config(_read(path)) if path else {}
    base = {
        "target": args.target,
        "n": getattr(args, "n", 0) or 0,
        "m": getattr(args, "m", 0) or 0,
        "k": getattr(args, "k", 0) or 0,
        "regime": args.regime,
        "bound": args.bound,
        "seed_bits": args.seed_bits,
        "rounds_per_tape": 1,
        "nonzero_count": 1,
        "sample_width": args.width,
        "band": 0,
        "normalize": True,
        "det_factor_mode": "det-corrected",
        "truth_table": "",
        "f0_budget_bits": 4096,
        "f1a_budget_seconds": 60.0,
        "f3_budget_seconds": 10.0,
        "f4_budget_seconds": 10.0,
    }
    for key, value in pairs.items():
        if key not in base:
            raise UsageError(f"unknown config key {key!r}")
        base[key] = value
    ints = (
        "n", "m", "k", "bound", "seed_bits", "rounds_per_tape",
        "nonzero_count", "sample_width", "band", "f0_budget_bits",
    )
    for key in ints:
        base[key] = int(base[key])
    for key in ("f1a_budget_seconds", "f3_budget_seconds", "f4_budget_seconds"):
        base[key] = float(base[key])
    if isinstance(base["normalize"], str):
        base["normalize"] = parse_bool(base["normalize"])
    table_text = str(base.pop("truth_table"))
    if table_text:
        table = tuple(int(ch) for ch in table_text)
    else:
        table = random_truth_table(design_r, args.table_seed)
    return CertConfig(truth_table=table, **base)


# ---------------------------------------------------------------------------
# subcommands

def cmd_eval(args) -> int:
    c = _load_circuit(args.circuit)
    point = _ints(args.point)
    print(evaluate(c, point))
    return 0


def cmd_pit(args) -> int:
    c = _load_circuit(args.circuit)
    res = pit_random(
        c,
        trials=args.trials,
        seed=args.seed,
        box=(1, 1 << args.width),
        degree_hint=args.degree_hint,
    )
    if res.verdict == "nonzero":
        print(f"nonzero at {res.witness_point} (value {res.witness_value})")
        return 1
    print(f"zero (false-zero bound {res.error_bound:.3g}, {res.trials_run} trials)")
    return 0


def cmd_verify_perm(args) -> int:
    c = _load_circuit(args.circuit)
    return _print_verify(verify_claims_perm(c, args.n, _verify_config(args)))


def cmd_verify_efun(args) -> int:
    c = _load_circuit(args.circuit)
    return _print_verify(verify_claims_efun(c, args.m, args.k, _verify_config(args)))


def cmd_efun_oracle(args) -> int:
    X = matrix_from_text(_read(args.matrix))
    print(efun(X, budget=args.budget))
    return 0


def cmd_gen_design(args) -> int:
    params = DesignParams(m_prime=args.rows, l=args.l, r=args.r, k_cap=args.kcap)
    d = build_design_greedy(params, seed=args.seed)
    label = encode_design(d)
    print(f"design m'={args.rows} l={args.l} r={args.r} k_cap={args.kcap}")
    print(f"label {label.hex()}")
    for i, row in enumerate(d.row_sets()):
        print(f"T_{i + 1} = {{{','.join(str(e) for e in sorted(row))}}}")
    if args.out:
        _write(args.out, label.hex() + "\n")
    return 0


def cmd_verify_design(args) -> int:
    d = decode_design(_read_label(args.label))
    violation = verify_design(d)
    if violation is None:
        print("valid")
        return 0
    print(f"invalid: {violation.kind} {violation.detail}")
    return 1


def cmd_count_designs(args) -> int:
    params = DesignParams(m_prime=args.rows, l=args.l, r=args.r, k_cap=args.kcap)
    print(count_designs_exhaustive(params, budget=args.budget))
    return 0


def cmd_build_hitting_set(args) -> int:
    cls = _enumerated_class(args)
    hs = build_hitting_set_greedy(
        cls, seed=args.seed, pool_size=args.pool, box=(1, 1 << args.width)
    )
    report = hitting_set_axioms_report(hs)
    # wall-clock lines go to stderr so stdout stays byte-stable per argv
    for key in sorted(report):
        if key == "verify_seconds":
            print(f"{key}={report[key]}", file=sys.stderr)
        else:
            print(f"{key}={report[key]}")
    if args.out:
        _write(args.out, serialize_hitting_set(hs))
    return 0


def cmd_verify_hitting_set(args) -> int:
    hs = parse_hitting_set(_read(args.file))
    rep = verify_hitting_set(hs)
    if rep.valid:
        print(f"valid ({rep.members_checked} members, {rep.evaluations} evaluations)")
        return 0
    print(f"invalid: unhit nonzero member\n{rep.violator}")
    return 1


def cmd_derive_cert(args) -> int:
    d = decode_design(_read_label(args.design))
    config = _cert_config_from_file(args.config, args, d.params.r)
    cert = derive_certificate(d, config)
    print(f"target {config.target_label()}")
    print(f"label bits {cert.label_bits()}")
    print(f"queries {len(cert.queries)}")
    print(f"points {len(cert.points)}")
    print(f"derive seconds {cert.derive_seconds:.3f}", file=sys.stderr)
    if args.out:
        _write(args.out, serialize_certificate(cert))
    return 0


def cmd_decode(args) -> int:
    cert = parse_certificate(_read(args.cert))
    c = _load_circuit(args.circuit)
    res = decode_counterexample(cert, c)
    print(f"failing query {res.query_index}: kind={res.query.kind}")
    for i, P in enumerate(res.points):
        direct = ""
        if res.direct_disagreement is not None:
            direct = f"  direct-disagreement={res.direct_disagreement[i]}"
        print(f"point {i}: {','.join(str(v) for v in P.flatten())}{direct}")
    return 0


def cmd_harness_f(args) -> int:
    cert = parse_certificate(_read(args.cert))
    cls = _enumerated_class(args)
    rep = harness_F(cert, cls, f2_samples=args.f2_samples, seed=args.seed)
    print(rep.text())
    return 0 if rep.all_pass else 1


def cmd_trivial_table(args) -> int:
    cls = _enumerated_class(args)
    if args.target == "perm":
        config = CertConfig(
            target="perm", n=args.n, bound=args.bound, regime=args.regime,
            truth_table=(0, 0), seed_bits=1,
        )
    else:
        config = CertConfig(
            target="efun", m=args.m, k=args.k, bound=args.bound,
            regime=args.regime, truth_table=(0, 0), seed_bits=1,
        )
    table = trivial_obstruction_table(cls, config)
    print(f"target {table.target_label}")
    print(f"rows {table.row_count()}")
    lines = []
    for row in table.rows:
        lines.append(
            f"row {row.index} point {','.join(str(v) for v in row.point)} "
            f"circuit {row.circuit_value} target {row.target_value}"
        )
    if args.out:
        _write(args.out, "".join(line + "\n" for line in lines))
    else:
        for line in lines[: args.head]:
            print(line)
    return 0


def cmd_trace_tools(args) -> int:
    modulus = _ints(args.modulus) if args.modulus else find_irreducible(args.q, args.l)
    F = ExtField(args.q, args.l, modulus)
    print(f"field {format_field_spec(F)}")
    gram = trace_form_gram(F)
    print("gram " + "; ".join(",".join(str(v) for v in row) for row in gram))
    dual = dual_basis(F)
    print("dual " + "; ".join(",".join(str(c) for c in b.coeffs) for b in dual))
    x = F.gen()
    print(f"trace(gen) {frobenius_trace(x).value}")
    print(f"coeffs(gen) {','.join(str(c) for c in extract_coeffs(x))}")
    return 0


def cmd_perm_oracle(args) -> int:
    X = matrix_from_text(_read(args.matrix))
    if X.shape[0] != "square":
        raise UsageError("permanent needs a square matrix")
    print(permanent([list(row) for row in X.entries]))
    return 0


# ---------------------------------------------------------------------------
# parser plumbing

def _add_verify_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--nonzero", type=int, default=3)
    p.add_argument("--width", type=int, default=62)
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--mode", choices=("sampled", "exhaustive"), default="sampled")
    p.add_argument("--ring", choices=("exact", "modular"), default="exact")
    p.add_argument("--prime-bits", type=int, default=31)
    p.add_argument("--prime-count", type=int, default=3)


def _add_class_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ninputs", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--alphabet", required=True)
    p.add_argument("--regime", choices=("size", "bitsize"), default="size")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flipcert",
        description="symmetry tests, identity testing, designs, and "
        "obstruction certificates for arithmetic circuits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a circuit at an integer point")
    p.add_argument("--circuit", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pit", help="randomized identity test (exit 1 = nonzero)")
    p.add_argument("--circuit", required=True)
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=62)
    p.add_argument("--degree-hint", type=int, default=None)
    p.set_defaults(func=cmd_pit)

    p = sub.add_parser("verify-perm", help="permanent symmetry suite")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--circuit", required=True)
    _add_verify_flags(p)
    p.set_defaults(func=cmd_verify_perm)

    p = sub.add_parser("verify-efun", help="product-of-determinants symmetry suite")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--circuit", required=True)
    p.add_argument("--det-mode", choices=("det-corrected", "literal"),
                   default="det-corrected", dest="det_mode")
    _add_verify_flags(p)
    p.set_defaults(func=cmd_verify_efun)

    p = sub.add_parser("efun-oracle", help="evaluate E(X) on a block matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--budget", type=int, default=4096)
    p.set_defaults(func=cmd_efun_oracle)

    p = sub.add_parser("perm-oracle", help="evaluate the permanent on a square matrix file")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_perm_oracle)

    p = sub.add_parser("gen-design", help="greedy design construction (exit 3 = infeasible)")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--kcap", type=int, required=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_design)

    p = sub.add_parser("verify-design", help="check a hex design label file")
    p.add_argument("--label", required=True)
    p.set_defaults(func=cmd_verify_design)

    p = sub.add_parser("count-designs", help="exact backtracking count")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--kcap", type=int, required=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--budget", type=int, default=5_000_000)
    p.set_defaults(func=cmd_count_designs)

    p = sub.add_parser("build-hitting-set", help="greedy hitting set for a circuit class")
    _add_class_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pool", type=int, default=64)
    p.add_argument("--width", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_hitting_set)

    p = sub.add_parser("verify-hitting-set", help="exhaustive hitting-set check")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_verify_hitting_set)

    p = sub.add_parser("derive-cert", help="derive an obstruction certificate")
    p.add_argument("--design", required=True, help="hex design label file")
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--target", choices=("perm", "efun"), default="perm")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--regime", choices=("size", "bitsize"), default="size")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--seed-bits", type=int, default=4, dest="seed_bits")
    p.add_argument("--width", type=int, default=62)
    p.add_argument("--table-seed", type=int, default=0, dest="table_seed")
    p.add_argument("--out")
    p.set_defaults(func=cmd_derive_cert)

    p = sub.add_parser("decode", help="first failing query for a class circuit")
    p.add_argument("--cert", required=True)
    p.add_argument("--circuit", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("harness-f", help="run the F0-F4 property harness")
    p.add_argument("--cert", required=True)
    _add_class_flags(p)
    p.add_argument("--f2-samples", type=int, default=32, dest="f2_samples")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_harness_f)

    p = sub.add_parser("trivial-table", help="one counterexample row per class circuit")
    _add_class_flags(p)
    p.add_argument("--target", choices=("perm", "efun"), default="perm")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--head", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trivial_table)

    p = sub.add_parser("trace-tools", help="extension field trace and dual basis demo")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--modulus", default=None, help="little-endian coefficients c0,c1,...")
    p.set_defaults(func=cmd_trace_tools)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NoFailingQuery, TargetComputable) as e:
        print(f"negative: {e}")
        return 1
    except (BudgetError, ConstructionFailed, PoolExhausted) as e:
        print(f"budget: {e}", file=sys.stderr)
        return 3
    except FlipcertError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
