"""Certificates: derivation, file form, decoding, and the property harness.

The query/point counts and the det(2) decode result below were measured
once on the fixed toy instance (4 rows over a 6-element universe, 4 seed
bits, committed truth table seed 0) and are frozen; derivation is
deterministic so they must reproduce exactly.
"""
from __future__ import annotations

import pytest

from flipcert.builders import det_circuit, perm_circuit
from flipcert.config import format_config, parse_config
from flipcert.designs import Design, DesignParams, build_design_greedy
from flipcert.errors import (
    InvalidDesign,
    MalformedEncoding,
    NoFailingQuery,
    StaleCertificate,
    TargetComputable,
    UsageError,
)
from flipcert.obstruction import (
    CertConfig,
    ObstructionCertificate,
    decode_counterexample,
    derive_certificate,
    harness_F,
    parse_certificate,
    random_truth_table,
    serialize_certificate,
    trivial_obstruction_table,
)
from flipcert.pit import EnumeratedClass, ExplicitClass

TOY_PARAMS = DesignParams(4, 6, 3, 1)
TOY_TABLE = random_truth_table(3, 0)


def toy_design() -> Design:
    return build_design_greedy(TOY_PARAMS)


def toy_config(**overrides) -> CertConfig:
    base = dict(target="perm", n=2, bound=3, seed_bits=4, truth_table=TOY_TABLE)
    base.update(overrides)
    return CertConfig(**base)


# ---------------------------------------------------------------------------
# config dataclass

def test_config_target_validation():
    with pytest.raises(UsageError):
        CertConfig(target="perm", n=2, m=1)
    with pytest.raises(UsageError):
        CertConfig(target="efun", m=1, k=1)
    with pytest.raises(UsageError):
        CertConfig(target="det", n=2)


def test_config_range_validation():
    with pytest.raises(UsageError):
        toy_config(bound=0)
    with pytest.raises(UsageError):
        toy_config(seed_bits=21)
    with pytest.raises(UsageError):
        toy_config(rounds_per_tape=0)
    with pytest.raises(UsageError):
        toy_config(nonzero_count=-1)
    with pytest.raises(UsageError):
        toy_config(sample_width=0)
    with pytest.raises(UsageError):
        toy_config(det_factor_mode="magic")
    with pytest.raises(UsageError):
        toy_config(truth_table=(0, 2))


def test_config_box_is_banded():
    cfg = toy_config(sample_width=4, band=0)
    assert cfg.box() == (1, 16)
    assert toy_config(sample_width=4, band=3).box() == (49, 64)


def test_config_labels_and_vars():
    assert toy_config().target_label() == "perm(2)"
    assert toy_config().num_vars() == 4
    ef = CertConfig(target="efun", m=2, k=3, truth_table=TOY_TABLE)
    assert ef.target_label() == "efun(2,3)"
    assert ef.num_vars() == 12


def test_config_pairs_roundtrip():
    cfg = toy_config(normalize=False, band=2)
    back = CertConfig.from_pairs(parse_config(format_config(cfg.pairs())))
    assert back == cfg


def test_config_from_pairs_strict():
    good = {k: ("true" if v is True else "false" if v is False else str(v))
            for k, v in toy_config().pairs().items()}
    missing = dict(good)
    del missing["band"]
    with pytest.raises(MalformedEncoding):
        CertConfig.from_pairs(missing)
    extra = dict(good, surplus="1")
    with pytest.raises(MalformedEncoding):
        CertConfig.from_pairs(extra)
    bad = dict(good, bound="many")
    with pytest.raises(MalformedEncoding):
        CertConfig.from_pairs(bad)


def test_random_truth_table():
    assert random_truth_table(3, 0) == random_truth_table(3, 0)
    assert len(random_truth_table(5, 1)) == 32
    assert set(random_truth_table(4, 2)) <= {0, 1}
    with pytest.raises(UsageError):
        random_truth_table(21)


# ---------------------------------------------------------------------------
# derivation

def test_derive_frozen_counts():
    cert = derive_certificate(toy_design(), toy_config())
    assert len(cert.queries) == 41
    assert len(cert.points) == 49
    assert cert.label_bits() == 88


def test_derive_deterministic():
    texts = {
        serialize_certificate(derive_certificate(toy_design(), toy_config()))
        for _ in range(5)
    }
    assert len(texts) == 1


def test_derive_query_budget():
    # 16 seeds, at most 10 queries per tape for this config
    cert = derive_certificate(toy_design(), toy_config())
    assert len(cert.queries) <= 160
    assert max(len(q.points) for q in cert.queries) <= 2


def test_derive_efun_frozen_counts():
    cfg = CertConfig(target="efun", m=1, k=2, bound=8, seed_bits=4,
                     truth_table=TOY_TABLE)
    cert = derive_certificate(toy_design(), cfg)
    assert len(cert.queries) == 33
    assert len(cert.points) == 41


def test_derive_rejects_invalid_design():
    bad = Design(TOY_PARAMS, (7, 7, 7, 7))
    with pytest.raises(InvalidDesign):
        derive_certificate(bad, toy_config())


def test_derive_rejects_oversized_seed():
    with pytest.raises(UsageError):
        derive_certificate(toy_design(), toy_config(seed_bits=7))


def test_derive_rejects_wrong_table_length():
    with pytest.raises(UsageError):
        derive_certificate(toy_design(), toy_config(truth_table=(0, 1, 1, 0)))


# ---------------------------------------------------------------------------
# file form

def test_serialize_parse_roundtrip():
    cert = derive_certificate(toy_design(), toy_config())
    assert parse_certificate(serialize_certificate(cert)) == cert


def test_parse_accepts_sectionless_prefix():
    cert = derive_certificate(toy_design(), toy_config())
    lines = serialize_certificate(cert).splitlines()
    prefix = lines[: lines.index("}") + 1]
    back = parse_certificate("".join(line + "\n" for line in prefix))
    assert back == cert


def test_parse_rejects_bad_header():
    cert = derive_certificate(toy_design(), toy_config())
    text = serialize_certificate(cert).replace("v1", "v9", 1)
    with pytest.raises(MalformedEncoding):
        parse_certificate(text)


def test_parse_rejects_truncation():
    cert = derive_certificate(toy_design(), toy_config())
    lines = serialize_certificate(cert).splitlines()
    text = "".join(line + "\n" for line in lines[:4])  # cut inside config
    with pytest.raises(MalformedEncoding):
        parse_certificate(text)


def test_parse_rejects_config_edit():
    cert = derive_certificate(toy_design(), toy_config())
    text = serialize_certificate(cert).replace("band=0", "band=1", 1)
    with pytest.raises(MalformedEncoding, match="hash mismatch"):
        parse_certificate(text)


def test_parse_rejects_tampered_query_section():
    cert = derive_certificate(toy_design(), toy_config())
    lines = serialize_certificate(cert).splitlines()
    start = lines.index(f"queries {len(cert.queries)}") + 1
    lines[start], lines[start + 1] = lines[start + 1], lines[start]
    with pytest.raises(StaleCertificate):
        parse_certificate("".join(line + "\n" for line in lines))


def test_parse_rejects_swapped_design():
    # a valid but different label re-derives different sections
    cert = derive_certificate(toy_design(), toy_config())
    rev = Design(TOY_PARAMS, tuple(reversed(toy_design().rows)))
    old = serialize_certificate(cert)
    new = serialize_certificate(derive_certificate(rev, toy_config()))
    old_design = next(l for l in old.splitlines() if l.startswith("design "))
    new_design = next(l for l in new.splitlines() if l.startswith("design "))
    assert old_design != new_design
    with pytest.raises(StaleCertificate):
        parse_certificate(old.replace(old_design, new_design, 1))


# ---------------------------------------------------------------------------
# decoding

def test_decode_det2_frozen():
    cfg = toy_config(bound=8)
    cert = derive_certificate(toy_design(), cfg)
    res = decode_counterexample(cert, det_circuit(2))
    assert res.query_index == 25
    assert res.query.kind == "PPermLeft"
    assert len(res.points) == 2
    assert res.direct_disagreement == (True, True)


def test_decode_target_itself_has_no_counterexample():
    cert = derive_certificate(toy_design(), toy_config(bound=8))
    with pytest.raises(NoFailingQuery):
        decode_counterexample(cert, perm_circuit(2))


def test_decode_membership_size():
    cert = derive_certificate(toy_design(), toy_config())  # bound 3
    with pytest.raises(UsageError, match="exceeds class bound"):
        decode_counterexample(cert, det_circuit(2))


def test_decode_membership_arity():
    cfg = CertConfig(target="efun", m=1, k=2, bound=8, seed_bits=4,
                     truth_table=TOY_TABLE)
    cert = derive_certificate(toy_design(), cfg)
    with pytest.raises(UsageError, match="inputs"):
        decode_counterexample(cert, perm_circuit(2))


# ---------------------------------------------------------------------------
# harness

def test_harness_toy_class_passes():
    cert = derive_certificate(toy_design(), toy_config())
    cls = EnumeratedClass(4, 3, (-1, 0, 1))
    rep = harness_F(cert, cls, f2_samples=8)
    assert rep.all_pass and not rep.aborted
    assert rep.class_size == 259
    assert rep.trivial_rows == 259
    assert rep.point_count == 49
    names = [p.name for p in rep.properties]
    assert names == ["F0", "F1a", "F1b", "F2", "F3", "F4"]
    by_name = {p.name: p for p in rep.properties}
    assert "decoded 259/259 members, max counterexample set 2" in by_name["F1b"].detail
    assert "empirical count only" in by_name["F2"].detail
    text = rep.text()
    assert "compression contrast: |S| = 49 points vs 259 trivial table rows" in text
    assert "overall: pass" in text


def test_harness_aborts_on_corrupt_label():
    bad = Design(TOY_PARAMS, (7, 7, 7, 7))
    cert = ObstructionCertificate(bad, toy_config(), (), ())
    rep = harness_F(cert, EnumeratedClass(4, 3, (-1, 0, 1)))
    assert rep.aborted and not rep.all_pass
    assert [p.name for p in rep.properties] == ["F3"]
    assert not rep.properties[0].passed
    assert "aborted" in rep.text()


def test_harness_discharges_hardness_premise():
    cert = derive_certificate(toy_design(), toy_config(bound=8))
    cls = ExplicitClass((perm_circuit(2),))
    with pytest.raises(TargetComputable) as ei:
        harness_F(cert, cls)
    assert ei.value.circuit == perm_circuit(2)


# ---------------------------------------------------------------------------
# trivial table

def test_trivial_table_one_row_per_member():
    cls = EnumeratedClass(4, 2, (1,))
    table = trivial_obstruction_table(cls, toy_config())
    assert table.row_count() == 20
    assert table.target_label == "perm(2)"
    assert [r.index for r in table.rows] == list(range(20))
    # every row is a genuine disagreement
    assert all(r.circuit_value != r.target_value for r in table.rows)


def test_trivial_table_first_row_frozen():
    table = trivial_obstruction_table(EnumeratedClass(4, 2, (1,)), toy_config())
    first = table.rows[0]
    assert first.point == (0, 1, 1, 0)
    assert (first.circuit_value, first.target_value) == (0, 1)


def test_trivial_table_target_member_refused():
    with pytest.raises(TargetComputable):
        trivial_obstruction_table(ExplicitClass((perm_circuit(2),)),
                                  toy_config(bound=8))


def test_trivial_table_arity_mismatch():
    with pytest.raises(UsageError):
        trivial_obstruction_table(EnumeratedClass(2, 2, (1,)), toy_config())
