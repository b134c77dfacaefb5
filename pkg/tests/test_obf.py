"""Transparent obfuscation backend and program-descriptor semantics."""

import json

import pytest

from weak_tt import short_ctext as SC
from weak_tt import short_key as SK
from weak_tt.errors import CapacityError, ConfigurationError, ParameterError
from weak_tt.obf import (
    ObfuscatedProgram,
    ProgramDescriptor,
    default_probe_seeds,
    evaluate_program,
    obfuscate,
    programs_equivalent,
)
from weak_tt.primitives import prg_expand


@pytest.fixture(scope="module")
def sc_setup():
    return SC.setup(SC.SchemeParamsSC(n=4, m=32), b"obf-sc")


@pytest.fixture(scope="module")
def sk_setup():
    return SK.setup(SK.SchemeParamsSK(n=4, m=16), b"obf-sk")


def test_unknown_backend_is_configuration_error(sc_setup):
    with pytest.raises(ConfigurationError):
        obfuscate(sc_setup.program.payload, backend="mystery")


def test_transparent_backend_preserves_functionality(sc_setup):
    desc = sc_setup.program.payload
    prog = obfuscate(desc)
    for c in range(8):
        for i in range(1, 5):
            for s in (sc_setup.users[i - 1].s, bytes(4)):
                assert evaluate_program(prog, (c, i, s)) == evaluate_program(desc, (c, i, s))


def test_obfuscation_serialization_deterministic(sc_setup):
    a = obfuscate(sc_setup.program.payload, seed=b"r1").serialize()
    b = obfuscate(sc_setup.program.payload, seed=b"r1").serialize()
    assert a == b
    assert json.loads(a)["backend"] == "transparent"


def test_descriptor_roundtrip(sc_setup, sk_setup):
    for desc in (sc_setup.program.payload, SK.encrypt(sk_setup.master, 2, b"ct").program.payload):
        again = ProgramDescriptor.from_json(json.loads(desc.serialize()))
        assert again.serialize() == desc.serialize()
    prog = sc_setup.program
    assert ObfuscatedProgram.from_json(json.loads(prog.serialize())).serialize() == prog.serialize()


def test_sc_program_honest_path(sc_setup):
    desc = sc_setup.program.payload
    j = desc.prf_enc.eval(5)
    for u in sc_setup.users:
        assert desc.evaluate((5, u.i, u.s)) == int(u.i <= j)


def test_sc_program_wrong_seed_is_bottom(sc_setup):
    desc = sc_setup.program.payload
    u = sc_setup.users[1]
    wrong = bytes(x ^ 0xFF for x in u.s)
    assert desc.evaluate((3, u.i, wrong)) is None


def test_sk_program_dishonest_pair_equals_enc_prf(sk_setup):
    ct = SK.encrypt(sk_setup.master, 2, b"d")
    desc = ct.program.payload
    u = sk_setup.users[0]
    s = (u.s + 1) % 16
    assert desc.evaluate((u.i, s)) == desc.prf_enc.eval((u.i - 1) * 16 + s)


def test_descriptor_field_validation(sc_setup):
    desc = sc_setup.program.payload
    with pytest.raises(ParameterError):
        ProgramDescriptor(variant="SC-P", prf_sk=desc.prf_sk, prf_enc=desc.prf_enc, i_star=1)
    with pytest.raises(ParameterError):
        ProgramDescriptor(variant="SC-P2", prf_sk=desc.prf_sk, prf_enc=desc.prf_enc, i_star=1)
    with pytest.raises(ParameterError):
        ProgramDescriptor(
            variant="SC-P2",
            prf_sk=desc.prf_sk.puncture({2}),  # punctured at the wrong point
            prf_enc=desc.prf_enc,
            i_star=1,
        )


def test_input_validation(sc_setup, sk_setup):
    desc = sc_setup.program.payload
    with pytest.raises(ParameterError):
        desc.evaluate((32, 1, bytes(4)))
    with pytest.raises(ParameterError):
        desc.evaluate((0, 5, bytes(4)))
    with pytest.raises(ParameterError):
        desc.evaluate((0, 1, bytes(3)))
    sk_desc = SK.encrypt(sk_setup.master, 1, b"x").program.payload
    with pytest.raises(ParameterError):
        sk_desc.evaluate((0, 0))
    with pytest.raises(ParameterError):
        sk_desc.evaluate((1, 16))


def test_equivalence_requires_same_signature(sc_setup, sk_setup):
    with pytest.raises(ParameterError):
        programs_equivalent(
            sc_setup.program.payload, SK.encrypt(sk_setup.master, 1, b"x").program.payload
        )


def test_equivalence_capacity_guard(sc_setup):
    with pytest.raises(CapacityError):
        programs_equivalent(sc_setup.program.payload, sc_setup.program.payload, max_inputs=10)


def test_sc_p_equals_p1(sc_setup):
    hybrid = SC.build_hybrid_sc(1, sc_setup, i_star=2)
    assert programs_equivalent(sc_setup.program.payload, hybrid)


def test_sc_p_vs_p2_counterexample_at_missing_user(sc_setup):
    i_star = 2
    p2 = SC.build_hybrid_sc(2, sc_setup, i_star)
    res = programs_equivalent(sc_setup.program.payload, p2)
    assert not res.equivalent
    c, i, s = res.counterexample
    assert i == i_star and s == sc_setup.users[i_star - 1].s


def test_sc_p1_uniform_xstar_equals_p2(sc_setup):
    # A fresh uniform x* lies outside the PRG image for every probe seed,
    # so the level-1 and level-2 programs agree everywhere scanned.
    i_star = 3
    p1 = SC.build_hybrid_sc(1, sc_setup, i_star, seed=b"fresh-x", fresh_x_star=True)
    p2 = SC.build_hybrid_sc(2, sc_setup, i_star)
    probes = default_probe_seeds(p1, p2)
    assert all(prg_expand(s, 64) != p1.x_star for s in probes)
    assert programs_equivalent(p1, p2, probe_seeds=probes)


def test_sc_p2_p3_p4_chain(sc_setup):
    i_star, b0, b1 = 2, 1, 0
    c0 = SC.encrypt(sc_setup.master, i_star - b0, b"c0")
    c1 = SC.encrypt(sc_setup.master, i_star - b1, b"c1")
    ch = SC.ChallengeSC(c0=c0, b0=b0, c1=c1, b1=b1)
    p2 = SC.build_hybrid_sc(2, sc_setup, i_star)
    p3 = SC.build_hybrid_sc(3, sc_setup, i_star, challenge=ch)
    p4 = SC.build_hybrid_sc(4, sc_setup, i_star, challenge=ch)
    assert programs_equivalent(p2, p3)
    assert programs_equivalent(p3, p4)


def test_sk_hybrid_equivalences(sk_setup):
    i_star, b0 = 3, 1
    honest = SK.encrypt(sk_setup.master, i_star - b0, b"h").program.payload
    p1, _ = SK.build_hybrid_sk(1, sk_setup.master, i_star, b0, b"h1", prf_enc=honest.prf_enc)
    assert programs_equivalent(honest, p1.program.payload)
    p2, ctx2 = SK.build_hybrid_sk(2, sk_setup.master, i_star, b0, b"h2")
    p3, _ = SK.build_hybrid_sk(
        3, sk_setup.master, i_star, b0, b"h3", s_tilde=ctx2.s_tilde, prf_enc=ctx2.prf_enc
    )
    assert programs_equivalent(p2.program.payload, p3.program.payload)
    p4, ctx4 = SK.build_hybrid_sk(4, sk_setup.master, i_star, b0, b"h4")
    p5, _ = SK.build_hybrid_sk(
        5, sk_setup.master, i_star, b0, b"h5", s_tilde=ctx4.s_tilde, prf_enc=ctx4.prf_enc
    )
    assert programs_equivalent(p4.program.payload, p5.program.payload)


def test_sk_level3_never_bottom_on_honest_inputs(sk_setup):
    ct, _ = SK.build_hybrid_sk(3, sk_setup.master, 2, 0, b"nb")
    for u in sk_setup.users:
        assert SK.decrypt(u, ct) in (0, 1)


def test_equivalence_checks_all_sk_inputs():
    a = SK.setup(SK.SchemeParamsSK(n=3, m=8), b"x")
    ct = SK.encrypt(a.master, 1, b"y")
    res = programs_equivalent(ct.program.payload, ct.program.payload)
    assert res.equivalent and res.inputs_checked == 3 * 8


def test_white_box_reads_master_prf_out_of_descriptor(sc_setup):
    # The sensitivity consequence of the transparent backend, checked at
    # the descriptor level: the embedded key equals the master key.
    desc = sc_setup.program.payload
    assert desc.prf_enc.serialize() == sc_setup.master.prf_enc.serialize()
