"""CLI dispatch, exit codes, and report determinism."""

import json
import os

import pytest

from weak_tt.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_setup_writes_keys_file(tmp_path, capsys):
    out = tmp_path / "keys.json"
    code, _, _ = run_cli(
        ["setup", "--scheme", "short-ctext", "--n", "4", "--m", "32", "--lambda", "64",
         "--seed", "7", "--out", str(out)], capsys,
    )
    assert code == 0
    data = json.loads(out.read_text())
    assert data["params"]["n"] == 4 and len(data["users"]) == 4


def test_encrypt_decrypt_round(tmp_path, capsys):
    keys = tmp_path / "keys.json"
    run_cli(["setup", "--scheme", "short-ctext", "--n", "4", "--m", "32", "--lambda", "64",
             "--seed", "7", "--out", str(keys)], capsys)
    code, out, _ = run_cli(["encrypt", "--keys", str(keys), "--index", "4", "--seed", "9"], capsys)
    assert code == 0
    c = int(out.strip())
    assert 0 <= c < 32
    code, out, _ = run_cli(["decrypt", "--keys", str(keys), "--user", "1", "--ciphertext", str(c)], capsys)
    assert code == 0 and out.strip() == "1"


def test_short_key_ciphertext_is_program_json(tmp_path, capsys):
    keys = tmp_path / "keys.json"
    run_cli(["setup", "--scheme", "short-key", "--n", "4", "--m", "16", "--lambda", "64",
             "--seed", "7", "--out", str(keys)], capsys)
    code, out, _ = run_cli(["encrypt", "--keys", str(keys), "--index", "0", "--seed", "3"], capsys)
    assert code == 0
    ct_path = tmp_path / "ct.json"
    ct_path.write_text(out)
    assert json.loads(out)["backend"] == "transparent"
    code, out, _ = run_cli(["decrypt", "--keys", str(keys), "--user", "2",
                            "--ciphertext", str(ct_path)], capsys)
    assert code == 0 and out.strip() == "0"


def test_missing_seed_is_usage_error(capsys):
    env = os.environ.pop("WEAK_TT_SEED", None)
    try:
        code, _, err = run_cli(["setup", "--scheme", "short-ctext", "--n", "2", "--m", "8"], capsys)
        assert code == 2 and "seed" in err
    finally:
        if env is not None:
            os.environ["WEAK_TT_SEED"] = env


def test_env_seed_fallback(tmp_path, capsys):
    os.environ["WEAK_TT_SEED"] = "42"
    try:
        out = tmp_path / "k.json"
        code, _, _ = run_cli(["setup", "--n", "2", "--m", "8", "--lambda", "64",
                              "--out", str(out)], capsys)
        assert code == 0
    finally:
        del os.environ["WEAK_TT_SEED"]


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["setup", "--frobnicate"])
    assert exc.value.code == 2


def test_capacity_error_exits_3(capsys):
    # m < n + 1 makes surjective coverage impossible: parameter error = 2.
    code, _, _ = run_cli(["setup", "--scheme", "short-ctext", "--n", "4", "--m", "4",
                          "--lambda", "64", "--seed", "1"], capsys)
    assert code == 2
    # The exact table needs an enumerable query family; short-key has none.
    code, _, err = run_cli(
        ["attack", "--scheme", "short-key", "--n", "3", "--m", "8", "--lambda", "64",
         "--mechanism", "exact", "--runs", "1", "--seed", "1"], capsys,
    )
    assert code == 3 and "enumerable" in err


def test_verify_correctness_exit_zero(tmp_path, capsys):
    code, out, _ = run_cli(
        ["verify", "correctness", "--scheme", "short-ctext", "--n", "6", "--m", "48",
         "--lambda", "64", "--seed", "7", "--setups", "2", "--out", str(tmp_path / "r.json")],
        capsys,
    )
    assert code == 0
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["results"]["failures"] == 0


def test_verify_lemma_hash(capsys):
    code, out, _ = run_cli(
        ["verify", "lemma-hash", "--t", "2", "--k", "2", "--m-size", "2", "--y", "0"], capsys
    )
    assert code == 0
    res = json.loads(out)["results"]
    assert res["sd"] == {"num": 1, "den": 4}


def test_verify_xor_identity(capsys):
    code, out, _ = run_cli(["verify", "xor-identity", "--pairs", "25", "--seed", "3"], capsys)
    assert code == 0
    cases = json.loads(out)["results"]["cases"]
    assert cases[0]["adv"] == {"num": 1, "den": 2}


def test_verify_sd_rd(capsys):
    code, out, _ = run_cli(["verify", "sd-rd", "--t", "3", "--k", "2", "--m-size", "2"], capsys)
    assert code == 0
    assert json.loads(out)["results"]["consistent"] is True


def test_game_report_structure(tmp_path, capsys):
    out = tmp_path / "g.json"
    code, _, _ = run_cli(
        ["game", "index-hiding", "--scheme", "short-ctext", "--n", "4", "--m", "16",
         "--lambda", "64", "--i-star", "2", "--adversary", "constant", "--trials", "60",
         "--seed", "5", "--out", str(out)], capsys,
    )
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["schema_version"] == 1
    assert rep["results"]["trials"] == 60
    assert "thresholds" in rep["results"]
    assert rep["config"]["seed"] == 5


def test_attack_with_default_desk_m(tmp_path, capsys):
    # The documented one-liner: no --m, desk-scale default, accused index 3
    # with frequency 1.0.
    out = tmp_path / "a.json"
    code, _, _ = run_cli(
        ["attack", "--mechanism", "exact", "--n", "6", "--runs", "4", "--samples", "40",
         "--seed", "7", "--out", str(out)], capsys,
    )
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["config"]["m"] == 48
    assert rep["results"]["accused_modal"] == 3
    assert rep["results"]["freq_on_full"] == {"num": 1, "den": 1}


def test_attack_report_accuses_boundary_index(tmp_path, capsys):
    out = tmp_path / "a.json"
    code, _, _ = run_cli(
        ["attack", "--scheme", "short-ctext", "--n", "6", "--m", "48", "--lambda", "64",
         "--mechanism", "exact", "--runs", "3", "--samples", "30", "--seed", "7",
         "--out", str(out)], capsys,
    )
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["results"]["accused_modal"] == 3
    assert rep["results"]["freq_on_full"] == {"num": 1, "den": 1}


def test_bench_report_deterministic_and_structural(tmp_path, capsys):
    a, b = tmp_path / "b1.json", tmp_path / "b2.json"
    for path in (a, b):
        code, _, err = run_cli(
            ["bench", "--scheme", "short-ctext", "--n", "4", "--m", "32", "--lambda", "64",
             "--seed", "11", "--out", str(path)], capsys,
        )
        assert code == 0
        assert "ms" in err  # wall times go to stderr, not into the report
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["results"]["ciphertext"]["space_bits"] == 5


def test_thread_count_does_not_change_reports(tmp_path, capsys):
    base = ["game", "input-matching", "--domain", "8", "--range", "2", "--adversary", "equality",
            "--trials", "80", "--seed", "9"]
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"thr{threads}.json"
        code, _, _ = run_cli(base + ["--threads", threads, "--out", str(out)], capsys)
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_lemma_hash_seeded_family(tmp_path, capsys):
    seeds_file = tmp_path / "seeds.json"
    seeds_file.write_text(json.dumps(list(range(16))))
    code, out, _ = run_cli(
        ["verify", "lemma-hash", "--t", "4", "--k", "2", "--m-size", "2", "--y", "0",
         "--lambda", "64", "--family", f"seeds:{seeds_file}"], capsys,
    )
    assert code == 0
    res = json.loads(out)["results"]
    assert res["delta"]["den"] > 0  # exact delta w.r.t. the listed seeds


def test_json_flag_on_decrypt(tmp_path, capsys):
    keys = tmp_path / "keys.json"
    run_cli(["setup", "--scheme", "short-ctext", "--n", "4", "--m", "32", "--lambda", "64",
             "--seed", "7", "--out", str(keys)], capsys)
    code, out, _ = run_cli(
        ["decrypt", "--keys", str(keys), "--user", "1", "--ciphertext", "3", "--json"], capsys
    )
    assert code == 0
    assert json.loads(out)["results"]["plaintext"] in (0, 1, "bot")


REPLAY_COMMANDS = [
    ["setup", "--scheme", "short-ctext", "--n", "3", "--m", "12", "--lambda", "64", "--seed", "3"],
    ["setup", "--scheme", "short-key", "--n", "3", "--m", "8", "--lambda", "64", "--seed", "3"],
    ["game", "index-hiding", "--scheme", "short-ctext", "--n", "3", "--m", "12", "--lambda", "64",
     "--i-star", "1", "--adversary", "black-box-decrypt", "--trials", "40", "--seed", "9"],
    ["game", "two-index", "--scheme", "short-key", "--n", "3", "--m", "8", "--lambda", "64",
     "--i-star", "2", "--adversary", "white-box-transparent", "--trials", "40", "--seed", "9"],
    ["game", "puncture", "--domain", "32", "--range", "4", "--x-star", "3",
     "--adversary", "puncture-compare", "--trials", "40", "--seed", "9"],
    ["game", "input-matching", "--domain", "8", "--range", "2", "--adversary", "equality",
     "--trials", "40", "--seed", "9"],
    ["attack", "--scheme", "short-ctext", "--n", "6", "--m", "48", "--lambda", "64",
     "--mechanism", "exact", "--runs", "2", "--samples", "20", "--seed", "7"],
    ["attack", "--scheme", "short-key", "--n", "3", "--m", "8", "--lambda", "64",
     "--mechanism", "noisy-histogram", "--runs", "2", "--samples", "10", "--seed", "7"],
    ["verify", "correctness", "--scheme", "short-key", "--n", "4", "--m", "8", "--lambda", "64",
     "--seed", "7", "--setups", "2"],
    ["verify", "lemma-hash", "--t", "3", "--k", "2", "--m-size", "2", "--y", "1"],
    ["verify", "xor-identity", "--pairs", "10", "--seed", "4"],
    ["verify", "sd-rd", "--t", "2", "--k", "3", "--m-size", "2"],
    ["bench", "--scheme", "short-key", "--n", "4", "--m", "8", "--lambda", "64", "--seed", "2"],
]


@pytest.mark.parametrize("argv", REPLAY_COMMANDS, ids=lambda a: "-".join(a[:2]))
def test_reports_byte_identical_across_runs(argv, tmp_path, capsys):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for path in paths:
        code, _, _ = run_cli(argv + ["--out", str(path)], capsys)
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
