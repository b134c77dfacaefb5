"""Statistical queries, mechanisms, accuracy, and the tracer."""

from fractions import Fraction

import pytest

from weak_tt import dp_attack as D
from weak_tt import short_ctext as SC
from weak_tt import short_key as SK
from weak_tt.errors import CapacityError, ParameterError
from weak_tt.seeding import derive

SC6 = SC.SchemeParamsSC(n=6, m=48)
SK4 = SK.SchemeParamsSK(n=4, m=16)


@pytest.fixture(scope="module")
def inst6():
    return D.make_hardness_instance("short-ctext", SC6, b"inst6")


@pytest.fixture(scope="module")
def inst_sk():
    return D.make_hardness_instance("short-key", SK4, b"inst-sk")


def test_query_answers_are_exactly_j_over_n(inst6):
    for j in range(7):
        q = inst6.queries.sample(j, derive(b"q", j))
        assert q.true_answer(inst6.dataset) == Fraction(j, 6)


def test_extreme_indices_give_zero_and_one(inst6):
    assert inst6.queries.sample(0, b"a").true_answer(inst6.dataset) == 0
    assert inst6.queries.sample(6, b"b").true_answer(inst6.dataset) == 1


def test_removed_row_recount(inst6):
    removed = inst6.dataset.remove(3)
    for j in range(7):
        q = inst6.queries.sample(j, derive(b"r", j))
        expected = Fraction(sum(1 for i in range(1, 7) if i <= j and i != 3), 6)
        assert q.true_answer(removed) == expected


def test_bot_row_contributes_zero(inst6):
    removed = inst6.dataset.remove(1)
    q = inst6.queries.sample(6, b"z")
    assert q.true_answer(removed) == Fraction(5, 6)


def test_query_enumeration_short_ctext_only(inst6, inst_sk):
    assert len(list(inst6.queries.enumerate())) == 48
    with pytest.raises(CapacityError):
        list(inst_sk.queries.enumerate())


def test_exact_table_is_exactly_accurate(inst6):
    s = D.run_mechanism("exact-table", inst6)
    rep = D.check_accuracy(s, inst6)
    assert rep.max_error == 0 and rep.passed and rep.enumerated


def test_raw_dataset_summary_works_for_short_key(inst_sk):
    s = D.run_mechanism("raw-dataset", inst_sk)
    rep = D.check_accuracy(s, inst_sk, sample_budget=10, seed=b"acc")
    assert rep.max_error == 0 and not rep.enumerated


def test_noisy_histogram_zero_noise_limit(inst_sk):
    s = D.run_mechanism("noisy-histogram", inst_sk, seed=b"h", sigma_override=0.0)
    for j in range(5):
        q = inst_sk.queries.sample(j, derive(b"nh", j))
        assert abs(float(s.evaluate(q)) - float(q.true_answer(inst_sk.dataset))) < 1e-9


def test_noisy_histogram_needs_short_key(inst6):
    with pytest.raises(CapacityError):
        D.run_mechanism("noisy-histogram", inst6)


def test_noisy_table_huge_sigma_fails_accuracy(inst6):
    s = D.run_mechanism("noisy-table", inst6, seed=b"big", sigma_override=10.0)
    rep = D.check_accuracy(s, inst6)
    assert not rep.passed


def test_eval_clamped_to_unit_interval(inst6):
    s = D.run_mechanism("noisy-table", inst6, seed=b"c", sigma_override=50.0)
    for q in inst6.queries.enumerate():
        assert 0 <= s.evaluate(q) <= 1


def test_summary_table_rejects_foreign_queries(inst6):
    s = D.run_mechanism("exact-table", inst6, query_limit=5)
    with pytest.raises(ParameterError):
        s.evaluate(D.StatQuery(ciphertext=40, scheme="short-ctext"))


def test_trace_exact_summary_analytic(inst6):
    s = D.run_mechanism("exact-table", inst6)
    tr = D.trace(s, inst6, samples_per_index=50, seed=b"t")
    assert tr.curve == (1, 1, 1, 0, 0, 0, 0)
    assert tr.accused == 3 == D.analytic_accused_index(6)
    assert tr.gap == 1


def test_trace_on_removed_row_shifts_accusation(inst6):
    removed = D.HardnessInstance(
        dataset=inst6.dataset.remove(3), master=inst6.master,
        queries=inst6.queries, params=inst6.params,
    )
    s = D.run_mechanism("exact-table", removed)
    tr = D.trace(s, removed, samples_per_index=50, seed=b"t")
    assert tr.accused == 4  # never 3: the curve now drops at 4


def test_trace_constant_summary_accuses_nobody(inst6):
    flat = D.Summary(variant="exact-table", payload={c: Fraction(1, 2) for c in range(48)})
    tr = D.trace(flat, inst6, samples_per_index=20, seed=b"t")
    assert tr.accused is None and tr.gap == 0


def test_trace_curve_monotone_for_exact_summaries(inst6):
    s = D.run_mechanism("exact-table", inst6)
    tr = D.trace(s, inst6, samples_per_index=40, seed=b"m")
    assert all(tr.curve[j] >= tr.curve[j + 1] for j in range(6))


@pytest.mark.parametrize("n", [3, 5, 6, 7, 9, 10])
def test_analytic_accused_boundary(n):
    # The first j with j/n > 1/3, recomputed directly.
    expected = min(j for j in range(n + 1) if Fraction(j, n) > Fraction(1, 3))
    assert D.analytic_accused_index(n) == expected


def test_tracer_and_oracle_agree_across_sizes():
    for n in (3, 5, 9):
        params = SC.SchemeParamsSC(n=n, m=8 * n)
        inst = D.make_hardness_instance("short-ctext", params, derive(b"sz", n))
        s = D.run_mechanism("exact-table", inst)
        tr = D.trace(s, inst, samples_per_index=30, seed=b"t")
        assert tr.accused == D.analytic_accused_index(n)


def test_violation_experiment_exact_mechanism(inst6):
    rep = D.privacy_violation_experiment(
        "short-ctext", SC6, "exact-table", runs=6, seed=b"viol", samples_per_index=40
    )
    assert rep.accused_modal == 3
    assert rep.freq_on_full == 1
    assert rep.freq_on_removed == 0
    assert rep.violation is True and rep.margin > 0
    assert rep.accuracy_passes == 6


def test_violation_experiment_inaccurate_mechanism_claims_nothing():
    rep = D.privacy_violation_experiment(
        "short-ctext", SC6, "noisy-table", runs=4, seed=b"noisy",
        samples_per_index=30, sigma_override=25.0,
    )
    assert rep.violation is not True
    assert rep.accuracy_passes < 3


def test_violation_experiment_zero_runs():
    rep = D.privacy_violation_experiment("short-ctext", SC6, "exact-table", runs=0)
    assert rep.violation is None and rep.accused_modal is None and rep.runs == 0


def test_accuracy_tension_boundary():
    params = SC.SchemeParamsSC(n=8, m=512)
    big = D.accuracy_tension_experiment("short-ctext", params, k=512, runs=5, seed=b"tb")
    small = D.accuracy_tension_experiment("short-ctext", params, k=8, runs=5, seed=b"tb")
    assert big["passes"] <= 1
    assert small["passes"] >= 4
    assert big["sigma"] > small["sigma"]


def test_dataset_remove_validates_index(inst6):
    with pytest.raises(ParameterError):
        inst6.dataset.remove(0)
    with pytest.raises(ParameterError):
        inst6.dataset.remove(7)
