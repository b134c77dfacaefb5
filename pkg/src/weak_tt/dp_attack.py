"""Datasets of user keys, ciphertext queries, baseline mechanisms, and the
tracing attack that turns any accurate summary into a privacy violation.

The hardness instance puts one user key in each dataset row; each ciphertext
``c`` defines the statistical query "what fraction of rows decrypt c to 1".
Perfect correctness makes the true answer of a ciphertext encrypted to j
exactly j/n, so the answers walk from 0 (j = 0) to 1 (j = n) in steps of
1/n.  The tracer estimates, for every j, how often an accurate summary
answers at most 1/3 on fresh encryptions to j; the curve starts at 1, ends
at 0, and any adjacent drop larger than 1/n accuses an index.

Removed rows are substituted by a bottom row that decrypts nothing (it
contributes 0 to every query), so n stays fixed and the j/n arithmetic stays
exact.

The two noisy baselines are here so the accuracy/privacy tension is
observable, not as contributions: the per-query noise scale is a recorded
formula (see ``NOISY_TABLE_SIGMA_FORMULA``) tuned so that the 1/3-accuracy
boundary sits near |Q| = n^2 at desk scale; no differential-privacy claim is
made or tested for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapacityError, ConfigurationError, ParameterError
from .registry import SHORT_CTEXT, SHORT_KEY, scheme_ops
from .seeding import derive, stream
from .short_key import UserKeySK

BOT_ROW = "bot-row"  # the distinguished row that decrypts nothing

ACCURACY_THRESHOLD = Fraction(1, 3)

NOISY_TABLE_SIGMA_FORMULA = "sigma = sqrt(|Q| * ln(1/delta)) / (epsilon * n^2)"
NOISY_HISTOGRAM_SIGMA_FORMULA = "sigma = sqrt(2) * sqrt(2 * ln(1.25/delta)) / (epsilon * n)"


@dataclass(frozen=True)
class PrivacyParams:
    epsilon: float = 1.0
    delta: float | None = None  # defaults to 1/(2n) at instance scale

    def resolved_delta(self, n: int) -> float:
        return self.delta if self.delta is not None else 1.0 / (2 * n)


@dataclass(frozen=True)
class AccuracyParams:
    alpha: Fraction = ACCURACY_THRESHOLD
    beta: float | None = None  # defaults to 1/(2n)

    def __post_init__(self) -> None:
        if not 0 < self.alpha < Fraction(1, 2):
            raise ParameterError("alpha must lie in (0, 1/2)")


@dataclass(frozen=True)
class Dataset:
    """Ordered rows of user keys (or the bottom row), one per individual."""

    rows: tuple
    scheme: str

    @property
    def n(self) -> int:
        return len(self.rows)

    def remove(self, i: int) -> "Dataset":
        """D_{-i}: substitute row i (1-based) with the bottom row."""
        if not 1 <= i <= self.n:
            raise ParameterError(f"row index {i} outside [1, {self.n}]")
        rows = list(self.rows)
        rows[i - 1] = BOT_ROW
        return Dataset(rows=tuple(rows), scheme=self.scheme)


@dataclass(frozen=True)
class StatQuery:
    """The predicate q_c(row) = Dec(row, c), averaged over a dataset."""

    ciphertext: object
    scheme: str

    def evaluate_row(self, row) -> int:
        if row is BOT_ROW:
            return 0
        value = scheme_ops(self.scheme).decrypt(row, self.ciphertext)
        return value if value in (0, 1) else 0

    def true_answer(self, dataset: Dataset) -> Fraction:
        return Fraction(sum(self.evaluate_row(r) for r in dataset.rows), dataset.n)


@dataclass(frozen=True)
class QueryFamily:
    """Handle over the instance's query set: enumeration when the ciphertext
    space is polynomial (short-ctext), sampling via fresh encryptions always."""

    scheme: str
    master: object
    n: int
    m: int

    @property
    def enumerable(self) -> bool:
        return self.scheme == SHORT_CTEXT

    @property
    def size(self) -> int | None:
        return self.m if self.enumerable else None

    def enumerate(self, limit: int | None = None):
        if not self.enumerable:
            raise CapacityError("short-key queries are programs; the family is not enumerable")
        count = self.m if limit is None else min(limit, self.m)
        for c in range(count):
            yield StatQuery(ciphertext=c, scheme=self.scheme)

    def sample(self, j: int, seed: bytes) -> StatQuery:
        ct = scheme_ops(self.scheme).encrypt(self.master, j, seed)
        return StatQuery(ciphertext=ct, scheme=self.scheme)


@dataclass(frozen=True)
class HardnessInstance:
    dataset: Dataset
    master: object
    queries: QueryFamily
    params: object

    @property
    def n(self) -> int:
        return self.dataset.n


def make_hardness_instance(scheme: str, params, seed: bytes) -> HardnessInstance:
    """Run setup and lay the user keys out as a dataset."""
    ops = scheme_ops(scheme)
    setup_result = ops.setup(params, derive(seed, "instance", "setup"))
    dataset = Dataset(rows=tuple(setup_result.users), scheme=scheme)
    queries = QueryFamily(scheme=scheme, master=setup_result.master, n=params.n, m=params.m)
    return HardnessInstance(dataset=dataset, master=setup_result.master, queries=queries, params=params)


# ---------------------------------------------------------------------------
# Summaries and mechanisms.
# ---------------------------------------------------------------------------


def _clamp(v):
    if v < 0:
        return type(v)(0)
    if v > 1:
        return type(v)(1)
    return v


@dataclass(frozen=True)
class Summary:
    """A mechanism output with its evaluation contract.

    Variants: ``exact-table`` and ``noisy-table`` hold one answer per
    enumerated ciphertext; ``raw-dataset`` re-evaluates queries on stored
    rows (non-private); ``noisy-histogram`` holds a noisy frequency per
    universe element of the short-key scheme and answers by inner product
    with the query's indicator vector.  Eval output is clamped to [0, 1].
    """

    variant: str
    payload: object
    meta: dict = field(default_factory=dict, hash=False)

    def evaluate(self, query: StatQuery):
        if self.variant in ("exact-table", "noisy-table"):
            try:
                return _clamp(self.payload[query.ciphertext])
            except KeyError:
                raise ParameterError(f"query {query.ciphertext!r} outside the summary's table") from None
        if self.variant == "raw-dataset":
            return query.true_answer(self.payload)
        if self.variant == "noisy-histogram":
            n, m, values = self.payload
            total = 0.0
            for i in range(1, n + 1):
                base = (i - 1) * m
                for s in range(m):
                    if query.evaluate_row(UserKeySK(i=i, s=s)):
                        total += values[base + s]
            return _clamp(total)
        raise ConfigurationError(f"unknown summary variant {self.variant!r}")


MECHANISMS = ("exact-table", "raw-dataset", "noisy-table", "noisy-histogram")


def noisy_table_sigma(k: int, epsilon: float, delta: float, n: int) -> float:
    """Recorded baseline calibration; exhibits the |Q| ~ n^2 accuracy
    boundary at desk scale (see module docstring)."""
    return math.sqrt(k * math.log(1.0 / delta)) / (epsilon * n**2)


def noisy_histogram_sigma(epsilon: float, delta: float, n: int) -> float:
    return math.sqrt(2.0) * math.sqrt(2.0 * math.log(1.25 / delta)) / (epsilon * n)


def run_mechanism(
    variant: str,
    instance: HardnessInstance,
    privacy: PrivacyParams = PrivacyParams(),
    seed: bytes = b"",
    sigma_override: float | None = None,
    query_limit: int | None = None,
) -> Summary:
    """Produce a summary of the instance's dataset.

    ``query_limit`` restricts the enumerable table variants to the first k
    ciphertext queries (the family under test is then those k queries);
    ``sigma_override`` replaces the recorded noise calibration.
    """
    dataset = instance.dataset
    n = instance.n
    delta = privacy.resolved_delta(n)
    if variant == "raw-dataset":
        return Summary(variant=variant, payload=dataset, meta={"private": False})
    if variant in ("exact-table", "noisy-table"):
        queries = list(instance.queries.enumerate(limit=query_limit))
        k = len(queries)
        if variant == "exact-table":
            payload = {q.ciphertext: q.true_answer(dataset) for q in queries}
            return Summary(variant=variant, payload=payload, meta={"queries": k})
        sigma = sigma_override if sigma_override is not None else noisy_table_sigma(
            k, privacy.epsilon, delta, n
        )
        st = stream(seed, "noisy-table")
        payload = {
            q.ciphertext: float(q.true_answer(dataset)) + st.gauss(sigma) for q in queries
        }
        return Summary(
            variant=variant,
            payload=payload,
            meta={
                "queries": k,
                "sigma": sigma,
                "formula": NOISY_TABLE_SIGMA_FORMULA,
                "epsilon": privacy.epsilon,
                "delta": delta,
            },
        )
    if variant == "noisy-histogram":
        if dataset.scheme != SHORT_KEY:
            raise CapacityError("the noisy histogram needs the enumerable [n] x [m] universe")
        m = instance.params.m
        counts = [0] * (n * m)
        for row in dataset.rows:
            if row is not BOT_ROW:
                counts[(row.i - 1) * m + row.s] += 1
        sigma = sigma_override if sigma_override is not None else noisy_histogram_sigma(
            privacy.epsilon, delta, n
        )
        st = stream(seed, "noisy-histogram")
        values = [c / n + st.gauss(sigma) for c in counts]
        return Summary(
            variant=variant,
            payload=(n, m, values),
            meta={
                "sigma": sigma,
                "formula": NOISY_HISTOGRAM_SIGMA_FORMULA,
                "epsilon": privacy.epsilon,
                "delta": delta,
            },
        )
    raise ConfigurationError(f"unknown mechanism {variant!r}; expected one of {MECHANISMS}")


@dataclass(frozen=True)
class AccuracyReport:
    alpha: Fraction
    max_error: float
    queries_checked: int
    enumerated: bool
    passed: bool

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "max_error": repr(self.max_error),
            "queries_checked": self.queries_checked,
            "enumerated": self.enumerated,
            "passed": self.passed,
        }


def check_accuracy(
    summary: Summary,
    instance: HardnessInstance,
    alpha: Fraction = ACCURACY_THRESHOLD,
    sample_budget: int = 50,
    seed: bytes = b"",
    query_limit: int | None = None,
) -> AccuracyReport:
    """Max |q(D) - q(S)| over the query family: enumerated when possible
    (restricted to the summary's own table when it was built with a query
    limit), otherwise sampled via Enc(mk, j) across all j with the budget."""
    dataset = instance.dataset
    if summary.variant in ("exact-table", "noisy-table"):
        query_limit = query_limit or summary.meta.get("queries")
    if instance.queries.enumerable:
        queries = list(instance.queries.enumerate(limit=query_limit))
        enumerated = True
    else:
        queries = [
            instance.queries.sample(j, derive(seed, "acc", j, t))
            for j in range(instance.n + 1)
            for t in range(sample_budget)
        ]
        enumerated = False
    max_err = 0.0
    for q in queries:
        err = abs(float(summary.evaluate(q)) - float(q.true_answer(dataset)))
        max_err = max(max_err, err)
    return AccuracyReport(
        alpha=alpha,
        max_error=max_err,
        queries_checked=len(queries),
        enumerated=enumerated,
        passed=max_err <= float(alpha),
    )


# ---------------------------------------------------------------------------
# The tracer.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceResult:
    """Per-index acceptance curve and the accused index (if any).

    ``curve[j]`` estimates Pr over c <- Enc(mk, j) of q_c(S) <= 1/3; the
    accused index is the largest adjacent drop curve[i-1] - curve[i], when
    it exceeds 1/n (ties break toward the smallest index)."""

    curve: tuple
    accused: int | None
    gap: Fraction
    samples_per_index: int
    threshold: Fraction

    def to_json(self) -> dict:
        return {
            "curve": list(self.curve),
            "accused": self.accused,
            "gap": self.gap,
            "samples_per_index": self.samples_per_index,
            "threshold": self.threshold,
        }


def trace(
    summary: Summary,
    instance: HardnessInstance,
    samples_per_index: int = 200,
    seed: bytes = b"",
    threshold: Fraction = ACCURACY_THRESHOLD,
    min_gap: Fraction | None = None,
) -> TraceResult:
    """Scan j = 0..n with fresh encryption randomness per sample and accuse
    the max-gap adjacent index."""
    n = instance.n
    min_gap = Fraction(1, n) if min_gap is None else min_gap
    curve = []
    for j in range(n + 1):
        hits = 0
        for t in range(samples_per_index):
            q = instance.queries.sample(j, derive(seed, "trace", j, t))
            if summary.evaluate(q) <= threshold:
                hits += 1
        curve.append(Fraction(hits, samples_per_index))
    best_i, best_gap = None, Fraction(0)
    for i in range(1, n + 1):
        gap = curve[i - 1] - curve[i]
        if gap > best_gap:
            best_i, best_gap = i, gap
    if best_i is not None and best_gap > min_gap:
        accused = best_i
    else:
        accused = None
    return TraceResult(
        curve=tuple(curve),
        accused=accused,
        gap=best_gap,
        samples_per_index=samples_per_index,
        threshold=threshold,
    )


def analytic_accused_index(n: int, threshold: Fraction = ACCURACY_THRESHOLD) -> int:
    """Oracle for exact summaries: the smallest j with j/n > threshold."""
    j = 0
    while Fraction(j, n) <= threshold:
        j += 1
    return j


# ---------------------------------------------------------------------------
# The end-to-end experiment.
# ---------------------------------------------------------------------------


@dataclass
class ViolationReport:
    runs: int
    mechanism: str
    accusation_counts: dict
    accused_modal: int | None
    freq_on_full: Fraction | None
    freq_on_removed: Fraction | None
    accuracy_passes: int
    margin: float | None
    violation: bool | None
    note: str
    epsilon: float = 1.0
    delta: float | None = None
    curves_full: tuple = ()
    curves_removed: tuple = ()
    max_errors: tuple = ()

    def to_json(self) -> dict:
        return {
            "runs": self.runs,
            "mechanism": self.mechanism,
            "accusation_counts": {str(k): v for k, v in self.accusation_counts.items()},
            "accused_modal": self.accused_modal,
            "freq_on_full": self.freq_on_full,
            "freq_on_removed": self.freq_on_removed,
            "accuracy_passes": self.accuracy_passes,
            "accuracy_max_errors": [repr(e) for e in self.max_errors],
            "curves_full": [list(c) for c in self.curves_full],
            "curves_removed": [list(c) for c in self.curves_removed],
            "margin": None if self.margin is None else repr(self.margin),
            "violation": self.violation,
            "note": self.note,
            "epsilon": repr(self.epsilon),
            "delta": None if self.delta is None else repr(self.delta),
        }


def privacy_violation_experiment(
    scheme: str,
    params,
    mechanism: str,
    runs: int,
    seed: bytes = b"",
    privacy: PrivacyParams = PrivacyParams(),
    samples_per_index: int = 200,
    sigma_override: float | None = None,
) -> ViolationReport:
    """Run the mechanism on D and on D_{-i*} for the modal accused i*, trace
    both, and compare the accusation frequency against e^eps * p + delta.

    A violation is only claimed when the accuracy hypothesis held on the
    majority of full-dataset runs (the theorem's gate); otherwise the report
    carries the frequencies with no verdict.
    """
    if runs <= 0:
        return ViolationReport(
            runs=0, mechanism=mechanism, accusation_counts={}, accused_modal=None,
            freq_on_full=None, freq_on_removed=None, accuracy_passes=0,
            margin=None, violation=None, note="no runs requested",
            epsilon=privacy.epsilon, delta=privacy.delta,
        )
    counts: dict = {}
    accurate = 0
    accusations = []
    instances = []
    curves_full = []
    curves_removed = []
    max_errors = []
    for r in range(runs):
        inst = make_hardness_instance(scheme, params, derive(seed, "run", r))
        instances.append(inst)
        summary = run_mechanism(
            mechanism, inst, privacy, derive(seed, "run", r, "mech"),
            sigma_override=sigma_override,
        )
        acc = check_accuracy(summary, inst, seed=derive(seed, "run", r, "acc"))
        accurate += int(acc.passed)
        max_errors.append(acc.max_error)
        tr = trace(summary, inst, samples_per_index, derive(seed, "run", r, "trace"))
        curves_full.append(tr.curve)
        accusations.append(tr.accused)
        counts[tr.accused] = counts.get(tr.accused, 0) + 1
    real = [a for a in accusations if a is not None]
    modal = max(sorted(set(real)), key=lambda a: counts[a]) if real else None

    freq_full = None
    freq_removed = None
    margin = None
    violation: bool | None = None
    delta = privacy.resolved_delta(params.n)
    if modal is not None:
        freq_full = Fraction(sum(1 for a in accusations if a == modal), runs)
        removed_hits = 0
        for r, inst in enumerate(instances):
            removed = HardnessInstance(
                dataset=inst.dataset.remove(modal),
                master=inst.master,
                queries=inst.queries,
                params=inst.params,
            )
            summary = run_mechanism(
                mechanism, removed, privacy, derive(seed, "run", r, "mech-removed"),
                sigma_override=sigma_override,
            )
            tr = trace(summary, removed, samples_per_index, derive(seed, "run", r, "trace-removed"))
            curves_removed.append(tr.curve)
            removed_hits += int(tr.accused == modal)
        freq_removed = Fraction(removed_hits, runs)
        margin = float(freq_full) - (math.exp(privacy.epsilon) * float(freq_removed) + delta)

    if modal is None:
        note = "no index was ever accused"
    elif accurate * 2 <= runs:
        note = "accuracy hypothesis failed on most runs; no violation claimed"
    else:
        violation = margin is not None and margin > 0
        note = "margin compares Pr[accuse i* on D] with e^eps * Pr[accuse i* on D_-i*] + delta"
    return ViolationReport(
        runs=runs,
        mechanism=mechanism,
        accusation_counts=counts,
        accused_modal=modal,
        freq_on_full=freq_full,
        freq_on_removed=freq_removed,
        accuracy_passes=accurate,
        margin=margin,
        violation=violation,
        note=note,
        epsilon=privacy.epsilon,
        delta=delta,
        curves_full=tuple(curves_full),
        curves_removed=tuple(curves_removed),
        max_errors=tuple(max_errors),
    )


def accuracy_tension_experiment(
    scheme: str,
    params,
    k: int,
    runs: int,
    seed: bytes = b"",
    privacy: PrivacyParams = PrivacyParams(),
) -> dict:
    """Accuracy of the noisy table on the first k ciphertext queries, over
    seeded runs: the recorded calibration passes small families and fails
    large ones, with the boundary near |Q| = n^2."""
    passes = 0
    max_errors = []
    sigma = None
    for r in range(runs):
        inst = make_hardness_instance(scheme, params, derive(seed, "tension", r))
        summary = run_mechanism(
            "noisy-table", inst, privacy, derive(seed, "tension", r, "mech"), query_limit=k
        )
        sigma = summary.meta["sigma"]
        acc = check_accuracy(summary, inst, query_limit=k)
        passes += int(acc.passed)
        max_errors.append(acc.max_error)
    return {
        "k": k,
        "runs": runs,
        "passes": passes,
        "sigma": sigma,
        "formula": NOISY_TABLE_SIGMA_FORMULA,
        "max_errors": max_errors,
    }
