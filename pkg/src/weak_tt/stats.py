"""Exact distributional computations over finite hash families.

Everything here is exact rational arithmetic: statistical distance, the
order-2 Renyi divergence sum RD(D1, D2) = sum_h Pr[D2 = h]^2 / Pr[D1 = h],
the almost-pairwise-independence deviation of a family, and the brute-force
verifier for the conditioned-sampling closeness bound

    SD(D1, D2) <= (1/2) sqrt(K/m + 7 K^2 delta),

where D1 draws a function uniformly from the family and D2 first draws a
uniform point x of a subset M (|M| = m) and then draws the function
conditioned on h(x) = y.  The square-root comparisons are done on squares,
so no floating error can flip a verdict.  The verifier also checks the
tighter intermediate form RD - 1 <= (K-1)/m + 7 K^2 delta that the
divergence computation actually yields.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapacityError, ParameterError

INF = math.inf


@dataclass(frozen=True)
class FiniteDist:
    """Probability distribution over a finite outcome space, exact."""

    probs: tuple  # tuple of (outcome, Fraction) pairs, outcome order fixed

    def __post_init__(self) -> None:
        total = sum((p for _, p in self.probs), Fraction(0))
        if total != 1:
            raise ParameterError(f"probabilities sum to {total}, not 1")
        if any(p < 0 for _, p in self.probs):
            raise ParameterError("negative probability")

    @classmethod
    def from_map(cls, mapping: dict) -> "FiniteDist":
        return cls(probs=tuple(sorted(((o, Fraction(p)) for o, p in mapping.items()))))

    def as_map(self) -> dict:
        return dict(self.probs)

    def outcomes(self) -> set:
        return {o for o, _ in self.probs}

    def support(self) -> set:
        return {o for o, p in self.probs if p > 0}


def statistical_distance(p: FiniteDist, q: FiniteDist) -> Fraction:
    """(1/2) sum |p - q| over a shared outcome space, exact."""
    if p.outcomes() != q.outcomes():
        raise ParameterError("distributions have different outcome spaces")
    qm = q.as_map()
    return sum((abs(pp - qm[o]) for o, pp in p.probs), Fraction(0)) / 2


def renyi_divergence(p: FiniteDist, q: FiniteDist):
    """Order-2 divergence sum_h q(h)^2 / p(h); +inf when supp(q) is not
    contained in supp(p).  Exact Fraction, or math.inf."""
    if p.outcomes() != q.outcomes():
        raise ParameterError("distributions have different outcome spaces")
    pm = p.as_map()
    total = Fraction(0)
    for o, qq in q.probs:
        if qq == 0:
            continue
        pp = pm[o]
        if pp == 0:
            return INF
        total += qq * qq / pp
    return total


def sd_bound_from_rd(rd) -> float:
    """The derived statistical-distance bound sqrt(RD - 1) / 2, as a float."""
    if rd == INF:
        return INF
    return math.sqrt(float(rd - 1)) / 2


def sd_rd_consistent(sd: Fraction, rd) -> bool:
    """Exact check of SD <= sqrt(RD - 1)/2, compared on squares."""
    if rd == INF:
        return True
    return 4 * sd * sd <= rd - 1


@dataclass(frozen=True)
class HashFamilySpec:
    """A finite, explicitly weighted family of functions [T] -> [K].

    ``functions`` maps each function (a length-T tuple of values in [K]) to
    its weight; weights sum to 1.  ``subset`` is the set M and ``target``
    the conditioning value y.
    """

    T: int
    K: int
    functions: tuple  # tuple of (table tuple, Fraction weight)
    subset: frozenset
    target: int
    description: str = "explicit"

    def __post_init__(self) -> None:
        if not self.subset:
            raise ParameterError("M must be nonempty")
        if not all(0 <= x < self.T for x in self.subset):
            raise ParameterError("M must be a subset of [T]")
        if not 0 <= self.target < self.K:
            raise ParameterError("target y must lie in [K]")
        total = sum((w for _, w in self.functions), Fraction(0))
        if total != 1:
            raise ParameterError("family weights must sum to 1")

    @property
    def m(self) -> int:
        return len(self.subset)

    def weight_map(self) -> dict:
        return dict(self.functions)


_ENUMERATION_LIMIT = 4**12


def all_functions_family(
    T: int, K: int, subset=None, target: int = 0
) -> HashFamilySpec:
    """Every function [T] -> [K], uniformly weighted (exactly pairwise
    independent, delta = 0).  Default M = [T]."""
    if K**T > _ENUMERATION_LIMIT:
        raise CapacityError(f"family of {K}**{T} functions is too large to enumerate")
    w = Fraction(1, K**T)
    functions = tuple((table, w) for table in itertools.product(range(K), repeat=T))
    subset = frozenset(range(T)) if subset is None else frozenset(subset)
    return HashFamilySpec(
        T=T, K=K, functions=functions, subset=subset, target=target,
        description=f"all-functions T={T} K={K}",
    )


def seeded_family(
    tables, T: int, K: int, subset=None, target: int = 0, description: str = "seeded"
) -> HashFamilySpec:
    """Family induced by an explicit list of function tables (e.g. a PRF
    restricted to a small domain, one table per seed), uniform over the
    list.  Duplicate tables aggregate weight."""
    tables = list(tables)
    if not tables:
        raise ParameterError("need at least one table")
    w = Fraction(1, len(tables))
    agg: dict = {}
    for t in tables:
        t = tuple(t)
        if len(t) != T or not all(0 <= v < K for v in t):
            raise ParameterError("table shape mismatch")
        agg[t] = agg.get(t, Fraction(0)) + w
    subset = frozenset(range(T)) if subset is None else frozenset(subset)
    return HashFamilySpec(
        T=T, K=K, functions=tuple(sorted(agg.items())), subset=subset, target=target,
        description=description,
    )


def pairwise_delta(spec: HashFamilySpec) -> Fraction:
    """Max over distinct x0 != x1 and all (y0, y1) of
    |Pr[h(x0)=y0 and h(x1)=y1] - 1/K^2|, exact."""
    if spec.T < 2:
        return Fraction(0)
    base = Fraction(1, spec.K**2)
    worst = Fraction(0)
    for x0 in range(spec.T):
        for x1 in range(x0 + 1, spec.T):
            counts: dict = {}
            for table, w in spec.functions:
                pair = (table[x0], table[x1])
                counts[pair] = counts.get(pair, Fraction(0)) + w
            for y0 in range(spec.K):
                for y1 in range(spec.K):
                    pr = counts.get((y0, y1), Fraction(0))
                    worst = max(worst, abs(pr - base))
    return worst


@dataclass
class LemmaReport:
    """Exact verdict for one conditioned-sampling instance."""

    T: int
    K: int
    m: int
    target: int
    delta: Fraction
    sd: Fraction
    rd: object  # Fraction or +inf
    bound_sq_statement: Fraction  # (K/m + 7 K^2 delta) / 4, compared with sd^2
    bound_sq_proof: Fraction  # ((K-1)/m + 7 K^2 delta) / 4
    rd_gap_bound: Fraction  # (K-1)/m + 7 K^2 delta, compared with rd - 1
    passes_statement: bool = field(init=False)
    passes_proof: bool = field(init=False)
    passes_rd: bool = field(init=False)
    excluded_points: tuple = ()

    def __post_init__(self) -> None:
        self.passes_statement = self.sd * self.sd <= self.bound_sq_statement
        self.passes_proof = self.sd * self.sd <= self.bound_sq_proof
        self.passes_rd = self.rd != INF and self.rd - 1 <= self.rd_gap_bound

    @property
    def bound_statement(self) -> float:
        return math.sqrt(float(4 * self.bound_sq_statement)) / 2

    def to_json(self) -> dict:
        return {
            "T": self.T,
            "K": self.K,
            "m": self.m,
            "y": self.target,
            "delta": self.delta,
            "sd": self.sd,
            "rd": self.rd,
            "rd_gap_bound": self.rd_gap_bound,
            "bound": repr(self.bound_statement),
            "passes_statement": self.passes_statement,
            "passes_proof_form": self.passes_proof,
            "passes_rd_intermediate": self.passes_rd,
            "excluded_points": list(self.excluded_points),
        }


def conditioned_pair(spec: HashFamilySpec) -> tuple[FiniteDist, FiniteDist, tuple]:
    """The two distributions compared by the closeness bound.

    D1 draws h from the family; D2 draws x uniform in M, then h conditioned
    on h(x) = y.  Points of M whose conditioning event has probability zero
    are excluded (the conditional law is undefined there) and reported.
    """
    weights = spec.weight_map()
    outcomes = sorted(weights)
    marginals = {
        x: sum((w for t, w in spec.functions if t[x] == spec.target), Fraction(0))
        for x in spec.subset
    }
    valid = sorted(x for x in spec.subset if marginals[x] > 0)
    excluded = tuple(sorted(x for x in spec.subset if marginals[x] == 0))
    if not valid:
        raise ParameterError("conditioning event has probability zero for every x in M")
    d2: dict = {t: Fraction(0) for t in outcomes}
    per_x = Fraction(1, len(valid))
    for x in valid:
        for t, w in spec.functions:
            if t[x] == spec.target:
                d2[t] += per_x * w / marginals[x]
    d1 = FiniteDist(probs=tuple((t, weights[t]) for t in outcomes))
    d2_dist = FiniteDist(probs=tuple((t, d2[t]) for t in outcomes))
    return d1, d2_dist, excluded


def verify_conditional_hash_lemma(spec: HashFamilySpec, delta: Fraction | None = None) -> LemmaReport:
    """Exactly construct D1 and D2 and compare SD against the closeness bound
    (statement form K/m, proof form (K-1)/m, and the RD intermediate)."""
    if delta is None:
        delta = pairwise_delta(spec)
    d1, d2, excluded = conditioned_pair(spec)
    sd = statistical_distance(d1, d2)
    rd = renyi_divergence(d1, d2)
    m = Fraction(spec.m)
    seven_k2_delta = 7 * spec.K**2 * delta
    return LemmaReport(
        T=spec.T,
        K=spec.K,
        m=spec.m,
        target=spec.target,
        delta=delta,
        sd=sd,
        rd=rd,
        bound_sq_statement=(Fraction(spec.K) / m + seven_k2_delta) / 4,
        bound_sq_proof=(Fraction(spec.K - 1) / m + seven_k2_delta) / 4,
        rd_gap_bound=Fraction(spec.K - 1) / m + seven_k2_delta,
        excluded_points=excluded,
    )
