"""Statistical readout layer: divergences, sample-complexity bounds, and hypothesis tests.

The probe measurement statistics are binary distributions over the energy
basis, so everything here is classical binary hypothesis testing. Divergences
are in nats; only :func:`classical_sample_complexity` uses log2, matching the
base its closed form is usually quoted in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Sequence

import numpy as np

from .thermal import ThermalQubit, log1pexp

__all__ = [
    "BinaryDistribution",
    "Decision",
    "HypothesisTestReport",
    "DistinguishabilityReport",
    "ConstantHypothesisChoice",
    "CrossoverRow",
    "CrossoverTable",
    "relative_entropy",
    "total_variation",
    "chernoff_stein_samples",
    "sample_bound_from_threshold",
    "select_constant_hypothesis",
    "distinguishability_report",
    "likelihood_ratio_test",
    "monte_carlo_readout",
    "classical_with_replacement_error",
    "classical_without_replacement_error",
    "classical_sample_complexity",
    "deterministic_classical_queries",
    "crossover_analysis",
]

CROSSOVER_CSV_HEADER = "delta,t,n_star,k_classical,n_crossover,thermal_beats_probabilistic"


@dataclass(frozen=True)
class BinaryDistribution:
    """Distribution over a qubit energy measurement: ``p0`` ground, ``1 - p0`` excited."""

    p0: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p0 <= 1.0:
            raise ValueError(f"p0 must lie in [0, 1], got {self.p0}")

    @property
    def p1(self) -> float:
        return 1.0 - self.p0

    @classmethod
    def from_qubit(cls, qubit: ThermalQubit) -> "BinaryDistribution":
        return cls(qubit.ground_population)


class Decision(Enum):
    BALANCED = "balanced"
    CONSTANT = "constant"


def _kl_term(p: float, q: float) -> float:
    if p == 0.0:
        return 0.0
    if q == 0.0:
        return math.inf
    return p * math.log(p / q)


def relative_entropy(p: BinaryDistribution, q: BinaryDistribution) -> float:
    """KL divergence D(p||q) in nats; infinite when q lacks support where p has mass."""
    return _kl_term(p.p0, q.p0) + _kl_term(p.p1, q.p1)


def total_variation(p: BinaryDistribution, q: BinaryDistribution) -> float:
    """Total variation distance; on two outcomes this is just |p0 - q0|."""
    return abs(p.p0 - q.p0)


def chernoff_stein_samples(delta: float, divergence: float) -> int | float:
    """Sample lower bound ceil(log(1/delta)/divergence) for error rate ``delta``.

    Returns ``math.inf`` when the divergence is zero (the hypotheses are
    indistinguishable and no sample count suffices).
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if divergence < 0.0:
        raise ValueError("divergence must be >= 0")
    if divergence == 0.0:
        return math.inf
    return math.ceil(math.log(1.0 / delta) / divergence)


def _pinsker_bound(delta: float, t: float) -> int:
    # Chernoff-Stein with the divergence replaced by its Pinsker lower bound 2 t^2.
    return math.ceil(math.log(1.0 / delta) / (2.0 * t * t))


def sample_bound_from_threshold(delta: float, t: float) -> int:
    """Problem-size-independent sample bound ceil(log(1/delta) / (2 t^2)).

    ``t`` is the population-distinguishability threshold; a qubit probe
    supports t up to 0.5, which is the enforced range.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if not 0.0 < t <= 0.5:
        raise ValueError("t must lie in (0, 0.5]")
    return _pinsker_bound(delta, t)


@dataclass(frozen=True)
class ConstantHypothesisChoice:
    """Which of the two constant-outcome distributions minimizes D(balanced||const)."""

    distribution: BinaryDistribution
    label: str
    divergence_const1: float
    divergence_const2: float


def select_constant_hypothesis(
    balanced: BinaryDistribution,
    const1: BinaryDistribution,
    const2: BinaryDistribution,
) -> ConstantHypothesisChoice:
    d1 = relative_entropy(balanced, const1)
    d2 = relative_entropy(balanced, const2)
    if d1 <= d2:
        return ConstantHypothesisChoice(const1, "const1", d1, d2)
    return ConstantHypothesisChoice(const2, "const2", d1, d2)


@dataclass(frozen=True)
class DistinguishabilityReport:
    """Machine ground-population gap between the constant and balanced oracles.

    ``lhs`` is 1/Z_const - 1/Z_balanced; the threshold ``t`` on probe
    populations is reachable only if lhs > 2 t. ``chi`` is the exponentially
    suppressed cross term dropped from that condition; it is reported, never
    silently absorbed.
    """

    t_threshold: float
    lhs: float
    chi: float
    satisfied: bool

    def to_dict(self) -> dict:
        return {
            "t_threshold": self.t_threshold,
            "lhs": self.lhs,
            "chi": self.chi,
            "satisfied": self.satisfied,
        }


def distinguishability_report(
    e1: float, e2: float, beta_m: float, n_machine: int, t: float
) -> DistinguishabilityReport:
    """Evaluate the distinguishability condition for a machine of ``n_machine`` qubits.

    Requires e1 >= e2 > 0 (the sign of the condition is derived under that
    ordering; the degenerate case e1 == e2 gives lhs exactly 0) and an even
    machine size so that balanced functions exist.
    """
    if n_machine < 2 or n_machine % 2 != 0:
        raise ValueError("machine size must be even and >= 2")
    if not (e2 > 0.0 and e1 > 0.0):
        raise ValueError("gaps must be positive")
    if e1 < e2:
        raise ValueError("requires e1 >= e2; swap the gaps")
    if not t > 0.0:
        raise ValueError("t must be positive")
    log_z1 = log1pexp(-beta_m * e1)
    log_z2 = log1pexp(-beta_m * e2)
    log_z_const = n_machine * log_z1
    log_z_bal = (n_machine // 2) * (log_z1 + log_z2)
    if e1 == e2:
        lhs = 0.0
    else:
        lhs = math.exp(-log_z_const) - math.exp(-log_z_bal)
    gamma_const = n_machine * e1
    gamma_bal = (n_machine / 2.0) * (e1 + e2)
    chi = math.exp(log_z_const - beta_m * gamma_bal) - math.exp(log_z_bal - beta_m * gamma_const)
    return DistinguishabilityReport(t, lhs, chi, lhs > 2.0 * t)


def _log_likelihood(n0: int, n1: int, hypothesis: BinaryDistribution) -> float:
    total = 0.0
    for count, prob in ((n0, hypothesis.p0), (n1, hypothesis.p1)):
        if count == 0:
            continue
        if prob == 0.0:
            return -math.inf
        total += count * math.log(prob)
    return total


def likelihood_ratio_test(
    samples: Sequence[int] | np.ndarray,
    hyp_balanced: BinaryDistribution,
    hyp_constant: BinaryDistribution,
) -> Decision:
    """Decide between the two hypotheses by comparing product likelihoods.

    Samples are energy outcomes (0 = ground, 1 = excited). Ties go to
    BALANCED, deterministically.
    """
    arr = np.asarray(samples)
    if arr.size == 0:
        raise ValueError("need at least one sample")
    n1 = int(np.count_nonzero(arr))
    n0 = int(arr.size) - n1
    ll_bal = _log_likelihood(n0, n1, hyp_balanced)
    ll_const = _log_likelihood(n0, n1, hyp_constant)
    return Decision.BALANCED if ll_bal >= ll_const else Decision.CONSTANT


@dataclass(frozen=True)
class HypothesisTestReport:
    """Summary of a Monte Carlo likelihood-ratio experiment.

    ``empirical_false_positive`` is the observed error rate of the hypothesis
    matching the sampling distribution: the fraction of BALANCED decisions
    when the truth is the constant hypothesis, and the fraction of CONSTANT
    decisions when the truth is the balanced one. When the sampling
    distribution matches neither hypothesis the fraction of BALANCED
    decisions is reported.
    """

    n_samples: int
    trials: int
    decision: Decision
    divergence: float
    pinsker_lower: float
    chernoff_stein_bound: int | float
    empirical_false_positive: float
    seed: int

    def to_dict(self) -> dict:
        bound = self.chernoff_stein_bound
        return {
            "n_samples": self.n_samples,
            "trials": self.trials,
            "decision": self.decision.value,
            "divergence": self.divergence,
            "pinsker_lower": self.pinsker_lower,
            "chernoff_stein_bound": None if bound == math.inf else bound,
            "empirical_false_positive": self.empirical_false_positive,
            "seed": self.seed,
        }


def monte_carlo_readout(
    true_dist: BinaryDistribution,
    hyp_balanced: BinaryDistribution,
    hyp_constant: BinaryDistribution,
    n_samples: int,
    trials: int,
    seed: int,
    delta: float = 0.1,
) -> HypothesisTestReport:
    """Repeat sampling + likelihood-ratio testing; deterministic under a fixed seed.

    ``delta`` only parameterizes the Chernoff-Stein bound echoed in the
    report; it does not affect the decisions.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    balanced_decisions = 0
    for _ in range(trials):
        samples = (rng.random(n_samples) < true_dist.p1).astype(np.uint8)
        if likelihood_ratio_test(samples, hyp_balanced, hyp_constant) is Decision.BALANCED:
            balanced_decisions += 1
    balanced_fraction = balanced_decisions / trials
    if true_dist.p0 == hyp_constant.p0:
        error_rate = balanced_fraction
    elif true_dist.p0 == hyp_balanced.p0:
        error_rate = 1.0 - balanced_fraction
    else:
        error_rate = balanced_fraction
    divergence = relative_entropy(hyp_balanced, hyp_constant)
    tv = total_variation(hyp_balanced, hyp_constant)
    return HypothesisTestReport(
        n_samples=n_samples,
        trials=trials,
        decision=Decision.BALANCED if 2 * balanced_decisions >= trials else Decision.CONSTANT,
        divergence=divergence,
        pinsker_lower=2.0 * tv * tv,
        chernoff_stein_bound=chernoff_stein_samples(delta, divergence),
        empirical_false_positive=error_rate,
        seed=seed,
    )


def classical_with_replacement_error(k: int) -> float:
    """False-positive rate 2^{-(k-1)} of uniform sampling with replacement."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2.0 ** (-(k - 1))


def classical_without_replacement_error(n: int, k: int) -> float:
    """False-positive rate 2*C(2^{n-1}, k)/C(2^n, k) of sampling without replacement.

    Exact integer arithmetic for n <= 20, log-gamma beyond that.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= k <= (1 << n):
        raise ValueError(f"k must lie in [1, 2^{n}]")
    half = 1 << (n - 1)
    if k > half:
        return 0.0
    if n <= 20:
        return 2 * math.comb(half, k) / math.comb(1 << n, k)
    log_ratio = _log_comb(half, k) - _log_comb(1 << n, k)
    return math.exp(math.log(2.0) + log_ratio)


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def classical_sample_complexity(delta: float) -> int:
    """Samples k = ceil(log2(1/delta) + 1) for the with-replacement strategy."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return math.ceil(math.log2(1.0 / delta) + 1.0)


def deterministic_classical_queries(n: int) -> int:
    """Worst-case query count 2^{n-1} + 1 of the deterministic classical solver."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (1 << (n - 1)) + 1


@dataclass(frozen=True)
class CrossoverRow:
    delta: float
    t: float
    n_star: int
    k_classical: int
    n_crossover: int
    thermal_beats_probabilistic: bool


@dataclass(frozen=True)
class CrossoverTable:
    rows: tuple[CrossoverRow, ...]

    def __iter__(self):
        return iter(self.rows)

    def to_csv(self, stream: IO[str]) -> None:
        stream.write(CROSSOVER_CSV_HEADER + "\n")
        for row in self.rows:
            stream.write(
                f"{row.delta!r},{row.t!r},{row.n_star},{row.k_classical},"
                f"{row.n_crossover},{'true' if row.thermal_beats_probabilistic else 'false'}\n"
            )


def crossover_analysis(delta_grid: Iterable[float], t_grid: Iterable[float]) -> CrossoverTable:
    """Compare the thermal sample bound with classical baselines over a (delta, t) grid.

    Per cell: the Pinsker-weakened thermal bound n*, the classical
    probabilistic count k, the smallest problem size where n* beats the
    deterministic classical query count, and whether n* < k. The grid may
    probe t beyond the qubit-achievable 0.5 to locate the asymptotic
    crossover, so the bound formula is evaluated directly here.
    """
    deltas = sorted(set(float(d) for d in delta_grid))
    ts = sorted(set(float(t) for t in t_grid))
    if not deltas or not ts:
        raise ValueError("grids must be nonempty")
    if any(not 0.0 < d < 1.0 for d in deltas):
        raise ValueError("delta values must lie in (0, 1)")
    if any(not 0.0 < t < 1.0 for t in ts):
        raise ValueError("t values must lie in (0, 1)")
    rows = []
    for delta in deltas:
        k = classical_sample_complexity(delta)
        for t in ts:
            n_star = _pinsker_bound(delta, t)
            n_cross = 1
            while deterministic_classical_queries(n_cross) <= n_star:
                n_cross += 1
            rows.append(
                CrossoverRow(
                    delta=delta,
                    t=t,
                    n_star=n_star,
                    k_classical=k,
                    n_crossover=n_cross,
                    thermal_beats_probabilistic=n_star < k,
                )
            )
    return CrossoverTable(tuple(rows))
