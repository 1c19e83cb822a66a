"""Cross-check suite: every analytic formula against the exact diagonal simulator.

Parameter tuples are drawn from documented ranges chosen so that the 1e-12
comparisons are honestly attainable in double precision: post-query
populations stay away from 0 and 1, where the log amplification of rounding
error would exceed the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exactsim
from .detuning import detuned_probe_temperature, flip_probability, suppression_factor
from .problems import (
    BVInstance,
    constant_functions,
    enumerate_balanced_functions,
    hamming_weight_population,
)
from .query import (
    QueryMask,
    classify_regime,
    kickback_outcome,
    mixed_input_query,
    reset_costs,
    sensitivity_check,
    swap_query,
    temperature_well_defined,
)
from .query import _general_mask_outcome
from .thermal import (
    BooleanFunctionTable,
    ThermalQubit,
    build_bv_oracle,
    build_dj_oracle,
    inverse_temperature_from_population,
)

__all__ = ["CheckResult", "VerificationReport", "run_verification", "PARAMETER_RANGES"]

# Sampling ranges for randomized tuples (omega, beta_S, beta_M, gaps).
PARAMETER_RANGES = {
    "omega": (0.25, 2.0),
    "beta_s": (-1.2, 1.2),
    "beta_m": (0.1, 1.5),
    "gap": (0.2, 2.0),
    "gamma": (0.2, 1.5),
}


@dataclass
class CheckResult:
    name: str
    cases: int
    max_error: float
    tolerance: float
    passed: bool
    first_failure: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"[{status}] {self.name}: {self.cases} cases, "
            f"max error {self.max_error:.3e} (tolerance {self.tolerance:.0e})"
        )
        if not self.passed and self.first_failure:
            text += f"\n       first failure: {self.first_failure}"
        return text


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        out.append(f"verification {'PASSED' if self.passed else 'FAILED'} "
                   f"({sum(c.passed for c in self.checks)}/{len(self.checks)} checks)")
        return out

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "cases": c.cases,
                    "max_error": c.max_error,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                    "first_failure": c.first_failure,
                }
                for c in self.checks
            ],
        }


class _Tracker:
    """Accumulates the max error of a check and remembers the first offender."""

    def __init__(self, name: str, tolerance: float):
        self.name = name
        self.tolerance = tolerance
        self.cases = 0
        self.max_error = 0.0
        self.first_failure = ""

    def record(self, error: float, context: str) -> None:
        self.cases += 1
        if error > self.max_error:
            self.max_error = error
        if error > self.tolerance and not self.first_failure:
            self.first_failure = f"{context} (error {error:.3e})"

    def result(self) -> CheckResult:
        return CheckResult(
            name=self.name,
            cases=self.cases,
            max_error=self.max_error,
            tolerance=self.tolerance,
            passed=self.max_error <= self.tolerance,
            first_failure=self.first_failure,
        )


def _uniform(rng: np.random.Generator, key: str) -> float:
    low, high = PARAMETER_RANGES[key]
    return float(rng.uniform(low, high))


def _sample_probe(rng: np.random.Generator) -> ThermalQubit:
    return ThermalQubit(_uniform(rng, "omega"), _uniform(rng, "beta_s"))


def _dj_instances(max_n: int):
    for n in range(1, max_n + 1):
        yield from constant_functions(n)
        yield from enumerate_balanced_functions(n)


def _random_dj_oracle(rng: np.random.Generator, n: int):
    size = 1 << n
    while True:
        outputs = tuple(int(b) for b in rng.integers(0, 2, size))
        table = BooleanFunctionTable(n, outputs)
        if table.classification.value != "other" or n == 1:
            break
    gap_one = _uniform(rng, "gap")
    gap_zero = _uniform(rng, "gap")
    return build_dj_oracle(table, gap_one, gap_zero, _uniform(rng, "beta_m"))


def _exact_kickback_p0(probe, oracle, mask: QueryMask) -> float:
    state = exactsim.build_joint_state(probe, oracle)
    a, b = exactsim.kickback_level_indices(mask, oracle.n_machine_qubits)
    return exactsim.probe_marginal(exactsim.apply_level_exchange(state, a, b)).p0


def run_verification(
    max_dj_n: int = 3,
    max_bv_n: int = 6,
    tuples_per_instance: int = 100,
    mask_cases: int = 200,
    regime_cases: int = 10000,
    seed: int = 1234,
) -> VerificationReport:
    rng = np.random.default_rng(seed)
    report = VerificationReport()

    # Kickback populations, shifts, and temperatures vs the exact permutation.
    pop = _Tracker("dj-kickback-population-vs-exact", 1e-12)
    shift = _Tracker("dj-kickback-delta-vs-exact", 1e-12)
    temp = _Tracker("dj-kickback-temperature-vs-exact", 1e-12)
    partition = _Tracker("dj-log-partition-vs-direct-sum", 1e-12)
    for instance in _dj_instances(max_dj_n):
        for _ in range(tuples_per_instance):
            probe = _sample_probe(rng)
            oracle = build_dj_oracle(
                instance.function, _uniform(rng, "gap"), _uniform(rng, "gap"), _uniform(rng, "beta_m")
            )
            outcome = kickback_outcome(probe, oracle)
            state = exactsim.build_joint_state(probe, oracle)
            mask = QueryMask.all_ones(oracle.n_machine_qubits)
            a, b = exactsim.kickback_level_indices(mask, oracle.n_machine_qubits)
            exact_p0 = exactsim.probe_marginal(exactsim.apply_level_exchange(state, a, b)).p0
            exact_before = exactsim.probe_marginal(state).p0
            context = f"instance={instance.function.outputs} probe=({probe.gap:.4f},{probe.inverse_temperature:.4f})"
            pop.record(abs(outcome.p0_after - exact_p0), context)
            shift.record(abs(outcome.delta_p0 - (exact_p0 - exact_before)), context)
            if outcome.beta_after is not None:
                exact_beta = inverse_temperature_from_population(exact_p0, probe.gap)
                temp.record(abs(outcome.beta_after - exact_beta), context)
            rel = abs(math.expm1(state.log_partition_sum
                                 - (probe.log_partition_function + oracle.log_partition_function)))
            partition.record(rel, context)
    report.checks += [pop.result(), shift.result(), temp.result(), partition.result()]

    # General-mask kickback on DJ and BV oracles, plus the all-ones reduction.
    general_dj = _Tracker("general-mask-dj-vs-exact", 1e-12)
    general_bv = _Tracker("general-mask-bv-vs-exact", 1e-12)
    reduction = _Tracker("all-ones-mask-reduction", 1e-14)
    for tracker, is_bv in ((general_dj, False), (general_bv, True)):
        for _ in range(mask_cases):
            if is_bv:
                n = int(rng.integers(1, max_bv_n + 1))
                secret = "".join(str(b) for b in rng.integers(0, 2, n))
                if "1" not in secret:
                    secret = secret[:-1] + "1"
                oracle = build_bv_oracle(secret, _uniform(rng, "gamma"), _uniform(rng, "beta_m"))
            else:
                oracle = _random_dj_oracle(rng, int(rng.integers(1, max_dj_n + 1)))
            probe = _sample_probe(rng)
            n_machine = oracle.n_machine_qubits
            mask = QueryMask(tuple(int(b) for b in rng.integers(0, 2, n_machine)))
            outcome = kickback_outcome(probe, oracle, mask)
            exact_p0 = _exact_kickback_p0(probe, oracle, mask)
            error = abs(outcome.p0_after - exact_p0)
            if outcome.beta_after is not None:
                exact_beta = inverse_temperature_from_population(exact_p0, probe.gap)
                error = max(error, abs(outcome.beta_after - exact_beta))
            tracker.record(error, f"mask={mask.bits} machine={oracle.gap_vector.gaps}")
            full = QueryMask.all_ones(n_machine)
            specialized = kickback_outcome(probe, oracle, full)
            generalized = _general_mask_outcome(probe, oracle, full)
            red_err = abs(specialized.p0_after - generalized.p0_after)
            if specialized.beta_after is not None and generalized.beta_after is not None:
                red_err = max(red_err, abs(specialized.beta_after - generalized.beta_after))
            reduction.record(red_err, f"machine={oracle.gap_vector.gaps}")
    report.checks += [general_dj.result(), general_bv.result(), reduction.result()]

    # Hamming-weight readout formula vs exact, and vs the kickback path.
    hamming = _Tracker("bv-hamming-population-vs-exact", 1e-12)
    hamming_vs_kickback = _Tracker("bv-hamming-vs-kickback", 1e-14)
    for n in range(1, max_bv_n + 1):
        for _ in range(tuples_per_instance // 4 or 1):
            secret = "".join(str(b) for b in rng.integers(0, 2, n))
            instance = BVInstance.from_secret(secret)
            gamma = _uniform(rng, "gamma")
            beta_m = _uniform(rng, "beta_m")
            probe = _sample_probe(rng)
            oracle = build_bv_oracle(secret, gamma, beta_m)
            analytic = hamming_weight_population(instance, gamma, probe, beta_m)
            mask = QueryMask.all_ones(n)
            exact_p0 = _exact_kickback_p0(probe, oracle, mask)
            hamming.record(abs(analytic - exact_p0), f"secret={secret}")
            outcome = kickback_outcome(probe, oracle, mask)
            hamming_vs_kickback.record(abs(analytic - outcome.p0_after), f"secret={secret}")
    report.checks += [hamming.result(), hamming_vs_kickback.result()]

    # Mixture of swaps and single-swap marginals vs exact permutations.
    mixture = _Tracker("mixed-query-vs-exact", 1e-12)
    swap = _Tracker("swap-query-marginal-vs-exact", 1e-12)
    for _ in range(tuples_per_instance):
        n = int(rng.integers(1, min(max_dj_n, 2) + 1))
        oracle = _random_dj_oracle(rng, n)
        probe = _sample_probe(rng)
        state = exactsim.build_joint_state(probe, oracle)
        branches = [
            exactsim.probe_marginal(exactsim.apply_swap_with_machine_qubit(state, x)).p0
            for x in range(oracle.n_machine_qubits)
        ]
        if oracle.problem.function.classification.value != "other":
            analytic = mixed_input_query(probe, oracle).p0
            mixture.record(abs(analytic - float(np.mean(branches))), f"gaps={oracle.gap_vector.gaps}")
        x = int(rng.integers(0, oracle.n_machine_qubits))
        taken = swap_query(probe, oracle, x).probe
        swap.record(abs(taken.ground_population - branches[x]), f"x={x}")
    report.checks += [mixture.result(), swap.result()]

    # Regime label vs the sign of the population shift.
    regime = _Tracker("regime-sign-consistency", 0.0)
    sensitivity = _Tracker("sensitivity-closed-form-agreement", 0.0)
    well_defined = _Tracker("well-definedness-flag-consistency", 0.0)
    roundtrip = _Tracker("temperature-roundtrip", 1e-10)
    for _ in range(regime_cases):
        oracle = _random_dj_oracle(rng, int(rng.integers(1, max_dj_n + 1)))
        probe = _sample_probe(rng)
        outcome = kickback_outcome(probe, oracle)
        label = classify_regime(probe, oracle)
        if outcome.delta_p0 > 0:
            consistent = label.value == "cooling"
        elif outcome.delta_p0 < 0:
            consistent = label.value == "heating"
        else:
            consistent = label.value == "neutral"
        regime.record(0.0 if consistent else 1.0, f"label={label} delta={outcome.delta_p0:.3e}")
        ceiling = 1.0 - outcome.p0_before
        c = 0.5 * ceiling * float(rng.random()) + 0.25 * ceiling
        sens = sensitivity_check(probe, oracle, c)
        if sens.closed_form_precondition:
            sensitivity.record(0.0 if sens.tests_agree else 1.0, f"c={c:.4f}")
        flag = temperature_well_defined(outcome, probe)
        well_defined.record(
            0.0 if flag == (outcome.beta_after is not None) else 1.0,
            f"delta={outcome.delta_p0:.3e}",
        )
        if outcome.beta_after is not None:
            if 0.0 < outcome.p0_after < 1.0:
                recomputed = inverse_temperature_from_population(outcome.p0_after, probe.gap)
                roundtrip.record(abs(outcome.beta_after - recomputed), "roundtrip")
            else:
                # A finite temperature with a population outside (0, 1) is a
                # contradiction; count it as a hard mismatch.
                roundtrip.record(math.inf, f"p0_after={outcome.p0_after}")
    report.checks += [regime.result(), sensitivity.result(), well_defined.result(), roundtrip.result()]

    # Reset energetics vs the exact population-weighted energy changes.
    energy = _Tracker("reset-energy-bookkeeping", 1e-12)
    for _ in range(tuples_per_instance):
        oracle = _random_dj_oracle(rng, int(rng.integers(1, max_dj_n + 1)))
        probe = _sample_probe(rng)
        outcome = kickback_outcome(probe, oracle)
        costs = reset_costs(outcome, oracle, probe)
        state = exactsim.build_joint_state(probe, oracle)
        mask = QueryMask.all_ones(oracle.n_machine_qubits)
        a, b = exactsim.kickback_level_indices(mask, oracle.n_machine_qubits)
        after = exactsim.apply_level_exchange(state, a, b)
        machine_gain = exactsim.machine_mean_energy(after) - exactsim.machine_mean_energy(state)
        probe_gain = exactsim.probe_mean_energy(after) - exactsim.probe_mean_energy(state)
        energy.record(abs(machine_gain - costs.dissipation), "machine energy")
        energy.record(abs(probe_gain + costs.reset_work), "probe energy")
    report.checks.append(energy.result())

    # Detuning layer: eta = 1 must match the plain kickback; flip probability
    # must stay under its envelope.
    eta_one = _Tracker("detuning-eta1-vs-kickback", 1e-10)
    envelope = _Tracker("flip-probability-envelope", 1e-12)
    for _ in range(tuples_per_instance):
        oracle = _random_dj_oracle(rng, int(rng.integers(1, max_dj_n + 1)))
        probe = _sample_probe(rng)
        outcome = kickback_outcome(probe, oracle)
        detuned = detuned_probe_temperature(probe, oracle, 1.0)
        if outcome.beta_after is not None and detuned is not None:
            eta_one.record(abs(outcome.beta_after - detuned), "eta=1")
        g = float(rng.uniform(0.1, 3.0))
        delta = float(rng.uniform(-3.0, 3.0))
        t = float(rng.uniform(0.0, 20.0))
        excess = flip_probability(g, delta, t) - suppression_factor(g, delta)
        envelope.record(max(0.0, excess), f"g={g:.3f}")
    report.checks += [eta_one.result(), envelope.result()]

    # Partition function of a balanced oracle depends only on the gap multiset.
    permutation = _Tracker("balanced-partition-permutation-invariance", 1e-12)
    for n in range(1, max_dj_n + 1):
        beta_m = _uniform(rng, "beta_m")
        gap_one = _uniform(rng, "gap")
        gap_zero = _uniform(rng, "gap")
        values = [
            build_dj_oracle(inst.function, gap_one, gap_zero, beta_m).log_partition_function
            for inst in enumerate_balanced_functions(n)
        ]
        spread = max(values) - min(values)
        permutation.record(abs(spread), f"n={n}")
    report.checks.append(permutation.result())

    return report
