import io
import math
from itertools import product

import numpy as np
import pytest

from conftest import reference_joint_populations
from thermoquery.exactsim import (
    apply_level_exchange,
    apply_swap_with_machine_qubit,
    build_joint_state,
    dump_populations_csv,
    kickback_level_indices,
    machine_mean_energy,
    probe_mean_energy,
    probe_marginal,
)
from thermoquery.query import QueryMask, kickback_outcome, reset_costs
from thermoquery.thermal import (
    BooleanFunctionTable,
    ThermalQubit,
    build_custom_oracle,
    build_dj_oracle,
)

BALANCED_1BIT = BooleanFunctionTable(1, (0, 1))


def worked_state():
    probe = ThermalQubit(1.0, 0.0)
    oracle = build_dj_oracle(BALANCED_1BIT, 1.0, 0.5, 1.0)
    return probe, oracle, build_joint_state(probe, oracle)


class TestBuildJointState:
    def test_infinite_temperature_is_uniform(self):
        probe = ThermalQubit(1.0, 0.0)
        oracle = build_custom_oracle([0.7], 0.0)
        state = build_joint_state(probe, oracle)
        assert state.size == 4
        assert np.allclose(state.populations, 0.25, atol=1e-15)

    def test_populations_match_reference_products(self):
        probe, oracle, state = worked_state()
        reference = reference_joint_populations(probe, oracle)
        for (s_bit, machine), expected in reference.items():
            index = (s_bit << 2) | (machine[0] << 1) | machine[1]
            assert state.populations[index] == pytest.approx(expected, abs=1e-14)

    def test_normalization(self):
        _, _, state = worked_state()
        assert float(state.populations.sum()) == pytest.approx(1.0, abs=1e-12)
        assert np.all(state.populations >= 0.0)

    def test_partition_sum_is_product_of_partition_functions(self):
        probe = ThermalQubit(0.8, 0.6)
        oracle = build_dj_oracle(BooleanFunctionTable(2, (0, 1, 1, 0)), 1.3, 0.4, 0.9)
        state = build_joint_state(probe, oracle)
        expected = probe.log_partition_function + oracle.log_partition_function
        assert state.log_partition_sum == pytest.approx(expected, abs=1e-12)

    def test_gibbs_ordering_at_common_temperature(self):
        beta = 0.8
        probe = ThermalQubit(1.0, beta)
        oracle = build_custom_oracle([0.3, 1.1, 0.6], beta)
        state = build_joint_state(probe, oracle)
        order = np.argsort(state.level_energies)
        sorted_pops = state.populations[order]
        assert np.all(np.diff(sorted_pops) <= 1e-15)

    def test_size_limit(self):
        oracle = build_custom_oracle([1.0] * 20, 1.0)
        with pytest.raises(ValueError):
            build_joint_state(ThermalQubit(1.0, 0.5), oracle)
        build_joint_state(ThermalQubit(1.0, 0.5), oracle, max_qubits=21)

    def test_fresh_marginal_is_initial_probe(self):
        probe = ThermalQubit(1.4, -0.7)
        oracle = build_dj_oracle(BooleanFunctionTable(2, (0, 1, 0, 1)), 0.9, 0.4, 1.2)
        state = build_joint_state(probe, oracle)
        assert probe_marginal(state).p0 == pytest.approx(probe.ground_population, abs=1e-14)


class TestLevelExchange:
    def test_swap_and_restore(self):
        _, _, state = worked_state()
        once = apply_level_exchange(state, 1, 6)
        twice = apply_level_exchange(once, 1, 6)
        assert np.array_equal(twice.populations, state.populations)
        assert once.populations[1] == state.populations[6]

    def test_trace_preserved(self):
        _, _, state = worked_state()
        after = apply_level_exchange(state, 0, 7)
        assert float(after.populations.sum()) == pytest.approx(
            float(state.populations.sum()), abs=1e-14
        )

    def test_identical_indices_rejected(self):
        _, _, state = worked_state()
        with pytest.raises(ValueError):
            apply_level_exchange(state, 3, 3)

    def test_out_of_range(self):
        _, _, state = worked_state()
        with pytest.raises(IndexError):
            apply_level_exchange(state, 0, 8)

    def test_full_mask_exchange_matches_closed_form(self):
        probe, oracle, state = worked_state()
        level_a, level_b = kickback_level_indices(QueryMask.all_ones(2), 2)
        assert (level_a, level_b) == (0b011, 0b100)
        after = apply_level_exchange(state, level_a, level_b)
        zs = 2.0
        zf = (1.0 + math.exp(-1.0)) * (1.0 + math.exp(-0.5))
        expected = (1.0 + (1.0 - math.exp(-1.5)) / zf) / zs
        assert probe_marginal(after).p0 == pytest.approx(expected, abs=1e-12)

    def test_random_masks_match_reference(self, rng):
        probe = ThermalQubit(1.2, 0.4)
        oracle = build_dj_oracle(BooleanFunctionTable(2, (0, 1, 1, 0)), 1.1, 0.6, 0.8)
        state = build_joint_state(probe, oracle)
        from conftest import reference_kickback_ground_population

        for _ in range(10):
            bits = tuple(int(b) for b in rng.integers(0, 2, 4))
            a, b = kickback_level_indices(QueryMask(bits), 4)
            after = apply_level_exchange(state, a, b)
            expected = reference_kickback_ground_population(probe, oracle, bits)
            assert probe_marginal(after).p0 == pytest.approx(expected, abs=1e-13)


class TestSwapWithMachineQubit:
    def test_marginal_is_machine_qubit(self):
        probe, oracle, state = worked_state()
        after = apply_swap_with_machine_qubit(state, 1)
        expected = ThermalQubit(1.0, 1.0).ground_population  # f(1)=1 -> gap E1 at beta_M
        assert probe_marginal(after).p0 == pytest.approx(expected, abs=1e-14)

    def test_identical_parties_leave_state_unchanged(self):
        probe = ThermalQubit(0.9, 0.7)
        oracle = build_custom_oracle([0.9, 1.4], 0.7)
        state = build_joint_state(probe, oracle)
        after = apply_swap_with_machine_qubit(state, 0)
        assert np.allclose(after.populations, state.populations, atol=1e-15)

    def test_double_application_restores(self):
        _, _, state = worked_state()
        twice = apply_swap_with_machine_qubit(apply_swap_with_machine_qubit(state, 0), 0)
        assert np.array_equal(twice.populations, state.populations)

    def test_out_of_range(self):
        _, _, state = worked_state()
        with pytest.raises(IndexError):
            apply_swap_with_machine_qubit(state, 2)


class TestEnergyBookkeeping:
    def test_resonant_exchange_conserves_total_energy(self):
        # omega equals |G|: the exchanged levels are degenerate in energy.
        probe = ThermalQubit(1.5, 0.4)
        oracle = build_custom_oracle([1.0, 0.5], 0.9)
        state = build_joint_state(probe, oracle)
        a, b = kickback_level_indices(QueryMask.all_ones(2), 2)
        after = apply_level_exchange(state, a, b)
        before_total = probe_mean_energy(state) + machine_mean_energy(state)
        after_total = probe_mean_energy(after) + machine_mean_energy(after)
        assert after_total == pytest.approx(before_total, abs=1e-14)

    def test_reset_costs_match_population_weighted_changes(self):
        probe = ThermalQubit(1.0, 0.3)
        oracle = build_dj_oracle(BooleanFunctionTable(2, (1, 0, 0, 1)), 1.2, 0.5, 0.8)
        outcome = kickback_outcome(probe, oracle)
        costs = reset_costs(outcome, oracle, probe)
        state = build_joint_state(probe, oracle)
        a, b = kickback_level_indices(QueryMask.all_ones(4), 4)
        after = apply_level_exchange(state, a, b)
        assert machine_mean_energy(after) - machine_mean_energy(state) == pytest.approx(
            costs.dissipation, abs=1e-12
        )
        assert probe_mean_energy(after) - probe_mean_energy(state) == pytest.approx(
            -costs.reset_work, abs=1e-12
        )


class TestMarginalAndDump:
    def test_uniform_marginal(self):
        state = build_joint_state(ThermalQubit(1.0, 0.0), build_custom_oracle([0.7], 0.0))
        marginal = probe_marginal(state)
        assert marginal.p0 == pytest.approx(0.5, abs=1e-15)

    def test_dump_csv(self):
        _, _, state = worked_state()
        buffer = io.StringIO()
        dump_populations_csv(state, buffer)
        lines = buffer.getvalue().strip().splitlines()
        assert lines[0] == "index,bitstring,energy,population"
        assert len(lines) == 9
        populations = [float(line.split(",")[3]) for line in lines[1:]]
        assert sum(populations) == pytest.approx(1.0, abs=1e-12)
        assert lines[1].split(",")[1] == "000"

    def test_dump_bitstrings_match_indices(self):
        _, _, state = worked_state()
        buffer = io.StringIO()
        dump_populations_csv(state, buffer)
        for line in buffer.getvalue().strip().splitlines()[1:]:
            index, bits, _, _ = line.split(",")
            assert int(bits, 2) == int(index)
