"""Shared fixtures and an independent reference model for cross-checking.

The reference implementation below is intentionally written with plain Python
dicts and math.exp products (no numpy, no log-domain tricks, no shared code
with the package) so that agreement with the library is meaningful.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np
import pytest

from thermoquery.thermal import ThermalMachineOracle, ThermalQubit


def reference_joint_populations(
    probe: ThermalQubit, oracle: ThermalMachineOracle
) -> dict[tuple[int, tuple[int, ...]], float]:
    """Normalized populations over (probe bit, machine bit tuple), by direct products."""
    gaps = oracle.gap_vector.gaps
    beta_m = oracle.machine_inverse_temperature
    beta_s = probe.inverse_temperature
    weights: dict[tuple[int, tuple[int, ...]], float] = {}
    for s_bit in (0, 1):
        for machine in product((0, 1), repeat=len(gaps)):
            energy = sum(b * g for b, g in zip(machine, gaps))
            weights[(s_bit, machine)] = math.exp(-beta_s * probe.gap * s_bit) * math.exp(
                -beta_m * energy
            )
    total = sum(weights.values())
    return {level: w / total for level, w in weights.items()}


def reference_kickback_ground_population(
    probe: ThermalQubit, oracle: ThermalMachineOracle, mask_bits: tuple[int, ...]
) -> float:
    """Probe ground population after exchanging |0_S, X> with |1_S, X xor 1>."""
    populations = reference_joint_populations(probe, oracle)
    level_a = (0, tuple(mask_bits))
    level_b = (1, tuple(1 - b for b in mask_bits))
    populations[level_a], populations[level_b] = populations[level_b], populations[level_a]
    return sum(p for (s_bit, _), p in populations.items() if s_bit == 0)


def reference_swap_ground_population(
    probe: ThermalQubit, oracle: ThermalMachineOracle, machine_index: int
) -> float:
    """Probe ground population after a full SWAP with one machine qubit."""
    populations = reference_joint_populations(probe, oracle)
    swapped: dict[tuple[int, tuple[int, ...]], float] = {}
    for (s_bit, machine), p in populations.items():
        new_machine = list(machine)
        new_s = new_machine[machine_index]
        new_machine[machine_index] = s_bit
        swapped[(new_s, tuple(new_machine))] = p
    return sum(p for (s_bit, _), p in swapped.items() if s_bit == 0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20251015)
