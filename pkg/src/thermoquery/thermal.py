"""Thermal qubits, gap vectors, and thermal-machine oracles for Boolean functions.

Units: k_B = hbar = 1. Energies are dimensionless, inverse temperatures carry
units of 1/energy, and every qubit's ground level sits at energy 0. Inverse
temperatures may be zero (maximally mixed) or negative (population inverted);
only energy gaps must be positive.

Partition functions are accumulated and stored in log-domain throughout, so
machines with exponentially many qubits never overflow or underflow.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = [
    "PureStatePopulationError",
    "Classification",
    "BooleanFunctionTable",
    "ThermalQubit",
    "GapVector",
    "DJProblem",
    "BVProblem",
    "CustomProblem",
    "ThermalMachineOracle",
    "ConditionalThermalizationTrace",
    "log1pexp",
    "logistic",
    "bits_to_index",
    "index_to_bits",
    "ground_state_population",
    "inverse_temperature_from_population",
    "build_dj_oracle",
    "build_bv_oracle",
    "build_custom_oracle",
    "prepare_via_conditional_thermalization",
    "sample_energy_measurements",
    "oracle_to_dict",
    "oracle_from_dict",
    "oracle_to_json",
    "oracle_from_json",
]


class PureStatePopulationError(ValueError):
    """A ground population of exactly 0 or 1 has no finite inverse temperature."""


def log1pexp(x: float) -> float:
    """log(1 + e^x), stable for any finite x."""
    if x > 0.0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


def logistic(x: float) -> float:
    """1 / (1 + e^{-x}), stable for any finite x."""
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def bits_to_index(bits: str) -> int:
    """Integer value of a big-endian bit string (leftmost character is the most significant bit)."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"not a bit string: {bits!r}")
    return int(bits, 2)


def index_to_bits(index: int, n: int) -> str:
    """Big-endian n-character bit string for an integer in [0, 2^n)."""
    if not 0 <= index < (1 << n):
        raise ValueError(f"index {index} out of range for {n} bits")
    return format(index, f"0{n}b")


def ground_state_population(gap: float, beta: float) -> float:
    """Ground-state population 1/(1 + e^{-beta*gap}) of a thermal qubit.

    Parameters
    ----------
    gap : positive energy splitting between the two levels.
    beta : inverse temperature; any real value is allowed.
    """
    if not gap > 0.0:
        raise ValueError(f"gap must be positive, got {gap}")
    return logistic(beta * gap)


def inverse_temperature_from_population(p0: float, gap: float) -> float:
    """Invert the ground-state population: beta = log(p0/(1-p0)) / gap.

    Exact inverse of :func:`ground_state_population`. A population of exactly
    0 or 1 corresponds to an infinite temperature parameter and raises
    :class:`PureStatePopulationError`.
    """
    if not gap > 0.0:
        raise ValueError(f"gap must be positive, got {gap}")
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"population must lie in [0, 1], got {p0}")
    if p0 == 0.0 or p0 == 1.0:
        raise PureStatePopulationError(
            f"population {p0} is a pure state; no finite inverse temperature exists"
        )
    return (math.log(p0) - math.log1p(-p0)) / gap


@dataclass(frozen=True)
class ThermalQubit:
    """Two-level system with ground energy 0 and excited energy ``gap``."""

    gap: float
    inverse_temperature: float

    def __post_init__(self) -> None:
        if not self.gap > 0.0:
            raise ValueError(f"gap must be positive, got {self.gap}")

    @property
    def ground_population(self) -> float:
        return ground_state_population(self.gap, self.inverse_temperature)

    @property
    def excited_population(self) -> float:
        return logistic(-self.inverse_temperature * self.gap)

    @property
    def log_partition_function(self) -> float:
        return log1pexp(-self.inverse_temperature * self.gap)

    @property
    def partition_function(self) -> float:
        return math.exp(self.log_partition_function)


@dataclass(frozen=True)
class GapVector:
    """Ordered machine-qubit energy gaps. Entries may be zero but not negative."""

    gaps: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.gaps) == 0:
            raise ValueError("gap vector must have at least one entry")
        if any(not (g >= 0.0 and math.isfinite(g)) for g in self.gaps):
            raise ValueError("every gap must be finite and >= 0")

    def __len__(self) -> int:
        return len(self.gaps)

    @property
    def total(self) -> float:
        """Sum of all gaps; the exponent scale of the full-machine Boltzmann factor."""
        return float(np.sum(np.asarray(self.gaps, dtype=float)))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.gaps, dtype=float)


class Classification(Enum):
    CONSTANT0 = "constant0"
    CONSTANT1 = "constant1"
    BALANCED = "balanced"
    OTHER = "other"


@dataclass(frozen=True)
class BooleanFunctionTable:
    """Truth table of an n-bit Boolean function, indexed by the big-endian input string."""

    n: int
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one input bit")
        if len(self.outputs) != (1 << self.n):
            raise ValueError(
                f"expected {1 << self.n} outputs for n={self.n}, got {len(self.outputs)}"
            )
        if any(o not in (0, 1) for o in self.outputs):
            raise ValueError("outputs must be 0/1")

    @classmethod
    def constant(cls, n: int, value: int) -> "BooleanFunctionTable":
        return cls(n, tuple([int(value)] * (1 << n)))

    @cached_property
    def classification(self) -> Classification:
        ones = sum(self.outputs)
        size = len(self.outputs)
        if ones == 0:
            return Classification.CONSTANT0
        if ones == size:
            return Classification.CONSTANT1
        if 2 * ones == size:
            return Classification.BALANCED
        return Classification.OTHER

    def value(self, x: int | str) -> int:
        idx = bits_to_index(x) if isinstance(x, str) else x
        return self.outputs[idx]


@dataclass(frozen=True)
class DJProblem:
    """Deutsch-Jozsa encoding: machine qubit x gets ``gap_one`` if f(x)=1 else ``gap_zero``."""

    function: BooleanFunctionTable
    gap_one: float
    gap_zero: float


@dataclass(frozen=True)
class BVProblem:
    """Hamming-weight encoding: machine qubit i gets gap ``secret[i] * gamma``."""

    secret: str
    gamma: float


@dataclass(frozen=True)
class CustomProblem:
    """Marker for an oracle built from an explicit gap vector."""


@dataclass(frozen=True)
class ThermalMachineOracle:
    """Product of thermal qubits at a common machine temperature, plus problem metadata.

    Stored in product form (gap vector + inverse temperature); the full
    2^N-entry population vector is only ever materialized by the exact
    simulator.
    """

    gap_vector: GapVector
    machine_inverse_temperature: float
    problem: DJProblem | BVProblem | CustomProblem

    @property
    def n_machine_qubits(self) -> int:
        return len(self.gap_vector)

    @cached_property
    def log_partition_function(self) -> float:
        beta = self.machine_inverse_temperature
        return float(sum(log1pexp(-beta * g) for g in self.gap_vector.gaps))

    def machine_qubit(self, index: int | str) -> ThermalQubit:
        """Thermal qubit at machine position ``index`` (big-endian bit string or integer)."""
        idx = bits_to_index(index) if isinstance(index, str) else index
        if not 0 <= idx < len(self.gap_vector):
            raise IndexError(f"machine index {index!r} out of range")
        gap = self.gap_vector.gaps[idx]
        if gap <= 0.0:
            raise ValueError(f"machine qubit {idx} has zero gap; it is not a valid thermal qubit")
        return ThermalQubit(gap, self.machine_inverse_temperature)


def build_dj_oracle(
    function: BooleanFunctionTable, gap_one: float, gap_zero: float, beta_m: float
) -> ThermalMachineOracle:
    """Oracle with one machine qubit per input string x, gap chosen by f(x)."""
    if not (gap_one > 0.0 and gap_zero > 0.0):
        raise ValueError("both encoding gaps must be positive")
    gaps = tuple(gap_one if out else gap_zero for out in function.outputs)
    return ThermalMachineOracle(
        GapVector(gaps), beta_m, DJProblem(function, gap_one, gap_zero)
    )


def build_bv_oracle(secret: str, gamma: float, beta_m: float) -> ThermalMachineOracle:
    """Oracle with one machine qubit per secret bit, gap secret[i]*gamma."""
    if not secret or any(c not in "01" for c in secret):
        raise ValueError(f"secret must be a nonempty bit string, got {secret!r}")
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    gaps = tuple(gamma if c == "1" else 0.0 for c in secret)
    return ThermalMachineOracle(GapVector(gaps), beta_m, BVProblem(secret, gamma))


def build_custom_oracle(gaps: Sequence[float], beta_m: float) -> ThermalMachineOracle:
    return ThermalMachineOracle(GapVector(tuple(float(g) for g in gaps)), beta_m, CustomProblem())


@dataclass(frozen=True, eq=False)
class ConditionalThermalizationTrace:
    """Record of a conditional-thermalization preparation of one machine qubit.

    ``samples`` holds the stochastic excitation bits (1 = excited);
    ``excited_probability`` is the exact thermal target they converge to.
    """

    input_bits: str
    function_output: int
    target_gap: float
    machine_inverse_temperature: float
    excited_probability: float
    samples: np.ndarray

    @property
    def qubit(self) -> ThermalQubit:
        return ThermalQubit(self.target_gap, self.machine_inverse_temperature)

    @property
    def empirical_excited_frequency(self) -> float:
        return float(np.mean(self.samples))


def prepare_via_conditional_thermalization(
    x: str,
    function: BooleanFunctionTable,
    target_gap: float,
    beta_m: float,
    rng_seed: int,
    n_samples: int = 1,
) -> ConditionalThermalizationTrace:
    """Stochastically excite a ground-state qubit toward the thermal state at ``target_gap``.

    The flip probability is the excited thermal population
    e^{-beta_m*gap} / (1 + e^{-beta_m*gap}); repeated sampling converges to the
    exact thermal marginal. The classical bit-flip map reproduces the channel
    on diagonal states, which is the only regime the model uses.
    """
    if not target_gap > 0.0:
        raise ValueError("target_gap must be positive")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    p_excited = logistic(-beta_m * target_gap)
    rng = np.random.default_rng(rng_seed)
    samples = (rng.random(n_samples) < p_excited).astype(np.uint8)
    return ConditionalThermalizationTrace(
        input_bits=x,
        function_output=function.value(x),
        target_gap=target_gap,
        machine_inverse_temperature=beta_m,
        excited_probability=p_excited,
        samples=samples,
    )


def sample_energy_measurements(qubit: ThermalQubit, n_samples: int, rng_seed: int) -> np.ndarray:
    """Draw energy-basis measurement outcomes from a thermal qubit (1 = excited)."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(rng_seed)
    return (rng.random(n_samples) < qubit.excited_population).astype(np.uint8)


def oracle_to_dict(oracle: ThermalMachineOracle) -> dict:
    beta_m = oracle.machine_inverse_temperature
    problem = oracle.problem
    if isinstance(problem, DJProblem):
        return {
            "kind": "dj",
            "n": problem.function.n,
            "outputs": list(problem.function.outputs),
            "E1": problem.gap_one,
            "E2": problem.gap_zero,
            "beta_M": beta_m,
        }
    if isinstance(problem, BVProblem):
        return {
            "kind": "bv",
            "n": len(problem.secret),
            "secret": problem.secret,
            "gamma": problem.gamma,
            "beta_M": beta_m,
        }
    return {"kind": "custom", "gaps": list(oracle.gap_vector.gaps), "beta_M": beta_m}


def oracle_from_dict(data: dict) -> ThermalMachineOracle:
    kind = data.get("kind")
    if kind == "dj":
        table = BooleanFunctionTable(int(data["n"]), tuple(int(o) for o in data["outputs"]))
        return build_dj_oracle(table, float(data["E1"]), float(data["E2"]), float(data["beta_M"]))
    if kind == "bv":
        return build_bv_oracle(str(data["secret"]), float(data["gamma"]), float(data["beta_M"]))
    if kind == "custom":
        return build_custom_oracle([float(g) for g in data["gaps"]], float(data["beta_M"]))
    raise ValueError(f"unknown oracle kind: {kind!r}")


def oracle_to_json(oracle: ThermalMachineOracle) -> str:
    return json.dumps(oracle_to_dict(oracle), sort_keys=True)


def oracle_from_json(text: str) -> ThermalMachineOracle:
    return oracle_from_dict(json.loads(text))
