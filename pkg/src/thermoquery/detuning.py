"""Detuned Rabi flip-flop model for the 3-bit secret-string experiment.

The machine gaps are biased by the secret: bit 0 multiplies gamma_i by 1-eps,
bit 1 by 1+eps, so the total machine transition energy misses the probe gap by
a per-secret detuning delta(s). A detuning suppresses the population transfer
of the kickback by eta = g^2/(g^2 + delta^2), the short-time envelope of the
flip-flop probability.

The post-query inverse temperature under suppression is computed by
substituting delta_p0 -> eta*delta_p0 into the verified closed form. A
variant with the machine partition function in place of the probe's in the
denominator circulates for this quantity; it is exposed as
:func:`detuned_probe_temperature_machine_denominator` so the discrepancy can
be inspected, but it does not reduce to the verified kickback temperature at
eta = 1 and is not used by the sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import IO, Sequence

from .thermal import ThermalMachineOracle, ThermalQubit, build_custom_oracle

__all__ = [
    "ExperimentConfig",
    "SweepPoint",
    "DetuningSweep",
    "flip_probability",
    "suppression_factor",
    "detuned_probe_temperature",
    "detuned_probe_temperature_machine_denominator",
    "bv3_sweep",
]

SWEEP_CSV_HEADER = "secret,beta_S,delta_s,eta,beta_S_prime"


def flip_probability(g: float, detuning: float, time: float) -> float:
    """Rabi flip-flop probability g^2/(g^2+d^2) * sin^2(sqrt(g^2+d^2)*t/2)."""
    if not g > 0.0:
        raise ValueError("coupling g must be positive")
    rabi = math.hypot(g, detuning)
    amplitude = (g / rabi) ** 2
    return amplitude * math.sin(0.5 * rabi * time) ** 2


def suppression_factor(g: float, detuning: float) -> float:
    """Short-time population-transfer envelope eta = g^2/(g^2 + d^2), in (0, 1]."""
    if not g > 0.0:
        raise ValueError("coupling g must be positive")
    return g * g / (g * g + detuning * detuning)


def _scaled_population_shift(probe: ThermalQubit, oracle: ThermalMachineOracle) -> tuple[float, float]:
    # Returns (a, Z_S * delta_p0) for the all-ones kickback.
    a = probe.inverse_temperature * probe.gap
    b = oracle.machine_inverse_temperature * oracle.gap_vector.total
    log_zf = oracle.log_partition_function
    return a, math.exp(-a - log_zf) - math.exp(-b - log_zf)


def detuned_probe_temperature(
    probe: ThermalQubit, oracle: ThermalMachineOracle, eta: float
) -> float | None:
    """Post-query inverse temperature with the population transfer scaled by eta.

    beta' = (1/omega) log((1 + eta*Z_S*delta_p0) / (e^{-beta_S*omega} - eta*Z_S*delta_p0)).
    At eta = 1 this is the undetuned kickback temperature. Returns None when
    the log argument is non-positive.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    a, shift = _scaled_population_shift(probe, oracle)
    numerator = 1.0 + eta * shift
    denominator = math.exp(-a) - eta * shift
    if numerator <= 0.0 or denominator <= 0.0:
        return None
    return (math.log(numerator) - math.log(denominator)) / probe.gap


def detuned_probe_temperature_machine_denominator(
    probe: ThermalQubit, oracle: ThermalMachineOracle, eta: float
) -> float | None:
    """Denominator variant using the machine partition function instead of the probe's.

    Disagrees with :func:`detuned_probe_temperature` whenever Z_f != Z_S, and
    does not reduce to the verified kickback temperature at eta = 1; kept only
    so the discrepancy can be inspected.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    a, shift = _scaled_population_shift(probe, oracle)
    numerator = 1.0 + eta * shift
    denominator = math.exp(oracle.log_partition_function) - eta * shift - 1.0
    if numerator <= 0.0 or denominator <= 0.0:
        return None
    return (math.log(numerator) - math.log(denominator)) / probe.gap


@dataclass(frozen=True)
class ExperimentConfig:
    """Three biased machine qubits plus a probe, all pairwise couplings via ``coupling``.

    ``bias`` is eps in the multipliers 1-eps (secret bit 0) and 1+eps (bit 1);
    eps = 0 makes every secret produce the same machine. ``probe_gap`` defaults
    to the unbiased total gap so detunings are symmetric around zero.
    """

    machine_gaps: tuple[float, float, float]
    bias: float
    coupling: float
    probe_gap: float | None = None
    machine_inverse_temperature: float = 1.0

    def __post_init__(self) -> None:
        if len(self.machine_gaps) != 3:
            raise ValueError("the experiment models exactly three machine qubits")
        if any(not g > 0.0 for g in self.machine_gaps):
            raise ValueError("machine gaps must be positive")
        if not 0.0 <= self.bias < 1.0:
            raise ValueError("bias must lie in [0, 1) so both multipliers stay positive")
        if not self.coupling > 0.0:
            raise ValueError("coupling must be positive")
        if self.probe_gap is not None and not self.probe_gap > 0.0:
            raise ValueError("probe gap must be positive")

    @property
    def omega(self) -> float:
        if self.probe_gap is not None:
            return self.probe_gap
        return float(sum(self.machine_gaps))

    def bias_multiplier(self, bit: str) -> float:
        return 1.0 + self.bias if bit == "1" else 1.0 - self.bias

    def gaps_for_secret(self, secret: str) -> tuple[float, float, float]:
        if len(secret) != 3 or any(c not in "01" for c in secret):
            raise ValueError(f"secret must be a 3-bit string, got {secret!r}")
        return tuple(
            self.bias_multiplier(bit) * gap for bit, gap in zip(secret, self.machine_gaps)
        )

    def detuning_for_secret(self, secret: str) -> float:
        return float(sum(self.gaps_for_secret(secret))) - self.omega

    def oracle_for_secret(self, secret: str) -> ThermalMachineOracle:
        return build_custom_oracle(self.gaps_for_secret(secret), self.machine_inverse_temperature)


@dataclass(frozen=True)
class SweepPoint:
    secret: str
    beta_s: float
    delta_s: float
    eta: float
    beta_s_prime: float | None


@dataclass(frozen=True)
class DetuningSweep:
    """One post-query temperature curve per secret, plus their closest approach."""

    points: tuple[SweepPoint, ...]
    beta_s_grid: tuple[float, ...]
    min_pairwise_separation: float

    def curve(self, secret: str) -> list[float | None]:
        return [p.beta_s_prime for p in self.points if p.secret == secret]

    def secrets(self) -> list[str]:
        seen: list[str] = []
        for p in self.points:
            if p.secret not in seen:
                seen.append(p.secret)
        return seen

    def to_csv(self, stream: IO[str]) -> None:
        stream.write(SWEEP_CSV_HEADER + "\n")
        for p in self.points:
            prime = "" if p.beta_s_prime is None else repr(p.beta_s_prime)
            stream.write(f"{p.secret},{p.beta_s!r},{p.delta_s!r},{p.eta!r},{prime}\n")


def _min_separation(curves: dict[str, list[float | None]]) -> float:
    secrets = sorted(curves)
    best = math.inf
    for i, si in enumerate(secrets):
        for sj in secrets[i + 1 :]:
            for vi, vj in zip(curves[si], curves[sj]):
                if vi is None or vj is None:
                    continue
                best = min(best, abs(vi - vj))
    return best if best < math.inf else math.nan


def bv3_sweep(config: ExperimentConfig, beta_s_grid: Sequence[float]) -> DetuningSweep:
    """Post-query temperature of the probe for every 3-bit secret over a probe-temperature grid.

    Pure evaluation: deterministic and seed-free. Secrets are swept in
    lexicographic order; curve separation is the smallest pointwise gap
    between any two curves, over grid points where both are defined.
    """
    grid = tuple(float(b) for b in beta_s_grid)
    if len(grid) == 0:
        raise ValueError("beta_s grid must be nonempty")
    points: list[SweepPoint] = []
    curves: dict[str, list[float | None]] = {}
    for bits in product("01", repeat=3):
        secret = "".join(bits)
        delta_s = config.detuning_for_secret(secret)
        eta = suppression_factor(config.coupling, delta_s)
        oracle = config.oracle_for_secret(secret)
        values: list[float | None] = []
        for beta_s in grid:
            probe = ThermalQubit(config.omega, beta_s)
            value = detuned_probe_temperature(probe, oracle, eta)
            values.append(value)
            points.append(SweepPoint(secret, beta_s, delta_s, eta, value))
        curves[secret] = values
    return DetuningSweep(
        points=tuple(points),
        beta_s_grid=grid,
        min_pairwise_separation=_min_separation(curves),
    )
