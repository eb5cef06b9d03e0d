"""Unitarity and conservation-law deviation functionals.

Unitarity is the Haar-average output purity with the identity component
removed; it equals 1 exactly for isometry channels.  The average total
deviation measures how much the expectation values of the symmetry
generators drift between input and output, averaged over Haar-random pure
inputs.  Both are evaluated here through exact closed forms; the Monte
Carlo definitions live in :mod:`noetherlab.mcoracle` as independent oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chan import QuantumChannel
from .numkit import dagger, purity
from .su2cov import CovariantMixture
from .su2rep import SpinJ, spin_operators

__all__ = [
    "GeneratorSet",
    "su2_generators",
    "u1_generators",
    "DeviationReport",
    "unitarity_jamiolkowski",
    "unitarity_complementary",
    "unitarity_su2_closed",
    "purity_condition_holds",
    "delta_generators",
    "deviation_avg",
    "deviation_su2_closed",
]


@dataclass(frozen=True)
class GeneratorSet:
    """Matched input/output symmetry generators (Hermitian, traceless)."""

    j_in: tuple
    j_out: tuple

    def __post_init__(self):
        if len(self.j_in) != len(self.j_out):
            raise ValueError("generator lists must have equal length")
        for ops in (self.j_in, self.j_out):
            for g in ops:
                g = np.asarray(g)
                if np.max(np.abs(g - dagger(g))) > 1e-9 or abs(np.trace(g)) > 1e-9:
                    raise ValueError("generators must be Hermitian and traceless")

    @property
    def n(self) -> int:
        return len(self.j_in)

    def norm_in_sq(self) -> float:
        """sum_k tr(J_in^k^2), the squared length of the generator vector."""
        return float(sum(np.real(np.trace(g @ g)) for g in self.j_in))


def su2_generators(spin_in: SpinJ, spin_out: SpinJ | None = None) -> GeneratorSet:
    spin_out = spin_in if spin_out is None else spin_out
    return GeneratorSet(j_in=spin_operators(spin_in), j_out=spin_operators(spin_out))


def u1_generators(levels) -> GeneratorSet:
    """Single-generator set for time-translation symmetry: the (traceless
    part of the) Hamiltonian with the given integer spectrum."""
    e = np.asarray(levels, dtype=float)
    h = np.diag(e - e.mean()).astype(complex)
    return GeneratorSet(j_in=(h,), j_out=(h,))


@dataclass(frozen=True)
class DeviationReport:
    """Average total deviation and its per-generator pieces.

    ``delta_total = (sum_k trace_terms[k] + square_terms[k]) / (d (d+1))``
    with ``trace_terms[k] = tr(dJ_k)^2`` and ``square_terms[k] = tr(dJ_k^2)``.
    """

    delta_total: float
    trace_terms: tuple
    square_terms: tuple


def unitarity_jamiolkowski(channel: QuantumChannel) -> float:
    """Unitarity from the purity of the Jamiolkowski state."""
    d = channel.d_in
    gamma_j = purity(channel.jamiolkowski)
    gamma_mix = purity(channel.apply(np.eye(d) / d))
    return d / (d * d - 1) * (d * gamma_j - gamma_mix)


def unitarity_complementary(channel: QuantumChannel) -> float:
    """Unitarity from the output purities of the channel and its complement."""
    d = channel.d_in
    mixed = np.eye(d) / d
    gamma_comp = purity(channel.complementary().apply(mixed))
    gamma_out = purity(channel.apply(mixed))
    return d / (d * d - 1) * (d * gamma_comp - gamma_out)


def unitarity_su2_closed(mix: CovariantMixture) -> float:
    """Closed form for rotation-covariant channels between spin systems."""
    d_in = mix.spin_in.dim
    d_out = mix.spin_out.dim
    s = sum(p * p / (two_l + 1) for two_l, p in mix.items())
    return (d_in**2 * s - d_in / d_out) / (d_in**2 - 1)


def purity_condition_holds(channel: QuantumChannel, slack: float = 1e-12) -> bool:
    """Whether tr(E(I/d_in)^2) >= 1/d_in, the side condition under which the
    general unitarity upper bound extends to d_out > d_in."""
    d = channel.d_in
    return purity(channel.apply(np.eye(d) / d)) >= 1.0 / d - slack


def delta_generators(channel: QuantumChannel, gens: GeneratorSet) -> list[np.ndarray]:
    """The drift operators dJ_k = E_adj(J_out^k) - J_in^k."""
    deltas = []
    for g_in, g_out in zip(gens.j_in, gens.j_out):
        g_in = np.asarray(g_in)
        g_out = np.asarray(g_out)
        if g_in.shape != (channel.d_in, channel.d_in):
            raise ValueError("input generator dimension mismatch")
        if g_out.shape != (channel.d_out, channel.d_out):
            raise ValueError("output generator dimension mismatch")
        deltas.append(channel.apply_adjoint(g_out) - g_in)
    return deltas


def deviation_avg(channel: QuantumChannel, gens: GeneratorSet) -> DeviationReport:
    """Average total deviation from the conservation laws of ``gens``."""
    d = channel.d_in
    trace_terms = []
    square_terms = []
    for dj in delta_generators(channel, gens):
        trace_terms.append(float(np.real(np.trace(dj)) ** 2))
        square_terms.append(float(np.real(np.trace(dj @ dj))))
    total = (sum(trace_terms) + sum(square_terms)) / (d * (d + 1))
    return DeviationReport(delta_total=float(total),
                           trace_terms=tuple(trace_terms),
                           square_terms=tuple(square_terms))


def deviation_su2_closed(mix: CovariantMixture) -> float:
    """Closed form of the average total deviation for covariant mixtures."""
    ja = mix.spin_in.j
    jb = mix.spin_out.j
    beta = jb * (jb + 1) - ja * (ja + 1)
    drift = beta - sum(p * (two_l / 2) * (two_l / 2 + 1) for two_l, p in mix.items())
    return float(drift**2 / (8 * ja * (ja + 1) ** 2))
