"""Time-translation covariant channels on a fixed non-degenerate spectrum.

Energies live on an integer grid, so Bohr frequencies are exact integers
and block membership is exact set arithmetic.  A channel is stored as a
family of Jamiolkowski blocks indexed by Bohr frequency; the diagonal of
the block family is the population-transfer stochastic matrix.

Input and output systems share the same dimension and spectrum.  The
rank-1-block construction below yields extremal channels but is known not
to exhaust the extreme points (some have genuinely mixed blocks); no such
claim is made here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chan import QuantumChannel
from .numkit import TOL, Tolerances, purity

__all__ = [
    "EnergySpectrum",
    "U1BlockChannel",
    "U1Stats",
    "assert_stochastic",
    "build_extremal",
    "build_dephasing",
    "u1_structure_stats",
    "optimal_unitarity_for_population",
    "u1_deviation",
]


@dataclass(frozen=True)
class EnergySpectrum:
    """Strictly increasing integer energy levels of a non-degenerate Hamiltonian."""

    levels: tuple

    def __post_init__(self):
        lv = tuple(int(x) for x in self.levels)
        if len(lv) < 1 or any(b <= a for a, b in zip(lv, lv[1:])):
            raise ValueError("levels must be strictly increasing integers")
        object.__setattr__(self, "levels", lv)

    @property
    def d(self) -> int:
        return len(self.levels)

    @property
    def width(self) -> int:
        return self.levels[-1] - self.levels[0]

    def index_of(self, energy: int) -> int | None:
        try:
            return self.levels.index(energy)
        except ValueError:
            return None

    def bohr_frequencies(self) -> list[int]:
        return sorted({em - en for em in self.levels for en in self.levels})

    def block_members(self, bohr: int) -> list[int]:
        """Output level indices m whose partner energy E_m - bohr is in the
        spectrum; the pair list defining the bohr-block basis."""
        return [m for m, em in enumerate(self.levels) if (em - bohr) in self.levels]

    def degeneracy(self) -> int:
        """g: the largest number of level pairs sharing one nonzero Bohr frequency."""
        return max(len(self.block_members(b)) for b in self.bohr_frequencies() if b != 0)


def assert_stochastic(p: np.ndarray, tol: float = TOL.tol_eq) -> None:
    p = np.asarray(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError("population matrix must be square")
    if np.any(p < -tol):
        raise ValueError("population matrix has negative entries")
    if np.max(np.abs(p.sum(axis=0) - 1.0)) > max(tol, 1e-9):
        raise ValueError("population matrix columns must sum to 1")


@dataclass(frozen=True)
class U1BlockChannel:
    """Bohr-frequency block form of a time-translation covariant channel.

    ``blocks[bohr]`` is a PSD matrix over the pair basis
    ``spectrum.block_members(bohr)``; absent keys are zero blocks.
    """

    spectrum: EnergySpectrum
    blocks: dict

    def block(self, bohr: int) -> np.ndarray:
        members = self.spectrum.block_members(bohr)
        if bohr in self.blocks:
            return np.asarray(self.blocks[bohr])
        return np.zeros((len(members), len(members)), dtype=complex)

    def population_matrix(self) -> np.ndarray:
        """P[m, n]: probability of the n-th energy eigenstate mapping to the m-th."""
        d = self.spectrum.d
        p = np.zeros((d, d))
        for bohr in self.spectrum.bohr_frequencies():
            members = self.spectrum.block_members(bohr)
            blk = self.block(bohr)
            for i, m in enumerate(members):
                n = self.spectrum.index_of(self.spectrum.levels[m] - bohr)
                p[m, n] = d * float(np.real(blk[i, i]))
        return p

    def jamiolkowski(self) -> np.ndarray:
        """Assemble the full Jamiolkowski state on H_out (x) H_in."""
        d = self.spectrum.d
        j = np.zeros((d * d, d * d), dtype=complex)
        for bohr, blk in self.blocks.items():
            members = self.spectrum.block_members(bohr)
            idx = [m * d + self.spectrum.index_of(self.spectrum.levels[m] - bohr)
                   for m in members]
            j[np.ix_(idx, idx)] += np.asarray(blk)
        return j

    def to_channel(self, tol: Tolerances = TOL) -> QuantumChannel:
        d = self.spectrum.d
        return QuantumChannel(d, d, jamiolkowski=self.jamiolkowski(), tol=tol)

    def block_purity_sum(self) -> float:
        return float(sum(purity(np.asarray(b)) for b in self.blocks.values()))


def build_extremal(spectrum: EnergySpectrum, gamma: np.ndarray,
                   phases=None) -> U1BlockChannel:
    """Coherify a stochastic matrix into a covariant channel whose blocks are
    rank-1 projectors with amplitudes sqrt(gamma) e^{i phi} / sqrt(d).

    ``phases`` maps (bohr, output_index) to a phase in radians; it may be a
    dict or an iterable of (bohr, m, radians) triples.  Missing phases are 0.
    """
    gamma = np.asarray(gamma, dtype=float)
    assert_stochastic(gamma)
    if gamma.shape[0] != spectrum.d:
        raise ValueError("population matrix size must match the spectrum")
    phase_map: dict[tuple[int, int], float] = {}
    if isinstance(phases, dict):
        phase_map = {(int(b), int(m)): float(v) for (b, m), v in phases.items()}
    elif phases is not None:
        phase_map = {(int(b), int(m)): float(v) for b, m, v in phases}

    d = spectrum.d
    blocks = {}
    for bohr in spectrum.bohr_frequencies():
        members = spectrum.block_members(bohr)
        amp = np.zeros(len(members), dtype=complex)
        for i, m in enumerate(members):
            n = spectrum.index_of(spectrum.levels[m] - bohr)
            phi = phase_map.get((bohr, m), 0.0)
            amp[i] = np.exp(1j * phi) * np.sqrt(gamma[m, n] / d)
        if np.any(np.abs(amp) > 0):
            blocks[bohr] = np.outer(amp, amp.conj())
    return U1BlockChannel(spectrum=spectrum, blocks=blocks)


def build_dephasing(spectrum: EnergySpectrum, p: float) -> U1BlockChannel:
    """Partial dephasing: populations untouched, coherences damped by 1 - p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("dephasing strength must lie in [0, 1]")
    d = spectrum.d
    block0 = ((1.0 - p) * np.ones((d, d)) + p * np.eye(d)) / d
    return U1BlockChannel(spectrum=spectrum, blocks={0: block0.astype(complex)})


@dataclass(frozen=True)
class U1Stats:
    """Structure data entering the energy-conservation trade-off bound."""

    q: dict
    g: int
    width: int
    b: float


def u1_structure_stats(ch: U1BlockChannel) -> U1Stats:
    """Per-frequency transfer weights q_bohr, the pair degeneracy g, the
    spectral width, and the bistochasticity defect b (= 1 iff bistochastic)."""
    spec = ch.spectrum
    pop = ch.population_matrix()
    q = {}
    for bohr in spec.bohr_frequencies():
        members = spec.block_members(bohr)
        q[bohr] = float(sum(
            pop[m, spec.index_of(spec.levels[m] - bohr)] for m in members))
    b = float(np.sum(pop.sum(axis=1) ** 2) / spec.d)
    return U1Stats(q=q, g=spec.degeneracy(), width=spec.width, b=b)


def optimal_unitarity_for_population(spectrum: EnergySpectrum, pop: np.ndarray) -> float:
    """Largest unitarity over covariant channels with the given population
    matrix, reached when every block is an unnormalized rank-1 projector."""
    assert_stochastic(pop)
    pop = np.asarray(pop, dtype=float)
    d = spectrum.d
    q_sq = 0.0
    for bohr in spectrum.bohr_frequencies():
        members = spectrum.block_members(bohr)
        q = sum(pop[m, spectrum.index_of(spectrum.levels[m] - bohr)] for m in members)
        q_sq += q * q
    b = float(np.sum(pop.sum(axis=1) ** 2) / d)
    return (q_sq - b) / (d * d - 1)


def u1_deviation(spectrum: EnergySpectrum, pop: np.ndarray) -> float:
    """Average total deviation from energy conservation, from the population
    matrix alone: (tr dH)^2 + tr(dH^2) over d (d + 1)."""
    assert_stochastic(pop)
    pop = np.asarray(pop, dtype=float)
    e = np.asarray(spectrum.levels, dtype=float)
    d = spectrum.d
    # diagonal of dH: sum_m P[m, n] (E_m - E_n) per input level n
    drift = pop.T @ e - e
    return float((drift.sum() ** 2 + np.sum(drift**2)) / (d * (d + 1)))
