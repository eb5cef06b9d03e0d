"""Rotation-covariant channels between irreducible spin systems.

The convex set of such channels is a simplex whose vertices are channels
``E^L`` with Jamiolkowski state equal to the normalized projector onto the
spin-L irreducible subspace of ``H_out (x) H_in``.  Everything here is
built from exact Clebsch-Gordan data; twirling is exact block projection
(no group quadrature).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .chan import QuantumChannel
from .numkit import TOL, Tolerances, dagger, vectorize
from .su2rep import SpinJ, cg, ito_basis, spin_norm, spin_operators

__all__ = [
    "CovariantMixture",
    "KappaReport",
    "coupled_labels",
    "irrep_projector",
    "extremal_channel",
    "extremal_kraus",
    "covariant_channel",
    "covariance_residual",
    "decompose",
    "twirl",
    "scaling_coefficient",
    "scaling_vector",
    "f1_explicit",
    "polarization_factor",
    "kappa_extrema",
    "time_reversal_fidelity",
    "spin_polarization",
    "environment_spin_generators",
]


def coupled_labels(spin_in: SpinJ, spin_out: SpinJ) -> list[int]:
    """two_L labels of the irreps in H_out (x) H_in, ascending."""
    lo = abs(spin_out.two_j - spin_in.two_j)
    hi = spin_out.two_j + spin_in.two_j
    return list(range(lo, hi + 2, 2))


@dataclass(frozen=True)
class CovariantMixture:
    """Probability weights over the extremal channels E^L.

    ``weights[i]`` belongs to ``coupled_labels(spin_in, spin_out)[i]``.
    """

    spin_in: SpinJ
    spin_out: SpinJ
    weights: tuple

    def __post_init__(self):
        labels = coupled_labels(self.spin_in, self.spin_out)
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(labels),):
            raise ValueError(f"expected {len(labels)} weights, got {w.shape}")
        if np.any(w < -TOL.tol_eq) or abs(w.sum() - 1.0) > 1e-6:
            raise ValueError("weights must be a probability distribution")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @property
    def labels(self) -> list[int]:
        return coupled_labels(self.spin_in, self.spin_out)

    def items(self):
        return list(zip(self.labels, self.weights))

    @classmethod
    def pure(cls, spin_in: SpinJ, spin_out: SpinJ, two_l: int) -> "CovariantMixture":
        labels = coupled_labels(spin_in, spin_out)
        return cls(spin_in, spin_out, tuple(1.0 if l == two_l else 0.0 for l in labels))


@dataclass(frozen=True)
class KappaReport:
    """Extremal spin-polarization scaling factors and the channels reaching them."""

    kappa_minus: float
    kappa_plus: float
    two_l_minus: int
    two_l_plus: int

    def as_dict(self) -> dict:
        return {
            "kappa_minus": self.kappa_minus,
            "kappa_plus": self.kappa_plus,
            "two_L_minus": self.two_l_minus,
            "two_L_plus": self.two_l_plus,
        }


@lru_cache(maxsize=None)
def _irrep_projector_cached(two_j_in: int, two_j_out: int, two_l: int) -> np.ndarray:
    basis = ito_basis(SpinJ(two_j_in), SpinJ(two_j_out))
    vecs = [vectorize(t) for t in basis.family(two_l)]
    p = sum(np.outer(v, v.conj()) for v in vecs)
    p.setflags(write=False)
    return p


def irrep_projector(spin_in: SpinJ, spin_out: SpinJ, two_l: int) -> np.ndarray:
    """Projector onto the spin-L irrep of H_out (x) H_in under U_out (x) U_in^*."""
    if two_l not in coupled_labels(spin_in, spin_out):
        raise ValueError(f"two_l={two_l} outside the admissible ladder")
    return _irrep_projector_cached(spin_in.two_j, spin_out.two_j, two_l)


def extremal_kraus(spin_in: SpinJ, spin_out: SpinJ, two_l: int) -> list[np.ndarray]:
    """Canonical Kraus family of E^L: rescaled spin-L tensor operators,
    ordered by descending environment quantum number."""
    if two_l not in coupled_labels(spin_in, spin_out):
        raise ValueError(f"two_l={two_l} outside the admissible ladder")
    scale = np.sqrt(spin_in.dim / (two_l + 1))
    return [scale * t for t in ito_basis(spin_in, spin_out).family(two_l)]


def extremal_channel(spin_in: SpinJ, spin_out: SpinJ, two_l: int,
                     tol: Tolerances = TOL) -> QuantumChannel:
    """The extremal covariant channel E^L (Kraus rank 2L + 1)."""
    return QuantumChannel(spin_in.dim, spin_out.dim,
                          kraus=extremal_kraus(spin_in, spin_out, two_l), tol=tol)


def covariant_channel(mix: CovariantMixture, tol: Tolerances = TOL) -> QuantumChannel:
    """Assemble sum_L p_L E^L from its Jamiolkowski block weights."""
    j = sum(
        p * irrep_projector(mix.spin_in, mix.spin_out, two_l) / (two_l + 1)
        for two_l, p in mix.items()
    )
    return QuantumChannel(mix.spin_in.dim, mix.spin_out.dim, jamiolkowski=j, tol=tol)


def covariance_residual(channel: QuantumChannel, spin_in: SpinJ, spin_out: SpinJ) -> float:
    """Largest commutator norm of J(E) with the symmetry generators of
    U_out (x) U_in^* (zero iff the channel is rotation covariant)."""
    j = channel.jamiolkowski
    res = 0.0
    eye_in = np.eye(spin_in.dim)
    eye_out = np.eye(spin_out.dim)
    for g_in, g_out in zip(spin_operators(spin_in), spin_operators(spin_out)):
        gen = np.kron(g_out, eye_in) - np.kron(eye_out, g_in.conj())
        res = max(res, float(np.max(np.abs(j @ gen - gen @ j))))
    return res


def decompose(channel: QuantumChannel, spin_in: SpinJ, spin_out: SpinJ,
              tol: Tolerances = TOL) -> CovariantMixture:
    """Recover the simplex weights p_L = tr(Pi_L J(E)) of a covariant channel."""
    res = covariance_residual(channel, spin_in, spin_out)
    if res > tol.tol_eq:
        raise ValueError(f"channel is not covariant: commutator residual {res:.2e}")
    j = channel.jamiolkowski
    weights = [
        float(np.real(np.trace(irrep_projector(spin_in, spin_out, two_l) @ j)))
        for two_l in coupled_labels(spin_in, spin_out)
    ]
    weights = [max(0.0, w) for w in weights]
    return CovariantMixture(spin_in, spin_out, tuple(weights))


def twirl(channel: QuantumChannel, spin_in: SpinJ, spin_out: SpinJ,
          tol: Tolerances = TOL) -> QuantumChannel:
    """Group-average a channel onto the covariant simplex.

    Implemented exactly as a block projection of the Jamiolkowski state;
    idempotent, and the identity on covariant inputs.
    """
    j = channel.jamiolkowski
    out = np.zeros_like(j)
    for two_l in coupled_labels(spin_in, spin_out):
        p = irrep_projector(spin_in, spin_out, two_l)
        out += (np.real(np.trace(p @ j)) / (two_l + 1)) * p
    return QuantumChannel(spin_in.dim, spin_out.dim, jamiolkowski=out, tol=tol)


@lru_cache(maxsize=None)
def scaling_coefficient(two_j_in: int, two_j_out: int, two_l_chan: int, two_l: int) -> float:
    """The factor f_l(E^L) by which E^L rescales the spin-l tensor sector.

    Closed Clebsch-Gordan sum; exact up to floating conversion of exact
    square-rooted rationals.
    """
    tja, tjb = two_j_in, two_j_out
    if two_l_chan not in coupled_labels(SpinJ(tja), SpinJ(tjb)):
        raise ValueError("channel label outside the admissible ladder")
    if two_l > 2 * min(tja, tjb) or two_l % 2:
        raise ValueError("tensor sector label must be an integer <= 2 min(j_in, j_out)")
    ratio = np.sqrt((tjb + 1) / (tja + 1))
    denom = cg(tjb, tjb, two_l, 0, tjb, tjb)
    total = 0.0
    for two_s in range(-two_l_chan, two_l_chan + 2, 2):
        two_m = tjb + two_s
        if abs(two_m) > tja:
            continue
        num = cg(tja, two_m, two_l, 0, tja, two_m)
        weight = cg(tjb, tjb, two_l_chan, two_s, tja, two_m)
        total += (num / denom) * weight * weight
    return float(ratio * total)


def scaling_vector(mix: CovariantMixture) -> np.ndarray:
    """f_l of the mixture for l = 0 .. 2 min(j_in, j_out).

    Trace preservation pins f_0 to sqrt(d_in / d_out) (1 for equal spins)
    independently of the weights.
    """
    two_ls = range(0, 2 * min(mix.spin_in.two_j, mix.spin_out.two_j) + 2, 2)
    return np.array([
        sum(p * scaling_coefficient(mix.spin_in.two_j, mix.spin_out.two_j, two_lc, two_l)
            for two_lc, p in mix.items())
        for two_l in two_ls
    ])


def f1_explicit(spin_in: SpinJ, spin_out: SpinJ, two_l: int) -> float:
    """Closed form for the spin-sector coefficient f_1(E^L)."""
    if two_l not in coupled_labels(spin_in, spin_out):
        raise ValueError(f"two_l={two_l} outside the admissible ladder")
    ja, jb, l = spin_in.j, spin_out.j, two_l / 2
    pref = np.sqrt(jb * (jb + 1) * (2 * ja + 1) / (ja * (ja + 1) * (2 * jb + 1)))
    return float(pref * (ja * (ja + 1) + jb * (jb + 1) - l * (l + 1)) / (2 * jb * (jb + 1)))


def polarization_factor(spin_in: SpinJ, spin_out: SpinJ, two_l: int) -> float:
    """kappa(E^L): the isotropic factor multiplying the spin polarization vector.

    Equals ``f_1(E^L) ||J_out|| / ||J_in||``; the value is the rational
    ``(j_in(j_in+1) + j_out(j_out+1) - L(L+1)) / (2 j_in (j_in+1))``,
    computed exactly and rounded once at the interface.
    """
    if two_l not in coupled_labels(spin_in, spin_out):
        raise ValueError(f"two_l={two_l} outside the admissible ladder")
    ta, tb, tl = spin_in.two_j, spin_out.two_j, two_l
    exact = Fraction(ta * (ta + 2) + tb * (tb + 2) - tl * (tl + 2), 2 * ta * (ta + 2))
    return float(exact)


def kappa_extrema(spin_in: SpinJ, spin_out: SpinJ) -> KappaReport:
    """Smallest and largest polarization factors over the extremal channels.

    The minimum sits at L = j_in + j_out (the most inverted spin) and the
    maximum at L = |j_in - j_out|; amplification (kappa > 1) occurs only
    for j_out > j_in.
    """
    if spin_in.two_j == 0 or spin_out.two_j == 0:
        raise ValueError("polarization scaling needs both spins nonzero")
    labels = coupled_labels(spin_in, spin_out)
    kappas = {two_l: polarization_factor(spin_in, spin_out, two_l) for two_l in labels}
    lo = min(kappas, key=kappas.get)
    hi = max(kappas, key=kappas.get)
    return KappaReport(kappa_minus=kappas[lo], kappa_plus=kappas[hi],
                       two_l_minus=lo, two_l_plus=hi)


def time_reversal_fidelity(spin: SpinJ) -> float:
    """Average fidelity between the optimal spin-inversion channel's output
    and the perfectly inverted spin-coherent state: (1 + 2j) / (1 + 4j)."""
    if spin.two_j < 1:
        raise ValueError("needs two_j >= 1")
    return (1 + spin.two_j) / (1 + 2 * spin.two_j)


def spin_polarization(rho: np.ndarray, spin: SpinJ) -> np.ndarray:
    """Expectation values (in x, y, z order) of the spin operators."""
    return np.array([float(np.real(np.trace(op @ rho))) for op in spin_operators(spin)])


def environment_spin_generators(two_l: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin generators acting on the environment of the canonical dilation
    of E^L (the conjugate spin-L representation): -conj(J_k)."""
    jx, jy, jz = spin_operators(SpinJ(two_l))
    return (-jx.conj(), -jy.conj(), -jz.conj())
