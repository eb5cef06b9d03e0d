"""Exact SU(2) representation data.

Spin labels are stored as twice-the-spin integers so that all selection
rules are integer arithmetic.  Clebsch-Gordan coefficients are computed
exactly (big-integer factorials, Condon-Shortley phase convention) and
only converted to floating point at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .numkit import dagger, mat_exp_skew_hermitian, as_rng

__all__ = [
    "SpinJ",
    "SignedSqrtRational",
    "clebsch_gordan",
    "cg",
    "spin_operators",
    "spin_norm",
    "ItoBasis",
    "ito_basis",
    "coherent_state",
    "rotation_unitary",
    "random_rotation_vector",
]


@dataclass(frozen=True, order=True)
class SpinJ:
    """A spin label j = two_j / 2 with Hilbert-space dimension two_j + 1."""

    two_j: int

    def __post_init__(self):
        if self.two_j < 0:
            raise ValueError("two_j must be nonnegative")

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def m_values(self) -> list[int]:
        """Twice the magnetic quantum numbers, descending from +two_j."""
        return list(range(self.two_j, -self.two_j - 2, -2))


@dataclass(frozen=True)
class SignedSqrtRational:
    """An exact value of the form sign * sqrt(radicand), radicand rational >= 0."""

    sign: int
    radicand: Fraction

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.radicand < 0:
            raise ValueError("radicand must be nonnegative")
        if (self.sign == 0) != (self.radicand == 0):
            raise ValueError("sign == 0 iff radicand == 0")

    def value(self) -> float:
        return self.sign * float(self.radicand) ** 0.5

    def __float__(self) -> float:
        return self.value()

    def squared(self) -> Fraction:
        return self.radicand


_ZERO = SignedSqrtRational(0, Fraction(0))


def _check_jm(two_j: int, two_m: int, label: str) -> None:
    if two_j < 0:
        raise ValueError(f"{label}: negative two_j")
    if (two_j - two_m) % 2 != 0:
        raise ValueError(f"{label}: j and m differ by a non-integer (two_j={two_j}, two_m={two_m})")
    if abs(two_m) > two_j:
        raise ValueError(f"{label}: |m| > j (two_j={two_j}, two_m={two_m})")


@lru_cache(maxsize=None)
def clebsch_gordan(
    two_j1: int, two_m1: int, two_j2: int, two_m2: int, two_J: int, two_M: int
) -> SignedSqrtRational:
    """Exact Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.

    Arguments are twice the usual half-integer labels.  Returns zero when
    a selection rule (M = m1 + m2, triangle inequality) fails; raises on
    malformed (j, m) pairs.  Condon-Shortley phases.
    """
    _check_jm(two_j1, two_m1, "j1")
    _check_jm(two_j2, two_m2, "j2")
    _check_jm(two_J, two_M, "J")
    if two_M != two_m1 + two_m2:
        return _ZERO
    if two_J < abs(two_j1 - two_j2) or two_J > two_j1 + two_j2:
        return _ZERO
    if (two_j1 + two_j2 - two_J) % 2 != 0:
        return _ZERO

    # Integer-valued factorial arguments; names follow the Racah formula.
    def f(two_x: int) -> int:
        if two_x % 2 != 0:
            raise ValueError("internal: non-integer factorial argument")
        return factorial(two_x // 2)

    pref = Fraction(two_J + 1, 1)
    pref *= Fraction(
        f(two_j1 + two_j2 - two_J) * f(two_j1 - two_j2 + two_J) * f(-two_j1 + two_j2 + two_J),
        f(two_j1 + two_j2 + two_J + 2),
    )
    pref *= Fraction(
        f(two_J + two_M)
        * f(two_J - two_M)
        * f(two_j1 - two_m1)
        * f(two_j1 + two_m1)
        * f(two_j2 - two_m2)
        * f(two_j2 + two_m2),
        1,
    )

    # Summation limits: every factorial argument must stay nonnegative.
    k_min = max(0, two_j2 - two_J - two_m1, two_j1 - two_J + two_m2)
    k_max = min(two_j1 + two_j2 - two_J, two_j1 - two_m1, two_j2 + two_m2)
    total = Fraction(0)
    for two_k in range(k_min, k_max + 2, 2):
        den = (
            f(two_k)
            * f(two_j1 + two_j2 - two_J - two_k)
            * f(two_j1 - two_m1 - two_k)
            * f(two_j2 + two_m2 - two_k)
            * f(two_J - two_j2 + two_m1 + two_k)
            * f(two_J - two_j1 - two_m2 + two_k)
        )
        term = Fraction(1, den)
        total += -term if (two_k // 2) % 2 else term

    if total == 0:
        return _ZERO
    sign = 1 if total > 0 else -1
    return SignedSqrtRational(sign, total * total * pref)


@lru_cache(maxsize=None)
def cg(two_j1: int, two_m1: int, two_j2: int, two_m2: int, two_J: int, two_M: int) -> float:
    """Floating-point Clebsch-Gordan coefficient (memoized)."""
    return clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_J, two_M).value()


def spin_norm(spin: SpinJ) -> float:
    """sqrt(j (j+1) (2j+1)), the Hilbert-Schmidt length of the spin vector."""
    j = spin.j
    return float(np.sqrt(j * (j + 1) * (2 * j + 1)))


@lru_cache(maxsize=None)
def _spin_operators_cached(two_j: int):
    spin = SpinJ(two_j)
    d = spin.dim
    j = spin.j
    m = np.array([tm / 2 for tm in spin.m_values()])
    jz = np.diag(m).astype(complex)
    jp = np.zeros((d, d), dtype=complex)
    for i in range(1, d):
        # raising operator connects |j, m> (index i) to |j, m+1> (index i-1)
        mm = m[i]
        jp[i - 1, i] = np.sqrt(j * (j + 1) - mm * (mm + 1))
    jm = dagger(jp)
    jx = (jp + jm) / 2
    jy = (jp - jm) / (2 * 1j)
    for op in (jx, jy, jz):
        op.setflags(write=False)
    return jx, jy, jz


def spin_operators(spin: SpinJ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Angular momentum matrices (Jx, Jy, Jz) in the descending-m basis."""
    return _spin_operators_cached(spin.two_j)


@dataclass(frozen=True)
class ItoBasis:
    """Orthonormal irreducible tensor operators between two spin spaces.

    ``ops`` maps (two_l, two_m) to a d_out x d_in matrix.  For equal spins
    the operators are the standard polarization operators: l runs over
    0 .. 2j, ``T^0_0 = I / sqrt(d)`` and ``T^1_0`` is proportional to Jz.
    """

    spin_in: SpinJ
    spin_out: SpinJ
    ops: dict = field(repr=False)

    def irrep_labels(self) -> list[int]:
        return sorted({tl for tl, _ in self.ops})

    def family(self, two_l: int) -> list[np.ndarray]:
        """Operators of irrep two_l ordered by descending m."""
        return [self.ops[(two_l, tm)] for tm in range(two_l, -two_l - 2, -2)]

    def all_ops(self) -> list[np.ndarray]:
        return [self.ops[k] for k in sorted(self.ops)]


@lru_cache(maxsize=None)
def _ito_basis_cached(two_j_in: int, two_j_out: int) -> ItoBasis:
    spin_in = SpinJ(two_j_in)
    spin_out = SpinJ(two_j_out)
    d_in, d_out = spin_in.dim, spin_out.dim
    ops: dict[tuple[int, int], np.ndarray] = {}

    if two_j_in == two_j_out:
        # Wigner-Eckart construction with unit reduced element sqrt((2l+1)/d).
        two_j = two_j_in
        ms = spin_in.m_values()
        for two_l in range(0, 2 * two_j + 1, 2):
            norm = np.sqrt((two_l + 1) / (two_j + 1))
            for two_m in range(two_l, -two_l - 2, -2):
                t = np.zeros((d_in, d_in), dtype=complex)
                for r, two_mr in enumerate(ms):
                    for c, two_mc in enumerate(ms):
                        t[r, c] = cg(two_j, two_mc, two_l, two_m, two_j, two_mr)
                ops[(two_l, two_m)] = norm * t
    else:
        # Rectangular family: unvectorized coupled basis of the l-irrep in
        # H_out (x) H_in under U_out (x) U_in^*, conjugation taken entrywise
        # in the Jz basis (phases absorbed into the coupling coefficients).
        ms_out = spin_out.m_values()
        ms_in = spin_in.m_values()
        for two_l in range(abs(two_j_out - two_j_in), two_j_out + two_j_in + 2, 2):
            family = []
            for two_m in range(two_l, -two_l - 2, -2):
                t = np.zeros((d_out, d_in), dtype=complex)
                for r, two_mb in enumerate(ms_out):
                    for c, two_ma in enumerate(ms_in):
                        phase = -1.0 if ((two_j_in + two_ma) // 2) % 2 else 1.0
                        t[r, c] = phase * cg(two_j_out, two_mb, two_j_in, -two_ma, two_l, two_m)
                family.append((two_m, t))
            # canonical family sign: first nonzero entry of the top-m operator
            top = family[0][1]
            nz = top[np.abs(top) > 1e-14]
            if nz.size and np.real(nz[0]) < 0:
                family = [(tm, -t) for tm, t in family]
            for tm, t in family:
                ops[(two_l, tm)] = t

    for t in ops.values():
        t.setflags(write=False)
    return ItoBasis(spin_in=spin_in, spin_out=spin_out, ops=ops)


def ito_basis(spin_in: SpinJ, spin_out: SpinJ | None = None) -> ItoBasis:
    spin_out = spin_in if spin_out is None else spin_out
    return _ito_basis_cached(spin_in.two_j, spin_out.two_j)


def rotation_unitary(spin: SpinJ, g: np.ndarray) -> np.ndarray:
    """exp(i (g_x Jx + g_y Jy + g_z Jz)) for a rotation vector g."""
    jx, jy, jz = spin_operators(spin)
    return mat_exp_skew_hermitian(g[0] * jx + g[1] * jy + g[2] * jz)


def random_rotation_vector(seed) -> np.ndarray:
    """Haar-random SU(2) element in axis-angle form (uniform quaternion)."""
    rng = as_rng(seed)
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    angle = 2.0 * np.arctan2(np.linalg.norm(q[1:]), q[0])
    norm = np.linalg.norm(q[1:])
    axis = q[1:] / norm if norm > 1e-12 else np.array([0.0, 0.0, 1.0])
    return angle * axis


def coherent_state(spin: SpinJ, theta: float, phi: float) -> np.ndarray:
    """Spin-coherent state: |j, j> rotated so that <J . n> = j along
    n = (sin t cos p, sin t sin p, cos t).  theta = 0 returns |j, j> exactly."""
    jx, jy, _ = spin_operators(spin)
    h = -np.sin(phi) * jx + np.cos(phi) * jy
    u = mat_exp_skew_hermitian(h, -theta)
    return u[:, 0].copy()
