"""Trade-off inequalities between conservation-law deviation and unitarity.

Every bound is an evaluator returning a :class:`BoundCheck` with both sides
of the inequality; constants are computed from generator norms on the fly
(never hard-coded) so rescaled generators are handled automatically.
A violated check carries its (negative) slack instead of raising, so sweeps
can log near-misses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chan import QuantumChannel
from .metrics import (
    GeneratorSet,
    deviation_avg,
    deviation_su2_closed,
    purity_condition_holds,
    unitarity_jamiolkowski,
    unitarity_su2_closed,
)
from .numkit import TOL, dagger
from .su2cov import CovariantMixture
from .u1cov import U1BlockChannel, u1_deviation, u1_structure_stats

__all__ = [
    "BoundCheck",
    "generator_covariance_residual",
    "upper_bound_general",
    "lower_bound_multiplicity_free",
    "su2_bounds",
    "u1_bound",
    "diamond_bound_given_value",
]


@dataclass(frozen=True)
class BoundCheck:
    """One evaluated inequality lhs <= rhs (within tol_eq)."""

    name: str
    lhs: float
    rhs: float
    satisfied: bool
    slack: float
    applicable: bool = True

    @classmethod
    def of(cls, name: str, lhs: float, rhs: float, applicable: bool = True,
           tol: float = TOL.tol_eq) -> "BoundCheck":
        return cls(name=name, lhs=float(lhs), rhs=float(rhs),
                   satisfied=bool(lhs <= rhs + tol), slack=float(rhs - lhs),
                   applicable=applicable)


def _trace_norm(h: np.ndarray) -> float:
    return float(np.sum(np.abs(np.linalg.eigvalsh(h))))


def _op_norm(h: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(h))))


def generator_covariance_residual(channel: QuantumChannel, gens: GeneratorSet) -> float:
    """Commutator residual of J(E) with the generators of U_out (x) U_in^*."""
    j = channel.jamiolkowski
    eye_in = np.eye(channel.d_in)
    eye_out = np.eye(channel.d_out)
    res = 0.0
    for g_in, g_out in zip(gens.j_in, gens.j_out):
        gen = np.kron(np.asarray(g_out), eye_in) - np.kron(eye_out, np.asarray(g_in).conj())
        res = max(res, float(np.max(np.abs(j @ gen - gen @ j))))
    return res


def upper_bound_general(channel: QuantumChannel, gens: GeneratorSet,
                        tol: float = TOL.tol_eq) -> BoundCheck:
    """Deviation <= 2 n d (d-1) max_k (||J_out^k||_1 + ||J_in^k||_1)^2 (1 - u).

    Holds for any covariant channel with d_out <= d_in; for d_out > d_in it
    requires the maximally-mixed output purity condition, and the check is
    flagged not-applicable when that condition fails.
    """
    res = generator_covariance_residual(channel, gens)
    if res > 100 * tol:
        raise ValueError(f"channel is not covariant: commutator residual {res:.2e}")
    applicable = True
    if channel.d_out > channel.d_in:
        applicable = purity_condition_holds(channel)
    d = channel.d_in
    norm = max(_trace_norm(np.asarray(b)) + _trace_norm(np.asarray(a))
               for a, b in zip(gens.j_in, gens.j_out))
    u = unitarity_jamiolkowski(channel)
    delta = deviation_avg(channel, gens).delta_total
    rhs = 2 * gens.n * d * (d - 1) * norm**2 * (1 - u)
    return BoundCheck.of("deviation_upper_general", delta, rhs, applicable=applicable, tol=tol)


def lower_bound_multiplicity_free(channel: QuantumChannel, gens: GeneratorSet,
                                  f_table: dict, tol: float = TOL.tol_eq) -> BoundCheck:
    """sqrt(Deviation) >= K ||J|| (1 - u) (d-1) sqrt(d+1) / (2 d^(5/2)).

    ``f_table`` maps each extremal-channel label to its Heisenberg scaling
    coefficient f(label); K = min over nontrivial labels of |1 - f|.  Valid
    for equal input/output dimensions with multiplicity-free symmetry.
    """
    if channel.d_in != channel.d_out:
        raise ValueError("lower bound needs equal input and output dimensions")
    d = channel.d_in
    k_const = min(abs(1.0 - f) for label, f in f_table.items() if label != 0)
    j_norm = np.sqrt(gens.norm_in_sq())
    u = unitarity_jamiolkowski(channel)
    delta = deviation_avg(channel, gens).delta_total
    rhs = np.sqrt(delta)
    lhs = k_const * j_norm * (1 - u) * (d - 1) * np.sqrt(d + 1) / (2 * d**2.5)
    return BoundCheck.of("sqrt_deviation_lower_multiplicity_free", lhs, rhs, tol=tol)


def su2_bounds(mix: CovariantMixture, tol: float = TOL.tol_eq) -> tuple[BoundCheck, BoundCheck]:
    """Spin-system trade-off: both bounds on sqrt(Deviation) in terms of
    1 - u, evaluated with the exact closed forms (equal spins only)."""
    if mix.spin_in != mix.spin_out:
        raise ValueError("trade-off bounds require equal input and output spins")
    j = mix.spin_in.j
    u = unitarity_su2_closed(mix)
    sqrt_delta = float(np.sqrt(deviation_su2_closed(mix)))
    lower = np.sqrt(2.0) * j**0.5 / (2 * j + 1) ** 2 * (1 - u)
    upper = 3 * np.sqrt(2.0) * j**1.5 / (2 * j + 1) * (1 - u)
    return (
        BoundCheck.of("su2_sqrt_deviation_lower", lower, sqrt_delta, tol=tol),
        BoundCheck.of("su2_sqrt_deviation_upper", sqrt_delta, upper, tol=tol),
    )


def u1_bound(ch: U1BlockChannel, tol: float = TOL.tol_eq) -> BoundCheck:
    """Energy-conservation trade-off: unitarity is capped once the channel
    moves populations, u <= 1 - g(d-g)/(d-1) sqrt(2/(d(d+1))) sqrt(Dev)/width."""
    spec = ch.spectrum
    stats = u1_structure_stats(ch)
    d = spec.d
    delta = u1_deviation(spec, ch.population_matrix())
    u = unitarity_jamiolkowski(ch.to_channel())
    rhs = 1 - stats.g * (d - stats.g) / (d - 1) * np.sqrt(2.0 / (d * (d + 1))) \
        * np.sqrt(delta) / stats.width
    return BoundCheck.of("u1_unitarity_upper", u, rhs, tol=tol)


def diamond_bound_given_value(channel: QuantumChannel, gens: GeneratorSet,
                              diamond_distance: float, tol: float = TOL.tol_eq) -> BoundCheck:
    """Deviation <= (diamond distance to a symmetric isometry)^2 times
    sum_k ||J_out^k||_inf^2, with the distance supplied by an external solver."""
    if diamond_distance < 0:
        raise ValueError("diamond distance must be nonnegative")
    delta = deviation_avg(channel, gens).delta_total
    rhs = diamond_distance**2 * sum(_op_norm(np.asarray(g)) ** 2 for g in gens.j_out)
    return BoundCheck.of("deviation_upper_diamond", delta, rhs, tol=tol)
