"""Dense complex linear algebra primitives shared by all channel modules.

Conventions used throughout the package:

* operators are plain complex numpy arrays in the computational basis,
* ``vectorize`` stacks rows, i.e. ``|i><j|  ->  |i> (x) |j>``,
* bipartite objects order the tensor factors output-before-input
  (``B (x) A``), so a channel's Jamiolkowski state lives on ``H_B (x) H_A``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "TOL",
    "dagger",
    "vectorize",
    "unvectorize",
    "reshuffle",
    "partial_trace",
    "purity",
    "fidelity",
    "is_hermitian",
    "is_psd",
    "assert_pure_state",
    "assert_density_matrix",
    "as_rng",
    "haar_pure",
    "haar_unitary",
    "ginibre",
    "mat_exp_skew_hermitian",
    "thread_count",
    "parallel_map",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances for validity checks (all in [0, 1e-3])."""

    tol_herm: float = 1e-9
    tol_trace: float = 1e-10
    tol_psd: float = 1e-9
    tol_norm: float = 1e-9
    tol_eq: float = 1e-9

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not 0.0 <= value <= 1e-3:
                raise ValueError(f"{name}={value} outside [0, 1e-3]")


#: Package-wide default tolerances.
TOL = Tolerances()


def dagger(x: np.ndarray) -> np.ndarray:
    return x.conj().T


def vectorize(x: np.ndarray) -> np.ndarray:
    """Row-stacking vectorization: ``|i><j| -> |i>(x)|j>``.

    With this convention ``<vectorize(X), vectorize(Y)> = tr(X^dag Y)``.
    """
    return np.asarray(x).reshape(-1)


def unvectorize(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    cols = rows if cols is None else cols
    return np.asarray(v).reshape(rows, cols)


def reshuffle(m: np.ndarray, d_b: int, d_a: int) -> np.ndarray:
    """Index permutation ``|ab><cd| -> |ac><bd|`` on a (d_b^2) x (d_a^2) matrix.

    Maps a superoperator matrix (row pair in B, column pair in A) to the
    corresponding bipartite operator on ``H_B (x) H_A`` and is an involution
    when ``d_a == d_b``.  No normalization is applied.
    """
    m = np.asarray(m)
    if m.shape != (d_b * d_b, d_a * d_a):
        raise ValueError(f"expected shape {(d_b**2, d_a**2)}, got {m.shape}")
    return m.reshape(d_b, d_b, d_a, d_a).transpose(0, 2, 1, 3).reshape(d_b * d_a, d_b * d_a)


def partial_trace(m: np.ndarray, d_b: int, d_a: int, keep: str) -> np.ndarray:
    """Partial trace of an operator on ``H_B (x) H_A``.

    ``keep="B"`` traces out A and returns a d_b x d_b matrix; ``keep="A"``
    traces out B.  The total trace is preserved.
    """
    m = np.asarray(m)
    if m.shape != (d_b * d_a, d_b * d_a):
        raise ValueError(f"expected shape {(d_b * d_a, d_b * d_a)}, got {m.shape}")
    t = m.reshape(d_b, d_a, d_b, d_a)
    if keep == "B":
        return np.einsum("iaja->ij", t)
    if keep == "A":
        return np.einsum("iaib->ab", t)
    raise ValueError("keep must be 'B' or 'A'")


def purity(rho: np.ndarray) -> float:
    """tr(rho^2) of a Hermitian operator."""
    rho = np.asarray(rho)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dagger(v)


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity ``tr(sqrt(sqrt(rho) sigma sqrt(rho)))^2``."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ValueError("fidelity requires equal-dimension states")
    s = _psd_sqrt(rho)
    w = np.linalg.eigvalsh(s @ sigma @ s)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


def is_hermitian(x: np.ndarray, tol: float = TOL.tol_herm) -> bool:
    return bool(np.max(np.abs(x - dagger(x))) <= tol)


def is_psd(x: np.ndarray, tol: float = TOL.tol_psd) -> bool:
    return bool(np.min(np.linalg.eigvalsh((x + dagger(x)) / 2)) >= -tol)


def assert_pure_state(v: np.ndarray, tol: Tolerances = TOL) -> None:
    """Raise ValueError unless v is a finite unit-norm state vector."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError(f"not a vector: shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite amplitudes")
    if abs(np.linalg.norm(v) - 1.0) > tol.tol_norm:
        raise ValueError(f"norm {np.linalg.norm(v)} != 1 within tolerance")


def assert_density_matrix(rho: np.ndarray, tol: Tolerances = TOL) -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace and PSD."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"not a square matrix: shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("non-finite entries")
    if not is_hermitian(rho, tol.tol_herm):
        raise ValueError("not Hermitian within tolerance")
    if abs(np.trace(rho) - 1.0) > tol.tol_trace:
        raise ValueError(f"trace {np.trace(rho)} != 1 within tolerance")
    if not is_psd(rho, tol.tol_psd):
        raise ValueError("negative eigenvalue beyond tolerance")


def as_rng(seed: int | np.random.Generator | np.random.SeedSequence) -> np.random.Generator:
    """Coerce an explicit 64-bit seed (or existing generator) to a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_pure(d: int, seed) -> np.ndarray:
    """A Haar-random pure state vector of dimension d (unit norm)."""
    rng = as_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def haar_pure_batch(d: int, n: int, seed) -> np.ndarray:
    """n Haar-random pure states as rows of an (n, d) array."""
    rng = as_rng(seed)
    v = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def ginibre(rows: int, cols: int, seed) -> np.ndarray:
    rng = as_rng(seed)
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def haar_unitary(d: int, seed) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase-fixed R."""
    q, r = np.linalg.qr(ginibre(d, d, seed))
    ph = np.diagonal(r).copy()
    ph /= np.abs(ph)
    return q * ph


def mat_exp_skew_hermitian(h: np.ndarray, t: float = 1.0, tol: float = TOL.tol_herm) -> np.ndarray:
    """exp(i t H) for Hermitian H, computed by eigendecomposition (unitary)."""
    h = np.asarray(h)
    if not is_hermitian(h, tol):
        raise ValueError("generator is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * t * w)) @ dagger(v)


def thread_count() -> int:
    """Worker count for sweeps; capped by the NOETHERLAB_THREADS env var."""
    env = os.environ.get("NOETHERLAB_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def parallel_map(fn, items):
    """Map fn over items on a thread pool; results in input order."""
    items = list(items)
    workers = thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
