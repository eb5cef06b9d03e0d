"""Quantum channels in four interconvertible representations.

A channel is validated once (complete positivity and trace preservation,
checked on its Jamiolkowski state) and is immutable afterwards; conversions
between Kraus, Liouville, Jamiolkowski and Stinespring forms are cached.

The Jamiolkowski state is normalized to unit trace, ``J = (E (x) I)|Om><Om|``
with ``|Om> = sum_i |ii> / sqrt(d_in)``, living on ``H_out (x) H_in``.
"""

from __future__ import annotations

import json

import numpy as np

from .numkit import (
    TOL,
    Tolerances,
    dagger,
    ginibre,
    partial_trace,
    reshuffle,
    unvectorize,
    vectorize,
)

__all__ = [
    "ChannelValidationError",
    "QuantumChannel",
    "identity_channel",
    "unitary_channel",
    "depolarizing_channel",
    "random_channel",
    "max_action_deviation",
]


class ChannelValidationError(ValueError):
    """Raised when a map fails the CP or TP conditions beyond tolerance."""


def _reshuffle_inv(j: np.ndarray, d_out: int, d_in: int) -> np.ndarray:
    """Inverse of :func:`noetherlab.numkit.reshuffle` for rectangular shapes."""
    return j.reshape(d_out, d_in, d_out, d_in).transpose(0, 2, 1, 3).reshape(d_out**2, d_in**2)


class QuantumChannel:
    """A CPTP map between a d_in- and a d_out-dimensional system."""

    def __init__(self, d_in: int, d_out: int, *, kraus=None, liouville=None,
                 jamiolkowski=None, stinespring=None, tol: Tolerances = TOL):
        if sum(x is not None for x in (kraus, liouville, jamiolkowski, stinespring)) != 1:
            raise ValueError("provide exactly one representation")
        self.d_in = int(d_in)
        self.d_out = int(d_out)
        self.tol = tol
        self._kraus = None
        self._liouville = None
        self._jamiolkowski = None
        self._stinespring = None
        if kraus is not None:
            ks = [np.asarray(k, dtype=complex) for k in kraus]
            if not ks or any(k.shape != (self.d_out, self.d_in) for k in ks):
                raise ValueError("Kraus operators must be d_out x d_in")
            self._kraus = ks
        elif liouville is not None:
            m = np.asarray(liouville, dtype=complex)
            if m.shape != (self.d_out**2, self.d_in**2):
                raise ValueError(f"Liouville matrix must be {self.d_out**2} x {self.d_in**2}")
            self._liouville = m
        elif jamiolkowski is not None:
            m = np.asarray(jamiolkowski, dtype=complex)
            n = self.d_out * self.d_in
            if m.shape != (n, n):
                raise ValueError(f"Jamiolkowski state must be {n} x {n}")
            self._jamiolkowski = m
        else:
            v = np.asarray(stinespring, dtype=complex)
            if v.ndim != 2 or v.shape[1] != self.d_in or v.shape[0] % self.d_out:
                raise ValueError("Stinespring isometry must be (d_out * d_env) x d_in")
            self._stinespring = v
        self._validate()

    # -- validation ---------------------------------------------------------

    def _validate(self) -> None:
        j = self.jamiolkowski
        herm = float(np.max(np.abs(j - dagger(j))))
        if herm > self.tol.tol_herm:
            raise ChannelValidationError(f"Jamiolkowski state not Hermitian (residual {herm:.2e})")
        eigs = np.linalg.eigvalsh((j + dagger(j)) / 2)
        self.cp_min_eig = float(eigs[0])
        if self.cp_min_eig < -self.tol.tol_psd:
            raise ChannelValidationError(
                f"not completely positive: min Jamiolkowski eigenvalue {self.cp_min_eig:.2e}")
        marginal = partial_trace(j, self.d_out, self.d_in, keep="A")
        self.tp_residual = float(np.max(np.abs(marginal - np.eye(self.d_in) / self.d_in)))
        if self.tp_residual > self.tol.tol_eq:
            raise ChannelValidationError(
                f"not trace preserving: marginal residual {self.tp_residual:.2e}")

    # -- representations ----------------------------------------------------

    @property
    def liouville(self) -> np.ndarray:
        if self._liouville is None:
            if self._kraus is not None:
                self._liouville = sum(np.kron(k, k.conj()) for k in self._kraus)
            elif self._stinespring is not None:
                self._liouville = sum(np.kron(k, k.conj()) for k in self.kraus)
            else:
                self._liouville = _reshuffle_inv(self._jamiolkowski, self.d_out, self.d_in) * self.d_in
        return self._liouville

    @property
    def jamiolkowski(self) -> np.ndarray:
        if self._jamiolkowski is None:
            self._jamiolkowski = reshuffle(self.liouville, self.d_out, self.d_in) / self.d_in
        return self._jamiolkowski

    @property
    def kraus(self) -> list[np.ndarray]:
        if self._kraus is None:
            if self._stinespring is not None:
                d_env = self._stinespring.shape[0] // self.d_out
                v = self._stinespring.reshape(self.d_out, d_env, self.d_in)
                self._kraus = [v[:, e, :].copy() for e in range(d_env)]
            else:
                w, vecs = np.linalg.eigh(self.jamiolkowski)
                keep = w > self.tol.tol_psd
                self._kraus = [
                    np.sqrt(self.d_in * wi) * unvectorize(vecs[:, i], self.d_out, self.d_in)
                    for i, wi in enumerate(w) if keep[i]
                ]
        return self._kraus

    @property
    def stinespring(self) -> np.ndarray:
        """Isometry V: H_in -> H_out (x) H_env built by stacking Kraus operators."""
        if self._stinespring is None:
            ks = self.kraus
            d_env = len(ks)
            v = np.zeros((self.d_out, d_env, self.d_in), dtype=complex)
            for e, k in enumerate(ks):
                v[:, e, :] = k
            self._stinespring = v.reshape(self.d_out * d_env, self.d_in)
        return self._stinespring

    @property
    def d_env(self) -> int:
        return self.stinespring.shape[0] // self.d_out

    @property
    def kraus_rank(self) -> int:
        return len(self.kraus)

    # -- action -------------------------------------------------------------

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.d_in, self.d_in):
            raise ValueError(f"state must be {self.d_in} x {self.d_in}")
        if self._kraus is not None:
            return sum(k @ rho @ dagger(k) for k in self._kraus)
        return unvectorize(self.liouville @ vectorize(rho), self.d_out)

    def apply_adjoint(self, y: np.ndarray) -> np.ndarray:
        """Heisenberg-picture action: tr(E(X) Y) = tr(X E_adj(Y))."""
        y = np.asarray(y, dtype=complex)
        if y.shape != (self.d_out, self.d_out):
            raise ValueError(f"observable must be {self.d_out} x {self.d_out}")
        if self._kraus is not None:
            return sum(dagger(k) @ y @ k for k in self._kraus)
        return unvectorize(dagger(self.liouville) @ vectorize(y), self.d_in)

    def adjoint_liouville(self) -> np.ndarray:
        return dagger(self.liouville)

    def compose(self, first: "QuantumChannel") -> "QuantumChannel":
        """The map self o first (apply ``first``, then ``self``)."""
        if first.d_out != self.d_in:
            raise ValueError("inner dimensions do not match")
        return QuantumChannel(first.d_in, self.d_out,
                              liouville=self.liouville @ first.liouville, tol=self.tol)

    def complementary(self) -> "QuantumChannel":
        """Trace out the output instead of the environment of the same dilation."""
        ks = self.kraus
        d_env = len(ks)
        stacked = np.stack(ks)  # (env, out, in)
        comp = [stacked[:, b, :] for b in range(self.d_out)]  # each d_env x d_in
        return QuantumChannel(self.d_in, d_env, kraus=comp, tol=self.tol)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self, representation: str = "kraus") -> dict:
        def enc(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]

        if representation == "kraus":
            data = [enc(k) for k in self.kraus]
        elif representation == "liouville":
            data = enc(self.liouville)
        elif representation == "jamiolkowski":
            data = enc(self.jamiolkowski)
        else:
            raise ValueError(f"unknown representation {representation!r}")
        return {"d_in": self.d_in, "d_out": self.d_out, "repr": representation, "data": data}

    @classmethod
    def from_json_dict(cls, obj: dict, tol: Tolerances = TOL) -> "QuantumChannel":
        def dec(m):
            return np.array([[complex(re, im) for re, im in row] for row in m])

        rep = obj["repr"]
        d_in, d_out = int(obj["d_in"]), int(obj["d_out"])
        if rep == "kraus":
            return cls(d_in, d_out, kraus=[dec(k) for k in obj["data"]], tol=tol)
        if rep == "liouville":
            return cls(d_in, d_out, liouville=dec(obj["data"]), tol=tol)
        if rep == "jamiolkowski":
            return cls(d_in, d_out, jamiolkowski=dec(obj["data"]), tol=tol)
        raise ValueError(f"unknown representation {rep!r}")

    def save_json(self, path, representation: str = "kraus") -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(representation), fh)

    @classmethod
    def load_json(cls, path, tol: Tolerances = TOL) -> "QuantumChannel":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh), tol=tol)

    def __repr__(self) -> str:
        return f"QuantumChannel(d_in={self.d_in}, d_out={self.d_out})"


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel(d, d, kraus=[np.eye(d)])


def unitary_channel(u: np.ndarray) -> QuantumChannel:
    u = np.asarray(u, dtype=complex)
    return QuantumChannel(u.shape[1], u.shape[0], kraus=[u])


def depolarizing_channel(d_in: int, d_out: int | None = None) -> QuantumChannel:
    """The channel sending every state to the maximally mixed output."""
    d_out = d_in if d_out is None else d_out
    j = np.eye(d_out * d_in) / (d_out * d_in)
    return QuantumChannel(d_in, d_out, jamiolkowski=j)


def random_channel(d_in: int, d_out: int, kraus_rank: int, seed) -> QuantumChannel:
    """A Haar-ish random channel from a random Stinespring isometry."""
    if d_out * kraus_rank < d_in:
        raise ValueError("need d_out * kraus_rank >= d_in for an isometry")
    g = ginibre(d_out * kraus_rank, d_in, seed)
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return QuantumChannel(d_in, d_out, stinespring=q)


def max_action_deviation(a: QuantumChannel, b: QuantumChannel) -> float:
    """Largest entrywise difference of the two channels' Liouville matrices."""
    return float(np.max(np.abs(a.liouville - b.liouville)))
