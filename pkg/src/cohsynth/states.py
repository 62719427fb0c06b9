"""TLS system description, Hamiltonians and the product initial states.

Each TLS has energy gap E between ground and excited state, so a basis
string with n_e excited systems carries energy (E/2)(2 n_e - N). Product
inputs are either pure (amplitude sqrt(p) on the excited branch) or
partially dephased mixtures whose off-diagonals are shrunk by a factor
epsilon in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import InvalidStateError


@dataclass(frozen=True)
class SystemSpec:
    """Number of TLS and their common energy gap."""

    n: int
    energy_gap: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one TLS")
        linalg.check_system_size(self.n)
        if not self.energy_gap > 0:
            raise ValueError("energy gap must be positive")

    @property
    def dim(self) -> int:
        return 2**self.n


@dataclass(frozen=True)
class TlsParams:
    """Excitation probability p and dephasing survival factor epsilon of one TLS."""

    p: float
    epsilon: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon={self.epsilon} outside [0, 1]")


def uniform_params(n: int, p: float, epsilon: float = 1.0) -> list[TlsParams]:
    """N identical copies of TlsParams(p, epsilon)."""
    return [TlsParams(p, epsilon)] * n


class QuantumState:
    """
    State of N TLS, stored either as a state vector or a density matrix.

    Construct via :meth:`pure` or :meth:`mixed`. Unit norm, Hermiticity and
    unit trace are checked on construction; positivity is enforced wherever
    eigenvalues are consumed (entropies, spectra).
    """

    __slots__ = ("n", "vector", "matrix")

    def __init__(self, n: int, vector: np.ndarray | None, matrix: np.ndarray | None):
        self.n = n
        self.vector = vector
        self.matrix = matrix

    @classmethod
    def pure(cls, vector: np.ndarray, n: int, *, validate: bool = True) -> "QuantumState":
        vector = np.asarray(vector, dtype=complex)
        if vector.shape != (2**n,):
            raise InvalidStateError(f"expected a vector of length {2**n}")
        if validate:
            norm = np.linalg.norm(vector)
            if abs(norm - 1.0) > 1e-12:
                raise InvalidStateError(f"norm {norm!r} != 1 beyond 1e-12")
        return cls(n, vector, None)

    @classmethod
    def mixed(cls, matrix: np.ndarray, n: int, *, validate: bool = True) -> "QuantumState":
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (2**n, 2**n):
            raise InvalidStateError(f"expected a {2**n}x{2**n} matrix")
        if validate:
            if not linalg.is_hermitian(matrix):
                raise InvalidStateError("density matrix is not Hermitian")
            tr = np.trace(matrix).real
            if abs(tr - 1.0) > 1e-10:
                raise InvalidStateError(f"trace {tr!r} != 1 beyond 1e-10")
        return cls(n, None, matrix)

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    @property
    def dim(self) -> int:
        return 2**self.n

    def to_density_matrix(self) -> np.ndarray:
        """Density matrix form (outer product for pure states)."""
        if self.matrix is not None:
            return self.matrix
        return np.outer(self.vector, self.vector.conj())

    def populations(self) -> np.ndarray:
        """Diagonal of the density matrix as a real vector."""
        if self.is_pure:
            return np.abs(self.vector) ** 2
        return np.diag(self.matrix).real.copy()

    def marginal(self, tls: int) -> np.ndarray:
        """2x2 reduced density matrix of one TLS (1-based index)."""
        if not 1 <= tls <= self.n:
            raise ValueError(f"TLS index {tls} out of range 1..{self.n}")
        if self.is_pure:
            # group the chosen TLS axis in front, contract the rest
            t = self.vector.reshape([2] * self.n)
            t = np.moveaxis(t, tls - 1, 0).reshape(2, -1)
            return t @ t.conj().T
        return linalg.partial_trace(self.matrix, {tls}, self.n)


def hamiltonian_diagonal(spec: SystemSpec) -> np.ndarray:
    """Energies of the 2^N basis states, ordered by basis index."""
    idx = np.arange(spec.dim)
    n_excited = np.zeros(spec.dim, dtype=np.int64)
    for tls in range(1, spec.n + 1):
        n_excited += linalg.bit_of(idx, tls, spec.n)
    return (spec.energy_gap / 2.0) * (2 * n_excited - spec.n)


def hamiltonian(spec: SystemSpec) -> np.ndarray:
    """Total Hamiltonian: diagonal matrix of basis-state energies."""
    return np.diag(hamiltonian_diagonal(spec).astype(complex))


def _check_params(spec: SystemSpec, params: Sequence[TlsParams]) -> None:
    if len(params) != spec.n:
        raise ValueError(f"expected {spec.n} TlsParams, got {len(params)}")


def pure_product_state(spec: SystemSpec, params: Sequence[TlsParams]) -> QuantumState:
    """
    Product of single-TLS superpositions sqrt(p)|e> + sqrt(1-p)|g>.

    Amplitudes are real and nonnegative; any epsilon entries are ignored.
    """
    _check_params(spec, params)
    amps = np.array([1.0], dtype=complex)
    for t in params:
        single = np.array([math.sqrt(1.0 - t.p), math.sqrt(t.p)], dtype=complex)
        amps = np.kron(amps, single)
    return QuantumState.pure(amps, spec.n)


def mixed_product_state(spec: SystemSpec, params: Sequence[TlsParams]) -> QuantumState:
    """
    Product of single-TLS matrices with populations (1-p, p) in the (g, e)
    basis and off-diagonals epsilon * sqrt(p(1-p)).
    """
    _check_params(spec, params)
    rho = np.array([[1.0]], dtype=complex)
    for t in params:
        x = t.epsilon * math.sqrt(t.p * (1.0 - t.p))
        single = np.array([[1.0 - t.p, x], [x, t.p]], dtype=complex)
        rho = np.kron(rho, single)
    return QuantumState.mixed(rho, spec.n)


def binary_entropy(p: float) -> float:
    """-p ln p - (1-p) ln(1-p) in nats, with 0 ln 0 = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def initial_energy(spec: SystemSpec, p: float) -> float:
    """Energy (N E / 2)(2p - 1) of N TLS at homogeneous excitation p."""
    return 0.5 * spec.n * spec.energy_gap * (2.0 * p - 1.0)


def initial_coherence(spec: SystemSpec, p: float) -> float:
    """Coherence N h(p) of the pure product state at homogeneous p, in nats."""
    return spec.n * binary_entropy(p)
