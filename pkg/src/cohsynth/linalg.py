"""Dense complex linear algebra over 2^N-dimensional TLS spaces.

Basis convention: index i in [0, 2^N) is read as an N-bit string whose
most-significant bit belongs to TLS 1; bit value 0 is the ground state,
bit value 1 the excited state. All entropies use the natural logarithm.
"""

from __future__ import annotations

import os
from typing import Iterable, NamedTuple

import numpy as np

from .errors import InvalidStateError, SystemSizeError

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-10
EIG_CLIP = 1e-12

_DEFAULT_MAX_TLS = 14


def max_tls() -> int:
    """Dense-simulation size cap; override with COHSYNTH_MAX_TLS."""
    return int(os.environ.get("COHSYNTH_MAX_TLS", _DEFAULT_MAX_TLS))


def check_system_size(n: int) -> None:
    """Raise SystemSizeError if an N-TLS dense computation is over the cap."""
    if n > max_tls():
        raise SystemSizeError(
            f"{n} TLS exceeds the dense-simulation cap of {max_tls()} "
            "(set COHSYNTH_MAX_TLS to raise it)"
        )


class Spectrum(NamedTuple):
    """Eigendecomposition with eigenvalues sorted in descending order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("kron expects square matrices")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("kron expects square matrices")
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Left-to-right Kronecker product; factor 0 owns the most significant bits."""
    out: np.ndarray | None = None
    for f in factors:
        out = np.asarray(f) if out is None else kron(out, f)
    if out is None:
        raise ValueError("kron_all needs at least one factor")
    return out


def bit_of(index: int | np.ndarray, tls: int, n: int):
    """Bit (0 = ground, 1 = excited) of TLS `tls` (1-based) in basis index."""
    return (index >> (n - tls)) & 1


def partial_trace(rho: np.ndarray, keep: Iterable[int], n: int) -> np.ndarray:
    """Trace out every TLS not in `keep` (1-based indices, ascending output order)."""
    rho = np.asarray(rho)
    keep_sorted = sorted(set(keep))
    if not keep_sorted:
        raise ValueError("keep must be a nonempty set of TLS indices")
    if keep_sorted[0] < 1 or keep_sorted[-1] > n:
        raise ValueError(f"TLS indices {keep_sorted} out of range 1..{n}")
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"expected a {2**n}x{2**n} matrix for n={n}")
    tensor = rho.reshape([2] * (2 * n))
    traced = 0
    for tls in range(n, 0, -1):
        if tls in keep_sorted:
            continue
        axis = tls - 1
        rem = n - traced
        tensor = np.trace(tensor, axis1=axis, axis2=axis + rem)
        traced += 1
    d = 2 ** len(keep_sorted)
    return tensor.reshape(d, d)


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    """True when m equals its conjugate transpose within tol."""
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def spectrum(rho: np.ndarray, *, density: bool = True) -> Spectrum:
    """
    Eigendecomposition of a Hermitian matrix, descending eigenvalues.

    With density=True the eigenvalues must be >= -PSD_TOL and sum to 1
    within PSD_TOL, otherwise InvalidStateError is raised.
    """
    if not is_hermitian(rho):
        raise InvalidStateError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(rho)
    order = np.argsort(w)[::-1]
    w, v = w[order].real, v[:, order]
    if density:
        if w.min() < -PSD_TOL:
            raise InvalidStateError(f"negative eigenvalue {w.min():.3e}")
        if abs(w.sum() - 1.0) > PSD_TOL:
            raise InvalidStateError(f"trace {w.sum():.12f} != 1")
    return Spectrum(w, v)


def entropy_of_probabilities(p: np.ndarray) -> float:
    """Shannon entropy -sum p ln p in nats; entries below EIG_CLIP count as 0."""
    p = np.asarray(p).real
    p = p[p > EIG_CLIP]
    return float(-(p * np.log(p)).sum()) if p.size else 0.0


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy -Tr(rho ln rho) in nats of a density matrix."""
    w, _ = spectrum(rho)
    return entropy_of_probabilities(w)


def dephase_full(rho: np.ndarray) -> np.ndarray:
    """Keep the diagonal, zero everything else."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("dephase_full expects a square matrix")
    return np.diag(np.diag(rho))


def random_density_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix on N TLS (Ginibre construction)."""
    d = 2**n
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
