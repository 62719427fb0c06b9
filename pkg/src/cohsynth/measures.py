"""Energy and coherence measures.

Coherence is always the relative entropy of coherence with respect to the
energy eigenbasis, C(rho) = S(rho_diag) - S(rho), reported in nats. Local
coherence sums the single-TLS coherences of the reduced states; mutual
coherence is their gap C - C_loc, zero on every product state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidStateError, ProtocolImpossibleError
from .states import QuantumState, SystemSpec, hamiltonian_diagonal

_CLAMP = 1e-10


def _clamp_residue(value: float, what: str) -> float:
    # floating-point residue on coherence-free states maps to exactly 0
    if value < 0.0:
        if value < -_CLAMP:
            raise InvalidStateError(f"{what} = {value!r} below -1e-10")
        return 0.0
    return value


def average_energy(state: QuantumState, h: np.ndarray) -> float:
    """Tr(rho H) for a density matrix, <psi|H|psi> for a pure state."""
    h = np.asarray(h)
    if h.shape != (state.dim, state.dim):
        raise ValueError(f"Hamiltonian shape {h.shape} does not match dim {state.dim}")
    if state.is_pure:
        value = np.vdot(state.vector, h @ state.vector)
    else:
        value = np.trace(state.matrix @ h)
    if abs(value.imag) > 1e-10:
        raise InvalidStateError(f"energy has imaginary residue {value.imag!r}")
    return float(value.real)


def _matrix_coherence(rho: np.ndarray) -> float:
    # exactly diagonal input short-circuits to 0 (spares the eigensolver
    # and its one-ulp summation-order residue)
    if np.max(np.abs(rho - np.diag(np.diag(rho)))) == 0.0:
        return 0.0
    diag_entropy = linalg.entropy_of_probabilities(np.diag(rho).real)
    return diag_entropy - linalg.von_neumann_entropy(rho)


def rel_entropy_coherence(state: QuantumState) -> float:
    """Relative entropy of coherence S(rho_diag) - S(rho), >= 0, in nats."""
    if state.is_pure:
        return _clamp_residue(
            linalg.entropy_of_probabilities(state.populations()), "coherence"
        )
    return _clamp_residue(_matrix_coherence(state.matrix), "coherence")


def local_coherence(state: QuantumState) -> float:
    """Sum of the single-TLS coherences of the reduced states."""
    total = 0.0
    for tls in range(1, state.n + 1):
        total += _matrix_coherence(state.marginal(tls))
    return _clamp_residue(total, "local coherence")


def mutual_coherence(state: QuantumState) -> float:
    """Global minus local coherence; zero for product states."""
    return rel_entropy_coherence(state) - local_coherence(state)


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """
    Quantum relative entropy Tr(rho ln rho) - Tr(rho ln sigma) in nats.

    sigma must have full support; support mismatch (singular sigma) is not
    handled and raises InvalidStateError.
    """
    w_r, v_r = linalg.spectrum(rho)
    w_s, v_s = linalg.spectrum(sigma)
    if w_s.min() <= linalg.EIG_CLIP:
        raise InvalidStateError("reference state must have full support")
    term_r = -linalg.entropy_of_probabilities(w_r)
    log_sigma = (v_s * np.log(w_s)) @ v_s.conj().T
    term_s = np.trace(rho @ log_sigma).real
    return float(term_r - term_s)


def mutual_coherence_from_relative_entropies(state: QuantumState) -> float:
    """
    Mutual coherence as the gap between two relative-entropy distances:
    distance of rho to the product of its marginals, minus the distance of
    the dephased rho to the product of the dephased marginals.

    Algebraically identical to :func:`mutual_coherence`; kept as an
    independent cross-check. Requires the marginals to be non-degenerate
    (full-support reference products).
    """
    rho = state.to_density_matrix()
    marginals = [state.marginal(t) for t in range(1, state.n + 1)]
    product = linalg.kron_all(marginals)
    product_diag = linalg.kron_all([linalg.dephase_full(m) for m in marginals])
    coherent_part = relative_entropy(rho, product)
    diagonal_part = relative_entropy(linalg.dephase_full(rho), product_diag)
    return coherent_part - diagonal_part


@dataclass(frozen=True)
class GainReport:
    """Energies, coherences and their gains for one protocol run.

    Energies are in units of the gap times the gap value (e0, ef) while
    delta_e is normalised by the gap; all coherences are in nats.
    """

    p_s: float
    e0: float
    ef: float
    c0: float
    cf: float
    c0_loc: float
    cf_loc: float
    delta_e: float
    delta_c: float
    delta_cm: float


def gain_report(
    initial: QuantumState,
    final: QuantumState,
    p_s: float,
    spec: SystemSpec,
) -> GainReport:
    """Measure both states and assemble the gain summary."""
    if initial.n != final.n or initial.n != spec.n:
        raise ValueError("initial/final/spec TLS counts differ")
    if not 0.0 < p_s <= 1.0:
        raise ProtocolImpossibleError(f"success probability {p_s!r} outside (0, 1]")
    h = np.diag(hamiltonian_diagonal(spec).astype(complex))
    e0 = average_energy(initial, h)
    ef = average_energy(final, h)
    c0 = rel_entropy_coherence(initial)
    cf = rel_entropy_coherence(final)
    c0_loc = local_coherence(initial)
    cf_loc = local_coherence(final)
    return GainReport(
        p_s=p_s,
        e0=e0,
        ef=ef,
        c0=c0,
        cf=cf,
        c0_loc=c0_loc,
        cf_loc=cf_loc,
        delta_e=(ef - e0) / spec.energy_gap,
        delta_c=cf - c0,
        delta_cm=(cf - cf_loc) - (c0 - c0_loc),
    )
