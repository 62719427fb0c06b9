"""Closed-form results for the pairwise chain on homogeneous pure inputs,
small-p approximations, and comparison formulas for the global protocol and
for optimal probabilistic distillation.

All exact sums run over the number k of ground-state TLS in a surviving
basis string. A length-n string with k grounds and no two of them adjacent
can be arranged in binomial(n-k+1, k) ways, which vanishes once k exceeds
t = n/2 (even n) or (n+1)/2 (odd n). Binomials are evaluated in exact
integer arithmetic and converted to float last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ProtocolImpossibleError


@dataclass(frozen=True)
class ApproximationBand:
    """Validity region (n <= n_max, p <= p_max) with a relative tolerance."""

    n_max: int
    p_max: float
    rel_tol: float


# bands within which the small-p formulas track the exact values
PAIRWISE_PS_EVEN_BAND = ApproximationBand(n_max=10, p_max=0.10, rel_tol=0.10)
PAIRWISE_DCM_EVEN_BAND = ApproximationBand(n_max=10, p_max=0.12, rel_tol=0.05)
GLOBAL_BANDS = {
    "ps": ApproximationBand(n_max=8, p_max=0.02, rel_tol=0.10),
    "de": ApproximationBand(n_max=8, p_max=0.08, rel_tol=0.10),
    "dc": ApproximationBand(n_max=8, p_max=0.06, rel_tol=0.10),
    "dcm": ApproximationBand(n_max=8, p_max=0.11, rel_tol=0.10),
}


def ground_count_cutoff(n: int) -> int:
    """Largest ground-state count k admitted by the chain: t = ceil(n/2) odd, n/2 even."""
    return (n + 1) // 2 if n % 2 else n // 2


def count_no_adjacent_ground(n: int, k: int) -> int:
    """Length-n binary strings with k grounds, none adjacent: binomial(n-k+1, k)."""
    if k < 0 or k > n:
        raise ValueError(f"k={k} outside 0..{n}")
    return math.comb(n - k + 1, k)


def _check_np(n: int, p: float) -> None:
    if n < 2:
        raise ValueError("need at least 2 TLS")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")


def _class_weights(n: int, p: float) -> list[tuple[int, float]]:
    """(multiplicity, single-string weight p^(n-k) (1-p)^k) for k = 0..t."""
    return [
        (count_no_adjacent_ground(n, k), p ** (n - k) * (1.0 - p) ** k)
        for k in range(ground_count_cutoff(n) + 1)
    ]


def ps_exact(n: int, p: float) -> float:
    """Success probability of the pairwise chain; 0 at p = 0, 1 at p = 1."""
    _check_np(n, p)
    return float(sum(c * w for c, w in _class_weights(n, p)))


def ef_exact(n: int, p: float, energy_gap: float = 1.0) -> float:
    """Mean energy of the conditional final state."""
    _check_np(n, p)
    if p == 0.0:
        raise ProtocolImpossibleError("final state undefined at p = 0")
    ps = ps_exact(n, p)
    total = sum(
        c * (n - 2 * k) * w for k, (c, w) in enumerate(_class_weights(n, p))
    )
    return energy_gap * total / (2.0 * ps)


def cf_exact(n: int, p: float) -> float:
    """Coherence of the conditional final state in nats."""
    _check_np(n, p)
    if p == 0.0:
        raise ProtocolImpossibleError("final state undefined at p = 0")
    ps = ps_exact(n, p)
    out = 0.0
    for c, w in _class_weights(n, p):
        q = w / ps
        if q > 0.0:
            out -= c * q * math.log(q)
    return out


def approx_ps(n: int, p: float) -> float:
    """Small-p success probability: p^((n-1)/2) odd, (n/2+1) p^(n/2) even."""
    _check_np(n, p)
    if n % 2:
        return p ** ((n - 1) / 2.0)
    return (n / 2.0 + 1.0) * p ** (n / 2.0)


def approx_de(n: int, p: float) -> float:
    """Small-p energy gain: (n-1)/2 odd, n/2 - n(20-n)p/24 even."""
    _check_np(n, p)
    if n % 2:
        return (n - 1) / 2.0
    return n / 2.0 - n * (20.0 - n) * p / 24.0


def approx_dc(n: int, p: float) -> float:
    """Small-p coherence gain; the even branch tends to ln(n/2 + 1)."""
    _check_np(n, p)
    ramp = (1.0 - math.log(p)) * p
    if n % 2:
        return (n - 1) * (n - 3) / 8.0 * ramp
    return math.log(n / 2.0 + 1.0) - n * (20.0 - n) / 24.0 * ramp


def approx_dcm(n: int, p: float) -> float:
    """Small-p mutual-coherence gain; even n only."""
    _check_np(n, p)
    if n % 2:
        raise ValueError("mutual-coherence approximation exists for even n only")
    ramp = (1.0 - math.log(p)) * p
    local_term = math.log(1.5 * math.factorial(n // 2 + 1)) * p
    return math.log(n / 2.0 + 1.0) + n * (n + 4.0) / 24.0 * ramp - local_term


@dataclass(frozen=True)
class GlobalApprox:
    """Small-p behaviour of the global (remove |g...g> only) protocol."""

    ps: float
    de: float
    dc: float
    dcm: float | None  # undefined at n = 2


def global_approx(n: int, p: float) -> GlobalApprox:
    """Success probability and gains of the global protocol for small p."""
    _check_np(n, p)
    ramp = (1.0 - math.log(p)) * p
    dcm = None
    if n >= 3:
        dcm = (
            math.log(n)
            + (n - 1) / 2.0 * ramp
            - (n - 1) ** 2 / (n - 2.0) * math.log(n - 1.0) * p
        )
    return GlobalApprox(
        ps=n * p,
        de=1.0 - (n + 1.0) * p / 2.0,
        dc=math.log(n) - (n + 1.0) / 2.0 * ramp,
        dcm=dcm,
    )


@dataclass(frozen=True)
class OptimalComparison:
    """Optimal distillation towards the maximally coherent state: its
    coherence gain and success probability on the same product input."""

    dc_opt: float
    ps_opt: float


def optimal_comparison(n: int, p: float) -> OptimalComparison:
    """dc_opt = n (ln 2 - p(1 - ln p)), ps_opt = (2p)^n, valid for p < 1/2."""
    if n < 2:
        raise ValueError("need at least 2 TLS")
    if not 0.0 < p < 0.5:
        raise ValueError(f"p={p} outside (0, 0.5)")
    return OptimalComparison(
        dc_opt=n * (math.log(2.0) - p * (1.0 - math.log(p))),
        ps_opt=(2.0 * p) ** n,
    )
