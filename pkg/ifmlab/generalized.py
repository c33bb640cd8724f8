"""
ifmlab/generalized.py

Interaction-free verification that a system is in a state |Psi> whose detection destroys it.

The device has two orthogonal states: |Phi1> interacts with the system,
|Phi2> does not. Interaction table:

    |Psi>  |Phi1> -> explosion
    |Psi_perp>|Phi1> -> unchanged
    |Psi>  |Phi2> -> unchanged
    |Psi_perp>|Phi2> -> unchanged

The device is prepared in |chi> = alpha|Phi1> + beta|Phi2> and read out in
the {chi, chi_perp} basis. A chi_perp click is only possible when the system
is |Psi>, and leaves it in |Psi>.

chi_perp is taken as -conj(beta)|Phi1> + conj(alpha)|Phi2>, the orthogonal
complement of chi for complex alpha as well as real.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .core import EXPLOSION, NORM_TOL, AbsorberElement, OutcomeDistribution, PhotonState, apply_absorber
from .errors import DomainError
from .networks import D1, D2

PHI1 = "phi1"
PHI2 = "phi2"
CHI = "chi"
CHI_PERP = "chi_perp"
PSI = "psi"
PSI_PERP = "psi_perp"

# chi <-> D1, chi_perp <-> D2 when the device is the photon of a Mach-Zehnder
MZ_RELABEL = {CHI: D1, CHI_PERP: D2}


@dataclass(frozen=True)
class GeneralizedIfmConfig:
    alpha: complex
    beta: complex
    system_is_psi: bool = True

    def __post_init__(self):
        alpha, beta = complex(self.alpha), complex(self.beta)
        if not (cmath.isfinite(alpha) and cmath.isfinite(beta)):
            raise DomainError("alpha and beta must be finite")
        norm = abs(alpha) ** 2 + abs(beta) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError("|alpha|^2 + |beta|^2 must be 1, got %.17g" % norm)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def chi(self) -> tuple:
        return (self.alpha, self.beta)

    @property
    def chi_perp(self) -> tuple:
        return (-self.beta.conjugate(), self.alpha.conjugate())


@dataclass(frozen=True)
class IfmResult:
    probs: OutcomeDistribution
    post_system_state_on_chi_perp: Optional[str]

    def __getitem__(self, label: str) -> float:
        return self.probs[label]


def _overlap(bra: Sequence[complex], ket: Sequence[complex]) -> complex:
    return sum(b.conjugate() * k for b, k in zip(bra, ket))


def read_in_basis(state: PhotonState, basis: Mapping[str, Sequence[complex]]) -> OutcomeDistribution:
    """Projective readout of the remaining amplitude onto an orthonormal basis."""
    probs = dict(state.terminal)
    for label, vector in basis.items():
        probs[label] = probs.get(label, 0.0) + abs(_overlap(vector, state.amps)) ** 2
    return OutcomeDistribution(probs)


def run_generalized_ifm(cfg: GeneralizedIfmConfig) -> IfmResult:
    device = PhotonState((PHI1, PHI2), cfg.chi)
    device = apply_absorber(device, AbsorberElement(PHI1, present=cfg.system_is_psi))
    dist = read_in_basis(device, {CHI: cfg.chi, CHI_PERP: cfg.chi_perp})
    probs = {EXPLOSION: 0.0, **dist.as_dict()}
    post = PSI if cfg.system_is_psi and probs[CHI_PERP] > 0 else None
    return IfmResult(OutcomeDistribution(probs), post)


def mz_as_generalized_ifm(R: float) -> GeneralizedIfmConfig:
    """Device preparation made by a first splitter of reflectivity R.

    The reflected (lower) arm is |Phi1>. Its i phase is folded into the
    definition of |Phi1>, so alpha and beta come out real.
    """
    if not (math.isfinite(R) and 0.0 <= R <= 1.0):
        raise DomainError("reflectivity R must lie in [0, 1], got %r" % R)
    return GeneralizedIfmConfig(alpha=math.sqrt(R), beta=math.sqrt(1.0 - R), system_is_psi=True)
