"""
ifmlab/core.py

Exact single-photon state and the primitive optical elements.

A PhotonState is a short dense list of complex amplitudes over named spatial
modes plus the classical probability already split off into terminal
branches (an absorber firing, a detector click). Every element application
returns a new state; nothing is mutated in place.

Beam splitter convention (symmetric, unitary for every T):

    U = [[t, i*r],
         [i*r, t]]      t = sqrt(T), r = sqrt(1 - T)

Under this convention two splitters with t1*t2 == r1*r2 send nothing to the
first mode, which is where the dark port of a tuned Mach-Zehnder comes from.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property, singledispatch
from typing import ClassVar, Dict, Iterable, Mapping, Tuple, Union

import numpy as np

from .errors import DomainError, IncompletenessError, StructuralError

NORM_TOL = 1e-12
EXPLOSION = "explosion"


# ---------- state ----------

@dataclass(frozen=True)
class PhotonState:
    modes: Tuple[str, ...]
    amps: Tuple[complex, ...]
    terminal: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.modes)) != len(self.modes):
            raise StructuralError("duplicate mode ids: %s" % (self.modes,))
        if len(self.modes) != len(self.amps):
            raise StructuralError("got %d modes but %d amplitudes" % (len(self.modes), len(self.amps)))
        for mode, amp in zip(self.modes, self.amps):
            if not cmath.isfinite(amp):
                raise DomainError("non-finite amplitude on mode %r" % mode)
        for label, p in self.terminal.items():
            if not math.isfinite(p) or p < 0:
                raise DomainError("terminal probability for %r must be finite and >= 0, got %r" % (label, p))

    @classmethod
    def single(cls, modes: Iterable[str], input_mode: str) -> "PhotonState":
        """Photon with amplitude 1 on `input_mode` and 0 everywhere else."""
        modes = tuple(modes)
        if input_mode not in modes:
            raise StructuralError("input mode %r is not one of %s" % (input_mode, modes))
        return cls(modes, tuple(1 + 0j if m == input_mode else 0j for m in modes))

    def index(self, mode: str) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise StructuralError("unknown mode_id %r (modes: %s)" % (mode, ", ".join(self.modes))) from None

    def amp(self, mode: str) -> complex:
        return self.amps[self.index(mode)]

    def probability(self, mode: str) -> float:
        return abs(self.amp(mode)) ** 2

    def norm(self) -> float:
        """sum |amp|^2 + sum terminal; 1 for every state reachable from `single`."""
        return sum(abs(a) ** 2 for a in self.amps) + sum(self.terminal.values())

    def as_array(self) -> np.ndarray:
        return np.array(self.amps, dtype=complex)

    def replace(self, updates: Mapping[int, complex], terminal: Mapping[str, float] | None = None) -> "PhotonState":
        amps = list(self.amps)
        for i, a in updates.items():
            amps[i] = a
        return PhotonState(self.modes, tuple(amps), self.terminal if terminal is None else terminal)


# ---------- elements ----------

@dataclass(frozen=True)
class BeamSplitterElement:
    mode_a: str
    mode_b: str
    transmission: float

    kind: ClassVar[str] = "beam_splitter"

    def __post_init__(self):
        if isinstance(self.transmission, bool) or not isinstance(self.transmission, (int, float)):
            raise DomainError("beam splitter transmission must be a number, got %r" % (self.transmission,))
        if not (math.isfinite(self.transmission) and 0.0 <= self.transmission <= 1.0):
            raise DomainError("beam splitter transmission must lie in [0, 1], got %r" % self.transmission)
        if self.mode_a == self.mode_b:
            raise StructuralError("beam splitter needs two distinct modes, got %r twice" % self.mode_a)

    @classmethod
    def from_angle(cls, mode_a: str, mode_b: str, theta: float) -> "BeamSplitterElement":
        """Rotation by `theta` between the two modes: T = cos^2(theta)."""
        return cls(mode_a, mode_b, min(1.0, math.cos(theta) ** 2))

    @property
    def reflectivity(self) -> float:
        return 1.0 - self.transmission

    @cached_property
    def coefficients(self) -> Tuple[float, float]:
        return math.sqrt(self.transmission), math.sqrt(1.0 - self.transmission)

    def matrix(self) -> np.ndarray:
        t, r = self.coefficients
        return np.array([[t, 1j * r], [1j * r, t]], dtype=complex)


@dataclass(frozen=True)
class PhaseElement:
    mode: str
    phase: float

    kind: ClassVar[str] = "phase"

    def __post_init__(self):
        if not math.isfinite(self.phase):
            raise DomainError("phase must be finite, got %r" % self.phase)

    @cached_property
    def factor(self) -> complex:
        return cmath.exp(1j * self.phase)


@dataclass(frozen=True)
class AbsorberElement:
    mode: str
    present: bool = True
    outcome_label: str = EXPLOSION

    kind: ClassVar[str] = "absorber"

    def __post_init__(self):
        if not isinstance(self.present, bool):
            raise DomainError("absorber present must be true or false, got %r" % (self.present,))


Element = Union[BeamSplitterElement, PhaseElement, AbsorberElement]


# ---------- element application ----------

def apply_beam_splitter(state: PhotonState, bs: BeamSplitterElement) -> PhotonState:
    ia, ib = state.index(bs.mode_a), state.index(bs.mode_b)
    t, r = bs.coefficients
    a, b = state.amps[ia], state.amps[ib]
    return state.replace({ia: t * a + 1j * r * b, ib: 1j * r * a + t * b})


def apply_absorber(state: PhotonState, absorber: AbsorberElement) -> PhotonState:
    i = state.index(absorber.mode)
    if not absorber.present:
        return state
    amp = state.amps[i]
    if amp == 0:
        return state
    terminal = dict(state.terminal)
    terminal[absorber.outcome_label] = terminal.get(absorber.outcome_label, 0.0) + abs(amp) ** 2
    return state.replace({i: 0j}, terminal)


def apply_phase(state: PhotonState, ph: PhaseElement) -> PhotonState:
    i = state.index(ph.mode)
    return state.replace({i: state.amps[i] * ph.factor})


@singledispatch
def apply_element(element, state: PhotonState) -> PhotonState:
    raise StructuralError("unsupported element %r" % (element,))


@apply_element.register
def _(element: BeamSplitterElement, state: PhotonState) -> PhotonState:
    return apply_beam_splitter(state, element)


@apply_element.register
def _(element: PhaseElement, state: PhotonState) -> PhotonState:
    return apply_phase(state, element)


@apply_element.register
def _(element: AbsorberElement, state: PhotonState) -> PhotonState:
    return apply_absorber(state, element)


# ---------- readout ----------

@dataclass(frozen=True)
class OutcomeDistribution:
    """Outcome label -> probability, kept sorted by label, summing to 1."""

    probs: Mapping[str, float]

    def __post_init__(self):
        probs: Dict[str, float] = {}
        for label in sorted(self.probs):
            p = float(self.probs[label])
            if not math.isfinite(p) or p < 0 or p > 1 + NORM_TOL:
                raise DomainError("probability of %r must lie in [0, 1], got %r" % (label, p))
            # rounding can leave a certain outcome a few ulps above 1
            probs[label] = min(p, 1.0)
        total = sum(probs.values())
        if abs(total - 1.0) > NORM_TOL:
            raise DomainError("outcome probabilities sum to %.17g, not 1" % total)
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, label: str) -> float:
        return self.probs.get(label, 0.0)

    def __contains__(self, label: str) -> bool:
        return label in self.probs

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.probs)

    def relabel(self, mapping: Mapping[str, str]) -> "OutcomeDistribution":
        out: Dict[str, float] = {}
        for label, p in self.probs.items():
            new = mapping.get(label, label)
            out[new] = out.get(new, 0.0) + p
        return OutcomeDistribution(out)

    def as_dict(self) -> Dict[str, float]:
        return dict(self.probs)


def read_detectors(state: PhotonState, detector_map: Mapping[str, str]) -> OutcomeDistribution:
    for mode in detector_map:
        state.index(mode)
    probs = dict(state.terminal)
    for mode, amp in zip(state.modes, state.amps):
        label = detector_map.get(mode)
        if label is None:
            if amp != 0:
                raise IncompletenessError("mode %r carries amplitude but has no detector" % mode)
            continue
        probs[label] = probs.get(label, 0.0) + abs(amp) ** 2
    return OutcomeDistribution(probs)
