"""
ifmlab/networks.py

Interferometer specifications: an explicit ordered element list over named
modes, exact propagation to an OutcomeDistribution, the Mach-Zehnder builder
and dark-port tuning.

Mach-Zehnder layout produced by `build_mz`:

    input -> "upper"
    BS1(t1)  upper: transmitted arm  |Phi2>
             lower: reflected arm    |Phi1>   (object sits here by default)
    [phase on upper]  [absorber on the object arm]
    BS2(t2)  upper -> D2 (dark port), lower -> D1

Network documents are JSON-shaped dicts:
    {"modes": [...], "input_mode": "...",
     "elements": [{"kind": "beam_splitter", "mode_a": ..., "mode_b": ..., "transmission": ...},
                  {"kind": "phase", "mode": ..., "phase": ...},
                  {"kind": "absorber", "mode": ..., "present": ..., "outcome_label": ...}],
     "detector_map": {mode: label}}
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Mapping, Sequence, Tuple

from pydantic import ValidationError

from .core import (
    AbsorberElement,
    BeamSplitterElement,
    Element,
    OutcomeDistribution,
    PhaseElement,
    PhotonState,
    apply_element,
    read_detectors,
)
from .errors import DegenerateNetworkError, DomainError, StructuralError
from .schema import NetworkDocument

UPPER = "upper"
LOWER = "lower"
D1 = "D1"
D2 = "D2"

ELEMENT_KINDS = {cls.kind: cls for cls in (BeamSplitterElement, PhaseElement, AbsorberElement)}
# pydantic error types that mean "right type, out of range"
RANGE_ERRORS = {"greater_than_equal", "less_than_equal", "finite_number"}


class Arm(str, Enum):
    REFLECTED = "reflected"
    TRANSMITTED = "transmitted"

    @property
    def mode(self) -> str:
        return LOWER if self is Arm.REFLECTED else UPPER


def element_modes(element: Element) -> Tuple[str, ...]:
    if isinstance(element, BeamSplitterElement):
        return (element.mode_a, element.mode_b)
    return (element.mode,)


@dataclass(frozen=True)
class NetworkSpec:
    modes: Tuple[str, ...]
    input_mode: str
    elements: Tuple[Element, ...]
    detector_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "detector_map", dict(self.detector_map))
        known = set(self.modes)
        if not self.modes or len(known) != len(self.modes):
            raise StructuralError("modes must be a nonempty list of unique ids, got %s" % (self.modes,))
        if self.input_mode not in known:
            raise StructuralError("input_mode %r is not one of the modes" % self.input_mode)
        for i, element in enumerate(self.elements):
            if type(element).kind not in ELEMENT_KINDS:
                raise StructuralError("element %d is not an optical element: %r" % (i, element))
            for mode in element_modes(element):
                if mode not in known:
                    raise StructuralError("element %d (%s) uses unknown mode %r" % (i, type(element).kind, mode))
        missing = known - set(self.detector_map)
        extra = set(self.detector_map) - known
        if missing or extra:
            raise StructuralError(
                "detector_map must cover exactly the modes (missing: %s, unknown: %s)"
                % (sorted(missing), sorted(extra))
            )

    # ---------- (de)serialization ----------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "modes": list(self.modes),
            "input_mode": self.input_mode,
            "elements": [{"kind": type(el).kind, **dataclasses.asdict(el)} for el in self.elements],
            "detector_map": dict(self.detector_map),
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "NetworkSpec":
        """Build from a network document; values are not coerced ("false" is rejected, not truthy)."""
        try:
            parsed = NetworkDocument.model_validate(doc)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first["loc"]) or "document"
            error = DomainError if first["type"] in RANGE_ERRORS else StructuralError
            raise error("invalid network document at %s: %s" % (where, first["msg"])) from None
        elements = tuple(
            ELEMENT_KINDS[el.kind](**el.model_dump(exclude={"kind"})) for el in parsed.elements
        )
        return cls(
            modes=tuple(parsed.modes),
            input_mode=parsed.input_mode,
            elements=elements,
            detector_map=parsed.detector_map,
        )


# ---------- propagation ----------

def propagate(spec: NetworkSpec) -> PhotonState:
    """Final state (before readout) for amplitude 1 on the input mode."""
    state = PhotonState.single(spec.modes, spec.input_mode)
    for element in spec.elements:
        state = apply_element(element, state)
    return state


def run_network(spec: NetworkSpec) -> OutcomeDistribution:
    return read_detectors(propagate(spec), spec.detector_map)


# ---------- Mach-Zehnder ----------

def build_mz(
    t1: float,
    t2: float,
    object_present: bool,
    object_arm: Arm | str = Arm.REFLECTED,
    phase: float = 0.0,
) -> NetworkSpec:
    """Two-mode Mach-Zehnder with splitters t1, t2 and a bomb/mine on `object_arm`.

    The absorber element is always placed; `object_present=False` makes it a dud.
    `phase` detunes the interferometer by a phase on the transmitted arm.
    """
    arm = Arm(object_arm)
    elements: list = [BeamSplitterElement(UPPER, LOWER, t1)]
    if phase:
        elements.append(PhaseElement(UPPER, phase))
    elements.append(AbsorberElement(arm.mode, present=object_present))
    elements.append(BeamSplitterElement(UPPER, LOWER, t2))
    return NetworkSpec(
        modes=(UPPER, LOWER),
        input_mode=UPPER,
        elements=tuple(elements),
        detector_map={UPPER: D2, LOWER: D1},
    )


def tune_dark_port(t1: float) -> float:
    """Second-splitter transmission that darkens D2 for a first splitter of transmission t1.

    t1*t2 == r1*r2 under the symmetric convention, i.e. T2 = 1 - T1.
    """
    if not 0.0 <= t1 <= 1.0:
        raise DomainError("T1 must lie in [0, 1], got %r" % t1)
    if t1 in (0.0, 1.0):
        raise DegenerateNetworkError("T1=%r is a pure mirror/window: no interference to tune" % t1)
    return 1.0 - t1


def dark_port_residual(t1: float, t2: float) -> float:
    """P(D2) of the empty interferometer; ~0 when t2 is tuned to t1."""
    return run_network(build_mz(t1, t2, object_present=False))[D2]


def uniform_chain(
    mode_a: str,
    mode_b: str,
    stage: Sequence[Element],
    stages: int,
    input_mode: str,
    detector_map: Mapping[str, str],
) -> NetworkSpec:
    """`stages` repetitions of the same element block over two modes."""
    return NetworkSpec(
        modes=(mode_a, mode_b),
        input_mode=input_mode,
        elements=tuple(stage) * stages,
        detector_map=detector_map,
    )
