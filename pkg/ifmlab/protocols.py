"""
ifmlab/protocols.py

Bomb/mine testing procedures built on top of `networks`, with their figures of merit.

- ev_mine_test / penrose_bomb_test: one photon through a dark-port-tuned
  Mach-Zehnder with the object on one arm. Success is a D2 click.
- repeated_ev: re-send a fresh photon after every D1 click until D2 (success)
  or an explosion (failure). Rounds are i.i.d.
- zeno_ifm: N coupling stages, each a rotation by pi/(2N) from a "safe" mode
  into the object mode followed by the absorber. The chain is the standard
  N-stage reconstruction of the Zeno scheme; its success probability
  cos^(2N)(pi/2N) goes to 1 as N grows.
- xray_cavity: two cavity halves coupled by a weakly transmitting mirror,
  one coherent rotation per bounce, absorber on the right half.

Efficiency everywhere is P(success) / (P(success) + P(failure)); the bare
single-shot success probability is reported alongside as
`single_shot_efficiency` (25% for the symmetric mine test).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import EXPLOSION, NORM_TOL, AbsorberElement, BeamSplitterElement, OutcomeDistribution
from .errors import DegenerateNetworkError, DomainError
from .networks import D1, D2, Arm, build_mz, run_network, tune_dark_port, uniform_chain

SAFE = "safe"
OBJECT = "object"
LEFT = "left"
RIGHT = "right"
ABSORBED = "absorbed"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class ProtocolOutcome:
    distribution: OutcomeDistribution
    efficiency: float
    single_shot_efficiency: float
    rounds_expected: float = 1.0
    success_label: str = D2
    failure_label: str = EXPLOSION

    def __getitem__(self, label: str) -> float:
        return self.distribution[label]


@dataclass(frozen=True)
class ZenoConfig:
    cycles: int
    object_present: bool = True

    def __post_init__(self):
        if isinstance(self.cycles, bool) or not isinstance(self.cycles, int) or self.cycles < 1:
            raise DomainError("zeno cycles N must be an integer >= 1, got %r" % (self.cycles,))


@dataclass(frozen=True)
class CavityConfig:
    coupler_transmission: float = 0.001
    bounces: int = 50
    absorber_present: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.coupler_transmission) and 0.0 < self.coupler_transmission < 1.0):
            raise DomainError("coupler transmission must lie in (0, 1), got %r" % self.coupler_transmission)
        if isinstance(self.bounces, bool) or not isinstance(self.bounces, int) or self.bounces < 0:
            raise DomainError("bounces must be an integer >= 0, got %r" % (self.bounces,))


def efficiency(dist: OutcomeDistribution, success_label: str, failure_label: str) -> float:
    """P(success) / (P(success) + P(failure)); 0 when neither can happen.

    Probabilities at or below NORM_TOL (1e-12) are numerically zero here, the
    same tolerance a tuned dark port is held to: a dud leaves ~1e-17 on D2 and
    must read 0, not a certain success. So success + failure <= NORM_TOL
    returns 0, and above it the plain ratio is returned.
    """
    success, failure = dist[success_label], dist[failure_label]
    if success + failure <= NORM_TOL:
        return 0.0
    return success / (success + failure)


def _outcome(dist: OutcomeDistribution, success: str, failure: str, rounds: float = 1.0) -> ProtocolOutcome:
    return ProtocolOutcome(
        distribution=dist,
        efficiency=efficiency(dist, success, failure),
        single_shot_efficiency=dist[success],
        rounds_expected=rounds,
        success_label=success,
        failure_label=failure,
    )


def _check_reflectivity(R: float) -> None:
    if not (math.isfinite(R) and 0.0 <= R <= 1.0):
        raise DomainError("reflectivity R must lie in (0, 1), got %r" % R)
    if R in (0.0, 1.0):
        raise DegenerateNetworkError("R=%r leaves a single arm: no interference" % R)


# ---------- Mach-Zehnder protocols ----------

def ev_mine_test(R: float, object_present: bool = True, arm: Arm | str = Arm.REFLECTED) -> ProtocolOutcome:
    _check_reflectivity(R)
    t1 = 1.0 - R
    dist = run_network(build_mz(t1, tune_dark_port(t1), object_present, arm))
    return _outcome(dist, D2, EXPLOSION)


def penrose_bomb_test(object_present: bool = True, arm: Arm | str = Arm.REFLECTED, R: float = 0.5) -> ProtocolOutcome:
    """The bomb's own mirror replaces one interferometer mirror.

    The arithmetic is the mine test's; only the framing differs (the mine
    blocks an arm instead of being one of its mirrors).
    """
    return ev_mine_test(R, object_present, arm)


def repeated_ev(R: float) -> ProtocolOutcome:
    """Asymptotic outcome of repeating the mine test on every D1 click.

    The distribution is over the two terminating outcomes, {D2, explosion};
    efficiency is (1 - R) / (2 - R) and approaches 1/2 as R -> 0.
    """
    single = ev_mine_test(R, object_present=True)
    p_success, p_fail, p_again = single[D2], single[EXPLOSION], single[D1]
    eta = p_success / (p_success + p_fail)
    dist = OutcomeDistribution({D2: eta, EXPLOSION: 1.0 - eta})
    return ProtocolOutcome(
        distribution=dist,
        efficiency=eta,
        single_shot_efficiency=p_success,
        rounds_expected=1.0 / (1.0 - p_again),
        success_label=D2,
        failure_label=EXPLOSION,
    )


def repeated_ev_rounds(R: float, max_rounds: int) -> OutcomeDistribution:
    """Distribution after at most `max_rounds` rounds; `undecided` = P(D1)^max_rounds."""
    if max_rounds < 0:
        raise DomainError("max_rounds must be >= 0, got %r" % max_rounds)
    single = ev_mine_test(R, object_present=True)
    success = fail = 0.0
    undecided = 1.0
    for _ in range(max_rounds):
        success += undecided * single[D2]
        fail += undecided * single[EXPLOSION]
        undecided *= single[D1]
    return OutcomeDistribution({D2: success, EXPLOSION: fail, UNDECIDED: undecided})


def reflectivity_for_efficiency(eta: float) -> float:
    """First-splitter reflectivity at which repeated_ev reaches efficiency `eta`."""
    if not 0.0 < eta < 0.5:
        raise DomainError("repeated-protocol efficiency must lie in (0, 1/2), got %r" % eta)
    return (1.0 - 2.0 * eta) / (1.0 - eta)


# ---------- Zeno chain ----------

def zeno_ifm(cfg: ZenoConfig) -> ProtocolOutcome:
    theta = math.pi / (2 * cfg.cycles)
    stage = (
        BeamSplitterElement.from_angle(SAFE, OBJECT, theta),
        AbsorberElement(OBJECT, present=cfg.object_present),
    )
    spec = uniform_chain(SAFE, OBJECT, stage, cfg.cycles, input_mode=SAFE,
                         detector_map={SAFE: SAFE, OBJECT: OBJECT})
    return _outcome(run_network(spec), SAFE, EXPLOSION)


# ---------- X-ray cavity ----------

def xray_cavity(cfg: CavityConfig) -> OutcomeDistribution:
    """{left, right, absorbed} after `bounces` passes over the coupling mirror."""
    stage = (
        BeamSplitterElement(LEFT, RIGHT, 1.0 - cfg.coupler_transmission),
        AbsorberElement(RIGHT, present=cfg.absorber_present, outcome_label=ABSORBED),
    )
    spec = uniform_chain(LEFT, RIGHT, stage, cfg.bounces, input_mode=LEFT,
                         detector_map={LEFT: LEFT, RIGHT: RIGHT})
    dist = run_network(spec)
    return OutcomeDistribution({LEFT: dist[LEFT], RIGHT: dist[RIGHT], ABSORBED: dist[ABSORBED]})


def xray_protocol(cfg: CavityConfig) -> ProtocolOutcome:
    """xray_cavity scored as a detection: the photon staying left flags the absorber."""
    return _outcome(xray_cavity(cfg), LEFT, ABSORBED)
