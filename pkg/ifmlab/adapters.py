from typing import Any, Dict, Literal, Mapping, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .core import EXPLOSION
from .errors import UsageError
from .generalized import CHI, CHI_PERP, PSI, GeneralizedIfmConfig, mz_as_generalized_ifm, run_generalized_ifm
from .networks import D1, D2, Arm
from .protocols import (
    ABSORBED,
    LEFT,
    OBJECT,
    RIGHT,
    SAFE,
    CavityConfig,
    ProtocolOutcome,
    ZenoConfig,
    efficiency,
    ev_mine_test,
    penrose_bomb_test,
    repeated_ev,
    xray_protocol,
    zeno_ifm,
)


# ---------- parameter models ----------

class ProtocolParams(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MineParams(ProtocolParams):
    R: float = Field(gt=0, lt=1)
    present: bool = True
    arm: Arm = Arm.REFLECTED


class PenroseParams(MineParams):
    R: float = Field(0.5, gt=0, lt=1)


class RepeatedParams(ProtocolParams):
    R: float = Field(gt=0, lt=1)


class ZenoParams(ProtocolParams):
    N: int = Field(ge=1)
    present: bool = True


class XrayParams(ProtocolParams):
    transmission: float = Field(0.001, gt=0, lt=1)
    bounces: int = Field(50, ge=0)
    absorber: bool = True


class GeneralizedParams(ProtocolParams):
    alpha: Optional[str] = None
    beta: Optional[str] = None
    R: Optional[float] = Field(None, ge=0, le=1)
    system: Literal["psi", "psi_perp"] = PSI

    @field_validator("alpha", "beta", mode="before")
    @classmethod
    def _complex_literal(cls, v):
        if v is None:
            return v
        try:
            complex(str(v).replace(" ", ""))
        except ValueError:
            raise ValueError("not a complex number: %r" % v) from None
        return str(v).replace(" ", "")

    @model_validator(mode="after")
    def _one_preparation(self):
        explicit = self.alpha is not None or self.beta is not None
        if explicit and self.R is not None:
            raise ValueError("give either alpha and beta or R, not both")
        if not explicit and self.R is None:
            raise ValueError("alpha and beta (or R) are required")
        if explicit and (self.alpha is None or self.beta is None):
            raise ValueError("alpha and beta must be given together")
        return self

    def config(self) -> GeneralizedIfmConfig:
        if self.R is not None:
            base = mz_as_generalized_ifm(self.R)
            alpha, beta = base.alpha, base.beta
        else:
            alpha, beta = complex(self.alpha), complex(self.beta)
        return GeneralizedIfmConfig(alpha, beta, system_is_psi=self.system == PSI)


# ---------- adapters ----------

class BaseAdapter:
    """One runnable protocol: validates its params and produces a ProtocolOutcome."""

    name: str = ""
    params_model: Type[ProtocolParams] = ProtocolParams
    labels: Tuple[str, ...] = ()

    def validate(self, params: Mapping[str, Any]) -> ProtocolParams:
        return self.params_model.model_validate(dict(params))

    def call(self, params: ProtocolParams) -> ProtocolOutcome:
        raise NotImplementedError()

    def extra(self, params: ProtocolParams) -> Dict[str, Any]:
        return {}


class MineAdapter(BaseAdapter):
    name = "ev"
    params_model = MineParams
    labels = (D1, D2, EXPLOSION)

    def call(self, params: MineParams) -> ProtocolOutcome:
        return ev_mine_test(params.R, params.present, params.arm)


class PenroseAdapter(MineAdapter):
    """Same arithmetic as the mine test; the bomb's mirror is one of the interferometer mirrors."""

    name = "penrose"
    params_model = PenroseParams

    def call(self, params: PenroseParams) -> ProtocolOutcome:
        return penrose_bomb_test(params.present, params.arm, params.R)


class RepeatedAdapter(BaseAdapter):
    name = "repeated_ev"
    params_model = RepeatedParams
    labels = (D2, EXPLOSION)

    def call(self, params: RepeatedParams) -> ProtocolOutcome:
        return repeated_ev(params.R)


class ZenoAdapter(BaseAdapter):
    name = "zeno"
    params_model = ZenoParams
    labels = (EXPLOSION, OBJECT, SAFE)

    def call(self, params: ZenoParams) -> ProtocolOutcome:
        return zeno_ifm(ZenoConfig(params.N, params.present))


class XrayAdapter(BaseAdapter):
    name = "xray"
    params_model = XrayParams
    labels = (ABSORBED, LEFT, RIGHT)

    def call(self, params: XrayParams) -> ProtocolOutcome:
        return xray_protocol(CavityConfig(params.transmission, params.bounces, params.absorber))


class GeneralizedAdapter(BaseAdapter):
    name = "generalized"
    params_model = GeneralizedParams
    labels = (CHI, CHI_PERP, EXPLOSION)

    def call(self, params: GeneralizedParams) -> ProtocolOutcome:
        result = run_generalized_ifm(params.config())
        return ProtocolOutcome(
            distribution=result.probs,
            efficiency=efficiency(result.probs, CHI_PERP, EXPLOSION),
            single_shot_efficiency=result.probs[CHI_PERP],
            success_label=CHI_PERP,
            failure_label=EXPLOSION,
        )

    def extra(self, params: GeneralizedParams) -> Dict[str, Any]:
        cfg = params.config()
        return {
            "alpha": str(cfg.alpha),
            "beta": str(cfg.beta),
            "post_system_state_on_chi_perp": run_generalized_ifm(cfg).post_system_state_on_chi_perp,
        }


ADAPTERS = {cls.name: cls for cls in (PenroseAdapter, MineAdapter, RepeatedAdapter, ZenoAdapter, XrayAdapter, GeneralizedAdapter)}
PROTOCOLS = tuple(ADAPTERS)


def get_adapter(protocol: str) -> BaseAdapter:
    protocol = protocol.lower()
    if protocol not in ADAPTERS:
        raise UsageError("Unknown protocol: %s" % protocol)
    return ADAPTERS[protocol]()
