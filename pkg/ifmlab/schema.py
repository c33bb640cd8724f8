"""
ifmlab/schema.py

Request and result document models. Every emitted JSON document carries
`schema_version`; a change to any field below bumps SCHEMA_VERSION.
`python -m ifmlab schema` prints the JSON Schema of all documents.
"""

from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictBool, StrictStr, confloat

from .core import EXPLOSION

SCHEMA_VERSION = 1

Protocol = Literal["penrose", "ev", "repeated_ev", "zeno", "xray", "generalized"]


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    protocol: Protocol
    params: Dict[str, Any] = Field(default_factory=dict)
    mode: Literal["exact", "sample"] = "exact"
    trials: int = Field(10000, ge=0)
    seed: int = 0
    output_format: Literal["json", "csv"] = "json"


# ---------- network input ----------

class ElementDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BeamSplitterDocument(ElementDocument):
    kind: Literal["beam_splitter"]
    mode_a: StrictStr
    mode_b: StrictStr
    transmission: confloat(strict=True, ge=0, le=1, allow_inf_nan=False)


class PhaseDocument(ElementDocument):
    kind: Literal["phase"]
    mode: StrictStr
    phase: confloat(strict=True, allow_inf_nan=False)


class AbsorberDocument(ElementDocument):
    kind: Literal["absorber"]
    mode: StrictStr
    present: StrictBool = True
    outcome_label: StrictStr = EXPLOSION


AnyElementDocument = Annotated[
    Union[BeamSplitterDocument, PhaseDocument, AbsorberDocument],
    Field(discriminator="kind"),
]


class NetworkDocument(BaseModel):
    """Input of `ifmlab network`; no type coercion, so "false" is not a bool."""

    model_config = ConfigDict(extra="forbid")

    modes: List[StrictStr]
    input_mode: StrictStr
    elements: List[AnyElementDocument]
    detector_map: Dict[StrictStr, StrictStr]


# ---------- output documents ----------

class Document(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION


class ExactRunDocument(Document):
    protocol: Protocol
    mode: Literal["exact"] = "exact"
    params: Dict[str, Any]
    distribution: Dict[str, float]
    efficiency: float
    single_shot_efficiency: float
    rounds_expected: float
    success_label: str
    failure_label: str
    extra: Dict[str, Any] = Field(default_factory=dict)


class ChiSquareDocument(BaseModel):
    # None when an impossible outcome was observed (infinite statistic)
    statistic: Optional[float]
    dof: int
    passed: bool


class SampleRunDocument(Document):
    protocol: Protocol
    mode: Literal["sample"] = "sample"
    params: Dict[str, Any]
    master_seed: int
    trials: int
    counts: Dict[str, int]
    frequencies: Dict[str, float]
    exact: Dict[str, float]
    chi_square: ChiSquareDocument
    within_4_sigma: bool


class SweepRow(BaseModel):
    value: Any
    distribution: Dict[str, float]
    efficiency: float
    rounds_expected: float


class SweepDocument(Document):
    protocol: Protocol
    param_name: str
    fixed: Dict[str, Any]
    labels: List[str]
    rows: List[SweepRow]


class TuneDocument(Document):
    T1: float
    T2: float
    residual_D2: float


class NetworkResultDocument(Document):
    distribution: Dict[str, float]


DOCUMENTS = {
    "run_exact": ExactRunDocument,
    "run_sample": SampleRunDocument,
    "sweep": SweepDocument,
    "tune": TuneDocument,
    "network": NetworkResultDocument,
}


def json_schemas() -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "request": RunRequest.model_json_schema(),
        "network": NetworkDocument.model_json_schema(),
        "documents": {name: model.model_json_schema() for name, model in DOCUMENTS.items()},
    }
