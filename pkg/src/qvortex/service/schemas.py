"""Pydantic request/response models for the flow service.

These models double as the JSON configuration schema of the CLI: a config
file is a serialized :class:`RunConfig`, and every endpoint payload is
built from the same section models.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..images import AnnulusGeometry, Vortex
from ..flow import DEFAULT_LAURENT_ORDER, VortexSystem
from ..qcalc import TruncationPolicy

Representation = Literal["laurent", "images", "qlog", "theta"]
LimitCase = Literal["cylinder", "disk", "both"]


class GeometrySpec(BaseModel):
    r1: float = Field(gt=0)
    r2: float = Field(gt=0)

    @model_validator(mode="after")
    def _ordered(self):
        if self.r2 <= self.r1:
            raise ValueError("r2 must exceed r1")
        return self

    def to_geometry(self) -> AnnulusGeometry:
        return AnnulusGeometry(r1=self.r1, r2=self.r2)


class VortexSpec(BaseModel):
    x: float
    y: float
    kappa: float

    def to_vortex(self) -> Vortex:
        return Vortex(position=complex(self.x, self.y), strength=self.kappa)


class TruncationSpec(BaseModel):
    max_terms: int = Field(200, ge=1)
    abs_tol: float = Field(1e-12, ge=0)
    image_pairs: int = Field(40, ge=1)

    def to_policy(self) -> TruncationPolicy:
        return TruncationPolicy(max_terms=self.max_terms, abs_tol=self.abs_tol,
                                image_pairs=self.image_pairs)


def build_system(geometry: GeometrySpec, vortices: list[VortexSpec]) -> VortexSystem:
    return VortexSystem(
        geom=geometry.to_geometry(),
        vortices=tuple(v.to_vortex() for v in vortices),
    )


class GridSpec(BaseModel):
    n_r: int = Field(16, ge=1)
    n_theta: int = Field(64, ge=1)


class FieldRequest(BaseModel):
    geometry: GeometrySpec
    vortices: list[VortexSpec] = Field(min_length=1)
    grid: GridSpec = GridSpec()
    representation: Representation = "qlog"
    truncation: TruncationSpec = TruncationSpec()
    laurent_order: int = Field(DEFAULT_LAURENT_ORDER, ge=0)


class FieldPoint(BaseModel):
    x: float
    y: float
    u: float
    v: float
    psi: float


class FieldResponse(BaseModel):
    metadata: dict
    points: list[FieldPoint]


class OrbitRequest(BaseModel):
    geometry: GeometrySpec
    vortices: list[VortexSpec] = Field(min_length=1)
    t_end: float = Field(gt=0)
    dt: float = Field(gt=0)
    truncation: TruncationSpec = TruncationSpec()


class OrbitSummary(BaseModel):
    n_steps: int
    dt: float
    t_final: float
    radius_drift: list[float]
    aborted_reason: Optional[str] = None
    omega: Optional[float] = None
    omega1: Optional[float] = None
    omega2: Optional[float] = None
    period: Optional[float] = None


class OrbitResponse(BaseModel):
    times: list[float]
    positions: list[list[list[float]]]  # [time][vortex] -> [x, y]
    summary: OrbitSummary


class ImagesRequest(BaseModel):
    geometry: GeometrySpec
    vortex: VortexSpec
    depth: int = Field(3, ge=1)


class ImageEntry(BaseModel):
    re: float
    im: float
    sign: int
    generation: int
    family: str


class ImagesResponse(BaseModel):
    images: list[ImageEntry]


class LimitsRequest(BaseModel):
    case: LimitCase = "both"
    q_values: list[float] = Field(default=[1e3, 1e4, 1e5, 1e6], min_length=1)
    n_points: int = Field(20, ge=1)
    truncation: TruncationSpec = TruncationSpec()


class LimitsRow(BaseModel):
    case: str
    q: float
    max_rel_err: float
    omega_rel_err: float


class LimitsResponse(BaseModel):
    rows: list[LimitsRow]
    monotone: bool


class ValidateRequest(BaseModel):
    geometry: GeometrySpec
    vortices: list[VortexSpec] = Field(min_length=1)
    truncation: TruncationSpec = TruncationSpec()
    n_samples: int = Field(50, ge=1)
    samples_per_circle: int = Field(256, ge=4)
    laurent_order: int = Field(DEFAULT_LAURENT_ORDER, ge=0)
    tol: float = Field(1e-8, gt=0)


class ValidateResponse(BaseModel):
    n_samples: int
    laurent_order: int
    image_pairs: int
    discrepancy_laurent_images: float
    discrepancy_images_qlog: float
    discrepancy_laurent_qlog: float
    max_discrepancy: float
    residual_inner: float
    residual_outer: float
    tol: float
    passed: bool


class ErrorPayload(BaseModel):
    kind: Literal["domain", "convergence", "internal"]
    message: str


# --- CLI configuration ------------------------------------------------

class FieldOptions(BaseModel):
    n_r: int = Field(16, ge=1)
    n_theta: int = Field(64, ge=1)
    representation: Representation = "qlog"
    laurent_order: int = Field(DEFAULT_LAURENT_ORDER, ge=0)


class OrbitOptions(BaseModel):
    t_end: float = Field(1.0, gt=0)
    dt: float = Field(1e-3, gt=0)


class ImagesOptions(BaseModel):
    depth: int = Field(3, ge=1)


class LimitsOptions(BaseModel):
    case: LimitCase = "both"
    q_values: list[float] = Field(default=[1e3, 1e4, 1e5, 1e6], min_length=1)
    n_points: int = Field(20, ge=1)


class ValidateOptions(BaseModel):
    n_samples: int = Field(50, ge=1)
    samples_per_circle: int = Field(256, ge=4)
    laurent_order: int = Field(DEFAULT_LAURENT_ORDER, ge=0)
    tol: float = Field(1e-8, gt=0)


class RunConfig(BaseModel):
    """Everything a CLI invocation needs; flags override file values."""

    geometry: Optional[GeometrySpec] = None
    vortices: list[VortexSpec] = []
    truncation: TruncationSpec = TruncationSpec()
    field: FieldOptions = FieldOptions()
    orbit: OrbitOptions = OrbitOptions()
    images: ImagesOptions = ImagesOptions()
    limits: LimitsOptions = LimitsOptions()
    validate_opts: ValidateOptions = Field(default=ValidateOptions(), alias="validate")

    model_config = {"populate_by_name": True}
