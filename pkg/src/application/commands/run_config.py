"""Run configuration shared by every command and the domain descriptor grammar.

Descriptors:
    box:L1[xL2[xL3[xL4]]]   axis-parallel box [0, L1] x ... x [0, Ld]
    disk:R                  disk of radius R centred at the origin
    ball3:R                 3D ball of radius R
    poly:FILE               polygon, one "x y" vertex per line
    mask:FILE               node raster, header "nx ny h" then ny rows of 0/1
    halfspace               {x > 0} on the line (Monte Carlo only)
"""
from dataclasses import dataclass
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.domain.exceptions import DescriptorError
from src.domain.value_objects import Convention, HeatGapParams, MCConfig

FILE_KINDS = ("poly", "mask")


@dataclass(frozen=True)
class DomainDescriptor:
    """Parsed domain descriptor"""
    kind: str
    text: str
    lengths: Tuple[float, ...] = ()
    radius: Optional[float] = None
    path: Optional[str] = None

    @property
    def analytic(self) -> bool:
        return self.kind in ("box", "disk", "ball3")


def _positive(token: str, text: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DescriptorError(f"Invalid number '{token}' in domain descriptor '{text}'") from None
    if not value > 0:
        raise DescriptorError(f"Domain descriptor '{text}' needs positive sizes")
    return value


def parse_descriptor(text: str) -> DomainDescriptor:
    """Parse a domain descriptor string; raises DescriptorError on bad input."""
    if text is None or not text.strip():
        raise DescriptorError("Domain descriptor is required")
    text = text.strip()
    if text == "halfspace":
        return DomainDescriptor(kind="halfspace", text=text)
    kind, sep, rest = text.partition(":")
    if not sep or not rest:
        raise DescriptorError(f"Domain descriptor '{text}' is not of the form kind:value")
    if kind == "box":
        lengths = tuple(_positive(token, text) for token in rest.split("x"))
        if len(lengths) > 4:
            raise DescriptorError(f"Boxes have at most 4 sides, got '{text}'")
        return DomainDescriptor(kind=kind, text=text, lengths=lengths)
    if kind in ("disk", "ball3"):
        return DomainDescriptor(kind=kind, text=text, radius=_positive(rest, text))
    if kind in FILE_KINDS:
        return DomainDescriptor(kind=kind, text=text, path=rest)
    raise DescriptorError(f"Unknown domain kind '{kind}' in '{text}'")


class RunConfig(BaseModel):
    """Parameters of one command run"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    domain: str
    n: int = Field(default=100, ge=1)
    method: Literal["exact", "grid"] = "exact"
    grid_h: float = Field(default=1.0 / 64.0, gt=0)
    eps: List[float] = Field(default_factory=lambda: [0.05])
    t: Optional[List[float]] = None
    content_t: Optional[List[float]] = None
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    output_format: Literal["json", "csv"] = "json"
    output: Optional[str] = None
    convention: Optional[Convention] = None
    paths: int = Field(default=100_000, ge=1000)
    dt: Optional[float] = Field(default=None, gt=0)
    bridge: bool = True
    c1: float = 1.0
    c2: float = 100.0
    c_cutoff: float = Field(default=2.0, gt=0)
    alpha: float = Field(default=0.5, gt=0)
    interval: Optional[float] = Field(default=None, gt=0)
    residual_tol: float = Field(default=1e-8, gt=0, lt=1)
    threads: int = Field(default=1, ge=1)
    chunk_size: int = Field(default=4096, ge=1)

    @field_validator("domain")
    @classmethod
    def _check_domain(cls, value: str) -> str:
        try:
            parse_descriptor(value)
        except DescriptorError as error:
            raise ValueError(str(error)) from None
        return value.strip()

    @field_validator("eps", "t", "content_t")
    @classmethod
    def _check_positive_list(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is None:
            return value
        if not value:
            raise ValueError("List must not be empty")
        if any(not x > 0 for x in value):
            raise ValueError("List entries must be positive")
        return sorted(value)

    @property
    def descriptor(self) -> DomainDescriptor:
        return parse_descriptor(self.domain)

    @property
    def gap_params(self) -> HeatGapParams:
        return HeatGapParams(c1=self.c1, c2=self.c2)

    def mc_config(self) -> MCConfig:
        return MCConfig(n_paths=self.paths, dt=self.dt, seed=self.seed, bridge_correction=self.bridge,
                        chunk_size=self.chunk_size, threads=self.threads)
