"""Configuration settings for the web linearizer."""

from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple
import json

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ConfigurationError


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    # Application Settings
    environment: str = Field("development")
    debug: bool = Field(False)
    log_level: str = Field("INFO")

    # Tower cache
    cache_dir: str = Field(
        ".cache/web_linearizer",
        validation_alias=AliasChoices("WEB_LINEARIZER_CACHE_DIR", "cache_dir"),
    )

    # Numeric evaluation
    float_precision_bits: int = Field(128, ge=53)
    zero_tolerance: float = Field(1e-9, gt=0)
    gcd_gap_ratio: float = Field(1e3, gt=1)

    # Integration grid
    grid_h: float = Field(0.01, gt=0)
    grid_n: int = Field(21, ge=1)
    d_threshold: float = Field(1e-10, gt=0)
    residual_tolerance: float = Field(1e-6, gt=0)
    verify_tolerance: float = Field(1e-3, gt=0)

    # Neighborhood sampling for radical claims
    neighborhood_radius: float = Field(0.1, gt=0)
    neighborhood_samples: int = Field(5, ge=0)

    # Tower identities checked under random exact bindings
    identity_trials: int = Field(20, ge=1)
    max_square_passes_factor: int = Field(2, ge=1)


# Global settings instance
settings = Settings()


def parse_rational(text: str) -> Fraction:
    """Parse '3', '-1/2' or '0.25' into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigurationError("rational", text, str(e))


def parse_point(text: str) -> Tuple[Fraction, Fraction]:
    """Parse 'x0,y0' into a pair of Fractions."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigurationError("point", text, "expected two comma-separated rationals")
    return parse_rational(parts[0]), parse_rational(parts[1])


class JobConfig(BaseModel):
    """One pipeline job: the web, the point and the numeric knobs."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    f: str
    point: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    mode: str = "exact"
    grid_h: Optional[float] = None
    grid_n: Optional[int] = None
    tol: Optional[float] = None
    cache_dir: Optional[str] = None
    s0: Optional[Fraction] = None
    t0: Fraction = Fraction(0)
    z0: Fraction = Fraction(0)

    @field_validator("point", mode="before")
    @classmethod
    def _coerce_point(cls, value):
        if isinstance(value, str):
            return parse_point(value)
        return tuple(Fraction(str(c)) if not isinstance(c, Fraction) else c for c in value)

    @field_validator("s0", "t0", "z0", mode="before")
    @classmethod
    def _coerce_rational(cls, value):
        if value is None or isinstance(value, Fraction):
            return value
        return parse_rational(str(value))

    @field_validator("mode")
    @classmethod
    def _check_mode(cls, value):
        if value not in ("exact", "float"):
            raise ValueError("mode must be 'exact' or 'float'")
        return value

    @field_validator("grid_n")
    @classmethod
    def _check_grid_n(cls, value):
        if value is not None and (value < 1 or value % 2 == 0):
            raise ValueError("grid_n must be a positive odd integer")
        return value

    @classmethod
    def from_file(cls, path: str, **overrides) -> "JobConfig":
        """Load a job from a JSON file mirroring the fields; flags override."""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError("config_file", path, str(e))
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def pipeline(self) -> "PipelineConfig":
        return PipelineConfig(
            grid_h=self.grid_h,
            grid_n=self.grid_n,
            tolerance=self.tol,
            cache_dir=self.cache_dir,
        )

    def to_dict(self) -> dict:
        """Convert configuration to dictionary."""
        return {
            "f": self.f,
            "point": [str(c) for c in self.point],
            "mode": self.mode,
            "grid_h": self.grid_h,
            "grid_n": self.grid_n,
            "tol": self.tol,
            "cache_dir": self.cache_dir,
            "s0": None if self.s0 is None else str(self.s0),
            "t0": str(self.t0),
            "z0": str(self.z0),
        }


class PipelineConfig:
    """Resolved numeric parameters for one run of the pipeline."""

    def __init__(
        self,
        grid_h: float = None,
        grid_n: int = None,
        tolerance: float = None,
        cache_dir: str = None,
    ):
        self.grid_h = grid_h or settings.grid_h
        self.grid_n = grid_n or settings.grid_n
        self.zero_tolerance = tolerance or settings.zero_tolerance
        self.cache_dir = cache_dir or settings.cache_dir
        self.d_threshold = settings.d_threshold
        self.residual_tolerance = settings.residual_tolerance
        self.verify_tolerance = settings.verify_tolerance
        self.neighborhood_radius = Fraction(str(settings.neighborhood_radius))
        self.neighborhood_samples = settings.neighborhood_samples
        self.precision_bits = settings.float_precision_bits

    def to_dict(self) -> dict:
        """Convert configuration to dictionary."""
        return {
            "grid_h": self.grid_h,
            "grid_n": self.grid_n,
            "zero_tolerance": self.zero_tolerance,
            "cache_dir": self.cache_dir,
            "d_threshold": self.d_threshold,
            "residual_tolerance": self.residual_tolerance,
            "verify_tolerance": self.verify_tolerance,
            "neighborhood_radius": str(self.neighborhood_radius),
            "neighborhood_samples": self.neighborhood_samples,
            "precision_bits": self.precision_bits,
        }
