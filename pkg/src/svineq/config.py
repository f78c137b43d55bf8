from __future__ import annotations

import os
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError
from .linalg_core import Tolerances

ENV_PREFIX = "SVINEQ_"


class Settings(BaseModel):
    psd_tol: float = Field(default=1e-10, ge=0.0, allow_inf_nan=False)
    unitary_tol: float = Field(default=1e-10, ge=0.0, allow_inf_nan=False)
    recon_tol: float = Field(default=1e-9, ge=0.0, allow_inf_nan=False)
    margin_tol: float = Field(default=1e-8, ge=0.0, allow_inf_nan=False)
    clip_tol: float = Field(default=1e-10, ge=0.0, allow_inf_nan=False)
    solver: Literal["jacobi", "lapack"] = Field(default="jacobi")

    workers: int = Field(default=1, ge=1)
    seed: int = Field(default=42)
    trials: int = Field(default=1000, ge=1)
    dims: str = Field(default="1-6")

    def tolerances(self, **overrides: float | str) -> Tolerances:
        values = {
            "psd_tol": self.psd_tol,
            "unitary_tol": self.unitary_tol,
            "recon_tol": self.recon_tol,
            "margin_tol": self.margin_tol,
            "clip_tol": self.clip_tol,
            "solver": self.solver,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Tolerances(**values)


def _env(name: str) -> str | None:
    return os.getenv(ENV_PREFIX + name, "").strip() or None


def load_settings() -> Settings:
    load_dotenv(override=False)

    raw: dict[str, str] = {}
    for field_name in Settings.model_fields:
        value = _env(field_name.upper())
        if value is not None:
            raw[field_name] = value.lower() if field_name == "solver" else value

    try:
        return Settings(**raw)
    except ValidationError as exc:
        bad = ", ".join(ENV_PREFIX + str(err["loc"][0]).upper() for err in exc.errors())
        raise ConfigError(f"Invalid configuration in {bad}: {exc}") from exc
