"""Configuration helpers for the alpha-fidelity toolkit."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Tolerances:
    """Numeric thresholds shared by the library, the tests and the CLI."""

    hermitian: float = 1e-10
    state: float = 1e-12
    psd: float = 1e-10
    clip: float = 1e-14
    bloch: float = 1e-12
    orthogonal: float = 1e-12
    quotient_guard: float = 1e-10
    cptp: float = 1e-9
    kl_eigen: float = 1e-14
    kl_weight: float = 1e-12
    pure_delegation: float = 1e-9
    singular: float = 1e-9
    flatness: float = 1e-12
    crossing: float = 1e-4
    violation: float = 1e-9
    root: float = 1e-12


TOLERANCES = Tolerances()


@dataclass(slots=True)
class Settings:
    """Runtime settings with environment overrides."""

    starts: int = 32
    max_iters: int = 400
    xtol: float = 1e-9
    ftol: float = 1e-10
    seed: int = 0
    canonical_starts: bool = True
    jc_truncation: int = 10
    time_points: int = 256
    refine_iters: int = 40
    log_level: str = "WARNING"

    @classmethod
    def load(cls) -> "Settings":
        """Construct settings from environment variables when available."""

        defaults = cls()
        return cls(
            starts=int(os.environ.get("ALPHA_FID_STARTS", str(defaults.starts))),
            max_iters=int(
                os.environ.get("ALPHA_FID_MAX_ITERS", str(defaults.max_iters))
            ),
            xtol=float(os.environ.get("ALPHA_FID_XTOL", str(defaults.xtol))),
            ftol=float(os.environ.get("ALPHA_FID_FTOL", str(defaults.ftol))),
            seed=int(os.environ.get("ALPHA_FID_SEED", str(defaults.seed))),
            canonical_starts=_env_flag(
                "ALPHA_FID_CANONICAL_STARTS", defaults.canonical_starts
            ),
            jc_truncation=int(
                os.environ.get("ALPHA_FID_JC_TRUNCATION", str(defaults.jc_truncation))
            ),
            time_points=int(
                os.environ.get("ALPHA_FID_TIME_POINTS", str(defaults.time_points))
            ),
            refine_iters=int(
                os.environ.get("ALPHA_FID_REFINE_ITERS", str(defaults.refine_iters))
            ),
            log_level=os.environ.get("ALPHA_FID_LOG_LEVEL", defaults.log_level).upper(),
        )


def _env_flag(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() in {"1", "true", "yes", "on"}


__all__ = ["Settings", "Tolerances", "TOLERANCES"]
