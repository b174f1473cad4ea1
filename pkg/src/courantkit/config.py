"""Runtime configuration read from the environment (and an optional .env file)."""

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv


@dataclass(frozen=True)
class Settings:
    """Knobs shared by the CLI, the suites and the scripts."""
    max_degree: int = 2
    workers: int = 1
    seed: int = 0
    samples: int = 0
    log_level: str = "WARNING"


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


def load_settings(**overrides) -> Settings:
    """Build settings from COURANTKIT_* variables.

    Args:
        **overrides: Explicit values (e.g. from CLI flags) that win over the environment

    Returns:
        Settings instance
    """
    load_dotenv()
    values = {
        'max_degree': _int_from_env('COURANTKIT_MAX_DEGREE', Settings.max_degree),
        'workers': _int_from_env('COURANTKIT_WORKERS', Settings.workers),
        'seed': _int_from_env('COURANTKIT_SEED', Settings.seed),
        'samples': _int_from_env('COURANTKIT_SAMPLES', Settings.samples),
        'log_level': os.getenv('COURANTKIT_LOG_LEVEL', Settings.log_level).upper(),
    }
    values.update({k: v for k, v in overrides.items() if v is not None})

    if values['max_degree'] < 0:
        raise ValueError("max_degree must be non-negative")
    if values['workers'] < 1:
        raise ValueError("workers must be at least 1")
    if values['samples'] < 0:
        raise ValueError("samples must be non-negative")
    return Settings(**values)


def configure_logging(settings: Settings) -> None:
    """Route library logging to stderr at the configured level."""
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
