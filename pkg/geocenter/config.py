"""
⚙️ GEOCENTER CONFIGURATION
Loads geocenter_config.yaml into frozen settings objects.

Lookup order for the config file:
- explicit path handed to load_settings()
- $GEOCENTER_CONFIG (a .env file in the working directory is honoured)
- ./geocenter_config.yaml
- built-in defaults, which match the shipped YAML

$GEOCENTER_LOG overrides logging.level.
"""

import logging
import os
from dataclasses import dataclass, field, fields
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar

import yaml
from dotenv import load_dotenv

load_dotenv()
logger = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "geocenter_config.yaml"

T = TypeVar("T")


@dataclass(frozen=True)
class Tolerances:
    """Length, angle and test tolerances"""

    eps_len: float = 1e-9
    eps_ang: float = 1e-9
    eps_special: float = 1e-7
    eps_test: float = 1e-4

    def length(self, scale: float = 1.0) -> float:
        # relative where magnitudes allow
        return self.eps_len * max(1.0, abs(scale))


@dataclass(frozen=True)
class GeodesicSettings:
    rel_tol: float = 1e-9
    path_cap: int = 64


@dataclass(frozen=True)
class FarthestSettings:
    local_max_samples: int = 16
    local_max_radius: float = 1e-8


@dataclass(frozen=True)
class CandidateSettings:
    tuple_budget: int = 10_000_000
    seed_grid: int = 12
    newton_seeds: int = 8
    near_margin: float = 2.0
    max_group: int = 6
    edge_seeds: int = 3


@dataclass(frozen=True)
class CenterSettings:
    refine_max_iter: int = 200
    refine_seeds: int = 3
    argmin_rel_tol: float = 1e-9
    threads: int = 1


@dataclass(frozen=True)
class OracleSettings:
    default_grid: float = 0.05


@dataclass(frozen=True)
class RenderSettings:
    width: int = 800
    height: int = 800
    margin: float = 0.05
    stroke_width: float = 1.5
    fan_radius: float = 0.08


@dataclass(frozen=True)
class Settings:
    tolerances: Tolerances = field(default_factory=Tolerances)
    geodesic: GeodesicSettings = field(default_factory=GeodesicSettings)
    farthest: FarthestSettings = field(default_factory=FarthestSettings)
    candidates: CandidateSettings = field(default_factory=CandidateSettings)
    center: CenterSettings = field(default_factory=CenterSettings)
    oracle: OracleSettings = field(default_factory=OracleSettings)
    render: RenderSettings = field(default_factory=RenderSettings)
    log_level: str = "INFO"


def _section(cls: Type[T], raw: Optional[Dict[str, Any]], name: str) -> T:
    if not raw:
        return cls()
    known = {f.name: f for f in fields(cls)}
    values = {}
    for key, value in raw.items():
        if key not in known:
            logger.warning("⚠️ Unknown config key %s.%s ignored", name, key)
            continue
        default = getattr(cls(), key)
        values[key] = type(default)(value)
    return cls(**values)


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r") as f:
            return yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.error("❌ Config file not found: %s", path)
        raise
    except yaml.YAMLError as e:
        logger.error("❌ Error parsing YAML config: %s", e)
        raise


def resolve_config_path(path: Optional[str] = None) -> Optional[Path]:
    if path:
        return Path(path)
    env_path = os.getenv("GEOCENTER_CONFIG")
    if env_path:
        return Path(env_path)
    local = Path.cwd() / DEFAULT_CONFIG_NAME
    if local.exists():
        return local
    return None


def settings_from_dict(raw: Dict[str, Any]) -> Settings:
    """Build Settings from an already parsed YAML mapping"""
    log_section = raw.get("logging") or {}
    return Settings(
        tolerances=_section(Tolerances, raw.get("tolerances"), "tolerances"),
        geodesic=_section(GeodesicSettings, raw.get("geodesic"), "geodesic"),
        farthest=_section(FarthestSettings, raw.get("farthest"), "farthest"),
        candidates=_section(CandidateSettings, raw.get("candidates"), "candidates"),
        center=_section(CenterSettings, raw.get("center"), "center"),
        oracle=_section(OracleSettings, raw.get("oracle"), "oracle"),
        render=_section(RenderSettings, raw.get("render"), "render"),
        log_level=os.getenv("GEOCENTER_LOG", str(log_section.get("level", "INFO"))).upper(),
    )


def load_settings(path: Optional[str] = None) -> Settings:
    config_path = resolve_config_path(path)
    if config_path is None:
        logger.debug("No config file found, using defaults")
        return settings_from_dict({})
    logger.info("✅ Loaded config from %s", config_path)
    return settings_from_dict(_read_yaml(config_path))


_active: Optional[Settings] = None


@lru_cache(maxsize=1)
def _file_settings() -> Settings:
    return load_settings()


def get_settings() -> Settings:
    return _active if _active is not None else _file_settings()


def set_settings(settings: Optional[Settings]) -> None:
    """Make settings current for the process; None goes back to the config file"""
    global _active
    _active = settings


def configure_logging(settings: Optional[Settings] = None) -> None:
    settings = settings or get_settings()
    logging.basicConfig(level=getattr(logging, settings.log_level, logging.INFO))
