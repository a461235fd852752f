from .assets import AssetStore, asset_id_for, reference_tone
from .events import EventLog
from .orchestrate import (
    build_production_script,
    cast_characters,
    default_project_id,
    preproduce,
    run_pipeline,
)
from .project import EngineConfig, Project, open_project

__all__ = [
    "AssetStore",
    "EngineConfig",
    "EventLog",
    "Project",
    "asset_id_for",
    "build_production_script",
    "cast_characters",
    "default_project_id",
    "open_project",
    "preproduce",
    "reference_tone",
    "run_pipeline",
]
