from .lats import (
    ActionEvaluator,
    ActionGenerator,
    CandidateAction,
    Reflector,
    SearchParams,
    Trajectory,
    backpropagate,
    blend_value,
    consistency_key,
    lats_search,
    self_consistency,
    uct,
)
from .lesson import LessonPlan, compile_lesson
from .materials import MaterialDigest, ingest_materials, register_reader, supported_kinds
from .strategist import build_strategist
from .web import FixtureSearchProvider, RemoteSearchProvider, SearchHit, SearchProvider

__all__ = [
    "ActionEvaluator",
    "ActionGenerator",
    "CandidateAction",
    "FixtureSearchProvider",
    "LessonPlan",
    "MaterialDigest",
    "Reflector",
    "RemoteSearchProvider",
    "SearchHit",
    "SearchParams",
    "SearchProvider",
    "Trajectory",
    "backpropagate",
    "blend_value",
    "build_strategist",
    "compile_lesson",
    "consistency_key",
    "ingest_materials",
    "lats_search",
    "register_reader",
    "self_consistency",
    "supported_kinds",
    "uct",
]
