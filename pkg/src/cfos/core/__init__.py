# src/cfos/core/__init__.py

"""cfos core: logging, environment, configuration and reports"""

from .config import (
    BaselineSpec,
    EvaluationSpec,
    GenerationParams,
    RunConfig,
    SynthSpec,
)
from .logger import get_logger, init_logger
from .reports import TOOL_VERSION

__all__ = [
    'BaselineSpec',
    'EvaluationSpec',
    'GenerationParams',
    'RunConfig',
    'SynthSpec',
    'TOOL_VERSION',
    'get_logger',
    'init_logger',
]
