"""
Schemas module - run configuration validation and the run summary layout.
"""

from .input import ConfigSchema, validate_config
from .output import (
    CRITERIA,
    CriterionResult,
    RunSummary,
    SummarySchema,
    get_summary_template,
)

__all__ = [
    # Input schemas
    "ConfigSchema",
    "validate_config",
    # Output schemas
    "CRITERIA",
    "CriterionResult",
    "RunSummary",
    "SummarySchema",
    "get_summary_template",
]
