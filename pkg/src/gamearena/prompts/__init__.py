"""Prompt templates and the generation parser."""

from gamearena.prompts.adapter import (
    COT_VARIANTS,
    STYLES,
    IncompleteStreamError,
    MissingVariableError,
    ParseResult,
    PromptBundle,
    compose,
    majority_vote,
    parse_action,
    record_validity,
)

__all__ = [
    "COT_VARIANTS", "STYLES", "IncompleteStreamError", "MissingVariableError", "ParseResult",
    "PromptBundle", "compose", "majority_vote", "parse_action", "record_validity",
]
